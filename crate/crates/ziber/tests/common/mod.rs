//! Shared helpers for the integration-test targets: a quadrature-based
//! normal-CDF oracle that is independent of the library's erf path, a
//! finite-difference gradient, random model instances, and a tiny CSV
//! reader for the fishing-style datasets.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use ziber::links::LinkKind;
use ziber::model::{self, Beta, Dataset};
use ziber::rng::SplitMix64;

/// Print one `[PASS]`/`[FAIL]` line for an acceptance criterion and panic on
/// failure so the line doubles as the test verdict.
pub fn check(name: &str, pass: bool, detail: &str) {
    let tag = if pass { "[PASS]" } else { "[FAIL]" };
    println!("{tag} {name}: {detail}");
    assert!(pass, "{name}: {detail}");
}

/// Path to the shipped synthetic fishing dataset, relative to this crate.
pub fn stand_in_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/fish_synthetic.csv")
}

fn std_normal_pdf(t: f64) -> f64 {
    (-(t * t) / 2.0).exp() / (2.0 * PI).sqrt()
}

/// One adaptive-Simpson refinement step with Richardson extrapolation;
/// the interval endpoints travel as `(abscissa, integrand value)` pairs.
fn simpson_rec(
    f: fn(f64) -> f64,
    left: (f64, f64),
    mid: (f64, f64),
    right: (f64, f64),
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let lm = (0.5 * (left.0 + mid.0), f(0.5 * (left.0 + mid.0)));
    let rm = (0.5 * (mid.0 + right.0), f(0.5 * (mid.0 + right.0)));
    let s_left = (mid.0 - left.0) / 6.0 * (left.1 + 4.0 * lm.1 + mid.1);
    let s_right = (right.0 - mid.0) / 6.0 * (mid.1 + 4.0 * rm.1 + right.1);
    let delta = s_left + s_right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return s_left + s_right + delta / 15.0;
    }
    simpson_rec(f, left, lm, mid, s_left, tol / 2.0, depth - 1)
        + simpson_rec(f, mid, rm, right, s_right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
fn integrate(f: fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(f, (a, fa), (m, fm), (b, fb), whole, tol, 48)
}

/// Standard normal CDF by integrating the density from 0 — an oracle that
/// shares no code with the library's erf-based implementation.
pub fn phi_oracle(x: f64) -> f64 {
    if x < 0.0 {
        return 1.0 - phi_oracle(-x);
    }
    0.5 + integrate(std_normal_pdf, 0.0, x, 1e-16)
}

/// Central finite-difference gradient with per-coordinate relative step
/// `h_j = rel_h * max(1, |x_j|)`.
pub fn fd_gradient<F: FnMut(&[f64]) -> f64>(mut f: F, at: &[f64], rel_h: f64) -> Vec<f64> {
    let mut grad = vec![0.0; at.len()];
    let mut point = at.to_vec();
    for j in 0..at.len() {
        let h = rel_h * at[j].abs().max(1.0);
        point[j] = at[j] + h;
        let up = f(&point);
        point[j] = at[j] - h;
        let down = f(&point);
        point[j] = at[j];
        grad[j] = (up - down) / (2.0 * h);
    }
    grad
}

fn uniform_in(rng: &mut SplitMix64, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.next_f64()
}

/// A random zero-inflated instance: coefficients plus a dataset whose
/// responses were drawn from the model at those coefficients.
pub struct Instance {
    pub beta: Beta,
    pub data: Dataset,
}

/// Draw a random instance for `link` with n in 20..=200 and one or two
/// covariates per submodel.  GEV draws are rejected until every observation
/// keeps the shape argument at least 0.2 inside the distribution's support,
/// so the log-likelihood is smooth in a finite-difference neighborhood.
pub fn random_instance(link: LinkKind, rng: &mut SplitMix64) -> Instance {
    let n = 20 + (rng.next_u64() % 181) as usize;
    let xdim = 1 + (rng.next_u64() % 2) as usize;
    let zdim = 1 + (rng.next_u64() % 2) as usize;

    let mut x_rows = Vec::with_capacity(n);
    let mut z_rows = Vec::with_capacity(n);
    for _ in 0..n {
        x_rows.push((0..xdim).map(|_| rng.next_std_normal()).collect::<Vec<_>>());
        let mut z = vec![rng.next_bernoulli(0.5)];
        if zdim == 2 {
            z.push(0.8 * rng.next_std_normal());
        }
        z_rows.push(z);
    }

    'betas: loop {
        let gamma: Vec<f64> = (0..=zdim).map(|_| uniform_in(rng, -1.2, 1.2)).collect();
        let eta: Vec<f64> = (0..=xdim + zdim)
            .map(|_| uniform_in(rng, -1.2, 1.2))
            .collect();
        let eps = match link {
            LinkKind::Gev => Some(uniform_in(rng, -0.3, 0.8)),
            _ => None,
        };
        if let Some(e) = eps {
            for z in &z_rows {
                let t = gamma[0] + gamma[1..].iter().zip(z).map(|(g, v)| g * v).sum::<f64>();
                if 1.0 + e * (-t) < 0.2 {
                    continue 'betas;
                }
            }
        }
        let beta = Beta::new(link, gamma, eta, eps).unwrap();
        let mut ys = Vec::with_capacity(n);
        for i in 0..n {
            // Design rows carry the intercept; the event part sees all of Z.
            let mut zi = vec![1.0];
            zi.extend_from_slice(&z_rows[i]);
            let mut xi = vec![1.0];
            xi.extend_from_slice(&x_rows[i]);
            xi.extend_from_slice(&z_rows[i]);
            let p = model::success_prob(&beta, &xi, &zi).unwrap().p;
            ys.push(if rng.next_f64() < p { 1.0 } else { 0.0 });
        }
        let data = Dataset::new(ys, x_rows, z_rows).unwrap();
        return Instance { beta, data };
    }
}

/// Read a fishing-schema CSV (`fish_caught`, `persons`, `livebait` columns,
/// extra columns ignored) and return the dichotomized response
/// `1{fish_caught > 0}` with x = (persons) and z = (livebait).
pub fn read_fish_csv(path: &Path) -> (Vec<f64>, Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()));
    let mut lines = text.lines();
    let header: Vec<&str> = lines
        .next()
        .expect("fishing CSV has no header row")
        .split(',')
        .map(str::trim)
        .collect();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| *h == name)
            .unwrap_or_else(|| panic!("fishing CSV is missing column {name}"))
    };
    let (c_fish, c_persons, c_livebait) = (col("fish_caught"), col("persons"), col("livebait"));

    let mut ys = Vec::new();
    let mut xs = Vec::new();
    let mut zs = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<f64> = line
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .unwrap_or_else(|e| panic!("fishing CSV row {}: {e}", idx + 2))
            })
            .collect();
        ys.push(if fields[c_fish] > 0.0 { 1.0 } else { 0.0 });
        xs.push(vec![fields[c_persons]]);
        zs.push(vec![fields[c_livebait]]);
    }
    (ys, xs, zs)
}
