//! Maximum-likelihood fitting: quasi-Newton ascent with restarts, asymptotic
//! standard errors, and Wald inference.
//!
//! The optimizer is BFGS on `f = -ℓ` with a backtracking Armijo line search.
//! Candidate points are projected onto the GEV shape box before evaluation,
//! a step is accepted only when it strictly decreases `f`, and an infinite
//! `f` (a data point assigned probability zero) rejects the step naturally.
//! Multiple seeded restarts guard against bad local optima; the best point
//! wins, ties broken by lowest restart index.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::links::{self, LinkKind};
use crate::model::{self, Beta, Dataset};
use crate::rng::{self, SplitMix64};

/// Optimizer settings.
#[derive(Clone, Debug)]
pub struct FitConfig {
    /// Cap on quasi-Newton iterations per restart.
    pub max_iters: usize,
    /// Convergence threshold on the score's infinity norm.
    pub grad_tol: f64,
    /// Number of random restarts after the deterministic one at zero.
    pub n_restarts: usize,
    /// Box constraint for the GEV shape.
    pub eps_bounds: (f64, f64),
    /// Seed for the restart draws.
    pub seed: u64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            max_iters: 500,
            grad_tol: 1e-6,
            n_restarts: 5,
            eps_bounds: (-0.5, 0.95),
            seed: 0,
        }
    }
}

impl FitConfig {
    fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1"));
        }
        if self.grad_tol.is_nan() || self.grad_tol <= 0.0 {
            return Err(Error::InvalidConfig("grad_tol must be positive"));
        }
        let (lo, hi) = self.eps_bounds;
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::InvalidConfig(
                "eps_bounds must satisfy lower < upper",
            ));
        }
        Ok(())
    }
}

/// A fitted model with inference inputs and diagnostics.
#[derive(Clone, Debug)]
pub struct FitResult {
    pub beta_hat: Beta,
    /// Asymptotic standard errors, packed like `beta_hat`; NaN when the
    /// information matrix could not be evaluated.
    pub ase: Vec<f64>,
    /// Maximized log-likelihood.
    pub loglik: f64,
    /// Per-observation log-likelihood contributions at the maximizer.
    pub per_obs_loglik: Vec<f64>,
    /// Score infinity-norm reached `grad_tol`.
    pub converged: bool,
    /// GEV shape ended on its box bound, or a coefficient hit the
    /// divergence guard (quasi-separation).
    pub boundary: bool,
    /// The information matrix was not positive definite; ASEs come from an
    /// eigenvalue-floored pseudo-inverse.
    pub singular: bool,
    /// Quasi-Newton iterations used by the winning restart.
    pub iterations: usize,
}

/// Divergence guard: coefficients beyond this are quasi-separation noise.
const DIVERGENCE_BOUND: f64 = 30.0;
/// Armijo sufficient-decrease constant.
const ARMIJO_C1: f64 = 1e-4;
/// Maximum step halvings per line search.
const MAX_BACKTRACKS: usize = 60;

/// Fit a zero-inflated model with the given SP link.
pub fn fit(data: &Dataset, link: LinkKind, config: &FitConfig) -> Result<FitResult> {
    let eps0 = (link == LinkKind::Gev).then_some(0.1);
    let template = Beta::new(link, vec![0.0; data.zdim()], vec![0.0; data.xdim()], eps0)?;
    fit_impl(data, template, config)
}

/// Fit the SP-free baseline (ordinary binary regression through the same
/// machinery). The GEV link is not offered as a plain baseline.
pub fn fit_plain(data: &Dataset, link: LinkKind, config: &FitConfig) -> Result<FitResult> {
    let template = Beta::plain(link, vec![0.0; data.xdim()])?;
    fit_impl(data, template, config)
}

fn fit_impl(data: &Dataset, template: Beta, config: &FitConfig) -> Result<FitResult> {
    config.validate()?;
    template.matches(data)?;
    let k = template.dim();
    if data.n() <= k {
        return Err(Error::TooFewObservations { n: data.n(), k });
    }
    let ones = data.ys().iter().filter(|&&y| y == 1.0).count();
    if ones == 0 {
        return Err(Error::DegenerateResponse("all responses are 0"));
    }
    if ones == data.n() {
        return Err(Error::DegenerateResponse("all responses are 1"));
    }

    let mut best: Option<Candidate> = None;
    for r in 0..=config.n_restarts {
        let start = start_point(&template, config, r);
        let cand = maximize(data, &template, start, config);
        let better = best
            .as_ref()
            .is_none_or(|b| cand.loglik > b.loglik && !cand.loglik.is_nan());
        if better {
            best = Some(cand);
        }
    }
    let best = best.expect("at least the zero restart ran");

    let mut beta_hat = template.clone();
    beta_hat.set_packed(&best.point)?;
    let boundary = best.boundary || eps_on_bound(&beta_hat, config);
    let (ase, singular) = match model::observed_information(&beta_hat, data) {
        Ok(info) => ase_from_information(&info),
        Err(_) => (vec![f64::NAN; k], true),
    };
    let per_obs_loglik = model::per_obs_logliks(&beta_hat, data)?;
    Ok(FitResult {
        loglik: best.loglik,
        per_obs_loglik,
        converged: best.converged,
        boundary,
        singular,
        iterations: best.iterations,
        beta_hat,
        ase,
    })
}

fn eps_on_bound(beta: &Beta, config: &FitConfig) -> bool {
    beta.eps.is_some_and(|e| {
        (e - config.eps_bounds.0).abs() <= 1e-6 || (config.eps_bounds.1 - e).abs() <= 1e-6
    })
}

/// Restart 0 starts at zero coefficients (GEV shape 0.1); later restarts
/// draw uniformly from [-2, 2] (shape uniform over its box), each restart on
/// its own substream so the sequence is stable under n_restarts changes.
fn start_point(template: &Beta, config: &FitConfig, r: usize) -> Vec<f64> {
    let mut point = template.pack();
    if r == 0 {
        return point;
    }
    let mut rng = SplitMix64::new(rng::derive(config.seed, &[2, r as u64]));
    let coef_dim = template.gamma.len() + template.eta.len();
    for slot in point.iter_mut().take(coef_dim) {
        *slot = 4.0 * rng.next_f64() - 2.0;
    }
    if template.eps.is_some() {
        let (lo, hi) = config.eps_bounds;
        point[coef_dim] = lo + (hi - lo) * rng.next_f64();
    }
    point
}

struct Candidate {
    point: Vec<f64>,
    loglik: f64,
    converged: bool,
    boundary: bool,
    iterations: usize,
}

/// Clamp the GEV shape slot into its box; coefficients are unconstrained.
fn project(template: &Beta, config: &FitConfig, point: &mut [f64]) {
    if template.eps.is_some() {
        let last = point.len() - 1;
        point[last] = point[last].clamp(config.eps_bounds.0, config.eps_bounds.1);
    }
}

/// One restart of BFGS on `f = -ℓ` from `start`.
fn maximize(data: &Dataset, template: &Beta, mut x: Vec<f64>, config: &FitConfig) -> Candidate {
    let k = x.len();
    let mut work = template.clone();
    project(template, config, &mut x);

    let eval_f = |point: &[f64], work: &mut Beta| -> f64 {
        work.set_packed(point).expect("packed length fixed");
        match model::log_likelihood(work, data) {
            Ok(ll) => -ll,
            Err(_) => f64::INFINITY,
        }
    };
    let eval_g = |point: &[f64], work: &mut Beta| -> Option<Vec<f64>> {
        work.set_packed(point).expect("packed length fixed");
        model::score(work, data)
            .ok()
            .map(|s| s.into_iter().map(|v| -v).collect())
    };

    let mut f0 = eval_f(&x, &mut work);
    if !f0.is_finite() {
        return Candidate {
            point: x,
            loglik: -f0, // -inf
            converged: false,
            boundary: false,
            iterations: 0,
        };
    }
    let Some(mut g) = eval_g(&x, &mut work) else {
        return Candidate {
            point: x,
            loglik: -f0,
            converged: false,
            boundary: false,
            iterations: 0,
        };
    };

    let mut h = DMatrix::<f64>::identity(k, k);
    let mut converged = false;
    let mut boundary = false;
    let mut iterations = 0;

    for _ in 0..config.max_iters {
        let gnorm = g.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if gnorm <= config.grad_tol {
            converged = true;
            break;
        }

        // Search direction -H g; fall back to steepest descent if the
        // approximation has lost descent.
        let gv = nalgebra::DVector::from_column_slice(&g);
        let mut d: Vec<f64> = (-(&h) * &gv).iter().copied().collect();
        if g.iter().zip(&d).map(|(a, b)| a * b).sum::<f64>() >= 0.0 {
            h = DMatrix::identity(k, k);
            d = g.iter().map(|v| -v).collect();
        }

        // Backtracking Armijo on the projected step — the sufficient-decrease
        // threshold uses the actual displacement, and an increase is never
        // accepted, so the ascent on ℓ is monotone.
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let mut xc: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + t * di).collect();
            project(template, config, &mut xc);
            let fc = eval_f(&xc, &mut work);
            if fc.is_finite() {
                let gdx: f64 = g.iter().zip(&xc).zip(&x).map(|((gi, c), o)| gi * (c - o)).sum();
                if fc <= f0 + ARMIJO_C1 * gdx && fc < f0 {
                    accepted = Some((xc, fc));
                    break;
                }
            }
            t *= 0.5;
        }
        let Some((xc, fc)) = accepted else {
            break; // line search exhausted: stationary or non-smooth point
        };
        let Some(g1) = eval_g(&xc, &mut work) else {
            x = xc;
            f0 = fc;
            iterations += 1;
            break;
        };

        // BFGS inverse-Hessian update, skipped when curvature is unusable.
        let s: Vec<f64> = xc.iter().zip(&x).map(|(a, b)| a - b).collect();
        let yv: Vec<f64> = g1.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy: f64 = s.iter().zip(&yv).map(|(a, b)| a * b).sum();
        let snorm = s.iter().map(|v| v * v).sum::<f64>().sqrt();
        let ynorm = yv.iter().map(|v| v * v).sum::<f64>().sqrt();
        if sy > 1e-10 * snorm * ynorm {
            let rho = 1.0 / sy;
            let sv = nalgebra::DVector::from_column_slice(&s);
            let yvv = nalgebra::DVector::from_column_slice(&yv);
            let ident = DMatrix::<f64>::identity(k, k);
            let left = &ident - rho * &sv * yvv.transpose();
            h = &left * h * left.transpose() + rho * &sv * sv.transpose();
        }

        x = xc;
        f0 = fc;
        g = g1;
        iterations += 1;

        if x[..template.gamma.len() + template.eta.len()]
            .iter()
            .any(|v| v.abs() > DIVERGENCE_BOUND)
        {
            boundary = true;
            break;
        }
    }

    // Near the optimum the Armijo decrease shrinks below the resolution of
    // f itself while the score is still above tol; a damped Newton polish on
    // the score (descent measured on the score norm, likelihood guarded
    // against real decreases) closes that last gap.
    if !converged && !boundary && f0.is_finite() {
        let coef_dim = template.gamma.len() + template.eta.len();
        for _ in 0..30 {
            let Some(gneg) = eval_g(&x, &mut work) else {
                break;
            };
            let gnorm = inf_norm(&gneg);
            if gnorm <= config.grad_tol {
                converged = true;
                break;
            }
            work.set_packed(&x).expect("packed length fixed");
            let Ok(info) = model::observed_information(&work, data) else {
                break;
            };
            let score_v = nalgebra::DVector::from_iterator(k, gneg.iter().map(|v| -v));
            let delta = match info.clone().cholesky() {
                Some(ch) => ch.solve(&score_v),
                None => match info.lu().solve(&score_v) {
                    Some(d) => d,
                    None => break,
                },
            };
            let mut t = 1.0;
            let mut accepted = false;
            for _ in 0..40 {
                let mut xc: Vec<f64> = x.iter().zip(delta.iter()).map(|(a, d)| a + t * d).collect();
                project(template, config, &mut xc);
                let fc = eval_f(&xc, &mut work);
                if fc.is_finite()
                    && fc <= f0 + 1e-9 * (1.0 + f0.abs())
                    && let Some(g1) = eval_g(&xc, &mut work)
                    && inf_norm(&g1) < gnorm
                {
                    x = xc;
                    f0 = fc;
                    iterations += 1;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                break;
            }
            if x[..coef_dim].iter().any(|v| v.abs() > DIVERGENCE_BOUND) {
                boundary = true;
                break;
            }
        }
    }

    Candidate {
        point: x,
        loglik: -f0,
        converged,
        boundary,
        iterations,
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Standard errors from an observed-information matrix: Cholesky inverse
/// when positive definite, otherwise an eigenvalue-floored pseudo-inverse
/// with the `singular` diagnostic set.
pub(crate) fn ase_from_information(info: &DMatrix<f64>) -> (Vec<f64>, bool) {
    let k = info.nrows();
    if let Some(chol) = info.clone().cholesky() {
        let inv = chol.inverse();
        return ((0..k).map(|j| inv[(j, j)].sqrt()).collect(), false);
    }
    let eig = info.clone().symmetric_eigen();
    let floored = nalgebra::DVector::from_iterator(
        k,
        eig.eigenvalues.iter().map(|&l| 1.0 / l.max(1e-10)),
    );
    let inv = &eig.eigenvectors * DMatrix::from_diagonal(&floored) * eig.eigenvectors.transpose();
    ((0..k).map(|j| inv[(j, j)].max(0.0).sqrt()).collect(), true)
}

/// One parameter's Wald summary.
#[derive(Clone, Debug)]
pub struct WaldRow {
    pub name: String,
    pub estimate: f64,
    pub ase: f64,
    pub lower: f64,
    pub upper: f64,
    pub p_value: f64,
}

/// Wald intervals `β̂ⱼ ± z·ASEⱼ` at the given confidence level and two-sided
/// p-values `2(1 - Φ(|β̂ⱼ|/ASEⱼ))`.
pub fn wald(fit: &FitResult, level: f64) -> Result<Vec<WaldRow>> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidLevel(level));
    }
    if fit.ase.iter().any(|a| !a.is_finite() || *a <= 0.0) {
        return Err(Error::InvalidAse(
            "standard errors are unavailable or non-positive for this fit",
        ));
    }
    let z = links::std_normal_quantile(0.5 * (1.0 + level))?;
    let names = fit.beta_hat.packed_names();
    let packed = fit.beta_hat.pack();
    Ok(names
        .into_iter()
        .zip(packed)
        .zip(&fit.ase)
        .map(|((name, estimate), &ase)| {
            // 2 Phi(-|t|) keeps precision in the far tail.
            let p_value = 2.0 * links::std_normal_cdf(-(estimate / ase).abs());
            WaldRow {
                name,
                estimate,
                ase,
                lower: estimate - z * ase,
                upper: estimate + z * ase,
                p_value,
            }
        })
        .collect())
}
