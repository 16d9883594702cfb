//! Scenario-driven data generation and Monte Carlo study aggregation.
//!
//! Eight built-in scenarios cover two design sizes (one X and one Z column;
//! three X and two Z columns) under each of the four links. Every observation
//! draws from its own RNG substream, so datasets are bit-reproducible and
//! replications are independent by construction.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::{self, FitConfig};
use crate::links::LinkKind;
use crate::model::{self, Beta, Dataset};
use crate::rng::{self, SplitMix64};

/// One covariate column's generator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CovariateSpec {
    StdNormal,
    Normal { mean: f64, sd: f64 },
    Exponential { rate: f64 },
    Bernoulli { p: f64 },
}

impl CovariateSpec {
    fn validate(self) -> Result<()> {
        let ok = match self {
            Self::StdNormal => true,
            Self::Normal { mean, sd } => mean.is_finite() && sd.is_finite() && sd > 0.0,
            Self::Exponential { rate } => rate.is_finite() && rate > 0.0,
            Self::Bernoulli { p } => p > 0.0 && p < 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidScenario(format!(
                "invalid covariate generator {self:?}"
            )))
        }
    }

    fn sample(self, rng: &mut SplitMix64) -> f64 {
        match self {
            Self::StdNormal => rng.next_std_normal(),
            Self::Normal { mean, sd } => mean + sd * rng.next_std_normal(),
            Self::Exponential { rate } => rng.next_exponential(rate),
            Self::Bernoulli { p } => rng.next_bernoulli(p),
        }
    }
}

/// A data-generating configuration: true parameters plus covariate layout.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub link: LinkKind,
    pub true_beta: Beta,
    pub x_spec: Vec<CovariateSpec>,
    pub z_spec: Vec<CovariateSpec>,
    /// Which Z columns also enter the event design (the built-ins use a
    /// proper subset in the larger case).
    pub event_z_cols: Vec<usize>,
}

/// Names accepted by [`Scenario::builtin`].
pub const BUILTIN_NAMES: [&str; 8] = [
    "case1-A", "case1-B", "case1-C", "case1-D", "case2-A", "case2-B", "case2-C", "case2-D",
];

impl Scenario {
    pub fn new(
        name: impl Into<String>,
        true_beta: Beta,
        x_spec: Vec<CovariateSpec>,
        z_spec: Vec<CovariateSpec>,
        event_z_cols: Vec<usize>,
    ) -> Result<Self> {
        for spec in x_spec.iter().chain(&z_spec) {
            spec.validate()?;
        }
        let mut seen = vec![false; z_spec.len()];
        for &c in &event_z_cols {
            if c >= z_spec.len() || std::mem::replace(&mut seen[c], true) {
                return Err(Error::InvalidScenario(format!(
                    "event column {c} is out of range or repeated (Z has {} columns)",
                    z_spec.len()
                )));
            }
        }
        if true_beta.gamma.len() != 1 + z_spec.len() {
            return Err(Error::InvalidScenario(format!(
                "gamma has {} entries; expected {} (intercept + Z columns)",
                true_beta.gamma.len(),
                1 + z_spec.len()
            )));
        }
        let xdim = 1 + x_spec.len() + event_z_cols.len();
        if true_beta.eta.len() != xdim {
            return Err(Error::InvalidScenario(format!(
                "eta has {} entries; expected {xdim} (intercept + X + shared Z columns)",
                true_beta.eta.len()
            )));
        }
        Ok(Self {
            name: name.into(),
            link: true_beta.link,
            true_beta,
            x_spec,
            z_spec,
            event_z_cols,
        })
    }

    /// Look up one of the eight built-in scenarios by name.
    pub fn builtin(name: &str) -> Option<Self> {
        use CovariateSpec::{Bernoulli, Exponential, Normal, StdNormal};
        // Small design: X ~ N(0,1); Z ~ B(1, 0.5); event part uses (X, Z).
        let small = |link, gamma: [f64; 2], eta: [f64; 3], eps| {
            let beta = Beta::new(link, gamma.to_vec(), eta.to_vec(), eps).expect("valid builtin");
            Self::new(name, beta, vec![StdNormal], vec![Bernoulli { p: 0.5 }], vec![0])
                .expect("valid builtin")
        };
        // Large design: X ~ (N(0,1), Exp(1), B(1,0.3)); Z ~ (B(1,0.5),
        // N(-1,1)); the event part regresses on (X1, X2, X3, Z2) only.
        let large = |link, gamma: [f64; 3], eta: [f64; 5], eps| {
            let beta = Beta::new(link, gamma.to_vec(), eta.to_vec(), eps).expect("valid builtin");
            Self::new(
                name,
                beta,
                vec![StdNormal, Exponential { rate: 1.0 }, Bernoulli { p: 0.3 }],
                vec![Bernoulli { p: 0.5 }, Normal { mean: -1.0, sd: 1.0 }],
                vec![1],
            )
            .expect("valid builtin")
        };
        Some(match name {
            "case1-A" => small(LinkKind::Logit, [-0.8, 0.9], [0.7, -1.7, 0.5], None),
            "case1-B" => small(LinkKind::Probit, [-0.8, 0.9], [0.7, -1.7, 0.5], None),
            "case1-C" => small(LinkKind::Cloglog, [0.5, -0.5], [-0.5, -1.2, 0.5], None),
            "case1-D" => small(LinkKind::Gev, [-0.5, 0.5], [-0.5, -1.5, 0.5], Some(0.25)),
            "case2-A" => large(
                LinkKind::Logit,
                [0.5, 0.2, -0.6],
                [0.7, -1.7, 0.5, -1.2, 0.5],
                None,
            ),
            "case2-B" => large(
                LinkKind::Probit,
                [0.5, 0.2, -0.6],
                [0.7, -1.7, 0.5, -1.2, 0.5],
                None,
            ),
            "case2-C" => large(
                LinkKind::Cloglog,
                [0.5, -0.2, 0.5],
                [-0.5, 0.5, 0.5, -0.5, 0.5],
                None,
            ),
            "case2-D" => large(
                LinkKind::Gev,
                [0.5, -0.2, 0.5],
                [0.7, -0.5, 0.5, -0.7, 0.5],
                Some(0.25),
            ),
            _ => return None,
        })
    }
}

/// Draw a dataset of size `n` under the scenario. Observation `i` uses the
/// substream `(0, i)` of `seed` and draws, in order: the X columns, the Z
/// columns, then one uniform for the response.
pub fn generate_dataset(scenario: &Scenario, n: usize, seed: u64) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::InvalidScenario("n must be at least 1".into()));
    }
    let beta = &scenario.true_beta;
    let mut y = Vec::with_capacity(n);
    let mut xs = Vec::with_capacity(n);
    let mut zs = Vec::with_capacity(n);
    for i in 0..n {
        let mut rng = rng::substream(seed, &[0, i as u64]);
        let x: Vec<f64> = scenario.x_spec.iter().map(|s| s.sample(&mut rng)).collect();
        let z: Vec<f64> = scenario.z_spec.iter().map(|s| s.sample(&mut rng)).collect();
        // Intercept-augmented design rows, mirroring Dataset's layout.
        let mut xi = Vec::with_capacity(beta.eta.len());
        xi.push(1.0);
        xi.extend_from_slice(&x);
        xi.extend(scenario.event_z_cols.iter().map(|&c| z[c]));
        let mut zi = Vec::with_capacity(beta.gamma.len());
        zi.push(1.0);
        zi.extend_from_slice(&z);
        let p = model::success_prob(beta, &xi, &zi)?.p;
        y.push(f64::from(rng.next_f64() < p));
        xs.push(x);
        zs.push(z);
    }
    Dataset::with_event_z_cols(y, xs, zs, scenario.event_z_cols.clone())
}

/// Fraction of zero responses.
pub fn zi_ratio(data: &Dataset) -> f64 {
    let zeros = data.ys().iter().filter(|&&v| v == 0.0).count();
    zeros as f64 / data.n() as f64
}

/// Per-parameter Monte Carlo summaries plus study-level tallies.
#[derive(Clone, Debug)]
pub struct StudyReport {
    pub scenario: String,
    pub parameters: Vec<String>,
    pub true_values: Vec<f64>,
    /// `mean(estimate) - truth` over converged replications.
    pub bias: Vec<f64>,
    pub mean_ase: Vec<f64>,
    /// Sample standard deviation of the estimates (n-1 denominator).
    pub empirical_sd: Vec<f64>,
    /// Fraction of converged replications whose 95% Wald interval covers the
    /// truth.
    pub cp: Vec<f64>,
    pub n: usize,
    pub reps: usize,
    /// Replications that failed to converge or yielded unusable standard
    /// errors; excluded from the per-parameter aggregates.
    pub failures: usize,
    /// Mean zero fraction of the generated datasets (all replications).
    pub mean_zi_ratio: f64,
}

impl StudyReport {
    /// CSV export: one row per parameter, full precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("parameter,true_value,bias,mean_ase,empirical_sd,cp\n");
        for j in 0..self.parameters.len() {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                self.parameters[j],
                self.true_values[j],
                self.bias[j],
                self.mean_ase[j],
                self.empirical_sd[j],
                self.cp[j]
            ));
        }
        out
    }
}

/// One usable replication's extract.
struct RepRecord {
    estimate: Vec<f64>,
    ase: Vec<f64>,
    covered: Vec<bool>,
}

/// Run `reps` generate→fit→Wald cycles in parallel and aggregate.
///
/// Replication `r` generates data under the substream `(1, r)` of `seed` and
/// fits with restart seed derived as substream `(3, r)` of `config.seed`, so
/// the whole study is deterministic and replications never share draws.
pub fn run_study(
    scenario: &Scenario,
    n: usize,
    reps: usize,
    seed: u64,
    config: &FitConfig,
) -> Result<StudyReport> {
    if reps < 2 {
        return Err(Error::InvalidConfig("a study needs at least 2 replications"));
    }
    let truth = scenario.true_beta.pack();
    let outcomes: Vec<(Option<RepRecord>, f64)> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let Ok(data) = generate_dataset(scenario, n, rng::derive(seed, &[1, r as u64]))
            else {
                return (None, f64::NAN);
            };
            let zi = zi_ratio(&data);
            let rep_config = FitConfig {
                seed: rng::derive(config.seed, &[3, r as u64]),
                ..config.clone()
            };
            let Ok(fit) = estimation::fit(&data, scenario.link, &rep_config) else {
                return (None, zi);
            };
            if !fit.converged {
                return (None, zi);
            }
            let Ok(rows) = estimation::wald(&fit, 0.95) else {
                return (None, zi);
            };
            let record = RepRecord {
                estimate: fit.beta_hat.pack(),
                ase: fit.ase.clone(),
                covered: rows
                    .iter()
                    .zip(&truth)
                    .map(|(row, &t)| row.lower <= t && t <= row.upper)
                    .collect(),
            };
            (Some(record), zi)
        })
        .collect();

    let zis: Vec<f64> = outcomes.iter().map(|(_, z)| *z).filter(|z| z.is_finite()).collect();
    let mean_zi_ratio = zis.iter().sum::<f64>() / zis.len().max(1) as f64;
    let records: Vec<RepRecord> = outcomes.into_iter().filter_map(|(r, _)| r).collect();
    let failures = reps - records.len();
    Ok(aggregate(scenario, n, reps, failures, mean_zi_ratio, &records))
}

/// Deterministic order-independent reduction of per-replication records.
fn aggregate(
    scenario: &Scenario,
    n: usize,
    reps: usize,
    failures: usize,
    mean_zi_ratio: f64,
    records: &[RepRecord],
) -> StudyReport {
    let truth = scenario.true_beta.pack();
    let k = truth.len();
    let m = records.len();
    let mut bias = vec![f64::NAN; k];
    let mut mean_ase = vec![f64::NAN; k];
    let mut empirical_sd = vec![f64::NAN; k];
    let mut cp = vec![f64::NAN; k];
    if m > 0 {
        for j in 0..k {
            let mean_est = records.iter().map(|r| r.estimate[j]).sum::<f64>() / m as f64;
            bias[j] = mean_est - truth[j];
            mean_ase[j] = records.iter().map(|r| r.ase[j]).sum::<f64>() / m as f64;
            cp[j] = records.iter().filter(|r| r.covered[j]).count() as f64 / m as f64;
            if m > 1 {
                let ss = records
                    .iter()
                    .map(|r| (r.estimate[j] - mean_est).powi(2))
                    .sum::<f64>();
                empirical_sd[j] = (ss / (m - 1) as f64).sqrt();
            }
        }
    }
    StudyReport {
        scenario: scenario.name.clone(),
        parameters: scenario.true_beta.packed_names(),
        true_values: truth,
        bias,
        mean_ase,
        empirical_sd,
        cp,
        n,
        reps,
        failures,
        mean_zi_ratio,
    }
}

/// The bundled stand-in for the fishing-trip dataset: 248 rows drawn from a
/// probit model with SP part `Φ(-0.2598 + 0.0826·livebait)` and event part
/// `H(-1.2612 + 2.4117·persons + 0.6660·livebait)`. `fish_caught` is 0 for
/// non-events and a positive count otherwise, so the binary column is
/// exactly `1{fish_caught > 0}`; `camper` is a bystander column.
pub fn synthetic_fishing_csv(seed: u64) -> String {
    let beta = Beta::new(
        LinkKind::Probit,
        vec![-0.2598, 0.0826],
        vec![-1.2612, 2.4117, 0.6660],
        None,
    )
    .expect("valid stand-in parameters");
    let mut out = String::from("fish_caught,fish_caught_bin,persons,livebait,camper\n");
    for i in 0..248u64 {
        let mut rng = rng::substream(seed, &[0, i]);
        let persons = 1 + rng.next_u64() % 4;
        let livebait = rng.next_bernoulli(0.86);
        let camper = rng.next_bernoulli(0.59);
        let xi = [1.0, persons as f64, livebait];
        let zi = [1.0, livebait];
        let p = model::success_prob(&beta, &xi, &zi).expect("valid design row").p;
        let y = rng.next_f64() < p;
        let fish = if y {
            1 + rng.next_exponential(1.0 / 2.2).floor() as u64
        } else {
            0
        };
        out.push_str(&format!(
            "{fish},{},{persons},{},{}\n",
            u8::from(y),
            livebait as u8,
            camper as u8
        ));
    }
    out
}
