//! Vuong test for non-nested model comparison on a shared dataset.

use crate::error::{Error, Result};
use crate::estimation::FitResult;

/// Which model the test prefers at the 1.96 normal threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preferred {
    ModelA,
    ModelB,
    Indeterminate,
}

/// The standardized mean pointwise log-likelihood ratio.
#[derive(Clone, Debug)]
pub struct VuongResult {
    /// `√n · mean_lr / sd_lr`.
    pub statistic: f64,
    pub n: usize,
    /// Mean of `m_i = ℓ_a,i − ℓ_b,i`.
    pub mean_lr: f64,
    /// Sample standard deviation of `m_i` (n−1 denominator).
    pub sd_lr: f64,
    pub preferred: Preferred,
}

/// Compare two fits of the same `n` observations. No AIC/BIC correction term
/// is applied; the verdict uses the two-sided 1.96 threshold.
pub fn vuong(fit_a: &FitResult, fit_b: &FitResult, n: usize) -> Result<VuongResult> {
    let (a, b) = (&fit_a.per_obs_loglik, &fit_b.per_obs_loglik);
    if a.len() != n || b.len() != n || n == 0 {
        return Err(Error::LoglikLengthMismatch {
            a: a.len(),
            b: b.len(),
            n,
        });
    }
    let m: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let mean_lr = m.iter().sum::<f64>() / n as f64;
    let sd_lr = if n > 1 {
        (m.iter().map(|v| (v - mean_lr).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    if sd_lr == 0.0 {
        if mean_lr != 0.0 {
            return Err(Error::DegenerateLikelihoodRatio);
        }
        return Ok(VuongResult {
            statistic: 0.0,
            n,
            mean_lr,
            sd_lr,
            preferred: Preferred::Indeterminate,
        });
    }
    let statistic = (n as f64).sqrt() * mean_lr / sd_lr;
    let preferred = if statistic > 1.96 {
        Preferred::ModelA
    } else if statistic < -1.96 {
        Preferred::ModelB
    } else {
        Preferred::Indeterminate
    };
    Ok(VuongResult {
        statistic,
        n,
        mean_lr,
        sd_lr,
        preferred,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimation::{self, FitConfig};
    use crate::links::LinkKind;
    use crate::model::Beta;
    use crate::rng::SplitMix64;
    use crate::simulation::{self, Scenario};
    use rayon::prelude::*;

    /// A FitResult shell carrying only per-observation log-likelihoods.
    fn shell(lls: Vec<f64>) -> FitResult {
        FitResult {
            beta_hat: Beta::plain(LinkKind::Logit, vec![0.0]).unwrap(),
            ase: vec![1.0],
            loglik: lls.iter().sum(),
            per_obs_loglik: lls,
            converged: true,
            boundary: false,
            singular: false,
            iterations: 0,
        }
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "expected {b}, got {a}");
    }

    #[test]
    fn identical_models_are_indeterminate_at_zero() {
        let a = shell(vec![-1.0, -2.5, -0.25]);
        let v = vuong(&a, &a, 3).unwrap();
        assert_eq!(v.statistic, 0.0);
        assert_eq!(v.preferred, Preferred::Indeterminate);
        assert_eq!(v.mean_lr, 0.0);
        assert_eq!(v.sd_lr, 0.0);
    }

    #[test]
    fn four_point_hand_example() {
        // m = (1, 0, 0, -1): mean 0, sd sqrt(2/3).
        let a = shell(vec![-1.0, -2.0, -1.0, -2.0]);
        let b = shell(vec![-2.0, -2.0, -1.0, -1.0]);
        let v = vuong(&a, &b, 4).unwrap();
        close(v.sd_lr, 0.816496580927726, 1e-12);
        assert_eq!(v.statistic, 0.0);
        assert_eq!(v.preferred, Preferred::Indeterminate);
    }

    #[test]
    fn verdicts_follow_the_thresholds() {
        // Constant shift 0.3 over alternating noise: strongly favors A.
        let n = 100;
        let noise: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 0.1 } else { -0.1 }).collect();
        let a = shell(noise.iter().map(|e| -1.0 + 0.3 + e).collect());
        let b = shell(vec![-1.0; n]);
        let v = vuong(&a, &b, n).unwrap();
        assert!(v.statistic > 1.96);
        assert_eq!(v.preferred, Preferred::ModelA);
        let w = vuong(&b, &a, n).unwrap();
        assert_eq!(w.preferred, Preferred::ModelB);
        // Tiny shift: inside the band.
        let c = shell(noise.iter().map(|e| -1.0 + 0.001 + e).collect());
        let u = vuong(&c, &b, n).unwrap();
        assert!(u.statistic.abs() < 1.96);
        assert_eq!(u.preferred, Preferred::Indeterminate);
    }

    #[test]
    fn antisymmetry_is_exact() {
        let mut rng = SplitMix64::new(321);
        for _ in 0..50 {
            let n = 37;
            let a = shell((0..n).map(|_| -3.0 * rng.next_f64()).collect());
            let b = shell((0..n).map(|_| -3.0 * rng.next_f64()).collect());
            let ab = vuong(&a, &b, n).unwrap();
            let ba = vuong(&b, &a, n).unwrap();
            assert_eq!(ab.statistic.to_bits(), (-ba.statistic).to_bits());
        }
    }

    #[test]
    fn shared_translation_leaves_the_statistic_unchanged() {
        let mut rng = SplitMix64::new(9);
        let n = 200;
        let la: Vec<f64> = (0..n).map(|_| -2.0 * rng.next_f64()).collect();
        let lb: Vec<f64> = (0..n).map(|_| -2.0 * rng.next_f64()).collect();
        let base = vuong(&shell(la.clone()), &shell(lb.clone()), n).unwrap();
        let c = 7.25;
        let shifted = vuong(
            &shell(la.iter().map(|v| v + c).collect()),
            &shell(lb.iter().map(|v| v + c).collect()),
            n,
        )
        .unwrap();
        close(shifted.statistic, base.statistic, 1e-10);
    }

    #[test]
    fn degenerate_and_mismatched_inputs_error() {
        let a = shell(vec![-1.0, -1.0]);
        let b = shell(vec![-1.5, -1.5]);
        assert!(matches!(
            vuong(&a, &b, 2),
            Err(Error::DegenerateLikelihoodRatio)
        ));
        assert!(matches!(
            vuong(&a, &b, 3),
            Err(Error::LoglikLengthMismatch { .. })
        ));
    }

    #[test]
    fn true_model_usually_wins_directionally() {
        // Data with genuine zero inflation, compared against the plain
        // baseline that has none. (SP links are not a usable contrast here:
        // with a binary Z, the SP factor contributes only two free values,
        // so all four link families coincide and the statistic is noise.)
        let scenario = Scenario::builtin("case1-A").unwrap();
        let config = FitConfig {
            n_restarts: 0,
            ..FitConfig::default()
        };
        let wins: usize = (0..50u64)
            .into_par_iter()
            .map(|r| {
                let data = simulation::generate_dataset(&scenario, 2000, 9000 + r).unwrap();
                let fit_a = estimation::fit(&data, LinkKind::Logit, &config).unwrap();
                let fit_b = estimation::fit_plain(&data, LinkKind::Logit, &config).unwrap();
                let v = vuong(&fit_a, &fit_b, data.n()).unwrap();
                usize::from(v.statistic > 0.0)
            })
            .sum();
        assert!(wins >= 40, "zero inflation detected in only {wins}/50 runs");
    }
}
