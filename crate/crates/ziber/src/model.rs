//! The zero-inflated Bernoulli model: mixture probabilities, log-likelihood,
//! score, and observed information.
//!
//! For observation `i` with response `y_i ∈ {0, 1}`, event covariates `X_i`
//! and susceptible-probability (SP) covariates `Z_i`, the model is
//!
//! ```text
//! p_i = P(Y_i = 1) = ω(γᵀ𝒵_i) · H(ηᵀ𝒳_i),
//! ```
//!
//! with intercept-augmented design rows `𝒵_i = (1, Z_iᵀ)ᵀ` and
//! `𝒳_i = (1, X_iᵀ, Z_iᵀ)ᵀ` (the `Z` part of `𝒳` can be restricted to a
//! subset of columns), `H` the logistic function, and `ω` one of the four
//! links. A latent susceptibility indicator never appears explicitly — it is
//! integrated out into the factor `ω`.
//!
//! A degenerate "plain" mode with no SP part (`γ` empty, `ω ≡ 1`) evaluates a
//! single-factor binary regression whose event probability uses the requested
//! link's CDF; it provides the plain logit/probit baselines for model
//! comparison through the same code path.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::links::{self, LinkKind};

/// Immutable regression data with intercept-augmented design views.
#[derive(Clone, Debug)]
pub struct Dataset {
    y: Vec<f64>,
    n: usize,
    a: usize,
    b: usize,
    event_z_cols: Vec<usize>,
    /// Row-major `n × (1 + a + |event_z_cols|)` event design `𝒳`.
    xcal: Vec<f64>,
    /// Row-major `n × (1 + b)` SP design `𝒵`.
    zcal: Vec<f64>,
}

impl Dataset {
    /// Build a dataset whose event design contains all of `Z` (the default
    /// view `𝒳_i = (1, X_iᵀ, Z_iᵀ)ᵀ`).
    pub fn new(y: Vec<f64>, x_rows: Vec<Vec<f64>>, z_rows: Vec<Vec<f64>>) -> Result<Self> {
        let b = z_rows.first().map_or(0, Vec::len);
        Self::with_event_z_cols(y, x_rows, z_rows, (0..b).collect())
    }

    /// Build a dataset whose event design contains only the listed `Z`
    /// columns: `𝒳_i = (1, X_iᵀ, Z_i[event_z_cols]ᵀ)ᵀ`.
    pub fn with_event_z_cols(
        y: Vec<f64>,
        x_rows: Vec<Vec<f64>>,
        z_rows: Vec<Vec<f64>>,
        event_z_cols: Vec<usize>,
    ) -> Result<Self> {
        let n = y.len();
        if n == 0 {
            return Err(Error::DimensionMismatch("empty response".into()));
        }
        if x_rows.len() != n || z_rows.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "response has {n} rows but covariates have {} / {}",
                x_rows.len(),
                z_rows.len()
            )));
        }
        let a = x_rows[0].len();
        let b = z_rows[0].len();
        for (i, &v) in y.iter().enumerate() {
            if v != 0.0 && v != 1.0 {
                return Err(Error::InvalidResponse { index: i, value: v });
            }
        }
        let mut seen = vec![false; b];
        for &c in &event_z_cols {
            if c >= b || std::mem::replace(&mut seen[c], true) {
                return Err(Error::DimensionMismatch(format!(
                    "event design Z column {c} is out of range or repeated (Z has {b} columns)"
                )));
            }
        }
        let xdim = 1 + a + event_z_cols.len();
        let zdim = 1 + b;
        let mut xcal = Vec::with_capacity(n * xdim);
        let mut zcal = Vec::with_capacity(n * zdim);
        for i in 0..n {
            if x_rows[i].len() != a || z_rows[i].len() != b {
                return Err(Error::DimensionMismatch(format!(
                    "ragged covariate row at observation {i}"
                )));
            }
            if x_rows[i].iter().chain(&z_rows[i]).any(|v| !v.is_finite()) {
                return Err(Error::NonFinite { what: "covariate" });
            }
            xcal.push(1.0);
            xcal.extend_from_slice(&x_rows[i]);
            xcal.extend(event_z_cols.iter().map(|&c| z_rows[i][c]));
            zcal.push(1.0);
            zcal.extend_from_slice(&z_rows[i]);
        }
        Ok(Self {
            y,
            n,
            a,
            b,
            event_z_cols,
            xcal,
            zcal,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of event-only covariate columns `X`.
    pub fn a(&self) -> usize {
        self.a
    }

    /// Number of SP covariate columns `Z`.
    pub fn b(&self) -> usize {
        self.b
    }

    /// Length of the event design row `𝒳_i`.
    pub fn xdim(&self) -> usize {
        1 + self.a + self.event_z_cols.len()
    }

    /// Length of the SP design row `𝒵_i`.
    pub fn zdim(&self) -> usize {
        1 + self.b
    }

    pub fn x_row(&self, i: usize) -> &[f64] {
        let d = self.xdim();
        &self.xcal[i * d..(i + 1) * d]
    }

    pub fn z_row(&self, i: usize) -> &[f64] {
        let d = self.zdim();
        &self.zcal[i * d..(i + 1) * d]
    }

    pub fn y(&self, i: usize) -> f64 {
        self.y[i]
    }

    pub fn ys(&self) -> &[f64] {
        &self.y
    }

    pub fn event_z_cols(&self) -> &[usize] {
        &self.event_z_cols
    }
}

/// Packed model parameters `β = (γᵀ, ηᵀ[, ε])ᵀ`.
///
/// `gamma` holds the SP coefficients (length `1 + b`), `eta` the event
/// coefficients (length `xdim`), and `eps` the GEV shape (present exactly
/// when `link` is GEV). An empty `gamma` marks the degenerate plain mode.
#[derive(Clone, Debug, PartialEq)]
pub struct Beta {
    pub link: LinkKind,
    pub gamma: Vec<f64>,
    pub eta: Vec<f64>,
    pub eps: Option<f64>,
}

impl Beta {
    pub fn new(link: LinkKind, gamma: Vec<f64>, eta: Vec<f64>, eps: Option<f64>) -> Result<Self> {
        if link == LinkKind::Gev && eps.is_none() {
            return Err(Error::MissingEps);
        }
        if link != LinkKind::Gev && eps.is_some() {
            return Err(Error::UnexpectedEps);
        }
        if gamma.is_empty() {
            return Err(Error::DimensionMismatch(
                "gamma must contain at least the intercept; use Beta::plain for the \
                 SP-free baseline"
                    .into(),
            ));
        }
        let beta = Self {
            link,
            gamma,
            eta,
            eps,
        };
        beta.check_finite()?;
        Ok(beta)
    }

    /// A plain (SP-free) binary regression: `ω ≡ 1` and the event factor is
    /// the link's own CDF applied to `ηᵀ𝒳`.
    pub fn plain(link: LinkKind, eta: Vec<f64>) -> Result<Self> {
        if link == LinkKind::Gev {
            return Err(Error::Unsupported(
                "the plain baseline supports logit, probit, and cloglog only",
            ));
        }
        let beta = Self {
            link,
            gamma: Vec::new(),
            eta,
            eps: None,
        };
        beta.check_finite()?;
        Ok(beta)
    }

    fn check_finite(&self) -> Result<()> {
        if self
            .gamma
            .iter()
            .chain(&self.eta)
            .chain(&self.eps)
            .any(|v| !v.is_finite())
        {
            return Err(Error::NonFinite { what: "beta" });
        }
        if self.eta.is_empty() {
            return Err(Error::DimensionMismatch("eta is empty".into()));
        }
        Ok(())
    }

    pub fn is_plain(&self) -> bool {
        self.gamma.is_empty()
    }

    /// Packed dimension `k`.
    pub fn dim(&self) -> usize {
        self.gamma.len() + self.eta.len() + usize::from(self.eps.is_some())
    }

    /// Pack as `(γ, η, ε?)` for the optimizer.
    pub fn pack(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.dim());
        v.extend_from_slice(&self.gamma);
        v.extend_from_slice(&self.eta);
        v.extend(self.eps);
        v
    }

    /// Overwrite the coefficients from a packed vector of matching length.
    pub fn set_packed(&mut self, packed: &[f64]) -> Result<()> {
        if packed.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "packed vector has length {}, expected {}",
                packed.len(),
                self.dim()
            )));
        }
        let (g, rest) = packed.split_at(self.gamma.len());
        self.gamma.copy_from_slice(g);
        if self.eps.is_some() {
            let (e, eps) = rest.split_at(self.eta.len());
            self.eta.copy_from_slice(e);
            self.eps = Some(eps[0]);
        } else {
            self.eta.copy_from_slice(rest);
        }
        Ok(())
    }

    /// Parameter names in packed order: `gamma0..`, `eta0..`, `eps`.
    pub fn packed_names(&self) -> Vec<String> {
        let mut names: Vec<String> = (0..self.gamma.len()).map(|j| format!("gamma{j}")).collect();
        names.extend((0..self.eta.len()).map(|j| format!("eta{j}")));
        if self.eps.is_some() {
            names.push("eps".into());
        }
        names
    }

    /// Check the coefficient lengths against a dataset's design dimensions.
    pub fn matches(&self, data: &Dataset) -> Result<()> {
        let gamma_ok = self.is_plain() || self.gamma.len() == data.zdim();
        if !gamma_ok || self.eta.len() != data.xdim() {
            return Err(Error::DimensionMismatch(format!(
                "beta has gamma {} / eta {} but the data needs {} / {}",
                self.gamma.len(),
                self.eta.len(),
                data.zdim(),
                data.xdim()
            )));
        }
        Ok(())
    }
}

/// One observation's probabilities, and its log-likelihood term when a
/// response was supplied.
#[derive(Clone, Copy, Debug)]
pub struct PerObsEval {
    /// `P(Y_i = 1) = omega · h`.
    pub p: f64,
    /// SP probability `ω(γᵀ𝒵_i)`; 1.0 in plain mode.
    pub omega: f64,
    /// Event probability (logistic `H(ηᵀ𝒳_i)`, or the link CDF in plain
    /// mode).
    pub h: f64,
    /// `y ln p + (1-y) ln(1-p)`; `None` when evaluated without a response.
    pub loglik: Option<f64>,
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The mixture success probability for one observation.
pub fn success_prob(beta: &Beta, xi: &[f64], zi: &[f64]) -> Result<PerObsEval> {
    if xi.len() != beta.eta.len() || (!beta.is_plain() && zi.len() != beta.gamma.len()) {
        return Err(Error::DimensionMismatch(
            "design row lengths do not match beta".into(),
        ));
    }
    let s = dot(&beta.eta, xi);
    if beta.is_plain() {
        let h = links::link_prob(beta.link, s, beta.eps)?.prob;
        return Ok(PerObsEval {
            p: h,
            omega: 1.0,
            h,
            loglik: None,
        });
    }
    let u = dot(&beta.gamma, zi);
    let omega = links::link_prob(beta.link, u, beta.eps)?.prob;
    let h = links::logistic(s);
    Ok(PerObsEval {
        p: omega * h,
        omega,
        h,
        loglik: None,
    })
}

/// Stable `ln ω` for the SP factor at linear predictor `u`.
fn log_omega(link: LinkKind, u: f64, eps: Option<f64>) -> Result<f64> {
    Ok(match link {
        LinkKind::Logit => links::log_logistic(u),
        LinkKind::Probit => links::std_normal_cdf(u).ln(),
        LinkKind::Cloglog => -(-u).exp(),
        LinkKind::Gev => links::link_prob(link, u, eps)?.prob.ln(),
    })
}

/// One observation's evaluation including its log-likelihood term. `y = 1`
/// with `p = 0` (or `y = 0` with `p = 1`) yields `-inf`, the rejection
/// sentinel for the optimizer.
pub fn eval_obs(beta: &Beta, xi: &[f64], zi: &[f64], y: f64) -> Result<PerObsEval> {
    let mut ev = success_prob(beta, xi, zi)?;
    let ll = if y == 1.0 {
        // ln ω + ln h through link-specific stable forms.
        if beta.is_plain() {
            log_omega(beta.link, dot(&beta.eta, xi), beta.eps)?
        } else {
            log_omega(beta.link, dot(&beta.gamma, zi), beta.eps)?
                + links::log_logistic(dot(&beta.eta, xi))
        }
    } else {
        (-ev.p).ln_1p()
    };
    ev.loglik = Some(ll);
    Ok(ev)
}

/// Total log-likelihood `Σ_i [y_i ln p_i + (1-y_i) ln(1-p_i)]`; `-inf` when
/// any observation has probability exactly 0 under `beta`.
pub fn log_likelihood(beta: &Beta, data: &Dataset) -> Result<f64> {
    beta.matches(data)?;
    let mut total = 0.0;
    for i in 0..data.n() {
        total += eval_obs(beta, data.x_row(i), data.z_row(i), data.y(i))?
            .loglik
            .expect("loglik computed with a response");
    }
    Ok(total)
}

/// Per-observation log-likelihood contributions (the Vuong test's input).
pub fn per_obs_logliks(beta: &Beta, data: &Dataset) -> Result<Vec<f64>> {
    beta.matches(data)?;
    (0..data.n())
        .map(|i| {
            Ok(eval_obs(beta, data.x_row(i), data.z_row(i), data.y(i))?
                .loglik
                .expect("loglik computed with a response"))
        })
        .collect()
}

/// Gradient of the log-likelihood in packed `(γ, η, ε?)` order.
///
/// For the logit link the closed form `D_i1 = 𝒵_i B_i1 (y_i - p_i)`,
/// `D_i2 = 𝒳_i B_i2 (y_i - p_i)` is used, with
/// `B_i1 = (1 + e^s) / (1 + e^u + e^s)` and
/// `B_i2 = (1 + e^u) / (1 + e^u + e^s)` for `u = γᵀ𝒵_i`, `s = ηᵀ𝒳_i`.
/// Other links go through the generic chain rule of [`generic_score`].
/// The gradient is unnormalized (no `1/√n` factor).
pub fn score(beta: &Beta, data: &Dataset) -> Result<Vec<f64>> {
    if !beta.is_plain() && beta.link == LinkKind::Logit {
        beta.matches(data)?;
        let (gdim, xdim) = (beta.gamma.len(), beta.eta.len());
        let mut grad = vec![0.0; beta.dim()];
        for i in 0..data.n() {
            let (xi, zi) = (data.x_row(i), data.z_row(i));
            let u = dot(&beta.gamma, zi);
            let s = dot(&beta.eta, xi);
            let r = data.y(i) - links::logistic(u) * links::logistic(s);
            // B factors scaled by e^-m so the exponentials cannot overflow.
            let m = u.max(s).max(0.0);
            let d0 = (-m).exp();
            let eu = (u - m).exp();
            let es = (s - m).exp();
            let den = d0 + eu + es;
            let b1 = (d0 + es) / den;
            let b2 = (d0 + eu) / den;
            for (g, &z) in grad[..gdim].iter_mut().zip(zi) {
                *g += z * b1 * r;
            }
            for (g, &x) in grad[gdim..gdim + xdim].iter_mut().zip(xi) {
                *g += x * b2 * r;
            }
        }
        return Ok(grad);
    }
    generic_score(beta, data)
}

/// Chain-rule gradient valid for every link:
/// `dℓ_i/dθ = (y_i - p_i) / (p_i (1 - p_i)) · dp_i/dθ`, evaluated in the
/// per-response simplified form (`1/p_i · dp_i` for `y_i = 1`,
/// `-1/(1-p_i) · dp_i` for `y_i = 0`) which is algebraically identical and
/// avoids the 0/0 when `p_i (1 - p_i)` vanishes.
pub fn generic_score(beta: &Beta, data: &Dataset) -> Result<Vec<f64>> {
    beta.matches(data)?;
    let gdim = beta.gamma.len();
    let xdim = beta.eta.len();
    let has_eps = beta.eps.is_some();
    let mut grad = vec![0.0; beta.dim()];
    for i in 0..data.n() {
        let (xi, zi) = (data.x_row(i), data.z_row(i));
        let y = data.y(i);
        let s = dot(&beta.eta, xi);
        // dp/dθ split into the coefficient of 𝒵, of 𝒳, and the ε slot.
        let (p, coef_z, coef_x, dp_deps) = if beta.is_plain() {
            let le = links::link_prob(beta.link, s, beta.eps)?;
            (le.prob, 0.0, le.dprob_dt, 0.0)
        } else {
            let u = dot(&beta.gamma, zi);
            let oe = links::link_prob(beta.link, u, beta.eps)?;
            let h = links::logistic(s);
            (
                oe.prob * h,
                h * oe.dprob_dt,
                oe.prob * h * (1.0 - h),
                h * oe.dprob_deps,
            )
        };
        let c = if y == 1.0 {
            if p == 0.0 {
                return Err(Error::InfiniteLoglik);
            }
            1.0 / p
        } else {
            if p == 1.0 {
                return Err(Error::InfiniteLoglik);
            }
            -1.0 / (1.0 - p)
        };
        for (g, &z) in grad[..gdim].iter_mut().zip(zi) {
            *g += c * coef_z * z;
        }
        for (g, &x) in grad[gdim..gdim + xdim].iter_mut().zip(xi) {
            *g += c * coef_x * x;
        }
        if has_eps {
            grad[gdim + xdim] += c * dp_deps;
        }
    }
    Ok(grad)
}

/// Central-difference Jacobian of a gradient function, negated and
/// symmetrized — the observed-information workhorse, factored out so it can
/// be exercised on functions with known Hessians.
pub(crate) fn fd_information<F>(mut grad: F, at: &[f64]) -> Result<DMatrix<f64>>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    let k = at.len();
    let mut m = DMatrix::zeros(k, k);
    let mut point = at.to_vec();
    for j in 0..k {
        let h = 1e-5 * at[j].abs().max(1.0);
        point[j] = at[j] + h;
        let up = grad(&point)?;
        point[j] = at[j] - h;
        let down = grad(&point)?;
        point[j] = at[j];
        for r in 0..k {
            // Negative Hessian column.
            m[(r, j)] = -(up[r] - down[r]) / (2.0 * h);
        }
    }
    // Symmetrize: the exact Hessian is symmetric; the stencil is not.
    Ok(0.5 * (&m + m.transpose()))
}

/// Observed information `-∂²ℓ/∂β∂βᵀ` by central finite differences of the
/// score (step `1e-5 · max(1, |β_j|)` per coordinate), symmetrized.
pub fn observed_information(beta: &Beta, data: &Dataset) -> Result<DMatrix<f64>> {
    beta.matches(data)?;
    let mut work = beta.clone();
    fd_information(
        move |packed| {
            work.set_packed(packed)?;
            score(&work, data)
        },
        &beta.pack(),
    )
}
