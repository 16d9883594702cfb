//! Maximum-likelihood estimation for zero-inflated Bernoulli (ZIBer)
//! regression.
//!
//! A ZIBer model mixes a point mass at `Y = 0` (non-susceptible subjects)
//! with a Bernoulli regression for the susceptible ones:
//!
//! ```text
//! P(Y_i = 1 | X_i, Z_i) = ω(γᵀ𝒵_i) · H(ηᵀ𝒳_i),
//! ```
//!
//! where `H` is the logistic function, `𝒵_i = (1, Z_iᵀ)ᵀ`,
//! `𝒳_i = (1, X_iᵀ, Z_iᵀ)ᵀ`, and the susceptible probability `ω` is one of
//! four links (logit, probit, cloglog, or a GEV-based link with an extra
//! shape parameter).
//!
//! The crate provides:
//!
//! * [`links`] — the link functions and the special functions they need;
//! * [`model`] — data containers, log-likelihood, score, observed information;
//! * [`estimation`] — quasi-Newton fitting, standard errors, Wald inference;
//! * [`simulation`] — scenario-based data generation and Monte Carlo studies;
//! * [`selection`] — the Vuong test for non-nested model comparison;
//! * [`cli`] — the `ziber` command-line front end;
//! * [`rng`] — a splittable, platform-stable random number generator.

pub mod cli;
pub mod error;
pub mod estimation;
pub mod links;
pub mod model;
pub mod rng;
pub mod selection;
pub mod simulation;

pub use error::{Error, Result};
