//! Model parameters and the stationary link probability.
//!
//! A network of `N` nodes is modeled as N(N−1)/2 independent links, each
//! alternating between OFF (nodes apart) and ON (nodes in contact). OFF
//! periods are exponential with rate `lambda` (mean intermeeting time
//! 1/λ); ON periods follow a generic nonnegative law with mean `mu_inv`.
//! Observed in steady state, a link is ON with probability
//!
//! ```text
//! p = mu_inv / (mu_inv + 1/lambda)
//! ```
//!
//! Every solver in this crate consumes only `(n_nodes, lambda, p)` — the
//! shape of the contact-duration law never enters the analytic layer — so
//! parameters may be given either as `(lambda, mu_inv)` or as `(lambda, p)`
//! directly.

use thiserror::Error;

/// Validation failure for model parameters or solver domains.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("node count must be at least {min}, got {got}")]
    NodeCount { min: usize, got: usize },
    #[error("lambda must be a positive finite rate, got {0}")]
    Lambda(f64),
    #[error("mean contact duration must be nonnegative and finite, got {0}")]
    ContactMean(f64),
    #[error("probability must lie in [0, 1], got {0}")]
    Probability(f64),
    #[error("harmonic numbers are defined for n >= 1 only")]
    HarmonicIndex,
    #[error("(i={i}, a={a}) is outside the recursion domain for N={n}")]
    IndexDomain { n: usize, i: usize, a: usize },
}

/// Stationary probability that a link is ON: `mu_inv / (mu_inv + 1/lambda)`.
///
/// Returns 0 for point-like contacts (`mu_inv = 0`).
pub fn stationary_probability(lambda: f64, mu_inv: f64) -> Result<f64, ParamError> {
    check_lambda(lambda)?;
    check_contact_mean(mu_inv)?;
    if mu_inv == 0.0 {
        return Ok(0.0);
    }
    Ok(mu_inv / (mu_inv + 1.0 / lambda))
}

fn check_lambda(lambda: f64) -> Result<(), ParamError> {
    if lambda.is_finite() && lambda > 0.0 {
        Ok(())
    } else {
        Err(ParamError::Lambda(lambda))
    }
}

fn check_contact_mean(mu_inv: f64) -> Result<(), ParamError> {
    if mu_inv.is_finite() && mu_inv >= 0.0 {
        Ok(())
    } else {
        Err(ParamError::ContactMean(mu_inv))
    }
}

fn check_probability(p: f64) -> Result<(), ParamError> {
    if p.is_finite() && (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(ParamError::Probability(p))
    }
}

/// Validated `(n_nodes, lambda, p)` triple consumed by every solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    n_nodes: usize,
    lambda: f64,
    p: f64,
}

impl ModelParams {
    /// Build from a stationary link probability given directly.
    pub fn from_edge_probability(n_nodes: usize, lambda: f64, p: f64) -> Result<Self, ParamError> {
        if n_nodes < 1 {
            return Err(ParamError::NodeCount { min: 1, got: n_nodes });
        }
        check_lambda(lambda)?;
        check_probability(p)?;
        Ok(Self { n_nodes, lambda, p })
    }

    /// Build from a mean contact duration; `p` follows from the renewal
    /// balance `mu_inv / (mu_inv + 1/lambda)`.
    pub fn from_mean_contact(n_nodes: usize, lambda: f64, mu_inv: f64) -> Result<Self, ParamError> {
        let p = stationary_probability(lambda, mu_inv)?;
        Self::from_edge_probability(n_nodes, lambda, p)
    }

    /// Point-like contacts: zero-duration meetings, `p = 0`.
    pub fn point_like(n_nodes: usize, lambda: f64) -> Result<Self, ParamError> {
        Self::from_mean_contact(n_nodes, lambda, 0.0)
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Mean contact duration implied by `(lambda, p)`, inverting the
    /// stationary balance: `p / (lambda (1 − p))`. Infinite at `p = 1`.
    pub fn mean_contact_duration(&self) -> f64 {
        if self.p == 0.0 {
            0.0
        } else {
            self.p / (self.lambda * (1.0 - self.p))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn stationary_probability_point_like_is_zero() {
        assert_eq!(stationary_probability(1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn stationary_probability_symmetric_case_is_half() {
        for c in [0.1, 1.0, 7.0, 250.0] {
            assert_relative_eq!(
                stationary_probability(c, 1.0 / c).unwrap(),
                0.5,
                max_relative = 1e-15
            );
        }
    }

    #[test]
    fn stationary_probability_one_in_ten() {
        assert_relative_eq!(
            stationary_probability(1.0, 1.0 / 9.0).unwrap(),
            0.1,
            max_relative = 1e-15
        );
    }

    #[test]
    fn stationary_probability_rejects_bad_lambda() {
        assert_eq!(stationary_probability(0.0, 1.0), Err(ParamError::Lambda(0.0)));
        assert!(stationary_probability(-2.0, 1.0).is_err());
        assert!(stationary_probability(f64::INFINITY, 1.0).is_err());
    }

    #[test]
    fn params_from_mean_contact_matches_direct_probability() {
        let a = ModelParams::from_mean_contact(10, 2.0, 0.25).unwrap();
        let b = ModelParams::from_edge_probability(10, 2.0, 0.25 / (0.25 + 0.5)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn params_validation() {
        assert_eq!(
            ModelParams::from_edge_probability(0, 1.0, 0.5),
            Err(ParamError::NodeCount { min: 1, got: 0 })
        );
        assert!(ModelParams::from_edge_probability(3, 1.0, 1.5).is_err());
        assert!(ModelParams::from_edge_probability(3, 1.0, -0.1).is_err());
        assert!(ModelParams::from_edge_probability(3, 1.0, f64::NAN).is_err());
        assert!(ModelParams::from_mean_contact(3, 1.0, -1.0).is_err());
        assert!(ModelParams::point_like(4, 1.0).is_ok());
    }

    #[test]
    fn mean_contact_duration_round_trips() {
        let params = ModelParams::from_mean_contact(5, 2.0, 0.75).unwrap();
        assert_relative_eq!(params.mean_contact_duration(), 0.75, max_relative = 1e-12);
        let point = ModelParams::point_like(5, 2.0).unwrap();
        assert_eq!(point.mean_contact_duration(), 0.0);
        let full = ModelParams::from_edge_probability(5, 1.0, 1.0).unwrap();
        assert!(full.mean_contact_duration().is_infinite());
    }
}
