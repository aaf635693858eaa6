//! Closed-form AFC results: emission probability, forward and backward
//! first-echo efficiencies. These serve as oracles for the numerics and as
//! the model the backward estimator fits against.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Parameters of the analytic AFC model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AfcParams {
    /// Effective optical depth per tooth, alpha~ L = alpha L / F, >= 0.
    pub alpha_tilde_l: f64,
    /// Comb finesse F = delta/gamma, > 0. `f64::INFINITY` selects the
    /// high-finesse limit (no dephasing loss).
    pub finesse: f64,
}

impl AfcParams {
    pub fn new(alpha_tilde_l: f64, finesse: f64) -> Result<Self> {
        if !(alpha_tilde_l >= 0.0) {
            return Err(Error::Validation(format!(
                "alpha_tilde_l must be >= 0, got {alpha_tilde_l}"
            )));
        }
        if !(finesse > 0.0) {
            return Err(Error::Validation(format!(
                "finesse must be > 0, got {finesse}"
            )));
        }
        Ok(Self {
            alpha_tilde_l,
            finesse,
        })
    }

    /// Intensity dephasing prefactor exp(-2 (sqrt(2) pi / F)^2) from the
    /// finite tooth width; 1 in the high-finesse limit.
    pub fn dephasing_prefactor(&self) -> f64 {
        let x = std::f64::consts::SQRT_2 * std::f64::consts::PI / self.finesse;
        (-2.0 * x * x).exp()
    }
}

/// Photon emission probability P(t) = |sum_j c_j exp(i j t delta)|^2.
///
/// The overall index offset is a global phase, so only consecutive spacing
/// between coefficients matters; indices run j = idx - len/2.
pub fn emission_probability(coeffs: &[Complex64], t: f64, delta: f64) -> Result<f64> {
    if coeffs.is_empty() {
        return Err(Error::Validation(
            "emission_probability needs coefficients".into(),
        ));
    }
    let offset = (coeffs.len() / 2) as f64;
    let sum: Complex64 = coeffs
        .iter()
        .enumerate()
        .map(|(idx, c)| c * Complex64::new(0.0, (idx as f64 - offset) * t * delta).exp())
        .sum();
    Ok(sum.norm_sqr())
}

/// Forward first-echo efficiency
/// eta_f = exp(-2 (sqrt(2) pi/F)^2) (alpha~L)^2 exp(-alpha~L).
pub fn eta_forward(p: &AfcParams) -> f64 {
    let x = p.alpha_tilde_l;
    p.dephasing_prefactor() * x * x * (-x).exp()
}

/// Backward-retrieval efficiency
/// eta_b = exp(-2 (sqrt(2) pi/F)^2) (1 - exp(-alpha~L))^2.
pub fn eta_backward(p: &AfcParams) -> f64 {
    let x = p.alpha_tilde_l;
    let a = 1.0 - (-x).exp();
    p.dephasing_prefactor() * a * a
}
