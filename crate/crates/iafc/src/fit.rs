//! Backward-efficiency estimation: fit the forward efficiency-vs-length curve
//! to the analytic model eta0 (a L)^2 exp(-a L), then evaluate the backward
//! closed form eta0 (1 - exp(-a L))^2 with the recovered parameters.
//!
//! The optimizer is deterministic: for a trial effective depth the optimal
//! prefactor is a closed-form linear least-squares ratio, and the depth is
//! located by a coarse scan followed by golden-section refinement.

use crate::error::{Error, Result};

/// Default absolute residual gate on the fitted model, in efficiency units.
pub const DEFAULT_RESIDUAL_GATE: f64 = 0.02;

/// Relative tolerance of the golden-section search on alpha~.
const ALPHA_REL_TOL: f64 = 1e-8;
/// Coarse bracketing grid size (geometric).
const COARSE_POINTS: usize = 256;

/// Outcome of fitting the forward model to a length sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    /// Fitted overall prefactor (the dephasing factor analogue), in (0, 1]
    /// when converged.
    pub eta0: f64,
    /// Fitted effective depth per unit length.
    pub alpha_tilde: f64,
    /// Root-mean-square residual of the fit, in efficiency units.
    pub rms_residual: f64,
    /// False when the depth search ran into its bracket bounds or the
    /// recovered parameters are unphysical.
    pub converged: bool,
}

fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, rel_tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a) > rel_tol * b.abs().max(1e-300) {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}

/// Model curve g(L) = (a L)^2 exp(-a L).
fn model(alpha: f64, l: f64) -> f64 {
    let x = alpha * l;
    x * x * (-x).exp()
}

/// For fixed alpha~, the optimal eta0 and the resulting sum of squares.
fn ssr_at(alpha: f64, lengths: &[f64], etas: &[f64]) -> (f64, f64) {
    let mut gy = 0.0;
    let mut gg = 0.0;
    for (&l, &y) in lengths.iter().zip(etas) {
        let g = model(alpha, l);
        gy += g * y;
        gg += g * g;
    }
    if gg == 0.0 {
        let ss: f64 = etas.iter().map(|y| y * y).sum();
        return (0.0, ss);
    }
    let eta0 = gy / gg;
    let ss = lengths
        .iter()
        .zip(etas)
        .map(|(&l, &y)| {
            let r = eta0 * model(alpha, l) - y;
            r * r
        })
        .sum();
    (eta0, ss)
}

/// Fits eta(L) = eta0 (alpha~ L)^2 exp(-alpha~ L) to a length sweep.
///
/// Needs at least five points with increasing lengths and efficiencies in
/// [0, 1]; identically-zero data is rejected.
pub fn fit_forward_model(lengths: &[f64], efficiencies: &[f64]) -> Result<FitResult> {
    if lengths.len() != efficiencies.len() {
        return Err(Error::Validation(format!(
            "{} lengths vs {} efficiencies",
            lengths.len(),
            efficiencies.len()
        )));
    }
    if lengths.len() < 5 {
        return Err(Error::FitTooFewPoints(lengths.len()));
    }
    for pair in lengths.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(Error::Validation(
                "lengths must be strictly increasing".into(),
            ));
        }
    }
    if !(lengths[0] > 0.0) {
        return Err(Error::Validation("lengths must be positive".into()));
    }
    for &y in efficiencies {
        if !(0.0..=1.0).contains(&y) {
            return Err(Error::Validation(format!("efficiency {y} outside [0, 1]")));
        }
    }
    if efficiencies.iter().all(|&y| y == 0.0) {
        return Err(Error::FitDegenerate);
    }

    let l_min = lengths[0];
    let l_max = *lengths.last().unwrap();
    // Bracket alpha~ so the model peak 2/alpha~ can fall anywhere from well
    // before the first length to well past the last.
    let a_lo = 0.2 / l_max;
    let a_hi = 20.0 / l_min;
    let ratio = (a_hi / a_lo).powf(1.0 / (COARSE_POINTS - 1) as f64);
    let mut best_i = 0;
    let mut best_ss = f64::INFINITY;
    for i in 0..COARSE_POINTS {
        let a = a_lo * ratio.powi(i as i32);
        let (_, ss) = ssr_at(a, lengths, efficiencies);
        if ss < best_ss {
            best_ss = ss;
            best_i = i;
        }
    }
    let hit_bound = best_i == 0 || best_i == COARSE_POINTS - 1;
    let lo = a_lo * ratio.powi(best_i.saturating_sub(1) as i32);
    let hi = a_lo * ratio.powi(((best_i + 1).min(COARSE_POINTS - 1)) as i32);
    let alpha = golden_section(
        |a| ssr_at(a, lengths, efficiencies).1,
        lo,
        hi,
        ALPHA_REL_TOL,
    );
    let (eta0, ss) = ssr_at(alpha, lengths, efficiencies);
    let rms = (ss / lengths.len() as f64).sqrt();
    let physical = eta0 > 0.0 && eta0 <= 1.0 && alpha > 0.0;
    Ok(FitResult {
        eta0,
        alpha_tilde: alpha,
        rms_residual: rms,
        converged: !hit_bound && physical,
    })
}

/// Backward efficiency eta_b(L) = eta0 (1 - exp(-alpha~ L))^2 from a
/// converged fit.
pub fn backward_efficiency(fit: &FitResult, l_scale: f64) -> Result<f64> {
    if !fit.converged {
        return Err(Error::FitNotConverged);
    }
    let a = 1.0 - (-fit.alpha_tilde * l_scale).exp();
    Ok(fit.eta0 * a * a)
}

/// True when the fit residual passes the quality gate; backward estimates
/// from gated-out fits are unreliable.
pub fn fit_quality_gate(fit: &FitResult, threshold: f64) -> bool {
    fit.rms_residual <= threshold
}
