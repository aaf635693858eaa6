//! Thermal ground-state populations and their effect on tooth depths.
//!
//! At temperature T the m-th ground state carries the Boltzmann weight
//! w_m = exp(-E_m / k_B T) / Z. The only role of these populations is to
//! rescale the absorption depth of the teeth fed by each ground state.

use crate::comb::{FrequencyComb, Tooth};
use crate::error::{Error, Result};

/// Boltzmann constant (J/K, exact SI).
pub const K_BOLTZMANN: f64 = 1.380_649e-23;
/// Reduced Planck constant (J s, CODATA 2018).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Ground energies are supplied as angular frequencies E/hbar in rad/us.
const RAD_PER_US_TO_RAD_PER_S: f64 = 1e6;

/// Ground-state manifold description for thermal reweighting.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalSpec {
    /// Energy of each ground state, expressed as E/hbar in rad/us.
    pub ground_energies: Vec<f64>,
    /// Temperature in kelvin, > 0.
    pub temperature: f64,
    /// Ground-state index feeding each tooth, one entry per tooth.
    pub tooth_assignment: Vec<usize>,
}

impl ThermalSpec {
    /// One ground state per tooth, assigned in center order, energies equally
    /// spaced from 0 to `span` (rad/us).
    pub fn equally_spaced(n_states: usize, span: f64, temperature: f64) -> Self {
        let step = if n_states > 1 {
            span / (n_states - 1) as f64
        } else {
            0.0
        };
        Self {
            ground_energies: (0..n_states).map(|m| m as f64 * step).collect(),
            temperature,
            tooth_assignment: (0..n_states).collect(),
        }
    }
}

/// Boltzmann weights w_m = exp(-E_m/k_B T)/Z over the ground states.
///
/// The exponents are shifted by their maximum before exponentiation so that
/// the largest term is exactly 1 and the sum cannot overflow.
pub fn boltzmann_weights(spec: &ThermalSpec) -> Result<Vec<f64>> {
    if spec.ground_energies.is_empty() {
        return Err(Error::Validation("need at least one ground state".into()));
    }
    if !(spec.temperature > 0.0) {
        return Err(Error::Validation(format!(
            "temperature must be > 0 K, got {}",
            spec.temperature
        )));
    }
    let beta = HBAR * RAD_PER_US_TO_RAD_PER_S / (K_BOLTZMANN * spec.temperature);
    let exponents: Vec<f64> = spec.ground_energies.iter().map(|e| -beta * e).collect();
    let x_max = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let unnorm: Vec<f64> = exponents.iter().map(|x| (x - x_max).exp()).collect();
    let z: f64 = unnorm.iter().sum();
    Ok(unnorm.into_iter().map(|u| u / z).collect())
}

/// Rescales tooth depths by the population of their assigned ground state:
/// depth_n -> depth_n * w_{m(n)} * M.
///
/// The M factor normalizes the convention so that uniform weights reproduce
/// the input comb exactly.
pub fn apply_populations(
    comb: &FrequencyComb,
    weights: &[f64],
    assignment: &[usize],
) -> Result<FrequencyComb> {
    if assignment.len() != comb.n_teeth() {
        return Err(Error::Validation(format!(
            "assignment maps {} teeth but the comb has {}",
            assignment.len(),
            comb.n_teeth()
        )));
    }
    let m = weights.len() as f64;
    let teeth = comb
        .teeth()
        .iter()
        .zip(assignment)
        .map(|(t, &g)| {
            let w = weights.get(g).ok_or_else(|| {
                Error::Validation(format!(
                    "tooth assigned to ground state {g}, only {} exist",
                    weights.len()
                ))
            })?;
            // grouping (w * m) first makes uniform weights an exact identity
            Ok(Tooth {
                depth: t.depth * (w * m),
                ..*t
            })
        })
        .collect::<Result<Vec<_>>>()?;
    FrequencyComb::new(teeth, comb.label.clone())
}
