//! Simulator and analysis toolkit for intra-atomic frequency-comb (I-AFC)
//! photon-echo quantum memories.
//!
//! The crate propagates weak light pulses through comb-structured absorbers in
//! the spectral domain, computes photon-echo traces and storage efficiencies,
//! quantifies robustness under randomized comb spacing, randomized optical
//! depth and thermal ground-state populations, and estimates
//! backward-retrieval efficiency by fitting the analytic AFC model to length
//! sweeps.
//!
//! Units: angular frequencies in rad/us, time in us. A "5 MHz" tooth width is
//! `gamma = 2 pi * 5` rad/us, and a comb of spacing `delta` echoes at
//! `t = 2 pi / delta` us.
//!
//! Start with [`comb::uniform_comb`] and [`spectral::propagate_forward`], or
//! run the examples (one per capability): `echo_trace`, `analytic_table`,
//! `spacing_disorder`, `depth_disorder`, `backward_pipeline`, `thermal_shift`.

// validation guards use the negated form `!(x > 0.0)` so that NaN fails them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod comb;
pub mod config;
pub mod csvio;
pub mod ensemble;
pub mod error;
pub mod fit;
pub mod run;
pub mod spectral;
pub mod svg;
pub mod thermal;

pub use comb::{finesse, perturb_depth, perturb_spacing, uniform_comb, FrequencyComb, Tooth};
pub use ensemble::{
    run_ensemble, sweep_length, sweep_strength, DisorderKind, DisorderSpec, EfficiencyCurve,
    EnsembleResult,
};
pub use error::{Error, Result};
pub use fit::{backward_efficiency, fit_forward_model, fit_quality_gate, FitResult};
pub use spectral::{
    first_echo_efficiency, gaussian_spectrum, make_grid, propagate_forward, propagator,
    SpectralField, SpectralGrid, TimeField,
};
pub use thermal::{apply_populations, boltzmann_weights, ThermalSpec};
