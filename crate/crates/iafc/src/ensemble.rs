//! Seeded Monte-Carlo engine over disordered combs.
//!
//! Every atom of the ensemble carries its own realization of the comb, and
//! detected intensities add incoherently: |E_total|^2 = sum_i |E_i|^2. One
//! perturbed comb per trial models one atom; the incoherent sum over atoms is
//! the Monte-Carlo mean over trials.
//!
//! Trials are independent and run in parallel. Each trial derives its random
//! stream from (master seed, trial index), and reductions are compensated and
//! chunk-ordered, so parallel and serial runs agree and permuting trial order
//! moves results by no more than ~1e-15 relative.

use std::collections::BTreeMap;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::comb::{perturb_depth, perturb_spacing, FrequencyComb};
use crate::error::{Error, Result};
use crate::spectral::{
    fine_intensity, gaussian_spectrum, make_grid, propagator, SpectralField, WindowQuadrature,
};

/// Which comb parameter fluctuates from atom to atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DisorderKind {
    /// No fluctuation; every trial sees the base comb.
    None,
    /// Tooth centers shift by uniform draws from [-strength * gamma, ...].
    Spacing,
    /// Tooth depths shift by uniform draws from [-strength, +strength].
    Depth,
}

impl DisorderKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            DisorderKind::None => "none",
            DisorderKind::Spacing => "spacing",
            DisorderKind::Depth => "depth",
        }
    }
}

/// Disorder model driving an ensemble run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisorderSpec {
    pub kind: DisorderKind,
    /// Spacing strength in units of the mean tooth width; depth strength as
    /// absolute depth. Must be >= 0.
    pub strength: f64,
    /// Number of Monte-Carlo trials (atoms), >= 1.
    pub n_trials: usize,
    /// Master seed; trial i uses the ChaCha stream (master_seed, i).
    pub master_seed: u64,
}

impl DisorderSpec {
    fn validate(&self) -> Result<()> {
        if !(self.strength >= 0.0) || !self.strength.is_finite() {
            return Err(Error::Validation(format!(
                "disorder strength must be >= 0, got {}",
                self.strength
            )));
        }
        if self.n_trials == 0 {
            return Err(Error::Validation("n_trials must be >= 1".into()));
        }
        Ok(())
    }

    fn is_identity(&self) -> bool {
        matches!(self.kind, DisorderKind::None) || self.strength == 0.0
    }
}

/// Non-negative mean intensity trace on a uniform time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityTrace {
    dt: f64,
    values: Vec<f64>,
}

impl IntensityTrace {
    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn time_at(&self, j: usize) -> f64 {
        j as f64 * self.dt
    }
}

/// Outcome of one disorder ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleResult {
    /// First-echo efficiency of the incoherently summed intensity.
    pub mean_efficiency: f64,
    /// Sample standard deviation of per-trial efficiencies over sqrt(n).
    pub std_error: f64,
    pub n_trials: usize,
    /// Mean |E(t)|^2 over trials, sampled at half the field time step.
    pub mean_intensity_trace: IntensityTrace,
    /// Per-trial efficiencies in trial order.
    pub per_trial_efficiencies: Option<Vec<f64>>,
}

/// One sweep curve: mean efficiency with standard error per abscissa value.
#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyCurve {
    pub abscissa: Vec<f64>,
    pub ordinate: Vec<f64>,
    pub errors: Vec<f64>,
    /// Parameter record carried into CSV metadata.
    pub metadata: BTreeMap<String, String>,
}

impl EfficiencyCurve {
    pub fn new(
        abscissa: Vec<f64>,
        ordinate: Vec<f64>,
        errors: Vec<f64>,
        metadata: BTreeMap<String, String>,
    ) -> Result<Self> {
        if abscissa.len() != ordinate.len() || abscissa.len() != errors.len() {
            return Err(Error::Validation("curve columns differ in length".into()));
        }
        for pair in abscissa.windows(2) {
            if !(pair[1] > pair[0]) {
                return Err(Error::Validation(
                    "curve abscissa must be strictly increasing".into(),
                ));
            }
        }
        Ok(Self {
            abscissa,
            ordinate,
            errors,
            metadata,
        })
    }
}

/// Neumaier compensated scalar accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated mean of a slice.
pub(crate) fn compensated_mean(values: &[f64]) -> f64 {
    let mut acc = Neumaier::default();
    for &v in values {
        acc.add(v);
    }
    acc.value() / values.len() as f64
}

fn sample_std_error(values: &[f64], mean: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mut acc = Neumaier::default();
    for &v in values {
        let d = v - mean;
        acc.add(d * d);
    }
    (acc.value() / (n - 1) as f64 / n as f64).sqrt()
}

/// Compensated elementwise accumulator for intensity traces.
struct TraceAccum {
    sum: Vec<f64>,
    comp: Vec<f64>,
}

impl TraceAccum {
    fn zeros(len: usize) -> Self {
        Self {
            sum: vec![0.0; len],
            comp: vec![0.0; len],
        }
    }

    fn add(&mut self, values: &[f64]) {
        for ((s, c), &v) in self.sum.iter_mut().zip(self.comp.iter_mut()).zip(values) {
            let t = *s + v;
            if s.abs() >= v.abs() {
                *c += (*s - t) + v;
            } else {
                *c += (v - t) + *s;
            }
            *s = t;
        }
    }

    fn merge(&mut self, other: &TraceAccum) {
        self.add(&other.sum);
        self.add(&other.comp);
    }

    fn into_mean(self, n: usize) -> Vec<f64> {
        self.sum
            .iter()
            .zip(&self.comp)
            .map(|(s, c)| ((s + c) / n as f64).max(0.0))
            .collect()
    }
}

/// splitmix64 mixing step.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic per-point master seed for sweep grids.
pub fn derive_seed(master: u64, lane: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(lane.wrapping_mul(0xA076_1D64_78BD_642F) ^ index))
}

/// The random stream of one trial: fixed key from the master seed, stream
/// counter set to the trial index.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

fn perturbed(base: &FrequencyComb, spec: &DisorderSpec, trial: u64) -> Result<FrequencyComb> {
    let mut rng = trial_rng(spec.master_seed, trial);
    match spec.kind {
        DisorderKind::None => Ok(base.clone()),
        DisorderKind::Spacing => perturb_spacing(base, spec.strength * base.mean_width(), &mut rng),
        DisorderKind::Depth => perturb_depth(base, spec.strength, &mut rng),
    }
}

/// Shared per-ensemble state: grid, input pulse, echo-window quadrature.
struct Engine {
    in_spec: SpectralField,
    e_in: f64,
    quad: WindowQuadrature,
}

impl Engine {
    fn new(base: &FrequencyComb, spec: &DisorderSpec, sigma: f64) -> Result<Self> {
        let grid = make_grid(base, sigma)?;
        // the grid margin must still hold for the largest possible shift
        if matches!(spec.kind, DisorderKind::Spacing) {
            let worst = base.max_abs_center() + spec.strength * base.mean_width();
            if worst > 0.45 * grid.span() {
                return Err(Error::Validation(format!(
                    "spacing disorder {} gamma pushes teeth to |{worst}| rad/us, beyond the grid margin",
                    spec.strength
                )));
            }
        }
        let delta = base
            .mean_spacing()
            .ok_or_else(|| Error::Validation("ensembles need a comb with >= 2 teeth".into()))?;
        let lo = std::f64::consts::PI / delta;
        let hi = 3.0 * std::f64::consts::PI / delta;
        let quad = WindowQuadrature::new(&grid, lo, hi)?;
        let in_spec = gaussian_spectrum(&grid, sigma)?;
        let e_in = in_spec.energy();
        Ok(Self {
            in_spec,
            e_in,
            quad,
        })
    }

    /// Propagator at unit length for one comb realization.
    fn unit_propagator(&self, comb: &FrequencyComb) -> Vec<num_complex::Complex64> {
        propagator(comb, self.in_spec.grid(), 1.0)
    }

    /// Output intensity on the doubled time grid after exp(-D L).
    fn intensity(&self, unit_dl: &[num_complex::Complex64], l_scale: f64) -> Vec<f64> {
        let amps: Vec<num_complex::Complex64> = self
            .in_spec
            .amplitudes()
            .iter()
            .zip(unit_dl)
            .map(|(a, d)| a * (-d * l_scale).exp())
            .collect();
        let field = SpectralField::new(*self.in_spec.grid(), amps)
            .expect("amplitudes constructed on the engine grid");
        fine_intensity(&field)
    }

    fn eta_of_intensity(&self, intensity: &[f64]) -> f64 {
        self.quad.integrate(intensity) / self.e_in
    }
}

fn chunk_size(n_trials: usize) -> usize {
    // bounded number of in-flight chunk partials; chunk boundaries depend
    // only on n_trials so reductions are schedule-independent
    n_trials.div_ceil(64).max(1)
}

/// Runs one disorder ensemble: perturb, propagate, sum intensities
/// incoherently, and report the efficiency of the mean trace together with
/// the spread of per-trial efficiencies.
pub fn run_ensemble(
    base: &FrequencyComb,
    spec: &DisorderSpec,
    sigma: f64,
    l_scale: f64,
) -> Result<EnsembleResult> {
    spec.validate()?;
    if !(l_scale >= 0.0) || !l_scale.is_finite() {
        return Err(Error::Validation(format!(
            "l_scale must be >= 0, got {l_scale}"
        )));
    }
    let engine = Engine::new(base, spec, sigma)?;

    if spec.is_identity() {
        // no randomness: one deterministic propagation, replicated
        let dl = engine.unit_propagator(base);
        let intensity = engine.intensity(&dl, l_scale);
        let eta = engine.eta_of_intensity(&intensity);
        return Ok(EnsembleResult {
            mean_efficiency: eta,
            std_error: 0.0,
            n_trials: spec.n_trials,
            mean_intensity_trace: IntensityTrace {
                dt: engine.in_spec.grid().dt() / 2.0,
                values: intensity,
            },
            per_trial_efficiencies: Some(vec![eta; spec.n_trials]),
        });
    }

    let n = spec.n_trials;
    let csize = chunk_size(n);
    let trace_len = 2 * engine.in_spec.grid().n_points();
    let chunk_results: Result<Vec<(usize, TraceAccum, Vec<f64>)>> = (0..n.div_ceil(csize))
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * csize;
            let end = (start + csize).min(n);
            let mut accum = TraceAccum::zeros(trace_len);
            let mut etas = Vec::with_capacity(end - start);
            for trial in start..end {
                let comb = perturbed(base, spec, trial as u64)?;
                let dl = engine.unit_propagator(&comb);
                let intensity = engine.intensity(&dl, l_scale);
                etas.push(engine.eta_of_intensity(&intensity));
                accum.add(&intensity);
            }
            Ok((chunk, accum, etas))
        })
        .collect();
    let mut chunk_results = chunk_results?;
    chunk_results.sort_by_key(|(i, _, _)| *i);

    let mut total = TraceAccum::zeros(trace_len);
    let mut per_trial = Vec::with_capacity(n);
    for (_, accum, etas) in &chunk_results {
        total.merge(accum);
        per_trial.extend_from_slice(etas);
    }
    let mean_trace = total.into_mean(n);
    let mean_efficiency = engine.eta_of_intensity(&mean_trace);
    let std_error = sample_std_error(&per_trial, compensated_mean(&per_trial));
    Ok(EnsembleResult {
        mean_efficiency,
        std_error,
        n_trials: n,
        mean_intensity_trace: IntensityTrace {
            dt: engine.in_spec.grid().dt() / 2.0,
            values: mean_trace,
        },
        per_trial_efficiencies: Some(per_trial),
    })
}

fn comb_at_finesse(base: &FrequencyComb, f: f64) -> Result<FrequencyComb> {
    let gamma = base.mean_width();
    crate::comb::uniform_comb(base.n_teeth(), f * gamma, gamma, base.total_depth())
}

/// Sweeps disorder strength at several finesse values: one curve per finesse,
/// finesse realized by scaling the spacing at fixed tooth width. The pulse
/// width follows the spacing as sigma = sigma_per_delta * delta.
#[allow(clippy::too_many_arguments)]
pub fn sweep_strength(
    base: &FrequencyComb,
    kind: DisorderKind,
    strengths: &[f64],
    finesses: &[f64],
    sigma_per_delta: f64,
    l_scale: f64,
    n_trials: usize,
    master_seed: u64,
) -> Result<Vec<EfficiencyCurve>> {
    if strengths.is_empty() || finesses.is_empty() {
        return Err(Error::Validation(
            "sweep needs strengths and finesses".into(),
        ));
    }
    for pair in strengths.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(Error::Validation(
                "strengths must be strictly increasing".into(),
            ));
        }
    }
    let mut curves = Vec::with_capacity(finesses.len());
    for (fi, &f) in finesses.iter().enumerate() {
        let comb = comb_at_finesse(base, f)?;
        let delta = f * base.mean_width();
        let sigma = sigma_per_delta * delta;
        let mut ordinate = Vec::with_capacity(strengths.len());
        let mut errors = Vec::with_capacity(strengths.len());
        for (si, &strength) in strengths.iter().enumerate() {
            let spec = DisorderSpec {
                kind,
                strength,
                n_trials,
                master_seed: derive_seed(master_seed, fi as u64, si as u64),
            };
            let res = run_ensemble(&comb, &spec, sigma, l_scale)?;
            ordinate.push(res.mean_efficiency);
            errors.push(res.std_error);
        }
        let mut metadata = BTreeMap::new();
        metadata.insert("iafc_version".into(), env!("CARGO_PKG_VERSION").to_string());
        metadata.insert("kind".into(), kind.as_str().to_string());
        metadata.insert("finesse".into(), f.to_string());
        metadata.insert("n_teeth".into(), comb.n_teeth().to_string());
        metadata.insert("gamma".into(), base.mean_width().to_string());
        metadata.insert("delta".into(), delta.to_string());
        metadata.insert("total_depth".into(), comb.total_depth().to_string());
        metadata.insert("sigma_per_delta".into(), sigma_per_delta.to_string());
        metadata.insert("l_scale".into(), l_scale.to_string());
        metadata.insert("n_trials".into(), n_trials.to_string());
        metadata.insert("master_seed".into(), master_seed.to_string());
        curves.push(EfficiencyCurve::new(
            strengths.to_vec(),
            ordinate,
            errors,
            metadata,
        )?);
    }
    Ok(curves)
}

/// Mean forward efficiency versus propagation length. Each trial keeps its
/// comb realization across the whole length grid (one atom, many lengths), so
/// per-trial curves are smooth and the Monte-Carlo noise is shared between
/// neighboring lengths.
pub fn sweep_length(
    base: &FrequencyComb,
    spec: &DisorderSpec,
    sigma: f64,
    l_grid: &[f64],
) -> Result<EfficiencyCurve> {
    spec.validate()?;
    if l_grid.len() < 8 {
        return Err(Error::Validation(format!(
            "length sweep needs >= 8 points, got {}",
            l_grid.len()
        )));
    }
    for pair in l_grid.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(Error::Validation(
                "length grid must be strictly increasing".into(),
            ));
        }
    }
    if !(l_grid[0] > 0.0) {
        return Err(Error::Validation("lengths must be positive".into()));
    }
    let engine = Engine::new(base, spec, sigma)?;

    let n = if spec.is_identity() { 1 } else { spec.n_trials };
    let per_trial: Result<Vec<(usize, Vec<f64>)>> = (0..n)
        .into_par_iter()
        .map(|trial| {
            let comb = perturbed(base, spec, trial as u64)?;
            let dl = engine.unit_propagator(&comb);
            let etas = l_grid
                .iter()
                .map(|&l| engine.eta_of_intensity(&engine.intensity(&dl, l)))
                .collect();
            Ok((trial, etas))
        })
        .collect();
    let mut per_trial = per_trial?;
    per_trial.sort_by_key(|(i, _)| *i);

    let mut ordinate = Vec::with_capacity(l_grid.len());
    let mut errors = Vec::with_capacity(l_grid.len());
    for li in 0..l_grid.len() {
        let column: Vec<f64> = per_trial.iter().map(|(_, etas)| etas[li]).collect();
        let mean = compensated_mean(&column);
        ordinate.push(mean);
        errors.push(if spec.is_identity() {
            0.0
        } else {
            sample_std_error(&column, mean)
        });
    }
    let mut metadata = BTreeMap::new();
    metadata.insert("iafc_version".into(), env!("CARGO_PKG_VERSION").to_string());
    metadata.insert("kind".into(), spec.kind.as_str().to_string());
    metadata.insert("strength".into(), spec.strength.to_string());
    metadata.insert("n_teeth".into(), base.n_teeth().to_string());
    metadata.insert("gamma".into(), base.mean_width().to_string());
    metadata.insert(
        "delta".into(),
        base.mean_spacing()
            .map(|d| d.to_string())
            .unwrap_or_default(),
    );
    metadata.insert("total_depth".into(), base.total_depth().to_string());
    metadata.insert("sigma".into(), sigma.to_string());
    metadata.insert("n_trials".into(), spec.n_trials.to_string());
    metadata.insert("master_seed".into(), spec.master_seed.to_string());
    EfficiencyCurve::new(l_grid.to_vec(), ordinate, errors, metadata)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::uniform_comb;
    use crate::spectral::{first_echo_efficiency, propagate_forward};

    const TAU: f64 = std::f64::consts::TAU;

    fn baseline() -> FrequencyComb {
        uniform_comb(7, TAU * 100.0, TAU * 5.0, 30.0).unwrap()
    }

    fn spacing_spec(strength: f64, n_trials: usize, seed: u64) -> DisorderSpec {
        DisorderSpec {
            kind: DisorderKind::Spacing,
            strength,
            n_trials,
            master_seed: seed,
        }
    }

    #[test]
    fn identity_ensemble_equals_single_propagation() {
        let comb = baseline();
        let sigma = 2.0 * TAU * 100.0;
        let spec = DisorderSpec {
            kind: DisorderKind::None,
            strength: 0.0,
            n_trials: 17,
            master_seed: 9,
        };
        let res = run_ensemble(&comb, &spec, sigma, 1.0).unwrap();
        let grid = make_grid(&comb, sigma).unwrap();
        let pulse = gaussian_spectrum(&grid, sigma).unwrap();
        let (_, time) = propagate_forward(&pulse, &comb, 1.0).unwrap();
        let eta = first_echo_efficiency(&time, &pulse.to_time(), TAU * 100.0).unwrap();
        // the two code paths sum in different orders; agreement to 1e-13 rel
        assert!((res.mean_efficiency - eta).abs() <= 1e-13 * eta);
        assert_eq!(res.std_error, 0.0);
        // within the ensemble the trials are literal replicas
        for &per in res.per_trial_efficiencies.as_ref().unwrap() {
            assert_eq!(per.to_bits(), res.mean_efficiency.to_bits());
        }
    }

    #[test]
    fn zero_strength_matches_kind_none() {
        let comb = baseline();
        let sigma = 2.0 * TAU * 100.0;
        let a = run_ensemble(&comb, &spacing_spec(0.0, 3, 1), sigma, 1.0).unwrap();
        let b = run_ensemble(
            &comb,
            &DisorderSpec {
                kind: DisorderKind::None,
                strength: 5.0,
                n_trials: 3,
                master_seed: 2,
            },
            sigma,
            1.0,
        )
        .unwrap();
        assert_eq!(a.mean_efficiency, b.mean_efficiency);
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let comb = baseline();
        let sigma = 2.0 * TAU * 100.0;
        let spec = spacing_spec(10.0, 24, 777);
        let a = run_ensemble(&comb, &spec, sigma, 1.0).unwrap();
        let b = run_ensemble(&comb, &spec, sigma, 1.0).unwrap();
        assert_eq!(a.mean_efficiency.to_bits(), b.mean_efficiency.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
        assert_eq!(a.per_trial_efficiencies, b.per_trial_efficiencies);
        assert_eq!(a.mean_intensity_trace, b.mean_intensity_trace);
    }

    #[test]
    fn different_seeds_differ() {
        let comb = baseline();
        let sigma = 2.0 * TAU * 100.0;
        let a = run_ensemble(&comb, &spacing_spec(10.0, 8, 1), sigma, 1.0).unwrap();
        let b = run_ensemble(&comb, &spacing_spec(10.0, 8, 2), sigma, 1.0).unwrap();
        assert_ne!(a.mean_efficiency, b.mean_efficiency);
    }

    #[test]
    fn trace_efficiency_equals_mean_of_per_trial() {
        let comb = baseline();
        let sigma = 2.0 * TAU * 100.0;
        let res = run_ensemble(&comb, &spacing_spec(12.0, 40, 5), sigma, 1.0).unwrap();
        let per = res.per_trial_efficiencies.as_ref().unwrap();
        let mean = compensated_mean(per);
        assert!(
            (res.mean_efficiency - mean).abs() < 1e-12,
            "trace eta {} vs per-trial mean {}",
            res.mean_efficiency,
            mean
        );
    }

    #[test]
    fn trial_order_permutation_is_invariant() {
        let comb = baseline();
        let sigma = 2.0 * TAU * 100.0;
        let res = run_ensemble(&comb, &spacing_spec(12.0, 50, 11), sigma, 1.0).unwrap();
        let per = res.per_trial_efficiencies.unwrap();
        let forward = compensated_mean(&per);
        let mut reversed = per.clone();
        reversed.reverse();
        let mut shuffled = per.clone();
        shuffled.sort_by(f64::total_cmp);
        assert!((forward - compensated_mean(&reversed)).abs() < 1e-12);
        assert!((forward - compensated_mean(&shuffled)).abs() < 1e-12);
    }

    #[test]
    fn std_error_shrinks_like_root_n() {
        let comb = baseline();
        let sigma = 2.0 * TAU * 100.0;
        let small = run_ensemble(&comb, &spacing_spec(10.0, 60, 3), sigma, 1.0).unwrap();
        let large = run_ensemble(&comb, &spacing_spec(10.0, 240, 3), sigma, 1.0).unwrap();
        let ratio = small.std_error / large.std_error;
        assert!(
            (ratio - 2.0).abs() < 0.6,
            "quadrupling trials should roughly halve the SE, ratio = {ratio}"
        );
    }

    #[test]
    fn depth_disorder_never_builds_negative_teeth() {
        let comb = baseline();
        for trial in 0..50 {
            let spec = DisorderSpec {
                kind: DisorderKind::Depth,
                strength: 30.0 / 7.0, // strength comparable to the depth itself
                n_trials: 1,
                master_seed: 99,
            };
            let c = perturbed(&comb, &spec, trial).unwrap();
            assert!(c.teeth().iter().all(|t| t.depth >= 0.0));
        }
    }

    #[test]
    fn sweep_strength_zero_only_matches_simulate() {
        let comb = baseline();
        let curves = sweep_strength(
            &comb,
            DisorderKind::Spacing,
            &[0.0],
            &[20.0],
            2.0,
            1.0,
            10,
            123,
        )
        .unwrap();
        assert_eq!(curves.len(), 1);
        let res = run_ensemble(
            &comb,
            &DisorderSpec {
                kind: DisorderKind::None,
                strength: 0.0,
                n_trials: 1,
                master_seed: 0,
            },
            2.0 * TAU * 100.0,
            1.0,
        )
        .unwrap();
        assert!((curves[0].ordinate[0] - res.mean_efficiency).abs() < 1e-15);
        assert_eq!(curves[0].errors[0], 0.0);
    }

    #[test]
    fn sweep_rejects_bad_grids() {
        let comb = baseline();
        assert!(sweep_strength(
            &comb,
            DisorderKind::Spacing,
            &[5.0, 1.0],
            &[20.0],
            2.0,
            1.0,
            4,
            0
        )
        .is_err());
        assert!(
            sweep_strength(&comb, DisorderKind::Spacing, &[], &[20.0], 2.0, 1.0, 4, 0).is_err()
        );
        let spec = spacing_spec(5.0, 4, 0);
        assert!(sweep_length(&comb, &spec, 2.0 * TAU * 100.0, &[1.0, 2.0, 3.0]).is_err());
        let decreasing: Vec<f64> = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 6.5];
        assert!(sweep_length(&comb, &spec, 2.0 * TAU * 100.0, &decreasing).is_err());
    }

    #[test]
    fn unperturbed_length_sweep_peaks_near_analytic_optimum() {
        // alpha~ per unit length = 2 pi alphaL / (n F); peak at alpha~ L = 2
        let comb = baseline();
        let spec = DisorderSpec {
            kind: DisorderKind::None,
            strength: 0.0,
            n_trials: 1,
            master_seed: 0,
        };
        let l_grid: Vec<f64> = (1..=14).map(|i| i as f64 * 0.25).collect();
        let curve = sweep_length(&comb, &spec, 2.0 * TAU * 100.0, &l_grid).unwrap();
        let best = curve
            .ordinate
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        let l_peak_analytic = 2.0 * 7.0 * 20.0 / (TAU * 30.0); // 1.485
        assert!(
            (curve.abscissa[best] - l_peak_analytic).abs() <= 0.25 + 1e-12,
            "peak at L = {} vs analytic {}",
            curve.abscissa[best],
            l_peak_analytic
        );
    }

    #[test]
    fn derive_seed_separates_lanes() {
        let a = derive_seed(42, 0, 0);
        let b = derive_seed(42, 0, 1);
        let c = derive_seed(42, 1, 0);
        let d = derive_seed(43, 0, 0);
        assert!(a != b && a != c && a != d && b != c);
    }
}
