//! Frequency/time grids, the I-AFC propagator D(omega), pulse propagation
//! through exp(-D L) and first-echo efficiencies.
//!
//! Conventions: the spectral grid is centered on omega = 0 (detuning from the
//! carrier), omega_k = (k - n/2) d_omega. The time-domain field is
//!
//! ```text
//! E(t_j) = (d_omega / 2 pi) * sum_k E(omega_k) exp(+i omega_k t_j)
//! ```
//!
//! so a causal absorber rings at positive times and the comb rephases at
//! t = 2 pi / delta. Window integrals of |E(t)|^2 are evaluated exactly for
//! the band-limited field (the intensity is resolved on a doubled grid and
//! integrated per Fourier component), because |E|^2 carries twice the field
//! bandwidth and plain sample-domain quadrature aliases it.

use std::sync::Mutex;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};
use std::sync::Arc;

use crate::comb::FrequencyComb;
use crate::error::{Error, Result};

const TAU: f64 = std::f64::consts::TAU;

/// Default cap on spectral grid size (2^22 points).
pub const DEFAULT_MAX_POINTS: usize = 1 << 22;

/// How many grid steps must resolve the narrowest tooth width.
const STEPS_PER_WIDTH: f64 = 20.0;
/// Time record must cover at least this many echo periods.
const ECHO_PERIODS: f64 = 3.0;
/// Spectral span margin in pulse widths on each side of the outermost tooth.
const SIGMA_MARGIN: f64 = 6.0;

static PLANNER: Mutex<Option<FftPlanner<f64>>> = Mutex::new(None);

fn plan(n: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    let mut guard = PLANNER.lock().unwrap();
    let planner = guard.get_or_insert_with(FftPlanner::new);
    match direction {
        FftDirection::Forward => planner.plan_fft_forward(n),
        FftDirection::Inverse => planner.plan_fft_inverse(n),
    }
}

fn run_fft(buf: &mut [Complex64], direction: FftDirection) {
    let fft = plan(buf.len(), direction);
    let mut scratch = vec![Complex64::ZERO; fft.get_inplace_scratch_len()];
    fft.process_with_scratch(buf, &mut scratch);
}

/// Uniform frequency grid: power-of-two point count, centered on omega = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralGrid {
    n_points: usize,
    d_omega: f64,
}

impl SpectralGrid {
    /// Validates the raw parameters (power-of-two count, positive step).
    pub fn new(n_points: usize, d_omega: f64) -> Result<Self> {
        if n_points < 2 || !n_points.is_power_of_two() {
            return Err(Error::Validation(format!(
                "n_points must be a power of two >= 2, got {n_points}"
            )));
        }
        if !(d_omega > 0.0) || !d_omega.is_finite() {
            return Err(Error::Validation(format!(
                "d_omega must be > 0, got {d_omega}"
            )));
        }
        Ok(Self { n_points, d_omega })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn d_omega(&self) -> f64 {
        self.d_omega
    }

    /// Total spectral span n * d_omega (rad/us).
    pub fn span(&self) -> f64 {
        self.n_points as f64 * self.d_omega
    }

    /// Angular frequency of sample k.
    pub fn omega_at(&self, k: usize) -> f64 {
        (k as f64 - self.n_points as f64 / 2.0) * self.d_omega
    }

    /// Time step of the conjugate uniform time grid (us).
    pub fn dt(&self) -> f64 {
        TAU / self.span()
    }

    /// Duration of the time record 2 pi / d_omega (us).
    pub fn duration(&self) -> f64 {
        TAU / self.d_omega
    }
}

/// Complex field samples in the frequency domain.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: SpectralGrid,
    amplitudes: Vec<Complex64>,
}

impl SpectralField {
    pub fn new(grid: SpectralGrid, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.n_points() {
            return Err(Error::GridMismatch(format!(
                "{} amplitudes on a {}-point grid",
                amplitudes.len(),
                grid.n_points()
            )));
        }
        if amplitudes
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::Validation("non-finite spectral amplitude".into()));
        }
        Ok(Self { grid, amplitudes })
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Field energy integral (1/2pi) int |E(omega)|^2 d omega.
    pub fn energy(&self) -> f64 {
        let sum: f64 = self.amplitudes.iter().map(|a| a.norm_sqr()).sum();
        sum * self.grid.d_omega / TAU
    }

    /// Inverse transform onto the conjugate uniform time grid.
    pub fn to_time(&self) -> TimeField {
        let mut buf = self.amplitudes.clone();
        run_fft(&mut buf, FftDirection::Inverse);
        let scale = self.grid.d_omega / TAU;
        for (j, a) in buf.iter_mut().enumerate() {
            let sign = if j.is_multiple_of(2) { scale } else { -scale };
            *a *= sign;
        }
        TimeField {
            dt: self.grid.dt(),
            amplitudes: buf,
        }
    }
}

/// Complex field samples on a uniform time grid t_j = j * dt.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeField {
    dt: f64,
    amplitudes: Vec<Complex64>,
}

impl TimeField {
    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn time_at(&self, j: usize) -> f64 {
        j as f64 * self.dt
    }

    /// Materialized sample times (us).
    pub fn times(&self) -> Vec<f64> {
        (0..self.amplitudes.len())
            .map(|j| self.time_at(j))
            .collect()
    }

    /// Duration of the periodic record.
    pub fn duration(&self) -> f64 {
        self.dt * self.amplitudes.len() as f64
    }

    /// Total energy int |E(t)|^2 dt over the full record.
    pub fn energy(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.dt
    }

    /// Recovers the spectral samples this field was transformed from.
    pub fn to_spectrum(&self) -> SpectralField {
        let n = self.amplitudes.len();
        let d_omega = TAU / (self.dt * n as f64);
        let inv_scale = TAU / d_omega;
        let mut buf: Vec<Complex64> = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(j, a)| {
                if j.is_multiple_of(2) {
                    a * inv_scale
                } else {
                    -a * inv_scale
                }
            })
            .collect();
        run_fft(&mut buf, FftDirection::Forward);
        let norm = 1.0 / n as f64;
        for a in &mut buf {
            *a *= norm;
        }
        SpectralField {
            grid: SpectralGrid {
                n_points: n,
                d_omega,
            },
            amplitudes: buf,
        }
    }
}

/// Smallest power-of-two grid resolving every tooth (d_omega <= gamma_min/20),
/// spanning the comb plus pulse margin, and covering three echo periods in
/// time. Grids above `max_points` are rejected.
pub fn make_grid_with(
    comb: &FrequencyComb,
    pulse_sigma: f64,
    max_points: usize,
) -> Result<SpectralGrid> {
    if !(pulse_sigma > 0.0) || !pulse_sigma.is_finite() {
        return Err(Error::Validation(format!(
            "pulse_sigma must be > 0, got {pulse_sigma}"
        )));
    }
    let mut d_omega_max = comb.min_width() / STEPS_PER_WIDTH;
    if let Some(delta) = comb.mean_spacing() {
        d_omega_max = d_omega_max.min(delta / ECHO_PERIODS);
    }
    let span_min = 2.0 * (comb.max_abs_center() + SIGMA_MARGIN * pulse_sigma);
    let required = (span_min / d_omega_max).ceil();
    if !required.is_finite() || required > max_points as f64 {
        return Err(Error::GridTooLarge {
            required: if required.is_finite() {
                required as usize
            } else {
                usize::MAX
            },
            max: max_points,
        });
    }
    let n = (required as usize).max(2).next_power_of_two();
    if n > max_points {
        return Err(Error::GridTooLarge {
            required: n,
            max: max_points,
        });
    }
    // Tighten the step so the span sits exactly at its minimum; this keeps
    // d_omega at or below the tooth-resolution bound.
    SpectralGrid::new(n, span_min / n as f64)
}

/// [`make_grid_with`] at the default 2^22-point cap.
pub fn make_grid(comb: &FrequencyComb, pulse_sigma: f64) -> Result<SpectralGrid> {
    make_grid_with(comb, pulse_sigma, DEFAULT_MAX_POINTS)
}

/// Gaussian input spectrum exp(-omega^2 / 2 sigma^2) sampled on the grid.
pub fn gaussian_spectrum(grid: &SpectralGrid, sigma: f64) -> Result<SpectralField> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::Validation(format!("sigma must be > 0, got {sigma}")));
    }
    let amplitudes = (0..grid.n_points())
        .map(|k| {
            let w = grid.omega_at(k);
            Complex64::new((-w * w / (2.0 * sigma * sigma)).exp(), 0.0)
        })
        .collect();
    SpectralField::new(*grid, amplitudes)
}

/// The propagator times length, (D L)(omega_k), on the grid:
///
/// ```text
/// (D L)(omega) = sum_n depth_n * L / (1/2 + i (omega - center_n)/width_n)
/// ```
///
/// The free-space phase i omega L / c is dropped (retarded frame), so
/// Re(D L) >= 0 everywhere and the medium is passive.
pub fn propagator(comb: &FrequencyComb, grid: &SpectralGrid, l_scale: f64) -> Vec<Complex64> {
    let teeth = comb.teeth();
    (0..grid.n_points())
        .map(|k| {
            let w = grid.omega_at(k);
            let mut d = Complex64::ZERO;
            for t in teeth {
                d += Complex64::new(0.5, (w - t.center) / t.width).inv() * (t.depth * l_scale);
            }
            d
        })
        .collect()
}

fn check_grid_compatibility(comb: &FrequencyComb, grid: &SpectralGrid) -> Result<()> {
    let half_span = grid.span() / 2.0;
    let c_max = comb.max_abs_center();
    if c_max > 0.45 * grid.span() {
        return Err(Error::GridMismatch(format!(
            "outermost tooth at |{c_max}| rad/us sits outside the grid half-span {half_span}"
        )));
    }
    if grid.d_omega() > comb.min_width() / 10.0 {
        return Err(Error::GridMismatch(format!(
            "grid step {} rad/us too coarse for tooth width {}",
            grid.d_omega(),
            comb.min_width()
        )));
    }
    Ok(())
}

/// Propagates a pulse through the comb over `l_scale` unit lengths:
/// E(L, omega) = E(0, omega) exp(-D(omega) L), plus the time-domain view.
pub fn propagate_forward(
    pulse: &SpectralField,
    comb: &FrequencyComb,
    l_scale: f64,
) -> Result<(SpectralField, TimeField)> {
    if !(l_scale >= 0.0) || !l_scale.is_finite() {
        return Err(Error::Validation(format!(
            "l_scale must be >= 0, got {l_scale}"
        )));
    }
    check_grid_compatibility(comb, pulse.grid())?;
    let dl = propagator(comb, pulse.grid(), l_scale);
    let amplitudes: Vec<Complex64> = pulse
        .amplitudes()
        .iter()
        .zip(&dl)
        .map(|(a, d)| a * (-d).exp())
        .collect();
    let out = SpectralField::new(*pulse.grid(), amplitudes)?;
    let time = out.to_time();
    Ok((out, time))
}

/// |E(t)|^2 sampled on the doubled time grid (2n points, step dt/2).
///
/// The doubling matters: the intensity carries twice the field bandwidth, so
/// it is critically sampled only on the refined grid. Window integrals taken
/// from these samples are then exact for the band-limited field.
pub fn fine_intensity(spectrum: &SpectralField) -> Vec<f64> {
    let n = spectrum.grid().n_points();
    let d_omega = spectrum.grid().d_omega();
    let mut pad = vec![Complex64::ZERO; 2 * n];
    pad[n / 2..n / 2 + n].copy_from_slice(spectrum.amplitudes());
    run_fft(&mut pad, FftDirection::Inverse);
    // |(d_omega/2pi) * (-1)^j * u_j|^2 : the sign cancels in the modulus
    let scale = (d_omega / TAU) * (d_omega / TAU);
    pad.iter().map(|u| u.norm_sqr() * scale).collect()
}

/// Exact quadrature weights for integrating a critically-sampled intensity
/// over a fixed time window: each intensity Fourier component is integrated
/// in closed form, which reduces to a fixed dot product over the samples.
#[derive(Debug, Clone)]
pub struct WindowQuadrature {
    weights: Vec<f64>,
    lo: f64,
    hi: f64,
}

impl WindowQuadrature {
    /// Builds weights for the window [lo, hi] on the doubled time grid of
    /// `grid` (as produced by [`fine_intensity`]).
    pub fn new(grid: &SpectralGrid, lo: f64, hi: f64) -> Result<Self> {
        let duration = grid.duration();
        if !(lo >= 0.0) || hi <= lo {
            return Err(Error::Validation(format!("bad window [{lo}, {hi}]")));
        }
        if hi > duration {
            return Err(Error::EchoWindow {
                lo,
                hi,
                t_max: duration,
            });
        }
        let n = grid.n_points();
        let m = 2 * n;
        let d_omega = grid.d_omega();
        // W_q = integral of exp(i nu_q t) over [lo, hi]
        let mut w: Vec<Complex64> = (0..m)
            .map(|q| {
                let q_signed = if q < n {
                    q as isize
                } else {
                    q as isize - m as isize
                };
                let nu = q_signed as f64 * d_omega;
                if q_signed == 0 {
                    Complex64::new(hi - lo, 0.0)
                } else {
                    let e_hi = Complex64::new(0.0, nu * hi).exp();
                    let e_lo = Complex64::new(0.0, nu * lo).exp();
                    (e_hi - e_lo) / Complex64::new(0.0, nu)
                }
            })
            .collect();
        // weights_j = (1/m) sum_q W_q exp(-2 pi i j q / m): a forward DFT.
        // W has conjugate symmetry, so the result is real.
        run_fft(&mut w, FftDirection::Forward);
        Ok(Self {
            weights: w.iter().map(|c| c.re / m as f64).collect(),
            lo,
            hi,
        })
    }

    pub fn window(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// The window integral of the intensity samples; exact for band-limited
    /// fields, linear in the samples.
    pub fn integrate(&self, intensity: &[f64]) -> f64 {
        debug_assert_eq!(intensity.len(), self.weights.len());
        let sum: f64 = intensity
            .iter()
            .zip(&self.weights)
            .map(|(i, w)| i * w)
            .sum();
        sum.max(0.0)
    }
}

/// Exact integral of |E(t)|^2 over [lo, hi] for the band-limited field given
/// by its spectral samples.
pub fn windowed_energy(spectrum: &SpectralField, lo: f64, hi: f64) -> Result<f64> {
    let quad = WindowQuadrature::new(spectrum.grid(), lo, hi)?;
    Ok(quad.integrate(&fine_intensity(spectrum)))
}

/// First-echo efficiency: the output intensity integrated over the window
/// [pi/delta, 3 pi/delta], divided by the total input energy.
pub fn first_echo_efficiency(out: &TimeField, input: &TimeField, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::Validation(format!("delta must be > 0, got {delta}")));
    }
    if out.len() != input.len() || out.dt() != input.dt() {
        return Err(Error::GridMismatch(format!(
            "output ({} pts, dt {}) and input ({} pts, dt {}) differ",
            out.len(),
            out.dt(),
            input.len(),
            input.dt()
        )));
    }
    let lo = std::f64::consts::PI / delta;
    let hi = 3.0 * std::f64::consts::PI / delta;
    if hi > out.duration() {
        return Err(Error::EchoWindow {
            lo,
            hi,
            t_max: out.duration(),
        });
    }
    let denom = input.energy();
    if denom == 0.0 {
        return Err(Error::Validation("input field carries no energy".into()));
    }
    let num = windowed_energy(&out.to_spectrum(), lo, hi)?;
    Ok(num / denom)
}

/// Location of the intensity maximum in a time window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EchoPeak {
    /// Sample time of the maximum |E|^2 in the window (us).
    pub time: f64,
    /// False when no peak stands out of the window background (for example a
    /// single-line absorber, which has no comb periodicity and no echo).
    pub distinct: bool,
}

/// Finds the intensity peak of `out` inside `[lo, hi]`.
///
/// The peak is flagged `distinct` when it exceeds three times the mean
/// intensity of the window.
pub fn echo_peak_time(out: &TimeField, window: (f64, f64)) -> Result<EchoPeak> {
    let (lo, hi) = window;
    if !(lo < hi) {
        return Err(Error::Validation(format!("empty window [{lo}, {hi}]")));
    }
    if hi > out.duration() {
        return Err(Error::EchoWindow {
            lo,
            hi,
            t_max: out.duration(),
        });
    }
    let dt = out.dt();
    let j0 = (lo / dt).ceil() as usize;
    let j1 = ((hi / dt).floor() as usize).min(out.len().saturating_sub(1));
    if j0 > j1 {
        return Err(Error::Validation(format!(
            "window [{lo}, {hi}] contains no samples"
        )));
    }
    let mut best_j = j0;
    let mut best = -1.0;
    let mut sum = 0.0;
    for j in j0..=j1 {
        let v = out.amplitudes()[j].norm_sqr();
        sum += v;
        if v > best {
            best = v;
            best_j = j;
        }
    }
    let mean = sum / (j1 - j0 + 1) as f64;
    Ok(EchoPeak {
        time: out.time_at(best_j),
        distinct: mean > 0.0 && best > 3.0 * mean,
    })
}
