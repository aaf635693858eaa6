//! Experiment orchestration behind the command-line front end: each command
//! validates its configuration, runs the simulation, and writes CSVs (plus
//! optional SVG plots) into the output directory. Every CSV embeds the full
//! parameter set and master seed; each sweep also writes a `manifest.cfg`
//! that replays the run byte-for-byte.

use std::fs;
use std::path::PathBuf;

use crate::comb::format_comb;
use crate::config::RunConfig;
use crate::csvio;
use crate::ensemble::{sweep_length, sweep_strength, DisorderKind, DisorderSpec};
use crate::error::{Error, Result};
use crate::fit::{backward_efficiency, fit_forward_model, fit_quality_gate};
use crate::spectral::{
    echo_peak_time, first_echo_efficiency, gaussian_spectrum, make_grid, propagate_forward,
};
use crate::svg::{line_plot, Series};
use crate::thermal::{apply_populations, boltzmann_weights, ThermalSpec};

const TAU: f64 = std::f64::consts::TAU;

/// What a command produced: files on disk plus human-readable summary lines.
#[derive(Debug, Default)]
pub struct CommandOutput {
    pub files: Vec<PathBuf>,
    pub summary: Vec<String>,
}

impl CommandOutput {
    fn record(&mut self, path: PathBuf) -> PathBuf {
        self.files.push(path.clone());
        path
    }
}

fn ensure_out_dir(cfg: &RunConfig) -> Result<()> {
    fs::create_dir_all(&cfg.out_dir)
        .map_err(|e| Error::Validation(format!("cannot create {}: {e}", cfg.out_dir.display())))
}

/// Single deterministic propagation: writes input/output time traces and the
/// efficiency summary; optional SVG of the output intensity.
pub fn cmd_simulate(cfg: &RunConfig) -> Result<CommandOutput> {
    cfg.validate()?;
    let comb = cfg.build_comb()?;
    ensure_out_dir(cfg)?;
    let sigma = cfg.sigma_value();
    let grid = make_grid(&comb, sigma)?;
    let pulse = gaussian_spectrum(&grid, sigma)?;
    let (out_spec, out_time) = propagate_forward(&pulse, &comb, cfg.l_scale)?;
    let in_time = pulse.to_time();
    let delta = comb.mean_spacing().unwrap_or(cfg.delta);
    let eta = first_echo_efficiency(&out_time, &in_time, delta)?;
    let window = (
        std::f64::consts::PI / delta,
        3.0 * std::f64::consts::PI / delta,
    );
    let peak = echo_peak_time(&out_time, window)?;

    let mut meta = cfg.metadata();
    meta.insert("n_points".into(), grid.n_points().to_string());
    meta.insert("d_omega".into(), grid.d_omega().to_string());

    let mut out = CommandOutput::default();
    let p_in = out.record(cfg.out_dir.join("trace_in.csv"));
    csvio::write_time_trace(&p_in, &in_time, &meta)?;
    let p_out = out.record(cfg.out_dir.join("trace_out.csv"));
    csvio::write_time_trace(&p_out, &out_time, &meta)?;
    let p_spec = out.record(cfg.out_dir.join("spectrum_out.csv"));
    csvio::write_spectral_trace(&p_spec, &out_spec, &meta)?;

    let p_sum = out.record(cfg.out_dir.join("summary.csv"));
    let mut text = String::new();
    for (k, v) in &meta {
        text.push_str(&format!("# {k} = {v}\n"));
    }
    text.push_str("eta,echo_peak_time,echo_expected_time,peak_distinct\n");
    text.push_str(&format!(
        "{},{},{},{}\n",
        eta,
        peak.time,
        TAU / delta,
        peak.distinct
    ));
    fs::write(&p_sum, text)?;

    if cfg.plot {
        let times = out_time.times();
        let intensity: Vec<f64> = out_time.amplitudes().iter().map(|a| a.norm_sqr()).collect();
        let svg = line_plot(
            &[Series {
                x: &times,
                y: &intensity,
                label: "output |E(t)|^2".into(),
            }],
            "propagated intensity",
            "t (us)",
            "|E|^2",
        );
        let p_svg = out.record(cfg.out_dir.join("trace_out.svg"));
        fs::write(&p_svg, svg)?;
    }
    out.summary.push(format!("eta = {eta:.6}"));
    out.summary.push(format!(
        "echo peak at t = {:.6} us (expected {:.6} us, distinct = {})",
        peak.time,
        TAU / delta,
        peak.distinct
    ));
    Ok(out)
}

fn write_manifest(cfg: &RunConfig, out: &mut CommandOutput) -> Result<()> {
    let path = out.record(cfg.out_dir.join("manifest.cfg"));
    fs::write(&path, cfg.to_manifest())?;
    Ok(())
}

/// Disorder-strength sweeps (one CSV per finesse) or a length sweep.
pub fn cmd_sweep(cfg: &RunConfig, kind: SweepKind) -> Result<CommandOutput> {
    cfg.validate()?;
    let comb = cfg.build_comb()?;
    ensure_out_dir(cfg)?;
    let mut out = CommandOutput::default();

    match kind {
        SweepKind::Spacing | SweepKind::Depth => {
            let dkind = if matches!(kind, SweepKind::Spacing) {
                DisorderKind::Spacing
            } else {
                DisorderKind::Depth
            };
            let sigma_per_delta = cfg.sigma_value() / cfg.delta;
            let curves = sweep_strength(
                &comb,
                dkind,
                &cfg.strengths,
                &cfg.finesses,
                sigma_per_delta,
                cfg.l_scale,
                cfg.trials,
                cfg.seed,
            )?;
            let abscissa_name = if matches!(kind, SweepKind::Spacing) {
                "gamma_r_over_gamma"
            } else {
                "d_r"
            };
            let mut plot_series = Vec::new();
            for curve in &curves {
                let f = curve.metadata.get("finesse").cloned().unwrap_or_default();
                let path = out.record(cfg.out_dir.join(format!(
                    "sweep_{}_f{}.csv",
                    dkind.as_str(),
                    f
                )));
                csvio::write_curve(&path, curve, abscissa_name)?;
                out.summary.push(format!(
                    "F = {f}: eta {:.4} -> {:.4} over {} strengths",
                    curve.ordinate.first().unwrap(),
                    curve.ordinate.last().unwrap(),
                    curve.ordinate.len()
                ));
            }
            if cfg.plot {
                for curve in &curves {
                    let f = curve.metadata.get("finesse").cloned().unwrap_or_default();
                    plot_series.push((
                        curve.abscissa.clone(),
                        curve.ordinate.clone(),
                        format!("F = {f}"),
                    ));
                }
                let series: Vec<Series> = plot_series
                    .iter()
                    .map(|(x, y, l)| Series {
                        x,
                        y,
                        label: l.clone(),
                    })
                    .collect();
                let svg = line_plot(
                    &series,
                    &format!("{} disorder sweep", dkind.as_str()),
                    abscissa_name,
                    "mean eta",
                );
                let p = out.record(cfg.out_dir.join(format!("sweep_{}.svg", dkind.as_str())));
                fs::write(&p, svg)?;
            }
        }
        SweepKind::Length => {
            if cfg.lengths.is_empty() {
                return Err(Error::Validation(
                    "length sweep needs `lengths = l1,l2,...` (>= 8 increasing values)".into(),
                ));
            }
            let spec = DisorderSpec {
                kind: cfg.kind,
                strength: cfg.strength,
                n_trials: cfg.trials,
                master_seed: cfg.seed,
            };
            let curve = sweep_length(&comb, &spec, cfg.sigma_value(), &cfg.lengths)?;
            let path = out.record(cfg.out_dir.join("sweep_length.csv"));
            csvio::write_curve(&path, &curve, "l_scale")?;
            out.summary.push(format!(
                "length sweep: peak eta {:.4}",
                curve.ordinate.iter().cloned().fold(f64::NAN, f64::max)
            ));
            if cfg.plot {
                let svg = line_plot(
                    &[Series {
                        x: &curve.abscissa,
                        y: &curve.ordinate,
                        label: String::new(),
                    }],
                    "forward efficiency vs length",
                    "L (unit lengths)",
                    "mean eta",
                );
                let p = out.record(cfg.out_dir.join("sweep_length.svg"));
                fs::write(&p, svg)?;
            }
        }
    }
    write_manifest(cfg, &mut out)?;
    Ok(out)
}

/// Which sweep a `cmd_sweep` call drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    Spacing,
    Depth,
    Length,
}

/// Fits the forward model to a length-sweep CSV and evaluates the backward
/// closed form. Writes the fit parameters and the backward curve; fails with
/// the gate error (exit status 3) when the residual exceeds the threshold.
pub fn cmd_fit_backward(cfg: &RunConfig) -> Result<CommandOutput> {
    cfg.validate()?;
    let input = cfg.fit_input.clone().ok_or_else(|| {
        Error::Validation("fit-backward needs `fit_input = <length sweep csv>`".into())
    })?;
    let curve = csvio::read_length_curve(&input)?;
    ensure_out_dir(cfg)?;
    let fit = fit_forward_model(&curve.lengths, &curve.efficiencies)?;
    let gate_pass = fit_quality_gate(&fit, cfg.gate_threshold);

    let mut meta = cfg.metadata();
    meta.insert("fit_input".into(), input.display().to_string());
    let mut out = CommandOutput::default();
    let p_fit = out.record(cfg.out_dir.join("fit.csv"));
    csvio::write_fit(&p_fit, &fit, cfg.gate_threshold, gate_pass, &meta)?;

    out.summary.push(format!(
        "fit: eta0 = {:.4}, alpha_tilde = {:.6}, rms residual = {:.5}, converged = {}",
        fit.eta0, fit.alpha_tilde, fit.rms_residual, fit.converged
    ));

    if fit.converged {
        let mut text = String::new();
        for (k, v) in &meta {
            text.push_str(&format!("# {k} = {v}\n"));
        }
        text.push_str(&format!("# gate_pass = {gate_pass}\n"));
        if !gate_pass {
            text.push_str("# warning = residual gate failed; backward estimates unreliable\n");
        }
        text.push_str("l_scale,eta_b\n");
        for &l in &curve.lengths {
            text.push_str(&format!("{},{}\n", l, backward_efficiency(&fit, l)?));
        }
        // saturation value: the backward curve plateau at alpha~L >> 1
        let l_sat = 12.0 / fit.alpha_tilde;
        let eta_b_sat = backward_efficiency(&fit, l_sat)?;
        text.push_str(&format!("{},{}\n", l_sat, eta_b_sat));
        let p_back = out.record(cfg.out_dir.join("backward.csv"));
        fs::write(&p_back, text)?;
        out.summary
            .push(format!("backward efficiency saturates at {eta_b_sat:.4}"));
    }

    if !gate_pass {
        return Err(Error::GateFailed {
            residual: fit.rms_residual,
            threshold: cfg.gate_threshold,
        });
    }
    Ok(out)
}

/// Thermal study: reweights the comb at each temperature and reports the
/// efficiency; writes per-temperature comb files and a temperature-vs-eta CSV.
pub fn cmd_thermal(cfg: &RunConfig) -> Result<CommandOutput> {
    cfg.validate()?;
    if cfg.temperatures.is_empty() {
        return Err(Error::Validation(
            "thermal needs `temperatures = t1,t2,...`".into(),
        ));
    }
    let comb = cfg.build_comb()?;
    ensure_out_dir(cfg)?;
    let sigma = cfg.sigma_value();
    let delta = comb
        .mean_spacing()
        .ok_or_else(|| Error::Validation("thermal study needs a comb with >= 2 teeth".into()))?;
    let mut out = CommandOutput::default();

    let mut rows = Vec::new();
    for &temp in &cfg.temperatures {
        let spec = ThermalSpec::equally_spaced(comb.n_teeth(), cfg.ground_span, temp);
        let weights = boltzmann_weights(&spec)?;
        let reweighted = apply_populations(&comb, &weights, &spec.tooth_assignment)?;
        let p_comb = out.record(cfg.out_dir.join(format!("comb_T{temp}.txt")));
        fs::write(&p_comb, format_comb(&reweighted))?;

        let grid = make_grid(&reweighted, sigma)?;
        let pulse = gaussian_spectrum(&grid, sigma)?;
        let (_, time) = propagate_forward(&pulse, &reweighted, cfg.l_scale)?;
        let eta = first_echo_efficiency(&time, &pulse.to_time(), delta)?;
        rows.push((temp, eta));
        out.summary.push(format!("T = {temp} K: eta = {eta:.5}"));
    }

    let mut text = String::new();
    for (k, v) in &cfg.metadata() {
        text.push_str(&format!("# {k} = {v}\n"));
    }
    text.push_str(&format!("# ground_span = {}\n", cfg.ground_span));
    text.push_str("temperature,eta\n");
    for (t, e) in &rows {
        text.push_str(&format!("{t},{e}\n"));
    }
    let p = out.record(cfg.out_dir.join("thermal.csv"));
    fs::write(&p, text)?;
    Ok(out)
}

/// Closed-form AFC table over an effective-depth grid for each finesse,
/// with and without the finite-finesse prefactor.
pub fn cmd_analytic_table(cfg: &RunConfig) -> Result<CommandOutput> {
    cfg.validate()?;
    ensure_out_dir(cfg)?;
    let grid: Vec<f64> = (0..=160).map(|i| i as f64 * 0.05).collect();
    let finesses = if cfg.finesses.is_empty() {
        vec![20.0, 60.0, 100.0]
    } else {
        cfg.finesses.clone()
    };
    let mut meta = cfg.metadata();
    meta.insert("alpha_tilde_grid".into(), "0..8 step 0.05".into());
    let mut out = CommandOutput::default();
    let p = out.record(cfg.out_dir.join("analytic_table.csv"));
    csvio::write_analytic_table(&p, &grid, &finesses, &meta)?;
    out.summary.push(format!(
        "analytic table over {} depths x {} finesses",
        grid.len(),
        finesses.len()
    ));
    Ok(out)
}
