//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! with the measured values (run with `--nocapture` to see them).
//!
//! Reference comb throughout: 7 teeth, gamma = 2*pi*5 rad/us, total optical
//! depth alpha*L = 30, pulse sigma = 2*delta. Finesse is set through the
//! spacing delta = F*gamma.

use iafc::analytic::{emission_probability, eta_backward, eta_forward, AfcParams};
use iafc::comb::uniform_comb;
use iafc::ensemble::{
    derive_seed, run_ensemble, sweep_length, sweep_strength, DisorderKind, DisorderSpec,
};
use iafc::fit::{backward_efficiency, fit_forward_model, fit_quality_gate, DEFAULT_RESIDUAL_GATE};
use iafc::spectral::{
    echo_peak_time, first_echo_efficiency, gaussian_spectrum, make_grid, propagate_forward,
};
use iafc::thermal::{apply_populations, boltzmann_weights, ThermalSpec};

const TAU: f64 = std::f64::consts::TAU;
const PI: f64 = std::f64::consts::PI;
const GAMMA: f64 = TAU * 5.0;
const TOTAL_DEPTH: f64 = 30.0;
const N_TEETH: usize = 7;
const SEED: u64 = 20250809;

fn verdict(criterion: u32, pass: bool, detail: &str) -> bool {
    println!(
        "criterion {criterion:02} {}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

fn reference_comb(finesse: f64) -> iafc::FrequencyComb {
    uniform_comb(N_TEETH, finesse * GAMMA, GAMMA, TOTAL_DEPTH).unwrap()
}

/// Forward efficiency at one (comb, sigma, l) point, deterministic path.
fn forward_eta(comb: &iafc::FrequencyComb, sigma: f64, l_scale: f64) -> f64 {
    let grid = make_grid(comb, sigma).unwrap();
    let pulse = gaussian_spectrum(&grid, sigma).unwrap();
    let (_, time) = propagate_forward(&pulse, comb, l_scale).unwrap();
    first_echo_efficiency(&time, &pulse.to_time(), comb.mean_spacing().unwrap()).unwrap()
}

#[test]
fn criterion_01_analytic_forward_optimum() {
    // golden-section maximum of eta_forward over alpha~L at infinite finesse
    let f = |x: f64| -eta_forward(&AfcParams::new(x, f64::INFINITY).unwrap());
    let (mut a, mut b) = (0.5, 8.0);
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut x1, mut x2) = (b - INV_PHI * (b - a), a + INV_PHI * (b - a));
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > 1e-12 {
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
    let arg = 0.5 * (a + b);
    let max = -f(arg);
    let expect = 4.0 * (-2.0f64).exp();
    let pass = (max - expect).abs() <= 1e-9 && (arg - 2.0).abs() <= 1e-6;
    let ok = verdict(
        1,
        pass,
        &format!(
            "max eta_f = {max:.12} at alpha~L = {arg:.9} (expect {expect:.12} at 2, tol 1e-9)"
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_02_analytic_backward_saturation() {
    let at_two = eta_backward(&AfcParams::new(2.0, f64::INFINITY).unwrap());
    let expect = (1.0 - (-2.0f64).exp()).powi(2);
    let saturated = eta_backward(&AfcParams::new(1e9, f64::INFINITY).unwrap());
    let pass = (at_two - expect).abs() <= 1e-9 && (saturated - 1.0).abs() <= 1e-9;
    let ok = verdict(
        2,
        pass,
        &format!("eta_b(2, inf) = {at_two:.12} (expect {expect:.12}); eta_b(inf) = {saturated}"),
    );
    assert!(ok);
}

#[test]
fn criterion_03_echo_timing() {
    let comb = reference_comb(20.0);
    let delta = TAU * 100.0;
    let sigma = 2.0 * delta;
    let grid = make_grid(&comb, sigma).unwrap();
    let pulse = gaussian_spectrum(&grid, sigma).unwrap();
    let (_, time) = propagate_forward(&pulse, &comb, 1.0).unwrap();
    let peak = echo_peak_time(&time, (PI / delta, 3.0 * PI / delta)).unwrap();
    let t_e = TAU / delta;
    let steps = (peak.time - t_e).abs() / time.dt();
    let pass = steps <= 1.0 + 1e-12 && peak.distinct;
    let ok = verdict(
        3,
        pass,
        &format!(
            "echo peak at {:.6} us vs 2pi/delta = {:.6} us: {steps:.2} grid steps (dt = {:.3e})",
            peak.time,
            t_e,
            time.dt()
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_04_numeric_vs_analytic_forward() {
    // Lorentzian-tooth numerics against the Gaussian-tooth closed-form value
    // 0.4549 at alpha~L = 1.5, F = 20.
    let eta = forward_eta(&reference_comb(20.0), 2.0 * TAU * 100.0, 1.0);
    let expect = 0.4549;
    let diff = (eta - expect).abs();
    let pass = diff <= 0.10;
    let ok = verdict(
        4,
        pass,
        &format!("eta_numeric = {eta:.6} vs analytic {expect} -> |diff| = {diff:.4} (tol 0.10)"),
    );
    assert!(
        ok,
        "known tooth-shape mismatch: Lorentzian teeth dephase by exp(-2pi/F) in intensity \
                 (0.730 at F = 20) versus the Gaussian-tooth prefactor 0.906 assumed by the 0.4549 \
                 value; together with the finite-comb depth factor 2*pi/7 this places the numeric \
                 efficiency near 0.343, just outside the +-0.10 band"
    );
}

#[test]
fn criterion_05_spacing_disorder_trends() {
    // Fig-rs2-style reproduction at the per-finesse operating point
    // alpha~L = 2 (L scales with F); 500 trials, strengths 0..30 gamma.
    let strengths: Vec<f64> = vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0];
    let finesses = [20.0, 60.0, 100.0];
    let mut curves = Vec::new();
    for (fi, &f) in finesses.iter().enumerate() {
        let l_scale = N_TEETH as f64 * f / (PI * TOTAL_DEPTH); // alpha~L = 2
        let curve = sweep_strength(
            &reference_comb(f),
            DisorderKind::Spacing,
            &strengths,
            &[f],
            2.0,
            l_scale,
            500,
            derive_seed(SEED, 5, fi as u64),
        )
        .unwrap()
        .remove(0);
        println!(
            "criterion 05 data: F = {f}: eta = [{}]",
            curve
                .ordinate
                .iter()
                .map(|v| format!("{v:.4}"))
                .collect::<Vec<_>>()
                .join(", ")
        );
        curves.push(curve);
    }
    let mut pass = true;
    let mut notes = Vec::new();
    // decreasing from 0 to 30 gamma at each finesse, at >= 3 combined SE
    for (curve, &f) in curves.iter().zip(&finesses) {
        let drop = curve.ordinate[0] - *curve.ordinate.last().unwrap();
        let se = (curve.errors[0].powi(2) + curve.errors.last().unwrap().powi(2)).sqrt();
        let ok = drop > 3.0 * se && drop > 0.0;
        notes.push(format!(
            "F={f}: drop {drop:.4} ({:.0} SE)",
            if se > 0.0 { drop / se } else { f64::INFINITY }
        ));
        pass &= ok;
    }
    // eta(F = 100) above eta(F = 20) at every strength, at >= 3 combined SE
    for (si, s) in strengths.iter().enumerate() {
        let gap = curves[2].ordinate[si] - curves[0].ordinate[si];
        let se = (curves[2].errors[si].powi(2) + curves[0].errors[si].powi(2)).sqrt();
        let ok = gap > 3.0 * se && gap > 0.0;
        if !ok {
            notes.push(format!(
                "F-ordering violated at strength {s} gamma: gap {gap:.4} vs 3SE {:.4}",
                3.0 * se
            ));
        }
        pass &= ok;
    }
    let ok = verdict(5, pass, &notes.join("; "));
    assert!(ok);
}

#[test]
fn criterion_06_depth_disorder_insensitivity() {
    // depth fluctuations up to one third of the mean tooth depth
    let mean_depth = TOTAL_DEPTH / N_TEETH as f64;
    let strengths = [0.0, mean_depth / 6.0, mean_depth / 3.0];
    let mut pass = true;
    let mut notes = Vec::new();
    for (fi, &f) in [20.0, 60.0, 100.0].iter().enumerate() {
        let comb = reference_comb(f);
        let sigma = 2.0 * f * GAMMA;
        let base = run_ensemble(
            &comb,
            &DisorderSpec {
                kind: DisorderKind::None,
                strength: 0.0,
                n_trials: 1,
                master_seed: 0,
            },
            sigma,
            1.0,
        )
        .unwrap()
        .mean_efficiency;
        let mut worst = 0.0f64;
        for (si, &d_r) in strengths.iter().enumerate() {
            let spec = DisorderSpec {
                kind: DisorderKind::Depth,
                strength: d_r,
                n_trials: 300,
                master_seed: derive_seed(SEED, 6, (fi * 10 + si) as u64),
            };
            let res = run_ensemble(&comb, &spec, sigma, 1.0).unwrap();
            worst = worst.max((res.mean_efficiency - base).abs());
        }
        notes.push(format!(
            "F={f}: eta(0) = {base:.4}, max |delta eta| = {worst:.4}"
        ));
        pass &= worst <= 0.05;
    }
    let ok = verdict(6, pass, &format!("{} (tol 0.05)", notes.join("; ")));
    assert!(ok);
}

#[test]
fn criterion_07_backward_estimates() {
    // full pipeline at F = 60 (high finesse), alpha*L = 30: length sweep ->
    // fit -> backward. Paper values: 0.85 at 15 gamma, 0.80 at 20 gamma,
    // and a fit-gate failure at 30 gamma.
    let finesse = 60.0;
    let comb = reference_comb(finesse);
    let sigma = 2.0 * finesse * GAMMA;
    let alpha_tilde_unit = TAU * TOTAL_DEPTH / (N_TEETH as f64 * finesse);
    let lengths: Vec<f64> = (0..12)
        .map(|j| (0.3 + j as f64 * (4.7 / 11.0)) / alpha_tilde_unit)
        .collect();

    let run = |strength: f64| {
        let spec = DisorderSpec {
            kind: DisorderKind::Spacing,
            strength,
            n_trials: 500,
            master_seed: derive_seed(SEED, 7, strength as u64),
        };
        let curve = sweep_length(&comb, &spec, sigma, &lengths).unwrap();
        let fit = fit_forward_model(&curve.abscissa, &curve.ordinate).unwrap();
        let gate = fit_quality_gate(&fit, DEFAULT_RESIDUAL_GATE);
        println!(
            "criterion 07 data: gamma_r = {strength} gamma: eta0 = {:.4}, alpha~ = {:.5}, rms = {:.5}, gate pass = {gate}",
            fit.eta0, fit.alpha_tilde, fit.rms_residual
        );
        (fit, gate)
    };

    let (fit15, gate15) = run(15.0);
    let (fit20, gate20) = run(20.0);
    let (fit30, gate30) = run(30.0);

    // backward efficiency at saturation (alpha~L >> 1 plateau)
    let eta_b15 = backward_efficiency(&fit15, 12.0 / fit15.alpha_tilde).unwrap();
    let eta_b20 = backward_efficiency(&fit20, 12.0 / fit20.alpha_tilde).unwrap();

    let pass15 = gate15 && (eta_b15 - 0.85).abs() <= 0.05;
    let pass20 = gate20 && (eta_b20 - 0.80).abs() <= 0.05;
    let pass30 = !gate30;
    let pass = pass15 && pass20 && pass30;
    let ok = verdict(
        7,
        pass,
        &format!(
            "eta_b(15 gamma) = {eta_b15:.4} (0.85 +- 0.05), eta_b(20 gamma) = {eta_b20:.4} (0.80 +- 0.05), \
             gate at 30 gamma {} (rms {:.5} vs {DEFAULT_RESIDUAL_GATE})",
            if gate30 { "unexpectedly passed" } else { "failed as required" },
            fit30.rms_residual
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_08_fit_oracle_lattice() {
    // noiseless generate-then-fit over a 10x10 lattice recovers both
    // parameters within 1e-6 relative
    let mut worst = 0.0f64;
    for i in 0..10 {
        for j in 0..10 {
            let eta0 = 0.2 + 0.8 * i as f64 / 9.0;
            let alpha = 0.01 + 0.99 * j as f64 / 9.0;
            let lengths: Vec<f64> = (1..=10).map(|k| k as f64 * 0.38 / alpha).collect();
            let etas: Vec<f64> = lengths
                .iter()
                .map(|&l| eta0 * (alpha * l).powi(2) * (-alpha * l).exp())
                .collect();
            let fit = fit_forward_model(&lengths, &etas).unwrap();
            assert!(
                fit.converged,
                "lattice point ({eta0}, {alpha}) did not converge"
            );
            worst = worst
                .max((fit.eta0 - eta0).abs() / eta0)
                .max((fit.alpha_tilde - alpha).abs() / alpha);
        }
    }
    let pass = worst <= 1e-6;
    let ok = verdict(
        8,
        pass,
        &format!("worst relative recovery error {worst:.2e} (tol 1e-6)"),
    );
    assert!(ok);
}

#[test]
fn criterion_09_thermal_insensitivity() {
    // 7 ground states spanning 2*pi*3e5 rad/us, T in {4, 100, 300} K, on the
    // high-finesse reference comb
    let finesse = 100.0;
    let comb = reference_comb(finesse);
    let sigma = 2.0 * finesse * GAMMA;
    let mut etas = Vec::new();
    for temp in [4.0, 100.0, 300.0] {
        let spec = ThermalSpec::equally_spaced(N_TEETH, TAU * 3.0e5, temp);
        let weights = boltzmann_weights(&spec).unwrap();
        let reweighted = apply_populations(&comb, &weights, &spec.tooth_assignment).unwrap();
        etas.push((temp, forward_eta(&reweighted, sigma, 1.0)));
    }
    let mut worst = 0.0f64;
    for (_, a) in &etas {
        for (_, b) in &etas {
            worst = worst.max((a - b).abs());
        }
    }
    let pass = worst <= 0.05;
    let ok = verdict(
        9,
        pass,
        &format!(
            "{}; max pairwise |delta eta| = {worst:.4} (tol 0.05)",
            etas.iter()
                .map(|(t, e)| format!("eta({t} K) = {e:.5}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_10_property_suite() {
    let comb = reference_comb(20.0);
    let delta = TAU * 100.0;
    let sigma = 2.0 * delta;
    let grid = make_grid(&comb, sigma).unwrap();
    let pulse = gaussian_spectrum(&grid, sigma).unwrap();
    let mut pass = true;
    let mut notes = Vec::new();

    // Parseval to 1e-9 relative
    let (out, time) = propagate_forward(&pulse, &comb, 1.0).unwrap();
    let parseval = (out.energy() - time.energy()).abs() / out.energy();
    pass &= parseval < 1e-9;
    notes.push(format!("parseval {parseval:.1e}"));

    // passivity
    let passive = time.energy() <= pulse.energy() * (1.0 + 1e-12);
    pass &= passive;
    notes.push(format!("passivity {passive}"));

    // zero-depth identity to 1e-12
    let transparent = uniform_comb(N_TEETH, delta, GAMMA, 0.0).unwrap();
    let (out0, _) = propagate_forward(&pulse, &transparent, 1.0).unwrap();
    let ident = out0
        .amplitudes()
        .iter()
        .zip(pulse.amplitudes())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    pass &= ident < 1e-12;
    notes.push(format!("zero-depth {ident:.1e}"));

    // seed determinism: bit-exact replay
    let spec = DisorderSpec {
        kind: DisorderKind::Spacing,
        strength: 10.0,
        n_trials: 64,
        master_seed: SEED,
    };
    let a = run_ensemble(&comb, &spec, sigma, 1.0).unwrap();
    let b = run_ensemble(&comb, &spec, sigma, 1.0).unwrap();
    let deterministic = a.mean_efficiency.to_bits() == b.mean_efficiency.to_bits()
        && a.mean_intensity_trace == b.mean_intensity_trace
        && a.per_trial_efficiencies == b.per_trial_efficiencies;
    pass &= deterministic;
    notes.push(format!("seed determinism {deterministic}"));

    // trial-order invariance to 1e-12
    let per = a.per_trial_efficiencies.unwrap();
    let mean_fwd = per.iter().sum::<f64>() / per.len() as f64;
    let mut rev = per.clone();
    rev.reverse();
    let mut srt = per.clone();
    srt.sort_by(f64::total_cmp);
    let mean_of = |v: &[f64]| {
        // compensated mean, matching the library's reduction contract
        let mut s = 0.0f64;
        let mut c = 0.0f64;
        for &x in v {
            let t = s + x;
            if s.abs() >= x.abs() {
                c += (s - t) + x;
            } else {
                c += (x - t) + s;
            }
            s = t;
        }
        (s + c) / v.len() as f64
    };
    let perm = (mean_of(&rev) - mean_of(&srt))
        .abs()
        .max((mean_of(&per) - mean_fwd).abs());
    pass &= perm < 1e-12;
    notes.push(format!("trial-order {perm:.1e}"));

    // uniform thermal weights: exact identity
    let weights = vec![1.0 / N_TEETH as f64; N_TEETH];
    let assignment: Vec<usize> = (0..N_TEETH).collect();
    let same = apply_populations(&comb, &weights, &assignment).unwrap() == comb;
    pass &= same;
    notes.push(format!("uniform-thermal identity {same}"));

    // emission probability sanity anchor for the suite
    let c = vec![num_complex::Complex64::new(1.0, 0.0); N_TEETH];
    let p_echo = emission_probability(&c, TAU / delta, delta).unwrap();
    pass &= (p_echo - 49.0).abs() < 1e-9;
    notes.push(format!("P(2pi/delta) = {p_echo:.3}"));

    let ok = verdict(10, pass, &notes.join("; "));
    assert!(ok);
}
