//! Propagate a Gaussian pulse through the reference seven-tooth comb and
//! locate the photon echo.
//!
//! ```bash
//! cargo run -p iafc --example echo_trace
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use iafc::csvio::write_time_trace;
use iafc::spectral::{
    echo_peak_time, first_echo_efficiency, gaussian_spectrum, make_grid, propagate_forward,
};
use iafc::uniform_comb;

const TAU: f64 = std::f64::consts::TAU;
const PI: f64 = std::f64::consts::PI;

fn main() -> iafc::Result<()> {
    // tooth width 2*pi*5 rad/us ("5 MHz"), spacing 2*pi*100 -> finesse 20,
    // total optical depth alpha*L = 30
    let delta = TAU * 100.0;
    let gamma = TAU * 5.0;
    let comb = uniform_comb(7, delta, gamma, 30.0)?;
    let sigma = 2.0 * delta; // pulse covers all seven teeth

    let grid = make_grid(&comb, sigma)?;
    println!(
        "grid: {} points, d_omega = {:.4} rad/us, time step {:.2} ns",
        grid.n_points(),
        grid.d_omega(),
        grid.dt() * 1e3
    );

    let pulse = gaussian_spectrum(&grid, sigma)?;
    let (_, out_time) = propagate_forward(&pulse, &comb, 1.0)?;
    let in_time = pulse.to_time();

    let eta = first_echo_efficiency(&out_time, &in_time, delta)?;
    let peak = echo_peak_time(&out_time, (PI / delta, 3.0 * PI / delta))?;
    println!("first-echo efficiency eta = {eta:.4}");
    println!(
        "echo peak at t = {:.4} ns (rephasing time 2 pi/delta = {:.4} ns, distinct = {})",
        peak.time * 1e3,
        TAU / delta * 1e3,
        peak.distinct
    );

    let out_dir = Path::new("examples-out/echo_trace");
    fs::create_dir_all(out_dir)?;
    let mut meta = BTreeMap::new();
    meta.insert("comb".to_string(), comb.label.clone());
    meta.insert("sigma".to_string(), sigma.to_string());
    write_time_trace(&out_dir.join("trace_in.csv"), &in_time, &meta)?;
    write_time_trace(&out_dir.join("trace_out.csv"), &out_time, &meta)?;
    println!("wrote {}", out_dir.join("trace_out.csv").display());
    Ok(())
}
