//! CSV emission and parsing.
//!
//! Contract: comma separator, '.' decimal point, one header row, and
//! '#'-prefixed metadata lines of the form `# key = value` carrying every
//! parameter needed for exact replay (including the master seed). Floats are
//! written with the shortest representation that round-trips, so replayed
//! runs produce byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::analytic::{eta_backward, eta_forward, AfcParams};
use crate::ensemble::{EfficiencyCurve, IntensityTrace};
use crate::error::{Error, Result};
use crate::fit::FitResult;
use crate::spectral::{SpectralField, TimeField};

/// Renders `# key = value` metadata lines (keys in sorted order).
fn metadata_block(meta: &BTreeMap<String, String>) -> String {
    let mut out = String::new();
    for (k, v) in meta {
        let _ = writeln!(out, "# {k} = {v}");
    }
    out
}

/// Writes a time-domain field trace: columns t, re, im, intensity.
pub fn write_time_trace(
    path: &Path,
    field: &TimeField,
    meta: &BTreeMap<String, String>,
) -> Result<()> {
    let mut out = metadata_block(meta);
    out.push_str("t,re,im,intensity\n");
    for (j, a) in field.amplitudes().iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            field.time_at(j),
            a.re,
            a.im,
            a.norm_sqr()
        );
    }
    fs::write(path, out)?;
    Ok(())
}

/// Writes a frequency-domain field trace: columns omega, re, im, intensity.
pub fn write_spectral_trace(
    path: &Path,
    field: &SpectralField,
    meta: &BTreeMap<String, String>,
) -> Result<()> {
    let mut out = metadata_block(meta);
    out.push_str("omega,re,im,intensity\n");
    for (k, a) in field.amplitudes().iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            field.grid().omega_at(k),
            a.re,
            a.im,
            a.norm_sqr()
        );
    }
    fs::write(path, out)?;
    Ok(())
}

/// Writes a mean-intensity trace: columns t, intensity.
pub fn write_intensity_trace(
    path: &Path,
    trace: &IntensityTrace,
    meta: &BTreeMap<String, String>,
) -> Result<()> {
    let mut out = metadata_block(meta);
    out.push_str("t,intensity\n");
    for (j, v) in trace.values().iter().enumerate() {
        let _ = writeln!(out, "{},{}", trace.time_at(j), v);
    }
    fs::write(path, out)?;
    Ok(())
}

/// Writes an efficiency curve: columns <abscissa_name>, mean_eta, std_error.
pub fn write_curve(path: &Path, curve: &EfficiencyCurve, abscissa_name: &str) -> Result<()> {
    let mut out = metadata_block(&curve.metadata);
    let _ = writeln!(out, "{abscissa_name},mean_eta,std_error");
    for ((x, y), e) in curve
        .abscissa
        .iter()
        .zip(&curve.ordinate)
        .zip(&curve.errors)
    {
        let _ = writeln!(out, "{x},{y},{e}");
    }
    fs::write(path, out)?;
    Ok(())
}

/// Writes fit parameters: a single data row.
pub fn write_fit(
    path: &Path,
    fit: &FitResult,
    gate_threshold: f64,
    gate_pass: bool,
    meta: &BTreeMap<String, String>,
) -> Result<()> {
    let mut out = metadata_block(meta);
    out.push_str("eta0,alpha_tilde,rms_residual,converged,gate_threshold,gate_pass\n");
    let _ = writeln!(
        out,
        "{},{},{},{},{},{}",
        fit.eta0, fit.alpha_tilde, fit.rms_residual, fit.converged, gate_threshold, gate_pass
    );
    fs::write(path, out)?;
    Ok(())
}

/// Writes the analytic closed-form table over an effective-depth grid, with
/// and without the finite-finesse dephasing prefactor.
pub fn write_analytic_table(
    path: &Path,
    alpha_tilde_grid: &[f64],
    finesses: &[f64],
    meta: &BTreeMap<String, String>,
) -> Result<()> {
    let mut out = metadata_block(meta);
    out.push_str("alpha_tilde_l,finesse,eta_f,eta_b,eta_f_inf,eta_b_inf\n");
    for &f in finesses {
        for &x in alpha_tilde_grid {
            let p = AfcParams::new(x, f)?;
            let p_inf = AfcParams::new(x, f64::INFINITY)?;
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                x,
                f,
                eta_forward(&p),
                eta_backward(&p),
                eta_forward(&p_inf),
                eta_backward(&p_inf)
            );
        }
    }
    fs::write(path, out)?;
    Ok(())
}

/// One parsed (length, efficiency) sweep, optionally with standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthCurve {
    pub lengths: Vec<f64>,
    pub efficiencies: Vec<f64>,
    pub errors: Option<Vec<f64>>,
    pub metadata: BTreeMap<String, String>,
}

/// Reads a length-sweep CSV: '#' metadata, one header row, then rows of
/// `L,eta[,std_error]`.
pub fn read_length_curve(path: &Path) -> Result<LengthCurve> {
    let text = fs::read_to_string(path)?;
    let mut lengths = Vec::new();
    let mut etas = Vec::new();
    let mut errors = Vec::new();
    let mut metadata = BTreeMap::new();
    let mut header_seen = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.split_once('=') {
                metadata.insert(k.trim().to_string(), v.trim().to_string());
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() < 2 {
            return Err(Error::Parse(format!(
                "{}:{}: expected `L,eta[,std_error]`",
                path.display(),
                lineno + 1
            )));
        }
        let parsed: Option<Vec<f64>> = fields.iter().map(|f| f.parse::<f64>().ok()).collect();
        match parsed {
            None if !header_seen => {
                header_seen = true; // the header row
            }
            None => {
                return Err(Error::Parse(format!(
                    "{}:{}: non-numeric row `{raw}`",
                    path.display(),
                    lineno + 1
                )));
            }
            Some(nums) => {
                lengths.push(nums[0]);
                etas.push(nums[1]);
                if nums.len() > 2 {
                    errors.push(nums[2]);
                }
            }
        }
    }
    if lengths.is_empty() {
        return Err(Error::Parse(format!("{}: no data rows", path.display())));
    }
    let errors = if errors.len() == lengths.len() {
        Some(errors)
    } else {
        None
    };
    Ok(LengthCurve {
        lengths,
        efficiencies: etas,
        errors,
        metadata,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{DisorderKind, DisorderSpec};

    #[test]
    fn length_curve_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("curve.csv");
        let mut meta = BTreeMap::new();
        meta.insert("master_seed".to_string(), "42".to_string());
        meta.insert("kind".to_string(), "spacing".to_string());
        let curve = EfficiencyCurve::new(
            vec![1.0, 2.0, 3.5],
            vec![0.1, 0.25, 0.5],
            vec![0.01, 0.02, 0.0125],
            meta,
        )
        .unwrap();
        write_curve(&path, &curve, "l_scale").unwrap();
        let back = read_length_curve(&path).unwrap();
        assert_eq!(back.lengths, curve.abscissa);
        assert_eq!(back.efficiencies, curve.ordinate);
        assert_eq!(back.errors.unwrap(), curve.errors);
        assert_eq!(back.metadata.get("master_seed").unwrap(), "42");
    }

    #[test]
    fn writes_are_byte_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        let meta = BTreeMap::new();
        write_analytic_table(&a, &[0.5, 1.0, 2.0], &[20.0, 100.0], &meta).unwrap();
        write_analytic_table(&b, &[0.5, 1.0, 2.0], &[20.0, 100.0], &meta).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }

    #[test]
    fn read_rejects_garbage_after_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "l,eta\n1.0,0.1\nnope,zz\n").unwrap();
        assert!(read_length_curve(&path).is_err());
        std::fs::write(&path, "# empty = yes\nl,eta\n").unwrap();
        assert!(read_length_curve(&path).is_err());
    }

    #[test]
    fn disorder_kind_names_are_stable() {
        // these strings appear in CSV metadata and config files
        assert_eq!(DisorderKind::Spacing.as_str(), "spacing");
        assert_eq!(DisorderKind::Depth.as_str(), "depth");
        assert_eq!(DisorderKind::None.as_str(), "none");
        let spec = DisorderSpec {
            kind: DisorderKind::Spacing,
            strength: 1.0,
            n_trials: 1,
            master_seed: 0,
        };
        assert_eq!(spec.kind.as_str(), "spacing");
    }
}
