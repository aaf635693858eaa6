//! Frequency-comb data model: Lorentzian teeth, uniform comb construction and
//! the stochastic perturbations used by the disorder ensembles.
//!
//! Units: all frequencies are angular (rad/us), time is in microseconds.
//! A figure-style tooth width of "5 MHz" is gamma = 2*pi*5 rad/us.

use rand::Rng;

use crate::error::{Error, Result};

/// One absorption line of the comb.
///
/// `depth` is the dimensionless peak amplitude-absorption coefficient beta_n:
/// the propagator tooth term is `depth / (1/2 + i (omega - center)/width)`,
/// so a single tooth at exact resonance attenuates intensity by
/// `exp(-4 * depth * l_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tooth {
    /// Center detuning from the comb mean (rad/us).
    pub center: f64,
    /// Full Lorentzian width gamma (rad/us).
    pub width: f64,
    /// Dimensionless peak amplitude-absorption coefficient, >= 0.
    pub depth: f64,
}

impl Tooth {
    pub fn new(center: f64, width: f64, depth: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::Validation(format!(
                "tooth center {center} not finite"
            )));
        }
        if !(width > 0.0) || !width.is_finite() {
            return Err(Error::Validation(format!(
                "tooth width {width} must be > 0"
            )));
        }
        if !(depth >= 0.0) || !depth.is_finite() {
            return Err(Error::Validation(format!(
                "tooth depth {depth} must be >= 0"
            )));
        }
        Ok(Self {
            center,
            width,
            depth,
        })
    }
}

/// An ordered list of teeth, sorted strictly ascending by center.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyComb {
    teeth: Vec<Tooth>,
    /// Free-form provenance string carried into output metadata.
    pub label: String,
}

impl FrequencyComb {
    /// Builds a comb from teeth, sorting them by center.
    ///
    /// Coincident centers are permitted (heavily perturbed combs may merge);
    /// an empty tooth list is not.
    pub fn new(mut teeth: Vec<Tooth>, label: impl Into<String>) -> Result<Self> {
        if teeth.is_empty() {
            return Err(Error::Validation("comb needs at least one tooth".into()));
        }
        teeth.sort_by(|a, b| a.center.total_cmp(&b.center));
        Ok(Self {
            teeth,
            label: label.into(),
        })
    }

    pub fn teeth(&self) -> &[Tooth] {
        &self.teeth
    }

    pub fn n_teeth(&self) -> usize {
        self.teeth.len()
    }

    /// Largest |center| over the teeth.
    pub fn max_abs_center(&self) -> f64 {
        self.teeth
            .iter()
            .map(|t| t.center.abs())
            .fold(0.0, f64::max)
    }

    /// Smallest tooth width.
    pub fn min_width(&self) -> f64 {
        self.teeth
            .iter()
            .map(|t| t.width)
            .fold(f64::INFINITY, f64::min)
    }

    /// Mean tooth width.
    pub fn mean_width(&self) -> f64 {
        self.teeth.iter().map(|t| t.width).sum::<f64>() / self.teeth.len() as f64
    }

    /// Mean spacing between neighboring teeth; `None` for a single tooth.
    pub fn mean_spacing(&self) -> Option<f64> {
        if self.teeth.len() < 2 {
            return None;
        }
        let first = self.teeth.first().unwrap().center;
        let last = self.teeth.last().unwrap().center;
        Some((last - first) / (self.teeth.len() - 1) as f64)
    }

    /// Sum of tooth depths (the total optical depth alpha*L at unit length).
    pub fn total_depth(&self) -> f64 {
        self.teeth.iter().map(|t| t.depth).sum()
    }
}

/// Builds a uniform comb: `n_teeth` teeth at centers n*delta for
/// n in [-N, N], each of width `gamma` and depth `total_depth / n_teeth`.
///
/// Requires an odd `n_teeth` and delta > gamma (finesse above one).
pub fn uniform_comb(
    n_teeth: usize,
    delta: f64,
    gamma: f64,
    total_depth: f64,
) -> Result<FrequencyComb> {
    if n_teeth == 0 || n_teeth.is_multiple_of(2) {
        return Err(Error::Validation(format!(
            "n_teeth must be a positive odd count, got {n_teeth}"
        )));
    }
    if !(gamma > 0.0) {
        return Err(Error::Validation(format!("gamma must be > 0, got {gamma}")));
    }
    // A single line has no spacing, so the finesse constraint is moot there.
    if n_teeth > 1 && delta <= gamma {
        return Err(Error::FinesseViolation { delta, gamma });
    }
    if !(total_depth >= 0.0) {
        return Err(Error::Validation(format!(
            "total_depth must be >= 0, got {total_depth}"
        )));
    }
    let half = (n_teeth / 2) as i64;
    let depth = total_depth / n_teeth as f64;
    let teeth = (-half..=half)
        .map(|n| Tooth {
            center: n as f64 * delta,
            width: gamma,
            depth,
        })
        .collect();
    FrequencyComb::new(
        teeth,
        format!("uniform(n={n_teeth}, delta={delta}, gamma={gamma}, total={total_depth})"),
    )
}

/// Shifts every tooth center by an independent uniform draw from
/// [-gamma_r, +gamma_r] and re-sorts. Widths and depths are untouched.
///
/// Teeth are allowed to overlap or cross after a large perturbation.
pub fn perturb_spacing<R: Rng>(
    comb: &FrequencyComb,
    gamma_r: f64,
    rng: &mut R,
) -> Result<FrequencyComb> {
    if !(gamma_r >= 0.0) {
        return Err(Error::Validation(format!(
            "gamma_r must be >= 0, got {gamma_r}"
        )));
    }
    if gamma_r == 0.0 {
        return Ok(comb.clone());
    }
    let teeth = comb
        .teeth
        .iter()
        .map(|t| Tooth {
            center: t.center + rng.random_range(-gamma_r..=gamma_r),
            ..*t
        })
        .collect();
    FrequencyComb::new(teeth, comb.label.clone())
}

/// Adds an independent uniform draw from [-d_r, +d_r] to every tooth depth,
/// clamping at zero. Centers and widths are untouched.
pub fn perturb_depth<R: Rng>(comb: &FrequencyComb, d_r: f64, rng: &mut R) -> Result<FrequencyComb> {
    if !(d_r >= 0.0) {
        return Err(Error::Validation(format!("d_r must be >= 0, got {d_r}")));
    }
    if d_r == 0.0 {
        return Ok(comb.clone());
    }
    let teeth = comb
        .teeth
        .iter()
        .map(|t| Tooth {
            depth: (t.depth + rng.random_range(-d_r..=d_r)).max(0.0),
            ..*t
        })
        .collect();
    FrequencyComb::new(teeth, comb.label.clone())
}

/// Comb finesse: mean neighbor spacing divided by mean tooth width.
pub fn finesse(comb: &FrequencyComb) -> Result<f64> {
    let spacing = comb
        .mean_spacing()
        .ok_or_else(|| Error::Validation("finesse needs at least 2 teeth".into()))?;
    Ok(spacing / comb.mean_width())
}

/// Parses the plain-text comb format: one `center width depth` record per
/// line, whitespace separated, with `#` comments and blank lines ignored.
pub fn parse_comb(text: &str, label: impl Into<String>) -> Result<FrequencyComb> {
    let mut teeth = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!(
                "comb line {}: expected `center width depth`, got {:?}",
                lineno + 1,
                raw
            )));
        }
        let parse = |s: &str, what: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::Parse(format!("comb line {}: bad {what} `{s}`", lineno + 1)))
        };
        teeth.push(Tooth::new(
            parse(fields[0], "center")?,
            parse(fields[1], "width")?,
            parse(fields[2], "depth")?,
        )?);
    }
    FrequencyComb::new(teeth, label)
}

/// Renders a comb in the plain-text format accepted by [`parse_comb`].
pub fn format_comb(comb: &FrequencyComb) -> String {
    let mut out = String::from("# center width depth (rad/us, rad/us, dimensionless)\n");
    for t in comb.teeth() {
        out.push_str(&format!("{} {} {}\n", t.center, t.width, t.depth));
    }
    out
}
