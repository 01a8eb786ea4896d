//! Run configuration: a flat `key = value` file split into `[sections]`.
//!
//! ```text
//! [eom]
//! omega_m = 10 mhz        # frequencies are ν = ω/2π
//! temperature = 30 mk
//! gamma_w = 5181.95
//!
//! [grid]
//! gamma_o = 10, 1e4, 41, log
//! ```
//!
//! Every dimensioned quantity needs a unit suffix. `#` starts a comment.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use qillum_core::EomParams;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}: {}", self.field, self.message),
            None => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

fn err(line: Option<usize>, field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dimension {
    Frequency,
    Temperature,
    Length,
    None,
}

impl Dimension {
    fn expected(self) -> &'static str {
        match self {
            Dimension::Frequency => "hz, khz, mhz or ghz",
            Dimension::Temperature => "mk or k",
            Dimension::Length => "nm",
            Dimension::None => "no unit",
        }
    }
}

/// Parses `"<number> [unit]"` into SI units. Frequencies are read as `ν` and
/// returned as angular `ω = 2πν`.
fn parse_quantity(text: &str, dim: Dimension) -> Result<f64, String> {
    let text = text.trim();
    let split = text
        .find(|c: char| c.is_ascii_alphabetic() && c != 'e' && c != 'E')
        .unwrap_or(text.len());
    let (num, unit) = text.split_at(split);
    let value = f64::from_str(num.trim()).map_err(|_| format!("`{}` is not a number", num.trim()))?;
    if !value.is_finite() {
        return Err(format!("`{}` is not finite", num.trim()));
    }
    let unit = unit.trim().to_ascii_lowercase();
    let scale = match (dim, unit.as_str()) {
        (Dimension::None, "") => 1.0,
        (Dimension::Frequency, "hz") => 2.0 * PI,
        (Dimension::Frequency, "khz") => 2.0 * PI * 1e3,
        (Dimension::Frequency, "mhz") => 2.0 * PI * 1e6,
        (Dimension::Frequency, "ghz") => 2.0 * PI * 1e9,
        (Dimension::Temperature, "mk") => 1e-3,
        (Dimension::Temperature, "k") => 1.0,
        (Dimension::Length, "nm") => 1e-9,
        (d, "") => return Err(format!("missing unit suffix (expected {})", d.expected())),
        (d, u) => return Err(format!("unknown unit `{u}` (expected {})", d.expected())),
    };
    Ok(value * scale)
}

fn parse_switch(text: &str) -> Result<bool, String> {
    match text.trim().to_ascii_lowercase().as_str() {
        "on" | "true" | "yes" => Ok(true),
        "off" | "false" | "no" => Ok(false),
        other => Err(format!("expected on or off, got `{other}`")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// Parameters that can be swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxisParam {
    GammaW,
    GammaO,
    TEom,
    Eta,
    TB,
    KappaI,
    /// Time-bandwidth product; only valid for `fig3`.
    Modes,
}

impl AxisParam {
    fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "gamma_w" => AxisParam::GammaW,
            "gamma_o" => AxisParam::GammaO,
            "t_eom" => AxisParam::TEom,
            "eta" => AxisParam::Eta,
            "t_b" => AxisParam::TB,
            "kappa_i" => AxisParam::KappaI,
            "m" => AxisParam::Modes,
            _ => return None,
        })
    }

    pub fn column(self) -> &'static str {
        match self {
            AxisParam::GammaW => "gamma_w",
            AxisParam::GammaO => "gamma_o",
            AxisParam::TEom => "t_eom_k",
            AxisParam::Eta => "eta",
            AxisParam::TB => "t_b_k",
            AxisParam::KappaI => "kappa_i",
            AxisParam::Modes => "M",
        }
    }

    fn dimension(self) -> Dimension {
        match self {
            AxisParam::TEom | AxisParam::TB => Dimension::Temperature,
            _ => Dimension::None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub param: AxisParam,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                if i == 0 {
                    return self.min;
                }
                if i == n - 1 {
                    return self.max;
                }
                match self.spacing {
                    Spacing::Linear => self.min + t * (self.max - self.min),
                    Spacing::Log => (self.min.ln() + t * (self.max / self.min).ln()).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    EntanglementMetric,
    LogNegPerPhoton,
    CohInfoPerPhoton,
    DiscordPerPhoton,
    MicrowavePhotons,
    OpticalPhotons,
    FigureOfMerit,
    ErrorQi,
    ErrorCoherent,
    AdiabaticMargin,
}

impl Metric {
    fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "e" => Metric::EntanglementMetric,
            "en/nw" => Metric::LogNegPerPhoton,
            "i/nw" => Metric::CohInfoPerPhoton,
            "d/nw" => Metric::DiscordPerPhoton,
            "nw" => Metric::MicrowavePhotons,
            "no" => Metric::OpticalPhotons,
            "f" => Metric::FigureOfMerit,
            "p_qi" => Metric::ErrorQi,
            "p_coh" => Metric::ErrorCoherent,
            "margin" => Metric::AdiabaticMargin,
            _ => return None,
        })
    }

    pub fn column(self) -> &'static str {
        match self {
            Metric::EntanglementMetric => "E",
            Metric::LogNegPerPhoton => "EN_per_nw",
            Metric::CohInfoPerPhoton => "I_per_nw",
            Metric::DiscordPerPhoton => "D_per_nw",
            Metric::MicrowavePhotons => "n_w",
            Metric::OpticalPhotons => "n_o",
            Metric::FigureOfMerit => "F",
            Metric::ErrorQi => "P_QI",
            Metric::ErrorCoherent => "P_coh",
            Metric::AdiabaticMargin => "adiabatic_margin",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    pub eta: f64,
    /// Background temperature (K).
    pub t_b: f64,
    /// Explicit background occupation; overrides `t_b` when set.
    pub n_b: Option<f64>,
    pub kappa_i: f64,
    pub exact_background: bool,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        ChannelConfig {
            eta: 0.07,
            t_b: 293.0,
            n_b: None,
            kappa_i: 1.0,
            exact_background: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub eom: EomParams,
    pub gamma_w: f64,
    pub gamma_o: f64,
    pub channel: ChannelConfig,
    pub axes: Vec<Axis>,
    pub metrics: Vec<Metric>,
    /// `M` values for the `P_QI` and `P_coh` columns.
    pub modes: Vec<f64>,
    pub seed: u64,
    pub mc_validation: bool,
    pub mc_samples: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            eom: EomParams::reference(),
            gamma_w: 5181.95,
            gamma_o: 668.43,
            channel: ChannelConfig::default(),
            axes: Vec::new(),
            metrics: Vec::new(),
            modes: Vec::new(),
            seed: 0,
            mc_validation: false,
            mc_samples: 100_000,
        }
    }
}

impl SweepConfig {
    /// Checks the invariants that do not depend on the subcommand.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.eom
            .validate()
            .map_err(|e| err(None, "[eom]", e.to_string()))?;
        for axis in &self.axes {
            let field = format!("[grid] {}", axis.param.column());
            if !(axis.min > 0.0 && axis.max > axis.min) {
                return Err(err(None, field, "bounds must be positive with min < max"));
            }
            if axis.points < 2 {
                return Err(err(None, field, "needs at least 2 points"));
            }
            if matches!(axis.param, AxisParam::Eta | AxisParam::KappaI) && axis.max > 1.0 {
                return Err(err(None, field, "transmissivity cannot exceed 1"));
            }
        }
        let c = &self.channel;
        if !(0.0..=1.0).contains(&c.eta) {
            return Err(err(None, "[channel] eta", "must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&c.kappa_i) {
            return Err(err(None, "[channel] kappa_i", "must lie in [0, 1]"));
        }
        if !(self.gamma_w >= 0.0 && self.gamma_o >= 0.0) {
            return Err(err(None, "[eom] gamma_w/gamma_o", "cooperativities must be >= 0"));
        }
        if self.mc_samples < 2 {
            return Err(err(None, "[run] mc_samples", "needs at least 2 samples"));
        }
        Ok(())
    }

    pub fn axis(&self, param: AxisParam) -> Option<&Axis> {
        self.axes.iter().find(|a| a.param == param)
    }
}

/// Parses configuration text. Validation is left to [`SweepConfig::validate`].
pub fn parse(text: &str) -> Result<SweepConfig, ConfigError> {
    let mut cfg = SweepConfig::default();
    let mut section = String::new();
    let mut seen = std::collections::HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = Some(idx + 1);
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| err(lineno, line, "unterminated section header"))?
                .trim()
                .to_ascii_lowercase();
            if !matches!(name.as_str(), "eom" | "channel" | "grid" | "output" | "run") {
                return Err(err(lineno, format!("[{name}]"), "unknown section"));
            }
            section = name;
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(lineno, line, "expected `key = value`"))?;
        let key = key.trim().to_ascii_lowercase();
        let value = value.trim();
        let field = format!("[{section}] {key}");
        if section.is_empty() {
            return Err(err(lineno, key, "key outside of any section"));
        }
        if !seen.insert((section.clone(), key.clone())) {
            return Err(err(lineno, field, "given twice"));
        }
        let at = |r: Result<f64, String>| r.map_err(|m| err(lineno, field.clone(), m));
        let q = |dim| at(parse_quantity(value, dim));

        match (section.as_str(), key.as_str()) {
            ("eom", "omega_m") => cfg.eom.omega_m = q(Dimension::Frequency)?,
            ("eom", "q_factor") => cfg.eom.q_factor = q(Dimension::None)?,
            ("eom", "kappa_w") => cfg.eom.kappa_w = q(Dimension::Frequency)?,
            ("eom", "kappa_o") => cfg.eom.kappa_o = q(Dimension::Frequency)?,
            ("eom", "omega_w") => cfg.eom.omega_w = q(Dimension::Frequency)?,
            ("eom", "wavelength") => cfg.eom.lambda_o = q(Dimension::Length)?,
            ("eom", "g_w") => cfg.eom.g_w = q(Dimension::Frequency)?,
            ("eom", "g_o") => cfg.eom.g_o = q(Dimension::Frequency)?,
            ("eom", "temperature") => cfg.eom.t_eom = q(Dimension::Temperature)?,
            ("eom", "gamma_w") => cfg.gamma_w = q(Dimension::None)?,
            ("eom", "gamma_o") => cfg.gamma_o = q(Dimension::None)?,
            ("channel", "eta") => cfg.channel.eta = q(Dimension::None)?,
            ("channel", "temperature") => cfg.channel.t_b = q(Dimension::Temperature)?,
            ("channel", "n_b") => cfg.channel.n_b = Some(q(Dimension::None)?),
            ("channel", "kappa_i") => cfg.channel.kappa_i = q(Dimension::None)?,
            ("channel", "exact_background") => {
                cfg.channel.exact_background = parse_switch(value).map_err(|m| err(lineno, field.clone(), m))?
            }
            ("grid", name) => {
                let param = AxisParam::parse(name)
                    .ok_or_else(|| err(lineno, field.clone(), "unknown axis parameter"))?;
                cfg.axes.push(parse_axis(param, value).map_err(|m| err(lineno, field.clone(), m))?);
            }
            ("output", "metrics") => {
                for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let m = Metric::parse(&item.to_ascii_lowercase())
                        .ok_or_else(|| err(lineno, field.clone(), format!("unknown metric `{item}`")))?;
                    if !cfg.metrics.contains(&m) {
                        cfg.metrics.push(m);
                    }
                }
            }
            ("output", "m") => {
                for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let m = at(parse_quantity(item, Dimension::None))?;
                    if !(m > 0.0) {
                        return Err(err(lineno, field, "M values must be positive"));
                    }
                    cfg.modes.push(m);
                }
            }
            ("run", "seed") => {
                cfg.seed = value
                    .parse()
                    .map_err(|_| err(lineno, field.clone(), "expected an unsigned integer"))?
            }
            ("run", "mc") => cfg.mc_validation = parse_switch(value).map_err(|m| err(lineno, field.clone(), m))?,
            ("run", "mc_samples") => {
                cfg.mc_samples = value
                    .parse()
                    .map_err(|_| err(lineno, field.clone(), "expected an unsigned integer"))?
            }
            _ => return Err(err(lineno, field, "unknown key")),
        }
    }
    Ok(cfg)
}

/// `min, max, points[, lin|log]`
fn parse_axis(param: AxisParam, value: &str) -> Result<Axis, String> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if !(3..=4).contains(&parts.len()) {
        return Err("expected `min, max, points[, lin|log]`".into());
    }
    let dim = param.dimension();
    let min = parse_quantity(parts[0], dim)?;
    let max = parse_quantity(parts[1], dim)?;
    let points = parts[2]
        .parse()
        .map_err(|_| format!("point count `{}` is not an unsigned integer", parts[2]))?;
    let spacing = match parts.get(3).map(|s| s.to_ascii_lowercase()) {
        None => Spacing::Linear,
        Some(s) if s == "lin" || s == "linear" => Spacing::Linear,
        Some(s) if s == "log" => Spacing::Log,
        Some(s) => return Err(format!("unknown spacing `{s}` (expected lin or log)")),
    };
    Ok(Axis {
        param,
        min,
        max,
        points,
        spacing,
    })
}
