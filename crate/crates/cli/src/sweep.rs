use rayon::prelude::*;

use qillum_core::detection::{
    ln_error_probability_coherent, ln_error_probability_qi, DetectionStatistics,
};
use qillum_core::oracle::{receiver_monte_carlo, ReceiverEstimate};
use qillum_core::{
    coherent_information, entanglement_metric, figure_of_merit, gaussian_discord, is_stable,
    log_negativity, receiver_statistics, Cooperativities, EomCoefficients, EomParams, Error,
    Hypothesis, ReceiverParams, SourceMoments, TargetChannelParams, ThermalOccupations,
};

use crate::config::{AxisParam, ChannelConfig, ConfigError, Metric, Spacing, SweepConfig};
use crate::dataset::{format_number, Dataset};
use crate::CliError;

/// A sweep with `--mc` fails validation when any point's oracle deviates by
/// more than this many standard errors.
pub const MC_SWEEP_Z: f64 = 5.0;

/// A fully specified operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub eom: EomParams,
    pub coop: Cooperativities,
    pub channel: ChannelConfig,
}

impl OperatingPoint {
    pub fn base(cfg: &SweepConfig) -> Self {
        OperatingPoint {
            eom: cfg.eom,
            coop: Cooperativities {
                gamma_w: cfg.gamma_w,
                gamma_o: cfg.gamma_o,
            },
            channel: cfg.channel,
        }
    }

    fn set(&mut self, param: AxisParam, v: f64) {
        match param {
            AxisParam::GammaW => self.coop.gamma_w = v,
            AxisParam::GammaO => self.coop.gamma_o = v,
            AxisParam::TEom => self.eom.t_eom = v,
            AxisParam::Eta => self.channel.eta = v,
            AxisParam::TB => self.channel.t_b = v,
            AxisParam::KappaI => self.channel.kappa_i = v,
            AxisParam::Modes => {}
        }
    }

    pub fn target_channel(&self) -> qillum_core::Result<TargetChannelParams> {
        let c = &self.channel;
        let ch = match c.n_b {
            Some(n_b) => TargetChannelParams::new(c.eta, c.t_b, n_b)?,
            None => TargetChannelParams::from_temperature(c.eta, c.t_b, self.eom.omega_w)?,
        };
        Ok(ch.exact(c.exact_background))
    }

    pub fn receiver(&self, coef: EomCoefficients) -> qillum_core::Result<ReceiverParams> {
        ReceiverParams::new(coef, self.channel.kappa_i)
    }
}

/// Largest `|closed form - estimate| / standard error` over the four
/// receiver moments.
pub fn oracle_max_z(stats: &DetectionStatistics, est: &ReceiverEstimate) -> f64 {
    [Hypothesis::H0, Hypothesis::H1]
        .into_iter()
        .flat_map(|h| {
            let e = est.get(h);
            [
                (stats.mean(h) - e.mean).abs() / e.mean_se,
                (stats.variance(h) - e.variance).abs() / e.variance_se,
            ]
        })
        .fold(0.0, f64::max)
}

/// Seed for grid point `index`, decorrelated from neighbouring indices.
pub fn point_seed(master: u64, index: u64) -> u64 {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    splitmix(master ^ splitmix(index))
}

pub struct SweepOutput {
    pub dataset: Dataset,
    /// Grid points whose oracle check exceeded [`MC_SWEEP_Z`].
    pub mc_failures: usize,
}

fn metadata(cfg: &SweepConfig, command: &str, config_hash: &str) -> Vec<(String, String)> {
    vec![
        ("qillum".into(), env!("CARGO_PKG_VERSION").into()),
        ("command".into(), command.into()),
        ("config_sha256".into(), config_hash.into()),
        ("seed".into(), cfg.seed.to_string()),
        ("mc".into(), if cfg.mc_validation { "on" } else { "off" }.into()),
    ]
}

fn metric_columns(cfg: &SweepConfig) -> Vec<String> {
    let mut cols = Vec::new();
    for &m in &cfg.metrics {
        match m {
            Metric::ErrorQi | Metric::ErrorCoherent => {
                for &modes in &cfg.modes {
                    cols.push(format!("{}(M={modes:e})", m.column()));
                }
            }
            _ => cols.push(m.column().to_string()),
        }
    }
    cols
}

/// Evaluates the selected grid.
///
/// Rows come out in row-major order over the axes (last axis fastest),
/// whatever the thread count. With no axes the base point is the only row.
pub fn run_sweep(cfg: &SweepConfig, config_hash: &str) -> Result<SweepOutput, CliError> {
    cfg.validate()?;
    if cfg.metrics.is_empty() {
        return Err(ConfigError {
            line: None,
            field: "[output] metrics".into(),
            message: "no outputs selected".into(),
        }
        .into());
    }
    if cfg.axis(AxisParam::Modes).is_some() {
        return Err(ConfigError {
            line: None,
            field: "[grid] m".into(),
            message: "an M axis is only valid for fig3".into(),
        }
        .into());
    }
    let wants_p = cfg
        .metrics
        .iter()
        .any(|m| matches!(m, Metric::ErrorQi | Metric::ErrorCoherent));
    if wants_p && cfg.modes.is_empty() {
        return Err(ConfigError {
            line: None,
            field: "[output] m".into(),
            message: "P_QI/P_coh selected without an M list".into(),
        }
        .into());
    }

    let values: Vec<Vec<f64>> = cfg.axes.iter().map(|a| a.values()).collect();
    let total: usize = values.iter().map(Vec::len).product();
    let base = OperatingPoint::base(cfg);

    let results: Vec<(Vec<String>, Option<f64>)> = (0..total)
        .into_par_iter()
        .map(|index| {
            let mut point = base;
            let mut row = Vec::new();
            let mut rest = index;
            let mut coords = vec![0; values.len()];
            for (k, axis) in values.iter().enumerate().rev() {
                coords[k] = rest % axis.len();
                rest /= axis.len();
            }
            for (k, axis) in values.iter().enumerate() {
                let v = axis[coords[k]];
                point.set(cfg.axes[k].param, v);
                row.push(format_number(v));
            }
            let z = evaluate_point(cfg, &point, index as u64, &mut row);
            (row, z)
        })
        .collect();

    let mut header: Vec<String> = cfg.axes.iter().map(|a| a.param.column().to_string()).collect();
    header.push("stable".into());
    header.push("drift_margin".into());
    header.extend(metric_columns(cfg));
    if cfg.mc_validation {
        header.push("mc_max_z".into());
    }
    header.push("error".into());

    let mc_failures = results
        .iter()
        .filter(|(_, z)| z.is_some_and(|z| !(z <= MC_SWEEP_Z)))
        .count();
    Ok(SweepOutput {
        dataset: Dataset {
            metadata: metadata(cfg, "sweep", config_hash),
            header,
            rows: results.into_iter().map(|(r, _)| r).collect(),
        },
        mc_failures,
    })
}

/// Appends the stability, metric, oracle and error cells of one point.
/// Returns the oracle's max |z| when it ran.
fn evaluate_point(cfg: &SweepConfig, point: &OperatingPoint, index: u64, row: &mut Vec<String>) -> Option<f64> {
    let stab = is_stable(point.coop, &point.eom);
    row.push(if stab.stable { "1" } else { "0" }.into());
    row.push(format_number(stab.margin));
    let width = metric_columns(cfg).len() + usize::from(cfg.mc_validation);
    if !stab.stable {
        row.extend(std::iter::repeat_n(String::new(), width));
        row.push(String::new());
        return None;
    }

    let mut errors: Vec<String> = Vec::new();
    let mut cells: Vec<String> = Vec::new();
    let mut z = None;
    match metrics_at(cfg, point) {
        Err(e) => {
            errors.push(e.to_string());
            cells.resize(width, String::new());
        }
        Ok(eval) => {
            for (name, value) in eval.cells {
                match value {
                    Ok(v) => cells.push(format_number(v)),
                    Err(e) => {
                        cells.push(String::new());
                        errors.push(format!("{name}: {e}"));
                    }
                }
            }
            if cfg.mc_validation {
                let seed = point_seed(cfg.seed, index);
                let est = eval.inputs.and_then(|(src, ch, rx, occ, stats)| {
                    receiver_monte_carlo(&src, &ch, &rx, &occ, cfg.mc_samples, seed)
                        .map(|est| oracle_max_z(&stats, &est))
                });
                match est {
                    Ok(v) => {
                        cells.push(format_number(v));
                        z = Some(v);
                    }
                    Err(e) => {
                        cells.push(String::new());
                        errors.push(format!("mc: {e}"));
                    }
                }
            }
        }
    }
    row.extend(cells);
    row.push(errors.join("; "));
    z
}

type ReceiverInputs = (
    SourceMoments,
    TargetChannelParams,
    ReceiverParams,
    ThermalOccupations,
    DetectionStatistics,
);

struct PointMetrics {
    cells: Vec<(String, Result<f64, Error>)>,
    inputs: Result<ReceiverInputs, Error>,
}

fn metrics_at(cfg: &SweepConfig, point: &OperatingPoint) -> Result<PointMetrics, Error> {
    let occ = point.eom.occupations();
    let coef = qillum_core::coefficients(point.coop)?;
    let src = qillum_core::source_moments(&coef, &occ);
    let state = src.state();
    let inputs = point.target_channel().and_then(|ch| {
        let rx = point.receiver(coef)?;
        let stats = receiver_statistics(&src, &ch, &rx, &occ)?;
        Ok((src, ch, rx, occ, stats))
    });

    let per_photon = |f: fn(&qillum_core::TwoModeGaussianState) -> Result<f64, Error>| {
        state.clone().and_then(|s| f(&s)).map(|v| v / src.n_w)
    };
    let mut cells = Vec::new();
    for &m in &cfg.metrics {
        let name = m.column().to_string();
        match m {
            Metric::EntanglementMetric => cells.push((name, entanglement_metric(&src))),
            Metric::LogNegPerPhoton => cells.push((name, per_photon(log_negativity))),
            Metric::CohInfoPerPhoton => cells.push((name, per_photon(coherent_information))),
            Metric::DiscordPerPhoton => cells.push((name, per_photon(gaussian_discord))),
            Metric::MicrowavePhotons => cells.push((name, Ok(src.n_w))),
            Metric::OpticalPhotons => cells.push((name, Ok(src.n_o))),
            Metric::AdiabaticMargin => cells.push((name, Ok(point.coop.gamma_w + 0.5 - point.coop.gamma_o))),
            Metric::FigureOfMerit => cells.push((
                name,
                inputs
                    .clone()
                    .and_then(|(src, ch, rx, occ, _)| figure_of_merit(&src, &ch, &rx, &occ)),
            )),
            Metric::ErrorQi => {
                for &modes in &cfg.modes {
                    let p = inputs
                        .clone()
                        .map(|(.., stats)| ln_error_probability_qi(&stats, modes).exp());
                    cells.push((format!("{name}(M={modes:e})"), p));
                }
            }
            Metric::ErrorCoherent => {
                for &modes in &cfg.modes {
                    let p = point
                        .target_channel()
                        .map(|ch| ln_error_probability_coherent(src.n_w, &ch, modes).exp());
                    cells.push((format!("{name}(M={modes:e})"), p));
                }
            }
        }
    }
    Ok(PointMetrics { cells, inputs })
}

/// Error probabilities against the time-bandwidth product at the base point.
/// The log10 columns stay exact where the plain ones underflow.
///
/// `M` comes from a log-spaced `m` axis or, without one, from the
/// `[output] m` list.
pub fn run_figure3(cfg: &SweepConfig, config_hash: &str) -> Result<Dataset, CliError> {
    cfg.validate()?;
    let config_err = |field: &str, message: &str| -> CliError {
        ConfigError {
            line: None,
            field: field.into(),
            message: message.into(),
        }
        .into()
    };
    if let Some(a) = cfg.axes.iter().find(|a| a.param != AxisParam::Modes) {
        return Err(config_err(
            &format!("[grid] {}", a.param.column()),
            "fig3 only sweeps the m axis",
        ));
    }
    let modes = match cfg.axis(AxisParam::Modes) {
        Some(_) if !cfg.modes.is_empty() => {
            return Err(config_err("[output] m", "give either an m axis or an M list, not both"));
        }
        Some(axis) if axis.spacing != Spacing::Log => {
            return Err(config_err("[grid] m", "the M axis must be log spaced"));
        }
        Some(axis) => axis.values(),
        None if cfg.modes.is_empty() => return Err(config_err("[grid] m", "no M values given")),
        None => cfg.modes.clone(),
    };

    let point = OperatingPoint::base(cfg);
    let stab = is_stable(point.coop, &point.eom);
    if !stab.stable {
        return Err(Error::Unstable { margin: stab.margin }.into());
    }
    let occ = point.eom.occupations();
    let coef = qillum_core::coefficients(point.coop)?;
    let src = qillum_core::source_moments(&coef, &occ);
    let ch = point.target_channel()?;
    let rx = point.receiver(coef)?;
    let stats = receiver_statistics(&src, &ch, &rx, &occ)?;
    let f = figure_of_merit(&src, &ch, &rx, &occ)?;

    let rows = modes
        .iter()
        .map(|&m| {
            let lq = ln_error_probability_qi(&stats, m);
            let lc = ln_error_probability_coherent(src.n_w, &ch, m);
            vec![
                format_number(m),
                format_number(lq.exp()),
                format_number(lc.exp()),
                format_number(f),
                format_number(lq / std::f64::consts::LN_10),
                format_number(lc / std::f64::consts::LN_10),
            ]
        })
        .collect();
    Ok(Dataset {
        metadata: metadata(cfg, "fig3", config_hash),
        header: ["M", "P_QI", "P_coh", "F", "log10_P_QI", "log10_P_coh"]
            .map(String::from)
            .to_vec(),
        rows,
    })
}
