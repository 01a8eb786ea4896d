//! Browser bindings: a correlation map over the cooperativity plane, error
//! probability curves, and a text summary of one operating point.
//!
//! Build with `wasm-pack build crates/web --target web --out-dir www/pkg`.

use wasm_bindgen::prelude::*;

use qillum_core::detection::{ln_error_probability_coherent, ln_error_probability_qi};
use qillum_core::{
    coefficients, entanglement_metric, entanglement_threshold, figure_of_merit, is_stable,
    log_negativity, receiver_statistics, source_moments, Cooperativities, EomParams,
    ReceiverParams, TargetChannelParams,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel {
    pub eta: f64,
    pub t_b: f64,
    pub kappa_i: f64,
}

impl Default for Channel {
    fn default() -> Self {
        Channel {
            eta: 0.07,
            t_b: 293.0,
            kappa_i: 1.0,
        }
    }
}

fn params(t_eom_mk: f64) -> EomParams {
    EomParams {
        t_eom: t_eom_mk * 1e-3,
        ..EomParams::reference()
    }
}

fn value_at(metric: &str, p: &EomParams, coop: Cooperativities, ch: Channel) -> Result<f64, String> {
    if !is_stable(coop, p).stable {
        return Ok(f64::NAN);
    }
    let occ = p.occupations();
    let coef = coefficients(coop).map_err(|e| e.to_string())?;
    let src = source_moments(&coef, &occ);
    let v = match metric {
        "E" => entanglement_metric(&src),
        "EN" => src.state().and_then(|s| log_negativity(&s)).map(|e| e / src.n_w),
        "F" => TargetChannelParams::from_temperature(ch.eta, ch.t_b, p.omega_w).and_then(|c| {
            let rx = ReceiverParams::new(coef, ch.kappa_i)?;
            figure_of_merit(&src, &c, &rx, &occ)
        }),
        other => return Err(format!("unknown metric `{other}`")),
    };
    Ok(v.unwrap_or(f64::NAN))
}

/// `n × n` map over `log10 Γ ∈ [log_min, log_max]` on both axes, row `j`
/// holding `Γ_o` index `j`. Unstable points are NaN.
pub fn surface_values(
    metric: &str,
    t_eom_mk: f64,
    log_min: f64,
    log_max: f64,
    n: usize,
    ch: Channel,
) -> Result<Vec<f64>, String> {
    if n < 2 || !(log_max > log_min) {
        return Err("need n >= 2 and log_max > log_min".into());
    }
    let p = params(t_eom_mk);
    let at = |k: usize| 10f64.powf(log_min + (log_max - log_min) * k as f64 / (n - 1) as f64);
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            out.push(value_at(metric, &p, Cooperativities { gamma_w: at(i), gamma_o: at(j) }, ch)?);
        }
    }
    Ok(out)
}

/// `log10 P_QI` and `log10 P_coh`, interleaved, at `points` log-spaced `M`.
pub fn curve_values(
    gamma_w: f64,
    gamma_o: f64,
    t_eom_mk: f64,
    ch: Channel,
    log_m_min: f64,
    log_m_max: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    let p = params(t_eom_mk);
    let coop = Cooperativities::new(gamma_w, gamma_o).map_err(|e| e.to_string())?;
    let stab = is_stable(coop, &p);
    if !stab.stable {
        return Err(format!("unstable operating point (margin {:.3e} rad/s)", stab.margin));
    }
    let occ = p.occupations();
    let run = || -> qillum_core::Result<Vec<f64>> {
        let coef = coefficients(coop)?;
        let src = source_moments(&coef, &occ);
        let c = TargetChannelParams::from_temperature(ch.eta, ch.t_b, p.omega_w)?;
        let rx = ReceiverParams::new(coef, ch.kappa_i)?;
        let stats = receiver_statistics(&src, &c, &rx, &occ)?;
        let mut out = Vec::with_capacity(2 * points);
        for k in 0..points {
            let m = 10f64.powf(log_m_min + (log_m_max - log_m_min) * k as f64 / (points.max(2) - 1) as f64);
            out.push(ln_error_probability_qi(&stats, m) / std::f64::consts::LN_10);
            out.push(ln_error_probability_coherent(src.n_w, &c, m) / std::f64::consts::LN_10);
        }
        Ok(out)
    };
    run().map_err(|e| e.to_string())
}

pub fn summary_text(gamma_w: f64, gamma_o: f64, t_eom_mk: f64, ch: Channel) -> Result<String, String> {
    let p = params(t_eom_mk);
    let coop = Cooperativities::new(gamma_w, gamma_o).map_err(|e| e.to_string())?;
    let stab = is_stable(coop, &p);
    if !stab.stable {
        return Ok(format!(
            "Gamma_w = {gamma_w:.4e}, Gamma_o = {gamma_o:.4e}\nunstable (margin {:.3e} rad/s)",
            stab.margin
        ));
    }
    let occ = p.occupations();
    let run = || -> qillum_core::Result<String> {
        let coef = coefficients(coop)?;
        let src = source_moments(&coef, &occ);
        let c = TargetChannelParams::from_temperature(ch.eta, ch.t_b, p.omega_w)?;
        let rx = ReceiverParams::new(coef, ch.kappa_i)?;
        let e = entanglement_metric(&src).unwrap_or(0.0);
        let en = log_negativity(&src.state()?)?;
        let f = figure_of_merit(&src, &c, &rx, &occ)?;
        let thr = entanglement_threshold(&src, ch.eta)
            .map(|t| format!("{t:.4e}"))
            .unwrap_or_else(|_| "-".into());
        Ok(format!(
            "Gamma_w = {gamma_w:.4e}, Gamma_o = {gamma_o:.4e}\n\
             n_w = {:.5}, n_o = {:.5}\n\
             E = {e:.5}, E_N = {en:.5} ebits\n\
             n_B = {:.2}, n_B^thresh = {thr}\n\
             F = {f:.5}",
            src.n_w, src.n_o, c.n_b
        ))
    };
    run().map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn surface(metric: &str, t_eom_mk: f64, log_min: f64, log_max: f64, n: usize) -> Result<Vec<f64>, JsError> {
    surface_values(metric, t_eom_mk, log_min, log_max, n, Channel::default()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn curves(
    gamma_w: f64,
    gamma_o: f64,
    t_eom_mk: f64,
    eta: f64,
    t_b: f64,
    kappa_i: f64,
    log_m_min: f64,
    log_m_max: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    let ch = Channel { eta, t_b, kappa_i };
    curve_values(gamma_w, gamma_o, t_eom_mk, ch, log_m_min, log_m_max, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn summary(gamma_w: f64, gamma_o: f64, t_eom_mk: f64, eta: f64, t_b: f64, kappa_i: f64) -> Result<String, JsError> {
    summary_text(gamma_w, gamma_o, t_eom_mk, Channel { eta, t_b, kappa_i }).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surface_masks_unstable_corner() {
        let v = surface_values("E", 30.0, 1.0, 4.0, 8, Channel::default()).unwrap();
        assert_eq!(v.len(), 64);
        // Γ_o = 1e4 > Γ_w = 10 is unstable; Γ_o = 10 < Γ_w = 1e4 is not
        assert!(v[7 * 8].is_nan());
        assert!(v[7] > 1.0);
        assert!(surface_values("X", 30.0, 1.0, 4.0, 4, Channel::default()).is_err());
    }

    #[test]
    fn curves_at_operating_point() {
        let v = curve_values(5181.95, 668.43, 30.0, Channel::default(), 4.0, 8.0, 5).unwrap();
        assert_eq!(v.len(), 10);
        for k in 0..5 {
            assert!(v[2 * k] < v[2 * k + 1]);
        }
        assert!(curve_values(10.0, 100.0, 30.0, Channel::default(), 4.0, 8.0, 5).is_err());
    }

    #[test]
    fn summary_mentions_background() {
        let s = summary_text(5181.95, 668.43, 30.0, Channel::default()).unwrap();
        assert!(s.contains("n_B = 610.01"), "{s}");
        assert!(summary_text(10.0, 100.0, 30.0, Channel::default()).unwrap().contains("unstable"));
    }
}
