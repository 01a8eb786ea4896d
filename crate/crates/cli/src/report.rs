use std::fmt::Write;

use qillum_core::detection::{
    coherent_snr_per_mode, ln_error_probability_coherent, ln_error_probability_qi,
};
use qillum_core::oracle::receiver_monte_carlo;
use qillum_core::{
    coherent_information, entanglement_metric, entanglement_threshold, figure_of_merit,
    gaussian_discord, is_stable, log_negativity, receiver_statistics, Error, Hypothesis,
};

use crate::sweep::{oracle_max_z, OperatingPoint};
use crate::{CliError, SweepConfig};

const DEFAULT_MODES: [f64; 5] = [1e4, 1e5, 1e6, 1e7, 1e8];

/// Oracle deltas beyond this many standard errors fail the report.
pub const MC_REPORT_Z: f64 = 3.0;

#[derive(Debug, Clone)]
pub struct Report {
    pub text: String,
    /// Internal checks that did not hold; empty means exit code 0.
    pub failures: Vec<String>,
}

/// Human-readable account of the base operating point. Unstable points are a
/// physics error.
pub fn report_point(cfg: &SweepConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let point = OperatingPoint::base(cfg);
    let stab = is_stable(point.coop, &point.eom);
    if !stab.stable {
        return Err(Error::Unstable { margin: stab.margin }.into());
    }
    let occ = point.eom.occupations();
    let coef = qillum_core::coefficients(point.coop)?;
    let src = qillum_core::source_moments(&coef, &occ);
    let state = src.state()?;
    let ch = point.target_channel()?;
    let rx = point.receiver(coef)?;
    let stats = receiver_statistics(&src, &ch, &rx, &occ)?;

    let mut out = String::new();
    let mut failures = Vec::new();
    let mut check = |out: &mut String, ok: bool, what: String| {
        let _ = writeln!(out, "  [{}] {what}", if ok { " ok " } else { "FAIL" });
        if !ok {
            failures.push(what);
        }
    };

    let w = &mut out;
    let _ = writeln!(w, "operating point");
    let _ = writeln!(w, "  Gamma_w = {:.6}, Gamma_o = {:.6}", point.coop.gamma_w, point.coop.gamma_o);
    let _ = writeln!(w, "  T_EOM = {} K", point.eom.t_eom);
    let _ = writeln!(
        w,
        "  drift matrix: stable, margin {:.6e} rad/s; adiabatic criterion: {}",
        stab.margin,
        if stab.adiabatic { "stable" } else { "unstable" }
    );
    let _ = writeln!(
        w,
        "  thermal occupations: n_w = {:.6e}, n_o = {:.6e}, n_b = {:.6e}",
        occ.n_w, occ.n_o, occ.n_b
    );

    let _ = writeln!(w, "\ncoefficients");
    let _ = writeln!(
        w,
        "  A_w = {:.9} (sign {:+}), A_o = {:.9}, B = {:.9}, C_w = {:.9}, C_o = {:.9}",
        coef.a_w, coef.a_w_sign, coef.a_o, coef.b, coef.c_w, coef.c_o
    );

    let _ = writeln!(w, "\nsource moments");
    let _ = writeln!(
        w,
        "  n_w = {:.9}, n_o = {:.9}, |<d_w d_o>| = {:.9}",
        src.n_w, src.n_o, src.cross
    );

    let metric = if src.cross == 0.0 {
        Ok(0.0)
    } else {
        entanglement_metric(&src)
    };
    let log_neg = log_negativity(&state)?;
    let coh = coherent_information(&state)?;
    let discord = gaussian_discord(&state)?;
    let _ = writeln!(w, "\ncorrelations");
    match metric {
        Ok(e) => {
            let _ = writeln!(w, "  E = {e:.9}");
        }
        Err(ref e) => {
            let _ = writeln!(w, "  E undefined: {e}");
        }
    }
    let _ = writeln!(
        w,
        "  E_N = {log_neg:.9} ebits ({:.9} per photon)",
        log_neg / src.n_w
    );
    let _ = writeln!(w, "  I(o>w) = {coh:.9} qubits ({:.9} per photon)", coh / src.n_w);
    let _ = writeln!(w, "  D(w|o) = {discord:.9} bits ({:.9} per photon)", discord / src.n_w);

    let _ = writeln!(w, "\nchannel and receiver");
    let _ = writeln!(
        w,
        "  eta = {}, T_B = {} K, n_B = {:.6}, kappa_I = {}",
        ch.eta, ch.t_b, ch.n_b, rx.idler_transmissivity
    );
    match entanglement_threshold(&src, ch.eta) {
        Ok(t) => {
            let _ = writeln!(w, "  entanglement-breaking background n_B^thresh = {t:.6}");
        }
        Err(e) => {
            let _ = writeln!(w, "  entanglement-breaking background undefined: {e}");
        }
    }
    let _ = writeln!(w, "  mu0 = {:.9e}, mu1 = {:.9e}", stats.mu0, stats.mu1);
    let _ = writeln!(w, "  var0 = {:.9e}, var1 = {:.9e}", stats.var0, stats.var1);
    let coh_snr = coherent_snr_per_mode(src.n_w, &ch);
    let f = figure_of_merit(&src, &ch, &rx, &occ)?;
    let _ = writeln!(
        w,
        "  SNR per mode: QI {:.9e}, coherent {:.9e}; F = {f:.6}",
        stats.snr_per_m, coh_snr
    );

    let modes: &[f64] = if cfg.modes.is_empty() {
        &DEFAULT_MODES
    } else {
        &cfg.modes
    };
    let _ = writeln!(w, "\nerror probabilities");
    for &m in modes {
        let lq = ln_error_probability_qi(&stats, m);
        let lc = ln_error_probability_coherent(src.n_w, &ch, m);
        let _ = writeln!(
            w,
            "  M = {m:.3e}: P_QI = {:.6e}, P_coh = {:.6e}, log10 ratio = {:.3}",
            lq.exp(),
            lc.exp(),
            (lq - lc) / std::f64::consts::LN_10
        );
    }

    let mut oracle_z = None;
    if cfg.mc_validation {
        let est = receiver_monte_carlo(&src, &ch, &rx, &occ, cfg.mc_samples, cfg.seed)?;
        let _ = writeln!(w, "\nmonte-carlo oracle ({} samples, seed {})", est.samples, cfg.seed);
        for h in [Hypothesis::H0, Hypothesis::H1] {
            let e = est.get(h);
            let _ = writeln!(
                w,
                "  {h:?}: mean delta {:+.3e} (se {:.3e}), variance delta {:+.3e} (se {:.3e})",
                stats.mean(h) - e.mean,
                e.mean_se,
                stats.variance(h) - e.variance,
                e.variance_se
            );
        }
        oracle_z = Some(oracle_max_z(&stats, &est));
    }

    let _ = writeln!(w, "\nchecks");
    let comm = (coef.microwave_commutator() - 1.0)
        .abs()
        .max((coef.optical_commutator() - 1.0).abs());
    check(w, comm <= 1e-12, format!("commutators preserved (max error {comm:.2e})"));
    check(
        w,
        stab.stable == stab.adiabatic,
        "drift-matrix and adiabatic stability agree".into(),
    );
    if let Ok(e) = metric {
        if (e - 1.0).abs() > 1e-4 {
            check(
                w,
                (e > 1.0) == (log_neg > 0.0),
                format!("E > 1 iff E_N > 0 (E = {e:.6}, E_N = {log_neg:.6})"),
            );
        }
    }
    check(w, discord >= 0.0, "discord non-negative".into());
    if let Some(z) = oracle_z {
        check(
            w,
            z <= MC_REPORT_Z,
            format!("oracle within {MC_REPORT_Z} standard errors (max |z| = {z:.3})"),
        );
    }

    Ok(Report { text: out, failures })
}
