//! Quantum-correlation measures of the transmitter output, in base-2 units.

use nalgebra::Matrix2;

use crate::eom::{entanglement_metric, SourceMoments};
use crate::error::{Error, Result};
use crate::gaussian::{entropy, TwoModeGaussianState};
use crate::numerics::{nelder_mead, NelderMeadOptions};

/// `max(0, -log₂ ν̃₋)` in ebits.
pub fn log_negativity(state: &TwoModeGaussianState) -> Result<f64> {
    let s = state.symplectic_spectrum()?;
    Ok((-s.nu_ppt_minus.log2()).max(0.0))
}

/// `I(2⟩1) = S(ρ₁) - S(ρ₁₂)`, in qubits. Negative for weakly correlated
/// mixed states.
pub fn coherent_information(state: &TwoModeGaussianState) -> Result<f64> {
    let s = state.symplectic_spectrum()?;
    let local = entropy(state.block_a().determinant().sqrt())?;
    Ok(local - entropy(s.nu_plus)? - entropy(s.nu_minus)?)
}

/// Which mode the Gaussian measurement acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasuredMode {
    First,
    Second,
}

#[derive(Debug, Clone, Copy)]
pub struct DiscordOptions {
    /// Measurement squeezing is searched over `[1/max_squeezing, max_squeezing]`.
    pub max_squeezing: f64,
    /// Starting point `(ln s, θ)`; `None` seeds the simplex from a coarse grid.
    pub start: Option<[f64; 2]>,
    pub nelder_mead: NelderMeadOptions,
    /// Largest projected gradient tolerated on a non-converged run.
    pub grad_tol: f64,
}

impl Default for DiscordOptions {
    fn default() -> Self {
        DiscordOptions {
            max_squeezing: 1e4,
            start: None,
            nelder_mead: NelderMeadOptions::default(),
            grad_tol: 1e-6,
        }
    }
}

/// Result of the conditional-entropy minimization.
#[derive(Debug, Clone, Copy)]
pub struct DiscordDetail {
    pub discord: f64,
    pub conditional_entropy: f64,
    /// Optimal measurement as `(s, θ)`: covariance `R(θ) diag(s, 1/s) R(θ)ᵀ`.
    pub squeezing: f64,
    pub angle: f64,
}

/// Gaussian discord `D(1|2)`, in bits, with the measurement on mode 2.
pub fn gaussian_discord(state: &TwoModeGaussianState) -> Result<f64> {
    Ok(gaussian_discord_with(state, MeasuredMode::Second, &DiscordOptions::default())?.discord)
}

pub fn gaussian_discord_with(
    state: &TwoModeGaussianState,
    measured: MeasuredMode,
    opts: &DiscordOptions,
) -> Result<DiscordDetail> {
    let (kept, probed, corr) = match measured {
        MeasuredMode::Second => (state.block_a(), state.block_b(), state.block_c()),
        MeasuredMode::First => (state.block_b(), state.block_a(), state.block_c().transpose()),
    };
    let s = state.symplectic_spectrum()?;
    let unconditioned = entropy(probed.determinant().sqrt())? - entropy(s.nu_plus)? - entropy(s.nu_minus)?;

    let conditional = |x: &[f64; 2]| conditional_entropy(&kept, &probed, &corr, x[0], x[1]);
    let bound = opts.max_squeezing.ln();
    let lower = [-bound, 0.0];
    let upper = [bound, std::f64::consts::PI];

    let start = opts.start.unwrap_or_else(|| {
        let mut best = ([0.0, 0.0], f64::INFINITY);
        for i in 0..=16 {
            let u = -bound + 2.0 * bound * i as f64 / 16.0;
            for j in 0..8 {
                let th = std::f64::consts::PI * j as f64 / 8.0;
                let v = conditional(&[u, th]);
                if v < best.1 {
                    best = ([u, th], v);
                }
            }
        }
        best.0
    });
    // the conditional covariance is a difference of entries as large as the
    // biggest in V, so the objective is only known to about ε max|V|
    let scale = state.cm().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let noise = 16.0 * f64::EPSILON * scale;
    let nm_opts = NelderMeadOptions {
        f_tol: opts.nelder_mead.f_tol.max(noise),
        ..opts.nelder_mead
    };
    let min = nelder_mead(conditional, start, lower, upper, [bound / 8.0, 0.3], nm_opts);
    if !min.converged {
        let h = noise.sqrt().max(1e-6);
        let grad = projected_gradient(&conditional, min.x, lower, upper, h);
        if grad > opts.grad_tol + 4.0 * noise / h {
            return Err(Error::NoConvergence {
                best: unconditioned + min.value,
                grad_norm: grad,
            });
        }
    }
    Ok(DiscordDetail {
        discord: (unconditioned + min.value).max(0.0),
        conditional_entropy: min.value,
        squeezing: min.x[0].exp(),
        angle: min.x[1],
    })
}

/// Entropy of the kept mode after a pure Gaussian measurement of the probed
/// mode: `g(√det(A - C (B + σ)⁻¹ Cᵀ))`.
fn conditional_entropy(
    kept: &Matrix2<f64>,
    probed: &Matrix2<f64>,
    corr: &Matrix2<f64>,
    log_squeezing: f64,
    angle: f64,
) -> f64 {
    let s = log_squeezing.exp();
    let (sn, cs) = angle.sin_cos();
    let rot = Matrix2::new(cs, -sn, sn, cs);
    let sigma = rot * Matrix2::new(s, 0.0, 0.0, 1.0 / s) * rot.transpose();
    let inv = (probed + sigma)
        .try_inverse()
        .expect("B + σ is positive definite");
    let eps = kept - corr * inv * corr.transpose();
    let nu = eps.determinant().max(1.0).sqrt();
    entropy(nu).unwrap_or(0.0)
}

fn projected_gradient<F: Fn(&[f64; 2]) -> f64>(f: &F, x: [f64; 2], lo: [f64; 2], hi: [f64; 2], h: f64) -> f64 {
    let mut norm = 0.0;
    for i in 0..2 {
        let mut up = x;
        let mut dn = x;
        up[i] = (x[i] + h).min(hi[i]);
        dn[i] = (x[i] - h).max(lo[i]);
        let g = (f(&up) - f(&dn)) / (up[i] - dn[i]);
        // a bound-active coordinate only counts if descent points inward
        let blocked = (x[i] <= lo[i] && g > 0.0) || (x[i] >= hi[i] && g < 0.0);
        if !blocked {
            norm += g * g;
        }
    }
    norm.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationReport {
    pub e_metric: f64,
    /// Log-negativity (ebits).
    pub log_neg: f64,
    /// Coherent information `I(o⟩w)` (qubits).
    pub coh_info: f64,
    /// Discord `D(w|o)` (bits).
    pub discord: f64,
    pub log_neg_per_photon: f64,
    pub coh_info_per_photon: f64,
    pub discord_per_photon: f64,
}

/// All correlation measures of the source, each also divided by `n_w`.
pub fn correlation_report(m: &SourceMoments) -> Result<CorrelationReport> {
    let e_metric = entanglement_metric(m)?;
    let state = m.state()?;
    let log_neg = log_negativity(&state)?;
    let coh_info = coherent_information(&state)?;
    let discord = gaussian_discord(&state)?;
    Ok(CorrelationReport {
        e_metric,
        log_neg,
        coh_info,
        discord,
        log_neg_per_photon: log_neg / m.n_w,
        coh_info_per_photon: coh_info / m.n_w,
        discord_per_photon: discord / m.n_w,
    })
}
