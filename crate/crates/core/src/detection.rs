//! Target return channel, phase-conjugate receiver and error probabilities.
//!
//! The returned microwave mode is `c_R = c_B` under H₀ and
//! `c_R = √η d_w + √(1-η) c_B` under H₁. A second converter maps it to
//! `d_η = B c_R† + A_o c'_o,in - C_o b'_int†`, which is interfered with the
//! retained idler on a balanced beam splitter. The difference of the two
//! photocounts is `N = d_η† d_I + d_I† d_η`.

use crate::eom::{planck_occupation, EomCoefficients, SourceMoments, ThermalOccupations};
use crate::error::{Error, Result};
use crate::gaussian::{standard_form, TwoModeGaussianState};
use crate::numerics::{error_probability_from_snr, ln_error_probability_from_snr};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    /// Target absent.
    H0,
    /// Target present.
    H1,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetChannelParams {
    /// Round-trip transmissivity, target reflectivity included.
    pub eta: f64,
    /// Background temperature (K); informational once `n_b` is set.
    pub t_b: f64,
    /// Background mean photon number per mode.
    pub n_b: f64,
    /// Use `n_b / (1-η)` for the H₁ background instead of `n_b`.
    pub exact_h1_background: bool,
}

impl TargetChannelParams {
    /// Background occupation from the Planck law at the microwave frequency.
    pub fn from_temperature(eta: f64, t_b: f64, omega_w: f64) -> Result<Self> {
        Self::new(eta, t_b, planck_occupation(omega_w, t_b))
    }

    pub fn new(eta: f64, t_b: f64, n_b: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::domain("eta", eta, "0 <= eta <= 1"));
        }
        if !(n_b >= 0.0) {
            return Err(Error::domain("n_b", n_b, "n_b >= 0"));
        }
        Ok(TargetChannelParams {
            eta,
            t_b,
            n_b,
            exact_h1_background: false,
        })
    }

    pub fn exact(mut self, on: bool) -> Self {
        self.exact_h1_background = on;
        self
    }

    /// Thermal photons reaching the receiver under each hypothesis, i.e.
    /// `n_b` under H₀ and `(1-η) n_b'` under H₁.
    pub fn background_photons(&self, h: Hypothesis) -> f64 {
        match h {
            Hypothesis::H0 => self.n_b,
            Hypothesis::H1 if self.exact_h1_background => self.n_b,
            Hypothesis::H1 => (1.0 - self.eta) * self.n_b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiverParams {
    /// Coefficients of the receiver's converter (identical to the transmitter's).
    pub coef: EomCoefficients,
    /// Idler storage transmissivity `κ_I ∈ (0, 1]`.
    pub idler_transmissivity: f64,
}

impl ReceiverParams {
    pub fn new(coef: EomCoefficients, idler_transmissivity: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&idler_transmissivity) {
            return Err(Error::domain(
                "idler_transmissivity",
                idler_transmissivity,
                "0 <= kappa_i <= 1",
            ));
        }
        Ok(ReceiverParams {
            coef,
            idler_transmissivity,
        })
    }
}

/// Moments of the joint (return, idler) state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReturnMoments {
    pub n_r: f64,
    pub n_o: f64,
    /// `|⟨c_R d_o⟩|`.
    pub cross: f64,
}

impl ReturnMoments {
    pub fn state(&self) -> Result<TwoModeGaussianState> {
        standard_form(self.n_r, self.n_o, self.cross.into())
    }
}

pub fn return_moments(source: &SourceMoments, ch: &TargetChannelParams, h: Hypothesis) -> ReturnMoments {
    match h {
        Hypothesis::H0 => ReturnMoments {
            n_r: ch.n_b,
            n_o: source.n_o,
            cross: 0.0,
        },
        Hypothesis::H1 => ReturnMoments {
            n_r: ch.eta * source.n_w + ch.background_photons(Hypothesis::H1),
            n_o: source.n_o,
            cross: ch.eta.sqrt() * source.cross,
        },
    }
}

/// Joint Gaussian state of the returned microwave mode and the retained idler.
pub fn return_state(
    source: &SourceMoments,
    ch: &TargetChannelParams,
    h: Hypothesis,
) -> Result<TwoModeGaussianState> {
    return_moments(source, ch, h).state()
}

/// Background level above which the H₁ return and the idler are separable:
/// `η(|⟨d_w d_o⟩|²/n_o - n_w)`, clamped at zero.
pub fn entanglement_threshold(source: &SourceMoments, eta: f64) -> Result<f64> {
    if !(source.n_o > 0.0) {
        return Err(Error::domain("n_o", source.n_o, "n_o > 0"));
    }
    Ok((eta * (source.cross * source.cross / source.n_o - source.n_w)).max(0.0))
}

/// Per-mode statistics of the receiver's decision variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionStatistics {
    pub mu0: f64,
    pub mu1: f64,
    pub var0: f64,
    pub var1: f64,
    /// `SNR^(M) = M · snr_per_m`.
    pub snr_per_m: f64,
}

impl DetectionStatistics {
    /// Builds statistics with `snr_per_m = 4(μ₁ - μ₀)² / (σ₀ + σ₁)²`.
    pub fn from_moments(mu0: f64, mu1: f64, var0: f64, var1: f64) -> Self {
        let spread = var0.sqrt() + var1.sqrt();
        let snr_per_m = if spread > 0.0 {
            4.0 * (mu1 - mu0).powi(2) / (spread * spread)
        } else {
            0.0
        };
        DetectionStatistics {
            mu0,
            mu1,
            var0,
            var1,
            snr_per_m,
        }
    }

    pub fn snr(&self, m: f64) -> f64 {
        m * self.snr_per_m
    }

    pub fn mean(&self, h: Hypothesis) -> f64 {
        match h {
            Hypothesis::H0 => self.mu0,
            Hypothesis::H1 => self.mu1,
        }
    }

    pub fn variance(&self, h: Hypothesis) -> f64 {
        match h {
            Hypothesis::H0 => self.var0,
            Hypothesis::H1 => self.var1,
        }
    }
}

/// Photon numbers and the phase-insensitive correlation `⟨d_η† d_I⟩` of the
/// two beam-splitter inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiverModes {
    pub n_converted: f64,
    pub n_idler: f64,
    pub correlation: f64,
}

pub fn receiver_modes(
    source: &SourceMoments,
    ch: &TargetChannelParams,
    rx: &ReceiverParams,
    occ: &ThermalOccupations,
    h: Hypothesis,
) -> ReceiverModes {
    let ret = return_moments(source, ch, h);
    let EomCoefficients { a_o, b, c_o, .. } = rx.coef;
    let kappa = rx.idler_transmissivity;
    ReceiverModes {
        n_converted: b * b * (ret.n_r + 1.0) + a_o * a_o * occ.n_o + c_o * c_o * (occ.n_b + 1.0),
        n_idler: kappa * ret.n_o,
        correlation: b * kappa.sqrt() * ret.cross,
    }
}

/// Closed-form mean and variance of the difference count under each
/// hypothesis.
///
/// For zero-mean Gaussian modes `a`, `b` with `⟨ab⟩ = ⟨a²⟩ = ⟨b²⟩ = 0` and
/// real `γ = ⟨a†b⟩`, Wick factorization of the normally ordered fourth
/// moments gives `⟨N⟩ = 2γ` and `Var N = 2 n_a n_b + n_a + n_b + 2γ²`.
pub fn receiver_statistics(
    source: &SourceMoments,
    ch: &TargetChannelParams,
    rx: &ReceiverParams,
    occ: &ThermalOccupations,
) -> Result<DetectionStatistics> {
    let mut mu = [0.0; 2];
    let mut var = [0.0; 2];
    for (i, h) in [Hypothesis::H0, Hypothesis::H1].into_iter().enumerate() {
        return_state(source, ch, h)?;
        let m = receiver_modes(source, ch, rx, occ, h);
        let g = m.correlation;
        mu[i] = 2.0 * g;
        var[i] = 2.0 * m.n_converted * m.n_idler + m.n_converted + m.n_idler + 2.0 * g * g;
    }
    Ok(DetectionStatistics::from_moments(mu[0], mu[1], var[0], var[1]))
}

/// Error probability of the phase-conjugate receiver over `m` mode pairs.
/// The Gaussian approximation behind it needs `m ≫ 1`; below roughly 10³
/// modes it is indicative only.
pub fn error_probability_qi(stats: &DetectionStatistics, m: f64) -> f64 {
    error_probability_from_snr(stats.snr(m))
}

pub fn ln_error_probability_qi(stats: &DetectionStatistics, m: f64) -> f64 {
    ln_error_probability_from_snr(stats.snr(m))
}

/// Per-mode SNR of the homodyne coherent-state benchmark,
/// `4η n_w / (2 n_b + 1)`.
pub fn coherent_snr_per_mode(n_w: f64, ch: &TargetChannelParams) -> f64 {
    4.0 * ch.eta * n_w / (2.0 * ch.n_b + 1.0)
}

/// Error probability of a coherent-state transmitter with `n_w` photons per
/// mode and homodyne detection.
pub fn error_probability_coherent(n_w: f64, ch: &TargetChannelParams, m: f64) -> f64 {
    error_probability_from_snr(m * coherent_snr_per_mode(n_w, ch))
}

pub fn ln_error_probability_coherent(n_w: f64, ch: &TargetChannelParams, m: f64) -> f64 {
    ln_error_probability_from_snr(m * coherent_snr_per_mode(n_w, ch))
}

/// Homodyne statistics of the returned x quadrature for a coherent probe of
/// amplitude `√n_w`: the mean moves by `2√(η n_w)` and the variance is that
/// of the thermal return, `2 n + 1`.
pub fn coherent_homodyne_statistics(n_w: f64, ch: &TargetChannelParams) -> DetectionStatistics {
    let var0 = 2.0 * ch.background_photons(Hypothesis::H0) + 1.0;
    let var1 = 2.0 * ch.background_photons(Hypothesis::H1) + 1.0;
    DetectionStatistics::from_moments(0.0, 2.0 * (ch.eta * n_w).sqrt(), var0, var1)
}

/// `ℱ = SNR_QI / SNR_coh` at equal transmitted energy.
pub fn figure_of_merit(
    source: &SourceMoments,
    ch: &TargetChannelParams,
    rx: &ReceiverParams,
    occ: &ThermalOccupations,
) -> Result<f64> {
    let qi = receiver_statistics(source, ch, rx, occ)?.snr_per_m;
    let coh = coherent_snr_per_mode(source.n_w, ch);
    Ok(if coh > 0.0 { qi / coh } else { 0.0 })
}

/// Free-space range (km) covered by idler storage in fiber before the idler
/// loss exceeds `loss_budget_db`.
pub fn max_fiber_range(loss_db_per_km: f64, speed_fraction: f64, loss_budget_db: f64) -> Result<f64> {
    if !(loss_db_per_km > 0.0) {
        return Err(Error::domain("loss_db_per_km", loss_db_per_km, "> 0"));
    }
    if !(speed_fraction > 0.0) {
        return Err(Error::domain("speed_fraction", speed_fraction, "> 0"));
    }
    if !(loss_budget_db >= 0.0) {
        return Err(Error::domain("loss_budget_db", loss_budget_db, ">= 0"));
    }
    let fiber_km = loss_budget_db / loss_db_per_km;
    // round trip 2R/c equals the fiber delay L/(s c)
    Ok(fiber_km / (2.0 * speed_fraction))
}
