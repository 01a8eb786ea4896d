//! Electro-opto-mechanical converter in the linearized, resolved-sideband
//! regime: the optical cavity is driven on the blue sideband (two-mode
//! squeezing with the mechanics) and the microwave cavity on the red
//! sideband (beam-splitter exchange with the mechanics).
//!
//! Output fields are the zero-frequency solution of the quantum Langevin
//! equations with `ċ = -κc + √(2κ) c_in`, `ḃ = -(γ_M/2) b + √γ_M b_in` and
//! `d = √(2κ) c - c_in`.

use std::f64::consts::PI;

use nalgebra::Matrix6;

use crate::error::{Error, Result};
use crate::gaussian::{standard_form, TwoModeGaussianState};

pub const HBAR: f64 = 1.054_571_817e-34;
pub const BOLTZMANN: f64 = 1.380_649e-23;
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Physical converter parameters. Rates and frequencies are angular (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EomParams {
    pub omega_m: f64,
    pub q_factor: f64,
    /// Cavity half-linewidths.
    pub kappa_w: f64,
    pub kappa_o: f64,
    pub omega_w: f64,
    /// Optical drive wavelength (m).
    pub lambda_o: f64,
    /// Single-photon coupling rates.
    pub g_w: f64,
    pub g_o: f64,
    /// Converter temperature (K).
    pub t_eom: f64,
}

impl EomParams {
    /// 10 MHz, Q = 3e4 resonator; 10 GHz microwave cavity with
    /// `κ_w = 0.2 ω_M`; 1064 nm optical cavity with `κ_o = 0.1 ω_M`; held at
    /// 30 mK.
    pub fn reference() -> Self {
        let omega_m = 2.0 * PI * 10e6;
        EomParams {
            omega_m,
            q_factor: 30e3,
            kappa_w: 0.2 * omega_m,
            kappa_o: 0.1 * omega_m,
            omega_w: 2.0 * PI * 10e9,
            lambda_o: 1064e-9,
            g_w: 2.0 * PI * 0.327,
            g_o: 2.0 * PI * 115.512,
            t_eom: 30e-3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("omega_m", self.omega_m),
            ("q_factor", self.q_factor),
            ("kappa_w", self.kappa_w),
            ("kappa_o", self.kappa_o),
            ("omega_w", self.omega_w),
            ("lambda_o", self.lambda_o),
            ("g_w", self.g_w),
            ("g_o", self.g_o),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(name, v, "> 0"));
            }
        }
        if !(self.t_eom >= 0.0) {
            return Err(Error::domain("t_eom", self.t_eom, ">= 0"));
        }
        Ok(())
    }

    /// Mechanical energy damping rate `γ_M = ω_M / Q`.
    pub fn gamma_m(&self) -> f64 {
        self.omega_m / self.q_factor
    }

    pub fn omega_o(&self) -> f64 {
        2.0 * PI * SPEED_OF_LIGHT / self.lambda_o
    }

    /// Thermal occupations of the microwave, optical and mechanical baths.
    pub fn occupations(&self) -> ThermalOccupations {
        ThermalOccupations {
            n_w: planck_occupation(self.omega_w, self.t_eom),
            n_o: planck_occupation(self.omega_o(), self.t_eom),
            n_b: planck_occupation(self.omega_m, self.t_eom),
        }
    }

    /// Cooperativities for the given intracavity photon numbers, using the
    /// enhanced couplings `G_j = g_j √N_j`.
    pub fn cooperativities(&self, photons_w: f64, photons_o: f64) -> Cooperativities {
        let gm = self.gamma_m();
        Cooperativities {
            gamma_w: self.g_w * self.g_w * photons_w / (self.kappa_w * gm),
            gamma_o: self.g_o * self.g_o * photons_o / (self.kappa_o * gm),
        }
    }

    /// Enhanced couplings `(G_w, G_o)` realizing the given cooperativities.
    pub fn enhanced_couplings(&self, coop: Cooperativities) -> (f64, f64) {
        let gm = self.gamma_m();
        (
            (coop.gamma_w * self.kappa_w * gm).sqrt(),
            (coop.gamma_o * self.kappa_o * gm).sqrt(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalOccupations {
    pub n_w: f64,
    pub n_o: f64,
    pub n_b: f64,
}

impl ThermalOccupations {
    pub fn zero() -> Self {
        ThermalOccupations {
            n_w: 0.0,
            n_o: 0.0,
            n_b: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cooperativities {
    pub gamma_w: f64,
    pub gamma_o: f64,
}

impl Cooperativities {
    pub fn new(gamma_w: f64, gamma_o: f64) -> Result<Self> {
        if !(gamma_w >= 0.0) {
            return Err(Error::domain("gamma_w", gamma_w, ">= 0"));
        }
        if !(gamma_o >= 0.0) {
            return Err(Error::domain("gamma_o", gamma_o, ">= 0"));
        }
        Ok(Cooperativities { gamma_w, gamma_o })
    }

    /// `1 + 2Γ_w - 2Γ_o`; the output fields exist only while this is positive.
    pub fn denominator(&self) -> f64 {
        1.0 + 2.0 * self.gamma_w - 2.0 * self.gamma_o
    }

    /// Adiabatic stability condition `Γ_o < Γ_w + 1/2`.
    pub fn adiabatically_stable(&self) -> bool {
        self.gamma_o < self.gamma_w + 0.5
    }
}

/// Magnitudes of the input-output coefficients
///
/// ```text
/// d_w = A_w c_w,in - B c_o,in† - C_w b_int
/// d_o = B c_w,in†  + A_o c_o,in - C_o b_int†
/// ```
///
/// The mechanical phase (`-i` on both `C` terms) is absorbed into `b_int`.
/// `A_w` changes sign at `2Γ_w + 2Γ_o = 1`; the sign is kept in `a_w_sign`
/// because it decides whether the squeezing and mechanical-noise
/// contributions to `⟨d_w d_o⟩` add or cancel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EomCoefficients {
    pub a_w: f64,
    pub a_o: f64,
    pub b: f64,
    pub c_w: f64,
    pub c_o: f64,
    pub a_w_sign: f64,
}

impl EomCoefficients {
    pub fn a_w_signed(&self) -> f64 {
        self.a_w_sign * self.a_w
    }

    /// `|A_w|² - |B|² + |C_w|²`, which must equal 1.
    pub fn microwave_commutator(&self) -> f64 {
        self.a_w * self.a_w - self.b * self.b + self.c_w * self.c_w
    }

    /// `|A_o|² - |B|² - |C_o|²`, which must equal 1.
    pub fn optical_commutator(&self) -> f64 {
        self.a_o * self.a_o - self.b * self.b - self.c_o * self.c_o
    }
}

/// Mean photon number `1/(e^{ħω/k_BT} - 1)` of a thermal mode.
pub fn planck_occupation(omega: f64, temp: f64) -> f64 {
    if temp <= 0.0 {
        return 0.0;
    }
    let x = HBAR * omega / (BOLTZMANN * temp);
    1.0 / x.exp_m1()
}

pub fn coefficients(coop: Cooperativities) -> Result<EomCoefficients> {
    let (gw, go) = (coop.gamma_w, coop.gamma_o);
    let d = coop.denominator();
    if !(d > 0.0) {
        return Err(Error::Unstable { margin: d });
    }
    let a_w_signed = (1.0 - 2.0 * gw - 2.0 * go) / d;
    Ok(EomCoefficients {
        a_w: a_w_signed.abs(),
        a_o: (1.0 + 2.0 * gw + 2.0 * go) / d,
        b: 4.0 * (gw * go).sqrt() / d,
        c_w: (8.0 * gw).sqrt() / d,
        c_o: (8.0 * go).sqrt() / d,
        a_w_sign: if a_w_signed < 0.0 { -1.0 } else { 1.0 },
    })
}

/// Second moments of the transmitter output `(d_w, d_o)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceMoments {
    pub n_w: f64,
    pub n_o: f64,
    /// `|⟨d_w d_o⟩|`.
    pub cross: f64,
}

impl SourceMoments {
    pub fn state(&self) -> Result<TwoModeGaussianState> {
        standard_form(self.n_w, self.n_o, self.cross.into())
    }
}

pub fn source_moments(coef: &EomCoefficients, occ: &ThermalOccupations) -> SourceMoments {
    let EomCoefficients {
        a_o, b, c_w, c_o, ..
    } = *coef;
    let a_w = coef.a_w;
    let n_w = a_w * a_w * occ.n_w + b * b * (occ.n_o + 1.0) + c_w * c_w * occ.n_b;
    let n_o = b * b * (occ.n_w + 1.0) + a_o * a_o * occ.n_o + c_o * c_o * (occ.n_b + 1.0);
    // the mechanical term enters as (-i)(-i) = -1 relative to the squeezing term
    let cross = coef.a_w_signed() * b * (occ.n_w + 1.0)
        - b * a_o * occ.n_o
        - c_w * c_o * (occ.n_b + 1.0);
    SourceMoments {
        n_w,
        n_o,
        cross: cross.abs(),
    }
}

/// Coefficients and output moments of a converter at the given cooperativities.
pub fn transmitter_output(
    params: &EomParams,
    coop: Cooperativities,
) -> Result<(EomCoefficients, SourceMoments)> {
    let coef = coefficients(coop)?;
    Ok((coef, source_moments(&coef, &params.occupations())))
}

/// `ℰ = |⟨d_w d_o⟩| / √(n_w n_o)`; the pair is entangled iff `ℰ > 1`.
pub fn entanglement_metric(m: &SourceMoments) -> Result<f64> {
    if !(m.n_w > 0.0 && m.n_o > 0.0) {
        return Err(Error::UndefinedMetric {
            n_w: m.n_w,
            n_o: m.n_o,
        });
    }
    Ok(m.cross / (m.n_w * m.n_o).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stability {
    /// All drift-matrix eigenvalues have negative real part.
    pub stable: bool,
    /// `-max Re λ` in rad/s.
    pub margin: f64,
    /// Verdict of `Γ_o < Γ_w + 1/2`.
    pub adiabatic: bool,
}

/// Drift matrix of the quadratures `(x_b, p_b, x_w, p_w, x_o, p_o)` under the
/// linearized interaction `G_o(c_o b + h.c.) + G_w(c_w b† + h.c.)`.
pub fn drift_matrix(coop: Cooperativities, params: &EomParams) -> Matrix6<f64> {
    let (gw, go) = params.enhanced_couplings(coop);
    let half_gm = params.gamma_m() / 2.0;
    let (kw, ko) = (params.kappa_w, params.kappa_o);
    #[rustfmt::skip]
    let m = Matrix6::new(
        -half_gm, 0.0,      0.0, gw,  0.0, -go,
        0.0,      -half_gm, -gw, 0.0, -go, 0.0,
        0.0,      gw,       -kw, 0.0, 0.0, 0.0,
        -gw,      0.0,      0.0, -kw, 0.0, 0.0,
        0.0,      -go,      0.0, 0.0, -ko, 0.0,
        -go,      0.0,      0.0, 0.0, 0.0, -ko,
    );
    m
}

pub fn is_stable(coop: Cooperativities, params: &EomParams) -> Stability {
    // eigenvalues in units of ω_M for conditioning
    let scale = params.omega_m;
    let eig = (drift_matrix(coop, params) / scale).complex_eigenvalues();
    let max_re = eig.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max) * scale;
    Stability {
        stable: max_re < 0.0,
        margin: -max_re,
        adiabatic: coop.adiabatically_stable(),
    }
}
