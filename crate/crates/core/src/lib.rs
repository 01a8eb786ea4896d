//! Gaussian-state model of a microwave quantum-illumination radar.
//!
//! The transmitter is an electro-opto-mechanical (EOM) converter that
//! entangles a microwave signal with an optical idler. The microwave return
//! is phase conjugated and upconverted by a second converter, interfered
//! with the retained idler and detected by difference photocounting.
//!
//! Module map:
//!
//! * [`gaussian`] two-mode covariance matrices, symplectic spectra, entropies
//!   and a seeded Monte-Carlo sampler.
//! * [`eom`] converter physics: thermal occupations, input-output
//!   coefficients, output moments, drift-matrix stability.
//! * [`correlations`] log-negativity, coherent information, Gaussian discord.
//! * [`detection`] target channel, phase-conjugate receiver statistics,
//!   error probabilities and the quantum-advantage figure of merit.
//! * [`oracle`] sampling-based estimates of the receiver statistics, used to
//!   validate the closed forms.
//! * [`numerics`] log-domain `erfc` and a bounded Nelder-Mead minimizer.

pub mod correlations;
pub mod detection;
pub mod eom;
mod error;
pub mod gaussian;
pub mod numerics;
pub mod oracle;

pub use correlations::{
    coherent_information, correlation_report, gaussian_discord, log_negativity, CorrelationReport,
};
pub use detection::{
    entanglement_threshold, error_probability_coherent, error_probability_qi, figure_of_merit,
    max_fiber_range, receiver_statistics, return_state, DetectionStatistics, Hypothesis,
    ReceiverParams, TargetChannelParams,
};
pub use eom::{
    coefficients, entanglement_metric, is_stable, planck_occupation, source_moments,
    Cooperativities, EomCoefficients, EomParams, SourceMoments, Stability, ThermalOccupations,
};
pub use error::{Error, Result};
pub use gaussian::{entropy, sample_quadratures, standard_form, SymplecticData, TwoModeGaussianState};
