use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-physical covariance matrix: nu_minus = {nu_minus:.6e}, nu_plus = {nu_plus:.6e}, min diagonal = {min_diag:.6e}")]
    NonPhysical {
        nu_minus: f64,
        nu_plus: f64,
        min_diag: f64,
    },

    #[error("symplectic spectrum is numerically degenerate (discriminant {discriminant:.3e})")]
    Degenerate { discriminant: f64 },

    #[error("{what} = {value} is outside its domain ({domain})")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("converter is dynamically unstable (stability margin {margin:.6e} rad/s)")]
    Unstable { margin: f64 },

    #[error("entanglement metric undefined for n_w = {n_w}, n_o = {n_o}")]
    UndefinedMetric { n_w: f64, n_o: f64 },

    #[error("discord minimizer did not converge (best value {best:.9e}, gradient norm {grad_norm:.3e})")]
    NoConvergence { best: f64, grad_norm: f64 },
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            what,
            value,
            domain,
        }
    }
}
