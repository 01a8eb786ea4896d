//! Zero-mean two-mode Gaussian states.
//!
//! Quadratures are ordered `(x1, p1, x2, p2)` with `x = a + a†` and
//! `p = -i(a - a†)`, so the vacuum has unit variance and `[x, p] = 2i`.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen, Vector4};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Absolute tolerance on symplectic eigenvalues used by the physicality check.
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// Two-mode symplectic form `Ω = ω ⊕ ω`, `ω = [[0, 1], [-1, 0]]`.
pub fn symplectic_form() -> Matrix4<f64> {
    let mut omega = Matrix4::zeros();
    omega[(0, 1)] = 1.0;
    omega[(1, 0)] = -1.0;
    omega[(2, 3)] = 1.0;
    omega[(3, 2)] = -1.0;
    omega
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticData {
    pub nu_plus: f64,
    pub nu_minus: f64,
    /// Smaller symplectic eigenvalue of the partially transposed state.
    pub nu_ppt_minus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeGaussianState {
    cm: Matrix4<f64>,
}

impl TwoModeGaussianState {
    /// Validates `cm` against the uncertainty principle at [`PHYSICALITY_TOL`].
    pub fn new(cm: Matrix4<f64>) -> Result<Self> {
        Self::with_tolerance(cm, PHYSICALITY_TOL)
    }

    pub fn with_tolerance(cm: Matrix4<f64>, tol: f64) -> Result<Self> {
        // symmetrize away round-off from upstream linear algebra
        let cm = (cm + cm.transpose()) * 0.5;
        let min_diag = (0..4).map(|i| cm[(i, i)]).fold(f64::INFINITY, f64::min);
        let max_diag = (0..4).map(|i| cm[(i, i)]).fold(0.0, f64::max);
        let spectrum = symplectic_eigenvalues(&cm, tol);
        match spectrum {
            Ok((nu_plus, nu_minus))
                if nu_minus >= 1.0 - effective_tolerance(tol, max_diag, nu_plus) && min_diag >= 1.0 - tol =>
            {
                Ok(TwoModeGaussianState { cm })
            }
            Ok((nu_plus, nu_minus)) => Err(Error::NonPhysical {
                nu_minus,
                nu_plus,
                min_diag,
            }),
            Err(Error::Degenerate { .. }) if !is_positive_definite(&cm) => Err(Error::NonPhysical {
                nu_minus: f64::NAN,
                nu_plus: f64::NAN,
                min_diag,
            }),
            Err(e) => Err(e),
        }
    }

    pub fn vacuum() -> Self {
        TwoModeGaussianState {
            cm: Matrix4::identity(),
        }
    }

    /// Product of two thermal states with the given mean photon numbers.
    pub fn thermal_product(n_1: f64, n_2: f64) -> Result<Self> {
        standard_form(n_1, n_2, Complex64::new(0.0, 0.0))
    }

    /// Two-mode squeezed vacuum with squeezing parameter `r`.
    pub fn two_mode_squeezed_vacuum(r: f64) -> Self {
        let a = (2.0 * r).cosh();
        let c = (2.0 * r).sinh();
        TwoModeGaussianState {
            cm: standard_form_matrix(a, a, c),
        }
    }

    pub fn cm(&self) -> &Matrix4<f64> {
        &self.cm
    }

    pub fn block_a(&self) -> Matrix2<f64> {
        self.cm.fixed_view::<2, 2>(0, 0).into_owned()
    }

    pub fn block_b(&self) -> Matrix2<f64> {
        self.cm.fixed_view::<2, 2>(2, 2).into_owned()
    }

    pub fn block_c(&self) -> Matrix2<f64> {
        self.cm.fixed_view::<2, 2>(0, 2).into_owned()
    }

    /// Mean photon number of mode 1 (`(tr A / 2 - 1) / 2`).
    pub fn mean_photons_1(&self) -> f64 {
        (self.block_a().trace() / 2.0 - 1.0) / 2.0
    }

    pub fn mean_photons_2(&self) -> f64 {
        (self.block_b().trace() / 2.0 - 1.0) / 2.0
    }

    /// Applies independent phase-space rotations to each mode.
    pub fn rotate_local(&self, theta_1: f64, theta_2: f64) -> Self {
        let mut r = Matrix4::zeros();
        for (k, theta) in [theta_1, theta_2].into_iter().enumerate() {
            let (s, c) = theta.sin_cos();
            let o = 2 * k;
            r[(o, o)] = c;
            r[(o, o + 1)] = s;
            r[(o + 1, o)] = -s;
            r[(o + 1, o + 1)] = c;
        }
        let cm = r * self.cm * r.transpose();
        TwoModeGaussianState {
            cm: (cm + cm.transpose()) * 0.5,
        }
    }

    /// Covariance matrix of the partial transpose (time reversal on mode 2).
    pub fn partial_transpose_cm(&self) -> Matrix4<f64> {
        let p = Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, 1.0, -1.0));
        p * self.cm * p
    }

    pub fn symplectic_spectrum(&self) -> Result<SymplecticData> {
        symplectic_spectrum(self)
    }

    pub fn is_pure(&self, tol: f64) -> Result<bool> {
        let s = self.symplectic_spectrum()?;
        Ok((s.nu_plus - 1.0).abs() <= tol && (s.nu_minus - 1.0).abs() <= tol)
    }
}

fn standard_form_matrix(a: f64, b: f64, c: f64) -> Matrix4<f64> {
    Matrix4::new(
        a, 0.0, c, 0.0, //
        0.0, a, 0.0, -c, //
        c, 0.0, b, 0.0, //
        0.0, -c, 0.0, b,
    )
}

/// Builds the standard-form covariance matrix from the mean photon numbers
/// and the phase-sensitive cross-correlation `⟨a₁a₂⟩`.
///
/// The phase of `cross` is removed by a local rotation; only `|cross|`
/// enters the result.
pub fn standard_form(n_w: f64, n_o: f64, cross: Complex64) -> Result<TwoModeGaussianState> {
    if !(n_w >= 0.0) {
        return Err(Error::domain("n_w", n_w, "n_w >= 0"));
    }
    if !(n_o >= 0.0) {
        return Err(Error::domain("n_o", n_o, "n_o >= 0"));
    }
    let cm = standard_form_matrix(2.0 * n_w + 1.0, 2.0 * n_o + 1.0, 2.0 * cross.norm());
    TwoModeGaussianState::new(cm)
}

/// Inputs with entries of order `d` fix `ν₋` only to about `ε d² / ν₊`, since
/// it comes out of the difference of quantities of order `d²`.
fn effective_tolerance(tol: f64, max_diag: f64, nu_plus: f64) -> f64 {
    tol.max(64.0 * f64::EPSILON * max_diag * max_diag / nu_plus.max(1.0))
}

fn is_positive_definite(cm: &Matrix4<f64>) -> bool {
    cm.cholesky().is_some()
}

fn determinant_invariants(cm: &Matrix4<f64>) -> (f64, f64, f64, f64) {
    let a = cm.fixed_view::<2, 2>(0, 0).determinant();
    let b = cm.fixed_view::<2, 2>(2, 2).determinant();
    let c = cm.fixed_view::<2, 2>(0, 2).determinant();
    (a, b, c, cm.determinant())
}

/// Symplectic eigenvalues `(ν₊, ν₋)` of a covariance matrix.
///
/// With `V = LLᵀ`, the antisymmetric matrix `K = Lᵀ Ω L` is similar to `ΩV`
/// and normal, so its spectrum `±iν` is well conditioned even when
/// `ν₊ = ν₋`, where the `Δ ± sqrt(Δ² - 4 det V)` formula loses half its
/// digits. The discriminant is still checked for gross inconsistency.
fn symplectic_eigenvalues(cm: &Matrix4<f64>, tol: f64) -> Result<(f64, f64)> {
    let (det_a, det_b, det_c, det_v) = determinant_invariants(cm);
    let delta = det_a + det_b + 2.0 * det_c;
    let discriminant = delta * delta - 4.0 * det_v;
    let scale = det_a.abs() + det_b.abs() + 2.0 * det_c.abs();
    if discriminant < -tol * scale.max(1.0).powi(2) {
        return Err(Error::Degenerate { discriminant });
    }
    let chol = cm.cholesky().ok_or(Error::Degenerate { discriminant })?;
    let l = chol.l();
    let k = l.transpose() * symplectic_form() * l;
    let ktk = k.transpose() * k;
    let eig = SymmetricEigen::new((ktk + ktk.transpose()) * 0.5);
    let mut sq: Vec<f64> = eig.eigenvalues.iter().map(|v| v.max(0.0)).collect();
    sq.sort_by(f64::total_cmp);
    let nu_plus = (0.5 * (sq[2] + sq[3])).sqrt();
    // the small pair of K^T K only has absolute accuracy ε ν₊², so take ν₋
    // from ν₊ ν₋ = √det V = Π L_ii instead
    let root_det: f64 = (0..4).map(|i| l[(i, i)]).product();
    let nu_minus = (root_det / nu_plus).min(nu_plus);
    Ok((nu_plus, nu_minus))
}

/// Global and partially transposed symplectic eigenvalues.
pub fn symplectic_spectrum(state: &TwoModeGaussianState) -> Result<SymplecticData> {
    let (nu_plus, nu_minus) = symplectic_eigenvalues(&state.cm, PHYSICALITY_TOL)?;
    // a validated state may sit a round-off below the bound
    let nu_minus = nu_minus.max(1.0);
    let (_, nu_ppt_minus) = symplectic_eigenvalues(&state.partial_transpose_cm(), PHYSICALITY_TOL)?;
    Ok(SymplecticData {
        nu_plus,
        nu_minus,
        nu_ppt_minus,
    })
}

/// Closed-form `ν±` from the local determinants. Kept for cross-checks; see
/// [`symplectic_spectrum`] for the route used in production.
pub fn symplectic_eigenvalues_closed_form(cm: &Matrix4<f64>) -> (f64, f64) {
    let (det_a, det_b, det_c, det_v) = determinant_invariants(cm);
    let delta = det_a + det_b + 2.0 * det_c;
    let root = (delta * delta - 4.0 * det_v).max(0.0).sqrt();
    (((delta + root) / 2.0).sqrt(), ((delta - root) / 2.0).max(0.0).sqrt())
}

/// Von Neumann entropy, in bits, of a thermal mode with symplectic
/// eigenvalue `nu`.
pub fn entropy(nu: f64) -> Result<f64> {
    if !(nu >= 1.0 - PHYSICALITY_TOL) {
        return Err(Error::domain("symplectic eigenvalue", nu, "nu >= 1"));
    }
    if nu <= 1.0 {
        return Ok(0.0);
    }
    let up = (nu + 1.0) / 2.0;
    let down = (nu - 1.0) / 2.0;
    Ok(up * up.log2() - down * down.log2())
}

/// Seeded stream of `count` i.i.d. quadrature vectors drawn from `N(0, cm)`.
pub fn sample_quadratures(
    state: &TwoModeGaussianState,
    count: usize,
    seed: u64,
) -> impl Iterator<Item = Vector4<f64>> {
    let l = state
        .cm
        .cholesky()
        .map(|c| c.l())
        .unwrap_or_else(|| psd_square_root(&state.cm));
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..count).map(move |_| {
        let z = Vector4::from_fn(|_, _| StandardNormal.sample(&mut rng));
        l * z
    })
}

fn psd_square_root(cm: &Matrix4<f64>) -> Matrix4<f64> {
    let eig = SymmetricEigen::new(*cm);
    let sqrt_vals = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
    eig.eigenvectors * Matrix4::from_diagonal(&sqrt_vals) * eig.eigenvectors.transpose()
}
