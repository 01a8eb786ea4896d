//! Small numerical kernels: log-domain complementary error function and a
//! box-constrained Nelder-Mead minimizer.

use libm::erfc;

/// `ln erfc(x)`, accurate where `erfc(x)` itself underflows.
pub fn ln_erfc(x: f64) -> f64 {
    if x < 20.0 {
        return erfc(x).ln();
    }
    // erfc(x) = e^{-x²}/(x√π) · S(x), S from the continued fraction
    // S = 1/(1 + 1/(2x²)/(1 + 2/(2x²)/(1 + ...)))
    let t = 1.0 / (2.0 * x * x);
    let mut frac = 1.0;
    for k in (1..=40).rev() {
        frac = 1.0 + k as f64 * t / frac;
    }
    -x * x - (x * std::f64::consts::PI.sqrt()).ln() - frac.ln()
}

/// `erfc(√(snr/8)) / 2`: minimum error probability of an equiprobable binary
/// test with Gaussian statistics at signal-to-noise ratio `snr`.
pub fn error_probability_from_snr(snr: f64) -> f64 {
    0.5 * erfc((snr.max(0.0) / 8.0).sqrt())
}

/// Natural log of [`error_probability_from_snr`].
pub fn ln_error_probability_from_snr(snr: f64) -> f64 {
    ln_erfc((snr.max(0.0) / 8.0).sqrt()) - std::f64::consts::LN_2
}

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub max_iter: usize,
    /// Stop once the simplex spread in function value falls below this.
    pub f_tol: f64,
    /// ... and its diameter falls below this.
    pub x_tol: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            max_iter: 2000,
            f_tol: 1e-14,
            x_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Minimum<const N: usize> {
    pub x: [f64; N],
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimizes `f` over the box `lower <= x <= upper`, starting from `start`.
/// Trial points are clamped into the box.
pub fn nelder_mead<const N: usize, F>(
    f: F,
    start: [f64; N],
    lower: [f64; N],
    upper: [f64; N],
    step: [f64; N],
    opts: NelderMeadOptions,
) -> Minimum<N>
where
    F: Fn(&[f64; N]) -> f64,
{
    let clamp = |mut x: [f64; N]| {
        for i in 0..N {
            x[i] = x[i].clamp(lower[i], upper[i]);
        }
        x
    };
    let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    let x0 = clamp(start);
    simplex.push((x0, f(&x0)));
    for i in 0..N {
        let mut x = x0;
        x[i] += step[i];
        if x[i] > upper[i] {
            x[i] = x0[i] - step[i];
        }
        let x = clamp(x);
        simplex.push((x, f(&x)));
    }

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[N].1 - simplex[0].1;
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                (0..N)
                    .map(|i| (x[i] - simplex[0].0[i]).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if spread.abs() <= opts.f_tol && diameter <= opts.x_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = [0.0; N];
        for (x, _) in &simplex[..N] {
            for i in 0..N {
                centroid[i] += x[i] / N as f64;
            }
        }
        let worst = simplex[N];
        let along = |t: f64| {
            let mut x = [0.0; N];
            for i in 0..N {
                x[i] = centroid[i] + t * (worst.0[i] - centroid[i]);
            }
            clamp(x)
        };

        let xr = along(-1.0);
        let fr = f(&xr);
        if fr < simplex[0].1 {
            let xe = along(-2.0);
            let fe = f(&xe);
            simplex[N] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[N - 1].1 {
            simplex[N] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst.1 {
            let x = along(-0.5);
            (x, f(&x))
        } else {
            let x = along(0.5);
            (x, f(&x))
        };
        if fc < worst.1.min(fr) {
            simplex[N] = (xc, fc);
            continue;
        }
        // shrink toward the best vertex
        let best = simplex[0].0;
        for (x, fx) in simplex.iter_mut().skip(1) {
            for i in 0..N {
                x[i] = best[i] + 0.5 * (x[i] - best[i]);
            }
            *fx = f(x);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    Minimum {
        x: simplex[0].0,
        value: simplex[0].1,
        iterations,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_erfc_matches_direct_below_switch() {
        for x in [0.0, 0.5, 3.0, 10.0, 19.9] {
            assert!((ln_erfc(x) - erfc(x).ln()).abs() < 1e-12 * erfc(x).ln().abs().max(1.0));
        }
    }

    #[test]
    fn ln_erfc_is_continuous_at_switch() {
        let below = erfc(19.999_999).ln();
        let above = ln_erfc(20.000_001);
        assert!((below - above).abs() < 1e-4, "{below} {above}");
        assert!((erfc(20.0).ln() - ln_erfc(20.0)).abs() < 1e-12 * 400.0);
    }

    #[test]
    fn ln_erfc_far_tail() {
        // leading asymptotics -x² - ln(x√π)
        let x = 100.0;
        let lead = -x * x - (x * std::f64::consts::PI.sqrt()).ln();
        assert!((ln_erfc(x) - lead).abs() < 1e-4);
    }

    #[test]
    fn error_probability_table_values() {
        assert_eq!(error_probability_from_snr(0.0), 0.5);
        // erfc(1)/2
        assert!((error_probability_from_snr(8.0) - 0.078_649_603_525_142_58).abs() < 1e-14);
        let p = error_probability_from_snr(3000.0);
        assert!((ln_error_probability_from_snr(3000.0) - p.ln()).abs() < 1e-10);
    }

    #[test]
    fn nelder_mead_rosenbrock() {
        let rosen = |x: &[f64; 2]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = nelder_mead(
            rosen,
            [-1.2, 1.0],
            [-5.0, -5.0],
            [5.0, 5.0],
            [0.5, 0.5],
            NelderMeadOptions::default(),
        );
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-6 && (m.x[1] - 1.0).abs() < 1e-6, "{m:?}");
    }

    #[test]
    fn nelder_mead_respects_bounds() {
        let m = nelder_mead(
            |x: &[f64; 1]| x[0],
            [0.5],
            [0.0],
            [1.0],
            [0.2],
            NelderMeadOptions::default(),
        );
        assert_eq!(m.x[0], 0.0);
    }
}
