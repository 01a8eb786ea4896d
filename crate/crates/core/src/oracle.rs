//! Monte-Carlo estimate of the phase-conjugate receiver statistics.
//!
//! Independent of the Wick closed forms in [`crate::detection`]: the joint
//! covariance of the converted mode and the idler is propagated through the
//! receiver as a linear quadrature map, quadratures are sampled from it and
//! the difference count is evaluated sample by sample.
//!
//! With `x = a + a†`, `p = -i(a - a†)` the observable is
//! `N = a†b + b†a = (x_a x_b + p_a p_b)/2`. Sampling draws from the Wigner
//! function, which returns symmetrically ordered moments. `⟨N⟩` needs no
//! correction because `x_a x_b` and `p_a p_b` are products of commuting
//! operators. For `⟨N²⟩` the cross term
//! `x_a x_b p_a p_b + p_a p_b x_a x_b = 2 S_a S_b - 2`, with
//! `S = (xp + px)/2` and `xp = S + i`, so the quantum variance is the
//! sampled variance minus `1/2`.

use nalgebra::{Matrix2, SMatrix};

use crate::detection::{return_state, Hypothesis, ReceiverParams, TargetChannelParams};
use crate::eom::{SourceMoments, ThermalOccupations};
use crate::error::Result;
use crate::gaussian::{sample_quadratures, TwoModeGaussianState};

/// Symmetric-to-normal ordering correction for `Var N`.
pub const VARIANCE_ORDERING_SHIFT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEstimate {
    pub mean: f64,
    pub variance: f64,
    pub mean_se: f64,
    pub variance_se: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiverEstimate {
    pub h0: MomentEstimate,
    pub h1: MomentEstimate,
    pub samples: usize,
}

impl ReceiverEstimate {
    pub fn get(&self, h: Hypothesis) -> &MomentEstimate {
        match h {
            Hypothesis::H0 => &self.h0,
            Hypothesis::H1 => &self.h1,
        }
    }
}

/// Joint state of the receiver's converted mode `d_η` and the stored idler.
pub fn receiver_output_state(
    source: &SourceMoments,
    ch: &TargetChannelParams,
    rx: &ReceiverParams,
    occ: &ThermalOccupations,
    h: Hypothesis,
) -> Result<TwoModeGaussianState> {
    let ret = return_state(source, ch, h)?;
    // inputs: (x_R, p_R, x_o, p_o, x_c', p_c', x_b', p_b', x_v, p_v)
    let mut input = SMatrix::<f64, 10, 10>::zeros();
    input.fixed_view_mut::<4, 4>(0, 0).copy_from(ret.cm());
    input
        .fixed_view_mut::<2, 2>(4, 4)
        .copy_from(&Matrix2::from_diagonal_element(2.0 * occ.n_o + 1.0));
    input
        .fixed_view_mut::<2, 2>(6, 6)
        .copy_from(&Matrix2::from_diagonal_element(2.0 * occ.n_b + 1.0));
    input
        .fixed_view_mut::<2, 2>(8, 8)
        .copy_from(&Matrix2::identity());

    let c = &rx.coef;
    let k = rx.idler_transmissivity;
    let mut map = SMatrix::<f64, 4, 10>::zeros();
    // d_η = B c_R† + A_o c' - C_o b'†; conjugation flips the p quadrature
    map[(0, 0)] = c.b;
    map[(0, 4)] = c.a_o;
    map[(0, 6)] = -c.c_o;
    map[(1, 1)] = -c.b;
    map[(1, 5)] = c.a_o;
    map[(1, 7)] = c.c_o;
    // idler after storage loss
    map[(2, 2)] = k.sqrt();
    map[(2, 8)] = (1.0 - k).sqrt();
    map[(3, 3)] = k.sqrt();
    map[(3, 9)] = (1.0 - k).sqrt();

    TwoModeGaussianState::new(map * input * map.transpose())
}

fn estimate(state: &TwoModeGaussianState, samples: usize, seed: u64) -> MomentEstimate {
    let n = samples as f64;
    let values: Vec<f64> = sample_quadratures(state, samples, seed)
        .map(|q| 0.5 * (q[0] * q[2] + q[1] * q[3]))
        .collect();
    let mean = values.iter().sum::<f64>() / n;
    let (mut m2, mut m4) = (0.0, 0.0);
    for v in &values {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    let var_w = m2 / (n - 1.0);
    let m4 = m4 / n;
    MomentEstimate {
        mean,
        variance: var_w - VARIANCE_ORDERING_SHIFT,
        mean_se: (var_w / n).sqrt(),
        variance_se: ((m4 - var_w * var_w).max(0.0) / n).sqrt(),
    }
}

/// Samples `samples` mode pairs per hypothesis. H₀ uses `seed`, H₁ uses
/// `seed + 1`.
pub fn receiver_monte_carlo(
    source: &SourceMoments,
    ch: &TargetChannelParams,
    rx: &ReceiverParams,
    occ: &ThermalOccupations,
    samples: usize,
    seed: u64,
) -> Result<ReceiverEstimate> {
    let s0 = receiver_output_state(source, ch, rx, occ, Hypothesis::H0)?;
    let s1 = receiver_output_state(source, ch, rx, occ, Hypothesis::H1)?;
    Ok(ReceiverEstimate {
        h0: estimate(&s0, samples, seed),
        h1: estimate(&s1, samples, seed.wrapping_add(1)),
        samples,
    })
}
