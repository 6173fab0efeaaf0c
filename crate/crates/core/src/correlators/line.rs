//! Real-space correlators on the line.
//!
//! For x > 0 the transform exploits evenness,
//! C(x) = (1/π) ∫₀^∞ cos(kx) C(k) dk, with the decomposition of
//! [`super::decompose`]: the k/2 part contributes the distributional
//! -1/(2πx²), constants and k² contribute nothing away from x = 0, and the
//! remainder is integrated on oscillation-resolving panels up to
//! k_split = max(10Λe^s, 10m, 20/x).  Beyond the split the QFT remainders
//! are inverse odd powers of k up to exponentially small corrections and
//! are integrated semi-analytically through Si/Ci recursions; the cMERA
//! remainders have no such expansion and use the accelerated zero-interval
//! tail.

use super::{decompose, Channel, Source};
use crate::error::{Error, Result};
use crate::quad::oscillatory::{cosine_tail, fourier_cos_head};
use crate::quad::sici::sin_cos_integrals;
use crate::quad::QuadResult;
use std::f64::consts::PI;

/// Quadrature configuration for real-space transforms.
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    /// Absolute tolerance per transform.
    pub tol: f64,
    /// Optional override of the head/tail split momentum.
    pub split_override: Option<f64>,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            tol: 1e-11,
            split_override: None,
        }
    }
}

impl QuadConfig {
    pub fn with_tol(tol: f64) -> Self {
        QuadConfig {
            tol,
            split_override: None,
        }
    }
}

/// The head/tail split k_split = max(10Λe^s, 10m, 20/x).
pub fn split_momentum(source: &Source, x: f64) -> f64 {
    let physics = match *source {
        Source::Cmera { lambda, s } => 10.0 * lambda * s.exp(),
        Source::Qft { m } => 10.0 * m,
    };
    physics.max(20.0 / x)
}

fn envelope_scale(source: &Source) -> f64 {
    match *source {
        Source::Cmera { lambda, .. } => lambda,
        Source::Qft { m } => m,
    }
}

/// (1/2π) ∫ dk e^{ikx} C(k), the distributional transform of the momentum
/// channel, for x > 0.  Returns the value with an error estimate.
pub fn line_correlator_real(
    source: &Source,
    channel: Channel,
    x: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    source.validate()?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Coincident(format!(
            "line correlator needs x > 0 (got {x}); see coincident_point_report for x = 0"
        )));
    }
    let dec = decompose(source, channel)?;
    let split = cfg
        .split_override
        .unwrap_or_else(|| split_momentum(source, x));
    let head = fourier_cos_head(&*dec.rem, x, split, envelope_scale(source), cfg.tol)?;
    let tail = match *source {
        Source::Qft { m } => qft_tail(channel, m, split, x)?,
        Source::Cmera { .. } => cosine_tail(&*dec.rem, x, split, cfg.tol)?,
    };
    let singular = dec.lin * (-1.0 / (2.0 * PI * x * x));
    Ok(QuadResult::new(
        singular + (head.value + tail.value) / PI,
        (head.err + tail.err) / PI,
    ))
}

/// Semi-analytic tail for the QFT remainders: with u = m²/k²,
///
///   φφ:   (1/2)(1+u)^{-1/2}/k   = Σ_j (b_j/2) m^{2j} k^{-(2j+1)},
///   ππ:   (k/2)((1+u)^{1/2}-1)  = Σ_{j≥1} (c_j/2) m^{2j} k^{1-2j},
///   ∂φ∂φ: (k/2)((1+u)^{-1/2}-1) = Σ_{j≥1} (b_j/2) m^{2j} k^{1-2j},
///
/// with b_j = binom(-1/2, j), c_j = binom(1/2, j).  Each power integrates
/// to ∫_K^∞ cos(kx)/kⁿ dk = x^{n-1}·CA_n(Kx) through the Si/Ci recursion
/// CA_{n+1}(z) = (cos z/zⁿ - SA_n(z))/n, SA_{n+1}(z) = (CA_n(z) + sin z/zⁿ)/n.
fn qft_tail(channel: Channel, m: f64, split: f64, x: f64) -> Result<QuadResult> {
    let z = split * x;
    let (si, ci) = sin_cos_integrals(z)?;
    // CA_n(z), SA_n(z) for n = 1..N_MAX.
    const N_MAX: usize = 26;
    let mut ca = [0.0f64; N_MAX + 1];
    let mut sa = [0.0f64; N_MAX + 1];
    ca[1] = -ci;
    sa[1] = PI / 2.0 - si;
    let (sin_z, cos_z) = z.sin_cos();
    let mut zpow = z; // z^n
    for n in 1..N_MAX {
        let nf = n as f64;
        ca[n + 1] = (cos_z / zpow - sa[n]) / nf;
        sa[n + 1] = (ca[n] + sin_z / zpow) / nf;
        zpow *= z;
    }
    // ∫_split^∞ cos(kx) k^{-n} dk = x^{n-1} CA_n(split·x).
    let power_integral = |n: usize| x.powi(n as i32 - 1) * ca[n];

    let u = (m / split) * (m / split);
    let mut value = 0.0;
    let mut last = 0.0f64;
    let mut absacc = 0.0f64;
    match channel {
        Channel::PhiPhi => {
            // Σ_{j≥0} (b_j/2) m^{2j} I_{2j+1}
            let mut b = 1.0f64; // binom(-1/2, j)
            let mut m2j = 1.0f64;
            for j in 0..12 {
                let jf = j as f64;
                if j > 0 {
                    b *= (-0.5 - (jf - 1.0)) / jf;
                    m2j *= m * m;
                }
                last = 0.5 * b * m2j * power_integral(2 * j + 1);
                value += last;
                absacc += last.abs();
                if u.powi(j as i32 + 1) < 1e-18 {
                    break;
                }
            }
        }
        Channel::PiPi | Channel::DphiDphi => {
            let half = if channel == Channel::PiPi { 0.5 } else { -0.5 };
            // binom(±1/2, j) recurrences share the same shape.
            let mut coeff = 1.0f64;
            let mut m2j = 1.0f64;
            for j in 1..=12 {
                let jf = j as f64;
                coeff *= (half - (jf - 1.0)) / jf;
                m2j *= m * m;
                last = 0.5 * coeff * m2j * power_integral(2 * j - 1);
                value += last;
                absacc += last.abs();
                if u.powi(j as i32) < 1e-18 {
                    break;
                }
            }
        }
    }
    // Error: first neglected order plus rounding of the recursion.
    let err = last.abs() * u + 1e-15 * absacc.max(1.0 / (split * x));
    Ok(QuadResult::new(value, err))
}
