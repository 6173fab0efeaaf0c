//! Modified Bessel functions of the second kind K₀, K₁, K₂ and hyperbolic
//! helpers for wrapped exponential profiles.
//!
//! Everything here is self-contained: an ascending series below the
//! switchover argument and the large-argument asymptotic expansion above
//! it, with compensated summation in the cancellation-prone series branch.
//! The in-repo oracle for these functions is an independent quadrature of
//! the cosine integral representations, see the tests and
//! [`crate::correlators`].

use crate::error::{Error, Result};
use crate::quad::KahanSum;

/// Euler–Mascheroni constant.
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Accuracy policy for the Bessel evaluator.
#[derive(Debug, Clone, Copy)]
pub struct BesselAccuracy {
    /// Absolute tolerance of a single evaluation.
    pub abs_tol: f64,
    /// Argument at which evaluation switches from the ascending series to
    /// the asymptotic expansion.
    ///
    /// The asymptotic series for K_ν has an optimal-truncation floor of
    /// roughly e^{-2x} relative error, so the switchover must sit well above
    /// the naive "a few" — at 10 both branches deliver ~1e-12 absolute.
    pub series_asymptotic_switchover: f64,
}

impl Default for BesselAccuracy {
    fn default() -> Self {
        BesselAccuracy {
            abs_tol: 1e-12,
            series_asymptotic_switchover: 10.0,
        }
    }
}

impl BesselAccuracy {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol <= 1e-6) {
            return Err(Error::domain(format!(
                "abs_tol must lie in (0, 1e-6], got {}",
                self.abs_tol
            )));
        }
        if !(self.series_asymptotic_switchover > 0.0) {
            return Err(Error::domain("switchover must be positive"));
        }
        Ok(())
    }
}

const MAX_TERMS: usize = 400;

/// K_order(x) for order 0, 1 or 2 and x > 0.
///
/// K₂ is produced from K₀ and K₁ through the recurrence
/// K₂(x) = K₀(x) + 2 K₁(x)/x.
pub fn bessel_k(order: u8, x: f64, acc: &BesselAccuracy) -> Result<f64> {
    acc.validate()?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("bessel_k needs x > 0, got {x}")));
    }
    match order {
        0 => bessel_k01(x, acc).map(|(k0, _)| k0),
        1 => bessel_k01(x, acc).map(|(_, k1)| k1),
        2 => {
            let (k0, k1) = bessel_k01(x, acc)?;
            Ok(k0 + 2.0 * k1 / x)
        }
        _ => Err(Error::domain(format!(
            "order must be 0, 1 or 2, got {order}"
        ))),
    }
}

/// Both K₀(x) and K₁(x); they share all intermediate work.
pub fn bessel_k01(x: f64, acc: &BesselAccuracy) -> Result<(f64, f64)> {
    acc.validate()?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("bessel_k01 needs x > 0, got {x}")));
    }
    if x < acc.series_asymptotic_switchover {
        ascending(x)
    } else {
        Ok((asymptotic(0, x), asymptotic(1, x)))
    }
}

/// Ascending series for K₀ and K₁ (DLMF 10.31).  The logarithmic and the
/// power-series pieces cancel to ~e^x relative size near the switchover, so
/// the partial sums are compensated.
fn ascending(x: f64) -> Result<(f64, f64)> {
    let half = 0.5 * x;
    let q = half * half; // x²/4
    let lh = half.ln();

    // I₀ pieces and Σ H_j (x²/4)^j / (j!)²  for K₀.
    let mut i0 = KahanSum::new();
    let mut s0 = KahanSum::new();
    // I₁ pieces and Σ (ψ(j+1)+ψ(j+2)) (x²/4)^j / (j!(j+1)!) for K₁.
    let mut i1 = KahanSum::new();
    let mut s1 = KahanSum::new();

    let mut t0 = 1.0; // (x²/4)^j/(j!)²
    let mut t1 = 1.0; // (x²/4)^j/(j!(j+1)!)
    let mut harmonic = 0.0; // H_j
    let mut psi_a = -EULER_GAMMA; // ψ(j+1)
    let mut psi_b = 1.0 - EULER_GAMMA; // ψ(j+2)

    i0.add(1.0);
    i1.add(1.0);
    s1.add(psi_a + psi_b);

    let mut converged = false;
    for j in 1..MAX_TERMS {
        let jf = j as f64;
        t0 *= q / (jf * jf);
        t1 *= q / (jf * (jf + 1.0));
        harmonic += 1.0 / jf;
        psi_a += 1.0 / jf;
        psi_b += 1.0 / (jf + 1.0);

        i0.add(t0);
        s0.add(t0 * harmonic);
        i1.add(t1);
        s1.add(t1 * (psi_a + psi_b));

        if t0 < 1e-18 * i0.value() && t1 < 1e-18 * i1.value() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::non_convergence(
            "Bessel ascending series hit the iteration cap; this is a bug, not a user error",
        ));
    }

    let i0v = i0.value();
    let i1v = half * i1.value();
    let k0 = -(lh + EULER_GAMMA) * i0v + s0.value();
    let k1 = 1.0 / x + lh * i1v - 0.25 * x * s1.value();
    Ok((k0, k1))
}

/// Poincaré asymptotic expansion, truncated at its smallest term.
fn asymptotic(order: u8, x: f64) -> f64 {
    let nu2 = 4.0 * (order as f64) * (order as f64);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut prev = f64::INFINITY;
    for j in 0..MAX_TERMS {
        let jf = j as f64;
        let num = nu2 - (2.0 * jf + 1.0) * (2.0 * jf + 1.0);
        term *= num / (8.0 * x * (jf + 1.0));
        if term.abs() >= prev {
            break; // divergence onset: stop at the smallest term
        }
        sum += term;
        prev = term.abs();
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp() * sum
}

/// Σ_{n∈ℤ} e^{-|a+nb|} = cosh(b/2 - a)/sinh(b/2) for 0 ≤ a ≤ b.
///
/// Evaluated as (e^{-a} + e^{-(b-a)})/(1 - e^{-b}): every exponent is
/// non-positive, so the form cannot overflow for large b.
pub fn wrapped_exponential_sum(a: f64, b: f64) -> Result<f64> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::domain(format!(
            "wrapped_exponential_sum needs b > 0, got {b}"
        )));
    }
    if !(0.0..=b).contains(&a) {
        return Err(Error::domain(format!(
            "wrapped_exponential_sum needs a in [0, b], got a={a}, b={b}"
        )));
    }
    Ok(((-a).exp() + (a - b).exp()) / (-(-b).exp_m1()))
}
