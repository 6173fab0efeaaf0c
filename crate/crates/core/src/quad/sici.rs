//! Sine and cosine integrals Si(x), Ci(x) for x > 0.
//!
//! Power series below the crossover, Lentz continued fraction for the
//! exponential integral E₁(ix) above it.  Used by the semi-analytic tails
//! of slowly decaying Fourier transforms, where the truncated integrals
//! ∫_K^∞ cos(kx)/kⁿ dk reduce to Si/Ci through integration by parts.

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const CROSSOVER: f64 = 4.0;
const MAX_ITER: usize = 400;

/// Returns (Si(x), Ci(x)) for x > 0.
pub fn sin_cos_integrals(x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "sin_cos_integrals needs x > 0, got {x}"
        )));
    }
    if x <= CROSSOVER {
        Ok(series(x))
    } else {
        continued_fraction(x)
    }
}

/// Si and Ci by their ascending series; accurate for x up to ~10 but used
/// below the crossover only.
fn series(x: f64) -> (f64, f64) {
    let x2 = x * x;
    // Si(x) = Σ_{k≥0} (-1)^k x^{2k+1} / ((2k+1)(2k+1)!)
    let mut si = 0.0;
    let mut t = x; // x^{2k+1} / (2k+1)!
    for k in 0..MAX_ITER {
        let kf = k as f64;
        if k > 0 {
            t *= -x2 / ((2.0 * kf) * (2.0 * kf + 1.0));
        }
        let add = t / (2.0 * kf + 1.0);
        si += add;
        if add.abs() < 1e-18 * si.abs().max(1.0) {
            break;
        }
    }
    // Ci(x) = γ + ln x + Σ_{k≥1} (-1)^k x^{2k} / (2k (2k)!)
    let mut ci = EULER_GAMMA + x.ln();
    let mut u = 1.0;
    for k in 1..MAX_ITER {
        let kf = k as f64;
        u *= -x2 / ((2.0 * kf - 1.0) * (2.0 * kf));
        let add = u / (2.0 * kf);
        ci += add;
        if add.abs() < 1e-18 * ci.abs().max(1.0) {
            break;
        }
    }
    (si, ci)
}

/// Modified Lentz evaluation of the continued fraction for E₁(ix), giving
/// Ci(x) = -Re h and Si(x) = π/2 + Im h with h = CF(x)·(cos x - i sin x).
fn continued_fraction(x: f64) -> Result<(f64, f64)> {
    const TINY: f64 = 1e-300;
    // Complex arithmetic on (re, im) pairs.
    let cadd = |a: (f64, f64), b: (f64, f64)| (a.0 + b.0, a.1 + b.1);
    let cmul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let cinv = |a: (f64, f64)| {
        let d = a.0 * a.0 + a.1 * a.1;
        (a.0 / d, -a.1 / d)
    };

    let mut b = (1.0, x);
    let mut c = (1.0 / TINY, 0.0);
    let mut d = cinv(b);
    let mut h = d;
    let mut converged = false;
    for i in 2..MAX_ITER {
        let a = -((i - 1) as f64) * ((i - 1) as f64);
        b = cadd(b, (2.0, 0.0));
        d = cinv(cadd(cmul((a, 0.0), d), b));
        c = cadd(b, cmul((a, 0.0), cinv(c)));
        let del = cmul(c, d);
        h = cmul(h, del);
        if (del.0 - 1.0).abs() + del.1.abs() < 1e-16 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::non_convergence(format!(
            "Si/Ci continued fraction did not settle at x = {x}"
        )));
    }
    let phase = (x.cos(), -x.sin());
    let cs = cmul(h, phase);
    Ok((std::f64::consts::FRAC_PI_2 + cs.1, -cs.0))
}
