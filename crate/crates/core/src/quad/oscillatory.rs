//! Oscillatory semi-infinite integrals and slowly convergent mode sums.
//!
//! Both problems share one structure: a smooth decaying envelope against an
//! oscillating weight.  We integrate (or sum) between consecutive sign
//! changes of the weight, giving an alternating sequence of partial sums,
//! and accelerate that sequence with Wynn's epsilon algorithm.  This is the
//! same strategy classic QAWF-style Fourier integrators use.

use super::{gauss_panel, QuadResult};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Wynn epsilon acceleration of a sequence of partial sums.  Returns the
/// best even-column estimate and the magnitude of its last correction.
pub fn wynn_epsilon(partial: &[f64]) -> (f64, f64) {
    let n = partial.len();
    assert!(n >= 2);
    let scale = partial
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1e-300);

    // Already converged sequences break the epsilon recursion (vanishing
    // denominators), and need no acceleration in the first place.  One
    // small difference can be an accidental cancellation, so look at the
    // last three.
    let tail_diff = (1..=3.min(n - 1))
        .map(|i| (partial[n - i] - partial[n - i - 1]).abs())
        .fold(0.0f64, f64::max);
    if tail_diff <= 1e-15 * scale {
        return (partial[n - 1], tail_diff);
    }

    let mut cur = partial.to_vec();
    let mut prevcol = vec![0.0; n + 1]; // epsilon_{-1} column
    let mut best = *partial.last().unwrap();
    let mut prev_best = partial[n - 2];
    for k in 1..n {
        let mut next = vec![0.0; n - k];
        for j in 0..(n - k) {
            let denom = cur[j + 1] - cur[j];
            let inv = if denom.abs() < 1e-300 * scale {
                // Locally converged entry; a huge but finite reciprocal
                // keeps the table usable, the sanity filter below discards
                // any poisoned estimate.
                1e300_f64.copysign(if denom == 0.0 { 1.0 } else { denom })
            } else {
                1.0 / denom
            };
            next[j] = prevcol[j + 1] + inv;
        }
        prevcol = std::mem::take(&mut cur);
        cur = next;
        if k % 2 == 0 {
            let v = *cur.last().unwrap();
            // Even columns estimate the limit; odd columns are auxiliary.
            // Reject entries that cannot be a limit of the partial sums.
            if v.is_finite() && v.abs() <= 1e3 * scale {
                prev_best = best;
                best = v;
            }
        }
        if cur.len() < 2 {
            break;
        }
    }
    (best, (best - prev_best).abs())
}

/// ∫_0^∞ f(k) cos(k x) dk for smooth `f` that decays (possibly slowly, and
/// possibly only like 1/k) beyond `split`.
///
/// The head [0, split] is integrated on panels no wider than a quarter
/// period and no wider than `envelope_scale`/2, doubling until the result
/// is stable to `tol`.  The tail is summed between consecutive zeros of
/// cos(k x) and accelerated with the epsilon algorithm.
pub fn fourier_cos_semiinf(
    f: &dyn Fn(f64) -> f64,
    x: f64,
    split: f64,
    envelope_scale: f64,
    tol: f64,
) -> Result<QuadResult> {
    if !(x > 0.0) {
        return Err(Error::domain(format!(
            "fourier_cos_semiinf needs x > 0, got {x}"
        )));
    }
    if !(split > 0.0) || !(envelope_scale > 0.0) {
        return Err(Error::domain("split and envelope_scale must be positive"));
    }

    // Head: panel width limited by both the oscillation and the envelope.
    let head = fourier_cos_head(f, x, split, envelope_scale, tol)?;

    // Tail: segments between consecutive zeros of cos(kx).
    let tail = cosine_tail(f, x, split, tol)?;

    Ok(QuadResult::new(
        head.value + tail.value,
        head.err + tail.err,
    ))
}

/// ∫_0^{split} f(k) cos(k x) dk on oscillation- and envelope-resolving
/// panels, refined by doubling.
pub fn fourier_cos_head(
    f: &dyn Fn(f64) -> f64,
    x: f64,
    split: f64,
    envelope_scale: f64,
    tol: f64,
) -> Result<QuadResult> {
    if !(x > 0.0) || !(split > 0.0) || !(envelope_scale > 0.0) {
        return Err(Error::domain(
            "fourier_cos_head needs positive x, split and scale",
        ));
    }
    let g = |k: f64| f(k) * (k * x).cos();
    let width = (PI / (2.0 * x)).min(0.5 * envelope_scale);
    let init_panels = ((split / width).ceil() as usize).clamp(4, 2_000_000);
    refine_head(&g, split, tol, init_panels)
}

fn refine_head(
    g: &dyn Fn(f64) -> f64,
    split: f64,
    tol: f64,
    init_panels: usize,
) -> Result<QuadResult> {
    let mut panels = init_panels;
    let mut prev = super::integrate_panels(g, 0.0, split, panels);
    for _ in 0..6 {
        panels *= 2;
        let cur = super::integrate_panels(g, 0.0, split, panels);
        let diff = (cur - prev).abs();
        if diff <= tol {
            return Ok(QuadResult::new(cur, diff));
        }
        prev = cur;
    }
    Err(Error::non_convergence(format!(
        "oscillatory head stalled above tol={tol:.3e} on [0, {split}]"
    )))
}

/// ∫_split^∞ f(k) cos(k x) dk by zero-interval segments plus epsilon
/// acceleration.
pub fn cosine_tail(f: &dyn Fn(f64) -> f64, x: f64, split: f64, tol: f64) -> Result<QuadResult> {
    let g = |k: f64| f(k) * (k * x).cos();
    // First zero of cos(kx) at or beyond split: kx = π/2 + jπ.
    let j0 = ((split * x - PI / 2.0) / PI).ceil().max(0.0);
    let mut z = (PI / 2.0 + j0 * PI) / x;
    if z < split {
        z += PI / x;
    }

    let lead = gauss_panel(&g, split, z);
    let step = PI / x;

    const MAX_SEGMENTS: usize = 240;
    let mut partial = Vec::with_capacity(MAX_SEGMENTS);
    let mut acc = 0.0;
    let mut prev_est = f64::NAN;
    let mut last_err = f64::INFINITY;
    for i in 0..MAX_SEGMENTS {
        let a = z + i as f64 * step;
        acc += gauss_panel(&g, a, a + step);
        partial.push(acc);
        if partial.len() >= 8 && partial.len() % 2 == 0 {
            let (est, err) = wynn_epsilon(&partial);
            // Accept only two consecutive consistent estimates; a single
            // small correction can be an accidental crossing.
            if err <= 0.1 * tol && prev_est.is_finite() && (est - prev_est).abs() <= 0.1 * tol {
                return Ok(QuadResult::new(lead + est, err + (est - prev_est).abs()));
            }
            prev_est = est;
            last_err = err;
        }
    }
    Err(Error::non_convergence(format!(
        "oscillatory tail acceleration stalled (err {last_err:.3e} > tol {tol:.3e}) beyond k = {split}"
    )))
}

/// Σ_{n ≥ n0} a(n) cos(n θ) for a smooth decaying envelope `a`.
///
/// Exact summation by parts: with z = e^{iθ} and Δa_n = a_n - a_{n+1},
///
///   Σ_{n≥n0} a_n zⁿ = [ -a_{n0} z^{n0} + z · Σ_{n≥n0} Δa_n zⁿ ] / (z - 1),
///
/// applied `DEPTH` times, which upgrades a 1/n^p envelope to 1/n^{p+DEPTH};
/// the innermost difference series is then summed directly until its tail
/// bound falls below the tolerance.  No acceleration heuristics: the only
/// approximation is the truncation of a fast, absolutely convergent series.
///
/// `θ` must lie strictly inside (0, 2π).  Fails with a non-convergence
/// error when the truncation bound will not fall below `tol` within
/// `max_terms` — which is what happens for divergent mode sums, so callers
/// surface that situation instead of a number.
pub fn mode_sum_tail(
    a: &dyn Fn(i64) -> f64,
    theta: f64,
    n0: i64,
    tol: f64,
    max_terms: i64,
) -> Result<QuadResult> {
    if !(theta > 0.0 && theta < 2.0 * PI) {
        return Err(Error::domain(format!(
            "mode_sum_tail needs θ in (0, 2π), got {theta}"
        )));
    }
    const DEPTH: usize = 4;
    let z = (theta.cos(), theta.sin());
    let zm1 = (z.0 - 1.0, z.1);
    let zm1_abs = (zm1.0 * zm1.0 + zm1.1 * zm1.1).sqrt(); // = 2 sin(θ/2)
                                                          // Errors in the inner series are divided by |z-1| per unwinding level.
    let amp_inv = zm1_abs.powi(DEPTH as i32);

    let diff = |n: i64, order: usize, window: &dyn Fn(i64) -> f64| -> f64 {
        // Forward difference Δ^j a(n) with Δa_n = a_n - a_{n+1}.
        let mut acc = 0.0;
        let mut binom = 1.0f64;
        for i in 0..=order {
            acc += binom * window(n + i as i64);
            binom *= -((order - i) as f64) / (i as f64 + 1.0);
        }
        acc
    };

    // Direct summation of the DEPTH-th difference series.
    let mut re = 0.0;
    let mut im = 0.0;
    let mut abs_budget = 0.0;
    let mut n = n0;
    let target = 0.05 * tol * amp_inv;
    let mut settled = 0;
    let mut converged = false;
    while n < n0 + max_terms {
        let d = diff(n, DEPTH, a);
        let ph = (n as f64) * theta;
        re += d * ph.cos();
        im += d * ph.sin();
        abs_budget += a(n).abs();
        // Tail bound: for envelopes decaying at least like 1/n², the
        // remaining sum is below |Δ^d a(n)|·n.
        if d.abs() * (n.max(1) as f64) <= target {
            settled += 1;
            if settled >= 8 {
                converged = true;
                n += 1;
                break;
            }
        } else {
            settled = 0;
        }
        n += 1;
    }
    if !converged {
        return Err(Error::non_convergence(format!(
            "mode-sum truncation bound stalled above tol={tol:.3e} after {} terms from n0={n0}",
            n - n0
        )));
    }
    let tail_est = diff(n, DEPTH, a).abs() * n as f64;
    let noise_est = 8.0 * f64::EPSILON * abs_budget;

    // Unwind the summation-by-parts levels from the deepest difference
    // back to the original series.
    let mut s = (re, im);
    for level in (0..DEPTH).rev() {
        let head = diff(n0, level, a);
        let ph = (n0 as f64) * theta;
        let head_term = (-head * ph.cos(), -head * ph.sin());
        let zs = (z.0 * s.0 - z.1 * s.1, z.0 * s.1 + z.1 * s.0);
        let num = (head_term.0 + zs.0, head_term.1 + zs.1);
        let den = zm1.0 * zm1.0 + zm1.1 * zm1.1;
        s = (
            (num.0 * zm1.0 + num.1 * zm1.1) / den,
            (num.1 * zm1.0 - num.0 * zm1.1) / den,
        );
    }
    Ok(QuadResult::new(s.0, (tail_est + noise_est) / amp_inv))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_accelerates_alternating_series() {
        // ln 2 = Σ (-1)^{n+1}/n, painfully slow directly.
        let mut partial = Vec::new();
        let mut acc = 0.0;
        for n in 1..=24 {
            acc += if n % 2 == 1 { 1.0 } else { -1.0 } / n as f64;
            partial.push(acc);
        }
        let (est, _) = wynn_epsilon(&partial);
        assert!((est - std::f64::consts::LN_2).abs() < 1e-12, "got {est}");
    }

    #[test]
    fn cosine_transform_of_exponential() {
        // ∫_0^∞ e^{-k} cos(kx) dk = 1/(1+x²)
        for &x in &[0.3, 1.0, 2.7] {
            let r = fourier_cos_semiinf(&|k: f64| (-k).exp(), x, 30.0, 1.0, 1e-12).unwrap();
            let exact = 1.0 / (1.0 + x * x);
            assert!(
                (r.value - exact).abs() < 1e-11,
                "x={x}: got {} want {exact}",
                r.value
            );
        }
    }

    #[test]
    fn cosine_transform_of_lorentzian() {
        // ∫_0^∞ cos(kx)/(1+k²) dk = (π/2) e^{-x}; the integrand decays only
        // like 1/k², stressing the accelerated tail.
        for &x in &[0.5, 1.0, 3.0] {
            let r =
                fourier_cos_semiinf(&|k: f64| 1.0 / (1.0 + k * k), x, 25.0, 1.0, 1e-12).unwrap();
            let exact = 0.5 * PI * (-x).exp();
            assert!(
                (r.value - exact).abs() < 1e-10,
                "x={x}: got {} want {exact}",
                r.value
            );
        }
    }

    #[test]
    fn slow_tail_one_over_k() {
        // ∫_K^∞ cos(kx)/k dk = -Ci(Kx): conditional convergence, the hardest
        // tail class we rely on.
        let x = 1.3;
        let kcut = 10.0;
        let r = cosine_tail(&|k: f64| 1.0 / k, x, kcut, 1e-12).unwrap();
        let (_, ci) = crate::quad::sici::sin_cos_integrals(kcut * x).unwrap();
        assert!(
            (r.value - (-ci)).abs() < 1e-12,
            "got {} want {}",
            r.value,
            -ci
        );
    }

    #[test]
    fn mode_sum_against_closed_form() {
        // Σ_{n≥1} cos(nθ)/n² = π²/6 - πθ/2 + θ²/4 on (0, 2π).
        for &theta in &[0.4, 1.1, PI, 5.0] {
            let r = mode_sum_tail(
                &|n: i64| 1.0 / (n as f64 * n as f64),
                theta,
                1,
                1e-12,
                2_000_000,
            )
            .unwrap();
            let exact = PI * PI / 6.0 - PI * theta / 2.0 + theta * theta / 4.0;
            assert!(
                (r.value - exact).abs() < 1e-10,
                "θ={theta}: got {} want {exact}",
                r.value
            );
        }
    }

    #[test]
    fn mode_sum_slow_decay() {
        // Σ_{n≥1} cos(nθ)/n = -ln(2 sin(θ/2)) on (0, 2π).
        for &theta in &[0.7, 2.0, 4.5] {
            let r = mode_sum_tail(&|n: i64| 1.0 / n as f64, theta, 1, 1e-12, 2_000_000).unwrap();
            let exact = -(2.0 * (theta / 2.0).sin()).ln();
            assert!(
                (r.value - exact).abs() < 1e-10,
                "θ={theta}: got {} want {exact}",
                r.value
            );
        }
    }

    #[test]
    fn coincident_angle_is_rejected() {
        // θ = 0 is the mode-sum face of a coincident-point request; the
        // series has no oscillation left to damp it.
        assert!(mode_sum_tail(&|n: i64| 1.0 / n as f64, 0.0, 1, 1e-10, 1000).is_err());
        assert!(mode_sum_tail(&|n: i64| 1.0 / n as f64, 2.0 * PI, 1, 1e-10, 1000).is_err());
    }
}
