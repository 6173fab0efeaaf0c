//! Quadrature primitives: Gauss–Legendre panels with Richardson refinement,
//! sine/cosine integrals, and accelerated oscillatory transforms.
//!
//! The composite rule below is the workhorse for every finite-interval
//! integral in the crate (Fourier coefficients of wrapped profiles, the
//! head of semi-infinite cosine transforms, verification quadratures).
//! Oscillatory semi-infinite integrals and slowly convergent mode sums live
//! in [`oscillatory`].

pub mod oscillatory;
pub mod sici;

use crate::error::{Error, Result};
use std::sync::OnceLock;

/// A quadrature value together with an error estimate.
///
/// The estimate is the absolute difference between the last two refinement
/// levels, i.e. a Richardson-style bound, not a rigorous enclosure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub err: f64,
}

impl QuadResult {
    pub fn new(value: f64, err: f64) -> Self {
        QuadResult { value, err }
    }
}

const GL_ORDER: usize = 20;

fn gl_nodes() -> &'static (Vec<f64>, Vec<f64>) {
    static NODES: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    NODES.get_or_init(|| gauss_legendre(GL_ORDER))
}

/// Legendre polynomial P_n and its derivative at `x`, by the three-term
/// recurrence.
fn legendre_pd(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_pd(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_pd(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// 20-point Gauss–Legendre quadrature of `f` over a single panel [a, b].
pub fn gauss_panel(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (nodes, weights) = gl_nodes();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights.iter()) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Composite Gauss–Legendre quadrature with `panels` equal panels on [a, b].
pub fn integrate_panels(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let panels = panels.max(1);
    let width = (b - a) / panels as f64;
    let mut acc = 0.0;
    for i in 0..panels {
        let lo = a + i as f64 * width;
        acc += gauss_panel(f, lo, lo + width);
    }
    acc
}

/// Composite quadrature on [a, b], doubling the panel count until two
/// consecutive refinements agree to `tol` (absolute).  Returns the finer
/// value and the last refinement difference as the error estimate.
pub fn integrate_refine(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    init_panels: usize,
    max_doublings: usize,
) -> Result<QuadResult> {
    if !(b >= a) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!("bad interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadResult::new(0.0, 0.0));
    }
    let mut panels = init_panels.max(1);
    let mut prev = integrate_panels(f, a, b, panels);
    for _ in 0..max_doublings {
        panels *= 2;
        let cur = integrate_panels(f, a, b, panels);
        let diff = (cur - prev).abs();
        if diff <= tol {
            return Ok(QuadResult::new(cur, diff));
        }
        prev = cur;
    }
    Err(Error::non_convergence(format!(
        "panel refinement stalled above tol={tol:.3e} after {max_doublings} doublings on [{a}, {b}]"
    )))
}

/// Kahan-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    c: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        // n-point rule is exact through degree 2n-1.
        let f = |x: f64| x.powi(7) - 3.0 * x.powi(4) + x;
        let exact = -3.0 * 2.0 / 5.0; // odd powers vanish on [-1, 1]
        let got = gauss_panel(&f, -1.0, 1.0);
        assert!((got - exact).abs() < 1e-14, "got {got}, want {exact}");
    }

    #[test]
    fn refine_matches_known_integral() {
        let f = |x: f64| (-x).exp();
        let r = integrate_refine(&f, 0.0, 5.0, 1e-13, 4, 20).unwrap();
        let exact = 1.0 - (-5.0f64).exp();
        assert!((r.value - exact).abs() < 1e-12);
        assert!(r.err < 1e-12);
    }

    #[test]
    fn refine_reports_interval_errors() {
        let f = |x: f64| x;
        assert!(integrate_refine(&f, 1.0, 0.0, 1e-10, 2, 4).is_err());
    }

    #[test]
    fn kahan_sums_small_terms() {
        let mut s = KahanSum::new();
        for _ in 0..1_000_000 {
            s.add(0.1);
        }
        assert!((s.value() - 100_000.0).abs() < 1e-9);
    }
}
