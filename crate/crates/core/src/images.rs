//! Generic method-of-images engine.
//!
//! Wraps any function with a certified exponential decay onto a circle (or
//! a 2-torus, axis by axis) and verifies the sampling theorem
//! `f_c(n) = f(k_n)` relating the discrete Fourier coefficients of the
//! wrapped function to the continuous transform of the original.  The
//! verifier is a first-class, report-producing operation — the CLI emits
//! its output as a dataset.

use crate::error::{Error, Result};
use crate::geometry::{momentum_of_mode, Geometry};
use crate::quad::{integrate_refine, QuadResult};
use serde::Serialize;

/// Exponential decay certificate: |f(x)| ≤ A e^{-α|x|} for |x| ≥ x₀.
#[derive(Debug, Clone, Copy)]
pub struct DecayCertificate {
    /// Decay rate α > 0.
    pub rate: f64,
    /// Prefactor A.
    pub prefactor: f64,
    /// Distance beyond which the bound holds.
    pub beyond: f64,
}

impl DecayCertificate {
    pub fn validate(&self) -> Result<()> {
        if !(self.rate > 0.0 && self.prefactor > 0.0 && self.beyond >= 0.0) {
            return Err(Error::Certificate(format!(
                "decay certificate needs rate > 0, prefactor > 0, beyond >= 0; got {self:?}"
            )));
        }
        Ok(())
    }
}

/// Truncation policy for image sums Σ_n f(x + n·l_c).
#[derive(Debug, Clone, Copy)]
pub struct ImageSumPolicy {
    /// Absolute tolerance on the truncated sum.
    pub tolerance: f64,
    /// Hard cap on the number of images per side.
    pub max_images: usize,
    pub decay: DecayCertificate,
}

impl ImageSumPolicy {
    pub fn new(tolerance: f64, decay: DecayCertificate) -> Self {
        ImageSumPolicy {
            tolerance,
            max_images: 10_000,
            decay,
        }
    }

    /// Smallest truncation order N whose geometric tail bound
    /// A e^{-α(N-1)l_c} / (1 - e^{-α l_c}) falls below the tolerance.
    pub fn required_images(&self, lc: f64) -> Result<usize> {
        self.decay.validate()?;
        if !(self.tolerance > 0.0) {
            return Err(Error::Certificate("tolerance must be positive".into()));
        }
        if !(lc > 0.0) {
            return Err(Error::domain(format!(
                "circumference must be positive, got {lc}"
            )));
        }
        let a = self.decay.rate * lc;
        let denom = -(-a).exp_m1(); // 1 - e^{-α l_c}
        let mut n = (self.decay.beyond / lc).ceil() as usize + 1;
        loop {
            let tail = self.decay.prefactor * (-a * (n as f64 - 1.0)).exp() / denom;
            if tail <= self.tolerance {
                return Ok(n);
            }
            n += 1;
            if n > self.max_images {
                return Err(Error::Certificate(format!(
                    "needs more than max_images = {} images for tolerance {:.3e} at l_c = {}",
                    self.max_images, self.tolerance, lc
                )));
            }
        }
    }

    /// The geometric tail bound at truncation order `n`.
    pub fn tail_bound(&self, lc: f64, n: usize) -> f64 {
        let a = self.decay.rate * lc;
        self.decay.prefactor * (-a * (n as f64 - 1.0)).exp() / -(-a).exp_m1()
    }
}

type RealFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// A test function with certified decay and, when available, a known
/// continuous Fourier transform f(k) = ∫ e^{-ikx} f(x) dx.
pub struct TestFunction {
    pub name: String,
    real: RealFn,
    momentum: Option<RealFn>,
    pub certificate: DecayCertificate,
}

impl TestFunction {
    pub fn new(
        name: impl Into<String>,
        real: RealFn,
        momentum: Option<RealFn>,
        certificate: DecayCertificate,
    ) -> Result<Self> {
        certificate.validate()?;
        Ok(TestFunction {
            name: name.into(),
            real,
            momentum,
            certificate,
        })
    }

    /// f(x) = e^{-|x|}, with f(k) = 2/(1+k²).
    pub fn exponential() -> Self {
        TestFunction {
            name: "exponential".into(),
            real: Box::new(|x: f64| (-x.abs()).exp()),
            momentum: Some(Box::new(|k: f64| 2.0 / (1.0 + k * k))),
            certificate: DecayCertificate {
                rate: 1.0,
                prefactor: 1.0,
                beyond: 0.0,
            },
        }
    }

    /// f(x) = e^{-x²}, with f(k) = √π e^{-k²/4}.  The Gaussian beats any
    /// exponential beyond x = rate, which is what the certificate encodes.
    pub fn gaussian() -> Self {
        TestFunction {
            name: "gaussian".into(),
            real: Box::new(|x: f64| (-x * x).exp()),
            momentum: Some(Box::new(|k: f64| {
                std::f64::consts::PI.sqrt() * (-k * k / 4.0).exp()
            })),
            certificate: DecayCertificate {
                rate: 3.0,
                prefactor: 1.0,
                beyond: 3.0,
            },
        }
    }

    /// Smooth part of the rescaled magic profile,
    /// f(x) = (e^s Λ/4) e^{-e^s Λ |x|}, with f(k) = Λ²/(2(Λ² + (e^{-s}k)²)).
    pub fn magic_smooth(lambda: f64, s: f64) -> Result<Self> {
        if !(lambda > 0.0) || !(s >= 0.0) {
            return Err(Error::domain(format!(
                "need Λ > 0 and s >= 0, got Λ={lambda}, s={s}"
            )));
        }
        let alpha = s.exp() * lambda;
        Ok(TestFunction {
            name: format!("magic-smooth(Λ={lambda},s={s})"),
            real: Box::new(move |x: f64| 0.25 * alpha * (-alpha * x.abs()).exp()),
            momentum: Some(Box::new(move |k: f64| {
                let u = (-s).exp() * k;
                lambda * lambda / (2.0 * (lambda * lambda + u * u))
            })),
            certificate: DecayCertificate {
                rate: alpha,
                prefactor: 0.25 * alpha,
                beyond: 0.0,
            },
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.real)(x)
    }

    pub fn eval_momentum(&self, k: f64) -> Option<f64> {
        self.momentum.as_ref().map(|f| f(k))
    }
}

/// The wrapped, periodic function Σ_{|n| ≤ N} f(x + n l_c) on [0, l_c).
pub struct WrappedFunction<'a> {
    f: &'a TestFunction,
    pub lc: f64,
    pub n_images: usize,
    pub tail_bound: f64,
}

impl WrappedFunction<'_> {
    pub fn eval(&self, x: f64) -> f64 {
        let x = x.rem_euclid(self.lc);
        let mut acc = 0.0;
        let n = self.n_images as i64;
        for i in -n..=n {
            acc += self.f.eval(x + i as f64 * self.lc);
        }
        acc
    }
}

/// Wrap `f` onto a circle of circumference `lc` with certified truncation.
pub fn wrap<'a>(
    f: &'a TestFunction,
    lc: f64,
    policy: &ImageSumPolicy,
) -> Result<WrappedFunction<'a>> {
    f.certificate.validate()?;
    if !(lc > 0.0) || !lc.is_finite() {
        return Err(Error::domain(format!(
            "circumference must be positive, got {lc}"
        )));
    }
    let policy = ImageSumPolicy {
        decay: f.certificate,
        ..*policy
    };
    let n_images = policy.required_images(lc)?;
    Ok(WrappedFunction {
        f,
        lc,
        n_images,
        tail_bound: policy.tail_bound(lc, n_images),
    })
}

/// Doubly periodic wrap on a torus; a separable f(x₁)·f(x₂) factorizes into
/// the product of two 1-D wraps, which is how this is evaluated.
pub struct WrappedFunction2d<'a> {
    pub axis1: WrappedFunction<'a>,
    pub axis2: WrappedFunction<'a>,
}

impl WrappedFunction2d<'_> {
    pub fn eval(&self, x1: f64, x2: f64) -> f64 {
        self.axis1.eval(x1) * self.axis2.eval(x2)
    }
}

/// Wrap a separable product f₁(x₁)·f₂(x₂) onto the torus (l₁, l₂).
pub fn wrap_2d<'a>(
    f1: &'a TestFunction,
    f2: &'a TestFunction,
    l1: f64,
    l2: f64,
    policy: &ImageSumPolicy,
) -> Result<WrappedFunction2d<'a>> {
    Ok(WrappedFunction2d {
        axis1: wrap(f1, l1, policy)?,
        axis2: wrap(f2, l2, policy)?,
    })
}

/// One row of the sampling-theorem report.
#[derive(Debug, Clone, Serialize)]
pub struct SamplingRow {
    pub n: i64,
    /// Re ∫₀^{l_c} e^{-i k_n x} f_c(x) dx by quadrature of the wrapped sum.
    pub f_c_n: f64,
    /// The continuous transform sampled at k_n.
    pub f_kn: f64,
    /// |f_c(n) - f(k_n)|, including any imaginary residue of the quadrature.
    pub abs_dev: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SamplingReport {
    pub function: String,
    pub lc: f64,
    pub max_abs_dev: f64,
    pub rows: Vec<SamplingRow>,
}

/// Verify f_c(n) = f(k_n) for |n| ≤ n_max by quadrature of the wrapped
/// function against the known continuous transform.
pub fn verify_sampling_theorem(
    f: &TestFunction,
    lc: f64,
    n_max: u32,
    quad_tol: f64,
) -> Result<SamplingReport> {
    let geom = Geometry::circle(lc)?;
    let policy = ImageSumPolicy::new((quad_tol * 1e-2).max(1e-15), f.certificate);
    let wrapped = wrap(f, lc, &policy)?;
    let momentum = f
        .momentum
        .as_ref()
        .ok_or_else(|| Error::domain(format!("{} has no known Fourier transform", f.name)))?;

    let mut rows = Vec::new();
    let mut max_abs_dev: f64 = 0.0;
    for n in -(n_max as i64)..=(n_max as i64) {
        let kn = momentum_of_mode(&geom, n)?;
        let re = fourier_coefficient(&wrapped, kn, quad_tol, true)?;
        let im = fourier_coefficient(&wrapped, kn, quad_tol, false)?;
        let f_kn = momentum(kn);
        let dev = ((re.value - f_kn).powi(2) + im.value.powi(2)).sqrt();
        max_abs_dev = max_abs_dev.max(dev);
        rows.push(SamplingRow {
            n,
            f_c_n: re.value,
            f_kn,
            abs_dev: dev,
        });
    }
    Ok(SamplingReport {
        function: f.name.clone(),
        lc,
        max_abs_dev,
        rows,
    })
}

/// Re or -Im part of ∫₀^{l_c} e^{-i k x} f_c(x) dx.
fn fourier_coefficient(
    wrapped: &WrappedFunction<'_>,
    k: f64,
    tol: f64,
    cosine: bool,
) -> Result<QuadResult> {
    let lc = wrapped.lc;
    // Panels fine enough for the oscillation; the integrand's only
    // non-smooth point sits at the panel boundary x = 0 ≡ l_c.
    let oscillations = (k.abs() * lc / (2.0 * std::f64::consts::PI)).ceil() as usize;
    let init = (4 * (oscillations + 1)).clamp(8, 4096);
    let g = |x: f64| {
        let w = wrapped.eval(x);
        if cosine {
            w * (k * x).cos()
        } else {
            -w * (k * x).sin()
        }
    };
    integrate_refine(&g, 0.0, lc, tol, init, 12)
}

/// Resynthesize the wrapped function from sampled line-transform values:
/// f_c(x) = (1/l_c) Σ_n e^{i k_n x} f(k_n).  This is the converse direction
/// of the sampling theorem; the mode sum is accelerated, so slowly decaying
/// transforms (kinked f) are fine away from the kink.
pub fn resynthesize_from_samples(
    f: &TestFunction,
    lc: f64,
    x: f64,
    tol: f64,
) -> Result<QuadResult> {
    let momentum = f
        .momentum
        .as_ref()
        .ok_or_else(|| Error::domain(format!("{} has no known Fourier transform", f.name)))?;
    let theta = 2.0 * std::f64::consts::PI * x.rem_euclid(lc) / lc;
    if theta == 0.0 {
        return Err(Error::domain(
            "resynthesis evaluation point must avoid the kink at x = 0",
        ));
    }
    let a = |n: i64| momentum(2.0 * std::f64::consts::PI * n as f64 / lc);
    let tail = crate::quad::oscillatory::mode_sum_tail(&a, theta, 1, tol, 5_000_000)?;
    let value = (momentum(0.0) + 2.0 * tail.value) / lc;
    Ok(QuadResult::new(value, 2.0 * tail.err / lc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::wrapped_exponential_sum;

    fn policy(tol: f64) -> ImageSumPolicy {
        ImageSumPolicy::new(
            tol,
            DecayCertificate {
                rate: 1.0,
                prefactor: 1.0,
                beyond: 0.0,
            },
        )
    }

    #[test]
    fn wrapped_exponential_matches_closed_form() {
        // Σ e^{-|x+n|} on l_c = 1 at x = 0.5 equals cosh(0)/sinh(0.5).
        let f = TestFunction::exponential();
        let w = wrap(&f, 1.0, &policy(1e-13)).unwrap();
        let closed = wrapped_exponential_sum(0.5, 1.0).unwrap();
        assert!((w.eval(0.5) - closed).abs() < 1e-13);
        assert!((closed - 1.9190347513349437).abs() < 1e-9);
    }

    #[test]
    fn even_function_wrap_is_reflection_symmetric() {
        let f = TestFunction::exponential();
        let w = wrap(&f, 1.3, &policy(1e-13)).unwrap();
        for &x in &[0.1, 0.3, 0.62] {
            assert!((w.eval(x) - w.eval(1.3 - x)).abs() < 1e-13);
        }
    }

    #[test]
    fn wide_circle_leaves_gaussian_untouched() {
        let f = TestFunction::gaussian();
        let w = wrap(&f, 10.0, &policy(1e-13)).unwrap();
        for &x in &[0.0, 1.0, 2.0, 3.0] {
            assert!((w.eval(x) - f.eval(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn doubling_images_changes_nothing_beyond_tolerance() {
        let f = TestFunction::exponential();
        let w = wrap(&f, 0.7, &policy(1e-12)).unwrap();
        let more = WrappedFunction {
            f: &f,
            lc: 0.7,
            n_images: w.n_images * 2,
            tail_bound: 0.0,
        };
        for &x in &[0.0, 0.2, 0.5] {
            assert!((w.eval(x) - more.eval(x)).abs() <= 1e-12);
        }
    }

    #[test]
    fn certificate_failure_is_reported() {
        let f = TestFunction::new(
            "sluggish",
            Box::new(|x: f64| (-1e-6 * x.abs()).exp()),
            None,
            DecayCertificate {
                rate: 1e-6,
                prefactor: 1.0,
                beyond: 0.0,
            },
        )
        .unwrap();
        assert!(wrap(&f, 1.0, &policy(1e-12)).is_err());
    }

    #[test]
    fn sampling_theorem_for_exponential() {
        let f = TestFunction::exponential();
        let rep = verify_sampling_theorem(&f, 1.0, 8, 1e-10).unwrap();
        assert!(rep.max_abs_dev < 1e-8, "max dev {}", rep.max_abs_dev);
        // Zero mode is the total integral: f(0) = ∫ e^{-|x|} = 2.
        let zero = rep.rows.iter().find(|r| r.n == 0).unwrap();
        assert!((zero.f_kn - 2.0).abs() < 1e-14);
        assert!((zero.f_c_n - 2.0).abs() < 1e-9);
    }

    #[test]
    fn sampling_theorem_for_magic_smooth() {
        let f = TestFunction::magic_smooth(2.0, 0.0).unwrap();
        let rep = verify_sampling_theorem(&f, 1.0, 8, 1e-10).unwrap();
        assert!(rep.max_abs_dev < 1e-8, "max dev {}", rep.max_abs_dev);
    }

    #[test]
    fn torus_wrap_factorizes_and_is_periodic() {
        let f1 = TestFunction::exponential();
        let f2 = TestFunction::exponential();
        let w2 = wrap_2d(&f1, &f2, 1.0, 1.5, &policy(1e-13)).unwrap();
        let v = w2.eval(0.3, 0.4);
        let p1 = wrap(&f1, 1.0, &policy(1e-13)).unwrap().eval(0.3);
        let p2 = wrap(&f2, 1.5, &policy(1e-13)).unwrap().eval(0.4);
        assert!((v - p1 * p2).abs() < 1e-13);
        assert!((w2.eval(0.3 + 1.0, 0.4) - v).abs() < 1e-12);
        assert!((w2.eval(0.3, 0.4 + 1.5) - v).abs() < 1e-12);
    }

    #[test]
    fn torus_zero_mode_is_plane_integral() {
        // ∬ e^{-|x|-|y|} = 4; the (0,0) Fourier coefficient of the wrap
        // equals the integral over the plane.
        let f1 = TestFunction::exponential();
        let f2 = TestFunction::exponential();
        let w2 = wrap_2d(&f1, &f2, 2.0, 3.0, &policy(1e-13)).unwrap();
        let inner = |x1: f64| {
            integrate_refine(&|x2: f64| w2.eval(x1, x2), 0.0, 3.0, 1e-11, 16, 10)
                .unwrap()
                .value
        };
        let outer = integrate_refine(&inner, 0.0, 2.0, 1e-10, 16, 10)
            .unwrap()
            .value;
        assert!((outer - 4.0).abs() < 1e-7, "got {outer}");
    }

    #[test]
    fn resynthesis_matches_image_sum() {
        // Converse direction of the theorem: mode resynthesis from sampled
        // transforms reproduces the image sum.
        let f = TestFunction::exponential();
        let w = wrap(&f, 1.0, &policy(1e-13)).unwrap();
        for &x in &[0.2, 0.35, 0.5, 0.8] {
            let r = resynthesize_from_samples(&f, 1.0, x, 1e-11).unwrap();
            assert!(
                (r.value - w.eval(x)).abs() < 1e-9,
                "x={x}: resynth {} vs wrap {}",
                r.value,
                w.eval(x)
            );
        }
    }
}
