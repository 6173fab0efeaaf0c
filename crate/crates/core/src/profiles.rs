//! Entangling profiles: the magic kernel on the line, its wrap onto the
//! circle and torus, and the half-line fold.
//!
//! A profile lives in two representations.  In momentum space the rescaled
//! profile is g̃(s,k) = g(e^{-s}k) - 1/2; the additive -1/2 is the Fourier
//! image of a delta function at the origin.  In real space that
//! distributional part is therefore carried symbolically, as a separate
//! scalar coefficient, and never shows up in sampled values.

use crate::error::{Error, Result};
use crate::geometry::{BoundaryCondition, Geometry};
use crate::images::{DecayCertificate, ImageSumPolicy};
use crate::special::wrapped_exponential_sum;
use serde::{Deserialize, Serialize};

/// Fixed-scale picture (entangler acts at constant length 1/Λ) or the
/// rescaled picture (characteristic length shrinks as e^{-s}/Λ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Picture {
    FixedScale,
    Rescaled,
}

/// The value of a real-space profile: a smooth sampled part plus the
/// coefficient of δ(x), kept symbolic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealSpaceValue {
    pub smooth: f64,
    pub delta_coeff: f64,
}

/// Momentum-space value of the magic entangling profile.
///
/// Fixed-scale picture: g(k) = Λ²/(2(k²+Λ²)).
/// Rescaled picture:    g̃(s,k) = g(e^{-s}k) - 1/2
///                              = Λ²/(2(Λ² + (e^{-s}k)²)) - 1/2
///                              = -(1/2)(e^{-s}k)²/((e^{-s}k)² + Λ²).
pub fn magic_profile_momentum(k: f64, lambda: f64, s: f64, picture: Picture) -> Result<f64> {
    check_scale_params(lambda, s)?;
    match picture {
        Picture::FixedScale => Ok(lambda * lambda / (2.0 * (k * k + lambda * lambda))),
        Picture::Rescaled => {
            let u = (-s).exp() * k;
            Ok(-0.5 * u * u / (u * u + lambda * lambda))
        }
    }
}

/// The same rescaled value through the other algebraic route,
/// g(e^{-s}k) - 1/2; kept separate so tests can pin the two forms against
/// each other.
pub fn magic_profile_momentum_subtracted_form(k: f64, lambda: f64, s: f64) -> Result<f64> {
    check_scale_params(lambda, s)?;
    let u = (-s).exp() * k;
    Ok(lambda * lambda / (2.0 * (lambda * lambda + u * u)) - 0.5)
}

/// Real-space magic profile.
///
/// Rescaled picture: smooth part (e^s Λ/4) e^{-e^s Λ |x|} with δ
/// coefficient -1/2.  Fixed-scale picture: (Λ/4) e^{-Λ|x|}, no δ part.
pub fn magic_profile_real(x: f64, lambda: f64, s: f64, picture: Picture) -> Result<RealSpaceValue> {
    check_scale_params(lambda, s)?;
    match picture {
        Picture::FixedScale => Ok(RealSpaceValue {
            smooth: 0.25 * lambda * (-lambda * x.abs()).exp(),
            delta_coeff: 0.0,
        }),
        Picture::Rescaled => {
            let alpha = s.exp() * lambda;
            Ok(RealSpaceValue {
                smooth: 0.25 * alpha * (-alpha * x.abs()).exp(),
                delta_coeff: -0.5,
            })
        }
    }
}

fn check_scale_params(lambda: f64, s: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::domain(format!(
            "Λ must be positive and finite, got {lambda}"
        )));
    }
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::domain(format!("s must be >= 0 and finite, got {s}")));
    }
    Ok(())
}

/// An entangling profile on a geometry.  Only the magic kernel is built in;
/// user-supplied kernels go through [`crate::images::TestFunction`] with an
/// explicit decay certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglingProfile {
    pub geometry: Geometry,
    pub lambda: f64,
    pub s: f64,
    pub picture: Picture,
}

impl EntanglingProfile {
    pub fn magic(geometry: Geometry, lambda: f64, s: f64, picture: Picture) -> Result<Self> {
        check_scale_params(lambda, s)?;
        geometry.validate()?;
        Ok(EntanglingProfile {
            geometry,
            lambda,
            s,
            picture,
        })
    }

    /// Momentum-space value at k.
    pub fn momentum(&self, k: f64) -> f64 {
        magic_profile_momentum(k, self.lambda, self.s, self.picture).expect("validated params")
    }

    /// Real-space value at x (smooth part plus symbolic δ coefficient).
    pub fn real(&self, x: f64) -> RealSpaceValue {
        magic_profile_real(x, self.lambda, self.s, self.picture).expect("validated params")
    }

    /// Decay rate of the smooth real-space part.
    pub fn decay_rate(&self) -> f64 {
        match self.picture {
            Picture::FixedScale => self.lambda,
            Picture::Rescaled => self.s.exp() * self.lambda,
        }
    }

    /// Decay certificate of the smooth part, |f(x)| ≤ A e^{-α|x|}.
    pub fn decay_certificate(&self) -> DecayCertificate {
        let alpha = self.decay_rate();
        DecayCertificate {
            rate: alpha,
            prefactor: 0.25 * alpha,
            beyond: 0.0,
        }
    }
}

/// A line profile wrapped around a circle by the method of images.
#[derive(Debug, Clone)]
pub struct WrappedProfile {
    pub base: EntanglingProfile,
    pub geometry: Geometry,
    pub policy: ImageSumPolicy,
    pub closed_form_available: bool,
    n_images: usize,
}

impl WrappedProfile {
    /// Smooth part of g̃_c(s,x) through the cosh/sinh closed form
    /// (e^s Λ/4)·cosh(e^s Λ(l_c/2 - x))/sinh(e^s Λ l_c/2), evaluated in the
    /// overflow-free form of [`wrapped_exponential_sum`].
    pub fn real_closed_form(&self, x: f64) -> Result<f64> {
        let lc = self.circumference();
        let alpha = self.base.decay_rate();
        let xm = x.rem_euclid(lc);
        Ok(0.25 * alpha * wrapped_exponential_sum(alpha * xm, alpha * lc)?)
    }

    /// Smooth part by the truncated image sum Σ_{|n| ≤ N} base(x + n l_c),
    /// N certified by the policy.
    pub fn real_truncated_sum(&self, x: f64) -> f64 {
        let lc = self.circumference();
        let xm = x.rem_euclid(lc);
        let n = self.n_images as i64;
        let mut acc = 0.0;
        for i in -n..=n {
            acc += self.base.real(xm + i as f64 * lc).smooth;
        }
        acc
    }

    /// δ(x) coefficient: wrapping moves the line delta to the circle origin
    /// untouched.
    pub fn delta_coeff(&self) -> f64 {
        self.base.real(0.0).delta_coeff
    }

    /// Discrete momentum coefficient g̃_c(s,n) through the sampling
    /// identity g̃_c(s,n) = g̃(s,k_n).
    pub fn momentum_coefficient(&self, n: i64) -> Result<f64> {
        let kn = crate::geometry::momentum_of_mode(&self.geometry, n)?;
        Ok(self.base.momentum(kn))
    }

    /// Discrete momentum coefficient by independent quadrature of the
    /// wrapped real-space profile over one period, plus the symbolic δ
    /// contribution.  This is the verification route for the sampling
    /// identity, not the production path.
    pub fn momentum_coefficient_by_quadrature(&self, n: i64, quad_tol: f64) -> Result<f64> {
        let lc = self.circumference();
        let kn = crate::geometry::momentum_of_mode(&self.geometry, n)?;
        let oscillations = (kn.abs() * lc / (2.0 * std::f64::consts::PI)).ceil() as usize;
        let init = (4 * (oscillations + 1)).clamp(8, 4096);
        let g = |x: f64| self.real_truncated_sum(x) * (kn * x).cos();
        let re = crate::quad::integrate_refine(&g, 0.0, lc, quad_tol, init, 12)?;
        Ok(re.value + self.delta_coeff())
    }

    pub fn n_images(&self) -> usize {
        self.n_images
    }

    fn circumference(&self) -> f64 {
        match self.geometry {
            Geometry::Circle { lc } => lc,
            _ => unreachable!("WrappedProfile is constructed on a circle"),
        }
    }
}

/// Wrap a line profile onto a circle.  The base must decay exponentially;
/// the magic profile always qualifies.
pub fn wrap_profile(
    base: &EntanglingProfile,
    geometry: Geometry,
    policy: &ImageSumPolicy,
) -> Result<WrappedProfile> {
    let Geometry::Circle { lc } = geometry else {
        return Err(Error::domain("wrap_profile needs a circle geometry"));
    };
    if base.geometry != Geometry::Line {
        return Err(Error::domain(
            "wrap_profile wraps a profile defined on the line",
        ));
    }
    let policy = ImageSumPolicy {
        decay: base.decay_certificate(),
        ..*policy
    };
    let n_images = policy.required_images(lc)?;
    Ok(WrappedProfile {
        base: base.clone(),
        geometry,
        policy,
        closed_form_available: true,
        n_images,
    })
}

/// Product of two 1-D wrapped profiles on a torus: the base profile on the
/// plane is the product of two magic kernels, so the double image sum
/// factorizes exactly.
#[derive(Debug, Clone)]
pub struct WrappedProfile2d {
    pub axis1: WrappedProfile,
    pub axis2: WrappedProfile,
}

impl WrappedProfile2d {
    pub fn real_closed_form(&self, x1: f64, x2: f64) -> Result<f64> {
        Ok(self.axis1.real_closed_form(x1)? * self.axis2.real_closed_form(x2)?)
    }

    pub fn real_truncated_sum(&self, x1: f64, x2: f64) -> f64 {
        self.axis1.real_truncated_sum(x1) * self.axis2.real_truncated_sum(x2)
    }
}

/// Wrap the separable plane profile onto the torus, axis by axis.
pub fn wrap_profile_torus(
    base: &EntanglingProfile,
    geometry: Geometry,
    policy: &ImageSumPolicy,
) -> Result<WrappedProfile2d> {
    let Geometry::Torus { l1, l2 } = geometry else {
        return Err(Error::domain("wrap_profile_torus needs a torus geometry"));
    };
    let mk = |lc: f64| -> Result<WrappedProfile> {
        wrap_profile(
            &EntanglingProfile {
                geometry: Geometry::Line,
                ..base.clone()
            },
            Geometry::circle(lc)?,
            policy,
        )
    };
    Ok(WrappedProfile2d {
        axis1: mk(l1)?,
        axis2: mk(l2)?,
    })
}

/// The two-argument half-line profile generated by folding the line
/// profile at the boundary.
///
/// The even extension (Neumann) weighs the reflected images with +1, the
/// odd extension (Dirichlet) with -1.  The four even-extension images are
/// {x-y, y-x, x+y, -x-y}; since the line profile is even in its argument
/// the fold reduces to (g̃(x-y) + η g̃(x+y))/2.
#[derive(Debug, Clone)]
pub struct HalfLineProfile {
    pub base: EntanglingProfile,
    pub bc: BoundaryCondition,
}

impl HalfLineProfile {
    fn parity(&self) -> f64 {
        match self.bc {
            BoundaryCondition::Neumann => 1.0,
            BoundaryCondition::Dirichlet => -1.0,
        }
    }

    /// Reduced two-term form (smooth parts only).
    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        self.check(x, y)?;
        let g = |z: f64| self.base.real(z).smooth;
        Ok(0.5 * (g(x - y) + self.parity() * g(x + y)))
    }

    /// Full four-image form; must equal [`Self::eval`] identically because
    /// the base profile is even.
    pub fn eval_four_term(&self, x: f64, y: f64) -> Result<f64> {
        self.check(x, y)?;
        let g = |z: f64| self.base.real(z).smooth;
        let eta = self.parity();
        Ok(0.25 * (g(x - y) + g(y - x) + eta * g(x + y) + eta * g(-x - y)))
    }

    fn check(&self, x: f64, y: f64) -> Result<()> {
        if !(x > 0.0 && y > 0.0) {
            return Err(Error::domain(format!(
                "half-line profile needs x, y > 0, got ({x}, {y})"
            )));
        }
        Ok(())
    }
}

/// Fold a line profile onto the half-line with the given boundary
/// condition.
pub fn fold_profile_halfline(
    base: &EntanglingProfile,
    bc: BoundaryCondition,
) -> Result<HalfLineProfile> {
    if base.geometry != Geometry::Line {
        return Err(Error::domain(
            "fold_profile_halfline folds a profile defined on the line",
        ));
    }
    Ok(HalfLineProfile {
        base: base.clone(),
        bc,
    })
}
