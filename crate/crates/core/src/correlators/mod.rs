//! Two-point correlation functions in momentum and real space.
//!
//! Momentum space is elementary: C_φφ(k) = 1/(2β), C_ππ(k) = β/2 and
//! C_∂φ∂φ(k) = k²/(2β).  Real space is where the numerical content lives:
//! the integrands decay slowly (QFT φφ), grow linearly (ππ) or
//! quadratically (∂φ∂φ), so every transform is decomposed as
//!
//!   C(k) = lin·(k/2) + c₀ + c₂k² + rem(k),
//!
//! where the polynomial part has a known distributional transform
//! (−1/(2πx²) for k/2 on the line, a 1/sin² closed form on the circle,
//! zero for the constants away from coincident points) and `rem` decays and
//! is transformed honestly.  The decomposition is shared by the line
//! quadratures and the circle mode sums, so the two circle routes — mode
//! sums against image sums — stay computationally independent.

pub mod circle;
pub mod line;

use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::scale_evolution::BetaFunction;
use serde::{Deserialize, Serialize};

/// Correlator channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    PhiPhi,
    PiPi,
    DphiDphi,
}

impl Channel {
    pub fn label(&self) -> &'static str {
        match self {
            Channel::PhiPhi => "phiphi",
            Channel::PiPi => "pipi",
            Channel::DphiDphi => "dphidphi",
        }
    }
}

/// Which state the correlator belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum Source {
    Cmera { lambda: f64, s: f64 },
    Qft { m: f64 },
}

impl Source {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Source::Cmera { lambda, s } => {
                if !(lambda > 0.0) || !(s >= 0.0) {
                    return Err(Error::domain(format!(
                        "cMERA source needs Λ > 0, s >= 0; got Λ={lambda}, s={s}"
                    )));
                }
            }
            Source::Qft { m } => {
                if !(m > 0.0) {
                    return Err(Error::domain(format!(
                        "QFT real-space correlators need m > 0 (massless runs must pass an \
                         explicit IR regulator mass); got m={m}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// β(k) of this source.
    pub fn beta(&self, k: f64) -> f64 {
        match *self {
            Source::Cmera { lambda, s } => {
                crate::scale_evolution::beta_magic_closed(k, lambda, s).expect("validated")
            }
            Source::Qft { m } => (k * k + m * m).sqrt(),
        }
    }

    /// Exponential decay rate of the real-space correlator.
    pub fn decay_rate(&self) -> f64 {
        match *self {
            Source::Cmera { lambda, .. } => lambda,
            Source::Qft { m } => m,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Source::Cmera { lambda, s } => format!("cmera(lambda={lambda},s={s})"),
            Source::Qft { m } => format!("qft(m={m})"),
        }
    }
}

/// Momentum-space correlator from a beta function.
///
/// φφ → 1/(2β), ππ → β/2, ∂φ∂φ → k²/(2β).
pub fn momentum_correlator(beta: &BetaFunction, channel: Channel, k: f64) -> Result<f64> {
    let b = beta.eval(k)?;
    channel_from_beta(b, channel, k)
}

pub(crate) fn channel_from_beta(beta: f64, channel: Channel, k: f64) -> Result<f64> {
    if beta == 0.0 {
        return Err(Error::domain(format!(
            "β(k) = 0 at k = {k} (massless zero mode); the φφ coefficient diverges"
        )));
    }
    Ok(match channel {
        Channel::PhiPhi => 0.5 / beta,
        Channel::PiPi => 0.5 * beta,
        Channel::DphiDphi => 0.5 * k * k / beta,
    })
}

/// Closed-form QFT correlators on the line.
///
/// φφ → K₀(mx)/(2π);  ππ → (m²/4π)(K₀(mx) − K₂(mx)).
/// ∂φ∂φ is the second derivative of the φφ closed form,
/// (m²/2π)(K₀(mx) + K₁(mx)/(mx)); the distributional Fourier transform of
/// k²/(2β) is the negative of this (see [`line::line_correlator_real`]).
pub fn qft_line_closed(channel: Channel, m: f64, x: f64) -> Result<f64> {
    if !(m > 0.0) || !(x > 0.0) {
        return Err(Error::domain(format!(
            "qft_line_closed needs m > 0 and x > 0, got m={m}, x={x}"
        )));
    }
    let acc = crate::special::BesselAccuracy::default();
    let z = m * x;
    let (k0, k1) = crate::special::bessel_k01(z, &acc)?;
    let two_pi = 2.0 * std::f64::consts::PI;
    Ok(match channel {
        Channel::PhiPhi => k0 / two_pi,
        Channel::PiPi => {
            let k2 = k0 + 2.0 * k1 / z;
            (m * m / 2.0) * (k0 - k2) / two_pi
        }
        Channel::DphiDphi => m * m * (k0 + k1 / z) / two_pi,
    })
}

/// Classification of a coincident-point (x = 0) request.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "classification", rename_all = "snake_case")]
pub enum CoincidentReport {
    /// The correlator diverges as x -> 0 with the stated law.
    UvDivergent { law: String },
    /// The correlator tends to a finite plateau (cMERA below the UV
    /// length); the contact term δ(x)-coefficient is excluded.
    Plateau { value: f64, err: f64 },
}

/// Classify x = 0 instead of returning a number.  QFT channels diverge;
/// cMERA channels plateau at the transform of the decaying remainder.
pub fn coincident_point_report(
    source: &Source,
    channel: Channel,
    tol: f64,
) -> Result<CoincidentReport> {
    source.validate()?;
    match source {
        Source::Qft { .. } => Ok(CoincidentReport::UvDivergent {
            law: match channel {
                Channel::PhiPhi => "-log(m x)/(2 pi)".into(),
                Channel::PiPi => "-1/(2 pi x^2)".into(),
                Channel::DphiDphi => "1/(2 pi x^2) (second-derivative convention)".into(),
            },
        }),
        Source::Cmera { lambda, s } => {
            let dec = decompose(source, channel)?;
            // The plateau is (1/π)∫₀^∞ rem, absolutely convergent with a
            // 1/k² tail.  The tail is folded to a finite interval by
            // k -> 1/u, where the integrand extends continuously to u = 0.
            let upper = 10.0 * lambda * s.exp();
            let head = crate::quad::integrate_refine(&|k| (dec.rem)(k), 0.0, upper, tol, 64, 12)?;
            let tail = crate::quad::integrate_refine(
                &|u: f64| (dec.rem)(1.0 / u) / (u * u),
                0.0,
                1.0 / upper,
                tol,
                16,
                12,
            )?;
            Ok(CoincidentReport::Plateau {
                value: (head.value + tail.value) / std::f64::consts::PI,
                err: (head.err + tail.err) / std::f64::consts::PI,
            })
        }
    }
}

/// C(k) = lin·(k/2) + c₀ + c₂·k² + rem(k), with `rem` decaying at least
/// like 1/k and evaluated in cancellation-free form.
pub(crate) struct MomentumDecomposition {
    /// Coefficient of k/2 (0 or 1).
    pub lin: f64,
    /// Constant offset (transforms to zero away from coincident points).
    #[allow(dead_code)]
    pub c0: f64,
    /// Coefficient of k² (transforms to zero away from coincident points).
    #[allow(dead_code)]
    pub c2: f64,
    pub rem: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

pub(crate) fn decompose(source: &Source, channel: Channel) -> Result<MomentumDecomposition> {
    source.validate()?;
    Ok(match (*source, channel) {
        (Source::Qft { m }, Channel::PhiPhi) => MomentumDecomposition {
            lin: 0.0,
            c0: 0.0,
            c2: 0.0,
            rem: Box::new(move |k: f64| 0.5 / (k * k + m * m).sqrt()),
        },
        (Source::Qft { m }, Channel::PiPi) => MomentumDecomposition {
            lin: 1.0,
            c0: 0.0,
            c2: 0.0,
            // β/2 - k/2 = m²/(2(β+k))
            rem: Box::new(move |k: f64| {
                let beta = (k * k + m * m).sqrt();
                0.5 * m * m / (beta + k)
            }),
        },
        (Source::Qft { m }, Channel::DphiDphi) => MomentumDecomposition {
            lin: 1.0,
            c0: 0.0,
            c2: 0.0,
            // k²/(2β) - k/2 = -k m²/(2β(β+k))
            rem: Box::new(move |k: f64| {
                let beta = (k * k + m * m).sqrt();
                -0.5 * k * m * m / (beta * (beta + k))
            }),
        },
        (Source::Cmera { lambda, s }, Channel::PhiPhi) => {
            let a = (-2.0 * s).exp();
            MomentumDecomposition {
                lin: 0.0,
                c0: (-s).exp() / (2.0 * lambda),
                c2: 0.0,
                // 1/(2β̃) - e^{-s}/(2Λ), rationalized: the difference of
                // square roots is Λ²(1-A)/((k²+Λ²)(√P+√A)) with
                // P = (Ak²+Λ²)/(k²+Λ²).
                rem: Box::new(move |k: f64| {
                    let l2 = lambda * lambda;
                    let p = (a * k * k + l2) / (k * k + l2);
                    lambda * (1.0 - a) / (2.0 * (k * k + l2) * (p.sqrt() + a.sqrt()))
                }),
            }
        }
        (Source::Cmera { lambda, s }, Channel::PiPi) => {
            let a = (-2.0 * s).exp();
            MomentumDecomposition {
                lin: 0.0,
                c0: 0.5 * lambda * s.exp(),
                c2: 0.0,
                // β̃/2 - Λe^s/2 = -Λ³(1-A)/(2A(Ak²+Λ²)(√Q+1/√A)),
                // Q = (k²+Λ²)/(Ak²+Λ²).
                rem: Box::new(move |k: f64| {
                    let l2 = lambda * lambda;
                    let q = (k * k + l2) / (a * k * k + l2);
                    -lambda * l2 * (1.0 - a)
                        / (2.0 * a * (a * k * k + l2) * (q.sqrt() + 1.0 / a.sqrt()))
                }),
            }
        }
        (Source::Cmera { lambda, s }, Channel::DphiDphi) => {
            let a = (-2.0 * s).exp();
            MomentumDecomposition {
                lin: 0.0,
                c0: 0.25 * lambda * (1.0 - a) * s.exp(),
                c2: (-s).exp() / (2.0 * lambda),
                // k²/(2β̃) - c₂k² - c₀, twice rationalized so no large-k
                // cancellation survives.
                rem: Box::new(move |k: f64| {
                    let l2 = lambda * lambda;
                    let k2 = k * k;
                    let p = (a * k2 + l2) / (k2 + l2);
                    let s_big = ((k2 + l2) * (a * k2 + l2)).sqrt();
                    let n = -l2 * ((3.0 * a + 1.0) * k2 + (1.0 - a) * l2)
                        / (a.sqrt() * (k2 - l2) + s_big);
                    let b = n / (2.0 * a.sqrt() * (k2 + l2) * (p.sqrt() + a.sqrt()));
                    0.5 * lambda * (1.0 - a) * b
                }),
            }
        }
    })
}

/// A sampled two-point function over a real-space grid.
#[derive(Debug, Clone, Serialize)]
pub struct CorrelatorTable {
    pub channel: Channel,
    pub source: Source,
    pub geometry: Geometry,
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
}

impl CorrelatorTable {
    /// Build a line table by real-space quadrature.
    pub fn line(
        source: &Source,
        channel: Channel,
        xs: &[f64],
        cfg: &line::QuadConfig,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(xs.len());
        let mut errors = Vec::with_capacity(xs.len());
        for &x in xs {
            let r = line::line_correlator_real(source, channel, x, cfg)?;
            values.push(r.value);
            errors.push(r.err);
        }
        Ok(CorrelatorTable {
            channel,
            source: *source,
            geometry: Geometry::Line,
            xs: xs.to_vec(),
            values,
            errors,
        })
    }

    /// Build a circle table by the image-sum route (the production route;
    /// the mode sum stays available as an independent cross-check).
    pub fn circle(
        source: &Source,
        channel: Channel,
        lc: f64,
        xs: &[f64],
        cfg: &line::QuadConfig,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(xs.len());
        let mut errors = Vec::with_capacity(xs.len());
        for &x in xs {
            let r = circle::circle_correlator_imagesum(source, channel, x, lc, cfg)?;
            values.push(r.value);
            errors.push(r.err);
        }
        Ok(CorrelatorTable {
            channel,
            source: *source,
            geometry: Geometry::Circle { lc },
            xs: xs.to_vec(),
            values,
            errors,
        })
    }
}
