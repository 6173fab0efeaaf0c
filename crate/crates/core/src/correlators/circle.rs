//! Circle correlators by two independent routes.
//!
//! Mode sum:   C_c(x) = (1/l_c) Σ_n e^{i k_n x} C(k_n), evaluated through
//! the polynomial/remainder decomposition: the k/2 part has the exact
//! regularized sum -π/(2 l_c² sin²(πx/l_c)), constants and k² sum to zero
//! away from coincident points, and the remainder series is summed by
//! parts.  Image sum: C_c(x) = Σ_n C_line(x + n l_c) with the truncation
//! certified by the source's exponential decay.  Their agreement is the
//! structural content of the method of images and is asserted by the
//! acceptance suite, so the two implementations deliberately share no
//! numerical machinery beyond the momentum-space channel definitions.

use super::line::{line_correlator_real, QuadConfig};
use super::{decompose, qft_line_closed, Channel, Source};
use crate::error::{Error, Result};
use crate::images::{DecayCertificate, ImageSumPolicy};
use crate::quad::oscillatory::mode_sum_tail;
use crate::quad::QuadResult;
use std::f64::consts::PI;

fn check_circle_point(x: f64, lc: f64) -> Result<f64> {
    if !(lc > 0.0) || !lc.is_finite() {
        return Err(Error::domain(format!(
            "circumference must be positive, got {lc}"
        )));
    }
    let xm = x.rem_euclid(lc);
    if xm == 0.0 {
        return Err(Error::Coincident(
            "circle correlator at x ≡ 0 (mod l_c); see coincident_point_report".into(),
        ));
    }
    Ok(xm)
}

/// Mode-sum route.  `n_max` caps the number of remainder terms; the
/// truncation bound of the summed-by-parts series is part of the returned
/// error estimate, and exceeding the cap is reported as non-convergence
/// (which is what a divergent request produces).
pub fn circle_correlator_modesum(
    source: &Source,
    channel: Channel,
    x: f64,
    lc: f64,
    n_max: i64,
    tol: f64,
) -> Result<QuadResult> {
    source.validate()?;
    let xm = check_circle_point(x, lc)?;
    let theta = 2.0 * PI * xm / lc;
    let dec = decompose(source, channel)?;

    // Regularized sum of the k/2 part: (1/l_c)·Σ_n e^{inθ}|k_n|/2.
    let singular = -dec.lin * PI / (2.0 * lc * lc * (PI * xm / lc).sin().powi(2));

    let rem = |n: i64| (dec.rem)(2.0 * PI * n as f64 / lc);
    let tail = mode_sum_tail(&rem, theta, 1, tol * lc / 2.0, n_max)?;
    let value = singular + (rem(0) + 2.0 * tail.value) / lc;
    Ok(QuadResult::new(value, 2.0 * tail.err / lc))
}

/// Image-sum route: Σ_{|n| ≤ N} C_line(|x + n l_c|) with N certified from
/// the exponential decay of the line correlator.
pub fn circle_correlator_imagesum(
    source: &Source,
    channel: Channel,
    x: f64,
    lc: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    source.validate()?;
    let xm = check_circle_point(x, lc)?;

    let policy = image_policy(source, channel, lc, cfg)?;
    let n_images = policy.required_images(lc)? as i64;
    let tail_bound = policy.tail_bound(lc, n_images as usize);

    let mut value = 0.0;
    let mut err = tail_bound;
    for n in -n_images..=n_images {
        let y = (xm + n as f64 * lc).abs();
        let r = line_value(source, channel, y, cfg)?;
        value += r.value;
        err += r.err;
    }
    Ok(QuadResult::new(value, err))
}

/// Line correlator used by the image route: Bessel closed forms for the
/// QFT source (with the Fourier sign convention for ∂φ∂φ), quadrature for
/// the cMERA source.
fn line_value(source: &Source, channel: Channel, y: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    match *source {
        Source::Qft { m } => {
            let v = qft_line_closed(channel, m, y)?;
            let v = if channel == Channel::DphiDphi { -v } else { v };
            Ok(QuadResult::new(v, 1e-12 * v.abs().max(1e-300)))
        }
        Source::Cmera { .. } => line_correlator_real(source, channel, y, cfg),
    }
}

/// Decay certificate for the image truncation: rate m (QFT) or Λ (cMERA),
/// prefactor anchored on an evaluated point with a factor-two margin.
/// The "doubling N changes nothing" property test backs the construction.
fn image_policy(
    source: &Source,
    channel: Channel,
    lc: f64,
    cfg: &QuadConfig,
) -> Result<ImageSumPolicy> {
    let rate = source.decay_rate();
    let y0 = 0.5 * lc.max(1.0 / rate);
    let anchor = line_value(source, channel, y0, cfg)?.value.abs();
    let prefactor = 2.0 * (anchor + cfg.tol) * (rate * y0).exp();
    Ok(ImageSumPolicy::new(
        cfg.tol,
        DecayCertificate {
            rate,
            prefactor,
            beyond: y0,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qft_phiphi_routes_agree() {
        let cfg = QuadConfig::default();
        let src = Source::Qft { m: 1.0 };
        for &x in &[0.05, 0.2, 0.5, 0.8, 0.95] {
            let modes =
                circle_correlator_modesum(&src, Channel::PhiPhi, x, 1.0, 2_000_000, 1e-9).unwrap();
            let images = circle_correlator_imagesum(&src, Channel::PhiPhi, x, 1.0, &cfg).unwrap();
            let rel = ((modes.value - images.value) / images.value).abs();
            assert!(
                rel < 1e-6,
                "x={x}: modes {} images {} rel {rel:.3e}",
                modes.value,
                images.value
            );
        }
    }

    #[test]
    fn qft_phiphi_image_route_is_bessel_sum() {
        // Σ K₀(m|x+n|)/(2π) directly.
        let cfg = QuadConfig::default();
        let src = Source::Qft { m: 1.0 };
        let images = circle_correlator_imagesum(&src, Channel::PhiPhi, 0.5, 1.0, &cfg).unwrap();
        let acc = crate::special::BesselAccuracy::default();
        let mut brute = 0.0;
        for n in -40i64..=40 {
            let y = (0.5 + n as f64).abs();
            brute += crate::special::bessel_k(0, y, &acc).unwrap() / (2.0 * PI);
        }
        assert!(
            (images.value - brute).abs() < 1e-10,
            "{} vs {brute}",
            images.value
        );
    }

    #[test]
    fn circle_symmetry() {
        let cfg = QuadConfig::default();
        let src = Source::Qft { m: 1.0 };
        for &x in &[0.1, 0.3, 0.45] {
            let a = circle_correlator_imagesum(&src, Channel::PiPi, x, 1.0, &cfg).unwrap();
            let b = circle_correlator_imagesum(&src, Channel::PiPi, 1.0 - x, 1.0, &cfg).unwrap();
            assert!((a.value - b.value).abs() < 1e-10 * a.value.abs());
            let am =
                circle_correlator_modesum(&src, Channel::PiPi, x, 1.0, 2_000_000, 1e-9).unwrap();
            let bm = circle_correlator_modesum(&src, Channel::PiPi, 1.0 - x, 1.0, 2_000_000, 1e-9)
                .unwrap();
            assert!((am.value - bm.value).abs() < 1e-9 * am.value.abs().max(1.0));
        }
    }

    #[test]
    fn wide_circle_decouples_to_line() {
        // l_c ≫ 1/m: a single image dominates.
        let cfg = QuadConfig::default();
        let src = Source::Qft { m: 1.0 };
        let lc = 40.0;
        let v = circle_correlator_imagesum(&src, Channel::PhiPhi, 1.0, lc, &cfg).unwrap();
        let line = qft_line_closed(Channel::PhiPhi, 1.0, 1.0).unwrap();
        assert!(((v.value - line) / line).abs() < 1e-10);
    }

    #[test]
    fn flat_cmera_mode_sum_vanishes_off_site() {
        // s = 0: β̃ ≡ Λ is the flat-β pathology; the regularized mode sum
        // and the image route both give zero for x ≠ 0, which is why the
        // finite bare truncation must never be used alone.
        let cfg = QuadConfig::default();
        let src = Source::Cmera {
            lambda: 2.0,
            s: 0.0,
        };
        let m = circle_correlator_modesum(&src, Channel::PiPi, 0.3, 1.0, 100_000, 1e-10).unwrap();
        let i = circle_correlator_imagesum(&src, Channel::PiPi, 0.3, 1.0, &cfg).unwrap();
        assert!(m.value.abs() < 1e-10, "mode sum {}", m.value);
        assert!(i.value.abs() < 1e-10, "image sum {}", i.value);
    }

    #[test]
    fn coincident_point_reported() {
        let cfg = QuadConfig::default();
        let src = Source::Qft { m: 1.0 };
        assert!(matches!(
            circle_correlator_modesum(&src, Channel::PiPi, 0.0, 1.0, 10_000, 1e-8),
            Err(Error::Coincident(_))
        ));
        assert!(matches!(
            circle_correlator_imagesum(&src, Channel::PiPi, 1.0, 1.0, &cfg),
            Err(Error::Coincident(_))
        ));
    }

    #[test]
    fn cmera_routes_agree() {
        let cfg = QuadConfig::default();
        let src = Source::Cmera {
            lambda: 1.0,
            s: 2.0,
        };
        for &x in &[0.2, 0.5] {
            let modes =
                circle_correlator_modesum(&src, Channel::PhiPhi, x, 1.0, 2_000_000, 1e-9).unwrap();
            let images = circle_correlator_imagesum(&src, Channel::PhiPhi, x, 1.0, &cfg).unwrap();
            let rel = ((modes.value - images.value) / images.value).abs();
            assert!(
                rel < 1e-6,
                "x={x}: modes {} images {} rel {rel:.3e}",
                modes.value,
                images.value
            );
        }
    }

    #[test]
    fn dphidphi_routes_agree() {
        // The ∂φ∂φ mode sum uses k²/(2β); the image route must therefore
        // carry the Fourier sign of the closed form.  Both sources.
        let cfg = QuadConfig::default();
        let x = 0.4;
        for source in [
            Source::Qft { m: 1.0 },
            Source::Cmera {
                lambda: 1.0,
                s: 1.5,
            },
        ] {
            let modes =
                circle_correlator_modesum(&source, Channel::DphiDphi, x, 1.0, 2_000_000, 1e-9)
                    .unwrap();
            let images =
                circle_correlator_imagesum(&source, Channel::DphiDphi, x, 1.0, &cfg).unwrap();
            let rel = ((modes.value - images.value) / images.value).abs();
            assert!(
                rel < 1e-6,
                "{}: modes {} images {} rel {rel:.3e}",
                source.label(),
                modes.value,
                images.value
            );
        }
    }
}
