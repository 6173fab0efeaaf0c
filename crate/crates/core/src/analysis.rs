//! Relative-error analysis against exact ground states: error scans over
//! (s, x), the O(e^{-2s}) scaling fit, the line-to-circle error-transfer
//! check, and the UV-length onset scan.

use crate::correlators::circle::circle_correlator_imagesum;
use crate::correlators::line::{line_correlator_real, QuadConfig};
use crate::correlators::{qft_line_closed, Channel, Source};
use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::quad::QuadResult;
use serde::Serialize;

/// |cmera - qft| / |qft| with an underflow guard on the reference.
pub fn relative_error(cmera_val: f64, qft_val: f64) -> Result<f64> {
    if qft_val.abs() < 1e-300 {
        return Err(Error::domain(format!(
            "reference magnitude {qft_val:.3e} below the underflow floor"
        )));
    }
    Ok((cmera_val - qft_val).abs() / qft_val.abs())
}

/// One sampled point of an error scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanPoint {
    pub s: f64,
    pub x: f64,
    pub e: f64,
    /// Noise-floor estimate on `e` from the per-point quadrature errors.
    pub e_noise: f64,
    /// Excluded from fits: inside 3× the UV length, reference underflow,
    /// or E at the numeric noise floor.
    pub excluded: bool,
    /// Within a factor 3 of the IR length 1/m (reported, not excluded).
    pub near_ir: bool,
}

/// A relative-error scan E(s,x) over an s-list and an x-window.
#[derive(Debug, Clone, Serialize)]
pub struct ErrorScan {
    pub channel: Channel,
    pub geometry: Geometry,
    pub m: f64,
    pub lambda: f64,
    pub s_values: Vec<f64>,
    pub x_window: (f64, f64),
    pub points: Vec<ScanPoint>,
}

impl ErrorScan {
    /// Run the scan on the line or on a circle; the reference is the exact
    /// ground state of the same mass, the cMERA uses Λ = `lambda`.
    #[allow(clippy::too_many_arguments)]
    pub fn run(
        channel: Channel,
        geometry: Geometry,
        m: f64,
        lambda: f64,
        s_values: &[f64],
        x_window: (f64, f64),
        n_x: usize,
        cfg: &QuadConfig,
    ) -> Result<Self> {
        if !(m > 0.0) {
            return Err(Error::domain("error scans need m > 0"));
        }
        if !(x_window.0 > 0.0 && x_window.1 >= x_window.0) {
            return Err(Error::domain(format!("bad x-window {x_window:?}")));
        }
        let xs: Vec<f64> = if n_x <= 1 || x_window.0 == x_window.1 {
            vec![x_window.0]
        } else {
            (0..n_x)
                .map(|i| {
                    let t = i as f64 / (n_x - 1) as f64;
                    x_window.0 * (x_window.1 / x_window.0).powf(t)
                })
                .collect()
        };
        let qft = Source::Qft { m };
        let mut points = Vec::new();
        for &s in s_values {
            let cmera = Source::Cmera { lambda, s };
            let x_uv = (-s).exp() / m;
            for &x in &xs {
                let (cv, qv) = evaluate_pair(channel, &geometry, &cmera, &qft, x, cfg)?;
                let e = relative_error(cv.value, qv.value)?;
                let e_noise = (cv.err + qv.err) / qv.value.abs();
                let excluded = x < 3.0 * x_uv || e <= 10.0 * e_noise;
                let near_ir = x * m > 1.0 / 3.0 && x * m < 3.0;
                points.push(ScanPoint {
                    s,
                    x,
                    e,
                    e_noise,
                    excluded,
                    near_ir,
                });
            }
        }
        Ok(ErrorScan {
            channel,
            geometry,
            m,
            lambda,
            s_values: s_values.to_vec(),
            x_window,
            points,
        })
    }
}

fn evaluate_pair(
    channel: Channel,
    geometry: &Geometry,
    cmera: &Source,
    qft: &Source,
    x: f64,
    cfg: &QuadConfig,
) -> Result<(QuadResult, QuadResult)> {
    match *geometry {
        Geometry::Line => {
            let c = line_correlator_real(cmera, channel, x, cfg)?;
            let Source::Qft { m } = *qft else {
                unreachable!()
            };
            let q = qft_line_closed(channel, m, x)?;
            let q = if channel == Channel::DphiDphi { -q } else { q };
            Ok((c, QuadResult::new(q, 1e-12 * q.abs())))
        }
        Geometry::Circle { lc } => {
            let c = circle_correlator_imagesum(cmera, channel, x, lc, cfg)?;
            let q = circle_correlator_imagesum(qft, channel, x, lc, cfg)?;
            Ok((c, q))
        }
        _ => Err(Error::domain("error scans run on the line or a circle")),
    }
}

/// Least-squares fit of log E against s.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of log E around the fit.
    pub residual_rms: f64,
    /// Two-sigma half-width of the slope estimate.
    pub slope_half_width: f64,
    pub n_points: usize,
}

/// Fit log E vs s on the scan's included points (x-averaged per s).
pub fn error_slope_fit(scan: &ErrorScan) -> Result<SlopeFit> {
    let mut pairs = Vec::new();
    for &s in &scan.s_values {
        let logs: Vec<f64> = scan
            .points
            .iter()
            .filter(|p| p.s == s && !p.excluded && p.e > 0.0)
            .map(|p| p.e.ln())
            .collect();
        if !logs.is_empty() {
            pairs.push((s, logs.iter().sum::<f64>() / logs.len() as f64));
        }
    }
    fit_line(&pairs)
}

/// Plain least squares on (s, log E) pairs.
pub fn fit_line(pairs: &[(f64, f64)]) -> Result<SlopeFit> {
    let n = pairs.len();
    if n < 4 {
        return Err(Error::domain(format!(
            "slope fit needs at least 4 distinct s values, got {n}"
        )));
    }
    let nf = n as f64;
    let sx = pairs.iter().map(|p| p.0).sum::<f64>() / nf;
    let sy = pairs.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pairs.iter().map(|p| (p.0 - sx) * (p.0 - sx)).sum();
    let sxy: f64 = pairs.iter().map(|p| (p.0 - sx) * (p.1 - sy)).sum();
    if sxx == 0.0 {
        return Err(Error::domain("slope fit needs distinct s values"));
    }
    let slope = sxy / sxx;
    let intercept = sy - slope * sx;
    let ssr: f64 = pairs
        .iter()
        .map(|p| {
            let r = p.1 - (intercept + slope * p.0);
            r * r
        })
        .sum();
    let sigma2 = if n > 2 { ssr / (nf - 2.0) } else { 0.0 };
    Ok(SlopeFit {
        slope,
        intercept,
        residual_rms: (ssr / nf).sqrt(),
        slope_half_width: 2.0 * (sigma2 / sxx).sqrt(),
        n_points: n,
    })
}

/// Per-point row of the error-transfer check.
#[derive(Debug, Clone, Serialize)]
pub struct TransferRow {
    pub x: f64,
    /// Circle relative error at x.
    pub e_circle: f64,
    /// Max line relative error over the contributing images of x whose
    /// reference is large enough to resolve E numerically.
    pub eps_line: f64,
    /// Relative weight of the images excluded from the max by the noise
    /// rule; their contribution is bounded by eps_line · this weight.
    pub excluded_weight: f64,
    /// e_circle - (eps_line + excluded bound): ≤ slack when the theorem
    /// holds.
    pub margin: f64,
}

/// Report of the line-to-circle error-transfer check.
#[derive(Debug, Clone, Serialize)]
pub struct TransferReport {
    pub channel: Channel,
    pub m: f64,
    pub lambda: f64,
    pub s: f64,
    pub lc: f64,
    pub x_uv: f64,
    /// Sign of the reference line correlator over the image set.
    pub reference_sign: f64,
    /// Global line ε: max of eps_line over the grid.
    pub epsilon_line: f64,
    /// Max circle error over the grid.
    pub max_circle_error: f64,
    /// Max of margin over the grid; the theorem holds when ≤ slack.
    pub max_margin: f64,
    pub slack: f64,
    pub rows: Vec<TransferRow>,
}

/// Numerically verify the error-transfer inequality: when the line cMERA
/// approximates the ground state to ε at every image point beyond x_UV and
/// the reference does not change sign there, the circle error is bounded
/// by ε as well.
///
/// Far images whose reference is too small to resolve E against quadrature
/// noise are excluded from the max; their total contribution is bounded by
/// (max included E)·(their relative weight) and added to the allowance.
#[allow(clippy::too_many_arguments)]
pub fn check_error_transfer(
    channel: Channel,
    m: f64,
    lambda: f64,
    s: f64,
    lc: f64,
    x_uv: f64,
    x_grid: &[f64],
    cfg: &QuadConfig,
) -> Result<TransferReport> {
    if !(m > 0.0 && lambda > 0.0 && s >= 0.0 && lc > 0.0 && x_uv > 0.0) {
        return Err(Error::domain(
            "check_error_transfer: all scales must be positive",
        ));
    }
    let cmera = Source::Cmera { lambda, s };
    let slack = 1e-9;

    // Image truncation: reference decays like e^{-m y}.
    let n_images = {
        let pol = crate::images::ImageSumPolicy::new(
            cfg.tol,
            crate::images::DecayCertificate {
                rate: m,
                prefactor: 1.0,
                beyond: 0.0,
            },
        );
        pol.required_images(lc)? as i64
    };

    let line_ref = |y: f64| -> Result<f64> {
        let v = qft_line_closed(channel, m, y)?;
        Ok(if channel == Channel::DphiDphi { -v } else { v })
    };

    let mut rows = Vec::new();
    let mut epsilon_line: f64 = 0.0;
    let mut max_circle_error: f64 = 0.0;
    let mut max_margin = f64::NEG_INFINITY;
    let mut reference_sign = 0.0;

    for &x in x_grid {
        if !(x >= x_uv && x <= lc / 2.0 + 1e-12) {
            return Err(Error::domain(format!(
                "grid point {x} outside the theorem window [{x_uv}, {}]",
                lc / 2.0
            )));
        }
        let mut c_ref_sum = 0.0;
        let mut c_cmera_sum = 0.0;
        let mut err_sum = 0.0;
        let mut eps_x: f64 = 0.0;
        let mut signs: Vec<f64> = Vec::new();
        let mut excluded_abs = 0.0;
        for n in -n_images..=n_images {
            let y = (x + n as f64 * lc).abs();
            let q = line_ref(y)?;
            let c = line_correlator_real(&cmera, channel, y, cfg)?;
            c_ref_sum += q;
            c_cmera_sum += c.value;
            err_sum += c.err;
            signs.push(q.signum());
            // Include in the ε max only where E is resolvable: quadrature
            // noise at least 1e4 times below the reference.
            if c.err / q.abs() <= 1e-4 {
                eps_x = eps_x.max(relative_error(c.value, q)?);
            } else {
                excluded_abs += q.abs();
            }
        }
        let sign = verify_single_signed(&signs)?;
        reference_sign = sign;
        let e_circle = relative_error(c_cmera_sum, c_ref_sum)?;
        let excluded_weight = excluded_abs / c_ref_sum.abs();
        let noise = err_sum / c_ref_sum.abs();
        let allowance = eps_x + eps_x * excluded_weight + noise + slack;
        let margin = e_circle - allowance;
        epsilon_line = epsilon_line.max(eps_x);
        max_circle_error = max_circle_error.max(e_circle);
        max_margin = max_margin.max(margin);
        rows.push(TransferRow {
            x,
            e_circle,
            eps_line: eps_x,
            excluded_weight,
            margin,
        });
    }

    Ok(TransferReport {
        channel,
        m,
        lambda,
        s,
        lc,
        x_uv,
        reference_sign,
        epsilon_line,
        max_circle_error,
        max_margin,
        slack,
        rows,
    })
}

/// The theorem's precondition: every reference image term carries the same
/// sign.  Returns that sign or a precondition error.
fn verify_single_signed(signs: &[f64]) -> Result<f64> {
    let first = signs.first().copied().unwrap_or(0.0);
    if first == 0.0 || signs.iter().any(|&s| s != first) {
        return Err(Error::Precondition(
            "reference line correlator changes sign over the image set; the error-transfer \
             theorem does not apply"
                .into(),
        ));
    }
    Ok(first)
}

/// Result of a UV-onset scan.
#[derive(Debug, Clone, Serialize)]
pub struct OnsetReport {
    pub channel: Channel,
    pub geometry: Geometry,
    pub m: f64,
    pub s: f64,
    pub threshold: f64,
    pub x_onset: f64,
    /// x_onset / (e^{-s}/m); order one when the onset tracks the UV length.
    pub ratio_to_uv_length: f64,
}

/// Find the smallest x on a log grid where E drops below `threshold` and
/// stays below for the rest of the grid.
pub fn uv_onset_scan(
    channel: Channel,
    m: f64,
    s: f64,
    geometry: &Geometry,
    threshold: f64,
    points_per_decade: usize,
    cfg: &QuadConfig,
) -> Result<OnsetReport> {
    if !(m > 0.0 && s >= 0.0) {
        return Err(Error::domain("uv_onset_scan needs m > 0 and s >= 0"));
    }
    let x_uv = (-s).exp() / m;
    let x_hi = match *geometry {
        Geometry::Line => 10.0 / m,
        Geometry::Circle { lc } => lc / 2.0,
        _ => return Err(Error::domain("uv_onset_scan runs on the line or a circle")),
    };
    let x_lo = (x_uv / 4.0).min(x_hi / 2.0);
    let decades = (x_hi / x_lo).log10();
    let n = ((decades * points_per_decade as f64).ceil() as usize).max(8);

    let cmera = Source::Cmera { lambda: m, s };
    let qft = Source::Qft { m };
    let mut es = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let x = x_lo * (x_hi / x_lo).powf(i as f64 / n as f64);
        let (cv, qv) = evaluate_pair(channel, geometry, &cmera, &qft, x, cfg)?;
        es.push((x, relative_error(cv.value, qv.value)?));
    }
    // Degenerate threshold: everything qualifies from the first point.
    let onset = if threshold.is_infinite() {
        Some(es[0].0)
    } else {
        (0..es.len())
            .find(|&i| es[i..].iter().all(|p| p.1 < threshold))
            .map(|i| es[i].0)
    };
    match onset {
        Some(x_onset) => Ok(OnsetReport {
            channel,
            geometry: *geometry,
            m,
            s,
            threshold,
            x_onset,
            ratio_to_uv_length: x_onset / x_uv,
        }),
        None => Err(Error::non_convergence(format!(
            "E never fell below {threshold} on [{x_lo:.3e}, {x_hi:.3e}]"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_error_basics() {
        assert_eq!(relative_error(1.0, 1.0).unwrap(), 0.0);
        assert!((relative_error(1.02, 1.0).unwrap() - 0.02).abs() < 1e-15);
        assert_eq!(relative_error(-1.0, 1.0).unwrap(), 2.0);
        assert!(relative_error(1.0, 0.0).is_err());
    }

    #[test]
    fn synthetic_slope_recovery() {
        // E(s) = e^{-2s} gives slope exactly -2; constant E gives 0.
        let pts: Vec<(f64, f64)> = [1.0, 1.5, 2.0, 2.5]
            .iter()
            .map(|&s| (s, -2.0 * s))
            .collect();
        let fit = fit_line(&pts).unwrap();
        assert!((fit.slope + 2.0).abs() < 1e-12);
        assert!(fit.residual_rms < 1e-12);

        let flat: Vec<(f64, f64)> = [1.0, 2.0, 3.0, 4.0].iter().map(|&s| (s, 0.7)).collect();
        let fit = fit_line(&flat).unwrap();
        assert!(fit.slope.abs() < 1e-12);
        // Too few points is an error.
        assert!(fit_line(&pts[..3]).is_err());
    }

    #[test]
    fn sign_verification() {
        assert_eq!(verify_single_signed(&[1.0, 1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(verify_single_signed(&[-1.0, -1.0]).unwrap(), -1.0);
        assert!(matches!(
            verify_single_signed(&[1.0, -1.0, 1.0]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn onset_degenerate_threshold() {
        let cfg = QuadConfig::default();
        let rep = uv_onset_scan(
            Channel::PhiPhi,
            1.0,
            2.0,
            &Geometry::Line,
            f64::INFINITY,
            8,
            &cfg,
        )
        .unwrap();
        // Onset at the smallest grid x = x_uv/4.
        let x_uv = (-2.0f64).exp();
        assert!((rep.x_onset - x_uv / 4.0).abs() < 1e-12);
    }

    #[test]
    fn onset_unreachable_threshold_is_reported() {
        // s = 0: the unentangled state has E ≡ 1, the scan must fail
        // rather than invent an onset.
        let cfg = QuadConfig::default();
        let res = uv_onset_scan(Channel::PhiPhi, 1.0, 0.0, &Geometry::Line, 0.05, 8, &cfg);
        assert!(matches!(res, Err(Error::NonConvergence(_))));
    }

    #[test]
    fn wide_circle_transfer_is_line_error() {
        // Single-image limit: l_c ≫ 1/m makes the circle error equal the
        // line error at the same point.
        let cfg = QuadConfig::default();
        let rep = check_error_transfer(
            Channel::PhiPhi,
            1.0,
            1.0,
            2.0,
            40.0,
            (-2.0f64).exp(),
            &[1.0, 2.0],
            &cfg,
        )
        .unwrap();
        assert!(rep.max_margin <= 0.0, "margin {}", rep.max_margin);
        for row in &rep.rows {
            // Dominant image is the point itself.
            assert!((row.e_circle - row.eps_line).abs() < 1e-6);
        }
    }

    #[test]
    fn pipi_reference_is_single_signed_negative() {
        let cfg = QuadConfig::default();
        let rep = check_error_transfer(
            Channel::PiPi,
            1.0,
            1.0,
            3.0,
            1.0,
            (-3.0f64).exp(),
            &[0.1, 0.3, 0.5],
            &cfg,
        )
        .unwrap();
        assert_eq!(rep.reference_sign, -1.0);
        assert!(rep.max_margin <= 0.0, "margin {}", rep.max_margin);
    }
}
