//! `cmera profile`: tabulates the entangling profile g̃(s,x) on the line
//! and its wrap on the circle, with the closed-form and truncated
//! image-sum columns cross-checked in-run.  The δ(x) coefficient is
//! reported in the metadata and never sampled.

use super::cross_check;
use crate::config::ProfileConfig;
use crate::output::{fmt_f64, DatasetWriter};
use cmera_core::geometry::Geometry;
use cmera_core::images::{DecayCertificate, ImageSumPolicy};
use cmera_core::profiles::{wrap_profile, EntanglingProfile};
use cmera_core::{Error, Result};

pub fn run(cfg: &ProfileConfig, writer: &DatasetWriter, tolerance: f64) -> Result<()> {
    if cfg.profile.profile != "magic" {
        return Err(Error::Domain(format!(
            "unknown profile '{}'; only 'magic' is built in",
            cfg.profile.profile
        )));
    }
    if cfg.x_points < 2 {
        return Err(Error::Domain("x_points must be at least 2".into()));
    }
    let s_list = if cfg.s_list.is_empty() {
        vec![cfg.profile.s]
    } else {
        cfg.s_list.clone()
    };
    let geom = Geometry::circle(cfg.lc)?;

    let mut line_rows = Vec::new();
    let mut circle_rows = Vec::new();
    let mut delta_coeffs = Vec::new();
    let mut max_route_dev: f64 = 0.0;

    for &s in &s_list {
        let prof =
            EntanglingProfile::magic(Geometry::Line, cfg.profile.lambda, s, cfg.profile.picture)?;
        delta_coeffs.push(prof.real(0.0).delta_coeff);

        // Line panel: x ∈ [-2/Λ, 2/Λ] around the peak.
        let half_span = 2.0 / cfg.profile.lambda;
        for i in 0..cfg.x_points {
            let x = -half_span + 2.0 * half_span * i as f64 / (cfg.x_points - 1) as f64;
            line_rows.push(vec![fmt_f64(x), fmt_f64(s), fmt_f64(prof.real(x).smooth)]);
        }

        // Circle panel with both routes.
        let policy = ImageSumPolicy::new(
            tolerance.min(1e-12),
            DecayCertificate {
                rate: 1.0,
                prefactor: 1.0,
                beyond: 0.0,
            },
        );
        let wrapped = wrap_profile(&prof, geom, &policy)?;
        for i in 0..cfg.x_points {
            let x = cfg.lc * i as f64 / (cfg.x_points - 1) as f64;
            let closed = wrapped.real_closed_form(x)?;
            let summed = wrapped.real_truncated_sum(x);
            max_route_dev = max_route_dev.max((closed - summed).abs());
            circle_rows.push(vec![
                fmt_f64(x),
                fmt_f64(s),
                fmt_f64(closed),
                fmt_f64(summed),
            ]);
        }

        // Periodicity of the circle profile.
        let a = wrapped.real_closed_form(0.0)?;
        let b = wrapped.real_closed_form(cfg.lc)?;
        cross_check(
            (a - b).abs() <= 1e-12 * a.abs(),
            "circle periodicity",
            format!("{a} vs {b}"),
        )?;
    }

    cross_check(
        max_route_dev < 1e-12,
        "closed form vs image sum",
        format!("max abs deviation {max_route_dev:.3e}"),
    )?;

    let meta = [
        (
            "delta_coefficients",
            format!("{delta_coeffs:?} (symbolic, excluded from samples)"),
        ),
        ("max_route_deviation", format!("{max_route_dev:.3e}")),
    ];
    writer
        .table(
            "profile_line",
            &["x", "s", "g_smooth"],
            &line_rows,
            &meta,
            &[2],
            false,
        )
        .map_err(Error::Domain)?;
    writer
        .table(
            "profile_circle",
            &["x", "s", "g_closed_form", "g_image_sum"],
            &circle_rows,
            &meta,
            &[2, 3],
            false,
        )
        .map_err(Error::Domain)?;
    Ok(())
}
