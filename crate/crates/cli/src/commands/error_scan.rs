//! `cmera error-scan`: relative-error scans over an s-list on the line and
//! on a circle, with slope-fit summaries of the log E vs s law.

use super::cross_check;
use crate::config::ErrorScanConfig;
use crate::output::{fmt_f64, DatasetWriter};
use cmera_core::analysis::{error_slope_fit, fit_line, ErrorScan, SlopeFit};
use cmera_core::correlators::line::QuadConfig;
use cmera_core::geometry::Geometry;
use cmera_core::{Error, Result};
use serde::Serialize;

#[derive(Serialize)]
struct FitSummary {
    geometry: String,
    slope: f64,
    intercept: f64,
    residual_rms: f64,
    slope_half_width: f64,
    n_points: usize,
}

pub fn run(cfg: &ErrorScanConfig, writer: &DatasetWriter, tolerance: f64) -> Result<()> {
    if cfg.s_list.len() < 4 {
        return Err(Error::Domain("error-scan needs at least 4 s values".into()));
    }
    let quad = QuadConfig::with_tol(tolerance);

    // Self-test: the fitter recovers a synthetic slope of exactly -2.
    let synthetic: Vec<(f64, f64)> = cfg.s_list.iter().map(|&s| (s, -2.0 * s)).collect();
    let self_fit = fit_line(&synthetic)?;
    cross_check(
        (self_fit.slope + 2.0).abs() < 1e-12,
        "synthetic slope self-test",
        format!("slope {}", self_fit.slope),
    )?;

    let mut summaries = Vec::new();
    let mut rows = Vec::new();

    let line_scan = ErrorScan::run(
        cfg.channel,
        Geometry::Line,
        cfg.line_m,
        cfg.line_m,
        &cfg.s_list,
        (cfg.line_x, cfg.line_x),
        1,
        &quad,
    )?;
    push_rows(&mut rows, "line", &line_scan);
    let line_fit = error_slope_fit(&line_scan)?;
    summaries.push(summary("line", &line_fit));

    let circle_scan = ErrorScan::run(
        cfg.channel,
        Geometry::Circle { lc: cfg.circle_lc },
        cfg.circle_m,
        cfg.circle_m,
        &cfg.s_list,
        (cfg.circle_x, cfg.circle_x),
        1,
        &quad,
    )?;
    push_rows(&mut rows, "circle", &circle_scan);
    let circle_fit = error_slope_fit(&circle_scan)?;
    summaries.push(summary("circle", &circle_fit));

    writer
        .table(
            "error_scan",
            &["geometry", "s", "x", "E", "excluded_flag"],
            &rows,
            &[
                ("line_slope", format!("{:.6}", line_fit.slope)),
                ("circle_slope", format!("{:.6}", circle_fit.slope)),
            ],
            &[],
            false,
        )
        .map_err(Error::Domain)?;
    writer
        .json("error_scan_fits", &summaries)
        .map_err(Error::Domain)?;
    Ok(())
}

fn push_rows(rows: &mut Vec<Vec<String>>, geom: &str, scan: &ErrorScan) {
    for p in &scan.points {
        rows.push(vec![
            geom.into(),
            fmt_f64(p.s),
            fmt_f64(p.x),
            fmt_f64(p.e),
            if p.excluded { "1" } else { "0" }.into(),
        ]);
    }
}

fn summary(geometry: &str, fit: &SlopeFit) -> FitSummary {
    FitSummary {
        geometry: geometry.into(),
        slope: fit.slope,
        intercept: fit.intercept,
        residual_rms: fit.residual_rms,
        slope_half_width: fit.slope_half_width,
        n_points: fit.n_points,
    }
}
