//! `cmera images-check`: runs the sampling-theorem verifier over the test
//! corpus and emits the per-mode deviation report.

use super::cross_check;
use crate::config::ImagesCheckConfig;
use crate::output::{fmt_f64, DatasetWriter};
use cmera_core::images::{verify_sampling_theorem, SamplingReport, TestFunction};
use cmera_core::special::wrapped_exponential_sum;
use cmera_core::{Error, Result};

pub fn run(cfg: &ImagesCheckConfig, writer: &DatasetWriter, _tolerance: f64) -> Result<()> {
    if cfg.functions.is_empty() {
        return Err(Error::Domain(
            "images-check needs a non-empty function corpus".into(),
        ));
    }
    if cfg.lc_list.is_empty() {
        return Err(Error::Domain(
            "images-check needs at least one circumference".into(),
        ));
    }

    let mut reports: Vec<SamplingReport> = Vec::new();
    let mut rows = Vec::new();
    let mut corpus_max: f64 = 0.0;
    for name in &cfg.functions {
        let f = match name.as_str() {
            "exponential" => TestFunction::exponential(),
            "gaussian" => TestFunction::gaussian(),
            "magic" => TestFunction::magic_smooth(cfg.lambda, cfg.s)?,
            other => {
                return Err(Error::Domain(format!(
                    "unknown corpus function '{other}' (expected exponential, gaussian, magic)"
                )))
            }
        };
        for &lc in &cfg.lc_list {
            let rep = verify_sampling_theorem(&f, lc, cfg.n_max, cfg.quad_tol)?;
            corpus_max = corpus_max.max(rep.max_abs_dev);
            for r in &rep.rows {
                rows.push(vec![
                    rep.function.clone(),
                    fmt_f64(lc),
                    r.n.to_string(),
                    fmt_f64(r.f_c_n),
                    fmt_f64(r.f_kn),
                    fmt_f64(r.abs_dev),
                ]);
            }
            reports.push(rep);
        }
    }

    cross_check(
        corpus_max < 1e-8,
        "sampling theorem over the corpus",
        format!("max |f_c(n) - f(k_n)| = {corpus_max:.3e}"),
    )?;

    // The exponential row at x = 1/2 has an exact hyperbolic closed form;
    // pin the wrapped sum against it at 1e-13.
    let exp_f = TestFunction::exponential();
    let policy = cmera_core::images::ImageSumPolicy::new(1e-14, exp_f.certificate);
    let wrapped = cmera_core::images::wrap(&exp_f, 1.0, &policy)?;
    let closed = wrapped_exponential_sum(0.5, 1.0)?;
    cross_check(
        (wrapped.eval(0.5) - closed).abs() < 1e-13,
        "exponential closed-form row",
        format!("{} vs {closed}", wrapped.eval(0.5)),
    )?;

    writer
        .table(
            "images_check",
            &["function", "lc", "n", "f_c_n", "f_kn", "abs_dev"],
            &rows,
            &[("corpus_max_abs_dev", format!("{corpus_max:.3e}"))],
            &[],
            false,
        )
        .map_err(Error::Domain)?;
    writer
        .json("images_check_report", &reports)
        .map_err(Error::Domain)?;
    Ok(())
}
