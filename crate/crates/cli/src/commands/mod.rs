pub mod beta;
pub mod correlator;
pub mod error_scan;
pub mod images_check;
pub mod profile;

use cmera_core::Error;

/// Exit codes: 0 success, 2 config error, 3 numeric non-convergence,
/// 4 theorem-precondition violation.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Domain(_) | Error::Coincident(_) => 2,
        Error::NonConvergence(_) | Error::Certificate(_) => 3,
        Error::Precondition(_) => 4,
    }
}

/// A failed in-run cross-check is a numeric failure, not a config error.
pub fn cross_check(ok: bool, what: &str, detail: String) -> cmera_core::Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::NonConvergence(format!(
            "in-run cross-check failed: {what}: {detail}"
        )))
    }
}
