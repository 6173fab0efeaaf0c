//! Scale evolution of the annihilation-operator coefficient β̃(s,k).
//!
//! The coefficient obeys the scalar linear ODE  ∂_s β̃ = -2 g̃(s,k) β̃ with
//! initial condition β̃(0,k) = Λ.  Because the equation is scalar linear,
//! the integrator accumulates the exponent  -2 ∫₀^s g̃(s',k) ds'  and
//! exponentiates; positivity of β̃ is then structural rather than a
//! numerical accident.  For the magic profile the closed form
//! β̃(s,k) = √(k²+Λ²)/√(1+(e^{-s}k/Λ)²) serves as the independent route.

use crate::error::{Error, Result};
use crate::geometry::{momentum_of_mode, Geometry};
use crate::profiles::{EntanglingProfile, Picture};

/// Fixed-step control for the scale integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeStepControl {
    /// Step Δs of the classical 4th-order rule.
    pub step: f64,
    /// Richardson check: the halved-step result must agree to this
    /// tolerance, or integration fails.
    pub richardson_tol: f64,
}

impl Default for OdeStepControl {
    fn default() -> Self {
        OdeStepControl {
            step: 1e-3,
            richardson_tol: 1e-8,
        }
    }
}

impl OdeStepControl {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step <= 0.1) {
            return Err(Error::domain(format!(
                "Δs must lie in (0, 0.1], got {}",
                self.step
            )));
        }
        if !(self.richardson_tol > 0.0) {
            return Err(Error::domain("richardson_tol must be positive"));
        }
        Ok(())
    }
}

/// Closed-form β̃(s,k) of the magic profile:
/// √(k²+Λ²)/√(1+(e^{-s}k/Λ)²) = Λ √((k²+Λ²)/((e^{-s}k)²+Λ²)).
pub fn beta_magic_closed(k: f64, lambda: f64, s: f64) -> Result<f64> {
    if !(lambda > 0.0) || !(s >= 0.0) {
        return Err(Error::domain(format!(
            "need Λ > 0 and s >= 0, got Λ={lambda}, s={s}"
        )));
    }
    let u = (-s).exp() * k;
    Ok(lambda * ((k * k + lambda * lambda) / (u * u + lambda * lambda)).sqrt())
}

/// Integrate β̃(s_final,k) for an arbitrary profile g̃(·,k), supplied as a
/// function of s at fixed k.
///
/// The classical 4th-order step applied to the pure quadrature I' = g̃(s)
/// reduces to Simpson's rule per step; the result is Λ·exp(-2 I(s_final)).
/// A halved-step pass must agree within the Richardson tolerance.
pub fn beta_ode_integrate(
    g_tilde_of_s: &dyn Fn(f64) -> f64,
    lambda: f64,
    s_final: f64,
    ctrl: &OdeStepControl,
) -> Result<f64> {
    ctrl.validate()?;
    if !(lambda > 0.0) {
        return Err(Error::domain(format!("Λ must be positive, got {lambda}")));
    }
    if !(s_final >= 0.0) || !s_final.is_finite() {
        return Err(Error::domain(format!(
            "s_final must be >= 0 and finite, got {s_final}"
        )));
    }
    let coarse = accumulate_exponent(g_tilde_of_s, s_final, ctrl.step)?;
    let fine = accumulate_exponent(g_tilde_of_s, s_final, 0.5 * ctrl.step)?;
    if (coarse - fine).abs() > ctrl.richardson_tol {
        return Err(Error::non_convergence(format!(
            "halved-step exponent differs by {:.3e} > {:.3e}",
            (coarse - fine).abs(),
            ctrl.richardson_tol
        )));
    }
    Ok(lambda * (-2.0 * fine).exp())
}

/// Simpson accumulation of ∫₀^{s_final} g̃(s) ds with a stability check on
/// each sample.
fn accumulate_exponent(g: &dyn Fn(f64) -> f64, s_final: f64, step: f64) -> Result<f64> {
    if s_final == 0.0 {
        return Ok(0.0);
    }
    let n_steps = (s_final / step).ceil() as usize;
    let h = s_final / n_steps as f64;
    let mut acc = crate::quad::KahanSum::new();
    let mut g_lo = checked_sample(g, 0.0, h)?;
    for i in 0..n_steps {
        let s0 = i as f64 * h;
        let g_mid = checked_sample(g, s0 + 0.5 * h, h)?;
        let g_hi = checked_sample(g, s0 + h, h)?;
        acc.add(h * (g_lo + 4.0 * g_mid + g_hi) / 6.0);
        g_lo = g_hi;
    }
    Ok(acc.value())
}

fn checked_sample(g: &dyn Fn(f64) -> f64, s: f64, h: f64) -> Result<f64> {
    let v = g(s);
    if !v.is_finite() {
        return Err(Error::domain(format!(
            "profile returned a non-finite value at s = {s}"
        )));
    }
    // |Δs·g̃| beyond 0.5 means the step no longer resolves the evolution.
    if (h * v).abs() > 0.5 {
        return Err(Error::non_convergence(format!(
            "stability bound exceeded: |Δs·g̃| = {:.3} > 0.5 at s = {s}",
            (h * v).abs()
        )));
    }
    Ok(v)
}

/// β̃ of a magic cMERA profile at momentum k by numeric integration.  The
/// profile's own `s` field is ignored; evolution always starts at s = 0.
pub fn beta_ode_integrate_profile(
    profile: &EntanglingProfile,
    k: f64,
    s_final: f64,
    ctrl: &OdeStepControl,
) -> Result<f64> {
    if profile.picture != Picture::Rescaled {
        return Err(Error::domain(
            "the scale ODE drives the rescaled-picture coefficient; use a rescaled profile",
        ));
    }
    let lambda = profile.lambda;
    let g = |s: f64| {
        crate::profiles::magic_profile_momentum(k, lambda, s, Picture::Rescaled)
            .expect("validated params")
    };
    beta_ode_integrate(&g, lambda, s_final, ctrl)
}

/// β̃_c(s,n) on the circle: the sampled line solution β̃(s,k_n).
pub fn beta_circle(n: i64, lambda: f64, s: f64, geom: &Geometry) -> Result<f64> {
    let kn = momentum_of_mode(geom, n)?;
    beta_magic_closed(kn, lambda, s)
}

/// Relativistic free-boson dispersion β_QFT(k) = √(k²+m²).
pub fn beta_qft(k: f64, m: f64) -> Result<f64> {
    if !(m >= 0.0) || !m.is_finite() {
        return Err(Error::domain(format!(
            "mass must be >= 0 and finite, got {m}"
        )));
    }
    Ok((k * k + m * m).sqrt())
}

/// Dispersion E(k) and coefficient β(k) of a generic local quadratic
/// Hamiltonian with kinetic polynomial P(k) = Σ a_l k^{2l} and potential
/// polynomial Q(k) = Σ b_l k^{2l}:  E = √(QP), β = √(Q/P).
pub fn beta_qft_generic(a_coeffs: &[f64], b_coeffs: &[f64], k: f64) -> Result<(f64, f64)> {
    if a_coeffs.is_empty() || b_coeffs.is_empty() {
        return Err(Error::domain("coefficient lists must be non-empty"));
    }
    let p = even_poly(a_coeffs, k);
    let q = even_poly(b_coeffs, k);
    if !(p > 0.0) || !(q > 0.0) {
        return Err(Error::domain(format!(
            "Hamiltonian not positive definite at k = {k}: P = {p}, Q = {q}"
        )));
    }
    Ok(((q * p).sqrt(), (q / p).sqrt()))
}

/// Σ c_l k^{2l} by Horner's rule in k².
fn even_poly(coeffs: &[f64], k: f64) -> f64 {
    let k2 = k * k;
    let mut acc = 0.0;
    for &c in coeffs.iter().rev() {
        acc = acc * k2 + c;
    }
    acc
}

/// How β̃ is produced: the magic closed form or the numeric ODE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalStrategy {
    ClosedForm,
    OdeIntegrated(OdeStepControl),
}

/// What state the coefficient describes.
#[derive(Debug, Clone, PartialEq)]
pub enum BetaKind {
    /// Magic-profile cMERA with IR scale Λ at scale parameter s.
    CmeraMagic { lambda: f64, s: f64 },
    /// Exact free-boson ground state of mass m.
    Qft { m: f64 },
    /// Ground state of a generic local quadratic Hamiltonian.
    GenericQft {
        a_coeffs: Vec<f64>,
        b_coeffs: Vec<f64>,
    },
}

/// The annihilation-operator coefficient attached to a geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaFunction {
    pub geometry: Geometry,
    pub kind: BetaKind,
    pub strategy: EvalStrategy,
}

impl BetaFunction {
    pub fn cmera(geometry: Geometry, lambda: f64, s: f64) -> Result<Self> {
        if !(lambda > 0.0) || !(s >= 0.0) {
            return Err(Error::domain(format!(
                "need Λ > 0 and s >= 0, got Λ={lambda}, s={s}"
            )));
        }
        Ok(BetaFunction {
            geometry,
            kind: BetaKind::CmeraMagic { lambda, s },
            strategy: EvalStrategy::ClosedForm,
        })
    }

    pub fn qft(geometry: Geometry, m: f64) -> Result<Self> {
        if !(m >= 0.0) || !m.is_finite() {
            return Err(Error::domain(format!("mass must be >= 0, got {m}")));
        }
        Ok(BetaFunction {
            geometry,
            kind: BetaKind::Qft { m },
            strategy: EvalStrategy::ClosedForm,
        })
    }

    /// β at continuous momentum k.
    pub fn eval(&self, k: f64) -> Result<f64> {
        match (&self.kind, &self.strategy) {
            (BetaKind::CmeraMagic { lambda, s }, EvalStrategy::ClosedForm) => {
                beta_magic_closed(k, *lambda, *s)
            }
            (BetaKind::CmeraMagic { lambda, s }, EvalStrategy::OdeIntegrated(ctrl)) => {
                let profile =
                    EntanglingProfile::magic(Geometry::Line, *lambda, 0.0, Picture::Rescaled)?;
                beta_ode_integrate_profile(&profile, k, *s, ctrl)
            }
            (BetaKind::Qft { m }, _) => beta_qft(k, *m),
            (BetaKind::GenericQft { a_coeffs, b_coeffs }, _) => {
                beta_qft_generic(a_coeffs, b_coeffs, k).map(|(_, beta)| beta)
            }
        }
    }

    /// β at circle mode n.
    pub fn eval_mode(&self, n: i64) -> Result<f64> {
        let kn = momentum_of_mode(&self.geometry, n)?;
        self.eval(kn)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn closed_form_pinned_values() {
        // Any k at s = 0 collapses to Λ.
        for &k in &[0.0, 0.1, 5.0, 300.0] {
            assert!((beta_magic_closed(k, 2.0, 0.0).unwrap() - 2.0).abs() < 1e-12);
        }
        // Zero mode stays Λ forever.
        for &s in &[0.0, 1.0, 10.0] {
            assert_eq!(beta_magic_closed(0.0, 3.0, s).unwrap(), 3.0);
        }
        // Large s reproduces the QFT dispersion: k=3, Λ=1 -> √10.
        let v = beta_magic_closed(3.0, 1.0, 40.0).unwrap();
        assert!((v - 10.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn ode_zero_profile_is_constant() {
        let ctrl = OdeStepControl::default();
        let v = beta_ode_integrate(&|_s| 0.0, 2.5, 3.0, &ctrl).unwrap();
        assert!((v - 2.5).abs() < 1e-14);
    }

    #[test]
    fn ode_constant_profile_is_exponential() {
        let ctrl = OdeStepControl::default();
        let c = 0.17;
        let v = beta_ode_integrate(&|_s| c, 1.0, 2.0, &ctrl).unwrap();
        assert!((v - (-2.0 * c * 2.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn ode_matches_closed_form_for_magic_profile() {
        let ctrl = OdeStepControl::default();
        let profile =
            EntanglingProfile::magic(Geometry::Line, 1.0, 0.0, Picture::Rescaled).unwrap();
        let got = beta_ode_integrate_profile(&profile, 1.0, 2.0, &ctrl).unwrap();
        let want = beta_magic_closed(1.0, 1.0, 2.0).unwrap();
        assert!(
            ((got - want) / want).abs() < 1e-8,
            "ODE {got} vs closed {want}, rel {:.3e}",
            ((got - want) / want).abs()
        );
    }

    #[test]
    fn ode_stability_bound_reported() {
        let ctrl = OdeStepControl {
            step: 0.1,
            richardson_tol: 1e-8,
        };
        // |Δs·g̃| = 0.1·10 = 1 > 0.5.
        assert!(matches!(
            beta_ode_integrate(&|_s| 10.0, 1.0, 1.0, &ctrl),
            Err(Error::NonConvergence(_))
        ));
    }

    #[test]
    fn ode_residual_of_closed_form() {
        // Centered difference of the closed form reproduces -2 g̃ β̃ to
        // O(h²): relative residual < 1e-6 at h = 1e-5.
        let h = 1e-5;
        let lambda = 1.3;
        for &s in &[0.1, 0.5, 1.5, 3.0] {
            for &k in &[0.2, 1.0, 4.0, 10.0] {
                let plus = beta_magic_closed(k, lambda, s + h).unwrap();
                let minus = beta_magic_closed(k, lambda, s - h).unwrap();
                let lhs = (plus - minus) / (2.0 * h);
                let g = crate::profiles::magic_profile_momentum(k, lambda, s, Picture::Rescaled)
                    .unwrap();
                let rhs = -2.0 * g * beta_magic_closed(k, lambda, s).unwrap();
                let scale = rhs.abs().max(1e-12);
                assert!(
                    ((lhs - rhs) / scale).abs() < 1e-6,
                    "s={s}, k={k}: lhs {lhs} rhs {rhs}"
                );
            }
        }
    }

    #[test]
    fn circle_sampling_identity() {
        let geom = Geometry::circle(1.0).unwrap();
        // n = 0 stays Λ at every s.
        for &s in &[0.0, 1.0, 3.0] {
            assert_eq!(beta_circle(0, 2.0, s, &geom).unwrap(), 2.0);
        }
        // (n=1, l_c=1, Λ=2, s=1) equals the line closed form at k₁ = 2π.
        let v = beta_circle(1, 2.0, 1.0, &geom).unwrap();
        let want = beta_magic_closed(2.0 * std::f64::consts::PI, 2.0, 1.0).unwrap();
        assert_eq!(v, want);
    }

    #[test]
    fn circle_sampled_vs_ode_integrated() {
        // β̃_c(s,n) from the sampled closed form against the ODE driven by
        // the wrapped profile's discrete coefficient g̃_c(s,n) = g̃(s,k_n).
        let geom = Geometry::circle(1.0).unwrap();
        let ctrl = OdeStepControl::default();
        for n in -8..=8i64 {
            let kn = momentum_of_mode(&geom, n).unwrap();
            let g = |s: f64| {
                crate::profiles::magic_profile_momentum(kn, 2.0, s, Picture::Rescaled).unwrap()
            };
            let by_ode = beta_ode_integrate(&g, 2.0, 1.5, &ctrl).unwrap();
            let sampled = beta_circle(n, 2.0, 1.5, &geom).unwrap();
            assert!(
                ((by_ode - sampled) / sampled).abs() < 1e-8,
                "n={n}: ODE {by_ode} vs sampled {sampled}"
            );
        }
    }

    #[test]
    fn qft_dispersion() {
        assert_eq!(beta_qft(0.0, 2.0).unwrap(), 2.0);
        assert_eq!(beta_qft(3.0, 4.0).unwrap(), 5.0);
        assert_eq!(beta_qft(-7.0, 0.0).unwrap(), 7.0);
        assert!(beta_qft(1.0, -1.0).is_err());
    }

    #[test]
    fn generic_dispersion_reduces_to_relativistic_boson() {
        let m: f64 = 1.7;
        for &k in &[0.0, 0.3, 2.0, 50.0] {
            let (e, beta) = beta_qft_generic(&[1.0], &[m * m, 1.0], k).unwrap();
            let want = beta_qft(k, m).unwrap();
            // Same arithmetic path: bitwise equality.
            assert_eq!(beta.to_bits(), want.to_bits(), "k={k}");
            assert_eq!(e.to_bits(), want.to_bits());
        }
    }

    #[test]
    fn generic_dispersion_examples() {
        let (e, b) = beta_qft_generic(&[1.0], &[1.0], 0.0).unwrap();
        assert_eq!((e, b), (1.0, 1.0));
        // a=(1,1), b=(1,0,1) at k=1: P=2, Q=2 -> E=2, β=1.
        let (e, b) = beta_qft_generic(&[1.0, 1.0], &[1.0, 0.0, 1.0], 1.0).unwrap();
        assert!((e - 2.0).abs() < 1e-15);
        assert!((b - 1.0).abs() < 1e-15);
        // Non-positive-definite rejection.
        assert!(beta_qft_generic(&[-1.0], &[1.0], 1.0).is_err());
    }

    #[test]
    fn large_s_convergence_envelope() {
        // sup_k |β̃/β_QFT - 1| over k ∈ [0,K] obeys a C·(e^{-s}K/Λ)² bound;
        // fit C over two decades of s and check the quadratic law.
        let lambda = 1.0;
        let kmax = 10.0;
        // e^{-2s} spans two decades over s ∈ [2.5, 4.8], inside the
        // quadratic window e^{-s}K/Λ < 1.
        let mut cs = Vec::new();
        for i in 0..10 {
            let s = 2.5 + i as f64 * 0.2556;
            let mut sup: f64 = 0.0;
            for j in 0..=200 {
                let k = kmax * j as f64 / 200.0;
                let ratio = beta_magic_closed(k, lambda, s).unwrap() / beta_qft(k, lambda).unwrap();
                sup = sup.max((ratio - 1.0).abs());
            }
            let envelope = ((-s).exp() * kmax / lambda).powi(2);
            cs.push(sup / envelope);
        }
        // The fitted constant is stable (the law really is quadratic) and
        // of order 1/2.
        let cmax = cs.iter().cloned().fold(f64::MIN, f64::max);
        let cmin = cs.iter().cloned().fold(f64::MAX, f64::min);
        assert!(cmax <= 0.55, "C too large: {cmax}");
        assert!(cmin >= 0.3, "C too small: {cmin}");
        assert!(
            cmax / cmin < 2.0,
            "law not quadratic: C in [{cmin}, {cmax}]"
        );
    }

    proptest! {
        #[test]
        fn beta_positive_everywhere(
            k in -200.0f64..200.0, lambda in 0.1f64..10.0, s in 0.0f64..6.0
        ) {
            prop_assert!(beta_magic_closed(k, lambda, s).unwrap() > 0.0);
        }

        #[test]
        fn beta_initial_condition(k in -200.0f64..200.0, lambda in 0.1f64..10.0) {
            let v = beta_magic_closed(k, lambda, 0.0).unwrap();
            prop_assert!((v - lambda).abs() <= 1e-12 * lambda);
        }
    }
}
