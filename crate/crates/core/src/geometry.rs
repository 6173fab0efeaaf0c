//! Spatial domains and their momentum spaces.
//!
//! Everything downstream — profiles, beta coefficients, correlators — is
//! parameterized by a [`Geometry`] value.  Natural units ħ = c = 1
//! throughout; lengths and momenta are plain `f64`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Boundary condition for the half-line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Neumann,
    Dirichlet,
}

/// The spatial domain.  The torus is restricted to two cycles; the
/// N-dimensional image sums factor per axis in exactly the same way.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    Line,
    Circle { lc: f64 },
    Torus { l1: f64, l2: f64 },
    HalfLine { bc: BoundaryCondition },
}

impl Geometry {
    pub fn line() -> Self {
        Geometry::Line
    }

    pub fn circle(lc: f64) -> Result<Self> {
        let g = Geometry::Circle { lc };
        g.validate()?;
        Ok(g)
    }

    pub fn torus(l1: f64, l2: f64) -> Result<Self> {
        let g = Geometry::Torus { l1, l2 };
        g.validate()?;
        Ok(g)
    }

    pub fn half_line(bc: BoundaryCondition) -> Self {
        Geometry::HalfLine { bc }
    }

    /// All lengths strictly positive and finite.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Geometry::Line | Geometry::HalfLine { .. } => Ok(()),
            Geometry::Circle { lc } => {
                if lc > 0.0 && lc.is_finite() {
                    Ok(())
                } else {
                    Err(Error::domain(format!(
                        "circle length must be positive and finite, got {lc}"
                    )))
                }
            }
            Geometry::Torus { l1, l2 } => {
                if l1 > 0.0 && l1.is_finite() && l2 > 0.0 && l2.is_finite() {
                    Ok(())
                } else {
                    Err(Error::domain(format!(
                        "torus cycle lengths must be positive and finite, got ({l1}, {l2})"
                    )))
                }
            }
        }
    }

    pub fn is_compact(&self) -> bool {
        matches!(self, Geometry::Circle { .. } | Geometry::Torus { .. })
    }
}

/// Momentum of the n-th Fourier mode, k_n = 2πn/l_c.
///
/// Defined for a circle only; torus axes go through
/// [`torus_momentum_of_mode`].
pub fn momentum_of_mode(geom: &Geometry, n: i64) -> Result<f64> {
    match *geom {
        Geometry::Circle { lc } => {
            geom.validate()?;
            Ok(2.0 * PI * n as f64 / lc)
        }
        _ => Err(Error::domain(
            "momentum_of_mode is defined on the circle; use torus_momentum_of_mode per axis",
        )),
    }
}

/// Per-axis momenta (k_{n1}, k_{n2}) = (2πn₁/l₁, 2πn₂/l₂) on the torus.
pub fn torus_momentum_of_mode(geom: &Geometry, n1: i64, n2: i64) -> Result<(f64, f64)> {
    match *geom {
        Geometry::Torus { l1, l2 } => {
            geom.validate()?;
            Ok((2.0 * PI * n1 as f64 / l1, 2.0 * PI * n2 as f64 / l2))
        }
        _ => Err(Error::domain("torus_momentum_of_mode needs a torus")),
    }
}

/// Symmetric mode enumeration [-n_max, n_max] for the circle.
pub fn mode_range(geom: &Geometry, n_max: u32) -> Result<Vec<i64>> {
    match geom {
        Geometry::Circle { .. } => {
            let n = n_max as i64;
            Ok((-n..=n).collect())
        }
        _ => Err(Error::domain("mode_range is defined on the circle")),
    }
}

/// Cartesian product of per-axis mode ranges on the torus.
pub fn mode_range_2d(geom: &Geometry, n_max: u32) -> Result<Vec<(i64, i64)>> {
    match geom {
        Geometry::Torus { .. } => {
            let n = n_max as i64;
            let mut out = Vec::with_capacity(((2 * n + 1) * (2 * n + 1)) as usize);
            for i in -n..=n {
                for j in -n..=n {
                    out.push((i, j));
                }
            }
            Ok(out)
        }
        _ => Err(Error::domain("mode_range_2d needs a torus")),
    }
}

/// How a continuum grid treats momenta beyond its cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SpacingRule {
    /// Plain uniform sampling; anything beyond k_max is ignored.
    #[default]
    Uniform,
    /// Uniform sampling on [-k_max, k_max] with the understanding that the
    /// consumer substitutes the integrand's analytic tail beyond the
    /// cutoff (the real-space transforms do exactly this).
    TailSubstituted,
}

/// Momentum discretization used by grids and table generators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "grid", rename_all = "snake_case")]
pub enum MomentumGrid {
    /// Symmetric grid on [-k_max, k_max] for the line/half-line.
    Continuum {
        k_max: f64,
        n_points: usize,
        #[serde(default)]
        spacing: SpacingRule,
    },
    /// Mode truncation |n| ≤ n_max for the circle/torus.
    Modes { n_max: u32 },
}

impl MomentumGrid {
    pub fn validate(&self) -> Result<()> {
        match *self {
            MomentumGrid::Continuum {
                k_max, n_points, ..
            } => {
                if !(k_max > 0.0) || !k_max.is_finite() {
                    return Err(Error::domain(format!(
                        "k_max must be positive, got {k_max}"
                    )));
                }
                if n_points < 16 || n_points % 2 != 0 {
                    return Err(Error::domain(format!(
                        "n_points must be an even integer >= 16, got {n_points}"
                    )));
                }
                Ok(())
            }
            MomentumGrid::Modes { n_max } => {
                if n_max < 1 {
                    return Err(Error::domain("n_max must be >= 1"));
                }
                Ok(())
            }
        }
    }

    /// Sampled momenta: symmetric about k = 0 for the continuum variant.
    pub fn momenta(&self, geom: &Geometry) -> Result<Vec<f64>> {
        self.validate()?;
        match *self {
            MomentumGrid::Continuum {
                k_max, n_points, ..
            } => {
                let n = n_points as i64;
                let step = 2.0 * k_max / n as f64;
                Ok((0..=n).map(|i| -k_max + i as f64 * step).collect())
            }
            MomentumGrid::Modes { n_max } => {
                let modes = mode_range(geom, n_max)?;
                modes.iter().map(|&n| momentum_of_mode(geom, n)).collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn circle_modes() {
        let g = Geometry::circle(1.0).unwrap();
        assert_eq!(momentum_of_mode(&g, 0).unwrap(), 0.0);
        assert!((momentum_of_mode(&g, 1).unwrap() - std::f64::consts::TAU).abs() < 1e-12);
        let g2 = Geometry::circle(2.0).unwrap();
        assert!((momentum_of_mode(&g2, -3).unwrap() - (-9.42477796076938)).abs() < 1e-12);
    }

    #[test]
    fn mode_range_shapes() {
        let g = Geometry::circle(1.0).unwrap();
        assert_eq!(mode_range(&g, 1).unwrap(), vec![-1, 0, 1]);
        let r = mode_range(&g, 3).unwrap();
        assert_eq!(r.len(), 7);
        assert!(r.contains(&0));
        let t = Geometry::torus(1.0, 1.0).unwrap();
        assert_eq!(mode_range_2d(&t, 2).unwrap().len(), 25);
    }

    #[test]
    fn wrong_geometry_is_rejected() {
        assert!(momentum_of_mode(&Geometry::Line, 1).is_err());
        assert!(mode_range(&Geometry::Line, 1).is_err());
        assert!(Geometry::circle(0.0).is_err());
        assert!(Geometry::torus(1.0, -1.0).is_err());
    }

    #[test]
    fn continuum_grid_is_symmetric() {
        let grid = MomentumGrid::Continuum {
            k_max: 5.0,
            n_points: 16,
            spacing: SpacingRule::Uniform,
        };
        let ks = grid.momenta(&Geometry::Line).unwrap();
        for (a, b) in ks.iter().zip(ks.iter().rev()) {
            assert!((a + b).abs() < 1e-12);
        }
        assert!(MomentumGrid::Continuum {
            k_max: 5.0,
            n_points: 7,
            spacing: SpacingRule::TailSubstituted
        }
        .validate()
        .is_err());
    }

    #[test]
    fn geometry_from_json() {
        let g: Geometry = serde_json::from_str(r#"{"kind":"circle","lc":1.0}"#).unwrap();
        assert_eq!(g, Geometry::Circle { lc: 1.0 });
        let g: Geometry = serde_json::from_str(r#"{"kind":"half_line","bc":"neumann"}"#).unwrap();
        assert_eq!(
            g,
            Geometry::HalfLine {
                bc: BoundaryCondition::Neumann
            }
        );
    }

    proptest! {
        #[test]
        fn momentum_is_odd_in_n(n in -1000i64..1000, lc in 0.1f64..100.0) {
            let g = Geometry::circle(lc).unwrap();
            let plus = momentum_of_mode(&g, n).unwrap();
            let minus = momentum_of_mode(&g, -n).unwrap();
            prop_assert_eq!(plus, -minus);
        }

        #[test]
        fn mode_range_odd_cardinality(n_max in 1u32..200) {
            let g = Geometry::circle(1.0).unwrap();
            let r = mode_range(&g, n_max).unwrap();
            prop_assert_eq!(r.len() % 2, 1);
            prop_assert!(r.contains(&0));
        }
    }
}
