//! Run configurations.  A run is reproducible from its config alone; the
//! full config is echoed into every output header.

use cmera_core::correlators::Channel;
use cmera_core::geometry::Geometry;
use cmera_core::profiles::Picture;
use serde::{Deserialize, Serialize};

fn default_tolerance() -> f64 {
    1e-10
}

/// Entangling-profile block shared by several subcommands.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileSpec {
    /// Only the magic kernel is built in.
    pub profile: String,
    pub lambda: f64,
    pub s: f64,
    pub picture: Picture,
}

impl Default for ProfileSpec {
    fn default() -> Self {
        // Entangling-profile figure parameters: Λ = m = 2 on l_c = 1.
        ProfileSpec {
            profile: "magic".into(),
            lambda: 2.0,
            s: 0.0,
            picture: Picture::Rescaled,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ProfileConfig {
    pub profile: ProfileSpec,
    /// Scale parameters to tabulate; defaults to the profile's own s.
    pub s_list: Vec<f64>,
    pub lc: f64,
    pub x_points: usize,
    pub tolerance: f64,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        ProfileConfig {
            profile: ProfileSpec::default(),
            s_list: vec![0.0, 0.5, 1.0],
            lc: 1.0,
            x_points: 200,
            tolerance: default_tolerance(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct BetaConfig {
    pub lambda: f64,
    pub m: f64,
    pub s_list: Vec<f64>,
    pub k_max: f64,
    pub k_points: usize,
    pub lc: f64,
    pub n_max: u32,
    pub ode_step: f64,
    pub tolerance: f64,
}

impl Default for BetaConfig {
    fn default() -> Self {
        // Coefficient-figure parameters: m = Λ = 1.
        BetaConfig {
            lambda: 1.0,
            m: 1.0,
            s_list: vec![0.0, 0.5, 1.0, 2.0, 4.0],
            k_max: 10.0,
            k_points: 200,
            lc: 1.0,
            n_max: 8,
            ode_step: 1e-3,
            tolerance: default_tolerance(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct CorrelatorConfig {
    pub channels: Vec<Channel>,
    pub geometry: Geometry,
    pub m: f64,
    pub lambda: f64,
    pub s_list: Vec<f64>,
    pub x_min: f64,
    pub x_max: f64,
    pub x_points: usize,
    pub tolerance: f64,
}

impl Default for CorrelatorConfig {
    fn default() -> Self {
        // Line correlator figure parameters: m = Λ = 0.1.
        CorrelatorConfig {
            channels: vec![Channel::PhiPhi, Channel::PiPi],
            geometry: Geometry::Line,
            m: 0.1,
            lambda: 0.1,
            s_list: vec![2.5, 3.0, 3.5, 4.0],
            x_min: 0.5,
            x_max: 60.0,
            x_points: 48,
            tolerance: default_tolerance(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ImagesCheckConfig {
    pub lc_list: Vec<f64>,
    pub n_max: u32,
    pub quad_tol: f64,
    /// Magic-profile parameters for the profile member of the corpus.
    pub lambda: f64,
    pub s: f64,
    /// Which corpus members to run.
    pub functions: Vec<String>,
}

impl Default for ImagesCheckConfig {
    fn default() -> Self {
        ImagesCheckConfig {
            lc_list: vec![0.5, 1.0, 2.0],
            n_max: 8,
            quad_tol: 1e-10,
            lambda: 2.0,
            s: 0.0,
            functions: vec!["exponential".into(), "gaussian".into(), "magic".into()],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct ErrorScanConfig {
    pub channel: Channel,
    pub s_list: Vec<f64>,
    pub line_m: f64,
    pub line_x: f64,
    pub circle_m: f64,
    pub circle_lc: f64,
    pub circle_x: f64,
    pub tolerance: f64,
}

impl Default for ErrorScanConfig {
    fn default() -> Self {
        ErrorScanConfig {
            channel: Channel::PhiPhi,
            s_list: vec![2.0, 2.5, 3.0, 3.5],
            line_m: 0.1,
            line_x: 30.0,
            circle_m: 1.0,
            circle_lc: 1.0,
            circle_x: 0.5,
            tolerance: default_tolerance(),
        }
    }
}

/// Load a config from JSON, or fall back to the subcommand default.
pub fn load_config<T: Default + for<'de> Deserialize<'de>>(
    path: Option<&std::path::Path>,
) -> Result<T, String> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| format!("cannot read config {}: {e}", p.display()))?;
            serde_json::from_str(&text).map_err(|e| {
                format!(
                    "config {}: line {}, column {}: {e}",
                    p.display(),
                    e.line(),
                    e.column()
                )
            })
        }
    }
}
