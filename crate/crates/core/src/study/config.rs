//! Study configuration: a flat TOML table whose keys can be overridden one by
//! one (`key=value`).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{io_err, Error, Result};
use crate::flow::{MeshConfig, ViscousSettings};
use crate::profiles::ProfileConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StudyConfig {
    /// Norm exponent of the main study, in `(1, 2)`.
    pub p: f64,
    pub t_end: f64,
    /// Strictly decreasing viscosities.
    pub epsilons: Vec<f64>,
    pub preset: String,
    /// Profiles and errors are sampled at `t_end·k/store_intervals`.
    pub store_intervals: usize,
    pub fast_h: f64,
    pub fast_length: f64,
    pub slow_h: f64,
    pub slow_length_x: f64,
    pub slow_length_z: f64,
    pub box_dt: Option<f64>,
    pub box_input_samples: usize,
    pub monitor_samples: usize,
    pub mesh_length_x: f64,
    pub mesh_length_z: f64,
    pub mesh_coarse_h: f64,
    pub mesh_cells_per_layer: f64,
    pub mesh_layer_extent: f64,
    pub mesh_ratio: f64,
    pub dt: Option<f64>,
    pub cfl: f64,
    pub max_dt: f64,
    /// Refinement of the mesh z-axis for the `u` solve.
    pub u_refinement: usize,
    /// Exponent of the extra singular-term measurement (may be ≥ 2).
    pub singular_p: f64,
    pub out_dir: Option<String>,
}

impl Default for StudyConfig {
    fn default() -> Self {
        let pc = ProfileConfig::default();
        let mc = MeshConfig::default();
        let vs = ViscousSettings::default();
        Self {
            p: 1.5,
            t_end: 1.0,
            epsilons: vec![1e-2, 10f64.powf(-2.5), 1e-3, 10f64.powf(-3.5), 1e-4],
            preset: "gaussian-jump".into(),
            store_intervals: 10,
            fast_h: pc.fast_h,
            fast_length: pc.fast_length,
            slow_h: pc.slow_h,
            slow_length_x: pc.slow_length_x,
            slow_length_z: pc.slow_length_z,
            box_dt: None,
            box_input_samples: pc.box_input_samples,
            monitor_samples: pc.monitor_samples,
            mesh_length_x: mc.length_x,
            mesh_length_z: mc.length_z,
            mesh_coarse_h: mc.coarse_h,
            mesh_cells_per_layer: mc.cells_per_layer,
            mesh_layer_extent: mc.layer_extent,
            mesh_ratio: mc.ratio,
            dt: None,
            cfl: vs.cfl,
            max_dt: vs.max_dt,
            u_refinement: 16,
            singular_p: 2.0,
            out_dir: None,
        }
    }
}

impl StudyConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        Self::from_toml_with_overrides(text, &[])
    }

    /// Parses `text` and then applies `key=value` overrides (TOML values).
    pub fn from_toml_with_overrides(text: &str, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table = text.parse().map_err(|e| Error::Config(format!("config: {e}")))?;
        for o in overrides {
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("override '{o}' is not key=value")))?;
            let value: toml::Value = format!("v = {}", v.trim())
                .parse::<toml::Table>()
                .map(|mut t| t.remove("v").expect("parsed key"))
                .or_else(|_| Ok::<_, Error>(toml::Value::String(v.trim().to_string())))?;
            table.insert(k.trim().to_string(), value);
        }
        let cfg: Self = table.try_into().map_err(|e| Error::Config(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        Self::from_toml_with_overrides(&text, overrides)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Serde(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.p > 1.0 && self.p < 2.0) {
            return bad(format!("p = {} must lie in (1, 2)", self.p));
        }
        if !(self.singular_p > 1.0) || !self.singular_p.is_finite() {
            return bad(format!("singular_p = {} must exceed 1", self.singular_p));
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return bad(format!("t_end = {} must be positive", self.t_end));
        }
        if self.epsilons.iter().any(|e| !(*e > 0.0) || !e.is_finite()) {
            return bad("every epsilon must be positive".into());
        }
        if self.epsilons.windows(2).any(|w| w[1] >= w[0]) {
            return bad("epsilons must be distinct and decreasing".into());
        }
        if self.store_intervals == 0 || self.u_refinement == 0 {
            return bad("store_intervals and u_refinement must be positive".into());
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return bad(format!("cfl = {} must lie in (0, 1]", self.cfl));
        }
        Ok(())
    }

    pub fn store_times(&self) -> Vec<f64> {
        (0..=self.store_intervals)
            .map(|k| self.t_end * k as f64 / self.store_intervals as f64)
            .collect()
    }

    pub fn profile_config(&self) -> ProfileConfig {
        ProfileConfig {
            t_end: self.t_end,
            store_times: self.store_times(),
            fast_h: self.fast_h,
            fast_length: self.fast_length,
            slow_h: self.slow_h,
            slow_length_x: self.slow_length_x,
            slow_length_z: self.slow_length_z,
            box_length: None,
            box_dt: self.box_dt,
            box_input_samples: self.box_input_samples,
            monitor_samples: self.monitor_samples,
        }
    }

    pub fn mesh_config(&self) -> MeshConfig {
        MeshConfig {
            length_x: self.mesh_length_x,
            length_z: self.mesh_length_z,
            coarse_h: self.mesh_coarse_h,
            cells_per_layer: self.mesh_cells_per_layer,
            layer_extent: self.mesh_layer_extent,
            ratio: self.mesh_ratio,
        }
    }

    pub fn viscous_settings(&self) -> ViscousSettings {
        ViscousSettings {
            t_end: self.t_end,
            store_times: self.store_times(),
            dt: self.dt,
            cfl: self.cfl,
            max_dt: self.max_dt,
        }
    }
}
