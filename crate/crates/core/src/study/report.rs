//! Convergence report and its CSV/JSON forms.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::StudyConfig;
use crate::error::{io_err, Error, Result};
use crate::numerics::{fit_loglog_rate, LogLogFit};
use crate::residuals::ResidualReport;

/// Fits with `r²` below this are flagged and their slope is not reported as a rate.
pub const R2_THRESHOLD: f64 = 0.98;

/// Column header of the CSV export.
pub const CSV_HEADER: &str = "epsilon,err_u_L2,err_v_Lp,err_v_vs_ansatz_Lp,residual_integral,singular_norm";

/// Measurements for one viscosity. All norms are suprema over the store times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseMetrics {
    /// `sup ‖u^ε − u0‖_{L²}`.
    pub err_u_l2: f64,
    /// `sup ‖u^ε − u_app‖_{L²}`.
    pub err_u_vs_ansatz_l2: f64,
    /// `sup ‖v^ε − v⁰‖_{L^p}`.
    pub err_v_lp: f64,
    /// `sup ‖v^ε − v_app‖_{L^p}`.
    pub err_v_vs_ansatz_lp: f64,
    /// `∫₀^T ‖E^v‖_p^p dt`.
    pub residual_integral: f64,
    /// `sup ‖E^u‖_{L²}`.
    pub eu_l2: f64,
    /// `sup ‖ε^{-1/2} U_P ∂_X V_KH‖_{L^p}`.
    pub singular_norm: f64,
    /// The same at the extra exponent `singular_p`.
    pub singular_norm_extra: f64,
    /// Compatibility of the Ansatz, maxima over store times.
    pub u_app_wall: f64,
    pub v_app_wall: f64,
    pub v_app_jump: f64,
    pub v_app_xderiv_jump: f64,
    pub mesh_nx: usize,
    pub mesh_nz: usize,
    pub steps: usize,
    pub dt: f64,
    pub residuals: ResidualReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CaseOutcome {
    Ok(Box<CaseMetrics>),
    Failed { message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub epsilon: f64,
    pub outcome: CaseOutcome,
}

impl CaseReport {
    pub fn metrics(&self) -> Option<&CaseMetrics> {
        match &self.outcome {
            CaseOutcome::Ok(m) => Some(m),
            CaseOutcome::Failed { .. } => None,
        }
    }
}

/// A log-log rate over the successful cases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub quantity: String,
    pub fit: Option<LogLogFit>,
    /// `r² ≥ R2_THRESHOLD`.
    pub reliable: bool,
    pub note: String,
}

/// Box-layer diagnostics shared by all cases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDiagnostics {
    pub energy_constant: f64,
    pub energy_constant_x: f64,
    /// `∫₀^T ‖∂_X² V_b‖_p^p dt`.
    pub second_derivative_integral: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub version: String,
    pub config: StudyConfig,
    pub config_digest: String,
    pub profile_digest: String,
    pub box_layer: BoxDiagnostics,
    pub cases: Vec<CaseReport>,
    pub fits: Vec<RateFit>,
    /// `sup ‖v^ε − v⁰‖` decreases as ε decreases over the successful cases.
    pub err_v_monotone: bool,
}

/// Quantities that get a rate fit, with their accessor.
pub const FITTED: [(&str, fn(&CaseMetrics) -> f64); 8] = [
    ("err_u_L2", |m| m.err_u_l2),
    ("err_u_vs_ansatz_L2", |m| m.err_u_vs_ansatz_l2),
    ("err_v_Lp", |m| m.err_v_lp),
    ("err_v_vs_ansatz_Lp", |m| m.err_v_vs_ansatz_lp),
    ("residual_integral", |m| m.residual_integral),
    ("eu_L2", |m| m.eu_l2),
    ("singular_norm", |m| m.singular_norm),
    ("singular_norm_extra", |m| m.singular_norm_extra),
];

pub fn rate_fits(cases: &[CaseReport]) -> Vec<RateFit> {
    FITTED
        .iter()
        .map(|(name, get)| {
            let pairs: Vec<(f64, f64)> = cases
                .iter()
                .filter_map(|c| c.metrics().map(|m| (c.epsilon, get(m))))
                .collect();
            match fit_loglog_rate(&pairs) {
                Ok(fit) => {
                    let reliable = fit.r_squared >= R2_THRESHOLD;
                    let note = if reliable {
                        String::new()
                    } else {
                        format!("r² = {:.4} below {R2_THRESHOLD}: slope not a reliable rate", fit.r_squared)
                    };
                    RateFit {
                        quantity: name.to_string(),
                        fit: Some(fit),
                        reliable,
                        note,
                    }
                }
                Err(e) => RateFit {
                    quantity: name.to_string(),
                    fit: None,
                    reliable: false,
                    note: e.to_string(),
                },
            }
        })
        .collect()
}

impl ConvergenceReport {
    pub fn fit(&self, quantity: &str) -> Option<&RateFit> {
        self.fits.iter().find(|f| f.quantity == quantity)
    }

    /// One row per case; failed cases carry `NaN`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from(CSV_HEADER);
        s.push('\n');
        for c in &self.cases {
            let row = match c.metrics() {
                Some(m) => [m.err_u_l2, m.err_v_lp, m.err_v_vs_ansatz_lp, m.residual_integral, m.singular_norm],
                None => [f64::NAN; 5],
            };
            let _ = write!(s, "{:e}", c.epsilon);
            for v in row {
                let _ = write!(s, ",{v:e}");
            }
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serde(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Serde(e.to_string()))
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(io_err(path))
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(io_err(path))
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        Self::from_json(&text)
    }

    /// Human-readable summary.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "preset {}  p = {}  T = {}", self.config.preset, self.config.p, self.config.t_end);
        let _ = writeln!(s, "profile digest {}", self.profile_digest);
        let _ = writeln!(
            s,
            "{:>10} {:>11} {:>11} {:>11} {:>11} {:>11} {:>11}",
            "epsilon", "u-u0", "u-u_app", "v-v0", "v-v_app", "int|Ev|^p", "singular"
        );
        for c in &self.cases {
            match c.metrics() {
                Some(m) => {
                    let _ = writeln!(
                        s,
                        "{:>10.3e} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e}",
                        c.epsilon,
                        m.err_u_l2,
                        m.err_u_vs_ansatz_l2,
                        m.err_v_lp,
                        m.err_v_vs_ansatz_lp,
                        m.residual_integral,
                        m.singular_norm
                    );
                }
                None => {
                    if let CaseOutcome::Failed { message } = &c.outcome {
                        let _ = writeln!(s, "{:>10.3e} FAILED: {message}", c.epsilon);
                    }
                }
            }
        }
        for f in &self.fits {
            match &f.fit {
                Some(fit) if f.reliable => {
                    let _ = writeln!(s, "rate {:<22} slope {:+.4}  r² {:.4}", f.quantity, fit.slope, fit.r_squared);
                }
                Some(fit) => {
                    let _ = writeln!(
                        s,
                        "rate {:<22} FLAGGED (r² {:.4}, raw slope {:+.4})",
                        f.quantity, fit.r_squared, fit.slope
                    );
                }
                None => {
                    let _ = writeln!(s, "rate {:<22} unavailable: {}", f.quantity, f.note);
                }
            }
        }
        s
    }
}
