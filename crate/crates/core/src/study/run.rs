//! The ε-sweep.

use std::sync::Arc;

use log::{info, warn};
use sha2::{Digest, Sha256};

use super::config::StudyConfig;
use super::presets::default_initial_data;
use super::report::{rate_fits, BoxDiagnostics, CaseMetrics, CaseOutcome, CaseReport, ConvergenceReport};
use crate::box_layer::{box_second_derivative_integrability, energy_monitor};
use crate::error::{Error, Result};
use crate::flow::{
    assemble_ansatz, assemble_u_app, euler_solution, physical_mesh, refine_axis, solve_depleted_ns_observed,
    viscous_initial,
};
use crate::numerics::{Field1D, LpIntegrable};
use crate::profiles::ProfileSet;
use crate::residuals::{residual_report, singular_term_norm};

/// Builds the profiles for `config`.
pub fn build_profiles(config: &StudyConfig) -> Result<ProfileSet> {
    config.validate()?;
    let data = default_initial_data(&config.preset)?;
    ProfileSet::build(&data, &config.profile_config())
}

/// Runs every viscosity in `config`; a failing case is recorded and the sweep
/// goes on.
pub fn run_convergence_study(config: &StudyConfig) -> Result<ConvergenceReport> {
    let profiles = build_profiles(config)?;
    run_convergence_study_with(config, &profiles)
}

/// Like [`run_convergence_study`] with prebuilt profiles.
pub fn run_convergence_study_with(config: &StudyConfig, profiles: &ProfileSet) -> Result<ConvergenceReport> {
    config.validate()?;
    let energy = energy_monitor(&profiles.box_layer, config.p)?;
    let box_layer = BoxDiagnostics {
        energy_constant: energy.constant,
        energy_constant_x: energy.constant_x,
        second_derivative_integral: box_second_derivative_integrability(&profiles.box_layer, config.p)?,
    };
    let mut cases = Vec::with_capacity(config.epsilons.len());
    for &eps in &config.epsilons {
        info!("case epsilon = {eps:e}");
        let outcome = match run_case(config, profiles, eps) {
            Ok(m) => CaseOutcome::Ok(Box::new(m)),
            Err(e) => {
                warn!("case epsilon = {eps:e} failed: {e}");
                CaseOutcome::Failed { message: e.to_string() }
            }
        };
        cases.push(CaseReport { epsilon: eps, outcome });
    }
    let errs: Vec<f64> = cases.iter().filter_map(|c| c.metrics().map(|m| m.err_v_lp)).collect();
    Ok(ConvergenceReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        config_digest: config_digest(config)?,
        profile_digest: profiles.digest().to_string(),
        box_layer,
        fits: rate_fits(&cases),
        cases,
        err_v_monotone: errs.windows(2).all(|w| w[1] < w[0]),
    })
}

/// SHA-256 of the canonical JSON form of the configuration.
pub fn config_digest(config: &StudyConfig) -> Result<String> {
    let json = serde_json::to_string(config).map_err(|e| Error::Serde(e.to_string()))?;
    let hash = Sha256::digest(json.as_bytes());
    Ok(hash.iter().map(|b| format!("{b:02x}")).collect())
}

/// One viscous solve with all its measurements.
pub fn run_case(config: &StudyConfig, profiles: &ProfileSet, epsilon: f64) -> Result<CaseMetrics> {
    let data = &profiles.data;
    let drift = -config.t_end * data.u0(0.0).f;
    let mesh = physical_mesh(&config.mesh_config(), epsilon, drift)?;
    let initial = viscous_initial(profiles, epsilon, &mesh, config.u_refinement)?;
    let settings = config.viscous_settings();
    let fine = Arc::new(refine_axis(&mesh.z, config.u_refinement)?);
    let u0 = data.u0_field(fine.clone());
    let v0 = euler_solution(data, &mesh);
    let p = config.p;

    let mut m = CaseMetrics {
        err_u_l2: 0.0,
        err_u_vs_ansatz_l2: 0.0,
        err_v_lp: 0.0,
        err_v_vs_ansatz_lp: 0.0,
        residual_integral: 0.0,
        eu_l2: 0.0,
        singular_norm: 0.0,
        singular_norm_extra: 0.0,
        u_app_wall: 0.0,
        v_app_wall: 0.0,
        v_app_jump: 0.0,
        v_app_xderiv_jump: 0.0,
        mesh_nx: mesh.nx(),
        mesh_nz: mesh.nz(),
        steps: 0,
        dt: 0.0,
        residuals: Default::default(),
    };
    let mut observer = |t: f64, u: &Field1D, v: &crate::numerics::TwoSidedField2D| -> Result<()> {
        let u_app = assemble_u_app(profiles, epsilon, t, fine.clone())?;
        m.err_u_l2 = m.err_u_l2.max(u.zip_with(&u0, |a, b| a - b)?.lp_norm(2.0)?);
        m.err_u_vs_ansatz_l2 = m.err_u_vs_ansatz_l2.max(u.zip_with(&u_app, |a, b| a - b)?.lp_norm(2.0)?);
        m.err_v_lp = m.err_v_lp.max(v.sub(&v0)?.lp_norm(p)?);
        if epsilon > 0.0 {
            let ans = assemble_ansatz(profiles, epsilon, t, &mesh)?;
            m.err_v_vs_ansatz_lp = m.err_v_vs_ansatz_lp.max(v.sub(&ans.v_app)?.lp_norm(p)?);
            m.u_app_wall = m.u_app_wall.max(ans.u_app.values[0].abs());
            let va = &ans.v_app;
            m.v_app_wall = m.v_app_wall.max(
                va.row(0)
                    .iter()
                    .chain([&va.left_trace[0], &va.right_trace[0]])
                    .fold(0.0_f64, |a, v| a.max(v.abs())),
            );
            m.v_app_jump = va.jump().iter().fold(m.v_app_jump, |a, v| a.max(v.abs()));
            m.v_app_xderiv_jump = va.xderiv_jump().iter().fold(m.v_app_xderiv_jump, |a, v| a.max(v.abs()));
        }
        Ok(())
    };
    let run = solve_depleted_ns_observed(&initial, data, epsilon, &settings, &mut observer)?;
    m.steps = run.steps;
    m.dt = run.dt;

    let rep = residual_report(profiles, epsilon, p, &mesh)?;
    m.residual_integral = rep.ev_integral;
    m.eu_l2 = rep.eu_l2.iter().fold(0.0_f64, |a, &v| a.max(v));
    m.singular_norm = rep.singular.iter().fold(0.0_f64, |a, &v| a.max(v));
    for &t in &profiles.store_times {
        m.singular_norm_extra = m.singular_norm_extra.max(singular_term_norm(profiles, epsilon, t, config.singular_p)?);
    }
    m.residuals = rep;
    if ![m.err_u_l2, m.err_v_lp, m.err_v_vs_ansatz_lp, m.residual_integral].iter().all(|v| v.is_finite()) {
        return Err(Error::Domain(format!("non-finite error norm at epsilon = {epsilon:e}")));
    }
    Ok(m)
}
