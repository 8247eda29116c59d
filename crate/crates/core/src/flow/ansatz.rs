//! Assembly of `u_app = u0 + U_P(t, z/√ε)` and
//! `v_app = v0 + V_P(t, x, z/√ε) + V_KH(t, x/√ε, z) + V_b(t, x/√ε, z/√ε)` on a
//! physical mesh.
//!
//! `U_P`, `V_P` and `V_KH` are evaluated from their closed Duhamel forms at the
//! mesh points; `V_b` is interpolated from the corner solve. The traces at
//! `x = 0` are composed so that the jumps telescope term by term.

use std::sync::Arc;

use crate::box_layer::BoxLayerTrajectory;
use crate::error::{domain, Result};
use crate::numerics::remap::remap_two_sided;
use crate::flow::viscous::{refine_axis, ViscousInitial};
use crate::numerics::{Field1D, Grid1D, Grid2D, Side, TwoSidedField2D};
use crate::profiles::{vkh_block, vkh_interface_slope, wall_profile_at, ProfileSet};

/// The individual terms of the Ansatz on the mesh.
#[derive(Debug, Clone)]
pub struct AnsatzComponents {
    pub u0: Field1D,
    pub up: Field1D,
    pub v0: TwoSidedField2D,
    pub vp: TwoSidedField2D,
    pub vkh: TwoSidedField2D,
    pub vb: TwoSidedField2D,
    /// `Φ(t, z/√ε)` and `∂_ZΦ(t, z/√ε)` per mesh z-node.
    pub phi: Vec<f64>,
    pub dphi: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct AnsatzField {
    pub epsilon: f64,
    pub t: f64,
    pub u_app: Field1D,
    pub v_app: TwoSidedField2D,
    pub components: AnsatzComponents,
}

/// `w̃(t)` by linear interpolation between stored corner snapshots.
pub fn corner_state(traj: &BoxLayerTrajectory, t: f64) -> Result<TwoSidedField2D> {
    if let Some(k) = traj.index_of(t) {
        return Ok(traj.w[k].clone());
    }
    let ts = &traj.times;
    let k = match ts.windows(2).position(|w| w[0] <= t && t <= w[1]) {
        Some(k) => k,
        None => return domain(format!("time {t} outside the corner trajectory [{}, {}]", ts[0], ts[ts.len() - 1])),
    };
    let th = (t - ts[k]) / (ts[k + 1] - ts[k]);
    traj.w[k].axpby(1.0 - th, &traj.w[k + 1], th)
}

/// Assembles the Ansatz at time `t` on `mesh`.
pub fn assemble_ansatz(profiles: &ProfileSet, epsilon: f64, t: f64, mesh: &Arc<Grid2D>) -> Result<AnsatzField> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return domain(format!("viscosity must be positive, got {epsilon}"));
    }
    if !(0.0..=profiles.config.t_end * (1.0 + 1e-12)).contains(&t) {
        return domain(format!("time {t} outside [0, {}]", profiles.config.t_end));
    }
    let data = &profiles.data;
    let geometry = &profiles.geometry;
    let se = epsilon.sqrt();
    let (nx, nz, i0) = (mesh.nx(), mesh.nz(), mesh.interface());
    let xs = mesh.x.nodes();
    let zs = mesh.z.nodes();
    let zgrid = Arc::new(mesh.z.clone());

    let zf: Vec<f64> = zs.iter().map(|z| z / se).collect();
    let (mut phi, dphi) = wall_profile_at(t, &zf)?;
    if zs[0] == 0.0 {
        phi[0] = 1.0; // the wall value is imposed
    }

    let u0 = data.u0_field(zgrid.clone());
    let u_wall = data.u0(0.0).f;
    let up = Field1D::new(zgrid.clone(), phi.iter().map(|f| -u_wall * f).collect())?;
    let u_app = u0.zip_with(&up, |a, b| a + b)?;

    let v0 = data.v0_field(mesh.clone());

    let wall: Vec<(f64, f64)> = xs.iter().map(|&x| (data.v0_at(x, 0.0).f, data.v0_at(x, 0.0).fx)).collect();
    let wall_m = data.v0(Side::Minus, 0.0, 0.0);
    let wall_p = data.v0(Side::Plus, 0.0, 0.0);
    let mut vp = TwoSidedField2D::from_indexed(mesh.clone(), |side, ix, iz| {
        let c = if ix == i0 {
            match side {
                Side::Minus => wall_m.f,
                Side::Plus => wall_p.f,
            }
        } else {
            wall[ix].0
        };
        -c * phi[iz]
    });
    vp.left_xderiv_trace = phi.iter().map(|f| -wall_m.fx * f).collect();
    vp.right_xderiv_trace = phi.iter().map(|f| -wall_p.fx * f).collect();

    let xf: Vec<f64> = xs.iter().map(|x| x / se).collect();
    let block = vkh_block(data, geometry, t, &xf, zs)?;
    let slope = vkh_interface_slope(data, geometry, t, zs)?;
    let jumps: Vec<f64> = zs.iter().map(|&z| data.jump_v0(z)).collect();
    let mut vkh = TwoSidedField2D::from_indexed(mesh.clone(), |side, ix, iz| {
        if ix == i0 {
            -side.sign() * 0.5 * jumps[iz]
        } else {
            block[iz][ix]
        }
    });
    vkh.left_xderiv_trace = slope.iter().map(|s| s / se).collect();
    vkh.right_xderiv_trace = vkh.left_xderiv_trace.clone();

    let w = corner_state(&profiles.box_layer, t)?;
    let wm = remap_two_sided(&w, 1.0 / se, 1.0 / se, mesh);
    let c0 = data.corner_jump();
    let half_q: Vec<f64> = phi.iter().map(|f| -0.5 * c0 * f).collect();
    let mut vb = TwoSidedField2D::zeros(mesh.clone());
    for iz in 0..nz {
        for ix in 0..nx {
            if ix != i0 {
                let x = xs[ix];
                let k = iz * nx + ix;
                vb.values[k] = wm.values[k] - x.signum() * half_q[iz] * (-(x.abs() / se)).exp();
            }
        }
        vb.left_trace[iz] = wm.left_trace[iz] + half_q[iz];
        vb.right_trace[iz] = wm.right_trace[iz] - half_q[iz];
        vb.left_xderiv_trace[iz] = wm.left_xderiv_trace[iz] + half_q[iz] / se;
        vb.right_xderiv_trace[iz] = wm.right_xderiv_trace[iz] + half_q[iz] / se;
    }
    if zs[0] == 0.0 {
        // the wall row is the corner problem's Dirichlet data
        for ix in 0..nx {
            vb.values[ix] = -vkh.values[ix];
        }
        vb.left_trace[0] = -vkh.left_trace[0];
        vb.right_trace[0] = -vkh.right_trace[0];
        vb.left_xderiv_trace[0] = -vkh.left_xderiv_trace[0];
        vb.right_xderiv_trace[0] = -vkh.right_xderiv_trace[0];
    }
    vb.sync_interface();

    let mut v_app = v0.clone();
    v_app.add_scaled(1.0, &vp);
    v_app.add_scaled(1.0, &vkh);
    v_app.add_scaled(1.0, &vb);
    v_app.sync_interface();

    Ok(AnsatzField {
        epsilon,
        t,
        u_app,
        v_app,
        components: AnsatzComponents {
            u0,
            up,
            v0,
            vp,
            vkh,
            vb,
            phi,
            dphi,
        },
    })
}

/// `u_app(t) = u0 + U_P(t, z/√ε)` on an arbitrary z-grid; exactly zero at the
/// wall.
pub fn assemble_u_app(profiles: &ProfileSet, epsilon: f64, t: f64, grid_z: Arc<Grid1D>) -> Result<Field1D> {
    if !(epsilon > 0.0) {
        return domain(format!("viscosity must be positive, got {epsilon}"));
    }
    let se = epsilon.sqrt();
    let zf: Vec<f64> = grid_z.nodes().iter().map(|z| z / se).collect();
    let (phi, _) = wall_profile_at(t, &zf)?;
    let data = &profiles.data;
    let u_wall = data.u0(0.0).f;
    let values = grid_z
        .nodes()
        .iter()
        .zip(&phi)
        .map(|(&z, f)| if z == 0.0 { 0.0 } else { data.u0(z).f - u_wall * f })
        .collect();
    Field1D::new(grid_z, values)
}

/// Initial state of the viscous solve: the Ansatz at `t = 0`, with `u` on the
/// mesh z-axis refined `u_stride` times.
pub fn viscous_initial(profiles: &ProfileSet, epsilon: f64, mesh: &Arc<Grid2D>, u_stride: usize) -> Result<ViscousInitial> {
    let ansatz = assemble_ansatz(profiles, epsilon, 0.0, mesh)?;
    let fine = Arc::new(refine_axis(&mesh.z, u_stride)?);
    let u = assemble_u_app(profiles, epsilon, 0.0, fine)?;
    Ok(ViscousInitial {
        u,
        u_stride,
        v: ansatz.v_app,
    })
}
