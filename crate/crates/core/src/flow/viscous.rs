//! Direct solve of the depleted system in straightened coordinates:
//!
//! ```text
//! ∂_t u = ε∂_z²u,                     u|_{z=0} = 0
//! ∂_t v + (u − u0)∂_x v = εΔ^ψ v,     v|_{z=0} = 0
//! ```
//!
//! `u` lives on a refinement of the mesh z-axis and is advanced by
//! Crank–Nicolson (backward-Euler startup). `v` uses a split step per `dt`,
//! with coefficients frozen at the half step: explicit `ε(−2ψ_z∂_xz − ψ_zz∂_x)`,
//! an implicit z-sweep for `ε∂_z²`, then an implicit x-sweep for
//! `ε(1+ψ_z²)∂_x² − (u − u0)∂_x`. The far-field values are held at their
//! initial values.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::data::{InitialData, InterfaceGeometry};
use crate::error::{domain, Error, Result};
use crate::numerics::fd::fornberg;
use crate::numerics::tridiag::solve_tridiagonal;
use crate::numerics::{Field1D, Grid1D, Grid2D, TwoSidedField2D};
use crate::profiles::normalize_store_times;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViscousSettings {
    pub t_end: f64,
    pub store_times: Vec<f64>,
    /// Fixed step; when absent it follows from `cfl` and `max_dt`.
    pub dt: Option<f64>,
    /// Target advective Courant number for the automatic step.
    pub cfl: f64,
    pub max_dt: f64,
}

impl Default for ViscousSettings {
    fn default() -> Self {
        Self {
            t_end: 1.0,
            store_times: (0..=10).map(|k| k as f64 / 10.0).collect(),
            dt: None,
            cfl: 0.9,
            max_dt: 0.005,
        }
    }
}

/// Initial state: `u` on a refinement of the mesh z-axis (every
/// `u_stride`-th node is a mesh node) and `v` on the mesh.
#[derive(Debug, Clone)]
pub struct ViscousInitial {
    pub u: Field1D,
    pub u_stride: usize,
    pub v: TwoSidedField2D,
}

/// Splits every cell of `grid` into `r` equal parts.
pub fn refine_axis(grid: &Grid1D, r: usize) -> Result<Grid1D> {
    if r == 0 {
        return Err(Error::Grid("refinement factor must be positive".into()));
    }
    let xs = grid.nodes();
    let mut nodes = Vec::with_capacity((xs.len() - 1) * r + 1);
    for w in xs.windows(2) {
        for k in 0..r {
            nodes.push(w[0] + (w[1] - w[0]) * k as f64 / r as f64);
        }
    }
    nodes.push(xs[xs.len() - 1]);
    Grid1D::from_nodes(nodes)
}

/// Stored solution snapshots.
#[derive(Debug, Clone)]
pub struct TrajectoryField {
    pub epsilon: f64,
    pub store_times: Vec<f64>,
    /// `u^ε` on the refined z-axis.
    pub u: Vec<Field1D>,
    pub v: Vec<TwoSidedField2D>,
}

/// Step statistics of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ViscousRun {
    pub steps: usize,
    pub dt: f64,
}

/// Solves and stores every snapshot.
pub fn solve_depleted_ns(
    initial: &ViscousInitial,
    data: &InitialData,
    epsilon: f64,
    settings: &ViscousSettings,
) -> Result<TrajectoryField> {
    let mut traj = TrajectoryField {
        epsilon,
        store_times: Vec::new(),
        u: Vec::new(),
        v: Vec::new(),
    };
    solve_depleted_ns_observed(initial, data, epsilon, settings, &mut |t, u, v| {
        traj.store_times.push(t);
        traj.u.push(u.clone());
        traj.v.push(v.clone());
        Ok(())
    })?;
    Ok(traj)
}

/// Automatic step for a given initial state.
pub fn viscous_dt(initial: &ViscousInitial, data: &InitialData, settings: &ViscousSettings) -> f64 {
    let umax = max_drift(&initial.u, data);
    let hx = initial.v.grid.x.min_spacing();
    let cap = settings.max_dt.min(settings.t_end);
    if umax > 0.0 {
        (settings.cfl * hx / umax).min(cap)
    } else {
        cap
    }
}

fn max_drift(u: &Field1D, data: &InitialData) -> f64 {
    u.grid
        .nodes()
        .iter()
        .zip(&u.values)
        .fold(0.0_f64, |m, (&z, &v)| m.max((v - data.u0(z).f).abs()))
}

/// Solves and hands each stored snapshot `(t, u, v)` to `observer`.
pub fn solve_depleted_ns_observed(
    initial: &ViscousInitial,
    data: &InitialData,
    epsilon: f64,
    settings: &ViscousSettings,
    observer: &mut dyn FnMut(f64, &Field1D, &TwoSidedField2D) -> Result<()>,
) -> Result<ViscousRun> {
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return domain(format!("viscosity must be nonnegative, got {epsilon}"));
    }
    let mesh = initial.v.grid.clone();
    let r = initial.u_stride;
    let ug = initial.u.grid.clone();
    if r == 0 || ug.len() != (mesh.nz() - 1) * r + 1 {
        return Err(Error::Grid("u grid is not a refinement of the mesh z-axis".into()));
    }
    for (j, &z) in mesh.z.nodes().iter().enumerate() {
        if (ug.node(j * r) - z).abs() > 1e-12 * (1.0 + z.abs()) {
            return Err(Error::Grid(format!("u grid misses mesh node z = {z}")));
        }
    }
    if mesh.z.origin() != 0.0 {
        return Err(Error::Grid("the mesh must start at the wall z = 0".into()));
    }
    let times = normalize_store_times(&settings.store_times, settings.t_end)?;
    let hx = mesh.x.min_spacing();
    let umax = max_drift(&initial.u, data);
    let dt = match settings.dt {
        Some(dt) => {
            if !(dt > 0.0) {
                return domain(format!("time step must be positive, got {dt}"));
            }
            if umax * dt / hx > 1.0 {
                return Err(Error::Cfl {
                    guard: "advective",
                    dt,
                    suggested: settings.cfl * hx / umax,
                });
            }
            dt
        }
        None => viscous_dt(initial, data, settings),
    };

    let geometry = InterfaceGeometry::from_data(data);
    let mut st = State::new(initial, data, epsilon, geometry)?;
    let mut steps = 0usize;
    let mut t = 0.0;
    for &target in &times {
        let span = target - t;
        if span > 0.0 {
            let n = (span / dt * (1.0 - 1e-12)).ceil().max(1.0) as usize;
            let h = span / n as f64;
            st.prepare(h);
            for k in 0..n {
                let t0 = t + k as f64 * h;
                st.step(t0, h, steps == 0, hx)?;
                steps += 1;
            }
        }
        t = target;
        let v = TwoSidedField2D::from_continuous(mesh.clone(), st.v.clone())?;
        let u = Field1D::new(ug.clone(), st.u.clone())?;
        observer(t, &u, &v)?;
    }
    Ok(ViscousRun { steps, dt })
}

/// Three-point weights `(w_{-1}, w_0, w_{+1})` for interior nodes.
fn interior_weights(xs: &[f64], order: usize) -> Vec<[f64; 3]> {
    let mut w = vec![[0.0; 3]; xs.len()];
    for i in 1..xs.len() - 1 {
        let c = fornberg(xs[i], &xs[i - 1..=i + 1], order);
        w[i] = [c[order][0], c[order][1], c[order][2]];
    }
    w
}

struct State {
    mesh: Arc<Grid2D>,
    epsilon: f64,
    geometry: InterfaceGeometry,
    u: Vec<f64>,
    u0_mesh: Vec<f64>,
    stride: usize,
    v: Vec<f64>,
    far_left: Vec<f64>,
    far_right: Vec<f64>,
    far_top: Vec<f64>,
    dx: Vec<[f64; 3]>,
    dxx: Vec<[f64; 3]>,
    dz: Vec<[f64; 3]>,
    dzz: Vec<[f64; 3]>,
    uzz: Vec<[f64; 3]>,
    // z-sweep factors for the current step length
    zc: Vec<f64>,
    zinv: Vec<f64>,
    zl: Vec<f64>,
    scratch: Vec<f64>,
    work: Vec<f64>,
}

impl State {
    fn new(initial: &ViscousInitial, data: &InitialData, epsilon: f64, geometry: InterfaceGeometry) -> Result<Self> {
        let mesh = initial.v.grid.clone();
        let (nx, nz) = (mesh.nx(), mesh.nz());
        if nx < 3 || nz < 3 {
            return Err(Error::Grid("mesh too small".into()));
        }
        let v = initial.v.values.clone();
        let u0_mesh: Vec<f64> = mesh.z.nodes().iter().map(|&z| data.u0(z).f).collect();
        let mut u = initial.u.values.clone();
        u[0] = 0.0;
        Ok(Self {
            epsilon,
            geometry,
            far_left: (0..nz).map(|iz| v[iz * nx]).collect(),
            far_right: (0..nz).map(|iz| v[iz * nx + nx - 1]).collect(),
            far_top: v[(nz - 1) * nx..].to_vec(),
            dx: interior_weights(mesh.x.nodes(), 1),
            dxx: interior_weights(mesh.x.nodes(), 2),
            dz: interior_weights(mesh.z.nodes(), 1),
            dzz: interior_weights(mesh.z.nodes(), 2),
            uzz: interior_weights(initial.u.grid.nodes(), 2),
            zc: vec![0.0; nz],
            zinv: vec![0.0; nz],
            zl: vec![0.0; nz],
            scratch: vec![0.0; nx.max(u.len())],
            work: vec![0.0; nx * nz],
            stride: initial.u_stride,
            u,
            u0_mesh,
            v,
            mesh,
        })
    }

    /// Factorizes the z-sweep `I − hε∂_z²` (identity rows at both ends).
    fn prepare(&mut self, h: f64) {
        let nz = self.mesh.nz();
        let e = h * self.epsilon;
        self.zc[0] = 0.0;
        self.zinv[0] = 1.0;
        self.zl[0] = 0.0;
        for iz in 1..nz {
            let (l, d, u) = if iz == nz - 1 {
                (0.0, 1.0, 0.0)
            } else {
                let w = self.dzz[iz];
                (-e * w[0], 1.0 - e * w[1], -e * w[2])
            };
            let den = d - l * self.zc[iz - 1];
            self.zl[iz] = l;
            self.zinv[iz] = 1.0 / den;
            self.zc[iz] = u / den;
        }
    }

    /// Advances `u` by `h` with Crank–Nicolson, or backward Euler if `euler`.
    fn advance_u(&mut self, h: f64, euler: bool) {
        let n = self.u.len();
        let m = n - 2;
        let theta = if euler { 1.0 } else { 0.5 };
        let e = h * self.epsilon;
        let (mut lo, mut di, mut up, mut rhs) = (vec![0.0; m], vec![0.0; m], vec![0.0; m], vec![0.0; m]);
        for k in 0..m {
            let i = k + 1;
            let w = self.uzz[i];
            lo[k] = -theta * e * w[0];
            di[k] = 1.0 - theta * e * w[1];
            up[k] = -theta * e * w[2];
            let lap = w[0] * self.u[i - 1] + w[1] * self.u[i] + w[2] * self.u[i + 1];
            rhs[k] = self.u[i] + (1.0 - theta) * e * lap;
        }
        rhs[0] -= lo[0] * self.u[0];
        rhs[m - 1] -= up[m - 1] * self.u[n - 1];
        solve_tridiagonal(&lo, &di, &up, &mut rhs, &mut self.scratch[..m]);
        self.u[1..n - 1].copy_from_slice(&rhs);
    }

    fn step(&mut self, t: f64, h: f64, first: bool, hx: f64) -> Result<()> {
        if first {
            for _ in 0..2 {
                self.advance_u(0.25 * h, true);
            }
        } else {
            self.advance_u(0.5 * h, false);
        }
        let th = t + 0.5 * h;
        let nz = self.mesh.nz();
        let zs = self.mesh.z.nodes();
        let drift: Vec<f64> = (0..nz).map(|j| self.u[j * self.stride] - self.u0_mesh[j]).collect();
        let umax = drift.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
        if umax * h / hx > 1.0 + 1e-9 {
            return Err(Error::Cfl {
                guard: "advective",
                dt: h,
                suggested: hx / umax,
            });
        }
        let a: Vec<f64> = zs.iter().map(|&z| self.geometry.psi_z(th, z)).collect();
        let b: Vec<f64> = zs.iter().map(|&z| self.geometry.psi_zz(th, z)).collect();
        self.explicit_part(h, &a, &b);
        self.z_sweep();
        self.x_sweep(h, &a, &drift);
        if first {
            for _ in 0..2 {
                self.advance_u(0.25 * h, true);
            }
        } else {
            self.advance_u(0.5 * h, false);
        }
        Ok(())
    }

    /// `v += hε(−2a∂_xz v − b∂_x v)` at interior nodes.
    fn explicit_part(&mut self, h: f64, a: &[f64], b: &[f64]) {
        let (nx, nz) = (self.mesh.nx(), self.mesh.nz());
        if self.epsilon == 0.0 || (a.iter().all(|&v| v == 0.0) && b.iter().all(|&v| v == 0.0)) {
            return;
        }
        let v = &self.v;
        let dxv = &mut self.work;
        for iz in 0..nz {
            let row = &v[iz * nx..(iz + 1) * nx];
            let out = &mut dxv[iz * nx..(iz + 1) * nx];
            out[0] = 0.0;
            out[nx - 1] = 0.0;
            for ix in 1..nx - 1 {
                let w = self.dx[ix];
                out[ix] = w[0] * row[ix - 1] + w[1] * row[ix] + w[2] * row[ix + 1];
            }
        }
        let e = h * self.epsilon;
        for iz in 1..nz - 1 {
            let w = self.dz[iz];
            let (ca, cb) = (-2.0 * e * a[iz], -e * b[iz]);
            for ix in 1..nx - 1 {
                let dxz = w[0] * dxv[(iz - 1) * nx + ix] + w[1] * dxv[iz * nx + ix] + w[2] * dxv[(iz + 1) * nx + ix];
                self.v[iz * nx + ix] += ca * dxz + cb * dxv[iz * nx + ix];
            }
        }
    }

    /// Implicit `ε∂_z²` on every interior column, all columns at once.
    fn z_sweep(&mut self) {
        let (nx, nz) = (self.mesh.nx(), self.mesh.nz());
        if self.epsilon == 0.0 {
            return;
        }
        let v = &mut self.v;
        for iz in 1..nz {
            let (l, inv) = (self.zl[iz], self.zinv[iz]);
            let (prev, cur) = v.split_at_mut(iz * nx);
            let prev = &prev[(iz - 1) * nx..];
            for ix in 0..nx {
                cur[ix] = (cur[ix] - l * prev[ix]) * inv;
            }
        }
        for iz in (0..nz - 1).rev() {
            let c = self.zc[iz];
            let (cur, next) = v.split_at_mut((iz + 1) * nx);
            let cur = &mut cur[iz * nx..];
            for ix in 0..nx {
                cur[ix] -= c * next[ix];
            }
        }
        for iz in 0..nz {
            v[iz * nx] = self.far_left[iz];
            v[iz * nx + nx - 1] = self.far_right[iz];
        }
        v[..nx].iter_mut().for_each(|x| *x = 0.0);
        v[(nz - 1) * nx..].copy_from_slice(&self.far_top);
    }

    /// Implicit `ε(1+a²)∂_x² − U∂_x` on every interior row.
    fn x_sweep(&mut self, h: f64, a: &[f64], drift: &[f64]) {
        let (nx, nz) = (self.mesh.nx(), self.mesh.nz());
        let m = nx - 2;
        let (mut lo, mut di, mut up) = (vec![0.0; m], vec![0.0; m], vec![0.0; m]);
        let mut rhs = vec![0.0; m];
        for iz in 1..nz - 1 {
            let diff = self.epsilon * (1.0 + a[iz] * a[iz]);
            let adv = drift[iz];
            if diff == 0.0 && adv == 0.0 {
                continue;
            }
            for k in 0..m {
                let (wx, wxx) = (self.dx[k + 1], self.dxx[k + 1]);
                lo[k] = -h * (diff * wxx[0] - adv * wx[0]);
                di[k] = 1.0 - h * (diff * wxx[1] - adv * wx[1]);
                up[k] = -h * (diff * wxx[2] - adv * wx[2]);
            }
            let row = &mut self.v[iz * nx..(iz + 1) * nx];
            rhs.copy_from_slice(&row[1..nx - 1]);
            rhs[0] -= lo[0] * row[0];
            rhs[m - 1] -= up[m - 1] * row[nx - 1];
            solve_tridiagonal(&lo, &di, &up, &mut rhs, &mut self.scratch[..m]);
            row[1..nx - 1].copy_from_slice(&rhs);
        }
    }
}
