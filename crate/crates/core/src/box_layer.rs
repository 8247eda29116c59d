//! The corner ("box") layer `V_b(t, X, Z)`.
//!
//! Through `V_b = w̃ ∓ ½[V_P]_{x=0} e^{−|X|}` (upper sign for `X > 0`) the
//! corner problem becomes a `C¹` problem for `w̃` on the strip `X ∈ ℝ, Z > 0`:
//!
//! `∂_t w̃ = Δ^{ψ0} w̃ + J_± e^{−|X|}`, `w̃(0) = 0`, `w̃|_{Z=0}` given,
//!
//! with `Δ^{ψ0} = (1+ψ0²)∂_X² − 2ψ0∂_XZ + ∂_Z²` and `ψ0 = t·u0′(0)`.
//!
//! Time stepping is a locally one-dimensional splitting: the mixed term and
//! the source are explicit, then an implicit Z-sweep, then an implicit
//! X-sweep. In the X-sweep the interface node is not an ordinary equation:
//! it carries the constraint that the two one-sided second-order
//! x-derivatives agree, so `w̃` and `∂_X w̃` stay continuous to round-off
//! while `∂_X² w̃` is free to jump with the source.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::data::InterfaceGeometry;
use crate::error::{domain, Error, Result};
use crate::numerics::fd::{fd_derivative, fornberg, Axis};
use crate::numerics::norms::integral_2d;
use crate::numerics::tridiag::solve_tridiagonal;
use crate::numerics::{Field1D, Grid2D, LpIntegrable, Side, TwoSidedField1D, TwoSidedField2D};

/// Source amplitudes `J_±(t, Z)` sampled at increasing times.
#[derive(Debug, Clone)]
pub struct JumpSources {
    pub times: Vec<f64>,
    pub j_plus: Vec<Field1D>,
    pub j_minus: Vec<Field1D>,
}

/// The skewed Laplacian `Δ^{ψ0}` with frozen wall slope `ψ0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewOperator {
    pub psi_z0: f64,
}

impl SkewOperator {
    /// Coefficients of `∂_X²`, `∂_XZ`, `∂_Z²`.
    pub fn coefficients(&self) -> (f64, f64, f64) {
        (1.0 + self.psi_z0 * self.psi_z0, -2.0 * self.psi_z0, 1.0)
    }

    /// Applies the operator at interior nodes of a continuous field on a
    /// uniform grid (central differences; zero on the boundary).
    pub fn apply(&self, grid: &Grid2D, w: &[f64]) -> Result<Vec<f64>> {
        let (hx, hz) = uniform_steps(grid)?;
        let (a, b, c) = self.coefficients();
        let (nx, nz) = (grid.nx(), grid.nz());
        let mut out = vec![0.0; nx * nz];
        for j in 1..nz - 1 {
            for i in 1..nx - 1 {
                let k = j * nx + i;
                let wxx = (w[k - 1] - 2.0 * w[k] + w[k + 1]) / (hx * hx);
                let wzz = (w[k - nx] - 2.0 * w[k] + w[k + nx]) / (hz * hz);
                let wxz = (w[k + nx + 1] - w[k - nx + 1] - w[k + nx - 1] + w[k - nx - 1]) / (4.0 * hx * hz);
                out[k] = a * wxx + b * wxz + c * wzz;
            }
        }
        Ok(out)
    }
}

/// `J_± = ∓½((1+ψ0²)[V_P] ± 2ψ0[∂_Z V_P])` at time `t`.
pub fn compute_j_pm(
    geometry: &InterfaceGeometry,
    vp_jump: &Field1D,
    vp_jump_dz: &Field1D,
    t: f64,
) -> Result<(Field1D, Field1D)> {
    let a = geometry.psi_z0(t);
    let jp = vp_jump.zip_with(vp_jump_dz, |q, qz| -0.5 * ((1.0 + a * a) * q + 2.0 * a * qz))?;
    let jm = vp_jump.zip_with(vp_jump_dz, |q, qz| 0.5 * ((1.0 + a * a) * q - 2.0 * a * qz))?;
    Ok((jp, jm))
}

/// Everything the corner problem consumes, sampled at `times`.
#[derive(Debug, Clone)]
pub struct BoxLayerInputs {
    pub times: Vec<f64>,
    pub sources: JumpSources,
    /// `[V_P]_{x=0}(t, Z)` on the box Z-axis.
    pub vp_jump: Vec<Field1D>,
    /// `V_KH(t, X, z=0)` on the box X-axis.
    pub vkh_trace_z0: Vec<TwoSidedField1D>,
    /// `[v0(·,0)]_{x=0}`.
    pub corner_jump: f64,
}

impl BoxLayerInputs {
    fn validate(&self, grid: &Grid2D) -> Result<()> {
        let n = self.times.len();
        if n < 2 || self.times.windows(2).any(|w| w[1] <= w[0]) {
            return domain("box-layer inputs need at least two increasing sample times");
        }
        if self.sources.times != self.times
            || self.sources.j_plus.len() != n
            || self.sources.j_minus.len() != n
            || self.vp_jump.len() != n
            || self.vkh_trace_z0.len() != n
        {
            return domain("box-layer input series have inconsistent lengths or times");
        }
        let nz = grid.nz();
        let nx = grid.nx();
        if self.vp_jump.iter().chain(&self.sources.j_plus).chain(&self.sources.j_minus).any(|f| f.values.len() != nz)
            || self.vkh_trace_z0.iter().any(|f| f.values.len() != nx)
        {
            return Err(Error::Grid("box-layer inputs are not on the box grid".into()));
        }
        Ok(())
    }

    /// Bracketing samples and weight of the later one, for linear
    /// interpolation in time.
    fn locate(&self, t: f64) -> (usize, usize, f64) {
        let n = self.times.len();
        if t <= self.times[0] {
            return (0, 0, 0.0);
        }
        if t >= self.times[n - 1] {
            return (n - 1, n - 1, 0.0);
        }
        let k = self.times.partition_point(|&s| s <= t) - 1;
        let w = (t - self.times[k]) / (self.times[k + 1] - self.times[k]);
        (k, k + 1, w)
    }

    fn lerp(a: &[f64], b: &[f64], w: f64, out: &mut [f64]) {
        for ((o, &x), &y) in out.iter_mut().zip(a).zip(b) {
            *o = (1.0 - w) * x + w * y;
        }
    }

    fn sources_at(&self, t: f64, jp: &mut [f64], jm: &mut [f64]) {
        let (a, b, w) = self.locate(t);
        Self::lerp(&self.sources.j_plus[a].values, &self.sources.j_plus[b].values, w, jp);
        Self::lerp(&self.sources.j_minus[a].values, &self.sources.j_minus[b].values, w, jm);
    }

    /// `[V_P]_{x=0}(t, ·)`.
    pub fn vp_jump_at(&self, t: f64) -> Vec<f64> {
        let (a, b, w) = self.locate(t);
        let mut out = vec![0.0; self.vp_jump[a].values.len()];
        Self::lerp(&self.vp_jump[a].values, &self.vp_jump[b].values, w, &mut out);
        out
    }

    /// Wall data `w̃|_{Z=0} = −V_KH|_{z=0} ∓ ½[v0(·,0)] e^{−|X|}` over the
    /// X-axis. Errors if the two sides disagree at the corner.
    fn wall_data(&self, t: f64, out: &mut [f64]) -> Result<()> {
        let (a, b, w) = self.locate(t);
        let (ta, tb) = (&self.vkh_trace_z0[a], &self.vkh_trace_z0[b]);
        let i0 = ta.interface();
        let c0 = self.corner_jump;
        for (i, o) in out.iter_mut().enumerate() {
            let x = ta.grid.node(i);
            let kh = (1.0 - w) * ta.values[i] + w * tb.values[i];
            *o = -kh - Side::of(x).sign() * 0.5 * c0 * (-x.abs()).exp();
        }
        let left = -((1.0 - w) * ta.left + w * tb.left) + 0.5 * c0;
        let right = -((1.0 - w) * ta.right + w * tb.right) - 0.5 * c0;
        if (left - right).abs() > 1e-8 * (1.0 + c0.abs()) {
            return Err(Error::InvalidData(format!(
                "corner data incompatible at t = {t}: wall values {left:.6e} (X<0) and {right:.6e} (X>0)"
            )));
        }
        out[i0] = 0.5 * (left + right);
        Ok(())
    }
}

/// Time-step and output controls for the corner solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxLayerSettings {
    pub t_end: f64,
    /// Upper bound on the step; defaults to the stability guard.
    pub dt: Option<f64>,
    /// Times at which `w̃` and `V_b` are stored.
    pub store_times: Vec<f64>,
    /// Extra times at which `w̃` is stored for the monitors.
    pub monitor_times: Vec<f64>,
}

/// Snapshots of the corner solve.
#[derive(Debug, Clone)]
pub struct BoxLayerTrajectory {
    pub grid: Arc<Grid2D>,
    /// Sorted union of store and monitor times.
    pub times: Vec<f64>,
    pub w: Vec<TwoSidedField2D>,
    /// `[V_P]_{x=0}` at each snapshot time, used for reconstruction.
    pub vp_jump: Vec<Vec<f64>>,
    /// `J_±` at each snapshot time.
    pub j_plus: Vec<Vec<f64>>,
    pub j_minus: Vec<Vec<f64>>,
    /// `ψ0` at each snapshot time.
    pub psi_z0: Vec<f64>,
    pub steps: usize,
    pub max_dt: f64,
}

impl BoxLayerTrajectory {
    /// Index of the snapshot at time `t` (exact match up to 1e-12).
    pub fn index_of(&self, t: f64) -> Option<usize> {
        self.times.iter().position(|&s| (s - t).abs() <= 1e-12 * (1.0 + t.abs()))
    }

    /// `V_b` at snapshot `k`, reconstructed from `w̃`.
    pub fn vb(&self, k: usize) -> TwoSidedField2D {
        reconstruct_vb(&self.w[k], &self.vp_jump[k])
    }
}

/// `V_b = w̃ ∓ ½ q e^{−|X|}` with traces `w̃(0) ± ½q` and x-derivative
/// traces `∂_X w̃(0±) + ½q`.
pub fn reconstruct_vb(w: &TwoSidedField2D, q: &[f64]) -> TwoSidedField2D {
    let g = &w.grid;
    let (nx, i0) = (g.nx(), g.interface());
    let ex: Vec<f64> = g.x.nodes().iter().map(|x| -Side::of(*x).sign() * 0.5 * (-x.abs()).exp()).collect();
    let mut vb = w.clone();
    for (iz, &qz) in q.iter().enumerate() {
        let row = &mut vb.values[iz * nx..(iz + 1) * nx];
        for (i, v) in row.iter_mut().enumerate() {
            if i != i0 {
                *v += qz * ex[i];
            }
        }
        vb.left_trace[iz] = w.left_trace[iz] + 0.5 * qz;
        vb.right_trace[iz] = w.right_trace[iz] - 0.5 * qz;
        vb.left_xderiv_trace[iz] = w.left_xderiv_trace[iz] + 0.5 * qz;
        vb.right_xderiv_trace[iz] = w.right_xderiv_trace[iz] + 0.5 * qz;
    }
    vb.sync_interface();
    vb
}

fn uniform_steps(grid: &Grid2D) -> Result<(f64, f64)> {
    match (grid.x.spacing(), grid.z.spacing()) {
        (Some(hx), Some(hz)) => Ok((hx, hz)),
        _ => Err(Error::Grid("the corner solve needs uniform fast grids".into())),
    }
}

/// Largest stable step for wall slopes up to `psi_max`.
pub fn box_dt_guard(h: f64, psi_max: f64) -> f64 {
    h * h / (4.0 * (1.0 + psi_max * psi_max))
}

/// Solves for `w̃` and returns its snapshots (and hence `V_b`).
pub fn solve_box_layer(
    inputs: &BoxLayerInputs,
    geometry: &InterfaceGeometry,
    grid: Arc<Grid2D>,
    settings: &BoxLayerSettings,
) -> Result<BoxLayerTrajectory> {
    inputs.validate(&grid)?;
    let (h, hz) = uniform_steps(&grid)?;
    if (h - hz).abs() > 1e-14 * h {
        return Err(Error::Grid("the corner solve needs equal X and Z spacing".into()));
    }
    let t_end = settings.t_end;
    if !(t_end > 0.0) {
        return domain(format!("final time must be positive, got {t_end}"));
    }
    let psi_max = geometry.psi_z0(t_end).abs().max(geometry.psi_z0(0.0).abs());
    let guard = box_dt_guard(h, psi_max);
    let dt_max = match settings.dt {
        Some(dt) if dt > guard * (1.0 + 1e-12) => {
            return Err(Error::Cfl {
                guard: "explicit mixed-derivative",
                dt,
                suggested: guard,
            })
        }
        Some(dt) if dt > 0.0 => dt,
        Some(dt) => return domain(format!("time step must be positive, got {dt}")),
        None => guard,
    };

    let mut out_times: Vec<f64> = settings
        .store_times
        .iter()
        .chain(&settings.monitor_times)
        .copied()
        .chain([0.0, t_end])
        .filter(|t| (0.0..=t_end).contains(t))
        .collect();
    out_times.sort_by(f64::total_cmp);
    out_times.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));

    let (nx, nz) = (grid.nx(), grid.nz());
    if inputs.vkh_trace_z0[0].interface() != grid.interface() {
        return Err(Error::Grid("wall trace and box grid disagree on the interface".into()));
    }
    let mut w = vec![0.0; nx * nz];
    let mut traj = BoxLayerTrajectory {
        grid: grid.clone(),
        times: Vec::new(),
        w: Vec::new(),
        vp_jump: Vec::new(),
        j_plus: Vec::new(),
        j_minus: Vec::new(),
        psi_z0: Vec::new(),
        steps: 0,
        max_dt: 0.0,
    };
    let mut stepper = Stepper::new(&grid, h);
    let mut t = 0.0;
    for &target in &out_times {
        let span = target - t;
        if span > 0.0 {
            let n = (span / dt_max * (1.0 - 1e-12)).ceil().max(1.0) as usize;
            let dt = span / n as f64;
            for _ in 0..n {
                stepper.step(inputs, geometry, &mut w, t, dt)?;
                t += dt;
            }
            traj.steps += n;
            traj.max_dt = traj.max_dt.max(dt);
        }
        t = target;
        if target == 0.0 {
            // the wall data at t = 0 (zero for compatible data)
            let mut g = vec![0.0; nx];
            inputs.wall_data(0.0, &mut g)?;
            w[..nx].copy_from_slice(&g);
        }
        let field = TwoSidedField2D::from_continuous(grid.clone(), w.clone())?;
        let mut jp = vec![0.0; nz];
        let mut jm = vec![0.0; nz];
        inputs.sources_at(t, &mut jp, &mut jm);
        traj.times.push(t);
        traj.w.push(field);
        traj.vp_jump.push(inputs.vp_jump_at(t));
        traj.j_plus.push(jp);
        traj.j_minus.push(jm);
        traj.psi_z0.push(geometry.psi_z0(t));
    }
    Ok(traj)
}

/// Work arrays and precomputed data for one corner step.
struct Stepper {
    h: f64,
    nx: usize,
    nz: usize,
    i0: usize,
    decay: Vec<f64>,
    rhs: Vec<f64>,
    line: Vec<f64>,
    scratch: Vec<f64>,
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    jp: Vec<f64>,
    jm: Vec<f64>,
    wall: Vec<f64>,
}

impl Stepper {
    fn new(grid: &Grid2D, h: f64) -> Self {
        let (nx, nz) = (grid.nx(), grid.nz());
        let n = nx.max(nz);
        Self {
            h,
            nx,
            nz,
            i0: grid.interface(),
            decay: grid.x.nodes().iter().map(|x| (-x.abs()).exp()).collect(),
            rhs: vec![0.0; nx * nz],
            line: vec![0.0; n],
            scratch: vec![0.0; n],
            lower: vec![0.0; n],
            diag: vec![0.0; n],
            upper: vec![0.0; n],
            jp: vec![0.0; nz],
            jm: vec![0.0; nz],
            wall: vec![0.0; nx],
        }
    }

    fn step(&mut self, inputs: &BoxLayerInputs, geometry: &InterfaceGeometry, w: &mut [f64], t: f64, dt: f64) -> Result<()> {
        let (nx, nz, i0, h) = (self.nx, self.nz, self.i0, self.h);
        let tm = t + 0.5 * dt;
        let psi = geometry.psi_z0(tm);
        let alpha = 1.0 + psi * psi;
        inputs.sources_at(tm, &mut self.jp, &mut self.jm);

        // explicit part: mixed derivative and source
        let cmix = -2.0 * psi * dt / (4.0 * h * h);
        self.rhs.copy_from_slice(w);
        for j in 1..nz - 1 {
            for i in 1..nx - 1 {
                let k = j * nx + i;
                let mixed = w[k + nx + 1] - w[k - nx + 1] - w[k + nx - 1] + w[k - nx - 1];
                let src = if i > i0 {
                    self.jp[j] * self.decay[i]
                } else if i < i0 {
                    self.jm[j] * self.decay[i]
                } else {
                    0.0
                };
                self.rhs[k] = w[k] + cmix * mixed + dt * src;
            }
        }

        // Z-sweep: (I − dt ∂_Z²), Dirichlet at both ends
        inputs.wall_data(t + dt, &mut self.wall)?;
        let beta = dt / (h * h);
        let m = nz - 2;
        for i in 1..nx - 1 {
            for r in 0..m {
                self.lower[r] = -beta;
                self.diag[r] = 1.0 + 2.0 * beta;
                self.upper[r] = -beta;
                self.line[r] = self.rhs[(r + 1) * nx + i];
            }
            self.line[0] += beta * self.wall[i];
            solve_tridiagonal(&self.lower[..m], &self.diag[..m], &self.upper[..m], &mut self.line[..m], &mut self.scratch[..m]);
            for r in 0..m {
                self.rhs[(r + 1) * nx + i] = self.line[r];
            }
        }

        // X-sweep with the interface constraint
        let a = dt * alpha / (h * h);
        // response of each half-line to a unit value at the interface
        let left_len = i0 - 1; // unknowns 1..i0-1
        let right_len = nx - 2 - i0; // unknowns i0+1..nx-2
        let unit_left = self.half_line_response(a, left_len, false);
        let unit_right = self.half_line_response(a, right_len, true);
        let coeff = 6.0 - 4.0 * (unit_left[left_len - 1] + unit_right[0]) + (unit_left[left_len - 2] + unit_right[1]);
        for r in 0..left_len.max(right_len) {
            self.lower[r] = -a;
            self.diag[r] = 1.0 + 2.0 * a;
            self.upper[r] = -a;
        }
        for j in 1..nz - 1 {
            let row = j * nx;
            // solves with a zero interface value
            for r in 0..left_len {
                self.line[r] = self.rhs[row + 1 + r];
            }
            solve_tridiagonal(&self.lower[..left_len], &self.diag[..left_len], &self.upper[..left_len], &mut self.line[..left_len], &mut self.scratch[..left_len]);
            for r in 0..left_len {
                w[row + 1 + r] = self.line[r];
            }
            for r in 0..right_len {
                self.line[r] = self.rhs[row + i0 + 1 + r];
            }
            solve_tridiagonal(&self.lower[..right_len], &self.diag[..right_len], &self.upper[..right_len], &mut self.line[..right_len], &mut self.scratch[..right_len]);
            for r in 0..right_len {
                w[row + i0 + 1 + r] = self.line[r];
            }
            // interface value from 6 w0 = 4(w−1 + w1) − (w−2 + w2)
            let s = (4.0 * (w[row + i0 - 1] + w[row + i0 + 1]) - (w[row + i0 - 2] + w[row + i0 + 2])) / coeff;
            for r in 0..left_len {
                w[row + 1 + r] += s * unit_left[r];
            }
            for r in 0..right_len {
                w[row + i0 + 1 + r] += s * unit_right[r];
            }
            w[row + i0] = s;
            w[row] = 0.0;
            w[row + nx - 1] = 0.0;
        }
        w[..nx].copy_from_slice(&self.wall);
        for v in &mut w[(nz - 1) * nx..] {
            *v = 0.0;
        }
        Ok(())
    }

    /// Solution of `(I − a δ²) y = 0` on a half-line of `len` unknowns with
    /// value 1 at the interface end and 0 at the far end.
    fn half_line_response(&mut self, a: f64, len: usize, interface_first: bool) -> Vec<f64> {
        let mut y = vec![0.0; len];
        for r in 0..len {
            self.lower[r] = -a;
            self.diag[r] = 1.0 + 2.0 * a;
            self.upper[r] = -a;
        }
        if interface_first {
            y[0] = a;
        } else {
            y[len - 1] = a;
        }
        solve_tridiagonal(&self.lower[..len], &self.diag[..len], &self.upper[..len], &mut y, &mut self.scratch[..len]);
        y
    }
}

/// One sample of the energy monitors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergySample {
    pub t: f64,
    /// `‖w̃‖^p_{L^p_X W^{1,p}_Z}`.
    pub norm: f64,
    pub dnorm_dt: f64,
    /// `∫|w̃|^{p−2}|∇^{ψ0} w̃|²`.
    pub dissipation: f64,
    /// `∫|∂_Z w̃|^{p−2}|∇^{ψ0} ∂_Z w̃|²`.
    pub dissipation_z: f64,
    /// `1 + ‖J_±‖^p_{W^{1,p}_Z} + ‖w̃‖^p_{L^p_X W^{1,p}_Z}`.
    pub rhs: f64,
    pub lhs: f64,
    /// The same quantities for `∂_X w̃`.
    pub norm_x: f64,
    pub dnorm_x_dt: f64,
    pub dissipation_x: f64,
    pub dissipation_xz: f64,
    pub rhs_x: f64,
    pub lhs_x: f64,
}

/// Energy monitors over a trajectory, with the fitted constants
/// `C = max_t LHS/RHS`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub p: f64,
    pub samples: Vec<EnergySample>,
    pub constant: f64,
    pub constant_x: f64,
}

/// `∫ |f|^{p−2} |∇^{ψ0} f|²`, evaluated as `(4/p²)∫|∇^{ψ0}(|f|^{p/2})|²`,
/// which stays bounded where `f` vanishes.
pub fn weighted_dissipation(f: &TwoSidedField2D, psi: f64, p: f64) -> Result<f64> {
    let phi = f.map_pointwise(|v| v.abs().powf(0.5 * p));
    let px = fd_derivative(&phi, Axis::X, 1)?;
    let pz = fd_derivative(&phi, Axis::Z, 1)?;
    let dens = px.zip_pointwise(&pz, |a, b| a * a + (b - psi * a) * (b - psi * a))?;
    Ok(4.0 / (p * p) * integral_2d(&dens))
}

fn lp_pow(f: &TwoSidedField2D, p: f64) -> Result<f64> {
    f.lp_integral(p)
}

/// Runs the energy monitors on the stored snapshots.
pub fn energy_monitor(traj: &BoxLayerTrajectory, p: f64) -> Result<EnergyReport> {
    if !(p > 1.0) {
        return domain(format!("monitor exponent p = {p} must exceed 1"));
    }
    let zg = Arc::new(traj.grid.z.clone());
    let mut raw = Vec::with_capacity(traj.times.len());
    for k in 0..traj.times.len() {
        let w = &traj.w[k];
        let psi = traj.psi_z0[k];
        let wz = fd_derivative(w, Axis::Z, 1)?;
        let wx = fd_derivative(w, Axis::X, 1)?;
        let wxz = fd_derivative(&wx, Axis::Z, 1)?;
        let norm = lp_pow(w, p)? + lp_pow(&wz, p)?;
        let norm_x = lp_pow(&wx, p)? + lp_pow(&wxz, p)?;
        let jp = Field1D::new(zg.clone(), traj.j_plus[k].clone())?;
        let jm = Field1D::new(zg.clone(), traj.j_minus[k].clone())?;
        let jnorm = w1p_pow(&jp, p)? + w1p_pow(&jm, p)?;
        let w_w1p = norm + lp_pow(&wx, p)?;
        raw.push((
            norm,
            weighted_dissipation(w, psi, p)?,
            weighted_dissipation(&wz, psi, p)?,
            1.0 + jnorm + norm,
            norm_x,
            weighted_dissipation(&wx, psi, p)?,
            weighted_dissipation(&wxz, psi, p)?,
            1.0 + jnorm + w_w1p,
        ));
    }
    let n = raw.len();
    let times = &traj.times;
    let deriv = |get: &dyn Fn(usize) -> f64, k: usize| -> f64 {
        if n < 2 {
            0.0
        } else if k == 0 {
            (get(1) - get(0)) / (times[1] - times[0])
        } else if k == n - 1 {
            (get(n - 1) - get(n - 2)) / (times[n - 1] - times[n - 2])
        } else {
            (get(k + 1) - get(k - 1)) / (times[k + 1] - times[k - 1])
        }
    };
    let mut samples = Vec::with_capacity(n);
    let (mut c, mut cx) = (0.0_f64, 0.0_f64);
    for k in 0..n {
        let r = raw[k];
        let dn = deriv(&|i| raw[i].0, k);
        let dnx = deriv(&|i| raw[i].4, k);
        let lhs = dn + r.1 + r.2;
        let lhs_x = dnx + r.5 + r.6;
        c = c.max(lhs / r.3);
        cx = cx.max(lhs_x / r.7);
        samples.push(EnergySample {
            t: times[k],
            norm: r.0,
            dnorm_dt: dn,
            dissipation: r.1,
            dissipation_z: r.2,
            rhs: r.3,
            lhs,
            norm_x: r.4,
            dnorm_x_dt: dnx,
            dissipation_x: r.5,
            dissipation_xz: r.6,
            rhs_x: r.7,
            lhs_x,
        });
    }
    Ok(EnergyReport {
        p,
        samples,
        constant: c,
        constant_x: cx,
    })
}

fn w1p_pow(f: &Field1D, p: f64) -> Result<f64> {
    let d = crate::numerics::fd_derivative_1d(f, 1)?;
    Ok(f.lp_integral(p)? + d.lp_integral(p)?)
}

/// `∫₀^T ∫ |∂_X² V_b|^p dX dZ dt` over the stored snapshots (trapezoid in
/// time; second differences never straddle `X = 0`).
pub fn box_second_derivative_integrability(traj: &BoxLayerTrajectory, p: f64) -> Result<f64> {
    let n = traj.times.len();
    let mut vals = Vec::with_capacity(n);
    for k in 0..n {
        let vxx = fd_derivative(&traj.vb(k), Axis::X, 2)?;
        vals.push(vxx.lp_integral(p)?);
    }
    Ok(trapezoid_in_time(&traj.times, &vals))
}

/// Trapezoid rule over possibly uneven sample times.
pub fn trapezoid_in_time(times: &[f64], vals: &[f64]) -> f64 {
    times
        .windows(2)
        .zip(vals.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum()
}

/// One-sided second x-differences of `w̃` at `X = 0` for every Z-node.
pub fn interface_second_derivatives(w: &TwoSidedField2D) -> (Vec<f64>, Vec<f64>) {
    let g = &w.grid;
    let i0 = g.interface();
    let xs = g.x.nodes();
    let wl = fornberg(0.0, &[xs[i0 - 3], xs[i0 - 2], xs[i0 - 1], xs[i0]], 2);
    let wr = fornberg(0.0, &[xs[i0], xs[i0 + 1], xs[i0 + 2], xs[i0 + 3]], 2);
    let nz = g.nz();
    let mut l = vec![0.0; nz];
    let mut r = vec![0.0; nz];
    for iz in 0..nz {
        l[iz] = (0..4).map(|k| wl[2][k] * w.side_value(i0 - 3 + k, iz, Side::Minus)).sum();
        r[iz] = (0..4).map(|k| wr[2][k] * w.side_value(i0 + k, iz, Side::Plus)).sum();
    }
    (l, r)
}
