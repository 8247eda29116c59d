//! The single-layer profiles and the complete [`ProfileSet`].
//!
//! All three single-layer profiles reduce to the unit wall profile
//! `Φ(t,Z) = e^{−Z} + D(t,Z)` (see [`crate::numerics::duhamel`]):
//!
//! - `U_P(t,Z) = −u0(0)·Φ(t,Z)`;
//! - `V_P(t,x,Z) = −v0(x,0)·Φ(t,Z)`, with `x` a parameter;
//! - `V_KH(t,X,z) = −sgn(X)·(J(z)/2)·(e^{−|X|} + D(t̃,|X|))` where
//!   `J = [v0]_{x=0}` and `t̃ = t + t³u0′(z)²/3`.
//!
//! An implicit finite-difference path for `U_P` and `V_P` serves as a
//! cross-check.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::box_layer::{
    compute_j_pm, reconstruct_vb, solve_box_layer, BoxLayerInputs, BoxLayerSettings, BoxLayerTrajectory,
    JumpSources,
};
use crate::data::{InitialData, InterfaceGeometry};
use crate::error::{domain, Error, Result};
use crate::numerics::duhamel::{duhamel_exponential_many, DuhamelQuantity};
use crate::numerics::fd::{fd_derivative, Axis};
use crate::numerics::norms::w1p_norm_2d;
use crate::numerics::tridiag::solve_tridiagonal;
use crate::numerics::{
    w1p_norm, Field1D, Grid1D, Grid2D, LpIntegrable, Side, TwoSidedField1D, TwoSidedField2D,
};

/// Snapshots at increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries<F> {
    pub times: Vec<f64>,
    pub snapshots: Vec<F>,
}

impl<F> TimeSeries<F> {
    /// Index of the snapshot at `t` (relative tolerance 1e-12).
    pub fn index_of(&self, t: f64) -> Option<usize> {
        self.times.iter().position(|&s| (s - t).abs() <= 1e-12 * (1.0 + t.abs()))
    }

    /// Snapshot at `t`, if stored.
    pub fn at(&self, t: f64) -> Option<&F> {
        self.index_of(t).map(|k| &self.snapshots[k])
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// How a wall-layer column is computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileMethod {
    /// Duhamel representation (the accuracy reference).
    Duhamel,
    /// Backward Euler in time, second-order differences in `Z`.
    Implicit { dt: f64 },
}

/// Sorted store times with `0` and `t_end` added.
pub fn normalize_store_times(store_times: &[f64], t_end: f64) -> Result<Vec<f64>> {
    if !(t_end > 0.0) || !t_end.is_finite() {
        return domain(format!("final time must be positive, got {t_end}"));
    }
    if let Some(t) = store_times.iter().find(|t| !(**t >= 0.0 && **t <= t_end)) {
        return domain(format!("store time {t} outside [0, {t_end}]"));
    }
    let mut ts: Vec<f64> = store_times.iter().copied().chain([0.0, t_end]).collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
    Ok(ts)
}

/// `Φ(t_k, Z_j)` (or `∂_Z Φ`) as `table[k][j]`.
pub fn wall_profile_table(zs: &[f64], times: &[f64], what: DuhamelQuantity) -> Result<Vec<Vec<f64>>> {
    let mut table = vec![vec![0.0; zs.len()]; times.len()];
    for (j, &z) in zs.iter().enumerate() {
        let d = duhamel_exponential_many(times, z, what)?;
        let e = (-z).exp();
        for (k, dk) in d.into_iter().enumerate() {
            table[k][j] = match what {
                DuhamelQuantity::Value => e + dk,
                DuhamelQuantity::ZDerivative => -e + dk,
            };
        }
    }
    Ok(table)
}

/// `U_P` for wall velocity `u0_at_0`: `∂_t U = ∂_Z² U`, `U(t,0) = −u0(0)`,
/// `U(0,Z) = −u0(0)e^{−Z}`.
pub fn solve_up(
    u0_at_0: f64,
    t_end: f64,
    grid_z: Arc<Grid1D>,
    store_times: &[f64],
    method: ProfileMethod,
) -> Result<TimeSeries<Field1D>> {
    let times = normalize_store_times(store_times, t_end)?;
    if grid_z.origin() != 0.0 {
        return Err(Error::Grid("the wall-layer grid must start at Z = 0".into()));
    }
    let columns = match method {
        ProfileMethod::Duhamel => wall_profile_table(grid_z.nodes(), &times, DuhamelQuantity::Value)?
            .into_iter()
            .map(|phi| phi.into_iter().map(|v| -u0_at_0 * v).collect())
            .collect(),
        ProfileMethod::Implicit { dt } => implicit_wall_layer(u0_at_0, &grid_z, &times, dt)?,
    };
    let snapshots = columns
        .into_iter()
        .map(|mut values: Vec<f64>| {
            values[0] = -u0_at_0;
            Field1D { grid: grid_z.clone(), values }
        })
        .collect();
    Ok(TimeSeries { times, snapshots })
}

/// Backward Euler for the wall layer; returns the columns at `times`.
fn implicit_wall_layer(c: f64, grid: &Grid1D, times: &[f64], dt: f64) -> Result<Vec<Vec<f64>>> {
    if !(dt > 0.0) {
        return domain(format!("time step must be positive, got {dt}"));
    }
    let zs = grid.nodes();
    let n = zs.len();
    let m = n - 2;
    let mut u: Vec<f64> = zs.iter().map(|z| -c * (-z).exp()).collect();
    u[0] = -c;
    u[n - 1] = 0.0;
    let mut out = Vec::with_capacity(times.len());
    let (mut lower, mut diag, mut upper) = (vec![0.0; m], vec![0.0; m], vec![0.0; m]);
    let (mut rhs, mut scratch) = (vec![0.0; m], vec![0.0; m]);
    let mut t = 0.0;
    for &target in times {
        let span = target - t;
        if span > 0.0 {
            let steps = (span / dt * (1.0 - 1e-12)).ceil().max(1.0) as usize;
            let h = span / steps as f64;
            for r in 0..m {
                let (hm, hp) = (zs[r + 1] - zs[r], zs[r + 2] - zs[r + 1]);
                lower[r] = -2.0 * h / (hm * (hm + hp));
                upper[r] = -2.0 * h / (hp * (hm + hp));
                diag[r] = 1.0 - lower[r] - upper[r];
            }
            for _ in 0..steps {
                rhs.copy_from_slice(&u[1..n - 1]);
                rhs[0] -= lower[0] * u[0];
                rhs[m - 1] -= upper[m - 1] * u[n - 1];
                solve_tridiagonal(&lower, &diag, &upper, &mut rhs, &mut scratch);
                u[1..n - 1].copy_from_slice(&rhs);
            }
        }
        t = target;
        out.push(u.clone());
    }
    Ok(out)
}

/// `V_P` over `(x, Z)`: each x-column solves the wall-layer problem with
/// data `−v0(x,0)`. Columns with bitwise-equal traces share one solve.
///
/// `trace_dx` holds the exact one-sided derivatives `∂_x v0(0±, 0)`; when
/// absent, the x-derivative traces are taken by one-sided differences.
pub fn solve_vp(
    trace: &TwoSidedField1D,
    trace_dx: Option<(f64, f64)>,
    t_end: f64,
    grid_z: Arc<Grid1D>,
    store_times: &[f64],
    method: ProfileMethod,
) -> Result<TimeSeries<TwoSidedField2D>> {
    let times = normalize_store_times(store_times, t_end)?;
    let grid = Arc::new(Grid2D::new((*trace.grid).clone(), (*grid_z).clone())?);
    let unit = solve_up(1.0, t_end, grid_z.clone(), &times, method)?;
    let (nx, nz, i0) = (grid.nx(), grid.nz(), grid.interface());
    let mut cache: HashMap<u64, Vec<Vec<f64>>> = HashMap::new();
    let mut column = |c: f64| -> Vec<Vec<f64>> {
        cache
            .entry(c.to_bits())
            .or_insert_with(|| unit.snapshots.iter().map(|s| s.values.iter().map(|v| c * v).collect()).collect())
            .clone()
    };
    let mut snaps: Vec<TwoSidedField2D> = (0..times.len()).map(|_| TwoSidedField2D::zeros(grid.clone())).collect();
    for ix in 0..nx {
        if ix == i0 {
            let l = column(trace.left);
            let r = column(trace.right);
            for (k, s) in snaps.iter_mut().enumerate() {
                s.left_trace.copy_from_slice(&l[k]);
                s.right_trace.copy_from_slice(&r[k]);
            }
            continue;
        }
        let col = column(trace.values[ix]);
        for (k, s) in snaps.iter_mut().enumerate() {
            for iz in 0..nz {
                s.values[iz * nx + ix] = col[k][iz];
            }
        }
    }
    for (k, s) in snaps.iter_mut().enumerate() {
        s.sync_interface();
        match trace_dx {
            Some((dl, dr)) => {
                // U_P with unit data is −Φ, so ∂_x V_P = ∂_x v0(x,0)·(U_P / 1)
                s.left_xderiv_trace = unit.snapshots[k].values.iter().map(|v| dl * v).collect();
                s.right_xderiv_trace = unit.snapshots[k].values.iter().map(|v| dr * v).collect();
            }
            None => s.fill_xderiv_traces(),
        }
    }
    Ok(TimeSeries { times, snapshots: snaps })
}

/// `D(t̃(t_k, z_l), |X_j|)` for all store times, z-levels and X-nodes, as
/// `out[k][l][j]`. X-nodes beyond `cutoff` are set to zero.
pub(crate) fn kh_duhamel_table(
    geometry: &InterfaceGeometry,
    times: &[f64],
    zs: &[f64],
    xs_abs: &[f64],
    cutoff: f64,
    what: DuhamelQuantity,
) -> Result<Vec<Vec<Vec<f64>>>> {
    let nt = times.len();
    let nz = zs.len();
    let taus: Vec<f64> = times
        .iter()
        .flat_map(|&t| zs.iter().map(move |&z| (t, z)))
        .map(|(t, z)| geometry.t_tilde(t, z))
        .collect();
    let mut out = vec![vec![vec![0.0; xs_abs.len()]; nz]; nt];
    for (j, &x) in xs_abs.iter().enumerate() {
        if x > cutoff {
            continue;
        }
        let d = duhamel_exponential_many(&taus, x, what)?;
        for k in 0..nt {
            for l in 0..nz {
                out[k][l][j] = d[k * nz + l];
            }
        }
    }
    Ok(out)
}

/// Beyond this fast distance the layer profiles are below double-precision
/// resolution of the data and are taken as zero.
pub const FAST_CUTOFF: f64 = 40.0;

/// `V_KH` over `(X, z)`; `jump` is `[v0]_{x=0}` on `grid_z`.
///
/// The x-derivative traces are exact: both equal `(J/2)(1 − ∂_Z D(t̃, 0))`.
pub fn solve_vkh(
    jump: &Field1D,
    geometry: &InterfaceGeometry,
    t_end: f64,
    grid_x: Arc<Grid1D>,
    store_times: &[f64],
) -> Result<TimeSeries<TwoSidedField2D>> {
    let times = normalize_store_times(store_times, t_end)?;
    let grid_z = jump.grid.clone();
    let grid = Arc::new(Grid2D::new((*grid_x).clone(), (*grid_z).clone())?);
    let (nx, i0) = (grid.nx(), grid.interface());
    let xs = grid.x.nodes();
    let xs_abs: Vec<f64> = xs.iter().map(|x| x.abs()).collect();
    let zs = grid_z.nodes();
    let d = kh_duhamel_table(geometry, &times, zs, &xs_abs, FAST_CUTOFF, DuhamelQuantity::Value)?;
    let dz0 = kh_duhamel_table(geometry, &times, zs, &[0.0], f64::INFINITY, DuhamelQuantity::ZDerivative)?;
    let mut snapshots = Vec::with_capacity(times.len());
    for k in 0..times.len() {
        let mut f = TwoSidedField2D::zeros(grid.clone());
        for (l, &jl) in jump.values.iter().enumerate() {
            let half = 0.5 * jl;
            let row = &mut f.values[l * nx..(l + 1) * nx];
            for (j, v) in row.iter_mut().enumerate() {
                if j == i0 || xs_abs[j] > FAST_CUTOFF {
                    continue;
                }
                *v = -Side::of(xs[j]).sign() * half * ((-xs_abs[j]).exp() + d[k][l][j]);
            }
            f.left_trace[l] = half;
            f.right_trace[l] = -half;
            let dx = half * (1.0 - dz0[k][l][0]);
            f.left_xderiv_trace[l] = dx;
            f.right_xderiv_trace[l] = dx;
        }
        f.sync_interface();
        snapshots.push(f);
    }
    Ok(TimeSeries { times, snapshots })
}

/// Pointwise evaluation of `V_KH(t, X, z)` on a tensor block of fast
/// `X`-values and physical `z`-levels (both sides of `X = 0` by sign).
/// Returns `values[l][j]`.
pub fn vkh_block(
    data: &InitialData,
    geometry: &InterfaceGeometry,
    t: f64,
    xs_fast: &[f64],
    zs: &[f64],
) -> Result<Vec<Vec<f64>>> {
    let xs_abs: Vec<f64> = xs_fast.iter().map(|x| x.abs()).collect();
    let d = kh_duhamel_table(geometry, &[t], zs, &xs_abs, FAST_CUTOFF, DuhamelQuantity::Value)?;
    let mut out = vec![vec![0.0; xs_fast.len()]; zs.len()];
    for (l, &z) in zs.iter().enumerate() {
        let half = 0.5 * data.jump_v0(z);
        for (j, &x) in xs_fast.iter().enumerate() {
            if xs_abs[j] <= FAST_CUTOFF {
                out[l][j] = -Side::of(x).sign() * half * ((-xs_abs[j]).exp() + d[0][l][j]);
            }
        }
    }
    Ok(out)
}

/// `∂_X V_KH(t, 0±, z)` for each `z` (equal on both sides).
pub fn vkh_interface_slope(data: &InitialData, geometry: &InterfaceGeometry, t: f64, zs: &[f64]) -> Result<Vec<f64>> {
    let taus: Vec<f64> = zs.iter().map(|&z| geometry.t_tilde(t, z)).collect();
    let dz = duhamel_exponential_many(&taus, 0.0, DuhamelQuantity::ZDerivative)?;
    Ok(zs.iter().zip(dz).map(|(&z, d)| 0.5 * data.jump_v0(z) * (1.0 - d)).collect())
}

/// `Φ(t, Z)` and `∂_ZΦ(t, Z)` at arbitrary fast heights (zero beyond the
/// cutoff).
pub fn wall_profile_at(t: f64, zs_fast: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut phi = vec![0.0; zs_fast.len()];
    let mut dphi = vec![0.0; zs_fast.len()];
    for (j, &z) in zs_fast.iter().enumerate() {
        if z > FAST_CUTOFF {
            continue;
        }
        let e = (-z).exp();
        phi[j] = e + duhamel_exponential_many(&[t], z, DuhamelQuantity::Value)?[0];
        dphi[j] = -e + duhamel_exponential_many(&[t], z, DuhamelQuantity::ZDerivative)?[0];
    }
    Ok((phi, dphi))
}

/// Discretization of the profile construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileConfig {
    pub t_end: f64,
    pub store_times: Vec<f64>,
    /// Fast-grid spacing in `X` and `Z`.
    pub fast_h: f64,
    /// Fast truncation length `L`.
    pub fast_length: f64,
    /// Slow (physical) spacing for `V_P` in `x` and `V_KH` in `z`.
    pub slow_h: f64,
    pub slow_length_x: f64,
    pub slow_length_z: f64,
    /// Truncation of the corner problem (defaults to `fast_length`).
    pub box_length: Option<f64>,
    /// Step bound for the corner solve (defaults to the stability guard).
    pub box_dt: Option<f64>,
    /// Uniform input samples in time for the corner problem's data.
    pub box_input_samples: usize,
    /// Uniform monitor snapshots of the corner solve.
    pub monitor_samples: usize,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        Self {
            t_end: 1.0,
            store_times: (0..=10).map(|k| k as f64 / 10.0).collect(),
            fast_h: 1.0 / 16.0,
            fast_length: 20.0,
            slow_h: 1.0 / 64.0,
            slow_length_x: 8.0,
            slow_length_z: 8.0,
            box_length: None,
            box_dt: None,
            box_input_samples: 512,
            monitor_samples: 40,
        }
    }
}

/// The four layer profiles at the store times.
#[derive(Debug, Clone)]
pub struct ProfileSet {
    pub config: ProfileConfig,
    pub store_times: Vec<f64>,
    /// `U_P` over fast `Z`.
    pub up: TimeSeries<Field1D>,
    /// `V_P` over `(x, Z)`.
    pub vp: TimeSeries<TwoSidedField2D>,
    /// `V_KH` over `(X, z)`.
    pub vkh: TimeSeries<TwoSidedField2D>,
    /// `V_b` over `(X, Z)`.
    pub vb: TimeSeries<TwoSidedField2D>,
    /// The full corner solve, including monitor snapshots.
    pub box_layer: BoxLayerTrajectory,
    pub data: InitialData,
    pub geometry: InterfaceGeometry,
    digest: String,
}

impl ProfileSet {
    /// Builds every profile for `data`.
    pub fn build(data: &InitialData, config: &ProfileConfig) -> Result<Self> {
        let geometry = InterfaceGeometry::from_data(data);
        let t_end = config.t_end;
        let times = normalize_store_times(&config.store_times, t_end)?;
        let fast_z = Arc::new(Grid1D::half_line(config.fast_length, config.fast_h)?);
        let fast_x = Arc::new(Grid1D::symmetric(config.fast_length, config.fast_h)?);
        let slow_x = Arc::new(Grid1D::symmetric(config.slow_length_x, config.slow_h)?);
        let slow_z = Arc::new(Grid1D::half_line(config.slow_length_z, config.slow_h)?);

        let up = solve_up(data.u0(0.0).f, t_end, fast_z.clone(), &times, ProfileMethod::Duhamel)?;
        let trace = data.trace_at_wall(slow_x)?;
        let dx = (data.v0(Side::Minus, 0.0, 0.0).fx, data.v0(Side::Plus, 0.0, 0.0).fx);
        let vp = solve_vp(&trace, Some(dx), t_end, fast_z, &times, ProfileMethod::Duhamel)?;
        let jump = data.jump_field(slow_z);
        let vkh = solve_vkh(&jump, &geometry, t_end, fast_x, &times)?;

        let box_layer = build_box_layer(data, &geometry, config, &times)?;
        let vb = TimeSeries {
            times: times.clone(),
            snapshots: times
                .iter()
                .map(|&t| {
                    let k = box_layer.index_of(t).expect("store time in corner trajectory");
                    reconstruct_vb(&box_layer.w[k], &box_layer.vp_jump[k])
                })
                .collect(),
        };
        let mut set = Self {
            config: config.clone(),
            store_times: times,
            up,
            vp,
            vkh,
            vb,
            box_layer,
            data: data.clone(),
            geometry,
            digest: String::new(),
        };
        set.digest = set.compute_digest();
        Ok(set)
    }

    /// SHA-256 over every stored snapshot value.
    pub fn digest(&self) -> &str {
        &self.digest
    }

    fn compute_digest(&self) -> String {
        let mut h = Sha256::new();
        let mut feed = |v: &[f64]| {
            for x in v {
                h.update(x.to_le_bytes());
            }
        };
        feed(&self.store_times);
        for s in &self.up.snapshots {
            feed(&s.values);
        }
        for series in [&self.vp, &self.vkh, &self.vb] {
            for s in &series.snapshots {
                feed(&s.values);
                feed(&s.left_trace);
                feed(&s.right_trace);
                feed(&s.left_xderiv_trace);
                feed(&s.right_xderiv_trace);
            }
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn build_box_layer(
    data: &InitialData,
    geometry: &InterfaceGeometry,
    config: &ProfileConfig,
    store_times: &[f64],
) -> Result<BoxLayerTrajectory> {
    let t_end = config.t_end;
    let len = config.box_length.unwrap_or(config.fast_length);
    let grid = Arc::new(Grid2D::new(
        Grid1D::symmetric(len, config.fast_h)?,
        Grid1D::half_line(len, config.fast_h)?,
    )?);
    let monitor: Vec<f64> = (0..=config.monitor_samples.max(1))
        .map(|k| t_end * k as f64 / config.monitor_samples.max(1) as f64)
        .collect();
    let samples = config.box_input_samples.max(2);
    let mut input_times: Vec<f64> = (0..=samples)
        .map(|k| t_end * k as f64 / samples as f64)
        .chain(store_times.iter().copied())
        .chain(monitor.iter().copied())
        .collect();
    input_times.sort_by(f64::total_cmp);
    input_times.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));

    let inputs = box_layer_inputs(data, geometry, &grid, &input_times)?;
    let settings = BoxLayerSettings {
        t_end,
        dt: config.box_dt,
        store_times: store_times.to_vec(),
        monitor_times: monitor,
    };
    solve_box_layer(&inputs, geometry, grid, &settings)
}

/// Samples the corner problem's data at `times` on `grid`.
pub fn box_layer_inputs(
    data: &InitialData,
    geometry: &InterfaceGeometry,
    grid: &Arc<Grid2D>,
    times: &[f64],
) -> Result<BoxLayerInputs> {
    let zg = Arc::new(grid.z.clone());
    let xg = Arc::new(grid.x.clone());
    let c0 = data.corner_jump();
    let j0 = data.jump_v0(0.0);
    let phi = wall_profile_table(zg.nodes(), times, DuhamelQuantity::Value)?;
    let dphi = wall_profile_table(zg.nodes(), times, DuhamelQuantity::ZDerivative)?;
    let xs = xg.nodes();
    let xs_abs: Vec<f64> = xs.iter().map(|x| x.abs()).collect();
    let d = kh_duhamel_table(geometry, times, &[0.0], &xs_abs, FAST_CUTOFF, DuhamelQuantity::Value)?;
    let mut sources = JumpSources {
        times: times.to_vec(),
        j_plus: Vec::new(),
        j_minus: Vec::new(),
    };
    let mut vp_jump = Vec::new();
    let mut traces = Vec::new();
    for (k, &t) in times.iter().enumerate() {
        let q = Field1D::new(zg.clone(), phi[k].iter().map(|v| -c0 * v).collect())?;
        let qz = Field1D::new(zg.clone(), dphi[k].iter().map(|v| -c0 * v).collect())?;
        let (jp, jm) = compute_j_pm(geometry, &q, &qz, t)?;
        sources.j_plus.push(jp);
        sources.j_minus.push(jm);
        vp_jump.push(q);
        let dk = &d[k][0];
        let tr = TwoSidedField1D::from_fn(xg.clone(), |side, x| {
            let j = xg.index_of(x).unwrap_or(0);
            let dd = if x == 0.0 { 0.0 } else { dk[j] };
            if x.abs() > FAST_CUTOFF {
                0.0
            } else {
                -side.sign() * 0.5 * j0 * ((-x.abs()).exp() + dd)
            }
        })?;
        traces.push(tr);
    }
    Ok(BoxLayerInputs {
        times: times.to_vec(),
        sources,
        vp_jump,
        vkh_trace_z0: traces,
        corner_jump: c0,
    })
}

/// Sup-in-time norms of the profiles.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ProfileNormReport {
    pub p: f64,
    /// `‖U_P‖_{W^{1,p}_Z}`.
    pub up_w1p: f64,
    /// `‖V_P‖_{L^p_{x,Z}}` and its derivatives.
    pub vp_lp: f64,
    pub vp_dx_lp: f64,
    pub vp_dz_lp: f64,
    /// `‖[V_P]_{x=0}‖_{W^{1,p}_Z}`.
    pub vp_jump_w1p: f64,
    /// `‖V_KH‖_{L^p_{X,z}}` and its derivatives.
    pub vkh_lp: f64,
    pub vkh_dx_lp: f64,
    pub vkh_dz_lp: f64,
    /// `‖V_b‖_{W^{1,p}}` in each fast direction.
    pub vb_w1p_x: f64,
    pub vb_w1p_z: f64,
}

/// Sup-in-time discrete norms of the profiles.
pub fn profile_norm_report(profiles: &ProfileSet, p: f64) -> Result<ProfileNormReport> {
    let mut r = ProfileNormReport {
        p,
        ..Default::default()
    };
    let up_max = |a: &mut f64, v: f64| *a = a.max(v);
    for k in 0..profiles.store_times.len() {
        up_max(&mut r.up_w1p, w1p_norm(&profiles.up.snapshots[k], p)?);
        let vp = &profiles.vp.snapshots[k];
        up_max(&mut r.vp_lp, vp.lp_norm(p)?);
        up_max(&mut r.vp_dx_lp, fd_derivative(vp, Axis::X, 1)?.lp_norm(p)?);
        up_max(&mut r.vp_dz_lp, fd_derivative(vp, Axis::Z, 1)?.lp_norm(p)?);
        let jump = Field1D::new(Arc::new(vp.grid.z.clone()), vp.jump())?;
        up_max(&mut r.vp_jump_w1p, w1p_norm(&jump, p)?);
        let kh = &profiles.vkh.snapshots[k];
        up_max(&mut r.vkh_lp, kh.lp_norm(p)?);
        up_max(&mut r.vkh_dx_lp, fd_derivative(kh, Axis::X, 1)?.lp_norm(p)?);
        up_max(&mut r.vkh_dz_lp, fd_derivative(kh, Axis::Z, 1)?.lp_norm(p)?);
        let vb = &profiles.vb.snapshots[k];
        up_max(&mut r.vb_w1p_x, w1p_norm_2d(vb, Axis::X, p)?);
        up_max(&mut r.vb_w1p_z, w1p_norm_2d(vb, Axis::Z, p)?);
    }
    Ok(r)
}
