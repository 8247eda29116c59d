//! The inviscid solution. Straightened coordinates make it stationary; in the
//! original coordinates each z-row is sheared by `t·u0(z)`.

use std::sync::Arc;

use crate::data::InitialData;
use crate::error::{domain, Result};
use crate::numerics::{Grid2D, Pchip, Side, TwoSidedField2D};

/// `v⁰(t) = v0` in straightened coordinates.
pub fn euler_solution(data: &InitialData, grid: &Arc<Grid2D>) -> TwoSidedField2D {
    data.v0_field(grid.clone())
}

/// `v⁰(t,x,z) = v0(x − t·u0(z), z)` on a fixed grid, with the jump located
/// at `x = shift[iz]` inside a row.
#[derive(Debug, Clone)]
pub struct ShiftedEulerField {
    pub grid: Arc<Grid2D>,
    pub t: f64,
    pub shift: Vec<f64>,
    /// Node values (z-major); nodes exactly at the shift hold the mean.
    pub values: Vec<f64>,
    pub left_limit: Vec<f64>,
    pub right_limit: Vec<f64>,
}

/// Evaluates the sheared field by one-sided monotone cubic interpolation of
/// the sampled `v0` rows. Points dragged beyond the grid are clamped to the
/// edge value.
pub fn euler_solution_original(data: &InitialData, grid: &Arc<Grid2D>, t: f64) -> Result<ShiftedEulerField> {
    let v0 = data.v0_field(grid.clone());
    let (nx, nz, i0) = (grid.nx(), grid.nz(), grid.interface());
    let xs = grid.x.nodes();
    let (xl, xr) = (&xs[..=i0], &xs[i0..]);
    let mut out = ShiftedEulerField {
        grid: grid.clone(),
        t,
        shift: Vec::with_capacity(nz),
        values: vec![0.0; nx * nz],
        left_limit: v0.left_trace.clone(),
        right_limit: v0.right_trace.clone(),
    };
    let mut clamped = 0usize;
    let mut lrow = vec![0.0; i0 + 1];
    let mut rrow = vec![0.0; nx - i0];
    for iz in 0..nz {
        let s = t * data.u0(grid.z.node(iz)).f;
        out.shift.push(s);
        let row = v0.row(iz);
        lrow[..i0].copy_from_slice(&row[..i0]);
        lrow[i0] = v0.left_trace[iz];
        rrow[0] = v0.right_trace[iz];
        rrow[1..].copy_from_slice(&row[i0 + 1..]);
        let left = Pchip::new(xl, &lrow);
        let right = Pchip::new(xr, &rrow);
        for (ix, &x) in xs.iter().enumerate() {
            let xi = x - s;
            let v = if xi == 0.0 {
                0.5 * (lrow[i0] + rrow[0])
            } else if xi < 0.0 {
                left.eval(xi).unwrap_or_else(|| {
                    clamped += 1;
                    lrow[0]
                })
            } else {
                right.eval(xi).unwrap_or_else(|| {
                    clamped += 1;
                    rrow[nx - i0 - 1]
                })
            };
            out.values[iz * nx + ix] = v;
        }
    }
    if clamped > 0 {
        log::warn!("{clamped} sheared points fell outside the grid and were clamped");
    }
    Ok(out)
}

impl ShiftedEulerField {
    /// Row-wise trapezoid quadrature with the cell containing the jump split
    /// at the jump, each part using its one-sided limit.
    pub fn lp_integral(&self, p: f64) -> Result<f64> {
        self.check_p(p)?;
        let g = &self.grid;
        let nx = g.nx();
        let xs = g.x.nodes();
        let wz = g.z.trapezoid_weights();
        let mut total = 0.0;
        for (iz, &w) in wz.iter().enumerate() {
            let s = self.shift[iz];
            let row = &self.values[iz * nx..(iz + 1) * nx];
            let mut pts: Vec<(f64, f64)> = Vec::with_capacity(nx + 2);
            let mut placed = false;
            for (ix, &x) in xs.iter().enumerate() {
                if !placed && x >= s {
                    pts.push((s, self.left_limit[iz]));
                    pts.push((s, self.right_limit[iz]));
                    placed = true;
                    if x == s {
                        continue;
                    }
                }
                pts.push((x, row[ix]));
            }
            let f = |v: f64| v.abs().powf(p);
            let s_row: f64 = pts.windows(2).map(|q| 0.5 * (q[1].0 - q[0].0) * (f(q[0].1) + f(q[1].1))).sum();
            total += w * s_row;
        }
        Ok(total)
    }

    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        Ok(self.lp_integral(p)?.powf(1.0 / p))
    }

    fn check_p(&self, p: f64) -> Result<()> {
        if p > 1.0 && p.is_finite() {
            Ok(())
        } else {
            domain(format!("norm exponent p = {p} must lie in (1, ∞)"))
        }
    }

    /// The value at a node, side-aware when the node sits on the jump.
    pub fn side_value(&self, ix: usize, iz: usize, side: Side) -> f64 {
        let x = self.grid.x.node(ix);
        if x == self.shift[iz] {
            match side {
                Side::Minus => self.left_limit[iz],
                Side::Plus => self.right_limit[iz],
            }
        } else {
            self.values[iz * self.grid.nx() + ix]
        }
    }
}
