//! Finite-difference stencils on possibly non-uniform nodes.
//!
//! Interior nodes use the three-point central stencil. Boundary nodes use
//! one-sided stencils of second order (three points for the first
//! derivative, four for the second). On two-sided fields the interface is
//! treated as a boundary from each side, so nothing is differenced across it.

use std::sync::Arc;

use super::field::{Field1D, Grid2D, TwoSidedField2D};
use super::grid::Grid1D;
use crate::error::{Error, Result};

/// Finite-difference weights (Fornberg's recursion).
///
/// Returns `w[k][j]`: the weight of `f(xs[j])` in the `k`-th derivative at
/// `x0`, for `k = 0..=m`.
pub fn fornberg(x0: f64, xs: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Precomputed derivative stencils for every node of an axis.
#[derive(Debug, Clone)]
pub struct Stencil {
    start: Vec<usize>,
    weights: Vec<[f64; 4]>,
    len: Vec<u8>,
}

impl Stencil {
    /// Stencils of derivative `order` (1 or 2) on `nodes`.
    pub fn new(nodes: &[f64], order: usize) -> Result<Self> {
        let n = nodes.len();
        if n < 3 {
            return Err(Error::Grid(format!("need at least 3 nodes for a derivative, got {n}")));
        }
        if order != 1 && order != 2 {
            return Err(Error::Domain(format!("derivative order {order} not supported")));
        }
        let width = if order == 2 && n >= 4 { 4 } else { 3 };
        let mut st = Self {
            start: Vec::with_capacity(n),
            weights: Vec::with_capacity(n),
            len: Vec::with_capacity(n),
        };
        for i in 0..n {
            let (s, w) = if i == 0 {
                (0, width)
            } else if i == n - 1 {
                (n - width, width)
            } else {
                (i - 1, 3)
            };
            let c = fornberg(nodes[i], &nodes[s..s + w], order);
            let mut arr = [0.0; 4];
            arr[..w].copy_from_slice(&c[order]);
            st.start.push(s);
            st.weights.push(arr);
            st.len.push(w as u8);
        }
        Ok(st)
    }

    /// Derivative at node `i` of values read through `f(j)`.
    #[inline]
    pub fn apply_at(&self, i: usize, f: impl Fn(usize) -> f64) -> f64 {
        let s = self.start[i];
        let w = &self.weights[i];
        let mut acc = 0.0;
        for k in 0..self.len[i] as usize {
            acc += w[k] * f(s + k);
        }
        acc
    }

    /// Derivative of a contiguous slice.
    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        (0..self.start.len()).map(|i| self.apply_at(i, |j| f[j])).collect()
    }
}

/// Derivative of plain node values on `nodes`.
pub fn derivative_values(nodes: &[f64], f: &[f64], order: usize) -> Result<Vec<f64>> {
    Ok(Stencil::new(nodes, order)?.apply(f))
}

/// Derivative of a 1D field.
pub fn fd_derivative_1d(field: &Field1D, order: usize) -> Result<Field1D> {
    let values = derivative_values(field.grid.nodes(), &field.values, order)?;
    Ok(Field1D {
        grid: field.grid.clone(),
        values,
    })
}

/// Axis of a 2D field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Z,
}

/// Per-side x-stencils of a two-sided grid: one for `x ≤ 0`, one for `x ≥ 0`.
#[derive(Debug, Clone)]
pub struct SplitStencil {
    pub left: Stencil,
    pub right: Stencil,
    pub interface: usize,
}

impl SplitStencil {
    pub fn new(x: &Grid1D, interface: usize, order: usize) -> Result<Self> {
        let nodes = x.nodes();
        Ok(Self {
            left: Stencil::new(&nodes[..=interface], order)?,
            right: Stencil::new(&nodes[interface..], order)?,
            interface,
        })
    }

    /// Applies to one z-row: `row` holds node values, `(l, r)` the traces.
    /// Returns the derivative row plus the two one-sided interface values.
    pub fn apply_row(&self, row: &[f64], l: f64, r: f64, out: &mut [f64]) -> (f64, f64) {
        let i0 = self.interface;
        for (i, o) in out.iter_mut().enumerate().take(i0) {
            *o = self
                .left
                .apply_at(i, |j| if j == i0 { l } else { row[j] });
        }
        let dl = self
            .left
            .apply_at(i0, |j| if j == i0 { l } else { row[j] });
        let dr = self
            .right
            .apply_at(0, |j| if j == 0 { r } else { row[i0 + j] });
        for i in i0 + 1..row.len() {
            out[i] = self
                .right
                .apply_at(i - i0, |j| if j == 0 { r } else { row[i0 + j] });
        }
        out[i0] = 0.5 * (dl + dr);
        (dl, dr)
    }
}

/// Derivative of a two-sided field along an axis.
///
/// Along x, each side is differenced separately and the two one-sided
/// derivatives at `x = 0` become the traces of the result. Along z, the
/// trace columns are differenced like any other column.
pub fn fd_derivative(field: &TwoSidedField2D, axis: Axis, order: usize) -> Result<TwoSidedField2D> {
    let g: &Arc<Grid2D> = &field.grid;
    let (nx, nz) = (g.nx(), g.nz());
    let mut out = TwoSidedField2D::zeros(g.clone());
    match axis {
        Axis::X => {
            let st = SplitStencil::new(&g.x, g.interface(), order)?;
            for iz in 0..nz {
                let row = field.row(iz);
                let o = &mut out.values[iz * nx..(iz + 1) * nx];
                let (dl, dr) = st.apply_row(row, field.left_trace[iz], field.right_trace[iz], o);
                out.left_trace[iz] = dl;
                out.right_trace[iz] = dr;
            }
            out.fill_xderiv_traces();
        }
        Axis::Z => {
            let st = Stencil::new(g.z.nodes(), order)?;
            for iz in 0..nz {
                let s = st.start[iz];
                let w = st.weights[iz];
                let len = st.len[iz] as usize;
                let o = &mut out.values[iz * nx..(iz + 1) * nx];
                for (k, &wk) in w.iter().enumerate().take(len) {
                    let src = &field.values[(s + k) * nx..(s + k + 1) * nx];
                    for (a, b) in o.iter_mut().zip(src) {
                        *a += wk * b;
                    }
                }
            }
            out.left_trace = st.apply(&field.left_trace);
            out.right_trace = st.apply(&field.right_trace);
            out.left_xderiv_trace = st.apply(&field.left_xderiv_trace);
            out.right_xderiv_trace = st.apply(&field.right_xderiv_trace);
            out.sync_interface();
        }
    }
    Ok(out)
}
