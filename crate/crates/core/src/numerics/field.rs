use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::fd;
use super::grid::Grid1D;
use crate::error::{Error, Result};

/// Which side of the interface `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    /// `-1` for [`Side::Minus`], `+1` for [`Side::Plus`].
    pub fn sign(self) -> f64 {
        match self {
            Side::Minus => -1.0,
            Side::Plus => 1.0,
        }
    }

    pub fn of(x: f64) -> Side {
        if x < 0.0 {
            Side::Minus
        } else {
            Side::Plus
        }
    }
}

/// Tensor grid with the interface `x = 0` on a node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub x: Grid1D,
    pub z: Grid1D,
    interface: usize,
}

impl Grid2D {
    pub fn new(x: Grid1D, z: Grid1D) -> Result<Self> {
        let interface = x
            .index_of(0.0)
            .ok_or_else(|| Error::Grid("x-axis has no node at 0".into()))?;
        if interface < 2 || interface + 2 >= x.len() {
            return Err(Error::Grid("need at least two x-nodes on each side of 0".into()));
        }
        Ok(Self { x, z, interface })
    }

    /// Index of the node `x = 0`.
    pub fn interface(&self) -> usize {
        self.interface
    }

    pub fn nx(&self) -> usize {
        self.x.len()
    }

    pub fn nz(&self) -> usize {
        self.z.len()
    }

    /// Flat index; storage is z-major (each z-row is contiguous in x).
    #[inline]
    pub fn idx(&self, ix: usize, iz: usize) -> usize {
        iz * self.x.len() + ix
    }
}

/// Values on a [`Grid1D`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field1D {
    pub grid: Arc<Grid1D>,
    pub values: Vec<f64>,
}

impl Field1D {
    pub fn new(grid: Arc<Grid1D>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Grid(format!(
                "field has {} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite field value".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Arc<Grid1D>, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().iter().map(|&x| f(x)).collect();
        Self { grid, values }
    }

    pub fn zeros(grid: Arc<Grid1D>) -> Self {
        let n = grid.len();
        Self {
            grid,
            values: vec![0.0; n],
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        same_grid(&self.grid, &other.grid)?;
        Ok(Self {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// A function of `x` that may jump at `x = 0`; carries both one-sided values.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSidedField1D {
    pub grid: Arc<Grid1D>,
    /// Node values; the interface node holds the mean of the two traces.
    pub values: Vec<f64>,
    pub left: f64,
    pub right: f64,
    interface: usize,
}

impl TwoSidedField1D {
    pub fn from_fn(grid: Arc<Grid1D>, f: impl Fn(Side, f64) -> f64) -> Result<Self> {
        let interface = grid
            .index_of(0.0)
            .ok_or_else(|| Error::Grid("axis has no node at 0".into()))?;
        let left = f(Side::Minus, 0.0);
        let right = f(Side::Plus, 0.0);
        let values = grid
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                if i == interface {
                    0.5 * (left + right)
                } else {
                    f(Side::of(x), x)
                }
            })
            .collect();
        Ok(Self {
            grid,
            values,
            left,
            right,
            interface,
        })
    }

    pub fn interface(&self) -> usize {
        self.interface
    }

    /// Value at node `i`, taking the `side` trace at the interface.
    pub fn side_value(&self, i: usize, side: Side) -> f64 {
        if i == self.interface {
            match side {
                Side::Minus => self.left,
                Side::Plus => self.right,
            }
        } else {
            self.values[i]
        }
    }

    pub fn jump(&self) -> f64 {
        self.right - self.left
    }
}

/// A field on a [`Grid2D`] that may jump across `x = 0`.
///
/// Interior values live in `values` (z-major). At the interface column the
/// two one-sided limits are kept separately, together with the one-sided
/// x-derivatives; `values` there holds the trace mean.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSidedField2D {
    pub grid: Arc<Grid2D>,
    pub values: Vec<f64>,
    pub left_trace: Vec<f64>,
    pub right_trace: Vec<f64>,
    pub left_xderiv_trace: Vec<f64>,
    pub right_xderiv_trace: Vec<f64>,
}

impl TwoSidedField2D {
    pub fn zeros(grid: Arc<Grid2D>) -> Self {
        let (nx, nz) = (grid.nx(), grid.nz());
        Self {
            grid,
            values: vec![0.0; nx * nz],
            left_trace: vec![0.0; nz],
            right_trace: vec![0.0; nz],
            left_xderiv_trace: vec![0.0; nz],
            right_xderiv_trace: vec![0.0; nz],
        }
    }

    /// Builds the field from a side-aware point function; x-derivative traces
    /// come from one-sided second-order differences.
    pub fn from_fn(grid: Arc<Grid2D>, f: impl Fn(Side, f64, f64) -> f64) -> Self {
        let (nx, nz, i0) = (grid.nx(), grid.nz(), grid.interface());
        let mut out = Self::zeros(grid.clone());
        for iz in 0..nz {
            let z = grid.z.node(iz);
            for ix in 0..nx {
                if ix == i0 {
                    continue;
                }
                let x = grid.x.node(ix);
                out.values[grid.idx(ix, iz)] = f(Side::of(x), x, z);
            }
            out.left_trace[iz] = f(Side::Minus, 0.0, z);
            out.right_trace[iz] = f(Side::Plus, 0.0, z);
        }
        out.sync_interface();
        out.fill_xderiv_traces();
        out
    }

    /// Builds the field from a function of node indices. On the interface
    /// column `f` is called once per side; derivative traces are left zero.
    pub fn from_indexed(grid: Arc<Grid2D>, f: impl Fn(Side, usize, usize) -> f64) -> Self {
        let (nx, nz, i0) = (grid.nx(), grid.nz(), grid.interface());
        let mut out = Self::zeros(grid);
        for iz in 0..nz {
            for ix in 0..nx {
                if ix == i0 {
                    out.left_trace[iz] = f(Side::Minus, ix, iz);
                    out.right_trace[iz] = f(Side::Plus, ix, iz);
                    out.values[iz * nx + ix] = 0.5 * (out.left_trace[iz] + out.right_trace[iz]);
                } else {
                    out.values[iz * nx + ix] = f(if ix < i0 { Side::Minus } else { Side::Plus }, ix, iz);
                }
            }
        }
        out
    }

    /// Builds a field from values of a function that is continuous across
    /// `x = 0` (single-valued interface column).
    pub fn from_continuous(grid: Arc<Grid2D>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.nx() * grid.nz() {
            return Err(Error::Grid("value count does not match grid".into()));
        }
        let i0 = grid.interface();
        let trace: Vec<f64> = (0..grid.nz()).map(|iz| values[grid.idx(i0, iz)]).collect();
        let mut out = Self {
            grid,
            values,
            left_trace: trace.clone(),
            right_trace: trace,
            left_xderiv_trace: Vec::new(),
            right_xderiv_trace: Vec::new(),
        };
        out.fill_xderiv_traces();
        Ok(out)
    }

    /// Rewrites the interface column of `values` as the trace mean.
    pub fn sync_interface(&mut self) {
        let i0 = self.grid.interface();
        for iz in 0..self.grid.nz() {
            let k = self.grid.idx(i0, iz);
            self.values[k] = 0.5 * (self.left_trace[iz] + self.right_trace[iz]);
        }
    }

    /// Recomputes the one-sided x-derivative traces from node values.
    pub fn fill_xderiv_traces(&mut self) {
        let g = &self.grid;
        let (nz, i0) = (g.nz(), g.interface());
        let xs = g.x.nodes();
        let wl = fd::fornberg(0.0, &[xs[i0 - 2], xs[i0 - 1], xs[i0]], 1);
        let wr = fd::fornberg(0.0, &[xs[i0], xs[i0 + 1], xs[i0 + 2]], 1);
        self.left_xderiv_trace = (0..nz)
            .map(|iz| {
                wl[1][0] * self.values[g.idx(i0 - 2, iz)]
                    + wl[1][1] * self.values[g.idx(i0 - 1, iz)]
                    + wl[1][2] * self.left_trace[iz]
            })
            .collect();
        self.right_xderiv_trace = (0..nz)
            .map(|iz| {
                wr[1][0] * self.right_trace[iz]
                    + wr[1][1] * self.values[g.idx(i0 + 1, iz)]
                    + wr[1][2] * self.values[g.idx(i0 + 2, iz)]
            })
            .collect();
    }

    #[inline]
    pub fn get(&self, ix: usize, iz: usize) -> f64 {
        self.values[self.grid.idx(ix, iz)]
    }

    /// Value at a node, taking the `side` trace on the interface column.
    #[inline]
    pub fn side_value(&self, ix: usize, iz: usize, side: Side) -> f64 {
        if ix == self.grid.interface() {
            match side {
                Side::Minus => self.left_trace[iz],
                Side::Plus => self.right_trace[iz],
            }
        } else {
            self.values[self.grid.idx(ix, iz)]
        }
    }

    /// `right_trace − left_trace` per z-node.
    pub fn jump(&self) -> Vec<f64> {
        self.right_trace
            .iter()
            .zip(&self.left_trace)
            .map(|(r, l)| r - l)
            .collect()
    }

    /// Jump of the one-sided x-derivatives per z-node.
    pub fn xderiv_jump(&self) -> Vec<f64> {
        self.right_xderiv_trace
            .iter()
            .zip(&self.left_xderiv_trace)
            .map(|(r, l)| r - l)
            .collect()
    }

    /// Pointwise map applied to values and all trace arrays alike. Only
    /// meaningful for linear `f` as far as the derivative traces go.
    pub fn map_linear(&self, f: impl Fn(f64) -> f64) -> Self {
        let m = |v: &Vec<f64>| v.iter().map(|&a| f(a)).collect::<Vec<_>>();
        Self {
            grid: self.grid.clone(),
            values: m(&self.values),
            left_trace: m(&self.left_trace),
            right_trace: m(&self.right_trace),
            left_xderiv_trace: m(&self.left_xderiv_trace),
            right_xderiv_trace: m(&self.right_xderiv_trace),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map_linear(|v| c * v)
    }

    /// Pointwise (possibly nonlinear) map of values and traces; the
    /// x-derivative traces are recomputed by one-sided differences.
    pub fn map_pointwise(&self, f: impl Fn(f64) -> f64) -> Self {
        let m = |v: &Vec<f64>| v.iter().map(|&a| f(a)).collect::<Vec<_>>();
        let mut out = Self {
            grid: self.grid.clone(),
            values: m(&self.values),
            left_trace: m(&self.left_trace),
            right_trace: m(&self.right_trace),
            left_xderiv_trace: Vec::new(),
            right_xderiv_trace: Vec::new(),
        };
        out.sync_interface();
        out.fill_xderiv_traces();
        out
    }

    /// Pointwise combination of values and traces of two fields on the same
    /// grid; x-derivative traces are recomputed.
    pub fn zip_pointwise(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if !Arc::ptr_eq(&self.grid, &other.grid) && *self.grid != *other.grid {
            return Err(Error::Grid("fields live on different grids".into()));
        }
        let c = |u: &Vec<f64>, v: &Vec<f64>| u.iter().zip(v).map(|(&p, &q)| f(p, q)).collect::<Vec<_>>();
        let mut out = Self {
            grid: self.grid.clone(),
            values: c(&self.values, &other.values),
            left_trace: c(&self.left_trace, &other.left_trace),
            right_trace: c(&self.right_trace, &other.right_trace),
            left_xderiv_trace: Vec::new(),
            right_xderiv_trace: Vec::new(),
        };
        out.sync_interface();
        out.fill_xderiv_traces();
        Ok(out)
    }

    /// Elementwise `a·self + b·other`.
    pub fn axpby(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if !Arc::ptr_eq(&self.grid, &other.grid) && *self.grid != *other.grid {
            return Err(Error::Grid("fields live on different grids".into()));
        }
        let c = |u: &Vec<f64>, v: &Vec<f64>| {
            u.iter()
                .zip(v)
                .map(|(&p, &q)| a * p + b * q)
                .collect::<Vec<_>>()
        };
        Ok(Self {
            grid: self.grid.clone(),
            values: c(&self.values, &other.values),
            left_trace: c(&self.left_trace, &other.left_trace),
            right_trace: c(&self.right_trace, &other.right_trace),
            left_xderiv_trace: c(&self.left_xderiv_trace, &other.left_xderiv_trace),
            right_xderiv_trace: c(&self.right_xderiv_trace, &other.right_xderiv_trace),
        })
    }

    /// Multiplies every z-row (values, traces and derivative traces) by
    /// `coef[iz]`.
    pub fn scale_rows(&self, coef: &[f64]) -> Self {
        let nx = self.grid.nx();
        let mut out = self.clone();
        for (iz, &c) in coef.iter().enumerate() {
            out.values[iz * nx..(iz + 1) * nx].iter_mut().for_each(|v| *v *= c);
            out.left_trace[iz] *= c;
            out.right_trace[iz] *= c;
            out.left_xderiv_trace[iz] *= c;
            out.right_xderiv_trace[iz] *= c;
        }
        out
    }

    /// In-place `self += c·other` on values and all traces.
    pub fn add_scaled(&mut self, c: f64, other: &Self) {
        let acc = |a: &mut Vec<f64>, b: &Vec<f64>| a.iter_mut().zip(b).for_each(|(x, y)| *x += c * y);
        acc(&mut self.values, &other.values);
        acc(&mut self.left_trace, &other.left_trace);
        acc(&mut self.right_trace, &other.right_trace);
        acc(&mut self.left_xderiv_trace, &other.left_xderiv_trace);
        acc(&mut self.right_xderiv_trace, &other.right_xderiv_trace);
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.axpby(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpby(1.0, other, -1.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .chain(&self.left_trace)
            .chain(&self.right_trace)
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values
            .iter()
            .chain(&self.left_trace)
            .chain(&self.right_trace)
            .all(|v| v.is_finite())
    }

    /// z-row `iz` (contiguous in x).
    pub fn row(&self, iz: usize) -> &[f64] {
        let nx = self.grid.nx();
        &self.values[iz * nx..(iz + 1) * nx]
    }
}

fn same_grid(a: &Arc<Grid1D>, b: &Arc<Grid1D>) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::Grid("fields live on different grids".into()))
    }
}
