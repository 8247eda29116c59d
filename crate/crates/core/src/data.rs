//! Initial data `(u0, v0)` and the interface geometry `ψ(t,z) = t·u0(z)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::{Field1D, Grid1D, Grid2D, LpIntegrable, Side, TwoSidedField1D, TwoSidedField2D};

/// Value and first two derivatives of a function of one variable.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Jet1 {
    pub f: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Value and derivatives up to order two of a function of `(x, z)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Jet2 {
    pub f: f64,
    pub fx: f64,
    pub fz: f64,
    pub fxx: f64,
    pub fxz: f64,
    pub fzz: f64,
}

type ScalarFn = Arc<dyn Fn(f64) -> Jet1 + Send + Sync>;
type SidedFn = Arc<dyn Fn(Side, f64, f64) -> Jet2 + Send + Sync>;

/// Initial shear `u0(z)` and two-sided transversal velocity `v0_±(x, z)`.
///
/// Both are given analytically with derivatives so that residuals can use
/// exact slow-variable derivatives.
#[derive(Clone)]
pub struct InitialData {
    name: String,
    u0: ScalarFn,
    v0: SidedFn,
}

impl fmt::Debug for InitialData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InitialData").field("name", &self.name).finish()
    }
}

/// Probe levels used when validating data.
const PROBE_DEPTH: f64 = 8.0;
const PROBE_STEP: f64 = 1.0 / 64.0;

impl InitialData {
    /// Wraps analytic data without validation; see [`InitialData::validated`].
    pub fn new(
        name: impl Into<String>,
        u0: impl Fn(f64) -> Jet1 + Send + Sync + 'static,
        v0: impl Fn(Side, f64, f64) -> Jet2 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            u0: Arc::new(u0),
            v0: Arc::new(v0),
        }
    }

    /// Like [`InitialData::new`] but rejects data that break the standing
    /// hypotheses: a nonzero velocity jump across `x = 0`, a continuous
    /// x-derivative there, and finite discrete `W^{2,p}` norms.
    pub fn validated(
        name: impl Into<String>,
        u0: impl Fn(f64) -> Jet1 + Send + Sync + 'static,
        v0: impl Fn(Side, f64, f64) -> Jet2 + Send + Sync + 'static,
    ) -> Result<Self> {
        let d = Self::new(name, u0, v0);
        d.validate()?;
        Ok(d)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn u0(&self, z: f64) -> Jet1 {
        (self.u0)(z)
    }

    pub fn v0(&self, side: Side, x: f64, z: f64) -> Jet2 {
        (self.v0)(side, x, z)
    }

    /// `v0` at an interior point (side taken from the sign of `x`).
    pub fn v0_at(&self, x: f64, z: f64) -> Jet2 {
        (self.v0)(Side::of(x), x, z)
    }

    /// `[v0]_{x=0}(z) = v0_+(0,z) − v0_−(0,z)`.
    pub fn jump_v0(&self, z: f64) -> f64 {
        self.v0(Side::Plus, 0.0, z).f - self.v0(Side::Minus, 0.0, z).f
    }

    /// z-derivative of the jump.
    pub fn jump_v0_dz(&self, z: f64) -> Jet1 {
        let p = self.v0(Side::Plus, 0.0, z);
        let m = self.v0(Side::Minus, 0.0, z);
        Jet1 {
            f: p.f - m.f,
            d1: p.fz - m.fz,
            d2: p.fzz - m.fzz,
        }
    }

    /// `[∂_x v0]_{x=0}(z)`.
    pub fn jump_v0_dx(&self, z: f64) -> f64 {
        self.v0(Side::Plus, 0.0, z).fx - self.v0(Side::Minus, 0.0, z).fx
    }

    /// The jump of the wall trace, `[v0(·,0)]_{x=0}`.
    pub fn corner_jump(&self) -> f64 {
        self.jump_v0(0.0)
    }

    pub fn u0_field(&self, grid: Arc<Grid1D>) -> Field1D {
        Field1D::from_fn(grid, |z| self.u0(z).f)
    }

    pub fn jump_field(&self, grid: Arc<Grid1D>) -> Field1D {
        Field1D::from_fn(grid, |z| self.jump_v0(z))
    }

    /// The wall trace `x ↦ v0(x, 0)` with both one-sided values at 0.
    pub fn trace_at_wall(&self, grid: Arc<Grid1D>) -> Result<TwoSidedField1D> {
        TwoSidedField1D::from_fn(grid, |s, x| self.v0(s, x, 0.0).f)
    }

    /// `v0` on a two-sided grid, with exact x-derivative traces.
    pub fn v0_field(&self, grid: Arc<Grid2D>) -> TwoSidedField2D {
        let mut f = TwoSidedField2D::from_fn(grid.clone(), |s, x, z| self.v0(s, x, z).f);
        for (iz, &z) in grid.z.nodes().iter().enumerate() {
            f.left_xderiv_trace[iz] = self.v0(Side::Minus, 0.0, z).fx;
            f.right_xderiv_trace[iz] = self.v0(Side::Plus, 0.0, z).fx;
        }
        f
    }

    /// Checks the standing hypotheses on the data.
    pub fn validate(&self) -> Result<()> {
        let n = (PROBE_DEPTH / PROBE_STEP) as usize;
        let zs: Vec<f64> = (0..=n).map(|i| i as f64 * PROBE_STEP).collect();
        let max_jump = zs.iter().fold(0.0_f64, |m, &z| m.max(self.jump_v0(z).abs()));
        if !(max_jump > 1e-12) {
            return Err(Error::InvalidData(format!(
                "preset '{}' violates the jump hypothesis: [v0] at x=0 vanishes identically",
                self.name
            )));
        }
        let max_dx_jump = zs.iter().fold(0.0_f64, |m, &z| m.max(self.jump_v0_dx(z).abs()));
        if max_dx_jump > 1e-10 {
            return Err(Error::InvalidData(format!(
                "preset '{}' violates the matching hypothesis: [∂_x v0] at x=0 reaches {max_dx_jump:.3e}",
                self.name
            )));
        }
        let grid = Arc::new(Grid1D::half_line(PROBE_DEPTH, PROBE_STEP)?);
        for (k, label) in [(0, "u0"), (1, "u0'"), (2, "u0''")] {
            let f = Field1D::from_fn(grid.clone(), |z| {
                let j = self.u0(z);
                [j.f, j.d1, j.d2][k]
            });
            let norm = f.lp_norm(2.0)?;
            if !norm.is_finite() {
                return Err(Error::InvalidData(format!("{label} has no finite discrete L² norm")));
            }
        }
        let sample = [(-1.0, 0.5), (0.0, 0.0), (1.0, 0.5), (0.5, 2.0)];
        for (x, z) in sample {
            for s in [Side::Minus, Side::Plus] {
                let j = self.v0(s, x, z);
                if ![j.f, j.fx, j.fz, j.fxx, j.fxz, j.fzz].iter().all(|v| v.is_finite()) {
                    return Err(Error::InvalidData(format!("v0 is not finite near ({x}, {z})")));
                }
            }
        }
        Ok(())
    }
}

/// The straightening map `ψ(t,z) = t·u0(z)` and the quantities derived from it.
#[derive(Clone)]
pub struct InterfaceGeometry {
    u0: ScalarFn,
}

impl fmt::Debug for InterfaceGeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InterfaceGeometry").finish_non_exhaustive()
    }
}

impl InterfaceGeometry {
    pub fn from_data(data: &InitialData) -> Self {
        Self { u0: data.u0.clone() }
    }

    pub fn psi(&self, t: f64, z: f64) -> f64 {
        t * (self.u0)(z).f
    }

    pub fn psi_z(&self, t: f64, z: f64) -> f64 {
        t * (self.u0)(z).d1
    }

    pub fn psi_zz(&self, t: f64, z: f64) -> f64 {
        t * (self.u0)(z).d2
    }

    /// `∂_zψ` at the wall.
    pub fn psi_z0(&self, t: f64) -> f64 {
        self.psi_z(t, 0.0)
    }

    /// Rescaled time `t̃ = ∫₀^t (1 + s²u0′(z)²) ds = t + t³u0′(z)²/3`.
    pub fn t_tilde(&self, t: f64, z: f64) -> f64 {
        let d = (self.u0)(z).d1;
        t + t * t * t * d * d / 3.0
    }

    /// `∂_z t̃ = (2/3)t³u0′u0″`.
    pub fn t_tilde_dz(&self, t: f64, z: f64) -> f64 {
        let j = (self.u0)(z);
        2.0 * t * t * t * j.d1 * j.d2 / 3.0
    }
}
