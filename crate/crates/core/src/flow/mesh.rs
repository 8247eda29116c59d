//! Layer-adapted physical meshes.
//!
//! The mesh is fine (spacing `√ε / cells_per_layer`) near the wall and in an
//! x-band that covers the interface plus the distance the wall layer drags
//! it within `[0, T]`, then grows geometrically to the coarse spacing.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::numerics::{GradedAxis, Grid1D, Grid2D};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshConfig {
    /// Physical half-width in x.
    pub length_x: f64,
    /// Physical depth in z.
    pub length_z: f64,
    /// Spacing away from the layers.
    pub coarse_h: f64,
    /// Cells per layer thickness `√ε` in the fine region.
    pub cells_per_layer: f64,
    /// Extent of the fine region beyond the layers, in units of `√ε`.
    pub layer_extent: f64,
    /// Geometric growth ratio between fine and coarse spacing.
    pub ratio: f64,
}

impl Default for MeshConfig {
    fn default() -> Self {
        Self {
            length_x: 8.0,
            length_z: 8.0,
            coarse_h: 1.0 / 64.0,
            cells_per_layer: 8.0,
            layer_extent: 12.0,
            ratio: 1.06,
        }
    }
}

impl MeshConfig {
    /// Fine spacing for `epsilon`.
    pub fn fine_h(&self, epsilon: f64) -> f64 {
        (epsilon.sqrt() / self.cells_per_layer).min(self.coarse_h)
    }
}

/// Builds the mesh for `epsilon`; `drift` is the signed distance
/// `T·(u_wall − u0(0))` by which near-wall structures move in x.
pub fn physical_mesh(config: &MeshConfig, epsilon: f64, drift: f64) -> Result<Arc<Grid2D>> {
    if !(epsilon > 0.0) {
        return domain(format!("viscosity must be positive, got {epsilon}"));
    }
    let fine = config.fine_h(epsilon);
    let band = config.layer_extent * epsilon.sqrt();
    let x = Grid1D::graded(&GradedAxis {
        left: config.length_x,
        right: config.length_x,
        fine_left: band + (-drift).max(0.0),
        fine_right: band + drift.max(0.0),
        fine,
        coarse: config.coarse_h,
        ratio: config.ratio,
    })?;
    let z = Grid1D::graded(&GradedAxis {
        left: 0.0,
        right: config.length_z,
        fine_left: 0.0,
        fine_right: band,
        fine,
        coarse: config.coarse_h,
        ratio: config.ratio,
    })?;
    Ok(Arc::new(Grid2D::new(x, z)?))
}
