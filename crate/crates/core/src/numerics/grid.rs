use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A one-dimensional, strictly increasing set of nodes.
///
/// Most grids are uniform. Physical-scale grids for small viscosities are
/// graded (fine inside the layers, coarse in the bulk); `spacing()` returns
/// `None` for those.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    nodes: Vec<f64>,
    spacing: Option<f64>,
}

impl Grid1D {
    /// `n_points` nodes `origin + i·spacing`.
    pub fn uniform(origin: f64, spacing: f64, n_points: usize) -> Result<Self> {
        if n_points < 3 {
            return Err(Error::Grid(format!("need at least 3 nodes, got {n_points}")));
        }
        if !(spacing > 0.0) || !spacing.is_finite() || !origin.is_finite() {
            return Err(Error::Grid(format!("bad spacing {spacing} or origin {origin}")));
        }
        let nodes = (0..n_points).map(|i| origin + i as f64 * spacing).collect();
        Ok(Self {
            nodes,
            spacing: Some(spacing),
        })
    }

    /// Uniform grid on `[0, length]`; `length / spacing` must be an integer.
    pub fn half_line(length: f64, spacing: f64) -> Result<Self> {
        let n = cells(length, spacing)?;
        Self::uniform(0.0, spacing, n + 1)
    }

    /// Uniform grid on `[-half_length, half_length]` with a node at 0.
    pub fn symmetric(half_length: f64, spacing: f64) -> Result<Self> {
        let n = cells(half_length, spacing)?;
        let mut g = Self::uniform(-(n as f64) * spacing, spacing, 2 * n + 1)?;
        // the centre node is exactly zero
        g.nodes[n] = 0.0;
        Ok(g)
    }

    /// Arbitrary strictly increasing nodes.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::Grid(format!("need at least 3 nodes, got {}", nodes.len())));
        }
        if nodes.iter().any(|x| !x.is_finite()) {
            return Err(Error::Grid("non-finite node".into()));
        }
        if nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Grid("nodes must be strictly increasing".into()));
        }
        Ok(Self {
            nodes,
            spacing: None,
        })
    }

    /// Graded grid on `[-left, right]` with a node at 0: spacing `fine` on
    /// `[-fine_left, fine_right]`, geometric growth by `ratio` up to `coarse`,
    /// then uniform `coarse` out to the ends. `left` may be 0 (half-line).
    pub fn graded(axis: &GradedAxis) -> Result<Self> {
        axis.validate()?;
        let right = graded_ray(axis.right, axis.fine_right, axis.fine, axis.coarse, axis.ratio);
        let mut nodes: Vec<f64> = Vec::with_capacity(2 * right.len());
        if axis.left > 0.0 {
            let left = graded_ray(axis.left, axis.fine_left, axis.fine, axis.coarse, axis.ratio);
            nodes.extend(left.iter().rev().map(|x| -x));
            nodes.pop(); // shared zero
        }
        nodes.extend(right);
        let mut g = Self::from_nodes(nodes)?;
        if let Some(h) = uniform_step(&g.nodes) {
            g.spacing = Some(h);
        }
        Ok(g)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> f64 {
        self.nodes[i]
    }

    pub fn origin(&self) -> f64 {
        self.nodes[0]
    }

    pub fn end(&self) -> f64 {
        self.nodes[self.nodes.len() - 1]
    }

    /// Extent of the grid, `end − origin`.
    pub fn truncation_length(&self) -> f64 {
        self.end() - self.origin()
    }

    /// The uniform spacing, if the grid is uniform.
    pub fn spacing(&self) -> Option<f64> {
        self.spacing
    }

    /// Smallest gap between neighbouring nodes.
    pub fn min_spacing(&self) -> f64 {
        self.spacing.unwrap_or_else(|| {
            self.nodes
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::INFINITY, f64::min)
        })
    }

    /// Composite trapezoid weights.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let n = self.nodes.len();
        let mut w = vec![0.0; n];
        for i in 0..n - 1 {
            let h = self.nodes[i + 1] - self.nodes[i];
            w[i] += 0.5 * h;
            w[i + 1] += 0.5 * h;
        }
        w
    }

    /// Index of the node exactly equal to `x`.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        self.nodes.binary_search_by(|n| n.total_cmp(&x)).ok()
    }

    /// Index `i` with `nodes[i] <= x <= nodes[i+1]`, or `None` outside.
    pub fn bracket(&self, x: f64) -> Option<usize> {
        let n = self.nodes.len();
        if !(x >= self.nodes[0] && x <= self.nodes[n - 1]) {
            return None;
        }
        let i = self.nodes.partition_point(|&v| v <= x);
        Some(i.saturating_sub(1).min(n - 2))
    }

    /// The same grid with every node multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            nodes: self.nodes.iter().map(|x| x * factor).collect(),
            spacing: self.spacing.map(|h| h * factor),
        }
    }
}

/// Parameters of a graded axis, see [`Grid1D::graded`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradedAxis {
    pub left: f64,
    pub right: f64,
    pub fine_left: f64,
    pub fine_right: f64,
    pub fine: f64,
    pub coarse: f64,
    pub ratio: f64,
}

impl GradedAxis {
    fn validate(&self) -> Result<()> {
        let ok = self.left >= 0.0
            && self.right > 0.0
            && self.fine_left >= 0.0
            && self.fine_right >= 0.0
            && self.fine > 0.0
            && self.coarse >= self.fine
            && self.ratio > 1.0
            && [self.left, self.right, self.fine_left, self.fine_right, self.coarse, self.ratio]
                .iter()
                .all(|v| v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::Grid(format!("inconsistent graded axis {self:?}")))
        }
    }
}

fn cells(length: f64, spacing: f64) -> Result<usize> {
    if !(length > 0.0 && spacing > 0.0) {
        return Err(Error::Grid(format!("length {length} and spacing {spacing} must be positive")));
    }
    let n = (length / spacing).round();
    if (n * spacing - length).abs() > 1e-9 * length {
        return Err(Error::Grid(format!(
            "length {length} is not a multiple of spacing {spacing}"
        )));
    }
    Ok(n as usize)
}

fn uniform_step(nodes: &[f64]) -> Option<f64> {
    let h = nodes[1] - nodes[0];
    nodes
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-12 * h.max(1.0))
        .then_some(h)
}

/// Nodes on `[0, length]` starting at 0: fine up to `fine_extent`, then
/// geometric growth, then coarse. The last node is exactly `length`.
fn graded_ray(length: f64, fine_extent: f64, fine: f64, coarse: f64, ratio: f64) -> Vec<f64> {
    let mut nodes = vec![0.0];
    let mut x = 0.0;
    let fine_extent = fine_extent.min(length);
    while x + fine <= fine_extent + 1e-12 * fine {
        x += fine;
        nodes.push(x);
    }
    let mut h = fine;
    loop {
        h = (h * ratio).min(coarse);
        if x + h >= length {
            break;
        }
        x += h;
        nodes.push(x);
    }
    // close the ray at `length`; a short last cell is merged into its neighbour
    // so no cell is smaller than the local step
    let last = *nodes.last().unwrap();
    if length - last < h * (1.0 - 1e-12) && nodes.len() > 1 && last > fine_extent + 1e-12 * fine {
        nodes.pop();
    }
    nodes.push(length);
    nodes
}
