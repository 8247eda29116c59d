//! Monotone piecewise-cubic Hermite interpolation.

/// PCHIP slopes at the nodes (Fritsch–Butland harmonic mean in the interior,
/// shape-preserving three-point formula at the ends).
pub fn pchip_slopes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    assert!(n >= 2 && ys.len() == n);
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let del: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
    let mut d = vec![0.0; n];
    if n == 2 {
        d[0] = del[0];
        d[1] = del[0];
        return d;
    }
    for i in 1..n - 1 {
        if del[i - 1] * del[i] > 0.0 {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
        }
    }
    d[0] = end_slope(h[0], h[1], del[0], del[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
    d
}

fn end_slope(h0: f64, h1: f64, del0: f64, del1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if d.signum() != del0.signum() {
        0.0
    } else if del0.signum() != del1.signum() && d.abs() > 3.0 * del0.abs() {
        3.0 * del0
    } else {
        d
    }
}

/// A PCHIP interpolant over fixed nodes.
#[derive(Debug, Clone)]
pub struct Pchip<'a> {
    xs: &'a [f64],
    ys: &'a [f64],
    d: Vec<f64>,
}

impl<'a> Pchip<'a> {
    pub fn new(xs: &'a [f64], ys: &'a [f64]) -> Self {
        let d = pchip_slopes(xs, ys);
        Self { xs, ys, d }
    }

    /// Value at `x`; `None` outside `[xs[0], xs[n−1]]`.
    pub fn eval(&self, x: f64) -> Option<f64> {
        let n = self.xs.len();
        if !(x >= self.xs[0] && x <= self.xs[n - 1]) {
            return None;
        }
        let i = self.xs.partition_point(|&v| v <= x).saturating_sub(1).min(n - 2);
        Some(self.eval_in(i, x))
    }

    #[inline]
    fn eval_in(&self, i: usize, x: f64) -> f64 {
        let h = self.xs[i + 1] - self.xs[i];
        let s = (x - self.xs[i]) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.ys[i] + h10 * h * self.d[i] + h01 * self.ys[i + 1] + h11 * h * self.d[i + 1]
    }

    /// Values at many points; points outside the node range give `outside`.
    pub fn eval_many(&self, queries: &[f64], outside: f64) -> Vec<f64> {
        queries.iter().map(|&q| self.eval(q).unwrap_or(outside)).collect()
    }
}

/// Precomputed bracket and local coordinate of query points, reusable across
/// many value arrays on the same nodes.
#[derive(Debug, Clone)]
pub struct PchipPlan {
    /// `(interval, s, h)` per query; `None` when outside.
    slots: Vec<Option<(usize, f64, f64)>>,
}

impl PchipPlan {
    pub fn new(xs: &[f64], queries: &[f64]) -> Self {
        let n = xs.len();
        let slots = queries
            .iter()
            .map(|&x| {
                if !(x >= xs[0] && x <= xs[n - 1]) {
                    return None;
                }
                let i = xs.partition_point(|&v| v <= x).saturating_sub(1).min(n - 2);
                let h = xs[i + 1] - xs[i];
                Some((i, (x - xs[i]) / h, h))
            })
            .collect();
        Self { slots }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Interpolates `ys` (with slopes `d`) at the planned queries into `out`.
    pub fn apply(&self, ys: &[f64], d: &[f64], outside: f64, out: &mut [f64]) {
        for (o, slot) in out.iter_mut().zip(&self.slots) {
            *o = match *slot {
                None => outside,
                Some((i, s, h)) => {
                    let (s2, s3) = (s * s, s * s * s);
                    (2.0 * s3 - 3.0 * s2 + 1.0) * ys[i]
                        + (s3 - 2.0 * s2 + s) * h * d[i]
                        + (-2.0 * s3 + 3.0 * s2) * ys[i + 1]
                        + (s3 - s2) * h * d[i + 1]
                }
            };
        }
    }
}
