//! Separable PCHIP transfer of two-sided fields between grids.
//!
//! A target node `(x, z)` reads the source at `(x·x_scale, z·z_scale)`; with
//! `x_scale = ε^{-1/2}` this maps physical positions to fast variables.
//! Interpolation in x is one-sided, so values never leak across `x = 0`.
//! Points outside the source domain read `0` (all profiles decay there).

use std::sync::Arc;

use super::field::{Grid2D, TwoSidedField2D};
use super::pchip::{pchip_slopes, PchipPlan};

/// Interpolates `src` onto `target`.
pub fn remap_two_sided(src: &TwoSidedField2D, x_scale: f64, z_scale: f64, target: &Arc<Grid2D>) -> TwoSidedField2D {
    let sg = &src.grid;
    let (snx, snz, si0) = (sg.nx(), sg.nz(), sg.interface());
    let (tnx, tnz, ti0) = (target.nx(), target.nz(), target.interface());
    let tz: Vec<f64> = target.z.nodes().iter().map(|z| z * z_scale).collect();
    let zplan = PchipPlan::new(sg.z.nodes(), &tz);

    // stage 1: every source column, interpolated to the target z-levels
    let interp_col = |col: &[f64]| -> Vec<f64> {
        let d = pchip_slopes(sg.z.nodes(), col);
        let mut out = vec![0.0; tnz];
        zplan.apply(col, &d, 0.0, &mut out);
        out
    };
    let mut col = vec![0.0; snz];
    let mut stage = vec![0.0; tnz * snx];
    for ix in 0..snx {
        if ix == si0 {
            continue;
        }
        for (iz, c) in col.iter_mut().enumerate() {
            *c = src.values[sg.idx(ix, iz)];
        }
        let v = interp_col(&col);
        for iz in 0..tnz {
            stage[iz * snx + ix] = v[iz];
        }
    }
    let left = interp_col(&src.left_trace);
    let right = interp_col(&src.right_trace);
    let dleft = interp_col(&src.left_xderiv_trace);
    let dright = interp_col(&src.right_xderiv_trace);

    // stage 2: along x, one side at a time
    let sx = sg.x.nodes();
    let tx: Vec<f64> = target.x.nodes().iter().map(|x| x * x_scale).collect();
    let lplan = PchipPlan::new(&sx[..=si0], &tx[..=ti0]);
    let rplan = PchipPlan::new(&sx[si0..], &tx[ti0..]);
    let mut out = TwoSidedField2D::zeros(target.clone());
    let mut lrow = vec![0.0; si0 + 1];
    let mut rrow = vec![0.0; snx - si0];
    let mut lout = vec![0.0; ti0 + 1];
    let mut rout = vec![0.0; tnx - ti0];
    for iz in 0..tnz {
        let srow = &stage[iz * snx..(iz + 1) * snx];
        lrow[..si0].copy_from_slice(&srow[..si0]);
        lrow[si0] = left[iz];
        rrow[0] = right[iz];
        rrow[1..].copy_from_slice(&srow[si0 + 1..]);
        let dl = pchip_slopes(&sx[..=si0], &lrow);
        let dr = pchip_slopes(&sx[si0..], &rrow);
        lplan.apply(&lrow, &dl, 0.0, &mut lout);
        rplan.apply(&rrow, &dr, 0.0, &mut rout);
        let orow = &mut out.values[iz * tnx..(iz + 1) * tnx];
        orow[..ti0].copy_from_slice(&lout[..ti0]);
        orow[ti0 + 1..].copy_from_slice(&rout[1..]);
        out.left_trace[iz] = lout[ti0];
        out.right_trace[iz] = rout[0];
        out.left_xderiv_trace[iz] = dleft[iz] * x_scale;
        out.right_xderiv_trace[iz] = dright[iz] * x_scale;
    }
    out.sync_interface();
    out
}
