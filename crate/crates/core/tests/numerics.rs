mod common;

use std::sync::Arc;

use approx::assert_relative_eq;
use common::{heat_cn, lerp, simpson};
use layerflow::numerics::duhamel::duhamel_exponential_dz;
use layerflow::numerics::fd::Stencil;
use layerflow::numerics::norms::integral_2d;
use layerflow::numerics::pchip::pchip_slopes;
use layerflow::numerics::tridiag::solve_tridiagonal;
use layerflow::numerics::*;
use proptest::prelude::*;

// D(t, Z) from a Crank–Nicolson solve on [0, 40] with h = 1/400, 4000 steps.
const FROZEN_D: [(f64, f64, f64); 3] = [(1.0, 1.0, 0.2261452), (0.5, 0.25, 0.0911213), (1.0, 3.0, 0.0758870)];

#[test]
fn free_kernel_values() {
    assert_relative_eq!(heat_kernel_free(1.0 / (4.0 * std::f64::consts::PI), 0.0).unwrap(), 1.0, epsilon = 1e-14);
    let direct = (-1.0f64).exp() / (4.0 * std::f64::consts::PI).sqrt();
    assert_relative_eq!(heat_kernel_free(1.0, 2.0).unwrap(), direct, epsilon = 1e-15);
    assert_relative_eq!(direct, 0.103777, epsilon = 1e-6);
    assert!(heat_kernel_free(0.0, 1.0).is_err());
    assert!(heat_kernel_free(-1.0, 1.0).is_err());
}

#[test]
fn halfline_kernel_mass() {
    // ∫ G(t, Z; Z') dZ' by quadrature is erf(Z/√(4t)) and tends to 1
    let t = 0.5;
    let mut last = 0.0;
    for z in [0.0, 0.5, 1.0, 2.0, 4.0, 8.0] {
        let m = simpson(|zp| heat_kernel_halfline(t, z, zp).unwrap(), 0.0, z + 20.0, 8000);
        assert!((0.0..=1.0 + 1e-9).contains(&m));
        assert!(m >= last - 1e-12);
        last = m;
    }
    assert!(last > 1.0 - 1e-8);
    assert!(heat_kernel_halfline(1.0, -0.1, 1.0).is_err());
}

#[test]
fn duhamel_zero_at_start_and_matches_fd_oracle() {
    assert_eq!(duhamel_exponential(0.0, 1.3, 1).unwrap(), 0.0);
    for (t, z, frozen) in FROZEN_D {
        let (zs, u) = heat_cn(|_| 0.0, |z| (-z).exp(), 0.0, 0.0, 30.0, 3000, t, 1000);
        let oracle = lerp(&zs, &u, z);
        let d = duhamel_exponential(t, z, 1).unwrap();
        assert!((d - oracle).abs() <= 1e-3 * oracle, "D({t},{z}) = {d} vs oracle {oracle}");
        assert!((d - frozen).abs() < 1e-6, "D({t},{z}) = {d} vs frozen {frozen}");
    }
}

#[test]
fn duhamel_reflection_and_domain() {
    let a = duhamel_exponential(0.7, 1.1, 1).unwrap();
    let b = duhamel_exponential(0.7, -1.1, -1).unwrap();
    assert_eq!(a, b);
    assert!(duhamel_exponential(0.7, -1.0, 1).is_err());
    assert!(duhamel_exponential(0.7, 1.0, 2).is_err());
}

#[test]
fn duhamel_derivative_matches_difference_quotient() {
    let (t, z, h) = (0.8, 0.7, 1e-4);
    let fd = (duhamel_exponential(t, z + h, 1).unwrap() - duhamel_exponential(t, z - h, 1).unwrap()) / (2.0 * h);
    assert_relative_eq!(duhamel_exponential_dz(t, z).unwrap(), fd, max_relative = 1e-6);
}

#[test]
fn duhamel_many_times_consistent() {
    let times = [0.1, 0.4, 1.0];
    let many = duhamel_exponential_many(&times, 0.9, DuhamelQuantity::Value).unwrap();
    for (t, v) in times.iter().zip(&many) {
        assert_relative_eq!(*v, duhamel_exponential(*t, 0.9, 1).unwrap(), max_relative = 1e-6);
    }
}

#[test]
fn wall_profile_boundary_and_initial_values() {
    assert_relative_eq!(unit_wall_profile(0.9, 0.0).unwrap(), 1.0, epsilon = 1e-14);
    assert_relative_eq!(unit_wall_profile(0.0, 0.6).unwrap(), (-0.6f64).exp(), epsilon = 1e-14);
}

#[test]
fn norms_closed_forms() {
    let g = Arc::new(Grid1D::uniform(0.0, 1.0 / 64.0, 65).unwrap());
    let one = Field1D::from_fn(g, |_| 1.0);
    assert_relative_eq!(lp_norm(&one, 1.5).unwrap(), 1.0, epsilon = 1e-14);
    assert_relative_eq!(w1p_norm(&one, 1.5).unwrap(), 1.0, epsilon = 1e-12);

    let g = Arc::new(Grid1D::half_line(24.0, 1.0 / 512.0).unwrap());
    let e = Field1D::from_fn(g, |z| (-z).exp());
    assert_relative_eq!(lp_norm(&e, 2.0).unwrap(), 0.5f64.sqrt(), epsilon = 1e-6);
    assert_relative_eq!(w1p_norm(&e, 2.0).unwrap(), 1.0, epsilon = 1e-5);
    assert!(lp_norm(&e, 1.0).is_err());
    assert!(lp_norm(&e, f64::INFINITY).is_err());
}

#[test]
fn w1p_norm_converges_monotonically() {
    let exact = 1.0;
    let mut last = f64::INFINITY;
    for h in [1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0] {
        let g = Arc::new(Grid1D::half_line(24.0, h).unwrap());
        let e = Field1D::from_fn(g, |z| (-z).exp());
        let err = (w1p_norm(&e, 2.0).unwrap() - exact).abs();
        assert!(err < last, "error {err} did not decrease");
        last = err;
    }
}

#[test]
fn two_sided_norm_uses_one_sided_traces() {
    let x = Grid1D::symmetric(1.0, 0.25).unwrap();
    let z = Grid1D::uniform(0.0, 0.5, 3).unwrap();
    let grid = Arc::new(Grid2D::new(x, z).unwrap());
    let f = TwoSidedField2D::from_fn(grid, |s, _, _| s.sign());
    // |f| = 1 everywhere, area 2 × 1
    assert_relative_eq!(f.lp_integral(1.5).unwrap(), 2.0, epsilon = 1e-14);
    assert_relative_eq!(integral_2d(&f), 0.0, epsilon = 1e-14);
}

#[test]
fn fd_exact_on_polynomials() {
    let g = Arc::new(Grid1D::from_nodes(vec![0.0, 0.1, 0.25, 0.5, 0.6, 1.0]).unwrap());
    let lin = Field1D::from_fn(g.clone(), |z| 3.0 * z - 1.0);
    for v in fd_derivative_1d(&lin, 1).unwrap().values {
        assert_relative_eq!(v, 3.0, epsilon = 1e-11);
    }
    let quad = Field1D::from_fn(g, |z| 2.0 * z * z + z);
    for v in fd_derivative_1d(&quad, 2).unwrap().values {
        assert_relative_eq!(v, 4.0, epsilon = 1e-9);
    }
}

#[test]
fn fd_second_derivative_is_second_order() {
    let err = |n: usize| {
        let g = Arc::new(Grid1D::uniform(0.0, 3.0 / n as f64, n + 1).unwrap());
        let f = Field1D::from_fn(g, f64::sin);
        let d = fd_derivative_1d(&f, 2).unwrap();
        d.grid.nodes().iter().zip(&d.values).fold(0.0_f64, |m, (z, v)| m.max((v + z.sin()).abs()))
    };
    let rates: Vec<f64> = [32, 64, 128].windows(2).map(|w| (err(w[0]) / err(w[1])).log2()).collect();
    for r in rates {
        assert!(r > 1.8, "observed order {r}");
    }
}

#[test]
fn fornberg_weights() {
    let s = Stencil::new(&[0.0, 1.0, 2.0], 2).unwrap();
    assert_relative_eq!(s.apply_at(1, |i| [1.0, 4.0, 9.0][i]), 2.0, epsilon = 1e-12);
}

#[test]
fn fit_known_power_laws() {
    let eps = [1e-2, 10f64.powf(-2.5), 1e-3, 10f64.powf(-3.5), 1e-4];
    let pairs: Vec<(f64, f64)> = eps.iter().map(|&e| (e, 3.0 * e.powf(0.75))).collect();
    let f = fit_loglog_rate(&pairs).unwrap();
    assert_relative_eq!(f.slope, 0.75, epsilon = 1e-12);
    assert_relative_eq!(f.r_squared, 1.0, epsilon = 1e-12);

    let pairs: Vec<(f64, f64)> = eps.iter().map(|&e| (e, 2.0)).collect();
    assert_relative_eq!(fit_loglog_rate(&pairs).unwrap().slope, 0.0, epsilon = 1e-12);

    let pairs: Vec<(f64, f64)> = eps.iter().map(|&e| (e, e.powf(0.25) + e)).collect();
    assert!((fit_loglog_rate(&pairs).unwrap().slope - 0.25).abs() < 0.03);

    assert!(fit_loglog_rate(&pairs[..2]).is_err());
    assert!(fit_loglog_rate(&[(1e-2, 1.0), (1e-3, 0.0), (1e-4, 1.0)]).is_err());
    assert!(fit_loglog_rate(&[(1e-2, 1.0), (1e-2, 2.0), (1e-4, 1.0)]).is_err());
}

#[test]
fn pchip_reproduces_linear_data() {
    let xs = [0.0, 0.3, 1.0, 1.5, 3.0];
    let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
    let p = Pchip::new(&xs, &ys);
    for q in [0.1, 0.7, 1.2, 2.9] {
        assert_relative_eq!(p.eval(q).unwrap(), 2.0 * q + 1.0, epsilon = 1e-12);
    }
    assert!(p.eval(3.5).is_none());
}

#[test]
fn graded_axis_contains_fine_band() {
    let g = Grid1D::graded(&GradedAxis {
        left: 4.0,
        right: 4.0,
        fine_left: 0.5,
        fine_right: 0.25,
        fine: 1.0 / 64.0,
        coarse: 0.25,
        ratio: 1.1,
    })
    .unwrap();
    assert!(g.index_of(0.0).is_some());
    assert!((g.min_spacing() - 1.0 / 64.0).abs() < 1e-12);
    let xs = g.nodes();
    assert_eq!(xs[0], -4.0);
    assert_eq!(xs[xs.len() - 1], 4.0);
    let i0 = g.index_of(0.0).unwrap();
    for w in xs[i0..].windows(2) {
        let h = w[1] - w[0];
        assert!(h >= 1.0 / 64.0 - 1e-12 && h <= 2.0 * 0.25);
    }
    assert!(xs[i0 + 16] - xs[i0 + 15] - 1.0 / 64.0 < 1e-12);
}

proptest! {
    #[test]
    fn norm_is_homogeneous(c in -5.0f64..5.0, p in 1.01f64..3.0) {
        let g = Arc::new(Grid1D::half_line(10.0, 0.05).unwrap());
        let f = Field1D::from_fn(g, |z| (-z).exp() * (3.0 * z).cos());
        let a = lp_norm(&f.scale(c), p).unwrap();
        let b = c.abs() * lp_norm(&f, p).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b));
    }

    #[test]
    fn norm_triangle_inequality(a in -2.0f64..2.0, b in -2.0f64..2.0, p in 1.01f64..2.0) {
        let g = Arc::new(Grid1D::half_line(8.0, 0.1).unwrap());
        let f = Field1D::from_fn(g.clone(), |z| a * (-z).exp());
        let h = Field1D::from_fn(g, |z| b * z.sin() * (-z).exp());
        let s = f.zip_with(&h, |x, y| x + y).unwrap();
        prop_assert!(lp_norm(&s, p).unwrap() <= lp_norm(&f, p).unwrap() + lp_norm(&h, p).unwrap() + 1e-12);
    }

    #[test]
    fn fit_recovers_any_power(slope in -1.0f64..2.0, c in 0.01f64..100.0) {
        let pairs: Vec<(f64, f64)> = [1e-1f64, 1e-2, 1e-3, 1e-4].iter().map(|&e| (e, c * e.powf(slope))).collect();
        let f = fit_loglog_rate(&pairs).unwrap();
        prop_assert!((f.slope - slope).abs() < 1e-10);
        prop_assert!(f.r_squared > 1.0 - 1e-10);
    }

    #[test]
    fn tridiagonal_solution_satisfies_system(seed in proptest::collection::vec(-1.0f64..1.0, 24)) {
        let n = 8;
        let lower: Vec<f64> = seed[..n].iter().map(|v| 0.4 * v).collect();
        let upper: Vec<f64> = seed[n..2 * n].iter().map(|v| 0.4 * v).collect();
        let diag = vec![2.0; n];
        let rhs0: Vec<f64> = seed[2 * n..].to_vec();
        let mut x = rhs0.clone();
        let mut scratch = vec![0.0; n];
        solve_tridiagonal(&lower, &diag, &upper, &mut x, &mut scratch);
        for i in 0..n {
            let mut r = diag[i] * x[i];
            if i > 0 { r += lower[i] * x[i - 1]; }
            if i + 1 < n { r += upper[i] * x[i + 1]; }
            prop_assert!((r - rhs0[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn pchip_preserves_monotone_data(steps in proptest::collection::vec(0.0f64..1.0, 6)) {
        let xs: Vec<f64> = (0..=steps.len()).map(|i| i as f64).collect();
        let mut ys = vec![0.0];
        for s in &steps { ys.push(ys[ys.len() - 1] + s); }
        let d = pchip_slopes(&xs, &ys);
        prop_assert!(d.iter().all(|v| *v >= -1e-15));
        let p = Pchip::new(&xs, &ys);
        let mut last = f64::NEG_INFINITY;
        for k in 0..=60 {
            let v = p.eval(k as f64 / 10.0).unwrap();
            prop_assert!(v >= last - 1e-12);
            last = v;
        }
    }

    #[test]
    fn kernel_symmetry(t in 0.01f64..5.0, z in 0.0f64..5.0, zp in 0.0f64..5.0) {
        let a = heat_kernel_halfline(t, z, zp).unwrap();
        let b = heat_kernel_halfline(t, zp, z).unwrap();
        prop_assert!((a - b).abs() <= 1e-15 * (1.0 + a.abs()));
        prop_assert_eq!(heat_kernel_halfline(t, 0.0, zp).unwrap(), 0.0);
        prop_assert_eq!(heat_kernel_free(t, z).unwrap(), heat_kernel_free(t, -z).unwrap());
    }

    #[test]
    fn duhamel_monotone_in_time(z in 0.05f64..6.0) {
        let times = [0.05, 0.2, 0.5, 1.0, 2.0];
        let d = duhamel_exponential_many(&times, z, DuhamelQuantity::Value).unwrap();
        for w in d.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-14);
        }
    }
}
