mod common;

use std::sync::{Arc, OnceLock};

use common::gaussian_jump;
use layerflow::data::{InitialData, Jet1, Jet2};
use layerflow::flow::*;
use layerflow::numerics::*;
use layerflow::profiles::ProfileSet;
use layerflow::study::quick_profile_config;
use layerflow::Error;

fn quick_set() -> &'static ProfileSet {
    static SET: OnceLock<ProfileSet> = OnceLock::new();
    SET.get_or_init(|| ProfileSet::build(&gaussian_jump(), &quick_profile_config()).unwrap())
}

/// `u0(0) = 0`, `v0(x, 0) = 0` and no jump: every layer profile vanishes.
fn layerless_data() -> InitialData {
    InitialData::new(
        "layerless",
        |z: f64| {
            let e = (-z).exp();
            Jet1 { f: z * e, d1: (1.0 - z) * e, d2: (z - 2.0) * e }
        },
        |_, x: f64, z: f64| {
            let (e, g) = ((-z).exp(), (-x * x).exp());
            Jet2 {
                f: z * e * g,
                fx: -2.0 * x * z * e * g,
                fz: (1.0 - z) * e * g,
                fxx: (4.0 * x * x - 2.0) * z * e * g,
                fxz: -2.0 * x * (1.0 - z) * e * g,
                fzz: (z - 2.0) * e * g,
            }
        },
    )
}

fn small_mesh(eps: f64, drift: f64) -> Arc<Grid2D> {
    let cfg = MeshConfig {
        length_x: 4.0,
        length_z: 4.0,
        coarse_h: 1.0 / 32.0,
        ..MeshConfig::default()
    };
    physical_mesh(&cfg, eps, drift).unwrap()
}

#[test]
fn mesh_resolves_both_layers() {
    let cfg = MeshConfig::default();
    for eps in [1e-2, 1e-4] {
        let m = physical_mesh(&cfg, eps, -1.0).unwrap();
        let fine = eps.sqrt() / 8.0;
        assert!((m.x.min_spacing() - fine).abs() < 1e-12);
        assert!((m.z.min_spacing() - fine).abs() < 1e-12);
        assert_eq!(m.z.origin(), 0.0);
        assert_eq!(m.x.node(m.interface()), 0.0);
        // the layer of width √ε is covered by at least 6 cells
        let z6 = m.z.node(6);
        assert!(z6 <= eps.sqrt() + 1e-12);
        // fine band follows the drift to the left
        let i = m.x.index_of(0.0).unwrap();
        let xs = m.x.nodes();
        let k = xs.partition_point(|&x| x < -1.0);
        assert!((xs[k + 1] - xs[k] - fine).abs() < 1e-12);
        assert!(i > k);
    }
    assert!(physical_mesh(&cfg, 0.0, 0.0).is_err());
}

#[test]
fn euler_solution_straightened_and_conserved() {
    let d = gaussian_jump();
    let mesh = small_mesh(1e-2, -1.0);
    let v0 = euler_solution(&d, &mesh);
    assert_eq!(v0, d.v0_field(mesh.clone()));
    let n0 = v0.lp_norm(1.5).unwrap();
    for t in [0.5, 1.0] {
        let orig = euler_solution_original(&d, &mesh, t).unwrap();
        let n = orig.lp_norm(1.5).unwrap();
        assert!((n / n0 - 1.0).abs() < 1e-4, "t={t}: {n} vs {n0}");
    }
}

#[test]
fn ansatz_compatibility() {
    let set = quick_set();
    for eps in [1e-2, 1e-3] {
        let mesh = small_mesh(eps, -0.5);
        for &t in &set.store_times {
            let a = assemble_ansatz(set, eps, t, &mesh).unwrap();
            assert_eq!(a.u_app.values[0], 0.0);
            assert!(a.v_app.row(0).iter().all(|v| v.abs() <= 1e-8));
            assert!(a.v_app.jump().iter().all(|v| v.abs() <= 1e-6));
            assert!(a.v_app.xderiv_jump().iter().all(|v| v.abs() <= 1e-6));
            let fine = Arc::new(refine_axis(&mesh.z, 4).unwrap());
            assert_eq!(assemble_u_app(set, eps, t, fine).unwrap().values[0], 0.0);
        }
    }
    let mesh = small_mesh(1e-2, -0.5);
    assert!(assemble_ansatz(set, 0.0, 0.5, &mesh).is_err());
    assert!(assemble_ansatz(set, 1e-2, 0.75, &mesh).is_err());
}

#[test]
fn layerless_ansatz_is_the_inviscid_flow() {
    let data = layerless_data();
    let set = ProfileSet::build(&data, &quick_profile_config()).unwrap();
    let mesh = small_mesh(1e-2, 0.0);
    let a = assemble_ansatz(&set, 1e-2, 0.5, &mesh).unwrap();
    let v0 = data.v0_field(mesh.clone());
    assert!(a.v_app.sub(&v0).unwrap().max_abs() < 1e-14);
    let u0 = data.u0_field(Arc::new(mesh.z.clone()));
    assert!(a.u_app.zip_with(&u0, |x, y| x - y).unwrap().max_abs() < 1e-14);
}

#[test]
fn layerless_viscous_flow_stays_order_eps_close() {
    let data = layerless_data();
    let set = ProfileSet::build(&data, &quick_profile_config()).unwrap();
    let settings = ViscousSettings {
        t_end: 0.5,
        store_times: vec![0.25, 0.5],
        ..ViscousSettings::default()
    };
    let mut errs = Vec::new();
    for eps in [1e-2, 1e-3] {
        let mesh = small_mesh(eps, 0.0);
        let init = viscous_initial(&set, eps, &mesh, 4).unwrap();
        let v0 = data.v0_field(mesh.clone());
        let mut worst = 0.0_f64;
        let mut last_u = f64::INFINITY;
        let mut obs = |_t: f64, u: &Field1D, v: &TwoSidedField2D| -> layerflow::Result<()> {
            assert_eq!(u.values[0], 0.0);
            let n = u.lp_norm(2.0)?;
            assert!(n <= last_u * (1.0 + 1e-12));
            last_u = n;
            worst = worst.max(v.sub(&v0)?.lp_norm(1.5)?);
            Ok(())
        };
        solve_depleted_ns_observed(&init, &data, eps, &settings, &mut obs).unwrap();
        errs.push(worst);
    }
    // O(εT): a tenfold smaller ε gives a roughly tenfold smaller gap
    assert!(errs[0] < 2e-2 * 0.5 * 10.0, "{errs:?}");
    let ratio = errs[0] / errs[1];
    assert!((5.0..20.0).contains(&ratio), "{errs:?}");
}

#[test]
fn inviscid_transport_is_a_translation() {
    // ε = 0 and u = u0 + 1/2: v is carried at speed 1/2
    let data = common::smooth_data(1.0);
    let mesh = small_mesh(1e-2, 0.0);
    let fine = Arc::new(refine_axis(&mesh.z, 2).unwrap());
    let u = Field1D::from_fn(fine, |z| data.u0(z).f + 0.5);
    let v = data.v0_field(mesh.clone());
    let init = ViscousInitial { u, u_stride: 2, v };
    let t_end = 0.5;
    let settings = ViscousSettings {
        t_end,
        store_times: vec![t_end],
        dt: Some(1e-3),
        ..ViscousSettings::default()
    };
    let mut err = 0.0_f64;
    let mut obs = |t: f64, _u: &Field1D, v: &TwoSidedField2D| -> layerflow::Result<()> {
        if t == t_end {
            for (iz, &z) in mesh.z.nodes().iter().enumerate() {
                if !(0.5..=2.0).contains(&z) {
                    continue;
                }
                for (ix, &x) in mesh.x.nodes().iter().enumerate() {
                    let exact = data.v0_at(x - 0.5 * t, z).f;
                    err = err.max((v.get(ix, iz) - exact).abs());
                }
            }
        }
        Ok(())
    };
    solve_depleted_ns_observed(&init, &data, 0.0, &settings, &mut obs).unwrap();
    assert!(err < 1e-2, "translation error {err}");
}

#[test]
fn advective_guard_rejects_large_steps() {
    let set = quick_set();
    let mesh = small_mesh(1e-3, -0.5);
    let init = viscous_initial(set, 1e-3, &mesh, 2).unwrap();
    let settings = ViscousSettings {
        t_end: 0.5,
        store_times: vec![0.5],
        dt: Some(0.1),
        ..ViscousSettings::default()
    };
    let err = solve_depleted_ns(&init, &set.data, 1e-3, &settings).unwrap_err();
    match err {
        Error::Cfl { guard, dt, suggested } => {
            assert_eq!(guard, "advective");
            assert_eq!(dt, 0.1);
            assert!(suggested < 0.1);
        }
        other => panic!("unexpected {other}"),
    }
    let auto = viscous_dt(&init, &set.data, &ViscousSettings::default());
    assert!(auto <= 0.005 && auto * 1.0 / mesh.x.min_spacing() <= 0.9 + 1e-12);
}

#[test]
fn viscous_solve_is_deterministic() {
    let set = quick_set();
    let mesh = small_mesh(1e-2, -0.5);
    let init = viscous_initial(set, 1e-2, &mesh, 2).unwrap();
    let settings = ViscousSettings {
        t_end: 0.5,
        store_times: vec![0.25, 0.5],
        ..ViscousSettings::default()
    };
    let a = solve_depleted_ns(&init, &set.data, 1e-2, &settings).unwrap();
    let b = solve_depleted_ns(&init, &set.data, 1e-2, &settings).unwrap();
    assert_eq!(a.v, b.v);
    assert_eq!(a.u, b.u);
}
