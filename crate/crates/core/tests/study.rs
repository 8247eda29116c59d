use std::sync::OnceLock;

use layerflow::study::*;
use layerflow::Error;

fn reduced(epsilons: &[f64]) -> StudyConfig {
    let list: Vec<String> = epsilons.iter().map(|e| format!("{e:e}")).collect();
    let text = format!(
        "epsilons = [{}]\nt_end = 0.5\nstore_intervals = 2\nfast_length = 14.0\nbox_input_samples = 64\n\
         monitor_samples = 4\nmesh_length_x = 4.0\nmesh_length_z = 4.0\nmesh_coarse_h = 0.03125\n",
        list.join(", ")
    );
    StudyConfig::from_toml_str(&text).unwrap()
}

fn reduced_profiles() -> &'static layerflow::profiles::ProfileSet {
    static SET: OnceLock<layerflow::profiles::ProfileSet> = OnceLock::new();
    SET.get_or_init(|| build_profiles(&reduced(&[1e-2])).unwrap())
}

#[test]
fn default_config_round_trips_through_toml() {
    let cfg = StudyConfig::default();
    assert_eq!(cfg.p, 1.5);
    assert_eq!(cfg.epsilons.len(), 5);
    let back = StudyConfig::from_toml_str(&cfg.to_toml_string().unwrap()).unwrap();
    assert_eq!(back, cfg);
    assert_eq!(StudyConfig::from_toml_str("").unwrap(), cfg);
    let times = cfg.store_times();
    assert_eq!(times.len(), 11);
    assert_eq!(times[10], 1.0);
}

#[test]
fn overrides_apply_after_the_file() {
    let cfg = StudyConfig::from_toml_with_overrides(
        "p = 1.25\nt_end = 2.0",
        &["p=1.75".into(), "preset = kinked-jump".into(), "epsilons=[1e-2, 1e-3]".into()],
    )
    .unwrap();
    assert_eq!(cfg.p, 1.75);
    assert_eq!(cfg.t_end, 2.0);
    assert_eq!(cfg.preset, "kinked-jump");
    assert_eq!(cfg.epsilons, vec![1e-2, 1e-3]);
}

#[test]
fn invalid_configs_are_rejected() {
    let cases: &[(&str, &str)] = &[
        ("p = 2.0", "p = 2"),
        ("p = 1.0", "p = 1"),
        ("epsilons = [1e-3, 1e-2]", "decreasing"),
        ("epsilons = [1e-2, -1e-3]", "positive"),
        ("cfl = 1.5", "cfl"),
        ("t_end = 0.0", "t_end"),
        ("store_intervals = 0", "store_intervals"),
        ("unknown_key = 3", "unknown"),
        ("p = \"x\"", "config"),
    ];
    for (text, needle) in cases {
        match StudyConfig::from_toml_str(text) {
            Err(Error::Config(m)) => assert!(m.contains(needle), "{text}: {m}"),
            other => panic!("{text}: {other:?}"),
        }
    }
    assert!(StudyConfig::from_toml_with_overrides("", &["p".into()]).is_err());
}

#[test]
fn presets_gate_the_hypotheses() {
    assert!(default_initial_data("gaussian-jump").is_ok());
    let no = default_initial_data("no-jump").unwrap_err().to_string();
    assert!(no.contains("jump hypothesis"), "{no}");
    let kink = default_initial_data("kinked-jump").unwrap_err().to_string();
    assert!(kink.contains("matching hypothesis"), "{kink}");
    assert!(matches!(default_initial_data("nope"), Err(Error::Config(_))));
    let cfg = StudyConfig { preset: "no-jump".into(), ..reduced(&[1e-2]) };
    assert!(build_profiles(&cfg).is_err());
}

#[test]
fn single_viscosity_gives_norms_but_no_rates() {
    let cfg = reduced(&[1e-2]);
    let rep = run_convergence_study_with(&cfg, reduced_profiles()).unwrap();
    assert_eq!(rep.cases.len(), 1);
    let m = rep.cases[0].metrics().unwrap();
    assert!(m.err_v_lp > 0.0 && m.err_v_lp.is_finite());
    assert!(m.residual_integral > 0.0);
    assert_eq!(m.u_app_wall, 0.0);
    assert_eq!(rep.fits.len(), FITTED.len());
    assert!(rep.fits.iter().all(|f| f.fit.is_none() && !f.reliable && !f.note.is_empty()));
    let csv = rep.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[1].split(',').count(), 6);
    assert!(rep.summary().contains("unavailable"));
}

#[test]
fn failed_cases_are_recorded_and_the_sweep_goes_on() {
    // a fixed step far beyond the advective limit
    let cfg = StudyConfig { dt: Some(0.25), ..reduced(&[1e-2, 1e-3]) };
    let rep = run_convergence_study_with(&cfg, reduced_profiles()).unwrap();
    assert_eq!(rep.cases.len(), 2);
    for c in &rep.cases {
        match &c.outcome {
            CaseOutcome::Failed { message } => assert!(!message.is_empty()),
            other => panic!("{other:?}"),
        }
    }
    let csv = rep.to_csv();
    assert!(csv.lines().skip(1).all(|l| l.ends_with("NaN")));
    assert!(rep.summary().contains("FAILED"));
}

#[test]
fn empty_report_exports_a_header() {
    let mut cfg = reduced(&[1e-2]);
    cfg.epsilons.clear();
    let rep = run_convergence_study_with(&cfg, reduced_profiles()).unwrap();
    assert_eq!(rep.to_csv(), format!("{CSV_HEADER}\n"));
    assert!(rep.err_v_monotone);
}

#[test]
fn report_json_round_trip_and_files() {
    let cfg = reduced(&[1e-2]);
    let rep = run_convergence_study_with(&cfg, reduced_profiles()).unwrap();
    let back = ConvergenceReport::from_json(&rep.to_json().unwrap()).unwrap();
    assert_eq!(back, rep);
    assert_eq!(back.config_digest, config_digest(&cfg).unwrap());
    assert_eq!(back.config_digest.len(), 64);

    let dir = tempfile::tempdir().unwrap();
    let (csv, json) = (dir.path().join("r.csv"), dir.path().join("r.json"));
    rep.write_csv(&csv).unwrap();
    rep.write_json(&json).unwrap();
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), rep.to_csv());
    assert_eq!(ConvergenceReport::read_json(&json).unwrap(), rep);
    assert!(ConvergenceReport::read_json(&dir.path().join("missing.json")).is_err());
}

#[test]
fn config_digest_tracks_every_key() {
    let a = StudyConfig::default();
    let b = StudyConfig { mesh_ratio: 1.07, ..StudyConfig::default() };
    assert_eq!(config_digest(&a).unwrap(), config_digest(&a.clone()).unwrap());
    assert_ne!(config_digest(&a).unwrap(), config_digest(&b).unwrap());
}

#[test]
fn snapshots_read_back_bit_exact() {
    let set = reduced_profiles();
    let dir = tempfile::tempdir().unwrap();
    let path = export_profile_snapshots(set, dir.path()).unwrap();
    assert!(path.ends_with(SIDECAR_NAME));
    let side = read_sidecar(dir.path()).unwrap();
    assert_eq!(side.byte_order, "little");
    assert_eq!(side.dtype, "f64");
    assert_eq!(side.profile_digest, set.digest());
    let names: Vec<&str> = side.entries.iter().map(|e| e.profile.as_str()).collect();
    assert_eq!(names, ["up", "vp", "vkh", "vb"]);

    let up = &side.entries[0];
    let last = up.times.len() - 1;
    assert_eq!(read_snapshot_record(dir.path(), up, last).unwrap(), set.up.snapshots[last].values);
    assert!(read_snapshot_record(dir.path(), up, last + 1).is_err());

    let vb = &side.entries[3];
    let rec = read_snapshot_record(dir.path(), vb, 1).unwrap();
    let f = &set.vb.snapshots[1];
    let n = f.values.len();
    assert_eq!(rec.len(), vb.record_len);
    assert_eq!(&rec[..n], &f.values[..]);
    let nz = f.left_trace.len();
    assert_eq!(&rec[n..n + nz], &f.left_trace[..]);
    assert_eq!(&rec[n + 3 * nz..], &f.right_xderiv_trace[..]);
    let (ax, az) = (&vb.axes[0], &vb.axes[1]);
    assert_eq!(ax.len * az.len + 4 * az.len, vb.record_len);
    assert!(ax.spacing.is_some() || ax.nodes.as_ref().is_some_and(|v| v.len() == ax.len));
}
