use std::path::Path;
use std::process::{Command, Output};

const REDUCED: &[&str] = &[
    "--epsilon",
    "1e-2,3e-3,1e-3",
    "--set",
    "t_end=0.5",
    "--set",
    "store_intervals=2",
    "--set",
    "fast_length=14",
    "--set",
    "box_input_samples=64",
    "--set",
    "monitor_samples=4",
    "--set",
    "mesh_length_x=4",
    "--set",
    "mesh_length_z=4",
    "--set",
    "mesh_coarse_h=0.03125",
];

fn layerflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_layerflow")).args(args).output().unwrap()
}

/// Runs `study` inside `cwd` with `--out out`, so the recorded config does
/// not depend on the directory.
fn study(cwd: &Path, epsilons: &str, extra: &[&str]) -> Output {
    std::fs::create_dir_all(cwd).unwrap();
    let mut args = vec!["study", "--out", "out", "--epsilon", epsilons];
    args.extend_from_slice(&REDUCED[2..]);
    args.extend_from_slice(extra);
    Command::new(env!("CARGO_BIN_EXE_layerflow"))
        .current_dir(cwd)
        .args(args)
        .output()
        .unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn verify_passes() {
    let o = layerflow(&["verify"]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(o.status.success(), "{text}{}", stderr(&o));
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 10);
    assert!(!text.contains("FAIL"));
}

#[test]
fn study_reports_are_byte_identical_across_processes() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let o = study(d, REDUCED[1], &[]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    for f in ["report.csv", "report.json"] {
        let x = std::fs::read(a.join("out").join(f)).unwrap();
        let y = std::fs::read(b.join("out").join(f)).unwrap();
        assert_eq!(x, y, "{f} differs");
    }
    let csv = std::fs::read_to_string(a.join("out/report.csv")).unwrap();
    assert!(csv.starts_with("epsilon,err_u_L2,err_v_Lp,err_v_vs_ansatz_Lp,residual_integral,singular_norm\n"));
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn format_flag_selects_one_output() {
    let dir = tempfile::tempdir().unwrap();
    let o = study(dir.path(), "1e-2", &["--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.path().join("out/report.json").exists());
    assert!(!dir.path().join("out/report.csv").exists());
}

#[test]
fn hypothesis_violations_exit_with_an_error() {
    let o = layerflow(&["study", "--preset", "no-jump", "--epsilon", "1e-2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("jump hypothesis"), "{}", stderr(&o));

    let o = layerflow(&["study", "--p", "2.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("p = 2.5"), "{}", stderr(&o));

    let o = layerflow(&["solve", "--set", "no_such_key=1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_is_read_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "p = 1.25\nepsilons = [1e-2]\nt_end = 0.5\nstore_intervals = 2\nfast_length = 14.0\n\
         box_input_samples = 64\nmonitor_samples = 4\nmesh_length_x = 4.0\nmesh_length_z = 4.0\n\
         mesh_coarse_h = 0.03125\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = layerflow(&[
        "residuals",
        "--config",
        cfg.to_str().unwrap(),
        "--p",
        "1.75",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("residuals.json")).unwrap()).unwrap();
    assert_eq!(json["p"], 1.75);
    assert_eq!(json["epsilon"], 0.01);
    let csv = std::fs::read_to_string(out.join("residuals.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);

    let missing = layerflow(&["study", "--config", dir.path().join("nope.toml").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn profiles_subcommand_writes_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["profiles", "--out", dir.path().to_str().unwrap()];
    args.extend_from_slice(&REDUCED[2..]);
    let o = layerflow(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let side = dir.path().join("profiles");
    for f in ["profiles.json", "up.bin", "vp.bin", "vkh.bin", "vb.bin"] {
        assert!(side.join(f).exists(), "{f}");
    }
}
