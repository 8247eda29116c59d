use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use layerflow::profiles::profile_norm_report;
use layerflow::residuals::{residual_report, ResidualReport};
use layerflow::flow::physical_mesh;
use layerflow::study::{
    build_profiles, export_profile_snapshots, run_case, run_convergence_study_with, run_verify_suite, StudyConfig,
};

#[derive(Parser)]
#[command(name = "layerflow", version, about = "Layered viscous approximation of a sheared flow with a jump")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the profiles and dump their snapshots.
    Profiles(Common),
    /// One viscous solve (the first `--epsilon`).
    Solve(Common),
    /// Residual report for one viscosity (the first `--epsilon`).
    Residuals(Common),
    /// The full ε-sweep.
    Study(Common),
    /// Run the built-in self-checks.
    Verify,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// Flat TOML config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    /// Comma-separated, decreasing.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    epsilon: Option<Vec<f64>>,
    #[arg(long)]
    p: Option<f64>,
    /// Output directory (default: `out_dir` from the config, else `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; both are written when omitted.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Override any config key, e.g. `--set t_end=0.5`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Common {
    fn config(&self) -> Result<StudyConfig> {
        let mut overrides = self.set.clone();
        if let Some(p) = &self.preset {
            overrides.push(format!("preset = \"{p}\""));
        }
        if let Some(eps) = &self.epsilon {
            let list: Vec<String> = eps.iter().map(|e| format!("{e:e}")).collect();
            overrides.push(format!("epsilons = [{}]", list.join(", ")));
        }
        if let Some(p) = self.p {
            overrides.push(format!("p = {p:?}"));
        }
        if let Some(out) = &self.out {
            overrides.push(format!("out_dir = {:?}", out.display().to_string()));
        }
        let cfg = match &self.config {
            Some(path) => StudyConfig::from_file(path, &overrides)?,
            None => StudyConfig::from_toml_with_overrides("", &overrides)?,
        };
        Ok(cfg)
    }

    fn wants(&self, f: Format) -> bool {
        self.format.is_none_or(|g| g == f)
    }
}

fn out_dir(cfg: &StudyConfig) -> Result<PathBuf> {
    let dir = PathBuf::from(cfg.out_dir.clone().unwrap_or_else(|| "out".into()));
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn first_epsilon(cfg: &StudyConfig) -> Result<f64> {
    match cfg.epsilons.first() {
        Some(&e) => Ok(e),
        None => bail!("no viscosity given"),
    }
}

fn residuals_csv(rep: &ResidualReport) -> String {
    let mut s = String::from("time,eu_L2,ev_Lp,singular_norm");
    for name in ResidualReport::term_names() {
        let _ = write!(s, ",{name}");
    }
    s.push('\n');
    for (k, t) in rep.times.iter().enumerate() {
        let _ = write!(s, "{t:e},{:e},{:e},{:e}", rep.eu_l2[k], rep.ev_lp[k], rep.singular[k]);
        for term in &rep.breakdown {
            let _ = write!(s, ",{:e}", term[k]);
        }
        s.push('\n');
    }
    s
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Profiles(c) => {
            let cfg = c.config()?;
            let profiles = build_profiles(&cfg)?;
            let dir = out_dir(&cfg)?.join("profiles");
            let sidecar = export_profile_snapshots(&profiles, &dir)?;
            println!("profile digest {}", profiles.digest());
            let norms = profile_norm_report(&profiles, cfg.p)?;
            println!("{norms:#?}");
            println!("wrote {}", sidecar.display());
        }
        Command::Solve(c) => {
            let cfg = c.config()?;
            let eps = first_epsilon(&cfg)?;
            let profiles = build_profiles(&cfg)?;
            let m = run_case(&cfg, &profiles, eps)?;
            println!(
                "epsilon {eps:e}: |u-u0| {:.4e}  |u-u_app| {:.4e}  |v-v0| {:.4e}  |v-v_app| {:.4e}  steps {}  dt {:.3e}",
                m.err_u_l2, m.err_u_vs_ansatz_l2, m.err_v_lp, m.err_v_vs_ansatz_lp, m.steps, m.dt
            );
            let json = serde_json::to_string_pretty(&m)?;
            write(&out_dir(&cfg)?.join("solve.json"), &json)?;
        }
        Command::Residuals(c) => {
            let cfg = c.config()?;
            let eps = first_epsilon(&cfg)?;
            let profiles = build_profiles(&cfg)?;
            let mesh = physical_mesh(&cfg.mesh_config(), eps, -cfg.t_end * profiles.data.u0(0.0).f)?;
            let rep = residual_report(&profiles, eps, cfg.p, &mesh)?;
            println!("epsilon {eps:e}: integral of |E^v|^p = {:.6e}", rep.ev_integral);
            let dir = out_dir(&cfg)?;
            if c.wants(Format::Csv) {
                write(&dir.join("residuals.csv"), &residuals_csv(&rep))?;
            }
            if c.wants(Format::Json) {
                write(&dir.join("residuals.json"), &serde_json::to_string_pretty(&rep)?)?;
            }
        }
        Command::Study(c) => {
            let cfg = c.config()?;
            let profiles = build_profiles(&cfg)?;
            let report = run_convergence_study_with(&cfg, &profiles)?;
            print!("{}", report.summary());
            let dir = out_dir(&cfg)?;
            if c.wants(Format::Csv) {
                write(&dir.join("report.csv"), &report.to_csv())?;
            }
            if c.wants(Format::Json) {
                write(&dir.join("report.json"), &report.to_json()?)?;
            }
        }
        Command::Verify => {
            let outcomes = run_verify_suite()?;
            let mut all = true;
            for o in &outcomes {
                println!("{} {:<28} {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
                all &= o.passed;
            }
            return Ok(all);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
