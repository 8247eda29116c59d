//! Convergence studies over a sequence of viscosities.

mod config;
mod presets;
mod report;
mod run;
mod snapshot;
mod verify;

pub use config::StudyConfig;
pub use presets::{default_initial_data, PRESETS};
pub use report::{
    rate_fits, BoxDiagnostics, CaseMetrics, CaseOutcome, CaseReport, ConvergenceReport, RateFit, CSV_HEADER, FITTED,
    R2_THRESHOLD,
};
pub use run::{build_profiles, config_digest, run_case, run_convergence_study, run_convergence_study_with};
pub use snapshot::{
    export_profile_snapshots, read_sidecar, read_snapshot_record, AxisInfo, SnapshotEntry, SnapshotSidecar,
    SIDECAR_NAME,
};
pub use verify::{quick_profile_config, run_verify_suite, VerifyOutcome};
