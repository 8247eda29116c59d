//! Inviscid benchmark, Ansatz assembly and the direct viscous solve.

pub mod ansatz;
pub mod euler;
pub mod mesh;
pub mod viscous;

pub use ansatz::{assemble_ansatz, assemble_u_app, corner_state, viscous_initial, AnsatzComponents, AnsatzField};
pub use euler::{euler_solution, euler_solution_original, ShiftedEulerField};
pub use mesh::{physical_mesh, MeshConfig};
pub use viscous::{
    refine_axis, solve_depleted_ns, solve_depleted_ns_observed, viscous_dt, TrajectoryField, ViscousInitial,
    ViscousRun, ViscousSettings,
};
