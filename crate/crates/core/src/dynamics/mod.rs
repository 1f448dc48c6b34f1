//! The synchronous majority update, trajectories with exact cycle detection,
//! and the two convergence decision procedures.

mod labelling;
mod run;
mod search;
mod trace;
mod update;

pub use labelling::Labelling;
pub use run::{
    run, ConvergenceOutcome, RunOptions, RunResult, Trajectory, TrajectoryEnd,
    DEFAULT_MEMORY_CAP,
};
pub use search::{
    guarantee_search, verify_bound, MaskNetwork, SearchOptions, DEFAULT_EXHAUSTIVE_CAP,
};
pub use trace::{format_trace, trace_report};
pub use update::{is_stable, opinion_change, synchronous_update};


/// Every opinion flipped.
pub fn complement(f: &Labelling) -> Labelling {
    f.complement()
}
