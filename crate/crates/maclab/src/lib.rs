//! Driver layer for the exact verification suite: run configuration,
//! parallel dispatch, machine-readable reports and the golden-report
//! regression helpers. The algebra lives in `maclab-core`.

pub mod golden;
pub mod report;
pub mod run;

pub use golden::{golden_compare, strip_timing, GoldenOutcome};
pub use report::{Report, SliceRow, Status};
pub use run::{dispatch, Command, RunConfig, DEFAULT_CAP};

/// Slice cap from the environment override, falling back to the default.
pub fn cap_from_env() -> usize {
    std::env::var("MACLAB_CAP")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_CAP)
}
