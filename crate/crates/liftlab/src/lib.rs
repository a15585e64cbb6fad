//! Scenario files, check runner and reports for the `liftlab` command.

pub mod checks;
pub mod explain;
pub mod presets;
pub mod report;
pub mod scenario;

pub use checks::{run_scenario, RunError, RunOptions};
pub use report::{CheckResult, Report, Status};
pub use scenario::{CheckId, Scenario, ScenarioError};
