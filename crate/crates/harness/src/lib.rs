//! Experiment planning, execution and reporting on top of `restartlab-core`.

pub mod cells;
pub mod plan;
pub mod plot;
pub mod record;
pub mod runner;
