//! Sweeps, scaling fits and file formats.

pub mod checkpoint;
pub mod config;
pub mod csv;
pub mod fit;
pub mod sweep;

pub use checkpoint::{checkpoint_pool, restore_pool};
pub use config::{load_config, SweepSpec, Task};
pub use csv::emit_csv;
pub use fit::{fit_double_log, fit_power_law, LineFit, PowerLawFit};
pub use sweep::{run_sweep, PointOutput, RunRecord};
