//! Ergodic capacity of fluctuating two-ray (FTR) fading channels under
//! optimal rate and power adaptation (OPRA), optimal rate adaptation (ORA),
//! channel inversion (CI) and truncated channel inversion (TCI).

pub mod capacity;
pub mod cli;
pub mod error;
pub mod ftr;
pub mod mc;
pub mod specfun;
pub mod sweep;

pub use capacity::{Policy, PolicyResult};
pub use error::{Error, Result};
pub use ftr::{build_series, CoeffSeries, FtrParams, LinkBudget};
pub use mc::{McConfig, McEstimate};
pub use sweep::{run_sweep, SnrSweep, SweepSpec};
