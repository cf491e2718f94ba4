//! Sweeps, file formats and the built-in verification suite on top of
//! `stirap-core`. The `stirap` binary is a thin front end over this crate.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod formats;
pub mod initial;
pub mod sweep;
pub mod verify;

pub use error::{Result, SimError};
pub use formats::{sig6, write_trajectory_csv, GateResultDoc, ScheduleDoc};
pub use initial::InitialState;
pub use sweep::{run_sweep, write_sweep_csv, Grid, PulseConfig, SweepConfig, SweepRow, SWEEP_HEADER};
pub use verify::{run_verification, CheckOutcome};
