//! Composite numerical experiments built on the model and analytics layers.

pub mod alignment;
pub mod crosscheck;
pub mod interferometer;
pub mod pulses;
pub mod series;
pub mod stabilization;

pub use alignment::alignment_sweep;
pub use crosscheck::{model_crosscheck, CrosscheckRun, CrosscheckSettings, ModelPair, SpinInit, CROSSCHECK_EDGE_LIMIT};
pub use interferometer::{
    interferometer_sweep, recurrence_sweep, run_interferometer, InterferometerRun, InterferometerSettings, SweepPoint,
};
pub use pulses::{Pulse, PulseKind, PulseSequence};
pub use series::{Column, SweepTable, Trajectory};
pub use stabilization::{simulate_stabilization, StabilizationRun, StabilizationSettings};
