//! Desk-scale stand-ins for the training environment.

mod noise;
mod scheduler;
mod trace;

pub use noise::{
    perturb_base_lin_vel, perturb_gains, perturb_observation, NoiseConfig, NoiseRange,
    NoiseRangeError,
};
pub use scheduler::{SchedulerState, DEFAULT_RESAMPLE_INTERVAL};
pub use trace::{read_jsonl, simulate_trace, write_jsonl, TraceConfig, TraceError};
