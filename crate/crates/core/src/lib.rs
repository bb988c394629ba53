//! Network-coding slotted Aloha: frame simulation, iterative interference
//! cancellation, density evolution and Monte Carlo load sweeps.
//!
//! Users split a coded block into `n` bursts and send them on `n` distinct
//! random slots of a frame. Collided bursts are erased. A user is recovered
//! once `k` of its bursts are clean, after which all its bursts are cancelled
//! from the frame, possibly cleaning slots for other users.

pub mod config;
pub mod decoder;
pub mod density;
pub mod error;
pub mod model;
pub mod montecarlo;
pub mod report;

pub use config::{parse_config, render_config, ConfigError};
pub use decoder::{decode_frame, empirical_p0, DecodeTrace, RoundRecord};
pub use density::{de_iterate, de_predicted_plr, decode_probability, initial_erasure, system_q, DeState, DeTrace};
pub use error::ModelError;
pub use model::{
    degree_histogram, expected_initial_histogram, place_frame, FramePlacement, SlotDegreeHistogram, SystemConfig,
    UserCode,
};
pub use montecarlo::{
    aloha_baseline, frame_metrics, normalized_load, round_profile, run_trials, run_trials_with, simulate_frame,
    slotted_aloha_finite, sweep_load, sweep_load_with, AlohaVariant, FrameMetrics, Mixture, SweepPoint, SweepResult,
    TrialAggregate, Workers,
};
