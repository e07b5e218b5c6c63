//! Deterministic planar shepherding: a force-based flock of rule-based ground
//! agents, the Strömbom driving/collecting shepherd, and a from-scratch DDPG
//! stack (tiny MLPs, Adam, replay memory, target networks) composed into a
//! two-skill hierarchical controller with small-to-large arena transfer.
//!
//! The crate is `no_std` + `alloc`: everything here is pure computation over
//! owned state. File formats, the CLI, and experiment reporting live in the
//! companion `herding-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod adam;
pub mod checkpoint;
pub mod config;
pub mod ddpg;
pub mod error;
pub mod flock;
pub mod hier;
pub mod metrics;
pub mod mission;
pub mod nn;
pub mod replay;
pub mod sheep;
pub mod strombom;
pub mod vec2;

pub use config::{ArenaConfig, SwarmParams};
pub use ddpg::{DdpgAgent, NoiseSchedule};
pub use error::Error;
pub use flock::{FlockState, ShepherdState};
pub use hier::{ScaleAdapter, SkillKind};
pub use metrics::TrialResult;
pub use vec2::Vec2;

/// All randomness in the crate flows through this generator type; one seed
/// fixes an entire training run or trial batch.
pub type Rng = rand_chacha::ChaCha8Rng;
