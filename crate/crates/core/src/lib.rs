//! Foot-contact pattern templates as an interface between natural-language
//! commands and a quadruped locomotion controller.

pub mod baselines;
pub mod eval;
pub mod generator;
pub mod llm;
pub mod mdp;
pub mod pattern;
pub mod reward;
pub mod sim;
pub mod velocity;

pub use pattern::{GaitType, Leg, PatternTemplate};
pub use velocity::Velocity;
