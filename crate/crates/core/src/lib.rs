//! Synchronous majority opinion diffusion on directed social networks.
//!
//! Agents hold binary opinions and, at every step, all of them adopt the
//! opposite opinion exactly when strictly more of their influencers disagree
//! with them than agree. The crate decides convergence of labelled networks,
//! searches for non-convergent labellings, classifies structures that always
//! converge, and compiles Boolean circuits and small Turing machines into
//! diffusion networks whose convergence mirrors halting.

pub mod circuit;
pub mod cli;
pub mod dot;
pub mod dynamics;
mod error;
pub mod fixtures;
pub mod gadgets;
pub mod netcore;
pub mod reduction;

pub use error::{Error, Result};
