//! Workbench for lower-bounding the minimum distance of cyclic and
//! constacyclic codes from run patterns in their defining sets, and for
//! building distance-optimal locality-2 repairable codes on top of those
//! bounds.
//!
//! The crate is organized around the pipeline:
//!
//! * [`algebra`]: exact arithmetic in GF(p^k) and polynomials over it;
//! * [`codes`]: defining sets, generators, encoders, parity checks, DFT;
//! * [`upattern`]: the three-valued zero/unknown/nonzero symbolic domain,
//!   run patterns, and cyclic pattern matching;
//! * [`pseudorank`]: the singleton-procedure search engine and its
//!   replayable witnesses;
//! * [`bounds`]: the pattern bounds, the solution-vector system, and
//!   exhaustive verification through abstraction sets;
//! * [`distance`]: exhaustive and randomized ground-truth oracles;
//! * [`lrc`]: constructions and classification of locality-2 codes.

pub mod algebra;
pub mod bounds;
pub mod codes;
pub mod distance;
pub mod error;
pub mod lrc;
pub mod pseudorank;
pub mod replay;
pub mod rng;
pub mod upattern;

pub use error::{Error, Result};
