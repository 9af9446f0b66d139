//! Exact MAP inference for binary pairwise graphical models and exact 0-1
//! integer programming by best-first branching over LP vertices.
//!
//! The crate is organised around a small simplex engine ([`lp`]) that always
//! returns basic solutions and can restart from a stored basis. On top of it:
//!
//! * [`model`]: pairwise models, their local-polytope relaxation, random
//!   instances and an exhaustive MAP oracle;
//! * [`vertex`]: half-integral points, frustrated cycles, the combinatorial
//!   vertex test and cycle-inequality separation;
//! * [`branch`]: best-first branch-and-bound for 0-1 programs and MAP;
//! * [`mbest`]: the M best integral solutions;
//! * [`estimator`]: enumeration of confounding singleton patterns;
//! * [`cuts`]: a cycle-inequality cutting-plane solver;
//! * [`harness`]: the synthetic experiment driver and its CSV output.

pub mod branch;
pub mod cuts;
pub mod error;
pub mod estimator;
pub mod harness;
pub mod lp;
pub mod mbest;
pub mod model;
mod search;
pub mod vertex;

pub use error::{Error, Result};
