//! Generalized Stirling permutations, the increasing-tree families they
//! encode, and the Pólya-type urns that govern their statistics.
//!
//! * [`perm`]: validation, counting, enumeration, uniform sampling and
//!   ascent / descent / plateau / block statistics.
//! * [`tree`]: `(k+1)`-ary, bundled and generalized plane increasing trees,
//!   degree-weight families, random growth and tree statistics.
//! * [`bijection`]: contour codes between trees and permutations, the
//!   sequence / F-tree bijections, and exhaustive statistic-transfer checks.
//! * [`urn`]: simulation of the exterior-leaf, block and Pólya urns, plus
//!   their limiting covariances.
//! * [`dist`]: exact finite-`n` distributions and limit-law quantities.
//! * [`harness`]: seeded, replicated Monte Carlo experiments and their
//!   statistical comparison against theory.

pub mod bijection;
pub mod dist;
pub mod error;
pub mod harness;
pub mod perm;
pub mod rational;
pub mod rng;
pub mod tree;
pub mod urn;

pub use error::{Error, Result};
pub use perm::{Flavor, Multiplicities, StirlingPerm};
pub use rational::Rational;
