//! Noncrossing partition lattices of hull configurations.
//!
//! A hull configuration is a finite set of points in the plane that lie on
//! a segment or on the boundary of their convex hull. This crate builds the
//! lattice NC(P) of noncrossing partitions of such a configuration, produces
//! symmetric chain decompositions when a side is blank, enumerates noncrossing
//! trees with convex geodesics, and explores the poset H(n) of configuration
//! classes. Every combinatorial predicate has an exact-geometry counterpart in
//! [`oracle`] for cross-checking.

pub mod check;
pub mod cli;
pub mod configuration;
pub mod error;
pub mod hullposet;
pub mod lattice;
pub mod oracle;
pub mod scd;
pub mod trees;

pub use configuration::HullConfig;
pub use error::{Error, Result};
pub use hullposet::HullElement;
pub use lattice::{build_lattice, NCLattice, Partition};
pub use scd::ChainDecomposition;
pub use trees::Forest;
