//! Exact combinatorics of symplectic sphere classes on rational surfaces.
//!
//! The crate models the lattice of `S^2 x S^2` and `CP^2 # k(-CP^2)` (`k <= 9`),
//! enumerates classes satisfying the adjunction constraint for embedded
//! spheres, indexes admissible sets of negative classes by codimension, and
//! compares two symplectic classes through the walls that separate them:
//! stability ranges for homotopy groups of symplectomorphism groups, wall
//! crossing certificates along segments, and critical ball capacities.
//!
//! All arithmetic is exact. Integer classes use `i64` coordinates; symplectic
//! classes use arbitrary precision rationals.

pub mod cli;
pub mod error;
pub mod lattice;
pub mod packing;
pub mod rational;
pub mod spheres;
pub mod stability;
pub mod strata;
pub mod wire;

pub use error::{Error, Result};
pub use lattice::{LatticeClass, Reflection, SurfaceKind, SurfaceModel, SymplecticClass, WeylWord};
pub use rational::Rational;
pub use spheres::{Certification, ClassCatalog, EnumerationBounds, Floor, SphereClassSet};
