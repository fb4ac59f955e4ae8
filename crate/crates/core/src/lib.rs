//! Slope-length geometry on cusp cross-sections, 2π filling certificates,
//! negatively curved metrics on filling solid tori and the volume,
//! Gromov-norm and surface bounds they feed.
//!
//! Modules:
//!
//! - [`lattice`]: cusp lattices, slopes, lengths and enumeration
//! - [`filling`]: certification predicates built on slope lengths
//! - [`metric`]: warped-product metrics on the solid torus and the
//!   pinching constant α(ℓ₁)
//! - [`bounds`]: v3, β(α) and the volume and norm bounds through filling
//! - [`surface`]: Euler characteristic audits for essential surfaces
//! - [`io`]: catalog loading and deterministic JSON reports
//! - [`cli`]: the `cuspgauge` command line

pub mod bounds;
pub mod cli;
pub mod error;
pub mod filling;
pub mod io;
pub mod lattice;
pub mod metric;
pub mod numeric;
pub mod surface;
pub mod tolerance;

pub use error::{Error, ErrorClass, Result};
pub use lattice::{CuspLattice, EuclideanVector, Slope};
