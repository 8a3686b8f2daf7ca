//! Inertia sectors and exact Euler invariants of cyclic orbifold complexes.
//!
//! An orbifold is presented as a simplicial complex whose simplices carry the
//! orders of their cyclic isotropy groups, with units describing how each
//! group embeds into the group of a face. From that data the crate builds the
//! inertia complex, splits it into sector components, and evaluates the
//! vanishing of their Euler and Euler–Satake characteristics, which decides
//! whether a closed almost-complex cyclic orbifold carries a nonvanishing
//! vector field.

pub mod builders;
pub mod complex;
pub mod decide;
pub mod error;
pub mod format;
pub mod inertia;
pub mod order;
pub mod orbifold;
pub mod rational;
pub mod report;

pub use complex::{build_complex, SimplexId, SimplicialComplex};
pub use decide::{decide_nonvanishing, Decision, Verdict};
pub use error::{Error, Result};
pub use inertia::{build_inertia, sector_components, InertiaComplex, InertiaNode, SectorComponent};
pub use orbifold::{
    barycentric_subdivide, euler_satake, restrict_element, validate, CyclicLabeling, FaceRestriction,
    OrbifoldComplex, ValidationFinding, ValidationMode, ValidationReport,
};
pub use order::{image_poset, SectorPoset};
pub use rational::Rational;
