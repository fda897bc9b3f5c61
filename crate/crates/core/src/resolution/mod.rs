//! Simplicial resolutions: matching and latching objects, skeletons, the
//! functorial construction and special-resolution checks.

pub mod build;
pub mod limits;
pub mod simplicial;
pub mod special;

pub use build::{check_naturality, induced_level_maps, resolve, resolve_truncated, BlockReport, RankCheck, Resolution, TopBlock};
pub use limits::{latching_object, matching_object, skeleton, FiberDim, FiniteLimit, LatchingObject};
pub use simplicial::{IdentityFailure, Provenance, SimplicialDgAlgebra};
pub use special::{fiber_points, verify_special, FiberCheck, LevelReport, SpecialReport};
