//! Non-positively graded commutative dg algebras that are free over their
//! degree-0 part, with morphisms, cohomology and the basic constructions.

pub mod algebra;
pub mod cohomology;
pub mod constructions;
pub mod fixtures;
pub mod json;
pub mod morphism;

pub use algebra::{DgAlgebra, GenMono, Generator, GeneratorSpec, GradedElement};
pub use cohomology::{FiberReport, RationalPoint, ValidationReport};
pub use constructions::{localize, pushout, relative_kahler, tensor, KahlerReport, NameAllocator, Pushout};
pub use morphism::DgMorphism;
