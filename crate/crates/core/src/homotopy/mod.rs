//! Fibrations, quasi-isomorphisms, path objects and factorizations.

pub mod fibration;
pub mod path;
pub mod qiso;

pub use fibration::{jacobian_rank_at, recognize_fibration, BaseStep, FibrationWitness, Recognition};
pub use path::{brown_factorize, path_object, Factorization, Stage};
pub use qiso::{certify_quasi_iso, compare_cohomology, compare_h0, QisoVerdict, Verdict};
