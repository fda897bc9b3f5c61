//! Exact arithmetic over ℚ: polynomials, Gröbner bases, quotient rings and
//! finitely presented modules.

pub mod groebner;
pub mod linalg;
pub mod module;
pub mod parse;
pub mod poly;
pub mod ring;

pub use module::{kernel, module_subquotient, syzygies, Column, Kernel, Lifter, ModulePresentation};
pub use poly::{rat, ratio, Monomial, MonomialOrder, OrderKind, Polynomial, Rational};
pub use ring::{groebner_basis, membership_certificate, normal_form, unit_ideal_certificate, BaseRing, GroebnerBasis};
