//! Étale coverings of affine dg algebras and their Čech hypercovers.

pub mod covering;
pub mod hypercover;

pub use covering::{
    affine_shrink, classify_member, covering_verdict, etale_verdict, shrink_report, Condition1, Condition3, CoveringVerdict,
    EtaleVerdict, MemberKind, Shrink,
};
pub use hypercover::{cech_hypercover, coherence, verify_hypercover, expected_factor_count, Chart, HyperLevel, Hypercover, LevelCheck, ProductMap};
