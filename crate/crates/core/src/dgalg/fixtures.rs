//! Small algebras used throughout the examples and tests.

use super::algebra::DgAlgebra;
use crate::exactalg::BaseRing;

/// ℚ[vars] in degree 0.
pub fn polynomial(vars: &[&str]) -> DgAlgebra {
    DgAlgebra::from_base(BaseRing::free(vars))
}

/// Algebra on `vars` with generators given as (name, degree, differential).
pub fn algebra(vars: &[&str], gens: &[(&str, i32, &str)]) -> DgAlgebra {
    let base = BaseRing::free(vars);
    let specs = gens
        .iter()
        .map(|(n, d, _)| super::algebra::GeneratorSpec { name: n.to_string(), degree: *d })
        .collect();
    DgAlgebra::build(base, specs, |skel, i| skel.parse_element(gens[i].2)).expect("fixture algebra")
}

/// ℚ[x][e], δe = x.
pub fn koszul() -> DgAlgebra {
    algebra(&["x"], &[("e", -1, "x")])
}

/// ℚ[x][e1, e2], δe1 = δe2 = x.
pub fn twin_koszul() -> DgAlgebra {
    algebra(&["x"], &[("e1", -1, "x"), ("e2", -1, "x")])
}

