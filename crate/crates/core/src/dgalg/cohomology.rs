//! Validation, cohomology presentations and fibers at rational points.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::algebra::DgAlgebra;
use crate::error::{Error, Result};
use crate::exactalg::linalg::{self, Matrix};
use crate::exactalg::module::{self, Column, ModulePresentation};
use crate::exactalg::poly::{fmt_rational, Rational};
use crate::exactalg::BaseRing;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationFailure {
    pub generator: String,
    pub check: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub checks: Vec<String>,
    pub failures: Vec<ValidationFailure>,
}

/// Assignment of rationals to base variables.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RationalPoint(pub BTreeMap<String, String>);

impl RationalPoint {
    pub fn from_values(values: impl IntoIterator<Item = (String, Rational)>) -> Self {
        RationalPoint(values.into_iter().map(|(k, v)| (k, fmt_rational(&v))).collect())
    }

    /// Coordinates in the variable order of `base`, after checking every
    /// relation vanishes.
    pub fn coordinates(&self, base: &BaseRing) -> Result<Vec<Rational>> {
        let mut out = Vec::with_capacity(base.nvars());
        for n in base.names() {
            let s = self.0.get(n).ok_or_else(|| Error::Context(format!("point assigns no value to {n}")))?;
            out.push(crate::exactalg::parse::parse_rational(s)?);
        }
        for r in base.relations() {
            if !r.evaluate(&out).is_zero() {
                return Err(Error::Context(format!("point violates relation {}", base.display(r))));
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberDegree {
    pub degree: i32,
    pub dimension: usize,
    pub cohomology_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberReport {
    pub degrees: Vec<FiberDegree>,
}

impl FiberReport {
    pub fn rank(&self, k: i32) -> Option<usize> {
        self.degrees.iter().find(|d| d.degree == k).map(|d| d.cohomology_rank)
    }
}

pub fn specialize(cols: &[Column], rows: usize, point: &[Rational]) -> Matrix {
    let mut m = linalg::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (&i, p) in c {
            m[i][j] = p.evaluate(point);
        }
    }
    m
}

impl DgAlgebra {
    pub fn validate(&self) -> ValidationReport {
        let mut failures = Vec::new();
        for g in self.generators() {
            let dd = self.delta(&g.differential);
            if !dd.is_zero() {
                failures.push(ValidationFailure {
                    generator: g.name.clone(),
                    check: "delta_squared".into(),
                    message: format!("δ²({}) = {}", g.name, self.display(&dd)),
                });
            }
        }
        ValidationReport {
            valid: failures.is_empty(),
            checks: vec!["degrees".into(), "finite_per_degree".into(), "delta_squared".into()],
            failures,
        }
    }

    /// H⁰ as the quotient ring A⁰/δ(A⁻¹).
    pub fn h0_ring(&self) -> BaseRing {
        let b = self.base();
        let mut rels: Vec<_> = b.relations().to_vec();
        for c in self.differential_matrix(-1) {
            rels.extend(c.into_values());
        }
        BaseRing::new(b.names().to_vec(), rels).expect("same variables")
    }

    /// `H^k` presented over the base ring; for `k = 0` the rank-one module
    /// `A⁰/δ(A⁻¹)`.
    pub fn cohomology(&self, k: i32) -> Result<ModulePresentation> {
        if k > 0 {
            return Err(Error::Unsupported(format!("degree {k} is positive")));
        }
        let base = self.base();
        if k == 0 {
            let im = self.differential_matrix(-1);
            return module::module_subquotient(base, 1, &[Column::from([(0, base.one())])], &im);
        }
        let basis = self.graded_basis(k);
        if basis.is_empty() {
            return Ok(ModulePresentation::zero(base));
        }
        let rows = self.graded_basis(k + 1).len();
        let z = module::syzygies(base, rows, &self.differential_matrix(k))?;
        let b = self.differential_matrix(k - 1);
        module::module_subquotient(base, basis.len(), &z, &b)
    }

    /// Dimensions and cohomology ranks of `A ⊗_{A⁰} ℚ_p` in degrees `0..=-depth`.
    pub fn fiber(&self, point: &crate::dgalg::RationalPoint, depth: i32) -> Result<FiberReport> {
        let p = point.coordinates(self.base())?;
        self.fiber_at(&p, depth)
    }

    pub fn fiber_at(&self, p: &[Rational], depth: i32) -> Result<FiberReport> {
        let dims: BTreeMap<i32, usize> = (-(depth + 1)..=0).map(|k| (k, self.graded_basis(k).len())).collect();
        let mut ranks: BTreeMap<i32, usize> = BTreeMap::new();
        ranks.insert(0, 0);
        for k in -(depth + 1)..0 {
            let m = specialize(&self.differential_matrix(k), dims[&(k + 1)], p);
            ranks.insert(k, linalg::rank(&m));
        }
        let degrees = (-depth..=0)
            .rev()
            .map(|k| FiberDegree {
                degree: k,
                dimension: dims[&k],
                cohomology_rank: dims[&k] - ranks[&k] - ranks[&(k - 1)],
            })
            .collect();
        Ok(FiberReport { degrees })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgalg::fixtures;
    use crate::exactalg::poly::rat;

    #[test]
    fn koszul_cohomology() {
        let k = fixtures::koszul();
        let h0 = k.cohomology(0).unwrap();
        assert_eq!(h0.rank, 1);
        assert_eq!(h0.relation_strings(), vec!["x"]);
        assert!(k.cohomology(-1).unwrap().is_zero());
        assert!(k.cohomology(-2).unwrap().is_zero());
        assert!(k.h0_ring().is_zero_mod(&k.base().parse("x").unwrap()));
    }

    #[test]
    fn twin_koszul_h1() {
        let t = fixtures::twin_koszul();
        let h = t.cohomology(-1).unwrap();
        assert_eq!(h.rank, 1);
        assert_eq!(h.relation_strings(), vec!["x"]);
    }

    #[test]
    fn fibers() {
        let k = fixtures::koszul();
        let f0 = k.fiber_at(&[rat(0)], 2).unwrap();
        assert_eq!((f0.rank(0), f0.rank(-1)), (Some(1), Some(1)));
        let f1 = k.fiber_at(&[rat(1)], 2).unwrap();
        assert_eq!((f1.rank(0), f1.rank(-1)), (Some(0), Some(0)));
        let t = fixtures::twin_koszul();
        assert_eq!(t.fiber_at(&[rat(2)], 2).unwrap().rank(-1), Some(0));
        assert_eq!(t.fiber_at(&[rat(0)], 2).unwrap().rank(-1), Some(2));
    }

    #[test]
    fn point_must_satisfy_relations() {
        let b = BaseRing::new(vec!["x".into()], vec![BaseRing::free(&["x"]).parse("x - 1").unwrap()]).unwrap();
        let a = DgAlgebra::from_base(b);
        let bad = RationalPoint(BTreeMap::from([("x".into(), "2".into())]));
        assert!(a.fiber(&bad, 1).is_err());
    }
}
