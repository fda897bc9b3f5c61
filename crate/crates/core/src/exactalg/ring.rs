//! Finitely presented base rings ℚ[x̄]/J and ideal-level operations.

use std::sync::Arc;

use num_traits::{One, Zero};

use super::groebner::{self, ModVec};
use super::parse::{self, ExprAlgebra};
use super::poly::{Monomial, MonomialOrder, Polynomial, Rational};
use crate::error::{Error, Result};

#[derive(Debug)]
struct RingData {
    names: Vec<String>,
    relations: Vec<Polynomial>,
    order: MonomialOrder,
    gb: Vec<Polynomial>,
    gb_vecs: Vec<ModVec>,
}

/// The degree-0 ring ℚ[x̄]/J with its reduced Gröbner basis, computed once.
/// Cloning is cheap.
#[derive(Clone, Debug)]
pub struct BaseRing(Arc<RingData>);

impl PartialEq for BaseRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.names == other.0.names && self.0.gb == other.0.gb && self.0.order == other.0.order)
    }
}

impl Eq for BaseRing {}

impl BaseRing {
    pub fn new(names: Vec<String>, relations: Vec<Polynomial>) -> Result<Self> {
        let order = MonomialOrder::degrevlex(names.len());
        Self::with_order(names, relations, order)
    }

    pub fn with_order(names: Vec<String>, relations: Vec<Polynomial>, order: MonomialOrder) -> Result<Self> {
        for (i, n) in names.iter().enumerate() {
            if !parse::is_valid_name(n) {
                return Err(Error::Context(format!("invalid variable name '{n}'")));
            }
            if names[..i].contains(n) {
                return Err(Error::Context(format!("duplicate variable '{n}'")));
            }
        }
        if order.nvars() != names.len() {
            return Err(Error::Context("monomial order arity differs from variable count".into()));
        }
        for r in &relations {
            if r.nvars() != names.len() {
                return Err(Error::Context("relation arity differs from variable count".into()));
            }
        }
        let relations: Vec<Polynomial> = relations.into_iter().filter(|r| !r.is_zero()).collect();
        let gb = groebner::groebner_polys(&relations, &order);
        let gb_vecs = gb.iter().map(|g| ModVec::from_poly(g, &order)).collect();
        Ok(BaseRing(Arc::new(RingData { names, relations, order, gb, gb_vecs })))
    }

    pub fn free(names: &[&str]) -> Self {
        Self::new(names.iter().map(|s| s.to_string()).collect(), vec![]).expect("valid names")
    }

    pub fn nvars(&self) -> usize {
        self.0.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.0.relations
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.0.order
    }

    /// Reduced Gröbner basis of the defining ideal J.
    pub fn relation_basis(&self) -> &[Polynomial] {
        &self.0.gb
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.names.iter().position(|n| n == name)
    }

    pub fn var(&self, name: &str) -> Option<Polynomial> {
        self.index_of(name).map(|i| Polynomial::var(self.nvars(), i))
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self.nvars())
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::one(self.nvars())
    }

    pub fn constant(&self, c: Rational) -> Polynomial {
        Polynomial::constant(self.nvars(), c)
    }

    pub fn is_zero_ring(&self) -> bool {
        self.0.gb.len() == 1 && self.0.gb[0].is_constant()
    }

    /// Normal form modulo J.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        if self.0.gb.is_empty() || p.is_zero() {
            return p.clone();
        }
        groebner::reduce_poly(p, &self.0.gb_vecs, &self.0.order)
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        self.reduce(&a.mul(b))
    }

    pub fn is_zero_mod(&self, p: &Polynomial) -> bool {
        self.reduce(p).is_zero()
    }

    pub fn check_arity(&self, p: &Polynomial) -> Result<()> {
        if p.nvars() != self.nvars() {
            return Err(Error::Context(format!(
                "polynomial has {} variables, ring has {}",
                p.nvars(),
                self.nvars()
            )));
        }
        Ok(())
    }

    pub fn parse(&self, src: &str) -> Result<Polynomial> {
        let e = parse::parse_expr(src)?;
        Ok(self.reduce(&e.eval(&PolyContext(self))?))
    }

    pub fn parse_raw(&self, src: &str) -> Result<Polynomial> {
        parse::parse_expr(src)?.eval(&PolyContext(self))
    }

    pub fn display(&self, p: &Polynomial) -> String {
        p.display(&self.0.names, &self.0.order)
    }

    /// Ring with extra variables appended; the relations carry over.
    pub fn extend(&self, extra: &[String], extra_relations: Vec<Polynomial>) -> Result<BaseRing> {
        let mut names = self.0.names.clone();
        names.extend(extra.iter().cloned());
        let n = names.len();
        let map: Vec<usize> = (0..self.nvars()).collect();
        let mut rels: Vec<Polynomial> = self.0.relations.iter().map(|r| r.remap(&map, n)).collect();
        rels.extend(extra_relations);
        BaseRing::new(names, rels)
    }

    /// Embed a polynomial of this ring into `target`, matching variables by name.
    pub fn embed_into(&self, p: &Polynomial, target: &BaseRing) -> Result<Polynomial> {
        let map: Vec<usize> = self
            .names()
            .iter()
            .map(|n| target.index_of(n).ok_or_else(|| Error::Context(format!("variable {n} missing in target ring"))))
            .collect::<Result<_>>()?;
        Ok(target.reduce(&p.remap(&map, target.nvars())))
    }

    /// Reduced Gröbner basis of `gens + J`.
    pub fn ideal_basis(&self, gens: &[Polynomial]) -> Vec<Polynomial> {
        let mut all: Vec<Polynomial> = self.0.gb.clone();
        all.extend(gens.iter().cloned());
        groebner::groebner_polys(&all, &self.0.order)
    }

    /// Whether `f` lies in `gens + J`.
    pub fn ideal_contains(&self, gens: &[Polynomial], f: &Polynomial) -> bool {
        let gb = self.ideal_basis(gens);
        normal_form(f, &GroebnerBasis::from_reduced(gb, self.order().clone())).is_zero()
    }
}

struct PolyContext<'a>(&'a BaseRing);

impl ExprAlgebra for PolyContext<'_> {
    type Value = Polynomial;
    fn number(&self, r: &Rational) -> Polynomial {
        self.0.constant(r.clone())
    }
    fn symbol(&self, name: &str) -> Option<Polynomial> {
        self.0.var(name)
    }
    fn add(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        Ok(a.add(b))
    }
    fn sub(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        Ok(a.sub(b))
    }
    fn mul(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        Ok(a.mul(b))
    }
    fn neg(&self, a: &Polynomial) -> Polynomial {
        a.neg()
    }
}

/// A reduced Gröbner basis together with the order it was computed for.
#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis {
    pub order: MonomialOrder,
    pub polys: Vec<Polynomial>,
    vecs: Vec<ModVec>,
}

impl GroebnerBasis {
    pub(crate) fn from_reduced(polys: Vec<Polynomial>, order: MonomialOrder) -> Self {
        let vecs = polys.iter().map(|p| ModVec::from_poly(p, &order)).collect();
        GroebnerBasis { order, polys, vecs }
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].is_constant()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys.iter().map(|p| p.leading_term(&self.order).unwrap().0.clone()).collect()
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn groebner_basis(gens: &[Polynomial], order: &MonomialOrder) -> Result<GroebnerBasis> {
    if let Some(g) = gens.iter().find(|g| g.nvars() != order.nvars()) {
        return Err(Error::Context(format!(
            "generator has {} variables, order expects {}",
            g.nvars(),
            order.nvars()
        )));
    }
    Ok(GroebnerBasis::from_reduced(groebner::groebner_polys(gens, order), order.clone()))
}

pub fn normal_form(f: &Polynomial, basis: &GroebnerBasis) -> Polynomial {
    if basis.vecs.is_empty() {
        return f.clone();
    }
    groebner::reduce_poly(f, &basis.vecs, &basis.order)
}

/// Cofactors `g_i` with `Σ g_i f_i ≡ 1 (mod J)`, or `None` when the `f_i`
/// generate a proper ideal of the base ring.
/// Cofactors `g_i` with `Σ g_i·gens_i = f` modulo the relations of `base`.
pub fn membership_certificate(base: &BaseRing, gens: &[Polynomial], f: &Polynomial) -> Option<Vec<Polynomial>> {
    let cols: Vec<super::module::Column> = gens
        .iter()
        .map(|g| {
            let mut c = super::module::Column::new();
            if !g.is_zero() {
                c.insert(0, g.clone());
            }
            c
        })
        .collect();
    let mut target = super::module::Column::new();
    if !f.is_zero() {
        target.insert(0, f.clone());
    }
    let lifter = super::module::Lifter::new(base, 1, &cols);
    let cof = lifter.lift(&target)?;
    let check = cof.iter().zip(gens).fold(base.zero(), |acc, (g, h)| acc.add(&g.mul(h))).sub(f);
    debug_assert!(base.is_zero_mod(&check));
    if !base.is_zero_mod(&check) {
        return None;
    }
    Some(cof)
}

pub fn unit_ideal_certificate(base: &BaseRing, gens: &[Polynomial]) -> Option<Vec<Polynomial>> {
    membership_certificate(base, gens, &base.one())
}

/// Rational constant `1/c` as a polynomial, for callers that need exact inverses.
pub fn inverse_constant(nvars: usize, c: &Rational) -> Option<Polynomial> {
    (!c.is_zero()).then(|| Polynomial::constant(nvars, Rational::one() / c.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_single_division_step() {
        let r = BaseRing::free(&["x", "y"]);
        let gb = groebner_basis(&[r.parse("x - y").unwrap()], r.order()).unwrap();
        assert_eq!(normal_form(&r.parse("x*y").unwrap(), &gb), r.parse("y^2").unwrap());
        let gx = groebner_basis(&[r.parse("x").unwrap()], r.order()).unwrap();
        assert_eq!(normal_form(&r.one(), &gx), r.one());
    }

    #[test]
    fn zero_ideal_has_empty_basis() {
        let r = BaseRing::free(&["x"]);
        let gb = groebner_basis(&[r.zero()], r.order()).unwrap();
        assert!(gb.is_zero_ideal());
    }

    #[test]
    fn mixed_arity_is_a_context_error() {
        let o = MonomialOrder::degrevlex(2);
        let p = Polynomial::var(3, 0);
        assert!(matches!(groebner_basis(&[p], &o), Err(Error::Context(_))));
    }

    #[test]
    fn unit_certificates() {
        let r = BaseRing::free(&["x"]);
        let x = r.parse("x").unwrap();
        let g = unit_ideal_certificate(&r, &[x.clone(), r.parse("1 - x").unwrap()]).unwrap();
        assert_eq!(g, vec![r.one(), r.one()]);
        assert!(unit_ideal_certificate(&r, &[x.clone()]).is_none());

        let q = BaseRing::new(vec!["x".into()], vec![r.parse("x - 1").unwrap()]).unwrap();
        let g = unit_ideal_certificate(&q, &[q.var("x").unwrap()]).unwrap();
        assert_eq!(g, vec![q.one()]);
    }

    #[test]
    fn quotient_ring_reduces() {
        let r = BaseRing::free(&["x", "t"]);
        let l = BaseRing::new(r.names().to_vec(), vec![r.parse("x*t - 1").unwrap()]).unwrap();
        assert_eq!(l.parse("x^2*t").unwrap(), l.parse("x").unwrap());
        assert!(!l.is_zero_ring());
        let z = BaseRing::new(r.names().to_vec(), vec![r.parse("x*t - 1").unwrap(), r.parse("x").unwrap()]).unwrap();
        assert!(z.is_zero_ring());
    }
}
