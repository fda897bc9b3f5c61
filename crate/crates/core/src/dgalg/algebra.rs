//! Almost-free commutative dg algebras over a finitely presented base ring.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::One;

use crate::error::{Error, Result};
use crate::exactalg::module::Column;
use crate::exactalg::parse::{self, ExprAlgebra};
use crate::exactalg::poly::{fmt_rational, Rational};
use crate::exactalg::{BaseRing, Polynomial};

/// Product of generators, sorted by generator index; odd generators have
/// exponent one.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenMono(pub Vec<(usize, u32)>);

impl GenMono {
    pub fn one() -> Self {
        GenMono(Vec::new())
    }

    pub fn gen(i: usize) -> Self {
        GenMono(vec![(i, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn generators(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&(i, _)| i)
    }
}

/// Homogeneous element: a base-ring combination of generator monomials.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedElement {
    pub degree: i32,
    pub terms: BTreeMap<GenMono, Polynomial>,
}

impl GradedElement {
    pub fn zero(degree: i32) -> Self {
        GradedElement { degree, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &GenMono) -> Option<&Polynomial> {
        self.terms.get(m)
    }

    fn add_term(&mut self, base: &BaseRing, m: GenMono, p: &Polynomial) {
        let e = self.terms.entry(m.clone()).or_insert_with(|| base.zero());
        *e = base.reduce(&e.add(p));
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub name: String,
    pub degree: i32,
    pub differential: GradedElement,
}

#[derive(Debug)]
struct AlgData {
    base: BaseRing,
    gens: Vec<Generator>,
}

/// Negative generators over `base`, kept in declaration order. Cheap to clone.
#[derive(Clone, Debug)]
pub struct DgAlgebra(Arc<AlgData>);

impl PartialEq for DgAlgebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.base == other.0.base && self.0.gens == other.0.gens)
    }
}

/// Generator data before differentials are known.
#[derive(Clone, Debug)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: i32,
}

impl DgAlgebra {
    pub fn new(base: BaseRing, gens: Vec<Generator>) -> Result<Self> {
        let mut seen: BTreeSet<&str> = base.names().iter().map(|s| s.as_str()).collect();
        for g in &gens {
            if !parse::is_valid_name(&g.name) {
                return Err(Error::InvalidAlgebra(format!("invalid generator name '{}'", g.name)));
            }
            if !seen.insert(&g.name) {
                return Err(Error::InvalidAlgebra(format!("duplicate name '{}'", g.name)));
            }
            if g.degree > 0 {
                return Err(Error::InvalidAlgebra(format!("generator {}: degree must be ≤ 0", g.name)));
            }
            if g.degree == 0 {
                return Err(Error::InvalidAlgebra(format!(
                    "generator {}: degree-0 generators belong to the base ring",
                    g.name
                )));
            }
        }
        let skeleton = DgAlgebra(Arc::new(AlgData {
            base: base.clone(),
            gens: gens.iter().map(|g| Generator { differential: GradedElement::zero(g.degree + 1), ..g.clone() }).collect(),
        }));
        let mut fixed = Vec::with_capacity(gens.len());
        for g in &gens {
            let d = &g.differential;
            if !d.is_zero() && d.degree != g.degree + 1 {
                return Err(Error::InvalidAlgebra(format!(
                    "generator {}: differential has degree {}, expected {}",
                    g.name,
                    d.degree,
                    g.degree + 1
                )));
            }
            for (m, p) in &d.terms {
                base.check_arity(p)?;
                for &(i, e) in &m.0 {
                    if i >= gens.len() {
                        return Err(Error::InvalidAlgebra(format!("generator {}: differential uses unknown generator", g.name)));
                    }
                    if e > 1 && gens[i].degree % 2 != 0 {
                        return Err(Error::InvalidAlgebra(format!("generator {}: odd square in differential", g.name)));
                    }
                }
                if skeleton.mono_degree(m) != g.degree + 1 {
                    return Err(Error::InvalidAlgebra(format!("generator {}: inhomogeneous differential", g.name)));
                }
            }
            let mut diff = GradedElement::zero(g.degree + 1);
            for (m, p) in &d.terms {
                diff.add_term(&base, m.clone(), p);
            }
            fixed.push(Generator { name: g.name.clone(), degree: g.degree, differential: diff });
        }
        Ok(DgAlgebra(Arc::new(AlgData { base, gens: fixed })))
    }

    /// Algebra concentrated in degree 0.
    pub fn from_base(base: BaseRing) -> Self {
        DgAlgebra(Arc::new(AlgData { base, gens: Vec::new() }))
    }

    /// ℚ itself.
    pub fn ground() -> Self {
        Self::from_base(BaseRing::free(&[]))
    }

    /// The zero algebra {0}.
    pub fn zero_algebra() -> Self {
        let base = BaseRing::new(vec![], vec![Polynomial::one(0)]).expect("zero ring");
        Self::from_base(base)
    }

    /// Builds an algebra whose differentials are computed from the
    /// generator-only skeleton, for constructions that need the product
    /// structure before the differentials exist.
    pub fn build(
        base: BaseRing,
        specs: Vec<GeneratorSpec>,
        differential: impl Fn(&DgAlgebra, usize) -> Result<GradedElement>,
    ) -> Result<Self> {
        let skeleton = DgAlgebra(Arc::new(AlgData {
            base: base.clone(),
            gens: specs
                .iter()
                .map(|s| Generator { name: s.name.clone(), degree: s.degree, differential: GradedElement::zero(s.degree + 1) })
                .collect(),
        }));
        let mut gens = Vec::with_capacity(specs.len());
        for (i, s) in specs.iter().enumerate() {
            let d = differential(&skeleton, i)?;
            gens.push(Generator { name: s.name.clone(), degree: s.degree, differential: d });
        }
        DgAlgebra::new(base, gens)
    }

    pub fn base(&self) -> &BaseRing {
        &self.0.base
    }

    pub fn generators(&self) -> &[Generator] {
        &self.0.gens
    }

    pub fn ngens(&self) -> usize {
        self.0.gens.len()
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.0.gens.iter().position(|g| g.name == name)
    }

    pub fn degree_of(&self, i: usize) -> i32 {
        self.0.gens[i].degree
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.0.gens[i].degree % 2 != 0
    }

    pub fn is_zero_algebra(&self) -> bool {
        self.0.base.is_zero_ring()
    }

    pub fn min_degree(&self) -> i32 {
        self.0.gens.iter().map(|g| g.degree).min().unwrap_or(0)
    }

    pub fn mono_degree(&self, m: &GenMono) -> i32 {
        m.0.iter().map(|&(i, e)| self.degree_of(i) * e as i32).sum()
    }

    /// Every name in use: base variables, then generators.
    pub fn all_names(&self) -> Vec<String> {
        let mut v = self.0.base.names().to_vec();
        v.extend(self.0.gens.iter().map(|g| g.name.clone()));
        v
    }

    // ---- elements ----

    pub fn scalar(&self, p: &Polynomial) -> GradedElement {
        let mut e = GradedElement::zero(0);
        e.add_term(&self.0.base, GenMono::one(), p);
        e
    }

    pub fn one(&self) -> GradedElement {
        self.scalar(&self.0.base.one())
    }

    pub fn gen(&self, i: usize) -> GradedElement {
        let mut e = GradedElement::zero(self.degree_of(i));
        e.add_term(&self.0.base, GenMono::gen(i), &self.0.base.one());
        e
    }

    pub fn monomial(&self, m: &GenMono, p: &Polynomial) -> GradedElement {
        let mut e = GradedElement::zero(self.mono_degree(m));
        e.add_term(&self.0.base, m.clone(), p);
        e
    }

    pub fn add(&self, a: &GradedElement, b: &GradedElement) -> GradedElement {
        if a.is_zero() {
            return b.clone();
        }
        let mut out = a.clone();
        debug_assert!(b.is_zero() || a.degree == b.degree, "adding elements of different degree");
        for (m, p) in &b.terms {
            out.add_term(&self.0.base, m.clone(), p);
        }
        out
    }

    pub fn sub(&self, a: &GradedElement, b: &GradedElement) -> GradedElement {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &GradedElement) -> GradedElement {
        GradedElement { degree: a.degree, terms: a.terms.iter().map(|(m, p)| (m.clone(), p.neg())).collect() }
    }

    pub fn scale(&self, a: &GradedElement, p: &Polynomial) -> GradedElement {
        let mut out = GradedElement::zero(a.degree);
        for (m, q) in &a.terms {
            out.add_term(&self.0.base, m.clone(), &q.mul(p));
        }
        out
    }

    /// Product of monomials with its Koszul sign; `None` when an odd
    /// generator repeats.
    pub fn mul_mono(&self, a: &GenMono, b: &GenMono) -> Option<(GenMono, bool)> {
        let mut negative = false;
        for &(j, _) in &b.0 {
            if !self.is_odd(j) {
                continue;
            }
            for &(i, _) in &a.0 {
                if self.is_odd(i) {
                    if i == j {
                        return None;
                    }
                    if i > j {
                        negative = !negative;
                    }
                }
            }
        }
        let mut merged: BTreeMap<usize, u32> = a.0.iter().copied().collect();
        for &(j, e) in &b.0 {
            *merged.entry(j).or_insert(0) += e;
        }
        Some((GenMono(merged.into_iter().collect()), negative))
    }

    pub fn mul(&self, a: &GradedElement, b: &GradedElement) -> GradedElement {
        let mut out = GradedElement::zero(a.degree + b.degree);
        let mut acc: BTreeMap<GenMono, Polynomial> = BTreeMap::new();
        for (ma, pa) in &a.terms {
            for (mb, pb) in &b.terms {
                if let Some((m, neg)) = self.mul_mono(ma, mb) {
                    let p = pa.mul(pb);
                    let p = if neg { p.neg() } else { p };
                    let e = acc.entry(m).or_insert_with(|| self.0.base.zero());
                    e.add_assign_ref(&p);
                }
            }
        }
        for (m, p) in acc {
            out.add_term(&self.0.base, m, &p);
        }
        out
    }

    pub fn pow(&self, a: &GradedElement, e: u32) -> GradedElement {
        let mut r = self.one();
        for _ in 0..e {
            r = self.mul(&r, a);
        }
        r
    }

    pub fn delta_mono(&self, m: &GenMono) -> GradedElement {
        let Some(&(i, e)) = m.0.first() else {
            return GradedElement::zero(1);
        };
        let mut rest = m.clone();
        if e == 1 {
            rest.0.remove(0);
        } else {
            rest.0[0].1 -= 1;
        }
        let rest_el = self.monomial(&rest, &self.0.base.one());
        let first = self.mul(&self.0.gens[i].differential, &rest_el);
        let second = self.mul(&self.gen(i), &self.delta_mono(&rest));
        let second = if self.degree_of(i) % 2 != 0 { self.neg(&second) } else { second };
        let mut out = self.add(&first, &second);
        out.degree = self.mono_degree(m) + 1;
        out
    }

    pub fn delta(&self, a: &GradedElement) -> GradedElement {
        let mut out = GradedElement::zero(a.degree + 1);
        for (m, p) in &a.terms {
            let d = self.delta_mono(m);
            out = self.add(&out, &self.scale(&d, p));
        }
        out.degree = a.degree + 1;
        out
    }

    // ---- graded pieces ----

    /// Canonical monomials of total degree `k`, ascending.
    pub fn graded_basis(&self, k: i32) -> Vec<GenMono> {
        let mut out = Vec::new();
        if k > 0 {
            return out;
        }
        let mut cur = Vec::new();
        self.enumerate(0, k, &mut cur, &mut out);
        out.sort();
        out
    }

    fn enumerate(&self, i: usize, remaining: i32, cur: &mut Vec<(usize, u32)>, out: &mut Vec<GenMono>) {
        if remaining == 0 {
            out.push(GenMono(cur.clone()));
            return;
        }
        if i == self.ngens() {
            return;
        }
        self.enumerate(i + 1, remaining, cur, out);
        let d = self.degree_of(i);
        let max = if self.is_odd(i) { 1 } else { (remaining / d) as u32 };
        for e in 1..=max {
            if d * e as i32 >= remaining {
                cur.push((i, e));
                self.enumerate(i + 1, remaining - d * e as i32, cur, out);
                cur.pop();
            }
        }
    }

    pub fn to_column(&self, a: &GradedElement, basis: &[GenMono]) -> Result<Column> {
        let mut c = Column::new();
        for (m, p) in &a.terms {
            let i = basis
                .binary_search(m)
                .map_err(|_| Error::Dimension(format!("monomial {} not in basis", self.display_mono(m))))?;
            c.insert(i, p.clone());
        }
        Ok(c)
    }

    pub fn from_column(&self, c: &Column, basis: &[GenMono], degree: i32) -> GradedElement {
        let mut out = GradedElement::zero(degree);
        for (&i, p) in c {
            out.add_term(&self.0.base, basis[i].clone(), p);
        }
        out
    }

    /// Columns of δ: A^k → A^{k+1}, in the bases of `graded_basis`.
    pub fn differential_matrix(&self, k: i32) -> Vec<Column> {
        let target = self.graded_basis(k + 1);
        self.graded_basis(k)
            .iter()
            .map(|m| self.to_column(&self.delta_mono(m), &target).expect("δ lands in the graded basis"))
            .collect()
    }

    // ---- text ----

    pub fn parse_element(&self, src: &str) -> Result<GradedElement> {
        self.parse_element_at(src, 1, 1)
    }

    pub fn parse_element_at(&self, src: &str, line: usize, column: usize) -> Result<GradedElement> {
        let e = parse::parse_expr_at(src, line, column)?;
        let v = e.eval(&ElementContext(self))?;
        let mut out = GradedElement::zero(v.0.unwrap_or(0));
        for (m, p) in &v.1 {
            out.add_term(&self.0.base, m.clone(), p);
        }
        Ok(out)
    }

    pub fn display_mono(&self, m: &GenMono) -> String {
        m.0.iter()
            .map(|&(i, e)| if e == 1 { self.0.gens[i].name.clone() } else { format!("{}^{}", self.0.gens[i].name, e) })
            .collect::<Vec<_>>()
            .join("*")
    }

    pub fn display(&self, a: &GradedElement) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut parts: Vec<String> = Vec::new();
        for (m, p) in &a.terms {
            let ps = self.0.base.display(p);
            if m.is_one() {
                parts.push(ps);
                continue;
            }
            let ms = self.display_mono(m);
            let s = match p.as_constant() {
                Some(c) if c.is_one() => ms,
                Some(c) if (-c.clone()).is_one() => format!("-{ms}"),
                Some(c) => format!("{}*{}", fmt_rational(&c), ms),
                None if p.len() == 1 => format!("{ps}*{ms}"),
                None => format!("({ps})*{ms}"),
            };
            parts.push(s);
        }
        let mut out = parts[0].clone();
        for s in &parts[1..] {
            if let Some(rest) = s.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(s);
            }
        }
        out
    }
}

type Value = (Option<i32>, BTreeMap<GenMono, Polynomial>);

struct ElementContext<'a>(&'a DgAlgebra);

impl ElementContext<'_> {
    fn wrap(&self, e: GradedElement) -> Value {
        ((!e.is_zero()).then_some(e.degree), e.terms)
    }

    fn unwrap(&self, v: &Value) -> GradedElement {
        GradedElement { degree: v.0.unwrap_or(0), terms: v.1.clone() }
    }

    fn combine(&self, a: &Value, b: &Value, negate: bool) -> Result<Value> {
        if let (Some(x), Some(y)) = (a.0, b.0) {
            if x != y {
                return Err(Error::InvalidAlgebra(format!("inhomogeneous expression mixes degrees {x} and {y}")));
            }
        }
        let bb = self.unwrap(b);
        let bb = if negate { self.0.neg(&bb) } else { bb };
        let mut aa = self.unwrap(a);
        if aa.is_zero() {
            aa.degree = bb.degree;
        }
        Ok(self.wrap(self.0.add(&aa, &bb)))
    }
}

impl ExprAlgebra for ElementContext<'_> {
    type Value = Value;
    fn number(&self, r: &Rational) -> Value {
        self.wrap(self.0.scalar(&self.0.base().constant(r.clone())))
    }
    fn symbol(&self, name: &str) -> Option<Value> {
        if let Some(p) = self.0.base().var(name) {
            return Some(self.wrap(self.0.scalar(&p)));
        }
        self.0.gen_index(name).map(|i| self.wrap(self.0.gen(i)))
    }
    fn add(&self, a: &Value, b: &Value) -> Result<Value> {
        self.combine(a, b, false)
    }
    fn sub(&self, a: &Value, b: &Value) -> Result<Value> {
        self.combine(a, b, true)
    }
    fn mul(&self, a: &Value, b: &Value) -> Result<Value> {
        Ok(self.wrap(self.0.mul(&self.unwrap(a), &self.unwrap(b))))
    }
    fn neg(&self, a: &Value) -> Value {
        self.wrap(self.0.neg(&self.unwrap(a)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgalg::fixtures::{algebra, koszul, twin_koszul};

    #[test]
    fn graded_bases() {
        let k = koszul();
        assert_eq!(k.graded_basis(-1).len(), 1);
        assert!(k.graded_basis(-2).is_empty());
        let a = algebra(&["x"], &[("e1", -1, "0"), ("e2", -1, "0"), ("f", -2, "0")]);
        let show = |k: i32| a.graded_basis(k).iter().map(|m| a.display_mono(m)).collect::<Vec<_>>();
        assert_eq!(show(-2), ["e1*e2", "f"]);
        assert_eq!(show(-3), ["e1*f", "e2*f"]);
    }

    #[test]
    fn twin_differential_matrices() {
        let t = twin_koszul();
        let d1 = t.differential_matrix(-1);
        assert_eq!(d1.len(), 2);
        assert!(d1.iter().all(|c| t.base().display(&c[&0]) == "x"));
        let e12 = t.parse_element("e1*e2").unwrap();
        assert_eq!(t.display(&t.delta(&e12)), "-x*e1 + x*e2");
    }

    #[test]
    fn validation_finds_broken_differential() {
        let ok = algebra(&["x"], &[("e", -1, "x"), ("f", -2, "e*e")]);
        assert!(ok.validate().valid);
        let bad = algebra(&["x"], &[("e", -1, "x"), ("f", -2, "x*e")]);
        let r = bad.validate();
        assert!(!r.valid);
        assert_eq!(r.failures[0].generator, "f");
    }

    #[test]
    fn koszul_signs() {
        let t = twin_koszul();
        let a = t.parse_element("e1*e2").unwrap();
        let b = t.parse_element("e2*e1").unwrap();
        assert_eq!(t.add(&a, &b), GradedElement::zero(-2));
        assert!(t.parse_element("e1*e1").unwrap().is_zero());
    }
}
