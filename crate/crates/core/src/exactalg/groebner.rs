//! Buchberger's algorithm for submodules of free modules over ℚ[x̄].
//!
//! Ideals are the rank-one case. Terms are ordered position-over-term:
//! position 0 dominates every other position, and within a position the
//! monomial order decides.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};

use num_traits::{One, Zero};

use super::poly::{Monomial, MonomialOrder, Polynomial, Rational};

/// A vector of the free module, stored as terms sorted ascending, so the
/// leading term is the last entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModVec {
    terms: Vec<(usize, Monomial, Rational)>,
}

fn cmp_term(order: &MonomialOrder, a: (usize, &Monomial), b: (usize, &Monomial)) -> Ordering {
    b.0.cmp(&a.0).then_with(|| order.cmp(a.1, b.1))
}

impl ModVec {
    pub fn zero() -> Self {
        ModVec { terms: Vec::new() }
    }

    pub fn from_column(col: &BTreeMap<usize, Polynomial>, order: &MonomialOrder) -> Self {
        let mut terms: Vec<(usize, Monomial, Rational)> = col
            .iter()
            .flat_map(|(&p, poly)| poly.terms().map(move |(m, c)| (p, m.clone(), c.clone())))
            .collect();
        terms.sort_by(|a, b| cmp_term(order, (a.0, &a.1), (b.0, &b.1)));
        ModVec { terms }
    }

    pub fn from_poly(p: &Polynomial, order: &MonomialOrder) -> Self {
        let mut col = BTreeMap::new();
        col.insert(0, p.clone());
        Self::from_column(&col, order)
    }

    pub fn to_column(&self, nvars: usize) -> BTreeMap<usize, Polynomial> {
        let mut col: BTreeMap<usize, Polynomial> = BTreeMap::new();
        for (p, m, c) in &self.terms {
            col.entry(*p)
                .or_insert_with(|| Polynomial::zero(nvars))
                .add_term(m.clone(), c.clone());
        }
        col.retain(|_, p| !p.is_zero());
        col
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&(usize, Monomial, Rational)> {
        self.terms.last()
    }

    pub fn terms(&self) -> &[(usize, Monomial, Rational)] {
        &self.terms
    }

    /// Smallest position carrying a nonzero term.
    pub fn min_position(&self) -> Option<usize> {
        self.terms.iter().map(|t| t.0).min()
    }

    fn monic(mut self) -> Self {
        if let Some((_, _, c)) = self.terms.last() {
            let inv = Rational::one() / c.clone();
            for t in &mut self.terms {
                t.2 *= &inv;
            }
        }
        self
    }

    /// `self - c * m * other`
    fn sub_scaled(&self, c: &Rational, m: &Monomial, other: &ModVec, order: &MonomialOrder) -> ModVec {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut i = 0;
        let mut j = 0;
        let shifted: Vec<(usize, Monomial, Rational)> = other
            .terms
            .iter()
            .map(|(p, mm, cc)| (*p, mm.mul(m), -(cc * c)))
            .collect();
        while i < self.terms.len() && j < shifted.len() {
            let a = &self.terms[i];
            let b = &shifted[j];
            match cmp_term(order, (a.0, &a.1), (b.0, &b.1)) {
                Ordering::Less => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let s = &a.2 + &b.2;
                    if !s.is_zero() {
                        out.push((a.0, a.1.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend(shifted.into_iter().skip(j));
        ModVec { terms: out }
    }
}

fn find_reducer<'a>(basis: &'a [ModVec], pos: usize, m: &Monomial) -> Option<&'a ModVec> {
    basis.iter().find(|g| {
        let (gp, gm, _) = g.lead().unwrap();
        *gp == pos && gm.divides(m)
    })
}

/// Full reduction of `f` modulo `basis`; the remainder has no term divisible
/// by a leading term of the basis.
pub fn reduce(f: &ModVec, basis: &[ModVec], order: &MonomialOrder) -> ModVec {
    let mut p = f.clone();
    let mut rem: Vec<(usize, Monomial, Rational)> = Vec::new();
    while let Some((pos, m, c)) = p.lead().cloned() {
        if let Some(g) = find_reducer(basis, pos, &m) {
            let (_, gm, gc) = g.lead().unwrap();
            let q = gm.quotient_of(&m);
            p = p.sub_scaled(&(c / gc), &q, g, order);
        } else {
            rem.push(p.terms.pop().unwrap());
        }
    }
    rem.reverse();
    ModVec { terms: rem }
}

fn s_vector(f: &ModVec, g: &ModVec, order: &MonomialOrder) -> ModVec {
    let (_, fm, _) = f.lead().unwrap();
    let (_, gm, _) = g.lead().unwrap();
    let l = fm.lcm(gm);
    let a = ModVec { terms: f.terms.iter().map(|(p, m, c)| (*p, m.mul(&fm.quotient_of(&l)), c.clone())).collect() };
    a.sub_scaled(&Rational::one(), &gm.quotient_of(&l), g, order)
}

/// Reduced Gröbner basis of the submodule generated by `gens`, every element
/// monic, sorted by leading term ascending.
pub fn groebner(gens: &[ModVec], order: &MonomialOrder) -> Vec<ModVec> {
    let scalar = gens.iter().all(|g| g.terms.iter().all(|t| t.0 == 0));
    let mut basis: Vec<ModVec> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();

    let add = |v: ModVec, basis: &mut Vec<ModVec>, pairs: &mut Vec<(usize, usize)>, pending: &mut HashSet<(usize, usize)>| {
        let k = basis.len();
        let pos = v.lead().unwrap().0;
        basis.push(v);
        for i in 0..k {
            if basis[i].lead().unwrap().0 == pos {
                pairs.push((i, k));
                pending.insert((i, k));
            }
        }
    };

    for g in gens {
        let r = reduce(g, &basis, order);
        if !r.is_zero() {
            add(r.monic(), &mut basis, &mut pairs, &mut pending);
        }
    }

    while !pairs.is_empty() {
        // normal selection strategy: smallest lcm first
        let (idx, _) = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                let la = pair_lcm(&basis, **a);
                let lb = pair_lcm(&basis, **b);
                cmp_term(order, (la.0, &la.1), (lb.0, &lb.1)).then_with(|| a.cmp(b))
            })
            .unwrap();
        let (i, j) = pairs.swap_remove(idx);
        pending.remove(&(i, j));

        let (_, mi, _) = basis[i].lead().unwrap();
        let (_, mj, _) = basis[j].lead().unwrap();
        if scalar && mi.coprime(mj) {
            continue;
        }
        let (pos, l) = pair_lcm(&basis, (i, j));
        let chain = (0..basis.len()).any(|k| {
            if k == i || k == j {
                return false;
            }
            let (kp, km, _) = basis[k].lead().unwrap();
            *kp == pos
                && km.divides(&l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = s_vector(&basis[i], &basis[j], order);
        let r = reduce(&s, &basis, order);
        if !r.is_zero() {
            add(r.monic(), &mut basis, &mut pairs, &mut pending);
        }
    }

    // minimize, then interreduce
    let mut keep: Vec<ModVec> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let (gp, gm, _) = g.lead().unwrap();
        let redundant = basis.iter().enumerate().any(|(h, o)| {
            let (op, om, _) = o.lead().unwrap();
            h != k && op == gp && om.divides(gm) && (om != gm || h < k)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for k in 0..keep.len() {
        let lead = keep[k].terms.last().unwrap().clone();
        let mut tail = keep[k].clone();
        tail.terms.pop();
        let others: Vec<ModVec> = keep.iter().enumerate().filter(|(h, _)| *h != k).map(|(_, v)| v.clone()).collect();
        let mut r = reduce(&tail, &others, order);
        r.terms.push(lead);
        out.push(r);
    }
    out.sort_by(|a, b| {
        let (ap, am, _) = a.lead().unwrap();
        let (bp, bm, _) = b.lead().unwrap();
        cmp_term(order, (*ap, am), (*bp, bm))
    });
    out
}

fn pair_lcm(basis: &[ModVec], (i, j): (usize, usize)) -> (usize, Monomial) {
    let (p, mi, _) = basis[i].lead().unwrap();
    let (_, mj, _) = basis[j].lead().unwrap();
    (*p, mi.lcm(mj))
}

/// Reduced Gröbner basis of a polynomial ideal.
pub fn groebner_polys(gens: &[Polynomial], order: &MonomialOrder) -> Vec<Polynomial> {
    let nvars = order.nvars();
    let vs: Vec<ModVec> = gens.iter().filter(|g| !g.is_zero()).map(|g| ModVec::from_poly(g, order)).collect();
    groebner(&vs, order)
        .into_iter()
        .map(|v| v.to_column(nvars).remove(&0).unwrap_or_else(|| Polynomial::zero(nvars)))
        .collect()
}

pub fn reduce_poly(f: &Polynomial, basis: &[ModVec], order: &MonomialOrder) -> Polynomial {
    let r = reduce(&ModVec::from_poly(f, order), basis, order);
    r.to_column(f.nvars()).remove(&0).unwrap_or_else(|| Polynomial::zero(f.nvars()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Polynomial {
        Polynomial::var(2, 0)
    }
    fn y() -> Polynomial {
        Polynomial::var(2, 1)
    }

    #[test]
    fn closure_contains_x4() {
        let o = MonomialOrder::degrevlex(2);
        let gb = groebner_polys(&[x().mul(&x()).sub(&y()), y().mul(&y())], &o);
        let vs: Vec<ModVec> = gb.iter().map(|g| ModVec::from_poly(g, &o)).collect();
        assert!(reduce_poly(&x().pow(4), &vs, &o).is_zero());
        assert!(!reduce_poly(&x(), &vs, &o).is_zero());
    }

    #[test]
    fn unit_ideal_collapses() {
        let o = MonomialOrder::degrevlex(2);
        let one = Polynomial::one(2);
        let gb = groebner_polys(&[x(), one.sub(&x())], &o);
        assert_eq!(gb, vec![one]);
    }

    #[test]
    fn idempotent_on_reduced_basis() {
        let o = MonomialOrder::degrevlex(2);
        let gens = [x().pow(3).sub(&y()), x().mul(&y()).sub(&Polynomial::one(2))];
        let gb = groebner_polys(&gens, &o);
        assert_eq!(groebner_polys(&gb, &o), gb);
    }
}
