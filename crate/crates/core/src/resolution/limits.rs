//! Matching objects, skeleta and latching objects of a simplicial dg
//! algebra, with fiber dimensions at rational points.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::Serialize;

use super::simplicial::{disagreements, IdentityFailure, SimplicialDgAlgebra};
use crate::dgalg::{DgAlgebra, DgMorphism, GenMono, Generator, GradedElement};
use crate::error::{Error, Result};
use crate::exactalg::{linalg, BaseRing, Polynomial, Rational};

/// Element with coefficients evaluated at a point.
pub type NumElem = BTreeMap<GenMono, Rational>;

pub fn evaluate(e: &GradedElement, point: &[Rational]) -> NumElem {
    e.terms.iter().map(|(m, p)| (m.clone(), p.evaluate(point))).filter(|(_, c)| !c.is_zero()).collect()
}

pub fn num_mul(alg: &DgAlgebra, a: &NumElem, b: &NumElem) -> NumElem {
    let mut out = NumElem::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            if let Some((m, neg)) = alg.mul_mono(ma, mb) {
                let c = if neg { -(ca * cb) } else { ca * cb };
                let e = out.entry(m).or_insert_with(Rational::zero);
                *e += c;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Values of the base variables of the source of `f` at `point` on the
/// target.
pub fn pull_point(f: &DgMorphism, point: &[Rational]) -> Vec<Rational> {
    f.base_images.iter().map(|p| p.evaluate(point)).collect()
}

/// Row-echelon accumulator for incremental rank over ℚ.
#[derive(Default)]
pub struct Echelon {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<Rational>) -> bool {
        for (p, r) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, y) in v.iter_mut().zip(r) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        let Some(p) = v.iter().position(|c| !c.is_zero()) else { return false };
        let inv = Rational::one() / &v[p];
        for x in v.iter_mut() {
            *x *= &inv;
        }
        for (_, r) in self.rows.iter_mut() {
            if !r[p].is_zero() {
                let f = r[p].clone();
                for (x, y) in r.iter_mut().zip(&v) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        self.rows.push((p, v));
        true
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut v = v.to_vec();
        for (p, r) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, y) in v.iter_mut().zip(r) {
                    *x -= &f * y;
                }
            }
        }
        v.iter().all(Zero::is_zero)
    }
}

/// `ι*: A_n → A_{|sub|-1}` for the inclusion of `sub ⊆ [n]`.
pub fn iterated_face(s: &SimplicialDgAlgebra, n: usize, sub: &[usize]) -> Result<DgMorphism> {
    let mut cur = DgMorphism::identity(&s.levels[n]);
    let mut level = n;
    for v in (0..=n).rev() {
        if !sub.contains(&v) {
            cur = cur.then(&s.faces[level][v])?;
            level -= 1;
        }
    }
    Ok(cur)
}

/// The preimage of `point` on `A_n` under `ι*` for `sub ⊆ [n]`, if the
/// point lies on that face. Uses the degeneracy section of `ι*`.
pub fn face_preimage(s: &SimplicialDgAlgebra, n: usize, sub: &[usize], face: &DgMorphism, point: &[Rational]) -> Option<Vec<Rational>> {
    // ψ: [n] ↠ [j] with ψ ∘ ι = id, factored into codegeneracies.
    let mut psi: Vec<usize> = (0..=n).map(|v| sub.iter().filter(|&&w| w <= v).count().saturating_sub(1)).collect();
    let mut q = point.to_vec();
    let mut level = n;
    while let Some(t) = (0..level).find(|&t| psi[t] == psi[t + 1]) {
        q = pull_point(&s.degeneracies[level - 1][t], &q);
        psi.remove(t + 1);
        level -= 1;
    }
    (pull_point(face, &q) == point).then_some(q)
}

#[derive(Clone, Debug)]
pub struct Equation {
    pub left: usize,
    pub right: usize,
    pub common: Vec<usize>,
    pub restrict_left: DgMorphism,
    pub restrict_right: DgMorphism,
}

/// `sk^m_j`: compatible families indexed by the `j`-faces of `Δ^m`, with
/// the canonical map from `A_m`.
#[derive(Clone, Debug)]
pub struct FiniteLimit {
    pub simplex: usize,
    pub dim: usize,
    pub faces: Vec<Vec<usize>>,
    pub factors: Vec<DgAlgebra>,
    pub projections: Vec<DgMorphism>,
    pub equations: Vec<Equation>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberDim {
    pub degree: i32,
    /// Faces whose factor has a nonzero fiber at the point.
    pub present: Vec<String>,
    pub product: usize,
    pub limit: usize,
    /// Rank of the canonical map on fibers.
    pub image: usize,
}

fn subsets_of_size(n: usize, size: usize) -> Vec<Vec<usize>> {
    super::simplicial::nonempty_subsets(n).into_iter().filter(|s| s.len() == size).collect()
}

pub fn skeleton(s: &SimplicialDgAlgebra, m: usize, j: usize) -> Result<FiniteLimit> {
    if m > s.top_level() || j >= m {
        return Err(Error::Context(format!("skeleton needs j < m ≤ {}; got j = {j}, m = {m}", s.top_level())));
    }
    let faces = subsets_of_size(m, j + 1);
    let projections = faces.iter().map(|u| iterated_face(s, m, u)).collect::<Result<Vec<_>>>()?;
    let mut equations = Vec::new();
    for a in 0..faces.len() {
        for b in a + 1..faces.len() {
            let common: Vec<usize> = faces[a].iter().filter(|v| faces[b].contains(v)).copied().collect();
            if common.is_empty() {
                continue;
            }
            let pos = |u: &[usize]| -> Vec<usize> { common.iter().map(|v| u.iter().position(|w| w == v).unwrap()).collect() };
            equations.push(Equation {
                left: a,
                right: b,
                restrict_left: iterated_face(s, j, &pos(&faces[a]))?,
                restrict_right: iterated_face(s, j, &pos(&faces[b]))?,
                common,
            });
        }
    }
    Ok(FiniteLimit {
        simplex: m,
        dim: j,
        factors: vec![s.levels[j].clone(); faces.len()],
        faces,
        projections,
        equations,
    })
}

/// `M_n = sk^n_{n-1}`; `M_1 = A_0 × A_0`.
pub fn matching_object(s: &SimplicialDgAlgebra, n: usize) -> Result<FiniteLimit> {
    if n == 0 {
        return Err(Error::Context("matching objects start at level 1".into()));
    }
    skeleton(s, n, n - 1)
}

impl FiniteLimit {
    /// The canonical map lands in the limit: every equation holds on every
    /// generator of `A_m`.
    pub fn verify_cone(&self) -> Result<Vec<IdentityFailure>> {
        let mut out = Vec::new();
        for e in &self.equations {
            let l = self.projections[e.left].then(&e.restrict_left)?;
            let r = self.projections[e.right].then(&e.restrict_right)?;
            let name = format!(
                "{} and {} agree on {}",
                super::simplicial::subset_label(&self.faces[e.left]),
                super::simplicial::subset_label(&self.faces[e.right]),
                super::simplicial::subset_label(&e.common)
            );
            out.extend(disagreements(&name, self.simplex, &l, &r));
        }
        Ok(out)
    }

    /// Whether a tuple of factor elements satisfies every equation.
    pub fn contains(&self, tuple: &[GradedElement]) -> bool {
        self.equations.iter().all(|e| {
            let t = &e.restrict_left.target;
            t.sub(&e.restrict_left.apply(&tuple[e.left]), &e.restrict_right.apply(&tuple[e.right])).is_zero()
        })
    }

    pub fn canonical_image(&self, x: &GradedElement) -> Vec<GradedElement> {
        self.projections.iter().map(|p| p.apply(x)).collect()
    }

    /// Fiber data at `point` on the base of `A_m`.
    pub fn fiber(&self, s: &SimplicialDgAlgebra, point: &[Rational], degree: i32) -> Result<FiberDim> {
        let basis = source_basis(&self.projections[0].source, degree);
        FiberContext::new(self, s, point)?.fiber(degree, &basis, usize::MAX).map(|(d, _)| d)
    }
}

/// Monomials of a degree, fewest factors first.
pub fn source_basis(a: &DgAlgebra, degree: i32) -> Vec<GenMono> {
    let mut basis = a.graded_basis(degree);
    basis.sort_by_key(|m| m.0.iter().map(|(_, e)| *e as usize).sum::<usize>());
    basis
}

/// Points and bases of the factors present at one point.
pub(crate) struct FiberContext<'a> {
    lim: &'a FiniteLimit,
    points: Vec<Option<Vec<Rational>>>,
    eq_points: Vec<Option<Vec<Rational>>>,
}

impl<'a> FiberContext<'a> {
    pub(crate) fn new(lim: &'a FiniteLimit, s: &SimplicialDgAlgebra, point: &[Rational]) -> Result<Self> {
        let points: Vec<Option<Vec<Rational>>> = lim
            .faces
            .iter()
            .zip(&lim.projections)
            .map(|(u, p)| face_preimage(s, lim.simplex, u, p, point))
            .collect();
        let eq_points = lim
            .equations
            .iter()
            .map(|e| match (&points[e.left], &points[e.right]) {
                (Some(q), Some(_)) => {
                    let pos: Vec<usize> = e.common.iter().map(|v| lim.faces[e.left].iter().position(|w| w == v).unwrap()).collect();
                    face_preimage(s, lim.dim, &pos, &e.restrict_left, q)
                }
                _ => None,
            })
            .collect();
        Ok(FiberContext { lim, points, eq_points })
    }

    /// Fiber dimensions in one degree. Source monomials are tried in order
    /// of factor count, stopping once the image fills the limit or after
    /// `cap` monomials; the flag reports an early stop by the cap.
    pub(crate) fn fiber(&self, degree: i32, source_basis: &[GenMono], cap: usize) -> Result<(FiberDim, bool)> {
        let lim = self.lim;
        let mut offsets = Vec::new();
        let mut bases = Vec::new();
        let mut total = 0;
        for (u, q) in self.points.iter().enumerate() {
            offsets.push(total);
            let b = if q.is_some() { lim.factors[u].graded_basis(degree) } else { vec![] };
            total += b.len();
            bases.push(b);
        }
        let index: Vec<BTreeMap<GenMono, usize>> =
            bases.iter().map(|b| b.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect()).collect();

        // Compatibility rows, one block per equation present at the point.
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for (e, r) in lim.equations.iter().zip(&self.eq_points) {
            let Some(r) = r else { continue };
            let tgt = &e.restrict_left.target;
            let tb = tgt.graded_basis(degree);
            let tix: BTreeMap<&GenMono, usize> = tb.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let mut block = vec![vec![Rational::zero(); total]; tb.len()];
            for (side, f, sign) in [(e.left, &e.restrict_left, 1), (e.right, &e.restrict_right, -1)] {
                for (c, m) in bases[side].iter().enumerate() {
                    let img = evaluate(&f.apply(&lim.factors[side].monomial(m, &lim.factors[side].base().one())), r);
                    for (tm, v) in img {
                        let v = if sign < 0 { -v } else { v };
                        block[tix[&tm]][offsets[side] + c] += v;
                    }
                }
            }
            rows.extend(block);
        }
        let limit_dim = total - if rows.is_empty() { 0 } else { linalg::rank(&rows) };

        // Canonical map, monomial by monomial.
        let src = &lim.projections[0].source;
        let present: Vec<usize> = (0..self.points.len()).filter(|&u| self.points[u].is_some()).collect();
        let mut gen_imgs: Vec<Vec<NumElem>> = Vec::new();
        for &u in &present {
            let q = self.points[u].as_ref().unwrap();
            gen_imgs.push((0..src.ngens()).map(|g| evaluate(&lim.projections[u].apply(&src.gen(g)), q)).collect());
        }
        let mut ech = Echelon::default();
        let mut capped = false;
        for (seen, m) in source_basis.iter().enumerate() {
            if ech.rank() >= limit_dim {
                break;
            }
            if seen >= cap {
                capped = true;
                break;
            }
            let mut v = vec![Rational::zero(); total];
            for (pi, &u) in present.iter().enumerate() {
                let alg = &lim.factors[u];
                let mut acc: NumElem = NumElem::from([(GenMono::one(), Rational::one())]);
                for &(g, e) in &m.0 {
                    for _ in 0..e {
                        acc = num_mul(alg, &acc, &gen_imgs[pi][g]);
                    }
                }
                for (tm, c) in acc {
                    let i = *index[u].get(&tm).ok_or_else(|| Error::Invariant("face image leaves its degree".into()))?;
                    v[offsets[u] + i] = c;
                }
            }
            ech.insert(v);
        }
        let dim = FiberDim {
            degree,
            present: present.iter().map(|&u| super::simplicial::subset_label(&lim.faces[u])).collect(),
            product: total,
            limit: limit_dim,
            image: ech.rank(),
        };
        Ok((dim, capped))
    }
}

/// `L_n`: the sub-dg-algebra of `A_n` on degenerate variables and
/// generators, with its inclusion.
#[derive(Clone, Debug)]
pub struct LatchingObject {
    pub level: usize,
    pub algebra: DgAlgebra,
    pub inclusion: DgMorphism,
}

impl LatchingObject {
    pub fn fiber_dims(&self, depth: i32) -> BTreeMap<i32, usize> {
        (-depth..=0).map(|k| (k, self.algebra.graded_basis(k).len())).collect()
    }
}

/// Variables and generators of `A_n` hit as single symbols by some
/// degeneracy.
pub fn degenerate_symbols(s: &SimplicialDgAlgebra, n: usize) -> Result<(BTreeSet<usize>, BTreeSet<usize>)> {
    let (mut vars, mut gens) = (BTreeSet::new(), BTreeSet::new());
    if n == 0 {
        return Ok((vars, gens));
    }
    let a = &s.levels[n];
    for d in &s.degeneracies[n - 1] {
        for p in &d.base_images {
            let used = p.variables_used();
            if used.len() != 1 || *p != Polynomial::var(a.base().nvars(), used[0]) {
                return Err(Error::Unsupported("degeneracies must send variables to variables".into()));
            }
            vars.insert(used[0]);
        }
        for e in &d.gen_images {
            match e.terms.iter().next() {
                Some((m, c)) if e.terms.len() == 1 && m.0.len() == 1 && m.0[0].1 == 1 && c.is_one_poly() => {
                    gens.insert(m.0[0].0);
                }
                _ => return Err(Error::Unsupported("degeneracies must send generators to generators".into())),
            }
        }
    }
    Ok((vars, gens))
}

trait IsOne {
    fn is_one_poly(&self) -> bool;
}

impl IsOne for Polynomial {
    fn is_one_poly(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }
}

pub fn latching_object(s: &SimplicialDgAlgebra, n: usize) -> Result<LatchingObject> {
    if n > s.top_level() {
        return Err(Error::Context(format!("level {n} exceeds the top level {}", s.top_level())));
    }
    let a = &s.levels[n];
    if n == 0 {
        return Ok(LatchingObject { level: 0, algebra: a.clone(), inclusion: DgMorphism::identity(a) });
    }
    let (vars, gens) = degenerate_symbols(s, n)?;
    let var_list: Vec<usize> = vars.iter().copied().collect();
    let gen_list: Vec<usize> = gens.iter().copied().collect();
    let nl = var_list.len();
    let mut vmap = vec![usize::MAX; a.base().nvars()];
    for (i, &v) in var_list.iter().enumerate() {
        vmap[v] = i;
    }
    let mut gmap = vec![usize::MAX; a.ngens()];
    for (i, &g) in gen_list.iter().enumerate() {
        gmap[g] = i;
    }
    let narrow = |p: &Polynomial| -> Result<Polynomial> {
        if p.variables_used().iter().any(|&v| vmap[v] == usize::MAX) {
            return Err(Error::Unsupported("a degenerate symbol involves a nondegenerate variable".into()));
        }
        Ok(p.remap(&vmap.iter().map(|&v| if v == usize::MAX { 0 } else { v }).collect::<Vec<_>>(), nl))
    };
    let mut rels = Vec::new();
    for r in a.base().relation_basis() {
        let used = r.variables_used();
        if used.iter().all(|&v| vmap[v] != usize::MAX) {
            rels.push(narrow(r)?);
        } else if used.iter().any(|&v| vmap[v] != usize::MAX) {
            return Err(Error::Unsupported("relations mix degenerate and nondegenerate variables".into()));
        }
    }
    let base = BaseRing::new(var_list.iter().map(|&v| a.base().names()[v].clone()).collect(), rels)?;
    let mut generators = Vec::new();
    for &g in &gen_list {
        let gen = &a.generators()[g];
        let mut d = GradedElement::zero(gen.degree + 1);
        for (m, p) in &gen.differential.terms {
            if m.0.iter().any(|(i, _)| gmap[*i] == usize::MAX) {
                return Err(Error::Unsupported(format!("δ{} involves a nondegenerate generator", gen.name)));
            }
            d.terms.insert(GenMono(m.0.iter().map(|&(i, e)| (gmap[i], e)).collect()), narrow(p)?);
        }
        generators.push(Generator { name: gen.name.clone(), degree: gen.degree, differential: d });
    }
    let algebra = DgAlgebra::new(base, generators)?;
    let na = a.base().nvars();
    let inclusion = DgMorphism::new(
        algebra.clone(),
        a.clone(),
        var_list.iter().map(|&v| Polynomial::var(na, v)).collect(),
        gen_list.iter().map(|&g| a.gen(g)).collect(),
    )?;
    Ok(LatchingObject { level: n, algebra, inclusion })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgalg::fixtures;
    use crate::exactalg::rat;
    use crate::resolution::resolve;

    #[test]
    fn matching_of_constant_objects() {
        let x = fixtures::polynomial(&["x"]);
        let s = SimplicialDgAlgebra::constant(&x, 3);
        let m1 = matching_object(&s, 1).unwrap();
        assert_eq!(m1.factors.len(), 2);
        assert!(m1.equations.is_empty());
        for n in 2..=3 {
            let m = matching_object(&s, n).unwrap();
            assert!(m.verify_cone().unwrap().is_empty());
            let f = m.fiber(&s, &[rat(2)], 0).unwrap();
            assert_eq!((f.product, f.limit, f.image), (n + 1, 1, 1));
        }
        let sk = skeleton(&s, 2, 1).unwrap();
        assert_eq!(sk.fiber(&s, &[rat(0)], 0).unwrap().limit, 1);
        let sk0 = skeleton(&s, 2, 0).unwrap();
        assert_eq!((sk0.factors.len(), sk0.equations.len()), (3, 0));
    }

    #[test]
    fn koszul_level_one_fibers() {
        let r = resolve(&fixtures::koszul(), 1).unwrap();
        let s = &r.simplicial;
        let m = matching_object(s, 1).unwrap();
        // (x, F1_0, F1_1) = (0, 0, 0) lies on both faces.
        let f = m.fiber(s, &[rat(0), rat(0), rat(0)], -1).unwrap();
        assert_eq!((f.present.len(), f.product, f.limit, f.image), (2, 2, 2, 2));
        let f = m.fiber(s, &[rat(1), rat(0), rat(1)], -1).unwrap();
        assert_eq!(f.present, ["{1}"]);
        assert_eq!(f.image, 1);
    }

    #[test]
    fn latching() {
        let k = fixtures::koszul();
        let r = resolve(&k, 2).unwrap();
        let l1 = latching_object(&r.simplicial, 1).unwrap();
        assert_eq!(l1.algebra, k);
        let l2 = latching_object(&r.simplicial, 2).unwrap();
        assert!(l2.algebra.ngens() < r.level(2).ngens());
        let c = SimplicialDgAlgebra::constant(&k, 2);
        assert_eq!(latching_object(&c, 2).unwrap().algebra, k);
    }

    #[test]
    fn echelon_rank() {
        let mut e = Echelon::default();
        assert!(e.insert(vec![rat(1), rat(2)]));
        assert!(!e.insert(vec![rat(2), rat(4)]));
        assert!(e.insert(vec![rat(0), rat(1)]));
        assert!(e.contains(&[rat(3), rat(5)]));
    }
}
