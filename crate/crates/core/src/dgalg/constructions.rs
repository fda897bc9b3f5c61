//! Pushouts, tensor products, localizations and relative Kähler differentials.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;
use serde::Serialize;

use super::algebra::{DgAlgebra, GenMono, GeneratorSpec, GradedElement};
use super::morphism::DgMorphism;
use crate::error::{Error, Result};
use crate::exactalg::module::{self, Column, Lifter};
use crate::exactalg::{BaseRing, Polynomial};

/// Hands out names not used so far, suffixing `_2`, `_3`, … on collision.
#[derive(Clone, Debug, Default)]
pub struct NameAllocator {
    used: BTreeSet<String>,
}

impl NameAllocator {
    pub fn new<'a>(taken: impl IntoIterator<Item = &'a String>) -> Self {
        NameAllocator { used: taken.into_iter().cloned().collect() }
    }

    pub fn fresh(&mut self, name: &str) -> String {
        let mut candidate = name.to_string();
        let mut k = 2;
        while self.used.contains(&candidate) {
            candidate = format!("{name}_{k}");
            k += 1;
        }
        self.used.insert(candidate.clone());
        candidate
    }

    /// First unused name among `stem`, `stem1`, `stem2`, …
    pub fn fresh_numbered(&mut self, stem: &str) -> String {
        let mut candidate = stem.to_string();
        let mut k = 1;
        while self.used.contains(&candidate) {
            candidate = format!("{stem}{k}");
            k += 1;
        }
        self.used.insert(candidate.clone());
        candidate
    }
}

/// Target variable index for each source variable, when every base variable
/// maps to a distinct variable.
pub fn variable_injection(m: &DgMorphism) -> Option<Vec<usize>> {
    let mut out = Vec::new();
    for p in &m.base_images {
        let (mono, c) = match p.terms().collect::<Vec<_>>().as_slice() {
            [(mono, c)] => (*mono, *c),
            _ => return None,
        };
        if !c.is_one() || mono.degree() != 1 {
            return None;
        }
        let i = mono.0.iter().position(|&e| e == 1)?;
        if out.contains(&i) {
            return None;
        }
        out.push(i);
    }
    Some(out)
}

/// Target generator index for each source generator, when every generator
/// maps to a distinct generator.
pub fn generator_injection(m: &DgMorphism) -> Option<Vec<usize>> {
    let mut out = Vec::new();
    for g in &m.gen_images {
        let (mono, p) = match g.terms.iter().collect::<Vec<_>>().as_slice() {
            [(mono, p)] => (*mono, *p),
            _ => return None,
        };
        if mono.0.len() != 1 || mono.0[0].1 != 1 || p.as_constant().map_or(true, |c| !c.is_one()) {
            return None;
        }
        let j = mono.0[0].0;
        if out.contains(&j) {
            return None;
        }
        out.push(j);
    }
    Some(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug)]
pub struct Pushout {
    pub algebra: DgAlgebra,
    pub to_left: DgMorphism,
    pub to_right: DgMorphism,
    /// Origin of each base variable and generator of the pushout.
    pub var_origin: Vec<(Side, usize)>,
    pub gen_origin: Vec<(Side, usize)>,
}

impl Pushout {
    /// The map out of the pushout induced by a cocone `(beta, gamma)`.
    pub fn induced(&self, beta: &DgMorphism, gamma: &DgMorphism) -> Result<DgMorphism> {
        if beta.target != gamma.target {
            return Err(Error::InvalidMorphism("cocone legs have different targets".into()));
        }
        let pick = |s: Side| if s == Side::Left { beta } else { gamma };
        let base_images = self.var_origin.iter().map(|&(s, i)| pick(s).base_images[i].clone()).collect();
        let gen_images = self.gen_origin.iter().map(|&(s, i)| pick(s).gen_images[i].clone()).collect();
        DgMorphism::new(self.algebra.clone(), beta.target.clone(), base_images, gen_images)
    }
}

/// `B ⊗_A C` for `phi: A → B`, `psi: A → C`. One side must send the
/// generators of `A` to distinct generators; base variables are eliminated
/// when a side sends them to distinct variables and identified by relations
/// otherwise. Elimination happens on the `C` side when possible, so `B`
/// keeps its names.
pub fn pushout(phi: &DgMorphism, psi: &DgMorphism) -> Result<Pushout> {
    if phi.source != psi.source {
        return Err(Error::InvalidMorphism("pushout legs have different sources".into()));
    }
    let a = &phi.source;
    let (b, c) = (&phi.target, &psi.target);
    let gen_side = if a.ngens() == 0 {
        None
    } else if let Some(inj) = generator_injection(psi) {
        Some((Side::Right, inj))
    } else if let Some(inj) = generator_injection(phi) {
        Some((Side::Left, inj))
    } else {
        return Err(Error::Unsupported("pushout needs one leg sending generators to distinct generators".into()));
    };
    let var_side = if let Some(inj) = variable_injection(psi) {
        Some((Side::Right, inj))
    } else {
        variable_injection(phi).map(|inj| (Side::Left, inj))
    };

    let sides = [(Side::Left, b, phi), (Side::Right, c, psi)];
    let mut names = NameAllocator::default();
    let mut var_names = Vec::new();
    let mut var_origin = Vec::new();
    // For each side, P-index of each kept variable.
    let mut var_index: [BTreeMap<usize, usize>; 2] = [BTreeMap::new(), BTreeMap::new()];
    for (k, (side, alg, _)) in sides.iter().enumerate() {
        let eliminated: BTreeSet<usize> = match &var_side {
            Some((s, inj)) if s == side => inj.iter().copied().collect(),
            _ => BTreeSet::new(),
        };
        for (i, n) in alg.base().names().iter().enumerate() {
            if !eliminated.contains(&i) {
                var_index[k].insert(i, var_names.len());
                var_names.push(names.fresh(n));
                var_origin.push((*side, i));
            }
        }
    }
    let nv = var_names.len();
    // Base maps into P's polynomial ring. The kept side is a renaming; the
    // eliminated side goes through A.
    let mut base_maps: [Vec<Polynomial>; 2] = [Vec::new(), Vec::new()];
    for k in 0..2 {
        let alg = sides[k].1;
        base_maps[k] = (0..alg.base().nvars())
            .map(|i| var_index[k].get(&i).map(|&j| Polynomial::var(nv, j)).unwrap_or_else(|| Polynomial::zero(nv)))
            .collect();
    }
    let mut identify = Vec::new();
    match &var_side {
        Some((s, inj)) => {
            let (k, other) = if *s == Side::Left { (0, 1) } else { (1, 0) };
            let other_leg = sides[other].2;
            for (ai, &ti) in inj.iter().enumerate() {
                base_maps[k][ti] = other_leg.base_images[ai].substitute(&base_maps[other], nv);
            }
        }
        None => {
            for ai in 0..a.base().nvars() {
                let l = phi.base_images[ai].substitute(&base_maps[0], nv);
                let r = psi.base_images[ai].substitute(&base_maps[1], nv);
                identify.push(l.sub(&r));
            }
        }
    }
    let mut rels = identify;
    for k in 0..2 {
        for r in sides[k].1.base().relations() {
            rels.push(r.substitute(&base_maps[k], nv));
        }
    }

    let mut specs = Vec::new();
    let mut gen_origin = Vec::new();
    let mut gen_index: [BTreeMap<usize, usize>; 2] = [BTreeMap::new(), BTreeMap::new()];
    for (k, (side, alg, _)) in sides.iter().enumerate() {
        let eliminated: BTreeSet<usize> = match &gen_side {
            Some((s, inj)) if s == side => inj.iter().copied().collect(),
            _ => BTreeSet::new(),
        };
        for (i, g) in alg.generators().iter().enumerate() {
            if !eliminated.contains(&i) {
                gen_index[k].insert(i, specs.len());
                specs.push(GeneratorSpec { name: String::new(), degree: g.degree });
                gen_origin.push((*side, i));
            }
        }
    }
    // generator names after all variable names are reserved
    for (spec, &(side, i)) in specs.iter_mut().zip(&gen_origin) {
        let alg = if side == Side::Left { b } else { c };
        spec.name = names.fresh(&alg.generators()[i].name);
    }
    let base = BaseRing::new(var_names, rels)?;

    let maps_into = |target: &DgAlgebra| -> [DgMorphism; 2] {
        let mut out: Vec<DgMorphism> = Vec::new();
        for k in 0..2 {
            let alg = sides[k].1;
            let gen_images = (0..alg.ngens())
                .map(|i| gen_index[k].get(&i).map(|&j| target.gen(j)).unwrap_or_else(|| GradedElement::zero(alg.degree_of(i))))
                .collect();
            out.push(DgMorphism {
                source: alg.clone(),
                target: target.clone(),
                base_images: base_maps[k].iter().map(|p| target.base().reduce(p)).collect(),
                gen_images,
            });
        }
        if let Some((s, inj)) = &gen_side {
            let (k, other) = if *s == Side::Left { (0, 1) } else { (1, 0) };
            let other_leg = sides[other].2;
            for (ai, &ti) in inj.iter().enumerate() {
                out[k].gen_images[ti] = out[other].apply(&other_leg.gen_images[ai]);
            }
        }
        let r = out.pop().unwrap();
        let l = out.pop().unwrap();
        [l, r]
    };

    let algebra = DgAlgebra::build(base, specs, |skel, j| {
        let maps = maps_into(skel);
        let (side, i) = gen_origin[j];
        let k = if side == Side::Left { 0 } else { 1 };
        Ok(maps[k].apply(&sides[k].1.generators()[i].differential))
    })?;
    let [to_left, to_right] = maps_into(&algebra);
    to_left.check()?;
    to_right.check()?;
    Ok(Pushout { algebra, to_left, to_right, var_origin, gen_origin })
}

/// `A ⊗ B` over ℚ; clashing names in `B` get suffixes.
pub fn tensor(a: &DgAlgebra, b: &DgAlgebra) -> Result<Pushout> {
    let g = DgAlgebra::ground();
    let ia = DgMorphism::new(g.clone(), a.clone(), vec![], vec![])?;
    let ib = DgMorphism::new(g, b.clone(), vec![], vec![])?;
    pushout(&ia, &ib)
}

impl DgAlgebra {
    /// Same generators over a larger base ring; `var_map[i]` is the new
    /// index of old variable `i`.
    pub fn rebase(&self, base: BaseRing, var_map: &[usize]) -> Result<DgAlgebra> {
        let n = base.nvars();
        let gens = self
            .generators()
            .iter()
            .map(|g| {
                let mut d = GradedElement::zero(g.differential.degree);
                for (m, p) in &g.differential.terms {
                    d.terms.insert(m.clone(), p.remap(var_map, n));
                }
                super::algebra::Generator { name: g.name.clone(), degree: g.degree, differential: d }
            })
            .collect();
        DgAlgebra::new(base, gens)
    }
}

/// `A[1/f]` with a fresh inverse variable and the canonical map.
pub fn localize(a: &DgAlgebra, f: &Polynomial) -> Result<(DgAlgebra, DgMorphism)> {
    let base = a.base();
    let f = base.reduce(f);
    if f.is_zero() {
        return Err(Error::InvalidAlgebra("cannot invert an element that is zero in the base ring".into()));
    }
    let n = base.nvars();
    let t = NameAllocator::new(&a.all_names()).fresh_numbered("t");
    let map: Vec<usize> = (0..n).collect();
    let fe = f.remap(&map, n + 1);
    let rel = fe.mul(&Polynomial::var(n + 1, n)).sub(&Polynomial::one(n + 1));
    let ext = base.extend(&[t], vec![rel])?;
    let la = a.rebase(ext, &map)?;
    let m = DgMorphism::new(
        a.clone(),
        la.clone(),
        (0..n).map(|i| Polynomial::var(n + 1, i)).collect(),
        (0..a.ngens()).map(|i| la.gen(i)).collect(),
    )?;
    Ok((la, m))
}

// ---- relative Kähler differentials ----

/// Element of Ω_B: coefficients of `μ · d(s)`, where `s < nvars` is a base
/// variable and `s ≥ nvars` the generator `s - nvars`.
type OmegaElement = BTreeMap<(GenMono, usize), Polynomial>;

struct Omega<'a> {
    b: &'a DgAlgebra,
    n: usize,
}

impl Omega<'_> {
    fn symbol_degree(&self, s: usize) -> i32 {
        if s < self.n {
            0
        } else {
            self.b.degree_of(s - self.n)
        }
    }

    fn symbol_name(&self, s: usize) -> String {
        if s < self.n {
            format!("d({})", self.b.base().names()[s])
        } else {
            format!("d({})", self.b.generators()[s - self.n].name)
        }
    }

    fn add_into(&self, acc: &mut OmegaElement, key: (GenMono, usize), p: Polynomial) {
        let base = self.b.base();
        let e = acc.entry(key.clone()).or_insert_with(|| base.zero());
        *e = base.reduce(&e.add(&p));
        if e.is_zero() {
            acc.remove(&key);
        }
    }

    /// Universal derivation of an element of B.
    fn d(&self, a: &GradedElement) -> OmegaElement {
        let mut out = OmegaElement::new();
        for (m, p) in &a.terms {
            for i in 0..self.n {
                let dp = p.derivative(i);
                if !dp.is_zero() {
                    self.add_into(&mut out, (m.clone(), i), dp);
                }
            }
            for (pos, &(g, e)) in m.0.iter().enumerate() {
                let mut rest = m.clone();
                if e == 1 {
                    rest.0.remove(pos);
                } else {
                    rest.0[pos].1 -= 1;
                }
                let odd_after = m.0[pos + 1..].iter().filter(|&&(h, _)| self.b.is_odd(h)).count();
                let negative = self.b.is_odd(g) && odd_after % 2 == 1;
                let mut coeff = p.scale(&crate::exactalg::rat(e as i64));
                if negative {
                    coeff = coeff.neg();
                }
                self.add_into(&mut out, (rest, self.n + g), coeff);
            }
        }
        out
    }

    /// `a · w` for `a ∈ B`.
    fn left_mul(&self, a: &GradedElement, w: &OmegaElement) -> OmegaElement {
        let mut out = OmegaElement::new();
        for ((nu, s), q) in w {
            let prod = self.b.mul(a, &self.b.monomial(nu, q));
            for (m, p) in prod.terms {
                self.add_into(&mut out, (m, *s), p);
            }
        }
        out
    }

    fn delta(&self, w: &OmegaElement) -> OmegaElement {
        let mut out = OmegaElement::new();
        for ((mu, s), p) in w {
            let mu_el = self.b.monomial(mu, p);
            let dmu = self.b.delta(&mu_el);
            for (m, q) in dmu.terms {
                self.add_into(&mut out, (m, *s), q);
            }
            if *s >= self.n {
                let dds = self.d(&self.b.generators()[*s - self.n].differential);
                let mut t = self.left_mul(&mu_el, &dds);
                if self.b.mono_degree(mu) % 2 != 0 {
                    t = t.into_iter().map(|(k, v)| (k, v.neg())).collect();
                }
                for (k, v) in t {
                    self.add_into(&mut out, k, v);
                }
            }
        }
        out
    }

    fn basis(&self, k: i32) -> Vec<(GenMono, usize)> {
        let mut out = Vec::new();
        for s in 0..self.n + self.b.ngens() {
            let ds = self.symbol_degree(s);
            if ds >= k {
                for m in self.b.graded_basis(k - ds) {
                    out.push((m, s));
                }
            }
        }
        out.sort();
        out
    }

    fn column(&self, w: &OmegaElement, basis: &[(GenMono, usize)]) -> Column {
        w.iter().map(|(key, p)| (basis.binary_search(key).expect("Ω basis"), p.clone())).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KahlerDegree {
    pub degree: i32,
    pub rank: usize,
    pub acyclic: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KahlerReport {
    pub symbols: Vec<String>,
    pub degrees: Vec<KahlerDegree>,
    pub acyclic: bool,
}

/// Ω_{B/A} for `phi: A → B` as a complex of B⁰-modules, with acyclicity
/// decided in degrees `0 ..= -depth`.
pub fn relative_kahler(phi: &DgMorphism, depth: i32) -> Result<KahlerReport> {
    let b = &phi.target;
    let om = Omega { b, n: b.base().nvars() };
    let mut sources: Vec<(i32, OmegaElement)> = Vec::new();
    for p in &phi.base_images {
        sources.push((0, om.d(&b.scalar(p))));
    }
    for (i, g) in phi.gen_images.iter().enumerate() {
        sources.push((phi.source.degree_of(i), om.d(g)));
    }
    for j in b.base().relation_basis() {
        sources.push((0, om.d(&b.scalar(j))));
    }
    let relations = |k: i32, basis: &[(GenMono, usize)]| -> Vec<Column> {
        let mut out = Vec::new();
        for (deg, w) in &sources {
            if w.is_empty() || *deg < k {
                continue;
            }
            for mu in b.graded_basis(k - deg) {
                let t = om.left_mul(&b.monomial(&mu, &b.base().one()), w);
                if !t.is_empty() {
                    out.push(om.column(&t, basis));
                }
            }
        }
        out
    };
    let base = b.base();
    let mut degrees = Vec::new();
    for k in (-depth..=0).rev() {
        let fk = om.basis(k);
        let fk1 = om.basis(k + 1);
        let fkm = om.basis(k - 1);
        let dk: Vec<Column> = fk.iter().map(|key| om.column(&om.delta(&OmegaElement::from([(key.clone(), base.one())])), &fk1)).collect();
        let rk1 = relations(k + 1, &fk1);
        let mut block = dk.clone();
        block.extend(rk1);
        let z: Vec<Column> = module::syzygies(base, fk1.len(), &block)?
            .into_iter()
            .map(|s| s.into_iter().filter(|(i, _)| *i < fk.len()).collect::<Column>())
            .filter(|c| !c.is_empty())
            .collect();
        let mut bound = relations(k, &fk);
        for key in &fkm {
            let w = om.delta(&OmegaElement::from([(key.clone(), base.one())]));
            if !w.is_empty() {
                bound.push(om.column(&w, &fk));
            }
        }
        let lifter = Lifter::new(base, fk.len(), &bound);
        let acyclic = z.iter().all(|c| lifter.contains(c));
        degrees.push(KahlerDegree { degree: k, rank: fk.len(), acyclic });
    }
    let symbols = (0..om.n + b.ngens()).map(|s| om.symbol_name(s)).collect();
    let acyclic = degrees.iter().all(|d| d.acyclic);
    Ok(KahlerReport { symbols, degrees, acyclic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgalg::fixtures;

    fn incl(a: &DgAlgebra, b: &DgAlgebra) -> DgMorphism {
        DgMorphism::from_images(a.clone(), b.clone(), &BTreeMap::new()).unwrap()
    }

    #[test]
    fn pushout_examples() {
        let a = fixtures::polynomial(&["x"]);
        let b = fixtures::polynomial(&["x", "y"]);
        let c = fixtures::koszul();
        let p = pushout(&incl(&a, &b), &incl(&a, &c)).unwrap();
        assert_eq!(p.algebra.base().names(), ["x", "y"]);
        assert_eq!(p.algebra.ngens(), 1);
        assert_eq!(p.algebra.display(&p.algebra.generators()[0].differential), "x");

        let id = DgMorphism::identity(&c);
        let q = pushout(&id, &id).unwrap();
        assert_eq!(q.algebra, c, "{:?}", q.algebra.to_file());

        let r = pushout(&incl(&a, &c), &incl(&a, &c)).unwrap();
        assert_eq!(r.algebra.ngens(), 2);
        let h = r.algebra.cohomology(-1).unwrap();
        assert_eq!((h.rank, h.relation_strings()), (1, vec!["x".to_string()]));
    }

    #[test]
    fn tensor_renames() {
        let k = fixtures::koszul();
        let t = tensor(&k, &k).unwrap();
        assert_eq!(t.algebra.base().names(), ["x", "x_2"]);
        let names: Vec<_> = t.algebra.generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["e", "e_2"]);
        assert_eq!(t.algebra.display(&t.algebra.generators()[1].differential), "x_2");
    }

    #[test]
    fn localizations() {
        let a = fixtures::polynomial(&["x"]);
        let (ax, _) = localize(&a, &a.base().parse("x").unwrap()).unwrap();
        assert_eq!(ax.base().names(), ["x", "t"]);
        let (axy, _) = localize(&ax, &ax.base().parse("1 - x").unwrap()).unwrap();
        assert_eq!(axy.base().names(), ["x", "t", "t1"]);
        assert_eq!(axy.base().relations().len(), 2);
        let k = fixtures::koszul();
        let (kx, _) = localize(&k, &k.base().parse("x").unwrap()).unwrap();
        assert!(kx.h0_ring().is_zero_ring());
        assert!(localize(&a, &a.base().zero()).is_err());
    }

    #[test]
    fn kahler_examples() {
        let a = fixtures::polynomial(&["x"]);
        let k = fixtures::koszul();
        assert!(!relative_kahler(&incl(&a, &k), 2).unwrap().acyclic);
        let b = fixtures::algebra(&["x", "y"], &[("eps", -1, "x - y")]);
        assert!(relative_kahler(&incl(&a, &b), 2).unwrap().acyclic);
        assert!(relative_kahler(&DgMorphism::identity(&k), 2).unwrap().acyclic);
    }
}
