//! The functorial simplicial resolution. Level `n` is generated over the
//! base of the input by copies `γ_ψ(x)` of nondegenerate items `x` of level
//! `m`, one for each surjection `ψ: [n] ↠ [m]`. Level `n` adds, for every
//! proper nonempty `s ⊂ [n]` and every generator `b` of the top block of
//! level `|s| - 1`, a pair `ē_{(s,b)}`, `f̄_{(s,b)}` with `δē = f̄`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::simplicial::{codegeneracy, coface, nonempty_subsets, subset_label, surjections, OrderMap};
use super::simplicial::{disagreements, IdentityFailure, Provenance, SimplicialDgAlgebra};
use crate::dgalg::{DgAlgebra, DgMorphism, GenMono, GeneratorSpec, GradedElement};
use crate::error::{Error, Result};
use crate::exactalg::module::{kernel, Column, Kernel};
use crate::exactalg::{BaseRing, Monomial, Polynomial};

pub const DEFAULT_DEGREE_BOUND: i32 = 3;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ItemKind {
    /// Generator of the input algebra.
    Original(usize),
    /// `ē_{(s,b)}` or, with `partner`, `f̄_{(s,b)}`; `b` is generator
    /// `index` of the degree-`degree` top block of level `block`.
    Kill { subset: Vec<usize>, block: usize, degree: i32, index: usize, partner: bool },
}

#[derive(Clone, Debug)]
pub struct Item {
    pub name: String,
    pub degree: i32,
    pub kind: ItemKind,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Occ {
    Base(usize),
    Item { level: usize, idx: usize, psi: OrderMap },
}

#[derive(Clone, Copy, Debug)]
enum Slot {
    Var(usize),
    Gen(usize),
}

#[derive(Clone, Debug, Default)]
struct LevelIndex {
    lookup: BTreeMap<Occ, Slot>,
    vars: Vec<Occ>,
    gens: Vec<Occ>,
}

/// Kernel of `H^k_m → M_m` on the monomial basis of `H^k_m`.
pub struct TopBlock {
    pub degree: i32,
    pub basis: Vec<GenMono>,
    pub kernel: Kernel,
    pub elements: Vec<GradedElement>,
}

impl std::fmt::Debug for TopBlock {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TopBlock").field("degree", &self.degree).field("rank", &self.elements.len()).finish()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockReport {
    pub level: usize,
    pub degree: i32,
    /// Generator names by index set; the full set lists top-block
    /// generators as elements.
    pub blocks: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankCheck {
    pub level: usize,
    pub degree: i32,
    pub expected: usize,
    pub actual: usize,
}

#[derive(Debug)]
pub struct Resolution {
    pub input: DgAlgebra,
    pub simplicial: SimplicialDgAlgebra,
    /// New generators are adjoined in degrees `-1..=-degree_bound` only.
    pub degree_bound: i32,
    pub items: Vec<Vec<Item>>,
    /// `top[m][d - 1]` is the top block of level `m` in degree `-d`; absent
    /// for the last level.
    pub top: Vec<Vec<TopBlock>>,
    index: Vec<LevelIndex>,
    kinds: Vec<BTreeMap<ItemKind, usize>>,
}

fn digits(v: &[usize]) -> String {
    v.iter().map(|d| d.to_string()).collect()
}

/// `p` in the first `n0` variables, if it uses no others.
fn restrict(p: &Polynomial, n0: usize) -> Option<Polynomial> {
    let mut out = Polynomial::zero(n0);
    for (m, c) in p.terms() {
        if m.0[n0..].iter().any(|&e| e != 0) {
            return None;
        }
        out.add_term(Monomial(m.0[..n0].to_vec()), c.clone());
    }
    Some(out)
}

fn widen(p: &Polynomial, n: usize) -> Polynomial {
    let map: Vec<usize> = (0..p.nvars()).collect();
    p.remap(&map, n)
}

impl Resolution {
    pub fn levels(&self) -> &[DgAlgebra] {
        &self.simplicial.levels
    }

    pub fn level(&self, n: usize) -> &DgAlgebra {
        &self.simplicial.levels[n]
    }

    fn n0(&self) -> usize {
        self.input.base().nvars()
    }

    fn occ_name(&self, occ: &Occ) -> String {
        match occ {
            Occ::Base(i) => self.input.base().names()[*i].clone(),
            Occ::Item { level, idx, psi } => {
                let item = &self.items[*level][*idx];
                if *level == 0 || psi.len() == level + 1 {
                    item.name.clone()
                } else {
                    format!("{}_{}", item.name, digits(psi))
                }
            }
        }
    }

    fn element(alg: &DgAlgebra, index: &LevelIndex, occ: &Occ) -> GradedElement {
        match index.lookup[occ] {
            Slot::Var(v) => alg.scalar(&Polynomial::var(alg.base().nvars(), v)),
            Slot::Gen(g) => alg.gen(g),
        }
    }

    /// `ψ*: A_j → target` for a surjection `ψ: [n'] ↠ [j]`.
    fn degeneracy_into(&self, j: usize, psi: &[usize], target: &DgAlgebra, tindex: &LevelIndex) -> Result<DgMorphism> {
        let src = self.level(j);
        let idx = &self.index[j];
        let mv = |occ: &Occ| -> Occ {
            match occ {
                Occ::Base(i) => Occ::Base(*i),
                Occ::Item { level, idx, psi: chi } => {
                    Occ::Item { level: *level, idx: *idx, psi: psi.iter().map(|&v| chi[v]).collect() }
                }
            }
        };
        let base_images = idx.vars.iter().map(|o| Self::element(target, tindex, &mv(o)).coeff_or_zero(target)).collect();
        let gen_images = idx.gens.iter().map(|o| Self::element(target, tindex, &mv(o))).collect();
        DgMorphism::unchecked(src.clone(), target.clone(), base_images, gen_images)
    }

    /// `ι*(x)` for the item `x` of level `m` and a proper face `t ⊂ [m]`, as
    /// an element of level `|t| - 1`.
    fn face_value(&self, m: usize, idx: usize, t: &[usize]) -> GradedElement {
        let item = &self.items[m][idx];
        let j = t.len() - 1;
        let alg = self.level(j);
        match &item.kind {
            ItemKind::Original(_) => unreachable!("level-0 items have no proper faces"),
            ItemKind::Kill { subset, block, degree, index, partner } => {
                if !subset.iter().all(|v| t.contains(v)) {
                    return GradedElement::zero(item.degree);
                }
                if subset.as_slice() == t {
                    let b = &self.top[*block][(-degree - 1) as usize].elements[*index];
                    return if *partner { alg.delta(b) } else { b.clone() };
                }
                let inner: Vec<usize> = subset.iter().map(|v| t.iter().position(|w| w == v).unwrap()).collect();
                let kind = ItemKind::Kill { subset: inner, block: *block, degree: *degree, index: *index, partner: *partner };
                let k = self.kinds[j][&kind];
                let id: Vec<usize> = (0..=j).collect();
                Self::element(alg, &self.index[j], &Occ::Item { level: j, idx: k, psi: id })
            }
        }
    }

    /// `α*: A_n → A_{n'}` for an order-preserving `α: [n'] → [n]`.
    pub fn operator(&self, n: usize, alpha: &[usize]) -> Result<DgMorphism> {
        let target_level = alpha.len() - 1;
        let target = self.level(target_level);
        let tindex = &self.index[target_level];
        let mut cache: BTreeMap<(usize, OrderMap), DgMorphism> = BTreeMap::new();
        let mut image = |occ: &Occ| -> Result<GradedElement> {
            match occ {
                Occ::Base(i) => Ok(target.scalar(&Polynomial::var(target.base().nvars(), *i))),
                Occ::Item { level: m, idx, psi } => {
                    let chi: Vec<usize> = alpha.iter().map(|&v| psi[v]).collect();
                    let mut t = chi.clone();
                    t.dedup();
                    let psi2: Vec<usize> = chi.iter().map(|v| t.iter().position(|w| w == v).unwrap()).collect();
                    if t.len() == m + 1 {
                        return Ok(Self::element(target, tindex, &Occ::Item { level: *m, idx: *idx, psi: psi2 }));
                    }
                    let fv = self.face_value(*m, *idx, &t);
                    let j = t.len() - 1;
                    let key = (j, psi2.clone());
                    if !cache.contains_key(&key) {
                        cache.insert(key.clone(), self.degeneracy_into(j, &psi2, target, tindex)?);
                    }
                    Ok(cache[&key].apply(&fv))
                }
            }
        };
        let idx = &self.index[n];
        let base_images = idx.vars.iter().map(|o| image(o).map(|e| e.coeff_or_zero(target))).collect::<Result<Vec<_>>>()?;
        let gen_images = idx.gens.iter().map(&mut image).collect::<Result<Vec<_>>>()?;
        DgMorphism::unchecked(self.level(n).clone(), target.clone(), base_images, gen_images)
    }

    fn add_level(&mut self) -> Result<()> {
        let n = self.levels().len();
        let d = self.degree_bound;
        let mut new_items = Vec::new();
        for s in nonempty_subsets(n).into_iter().filter(|s| s.len() <= n) {
            let block = s.len() - 1;
            for k in 1..=d {
                for index in 0..self.top[block][(k - 1) as usize].elements.len() {
                    for partner in [false, true] {
                        let degree = if partner { 1 - k } else { -k };
                        let name = format!("{}{n}_{}_{k}_{}", if partner { "F" } else { "E" }, digits(&s), index + 1);
                        let kind = ItemKind::Kill { subset: s.clone(), block, degree: -k, index, partner };
                        new_items.push(Item { name, degree, kind });
                    }
                }
            }
        }
        self.kinds.push(new_items.iter().enumerate().map(|(i, it)| (it.kind.clone(), i)).collect());
        self.items.push(new_items);

        let n0 = self.n0();
        let mut index = LevelIndex::default();
        for i in 0..n0 {
            index.vars.push(Occ::Base(i));
        }
        for m in 0..=n {
            for (idx, item) in self.items[m].iter().enumerate() {
                for psi in surjections(n, m) {
                    let occ = Occ::Item { level: m, idx, psi };
                    if item.degree == 0 {
                        index.vars.push(occ);
                    } else {
                        index.gens.push(occ);
                    }
                }
            }
        }
        for (v, o) in index.vars.iter().enumerate() {
            index.lookup.insert(o.clone(), Slot::Var(v));
        }
        for (g, o) in index.gens.iter().enumerate() {
            index.lookup.insert(o.clone(), Slot::Gen(g));
        }
        let names: Vec<String> = index.vars.iter().map(|o| self.occ_name(o)).collect();
        let nv = names.len();
        let rels = self.input.base().relations().iter().map(|r| widen(r, nv)).collect();
        let base = BaseRing::new(names, rels)?;
        let specs: Vec<GeneratorSpec> = index
            .gens
            .iter()
            .map(|o| {
                let degree = match o {
                    Occ::Item { level, idx, .. } => self.items[*level][*idx].degree,
                    Occ::Base(_) => 0,
                };
                GeneratorSpec { name: self.occ_name(o), degree }
            })
            .collect();
        let alg = DgAlgebra::build(base, specs, |skel, g| {
            let Occ::Item { level: m, idx, psi } = &index.gens[g] else { unreachable!() };
            let item = &self.items[*m][*idx];
            match &item.kind {
                ItemKind::Original(gi) => {
                    let dm = self.degeneracy_into(0, psi, skel, &index)?;
                    Ok(dm.apply(&self.input.generators()[*gi].differential))
                }
                ItemKind::Kill { partner: true, .. } => Ok(GradedElement::zero(item.degree + 1)),
                ItemKind::Kill { subset, block, degree, index: bi, partner: false } => {
                    let kind = ItemKind::Kill { subset: subset.clone(), block: *block, degree: *degree, index: *bi, partner: true };
                    let f = self.kinds[*m][&kind];
                    let mut e = Self::element(skel, &index, &Occ::Item { level: *m, idx: f, psi: psi.clone() });
                    e.degree = item.degree + 1;
                    Ok(e)
                }
            }
        })?;
        self.simplicial.levels.push(alg);
        self.index.push(index);

        let faces = (0..=n).map(|i| self.operator(n, &coface(n, i))).collect::<Result<Vec<_>>>()?;
        let degs = (0..n).map(|j| self.operator(n - 1, &codegeneracy(n - 1, j))).collect::<Result<Vec<_>>>()?;
        for m in faces.iter().chain(&degs) {
            m.check()?;
        }
        self.simplicial.faces.push(faces);
        self.simplicial.degeneracies.push(degs);
        Ok(())
    }

    /// Top blocks of level `m`: kernels of `H^k_m → ∏ A_{m-1}^k` over the
    /// input base, with coefficients in the face images split by monomials
    /// in the new degree-0 variables.
    fn compute_top(&mut self, m: usize) -> Result<()> {
        let n0 = self.n0();
        let a0 = self.input.base().clone();
        let alg = self.level(m).clone();
        let mut blocks = Vec::new();
        for k in 1..=self.degree_bound {
            let basis = alg.graded_basis(-k);
            let mut rows: BTreeMap<(usize, usize, Vec<u32>), usize> = BTreeMap::new();
            let mut cols = Vec::new();
            let lower = if m > 0 { self.level(m - 1).graded_basis(-k) } else { vec![] };
            for b in &basis {
                let mut col = Column::new();
                if m > 0 {
                    let e = alg.monomial(b, &alg.base().one());
                    for (i, f) in self.simplicial.faces[m].iter().enumerate() {
                        let img = f.apply(&e);
                        for (mono, p) in &img.terms {
                            let r = lower.iter().position(|x| x == mono).expect("homogeneous image");
                            for (t, c) in p.terms() {
                                let key = (i, r, t.0[n0..].to_vec());
                                let next = rows.len();
                                let row = *rows.entry(key).or_insert(next);
                                let entry = col.entry(row).or_insert_with(|| Polynomial::zero(n0));
                                entry.add_term(Monomial(t.0[..n0].to_vec()), c.clone());
                            }
                        }
                    }
                }
                col.retain(|_, p| !p.is_zero());
                cols.push(col);
            }
            let ker = kernel(&a0, rows.len(), &cols)?;
            let nv = alg.base().nvars();
            let elements = ker
                .basis
                .iter()
                .map(|c| {
                    let wide: Column = c.iter().map(|(&i, p)| (i, widen(p, nv))).collect();
                    alg.from_column(&wide, &basis, -k)
                })
                .collect();
            blocks.push(TopBlock { degree: -k, basis, kernel: ker, elements });
        }
        self.top.push(blocks);
        Ok(())
    }

    /// Generator index sets by subset, per level and degree.
    pub fn decomposition(&self) -> Vec<BlockReport> {
        let mut out = Vec::new();
        for (m, items) in self.items.iter().enumerate() {
            for k in 1..=self.degree_bound {
                let mut blocks: BTreeMap<String, Vec<String>> = BTreeMap::new();
                for it in items {
                    if let ItemKind::Kill { subset, partner: false, degree, .. } = &it.kind {
                        if *degree == -k {
                            blocks.entry(subset_label(subset)).or_default().push(it.name.clone());
                        }
                    }
                }
                if let Some(top) = self.top.get(m) {
                    let full: Vec<usize> = (0..=m).collect();
                    let alg = self.level(m);
                    let shown = top[(k - 1) as usize].elements.iter().map(|e| alg.display(e)).collect();
                    blocks.insert(subset_label(&full), shown);
                }
                out.push(BlockReport { level: m, degree: -k, blocks });
            }
        }
        out
    }

    /// `rank Ē^k_{n+1} = Σ_{s ⊊ [n+1]} rank H^k_{|s|-1,[|s|-1]}`, comparing the
    /// integer sum against the generators actually adjoined.
    pub fn rank_recursion(&self) -> Vec<RankCheck> {
        let mut out = Vec::new();
        for n1 in 1..self.items.len() {
            for k in 1..=self.degree_bound {
                let expected = nonempty_subsets(n1)
                    .iter()
                    .filter(|s| s.len() <= n1)
                    .map(|s| self.top[s.len() - 1][(k - 1) as usize].elements.len())
                    .sum();
                let actual = self.items[n1]
                    .iter()
                    .filter(|it| matches!(&it.kind, ItemKind::Kill { partner: false, degree, .. } if *degree == -k))
                    .count();
                out.push(RankCheck { level: n1, degree: -k, expected, actual });
            }
        }
        out
    }

    /// The simplicial object with its generator decomposition.
    pub fn to_json_value(&self) -> serde_json::Value {
        let mut v = self.simplicial.to_json_value();
        v["degree_bound"] = self.degree_bound.into();
        v["decomposition"] = serde_json::to_value(self.decomposition()).expect("serializable");
        v["top_ranks"] = serde_json::to_value(self.top_ranks()).expect("serializable");
        v
    }

    /// Ranks of the top blocks, `ranks[m][d - 1]` in degree `-d`.
    pub fn top_ranks(&self) -> Vec<Vec<usize>> {
        self.top.iter().map(|bs| bs.iter().map(|b| b.elements.len()).collect()).collect()
    }

    /// Faces and degeneracies recomputed from the block rule and compared
    /// with the stored maps.
    pub fn check_block_pattern(&self, s: &SimplicialDgAlgebra) -> Result<Vec<IdentityFailure>> {
        let mut out = Vec::new();
        for n in 1..s.levels.len().min(self.levels().len()) {
            for i in 0..=n {
                let expect = self.operator(n, &coface(n, i))?;
                if let Some(f) = s.faces.get(n).and_then(|fs| fs.get(i)) {
                    out.extend(disagreements(&format!("face d{i} follows the block rule"), n, f, &expect));
                }
            }
            for j in 0..n {
                let expect = self.operator(n - 1, &codegeneracy(n - 1, j))?;
                if let Some(g) = s.degeneracies.get(n - 1).and_then(|ds| ds.get(j)) {
                    out.extend(disagreements(&format!("degeneracy s{j} follows the block rule"), n - 1, g, &expect));
                }
            }
        }
        Ok(out)
    }

    /// Names of the nondegenerate generators and variables of level `n`.
    pub fn nondegenerate(&self, n: usize) -> Vec<String> {
        self.items[n].iter().map(|it| it.name.clone()).collect()
    }

    /// Whether generator `g` of level `n` is a degenerate copy.
    pub fn is_degenerate_gen(&self, n: usize, g: usize) -> bool {
        matches!(&self.index[n].gens[g], Occ::Item { level, .. } if *level < n)
    }

    pub fn is_degenerate_var(&self, n: usize, v: usize) -> bool {
        matches!(&self.index[n].vars[v], Occ::Item { level, .. } if *level < n)
    }
}

trait ScalarPart {
    fn coeff_or_zero(&self, alg: &DgAlgebra) -> Polynomial;
}

impl ScalarPart for GradedElement {
    fn coeff_or_zero(&self, alg: &DgAlgebra) -> Polynomial {
        self.coeff(&GenMono::one()).cloned().unwrap_or_else(|| alg.base().zero())
    }
}

pub fn resolve(a: &DgAlgebra, levels: usize) -> Result<Resolution> {
    resolve_truncated(a, levels, DEFAULT_DEGREE_BOUND)
}

pub fn resolve_truncated(a: &DgAlgebra, levels: usize, degree_bound: i32) -> Result<Resolution> {
    if degree_bound < 1 {
        return Err(Error::Context("degree bound must be at least 1".into()));
    }
    let items0: Vec<Item> = a
        .generators()
        .iter()
        .enumerate()
        .map(|(i, g)| Item { name: g.name.clone(), degree: g.degree, kind: ItemKind::Original(i) })
        .collect();
    let mut index = LevelIndex::default();
    for i in 0..a.base().nvars() {
        index.vars.push(Occ::Base(i));
        index.lookup.insert(Occ::Base(i), Slot::Var(i));
    }
    for g in 0..a.ngens() {
        let occ = Occ::Item { level: 0, idx: g, psi: vec![0] };
        index.gens.push(occ.clone());
        index.lookup.insert(occ, Slot::Gen(g));
    }
    let mut r = Resolution {
        input: a.clone(),
        simplicial: SimplicialDgAlgebra {
            levels: vec![a.clone()],
            faces: vec![vec![]],
            degeneracies: vec![],
            provenance: Provenance::Resolution,
        },
        degree_bound,
        kinds: vec![items0.iter().enumerate().map(|(i, it)| (it.kind.clone(), i)).collect()],
        items: vec![items0],
        top: vec![],
        index: vec![index],
    };
    for n in 0..levels {
        r.compute_top(n)?;
        r.add_level()?;
    }
    Ok(r)
}

/// Level maps `resolve(A) → resolve(B)` induced by `φ: A → B`. Both
/// resolutions must have the same length and degree bound.
pub fn induced_level_maps(phi: &DgMorphism, ra: &Resolution, rb: &Resolution) -> Result<Vec<DgMorphism>> {
    if ra.levels().len() != rb.levels().len() || ra.degree_bound != rb.degree_bound {
        return Err(Error::Context("resolutions differ in length or degree bound".into()));
    }
    let n0b = rb.n0();
    let mut maps: Vec<DgMorphism> = Vec::new();
    // Image of each nondegenerate item of A, as an element of the same
    // level of B.
    let mut nondeg: Vec<Vec<GradedElement>> = Vec::new();
    for n in 0..ra.levels().len() {
        let bn = rb.level(n);
        let nvb = bn.base().nvars();
        let mut imgs = Vec::new();
        for item in &ra.items[n] {
            let e = match &item.kind {
                ItemKind::Original(g) => phi.gen_images[*g].clone(),
                ItemKind::Kill { subset, block, degree, index, partner } => {
                    let b = &ra.top[*block][(-degree - 1) as usize].elements[*index];
                    let img = maps[*block].apply(b);
                    let tb = &rb.top[*block][(-degree - 1) as usize];
                    let col = rb.level(*block).to_column(&img, &tb.basis)?;
                    let mut narrow = Column::new();
                    for (i, p) in col {
                        let q = restrict(&p, n0b)
                            .ok_or_else(|| Error::Invariant("image of a top-block generator involves new variables".into()))?;
                        narrow.insert(i, q);
                    }
                    let coords = tb
                        .kernel
                        .coordinates(rb.input.base(), &narrow)
                        .ok_or_else(|| Error::Invariant("image of a top-block generator leaves the top block".into()))?;
                    let mut acc = GradedElement::zero(item.degree);
                    for (i, c) in coords.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let kind = ItemKind::Kill { subset: subset.clone(), block: *block, degree: *degree, index: i, partner: *partner };
                        let k = rb.kinds[n][&kind];
                        let id: Vec<usize> = (0..=n).collect();
                        let g = Resolution::element(bn, &rb.index[n], &Occ::Item { level: n, idx: k, psi: id });
                        acc = bn.add(&acc, &bn.scale(&g, &widen(c, nvb)));
                    }
                    acc.degree = item.degree;
                    acc
                }
            };
            imgs.push(e);
        }
        nondeg.push(imgs);

        let image = |occ: &Occ| -> Result<GradedElement> {
            match occ {
                Occ::Base(i) => Ok(bn.scalar(&widen(&phi.base_images[*i], nvb))),
                Occ::Item { level: m, idx, psi } => {
                    let e = &nondeg[*m][*idx];
                    if *m == n {
                        Ok(e.clone())
                    } else {
                        Ok(rb.degeneracy_into(*m, psi, bn, &rb.index[n])?.apply(e))
                    }
                }
            }
        };
        let idx = &ra.index[n];
        let base_images = idx.vars.iter().map(|o| image(o).map(|e| e.coeff_or_zero(bn))).collect::<Result<Vec<_>>>()?;
        let gen_images = idx.gens.iter().map(image).collect::<Result<Vec<_>>>()?;
        maps.push(DgMorphism::new(ra.level(n).clone(), bn.clone(), base_images, gen_images)?);
    }
    Ok(maps)
}

/// Disagreements in `Φ ∘ d_i = d_i ∘ Φ` and `Φ ∘ s_j = s_j ∘ Φ`.
pub fn check_naturality(ra: &Resolution, rb: &Resolution, maps: &[DgMorphism]) -> Result<Vec<IdentityFailure>> {
    let (sa, sb) = (&ra.simplicial, &rb.simplicial);
    let mut out = Vec::new();
    for n in 1..maps.len() {
        for i in 0..=n {
            let l = sa.faces[n][i].then(&maps[n - 1])?;
            let r = maps[n].then(&sb.faces[n][i])?;
            out.extend(disagreements(&format!("Φ d{i} = d{i} Φ"), n, &l, &r));
        }
        for j in 0..n {
            let l = sa.degeneracies[n - 1][j].then(&maps[n])?;
            let r = maps[n - 1].then(&sb.degeneracies[n - 1][j])?;
            out.extend(disagreements(&format!("Φ s{j} = s{j} Φ"), n - 1, &l, &r));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgalg::fixtures;

    #[test]
    fn polynomial_ring_is_constant() {
        let x = fixtures::polynomial(&["x"]);
        let r = resolve(&x, 3).unwrap();
        assert!(r.levels().iter().all(|l| l == &x));
        assert!(r.simplicial.check_identities().unwrap().is_empty());
    }

    #[test]
    fn koszul_level_one() {
        let k = fixtures::koszul();
        let r = resolve(&k, 1).unwrap();
        assert_eq!(r.level(0), &k);
        let a1 = r.level(1);
        assert_eq!(a1.base().names(), ["x", "F1_0_1_1", "F1_1_1_1"]);
        let names: Vec<&str> = a1.generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["e", "E1_0_1_1", "E1_1_1_1"]);
        assert_eq!(a1.display(&a1.generators()[1].differential), "F1_0_1_1");
        // d0 misses vertex 0 and keeps the block {1}; d1 keeps {0}.
        let d0 = r.simplicial.faces[1][0].image_strings();
        let d1 = r.simplicial.faces[1][1].image_strings();
        assert_eq!((d0["E1_0_1_1"].as_str(), d0["E1_1_1_1"].as_str()), ("0", "e"));
        assert_eq!((d1["E1_0_1_1"].as_str(), d1["E1_1_1_1"].as_str()), ("e", "0"));
        assert_eq!((d0["F1_0_1_1"].as_str(), d0["F1_1_1_1"].as_str()), ("0", "x"));
        assert!(r.simplicial.check_identities().unwrap().is_empty());
    }

    #[test]
    fn koszul_level_two() {
        let k = fixtures::koszul();
        let r = resolve(&k, 2).unwrap();
        assert!(r.simplicial.check_identities().unwrap().is_empty());
        assert!(r.simplicial.check_shape().is_empty());
        assert!(r.rank_recursion().iter().all(|c| c.expected == c.actual));
        assert!(r.check_block_pattern(&r.simplicial).unwrap().is_empty());
    }

    #[test]
    fn functorial_on_koszul_into_twin() {
        let k = fixtures::koszul();
        let t = fixtures::twin_koszul();
        let phi = DgMorphism::from_images(k.clone(), t.clone(), &BTreeMap::from([("e".to_string(), "e1".to_string())])).unwrap();
        let (ra, rb) = (resolve(&k, 2).unwrap(), resolve(&t, 2).unwrap());
        let maps = induced_level_maps(&phi, &ra, &rb).unwrap();
        assert!(check_naturality(&ra, &rb, &maps).unwrap().is_empty());
    }

    #[test]
    fn rank_recursion_four_levels() {
        let r = resolve_truncated(&fixtures::koszul(), 4, 1).unwrap();
        for c in r.rank_recursion() {
            assert_eq!(c.expected, c.actual, "{c:?}");
        }
        assert!(r.simplicial.check_identities().unwrap().is_empty());
    }

    #[test]
    fn functorial_on_line_into_twin() {
        let x = fixtures::polynomial(&["x"]);
        let t = fixtures::twin_koszul();
        let phi = DgMorphism::from_images(x.clone(), t.clone(), &BTreeMap::new()).unwrap();
        let (ra, rb) = (resolve(&x, 2).unwrap(), resolve(&t, 2).unwrap());
        let maps = induced_level_maps(&phi, &ra, &rb).unwrap();
        assert!(check_naturality(&ra, &rb, &maps).unwrap().is_empty());
    }
}
