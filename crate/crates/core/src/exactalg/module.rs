//! Submodules of free modules over a base ring: membership with cofactors,
//! syzygies, and subquotient presentations.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;

use super::groebner::{self, ModVec};
use super::poly::{Polynomial, Rational};
use super::ring::BaseRing;
use crate::error::{Error, Result};

/// Sparse column vector: position → nonzero entry.
pub type Column = BTreeMap<usize, Polynomial>;

pub fn col_reduce(base: &BaseRing, c: &Column) -> Column {
    c.iter()
        .map(|(&k, p)| (k, base.reduce(p)))
        .filter(|(_, p)| !p.is_zero())
        .collect()
}

pub fn col_add_scaled(base: &BaseRing, acc: &mut Column, c: &Column, s: &Polynomial) {
    if s.is_zero() {
        return;
    }
    for (&k, p) in c {
        let add = base.reduce(&p.mul(s));
        let e = acc.entry(k).or_insert_with(|| base.zero());
        *e = e.add(&add);
        if e.is_zero() {
            acc.remove(&k);
        }
    }
}

pub fn col_combination(base: &BaseRing, cols: &[Column], coeffs: &[Polynomial]) -> Column {
    let mut acc = Column::new();
    for (c, s) in cols.iter().zip(coeffs) {
        col_add_scaled(base, &mut acc, c, s);
    }
    acc
}

pub fn col_is_zero(base: &BaseRing, c: &Column) -> bool {
    c.values().all(|p| base.is_zero_mod(p))
}

/// `M · v` where `M` is given by its columns.
pub fn mat_vec(base: &BaseRing, cols: &[Column], v: &Column) -> Column {
    let mut acc = Column::new();
    for (&j, s) in v {
        col_add_scaled(base, &mut acc, &cols[j], s);
    }
    acc
}

fn check_rank(rank: usize, cols: &[Column]) -> Result<()> {
    for c in cols {
        if let Some((&k, _)) = c.iter().next_back() {
            if k >= rank {
                return Err(Error::Dimension(format!("entry at row {k} exceeds module rank {rank}")));
            }
        }
    }
    Ok(())
}

/// Gröbner basis of `span(gens) + J·R^rank` inside `R^rank`, reduced.
pub fn module_basis(base: &BaseRing, rank: usize, gens: &[Column]) -> Vec<Column> {
    let order = base.order();
    let mut vs: Vec<ModVec> = gens.iter().map(|g| ModVec::from_column(&col_reduce(base, g), order)).collect();
    vs.retain(|v| !v.is_zero());
    for p in 0..rank {
        for j in base.relation_basis() {
            let mut c = Column::new();
            c.insert(p, j.clone());
            vs.push(ModVec::from_column(&c, order));
        }
    }
    groebner::groebner(&vs, order)
        .into_iter()
        .map(|v| v.to_column(base.nvars()))
        .collect()
}

/// Membership in `span(gens) + J·R^rank` with explicit cofactors.
pub struct Lifter {
    base: BaseRing,
    rank: usize,
    ngens: usize,
    gb: Vec<ModVec>,
}

impl Lifter {
    pub fn new(base: &BaseRing, rank: usize, gens: &[Column]) -> Self {
        let order = base.order();
        let mut vs = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            let mut c = col_reduce(base, g);
            c.insert(rank + i, base.one());
            vs.push(ModVec::from_column(&c, order));
        }
        for p in 0..rank {
            for j in base.relation_basis() {
                let mut c = Column::new();
                c.insert(p, j.clone());
                vs.push(ModVec::from_column(&c, order));
            }
        }
        let gb = groebner::groebner(&vs, order);
        Lifter { base: base.clone(), rank, ngens: gens.len(), gb }
    }

    /// Cofactors `c` with `v ≡ Σ c_i gens_i`, or `None` if `v` is not in the span.
    pub fn lift(&self, v: &Column) -> Option<Vec<Polynomial>> {
        let order = self.base.order();
        let r = groebner::reduce(&ModVec::from_column(&col_reduce(&self.base, v), order), &self.gb, order);
        if r.terms().iter().any(|t| t.0 < self.rank) {
            return None;
        }
        let col = r.to_column(self.base.nvars());
        Some(
            (0..self.ngens)
                .map(|i| {
                    col.get(&(self.rank + i))
                        .map(|p| self.base.reduce(&p.neg()))
                        .unwrap_or_else(|| self.base.zero())
                })
                .collect(),
        )
    }

    pub fn contains(&self, v: &Column) -> bool {
        self.lift(v).is_some()
    }
}

/// Syzygies via an elimination order on `[M; I]`: no unit-pivot shortcut.
fn syzygies_groebner(base: &BaseRing, nrows: usize, cols: &[Column]) -> Vec<Column> {
    let order = base.order();
    let mut vs = Vec::new();
    for (j, c) in cols.iter().enumerate() {
        let mut v = col_reduce(base, c);
        v.insert(nrows + j, base.one());
        vs.push(ModVec::from_column(&v, order));
    }
    for p in 0..nrows {
        for g in base.relation_basis() {
            let mut c = Column::new();
            c.insert(p, g.clone());
            vs.push(ModVec::from_column(&c, order));
        }
    }
    let gb = groebner::groebner(&vs, order);
    let mut out = Vec::new();
    for v in gb {
        if v.min_position().map_or(true, |p| p < nrows) {
            continue;
        }
        let col: Column = v
            .to_column(base.nvars())
            .into_iter()
            .map(|(k, p)| (k - nrows, base.reduce(&p)))
            .filter(|(_, p)| !p.is_zero())
            .collect();
        if !col.is_empty() && !out.contains(&col) {
            out.push(col);
        }
    }
    out
}

struct Pivot {
    row: usize,
    col: usize,
    /// `v[col] = Σ coeff · v[c']` over the columns still present at pivot time.
    expr: Vec<(usize, Polynomial)>,
}

struct Elimination {
    pivots: Vec<Pivot>,
    rows: BTreeMap<usize, BTreeMap<usize, Polynomial>>,
}

/// Gaussian elimination restricted to nonzero constant pivots. Valid over
/// any commutative ring; what remains needs Gröbner methods.
fn eliminate_units(base: &BaseRing, cols: &[Column]) -> Elimination {
    let mut rows: BTreeMap<usize, BTreeMap<usize, Polynomial>> = BTreeMap::new();
    let mut colsup: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); cols.len()];
    for (j, c) in cols.iter().enumerate() {
        for (&i, p) in c {
            let p = base.reduce(p);
            if !p.is_zero() {
                rows.entry(i).or_default().insert(j, p);
                colsup[j].insert(i);
            }
        }
    }
    let mut pivots = Vec::new();
    loop {
        let mut best: Option<(usize, usize, usize, usize)> = None; // (rowlen, collen, row, col)
        for (&r, row) in &rows {
            if let Some((bl, ..)) = best {
                if row.len() > bl {
                    continue;
                }
            }
            for (&c, p) in row {
                if p.is_constant() {
                    let key = (row.len(), colsup[c].len(), r, c);
                    if best.map_or(true, |b| key < b) {
                        best = Some(key);
                    }
                }
            }
        }
        let Some((_, _, r, c)) = best else { break };
        let row = rows.remove(&r).unwrap();
        let u = row[&c].as_constant().unwrap();
        let inv = -(Rational::one() / u);
        let expr: Vec<(usize, Polynomial)> =
            row.iter().filter(|(&k, _)| k != c).map(|(&k, p)| (k, p.scale(&inv))).collect();
        for &k in row.keys() {
            colsup[k].remove(&r);
        }
        let others: Vec<usize> = colsup[c].iter().copied().collect();
        for r2 in others {
            let row2 = rows.get_mut(&r2).unwrap();
            let b = row2.remove(&c).unwrap();
            for (k, coeff) in &expr {
                let add = base.reduce(&b.mul(coeff));
                let e = row2.entry(*k).or_insert_with(|| base.zero());
                *e = e.add(&add);
                if e.is_zero() {
                    row2.remove(k);
                    colsup[*k].remove(&r2);
                } else {
                    colsup[*k].insert(r2);
                }
            }
            if row2.is_empty() {
                rows.remove(&r2);
            }
        }
        colsup[c].clear();
        pivots.push(Pivot { row: r, col: c, expr });
    }
    Elimination { pivots, rows }
}

/// Kernel of a matrix over the base ring, with a coordinate map back onto
/// the returned generators.
pub struct Kernel {
    pub basis: Vec<Column>,
    direct: Vec<(usize, usize)>,
    residual_cols: Vec<usize>,
    residual: Option<Lifter>,
    residual_offset: usize,
}

impl Kernel {
    /// Coefficients of `w` (assumed in the kernel) in terms of `basis`.
    pub fn coordinates(&self, base: &BaseRing, w: &Column) -> Option<Vec<Polynomial>> {
        let mut out = vec![base.zero(); self.basis.len()];
        for &(c, bi) in &self.direct {
            if let Some(p) = w.get(&c) {
                out[bi] = base.reduce(p);
            }
        }
        if let Some(lifter) = &self.residual {
            let local: Column = self
                .residual_cols
                .iter()
                .enumerate()
                .filter_map(|(i, c)| w.get(c).map(|p| (i, p.clone())))
                .collect();
            let cof = lifter.lift(&local)?;
            for (i, p) in cof.into_iter().enumerate() {
                out[self.residual_offset + i] = p;
            }
        } else if self.residual_cols.iter().any(|c| w.get(c).is_some_and(|p| !base.is_zero_mod(p))) {
            return None;
        }
        Some(out)
    }
}

pub fn kernel(base: &BaseRing, nrows: usize, cols: &[Column]) -> Result<Kernel> {
    check_rank(nrows, cols)?;
    let elim = eliminate_units(base, cols);
    let pivot_cols: BTreeSet<usize> = elim.pivots.iter().map(|p| p.col).collect();
    let residual_set: BTreeSet<usize> = elim.rows.values().flat_map(|r| r.keys().copied()).collect();
    let residual_cols: Vec<usize> = residual_set.iter().copied().collect();

    let mut basis: Vec<Column> = Vec::new();
    let mut direct = Vec::new();
    for c in 0..cols.len() {
        if !pivot_cols.contains(&c) && !residual_set.contains(&c) {
            direct.push((c, basis.len()));
            basis.push(Column::from([(c, base.one())]));
        }
    }
    let residual_offset = basis.len();
    let mut residual = None;
    if !residual_cols.is_empty() {
        let row_ids: Vec<usize> = elim.rows.keys().copied().collect();
        let local_cols: Vec<Column> = residual_cols
            .iter()
            .map(|&c| {
                row_ids
                    .iter()
                    .enumerate()
                    .filter_map(|(li, r)| elim.rows[r].get(&c).map(|p| (li, p.clone())))
                    .collect()
            })
            .collect();
        let syz = syzygies_groebner(base, row_ids.len(), &local_cols);
        for s in &syz {
            basis.push(s.iter().map(|(&i, p)| (residual_cols[i], p.clone())).collect());
        }
        residual = Some(Lifter::new(base, residual_cols.len(), &syz));
    }
    for v in &mut basis {
        for piv in elim.pivots.iter().rev() {
            let mut val = base.zero();
            for (k, coeff) in &piv.expr {
                if let Some(x) = v.get(k) {
                    val = val.add(&x.mul(coeff));
                }
            }
            let val = base.reduce(&val);
            if !val.is_zero() {
                v.insert(piv.col, val);
            }
        }
    }
    Ok(Kernel { basis, direct, residual_cols, residual, residual_offset })
}

/// Generating set of `{ s : M·s = 0 }`.
pub fn syzygies(base: &BaseRing, nrows: usize, cols: &[Column]) -> Result<Vec<Column>> {
    Ok(kernel(base, nrows, cols)?.basis)
}

/// Drop generators that lie in the span of the others; order is kept.
pub fn prune_generators(base: &BaseRing, rank: usize, gens: Vec<Column>) -> Vec<Column> {
    let mut keep: Vec<Column> = gens.into_iter().filter(|g| !col_is_zero(base, g)).collect();
    let mut i = keep.len();
    while i > 0 {
        i -= 1;
        let others: Vec<Column> = keep.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, c)| c.clone()).collect();
        if Lifter::new(base, rank, &others).contains(&keep[i]) {
            keep.remove(i);
        }
    }
    keep
}

/// Finitely presented module `R^rank / span(relations)`, with optional
/// representatives of the generators inside an ambient free module.
#[derive(Clone, Debug, PartialEq)]
pub struct ModulePresentation {
    pub base: BaseRing,
    pub rank: usize,
    /// Reduced module Gröbner basis of the relation module (J excluded).
    pub relations: Vec<Column>,
    pub generators: Vec<Column>,
}

impl ModulePresentation {
    pub fn zero(base: &BaseRing) -> Self {
        ModulePresentation { base: base.clone(), rank: 0, relations: vec![], generators: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0
    }

    /// No relations beyond those of the base ring.
    pub fn is_free(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn relation_strings(&self) -> Vec<String> {
        self.relations
            .iter()
            .map(|c| {
                if self.rank == 1 {
                    self.base.display(c.get(&0).unwrap())
                } else {
                    let parts: Vec<String> = (0..self.rank)
                        .map(|i| c.get(&i).map(|p| self.base.display(p)).unwrap_or_else(|| "0".into()))
                        .collect();
                    format!("({})", parts.join(", "))
                }
            })
            .collect()
    }

    /// `dim_ℚ M ⊗ ℚ_p`: rank minus the rank of the relation matrix at `p`.
    pub fn fiber_rank(&self, point: &[Rational]) -> usize {
        let mut m = super::linalg::zeros(self.rank, self.relations.len());
        for (j, c) in self.relations.iter().enumerate() {
            for (&i, p) in c {
                m[i][j] = p.evaluate(point);
            }
        }
        self.rank - super::linalg::rank(&m)
    }

    /// Build from an arbitrary relation set: unit pivots remove generators,
    /// the remainder is put in reduced Gröbner form.
    pub fn from_relations(base: &BaseRing, rank: usize, relations: &[Column], generators: Vec<Column>) -> Result<Self> {
        check_rank(rank, relations)?;
        let elim = eliminate_units(base, relations);
        let dropped: BTreeSet<usize> = elim.pivots.iter().map(|p| p.row).collect();
        let kept: Vec<usize> = (0..rank).filter(|r| !dropped.contains(r)).collect();
        let index: BTreeMap<usize, usize> = kept.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let mut rel_cols: BTreeMap<usize, Column> = BTreeMap::new();
        for (&r, row) in &elim.rows {
            for (&c, p) in row {
                rel_cols.entry(c).or_default().insert(index[&r], p.clone());
            }
        }
        let rels: Vec<Column> = rel_cols.into_values().collect();
        let nrank = kept.len();
        let gb = module_basis(base, nrank, &rels);
        let is_zero = (0..nrank).all(|p| {
            gb.iter().any(|g| g.len() == 1 && g.get(&p).is_some_and(|x| x.is_constant() && !x.is_zero()))
        });
        if is_zero || base.is_zero_ring() {
            return Ok(ModulePresentation::zero(base));
        }
        let jset: Vec<Polynomial> = base.relation_basis().to_vec();
        let relations: Vec<Column> = gb
            .into_iter()
            .filter(|c| !(c.len() == 1 && c.values().all(|p| jset.contains(p))))
            .collect();
        let generators = if generators.len() == rank { kept.iter().map(|&r| generators[r].clone()).collect() } else { vec![] };
        Ok(ModulePresentation { base: base.clone(), rank: nrank, relations, generators })
    }
}

/// Presentation of `span(ker_gens) / span(im_gens)` inside `R^ambient`.
pub fn module_subquotient(
    base: &BaseRing,
    ambient: usize,
    ker_gens: &[Column],
    im_gens: &[Column],
) -> Result<ModulePresentation> {
    check_rank(ambient, ker_gens)?;
    check_rank(ambient, im_gens)?;
    let lifter = Lifter::new(base, ambient, ker_gens);
    let mut rels = Vec::new();
    for (i, g) in im_gens.iter().enumerate() {
        let cof = lifter.lift(g).ok_or_else(|| {
            Error::Invariant(format!("image generator {i} is not contained in the kernel span"))
        })?;
        rels.push(cof.into_iter().enumerate().filter(|(_, p)| !p.is_zero()).collect::<Column>());
    }
    rels.extend(syzygies(base, ambient, ker_gens)?);
    ModulePresentation::from_relations(base, ker_gens.len(), &rels, ker_gens.to_vec())
}

/// Whether `R^rank / span(relations)` is the zero module.
pub fn is_zero_module(base: &BaseRing, rank: usize, relations: &[Column]) -> bool {
    let gb = module_basis(base, rank, relations);
    let order = base.order();
    let vecs: Vec<ModVec> = gb.iter().map(|c| ModVec::from_column(c, order)).collect();
    (0..rank).all(|p| {
        let e = Column::from([(p, base.one())]);
        groebner::reduce(&ModVec::from_column(&e, order), &vecs, order).is_zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn col(entries: &[(usize, Polynomial)]) -> Column {
        entries.iter().cloned().collect()
    }

    #[test]
    fn kernel_of_nonzerodivisor_is_zero() {
        let r = BaseRing::free(&["x", "y"]);
        let x = r.parse("x").unwrap();
        assert!(syzygies(&r, 1, &[col(&[(0, x)])]).unwrap().is_empty());
        let m = col(&[(0, r.parse("x - y").unwrap())]);
        assert!(syzygies(&r, 2, &[m]).unwrap().is_empty());
    }

    #[test]
    fn twin_columns_have_one_syzygy() {
        let r = BaseRing::free(&["x"]);
        let x = r.parse("x").unwrap();
        let s = syzygies(&r, 1, &[col(&[(0, x.clone())]), col(&[(0, x)])]).unwrap();
        assert_eq!(s.len(), 1);
        let p = &s[0];
        assert!(r.is_zero_mod(&p[&0].add(&p[&1])));
        assert!(p[&0].is_constant());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let r = BaseRing::free(&["x"]);
        assert!(matches!(syzygies(&r, 1, &[col(&[(3, r.one())])]), Err(Error::Dimension(_))));
    }

    #[test]
    fn subquotient_cases() {
        let r = BaseRing::free(&["x"]);
        let x = r.parse("x").unwrap();
        let m = module_subquotient(&r, 1, &[col(&[(0, r.one())])], &[col(&[(0, x.clone())])]).unwrap();
        assert_eq!(m.rank, 1);
        assert_eq!(m.relation_strings(), vec!["x"]);
        assert!(module_subquotient(&r, 1, &[], &[]).unwrap().is_zero());
        let z = module_subquotient(&r, 1, &[col(&[(0, r.one())])], &[col(&[(0, r.one())])]).unwrap();
        assert!(z.is_zero());
        let bad = module_subquotient(&r, 2, &[col(&[(0, r.one())])], &[col(&[(1, x)])]);
        assert!(matches!(bad, Err(Error::Invariant(_))));
    }

    #[test]
    fn residual_kernel_has_coordinates() {
        // [x, y] over Q[x,y]: no unit pivots, kernel generated by (y, -x)
        let r = BaseRing::free(&["x", "y"]);
        let x = r.parse("x").unwrap();
        let y = r.parse("y").unwrap();
        let k = kernel(&r, 1, &[col(&[(0, x.clone())]), col(&[(0, y.clone())])]).unwrap();
        assert_eq!(k.basis.len(), 1);
        let w = col(&[(0, y.mul(&x)), (1, x.mul(&x).neg())]);
        let c = k.coordinates(&r, &w).unwrap();
        let back = col_combination(&r, &k.basis, &c);
        assert_eq!(back, w);
    }

    #[test]
    fn zero_module_test() {
        let r = BaseRing::free(&["x"]);
        let rels = [col(&[(0, r.parse("x").unwrap())]), col(&[(0, r.parse("1 - x").unwrap())])];
        assert!(is_zero_module(&r, 1, &rels));
        assert!(!is_zero_module(&r, 1, &rels[..1]));
    }
}
