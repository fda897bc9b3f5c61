//! Čech hypercovers of an affine atlas of basic opens. Level `n` is the
//! product of the charts `A[1/f_s]` over weakly increasing `i: [n] → [r-1]`,
//! with `s` the image of `i`; an order map `α` sends the factor `i ∘ α` to
//! the factor `i` by the localization map.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use super::covering::{covering_verdict, CoveringVerdict};
use crate::dgalg::{localize, DgAlgebra, DgMorphism};
use crate::error::Result;
use crate::exactalg::{BaseRing, Polynomial};
use crate::resolution::simplicial::{codegeneracy, coface, disagreements, subset_label, IdentityFailure, OrderMap};

#[derive(Clone, Debug)]
pub struct Chart {
    /// Weakly increasing index tuple.
    pub index: Vec<usize>,
    pub subset: Vec<usize>,
    pub algebra: DgAlgebra,
}

#[derive(Clone, Debug)]
pub struct HyperLevel {
    pub charts: Vec<Chart>,
    /// Index tuples whose chart is the zero ring.
    pub absorbed: Vec<Vec<usize>>,
}

/// Map of products: target chart `k` receives source chart `source[k]`.
#[derive(Clone, Debug)]
pub struct ProductMap {
    pub source: Vec<usize>,
    pub components: Vec<DgMorphism>,
}

impl ProductMap {
    /// `self` followed by `other`.
    pub fn then(&self, other: &ProductMap) -> Result<ProductMap> {
        let mut source = Vec::new();
        let mut components = Vec::new();
        for (k, &mid) in other.source.iter().enumerate() {
            source.push(self.source[mid]);
            components.push(self.components[mid].then(&other.components[k])?);
        }
        Ok(ProductMap { source, components })
    }
}

#[derive(Clone, Debug)]
pub struct Hypercover {
    pub algebra: DgAlgebra,
    pub elements: Vec<Polynomial>,
    pub levels: Vec<HyperLevel>,
    /// `faces[n][i]`: level `n-1` → level `n`, along `σ_{n,i}`.
    pub faces: Vec<Vec<ProductMap>>,
    /// `degeneracies[n][j]`: level `n+1` → level `n`, along `τ_{n,j}`.
    pub degeneracies: Vec<Vec<ProductMap>>,
}

fn increasing_maps(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(len: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in cur.last().copied().unwrap_or(0)..r {
            cur.push(v);
            go(len, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n + 1, r, &mut Vec::new(), &mut out);
    out
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `Σ_{m ≤ min(n, r-1)} C(n, m)·C(r, m+1)`.
pub fn expected_factor_count(n: usize, r: usize) -> usize {
    (0..=n.min(r.saturating_sub(1))).map(|m| binomial(n, m) * binomial(r, m + 1)).sum()
}

fn product(a: &DgAlgebra, fs: &[Polynomial], s: &[usize]) -> Polynomial {
    let n = a.base().nvars();
    s.iter().fold(Polynomial::one(n), |acc, &i| acc.mul(&fs[i]))
}

/// `A[1/f_{s'}] → A[1/f_s]` for `s' ⊆ s`: `t ↦ t·f_{s ∖ s'}`.
fn chart_map(a: &DgAlgebra, fs: &[Polynomial], from: &Chart, to: &Chart) -> Result<DgMorphism> {
    let n = a.base().nvars();
    let nt = to.algebra.base().nvars();
    let embed: Vec<usize> = (0..n).collect();
    let rest: Vec<usize> = to.subset.iter().copied().filter(|i| !from.subset.contains(i)).collect();
    let t = Polynomial::var(nt, n).mul(&product(a, fs, &rest).remap(&embed, nt));
    let mut base_images: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(nt, i)).collect();
    base_images.push(t);
    DgMorphism::new(from.algebra.clone(), to.algebra.clone(), base_images, (0..a.ngens()).map(|g| to.algebra.gen(g)).collect())
}

fn operator(a: &DgAlgebra, fs: &[Polynomial], from: &HyperLevel, to: &HyperLevel, alpha: &OrderMap) -> Result<ProductMap> {
    let pos: BTreeMap<&Vec<usize>, usize> = from.charts.iter().enumerate().map(|(k, c)| (&c.index, k)).collect();
    let mut source = Vec::new();
    let mut components = Vec::new();
    for c in &to.charts {
        let pulled: Vec<usize> = alpha.iter().map(|&v| c.index[v]).collect();
        let k = pos[&pulled];
        source.push(k);
        components.push(chart_map(a, fs, &from.charts[k], c)?);
    }
    Ok(ProductMap { source, components })
}

/// The Čech object of `{A → A[1/f_i]}` through level `levels`.
pub fn cech_hypercover(a: &DgAlgebra, elements: &[Polynomial], levels: usize) -> Result<Hypercover> {
    let r = elements.len();
    let mut lv = Vec::new();
    for n in 0..=levels {
        let mut charts = Vec::new();
        let mut absorbed = Vec::new();
        for index in increasing_maps(n, r) {
            let mut subset = index.clone();
            subset.dedup();
            let f = product(a, elements, &subset);
            match localize(a, &f) {
                Ok((alg, _)) if !alg.base().is_zero_ring() => charts.push(Chart { index, subset, algebra: alg }),
                _ => absorbed.push(index),
            }
        }
        lv.push(HyperLevel { charts, absorbed });
    }
    let mut faces = vec![vec![]];
    let mut degeneracies = Vec::new();
    for n in 1..=levels {
        faces.push((0..=n).map(|i| operator(a, elements, &lv[n - 1], &lv[n], &coface(n, i))).collect::<Result<Vec<_>>>()?);
    }
    for n in 0..levels {
        degeneracies.push((0..=n).map(|j| operator(a, elements, &lv[n + 1], &lv[n], &codegeneracy(n, j))).collect::<Result<Vec<_>>>()?);
    }
    Ok(Hypercover { algebra: a.clone(), elements: elements.to_vec(), levels: lv, faces, degeneracies })
}

fn compare(name: &str, level: usize, f: &ProductMap, g: &ProductMap) -> Vec<IdentityFailure> {
    let mut out = Vec::new();
    for k in 0..f.source.len() {
        if f.source[k] != g.source[k] {
            out.push(IdentityFailure {
                identity: name.into(),
                level,
                generator: format!("chart {k}"),
                left: format!("from chart {}", f.source[k]),
                right: format!("from chart {}", g.source[k]),
            });
        } else {
            out.extend(disagreements(name, level, &f.components[k], &g.components[k]));
        }
    }
    out
}

fn identity_map(l: &HyperLevel) -> ProductMap {
    ProductMap {
        source: (0..l.charts.len()).collect(),
        components: l.charts.iter().map(|c| DgMorphism::identity(&c.algebra)).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelCheck {
    pub level: usize,
    pub factors: usize,
    pub expected_factors: usize,
    pub absorbed: Vec<String>,
    /// Charts whose presentation is certified isomorphic to the fiber
    /// product of their faces.
    pub coherent: usize,
    pub failures: Vec<String>,
    pub covering: Option<CoveringVerdict>,
    pub certified: bool,
}

impl Hypercover {
    pub fn top_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn factor_counts(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.charts.len()).collect()
    }

    /// The five families of identities, read on the schemes: for `X_n`
    /// the algebra of level `n`, `d_i d_j = d_{j-1} d_i` becomes
    /// `faces[n-1][i]` then `faces[n][j]` equal to `faces[n-1][j-1]` then
    /// `faces[n][i]`, and likewise for the others.
    pub fn check_identities(&self) -> Result<Vec<IdentityFailure>> {
        let top = self.top_level();
        let f = |n: usize, i: usize| &self.faces[n][i];
        let s = |n: usize, j: usize| &self.degeneracies[n][j];
        let mut out = Vec::new();
        for n in 2..=top {
            for j in 1..=n {
                for i in 0..j {
                    let l = f(n - 1, i).then(f(n, j))?;
                    let r = f(n - 1, j - 1).then(f(n, i))?;
                    out.extend(compare(&format!("d{i} d{j} = d{} d{i}", j - 1), n, &l, &r));
                }
            }
        }
        for n in 0..top {
            let id = identity_map(&self.levels[n]);
            for j in 0..=n {
                for i in [j, j + 1] {
                    out.extend(compare(&format!("d{i} s{j} = id"), n, &f(n + 1, i).then(s(n, j))?, &id));
                }
                for i in 0..=n + 1 {
                    if i < j {
                        let l = f(n + 1, i).then(s(n, j))?;
                        let r = s(n - 1, j - 1).then(f(n, i))?;
                        out.extend(compare(&format!("d{i} s{j} = s{} d{i}", j - 1), n, &l, &r));
                    } else if i > j + 1 {
                        let l = f(n + 1, i).then(s(n, j))?;
                        let r = s(n - 1, j).then(f(n, i - 1))?;
                        out.extend(compare(&format!("d{i} s{j} = s{j} d{}", i - 1), n, &l, &r));
                    }
                }
                if n + 2 <= top {
                    for i in 0..=j {
                        let l = s(n + 1, i).then(s(n, j))?;
                        let r = s(n + 1, j + 1).then(s(n, i))?;
                        out.extend(compare(&format!("s{i} s{j} = s{} s{i}", j + 1), n, &l, &r));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Level 0: the atlas is a covering. Level `n > 0`: every chart is
    /// certified isomorphic to the fiber product of its faces over `A`.
    pub fn verify_level(&self, n: usize, depth: i32, seed: u64) -> Result<LevelCheck> {
        let l = &self.levels[n];
        let r = self.elements.len();
        let mut failures = Vec::new();
        let mut covering = None;
        let mut coherent = 0;
        if n == 0 {
            let members = self
                .elements
                .iter()
                .map(|f| localize(&self.algebra, f).map(|x| x.1))
                .collect::<Result<Vec<_>>>();
            match members {
                Ok(ms) => {
                    let v = covering_verdict(&self.algebra, &ms, depth, seed, 5)?;
                    if !v.covering {
                        failures.push("the atlas is not a covering".into());
                    }
                    covering = Some(v);
                }
                Err(e) => failures.push(format!("atlas: {e}")),
            }
        } else {
            for c in &l.charts {
                let parts: Vec<Vec<usize>> = (0..=n)
                    .map(|i| {
                        let mut s: Vec<usize> = coface(n, i).iter().map(|&v| c.index[v]).collect();
                        s.dedup();
                        s
                    })
                    .collect();
                match coherence(&self.algebra, &self.elements, &parts, &c.subset) {
                    Ok(true) => coherent += 1,
                    Ok(false) => failures.push(format!("chart {} is not the fiber product of its faces", subset_label(&c.index))),
                    Err(e) => failures.push(format!("chart {}: {e}", subset_label(&c.index))),
                }
            }
        }
        let expected_factors = expected_factor_count(n, r);
        if l.charts.len() != expected_factors {
            failures.push(format!("{} factors, expected {expected_factors}", l.charts.len()));
        }
        Ok(LevelCheck {
            level: n,
            factors: l.charts.len(),
            expected_factors,
            absorbed: l.absorbed.iter().map(|i| subset_label(i)).collect(),
            coherent,
            certified: failures.is_empty(),
            failures,
            covering,
        })
    }

    pub fn to_json_value(&self) -> Value {
        let map = |m: &ProductMap| -> Value {
            json!(m.source.iter().zip(&m.components).map(|(k, c)| json!({"from": k, "images": c.image_strings()})).collect::<Vec<_>>())
        };
        json!({
            "provenance": "hypercover",
            "algebra": self.algebra.to_json_value(),
            "elements": self.elements.iter().map(|f| self.algebra.base().display(f)).collect::<Vec<_>>(),
            "levels": self.levels.iter().map(|l| json!({
                "charts": l.charts.iter().map(|c| json!({
                    "index": c.index,
                    "subset": subset_label(&c.subset),
                    "algebra": c.algebra.to_json_value(),
                })).collect::<Vec<_>>(),
                "absorbed": l.absorbed.iter().map(|i| subset_label(i)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "faces": self.faces.iter().map(|fs| fs.iter().map(map).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "degeneracies": self.degeneracies.iter().map(|ds| ds.iter().map(map).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// Every level of `h` checked by [`Hypercover::verify_level`].
pub fn verify_hypercover(h: &Hypercover, depth: i32, seed: u64) -> Result<Vec<LevelCheck>> {
    (0..h.levels.len()).map(|n| h.verify_level(n, depth, seed)).collect()
}

/// `⊗_k A[1/f_{s_k}]` over `A` against `A[1/f_s]` with `s = ∪ s_k`: maps
/// both ways, `t_k ↦ t·f_{s ∖ s_k}` and `t ↦ ∏_{i ∈ s} t_{k(i)} f_{s_{k(i)} ∖ i}`,
/// with both composites the identity on normal forms.
pub fn coherence(a: &DgAlgebra, fs: &[Polynomial], parts: &[Vec<usize>], s: &[usize]) -> Result<bool> {
    let base = a.base();
    let n = base.nvars();
    let m = parts.len();
    let embed: Vec<usize> = (0..n).collect();
    // Tensor presentation on x, t_0..t_{m-1}.
    let nt = n + m;
    let mut names: Vec<String> = base.names().to_vec();
    names.extend((0..m).map(|k| format!("t{k}")));
    let mut rels: Vec<Polynomial> = base.relations().iter().map(|r| r.remap(&embed, nt)).collect();
    for (k, p) in parts.iter().enumerate() {
        rels.push(product(a, fs, p).remap(&embed, nt).mul(&Polynomial::var(nt, n + k)).sub(&Polynomial::one(nt)));
    }
    let tensor = BaseRing::new(names, rels)?;
    let (single, _) = localize(a, &product(a, fs, s))?;
    let sb = single.base();
    let ns = n + 1;
    let t = Polynomial::var(ns, n);
    let fwd: Vec<Polynomial> = (0..n)
        .map(|i| Polynomial::var(ns, i))
        .chain(parts.iter().map(|p| {
            let rest: Vec<usize> = s.iter().copied().filter(|i| !p.contains(i)).collect();
            t.mul(&product(a, fs, &rest).remap(&embed, ns))
        }))
        .collect();
    let mut inv_t = Polynomial::one(nt);
    for &i in s {
        let Some(k) = parts.iter().position(|p| p.contains(&i)) else { return Ok(false) };
        let others: Vec<usize> = parts[k].iter().copied().filter(|&j| j != i).collect();
        inv_t = inv_t.mul(&Polynomial::var(nt, n + k)).mul(&product(a, fs, &others).remap(&embed, nt));
    }
    let back: Vec<Polynomial> = (0..n).map(|i| Polynomial::var(nt, i)).chain(std::iter::once(inv_t)).collect();
    // Relations go to zero both ways, and both composites fix the variables.
    let rels_ok = tensor.relations().iter().all(|r| sb.is_zero_mod(&r.substitute(&fwd, ns)))
        && sb.relations().iter().all(|r| tensor.is_zero_mod(&r.substitute(&back, nt)));
    let round_trip = (0..nt).all(|v| {
        let there = Polynomial::var(nt, v).substitute(&fwd, ns).substitute(&back, nt);
        tensor.is_zero_mod(&there.sub(&Polynomial::var(nt, v)))
    }) && (0..ns).all(|v| {
        let there = Polynomial::var(ns, v).substitute(&back, nt).substitute(&fwd, ns);
        sb.is_zero_mod(&there.sub(&Polynomial::var(ns, v)))
    });
    Ok(rels_ok && round_trip)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgalg::fixtures;

    fn atlas() -> (DgAlgebra, Vec<Polynomial>) {
        let x = fixtures::polynomial(&["x"]);
        let fs = vec![x.base().parse("x").unwrap(), x.base().parse("1 - x").unwrap()];
        (x, fs)
    }

    #[test]
    fn counts_and_identities() {
        let (x, fs) = atlas();
        let h = cech_hypercover(&x, &fs, 2).unwrap();
        assert_eq!(h.factor_counts(), [2, 3, 4]);
        for n in 0..=4 {
            assert_eq!(increasing_maps(n, 2).len(), expected_factor_count(n, 2));
            assert_eq!(increasing_maps(n, 3).len(), expected_factor_count(n, 3));
        }
        assert!(h.check_identities().unwrap().is_empty());
        for n in 0..=2 {
            let v = h.verify_level(n, 3, 1).unwrap();
            assert!(v.certified, "{v:?}");
        }
        assert_eq!(h.verify_level(2, 3, 1).unwrap().coherent, 4);
    }

    #[test]
    fn identity_cover_is_constant() {
        let k = fixtures::koszul();
        let h = cech_hypercover(&k, &[Polynomial::one(1)], 3).unwrap();
        assert_eq!(h.factor_counts(), [1, 1, 1, 1]);
        assert!(h.check_identities().unwrap().is_empty());
    }

    #[test]
    fn single_chart_is_refuted() {
        let x = fixtures::polynomial(&["x"]);
        let h = cech_hypercover(&x, &[x.base().parse("x").unwrap()], 0).unwrap();
        assert!(!h.verify_level(0, 3, 1).unwrap().certified);
    }
}
