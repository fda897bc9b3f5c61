//! Simplicial dg algebras: levels, faces, degeneracies and the simplicial
//! identities.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::dgalg::{DgAlgebra, DgMorphism};
use crate::error::{Error, Result};

/// Order-preserving maps `[a] → [b]` are stored as their value lists.
pub type OrderMap = Vec<usize>;

/// `σ_{n,i}: [n-1] → [n]`, the inclusion missing `i`.
pub fn coface(n: usize, i: usize) -> OrderMap {
    (0..n).map(|v| if v < i { v } else { v + 1 }).collect()
}

/// `τ_{n,j}: [n+1] → [n]`, sending `j` and `j+1` to `j`.
pub fn codegeneracy(n: usize, j: usize) -> OrderMap {
    (0..=n + 1).map(|v| if v <= j { v } else { v - 1 }).collect()
}

/// Weakly order-preserving surjections `[n] → [m]` in lexicographic order.
pub fn surjections(n: usize, m: usize) -> Vec<OrderMap> {
    fn go(pos: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<OrderMap>) {
        if pos == n + 1 {
            out.push(cur.clone());
            return;
        }
        let options = match cur.last() {
            None => vec![0],
            Some(&l) if l < m => vec![l, l + 1],
            Some(&l) => vec![l],
        };
        for v in options {
            if m - v <= n - pos {
                cur.push(v);
                go(pos + 1, n, m, cur, out);
                cur.pop();
            }
        }
    }
    if m > n {
        return vec![];
    }
    let mut out = Vec::new();
    go(0, n, m, &mut Vec::new(), &mut out);
    out
}

/// Nonempty subsets of `{0..=n}`, by size then lexicographically.
pub fn nonempty_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (1u32..(1 << (n + 1)))
        .map(|mask| (0..=n).filter(|&i| mask & (1 << i) != 0).collect())
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

pub fn subset_label(s: &[usize]) -> String {
    let inner: Vec<String> = s.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Resolution,
    Hypercover,
    User,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityFailure {
    pub identity: String,
    pub level: usize,
    pub generator: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug)]
pub struct SimplicialDgAlgebra {
    pub levels: Vec<DgAlgebra>,
    /// `faces[n][i]` is `σ*_{n,i}: A_n → A_{n-1}`; `faces[0]` is empty.
    pub faces: Vec<Vec<DgMorphism>>,
    /// `degeneracies[n][j]` is `τ*_{n,j}: A_n → A_{n+1}` for `n < N`.
    pub degeneracies: Vec<Vec<DgMorphism>>,
    pub provenance: Provenance,
}

/// Images of every base variable and generator where two parallel
/// morphisms disagree.
pub fn disagreements(name: &str, level: usize, f: &DgMorphism, g: &DgMorphism) -> Vec<IdentityFailure> {
    let (s, t) = (&f.source, &f.target);
    let mut out = Vec::new();
    for (i, v) in s.base().names().iter().enumerate() {
        let (a, b) = (&f.base_images[i], &g.base_images[i]);
        if !t.base().is_zero_mod(&a.sub(b)) {
            out.push(IdentityFailure {
                identity: name.into(),
                level,
                generator: v.clone(),
                left: t.base().display(a),
                right: t.base().display(b),
            });
        }
    }
    for (i, gen) in s.generators().iter().enumerate() {
        let (a, b) = (&f.gen_images[i], &g.gen_images[i]);
        if !t.sub(a, b).is_zero() {
            out.push(IdentityFailure {
                identity: name.into(),
                level,
                generator: gen.name.clone(),
                left: t.display(a),
                right: t.display(b),
            });
        }
    }
    out
}

impl SimplicialDgAlgebra {
    /// Every level `a`, every face and degeneracy the identity.
    pub fn constant(a: &DgAlgebra, top: usize) -> Self {
        let id = DgMorphism::identity(a);
        SimplicialDgAlgebra {
            levels: vec![a.clone(); top + 1],
            faces: (0..=top).map(|n| vec![id.clone(); if n == 0 { 0 } else { n + 1 }]).collect(),
            degeneracies: (0..top).map(|n| vec![id.clone(); n + 1]).collect(),
            provenance: Provenance::User,
        }
    }

    pub fn top_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn face(&self, n: usize, i: usize) -> &DgMorphism {
        &self.faces[n][i]
    }

    pub fn degeneracy(&self, n: usize, j: usize) -> &DgMorphism {
        &self.degeneracies[n][j]
    }

    /// Shape checks: counts, endpoints, and that every map is a dg morphism.
    pub fn check_shape(&self) -> Vec<String> {
        let mut out = Vec::new();
        let top = self.top_level();
        for n in 0..=top {
            let expect = if n == 0 { 0 } else { n + 1 };
            if self.faces.get(n).map_or(0, |f| f.len()) != expect {
                out.push(format!("level {n}: expected {expect} faces"));
                continue;
            }
            for (i, f) in self.faces[n].iter().enumerate() {
                if f.source != self.levels[n] || f.target != self.levels[n - 1] {
                    out.push(format!("face {i} of level {n} has wrong endpoints"));
                } else if let Err(e) = f.check() {
                    out.push(format!("face {i} of level {n}: {e}"));
                }
            }
            if n < top {
                if self.degeneracies.get(n).map_or(0, |d| d.len()) != n + 1 {
                    out.push(format!("level {n}: expected {} degeneracies", n + 1));
                    continue;
                }
                for (j, d) in self.degeneracies[n].iter().enumerate() {
                    if d.source != self.levels[n] || d.target != self.levels[n + 1] {
                        out.push(format!("degeneracy {j} of level {n} has wrong endpoints"));
                    } else if let Err(e) = d.check() {
                        out.push(format!("degeneracy {j} of level {n}: {e}"));
                    }
                }
            }
        }
        out
    }

    /// Checks all five families of simplicial identities on generators.
    pub fn check_identities(&self) -> Result<Vec<IdentityFailure>> {
        let top = self.top_level();
        let d = |n: usize, i: usize| &self.faces[n][i];
        let s = |n: usize, j: usize| &self.degeneracies[n][j];
        let mut out = Vec::new();
        for n in 0..=top {
            // d_i d_j = d_{j-1} d_i, i < j
            if n >= 2 {
                for j in 1..=n {
                    for i in 0..j {
                        let l = d(n, j).then(d(n - 1, i))?;
                        let r = d(n, i).then(d(n - 1, j - 1))?;
                        out.extend(disagreements(&format!("d{i} d{j} = d{} d{i}", j - 1), n, &l, &r));
                    }
                }
            }
            if n < top {
                let id = DgMorphism::identity(&self.levels[n]);
                for j in 0..=n {
                    // d_j s_j = id = d_{j+1} s_j
                    for i in [j, j + 1] {
                        let l = s(n, j).then(d(n + 1, i))?;
                        out.extend(disagreements(&format!("d{i} s{j} = id"), n, &l, &id));
                    }
                    for i in 0..=n + 1 {
                        if i < j {
                            // d_i s_j = s_{j-1} d_i
                            let l = s(n, j).then(d(n + 1, i))?;
                            let r = d(n, i).then(s(n - 1, j - 1))?;
                            out.extend(disagreements(&format!("d{i} s{j} = s{} d{i}", j - 1), n, &l, &r));
                        } else if i > j + 1 {
                            // d_i s_j = s_j d_{i-1}
                            let l = s(n, j).then(d(n + 1, i))?;
                            let r = d(n, i - 1).then(s(n - 1, j))?;
                            out.extend(disagreements(&format!("d{i} s{j} = s{j} d{}", i - 1), n, &l, &r));
                        }
                    }
                }
                // s_i s_j = s_{j+1} s_i, i ≤ j
                if n + 2 <= top {
                    for j in 0..=n {
                        for i in 0..=j {
                            let l = s(n, j).then(s(n + 1, i))?;
                            let r = s(n, i).then(s(n + 1, j + 1))?;
                            out.extend(disagreements(&format!("s{i} s{j} = s{} s{i}", j + 1), n, &l, &r));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn to_json_value(&self) -> Value {
        let images = |m: &DgMorphism| -> BTreeMap<String, String> { m.image_strings() };
        json!({
            "provenance": self.provenance,
            "levels": self.levels.iter().map(|a| a.to_json_value()).collect::<Vec<_>>(),
            "faces": self.faces.iter().map(|fs| fs.iter().map(images).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "degeneracies": self.degeneracies.iter().map(|ds| ds.iter().map(images).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json_value(v: &Value) -> Result<Self> {
        let schema = |m: &str| Error::Schema(m.to_string());
        let levels = v
            .get("levels")
            .and_then(Value::as_array)
            .ok_or_else(|| schema("missing levels"))?
            .iter()
            .map(DgAlgebra::from_json_value)
            .collect::<Result<Vec<_>>>()?;
        if levels.is_empty() {
            return Err(schema("no levels"));
        }
        let provenance = match v.get("provenance").and_then(Value::as_str) {
            Some("resolution") => Provenance::Resolution,
            Some("hypercover") => Provenance::Hypercover,
            _ => Provenance::User,
        };
        let maps = |key: &str, src: &dyn Fn(usize) -> Option<(usize, usize)>| -> Result<Vec<Vec<DgMorphism>>> {
            let arr = v.get(key).and_then(Value::as_array).ok_or_else(|| schema(&format!("missing {key}")))?;
            let mut out = Vec::new();
            for (n, row) in arr.iter().enumerate() {
                let row = row.as_array().ok_or_else(|| schema(&format!("{key}[{n}] must be a list")))?;
                let mut ms = Vec::new();
                for img in row {
                    let (a, b) = src(n).ok_or_else(|| schema(&format!("{key}[{n}] out of range")))?;
                    let images: BTreeMap<String, String> =
                        serde_json::from_value(img.clone()).map_err(crate::dgalg::json::json_error)?;
                    ms.push(DgMorphism::from_images_unchecked(levels[a].clone(), levels[b].clone(), &images)?);
                }
                out.push(ms);
            }
            Ok(out)
        };
        let top = levels.len() - 1;
        let faces = maps("faces", &|n| (n >= 1 && n <= top).then(|| (n, n - 1)))?;
        let degeneracies = maps("degeneracies", &|n| (n < top).then_some((n, n + 1)))?;
        Ok(SimplicialDgAlgebra { levels, faces, degeneracies, provenance })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_maps() {
        assert_eq!(coface(2, 1), vec![0, 2]);
        assert_eq!(codegeneracy(1, 0), vec![0, 0, 1]);
        assert_eq!(surjections(2, 1), vec![vec![0, 0, 1], vec![0, 1, 1]]);
        assert_eq!(surjections(3, 0).len(), 1);
        assert_eq!(surjections(3, 3), vec![vec![0, 1, 2, 3]]);
        for n in 0..5 {
            for m in 0..=n {
                assert_eq!(surjections(n, m).len(), binomial(n, m));
            }
        }
        assert_eq!(nonempty_subsets(1), vec![vec![0], vec![1], vec![0, 1]]);
    }

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }
}
