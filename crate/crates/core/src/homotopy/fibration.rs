//! Structural recognition of fibrations: a smooth extension of the base
//! followed by a free adjunction of negative generators.

use std::collections::BTreeSet;

use num_traits::One;
use serde::Serialize;

use crate::dgalg::constructions::{generator_injection, variable_injection};
use crate::dgalg::DgMorphism;
use crate::exactalg::linalg;
use crate::exactalg::{BaseRing, Polynomial, Rational};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseStep {
    FreshVariable { name: String },
    Localization { name: String, inverts: String },
    /// Variables with relations among themselves only, taken to be smooth
    /// over ℚ.
    AbsoluteFactor { names: Vec<String>, relations: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdjoinedGenerator {
    pub name: String,
    pub degree: i32,
    pub differential: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FibrationWitness {
    /// Target variable receiving each source variable.
    pub variable_map: Vec<(String, String)>,
    pub base_steps: Vec<BaseStep>,
    /// Target generator receiving each source generator.
    pub generator_map: Vec<(String, String)>,
    pub adjoined: Vec<AdjoinedGenerator>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Recognition {
    pub witness: Option<FibrationWitness>,
    pub reason: Option<String>,
}

impl Recognition {
    pub fn is_fibration(&self) -> bool {
        self.witness.is_some()
    }

    fn no(reason: impl Into<String>) -> Self {
        Recognition { witness: None, reason: Some(reason.into()) }
    }
}

/// `f·t - 1` with `t` of degree one and absent from `f`; returns `f`.
fn as_localization(r: &Polynomial, t: usize, base: &BaseRing) -> Option<Polynomial> {
    let n = base.nvars();
    let mut f = Polynomial::zero(n);
    let mut constant = None;
    for (m, c) in r.terms() {
        match m.0[t] {
            0 if m.is_one() => constant = Some(c.clone()),
            0 => return None,
            1 => {
                let mut m2 = m.clone();
                m2.0[t] = 0;
                f.add_term(m2, c.clone());
            }
            _ => return None,
        }
    }
    let c = constant?;
    // f·t + c = 0  ⇒  (−f/c)·t = 1
    Some(f.scale(&(-Rational::one() / c)))
}

pub fn recognize_fibration(phi: &DgMorphism) -> Recognition {
    let (a, b) = (&phi.source, &phi.target);
    let Some(vmap) = variable_injection(phi) else {
        return Recognition::no("degree-0 map is not a recognized smooth extension (variables must map to distinct variables)");
    };
    let bb = b.base();
    let image: BTreeSet<usize> = vmap.iter().copied().collect();
    let extra: Vec<usize> = (0..bb.nvars()).filter(|i| !image.contains(i)).collect();

    let mut steps = Vec::new();
    let mut explained: Vec<Polynomial> = a.base().relations().iter().map(|r| r.remap(&vmap, bb.nvars())).collect();
    let mut localized = BTreeSet::new();
    let mut factor_rels = Vec::new();
    for r in bb.relations() {
        let used: BTreeSet<usize> = r.variables_used().into_iter().collect();
        let loc = extra.iter().copied().find(|&t| used.contains(&t) && !localized.contains(&t)).and_then(|t| {
            as_localization(r, t, bb).map(|f| (t, f))
        });
        if let Some((t, f)) = loc {
            localized.insert(t);
            steps.push(BaseStep::Localization { name: bb.names()[t].clone(), inverts: bb.display(&f) });
            explained.push(r.clone());
        } else if !used.is_empty() && used.iter().all(|u| extra.contains(u) && !localized.contains(u)) {
            factor_rels.push(r.clone());
            explained.push(r.clone());
        }
    }
    let factor_vars: BTreeSet<usize> = factor_rels.iter().flat_map(|r| r.variables_used()).collect();
    let fresh = extra
        .iter()
        .filter(|i| !localized.contains(*i) && !factor_vars.contains(*i))
        .map(|&i| BaseStep::FreshVariable { name: bb.names()[i].clone() });
    steps.splice(0..0, fresh);
    if !factor_rels.is_empty() {
        steps.push(BaseStep::AbsoluteFactor {
            names: factor_vars.iter().map(|&i| bb.names()[i].clone()).collect(),
            relations: factor_rels.iter().map(|r| bb.display(r)).collect(),
        });
    }
    let reconstructed = BaseRing::new(bb.names().to_vec(), explained).expect("same variables");
    if reconstructed.relation_basis() != bb.relation_basis() {
        return Recognition::no("target relations are not explained by source relations, localizations and fresh factors");
    }

    let Some(gmap) = generator_injection(phi) else {
        return Recognition::no("generators must map to distinct generators");
    };
    let hit: BTreeSet<usize> = gmap.iter().copied().collect();
    let adjoined = (0..b.ngens())
        .filter(|j| !hit.contains(j))
        .map(|j| {
            let g = &b.generators()[j];
            AdjoinedGenerator { name: g.name.clone(), degree: g.degree, differential: b.display(&g.differential) }
        })
        .collect();
    Recognition {
        witness: Some(FibrationWitness {
            variable_map: vmap.iter().enumerate().map(|(i, &j)| (a.base().names()[i].clone(), bb.names()[j].clone())).collect(),
            base_steps: steps,
            generator_map: gmap
                .iter()
                .enumerate()
                .map(|(i, &j)| (a.generators()[i].name.clone(), b.generators()[j].name.clone()))
                .collect(),
            adjoined,
        }),
        reason: None,
    }
}

/// Rank of the Jacobian of the base relations at a point: an advisory
/// smoothness check, since the rank is locally constant on a smooth locus.
pub fn jacobian_rank_at(base: &BaseRing, point: &[Rational]) -> usize {
    let rels = base.relation_basis();
    let mut m = linalg::zeros(rels.len(), base.nvars());
    for (i, r) in rels.iter().enumerate() {
        for (j, entry) in m[i].iter_mut().enumerate() {
            *entry = r.derivative(j).evaluate(point);
        }
    }
    linalg::rank(&m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgalg::{fixtures, localize};
    use std::collections::BTreeMap;

    fn map(a: &crate::dgalg::DgAlgebra, b: &crate::dgalg::DgAlgebra, images: &[(&str, &str)]) -> DgMorphism {
        let m: BTreeMap<String, String> = images.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        DgMorphism::from_images(a.clone(), b.clone(), &m).unwrap()
    }

    #[test]
    fn examples() {
        let xy = fixtures::polynomial(&["x", "y"]);
        let eps = fixtures::algebra(&["x", "y"], &[("eps", -1, "x - y")]);
        let w = recognize_fibration(&map(&xy, &eps, &[])).witness.unwrap();
        assert_eq!(w.adjoined.len(), 1);
        let x = fixtures::polynomial(&["x"]);
        let w = recognize_fibration(&map(&x, &eps, &[])).witness.unwrap();
        assert_eq!(w.base_steps, vec![BaseStep::FreshVariable { name: "y".into() }]);
        assert!(!recognize_fibration(&map(&xy, &x, &[("y", "x")])).is_fibration());
    }

    #[test]
    fn localizations_are_smooth() {
        let x = fixtures::polynomial(&["x"]);
        let (_, m) = localize(&x, &x.base().parse("x").unwrap()).unwrap();
        let w = recognize_fibration(&m).witness.unwrap();
        assert_eq!(w.base_steps, vec![BaseStep::Localization { name: "t".into(), inverts: "x".into() }]);
        let quotient = crate::dgalg::DgAlgebra::from_base(BaseRing::new(vec!["x".into()], vec![x.base().parse("x").unwrap()]).unwrap());
        assert!(!recognize_fibration(&map(&x, &quotient, &[])).is_fibration());
    }

    #[test]
    fn jacobian_rank() {
        let b = BaseRing::free(&["x", "y"]);
        let node = BaseRing::new(b.names().to_vec(), vec![b.parse("y^2 - x^2").unwrap()]).unwrap();
        use crate::exactalg::rat;
        assert_eq!(jacobian_rank_at(&node, &[rat(1), rat(1)]), 1);
        assert_eq!(jacobian_rank_at(&node, &[rat(0), rat(0)]), 0);
    }
}
