//! Étale and covering verdicts for maps of affine dg algebras.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use crate::dgalg::constructions::{generator_injection, variable_injection};
use crate::dgalg::{DgAlgebra, DgMorphism};
use crate::error::Result;
use crate::exactalg::module::{is_zero_module, Column};
use crate::exactalg::{unit_ideal_certificate, BaseRing, Polynomial, Rational};
use crate::homotopy::{compare_cohomology, Verdict};
use crate::sampling;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MemberKind {
    /// `B⁰ = A⁰[1/f]`; `inverts` is `f` on the source.
    Localization { inverts: String },
    /// `B⁰ = A⁰[t]_g/(p)`.
    StandardEtale { polynomial: String, variable: String },
    General,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition1 {
    Certified,
    UnramifiedOnly,
    Refuted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition3 {
    CertifiedByUnitIdeal,
    SampledOnly,
    Refuted,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EtaleVerdict {
    pub kind: MemberKind,
    pub condition1: Condition1,
    pub condition1_witness: Option<String>,
    pub condition2: Verdict,
    /// First degree where base change fails.
    pub condition2_degree: Option<i32>,
    pub condition2_witness: Option<String>,
    pub depth: i32,
}

impl EtaleVerdict {
    pub fn is_etale(&self) -> bool {
        self.condition1 == Condition1::Certified && self.condition2 == Verdict::Certified
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoveringVerdict {
    pub members: Vec<EtaleVerdict>,
    pub condition3: Condition3,
    /// Cofactors `g_i` with `Σ g_i f_i = 1` in `H⁰`, for basic opens.
    pub certificate: Option<Vec<String>>,
    pub condition3_witness: Option<String>,
    pub covering: bool,
}

/// `r = f·t + c` with `t` linear and absent from `f`, `c` a nonzero
/// constant; returns `f` up to the unit `-1/c`.
fn localization_of(r: &Polynomial, t: usize) -> Option<Polynomial> {
    let mut f = Polynomial::zero(r.nvars());
    let mut c = Rational::zero();
    for (m, v) in r.terms() {
        match m.0[t] {
            0 if m.is_one() => c = v.clone(),
            0 => return None,
            1 => {
                let mut m2 = m.clone();
                m2.0[t] = 0;
                f.add_term(m2, v.clone());
            }
            _ => return None,
        }
    }
    (!c.is_zero()).then(|| f.scale(&(-(Rational::from_integer(1.into()) / c))))
}

/// Pulls a target polynomial in the image variables back to the source.
fn pull_back(p: &Polynomial, vmap: &[usize], source_vars: usize) -> Option<Polynomial> {
    let mut back = vec![usize::MAX; p.nvars()];
    for (i, &j) in vmap.iter().enumerate() {
        back[j] = i;
    }
    if p.variables_used().iter().any(|&v| back[v] == usize::MAX) {
        return None;
    }
    Some(p.remap(&back.iter().map(|&v| if v == usize::MAX { 0 } else { v }).collect::<Vec<_>>(), source_vars))
}

/// Shape of `φ⁰`, when `φ` sends variables and generators to distinct
/// variables and generators and adjoins no generators.
pub fn classify_member(phi: &DgMorphism) -> MemberKind {
    let (a, b) = (&phi.source, &phi.target);
    let (Some(vmap), Some(gmap)) = (variable_injection(phi), generator_injection(phi)) else {
        return MemberKind::General;
    };
    if gmap.len() != b.ngens() {
        return MemberKind::General;
    }
    let bb = b.base();
    let image: BTreeSet<usize> = vmap.iter().copied().collect();
    let extra: Vec<usize> = (0..bb.nvars()).filter(|i| !image.contains(i)).collect();
    let mapped: Vec<Polynomial> = a.base().relations().iter().map(|r| r.remap(&vmap, bb.nvars())).collect();
    let new_rels: Vec<&Polynomial> = bb.relations().iter().filter(|r| !mapped.contains(r)).collect();
    let rebuilt = |rels: Vec<Polynomial>| BaseRing::new(bb.names().to_vec(), rels).map(|r| r.relation_basis() == bb.relation_basis());
    let mut all = mapped.clone();
    all.extend(new_rels.iter().map(|r| (*r).clone()));
    if !rebuilt(all).unwrap_or(false) {
        return MemberKind::General;
    }
    let candidates = |r: &Polynomial| -> Vec<(usize, Polynomial)> {
        extra.iter().filter_map(|&t| localization_of(r, t).map(|f| (t, f))).collect()
    };
    let others: Vec<&Polynomial> = new_rels.iter().copied().filter(|r| candidates(r).is_empty()).collect();
    let busy: BTreeSet<usize> = others.iter().flat_map(|r| r.variables_used()).collect();
    let mut locs = Vec::new();
    for r in &new_rels {
        let mut c = candidates(r);
        if let Some(k) = c.iter().position(|(t, _)| !busy.contains(t)).or((!c.is_empty()).then_some(0)) {
            locs.push(c.swap_remove(k));
        }
    }
    if extra.len() == 1 && locs.len() == 1 && others.is_empty() {
        if let Some(f) = pull_back(&locs[0].1, &vmap, a.base().nvars()) {
            return MemberKind::Localization { inverts: a.base().display(&f) };
        }
    }
    let loc_vars: BTreeSet<usize> = locs.iter().map(|l| l.0).collect();
    let free: Vec<usize> = extra.iter().copied().filter(|v| !loc_vars.contains(v)).collect();
    if let ([t], [p]) = (free.as_slice(), others.as_slice()) {
        let deg = p.terms().map(|(m, _)| m.0[*t]).max().unwrap_or(0);
        let lead: Vec<_> = p.terms().filter(|(m, _)| m.0[*t] == deg).collect();
        let monic = deg > 0 && lead.len() == 1 && lead[0].0 .0.iter().enumerate().all(|(i, &e)| i == *t || e == 0);
        let locs_ok = locs.iter().all(|(_, f)| f.variables_used().iter().all(|v| !loc_vars.contains(v)));
        if monic && locs_ok {
            return MemberKind::StandardEtale { polynomial: bb.display(p), variable: bb.names()[*t].clone() };
        }
    }
    MemberKind::General
}

/// `Ω_{H⁰B/H⁰A}` as a presentation on `db_j`: zero iff unramified.
fn omega_relations(phi: &DgMorphism) -> (BaseRing, Vec<Column>) {
    let hb = phi.target.h0_ring();
    let n = hb.nvars();
    let grad = |p: &Polynomial| -> Column {
        (0..n).map(|j| (j, hb.reduce(&p.derivative(j)))).filter(|(_, q)| !q.is_zero()).collect()
    };
    let mut rels: Vec<Column> = phi.base_images.iter().map(grad).collect();
    rels.extend(hb.relation_basis().iter().map(grad));
    (hb, rels)
}

pub fn etale_verdict(phi: &DgMorphism, depth: i32) -> Result<EtaleVerdict> {
    let kind = classify_member(phi);
    let (condition1, condition1_witness) = match &kind {
        MemberKind::Localization { .. } => (Condition1::Certified, None),
        MemberKind::StandardEtale { polynomial, variable } => {
            let bb = phi.target.base();
            let p = bb.parse_raw(polynomial)?;
            let t = bb.index_of(variable).expect("variable of the target");
            match unit_ideal_certificate(bb, &[p.derivative(t)]) {
                Some(_) => (Condition1::Certified, None),
                None => (Condition1::Refuted, Some(format!("d({polynomial})/d{variable} is not a unit"))),
            }
        }
        MemberKind::General => {
            let (hb, rels) = omega_relations(phi);
            if is_zero_module(&hb, hb.nvars(), &rels) {
                (Condition1::UnramifiedOnly, None)
            } else {
                let shown: Vec<String> = rels
                    .iter()
                    .map(|c| {
                        let terms: Vec<String> =
                            c.iter().map(|(j, q)| format!("({})·d{}", hb.display(q), hb.names()[*j])).collect();
                        terms.join(" + ")
                    })
                    .filter(|s| !s.is_empty())
                    .collect();
                (Condition1::Refuted, Some(format!("Ω is nonzero: generated by d of the variables modulo {}", shown.join(", "))))
            }
        }
    };
    let mut condition2 = Verdict::Certified;
    let mut condition2_degree = None;
    let mut condition2_witness = None;
    for d in 1..=depth {
        let c = compare_cohomology(phi, -d)?;
        if c.status != Verdict::Certified {
            condition2 = c.status;
            condition2_degree = Some(-d);
            condition2_witness = c.witness;
            break;
        }
    }
    Ok(EtaleVerdict { kind, condition1, condition1_witness, condition2, condition2_degree, condition2_witness, depth })
}

/// Conditions 1–2 per member and surjectivity on `Spec H⁰`. Basic opens are
/// certified by a unit-ideal certificate; other families are only checked
/// at sampled points.
pub fn covering_verdict(source: &DgAlgebra, members: &[DgMorphism], depth: i32, seed: u64, samples: usize) -> Result<CoveringVerdict> {
    let verdicts = members.iter().map(|m| etale_verdict(m, depth)).collect::<Result<Vec<_>>>()?;
    let h0 = source.h0_ring();
    let (condition3, certificate, condition3_witness) = if h0.is_zero_ring() {
        (Condition3::CertifiedByUnitIdeal, Some(vec![]), None)
    } else if members.is_empty() {
        (Condition3::Refuted, None, Some("the empty family covers only the zero algebra".into()))
    } else if verdicts.iter().all(|v| matches!(v.kind, MemberKind::Localization { .. })) {
        let fs: Vec<Polynomial> = verdicts
            .iter()
            .map(|v| match &v.kind {
                MemberKind::Localization { inverts } => source.base().parse(inverts),
                _ => unreachable!(),
            })
            .collect::<Result<_>>()?;
        match unit_ideal_certificate(&h0, &fs) {
            Some(g) => (Condition3::CertifiedByUnitIdeal, Some(g.iter().map(|p| h0.display(p)).collect()), None),
            None => (
                Condition3::Refuted,
                None,
                Some(format!("1 ∉ ({}) in H⁰", fs.iter().map(|f| h0.display(f)).collect::<Vec<_>>().join(", "))),
            ),
        }
    } else {
        sampled_surjectivity(source, members, seed, samples)
    };
    let covering = condition3 == Condition3::CertifiedByUnitIdeal && verdicts.iter().all(EtaleVerdict::is_etale);
    Ok(CoveringVerdict { members: verdicts, condition3, certificate, condition3_witness, covering })
}

/// A point of `Spec H⁰A` is hit when some member's fiber ring over it is
/// not the unit ideal.
fn sampled_surjectivity(source: &DgAlgebra, members: &[DgMorphism], seed: u64, count: usize) -> (Condition3, Option<Vec<String>>, Option<String>) {
    let h0 = source.h0_ring();
    for p in sampling::sample_points(&h0, seed, count) {
        let hit = members.iter().any(|m| {
            let hb = m.target.h0_ring();
            let mut rels = hb.relations().to_vec();
            for (img, v) in m.base_images.iter().zip(&p) {
                rels.push(img.sub(&Polynomial::constant(hb.nvars(), v.clone())));
            }
            BaseRing::new(hb.names().to_vec(), rels).map_or(false, |r| !r.is_zero_ring())
        });
        if !hit {
            let shown: Vec<String> = p.iter().map(crate::exactalg::poly::fmt_rational).collect();
            return (Condition3::Refuted, None, Some(format!("no member covers the point ({})", shown.join(", "))));
        }
    }
    (Condition3::SampledOnly, None, None)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Shrink {
    pub h: String,
    pub cofactors: Vec<String>,
    /// Inverse of `h` in `H⁰`.
    pub inverse: String,
}

/// `h = Σ g_i f_i` invertible in `H⁰(A)`, from a unit-ideal certificate of
/// the `f_i`; `None` when they do not generate the unit ideal.
pub fn affine_shrink(f: &[Polynomial], a: &DgAlgebra) -> Option<(Polynomial, Vec<Polynomial>, Polynomial)> {
    let h0 = a.h0_ring();
    let g = unit_ideal_certificate(&h0, f)?;
    let n = a.base().nvars();
    let h = f.iter().zip(&g).fold(Polynomial::zero(n), |acc, (fi, gi)| acc.add(&fi.mul(gi)));
    let inv = unit_ideal_certificate(&h0, std::slice::from_ref(&h))?;
    Some((h, g, inv.into_iter().next().expect("one cofactor")))
}

pub fn shrink_report(f: &[Polynomial], a: &DgAlgebra) -> Option<Shrink> {
    let b = a.base();
    affine_shrink(f, a).map(|(h, g, inv)| Shrink {
        h: b.display(&h),
        cofactors: g.iter().map(|p| b.display(p)).collect(),
        inverse: a.h0_ring().display(&inv),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgalg::{fixtures, localize};
    use std::collections::BTreeMap;

    fn loc(a: &DgAlgebra, f: &str) -> DgMorphism {
        localize(a, &a.base().parse(f).unwrap()).unwrap().1
    }

    #[test]
    fn localizations_are_etale() {
        let x = fixtures::polynomial(&["x"]);
        let v = etale_verdict(&loc(&x, "x"), 3).unwrap();
        assert_eq!(v.kind, MemberKind::Localization { inverts: "x".into() });
        assert!(v.is_etale());
        let k = fixtures::koszul();
        let v = etale_verdict(&loc(&k, "1 + x"), 2).unwrap();
        assert!(v.is_etale(), "{v:?}");
    }

    #[test]
    fn squaring_is_ramified() {
        let x = fixtures::polynomial(&["x"]);
        let sq = DgMorphism::from_images(x.clone(), x.clone(), &BTreeMap::from([("x".to_string(), "x^2".to_string())])).unwrap();
        let v = etale_verdict(&sq, 3).unwrap();
        assert_eq!(v.condition1, Condition1::Refuted);
        assert!(v.condition1_witness.unwrap().contains("2*x"));
    }

    #[test]
    fn standard_etale() {
        let x = fixtures::polynomial(&["x"]);
        let b = BaseRing::free(&["x", "t", "u"]);
        let rels = vec![b.parse("t^2 - x").unwrap(), b.parse("2*t*u - 1").unwrap()];
        let tgt = DgAlgebra::from_base(BaseRing::new(b.names().to_vec(), rels).unwrap());
        let m = DgMorphism::from_images(x, tgt, &BTreeMap::new()).unwrap();
        let v = etale_verdict(&m, 1).unwrap();
        assert!(matches!(v.kind, MemberKind::StandardEtale { .. }), "{v:?}");
        assert_eq!(v.condition1, Condition1::Certified, "{v:?}");
    }

    #[test]
    fn coverings() {
        let x = fixtures::polynomial(&["x"]);
        let c = covering_verdict(&x, &[loc(&x, "x"), loc(&x, "1 - x")], 3, 1, 5).unwrap();
        assert!(c.covering);
        assert_eq!(c.certificate.unwrap(), ["1", "1"]);
        let c = covering_verdict(&x, &[loc(&x, "x")], 3, 1, 5).unwrap();
        assert_eq!(c.condition3, Condition3::Refuted);
        let k = fixtures::koszul();
        assert_eq!(covering_verdict(&k, &[loc(&k, "x")], 2, 1, 5).unwrap().condition3, Condition3::Refuted);
        assert!(covering_verdict(&k, &[loc(&k, "1 + x")], 2, 1, 5).unwrap().covering);
    }

    #[test]
    fn shrinking() {
        let x = fixtures::polynomial(&["x"]);
        let b = x.base();
        let (h, g, _) = affine_shrink(&[b.parse("x").unwrap(), b.parse("1 - x").unwrap()], &x).unwrap();
        assert_eq!(b.display(&h), "1");
        assert_eq!(g.len(), 2);
        assert!(affine_shrink(&[b.parse("x").unwrap()], &x).is_none());
        let a = fixtures::algebra(&["x"], &[("e", -1, "x - 1")]);
        let s = shrink_report(&[b.parse("x").unwrap()], &a).unwrap();
        assert_eq!(s.h, "x");
    }
}
