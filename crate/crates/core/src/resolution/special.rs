//! Checks that a resolution is special: free acyclic extensions over the
//! latching objects, the simplicial identities, and surjectivity onto the
//! matching objects on sampled fibers.

use std::collections::BTreeSet;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::build::Resolution;
use super::limits::{latching_object, matching_object, pull_point, source_basis, FiberContext, FiberDim};
use super::simplicial::{IdentityFailure, SimplicialDgAlgebra};
use crate::dgalg::GenMono;
use crate::error::Result;
use crate::exactalg::{poly::fmt_rational, Rational};
use crate::sampling;

/// Monomials examined per fiber before a check is reported inconclusive.
pub const FIBER_CAP: usize = 400_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberCheck {
    pub point: Vec<String>,
    pub dims: Vec<FiberDim>,
    pub surjective: bool,
    pub inconclusive: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelReport {
    pub level: usize,
    pub structural: Vec<String>,
    pub identities: Vec<IdentityFailure>,
    pub fibers: Vec<FiberCheck>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpecialReport {
    pub depth: i32,
    pub degree_bound: i32,
    /// Shape problems: counts, endpoints, dg-morphism checks.
    pub shape: Vec<String>,
    pub levels: Vec<LevelReport>,
    /// Samples at which the fiber of `H⁰` is the zero ring.
    pub h0_flags: Vec<String>,
    pub pass: bool,
    pub inconclusive: bool,
}

fn show(p: &[Rational]) -> Vec<String> {
    p.iter().map(fmt_rational).collect()
}

/// (a): `L_n → A_n` adjoins pairs `ē → f̄` with `δē = f̄`, and the
/// degenerate part is closed under `δ`.
fn structural(r: &Resolution, s: &SimplicialDgAlgebra, n: usize) -> Vec<String> {
    let mut out = Vec::new();
    let a = &s.levels[n];
    let own = r.level(n);
    if a.base().names() != own.base().names() || a.ngens() != own.ngens() {
        out.push(format!("level {n} does not match the decomposition"));
        return out;
    }
    if let Err(e) = latching_object(s, n) {
        out.push(format!("latching object: {e}"));
    }
    let partners: BTreeSet<String> = r.items[n].iter().filter(|it| it.name.starts_with('F')).map(|it| it.name.clone()).collect();
    for (g, gen) in a.generators().iter().enumerate() {
        if r.is_degenerate_gen(n, g) || !gen.name.starts_with('E') {
            if !r.is_degenerate_gen(n, g) && !gen.differential.is_zero() {
                out.push(format!("δ{} should vanish", gen.name));
            }
            continue;
        }
        let f = format!("F{}", &gen.name[1..]);
        let d = &gen.differential;
        let ok = match a.gen_index(&f) {
            Some(j) => *d == a.gen(j).with_degree(d.degree),
            None => match a.base().index_of(&f) {
                Some(v) => {
                    d.terms.len() == 1
                        && d.coeff(&GenMono::one()).is_some_and(|p| *p == crate::exactalg::Polynomial::var(a.base().nvars(), v))
                }
                None => false,
            },
        };
        if !ok || !partners.contains(&f) {
            out.push(format!("δ{} is not its partner {f}", gen.name));
        }
    }
    out
}

trait WithDegree {
    fn with_degree(self, d: i32) -> Self;
}

impl WithDegree for crate::dgalg::GradedElement {
    fn with_degree(mut self, d: i32) -> Self {
        self.degree = d;
        self
    }
}

/// Points `q ∘ d_i` on the base of `A_n`, for `q` on `A_{n-1}` extending
/// each sample by seeded and by zero values of the new variables.
pub fn fiber_points(r: &Resolution, s: &SimplicialDgAlgebra, n: usize, samples: &[Vec<Rational>], seed: u64) -> BTreeSet<Vec<Rational>> {
    let lower = &s.levels[n - 1];
    let n0 = r.input.base().nvars();
    let extra = lower.base().nvars() - n0;
    let mut points: BTreeSet<Vec<Rational>> = BTreeSet::new();
    let mut g = sampling::rng(seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    for p in samples {
        let random = sampling::small_rationals(&mut g, extra);
        for tail in [random, vec![Rational::zero(); extra]] {
            let q: Vec<Rational> = p.iter().cloned().chain(tail).collect();
            for f in &s.faces[n] {
                points.insert(pull_point(f, &q));
            }
        }
    }
    points
}

/// (c) at level `n`.
fn fibers(r: &Resolution, s: &SimplicialDgAlgebra, n: usize, samples: &[Vec<Rational>], depth: i32, seed: u64) -> Result<Vec<FiberCheck>> {
    let m = matching_object(s, n)?;
    let points = fiber_points(r, s, n, samples, seed);
    let top = depth.min(r.degree_bound);
    let bases: Vec<_> = (1..=top).map(|k| source_basis(&s.levels[n], -k)).collect();
    points
        .into_par_iter()
        .map(|pt| {
            let ctx = FiberContext::new(&m, s, &pt)?;
            let mut dims = Vec::new();
            let mut inconclusive = false;
            for k in 1..=top {
                let (d, capped) = ctx.fiber(-k, &bases[(k - 1) as usize], FIBER_CAP)?;
                inconclusive |= capped && d.image < d.limit;
                dims.push(d);
            }
            let surjective = dims.iter().all(|d| d.image == d.limit);
            Ok(FiberCheck { point: show(&pt), dims, surjective, inconclusive })
        })
        .collect()
}

/// Runs (a)–(c) on `s` against the decomposition recorded in `r`.
pub fn verify_special(r: &Resolution, s: &SimplicialDgAlgebra, samples: &[Vec<Rational>], depth: i32, seed: u64) -> Result<SpecialReport> {
    let shape = s.check_shape();
    let mut identities = s.check_identities().unwrap_or_default();
    identities.extend(r.check_block_pattern(s)?);
    let levels: Vec<LevelReport> = (0..s.levels.len())
        .into_par_iter()
        .map(|n| {
            let structural = if n == 0 { vec![] } else { structural(r, s, n) };
            let ids: Vec<IdentityFailure> = identities.iter().filter(|f| f.level == n).cloned().collect();
            let fibers = if n == 0 || !shape.is_empty() { vec![] } else { fibers(r, s, n, samples, depth, seed)? };
            let pass = structural.is_empty() && ids.is_empty() && fibers.iter().all(|f| f.surjective);
            Ok(LevelReport { level: n, structural, identities: ids, fibers, pass })
        })
        .collect::<Result<_>>()?;
    let h0_flags = samples
        .iter()
        .filter(|p| {
            r.input.differential_matrix(-1).iter().flat_map(|c| c.values()).any(|q| !q.evaluate(p).is_zero())
        })
        .map(|p| format!("H⁰ fiber is zero at ({})", show(p).join(", ")))
        .collect();
    let inconclusive = levels.iter().flat_map(|l| &l.fibers).any(|f| f.inconclusive);
    let pass = shape.is_empty() && levels.iter().all(|l| l.pass);
    Ok(SpecialReport { depth, degree_bound: r.degree_bound, shape, levels, h0_flags, pass, inconclusive })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgalg::fixtures;
    use crate::exactalg::{rat, ratio};
    use crate::resolution::resolve;

    fn samples() -> Vec<Vec<Rational>> {
        vec![vec![rat(0)], vec![rat(1)], vec![rat(2)], vec![ratio(1, 2)], vec![rat(-1)]]
    }

    #[test]
    fn koszul_is_special() {
        let r = resolve(&fixtures::koszul(), 2).unwrap();
        let rep = verify_special(&r, &r.simplicial, &samples(), 3, 1).unwrap();
        assert!(rep.pass, "{rep:#?}");
        assert_eq!(rep.h0_flags.len(), 4);
        assert!(rep.levels[1].fibers.iter().any(|f| f.dims[0].present.len() == 2));
    }

    #[test]
    fn polynomial_ring_is_special() {
        let x = fixtures::polynomial(&["x"]);
        let r = resolve(&x, 3).unwrap();
        assert!(verify_special(&r, &r.simplicial, &samples(), 3, 1).unwrap().pass);
    }

    #[test]
    fn corrupted_face_is_reported() {
        let r = resolve(&fixtures::koszul(), 1).unwrap();
        let mut s = r.simplicial.clone();
        let f = &s.faces[1][1];
        let a1 = f.source.clone();
        let k = f.target.clone();
        let mut images = f.gen_images.clone();
        let e1 = a1.gen_index("E1_1_1_1").unwrap();
        images[e1] = k.gen(0);
        s.faces[1][1] = crate::dgalg::DgMorphism::unchecked(a1, k, f.base_images.clone(), images).unwrap();
        let rep = verify_special(&r, &s, &samples(), 3, 1).unwrap();
        assert!(!rep.pass);
        assert!(!rep.levels[1].identities.is_empty());
    }

    #[test]
    fn twin_is_special() {
        let t = std::time::Instant::now();
        let r = resolve(&fixtures::twin_koszul(), 2).unwrap();
        let rep = verify_special(&r, &r.simplicial, &samples(), 3, 1).unwrap();
        eprintln!("twin verify {:?}", t.elapsed());
        assert!(rep.pass, "{:#?}", rep.levels.iter().map(|l| (&l.structural, &l.identities)).collect::<Vec<_>>());
    }
}
