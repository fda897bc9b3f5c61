//! Path objects by killing cocycles, and Brown factorizations.

use serde::Serialize;
use serde_json::{json, Value};

use super::fibration::{recognize_fibration, AdjoinedGenerator, FibrationWitness};
use super::qiso::{certify_quasi_iso, QisoVerdict};
use crate::dgalg::algebra::Generator;
use crate::dgalg::{pushout, tensor, DgAlgebra, DgMorphism, GradedElement, NameAllocator};
use crate::error::{Error, Result};
use crate::exactalg::module::{self, Column, Lifter};
use crate::exactalg::Polynomial;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stage {
    pub degree: i32,
    pub added: Vec<AdjoinedGenerator>,
}

/// `S → P → T` with `S → P` a fibration and `P → T` a quasi-isomorphism.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub algebra: DgAlgebra,
    pub fibration: DgMorphism,
    pub weak_equivalence: DgMorphism,
    /// Right inverse of the weak equivalence, when one is built.
    pub section: Option<DgMorphism>,
    pub fibration_witness: FibrationWitness,
    pub verdict: QisoVerdict,
    pub stages: Vec<Stage>,
    pub depth: i32,
}

impl Factorization {
    pub fn composite(&self) -> Result<DgMorphism> {
        self.fibration.then(&self.weak_equivalence)
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "depth": self.depth,
            "truncated": true,
            "source": self.fibration.source.to_json_value(),
            "target": self.weak_equivalence.target.to_json_value(),
            "algebra": self.algebra.to_json_value(),
            "fibration": {
                "role": "fibration",
                "images": self.fibration.image_strings(),
                "witness": self.fibration_witness,
            },
            "weak_equivalence": {
                "role": "weak_equivalence",
                "images": self.weak_equivalence.image_strings(),
                "verdict": self.verdict,
            },
            "section": self.section.as_ref().map(|s| s.image_strings()),
            "stages": self.stages,
        })
    }
}

/// Coefficient-wise remap of a column from the base of `A` into the base
/// of `P` along the first tensor copy.
fn lift_column(c: &Column, copy: &[usize], n: usize) -> Column {
    c.iter().map(|(&i, p)| (i, p.remap(copy, n))).filter(|(_, p)| !p.is_zero()).collect()
}

struct PathState<'a> {
    a: &'a DgAlgebra,
    p: DgAlgebra,
    proj: DgMorphism,
    /// Index in `P⁰` of the first copy of each variable of `A⁰`.
    copy: Vec<usize>,
    /// Generators of the kernel of `P⁰ → A⁰`.
    kernel: Vec<Polynomial>,
    names: NameAllocator,
    counter: usize,
}

impl PathState<'_> {
    /// Adjoins generators of degree `k - 1` killing the pairs `(z, a)` with
    /// `δz = 0` and `p(z) = δa`.
    fn stage(&mut self, k: i32) -> Result<Stage> {
        let (a, p) = (self.a, &self.p);
        let base = p.base();
        let n = base.nvars();
        let bp = p.graded_basis(k);
        let bp1 = p.graded_basis(k + 1);
        let ba = a.graded_basis(k);
        let bam = a.graded_basis(k - 1);
        let (nz, na) = (bp1.len(), ba.len());

        let mut cols: Vec<Column> = Vec::new();
        for m in &bp {
            let mut c = p.to_column(&p.delta_mono(m), &bp1)?;
            let img = a.to_column(&self.proj.apply(&p.monomial(m, &base.one())), &ba)?;
            c.extend(lift_column(&img, &self.copy, n).into_iter().map(|(i, q)| (nz + i, q)));
            cols.push(c);
        }
        for m in &bam {
            let d = a.neg(&a.delta_mono(m));
            let img = a.to_column(&d, &ba)?;
            cols.push(lift_column(&img, &self.copy, n).into_iter().map(|(i, q)| (nz + i, q)).collect());
        }
        for r in 0..na {
            for g in &self.kernel {
                cols.push(Column::from([(nz + r, g.clone())]));
            }
        }
        let pair_rank = bp.len() + bam.len();
        let pairs: Vec<Column> = module::syzygies(base, nz + na, &cols)?
            .into_iter()
            .map(|s| s.into_iter().filter(|(i, _)| *i < pair_rank).collect::<Column>())
            .collect();

        let mut span: Vec<Column> = Vec::new();
        for r in 0..bam.len() {
            for g in &self.kernel {
                span.push(Column::from([(bp.len() + r, g.clone())]));
            }
        }
        let mut kept = Vec::new();
        for pair in pairs {
            if module::col_is_zero(base, &pair) || Lifter::new(base, pair_rank, &span).contains(&pair) {
                continue;
            }
            span.push(pair.clone());
            kept.push(pair);
        }

        let mut gens: Vec<Generator> = p.generators().to_vec();
        let mut images: Vec<GradedElement> = self.proj.gen_images.clone();
        let mut added = Vec::new();
        for pair in &kept {
            let zc: Column = pair.iter().filter(|(i, _)| **i < bp.len()).map(|(&i, q)| (i, q.clone())).collect();
            let ac: Column = pair
                .iter()
                .filter(|(i, _)| **i >= bp.len())
                .map(|(&i, q)| (i - bp.len(), self.proj.apply_base(q)))
                .collect();
            let z = p.from_column(&zc, &bp, k);
            let img = a.from_column(&ac, &bam, k - 1);
            self.counter += 1;
            let name = self.names.fresh(&format!("u{}", self.counter));
            added.push(AdjoinedGenerator { name: name.clone(), degree: k - 1, differential: p.display(&z) });
            gens.push(Generator { name, degree: k - 1, differential: z });
            images.push(img);
        }
        let next = DgAlgebra::new(base.clone(), gens)?;
        self.proj = DgMorphism::new(next.clone(), a.clone(), self.proj.base_images.clone(), images)?;
        self.p = next;
        Ok(Stage { degree: k, added })
    }
}

/// Factors the multiplication `A ⊗ A → A` as `A ⊗ A → P → A`, killing
/// cocycles in degrees `0, -1, …, -depth`.
pub fn path_object(a: &DgAlgebra, depth: i32) -> Result<Factorization> {
    if depth < 1 {
        return Err(Error::Context("depth must be at least 1".into()));
    }
    let t = tensor(a, a)?;
    let aa = t.algebra.clone();
    let mult = t.induced(&DgMorphism::identity(a), &DgMorphism::identity(a))?;
    let nv = a.base().nvars();
    let var_index = |p: &Polynomial| p.variables_used()[0];
    let copy: Vec<usize> = (0..nv).map(|i| var_index(&t.to_left.base_images[i])).collect();
    let second: Vec<usize> = (0..nv).map(|i| var_index(&t.to_right.base_images[i])).collect();
    let n = aa.base().nvars();
    let kernel: Vec<Polynomial> =
        (0..nv).map(|i| Polynomial::var(n, copy[i]).sub(&Polynomial::var(n, second[i]))).collect();

    let mut stages = Vec::new();
    let mut state = PathState {
        a,
        p: aa.clone(),
        proj: mult,
        copy,
        kernel,
        names: NameAllocator::new(&aa.all_names()),
        counter: 0,
    };
    if !a.is_zero_algebra() {
        for d in 0..=depth {
            stages.push(state.stage(-d)?);
        }
    }
    let p = state.p.clone();
    let fibration = DgMorphism::new(
        aa.clone(),
        p.clone(),
        (0..n).map(|i| Polynomial::var(n, i)).collect(),
        (0..aa.ngens()).map(|i| p.gen(i)).collect(),
    )?;
    finish(p, fibration, state.proj, None, stages, depth)
}

fn finish(
    algebra: DgAlgebra,
    fibration: DgMorphism,
    weak_equivalence: DgMorphism,
    section: Option<DgMorphism>,
    stages: Vec<Stage>,
    depth: i32,
) -> Result<Factorization> {
    let rec = recognize_fibration(&fibration);
    let fibration_witness = rec.witness.ok_or_else(|| {
        Error::Invariant(format!("fibration leg not recognized: {}", rec.reason.unwrap_or_default()))
    })?;
    let verdict = certify_quasi_iso(&weak_equivalence, depth)?;
    Ok(Factorization { algebra, fibration, weak_equivalence, section, fibration_witness, verdict, stages, depth })
}

/// Factors `φ: B → A` as `B → P′ → A` with `P′ = A ⊗_B P_B`, where `P_B`
/// is the path object of `B` and `B` acts through its second copy.
pub fn brown_factorize(phi: &DgMorphism, depth: i32) -> Result<Factorization> {
    let b = &phi.source;
    let pb = path_object(b, depth)?;
    let t = tensor(b, b)?;
    let first = t.to_left.then(&pb.fibration)?;
    let second = t.to_right.then(&pb.fibration)?;
    let po = pushout(phi, &second)?;
    let pp = po.algebra.clone();
    let fibration = first.then(&po.to_right)?;
    let back = pb.weak_equivalence.then(phi)?;
    let weak_equivalence = po.induced(&DgMorphism::identity(&phi.target), &back)?;
    let section = po.to_left.clone();
    finish(pp, fibration, weak_equivalence, Some(section), pb.stages, depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgalg::fixtures;

    #[test]
    fn path_of_polynomial_ring() {
        let x = fixtures::polynomial(&["x"]);
        let f = path_object(&x, 3).unwrap();
        assert_eq!(f.algebra.base().names(), ["x", "x_2"]);
        assert_eq!(f.algebra.ngens(), 1);
        let d = f.algebra.display(&f.algebra.generators()[0].differential);
        assert!(d == "x - x_2" || d == "-x + x_2", "{d}");
        assert!(f.verdict.is_certified(), "{:?}", f.verdict);
        assert!(f.stages[1..].iter().all(|s| s.added.is_empty()));
    }

    #[test]
    fn path_of_koszul_first_stage() {
        let k = fixtures::koszul();
        let f = path_object(&k, 2).unwrap();
        let first: Vec<&str> = f.stages[0].added.iter().map(|g| g.differential.as_str()).collect();
        assert_eq!(first.len(), 2, "{first:?}");
        assert!(f.verdict.is_certified(), "{:?}", f.verdict);
        let t = tensor(&k, &k).unwrap();
        let mult = t.induced(&DgMorphism::identity(&k), &DgMorphism::identity(&k)).unwrap();
        assert!(f.composite().unwrap().same_as(&mult));
    }

    #[test]
    fn zero_algebra() {
        let z = DgAlgebra::zero_algebra();
        let f = path_object(&z, 2).unwrap();
        assert!(f.algebra.is_zero_algebra());
    }

    #[test]
    fn brown_point() {
        let x = fixtures::polynomial(&["x"]);
        let pt = DgAlgebra::ground();
        let phi = DgMorphism::new(x.clone(), pt.clone(), vec![Polynomial::zero(0)], vec![]).unwrap();
        let f = brown_factorize(&phi, 3).unwrap();
        assert_eq!(f.algebra.base().names(), ["x"]);
        assert_eq!(f.algebra.display(&f.algebra.generators()[0].differential).replace('-', "").trim(), "x");
        assert!(f.composite().unwrap().same_as(&phi));
        let s = f.section.as_ref().unwrap().then(&f.weak_equivalence).unwrap();
        assert!(s.is_identity());
        assert!(f.verdict.is_certified());
    }
}
