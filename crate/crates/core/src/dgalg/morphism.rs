//! Morphisms of dg algebras, given on base variables and generators.

use std::collections::BTreeMap;

use super::algebra::{DgAlgebra, GenMono, GradedElement};
use crate::error::{Error, Result};
use crate::exactalg::Polynomial;

#[derive(Clone, Debug, PartialEq)]
pub struct DgMorphism {
    pub source: DgAlgebra,
    pub target: DgAlgebra,
    /// Image of each source base variable, in the target base ring.
    pub base_images: Vec<Polynomial>,
    /// Image of each source generator.
    pub gen_images: Vec<GradedElement>,
}

impl DgMorphism {
    /// Checks arity, degrees, that relations map to zero and that δ commutes.
    pub fn new(
        source: DgAlgebra,
        target: DgAlgebra,
        base_images: Vec<Polynomial>,
        gen_images: Vec<GradedElement>,
    ) -> Result<Self> {
        let m = DgMorphism::unchecked(source, target, base_images, gen_images)?;
        m.check()?;
        Ok(m)
    }

    /// Shape checks only; δ-compatibility is not verified.
    pub fn unchecked(
        source: DgAlgebra,
        target: DgAlgebra,
        base_images: Vec<Polynomial>,
        gen_images: Vec<GradedElement>,
    ) -> Result<Self> {
        if base_images.len() != source.base().nvars() {
            return Err(Error::InvalidMorphism(format!(
                "{} base images given for {} variables",
                base_images.len(),
                source.base().nvars()
            )));
        }
        if gen_images.len() != source.ngens() {
            return Err(Error::InvalidMorphism(format!(
                "{} generator images given for {} generators",
                gen_images.len(),
                source.ngens()
            )));
        }
        let tb = target.base();
        let base_images: Vec<Polynomial> = base_images
            .iter()
            .map(|p| {
                if p.nvars() != tb.nvars() {
                    Err(Error::InvalidMorphism("base image has wrong arity".into()))
                } else {
                    Ok(tb.reduce(p))
                }
            })
            .collect::<Result<_>>()?;
        for (i, g) in gen_images.iter().enumerate() {
            if !g.is_zero() && g.degree != source.degree_of(i) {
                return Err(Error::InvalidMorphism(format!(
                    "image of {} has degree {}, expected {}",
                    source.generators()[i].name,
                    g.degree,
                    source.degree_of(i)
                )));
            }
        }
        let gen_images = gen_images
            .into_iter()
            .enumerate()
            .map(|(i, g)| {
                let mut g = target.add(&GradedElement::zero(source.degree_of(i)), &g);
                g.degree = source.degree_of(i);
                g
            })
            .collect();
        Ok(DgMorphism { source, target, base_images, gen_images })
    }

    pub fn check(&self) -> Result<()> {
        let tb = self.target.base();
        for r in self.source.base().relation_basis() {
            let img = r.substitute(&self.base_images, tb.nvars());
            if !tb.is_zero_mod(&img) {
                return Err(Error::InvalidMorphism(format!(
                    "relation {} does not map to zero",
                    self.source.base().display(r)
                )));
            }
        }
        for (i, g) in self.source.generators().iter().enumerate() {
            let lhs = self.apply(&g.differential);
            let rhs = self.target.delta(&self.gen_images[i]);
            if !self.target.sub(&lhs, &rhs).is_zero() {
                return Err(Error::InvalidMorphism(format!("map does not commute with δ on {}", g.name)));
            }
        }
        Ok(())
    }

    pub fn identity(a: &DgAlgebra) -> Self {
        let n = a.base().nvars();
        DgMorphism {
            source: a.clone(),
            target: a.clone(),
            base_images: (0..n).map(|i| Polynomial::var(n, i)).collect(),
            gen_images: (0..a.ngens()).map(|i| a.gen(i)).collect(),
        }
    }

    /// Parse images given by name; names absent from the map must exist in
    /// the target under the same name.
    pub fn from_images(source: DgAlgebra, target: DgAlgebra, images: &BTreeMap<String, String>) -> Result<Self> {
        let (b, g) = Self::parse_images(&source, &target, images)?;
        DgMorphism::new(source, target, b, g)
    }

    /// As `from_images`, without the δ-compatibility check.
    pub fn from_images_unchecked(source: DgAlgebra, target: DgAlgebra, images: &BTreeMap<String, String>) -> Result<Self> {
        let (b, g) = Self::parse_images(&source, &target, images)?;
        DgMorphism::unchecked(source, target, b, g)
    }

    fn parse_images(
        source: &DgAlgebra,
        target: &DgAlgebra,
        images: &BTreeMap<String, String>,
    ) -> Result<(Vec<Polynomial>, Vec<GradedElement>)> {
        let all = source.all_names();
        for k in images.keys() {
            if !all.contains(k) {
                return Err(Error::InvalidMorphism(format!("image given for unknown symbol {k}")));
            }
        }
        let lookup = |name: &str| -> Result<GradedElement> {
            match images.get(name) {
                Some(src) => target.parse_element(src),
                None => target.parse_element(name).map_err(|_| {
                    Error::InvalidMorphism(format!("no image for {name} and no symbol of that name in the target"))
                }),
            }
        };
        let mut base_images = Vec::new();
        for name in source.base().names() {
            let e = lookup(name)?;
            if !e.is_zero() && e.degree != 0 {
                return Err(Error::InvalidMorphism(format!("image of {name} must have degree 0")));
            }
            base_images.push(e.terms.get(&GenMono::one()).cloned().unwrap_or_else(|| target.base().zero()));
        }
        let mut gen_images = Vec::new();
        for g in source.generators() {
            gen_images.push(lookup(&g.name)?);
        }
        Ok((base_images, gen_images))
    }

    pub fn apply_base(&self, p: &Polynomial) -> Polynomial {
        self.target.base().reduce(&p.substitute(&self.base_images, self.target.base().nvars()))
    }

    pub fn apply(&self, a: &GradedElement) -> GradedElement {
        let t = &self.target;
        let mut out = GradedElement::zero(a.degree);
        let mut powers: BTreeMap<(usize, u32), GradedElement> = BTreeMap::new();
        for (m, p) in &a.terms {
            let mut img = t.scalar(&self.apply_base(p));
            for &(i, e) in &m.0 {
                let pw = powers.entry((i, e)).or_insert_with(|| t.pow(&self.gen_images[i], e)).clone();
                img = t.mul(&img, &pw);
            }
            out = t.add(&out, &img);
        }
        out.degree = a.degree;
        out
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &DgMorphism) -> Result<DgMorphism> {
        if self.target != other.source {
            return Err(Error::InvalidMorphism("composition of non-composable morphisms".into()));
        }
        Ok(DgMorphism {
            source: self.source.clone(),
            target: other.target.clone(),
            base_images: self.base_images.iter().map(|p| other.apply_base(p)).collect(),
            gen_images: self.gen_images.iter().map(|g| other.apply(g)).collect(),
        })
    }

    /// Agreement on every base variable and generator.
    pub fn same_as(&self, other: &DgMorphism) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.base_images.iter().zip(&other.base_images).all(|(a, b)| self.target.base().is_zero_mod(&a.sub(b)))
            && self.gen_images.iter().zip(&other.gen_images).all(|(a, b)| self.target.sub(a, b).is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.same_as(&DgMorphism::identity(&self.source))
    }

    /// Images by name, in canonical text form.
    pub fn image_strings(&self) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        let tb = self.target.base();
        for (n, p) in self.source.base().names().iter().zip(&self.base_images) {
            out.insert(n.clone(), tb.display(p));
        }
        for (g, e) in self.source.generators().iter().zip(&self.gen_images) {
            out.insert(g.name.clone(), self.target.display(e));
        }
        out
    }
}
