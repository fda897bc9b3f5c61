//! Sparse multivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Exponent vector. Comparison through `Ord` is plain lexicographic on the
/// raw vector and only used for map storage; term orders go through
/// [`MonomialOrder`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    Degrevlex,
    Lex,
    Deglex,
}

/// Term order: a kind plus a variable priority permutation
/// (`perm[0]` is the most significant variable).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    pub perm: Vec<usize>,
}

impl MonomialOrder {
    pub fn degrevlex(nvars: usize) -> Self {
        MonomialOrder { kind: OrderKind::Degrevlex, perm: (0..nvars).collect() }
    }

    pub fn lex(nvars: usize) -> Self {
        MonomialOrder { kind: OrderKind::Lex, perm: (0..nvars).collect() }
    }

    pub fn with_kind(kind: OrderKind, nvars: usize) -> Self {
        MonomialOrder { kind, perm: (0..nvars).collect() }
    }

    pub fn nvars(&self) -> usize {
        self.perm.len()
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.kind {
            OrderKind::Lex => self.cmp_lex(a, b),
            OrderKind::Deglex => a.degree().cmp(&b.degree()).then_with(|| self.cmp_lex(a, b)),
            OrderKind::Degrevlex => a.degree().cmp(&b.degree()).then_with(|| {
                for &v in self.perm.iter().rev() {
                    match a.0[v].cmp(&b.0[v]) {
                        Ordering::Equal => continue,
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }),
        }
    }

    fn cmp_lex(&self, a: &Monomial, b: &Monomial) -> Ordering {
        for &v in &self.perm {
            match a.0[v].cmp(&b.0[v]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Polynomial::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Monomial::var(nvars, i), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Polynomial::zero(m.0.len());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Rational)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Constant value, if the polynomial is constant (zero included).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.0.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &Polynomial) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut r = self.clone();
        r.add_assign_ref(other);
        r
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), -c.clone());
        }
        r
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(a, b)| (a.mul(m), b * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let mut r = Polynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut r = Polynomial::one(self.nvars);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut r = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut m2 = m.clone();
                m2.0[i] -= 1;
                r.add_term(m2, c * rat(e as i64));
            }
        }
        r
    }

    /// Substitute `images[i]` for variable `i`. All images must share one arity.
    pub fn substitute(&self, images: &[Polynomial], target_nvars: usize) -> Polynomial {
        debug_assert_eq!(images.len(), self.nvars);
        let mut out = Polynomial::zero(target_nvars);
        let mut powers: Vec<Vec<Polynomial>> = vec![Vec::new(); self.nvars];
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target_nvars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() < e as usize {
                    let next = match cache.last() {
                        None => images[i].clone(),
                        Some(p) => p.mul(&images[i]),
                    };
                    cache.push(next);
                }
                t = t.mul(&cache[e as usize - 1]);
            }
            out.add_assign_ref(&t);
        }
        out
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Evaluate the variables with `Some` value, keep the others symbolic.
    pub fn partial_evaluate(&self, values: &[Option<Rational>]) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            let mut rest = m.clone();
            for (i, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    for _ in 0..m.0[i] {
                        t *= v;
                    }
                    rest.0[i] = 0;
                }
            }
            out.add_term(rest, t);
        }
        out
    }

    /// Embed into a ring with more variables: old variable `i` becomes `map[i]`.
    pub fn remap(&self, map: &[usize], target_nvars: usize) -> Polynomial {
        let mut out = Polynomial::zero(target_nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0; target_nvars];
            for (i, &k) in m.0.iter().enumerate() {
                e[map[i]] += k;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn leading_coeff(&self, order: &MonomialOrder) -> Option<Rational> {
        self.leading_term(order).map(|(_, c)| c.clone())
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self, order: &MonomialOrder) -> Polynomial {
        match self.leading_coeff(order) {
            None => self.clone(),
            Some(c) => self.scale(&(Rational::one() / c)),
        }
    }

    /// Rational content: gcd of numerators over lcm of denominators, signed
    /// like the leading coefficient.
    pub fn content(&self, order: &MonomialOrder) -> Rational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Rational::one();
        }
        let mut r = Rational::new(num, den);
        if let Some(lc) = self.leading_coeff(order) {
            if lc.is_negative() {
                r = -r;
            }
        }
        r
    }

    pub fn primitive(&self, order: &MonomialOrder) -> Polynomial {
        let c = self.content(order);
        self.scale(&(Rational::one() / c))
    }

    pub fn variables_used(&self) -> Vec<usize> {
        let mut used = vec![false; self.nvars];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        used.iter().enumerate().filter(|(_, &u)| u).map(|(i, _)| i).collect()
    }

    /// Canonical text form under `order`, highest term first.
    pub fn display(&self, names: &[String], order: &MonomialOrder) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut ts: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        ts.sort_by(|a, b| order.cmp(b.0, a.0));
        let mut out = String::new();
        for (k, (m, c)) in ts.into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = display_monomial(m, names);
            if mono.is_empty() {
                out.push_str(&fmt_rational(&a));
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                let _ = write!(out, "{}*{}", fmt_rational(&a), mono);
            }
        }
        out
    }
}

pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn display_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{}", names[i], e)),
        }
    }
    parts.join("*")
}
