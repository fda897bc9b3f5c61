//! Seeded rational sample points.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactalg::{ratio, BaseRing, Polynomial, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Numerator in `-7..=7`, denominator in `1..=7`.
pub fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.gen_range(-7..=7), rng.gen_range(1..=7))
}

pub fn small_rationals(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| small_rational(rng)).collect()
}

/// `f·t + c` with `t` linear and absent from `f`, `c` a nonzero constant.
fn solve_for(r: &Polynomial, t: usize) -> Option<(Polynomial, Rational)> {
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
    (!c.is_zero()).then_some((f, c))
}

/// Up to `count` points of `Spec` of `base`: random values, with variables
/// inverting a function set to the inverse of its value. Deterministic in
/// `seed`.
pub fn sample_points(base: &BaseRing, seed: u64, count: usize) -> Vec<Vec<Rational>> {
    let mut g = rng(seed);
    let n = base.nvars();
    let rels = base.relations();
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for _ in 0..count * 50 {
        if out.len() == count {
            break;
        }
        let mut p = small_rationals(&mut g, n);
        for r in rels {
            if let Some((t, (f, c))) = r.variables_used().into_iter().rev().find_map(|t| solve_for(r, t).map(|s| (t, s))) {
                let v = f.evaluate(&p);
                if !v.is_zero() {
                    p[t] = -c / v;
                }
            }
        }
        if rels.iter().all(|r| r.evaluate(&p).is_zero()) && !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// The origin when it lies on `Spec` of `base`, then seeded points up to
/// `count` in all.
pub fn sample_points_with_origin(base: &BaseRing, seed: u64, count: usize) -> Vec<Vec<Rational>> {
    let origin = vec![Rational::zero(); base.nvars()];
    let mut out = Vec::new();
    if count > 0 && base.relations().iter().all(|r| r.evaluate(&origin).is_zero()) {
        out.push(origin);
    }
    for p in sample_points(base, seed, count) {
        if out.len() == count {
            break;
        }
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn localization_points() {
        let b = BaseRing::free(&["x", "t"]);
        let loc = BaseRing::new(b.names().to_vec(), vec![b.parse("x*t - 1").unwrap()]).unwrap();
        let pts = sample_points(&loc, 7, 5);
        assert_eq!(pts.len(), 5);
        for p in &pts {
            assert_eq!(&p[0] * &p[1], ratio(1, 1));
        }
        assert_eq!(pts, sample_points(&loc, 7, 5));
        let with = sample_points_with_origin(&loc, 7, 5);
        assert_eq!(with.len(), 5);
        assert!(with.iter().all(|p| !p[0].is_zero()));
        let free = BaseRing::free(&["x"]);
        assert_eq!(sample_points_with_origin(&free, 7, 3)[0], vec![Rational::zero()]);
    }
}
