//! Dense exact linear algebra over ℚ, for fibers and bounded searches.

use num_traits::{One, Zero};

use super::poly::Rational;

pub type Matrix = Vec<Vec<Rational>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Rational::zero(); cols]; rows]
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = Rational::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Basis of `{ v : m·v = 0 }`.
pub fn nullspace(m: &Matrix, cols: usize) -> Vec<Vec<Rational>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

/// Some `x` with `m·x = b`, if one exists.
pub fn solve(m: &Matrix, b: &[Rational], cols: usize) -> Option<Vec<Rational>> {
    let mut a: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut a);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = a[r][cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::rat;

    #[test]
    fn rank_and_kernel() {
        let m = vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]];
        assert_eq!(rank(&m), 1);
        let k = nullspace(&m, 2);
        assert_eq!(k, vec![vec![rat(-2), rat(1)]]);
        assert_eq!(solve(&m, &[rat(1), rat(2)], 2), Some(vec![rat(1), rat(0)]));
        assert_eq!(solve(&m, &[rat(1), rat(3)], 2), None);
    }
}
