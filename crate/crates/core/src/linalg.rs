//! Exact linear algebra over Q built on fraction-free elimination.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::scalar::{lcm_denominators, Rational};

/// Reduced row echelon form: `rows[i]` has a 1 in column `pivots[i]` and zeros
/// in every other pivot column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub ncols: usize,
    pub rows: Vec<Vec<Rational>>,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Kernel basis, one vector per free column `f` with a 1 at `f` and zeros
    /// at the other free columns.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = vec![Rational::zero(); self.ncols];
                v[f] = Rational::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = -row[f].clone();
                }
                v
            })
            .collect()
    }

    /// True iff `v` lies in the kernel of the original matrix.
    pub fn annihilates(&self, v: &[Rational]) -> bool {
        self.rows.iter().all(|row| dot(row, v).is_zero())
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// Clears denominators row by row.
pub fn integer_rows(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| {
            let l = Rational::from_integer(lcm_denominators(r));
            r.iter().map(|x| (x * &l).to_integer()).collect()
        })
        .collect()
}

/// Fraction-free row echelon form of an integer matrix. Returns the nonzero
/// echelon rows and their pivot columns (strictly increasing).
pub fn bareiss_echelon(mut a: Vec<Vec<BigInt>>, ncols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let (head, tail) = a.split_at_mut(r + 1);
        let prow = &head[r];
        let update = |row: &mut Vec<BigInt>| {
            if row[c].is_zero() {
                // (pivot * row - 0 * prow) / prev
                for x in row[c + 1..].iter_mut() {
                    if !x.is_zero() {
                        *x = &prow[c] * &*x / &prev;
                    }
                }
            } else {
                let f = row[c].clone();
                for j in c + 1..ncols {
                    row[j] = (&prow[c] * &row[j] - &f * &prow[j]) / &prev;
                }
                row[c] = BigInt::zero();
            }
        };
        if tail.len() * (ncols - c) > 4096 {
            tail.par_iter_mut().for_each(update);
        } else {
            tail.iter_mut().for_each(update);
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Exact reduced row echelon form.
pub fn rref(rows: &[Vec<Rational>], ncols: usize) -> Rref {
    let (ech, pivots) = bareiss_echelon(integer_rows(rows), ncols);
    let mut out: Vec<Vec<Rational>> = ech
        .into_iter()
        .zip(&pivots)
        .map(|(row, &p)| {
            let inv = Rational::from_integer(row[p].clone()).recip();
            row.into_iter().map(|x| Rational::from_integer(x) * &inv).collect()
        })
        .collect();
    for i in (0..out.len()).rev() {
        let p = pivots[i];
        let (above, rest) = out.split_at_mut(i);
        let pr = &rest[0];
        for row in above.iter_mut() {
            let f = row[p].clone();
            if f.is_zero() {
                continue;
            }
            for j in p..ncols {
                if !pr[j].is_zero() {
                    row[j] -= &f * &pr[j];
                }
            }
        }
    }
    Rref { ncols, rows: out, pivots }
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    bareiss_echelon(integer_rows(rows), ncols).1.len()
}

pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    rref(rows, ncols).kernel()
}

/// Some solution of `A x = b`, or `None` if the system is inconsistent.
pub fn solve(rows: &[Vec<Rational>], b: &[Rational], ncols: usize) -> Option<Vec<Rational>> {
    let aug: Vec<Vec<Rational>> = rows
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut v = r.clone();
            v.push(bi.clone());
            v
        })
        .collect();
    let red = rref(&aug, ncols + 1);
    if red.pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (row, &p) in red.rows.iter().zip(&red.pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}
