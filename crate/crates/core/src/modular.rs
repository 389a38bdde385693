//! Arithmetic modulo word-sized primes, incremental echelon forms over F_p,
//! and rational reconstruction of reduced echelon forms.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::Rational;

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Inverse modulo a prime; `None` for zero.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The `count` largest primes below 2^62, after skipping the first `skip`.
/// The sequence is fixed, which keeps every modular computation reproducible.
pub fn primes(skip: usize, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = (1u64 << 62) - 1;
    let mut seen = 0;
    while out.len() < count {
        if is_prime(n) {
            if seen >= skip {
                out.push(n);
            }
            seen += 1;
        }
        n -= 2;
    }
    out
}

pub fn big_mod(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits")
}

/// Image of a rational in F_p, or `None` when the denominator vanishes.
pub fn rat_mod(r: &Rational, p: u64) -> Option<u64> {
    let n = big_mod(r.numer(), p);
    let d = big_mod(r.denom(), p);
    inv_mod(d, p).map(|di| mul_mod(n, di, p))
}

/// Echelon basis over F_p maintained under row insertion. Every stored row is
/// normalized to 1 at its leading column, so the set of leading columns is the
/// pivot set of the reduced echelon form of everything inserted so far.
#[derive(Clone, Debug)]
pub struct ModEchelon {
    pub p: u64,
    pub ncols: usize,
    rows: Vec<Vec<u64>>,
    /// `slot[c]` is the index in `rows` of the row led by column `c`.
    slot: Vec<Option<usize>>,
}

impl ModEchelon {
    pub fn new(p: u64, ncols: usize) -> Self {
        ModEchelon { p, ncols, rows: Vec::new(), slot: vec![None; ncols] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    /// Sorted pivot columns.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.slot[c].is_some()).collect()
    }

    /// Number of pivots among the first `c` columns; this is the rank of the
    /// column prefix of the inserted matrix.
    pub fn prefix_rank(&self, c: usize) -> usize {
        self.slot[..c].iter().filter(|s| s.is_some()).count()
    }

    /// Reduces `v` against the basis and returns it.
    pub fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        let p = self.p;
        for c in 0..self.ncols {
            if v[c] == 0 {
                continue;
            }
            if let Some(i) = self.slot[c] {
                let f = v[c];
                let row = &self.rows[i];
                for j in c..self.ncols {
                    if row[j] != 0 {
                        v[j] = sub_mod(v[j], mul_mod(f, row[j], p), p);
                    }
                }
            }
        }
        v
    }

    /// Inserts a row; returns true if the rank grew.
    pub fn insert(&mut self, v: Vec<u64>) -> bool {
        let p = self.p;
        let mut v = v;
        for c in 0..self.ncols {
            if v[c] == 0 {
                continue;
            }
            match self.slot[c] {
                Some(i) => {
                    let f = v[c];
                    let row = &self.rows[i];
                    for j in c..self.ncols {
                        if row[j] != 0 {
                            v[j] = sub_mod(v[j], mul_mod(f, row[j], p), p);
                        }
                    }
                }
                None => {
                    let inv = inv_mod(v[c], p).unwrap();
                    for x in v[c..].iter_mut() {
                        *x = mul_mod(*x, inv, p);
                    }
                    self.slot[c] = Some(self.rows.len());
                    self.rows.push(v);
                    return true;
                }
            }
        }
        false
    }

    /// Fully reduced echelon rows, ordered by pivot column.
    pub fn rref(&self) -> (Vec<usize>, Vec<Vec<u64>>) {
        let p = self.p;
        let pivots = self.pivots();
        let mut rows: Vec<Vec<u64>> = pivots.iter().map(|&c| self.rows[self.slot[c].unwrap()].clone()).collect();
        for i in (0..rows.len()).rev() {
            let pc = pivots[i];
            let (above, rest) = rows.split_at_mut(i);
            let pr = &rest[0];
            for row in above.iter_mut() {
                let f = row[pc];
                if f == 0 {
                    continue;
                }
                for j in pc..self.ncols {
                    if pr[j] != 0 {
                        row[j] = sub_mod(row[j], mul_mod(f, pr[j], p), p);
                    }
                }
            }
        }
        (pivots, rows)
    }
}

/// Smallest-denominator rational congruent to `a` modulo `m` with numerator
/// and denominator bounded by sqrt(m/2); `None` if there is none.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let (qt, r2) = r0.div_rem(&r1);
        let t2 = &t0 - &qt * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let r = Rational::new(r1, t1.clone());
    // the reconstruction is only valid if the denominator is coprime to m
    if !t1.gcd(m).is_one() {
        return None;
    }
    Some(r)
}

/// Chinese remaindering of one residue into an accumulated `(value, modulus)`.
pub fn crt_push(acc: &mut (BigInt, BigInt), r: u64, p: u64) {
    let (a, m) = acc;
    if m.is_one() {
        *a = BigInt::from(r);
        *m = BigInt::from(p);
        return;
    }
    let a_mod_p = big_mod(a, p);
    let m_mod_p = big_mod(m, p);
    let t = mul_mod(sub_mod(r, a_mod_p, p), inv_mod(m_mod_p, p).unwrap(), p);
    *a = &*a + &*m * BigInt::from(t);
    *m = &*m * BigInt::from(p);
}

/// Reconstructs a rational matrix from its images modulo several primes,
/// given as row-major residue tables of identical shape.
pub fn reconstruct_table(images: &[(u64, Vec<Vec<u64>>)]) -> Option<Vec<Vec<Rational>>> {
    let (_, first) = images.first()?;
    let mut out = Vec::with_capacity(first.len());
    for i in 0..first.len() {
        let mut row = Vec::with_capacity(first[i].len());
        for j in 0..first[i].len() {
            let mut acc = (BigInt::zero(), BigInt::one());
            for (p, t) in images {
                crt_push(&mut acc, t[i][j], *p);
            }
            row.push(rational_reconstruct(&acc.0, &acc.1)?);
        }
        out.push(row);
    }
    Some(out)
}

pub fn biguint_mod(n: &BigUint, p: u64) -> u64 {
    (n % BigUint::from(p)).to_u64().unwrap()
}
