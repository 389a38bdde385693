use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Poly, RatFunc};
use crate::error::{Error, Result};
use crate::scalar::{serde_rational, Rational};

/// Power series known modulo `z^order`; exactly `order` coefficients are stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncSeries {
    coeffs: Vec<Rational>,
}

impl TruncSeries {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        TruncSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        TruncSeries { coeffs: vec![Rational::zero(); order] }
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = TruncSeries::zero(order);
        if order > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    pub fn from_poly(p: &Poly, order: usize) -> Self {
        TruncSeries { coeffs: (0..order).map(|i| p.coeff(i)).collect() }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn set_coeff(&mut self, i: usize, c: Rational) {
        self.coeffs[i] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> TruncSeries {
        TruncSeries { coeffs: self.coeffs[..order.min(self.order())].to_vec() }
    }

    pub fn to_poly(&self) -> Poly {
        Poly::new(self.coeffs.clone())
    }

    pub fn scale(&self, c: &Rational) -> TruncSeries {
        TruncSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn add(&self, other: &TruncSeries) -> TruncSeries {
        TruncSeries { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &TruncSeries) -> TruncSeries {
        TruncSeries { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        let n = self.order().min(other.order());
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs[..n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        TruncSeries { coeffs: out }
    }

    /// Product with a polynomial, keeping this series' order.
    pub fn mul_poly(&self, p: &Poly) -> TruncSeries {
        self.mul(&TruncSeries::from_poly(p, self.order()))
    }

    /// `s(z^q)` to the same order.
    pub fn substitute_power(&self, q: usize) -> TruncSeries {
        assert!(q >= 1);
        let n = self.order();
        let mut out = vec![Rational::zero(); n];
        for (j, c) in self.coeffs.iter().enumerate() {
            if j * q >= n {
                break;
            }
            out[j * q] = c.clone();
        }
        TruncSeries { coeffs: out }
    }

    /// Index of the first nonzero coefficient, or the order if there is none.
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.order())
    }

    /// Exact partial sum `sum_{n < order} c_n x^n`.
    pub fn partial_sum(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn pow(&self, e: u32) -> TruncSeries {
        let mut acc = TruncSeries::constant(Rational::one(), self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Expansion of `r` modulo `z^order`.
pub fn series_of_ratfunc(r: &RatFunc, order: usize) -> Result<TruncSeries> {
    let den = r.den();
    let d0 = den.coeff(0);
    if d0.is_zero() {
        return Err(Error::PoleAtOrigin);
    }
    let d0_inv = d0.recip();
    let dc = den.coeffs();
    let mut out: Vec<Rational> = Vec::with_capacity(order);
    for n in 0..order {
        let mut acc = r.num().coeff(n);
        for (i, d) in dc.iter().enumerate().skip(1).take(n) {
            if !d.is_zero() {
                acc -= d * &out[n - i];
            }
        }
        out.push(acc * &d0_inv);
    }
    Ok(TruncSeries { coeffs: out })
}

impl Serialize for TruncSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_rational::vec::serialize(&self.coeffs, s)
    }
}

impl<'de> Deserialize<'de> for TruncSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        serde_rational::vec::deserialize(d).map(TruncSeries::new)
    }
}
