//! Sparse polynomials in matrix variables `Y` and `z`, truncated in `z`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::scalar::Rational;

/// Map from `(nu, lambda)` to the coefficient of `Y^nu z^lambda`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MPoly {
    pub nvars: usize,
    terms: BTreeMap<(Vec<u32>, u32), Rational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(vec![0; nvars], 0, Rational::one())
    }

    pub fn monomial(nu: Vec<u32>, lambda: u32, c: Rational) -> Self {
        let mut p = MPoly::zero(nu.len());
        p.add_term(nu, lambda, c);
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, u32, &Rational)> {
        self.terms.iter().map(|((nu, l), c)| (nu, *l, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn add_term(&mut self, nu: Vec<u32>, lambda: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = (nu, lambda);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &MPoly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for ((nu, l), v) in &other.terms {
            self.add_term(nu.clone(), *l, v * c);
        }
    }

    /// Product keeping only terms with `z`-degree below `order`.
    pub fn mul_trunc(&self, other: &MPoly, order: u32) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for ((na, la), ca) in &self.terms {
            for ((nb, lb), cb) in &other.terms {
                if la + lb >= order {
                    continue;
                }
                let nu = na.iter().zip(nb).map(|(a, b)| a + b).collect();
                out.add_term(nu, la + lb, ca * cb);
            }
        }
        out
    }

    pub fn truncate(&self, order: u32) -> MPoly {
        MPoly { nvars: self.nvars, terms: self.terms.iter().filter(|((_, l), _)| *l < order).map(|(k, v)| (k.clone(), v.clone())).collect() }
    }

    pub fn max_y_exponent(&self) -> u32 {
        self.terms.keys().flat_map(|(nu, _)| nu.iter().copied()).max().unwrap_or(0)
    }

    pub fn max_z_degree(&self) -> u32 {
        self.terms.keys().map(|(_, l)| *l).max().unwrap_or(0)
    }

    pub fn eval(&self, y: &[Rational], x: &Rational) -> Rational {
        let dy = self.max_y_exponent() as usize;
        let ypow: Vec<Vec<Rational>> = y
            .iter()
            .map(|v| {
                let mut p = vec![Rational::one(); dy + 1];
                for i in 1..=dy {
                    p[i] = &p[i - 1] * v;
                }
                p
            })
            .collect();
        let mut xpow = vec![Rational::one(); self.max_z_degree() as usize + 1];
        for i in 1..xpow.len() {
            xpow[i] = &xpow[i - 1] * x;
        }
        let mut acc = Rational::zero();
        for ((nu, l), c) in &self.terms {
            let mut t = c * &xpow[*l as usize];
            for (e, &d) in nu.iter().enumerate() {
                if d > 0 {
                    t *= &ypow[e][d as usize];
                }
            }
            acc += t;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn truncated_square() {
        // (y + z)^2 mod z^2 = y^2 + 2yz
        let mut p = MPoly::monomial(vec![1], 0, int(1));
        p.add_term(vec![0], 1, int(1));
        let sq = p.mul_trunc(&p, 2);
        assert_eq!(sq.len(), 2);
        assert_eq!(sq.eval(&[int(3)], &int(5)), int(9 + 30));
        let mut back = sq.clone();
        back.add_scaled(&sq, &int(-1));
        assert!(back.is_zero());
    }
}
