//! Hilbert function of a family of series over Q(z) and transcendence degree
//! estimates from its growth.
//!
//! `phi(d)` is the Q(z)-dimension of the span of the monomials of degree at
//! most `d` in the series. It is read off from the rank of the module of
//! polynomial relations among those monomials: the Q-dimension `K(D)` of
//! relations with coefficient degree at most `D` grows like `r (D + 1)` where
//! `r` is that rank.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::lift::convolution_rows;
use crate::polyring::TruncSeries;
use crate::scalar::{rat_pow, Rational};

/// Equations dropped when checking that a rank no longer depends on the
/// truncation order.
const ORDER_PROBE: usize = 8;

/// Exponent vectors of total degree at most `d` in `m` variables, graded.
pub fn exponents_up_to(m: usize, d: u32) -> Vec<Vec<u32>> {
    fn fill(pos: usize, rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos == cur.len() {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for v in (0..=rest).rev() {
            cur[pos] = v;
            fill(pos + 1, rest - v, cur, out);
        }
        cur[pos] = 0;
    }
    let mut out = Vec::new();
    for s in 0..=d {
        let mut cur = vec![0u32; m];
        fill(0, s, &mut cur, &mut out);
    }
    out
}

fn monomial_family(f: &[TruncSeries], d: u32, order: usize) -> Vec<TruncSeries> {
    let powers: Vec<Vec<TruncSeries>> = f
        .iter()
        .map(|fi| {
            let fi = fi.truncate(order);
            let mut v = vec![TruncSeries::constant(Rational::one(), order)];
            for e in 1..=d as usize {
                v.push(v[e - 1].mul(&fi));
            }
            v
        })
        .collect();
    exponents_up_to(f.len(), d)
        .par_iter()
        .map(|lambda| {
            let mut acc = TruncSeries::constant(Rational::one(), order);
            for (i, &e) in lambda.iter().enumerate() {
                if e > 0 {
                    acc = acc.mul(&powers[i][e as usize]);
                }
            }
            acc
        })
        .collect()
}

/// `K(D)`, after checking that the rank does not change when the last
/// equations are dropped.
fn kernel_dim(family: &[TruncSeries], degree: usize, order: usize) -> Result<usize> {
    let ncols = family.len() * (degree + 1);
    let rows = convolution_rows(family, degree, order);
    let rank = linalg::rank(&rows, ncols);
    let probe = linalg::rank(&rows[..order.saturating_sub(ORDER_PROBE)], ncols);
    if rank != probe {
        return Err(Error::RankNotStabilized(format!(
            "rank {probe} at order {} vs {rank} at order {order}, coefficient degree {degree}; raise the order",
            order - ORDER_PROBE.min(order)
        )));
    }
    Ok(ncols - rank)
}

/// One value of the Hilbert function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiValue {
    pub d: u32,
    pub phi: usize,
    pub monomials: usize,
    pub relation_rank: usize,
    /// Least coefficient degree `D` with `K(D+1) - K(D) = K(D+2) - K(D+1)`.
    pub stabilized_degree: usize,
}

/// `phi(d)` with relation degree searched up to `max_degree`.
pub fn phi_function(f: &[TruncSeries], d: u32, max_degree: usize, order: usize) -> Result<PhiValue> {
    let have = f.iter().map(TruncSeries::order).min().unwrap_or(0);
    if have < order {
        return Err(Error::InsufficientOrder { needed: order, have });
    }
    let family = monomial_family(f, d, order);
    let mut k = vec![kernel_dim(&family, 0, order)?, kernel_dim(&family, 1, order)?];
    for deg in 0..=max_degree {
        k.push(kernel_dim(&family, deg + 2, order)?);
        let r1 = k[deg + 1] - k[deg];
        let r2 = k[deg + 2] - k[deg + 1];
        if r1 == r2 {
            return Ok(PhiValue { d, phi: family.len() - r1, monomials: family.len(), relation_rank: r1, stabilized_degree: deg });
        }
    }
    Err(Error::RankNotStabilized(format!("kernel increments {k:?} did not repeat for relation degree <= {max_degree}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiProfile {
    pub d_values: Vec<u32>,
    pub phi: Vec<usize>,
    /// Largest relation degree needed for stabilization over the profile.
    pub stabilized_degree: usize,
    pub order: usize,
}

pub fn phi_profile(f: &[TruncSeries], dmax: u32, max_degree: usize, order: usize) -> Result<PhiProfile> {
    let values: Vec<PhiValue> =
        (0..=dmax).into_par_iter().map(|d| phi_function(f, d, max_degree, order)).collect::<Result<_>>()?;
    Ok(PhiProfile {
        d_values: values.iter().map(|v| v.d).collect(),
        phi: values.iter().map(|v| v.phi).collect(),
        stabilized_degree: values.iter().map(|v| v.stabilized_degree).max().unwrap_or(0),
        order,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Confidence {
    Stable,
    Unstable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrdegEstimate {
    pub t_hat: usize,
    /// Order of the finite difference found to vanish (`t_hat + 1`).
    pub difference_order: usize,
    pub confidence: Confidence,
}

fn differences(v: &[i64]) -> Vec<i64> {
    v.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Smallest `t` whose `(t+1)`-th finite difference vanishes on the last two
/// entries of the profile.
pub fn estimate_trdeg(profile: &PhiProfile) -> TrdegEstimate {
    let mut diff: Vec<i64> = profile.phi.iter().map(|&p| p as i64).collect();
    let mut t = 0usize;
    loop {
        diff = differences(&diff);
        if diff.len() < 2 {
            return TrdegEstimate { t_hat: t, difference_order: t + 1, confidence: Confidence::Unstable };
        }
        if diff[diff.len() - 2..].iter().all(|&x| x == 0) {
            return TrdegEstimate { t_hat: t, difference_order: t + 1, confidence: Confidence::Stable };
        }
        t += 1;
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub t: usize,
    /// `(d, phi(d), binom(d + t, t), phi(d) >= binom(d + t, t))`.
    pub rows: Vec<(u32, usize, String, bool)>,
    pub lower_bound_holds: bool,
    /// Least `gamma` with `phi(d) <= gamma d^t` for every `d >= 1`.
    #[serde(with = "crate::scalar::serde_rational")]
    pub gamma2: Rational,
}

pub fn bounds_check(profile: &PhiProfile, t: usize) -> BoundsReport {
    let mut rows = Vec::new();
    let mut gamma2 = Rational::zero();
    for (&d, &phi) in profile.d_values.iter().zip(&profile.phi) {
        let lower = binomial(d as u64 + t as u64, t as u64);
        rows.push((d, phi, lower.to_string(), BigInt::from(phi) >= lower));
        if d >= 1 {
            let g = Rational::from_integer(phi.into()) / rat_pow(&Rational::from_integer(d.into()), t as u64);
            if g > gamma2 {
                gamma2 = g;
            }
        }
    }
    let lower_bound_holds = rows.iter().all(|r| r.3);
    BoundsReport { t, rows, lower_bound_holds, gamma2 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn g(order: usize) -> TruncSeries {
        let mut c = vec![Rational::zero(); order];
        let mut p = 1;
        while p < order {
            c[p] = int(1);
            p *= 2;
        }
        TruncSeries::new(c)
    }

    fn one(order: usize) -> TruncSeries {
        TruncSeries::constant(int(1), order)
    }

    fn profile(phi: &[usize]) -> PhiProfile {
        PhiProfile { d_values: (0..phi.len() as u32).collect(), phi: phi.to_vec(), stabilized_degree: 0, order: 0 }
    }

    #[test]
    fn exponent_enumeration() {
        assert_eq!(exponents_up_to(2, 2).len(), 6);
        assert_eq!(exponents_up_to(3, 0), vec![vec![0, 0, 0]]);
    }

    #[test]
    fn cantor2_family() {
        let f = vec![g(128), one(128)];
        let v = phi_function(&f, 2, 3, 128).unwrap();
        assert_eq!((v.monomials, v.phi), (6, 3));
        let direct = [one(128), g(128), g(128).mul(&g(128))];
        let rows: Vec<Vec<Rational>> = (0..128).map(|n| direct.iter().map(|s| s.coeff(n).clone()).collect()).collect();
        assert_eq!(linalg::rank(&rows, 3), 3);
    }

    #[test]
    fn constants_only() {
        let f = vec![one(64)];
        for d in 0..4 {
            assert_eq!(phi_function(&f, d, 2, 64).unwrap().phi, 1);
        }
    }

    #[test]
    fn cantor3_family() {
        let z = TruncSeries::from_poly(&crate::polyring::Poly::z(), 96);
        let f = vec![g(96), g(96).add(&z), one(96)];
        assert_eq!(phi_function(&f, 1, 3, 96).unwrap().phi, 2);
    }

    #[test]
    fn trdeg_estimates() {
        let e = estimate_trdeg(&profile(&[1, 2, 3, 4, 5, 6]));
        assert_eq!((e.t_hat, e.confidence), (1, Confidence::Stable));
        let e = estimate_trdeg(&profile(&[1, 3, 6, 10, 15]));
        assert_eq!((e.t_hat, e.confidence), (2, Confidence::Stable));
        let e = estimate_trdeg(&profile(&[1, 1, 1, 1]));
        assert_eq!(e.t_hat, 0);
        let e = estimate_trdeg(&profile(&[1, 2, 4, 8]));
        assert_eq!(e.confidence, Confidence::Unstable);
    }

    #[test]
    fn bounds() {
        let r = bounds_check(&profile(&[1, 2, 3, 4, 5]), 1);
        assert!(r.lower_bound_holds);
        assert_eq!(r.gamma2, int(2));
        let c = bounds_check(&profile(&[1, 1, 1]), 0);
        assert!(c.lower_bound_holds);
        assert_eq!(c.gamma2, int(1));
    }
}
