//! Linear relations among the solution series over Q[z], rigorous checks of
//! linear relations among their values, and lifting of a value relation at
//! `alpha` to a functional one.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::polyring::{Poly, TruncSeries};
use crate::scalar::{rat_abs, rat_pow, Rational};
use crate::system::MahlerSystem;

/// Extra equations demanded beyond the number of unknowns.
pub const DEFAULT_GUARD: usize = 16;

/// Vectors `p` of polynomials with `deg p_i <= D` and
/// `sum_i p_i f_i = 0 mod z^N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionRelationBasis {
    pub degree_bound: usize,
    /// Number of equations the basis was computed from.
    pub order: usize,
    /// Order to which every basis vector was re-checked (at least `order`).
    pub verified_order: usize,
    pub basis: Vec<Vec<Poly>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueRelation {
    #[serde(with = "crate::scalar::serde_rational::vec")]
    pub tau: Vec<Rational>,
    #[serde(with = "crate::scalar::serde_rational")]
    pub alpha: Rational,
}

/// Outcome of a value-relation check with an explicit tail bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ValueCheck {
    Verified {
        #[serde(with = "crate::scalar::serde_rational")]
        sum: Rational,
        #[serde(with = "crate::scalar::serde_rational")]
        tail_bound: Rational,
    },
    Refuted {
        #[serde(with = "crate::scalar::serde_rational")]
        sum: Rational,
        #[serde(with = "crate::scalar::serde_rational")]
        tail_bound: Rational,
        #[serde(with = "crate::scalar::serde_rational")]
        margin: Rational,
    },
    Inconclusive {
        #[serde(with = "crate::scalar::serde_rational")]
        sum: Rational,
        #[serde(with = "crate::scalar::serde_rational")]
        tail_bound: Rational,
    },
}

impl ValueCheck {
    pub fn is_verified(&self) -> bool {
        matches!(self, ValueCheck::Verified { .. })
    }

    pub fn sum(&self) -> &Rational {
        match self {
            ValueCheck::Verified { sum, .. } | ValueCheck::Refuted { sum, .. } | ValueCheck::Inconclusive { sum, .. } => sum,
        }
    }
}

/// `coefficients[i]` is the polynomial multiplying `f_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftResult {
    pub coefficients: Vec<Poly>,
    pub residual_order: usize,
    pub degree_bound: usize,
}

impl LiftResult {
    /// The linear form `sum_i L_i(alpha) X_i`.
    pub fn specialize(&self, alpha: &Rational) -> Vec<Rational> {
        self.coefficients.iter().map(|p| p.eval(alpha)).collect()
    }
}

fn min_order(f: &[TruncSeries]) -> usize {
    f.iter().map(TruncSeries::order).min().unwrap_or(0)
}

/// Valuation of `sum_i p_i f_i`, up to the common order of the series.
pub fn residual_order(p: &[Poly], f: &[TruncSeries]) -> usize {
    let order = min_order(f);
    let mut acc = TruncSeries::zero(order);
    for (pi, fi) in p.iter().zip(f) {
        if !pi.is_zero() {
            acc = acc.add(&fi.truncate(order).mul_poly(pi));
        }
    }
    acc.valuation()
}

/// Exact kernel of the convolution system `sum_{i,c} p_{i,c} f_i[n - c] = 0`,
/// `n < N`, with unknowns ordered `i * (D + 1) + c`.
pub fn guess_function_relations(f: &[TruncSeries], degree: usize, order: usize) -> Result<FunctionRelationBasis> {
    let m = f.len();
    let width = degree + 1;
    let ncols = m * width;
    if order < ncols + DEFAULT_GUARD {
        return Err(Error::InsufficientOrder { needed: ncols + DEFAULT_GUARD, have: order });
    }
    if min_order(f) < order {
        return Err(Error::InsufficientOrder { needed: order, have: min_order(f) });
    }
    let rows = convolution_rows(f, degree, order);
    let kernel = linalg::nullspace(&rows, ncols);
    let basis: Vec<Vec<Poly>> = kernel
        .into_iter()
        .map(|v| (0..m).map(|i| Poly::new(v[i * width..(i + 1) * width].to_vec())).collect())
        .collect();
    let verified_order = basis.iter().map(|b| residual_order(b, f)).min().unwrap_or(min_order(f));
    Ok(FunctionRelationBasis { degree_bound: degree, order, verified_order, basis })
}

pub(crate) fn convolution_rows(f: &[TruncSeries], degree: usize, order: usize) -> Vec<Vec<Rational>> {
    let width = degree + 1;
    let ncols = f.len() * width;
    use rayon::prelude::*;
    (0..order)
        .into_par_iter()
        .map(|n| {
            let mut row = vec![Rational::zero(); ncols];
            for (i, fi) in f.iter().enumerate() {
                for c in 0..width.min(n + 1) {
                    row[i * width + c] = fi.coeff(n - c).clone();
                }
            }
            row
        })
        .collect()
}

/// Checks `sum_i tau_i f_i(alpha) = 0` from the partial sums through `z^N`
/// and the tail bound `(sum |tau_i|) C (rho |alpha|)^(N+1) / (1 - rho |alpha|)`.
pub fn verify_value_relation(sys: &MahlerSystem, f: &[TruncSeries], rel: &ValueRelation, order: usize) -> Result<ValueCheck> {
    let bound = sys.coeff_bound.as_ref().ok_or(Error::MissingCoeffBound)?;
    let r = &bound.rho * rat_abs(&rel.alpha);
    if r >= Rational::one() {
        return Err(Error::RhoAlphaNotContracting(crate::scalar::format_rational(&r)));
    }
    if rel.tau.len() != f.len() {
        return Err(Error::DimensionMismatch(format!("tau has {} entries, m = {}", rel.tau.len(), f.len())));
    }
    if min_order(f) < order + 1 {
        return Err(Error::InsufficientOrder { needed: order + 1, have: min_order(f) });
    }
    let mut sum = Rational::zero();
    for (t, fi) in rel.tau.iter().zip(f) {
        if !t.is_zero() {
            sum += t * fi.truncate(order + 1).partial_sum(&rel.alpha);
        }
    }
    let tau_norm: Rational = rel.tau.iter().map(rat_abs).sum();
    let tail_bound = tau_norm * &bound.c * rat_pow(&r, order as u64 + 1) / (Rational::one() - &r);
    let abs = sum.abs();
    Ok(if abs <= tail_bound {
        ValueCheck::Verified { sum, tail_bound }
    } else if abs > &tail_bound * Rational::from_integer(2.into()) {
        let margin = abs - &tail_bound;
        ValueCheck::Refuted { sum, tail_bound, margin }
    } else {
        ValueCheck::Inconclusive { sum, tail_bound }
    })
}

/// Finds `L(z)` with `sum_i L_i(z) f_i(z) = 0 mod z^N` and `L(alpha) = tau`.
pub fn lift_linear_relation(sys: &MahlerSystem, alpha: &Rational, tau: &[Rational], degree: usize, order: usize) -> Result<LiftResult> {
    sys.require_regular(alpha)?;
    if tau.len() != sys.m {
        return Err(Error::DimensionMismatch(format!("tau has {} entries, m = {}", tau.len(), sys.m)));
    }
    let f = sys.solve_series(2 * order)?;
    lift_from_series(&f, alpha, tau, degree, order)
}

/// Lifting from precomputed series of order at least `order`.
pub fn lift_from_series(f: &[TruncSeries], alpha: &Rational, tau: &[Rational], degree: usize, order: usize) -> Result<LiftResult> {
    let m = f.len();
    if tau.iter().all(Zero::is_zero) {
        return Ok(LiftResult { coefficients: vec![Poly::zero(); m], residual_order: min_order(f), degree_bound: degree });
    }
    let basis = guess_function_relations(f, degree, order)?;
    if basis.basis.is_empty() {
        return Err(Error::NoLiftAtDegree(degree));
    }
    // columns: basis vectors; rows: coordinates i of B_j(alpha)
    let rows: Vec<Vec<Rational>> =
        (0..m).map(|i| basis.basis.iter().map(|b| b[i].eval(alpha)).collect()).collect();
    let c = linalg::solve(&rows, tau, basis.basis.len()).ok_or(Error::NoLiftAtDegree(degree))?;
    let mut coefficients = vec![Poly::zero(); m];
    for (cj, b) in c.iter().zip(&basis.basis) {
        if cj.is_zero() {
            continue;
        }
        for (acc, bi) in coefficients.iter_mut().zip(b) {
            *acc = &*acc + &bi.scale(cj);
        }
    }
    let residual_order = residual_order(&coefficients, f);
    Ok(LiftResult { coefficients, residual_order, degree_bound: degree })
}

/// Retries with `D <- 2D` (and enough equations) until a lift is found or
/// `D` would exceed `cap`.
pub fn lift_with_escalation(
    sys: &MahlerSystem,
    alpha: &Rational,
    tau: &[Rational],
    degree: usize,
    order: usize,
    cap: usize,
) -> Result<LiftResult> {
    sys.require_regular(alpha)?;
    if tau.len() != sys.m {
        return Err(Error::DimensionMismatch(format!("tau has {} entries, m = {}", tau.len(), sys.m)));
    }
    let mut d = degree;
    let top_order = order.max(sys.m * (cap.max(degree) + 1) + DEFAULT_GUARD);
    let f = sys.solve_series(2 * top_order)?;
    loop {
        let n = order.max(sys.m * (d + 1) + DEFAULT_GUARD);
        match lift_from_series(&f, alpha, tau, d, n) {
            Err(Error::NoLiftAtDegree(_)) if d < cap => d = (2 * d).clamp(1, cap),
            Err(Error::NoLiftAtDegree(_)) => return Err(Error::NoLiftAtDegree(d)),
            other => return other,
        }
    }
}
