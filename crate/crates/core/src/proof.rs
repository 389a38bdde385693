//! Desk-scale auxiliary-function construction for a linear value relation.
//!
//! Given `tau` with `sum_i tau_i f_i(alpha) = 0`, set
//! `F(Y, z) = sum_{i,j} tau_i y_ij f_j(z)` and look for polynomials `P_j`
//! supported on the pivot monomials of the `(delta1, delta2)` box such that
//! the truncation `E_p` of `E = sum_j P_j F^j` at `z^p` lies in the relation
//! ideal slice of the `(2 delta1, p - 1)` box and vanishes at the requested
//! orbit points.
//!
//! The orbit points are the exact values `(A_k(alpha), alpha^(q^k))`; no
//! auxiliary change of basis of the relation ideal is constructed, so the
//! ideal membership constraints are those of the stabilized kernel computed
//! by [`crate::relation`].

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::lift::{verify_value_relation, ValueRelation};
use crate::mpoly::MPoly;
use crate::polyring::TruncSeries;
use crate::relation::{self, EngineOptions, MonomialBasis, SparseVec};
use crate::scalar::{liouville_check, log_abs, weil_height, LogValue, Rational};
use crate::system::{CocycleChain, MahlerSystem};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuxFunction {
    pub m: usize,
    pub delta1: u32,
    pub delta2: u32,
    /// Truncation order used.
    pub p: u32,
    /// `floor(delta1 delta2 / 2^(m^2 + 2))`, recorded for comparison.
    pub p_theoretical: u64,
    #[serde(with = "crate::scalar::serde_rational::vec")]
    pub tau: Vec<Rational>,
    #[serde(with = "crate::scalar::serde_rational")]
    pub alpha: Rational,
    /// Pivot monomials of the `(delta1, delta2)` box.
    pub pivots: Vec<usize>,
    /// `P_0 .. P_delta1` over the `(delta1, delta2)` box.
    #[serde(with = "crate::relation::sparse_serde")]
    pub coefficients: Vec<SparseVec>,
    pub v0: usize,
    pub kset_constraints: Vec<u32>,
    pub kset_heldout: Vec<u32>,
    /// `E_p` vanishes exactly at every held-out orbit point.
    pub heldout_verified: bool,
    /// `trunc_p(Ecal F^v0) = E_p` as polynomials.
    pub identity_verified: bool,
    pub unknowns: usize,
    /// Rank of the ideal membership constraints.
    pub ideal_constraints: usize,
    pub kernel_dim: usize,
    /// Number of terms of `E_p`.
    pub e_p_terms: usize,
}

impl AuxFunction {
    pub fn basis(&self) -> MonomialBasis {
        MonomialBasis::new(self.m * self.m, self.delta1, self.delta2).expect("box was built before")
    }
}

/// `max(1, floor(delta1 delta2 / 4))`.
pub fn desk_p(delta1: u32, delta2: u32) -> u32 {
    (delta1 * delta2 / 4).max(1)
}

pub fn theoretical_p(m: usize, delta1: u32, delta2: u32) -> u64 {
    let shift = (m * m + 2) as u32;
    if shift >= 64 {
        0
    } else {
        (u64::from(delta1) * u64::from(delta2)) >> shift
    }
}

/// `F` truncated at `z^p`.
fn f_poly(m: usize, tau: &[Rational], f: &[TruncSeries], p: u32) -> MPoly {
    let mut out = MPoly::zero(m * m);
    for (i, t) in tau.iter().enumerate() {
        if t.is_zero() {
            continue;
        }
        for (j, fj) in f.iter().enumerate() {
            for n in 0..(p as usize).min(fj.order()) {
                let c = fj.coeff(n);
                if !c.is_zero() {
                    let mut nu = vec![0u32; m * m];
                    nu[i * m + j] = 1;
                    out.add_term(nu, n as u32, t * c);
                }
            }
        }
    }
    out
}

fn sparse_to_mpoly(basis: &MonomialBasis, v: &SparseVec) -> MPoly {
    let mut out = MPoly::zero(basis.nvars);
    for (idx, c) in v {
        let (nu, l) = basis.entry(*idx);
        out.add_term(nu, l, c.clone());
    }
    out
}

/// `sum_{j >= from} P_j F^(j - from)` truncated at `z^p`.
fn combine(basis: &MonomialBasis, coeffs: &[SparseVec], fpow: &[MPoly], from: usize, p: u32) -> MPoly {
    let mut out = MPoly::zero(basis.nvars);
    for (j, pj) in coeffs.iter().enumerate().skip(from) {
        if pj.is_empty() {
            continue;
        }
        let term = sparse_to_mpoly(basis, pj).mul_trunc(&fpow[j - from], p);
        out.add_scaled(&term, &Rational::one());
    }
    out
}

fn values(points: &[(crate::matrix::Matrix<Rational>, Rational)], poly: &MPoly) -> Vec<Rational> {
    points.iter().map(|(y, x)| poly.eval(y.entries(), x)).collect()
}

/// Builds the auxiliary function. `f` must hold the solution series to at
/// least order `p`.
pub fn build_aux(
    sys: &MahlerSystem,
    f: &[TruncSeries],
    alpha: &Rational,
    tau: &[Rational],
    delta1: u32,
    delta2: u32,
    kset: &[u32],
) -> Result<AuxFunction> {
    let m = sys.m;
    if tau.len() != m || f.len() != m {
        return Err(Error::DimensionMismatch(format!("tau has {} entries and f {} series, m = {m}", tau.len(), f.len())));
    }
    sys.require_regular(alpha)?;
    let p = desk_p(delta1, delta2);
    let have = f.iter().map(TruncSeries::order).min().unwrap_or(0);
    if have < p as usize {
        return Err(Error::InsufficientOrder { needed: p as usize, have });
    }
    let opts = EngineOptions::default();
    let basis = MonomialBasis::new(m * m, delta1, delta2)?;
    let (pivots, _) = relation::pivot_monomials(sys, alpha, delta1, delta2, &opts)?;

    let fz = f_poly(m, tau, f, p);
    let mut fpow = vec![MPoly::one(m * m)];
    for j in 1..=delta1 as usize {
        let next = fpow[j - 1].mul_trunc(&fz, p);
        fpow.push(next);
    }
    // unknown u = j * |pivots| + s
    let npiv = pivots.len();
    let unknowns = (delta1 as usize + 1) * npiv;
    let gens: Vec<MPoly> = (0..=delta1 as usize)
        .flat_map(|j| {
            let fj = &fpow[j];
            let basis = &basis;
            pivots.iter().map(move |&s| {
                let (nu, l) = basis.entry(s);
                MPoly::monomial(nu, l, Rational::one()).mul_trunc(fj, p)
            })
        })
        .collect();

    // ideal membership in the (2 delta1, p - 1) box
    let (run, q) = relation::stabilized_echelon(sys, alpha, 2 * delta1, p - 1, &opts)?;
    let red = &run.reduced;
    let per = p as usize;
    let mut rows: Vec<Vec<Rational>> = vec![vec![Rational::zero(); unknowns]; q.rows.len()];
    for (u, g) in gens.iter().enumerate() {
        let mut v: std::collections::BTreeMap<usize, Rational> = Default::default();
        for (nu, l, c) in g.terms() {
            if let Some((mu, cc)) = red.structure.reduce_monomial(nu) {
                let col = red.basis.exponent_index(&mu) as usize * per + l as usize;
                *v.entry(col).or_insert_with(Rational::zero) += c * cc;
            }
        }
        for (r, qrow) in q.rows.iter().enumerate() {
            let mut acc = Rational::zero();
            for (col, c) in &v {
                if !qrow[*col].is_zero() {
                    acc += &qrow[*col] * c;
                }
            }
            rows[r][u] = acc;
        }
    }
    let ideal_constraints = q.rows.len();

    // exact equations at the requested orbit points
    let points = relation::orbit_points(sys, alpha, kset)?;
    let evals: Vec<Vec<Rational>> = gens.iter().map(|g| values(&points, g)).collect();
    for k in 0..points.len() {
        rows.push(evals.iter().map(|e| e[k].clone()).collect());
    }

    let kernel = linalg::nullspace(&rows, unknowns);
    if kernel.is_empty() {
        return Err(Error::EmptyKernel);
    }
    let e_p_of = |c: &[Rational]| {
        let mut e = MPoly::zero(m * m);
        for (g, cu) in gens.iter().zip(c) {
            e.add_scaled(g, cu);
        }
        e
    };
    let chosen = kernel.iter().find(|c| !e_p_of(c).is_zero()).unwrap_or(&kernel[0]).clone();
    let e_p = e_p_of(&chosen);
    let coefficients: Vec<SparseVec> = (0..=delta1 as usize)
        .map(|j| {
            (0..npiv)
                .filter(|&s| !chosen[j * npiv + s].is_zero())
                .map(|s| (pivots[s], chosen[j * npiv + s].clone()))
                .collect::<SparseVec>()
        })
        .map(|mut v| {
            v.sort_by_key(|t| t.0);
            v
        })
        .collect();
    let v0 = coefficients.iter().position(|c| !c.is_empty()).ok_or(Error::EmptyKernel)?;

    let last = kset.iter().copied().max().unwrap_or(0);
    let kset_heldout: Vec<u32> = (last + 1..=last + 4).collect();
    let held_points = relation::orbit_points(sys, alpha, &kset_heldout)?;
    let heldout_verified = values(&held_points, &e_p).iter().all(Zero::is_zero);

    let ecal = combine(&basis, &coefficients, &fpow, v0, p);
    let identity_verified = ecal.mul_trunc(&fpow[v0], p) == combine(&basis, &coefficients, &fpow, 0, p)
        && combine(&basis, &coefficients, &fpow, 0, p) == e_p;

    Ok(AuxFunction {
        m,
        delta1,
        delta2,
        p,
        p_theoretical: theoretical_p(m, delta1, delta2),
        tau: tau.to_vec(),
        alpha: alpha.clone(),
        pivots,
        coefficients,
        v0,
        kset_constraints: kset.to_vec(),
        kset_heldout,
        heldout_verified,
        identity_verified,
        unknowns,
        ideal_constraints,
        kernel_dim: kernel.len(),
        e_p_terms: e_p.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub k: u32,
    /// `P_v0(A_k(alpha), alpha^(q^k))`.
    #[serde(with = "crate::scalar::serde_rational")]
    pub value: Rational,
    /// `Ecal` at the same point with `F` replaced by the partial sum of
    /// `tau A_k(alpha) f(z)` at `alpha^(q^k)`.
    #[serde(with = "crate::scalar::serde_rational")]
    pub ecal_value: Rational,
    #[serde(with = "crate::scalar::serde_rational")]
    pub f_value: Rational,
    pub agree: bool,
    pub zero: bool,
    pub log_abs: Option<LogValue>,
    pub height: LogValue,
    pub liouville_floor: LogValue,
    /// Exact integer check of `log|value| >= -h(value)`; `None` for zero rows.
    pub liouville_holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub rows: Vec<DecayRow>,
    pub c2_hat: Option<f64>,
    pub c3_hat: Option<f64>,
}

impl DecayReport {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(|r| r.agree)
    }

    pub fn liouville_ok(&self) -> bool {
        self.rows.iter().all(|r| r.liouville_holds != Some(false))
    }
}

/// Evaluates `P_v0` and `Ecal` along the orbit for `k = 1 ..= kmax`.
pub fn decay_report(aux: &AuxFunction, sys: &MahlerSystem, f: &[TruncSeries], kmax: u32) -> Result<DecayReport> {
    let order = f.iter().map(TruncSeries::order).min().unwrap_or(0);
    if order < 2 {
        return Err(Error::InsufficientOrder { needed: 2, have: order });
    }
    let rel = ValueRelation { tau: aux.tau.clone(), alpha: aux.alpha.clone() };
    let check = verify_value_relation(sys, f, &rel, order - 1)?;
    if !check.is_verified() {
        return Err(Error::PreconditionTauNotARelation(format!("{check:?}")));
    }
    let basis = aux.basis();
    let m = sys.m;
    let mut chain = CocycleChain::new(sys, aux.alpha.clone());
    let mut rows = Vec::new();
    while chain.k() < kmax {
        chain.advance()?;
        let k = chain.k();
        let y = chain.value();
        let x = chain.point();
        let value = relation::eval_sparse(&basis, &aux.coefficients[aux.v0], y, x);
        let w: Vec<Rational> =
            (0..m).map(|j| (0..m).map(|i| &aux.tau[i] * y.get(i, j)).sum::<Rational>()).collect();
        let f_value: Rational = w.iter().zip(f).filter(|(c, _)| !c.is_zero()).map(|(c, fj)| c * fj.partial_sum(x)).sum();
        let mut ecal_value = Rational::zero();
        let mut fpow = Rational::one();
        for pj in &aux.coefficients[aux.v0..] {
            if !pj.is_empty() {
                ecal_value += relation::eval_sparse(&basis, pj, y, x) * &fpow;
            }
            fpow *= &f_value;
        }
        let zero = value.is_zero();
        let height = weil_height(&value);
        let (log_abs_v, liouville_holds) = if zero {
            (None, None)
        } else {
            (Some(log_abs(&value)?), Some(liouville_check(&value)?.holds))
        };
        rows.push(DecayRow {
            k,
            agree: ecal_value == value,
            value,
            ecal_value,
            f_value,
            zero,
            log_abs: log_abs_v,
            liouville_floor: LogValue::new(-height.value, height.certified_rel_error),
            height,
            liouville_holds,
        });
    }
    let scale = |k: u32| (sys.q as f64).powi(k as i32);
    let d12 = f64::from(aux.delta1) * f64::from(aux.delta2);
    let c2_hat = rows
        .iter()
        .filter_map(|r| r.log_abs.map(|l| -l.value / (scale(r.k) * d12)))
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.min(v))));
    let c3_hat = rows
        .iter()
        .filter(|r| !r.zero)
        .map(|r| r.height.value / (scale(r.k) * f64::from(aux.delta2)))
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))));
    Ok(DecayReport { rows, c2_hat, c3_hat })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightRow {
    pub k: u32,
    /// Heights of the entries of `A_k(alpha)`, row-major.
    pub heights: Vec<LogValue>,
    pub max_height: LogValue,
    /// Running maximum of `max_height / q^k`.
    pub gamma: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightTable {
    pub rows: Vec<HeightRow>,
    pub gamma_hat: f64,
    /// The running maximum grew by less than one percent over the last three
    /// steps.
    pub stable: bool,
}

pub fn height_growth(sys: &MahlerSystem, alpha: &Rational, kmax: u32) -> Result<HeightTable> {
    sys.require_regular(alpha)?;
    let mut chain = CocycleChain::new(sys, alpha.clone());
    let mut rows: Vec<HeightRow> = Vec::new();
    let mut gamma = 0.0f64;
    loop {
        let heights: Vec<LogValue> = chain.value().entries().iter().map(weil_height).collect();
        let max_height = heights.iter().copied().fold(LogValue::ZERO, |a, h| if h.value > a.value { h } else { a });
        gamma = gamma.max(max_height.value / (sys.q as f64).powi(chain.k() as i32));
        rows.push(HeightRow { k: chain.k(), heights, max_height, gamma });
        if chain.k() >= kmax {
            break;
        }
        chain.advance()?;
    }
    let n = rows.len();
    let stable = n >= 4 && {
        let before = rows[n - 4].gamma;
        before > 0.0 && (gamma - before) / before < 1e-2 || (before == 0.0 && gamma == 0.0)
    };
    Ok(HeightTable { rows, gamma_hat: gamma, stable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::polyring::{Poly, RatFunc};
    use crate::scalar::{frac, int};
    use crate::system::CoeffBound;

    fn poly(c: &[i64]) -> RatFunc {
        RatFunc::from_poly(Poly::from_i64(c))
    }

    fn cantor3() -> MahlerSystem {
        let a = Matrix::from_rows(vec![
            vec![poly(&[1]), poly(&[0]), poly(&[0, 1])],
            vec![poly(&[0]), poly(&[1]), poly(&[0, 2, -1])],
            vec![poly(&[0]), poly(&[0]), poly(&[1])],
        ])
        .unwrap();
        MahlerSystem::new("cantor3", 2, a, Some(vec![int(0), int(0), int(1)]), Some(CoeffBound { c: int(1), rho: int(1) })).unwrap()
    }

    fn cantor2() -> MahlerSystem {
        let a = Matrix::from_rows(vec![vec![poly(&[1]), poly(&[0, 1])], vec![poly(&[0]), poly(&[1])]]).unwrap();
        MahlerSystem::new("cantor2", 2, a, Some(vec![int(0), int(1)]), Some(CoeffBound { c: int(1), rho: int(1) })).unwrap()
    }

    #[test]
    fn p_values() {
        assert_eq!(desk_p(1, 8), 2);
        assert_eq!(desk_p(1, 1), 1);
        assert_eq!(theoretical_p(3, 1, 8), 0);
    }

    #[test]
    fn cantor3_aux() {
        let sys = cantor3();
        let alpha = frac(1, 2);
        let f = sys.solve_series(64).unwrap();
        let tau = [int(1), int(-1), frac(1, 2)];
        let ks: Vec<u32> = (2..=6).collect();
        let aux = build_aux(&sys, &f, &alpha, &tau, 1, 8, &ks).unwrap();
        assert!(aux.coefficients.iter().any(|c| !c.is_empty()));
        assert!(aux.heldout_verified);
        assert!(aux.identity_verified);
        assert_eq!(aux.kset_heldout, vec![7, 8, 9, 10]);
        let rep = decay_report(&aux, &sys, &f, 10).unwrap();
        assert!(rep.all_agree());
        assert!(rep.liouville_ok());
        assert!(rep.c3_hat.unwrap().is_finite());
    }

    #[test]
    fn zero_tau_gives_v0_zero() {
        let sys = cantor3();
        let f = sys.solve_series(16).unwrap();
        let aux = build_aux(&sys, &f, &frac(1, 2), &[int(0), int(0), int(0)], 1, 4, &[2, 3, 4]).unwrap();
        assert_eq!(aux.v0, 0);
        assert!(aux.identity_verified);
    }

    #[test]
    fn false_tau_rejected() {
        let sys = cantor3();
        let f = sys.solve_series(64).unwrap();
        let aux = build_aux(&sys, &f, &frac(1, 2), &[int(1), int(-1), int(0)], 1, 4, &[2, 3, 4]).unwrap();
        assert!(matches!(decay_report(&aux, &sys, &f, 6), Err(Error::PreconditionTauNotARelation(_))));
    }

    #[test]
    fn cantor2_heights() {
        let t = height_growth(&cantor2(), &frac(1, 2), 10).unwrap();
        let ln2 = std::f64::consts::LN_2;
        assert!(t.rows[0].heights.iter().all(|h| h.value == 0.0));
        for row in &t.rows[1..] {
            let expect = 2f64.powi(row.k as i32 - 1) * ln2;
            assert!(row.heights[1].agrees_with(expect, 1e-9 * expect));
        }
        assert!(t.stable);
    }
}
