//! Degree-bounded slices of the ideal of polynomials `P(Y, z)` vanishing at
//! the orbit points `(A_k(alpha), alpha^(q^k))`.
//!
//! The slice is the kernel of an evaluation matrix whose rows are orbit
//! points and whose columns are the monomials of a [`MonomialBasis`]. A
//! finite set of rows can only over-approximate the ideal, so the results
//! here are stabilized kernels, re-checked on held-out orbit points.

pub mod engine;
pub mod monomial;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use engine::EngineOptions;
use engine::{Layout, QEchelon, RankRun, Reduced};
pub use monomial::{format_monomial, MonomialBasis};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{format_rational, rat_pow, Rational};
use crate::system::{CocycleChain, MahlerSystem};

/// Sparse coefficient vector over a [`MonomialBasis`], sorted by index.
pub type SparseVec = Vec<(usize, Rational)>;

/// Basis of a stabilized kernel slice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelBasis {
    pub delta1: u32,
    pub delta2: u32,
    pub m: usize,
    /// Number of monomials in the box.
    pub ncols: usize,
    /// Rank of the evaluation matrix.
    pub rank: usize,
    /// Pivot monomials; they span the chosen complement of the kernel.
    pub pivots: Vec<usize>,
    /// One vector per non-pivot monomial, normalized to 1 there.
    #[serde(with = "sparse_serde")]
    pub basis: Vec<SparseVec>,
    pub k_used: Vec<u32>,
    /// Orbit indices past `k_used` at which the kernel was re-checked over
    /// fresh primes.
    pub held_out_verified: Vec<u32>,
    /// Orbit indices at which every basis vector was evaluated exactly.
    pub exact_verified: Vec<u32>,
    pub primes_used: usize,
}

impl KernelBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn monomial_basis(&self) -> MonomialBasis {
        MonomialBasis::new(self.m * self.m, self.delta1, self.delta2).expect("basis was built before")
    }

    /// Renders a vector as a polynomial in `y_ij` and `z`.
    pub fn format_vector(&self, v: &SparseVec) -> String {
        format_sparse(&self.monomial_basis(), self.m, v)
    }
}

pub(crate) mod sparse_serde {
    use super::SparseVec;
    use crate::scalar::{format_rational, parse_rational};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[SparseVec], s: S) -> Result<S::Ok, S::Error> {
        let out: Vec<Vec<(usize, String)>> =
            v.iter().map(|row| row.iter().map(|(i, c)| (*i, format_rational(c))).collect()).collect();
        out.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<SparseVec>, D::Error> {
        let raw: Vec<Vec<(usize, String)>> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|(i, c)| parse_rational(&c).map(|r| (i, r)).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

pub fn format_sparse(basis: &MonomialBasis, m: usize, v: &SparseVec) -> String {
    if v.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (n, (idx, c)) in v.iter().enumerate() {
        let (nu, lambda) = basis.entry(*idx);
        let mono = format_monomial(m, &nu, lambda);
        let neg = c < &Rational::zero();
        let abs = if neg { -c.clone() } else { c.clone() };
        if n == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mono == "1" {
            out.push_str(&format_rational(&abs));
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{}*{}", format_rational(&abs), mono));
        }
    }
    out
}

/// Rank profile `d(delta1, delta2)` over a range of `delta2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimProfile {
    pub delta1: u32,
    /// `(delta2, rank, increment)`.
    pub rows: Vec<(u32, usize, usize)>,
    pub c1_estimate: usize,
    pub k_used_max: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoublingReport {
    pub delta1: u32,
    pub delta2: u32,
    pub rank: usize,
    pub rank_doubled: usize,
    /// `2^(m^2)`, saturated.
    pub factor: u128,
    pub holds: bool,
}

/// Values of all monomials of a box at one point, via per-entry powers.
struct PointPowers {
    ypow: Vec<Vec<Rational>>,
    xpow: Vec<Rational>,
}

impl PointPowers {
    fn new(value: &Matrix<Rational>, x: &Rational, delta1: u32, delta2: u32) -> Self {
        let ypow = value
            .entries()
            .iter()
            .map(|y| {
                let mut v = vec![Rational::one(); delta1 as usize + 1];
                for i in 1..v.len() {
                    v[i] = &v[i - 1] * y;
                }
                v
            })
            .collect();
        let mut xpow = vec![Rational::one(); delta2 as usize + 1];
        for i in 1..xpow.len() {
            xpow[i] = &xpow[i - 1] * x;
        }
        PointPowers { ypow, xpow }
    }

    fn monomial(&self, nu: &[u32], lambda: u32) -> Rational {
        let mut acc = self.xpow[lambda as usize].clone();
        for (e, &d) in nu.iter().enumerate() {
            if d > 0 {
                if self.ypow[e][d as usize].is_zero() {
                    return Rational::zero();
                }
                acc *= &self.ypow[e][d as usize];
            }
        }
        acc
    }

    fn eval(&self, basis: &MonomialBasis, v: &SparseVec) -> Rational {
        let mut s = Rational::zero();
        for (idx, c) in v {
            let (nu, lambda) = basis.entry(*idx);
            s += c * self.monomial(&nu, lambda);
        }
        s
    }
}

/// Exact orbit points `(k, A_k(alpha), alpha^(q^k))` for the requested `k`,
/// in the order given.
pub(crate) fn orbit_points(sys: &MahlerSystem, alpha: &Rational, kset: &[u32]) -> Result<Vec<(Matrix<Rational>, Rational)>> {
    let Some(&kmax) = kset.iter().max() else { return Ok(Vec::new()) };
    let mut chain = CocycleChain::new(sys, alpha.clone());
    let mut at: BTreeMap<u32, (Matrix<Rational>, Rational)> = BTreeMap::new();
    loop {
        if kset.contains(&chain.k()) {
            at.insert(chain.k(), (chain.value().clone(), chain.point().clone()));
        }
        if chain.k() == kmax {
            break;
        }
        chain.advance()?;
    }
    Ok(kset.iter().map(|k| at[k].clone()).collect())
}

/// Evaluation matrix: row per `k`, column per monomial `Y^nu z^lambda`.
pub fn eval_matrix(sys: &MahlerSystem, alpha: &Rational, delta1: u32, delta2: u32, kset: &[u32]) -> Result<Matrix<Rational>> {
    let basis = MonomialBasis::new(sys.m * sys.m, delta1, delta2)?;
    let n = basis.len_u64();
    if n > 1 << 20 {
        return Err(Error::SizeBudgetExceeded { needed: n, budget: 1 << 20 });
    }
    let exps = basis.exponents();
    let points = orbit_points(sys, alpha, kset)?;
    let mut rows = Vec::with_capacity(points.len());
    for (value, x) in &points {
        let pp = PointPowers::new(value, x, delta1, delta2);
        let mut row = Vec::with_capacity(basis.len());
        for nu in &exps {
            let mv = pp.monomial(nu, 0);
            for xl in &pp.xpow {
                row.push(&mv * xl);
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Ok(Matrix::zeros(0, basis.len()));
    }
    Matrix::from_rows(rows)
}

pub fn kernel_basis(sys: &MahlerSystem, alpha: &Rational, delta1: u32, delta2: u32) -> Result<KernelBasis> {
    kernel_basis_with(sys, alpha, delta1, delta2, &EngineOptions::default())
}

/// Largest box whose full kernel basis is materialized.
const MAX_FULL_COLUMNS: u64 = 1 << 21;

pub fn kernel_basis_with(
    sys: &MahlerSystem,
    alpha: &Rational,
    delta1: u32,
    delta2: u32,
    opts: &EngineOptions,
) -> Result<KernelBasis> {
    sys.require_regular(alpha)?;
    let full = MonomialBasis::new(sys.m * sys.m, delta1, delta2)?;
    if full.len_u64() > MAX_FULL_COLUMNS {
        return Err(Error::SizeBudgetExceeded { needed: full.len_u64(), budget: MAX_FULL_COLUMNS });
    }
    let (run, q) = stabilized_echelon(sys, alpha, delta1, delta2, opts)?;
    let red = &run.reduced;
    let per = delta2 as usize + 1;

    // representative of each reduced exponent vector in the full basis
    let rep_of = |mu_idx: usize| full.exponent_index(&red.structure.embed(&red.exponents[mu_idx])) as usize;
    let pivot_pos: BTreeMap<usize, usize> = q.pivots.iter().enumerate().map(|(r, &c)| (c, r)).collect();
    let full_pivots: Vec<usize> = q.pivots.iter().map(|&c| rep_of(c / per) * per + c % per).collect();
    let pivot_set: std::collections::BTreeSet<usize> = full_pivots.iter().copied().collect();

    let mut basis_vecs = Vec::with_capacity(full.len() - q.pivots.len());
    for (i, nu) in full.exponents().iter().enumerate() {
        let reduced = red.structure.reduce_monomial(nu);
        for lambda in 0..per {
            let j = i * per + lambda;
            if pivot_set.contains(&j) {
                continue;
            }
            let Some((mu, c)) = &reduced else {
                basis_vecs.push(vec![(j, Rational::one())]);
                continue;
            };
            let s = red.basis.exponent_index(mu) as usize * per + lambda;
            let mut v: SparseVec = vec![(j, Rational::one())];
            if let Some(&r) = pivot_pos.get(&s) {
                v.push((full_pivots[r], -c.clone()));
            } else {
                for (r, row) in q.rows.iter().enumerate() {
                    if !row[s].is_zero() {
                        v.push((full_pivots[r], -(c * &row[s])));
                    }
                }
            }
            v.sort_by_key(|t| t.0);
            basis_vecs.push(v);
        }
    }

    let last = *run.k_used.last().unwrap();
    let held_out: Vec<u32> = (last + 1..=last + 4).collect();
    if !engine::row_space_contains_mod(sys, alpha, red, &q, &held_out, run_fresh_prime(&run), 2) {
        return Err(Error::StabilizationFailed { max_k: last + 4 });
    }

    let exact_ks = exact_window_ks(sys, alpha, opts.k_min, 3);
    let points = orbit_points(sys, alpha, &exact_ks)?;
    for (value, x) in &points {
        let pp = PointPowers::new(value, x, delta1, delta2);
        if basis_vecs.iter().any(|v| !pp.eval(&full, v).is_zero()) {
            return Err(Error::StabilizationFailed { max_k: last });
        }
    }

    Ok(KernelBasis {
        delta1,
        delta2,
        m: sys.m,
        ncols: full.len(),
        rank: q.pivots.len(),
        pivots: full_pivots,
        basis: basis_vecs,
        k_used: run.k_used.clone(),
        held_out_verified: held_out,
        exact_verified: exact_ks,
        primes_used: q.primes_used,
    })
}

fn run_fresh_prime(run: &RankRun) -> usize {
    run.fresh_prime_index()
}

/// Up to `len` orbit indices from `k_min` whose exact points fit the budget.
fn exact_window_ks(sys: &MahlerSystem, alpha: &Rational, k_min: u32, len: u32) -> Vec<u32> {
    let bits = crate::budget::bit_budget() / 64;
    (k_min..k_min + len).filter(|&k| CocycleChain::bits_at(alpha, sys.q, k) <= bits.max(4096)).collect()
}

/// Stabilized reduced echelon form over Q in the standard column order.
pub(crate) fn stabilized_echelon(
    sys: &MahlerSystem,
    alpha: &Rational,
    delta1: u32,
    delta2: u32,
    opts: &EngineOptions,
) -> Result<(RankRun, QEchelon)> {
    let structure = engine::detect_structure(sys, alpha, opts)?;
    let ncols = MonomialBasis::new(structure.variable.len(), delta1, delta2)?.len_u64();
    if ncols > opts.max_columns as u64 {
        return Err(Error::SizeBudgetExceeded { needed: ncols, budget: opts.max_columns as u64 });
    }
    let run = engine::stabilized_rank(sys, alpha, delta1, delta2, Layout::Standard, &[ncols as usize], opts)?;
    let q = engine::reconstruct(sys, alpha, &run)?;
    Ok((run, q))
}

/// Pivot monomials of the stabilized evaluation matrix of one box, as
/// indices into the full [`MonomialBasis`], with the orbit indices used.
pub fn pivot_monomials(
    sys: &MahlerSystem,
    alpha: &Rational,
    delta1: u32,
    delta2: u32,
    opts: &EngineOptions,
) -> Result<(Vec<usize>, Vec<u32>)> {
    let full = MonomialBasis::new(sys.m * sys.m, delta1, delta2)?;
    let structure = engine::detect_structure(sys, alpha, opts)?;
    let red = Reduced::new(structure, delta1, delta2, Layout::Standard, opts.max_columns)?;
    let ncols = red.ncols();
    let run = engine::stabilized_rank(sys, alpha, delta1, delta2, Layout::Standard, &[ncols], opts)?;
    let red = &run.reduced;
    let per = delta2 as usize + 1;
    let pivots = run
        .pivots()
        .into_iter()
        .map(|c| full.exponent_index(&red.structure.embed(&red.exponents[c / per])) as usize * per + c % per)
        .collect();
    Ok((pivots, run.k_used.clone()))
}

/// Rank of the stabilized evaluation matrix of one box.
pub fn stabilized_rank(sys: &MahlerSystem, alpha: &Rational, delta1: u32, delta2: u32, opts: &EngineOptions) -> Result<(usize, Vec<u32>)> {
    let structure = engine::detect_structure(sys, alpha, opts)?;
    let ncols = Reduced::new(structure, delta1, delta2, Layout::Standard, opts.max_columns)?.ncols();
    let run = engine::stabilized_rank(sys, alpha, delta1, delta2, Layout::Standard, &[ncols], opts)?;
    Ok((run.prefix_ranks[0], run.k_used))
}

/// True iff `p` vanishes exactly at every `(A_k(alpha), alpha^(q^k))`, `k`
/// in `kset`. `p` is a dense vector over the `(delta1, delta2)` box.
pub fn is_member(sys: &MahlerSystem, alpha: &Rational, delta1: u32, delta2: u32, p: &[Rational], kset: &[u32]) -> Result<bool> {
    let sparse: SparseVec = p.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect();
    let basis = MonomialBasis::new(sys.m * sys.m, delta1, delta2)?;
    if p.len() as u64 != basis.len_u64() {
        return Err(Error::DimensionMismatch(format!("{} coefficients for a box of {} monomials", p.len(), basis.len_u64())));
    }
    is_member_sparse(sys, alpha, &basis, &sparse, kset)
}

pub fn is_member_sparse(sys: &MahlerSystem, alpha: &Rational, basis: &MonomialBasis, p: &SparseVec, kset: &[u32]) -> Result<bool> {
    if p.is_empty() {
        return Ok(true);
    }
    for (value, x) in orbit_points(sys, alpha, kset)? {
        let pp = PointPowers::new(&value, &x, basis.delta1, basis.delta2);
        if !pp.eval(basis, p).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Value of a sparse polynomial at `(Y, x)`.
pub fn eval_sparse(basis: &MonomialBasis, p: &SparseVec, y: &Matrix<Rational>, x: &Rational) -> Rational {
    PointPowers::new(y, x, basis.delta1, basis.delta2).eval(basis, p)
}

/// Ranks `d(delta1, delta2)` for every `delta2` in the range, from one
/// stabilized echelon form with `lambda`-major columns.
pub fn dim_profile(sys: &MahlerSystem, alpha: &Rational, delta1: u32, delta2s: &[u32]) -> Result<DimProfile> {
    dim_profile_with(sys, alpha, delta1, delta2s, &EngineOptions::default())
}

pub fn dim_profile_with(
    sys: &MahlerSystem,
    alpha: &Rational,
    delta1: u32,
    delta2s: &[u32],
    opts: &EngineOptions,
) -> Result<DimProfile> {
    if delta2s.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSystem("delta2 range must be strictly ascending".into()));
    }
    let Some(&top) = delta2s.last() else {
        return Ok(DimProfile { delta1, rows: Vec::new(), c1_estimate: 0, k_used_max: opts.k_min });
    };
    sys.require_regular(alpha)?;
    let structure = engine::detect_structure(sys, alpha, opts)?;
    let n_mu = MonomialBasis::new(structure.variable.len(), delta1, 0)?.exponent_count() as usize;
    let mut wanted: Vec<u32> = Vec::new();
    for &d in delta2s {
        if d > 0 {
            wanted.push(d - 1);
        }
        wanted.push(d);
    }
    wanted.sort_unstable();
    wanted.dedup();
    let prefixes: Vec<usize> = wanted.iter().map(|&d| (d as usize + 1) * n_mu).collect();
    let run = engine::stabilized_rank(sys, alpha, delta1, top, Layout::LambdaMajor, &prefixes, opts)?;
    let rank_at = |d: u32| run.prefix_ranks[wanted.binary_search(&d).unwrap()];
    let rows: Vec<(u32, usize, usize)> = delta2s
        .iter()
        .map(|&d| {
            let r = rank_at(d);
            let prev = if d == 0 { 0 } else { rank_at(d - 1) };
            (d, r, r - prev)
        })
        .collect();
    let c1_estimate = rows.last().map(|r| r.2).unwrap_or(0);
    Ok(DimProfile { delta1, rows, c1_estimate, k_used_max: *run.k_used.last().unwrap() })
}

/// Compares `d(2 delta1, delta2)` with `2^(m^2) d(delta1, delta2)`.
pub fn doubling_check(sys: &MahlerSystem, alpha: &Rational, delta1: u32, delta2: u32) -> Result<DoublingReport> {
    let opts = EngineOptions::default();
    sys.require_regular(alpha)?;
    let (rank, _) = stabilized_rank(sys, alpha, delta1, delta2, &opts)?;
    let (rank_doubled, _) = stabilized_rank(sys, alpha, 2 * delta1, delta2, &opts)?;
    let mm = (sys.m * sys.m) as u32;
    let factor = if mm >= 128 { u128::MAX } else { 1u128 << mm };
    let holds = (rank_doubled as u128) <= factor.saturating_mul(rank as u128);
    Ok(DoublingReport { delta1, delta2, rank, rank_doubled, factor, holds })
}

/// Evaluates `P(A_l(alpha) A_k(alpha^(q^l)), alpha^(q^(k+l)))` exactly for
/// each `l` and reports whether all values vanish.
pub fn shift_check(
    sys: &MahlerSystem,
    alpha: &Rational,
    basis: &MonomialBasis,
    p: &SparseVec,
    k: u32,
    ells: &[u32],
) -> Result<bool> {
    for &l in ells {
        let a_l = sys.eval_cocycle(alpha, l)?;
        let shifted = rat_pow(alpha, (sys.q as u64).pow(l));
        let a_k = sys.eval_cocycle(&shifted, k)?;
        let y = a_l.mul(&a_k)?;
        let x = rat_pow(&shifted, (sys.q as u64).pow(k));
        if !eval_sparse(basis, p, &y, &x).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use crate::polyring::{Poly, RatFunc};
    use crate::scalar::{frac, int};

    fn trivial() -> MahlerSystem {
        MahlerSystem::new("one", 2, Matrix::from_rows(vec![vec![RatFunc::constant(int(1))]]).unwrap(), None, None).unwrap()
    }

    fn poly(c: &[i64]) -> RatFunc {
        RatFunc::from_poly(Poly::from_i64(c))
    }

    fn cantor2() -> MahlerSystem {
        let a = Matrix::from_rows(vec![vec![poly(&[1]), poly(&[0, 1])], vec![poly(&[0]), poly(&[1])]]).unwrap();
        MahlerSystem::new("cantor2", 2, a, Some(vec![int(0), int(1)]), None).unwrap()
    }

    fn thue_morse() -> MahlerSystem {
        MahlerSystem::new("tm", 2, Matrix::from_rows(vec![vec![poly(&[1, -1])]]).unwrap(), Some(vec![int(1)]), None).unwrap()
    }

    #[test]
    fn eval_matrix_trivial_rows() {
        let m = eval_matrix(&trivial(), &frac(1, 2), 1, 1, &[1, 2]).unwrap();
        assert_eq!(m.row(0), &[int(1), frac(1, 4), int(1), frac(1, 4)][..]);
        assert_eq!(m.row(1), &[int(1), frac(1, 16), int(1), frac(1, 16)][..]);
    }

    #[test]
    fn trivial_kernel_is_y_minus_one() {
        let kb = kernel_basis(&trivial(), &frac(1, 2), 1, 3).unwrap();
        assert_eq!(kb.dim(), 4);
        assert_eq!(kb.rank, 4);
        for (lambda, v) in kb.basis.iter().enumerate() {
            assert_eq!(v, &vec![(lambda, int(-1)), (4 + lambda, int(1))]);
        }
        assert_eq!(kb.held_out_verified.len(), 4);
    }

    #[test]
    fn thue_morse_kernel_matches_exact_oracle() {
        let ks: Vec<u32> = (3..=10).collect();
        let m = eval_matrix(&thue_morse(), &frac(1, 2), 1, 1, &ks).unwrap();
        let oracle = linalg::nullspace(&m.to_rows(), m.cols());
        assert_eq!(oracle.len(), 0);
        let kb = kernel_basis(&thue_morse(), &frac(1, 2), 1, 1).unwrap();
        assert_eq!(kb.dim(), 0);
    }

    #[test]
    fn cantor_kernel_agrees_with_exact_nullspace() {
        let sys = cantor2();
        let alpha = frac(1, 2);
        let kb = kernel_basis(&sys, &alpha, 1, 2).unwrap();
        let ks: Vec<u32> = (1..=12).collect();
        let m = eval_matrix(&sys, &alpha, 1, 2, &ks).unwrap();
        let r = linalg::rref(&m.to_rows(), m.cols());
        assert_eq!(r.rank(), kb.rank);
        assert_eq!(r.pivots, kb.pivots);
        let basis = kb.monomial_basis();
        for v in &kb.basis {
            assert!(is_member_sparse(&sys, &alpha, &basis, v, &[13, 14]).unwrap());
        }
        assert_eq!(kb.dim(), 42);
    }

    #[test]
    fn trivial_profile() {
        let d: Vec<u32> = (1..=8).collect();
        let p = dim_profile(&trivial(), &frac(1, 2), 1, &d).unwrap();
        let ranks: Vec<usize> = p.rows.iter().map(|r| r.1).collect();
        assert_eq!(ranks, (2..=9).collect::<Vec<_>>());
        assert!(p.rows.iter().all(|r| r.2 == 1));
        assert_eq!(p.c1_estimate, 1);
    }

    #[test]
    fn doubling_trivial() {
        let r = doubling_check(&trivial(), &frac(1, 2), 1, 3).unwrap();
        assert_eq!((r.rank, r.rank_doubled, r.factor), (4, 4, 2));
        assert!(r.holds);
        let r0 = doubling_check(&trivial(), &frac(1, 2), 0, 3).unwrap();
        assert!(r0.holds);
    }

    #[test]
    fn membership_and_shift() {
        let sys = trivial();
        let alpha = frac(1, 2);
        assert!(is_member(&sys, &alpha, 1, 0, &[int(-1), int(1)], &[1, 5, 9]).unwrap());
        assert!(!is_member(&sys, &alpha, 1, 0, &[int(1), int(0)], &[1]).unwrap());
        assert!(is_member(&sys, &alpha, 1, 0, &[int(0), int(0)], &[1]).unwrap());
        let b = MonomialBasis::new(1, 1, 0).unwrap();
        assert!(shift_check(&sys, &alpha, &b, &vec![(0, int(-1)), (1, int(1))], 2, &[3, 4]).unwrap());
        assert!(!shift_check(&sys, &alpha, &b, &vec![(0, int(1))], 0, &[1]).unwrap());
    }

    #[test]
    fn kernel_json_roundtrip() {
        let kb = kernel_basis(&trivial(), &frac(1, 2), 1, 1).unwrap();
        let text = serde_json::to_string(&kb).unwrap();
        assert!(text.contains("[[0,\"-1\"],[2,\"1\"]]"));
        assert_eq!(serde_json::from_str::<KernelBasis>(&text).unwrap(), kb);
        assert_eq!(kb.format_vector(&kb.basis[0]), "-1 + y11");
    }
}
