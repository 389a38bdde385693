//! Linear Mahler systems `f(z) = A(z) f(z^q)`: cocycles, values along the
//! orbit `alpha^(q^k)`, power-series solutions and regularity certificates.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::budget::{bit_budget, DEFAULT_DEGREE_BUDGET};
use crate::error::{Error, FailureKind, Result};
use crate::linalg;
use crate::matrix::Matrix;
use crate::modular::{add_mod, inv_mod, mul_mod, rat_mod};
use crate::polyring::{series_of_ratfunc, Poly, RatFunc, TruncSeries};
use crate::ring::Ring;
use crate::scalar::{bit_size, format_rational, rat_abs, serde_rational, Rational};

/// Asserted growth bound `|c_n(f_i)| <= C * rho^n` on solution coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffBound {
    #[serde(rename = "C", with = "serde_rational")]
    pub c: Rational,
    #[serde(with = "serde_rational")]
    pub rho: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MahlerSystem {
    pub name: String,
    pub q: usize,
    pub m: usize,
    pub a: Matrix<RatFunc>,
    pub f0: Option<Vec<Rational>>,
    pub coeff_bound: Option<CoeffBound>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    #[serde(default)]
    name: String,
    q: usize,
    m: usize,
    #[serde(rename = "A")]
    a: Matrix<RatFunc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    f0: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coeff_bound: Option<CoeffBound>,
}

impl Serialize for MahlerSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SystemFile {
            name: self.name.clone(),
            q: self.q,
            m: self.m,
            a: self.a.clone(),
            f0: self.f0.as_ref().map(|v| v.iter().map(format_rational).collect()),
            coeff_bound: self.coeff_bound.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MahlerSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SystemFile::deserialize(d)?;
        let f0 = match raw.f0 {
            Some(v) => Some(
                v.iter()
                    .map(|t| crate::scalar::parse_rational(t))
                    .collect::<Result<Vec<_>>>()
                    .map_err(serde::de::Error::custom)?,
            ),
            None => None,
        };
        if raw.a.rows() != raw.m || raw.a.cols() != raw.m {
            return Err(serde::de::Error::custom(format!(
                "A is {}x{} but m = {}",
                raw.a.rows(),
                raw.a.cols(),
                raw.m
            )));
        }
        MahlerSystem::new(raw.name, raw.q, raw.a, f0, raw.coeff_bound).map_err(serde::de::Error::custom)
    }
}

/// Outcome of [`MahlerSystem::certify_regular`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityCertificate {
    pub regular: bool,
    #[serde(with = "serde_rational")]
    pub alpha: Rational,
    /// `K`: every `k < K` was checked exactly, and `|alpha|^(q^K) < r0`.
    pub checked_upto: u32,
    #[serde(with = "serde_rational")]
    pub tail_bound_radius: Rational,
    pub failing_k: Option<u32>,
    pub failure_kind: Option<FailureKind>,
}

impl MahlerSystem {
    pub fn new(
        name: impl Into<String>,
        q: usize,
        a: Matrix<RatFunc>,
        f0: Option<Vec<Rational>>,
        coeff_bound: Option<CoeffBound>,
    ) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidSystem(format!("q must be >= 2, got {q}")));
        }
        if !a.is_square() || a.rows() == 0 {
            return Err(Error::InvalidSystem("A must be a nonempty square matrix".into()));
        }
        let m = a.rows();
        if a.det_field().is_ring_zero() {
            return Err(Error::InvalidSystem("det A is identically zero".into()));
        }
        if let Some(v) = &f0 {
            if v.len() != m {
                return Err(Error::DimensionMismatch(format!("f0 has {} entries, m = {m}", v.len())));
            }
        }
        if let Some(b) = &coeff_bound {
            if b.c.is_negative() || b.rho.is_negative() {
                return Err(Error::InvalidSystem("coefficient bound must be nonnegative".into()));
            }
        }
        let sys = MahlerSystem { name: name.into(), q, m, a, f0, coeff_bound };
        if let (Some(f0), Some(a0)) = (&sys.f0, sys.a_at_zero()) {
            if !is_fixed(&a0, f0) {
                return Err(Error::InconsistentInitialVector);
            }
        }
        Ok(sys)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("system serializes")
    }

    /// Monic lcm `D(z)` of the entry denominators.
    pub fn denominator_lcm(&self) -> Poly {
        self.a.entries().iter().fold(Poly::one(), |acc, r| acc.lcm(r.den()))
    }

    /// `B = D * A` as a polynomial matrix.
    pub fn cleared_matrix(&self) -> Matrix<Poly> {
        let d = self.denominator_lcm();
        self.a.map(|r| (&d * r.num()).div_rem(r.den()).0)
    }

    /// Largest numerator or denominator degree among the entries.
    pub fn degree(&self) -> usize {
        self.a.entries().iter().map(RatFunc::degree).max().unwrap_or(0)
    }

    /// `A(0)`, or `None` if some entry has a pole at the origin.
    pub fn a_at_zero(&self) -> Option<Matrix<Rational>> {
        self.eval_at(&Rational::zero()).ok()
    }

    /// `A(x)`, or the kind of failure if `A` is not defined there.
    pub fn eval_at(&self, x: &Rational) -> std::result::Result<Matrix<Rational>, FailureKind> {
        self.a.try_map(|r| r.eval(x).ok_or(FailureKind::Pole))
    }

    /// Symbolic cocycle `A_k(z) = A(z) A(z^q) ... A(z^(q^(k-1)))`.
    pub fn cocycle(&self, k: u32) -> Result<Matrix<RatFunc>> {
        self.cocycle_with_budget(k, DEFAULT_DEGREE_BUDGET)
    }

    pub fn cocycle_with_budget(&self, k: u32, degree_budget: u64) -> Result<Matrix<RatFunc>> {
        let deg = self.degree().max(1) as u64;
        let needed = (self.q as u64).checked_pow(k).and_then(|p| p.checked_mul(deg)).unwrap_or(u64::MAX);
        if k > 0 && needed > degree_budget {
            return Err(Error::DegreeBudgetExceeded { needed, budget: degree_budget });
        }
        let mut acc = Matrix::identity(self.m);
        let mut step = 1usize;
        for _ in 0..k {
            let shifted = self.a.map(|r| r.substitute_power(step));
            acc = acc.mul(&shifted)?;
            step *= self.q;
        }
        Ok(acc)
    }

    /// Exact value `A_k(alpha)`, computed incrementally along the orbit.
    pub fn eval_cocycle(&self, alpha: &Rational, k: u32) -> Result<Matrix<Rational>> {
        let mut chain = CocycleChain::new(self, alpha.clone());
        while chain.k() < k {
            chain.advance()?;
        }
        Ok(chain.value().clone())
    }

    /// The initial vector: `f0` if given, otherwise the normalized generator of
    /// `ker(A(0) - I)` when that kernel has dimension at most one.
    pub fn resolve_f0(&self) -> Result<Vec<Rational>> {
        let a0 = self.a_at_zero().ok_or(Error::PoleAtOrigin)?;
        if let Some(f0) = &self.f0 {
            return if is_fixed(&a0, f0) { Ok(f0.clone()) } else { Err(Error::InconsistentInitialVector) };
        }
        let shifted: Vec<Vec<Rational>> = (0..self.m)
            .map(|i| (0..self.m).map(|j| a0.get(i, j) - if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        let ker = linalg::nullspace(&shifted, self.m);
        match ker.len() {
            0 => Ok(vec![Rational::zero(); self.m]),
            1 => {
                let v = &ker[0];
                let lead = v.iter().find(|c| !c.is_zero()).unwrap().clone();
                Ok(v.iter().map(|c| c / &lead).collect())
            }
            dim => Err(Error::AmbiguousInitialVector { dim }),
        }
    }

    /// Power-series solution with `f(0) = f0`, modulo `z^order`.
    pub fn solve_series(&self, order: usize) -> Result<Vec<TruncSeries>> {
        if self.a.entries().iter().any(RatFunc::has_pole_at_zero) {
            return Err(Error::PoleAtOrigin);
        }
        let f0 = self.resolve_f0()?;
        let m = self.m;
        let series: Vec<TruncSeries> =
            self.a.entries().iter().map(|r| series_of_ratfunc(r, order)).collect::<Result<_>>()?;
        // nonzero coefficient matrices of A(z), by exponent
        let mut terms: Vec<(usize, Vec<Rational>)> = Vec::new();
        for l in 0..order {
            let mat: Vec<Rational> = series.iter().map(|s| s.coeff(l).clone()).collect();
            if mat.iter().any(|c| !c.is_zero()) {
                terms.push((l, mat));
            }
        }
        let mut coeffs: Vec<Vec<Rational>> = Vec::with_capacity(order);
        if order > 0 {
            coeffs.push(f0);
        }
        for n in 1..order {
            let mut c = vec![Rational::zero(); m];
            for (l, mat) in &terms {
                if *l > n || (n - l) % self.q != 0 {
                    continue;
                }
                let prev = &coeffs[(n - l) / self.q];
                if prev.iter().all(Zero::is_zero) {
                    continue;
                }
                for i in 0..m {
                    for j in 0..m {
                        let a = &mat[i * m + j];
                        if !a.is_zero() && !prev[j].is_zero() {
                            c[i] += a * &prev[j];
                        }
                    }
                }
            }
            coeffs.push(c);
        }
        Ok((0..m).map(|i| TruncSeries::new(coeffs.iter().map(|c| c[i].clone()).collect())).collect())
    }

    /// Largest `N'` with `D(z) f(z) - B(z) f(z^q) = 0 mod z^N'`, capped at the
    /// common order of the inputs.
    pub fn verify_solution(&self, f: &[TruncSeries]) -> usize {
        if f.len() != self.m {
            return 0;
        }
        let order = f.iter().map(TruncSeries::order).min().unwrap_or(0);
        let f: Vec<TruncSeries> = f.iter().map(|s| s.truncate(order)).collect();
        let d = self.denominator_lcm();
        let b = self.cleared_matrix();
        let fq: Vec<TruncSeries> = f.iter().map(|s| s.substitute_power(self.q)).collect();
        let mut first_bad = order;
        for i in 0..self.m {
            let mut r = f[i].mul_poly(&d);
            for j in 0..self.m {
                if !b.get(i, j).is_zero() {
                    r = r.sub(&fq[j].mul_poly(b.get(i, j)));
                }
            }
            first_bad = first_bad.min(r.valuation());
        }
        first_bad
    }

    /// Decides regularity of `alpha` for every `k >= 0` with finitely many
    /// exact checks.
    pub fn certify_regular(&self, alpha: &Rational) -> Result<RegularityCertificate> {
        if alpha.is_zero() || rat_abs(alpha) >= Rational::one() {
            return Err(Error::AlphaOutOfRange(format_rational(alpha)));
        }
        let d = self.denominator_lcm();
        let det = self.a.det_field();
        let phi = (&d * det.num()).strip_z_power();
        let r0 = root_modulus_lower_bound(&phi);
        let abs_alpha = rat_abs(alpha);
        let mut big_k = 0u32;
        let mut t = abs_alpha.clone();
        while t >= r0 {
            t = crate::scalar::rat_pow(&t, self.q as u64);
            big_k += 1;
        }
        let mut cert = RegularityCertificate {
            regular: true,
            alpha: alpha.clone(),
            checked_upto: big_k,
            tail_bound_radius: r0,
            failing_k: None,
            failure_kind: None,
        };
        let mut x = alpha.clone();
        for k in 0..big_k {
            if d.eval(&x).is_zero() {
                cert.regular = false;
                cert.failing_k = Some(k);
                cert.failure_kind = Some(FailureKind::Pole);
                break;
            }
            if phi.eval(&x).is_zero() {
                cert.regular = false;
                cert.failing_k = Some(k);
                cert.failure_kind = Some(FailureKind::Singular);
                break;
            }
            x = crate::scalar::rat_pow(&x, self.q as u64);
        }
        Ok(cert)
    }

    /// Fails with `NotRegularAt` unless `alpha` is certified regular.
    pub fn require_regular(&self, alpha: &Rational) -> Result<RegularityCertificate> {
        let cert = self.certify_regular(alpha)?;
        if !cert.regular {
            return Err(Error::NotRegularAt(
                format_rational(alpha),
                cert.failure_kind.unwrap(),
                cert.failing_k.unwrap(),
            ));
        }
        Ok(cert)
    }

    /// The system of size `m + 1` with matrix `diag(1, A)` and unit first
    /// coordinate.
    pub fn augment_with_unit(&self) -> MahlerSystem {
        let a = Matrix::identity(1).direct_sum(&self.a);
        let f0 = self.resolve_f0().ok().map(|v| {
            let mut out = vec![Rational::one()];
            out.extend(v);
            out
        });
        let coeff_bound = self.coeff_bound.as_ref().map(|b| CoeffBound {
            c: if b.c < Rational::one() { Rational::one() } else { b.c.clone() },
            rho: b.rho.clone(),
        });
        MahlerSystem { name: format!("{}+unit", self.name), q: self.q, m: self.m + 1, a, f0, coeff_bound }
    }

    /// Entries of `A` reduced modulo `p`, for evaluation over F_p.
    pub fn mod_image(&self, p: u64) -> Option<ModSystem> {
        let conv = |poly: &Poly| poly.coeffs().iter().map(|c| rat_mod(c, p)).collect::<Option<Vec<u64>>>();
        let mut entries = Vec::with_capacity(self.m * self.m);
        for r in self.a.entries() {
            entries.push((conv(r.num())?, conv(r.den())?));
        }
        Some(ModSystem { p, q: self.q, m: self.m, entries })
    }
}

fn is_fixed(a0: &Matrix<Rational>, f0: &[Rational]) -> bool {
    a0.apply(f0).map(|v| v == f0).unwrap_or(false)
}

/// `|a0| / (|a0| + max_{i>=1} |a_i|)` for `Phi(0) = a0 != 0`; every nonzero
/// root of `Phi` has modulus at least this. Constants give 1.
pub fn root_modulus_lower_bound(phi: &Poly) -> Rational {
    let a0 = rat_abs(&phi.coeff(0));
    let rest = phi.coeffs().iter().skip(1).map(rat_abs).max().unwrap_or_else(Rational::zero);
    if rest.is_zero() {
        return Rational::one();
    }
    &a0 / (&a0 + rest)
}

/// Exact walk along `k -> (A_k(alpha), alpha^(q^k))`.
#[derive(Clone, Debug)]
pub struct CocycleChain<'a> {
    sys: &'a MahlerSystem,
    alpha: Rational,
    k: u32,
    value: Matrix<Rational>,
    point: Rational,
}

impl<'a> CocycleChain<'a> {
    pub fn new(sys: &'a MahlerSystem, alpha: Rational) -> Self {
        CocycleChain { sys, point: alpha.clone(), alpha, k: 0, value: Matrix::identity(sys.m) }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `A_k(alpha)`.
    pub fn value(&self) -> &Matrix<Rational> {
        &self.value
    }

    /// `alpha^(q^k)`.
    pub fn point(&self) -> &Rational {
        &self.point
    }

    /// Moves from `k` to `k + 1`.
    pub fn advance(&mut self) -> Result<()> {
        let bits = bit_size(&self.point).saturating_mul(self.sys.q as u64);
        let est = bits.saturating_mul((self.sys.degree() as u64).max(1));
        if est > bit_budget() {
            return Err(Error::BitBudgetExceeded { k: self.k + 1, bits: est, budget: bit_budget() });
        }
        let a = self.sys.eval_at(&self.point).map_err(|kind| {
            Error::NotRegularAt(format_rational(&self.alpha), kind, self.k)
        })?;
        if a.det().is_zero() {
            return Err(Error::NotRegularAt(format_rational(&self.alpha), FailureKind::Singular, self.k));
        }
        self.value = self.value.mul(&a)?;
        self.point = crate::scalar::rat_pow(&self.point, self.sys.q as u64);
        self.k += 1;
        Ok(())
    }

    /// Cost estimate, in bits, of the point at step `k`.
    pub fn bits_at(alpha: &Rational, q: usize, k: u32) -> u64 {
        let qk = (q as u64).checked_pow(k).unwrap_or(u64::MAX);
        bit_size(alpha).saturating_mul(qk)
    }
}

/// The matrix `A(z)` reduced modulo a prime.
#[derive(Clone, Debug)]
pub struct ModSystem {
    pub p: u64,
    pub q: usize,
    pub m: usize,
    entries: Vec<(Vec<u64>, Vec<u64>)>,
}

impl ModSystem {
    fn horner(coeffs: &[u64], x: u64, p: u64) -> u64 {
        coeffs.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
    }

    /// `A(x) mod p`, or `None` if a denominator vanishes modulo `p`.
    pub fn eval(&self, x: u64) -> Option<Vec<u64>> {
        self.entries
            .iter()
            .map(|(n, d)| {
                let dv = inv_mod(Self::horner(d, x, self.p), self.p)?;
                Some(mul_mod(Self::horner(n, x, self.p), dv, self.p))
            })
            .collect()
    }

    pub fn mat_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let m = self.m;
        let p = self.p;
        let mut out = vec![0u64; m * m];
        for i in 0..m {
            for l in 0..m {
                let x = a[i * m + l];
                if x == 0 {
                    continue;
                }
                for j in 0..m {
                    out[i * m + j] = add_mod(out[i * m + j], mul_mod(x, b[l * m + j], p), p);
                }
            }
        }
        out
    }

    /// `(A_k(alpha), alpha^(q^k)) mod p` for `k = 0..=kmax`, or `None` if the
    /// prime is unlucky for this orbit.
    pub fn orbit(&self, alpha: &Rational, kmax: u32) -> Option<Vec<(Vec<u64>, u64)>> {
        let p = self.p;
        let m = self.m;
        let mut x = rat_mod(alpha, p)?;
        let mut value: Vec<u64> = (0..m * m).map(|i| u64::from(i % (m + 1) == 0)).collect();
        let mut out = Vec::with_capacity(kmax as usize + 1);
        out.push((value.clone(), x));
        for _ in 0..kmax {
            let a = self.eval(x)?;
            value = self.mat_mul(&value, &a);
            x = crate::modular::pow_mod(x, self.q as u64, p);
            out.push((value.clone(), x));
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    fn poly(c: &[i64]) -> RatFunc {
        RatFunc::from_poly(Poly::from_i64(c))
    }

    fn thue_morse() -> MahlerSystem {
        MahlerSystem::new("tm", 2, Matrix::new(1, 1, vec![poly(&[1, -1])]), None, None).unwrap()
    }

    fn cantor2() -> MahlerSystem {
        let a = Matrix::new(2, 2, vec![poly(&[1]), poly(&[0, 1]), poly(&[]), poly(&[1])]);
        MahlerSystem::new("c2", 2, a, Some(vec![int(0), int(1)]), None).unwrap()
    }

    #[test]
    fn cocycle_examples() {
        let c = cantor2().cocycle(2).unwrap();
        assert_eq!(c.get(0, 1), &poly(&[0, 1, 1]));
        let t = thue_morse().cocycle(3).unwrap();
        let expect = &(&Poly::from_i64(&[1, -1]) * &Poly::from_i64(&[1, 0, -1])) * &Poly::from_i64(&[1, 0, 0, 0, -1]);
        assert_eq!(t.get(0, 0), &RatFunc::from_poly(expect));
        assert!(thue_morse().cocycle(0).unwrap().is_identity());
    }

    #[test]
    fn eval_cocycle_examples() {
        assert_eq!(cantor2().eval_cocycle(&frac(1, 2), 2).unwrap().get(0, 1), &frac(3, 4));
        assert_eq!(thue_morse().eval_cocycle(&frac(1, 2), 2).unwrap().get(0, 0), &frac(3, 8));
    }

    #[test]
    fn solve_examples() {
        let tm = thue_morse().solve_series(8).unwrap();
        let expect: Vec<Rational> = [1, -1, -1, 1, -1, 1, 1, -1].iter().map(|&c| int(c)).collect();
        assert_eq!(tm[0].coeffs(), &expect[..]);
        let c = cantor2().solve_series(9).unwrap();
        let g: Vec<Rational> = [0, 1, 1, 0, 1, 0, 0, 0, 1].iter().map(|&c| int(c)).collect();
        assert_eq!(c[0].coeffs(), &g[..]);
        let two = MahlerSystem::new("two", 2, Matrix::new(1, 1, vec![poly(&[2])]), None, None).unwrap();
        assert!(two.solve_series(5).unwrap()[0].is_zero());
    }

    #[test]
    fn verify_examples() {
        let sys = cantor2();
        let mut f = sys.solve_series(64).unwrap();
        assert_eq!(sys.verify_solution(&f), 64);
        let c3 = f[0].coeff(3) + int(1);
        f[0].set_coeff(3, c3);
        assert_eq!(sys.verify_solution(&f), 3);
        assert_eq!(sys.verify_solution(&[TruncSeries::zero(10), TruncSeries::zero(10)]), 10);
    }

    #[test]
    fn certificates() {
        let c = cantor2().certify_regular(&frac(1, 2)).unwrap();
        assert!(c.regular);
        assert_eq!(c.checked_upto, 0);
        let t = thue_morse().certify_regular(&frac(1, 3)).unwrap();
        assert!(t.regular);
        assert_eq!(t.tail_bound_radius, frac(1, 2));
        assert_eq!(t.checked_upto, 0);
        let bad = MahlerSystem::new("b", 2, Matrix::new(1, 1, vec![poly(&[1, -16])]), None, None).unwrap();
        let c = bad.certify_regular(&frac(1, 4)).unwrap();
        assert!(!c.regular);
        assert_eq!(c.failing_k, Some(1));
        assert_eq!(c.failure_kind, Some(FailureKind::Singular));
        assert_eq!(c.checked_upto, 2);
        assert!(matches!(bad.certify_regular(&int(1)), Err(Error::AlphaOutOfRange(_))));
    }

    #[test]
    fn pole_is_reported() {
        // A = 1 / (1 - 4z): pole at alpha^2 = 1/4 for alpha = 1/2
        let a = Matrix::new(1, 1, vec![RatFunc::new(Poly::one(), Poly::from_i64(&[1, -4]))]);
        let sys = MahlerSystem::new("p", 2, a, None, None).unwrap();
        let c = sys.certify_regular(&frac(1, 2)).unwrap();
        assert_eq!((c.failing_k, c.failure_kind), (Some(1), Some(FailureKind::Pole)));
        assert!(matches!(sys.eval_cocycle(&frac(1, 2), 3), Err(Error::NotRegularAt(_, FailureKind::Pole, 1))));
    }

    #[test]
    fn augmentation() {
        let aug = thue_morse().augment_with_unit();
        assert_eq!(aug.a.get(0, 0), &poly(&[1]));
        assert_eq!(aug.a.get(1, 1), &poly(&[1, -1]));
        assert!(aug.a.get(0, 1).is_ring_zero());
        let twice = cantor2().augment_with_unit().augment_with_unit();
        let f = twice.solve_series(16).unwrap();
        assert_eq!(f[0], TruncSeries::constant(int(1), 16));
        assert_eq!(f[1], TruncSeries::constant(int(1), 16));
    }

    #[test]
    fn json_roundtrip() {
        let text = r#"{"name": "c2", "q": 2, "m": 2, "A": [[["1"], ["0", "1"]], [[], ["1"]]], "f0": ["0", "1"],
            "coeff_bound": {"C": "1", "rho": "1"}}"#;
        let sys = MahlerSystem::from_json(text).unwrap();
        assert_eq!(MahlerSystem::from_json(&sys.to_json()).unwrap(), sys);
        assert!(MahlerSystem::from_json(r#"{"q": 2, "m": 1, "A": [[["1"]]], "extra": 1}"#).is_err());
        assert!(matches!(
            MahlerSystem::from_json(r#"{"q": 2, "m": 1, "A": [[["2"]]], "f0": ["1"]}"#),
            Err(Error::Parse(_))
        ));
    }
}
