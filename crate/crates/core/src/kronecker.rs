//! Kronecker powers of Mahler systems and lifting of homogeneous algebraic
//! relations through them.
//!
//! Coordinate `i` of `f^{(x)d}` is the product `f_{i_1} ... f_{i_d}` where
//! `i_1 ... i_d` are the base-`m` digits of `i`, most significant first.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::budget::DEFAULT_SIZE_BUDGET;
use crate::error::{Error, Result};
use crate::lift::{lift_from_series, verify_value_relation, ValueCheck, ValueRelation};
use crate::matrix::Matrix;
use crate::polyring::{Poly, TruncSeries};
use crate::ring::Ring;
use crate::scalar::{format_rational, parse_rational, rat_abs, rat_pow, Rational};
use crate::system::{CoeffBound, MahlerSystem};

fn check_size(m: usize, d: usize) -> Result<usize> {
    let size = (m as u64).checked_pow(d as u32).unwrap_or(u64::MAX);
    if size > DEFAULT_SIZE_BUDGET {
        return Err(Error::SizeBudgetExceeded { needed: size, budget: DEFAULT_SIZE_BUDGET });
    }
    Ok(size as usize)
}

/// `A (x) ... (x) A`, `d` factors, folded from the left.
pub fn kron_power<T: Ring>(a: &Matrix<T>, d: usize) -> Result<Matrix<T>> {
    if d == 0 {
        return Err(Error::InvalidSystem("Kronecker power needs d >= 1".into()));
    }
    check_size(a.rows().max(a.cols()), d)?;
    let mut acc = a.clone();
    for _ in 1..d {
        acc = acc.kron(a);
    }
    Ok(acc)
}

pub fn kron_vector(v: &[Rational], d: usize) -> Vec<Rational> {
    let mut acc = vec![Rational::one()];
    for _ in 0..d {
        acc = acc.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect();
    }
    acc
}

/// The system of size `m^d` satisfied by `f^{(x)d}`. The coefficient bound is
/// dropped; see [`kron_coeff_bound`].
pub fn kron_system(sys: &MahlerSystem, d: usize) -> Result<MahlerSystem> {
    if d == 1 {
        return Ok(sys.clone());
    }
    let a = kron_power(&sys.a, d)?;
    let f0 = sys.resolve_f0().ok().map(|v| kron_vector(&v, d));
    MahlerSystem::new(format!("{}^(x){d}", sys.name), sys.q, a, f0, None)
}

/// Coefficient bound for products of `d` solution series, valid for the
/// tail at `alpha`: `C' rho'^n` with `rho' = rho (1 + eps)` halfway (in the
/// ratio sense) between `rho` and `1/|alpha|`, and
/// `C' = C^d max_n (n + 1)^(d - 1) / (1 + eps)^n`.
pub fn kron_coeff_bound(bound: &CoeffBound, d: usize, alpha: &Rational) -> Result<CoeffBound> {
    let r = &bound.rho * rat_abs(alpha);
    if r >= Rational::one() {
        return Err(Error::RhoAlphaNotContracting(format_rational(&r)));
    }
    if d <= 1 {
        return Ok(bound.clone());
    }
    if bound.rho.is_zero() {
        return Ok(CoeffBound { c: rat_pow(&bound.c, d as u64), rho: Rational::zero() });
    }
    let growth = (Rational::one() + Rational::one() / &r) / Rational::from_integer(2.into());
    let term = |n: u64| rat_pow(&Rational::from_integer((n + 1).into()), d as u64 - 1) / rat_pow(&growth, n);
    let mut n = 0u64;
    let mut best = term(0);
    loop {
        let next = term(n + 1);
        if next < best {
            break;
        }
        best = next;
        n += 1;
    }
    Ok(CoeffBound { c: rat_pow(&bound.c, d as u64) * best, rho: &bound.rho * growth })
}

/// Partition of the Kronecker coordinates by the monomial they represent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialIndexMap {
    pub m: usize,
    pub d: usize,
    /// `(lambda_j, I_j)`, ordered by representative `min I_j`.
    pub classes: Vec<(Vec<u32>, Vec<usize>)>,
}

impl MonomialIndexMap {
    pub fn new(m: usize, d: usize) -> Result<Self> {
        let size = check_size(m, d)?;
        let mut by_exp: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
        for i in 0..size {
            by_exp.entry(Self::exponent_of(m, d, i)).or_default().push(i);
        }
        let mut classes: Vec<(Vec<u32>, Vec<usize>)> = by_exp.into_iter().collect();
        classes.sort_by_key(|c| c.1[0]);
        Ok(MonomialIndexMap { m, d, classes })
    }

    pub fn exponent_of(m: usize, d: usize, mut i: usize) -> Vec<u32> {
        let mut e = vec![0u32; m];
        for _ in 0..d {
            e[i % m] += 1;
            i /= m;
        }
        e
    }

    pub fn representative(&self, lambda: &[u32]) -> Option<usize> {
        self.classes.iter().find(|c| c.0 == lambda).map(|c| c.1[0])
    }
}

/// Homogeneous polynomial in `X_1 .. X_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneousPoly {
    pub m: usize,
    pub degree: usize,
    #[serde(with = "terms_serde")]
    pub terms: BTreeMap<Vec<u32>, Rational>,
}

mod terms_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(t: &BTreeMap<Vec<u32>, Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<(&Vec<u32>, String)> = t.iter().map(|(k, c)| (k, format_rational(c))).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<Vec<u32>, Rational>, D::Error> {
        let v: Vec<(Vec<u32>, String)> = Vec::deserialize(d)?;
        v.into_iter().map(|(k, c)| parse_rational(&c).map(|r| (k, r)).map_err(serde::de::Error::custom)).collect()
    }
}

type Terms = BTreeMap<Vec<u32>, Rational>;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    m: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at position {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().map_err(|_| self.err("expected a number"))
    }

    fn add(a: &mut Terms, b: Terms, sign: bool) {
        for (k, c) in b {
            let e = a.entry(k.clone()).or_insert_with(Rational::zero);
            if sign {
                *e += c;
            } else {
                *e -= c;
            }
            if e.is_zero() {
                a.remove(&k);
            }
        }
    }

    fn mul(&self, a: &Terms, b: &Terms) -> Terms {
        let mut out = Terms::new();
        for (ka, ca) in a {
            for (kb, cb) in b {
                let k: Vec<u32> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
                Self::add(&mut out, Terms::from([(k, ca * cb)]), true);
            }
        }
        out
    }

    fn constant(&self, c: Rational) -> Terms {
        if c.is_zero() {
            Terms::new()
        } else {
            Terms::from([(vec![0; self.m], c)])
        }
    }

    fn expr(&mut self) -> Result<Terms> {
        let mut acc = Terms::new();
        let mut sign = true;
        if let Some(b'-' | b'+') = self.peek() {
            sign = self.src[self.pos] == b'+';
            self.pos += 1;
        }
        loop {
            let t = self.term()?;
            Self::add(&mut acc, t, sign);
            match self.peek() {
                Some(b'+') => sign = true,
                Some(b'-') => sign = false,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Terms> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.power()?;
                    acc = self.mul(&acc, &f);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let f = self.power()?;
                    let c = match f.len() {
                        1 if f.keys().next().unwrap().iter().all(|&e| e == 0) => f.values().next().unwrap().clone(),
                        0 => return Err(self.err("division by zero")),
                        _ => return Err(self.err("only division by a nonzero number is supported")),
                    };
                    acc = acc.into_iter().map(|(k, v)| (k, v / &c)).collect();
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Terms> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.number()?;
            if e > 64 {
                return Err(self.err("exponent too large"));
            }
            let mut acc = self.constant(Rational::one());
            for _ in 0..e {
                acc = self.mul(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Terms> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'X' | b'x') => {
                self.pos += 1;
                let i = self.number()? as usize;
                if i == 0 || i > self.m {
                    return Err(self.err(&format!("variable X{i} out of range 1..={}", self.m)));
                }
                let mut k = vec![0u32; self.m];
                k[i - 1] = 1;
                Ok(Terms::from([(k, Rational::one())]))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                Ok(self.constant(Rational::from_integer(n.into())))
            }
            _ => Err(self.err("expected a number, a variable Xk or '('")),
        }
    }
}

impl HomogeneousPoly {
    /// Parses e.g. `X1*X3 - X2*X3 + 1/2*X3^2` over `m` variables.
    pub fn parse(text: &str, m: usize) -> Result<Self> {
        let mut p = Parser { src: text.as_bytes(), pos: 0, m };
        let terms = p.expr()?;
        if p.peek().is_some() {
            return Err(p.err("unexpected trailing input"));
        }
        Self::from_terms(m, terms)
    }

    pub fn from_terms(m: usize, terms: BTreeMap<Vec<u32>, Rational>) -> Result<Self> {
        let degrees: std::collections::BTreeSet<u32> = terms.keys().map(|k| k.iter().sum()).collect();
        if degrees.len() > 1 {
            return Err(Error::Parse(format!(
                "polynomial is not homogeneous (degrees {degrees:?}); augment the system with a unit coordinate and homogenize with it"
            )));
        }
        let degree = degrees.into_iter().next().unwrap_or(0) as usize;
        if degree == 0 {
            return Err(Error::Parse("polynomial must have positive degree".into()));
        }
        Ok(HomogeneousPoly { m, degree, terms })
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(k, c)| k.iter().zip(x).fold(c.clone(), |acc, (&e, xi)| acc * rat_pow(xi, e as u64)))
            .sum()
    }

    /// Coefficient vector over the Kronecker coordinates: `p_j` at the
    /// representative of each monomial class, zero elsewhere.
    pub fn kron_tau(&self, map: &MonomialIndexMap) -> Vec<Rational> {
        let mut tau = vec![Rational::zero(); map.m.pow(map.d as u32)];
        for (k, c) in &self.terms {
            tau[map.representative(k).expect("degree matches")] = c.clone();
        }
        tau
    }
}

impl fmt::Display for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(String, Rational)> = self.terms.iter().rev().map(|(k, c)| (format_monomial_x(k), c.clone())).collect();
        write_signed_terms(f, &terms, format_rational)
    }
}

fn format_monomial_x(k: &[u32]) -> String {
    let parts: Vec<String> = k
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("X{}", i + 1) } else { format!("X{}^{e}", i + 1) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn write_signed_terms<C>(f: &mut fmt::Formatter<'_>, terms: &[(String, C)], show: impl Fn(&C) -> String) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (n, (mono, c)) in terms.iter().enumerate() {
        let s = show(c);
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) if !rest.contains(['+', '-']) => (true, rest.to_string()),
            _ => (false, s),
        };
        match (n, neg) {
            (0, true) => write!(f, "-")?,
            (0, false) => {}
            (_, true) => write!(f, " - ")?,
            (_, false) => write!(f, " + ")?,
        }
        if body == "1" {
            write!(f, "{mono}")?;
        } else if body.contains(['+', '-']) {
            write!(f, "({body})*{mono}")?;
        } else {
            write!(f, "{body}*{mono}")?;
        }
    }
    Ok(())
}

/// Homogeneous polynomial in `X` with polynomial coefficients in `z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraicLift {
    pub m: usize,
    pub degree: usize,
    /// `(lambda_j, coefficient of X^lambda_j)`, zero coefficients omitted.
    pub terms: Vec<(Vec<u32>, Poly)>,
    /// Valuation of `P(z, f(z))` up to the available order.
    pub residual_order: usize,
    /// Coefficient degree bound used for the underlying linear lift.
    pub degree_bound: usize,
}

impl AlgebraicLift {
    /// `P(alpha, X)` as a homogeneous polynomial over Q.
    pub fn specialize(&self, alpha: &Rational) -> BTreeMap<Vec<u32>, Rational> {
        self.terms
            .iter()
            .map(|(k, p)| (k.clone(), p.eval(alpha)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    /// Valuation of `P(z, f(z))` for base series `f`.
    pub fn residual(&self, f: &[TruncSeries]) -> usize {
        let order = f.iter().map(TruncSeries::order).min().unwrap_or(0);
        let mut acc = TruncSeries::zero(order);
        for (k, p) in &self.terms {
            let mut mono = TruncSeries::constant(Rational::one(), order);
            for (fi, &e) in f.iter().zip(k) {
                if e > 0 {
                    mono = mono.mul(&fi.truncate(order).pow(e));
                }
            }
            acc = acc.add(&mono.mul_poly(p));
        }
        acc.valuation()
    }
}

impl fmt::Display for AlgebraicLift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(String, Poly)> = self.terms.iter().map(|(k, p)| (format_monomial_x(k), p.clone())).collect();
        write_signed_terms(f, &terms, |p| p.to_pretty("z"))
    }
}

/// Checks `P(f(alpha)) = 0` on the Kronecker system, with the coefficient
/// bound of [`kron_coeff_bound`].
pub fn verify_algebraic_relation(sys: &MahlerSystem, alpha: &Rational, p: &HomogeneousPoly, order: usize) -> Result<ValueCheck> {
    let bound = sys.coeff_bound.as_ref().ok_or(Error::MissingCoeffBound)?;
    let mut ksys = kron_system(sys, p.degree)?;
    ksys.coeff_bound = Some(kron_coeff_bound(bound, p.degree, alpha)?);
    let map = MonomialIndexMap::new(sys.m, p.degree)?;
    let f = ksys.solve_series(order + 1)?;
    let rel = ValueRelation { tau: p.kron_tau(&map), alpha: alpha.clone() };
    verify_value_relation(&ksys, &f, &rel, order)
}

/// Lifts a homogeneous relation `P(f(alpha)) = 0` of degree `d` to
/// `P(z, X)` with `P(alpha, X) = P(X)` and `P(z, f(z)) = 0 mod z^N`.
pub fn lift_algebraic_relation(
    sys: &MahlerSystem,
    alpha: &Rational,
    p: &HomogeneousPoly,
    degree: usize,
    order: usize,
) -> Result<AlgebraicLift> {
    if p.m != sys.m {
        return Err(Error::DimensionMismatch(format!("polynomial has {} variables, m = {}", p.m, sys.m)));
    }
    sys.require_regular(alpha)?;
    let ksys = kron_system(sys, p.degree)?;
    let map = MonomialIndexMap::new(sys.m, p.degree)?;
    let fk = ksys.solve_series(2 * order)?;
    let lin = lift_from_series(&fk, alpha, &p.kron_tau(&map), degree, order)?;
    let mut terms = Vec::new();
    for (lambda, class) in &map.classes {
        let mut c = Poly::zero();
        for &i in class {
            c = &c + &lin.coefficients[i];
        }
        if !c.is_zero() {
            terms.push((lambda.clone(), c));
        }
    }
    terms.sort_by(|a, b| b.0.cmp(&a.0));
    let mut out = AlgebraicLift { m: sys.m, degree: p.degree, terms, residual_order: 0, degree_bound: degree };
    let f = sys.solve_series(2 * order)?;
    out.residual_order = out.residual(&f);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::RatFunc;
    use crate::scalar::{frac, int};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()).unwrap()
    }

    fn poly(c: &[i64]) -> RatFunc {
        RatFunc::from_poly(Poly::from_i64(c))
    }

    fn cantor2() -> MahlerSystem {
        let a = Matrix::from_rows(vec![vec![poly(&[1]), poly(&[0, 1])], vec![poly(&[0]), poly(&[1])]]).unwrap();
        MahlerSystem::new("cantor2", 2, a, Some(vec![int(0), int(1)]), Some(CoeffBound { c: int(1), rho: int(1) })).unwrap()
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

    #[test]
    fn powers() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(kron_power(&a, 1).unwrap(), a);
        assert_eq!(kron_power(&a, 2).unwrap().det(), int(16));
        let c = kron_power(&cantor2().a, 2).unwrap();
        let expect = Matrix::from_rows(vec![
            vec![poly(&[1]), poly(&[0, 1]), poly(&[0, 1]), poly(&[0, 0, 1])],
            vec![poly(&[0]), poly(&[1]), poly(&[0]), poly(&[0, 1])],
            vec![poly(&[0]), poly(&[0]), poly(&[1]), poly(&[0, 1])],
            vec![poly(&[0]), poly(&[0]), poly(&[0]), poly(&[1])],
        ])
        .unwrap();
        assert_eq!(c, expect);
        assert!(matches!(kron_power(&a, 9), Err(Error::SizeBudgetExceeded { .. })));
    }

    #[test]
    fn kron_solution_is_products() {
        let k = kron_system(&cantor2(), 2).unwrap();
        let f = k.solve_series(40).unwrap();
        let g = cantor2().solve_series(40).unwrap();
        assert_eq!(f[0], g[0].mul(&g[0]));
        assert_eq!(f[1], g[0]);
        assert_eq!(f[2], g[0]);
        assert!(f[3].coeffs().iter().enumerate().all(|(i, c)| *c == int(i64::from(i == 0))));
    }

    #[test]
    fn index_classes() {
        let map = MonomialIndexMap::new(3, 2).unwrap();
        assert_eq!(map.classes.len(), 6);
        assert_eq!(map.classes.iter().map(|c| c.1.len()).sum::<usize>(), 9);
        assert_eq!(map.representative(&[1, 0, 1]), Some(2));
        assert_eq!(map.representative(&[0, 0, 2]), Some(8));
    }

    #[test]
    fn parser() {
        let p = HomogeneousPoly::parse("X1*X3 - X2*X3 + 1/2*X3^2", 3).unwrap();
        assert_eq!(p.degree, 2);
        assert_eq!(p.terms[&vec![0, 0, 2]], frac(1, 2));
        let sq = HomogeneousPoly::parse("(X1 - X2 + 1/2*X3)^2", 3).unwrap();
        assert_eq!(sq.terms.len(), 6);
        assert_eq!(sq.terms[&vec![1, 1, 0]], int(-2));
        assert!(HomogeneousPoly::parse("X1 + 1", 3).unwrap_err().to_string().contains("homogen"));
        assert!(HomogeneousPoly::parse("X4", 3).is_err());
        assert!(HomogeneousPoly::parse("X1/0", 3).is_err());
        assert_eq!(p.to_string(), "X1*X3 - X2*X3 + 1/2*X3^2");
    }

    #[test]
    fn algebraic_lift_cantor3() {
        let sys = cantor3();
        let alpha = frac(1, 2);
        let p = HomogeneousPoly::parse("X1*X3 - X2*X3 + 1/2*X3^2", 3).unwrap();
        assert!(verify_algebraic_relation(&sys, &alpha, &p, 40).unwrap().is_verified());
        let l = lift_algebraic_relation(&sys, &alpha, &p, 1, 64).unwrap();
        assert_eq!(l.specialize(&alpha), p.terms);
        assert!(l.residual_order >= 48);
    }

    #[test]
    fn product_bound_dominates() {
        let b = kron_coeff_bound(&CoeffBound { c: int(1), rho: int(1) }, 2, &frac(1, 2)).unwrap();
        // coefficients of g^2 are at most n + 1 <= C' rho'^n
        let g = cantor2().solve_series(60).unwrap();
        let sq = g[0].mul(&g[0]);
        for (n, c) in sq.coeffs().iter().enumerate() {
            assert!(rat_abs(c) <= &b.c * rat_pow(&b.rho, n as u64));
        }
        assert!(&b.rho * frac(1, 2) < int(1));
    }
}
