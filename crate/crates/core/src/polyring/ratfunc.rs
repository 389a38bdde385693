use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Poly;
use crate::ring::{Field, Ring};
use crate::scalar::{serde_rational, Rational};

/// Reduced rational function `num / den`. The denominator is monic and
/// coprime to the numerator, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Panics if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc { num, den: Poly::one() };
        }
        let g = num.gcd(&den);
        let (mut n, _) = num.div_rem(&g);
        let (mut d, _) = den.div_rem(&g);
        let lead = d.leading().unwrap().recip();
        n = n.scale(&lead);
        d = d.scale(&lead);
        RatFunc { num: n, den: d }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_poly(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// `None` when the point is a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn has_pole_at_zero(&self) -> bool {
        self.den.coeff(0).is_zero()
    }

    /// `r(z^q)`
    pub fn substitute_power(&self, q: usize) -> RatFunc {
        // substitution preserves coprimality and monicity
        RatFunc { num: self.num.substitute_power(q), den: self.den.substitute_power(q) }
    }

    /// Largest of the numerator and denominator degrees.
    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl Ring for RatFunc {
    fn ring_zero() -> Self {
        RatFunc::from_poly(Poly::zero())
    }
    fn ring_one() -> Self {
        RatFunc::from_poly(Poly::one())
    }
    fn is_ring_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        if self.den == other.den {
            return RatFunc::new(&self.num + &other.num, self.den.clone());
        }
        RatFunc::new(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }
    fn mul_ref(&self, other: &Self) -> Self {
        if self.is_poly() && other.is_poly() {
            return RatFunc::from_poly(&self.num * &other.num);
        }
        RatFunc::new(&self.num * &other.num, &self.den * &other.den)
    }
    fn neg_ref(&self) -> Self {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Field for RatFunc {
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(RatFunc::new(self.den.clone(), self.num.clone()))
        }
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serde_rational::vec::serialize(self.coeffs(), s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        serde_rational::vec::deserialize(d).map(Poly::new)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RatFuncRepr {
    Bare(Poly),
    Full { num: Poly, den: Poly },
}

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.is_poly() {
            self.num.serialize(s)
        } else {
            RatFuncRepr::Full { num: self.num.clone(), den: self.den.clone() }.serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match RatFuncRepr::deserialize(d)? {
            RatFuncRepr::Bare(p) => Ok(RatFunc::from_poly(p)),
            RatFuncRepr::Full { num, den } => {
                if den.is_zero() {
                    Err(serde::de::Error::custom("zero denominator"))
                } else {
                    Ok(RatFunc::new(num, den))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    #[test]
    fn normalizes() {
        // (2z - 2) / (4z^2 - 4) = (1/2) / (z + 1)
        let r = RatFunc::new(Poly::from_i64(&[-2, 2]), Poly::from_i64(&[-4, 0, 4]));
        assert_eq!(r.num(), &Poly::constant(frac(1, 2)));
        assert_eq!(r.den(), &Poly::from_i64(&[1, 1]));
        assert_eq!(r.eval(&int(-1)), None);
        assert_eq!(r.eval(&int(1)), Some(frac(1, 4)));
    }

    #[test]
    fn field_ops() {
        let a = RatFunc::new(Poly::one(), Poly::from_i64(&[1, -1]));
        let b = RatFunc::from_poly(Poly::from_i64(&[1, -1]));
        assert!(a.mul_ref(&b).is_ring_one());
        assert_eq!(a.inv().unwrap(), b);
        assert!(a.sub_ref(&a).is_ring_zero());
    }

    #[test]
    fn json_forms() {
        let r: RatFunc = serde_json::from_str(r#"["1", "-1/2"]"#).unwrap();
        assert_eq!(r, RatFunc::from_poly(Poly::new(vec![int(1), frac(-1, 2)])));
        let s: RatFunc = serde_json::from_str(r#"{"num": ["1"], "den": ["1", "-1"]}"#).unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"num":["-1"],"den":["-1","1"]}"#);
        assert!(serde_json::from_str::<RatFunc>(r#"{"num": ["1"], "den": []}"#).is_err());
    }
}
