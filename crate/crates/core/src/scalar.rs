//! Exact coefficient arithmetic over ℚ and prime fields.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The coefficient field of a polynomial ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoeffField {
    Rational,
    Prime(u32),
}

impl CoeffField {
    /// Validates the field description; prime moduli must be primes below 2^31.
    pub fn checked_prime(p: u64) -> Result<Self> {
        if !(2..(1 << 31)).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not a prime below 2^31")));
        }
        Ok(CoeffField::Prime(p as u32))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            CoeffField::Rational => 0,
            CoeffField::Prime(p) => *p as u64,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            CoeffField::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            CoeffField::Prime(p) => Scalar::Mod {
                value: v.rem_euclid(*p as i64) as u32,
                p: *p,
            },
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            CoeffField::Rational => Scalar::Rational(BigRational::from_integer(v.clone())),
            CoeffField::Prime(p) => {
                let m = BigInt::from(*p);
                let r = v.mod_floor(&m);
                Scalar::Mod {
                    value: r.to_u32().expect("residue fits"),
                    p: *p,
                }
            }
        }
    }

    /// Maps a rational number into this field; fails when the denominator vanishes mod p.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        match self {
            CoeffField::Rational => Ok(Scalar::Rational(q.clone())),
            CoeffField::Prime(_) => {
                let num = self.from_bigint(q.numer());
                let den = self.from_bigint(q.denom());
                num.checked_div(&den).map_err(|_| {
                    Error::NotReducible(format!("denominator of {q} vanishes modulo {}", self.characteristic()))
                })
            }
        }
    }

    /// Reduces a scalar of another field into this one (ℚ → 𝔽_p, or identity).
    pub fn convert(&self, s: &Scalar) -> Result<Scalar> {
        match (self, s) {
            (CoeffField::Rational, Scalar::Rational(_)) => Ok(s.clone()),
            (CoeffField::Prime(p), Scalar::Mod { p: q, .. }) if p == q => Ok(s.clone()),
            (CoeffField::Prime(_), Scalar::Rational(r)) => self.from_rational(r),
            _ => Err(Error::FieldMismatch),
        }
    }
}

impl fmt::Display for CoeffField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffField::Rational => write!(f, "QQ"),
            CoeffField::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

/// An exact field element. Rationals are kept in lowest terms with positive denominator
/// (guaranteed by `BigRational`); residues satisfy `value < p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Mod { value: u32, p: u32 },
}

impl Scalar {
    pub fn field(&self) -> CoeffField {
        match self {
            Scalar::Rational(_) => CoeffField::Rational,
            Scalar::Mod { p, .. } => CoeffField::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    fn binary(&self, other: &Scalar, q: impl Fn(&BigRational, &BigRational) -> BigRational, m: impl Fn(u64, u64, u64) -> u64) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(q(a, b)),
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: p2 }) if p == p2 => Scalar::Mod {
                value: m(*a as u64, *b as u64, *p as u64) as u32,
                p: *p,
            },
            _ => panic!("scalar arithmetic across different coefficient fields"),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.binary(other, |a, b| a + b, |a, b, p| (a + b) % p)
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.binary(other, |a, b| a - b, |a, b, p| (a + p - b) % p)
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.binary(other, |a, b| a * b, |a, b, p| (a * b) % p)
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Mod { value, p } => Scalar::Mod {
                value: if *value == 0 { 0 } else { p - value },
                p: *p,
            },
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Mod { value, p } => Scalar::Mod {
                value: inv_mod(*value as u64, *p as u64) as u32,
                p: *p,
            },
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// True when the printed form needs a leading minus sign.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_negative(),
            Scalar::Mod { .. } => false,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// Residue value for prime-field elements.
    pub fn residue(&self) -> Option<u32> {
        match self {
            Scalar::Mod { value, .. } => Some(*value),
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Parses `a` or `a/b` into the given field.
pub fn parse_scalar(field: CoeffField, text: &str) -> Result<Scalar> {
    let bad = || Error::Parse(format!("invalid coefficient `{text}`"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text.trim(), None),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = match den {
        Some(d) => BigInt::from_str(d).map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    field.from_rational(&BigRational::new(num, den))
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    // extended Euclid on signed values
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "not invertible");
    s0.rem_euclid(p as i64) as u64
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_lowest_terms() {
        let q = parse_scalar(CoeffField::Rational, "6/-4").unwrap();
        assert_eq!(q, parse_scalar(CoeffField::Rational, "-6/4").unwrap());
        assert_eq!(q.to_string(), "-3/2");
        let r = q.as_rational().unwrap();
        assert!(r.denom().is_positive());
    }

    #[test]
    fn three_halves_mod_seven() {
        let s = parse_scalar(CoeffField::Prime(7), "3/2").unwrap();
        assert_eq!(s.residue(), Some(5));
    }

    #[test]
    fn division_by_zero() {
        let f = CoeffField::Prime(7);
        assert!(matches!(f.one().checked_div(&f.zero()), Err(Error::DivisionByZero)));
        assert!(matches!(parse_scalar(f, "1/7"), Err(Error::NotReducible(_))));
        assert!(matches!(CoeffField::Rational.zero().inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn prime_validation() {
        assert!(CoeffField::checked_prime(32003).is_ok());
        assert!(CoeffField::checked_prime(32004).is_err());
        assert!(CoeffField::checked_prime(1).is_err());
    }

    #[test]
    fn modular_inverse() {
        let p = 32003;
        for a in [1u64, 2, 3, 12345, 32002] {
            assert_eq!(a * inv_mod(a, p) % p, 1);
        }
    }
}
