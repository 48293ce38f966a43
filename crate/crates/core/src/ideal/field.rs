use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// Coefficient arithmetic used inside the Gröbner engine.
pub(crate) trait Field: Clone + Send + Sync {
    type E: Clone + PartialEq + Debug + Send + Sync;

    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    /// Panics on zero; callers only invert leading coefficients.
    fn inv(&self, a: &Self::E) -> Self::E;
    fn from_scalar(&self, s: &Scalar) -> Self::E;
    fn to_scalar(&self, a: &Self::E) -> Scalar;

    fn is_one(&self, a: &Self::E) -> bool {
        *a == self.one()
    }

    /// `a - b*c`
    fn sub_mul(&self, a: &Self::E, b: &Self::E, c: &Self::E) -> Self::E {
        self.sub(a, &self.mul(b, c))
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Fp {
    pub p: u32,
}

impl Field for Fp {
    type E = u32;

    fn one(&self) -> u32 {
        1
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            (*a as u64 + self.p as u64 - *b as u64) as u32
        }
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u32) -> u32 {
        assert!(*a != 0, "inverse of zero");
        crate::scalar::inv_mod(*a as u64, self.p as u64) as u32
    }
    fn from_scalar(&self, s: &Scalar) -> u32 {
        match s {
            Scalar::Mod { value, p } if *p == self.p => *value,
            _ => panic!("scalar outside GF({})", self.p),
        }
    }
    fn to_scalar(&self, a: &u32) -> Scalar {
        Scalar::Mod { value: *a, p: self.p }
    }
    fn sub_mul(&self, a: &u32, b: &u32, c: &u32) -> u32 {
        let p = self.p as u64;
        let prod = (*b as u64 * *c as u64) % p;
        ((*a as u64 + p - prod) % p) as u32
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Qq;

impl Field for Qq {
    type E = BigRational;

    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn from_scalar(&self, s: &Scalar) -> BigRational {
        match s {
            Scalar::Rational(q) => q.clone(),
            Scalar::Mod { .. } => panic!("residue scalar in a rational computation"),
        }
    }
    fn to_scalar(&self, a: &BigRational) -> Scalar {
        Scalar::Rational(a.clone())
    }
}
