//! Coefficient fields: the rationals and prime fields `F_p` with `p < 2^31`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;

/// The base field of a polynomial ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Field {
    /// Validates the modulus of a prime field.
    pub fn prime(p: u32) -> Result<Self, AlgebraError> {
        if p < 2 || p >= (1 << 31) || !is_prime(p as u64) {
            return Err(AlgebraError::InvalidField(format!("{p} is not a prime below 2^31")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElement {
        match self {
            Field::Rational => FieldElement::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => FieldElement::residue(v.rem_euclid(*p as i64) as u32, *p),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> FieldElement {
        match self {
            Field::Rational => FieldElement::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(*p));
                FieldElement::residue(r.to_u32().unwrap(), *p)
            }
        }
    }

    /// Maps a rational number into the field; fails when the denominator vanishes mod p.
    pub fn from_rational(&self, q: &BigRational) -> Result<FieldElement, AlgebraError> {
        match self {
            Field::Rational => Ok(FieldElement::Rational(q.clone())),
            Field::Prime(_) => {
                let num = self.from_bigint(q.numer());
                let den = self.from_bigint(q.denom());
                if den.is_zero() {
                    return Err(AlgebraError::InvalidField(format!(
                        "denominator of {q} vanishes in {self}"
                    )));
                }
                Ok(&num / &den)
            }
        }
    }
}

impl std::str::FromStr for Field {
    type Err = AlgebraError;

    /// `Q`, or `Fp:<p>` (also accepted: `fp:<p>`).
    fn from_str(s: &str) -> Result<Self, AlgebraError> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(Field::Rational);
        }
        match t.split_once(':') {
            Some((head, p)) if head.eq_ignore_ascii_case("fp") => {
                let p: u32 = p.trim().parse().map_err(|_| AlgebraError::InvalidField(s.to_string()))?;
                Field::prime(p)
            }
            _ => Err(AlgebraError::InvalidField(s.to_string())),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An element of a [`Field`].
///
/// Rationals are kept in lowest terms with a positive denominator (this is the
/// `BigRational` invariant); residues always lie in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Residue { value: u32, modulus: u32 },
}

impl FieldElement {
    fn residue(value: u32, modulus: u32) -> Self {
        debug_assert!(value < modulus);
        FieldElement::Residue { value, modulus }
    }

    pub fn field(&self) -> Field {
        match self {
            FieldElement::Rational(_) => Field::Rational,
            FieldElement::Residue { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_zero(),
            FieldElement::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_one(),
            FieldElement::Residue { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> FieldElement {
        match self {
            FieldElement::Rational(q) => {
                assert!(!q.is_zero(), "inverse of zero");
                FieldElement::Rational(q.recip())
            }
            FieldElement::Residue { value, modulus } => {
                assert!(*value != 0, "inverse of zero");
                FieldElement::residue(pow_mod(*value as u64, *modulus as u64 - 2, *modulus as u64) as u32, *modulus)
            }
        }
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Sign of a rational element; residues report `1` unless zero.
    pub fn signum(&self) -> i32 {
        match self {
            FieldElement::Rational(q) => {
                if q.is_zero() {
                    0
                } else if q.is_positive() {
                    1
                } else {
                    -1
                }
            }
            FieldElement::Residue { value, .. } => (*value != 0) as i32,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElement::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// Lossy conversion used by the numeric module.
    pub fn to_f64(&self) -> f64 {
        match self {
            FieldElement::Rational(q) => q.to_f64().unwrap_or(f64::NAN),
            FieldElement::Residue { value, .. } => *value as f64,
        }
    }
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

macro_rules! binop {
    ($trait:ident, $method:ident, $q:expr, $p:expr) => {
        impl<'a> $trait<&'a FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &'a FieldElement) -> FieldElement {
                match (self, rhs) {
                    (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational($q(a, b)),
                    (
                        FieldElement::Residue { value: a, modulus: p },
                        FieldElement::Residue { value: b, modulus: q },
                    ) if p == q => FieldElement::residue($p(*a as u64, *b as u64, *p as u64) as u32, *p),
                    _ => panic!("arithmetic between elements of different fields"),
                }
            }
        }
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a: &BigRational, b: &BigRational| a + b, |a: u64, b: u64, p: u64| (a + b) % p);
binop!(Sub, sub, |a: &BigRational, b: &BigRational| a - b, |a: u64, b: u64, p: u64| (a + p - b) % p);
binop!(Mul, mul, |a: &BigRational, b: &BigRational| a * b, |a: u64, b: u64, p: u64| (a * b) % p);

impl<'a> Div<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: &'a FieldElement) -> FieldElement {
        self * &rhs.inv()
    }
}

impl Div for FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: FieldElement) -> FieldElement {
        &self / &rhs
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        match self {
            FieldElement::Rational(q) => FieldElement::Rational(-q),
            FieldElement::Residue { value, modulus } => {
                FieldElement::residue((*modulus - *value) % *modulus, *modulus)
            }
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            FieldElement::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues_stay_reduced() {
        let f = Field::prime(7).unwrap();
        let a = f.from_i64(-3);
        assert_eq!(a, f.from_i64(4));
        assert!((&a * &a.inv()).is_one());
        assert_eq!((&f.from_i64(5) + &f.from_i64(4)), f.from_i64(2));
        assert_eq!(-&f.from_i64(0), f.zero());
    }

    #[test]
    fn rationals_are_canonical() {
        let f = Field::Rational;
        let half = &f.one() / &f.from_i64(2);
        let q = half.as_rational().unwrap();
        assert_eq!(q.denom(), &BigInt::from(2));
        let neg = &f.from_i64(2) / &f.from_i64(-4);
        assert!(neg.as_rational().unwrap().denom().is_positive());
    }

    #[test]
    fn composite_modulus_rejected() {
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(2).is_ok());
    }
}
