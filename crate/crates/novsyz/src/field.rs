//! Ground-field scalars: exact rationals or a prime field 𝔽ₚ.

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::NovikovError;

/// Configuration of the coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroundField {
    Rationals,
    /// Prime field with the given (odd or 2) prime modulus.
    Prime(u64),
}

impl GroundField {
    pub fn validate(&self) -> Result<(), NovikovError> {
        match self {
            GroundField::Rationals => Ok(()),
            GroundField::Prime(p) => {
                if is_prime(*p) {
                    Ok(())
                } else {
                    Err(NovikovError::BadSymbolTable(format!("{p} is not prime")))
                }
            }
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            GroundField::Rationals => Scalar::Rat(BigRational::zero()),
            GroundField::Prime(_) => Scalar::Mod(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            GroundField::Rationals => Scalar::Rat(BigRational::one()),
            GroundField::Prime(_) => Scalar::Mod(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            GroundField::Rationals => Scalar::Rat(BigRational::from(BigInt::from(n))),
            GroundField::Prime(p) => Scalar::Mod((n.rem_euclid(*p as i64)) as u64),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (GroundField::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (GroundField::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u128 + *y as u128) % *p as u128) as u64)
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (GroundField::Rationals, Scalar::Rat(x)) => Scalar::Rat(-x),
            (GroundField::Prime(p), Scalar::Mod(x)) => Scalar::Mod(if *x == 0 { 0 } else { p - x }),
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (GroundField::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (GroundField::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar, NovikovError> {
        if a.is_zero() {
            return Err(NovikovError::DivisionByZero);
        }
        match (self, a) {
            (GroundField::Rationals, Scalar::Rat(x)) => Ok(Scalar::Rat(x.recip())),
            (GroundField::Prime(p), Scalar::Mod(x)) => Ok(Scalar::Mod(mod_pow(*x, p - 2, *p))),
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, NovikovError> {
        Ok(self.mul(a, &self.inv(b)?))
    }
}

/// A scalar of the configured ground field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Rat(BigRational),
    Mod(u64),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(x) => x.is_zero(),
            Scalar::Mod(x) => *x == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(x) => x.is_one(),
            Scalar::Mod(x) => *x == 1,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(x) => {
                if x.is_integer() {
                    write!(f, "{}", x.numer())
                } else {
                    write!(f, "{}/{}", x.numer(), x.denom())
                }
            }
            Scalar::Mod(x) => write!(f, "{x}"),
        }
    }
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut b = base as u128 % p as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u128;
        }
        b = b * b % p as u128;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for d in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if n == d {
            return true;
        }
        if n % d == 0 {
            return false;
        }
    }
    // Deterministic Miller-Rabin for u64.
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Parses a scalar from its fixture encoding ("3", "-2/5", or a residue).
pub fn parse_scalar(field: &GroundField, s: &str) -> Result<Scalar, NovikovError> {
    match field {
        GroundField::Rationals => {
            let r: BigRational = s
                .parse::<BigRational>()
                .or_else(|_| s.parse::<BigInt>().map(BigRational::from))
                .map_err(|_| NovikovError::BadSymbolTable(format!("bad rational {s:?}")))?;
            Ok(Scalar::Rat(r))
        }
        GroundField::Prime(p) => {
            let n: i64 = s
                .parse()
                .map_err(|_| NovikovError::BadSymbolTable(format!("bad residue {s:?}")))?;
            Ok(Scalar::Mod(n.rem_euclid(*p as i64) as u64))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = GroundField::Prime(7);
        for x in 1..7i64 {
            let s = f.from_i64(x);
            let inv = f.inv(&s).unwrap();
            assert!(f.mul(&s, &inv).is_one());
        }
    }

    #[test]
    fn primality() {
        assert!(GroundField::Prime(2).validate().is_ok());
        assert!(GroundField::Prime(101).validate().is_ok());
        assert!(GroundField::Prime(91).validate().is_err());
        assert!(GroundField::Prime(1).validate().is_err());
    }
}
