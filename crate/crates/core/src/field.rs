//! Arithmetic in prime fields F_p for small primes.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest modulus accepted. Products of two residues stay well inside `u32`.
pub const MAX_MODULUS: u32 = 257;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} is not a prime in [2, {MAX_MODULUS}]")]
    NonPrimeModulus(u32),
    #[error("division by zero in F_{0}")]
    DivisionByZero(u32),
}

/// A validated prime modulus. Residues are plain `u32` values in `[0, p)`;
/// the field carries the operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeField {
    p: u32,
}

fn is_prime(n: u32) -> bool {
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

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, FieldError> {
        if p > MAX_MODULUS || !is_prime(p) {
            return Err(FieldError::NonPrimeModulus(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.p
    }

    /// Maps any integer to its canonical residue.
    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.p - b) % self.p
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        (a * b) % self.p
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        (self.p - a) % self.p
    }

    pub fn pow(self, mut base: u32, mut exp: u32) -> u32 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat's little theorem.
    pub fn inv(self, a: u32) -> Result<u32, FieldError> {
        if a % self.p == 0 {
            return Err(FieldError::DivisionByZero(self.p));
        }
        Ok(self.pow(a, self.p - 2))
    }

    pub fn div(self, a: u32, b: u32) -> Result<u32, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn elem(self, v: i64) -> Fp {
        Fp {
            value: self.reduce(v),
            field: self,
        }
    }

    /// All residues `0..p` in increasing order.
    pub fn elements(self) -> impl Iterator<Item = u32> {
        0..self.p
    }
}

impl TryFrom<u32> for PrimeField {
    type Error = FieldError;

    fn try_from(p: u32) -> Result<Self, Self::Error> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u32 {
    fn from(f: PrimeField) -> u32 {
        f.p
    }
}

/// A residue tagged with its field. Mixing moduli is a programming error and panics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    field: PrimeField,
}

impl Fp {
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn field(self) -> PrimeField {
        self.field
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Result<Fp, FieldError> {
        Ok(Fp {
            value: self.field.inv(self.value)?,
            field: self.field,
        })
    }

    fn check(self, other: Fp) -> PrimeField {
        assert_eq!(self.field, other.field, "mixed moduli");
        self.field
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.field.p)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let f = self.check(rhs);
        Fp {
            value: f.add(self.value, rhs.value),
            field: f,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        let f = self.check(rhs);
        Fp {
            value: f.sub(self.value, rhs.value),
            field: f,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        let f = self.check(rhs);
        Fp {
            value: f.mul(self.value, rhs.value),
            field: f,
        }
    }
}

impl Div for Fp {
    type Output = Fp;
    /// Panics on division by zero, like integer division.
    fn div(self, rhs: Fp) -> Fp {
        let f = self.check(rhs);
        Fp {
            value: f.div(self.value, rhs.value).expect("division by zero"),
            field: f,
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: self.field.neg(self.value),
            field: self.field,
        }
    }
}
