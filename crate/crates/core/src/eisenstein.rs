//! Exact arithmetic in Z[ω], ω = e^{2πi/3}.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// `a + bω` with `ω² = -1 - ω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct EisensteinInt {
    pub a: i64,
    pub b: i64,
}

impl EisensteinInt {
    pub const ZERO: EisensteinInt = EisensteinInt { a: 0, b: 0 };
    pub const ONE: EisensteinInt = EisensteinInt { a: 1, b: 0 };
    pub const OMEGA: EisensteinInt = EisensteinInt { a: 0, b: 1 };

    pub const fn new(a: i64, b: i64) -> Self {
        EisensteinInt { a, b }
    }

    /// `ω^e` for a symbol `e ∈ {0, 1, 2}` (taken mod 3).
    pub fn unit(e: u8) -> Self {
        match e % 3 {
            0 => Self::ONE,
            1 => Self::OMEGA,
            _ => EisensteinInt::new(-1, -1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// `|a + bω|² = a² - ab + b²`.
    pub fn norm(&self) -> i64 {
        self.a * self.a - self.a * self.b + self.b * self.b
    }

    pub fn conj(&self) -> Self {
        // conj(ω) = ω² = -1 - ω
        EisensteinInt::new(self.a - self.b, -self.b)
    }

    pub fn to_complex(&self) -> (f64, f64) {
        let (a, b) = (self.a as f64, self.b as f64);
        (a - b / 2.0, b * 3f64.sqrt() / 2.0)
    }
}

impl Add for EisensteinInt {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        EisensteinInt::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for EisensteinInt {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        EisensteinInt::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for EisensteinInt {
    type Output = Self;
    fn neg(self) -> Self {
        EisensteinInt::new(-self.a, -self.b)
    }
}

impl Mul for EisensteinInt {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let bd = self.b * o.b;
        EisensteinInt::new(self.a * o.a - bd, self.a * o.b + self.b * o.a - bd)
    }
}

impl fmt::Display for EisensteinInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}ω", self.a, self.b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn units() {
        let w = EisensteinInt::OMEGA;
        assert_eq!(w * w, EisensteinInt::unit(2));
        assert_eq!(w * w * w, EisensteinInt::ONE);
        assert!((EisensteinInt::ONE + w + w * w).is_zero());
        assert_eq!(w.norm(), 1);
        assert_eq!((EisensteinInt::ONE - w).norm(), 3);
        assert_eq!(w.conj(), w * w);
    }

    #[test]
    fn multiplication_matches_complex_numbers() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let x = EisensteinInt::new(rng.gen_range(-1000..=1000), rng.gen_range(-1000..=1000));
            let y = EisensteinInt::new(rng.gen_range(-1000..=1000), rng.gen_range(-1000..=1000));
            let (xr, xi) = x.to_complex();
            let (yr, yi) = y.to_complex();
            let (pr, pi) = (x * y).to_complex();
            assert!((pr - (xr * yr - xi * yi)).abs() < 1e-9 * (1.0 + pr.abs()));
            assert!((pi - (xr * yi + xi * yr)).abs() < 1e-9 * (1.0 + pi.abs()));
            assert_eq!((x * y).norm(), x.norm() * y.norm());
            assert_eq!(x.is_zero(), x.a == 0 && x.b == 0);
        }
    }
}
