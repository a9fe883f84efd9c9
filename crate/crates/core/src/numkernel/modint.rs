use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of `Z_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModInt {
    value: u64,
    modulus: u64,
}

impl ModInt {
    /// Reduces `value` into `[0, modulus)`. Panics on a zero modulus.
    pub fn new(value: i64, modulus: u64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        let value = value.rem_euclid(modulus as i64) as u64;
        Self { value, modulus }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn inv(self) -> Result<Self> {
        mod_inv(self)
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let mut base = self;
        let mut acc = ModInt::new(1, self.modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    fn check(self, other: Self) {
        assert_eq!(self.modulus, other.modulus, "mixed moduli");
    }
}

impl fmt::Display for ModInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl Add for ModInt {
    type Output = ModInt;
    fn add(self, rhs: Self) -> Self {
        self.check(rhs);
        ModInt { value: (self.value + rhs.value) % self.modulus, modulus: self.modulus }
    }
}

impl Sub for ModInt {
    type Output = ModInt;
    fn sub(self, rhs: Self) -> Self {
        self.check(rhs);
        ModInt {
            value: (self.value + self.modulus - rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Mul for ModInt {
    type Output = ModInt;
    fn mul(self, rhs: Self) -> Self {
        self.check(rhs);
        let v = (self.value as u128 * rhs.value as u128) % self.modulus as u128;
        ModInt { value: v as u64, modulus: self.modulus }
    }
}

impl Neg for ModInt {
    type Output = ModInt;
    fn neg(self) -> Self {
        ModInt { value: (self.modulus - self.value) % self.modulus, modulus: self.modulus }
    }
}

/// Multiplicative inverse via the extended Euclidean algorithm.
pub fn mod_inv(a: ModInt) -> Result<ModInt> {
    let m = a.modulus as i128;
    let (mut old_r, mut r) = (a.value as i128, m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(Error::NotInvertible { value: a.value, modulus: a.modulus });
    }
    Ok(ModInt::new(old_s.rem_euclid(m) as i64, a.modulus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_inverses() {
        assert_eq!(mod_inv(ModInt::new(2, 5)).unwrap().value(), 3);
        assert_eq!(mod_inv(ModInt::new(12, 7)).unwrap().value(), 3);
        for p in [2u64, 3, 5, 7] {
            assert_eq!(mod_inv(ModInt::new(1, p)).unwrap().value(), 1);
        }
    }

    #[test]
    fn non_invertible() {
        assert_eq!(
            mod_inv(ModInt::new(0, 7)),
            Err(Error::NotInvertible { value: 0, modulus: 7 })
        );
        assert!(mod_inv(ModInt::new(3, 9)).is_err());
        assert!(mod_inv(ModInt::new(2, 8)).is_err());
    }

    #[test]
    fn negative_values_reduce() {
        assert_eq!(ModInt::new(-1, 3).value(), 2);
        assert_eq!((-ModInt::new(0, 5)).value(), 0);
        assert_eq!((ModInt::new(1, 5) - ModInt::new(3, 5)).value(), 3);
    }

    proptest! {
        #[test]
        fn inverse_law(m in 2u64..500, a in 0i64..10_000) {
            let x = ModInt::new(a, m);
            match mod_inv(x) {
                Ok(inv) => prop_assert_eq!((x * inv).value(), 1 % m),
                Err(_) => {
                    let g = gcd(x.value(), m);
                    prop_assert_ne!(g, 1);
                }
            }
        }

        #[test]
        fn pow_matches_repeated_product(m in 2u64..100, a in 0i64..100, e in 0u64..20) {
            let x = ModInt::new(a, m);
            let mut acc = ModInt::new(1, m);
            for _ in 0..e { acc = acc * x; }
            prop_assert_eq!(x.pow(e), acc);
        }
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
}
