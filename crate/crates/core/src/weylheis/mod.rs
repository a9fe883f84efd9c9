//! Generalized Pauli (displacement) operators and the single-qudit Clifford
//! group in its symplectic parameterization.

mod clifford;
mod pauli;

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::C64;

pub use clifford::{
    clifford_compose, clifford_labels, clifford_unitary, sl2_enumerate, CliffordGroup,
    CliffordLabel, Sl2,
};
pub use pauli::{
    displacement, mub_labels, pauli_eigprojector, shift_clock, stabilizer_states,
    stabilizer_vectors, PauliLabel,
};

/// A supported prime qudit dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeDim(u32);

impl PrimeDim {
    pub const SUPPORTED: [u32; 4] = [2, 3, 5, 7];

    pub fn new(p: u32) -> Result<Self> {
        if Self::SUPPORTED.contains(&p) {
            Ok(Self(p))
        } else {
            Err(Error::UnsupportedDim(p as u64))
        }
    }

    pub fn p(self) -> u32 {
        self.0
    }

    pub fn n(self) -> usize {
        self.0 as usize
    }

    pub fn is_odd(self) -> bool {
        self.0 != 2
    }

    /// `ω = e^{2πi/p}`
    pub fn omega(self) -> C64 {
        self.omega_pow(1)
    }

    pub fn omega_pow(self, k: i64) -> C64 {
        root_of_unity(self.0 as u64, k)
    }

    /// `τ = e^{(p+1)πi/p}`; `τ² = ω` for every `p`.
    pub fn tau(self) -> C64 {
        self.tau_pow(1)
    }

    /// `τ^k`, with `k` reduced modulo `2p` (τ has order `p` for odd `p`
    /// and order 4 for `p = 2`).
    pub fn tau_pow(self, k: i64) -> C64 {
        let p = self.0 as i64;
        root_of_unity(2 * p as u64, k * (p + 1))
    }

    /// Reduces an integer into `[0, p)`.
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.0 as i64) as u32
    }

    /// Inverse modulo `p`; `None` for `0`.
    pub fn inv(self, v: u32) -> Option<u32> {
        let p = self.0 as u64;
        (v as u64 % p != 0).then(|| {
            crate::numkernel::mod_inv(crate::numkernel::ModInt::new(v as i64, p))
                .expect("prime modulus")
                .value() as u32
        })
    }
}

impl TryFrom<u32> for PrimeDim {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        Self::new(p)
    }
}

impl From<PrimeDim> for u32 {
    fn from(d: PrimeDim) -> u32 {
        d.0
    }
}

impl fmt::Display for PrimeDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `e^{2πik/n}` with `k` reduced modulo `n` before evaluation.
pub fn root_of_unity(n: u64, k: i64) -> C64 {
    let k = k.rem_euclid(n as i64);
    match (4 * k).checked_rem(n as i64) {
        // exact values on the axes
        Some(0) => [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)]
            [(4 * k / n as i64) as usize],
        _ => C64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64),
    }
}
