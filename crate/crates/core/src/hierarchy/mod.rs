//! Diagonal gates of the third level of the Clifford hierarchy.
//!
//! A gate `U_υ = Σ_k ζ_R^{υ_k} |k⟩⟨k|` is stored exactly as an exponent vector
//! over `Z_R` with `υ₀ = 0`, where the root order is `R = p` for `p > 3`,
//! `R = 9` for `p = 3` and `R = 8` for `p = 2`. Gate multiplication is then
//! integer addition and group questions are answered without floating point.

mod structure;
mod verify;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{ComplexMatrix, C64};
use crate::weylheis::{root_of_unity, PrimeDim};

pub use structure::{element_order, m_gate, structure_classify, GroupReport, MGate};
pub use verify::{conj_image, conjugation_phase, verify_c3, ConjugationImage, ThirdLevel};

/// The labels `(z′, γ′, ε′) ∈ Z_p³` of a diagonal third-level gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GateParams {
    pub z: u32,
    pub gamma: u32,
    pub epsilon: u32,
}

impl GateParams {
    pub fn new(d: PrimeDim, z: i64, gamma: i64, epsilon: i64) -> Self {
        Self { z: d.reduce(z), gamma: d.reduce(gamma), epsilon: d.reduce(epsilon) }
    }

    pub fn identity() -> Self {
        Self { z: 0, gamma: 0, epsilon: 0 }
    }

    /// `γ′ = 0` gates are diagonal Cliffords.
    pub fn is_clifford(&self) -> bool {
        self.gamma == 0
    }

    /// All `p³` labels in lexicographic `(z′, γ′, ε′)` order.
    pub fn all(d: PrimeDim) -> impl Iterator<Item = GateParams> {
        let p = d.p();
        (0..p).flat_map(move |z| {
            (0..p).flat_map(move |gamma| (0..p).map(move |epsilon| GateParams { z, gamma, epsilon }))
        })
    }

    /// The non-Clifford gate used for each dimension in the robustness
    /// tables: the qubit π/8 gate for `p = 2` and `(1, p−1, 0)` for
    /// `p ∈ {3, 5}`, `(1, 2, 0)` for `p = 7`.
    pub fn reference(d: PrimeDim) -> GateParams {
        match d.p() {
            2 => GateParams { z: 0, gamma: 1, epsilon: 0 },
            3 => GateParams { z: 1, gamma: 2, epsilon: 0 },
            5 => GateParams { z: 1, gamma: 4, epsilon: 0 },
            _ => GateParams { z: 1, gamma: 2, epsilon: 0 },
        }
    }

    /// Parses `"z,g,e"`.
    pub fn parse(d: PrimeDim, s: &str) -> Result<Self> {
        let parts: Vec<i64> = s
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidArgument(format!("gate parameters {s:?}: {e}")))?;
        match parts[..] {
            [z, g, e] => Ok(Self::new(d, z, g, e)),
            _ => Err(Error::InvalidArgument(format!("expected z,g,e, got {s:?}"))),
        }
    }
}

impl fmt::Display for GateParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.z, self.gamma, self.epsilon)
    }
}

/// Exact diagonal gate `Σ_k ζ_R^{υ_k} |k⟩⟨k|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiagGateExact {
    pub root_order: u32,
    pub exponents: Vec<u32>,
}

impl DiagGateExact {
    /// Normalizes the exponents into `[0, R)` and shifts so that `υ₀ = 0`.
    pub fn canonical(root_order: u32, raw: &[i64]) -> Self {
        let r = root_order as i64;
        let base = raw.first().copied().unwrap_or(0);
        Self {
            root_order,
            exponents: raw.iter().map(|&v| (v - base).rem_euclid(r) as u32).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn phases(&self) -> Vec<C64> {
        self.exponents
            .iter()
            .map(|&e| root_of_unity(self.root_order as u64, e as i64))
            .collect()
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_diag(&self.phases())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.root_order != other.root_order || self.dim() != other.dim() {
            return Err(Error::ShapeMismatch("gates over different roots or dimensions".into()));
        }
        let r = self.root_order;
        Ok(Self {
            root_order: r,
            exponents: self.exponents.iter().zip(&other.exponents).map(|(a, b)| (a + b) % r).collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// Sum of exponents modulo `R`; `det = ζ_R^{sum}`.
    pub fn exponent_sum(&self) -> u32 {
        (self.exponents.iter().map(|&e| e as u64).sum::<u64>() % self.root_order as u64) as u32
    }
}

/// Exact exponent vector of `U_υ(z′, γ′, ε′)` with `υ₀ = 0`.
///
/// - `p > 3`: `υ_k = 12⁻¹ k(γ′ + k(6z′ + (2k−3)γ′)) + kε′ (mod p)`
/// - `p = 3`: `υ = (0, 6z′+2γ′+3ε′, 6z′+γ′+6ε′) (mod 9)`
/// - `p = 2`: `υ = (0, 2z′+γ′+4ε′) (mod 8)`, the qubit family `diag(1, ζ₈^k)`.
pub fn uv_exponents(d: PrimeDim, g: GateParams) -> DiagGateExact {
    let (z, gm, e) = (g.z as i64, g.gamma as i64, g.epsilon as i64);
    match d.p() {
        2 => DiagGateExact::canonical(8, &[0, 2 * z + gm + 4 * e]),
        3 => DiagGateExact::canonical(9, &[0, 6 * z + 2 * gm + 3 * e, 6 * z + gm + 6 * e]),
        p => {
            let inv12 = d.inv(12 % p).expect("p > 3") as i64;
            let raw: Vec<i64> = (0..p as i64)
                .map(|k| inv12 * (k * (gm + k * (6 * z + (2 * k - 3) * gm))).rem_euclid(p as i64) + k * e)
                .collect();
            DiagGateExact::canonical(p, &raw)
        }
    }
}

/// `U_υ(g₁)·U_υ(g₂) = U_υ(result)`.
///
/// Componentwise addition for `p > 3`; for `p = 3` the `ε′` component
/// borrows one when `γ₁ + γ₂ ≥ 3`; for `p = 2` labels add as the digits of
/// `2z′ + γ′ + 4ε′` in `Z_8`.
pub fn compose_labels(d: PrimeDim, g1: GateParams, g2: GateParams) -> GateParams {
    match d.p() {
        2 => {
            let k = (qubit_index(g1) + qubit_index(g2)) % 8;
            GateParams { z: (k >> 1) & 1, gamma: k & 1, epsilon: k >> 2 }
        }
        3 => {
            let carry = if g1.gamma + g2.gamma >= 3 { -1 } else { 0 };
            GateParams::new(
                d,
                (g1.z + g2.z) as i64,
                (g1.gamma + g2.gamma) as i64,
                (g1.epsilon + g2.epsilon) as i64 + carry,
            )
        }
        _ => GateParams::new(
            d,
            (g1.z + g2.z) as i64,
            (g1.gamma + g2.gamma) as i64,
            (g1.epsilon + g2.epsilon) as i64,
        ),
    }
}

fn qubit_index(g: GateParams) -> u32 {
    (2 * g.z + g.gamma + 4 * g.epsilon) % 8
}
