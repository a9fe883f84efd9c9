use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{uv_exponents, DiagGateExact, GateParams};
use crate::error::{Error, Result};
use crate::numkernel::{equal_up_to_global_phase, C64, DEFAULT_TOL};
use crate::weylheis::PrimeDim;

/// Order statistics and isomorphism class of the diagonal third-level group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupReport {
    pub p: u32,
    pub group_order: u64,
    pub order_histogram: BTreeMap<u64, u64>,
    /// Cyclic factor orders, largest first.
    pub invariant_factors: Vec<u64>,
    pub group_name: String,
    pub min_generators: u32,
}

/// Smallest `n ≥ 1` with `n·υ ≡ 0 (mod R)`.
pub fn element_order(d: PrimeDim, g: GateParams) -> u64 {
    gate_order(&uv_exponents(d, g))
}

fn gate_order(gate: &DiagGateExact) -> u64 {
    let r = gate.root_order as u64;
    gate.exponents.iter().map(|&e| r / gcd(e as u64, r)).fold(1, lcm)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Enumerates the group generated by the gates `U_υ` and decomposes it into
/// cyclic factors from the counts `|G[p^k]|` of elements whose order divides
/// `p^k`.
pub fn structure_classify(d: PrimeDim) -> GroupReport {
    let p = d.p() as u64;
    let elements: std::collections::HashSet<DiagGateExact> =
        GateParams::all(d).map(|g| uv_exponents(d, g)).collect();
    let mut order_histogram = BTreeMap::new();
    for gate in &elements {
        *order_histogram.entry(gate_order(gate)).or_insert(0u64) += 1;
    }
    let group_order = elements.len() as u64;

    // r_k = number of cyclic factors of order ≥ p^k = log_p(|G[p^k]| / |G[p^{k-1}]|)
    let max_order = *order_histogram.keys().max().unwrap_or(&1);
    let count_dividing = |m: u64| -> u64 {
        order_histogram.iter().filter(|(o, _)| m % **o == 0).map(|(_, c)| c).sum()
    };
    let mut ranks = Vec::new();
    let (mut prev, mut pk) = (1u64, p);
    while pk <= max_order {
        let cur = count_dividing(pk);
        ranks.push(ilog(cur / prev, p));
        prev = cur;
        pk *= p;
    }
    let mut invariant_factors = Vec::new();
    for k in (0..ranks.len()).rev() {
        let exact = ranks[k] - ranks.get(k + 1).copied().unwrap_or(0);
        invariant_factors.extend(std::iter::repeat(p.pow(k as u32 + 1)).take(exact as usize));
    }
    GroupReport {
        p: d.p(),
        group_order,
        group_name: group_name(&invariant_factors),
        min_generators: ranks.first().copied().unwrap_or(0),
        order_histogram,
        invariant_factors,
    }
}

fn ilog(mut n: u64, base: u64) -> u32 {
    let mut k = 0;
    while n > 1 {
        n /= base;
        k += 1;
    }
    k
}

fn group_name(factors: &[u64]) -> String {
    match factors {
        [] => "trivial".into(),
        [first, ..] if factors.len() > 1 && factors.iter().all(|f| f == first) => {
            format!("Z_{first}^{}", factors.len())
        }
        _ => factors.iter().map(|f| format!("Z_{f}")).collect::<Vec<_>>().join("×"),
    }
}

/// The gate `M = diag(e^{2πi λ_j / p²})` with
/// `λ_j = p·C(j,3) − j·C(p,3) + C(p+1,4)`, together with the hierarchy label
/// it coincides with up to a global phase.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MGate {
    pub lambdas: Vec<i64>,
    /// Exponents over `Z_{p²}` before canonical rephasing.
    pub gate: DiagGateExact,
    pub params: GateParams,
    /// `M = phase · U_υ(params)`.
    pub phase: C64,
}

pub fn m_gate(d: PrimeDim) -> Result<MGate> {
    if !d.is_odd() {
        return Err(Error::UnsupportedDim(2));
    }
    let p = d.p() as i64;
    let lambdas: Vec<i64> = (0..p).map(|j| p * binom(j, 3) - j * binom(p, 3) + binom(p + 1, 4)).collect();
    let root = (p * p) as u32;
    let gate = DiagGateExact {
        root_order: root,
        exponents: lambdas.iter().map(|l| l.rem_euclid(p * p) as u32).collect(),
    };
    let m = gate.matrix();
    for g in GateParams::all(d) {
        if let Some(phase) = equal_up_to_global_phase(&m, &uv_exponents(d, g).matrix(), DEFAULT_TOL)? {
            return Ok(MGate { lambdas, gate, params: g, phase });
        }
    }
    Err(Error::ConvergenceFailure(f64::NAN))
}

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
