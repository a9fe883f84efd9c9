use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::pauli::{displacement, PauliLabel};
use super::PrimeDim;
use crate::numkernel::{equal_up_to_global_phase, ComplexMatrix, DEFAULT_TOL};

/// A 2x2 matrix `[[α, β], [γ, δ]]` over `Z_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sl2 {
    pub alpha: u32,
    pub beta: u32,
    pub gamma: u32,
    pub delta: u32,
}

impl Sl2 {
    pub const IDENTITY: Sl2 = Sl2 { alpha: 1, beta: 0, gamma: 0, delta: 1 };

    pub fn new(d: PrimeDim, alpha: i64, beta: i64, gamma: i64, delta: i64) -> Self {
        Self {
            alpha: d.reduce(alpha),
            beta: d.reduce(beta),
            gamma: d.reduce(gamma),
            delta: d.reduce(delta),
        }
    }

    /// `[[1, 0], [γ, 1]]`
    pub fn lower(d: PrimeDim, gamma: i64) -> Self {
        Self::new(d, 1, 0, gamma, 1)
    }

    pub fn det(&self, d: PrimeDim) -> u32 {
        d.reduce(self.alpha as i64 * self.delta as i64 - self.beta as i64 * self.gamma as i64)
    }

    pub fn mul(&self, d: PrimeDim, o: &Sl2) -> Sl2 {
        let (a, b, c, e) =
            (self.alpha as i64, self.beta as i64, self.gamma as i64, self.delta as i64);
        let (oa, ob, oc, oe) = (o.alpha as i64, o.beta as i64, o.gamma as i64, o.delta as i64);
        Sl2::new(d, a * oa + b * oc, a * ob + b * oe, c * oa + e * oc, c * ob + e * oe)
    }

    pub fn apply(&self, d: PrimeDim, v: [u32; 2]) -> [u32; 2] {
        let (x, z) = (v[0] as i64, v[1] as i64);
        [
            d.reduce(self.alpha as i64 * x + self.beta as i64 * z),
            d.reduce(self.gamma as i64 * x + self.delta as i64 * z),
        ]
    }
}

/// `C_(F|χ) = D_χ V_F`, a Clifford unitary up to global phase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CliffordLabel {
    pub f: Sl2,
    pub chi: [u32; 2],
}

impl CliffordLabel {
    pub fn identity() -> Self {
        Self { f: Sl2::IDENTITY, chi: [0, 0] }
    }
}

/// All of `SL(2, Z_p)`, `p(p²−1)` matrices in lexicographic order.
pub fn sl2_enumerate(d: PrimeDim) -> Vec<Sl2> {
    let p = d.p();
    let mut out = Vec::with_capacity((p * (p * p - 1)) as usize);
    for alpha in 0..p {
        for beta in 0..p {
            for gamma in 0..p {
                for delta in 0..p {
                    let f = Sl2 { alpha, beta, gamma, delta };
                    if f.det(d) == 1 {
                        out.push(f);
                    }
                }
            }
        }
    }
    out
}

/// `V_F` from the symplectic recipe:
/// - `β ≠ 0`: `(1/√p) Σ_{j,k} τ^{β⁻¹(αk² − 2jk + δj²)} |j⟩⟨k|`
/// - `β = 0`: `Σ_k τ^{αγk²} |αk⟩⟨k|`
fn symplectic_unitary(d: PrimeDim, f: &Sl2) -> ComplexMatrix {
    let n = d.n();
    let mut v = ComplexMatrix::zeros(n, n);
    let (a, g, e) = (f.alpha as i64, f.gamma as i64, f.delta as i64);
    match d.inv(f.beta) {
        Some(binv) => {
            let s = 1.0 / (n as f64).sqrt();
            for j in 0..n as i64 {
                for k in 0..n as i64 {
                    let ex = binv as i64 * (a * k * k - 2 * j * k + e * j * j);
                    v[(j as usize, k as usize)] = d.tau_pow(ex) * s;
                }
            }
        }
        None => {
            for k in 0..n as i64 {
                let row = (a * k).rem_euclid(n as i64) as usize;
                v[(row, k as usize)] = d.tau_pow(a * g * k * k);
            }
        }
    }
    v
}

pub fn clifford_unitary(d: PrimeDim, l: &CliffordLabel) -> ComplexMatrix {
    let shift = displacement(d, &PauliLabel { x: l.chi[0], z: l.chi[1], c: 0 });
    shift.matmul(&symplectic_unitary(d, &l.f)).expect("square")
}

/// `C_(F₁|χ₁) C_(F₂|χ₂) ∝ C_(F₁F₂ | χ₁ + F₁χ₂)`.
///
/// For `p = 2` the recipe is only a representation of `SL(2, Z_2)` modulo
/// Paulis, `V_F₁ V_F₂ ∝ D_δ V_F₁F₂`, and the displacement picks up `δ`.
pub fn clifford_compose(d: PrimeDim, l1: &CliffordLabel, l2: &CliffordLabel) -> CliffordLabel {
    let moved = l1.f.apply(d, l2.chi);
    let defect = if d.is_odd() { [0, 0] } else { qubit_defect(&l1.f, &l2.f) };
    CliffordLabel {
        f: l1.f.mul(d, &l2.f),
        chi: [
            d.reduce((l1.chi[0] + moved[0] + defect[0]) as i64),
            d.reduce((l1.chi[1] + moved[1] + defect[1]) as i64),
        ],
    }
}

/// The Pauli `δ` with `V_F V_G ∝ D_δ V_FG` for the qubit recipe, tabulated
/// from the recipe matrices on first use.
fn qubit_defect(f: &Sl2, g: &Sl2) -> [u32; 2] {
    static TABLE: OnceLock<Vec<(Sl2, Sl2, [u32; 2])>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let d = PrimeDim::new(2).expect("supported");
        let all = sl2_enumerate(d);
        let mut out = Vec::new();
        for a in &all {
            for b in &all {
                let prod = symplectic_unitary(d, a).matmul(&symplectic_unitary(d, b)).expect("2x2");
                let ab = symplectic_unitary(d, &a.mul(d, b));
                let delta = (0..4u32)
                    .map(|c| [c >> 1, c & 1])
                    .find(|&[x, z]| {
                        let cand = displacement(d, &PauliLabel { x, z, c: 0 }).matmul(&ab).expect("2x2");
                        equal_up_to_global_phase(&prod, &cand, DEFAULT_TOL).expect("2x2").is_some()
                    })
                    .expect("qubit recipe closes modulo Paulis");
                out.push((*a, *b, delta));
            }
        }
        out
    });
    table.iter().find(|(a, b, _)| a == f && b == g).map(|t| t.2).expect("SL(2, Z_2) element")
}

/// Every Clifford label, `p³(p²−1)` of them: `SL(2, Z_p) × Z_p²`.
pub fn clifford_labels(d: PrimeDim) -> Vec<CliffordLabel> {
    let p = d.p();
    sl2_enumerate(d)
        .into_iter()
        .flat_map(|f| {
            (0..p).flat_map(move |x| (0..p).map(move |z| CliffordLabel { f, chi: [x, z] }))
        })
        .collect()
}

/// Clifford labels for one dimension, with unitaries materialized on first use.
#[derive(Debug)]
pub struct CliffordGroup {
    dim: PrimeDim,
    labels: Vec<CliffordLabel>,
    unitaries: OnceLock<Vec<ComplexMatrix>>,
}

impl CliffordGroup {
    pub fn new(dim: PrimeDim) -> Self {
        Self { dim, labels: clifford_labels(dim), unitaries: OnceLock::new() }
    }

    pub fn dim(&self) -> PrimeDim {
        self.dim
    }

    pub fn labels(&self) -> &[CliffordLabel] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn unitaries(&self) -> &[ComplexMatrix] {
        self.unitaries
            .get_or_init(|| self.labels.iter().map(|l| clifford_unitary(self.dim, l)).collect())
    }
}

#[cfg(test)]
/// Determinant of a diagonal matrix.
pub(crate) fn diag_det(m: &ComplexMatrix) -> crate::numkernel::C64 {
    m.diag().into_iter().product()
}
