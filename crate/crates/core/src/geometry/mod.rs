//! States and channels attached to diagonal gates, stabilizer-polytope
//! facets, negativity, and the injection and dilution circuits.

mod circuits;
mod facets;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hierarchy::{uv_exponents, DiagGateExact, GateParams};
use crate::numkernel::{norm, ComplexMatrix, HermitianOperator, C64, DEFAULT_TOL};
use crate::weylheis::{displacement, shift_clock, PauliLabel, PrimeDim};

pub use circuits::{
    clifford_eigen_check, inject_gate, simulate_dilution, DilutionOutcome, EigenPhase, InjectionOutcome,
};
pub use facets::{
    edge_negativity, edge_scan, facet_operator, min_facet_exhaustive, negativity_state, EdgeScan, FacetKind, BOUNDARY_TOL,
    FacetSet, Negativity, SpectrumClass,
};

/// `ψ_U = U|+⟩`: the diagonal of `U` scaled by `1/√p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiState {
    amplitudes: Vec<C64>,
}

impl PsiState {
    /// Normalizes `amplitudes`; fails on the zero vector.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidArgument("state vector has zero norm".into()));
        }
        Ok(Self { amplitudes: amplitudes.into_iter().map(|a| a / n).collect() })
    }

    pub fn from_gate(gate: &DiagGateExact) -> Self {
        let s = 1.0 / (gate.dim() as f64).sqrt();
        Self { amplitudes: gate.phases().into_iter().map(|z| z * s).collect() }
    }

    pub fn from_params(d: PrimeDim, g: GateParams) -> Self {
        Self::from_gate(&uv_exponents(d, g))
    }

    /// `(1/√p) Σ_k e^{iθ_k} |k⟩`
    pub fn from_phases(theta: &[f64]) -> Self {
        let s = 1.0 / (theta.len() as f64).sqrt();
        Self { amplitudes: theta.iter().map(|&t| C64::from_polar(s, t)).collect() }
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn density(&self) -> HermitianOperator {
        HermitianOperator::pure(&self.amplitudes)
    }
}

/// `ψ_U` for a diagonal unitary given as a matrix.
pub fn psi_from_diag(u: &ComplexMatrix) -> Result<PsiState> {
    if !u.is_square() || !u.is_diagonal(DEFAULT_TOL) {
        return Err(Error::NotDiagonal);
    }
    let defect = u.unitarity_defect();
    if defect > DEFAULT_TOL {
        return Err(Error::NotUnitary(defect));
    }
    let s = 1.0 / (u.rows() as f64).sqrt();
    Ok(PsiState { amplitudes: u.diag().into_iter().map(|z| z * s).collect() })
}

/// A channel `ρ ↦ Σ w_i K_i ρ K_i†` with `Σ w_i K_i†K_i = I`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KrausChannel {
    terms: Vec<(f64, ComplexMatrix)>,
}

impl KrausChannel {
    pub fn new(terms: Vec<(f64, ComplexMatrix)>) -> Result<Self> {
        let n = terms
            .first()
            .map(|(_, k)| k.rows())
            .ok_or_else(|| Error::ShapeMismatch("channel without Kraus operators".into()))?;
        if terms.iter().any(|(w, _)| *w < 0.0 || !w.is_finite()) {
            return Err(Error::InvalidArgument("negative Kraus weight".into()));
        }
        let mut sum = ComplexMatrix::zeros(n, n);
        for (w, k) in &terms {
            sum = sum.add(&k.dagger().matmul(k)?.scale(C64::new(*w, 0.0)))?;
        }
        let defect = sum.max_abs_diff(&ComplexMatrix::identity(n))?;
        if defect > DEFAULT_TOL {
            return Err(Error::NotTracePreserving(defect));
        }
        Ok(Self { terms })
    }

    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![(1.0, u)])
    }

    /// `(1−ε) UρU† + ε I/p`, realized as `U` followed by a uniformly random
    /// displacement with probability `ε`.
    pub fn depolarized(d: PrimeDim, u: &ComplexMatrix, eps: f64) -> Result<Self> {
        check_rate(eps)?;
        let p = d.p() as i64;
        let mut terms = vec![(1.0 - eps, u.clone())];
        for x in 0..p {
            for z in 0..p {
                terms.push((eps / (p * p) as f64, displacement(d, &PauliLabel::xz(d, x, z)).matmul(u)?));
            }
        }
        Self::new(terms)
    }

    /// `(1−ε) UρU† + ε/(p−1) Σ_{k≥1} Z^k U ρ (Z^k U)†`
    pub fn phase_damped(d: PrimeDim, u: &ComplexMatrix, eps: f64) -> Result<Self> {
        check_rate(eps)?;
        let mut terms = vec![(1.0 - eps, u.clone())];
        for k in 1..d.p() {
            terms.push((eps / (d.p() - 1) as f64, shift_clock(d, 0, k).matmul(u)?));
        }
        Self::new(terms)
    }

    pub fn dim(&self) -> usize {
        self.terms[0].1.rows()
    }

    pub fn terms(&self) -> &[(f64, ComplexMatrix)] {
        &self.terms
    }

    pub fn apply(&self, rho: &HermitianOperator) -> Result<HermitianOperator> {
        let n = self.dim();
        let mut acc = ComplexMatrix::zeros(n, n);
        for (w, k) in &self.terms {
            acc = acc.add(&k.matmul(rho.matrix())?.matmul(&k.dagger())?.scale(C64::new(*w, 0.0)))?;
        }
        HermitianOperator::new(acc)
    }
}

fn check_rate(eps: f64) -> Result<()> {
    if (0.0..=1.0).contains(&eps) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("noise rate {eps} outside [0, 1]")))
    }
}

/// `(I ⊗ E)(|Φ⟩⟨Φ|)` with `|Φ⟩ = Σ_j |jj⟩/√p`; the channel acts on the second
/// tensor factor and basis index `a·p + b` labels `|a⟩⊗|b⟩`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChoiState {
    local_dim: usize,
    op: HermitianOperator,
}

impl ChoiState {
    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn into_operator(self) -> HermitianOperator {
        self.op
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    /// Trace over the second (channel output) factor.
    pub fn reduced_input(&self) -> ComplexMatrix {
        partial_trace_second(self.op.matrix(), self.local_dim)
    }
}

/// Rank-one Choi state of a unitary.
pub fn choi_of_unitary(u: &ComplexMatrix) -> Result<ChoiState> {
    let defect = u.unitarity_defect();
    if defect > DEFAULT_TOL {
        return Err(Error::NotUnitary(defect));
    }
    let n = u.rows();
    Ok(ChoiState { local_dim: n, op: HermitianOperator::pure(&choi_vector(u)) })
}

pub fn choi_of_channel(e: &KrausChannel) -> Result<ChoiState> {
    let n = e.dim();
    let mut acc = ComplexMatrix::zeros(n * n, n * n);
    for (w, k) in e.terms() {
        let v = choi_vector(k);
        acc = acc.add(&ComplexMatrix::outer(&v, &v).scale(C64::new(*w, 0.0)))?;
    }
    Ok(ChoiState { local_dim: n, op: HermitianOperator::new(acc)? })
}

/// `(I ⊗ K) Σ_j |jj⟩/√n`
fn choi_vector(k: &ComplexMatrix) -> Vec<C64> {
    let n = k.rows();
    let s = 1.0 / (n as f64).sqrt();
    let mut v = vec![C64::new(0.0, 0.0); n * n];
    for j in 0..n {
        for i in 0..n {
            v[j * n + i] = k[(i, j)] * s;
        }
    }
    v
}

/// `Tr₂` of an operator on `C^n ⊗ C^n`.
pub fn partial_trace_second(m: &ComplexMatrix, n: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            out[(a, b)] = (0..n).map(|k| m[(a * n + k, b * n + k)]).sum();
        }
    }
    out
}
