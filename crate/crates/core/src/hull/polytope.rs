use serde::{Deserialize, Serialize};
use std::f64::consts::SQRT_2;
use std::collections::HashMap;
use std::sync::OnceLock;

use super::simplex::{phase_one, PhaseOne, PivotRule};
use crate::error::{Error, Result};
use crate::geometry::{choi_of_unitary, PsiState};
use crate::hierarchy::GateParams;
use crate::numkernel::{hermitian_eig, ComplexMatrix, HermitianOperator, C64};
use crate::weylheis::{stabilizer_states, CliffordGroup, PrimeDim};

/// Feasibility tolerance for vertex-mixture membership.
pub const LP_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolytopeKind {
    /// Mixtures of the `p(p+1)` stabilizer states.
    Stabilizer,
    /// Mixtures of the `p³(p²−1)` Choi states of Clifford gates.
    Clifford,
    /// Mixtures of the `p²` states `ψ_U` of diagonal Clifford gates.
    Equatorial,
}

/// A polytope given by its vertices, all unit-trace density operators.
#[derive(Clone, Debug)]
pub struct PolytopeSpec {
    pub kind: PolytopeKind,
    pub dim: usize,
    pub vertices: Vec<HermitianOperator>,
    reduced: OnceLock<ReducedSystem>,
}

/// The constraint columns `(vec(V), 1)` expressed in an orthonormal basis of
/// their span. Vertex sets such as Choi states share linear constraints
/// (fixed marginals), so the raw rows are dependent; removing the dependence
/// keeps the simplex tableau well conditioned.
#[derive(Clone, Debug)]
struct ReducedSystem {
    basis: Vec<Vec<f64>>,
    columns: Vec<Vec<f64>>,
}

/// Span directions shorter than this (relative to the column scale) are dropped.
const RANK_TOL: f64 = 1e-10;
/// Target components outside the vertex span longer than this are a certificate.
const SPAN_TOL: f64 = 1e-6;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl ReducedSystem {
    fn new(full: &[Vec<f64>]) -> Self {
        let scale = full.iter().map(|c| dot(c, c).sqrt()).fold(0.0, f64::max);
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for col in full {
            let mut v = col.clone();
            // two passes of modified Gram-Schmidt
            for _ in 0..2 {
                for q in &basis {
                    let c = dot(q, &v);
                    v.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
                }
            }
            let n = dot(&v, &v).sqrt();
            if n > RANK_TOL * scale {
                basis.push(v.into_iter().map(|a| a / n).collect());
            }
        }
        let columns = full.iter().map(|c| basis.iter().map(|q| dot(q, c)).collect()).collect();
        Self { basis, columns }
    }
}

impl PolytopeSpec {
    fn from_vertices(kind: PolytopeKind, dim: usize, vertices: Vec<HermitianOperator>) -> Self {
        Self { kind, dim, vertices, reduced: OnceLock::new() }
    }

    pub fn stabilizer(d: PrimeDim) -> Self {
        Self::from_vertices(PolytopeKind::Stabilizer, d.n(), stabilizer_states(d))
    }

    pub fn clifford(d: PrimeDim) -> Self {
        let group = CliffordGroup::new(d);
        let vertices = group
            .unitaries()
            .iter()
            .map(|u| choi_of_unitary(u).expect("Clifford unitaries are unitary").into_operator())
            .collect();
        Self::from_vertices(PolytopeKind::Clifford, d.n() * d.n(), vertices)
    }

    pub fn equatorial(d: PrimeDim) -> Self {
        let vertices = GateParams::all(d)
            .filter(GateParams::is_clifford)
            .map(|g| PsiState::from_params(d, g).density())
            .collect();
        Self::from_vertices(PolytopeKind::Equatorial, d.n(), vertices)
    }

    fn full_columns(&self) -> Vec<Vec<f64>> {
        self.vertices
            .iter()
            .map(|v| {
                let mut c = vectorize(v.matrix());
                c.push(1.0);
                c
            })
            .collect()
    }

    fn reduced(&self) -> &ReducedSystem {
        self.reduced.get_or_init(|| ReducedSystem::new(&self.full_columns()))
    }

    /// Orbit averages of the vertices under conjugation by the diagonal
    /// unitaries `group` (each given by its diagonal).
    ///
    /// Returns `None` unless every element maps the vertex set onto itself.
    /// A target fixed by every element lies in `self` iff it lies in the
    /// result: averaging a mixture over the group keeps the target and turns
    /// each vertex into its orbit average, which is itself a mixture of vertices.
    pub fn diagonal_twirl(&self, group: &[Vec<C64>]) -> Option<Self> {
        let n = self.vertices.len();
        let key = |m: &ComplexMatrix| -> Vec<i64> { vectorize(m).iter().map(|v| (v * 1e6).round() as i64).collect() };
        let index: HashMap<Vec<i64>, usize> =
            self.vertices.iter().enumerate().map(|(i, v)| (key(v.matrix()), i)).collect();
        let find = |m: &ComplexMatrix| -> Option<usize> {
            index.get(&key(m)).copied().or_else(|| {
                // rounding boundary: fall back to a direct comparison
                self.vertices.iter().position(|v| v.matrix().max_abs_diff(m).is_ok_and(|e| e < 1e-9))
            })
        };

        let mut parent: Vec<usize> = (0..n).collect();
        fn root(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for w in group {
            if w.len() != self.dim {
                return None;
            }
            for i in 0..n {
                let image = conjugate_diagonal(self.vertices[i].matrix(), w);
                let j = find(&image)?;
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                parent[a] = b;
            }
        }

        let mut orbits: Vec<Vec<usize>> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for i in 0..n {
            let r = root(&mut parent, i);
            let k = *slot.entry(r).or_insert_with(|| {
                orbits.push(Vec::new());
                orbits.len() - 1
            });
            orbits[k].push(i);
        }
        let vertices = orbits
            .iter()
            .map(|orbit| {
                let w = 1.0 / orbit.len() as f64;
                let terms: Vec<(f64, &HermitianOperator)> = orbit.iter().map(|&i| (w, &self.vertices[i])).collect();
                HermitianOperator::combination(&terms).expect("same dimension")
            })
            .collect();
        Some(Self::from_vertices(self.kind, self.dim, vertices))
    }

    /// Dimension of the linear span of the lifted vertices `(vec(V), 1)`.
    pub fn span_rank(&self) -> usize {
        self.reduced().basis.len()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// `W·H·W†` for `W = diag(w)`.
pub fn conjugate_diagonal(h: &ComplexMatrix, w: &[C64]) -> ComplexMatrix {
    let mut out = h.clone();
    for i in 0..w.len() {
        for j in 0..w.len() {
            out[(i, j)] = w[i] * h[(i, j)] * w[j].conj();
        }
    }
    out
}

/// Orthonormal real coordinates of a Hermitian matrix: the diagonal, then
/// `√2·Re` and `√2·Im` of each upper-triangular entry, so that
/// `⟨vec(A), vec(B)⟩ = Tr[AB]`.
pub fn vectorize(h: &ComplexMatrix) -> Vec<f64> {
    let n = h.rows();
    let mut v = Vec::with_capacity(n * n);
    v.extend((0..n).map(|i| h[(i, i)].re));
    for i in 0..n {
        for j in i + 1..n {
            v.push(SQRT_2 * h[(i, j)].re);
            v.push(SQRT_2 * h[(i, j)].im);
        }
    }
    v
}

/// Inverse of [`vectorize`].
pub fn devectorize(v: &[f64], n: usize) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = C64::new(v[i], 0.0);
    }
    let mut k = n;
    for i in 0..n {
        for j in i + 1..n {
            let z = C64::new(v[k], v[k + 1]) / SQRT_2;
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            k += 2;
        }
    }
    h
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LPOutcome {
    pub feasible: bool,
    /// Mixture weights when feasible.
    pub weights: Option<Vec<f64>>,
    /// Separating operator `W` when infeasible: `Tr[W·target] < −LP_TOL`
    /// and `Tr[W·V] ≥ −LP_TOL` for every vertex, with spectral radius 1.
    pub certificate: Option<HermitianOperator>,
    /// Feasible: max coordinate deviation of the mixture from the target.
    /// Infeasible: `Tr[W·target]`.
    pub margin: f64,
    pub pivots: usize,
}

/// Decides `target ∈ conv(vertices)` by phase-1 simplex and verifies the
/// answer post hoc (mixture residual or certificate separation).
pub fn lp_membership(spec: &PolytopeSpec, target: &HermitianOperator) -> Result<LPOutcome> {
    lp_membership_with(spec, target, PivotRule::DantzigBland)
}

pub fn lp_membership_with(spec: &PolytopeSpec, target: &HermitianOperator, rule: PivotRule) -> Result<LPOutcome> {
    if target.dim() != spec.dim {
        return Err(Error::ShapeMismatch(format!("target of dimension {} for polytope in {}", target.dim(), spec.dim)));
    }
    if (target.trace() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("target trace {} is not 1", target.trace())));
    }
    let mut b = vectorize(target.matrix());
    b.push(1.0);
    let reduced = spec.reduced();
    let b_red: Vec<f64> = reduced.basis.iter().map(|q| dot(q, &b)).collect();
    let mut outside = b.clone();
    for (q, c) in reduced.basis.iter().zip(&b_red) {
        outside.iter_mut().zip(q).for_each(|(a, qi)| *a -= c * qi);
    }

    let (y, pivots) = if dot(&outside, &outside).sqrt() > SPAN_TOL {
        // every vertex is orthogonal to `outside` while the target is not
        (outside, 0)
    } else {
        match phase_one(&reduced.columns, &b_red, LP_TOL, rule)? {
            PhaseOne::Feasible { x, pivots, .. } => {
                let columns = spec.full_columns();
                let mut worst: f64 = 0.0;
                for (i, bi) in b.iter().enumerate() {
                    let lhs: f64 = columns.iter().zip(&x).map(|(c, w)| c[i] * w).sum();
                    worst = worst.max((lhs - bi).abs());
                }
                if worst > LP_TOL {
                    return Err(Error::NumericalInstability(format!("mixture residual {worst:e}")));
                }
                return Ok(LPOutcome { feasible: true, weights: Some(x), certificate: None, margin: worst, pivots });
            }
            PhaseOne::Infeasible { y: y_red, pivots, .. } => {
                let mut y = vec![0.0; b.len()];
                for (q, c) in reduced.basis.iter().zip(&y_red) {
                    y.iter_mut().zip(q).for_each(|(a, qi)| *a += c * qi);
                }
                (y, pivots)
            }
        }
    };
    {
        {
            let (y_coords, y_sum) = y.split_at(y.len() - 1);
            let h = devectorize(y_coords, spec.dim);
            let w = ComplexMatrix::identity(spec.dim).scale(C64::new(y_sum[0], 0.0)).add(&h)?.scale(C64::new(-1.0, 0.0));
            let w = HermitianOperator::new(w)?;
            let eig = hermitian_eig(&w)?;
            let radius = eig.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            if radius == 0.0 {
                return Err(Error::NumericalInstability("zero certificate".into()));
            }
            let w = w.scale(1.0 / radius);
            let margin = w.expectation(target);
            let worst_vertex = spec.vertices.iter().map(|v| w.expectation(v)).fold(f64::INFINITY, f64::min);
            if margin >= -LP_TOL || worst_vertex < -LP_TOL {
                return Err(Error::NumericalInstability(format!(
                    "certificate does not separate (target {margin:e}, vertices {worst_vertex:e})"
                )));
            }
            Ok(LPOutcome { feasible: false, weights: None, certificate: Some(w), margin, pivots })
        }
    }
}
