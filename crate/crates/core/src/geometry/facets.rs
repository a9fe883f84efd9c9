use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{hermitian_eig, ComplexMatrix, HermitianOperator, C64};
use crate::weylheis::{mub_labels, pauli_eigprojector, PrimeDim};

/// Full facets are indexed by `p+1` eigenvalue labels, one per mutually
/// unbiased basis; edge facets drop the computational-basis label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FacetKind {
    Full,
    Edge,
}

/// Eigenprojectors `Π_basis[k]` in `mub_labels` order; basis 0 is `(0|1)`.
#[derive(Clone, Debug)]
pub struct FacetSet {
    d: PrimeDim,
    projectors: Vec<Vec<HermitianOperator>>,
}

impl FacetSet {
    pub fn new(d: PrimeDim) -> Self {
        let projectors = mub_labels(d)
            .into_iter()
            .map(|(a, b)| (0..d.p()).map(|k| pauli_eigprojector(d, a, b, k).expect("nonzero label")).collect())
            .collect();
        Self { d, projectors }
    }

    pub fn dim(&self) -> PrimeDim {
        self.d
    }

    fn check(&self, u: &[u32]) -> Result<FacetKind> {
        let p = self.d.p() as usize;
        let kind = match u.len() {
            n if n == p + 1 => FacetKind::Full,
            n if n == p => FacetKind::Edge,
            got => return Err(Error::BadLength { got, full: p + 1, edge: p }),
        };
        match u.iter().find(|&&c| c >= self.d.p()) {
            Some(&c) => Err(Error::BadComponent(c)),
            None => Ok(kind),
        }
    }

    /// `A(u) = (1/p)(Σ_b Π_b[u_b] − I)`, trace `1/p`, or the edge facet
    /// `(1/p)(Σ_{b≥1} Π_b[u_b] − (p−1)I/p)`, the `u₀`-average of full facets.
    pub fn operator(&self, u: &[u32]) -> Result<HermitianOperator> {
        let kind = self.check(u)?;
        let p = self.d.p() as f64;
        let first_basis = match kind {
            FacetKind::Full => 0,
            FacetKind::Edge => 1,
        };
        let shift = match kind {
            FacetKind::Full => 1.0,
            FacetKind::Edge => (p - 1.0) / p,
        };
        let n = self.d.n();
        let mut acc = ComplexMatrix::identity(n).scale(C64::new(-shift, 0.0));
        for (i, &k) in u.iter().enumerate() {
            acc = acc.add(self.projectors[first_basis + i][k as usize].matrix())?;
        }
        HermitianOperator::new(acc.scale(C64::new(1.0 / p, 0.0)))
    }

    /// `q[b][k] = Tr[Π_b[k] ρ]`
    pub fn probabilities(&self, rho: &HermitianOperator) -> Result<Vec<Vec<f64>>> {
        if rho.dim() != self.d.n() {
            return Err(Error::ShapeMismatch(format!("state of dimension {} for p = {}", rho.dim(), self.d)));
        }
        Ok(self.projectors.iter().map(|basis| basis.iter().map(|pi| pi.expectation(rho)).collect()).collect())
    }
}

pub fn facet_operator(d: PrimeDim, u: &[u32]) -> Result<HermitianOperator> {
    FacetSet::new(d).operator(u)
}

/// Distance outside a polytope as measured by its most violated facet.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Negativity {
    /// `max(0, −min_u Tr[A(u)ρ])`
    pub value: f64,
    pub min_expectation: f64,
    pub inside: bool,
    pub argmin: Vec<u32>,
}

/// Facet values within this distance of zero count as on the boundary.
pub const BOUNDARY_TOL: f64 = 1e-12;

impl Negativity {
    fn from_min(min_expectation: f64, argmin: Vec<u32>) -> Self {
        let inside = min_expectation >= -BOUNDARY_TOL;
        let value = if inside { 0.0 } else { -min_expectation };
        Self { value, min_expectation, inside, argmin }
    }
}

fn argmin_row(row: &[f64]) -> (u32, f64) {
    row.iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, &v)| (k as u32, v))
        .expect("non-empty basis")
}

/// Stabilizer-polytope negativity. The facet label picks one eigenvalue per
/// basis independently, so `min_u Tr[A(u)ρ] = (1/p)(Σ_b min_k q_b[k] − 1)`.
pub fn negativity_state(d: PrimeDim, rho: &HermitianOperator) -> Result<Negativity> {
    let q = FacetSet::new(d).probabilities(rho)?;
    let (argmin, mins): (Vec<u32>, Vec<f64>) = q.iter().map(|row| argmin_row(row)).unzip();
    let min = (mins.iter().sum::<f64>() - 1.0) / d.p() as f64;
    Ok(Negativity::from_min(min, argmin))
}

/// Negativity with respect to the edge facets, i.e. the polytope spanned by
/// the `p²` states of diagonal Clifford gates within the equatorial plane.
pub fn edge_negativity(d: PrimeDim, rho: &HermitianOperator) -> Result<Negativity> {
    let q = FacetSet::new(d).probabilities(rho)?;
    let p = d.p() as f64;
    let (argmin, mins): (Vec<u32>, Vec<f64>) = q[1..].iter().map(|row| argmin_row(row)).unzip();
    let min = (mins.iter().sum::<f64>() - (p - 1.0) / p) / p;
    Ok(Negativity::from_min(min, argmin))
}

/// Minimum of `Tr[A(u)ρ]` over every full facet, each built explicitly.
/// Limited to `p ≤ 5` (`p^{p+1}` facets).
pub fn min_facet_exhaustive(d: PrimeDim, rho: &HermitianOperator) -> Result<(f64, Vec<u32>)> {
    if d.p() > 5 {
        return Err(Error::RuntimeBudgetExceeded(format!("exhaustive facet scan at p = {}", d.p())));
    }
    let set = FacetSet::new(d);
    let len = d.n() + 1;
    let mut best = (f64::INFINITY, Vec::new());
    for idx in 0..(d.p() as usize).pow(len as u32) {
        let u = digits(idx, d.p(), len);
        let v = set.operator(&u)?.expectation(rho);
        if v < best.0 {
            best = (v, u);
        }
    }
    Ok(best)
}

fn digits(mut idx: usize, base: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = (idx % base as usize) as u32;
        idx /= base as usize;
    }
    out
}

/// Edge facets sharing a spectrum (rounded to `1e-6`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumClass {
    pub spectrum: Vec<f64>,
    pub count: u64,
    /// Members whose lowest eigenvalue is simple and whose eigenvector has
    /// flat moduli `|v_k|² = 1/p`, i.e. is a `ψ_θ` state up to phase.
    pub flat_ground_states: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeScan {
    pub p: u32,
    pub edges: u64,
    pub min_eigenvalue: f64,
    /// Sorted by lowest eigenvalue.
    pub classes: Vec<SpectrumClass>,
}

const SPECTRUM_QUANTUM: f64 = 1e-6;
const FLAT_TOL: f64 = 1e-6;

/// Diagonalizes all `p^p` edge facets.
pub fn edge_scan(d: PrimeDim) -> Result<EdgeScan> {
    let set = FacetSet::new(d);
    let p = d.p() as usize;
    let total = p.pow(p as u32);
    type Acc = HashMap<Vec<i64>, (Vec<f64>, u64, u64)>;
    let merged: Acc = (0..total)
        .into_par_iter()
        .map(|idx| -> Result<(Vec<i64>, Vec<f64>, bool)> {
            let a = set.operator(&digits(idx, d.p(), p))?;
            let eig = hermitian_eig(&a)?;
            let simple = eig.values[1] - eig.values[0] > 1e-9;
            let flat = simple && eig.vector(0).iter().all(|v| (v.norm_sqr() - 1.0 / p as f64).abs() < FLAT_TOL);
            let key = eig.values.iter().map(|v| (v / SPECTRUM_QUANTUM).round() as i64).collect();
            Ok((key, eig.values, flat))
        })
        .try_fold(Acc::new, |mut acc, item| {
            let (key, values, flat) = item?;
            let e = acc.entry(key).or_insert((values, 0, 0));
            e.1 += 1;
            e.2 += flat as u64;
            Ok::<_, Error>(acc)
        })
        .try_reduce(Acc::new, |mut a, b| {
            for (k, (v, c, f)) in b {
                let e = a.entry(k).or_insert((v, 0, 0));
                e.1 += c;
                e.2 += f;
            }
            Ok(a)
        })?;
    let mut classes: Vec<SpectrumClass> = merged
        .into_values()
        .map(|(spectrum, count, flat_ground_states)| SpectrumClass { spectrum, count, flat_ground_states })
        .collect();
    classes.sort_by(|a, b| a.spectrum[0].total_cmp(&b.spectrum[0]).then(b.count.cmp(&a.count)));
    Ok(EdgeScan {
        p: d.p(),
        edges: total as u64,
        min_eigenvalue: classes.first().map_or(f64::NAN, |c| c.spectrum[0]),
        classes,
    })
}
