use serde::{Deserialize, Serialize};

use super::polytope::{conjugate_diagonal, lp_membership, PolytopeSpec};
use crate::error::{Error, Result};
use crate::geometry::{choi_of_unitary, negativity_state, psi_from_diag, PsiState};
use crate::hierarchy::{uv_exponents, GateParams};
use crate::numkernel::{ComplexMatrix, HermitianOperator, C64};
use crate::weylheis::PrimeDim;

const BISECTION_STEPS: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMethod {
    ClosedForm,
    Bisection,
}

/// The smallest noise rate at which the noisy object enters the polytope.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub epsilon_star: f64,
    /// Outside at `bracket.0`, inside at `bracket.1`.
    pub bracket: (f64, f64),
    pub bracket_width: f64,
    pub method: ThresholdMethod,
    pub lp_solves: usize,
    /// Bisection stopped because the LP became ill-conditioned at the boundary.
    pub stopped_early: bool,
}

impl ThresholdResult {
    fn closed_form(eps: f64) -> Self {
        Self {
            epsilon_star: eps,
            bracket: (eps, eps),
            bracket_width: 0.0,
            method: ThresholdMethod::ClosedForm,
            lp_solves: 0,
            stopped_early: false,
        }
    }
}

/// Bisects `[0, hi]` for the entry point of a convex set along a segment:
/// `inside(ε)` must be false below the threshold and true above it.
pub fn bisect<F>(hi: f64, max_width: f64, mut inside: F) -> Result<ThresholdResult>
where
    F: FnMut(f64) -> Result<bool>,
{
    let mut solves = 1;
    if inside(0.0)? {
        return Ok(ThresholdResult {
            epsilon_star: 0.0,
            bracket: (0.0, 0.0),
            bracket_width: 0.0,
            method: ThresholdMethod::Bisection,
            lp_solves: solves,
            stopped_early: false,
        });
    }
    let (mut lo, mut hi) = (0.0, hi);
    let mut stopped_early = false;
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        solves += 1;
        match inside(mid) {
            Ok(true) => hi = mid,
            Ok(false) => lo = mid,
            Err(Error::NumericalInstability(_)) if hi - lo <= max_width => {
                stopped_early = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    if hi - lo > max_width {
        return Err(Error::NumericalInstability(format!("bracket [{lo}, {hi}] wider than {max_width:e}")));
    }
    Ok(ThresholdResult {
        epsilon_star: 0.5 * (lo + hi),
        bracket: (lo, hi),
        bracket_width: hi - lo,
        method: ThresholdMethod::Bisection,
        lp_solves: solves,
        stopped_early,
    })
}

/// `(1−ε)ρ + ε·I/n`
pub fn depolarize(rho: &HermitianOperator, eps: f64) -> HermitianOperator {
    let n = rho.dim();
    HermitianOperator::combination(&[(1.0 - eps, rho), (eps, &HermitianOperator::maximally_mixed(n))])
        .expect("same dimension")
}

/// Depolarizing robustness of a state against the stabilizer polytope.
///
/// Every full facet has `Tr A = 1/p`, so along `(1−ε)ψψ† + ε I/p` the most
/// violated facet value is `(1−ε)(−N) + ε/p²`, which vanishes at
/// `ε* = N/(N + 1/p²)`.
pub fn threshold_depol_state(d: PrimeDim, psi: &PsiState) -> Result<ThresholdResult> {
    let n = negativity_state(d, &psi.density())?.value;
    let p2 = (d.p() * d.p()) as f64;
    Ok(ThresholdResult::closed_form(n / (n + 1.0 / p2)))
}

/// LP bisection counterpart of [`threshold_depol_state`].
pub fn threshold_depol_state_lp(d: PrimeDim, psi: &PsiState) -> Result<ThresholdResult> {
    let spec = PolytopeSpec::stabilizer(d);
    let rho = psi.density();
    bisect(1.0, 1e-6, |eps| Ok(lp_membership(&spec, &depolarize(&rho, eps))?.feasible))
}

/// Phase-damping robustness of a diagonal gate with respect to mixtures of
/// diagonal Clifford gates: `((p−1)/p)·ε*_D(ψ_U)`.
pub fn threshold_pd_gate(d: PrimeDim, u: &ComplexMatrix) -> Result<ThresholdResult> {
    let psi = psi_from_diag(u)?;
    let state = threshold_depol_state(d, &psi)?;
    let scale = (d.p() - 1) as f64 / d.p() as f64;
    Ok(ThresholdResult::closed_form(scale * state.epsilon_star))
}

/// `(1−ε)ψψ† + ε/(p−1)(I − ψψ†)`: the state representing the phase-damped gate.
pub fn phase_damped_state(psi: &PsiState, eps: f64) -> HermitianOperator {
    let n = psi.dim();
    let rho = psi.density();
    let id = HermitianOperator::maximally_mixed(n).scale(n as f64);
    let k = eps / (n - 1) as f64;
    HermitianOperator::combination(&[(1.0 - eps - k, &rho), (k, &id)]).expect("same dimension")
}

/// LP bisection of the phase-damped state against the `p²`-vertex polytope
/// of diagonal-Clifford states. The segment meets `I/p` at `ε = (p−1)/p`.
pub fn threshold_pd_gate_lp(d: PrimeDim, u: &ComplexMatrix) -> Result<ThresholdResult> {
    let psi = psi_from_diag(u)?;
    let spec = PolytopeSpec::equatorial(d);
    let hi = (d.p() - 1) as f64 / d.p() as f64;
    bisect(hi, 1e-6, |eps| Ok(lp_membership(&spec, &phase_damped_state(&psi, eps))?.feasible))
}

/// How much work [`threshold_depol_gate`] may do.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Budget {
    /// `p ∈ {2, 3}`.
    Desk,
    /// Also `p = 5` (3000 vertices, about a second after symmetry reduction).
    Extended,
}

/// Depolarizing robustness of a gate: bisection on
/// `(1−ε)|J_U⟩⟨J_U| + ε I/p² ∈ CLIFF`.
pub fn threshold_depol_gate(d: PrimeDim, u: &ComplexMatrix, budget: Budget) -> Result<ThresholdResult> {
    match (d.p(), budget) {
        (2 | 3, _) | (5, Budget::Extended) => {}
        (p, _) => {
            return Err(Error::RuntimeBudgetExceeded(format!(
                "Clifford-polytope LP at p = {p} has {} vertices",
                p.pow(3) * (p * p - 1)
            )))
        }
    }
    let spec = PolytopeSpec::clifford(d);
    let j = choi_of_unitary(u)?.into_operator();
    let spec = match diagonal_symmetry(d, &j) {
        Some(group) => spec.diagonal_twirl(&group).unwrap_or(spec),
        None => spec,
    };
    bisect(1.0, 1e-4, |eps| Ok(lp_membership(&spec, &depolarize(&j, eps))?.feasible))
}

/// The operators `D̄⊗D` over diagonal Cliffords `D`, as diagonals, if each
/// fixes `choi`. They permute the Clifford Choi states, and `I/p²` is fixed by
/// everything, so the whole depolarizing segment is invariant.
fn diagonal_symmetry(d: PrimeDim, choi: &HermitianOperator) -> Option<Vec<Vec<C64>>> {
    let group: Vec<Vec<C64>> = GateParams::all(d)
        .filter(GateParams::is_clifford)
        .map(|g| {
            let diag = uv_exponents(d, g).matrix().diag();
            diag.iter().flat_map(|a| diag.iter().map(move |b| a.conj() * b)).collect()
        })
        .collect();
    let fixed = group.iter().all(|w| {
        conjugate_diagonal(choi.matrix(), w).max_abs_diff(choi.matrix()).is_ok_and(|e| e < 1e-12)
    });
    fixed.then_some(group)
}

/// Noise rate of the state prepared by the post-selected injection circuit
/// from a gate depolarized at rate `ε`: `ε′ = ε/(p − (p−1)ε)`.
pub fn dilution(d: PrimeDim, eps: f64) -> f64 {
    let p = d.p() as f64;
    eps / (p - (p - 1.0) * eps)
}

/// `ε = pε′/(1 + (p−1)ε′)`
pub fn dilution_inv(d: PrimeDim, eps_out: f64) -> f64 {
    let p = d.p() as f64;
    p * eps_out / (1.0 + (p - 1.0) * eps_out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weylheis::{clifford_unitary, CliffordLabel, Sl2};

    fn dim(p: u32) -> PrimeDim {
        PrimeDim::new(p).unwrap()
    }

    fn reference(d: PrimeDim) -> ComplexMatrix {
        uv_exponents(d, GateParams::reference(d)).matrix()
    }

    #[test]
    fn state_thresholds_closed_form_vs_lp() {
        for p in [2, 3, 5, 7] {
            let d = dim(p);
            let psi = PsiState::from_params(d, GateParams::reference(d));
            let closed = threshold_depol_state(d, &psi).unwrap();
            let lp = threshold_depol_state_lp(d, &psi).unwrap();
            assert!((closed.epsilon_star - lp.epsilon_star).abs() < 1e-5, "p={p}");
        }
    }

    #[test]
    fn qubit_state_threshold() {
        let d = dim(2);
        let t = threshold_depol_state(d, &PsiState::from_params(d, GateParams::reference(d))).unwrap();
        assert!((t.epsilon_star - 0.293).abs() < 5e-4);
        // N/(N + 1/4) with N = (√2−1)/4 gives 1 − 1/√2
        assert!((t.epsilon_star - (1.0 - 0.5f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn stabilizer_state_threshold_is_zero() {
        let d = dim(3);
        let plus = PsiState::from_phases(&[0.0; 3]);
        assert_eq!(threshold_depol_state(d, &plus).unwrap().epsilon_star, 0.0);
        let lp = threshold_depol_state_lp(d, &plus).unwrap();
        assert_eq!(lp.epsilon_star, 0.0);
    }

    #[test]
    fn pd_thresholds() {
        let want = [(2, 0.146447), (3, 0.367267), (5, 0.64), (7, 0.732697)];
        for (p, w) in want {
            let d = dim(p);
            let t = threshold_pd_gate(d, &reference(d)).unwrap();
            assert!((t.epsilon_star - w).abs() < 1e-6, "p={p}: {}", t.epsilon_star);
        }
    }

    #[test]
    fn pd_lp_cross_check() {
        for p in [2, 3, 5] {
            let d = dim(p);
            let u = reference(d);
            let closed = threshold_pd_gate(d, &u).unwrap().epsilon_star;
            let lp = threshold_pd_gate_lp(d, &u).unwrap().epsilon_star;
            assert!((closed - lp).abs() < 1e-4, "p={p}: {closed} vs {lp}");
        }
    }

    #[test]
    fn diagonal_clifford_has_zero_thresholds() {
        let d = dim(3);
        let s = uv_exponents(d, GateParams::new(d, 1, 0, 2)).matrix();
        assert_eq!(threshold_pd_gate(d, &s).unwrap().epsilon_star, 0.0);
        assert_eq!(threshold_pd_gate_lp(d, &s).unwrap().epsilon_star, 0.0);
    }

    #[test]
    fn clifford_gate_has_zero_depol_threshold() {
        let d = dim(3);
        let c = clifford_unitary(d, &CliffordLabel { f: Sl2::new(d, 0, 1, 2, 0), chi: [1, 2] });
        assert_eq!(threshold_depol_gate(d, &c, Budget::Desk).unwrap().epsilon_star, 0.0);
    }

    #[test]
    fn qubit_gate_threshold() {
        let d = dim(2);
        let t = threshold_depol_gate(d, &reference(d), Budget::Desk).unwrap();
        assert!((t.epsilon_star - 0.4532).abs() < 5e-4, "{}", t.epsilon_star);
        assert!(t.bracket_width <= 1e-4);
    }

    #[test]
    fn large_dimensions_are_budgeted() {
        let d = dim(7);
        assert!(matches!(
            threshold_depol_gate(d, &reference(d), Budget::Extended).unwrap_err(),
            Error::RuntimeBudgetExceeded(_)
        ));
        let d = dim(5);
        assert!(matches!(
            threshold_depol_gate(d, &reference(d), Budget::Desk).unwrap_err(),
            Error::RuntimeBudgetExceeded(_)
        ));
    }

    #[test]
    fn dilution_values() {
        let d3 = dim(3);
        assert!((dilution(d3, 0.5815) - 0.3165).abs() < 5e-5);
        assert!((dilution_inv(d3, 0.3165) - 0.5815).abs() < 1e-4);
        assert_eq!(dilution(d3, 0.0), 0.0);
        assert!((dilution(d3, 1.0) - 1.0).abs() < 1e-15);
        let d5 = dim(5);
        assert!((dilution(d5, 0.8061) - 0.454).abs() < 5e-4);
    }

    #[test]
    fn dilution_round_trip_grid() {
        for p in [2, 3, 5, 7] {
            let d = dim(p);
            for i in 0..=1000 {
                let e = i as f64 / 1000.0;
                assert!((dilution(d, dilution_inv(d, e)) - e).abs() < 1e-14);
                assert!((dilution_inv(d, dilution(d, e)) - e).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn membership_is_monotone_along_depolarization() {
        let d = dim(3);
        let spec = PolytopeSpec::stabilizer(d);
        let rho = PsiState::from_params(d, GateParams::reference(d)).density();
        let mut seen_inside = false;
        for i in 0..=100 {
            let inside = lp_membership(&spec, &depolarize(&rho, i as f64 / 100.0)).unwrap().feasible;
            assert!(!(seen_inside && !inside));
            seen_inside |= inside;
        }
        assert!(seen_inside);
    }

    #[test]
    fn diagonal_twirl_preserves_clifford_membership() {
        let d = dim(3);
        let full = PolytopeSpec::clifford(d);
        let j = choi_of_unitary(&reference(d)).unwrap().into_operator();
        let group = diagonal_symmetry(d, &j).expect("diagonal gates commute with diagonal Cliffords");
        let small = full.diagonal_twirl(&group).unwrap();
        assert!(small.len() < full.len() / 4, "{} orbits", small.len());
        for v in &small.vertices {
            assert!(lp_membership(&full, v).unwrap().feasible);
        }
        for eps in [0.5, 0.78, 0.79, 0.9] {
            let target = depolarize(&j, eps);
            assert_eq!(
                lp_membership(&full, &target).unwrap().feasible,
                lp_membership(&small, &target).unwrap().feasible,
                "ε = {eps}"
            );
        }
    }

    #[test]
    fn twirl_rejects_non_permuting_groups() {
        let d = dim(3);
        let diag = reference(d).diag();
        let w: Vec<C64> = diag.iter().flat_map(|a| diag.iter().map(move |b| a.conj() * b)).collect();
        assert!(PolytopeSpec::clifford(d).diagonal_twirl(&[w]).is_none());
        // a Choi state off the diagonal-Clifford symmetry is not twirled
        let h = clifford_unitary(d, &CliffordLabel { f: Sl2::new(d, 0, 1, 2, 0), chi: [0, 0] });
        assert!(diagonal_symmetry(d, &choi_of_unitary(&h).unwrap().into_operator()).is_none());
    }
}
