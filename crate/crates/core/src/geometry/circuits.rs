use serde::{Deserialize, Serialize};

use super::{choi_of_channel, KrausChannel, PsiState};
use crate::error::{Error, Result};
use crate::hierarchy::{uv_exponents, GateParams};
use crate::numkernel::{inner, norm, ComplexMatrix, HermitianOperator, C64};
use crate::weylheis::{clifford_unitary, root_of_unity, CliffordLabel, PrimeDim, Sl2};

const EIGEN_RESIDUAL: f64 = 1e-8;
const PHASE_TOL: f64 = 1e-9;
const FIT_RESIDUAL: f64 = 1e-8;

/// An eigenvalue `ζ_R^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenPhase {
    pub root_order: u32,
    pub exponent: u32,
    pub value: C64,
}

/// Applies `C_([1,0;γ′,1] | (1,z′))` to `ψ_g` and returns its eigenvalue,
/// expressed over the root order of `U_υ(g)` (`p`, 9 or 8).
pub fn clifford_eigen_check(d: PrimeDim, g: GateParams) -> Result<EigenPhase> {
    let psi = PsiState::from_params(d, g);
    let c = clifford_unitary(d, &CliffordLabel { f: Sl2::lower(d, g.gamma as i64), chi: [1, g.z] });
    let image = c.apply(psi.amplitudes())?;
    let value = inner(psi.amplitudes(), &image);
    let residual = norm(&image.iter().zip(psi.amplitudes()).map(|(a, b)| a - value * b).collect::<Vec<_>>());
    if residual > EIGEN_RESIDUAL {
        return Err(Error::NotEigenvector(residual));
    }
    let r = uv_exponents(d, g).root_order;
    (0..r)
        .find(|&k| (root_of_unity(r as u64, k as i64) - value).norm() < PHASE_TOL)
        .map(|exponent| EigenPhase { root_order: r, exponent, value })
        .ok_or(Error::NotEigenvector(residual))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InjectionOutcome {
    /// Normalized post-measurement state on `C^p ⊗ C^p`, index `a·p + b`.
    pub output: Vec<C64>,
    pub success_probability: f64,
    /// `|⟨(U ψ_in) ⊗ 0 | output⟩|²`
    pub fidelity: f64,
}

/// Permutation `|a,b⟩ ↦ |a, b−a⟩` applied to a two-qudit vector.
fn correct(v: &[C64], p: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    for a in 0..p {
        for b in 0..p {
            out[a * p + (b + p - a) % p] = v[a * p + b];
        }
    }
    out
}

/// Teleports `U_υ(g)` onto `ψ_in` by measuring `ψ_g ⊗ ψ_in` in the
/// eigenbasis of `Z ⊗ Z⁻¹` and keeping the `ω⁰` outcome (the span of
/// `|jj⟩`), then undoing the entanglement with `|a,b⟩ ↦ |a, b−a⟩`.
pub fn inject_gate(d: PrimeDim, g: GateParams, psi_in: &[C64]) -> Result<InjectionOutcome> {
    let p = d.n();
    if psi_in.len() != p {
        return Err(Error::ShapeMismatch(format!("input state of length {} for p = {p}", psi_in.len())));
    }
    let psi_in = PsiState::new(psi_in.to_vec())?;
    let magic = PsiState::from_params(d, g);
    let mut joint = vec![C64::new(0.0, 0.0); p * p];
    for j in 0..p {
        // only |jj⟩ survives the projection
        joint[j * p + j] = magic.amplitudes()[j] * psi_in.amplitudes()[j];
    }
    let success_probability = norm(&joint).powi(2);
    let scale = success_probability.sqrt();
    let output: Vec<C64> = correct(&joint, p).into_iter().map(|x| x / scale).collect();

    let u_psi = uv_exponents(d, g).matrix().apply(psi_in.amplitudes())?;
    let mut target = vec![C64::new(0.0, 0.0); p * p];
    for a in 0..p {
        target[a * p] = u_psi[a];
    }
    let fidelity = inner(&target, &output).norm_sqr();
    Ok(InjectionOutcome { output, success_probability, fidelity })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DilutionOutcome {
    /// Effective depolarizing rate of the prepared state.
    pub epsilon_out: f64,
    pub success_probability: f64,
    /// Max-entry deviation from `(1−ε′)ψψ† + ε′I/p ⊗ |0⟩⟨0|`.
    pub residual: f64,
}

/// Runs the injection circuit on the Choi state of `U_υ(g)` under
/// depolarizing noise of rate `ε` and fits the output to
/// `(1−ε′)|ψ_g⟩⟨ψ_g| + ε′ I/p`.
pub fn simulate_dilution(d: PrimeDim, g: GateParams, eps: f64) -> Result<DilutionOutcome> {
    let p = d.n();
    let u = uv_exponents(d, g).matrix();
    let choi = choi_of_channel(&KrausChannel::depolarized(d, &u, eps)?)?;
    let j = choi.operator().matrix();

    // project onto span{|jj⟩} and apply the correction
    let perm = |a: usize, b: usize| a * p + (b + p - a) % p;
    let mut post = ComplexMatrix::zeros(p * p, p * p);
    for a in 0..p {
        for b in 0..p {
            post[(perm(a, a), perm(b, b))] = j[(a * p + a, b * p + b)];
        }
    }
    let success_probability = post.trace().re;
    let post = post.scale(C64::new(1.0 / success_probability, 0.0));
    let reduced = super::partial_trace_second(&post, p);

    // least-squares fit of the off-diagonal scale against ψψ†
    let psi = PsiState::from_params(d, g);
    let pure = HermitianOperator::pure(psi.amplitudes());
    let (mut num, mut den) = (0.0, 0.0);
    for a in 0..p {
        for b in 0..p {
            if a != b {
                let m = pure.matrix()[(a, b)];
                num += (reduced[(a, b)] * m.conj()).re;
                den += m.norm_sqr();
            }
        }
    }
    let epsilon_out = 1.0 - num / den;
    let model = pure
        .matrix()
        .scale(C64::new(1.0 - epsilon_out, 0.0))
        .add(&ComplexMatrix::identity(p).scale(C64::new(epsilon_out / p as f64, 0.0)))?;
    let mut ket0 = ComplexMatrix::zeros(p, p);
    ket0[(0, 0)] = C64::new(1.0, 0.0);
    let residual = post.max_abs_diff(&model.kron(&ket0))?;
    if residual > FIT_RESIDUAL {
        return Err(Error::ConvergenceFailure(residual));
    }
    Ok(DilutionOutcome { epsilon_out, success_probability, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dim(p: u32) -> PrimeDim {
        PrimeDim::new(p).unwrap()
    }

    fn dilution_formula(p: f64, e: f64) -> f64 {
        e / (p - (p - 1.0) * e)
    }

    #[test]
    fn eigenvalue_examples() {
        let d5 = dim(5);
        let e = clifford_eigen_check(d5, GateParams::new(d5, 1, 4, 0)).unwrap();
        assert_eq!((e.root_order, e.exponent), (5, 0));
        let e = clifford_eigen_check(d5, GateParams::new(d5, 1, 4, 2)).unwrap();
        // ω^{−ε′}
        assert_eq!(e.exponent, 3);
        let d3 = dim(3);
        let e = clifford_eigen_check(d3, GateParams::new(d3, 1, 2, 0)).unwrap();
        assert_eq!(e.root_order, 9);
        assert!((e.value.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn every_label_is_an_eigenvector() {
        for p in [2, 3, 5, 7] {
            let d = dim(p);
            for g in GateParams::all(d) {
                let e = clifford_eigen_check(d, g).unwrap();
                let kappa = crate::hierarchy::conjugation_phase(d, g);
                assert!((e.value * kappa - C64::new(1.0, 0.0)).norm() < 1e-9, "p={p} g={g}");
                if p > 3 {
                    assert_eq!(e.exponent, d.reduce(-(g.epsilon as i64)));
                }
            }
        }
    }

    #[test]
    fn inject_on_basis_state() {
        for p in [2, 3, 5, 7] {
            let d = dim(p);
            let mut zero = vec![C64::new(0.0, 0.0); p as usize];
            zero[0] = C64::new(1.0, 0.0);
            let out = inject_gate(d, GateParams::reference(d), &zero).unwrap();
            assert!((out.success_probability - 1.0 / p as f64).abs() < 1e-12);
            assert!((out.output[0] - C64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn inject_qubit_plus_gives_magic_state() {
        let d = dim(2);
        let s = 1.0 / 2f64.sqrt();
        let out = inject_gate(d, GateParams::reference(d), &[C64::new(s, 0.0), C64::new(s, 0.0)]).unwrap();
        // first register holds (|0⟩ + e^{iπ/4}|1⟩)/√2, second register |0⟩
        assert!((out.output[0] - C64::new(s, 0.0)).norm() < 1e-12);
        assert!((out.output[2] - C64::from_polar(s, std::f64::consts::FRAC_PI_4)).norm() < 1e-12);
        assert!(out.output[1].norm() < 1e-15 && out.output[3].norm() < 1e-15);
    }

    #[test]
    fn inject_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in [2, 3, 5, 7] {
            let d = dim(p);
            for g in GateParams::all(d).step_by(7) {
                let v: Vec<C64> =
                    (0..p).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
                let out = inject_gate(d, g, &v).unwrap();
                assert!(out.fidelity > 1.0 - 1e-10);
                assert!((out.success_probability - 1.0 / p as f64).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn dilution_endpoints() {
        for p in [2, 3, 5] {
            let d = dim(p);
            let g = GateParams::reference(d);
            assert!(simulate_dilution(d, g, 0.0).unwrap().epsilon_out.abs() < 1e-12);
            assert!((simulate_dilution(d, g, 1.0).unwrap().epsilon_out - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dilution_matches_formula() {
        for p in [2u32, 3, 5, 7] {
            let d = dim(p);
            let g = GateParams::reference(d);
            for i in 0..=10 {
                let eps = i as f64 / 10.0;
                let out = simulate_dilution(d, g, eps).unwrap();
                assert!((out.epsilon_out - dilution_formula(p as f64, eps)).abs() < 1e-10);
                let prob = (1.0 - eps) + eps / p as f64;
                assert!((out.success_probability - prob).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn qutrit_lower_bound_input() {
        let d = dim(3);
        let out = simulate_dilution(d, GateParams::reference(d), 0.5815).unwrap();
        assert!((out.epsilon_out - 0.3165).abs() < 5e-5);
    }

    #[test]
    fn dilution_rejects_bad_rate() {
        let d = dim(3);
        assert!(simulate_dilution(d, GateParams::reference(d), -0.1).is_err());
    }
}
