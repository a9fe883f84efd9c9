use serde::{Deserialize, Serialize};

use super::PrimeDim;
use crate::error::{Error, Result};
use crate::numkernel::{ComplexMatrix, HermitianOperator, C64};

/// `τ^c · D_(x|z)`. The phase exponent `c` is taken modulo the order of τ
/// (`p` for odd `p`, 4 for `p = 2`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliLabel {
    pub x: u32,
    pub z: u32,
    pub c: u32,
}

impl PauliLabel {
    pub fn new(d: PrimeDim, x: i64, z: i64, c: i64) -> Self {
        let tau_order = if d.is_odd() { d.p() as i64 } else { 4 };
        Self { x: d.reduce(x), z: d.reduce(z), c: c.rem_euclid(tau_order) as u32 }
    }

    pub fn xz(d: PrimeDim, x: i64, z: i64) -> Self {
        Self::new(d, x, z, 0)
    }
}

/// `τ^{c + xz} X^x Z^z`, built entrywise: `|k⟩ ↦ τ^{c + xz + 2zk} |k + x⟩`.
pub fn displacement(d: PrimeDim, l: &PauliLabel) -> ComplexMatrix {
    let n = d.n();
    let mut m = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let e = l.c as i64 + (l.x as i64) * (l.z as i64) + 2 * (l.z as i64) * (k as i64);
        m[((k + l.x as usize) % n, k)] = d.tau_pow(e);
    }
    m
}

/// `X^a Z^b` without the τ prefactor.
pub fn shift_clock(d: PrimeDim, a: u32, b: u32) -> ComplexMatrix {
    let n = d.n();
    let mut m = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        m[((k + a as usize) % n, k)] = d.omega_pow(b as i64 * k as i64);
    }
    m
}

/// The `p + 1` Pauli labels whose eigenbases are mutually unbiased:
/// `(0|1)` followed by `(1|j)` for `j = 0..p`.
pub fn mub_labels(d: PrimeDim) -> Vec<(u32, u32)> {
    std::iter::once((0, 1)).chain((0..d.p()).map(|j| (1, j))).collect()
}

/// Projector onto the `ω^k` eigenspace of `X^a Z^b`,
/// `Π = (1/p) Σ_m ω^{-km} (X^a Z^b)^m`.
///
/// For `p = 2` the operator `XZ` has eigenvalues `±i`, so the Hermitian
/// displacement `D_(a|b)` is used instead.
pub fn pauli_eigprojector(d: PrimeDim, a: u32, b: u32, k: u32) -> Result<HermitianOperator> {
    let (a, b, k) = (a % d.p(), b % d.p(), k % d.p());
    if a == 0 && b == 0 {
        return Err(Error::ZeroLabel);
    }
    let op = if d.is_odd() {
        shift_clock(d, a, b)
    } else {
        displacement(d, &PauliLabel { x: a, z: b, c: 0 })
    };
    let n = d.n();
    let mut acc = ComplexMatrix::zeros(n, n);
    let mut power = ComplexMatrix::identity(n);
    for m in 0..d.p() {
        acc = acc.add(&power.scale(d.omega_pow(-(k as i64) * m as i64)))?;
        power = power.matmul(&op)?;
    }
    HermitianOperator::new(acc.scale(C64::new(1.0 / d.p() as f64, 0.0)))
}

/// Unit eigenvectors for every `(basis, k)` in `mub_labels` order; the
/// vector for `(a|b)[k]` spans the range of `pauli_eigprojector(d, a, b, k)`.
pub fn stabilizer_vectors(d: PrimeDim) -> Vec<Vec<Vec<C64>>> {
    mub_labels(d)
        .into_iter()
        .map(|(a, b)| {
            (0..d.p())
                .map(|k| {
                    let proj = pauli_eigprojector(d, a, b, k).expect("nonzero label");
                    range_vector(proj.matrix())
                })
                .collect()
        })
        .collect()
}

/// Normalized column of largest norm of a rank-one projector.
fn range_vector(m: &ComplexMatrix) -> Vec<C64> {
    let col = (0..m.cols())
        .max_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re))
        .expect("non-empty");
    let v = m.column(col);
    let nrm = crate::numkernel::norm(&v);
    v.into_iter().map(|x| x / nrm).collect()
}

/// The `p(p+1)` single-qudit stabilizer states as density operators,
/// grouped by basis in `mub_labels` order.
pub fn stabilizer_states(d: PrimeDim) -> Vec<HermitianOperator> {
    mub_labels(d)
        .into_iter()
        .flat_map(|(a, b)| {
            (0..d.p()).map(move |k| pauli_eigprojector(d, a, b, k).expect("nonzero label"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{equal_up_to_global_phase, DEFAULT_TOL};

    fn dims() -> impl Iterator<Item = PrimeDim> {
        [2, 3, 5, 7].into_iter().map(|p| PrimeDim::new(p).unwrap())
    }

    #[test]
    fn shift_acts_cyclically() {
        let d = PrimeDim::new(3).unwrap();
        let x = displacement(d, &PauliLabel::xz(d, 1, 0));
        for j in 0..3 {
            assert_eq!(x[((j + 1) % 3, j)], C64::new(1.0, 0.0));
        }
        assert_eq!(displacement(d, &PauliLabel::xz(d, 0, 0)), ComplexMatrix::identity(3));
    }

    #[test]
    fn displacements_are_unitary_and_odd_p_periodic() {
        for d in dims() {
            for x in 0..d.p() {
                for z in 0..d.p() {
                    let m = displacement(d, &PauliLabel::xz(d, x as i64, z as i64));
                    assert!(m.is_unitary(1e-10));
                    if d.is_odd() {
                        let pw = m.pow(d.p()).unwrap();
                        assert!(pw.max_abs_diff(&ComplexMatrix::identity(d.n())).unwrap() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn qutrit_d11_cubed_is_identity() {
        let d = PrimeDim::new(3).unwrap();
        let m = displacement(d, &PauliLabel::xz(d, 1, 1));
        let direct = m.matmul(&m).unwrap().matmul(&m).unwrap();
        assert!(direct.max_abs_diff(&ComplexMatrix::identity(3)).unwrap() < 1e-12);
        assert!(m.dagger().matmul(&m).unwrap().max_abs_diff(&ComplexMatrix::identity(3)).unwrap() < 1e-12);
    }

    #[test]
    fn clock_shift_commutation() {
        // XZ = ω^{-1} ZX
        for d in dims() {
            let x = shift_clock(d, 1, 0);
            let z = shift_clock(d, 0, 1);
            let xz = x.matmul(&z).unwrap();
            let zx = z.matmul(&x).unwrap().scale(d.omega_pow(-1));
            assert!(xz.max_abs_diff(&zx).unwrap() < 1e-10);
        }
    }

    #[test]
    fn qubit_paulis_match_standard_up_to_phase() {
        let d = PrimeDim::new(2).unwrap();
        let y = displacement(d, &PauliLabel::xz(d, 1, 1));
        let std_y = ComplexMatrix::from_rows(&[
            vec![C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
            vec![C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
        ])
        .unwrap();
        assert!(equal_up_to_global_phase(&y, &std_y, DEFAULT_TOL).unwrap().is_some());
    }

    #[test]
    fn projectors_are_rank_one_and_complete() {
        for d in dims() {
            for (a, b) in mub_labels(d) {
                let mut sum = ComplexMatrix::zeros(d.n(), d.n());
                let op = if d.is_odd() {
                    shift_clock(d, a, b)
                } else {
                    displacement(d, &PauliLabel::xz(d, a as i64, b as i64))
                };
                for k in 0..d.p() {
                    let pi = pauli_eigprojector(d, a, b, k).unwrap();
                    let m = pi.matrix();
                    assert!((pi.trace() - 1.0).abs() < 1e-12);
                    assert!(m.matmul(m).unwrap().max_abs_diff(m).unwrap() < 1e-12);
                    let lhs = op.matmul(m).unwrap();
                    assert!(lhs.max_abs_diff(&m.scale(d.omega_pow(k as i64))).unwrap() < 1e-12);
                    sum = sum.add(m).unwrap();
                }
                assert!(sum.max_abs_diff(&ComplexMatrix::identity(d.n())).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn qubit_z_projector() {
        let d = PrimeDim::new(2).unwrap();
        let pi = pauli_eigprojector(d, 0, 1, 0).unwrap();
        let want = ComplexMatrix::from_diag(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        assert!(pi.matrix().max_abs_diff(&want).unwrap() < 1e-15);
    }

    #[test]
    fn zero_label_rejected() {
        let d = PrimeDim::new(3).unwrap();
        assert_eq!(pauli_eigprojector(d, 0, 0, 1).unwrap_err(), Error::ZeroLabel);
    }

    #[test]
    fn stabilizer_state_counts_and_distinctness() {
        for d in dims() {
            let states = stabilizer_states(d);
            assert_eq!(states.len(), (d.p() * (d.p() + 1)) as usize);
            for (i, s) in states.iter().enumerate() {
                for t in &states[i + 1..] {
                    assert!(s.matrix().max_abs_diff(t.matrix()).unwrap() > 1e-3);
                }
            }
        }
    }

    #[test]
    fn stabilizer_vectors_span_projectors() {
        for d in dims() {
            let vecs = stabilizer_vectors(d);
            for (bi, (a, b)) in mub_labels(d).into_iter().enumerate() {
                for k in 0..d.p() {
                    let pi = pauli_eigprojector(d, a, b, k).unwrap();
                    let v = &vecs[bi][k as usize];
                    let outer = ComplexMatrix::outer(v, v);
                    assert!(outer.max_abs_diff(pi.matrix()).unwrap() < 1e-12);
                }
            }
        }
    }
}
