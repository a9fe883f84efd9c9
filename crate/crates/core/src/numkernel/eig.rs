//! Cyclic Jacobi eigensolver for small complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies a real Givens rotation to the resulting real
//! symmetric 2x2 block. Sweeps stop once the off-diagonal Frobenius norm
//! falls below `1e-13·‖H‖_F`.

use super::matrix::{ComplexMatrix, HermitianOperator, C64};
use crate::error::{Error, Result};

const REL_TOL: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

/// Ascending eigenvalues with orthonormal eigenvectors stored as columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, j: usize) -> Vec<C64> {
        self.vectors.column(j)
    }
}

pub fn hermitian_eig(h: &HermitianOperator) -> Result<HermitianEigen> {
    let m = h.matrix();
    let defect = m.hermitian_defect();
    if defect > HermitianOperator::TOL * m.max_abs().max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = frobenius(&a);
    let target = REL_TOL * scale;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal(&a) <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, dst)] = v[(r, src)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

fn frobenius(a: &ComplexMatrix) -> f64 {
    a.data().iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn off_diagonal(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let h = a[(p, q)];
    let g = h.norm();
    if g == 0.0 {
        return;
    }
    let n = a.rows();
    let phase = h / g; // e^{iφ}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = 0.5 * (2.0 * g).atan2(aqq - app);
    let (s, c) = theta.sin_cos();
    // J = [[c, s], [-s e^{-iφ}, c e^{-iφ}]] acting on columns p, q.
    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn herm(m: ComplexMatrix) -> HermitianOperator {
        HermitianOperator::new(m).unwrap()
    }

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> HermitianOperator {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(rng.gen_range(-1.0..1.0), 0.0);
            for j in i + 1..n {
                let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        herm(m)
    }

    fn check_decomposition(h: &HermitianOperator, e: &HermitianEigen) {
        let n = h.dim();
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        let trace: f64 = e.values.iter().sum();
        assert!((trace - h.trace()).abs() < 1e-9);
        let gram = e.vectors.dagger().matmul(&e.vectors).unwrap();
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(n)).unwrap() < 1e-9);
        let mut recon = ComplexMatrix::zeros(n, n);
        for j in 0..n {
            let vj = e.vector(j);
            let hv = h.matrix().apply(&vj).unwrap();
            let resid: f64 = hv
                .iter()
                .zip(&vj)
                .map(|(a, b)| (a - b * e.values[j]).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(resid < 1e-9, "residual {resid}");
            recon = recon
                .add(&ComplexMatrix::outer(&vj, &vj).scale(C64::new(e.values[j], 0.0)))
                .unwrap();
        }
        assert!(recon.max_abs_diff(h.matrix()).unwrap() < 1e-9);
    }

    #[test]
    fn identity_spectrum() {
        let e = hermitian_eig(&herm(ComplexMatrix::identity(3))).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_is_sorted() {
        let d = ComplexMatrix::from_diag(&[3.0, 1.0, 2.0].map(|x| C64::new(x, 0.0)));
        let e = hermitian_eig(&herm(d)).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn pauli_y_spectrum() {
        let mut y = ComplexMatrix::zeros(2, 2);
        y[(0, 1)] = C64::new(0.0, -1.0);
        y[(1, 0)] = C64::new(0.0, 1.0);
        let h = herm(y);
        let e = hermitian_eig(&h).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
        check_decomposition(&h, &e);
    }

    #[test]
    fn random_matrices_up_to_81() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1, 2, 3, 5, 7, 9, 25, 49, 81] {
            let h = random_hermitian(n, &mut rng);
            check_decomposition(&h, &hermitian_eig(&h).unwrap());
        }
    }

    #[test]
    fn degenerate_spectrum() {
        // projector of rank 2 in dimension 4
        let a = [C64::new(0.5, 0.0), C64::new(0.5, 0.0), C64::new(0.0, 0.5), C64::new(0.0, -0.5)];
        let b = [C64::new(0.5, 0.0), C64::new(0.5, 0.0), C64::new(0.0, -0.5), C64::new(0.0, 0.5)];
        let m = ComplexMatrix::outer(&a, &a).add(&ComplexMatrix::outer(&b, &b)).unwrap();
        let h = herm(m);
        let e = hermitian_eig(&h).unwrap();
        check_decomposition(&h, &e);
        for (got, want) in e.values.iter().zip([0.0, 0.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_matrix() {
        let e = hermitian_eig(&herm(ComplexMatrix::zeros(4, 4))).unwrap();
        assert!(e.values.iter().all(|&v| v == 0.0));
    }
}
