use serde::{Deserialize, Serialize};

use super::{uv_exponents, GateParams};
use crate::error::{Error, Result};
use crate::numkernel::{equal_up_to_global_phase, ComplexMatrix, C64, DEFAULT_TOL};
use crate::weylheis::{clifford_unitary, displacement, root_of_unity, CliffordLabel, PauliLabel, PrimeDim, Sl2};

/// Outcome of a third-level membership test for a diagonal unitary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum ThirdLevel {
    /// Matched with `γ′ = 0`.
    Clifford(GateParams),
    ThirdLevel(GateParams),
    NotThirdLevel,
}

/// `U D_(x|z) U† = phase · C_label`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjugationImage {
    pub label: CliffordLabel,
    pub phase: C64,
}

/// The phase `κ` in `U_υ D_(1|0) U_υ† = κ · C_([1,0;γ′,1] | (1,z′))` for the
/// canonical (`υ₀ = 0`) gate.
///
/// `κ = ω^{ε′}` for `p > 3`, `ζ₉^{2γ′+3ε′}` for `p = 3` and `ζ₈^{4z′+γ′+4ε′}`
/// for `p = 2`.
pub fn conjugation_phase(d: PrimeDim, g: GateParams) -> C64 {
    let (z, gm, e) = (g.z as i64, g.gamma as i64, g.epsilon as i64);
    match d.p() {
        2 => root_of_unity(8, 4 * z + gm + 4 * e),
        3 => root_of_unity(9, 2 * gm + 3 * e),
        _ => d.omega_pow(e),
    }
}

/// Conjugates `D_(1|0)` by a diagonal unitary and matches the image against
/// every candidate `κ(g) · C_([1,0;γ′,1] | (1,z′))`.
pub fn verify_c3(d: PrimeDim, u: &ComplexMatrix) -> Result<ThirdLevel> {
    if u.rows() != d.n() || !u.is_square() {
        return Err(Error::ShapeMismatch(format!("expected {0}x{0}, got {1}x{2}", d.n(), u.rows(), u.cols())));
    }
    if !u.is_diagonal(DEFAULT_TOL) {
        return Err(Error::NotDiagonal);
    }
    let defect = u.unitarity_defect();
    if defect > DEFAULT_TOL {
        return Err(Error::NotUnitary(defect));
    }
    // Normalize the global phase so that u[0,0] = 1; the conjugate is unchanged.
    let u = u.scale(u[(0, 0)].conj());
    let image = u.matmul(&displacement(d, &PauliLabel::xz(d, 1, 0)))?.matmul(&u.dagger())?;

    for g in GateParams::all(d) {
        let c = clifford_unitary(d, &CliffordLabel { f: Sl2::lower(d, g.gamma as i64), chi: [1, g.z] });
        let target = c.scale(conjugation_phase(d, g));
        if image.max_abs_diff(&target)? < DEFAULT_TOL {
            return Ok(if g.is_clifford() { ThirdLevel::Clifford(g) } else { ThirdLevel::ThirdLevel(g) });
        }
    }
    Ok(ThirdLevel::NotThirdLevel)
}

/// Image of `D_(x|z)` under conjugation by `U_υ(g)`:
/// `F = [1,0; xγ′,1]`, `χ = (x, xz′ + γ′·C(x,2) + z)`. The phase is read off
/// numerically and the identity is checked to `1e-9`.
pub fn conj_image(d: PrimeDim, g: GateParams, x: u32, z: u32) -> Result<ConjugationImage> {
    let (x, z) = (d.reduce(x as i64), d.reduce(z as i64));
    let (xi, gi) = (x as i64, g.gamma as i64);
    let label = CliffordLabel {
        f: Sl2::lower(d, xi * gi),
        chi: [x, d.reduce(xi * g.z as i64 + gi * (xi * (xi - 1) / 2) + z as i64)],
    };
    let u = uv_exponents(d, g).matrix();
    let image = u.matmul(&displacement(d, &PauliLabel::xz(d, x as i64, z as i64)))?.matmul(&u.dagger())?;
    let c = clifford_unitary(d, &label);
    let phase = equal_up_to_global_phase(&image, &c, DEFAULT_TOL)?
        .ok_or_else(|| Error::ConvergenceFailure(image.max_abs_diff(&c).unwrap_or(f64::NAN)))?;
    Ok(ConjugationImage { label, phase })
}
