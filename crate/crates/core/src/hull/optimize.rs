use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{negativity_state, PsiState};
use crate::weylheis::PrimeDim;

const MIN_STEP: f64 = 1e-9;
const RANDOM_DIRECTIONS: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquatorialOptimum {
    /// Phases `θ_k` with `θ_0 = 0`, each in `[0, 2π)`.
    pub theta: Vec<f64>,
    pub negativity: f64,
    /// Most violated full facet at the optimum.
    pub facet: Vec<u32>,
    pub evaluations: usize,
}

/// Maximizes the stabilizer negativity of `ψ_θ = (1/√p) Σ e^{iθ_k}|k⟩` by
/// pattern search from `restarts` seeded random starting points.
///
/// Each pass polls the coordinate directions plus a few random directions
/// (the objective is a minimum of smooth pieces, so coordinate moves alone
/// stall on ridges) and halves the step when nothing improves.
pub fn optimize_equatorial(d: PrimeDim, seed: u64, restarts: usize) -> Result<EquatorialOptimum> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = d.n() - 1;
    let mut evaluations = 0;
    let mut eval = |free: &[f64]| -> Result<f64> {
        evaluations += 1;
        Ok(negativity_state(d, &PsiState::from_phases(&phases(free)).density())?.value)
    };

    let mut best: Option<(Vec<f64>, f64)> = None;
    for _ in 0..restarts.max(1) {
        let mut x: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..TAU)).collect();
        let mut fx = eval(&x)?;
        let mut step = 0.5;
        while step > MIN_STEP {
            let mut dirs: Vec<Vec<f64>> = (0..m)
                .flat_map(|i| {
                    [1.0, -1.0].map(|s| {
                        let mut e = vec![0.0; m];
                        e[i] = s;
                        e
                    })
                })
                .collect();
            for _ in 0..RANDOM_DIRECTIONS {
                let v: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
                if n > 0.0 {
                    dirs.push(v.into_iter().map(|a| a / n).collect());
                }
            }
            let mut improved = false;
            for dir in &dirs {
                let y: Vec<f64> = x.iter().zip(dir).map(|(a, b)| a + step * b).collect();
                let fy = eval(&y)?;
                if fy > fx + 1e-15 {
                    x = y;
                    fx = fy;
                    improved = true;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        if best.as_ref().is_none_or(|(_, fb)| fx > *fb) {
            best = Some((x, fx));
        }
    }

    let (x, negativity) = best.expect("at least one restart");
    let theta = phases(&x);
    let facet = negativity_state(d, &PsiState::from_phases(&theta).density())?.argmin;
    Ok(EquatorialOptimum { theta, negativity, facet, evaluations })
}

fn phases(free: &[f64]) -> Vec<f64> {
    std::iter::once(0.0).chain(free.iter().map(|t| t.rem_euclid(TAU))).collect()
}
