//! Phase-1 simplex on a dense tableau.
//!
//! Decides whether `{x ≥ 0 : Ax = b}` is non-empty by minimizing the sum of
//! artificial variables. Artificial columns are kept in the tableau so the
//! dual vector can be read off their reduced costs at termination.

use crate::error::{Error, Result};

/// Entering-variable rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotRule {
    /// Lowest-index improving column; never cycles.
    Bland,
    /// Most negative reduced cost, switching to Bland after a run of
    /// degenerate pivots.
    DantzigBland,
}

/// Reduced costs above `-COST_TOL` count as non-improving.
const COST_TOL: f64 = 1e-10;
/// Smallest admissible pivot element.
const PIVOT_TOL: f64 = 1e-9;
/// Primal infeasibility tolerated by the Harris ratio test.
const HARRIS_TOL: f64 = 1e-9;
const DEGENERATE_RUN: usize = 50;
/// Minimum pivots between rebuilds of the tableau from the original data;
/// the interval grows with the row count since a rebuild costs `m²n`.
const REFRESH: usize = 100;

#[derive(Clone, Debug)]
pub enum PhaseOne {
    Feasible { x: Vec<f64>, objective: f64, pivots: usize },
    /// `yᵀA ≤ 0` (up to tolerance) and `yᵀb = objective > 0`.
    Infeasible { y: Vec<f64>, objective: f64, pivots: usize },
}

/// Dense phase-1 tableau: rows `0..m` are `B⁻¹[A | I | b]` (row-signed so
/// that `b ≥ 0`), row `m` holds reduced costs and `−objective`.
struct Tableau {
    m: usize,
    n: usize,
    width: usize,
    t: Vec<f64>,
    basis: Vec<usize>,
    /// Row-signed original data, kept for rebuilding.
    a: Vec<f64>,
    b: Vec<f64>,
}

impl Tableau {
    fn new(columns: &[Vec<f64>], b: &[f64], sign: &[f64]) -> Self {
        let (m, n) = (b.len(), columns.len());
        let width = n + m + 1;
        let mut a = vec![0.0; m * n];
        for (j, col) in columns.iter().enumerate() {
            for i in 0..m {
                a[i * n + j] = sign[i] * col[i];
            }
        }
        let b: Vec<f64> = b.iter().zip(sign).map(|(v, s)| v * s).collect();
        let mut tab = Self { m, n, width, t: vec![0.0; (m + 1) * width], basis: (n..n + m).collect(), a, b };
        tab.rebuild_from(None);
        tab
    }

    fn rhs(&self) -> usize {
        self.n + self.m
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.width + j]
    }

    fn objective(&self) -> f64 {
        -self.at(self.m, self.rhs())
    }

    /// Rewrites the tableau as `binv·[A | I | b]`; `None` means `B = I`.
    fn rebuild_from(&mut self, binv: Option<&[f64]>) {
        let (m, n, w) = (self.m, self.n, self.width);
        for i in 0..m {
            let row = &mut self.t[i * w..(i + 1) * w];
            match binv {
                None => {
                    row[..n].copy_from_slice(&self.a[i * n..(i + 1) * n]);
                    row[n..n + m].iter_mut().enumerate().for_each(|(k, v)| *v = (k == i) as u8 as f64);
                    row[n + m] = self.b[i];
                }
                Some(binv) => {
                    row.iter_mut().for_each(|v| *v = 0.0);
                    for k in 0..m {
                        let c = binv[i * m + k];
                        if c == 0.0 {
                            continue;
                        }
                        for (v, av) in row[..n].iter_mut().zip(&self.a[k * n..(k + 1) * n]) {
                            *v += c * av;
                        }
                        row[n + k] = c;
                        row[n + m] += c * self.b[k];
                    }
                }
            }
        }
        // reduced cost of column j: c_j − Σ_{artificial basics} row_i[j]
        let cost = m * w;
        self.t[cost..cost + w].iter_mut().for_each(|v| *v = 0.0);
        self.t[cost + n..cost + n + m].iter_mut().for_each(|v| *v = 1.0);
        for i in 0..m {
            if self.basis[i] >= n {
                for j in 0..w {
                    self.t[cost + j] -= self.t[i * w + j];
                }
            }
        }
        for (i, &bj) in self.basis.iter().enumerate() {
            self.t[cost + bj] = 0.0;
            self.t[i * w + bj] = 1.0;
        }
    }

    /// Re-inverts the basis from the original data. Leaves the tableau as is
    /// if the basis matrix is numerically singular.
    fn refresh(&mut self) -> bool {
        let (m, n) = (self.m, self.n);
        let mut bmat = vec![0.0; m * m];
        for (k, &j) in self.basis.iter().enumerate() {
            for i in 0..m {
                bmat[i * m + k] = if j < n { self.a[i * n + j] } else { (j - n == i) as u8 as f64 };
            }
        }
        match invert(&mut bmat, m) {
            Some(binv) => {
                self.rebuild_from(Some(&binv));
                true
            }
            None => false,
        }
    }

    fn entering(&self, bland: bool) -> Option<usize> {
        let costs = &self.t[self.m * self.width..self.m * self.width + self.n + self.m];
        if bland {
            costs.iter().position(|&c| c < -COST_TOL)
        } else {
            costs
                .iter()
                .enumerate()
                .filter(|(_, &c)| c < -COST_TOL)
                .min_by(|a, b| a.1.total_cmp(b.1))
                .map(|(j, _)| j)
        }
    }

    /// Textbook ratio test with lowest-basis-index ties (`bland`), or the
    /// two-pass Harris test preferring large pivots.
    fn leaving(&self, q: usize, bland: bool) -> Option<usize> {
        let rhs = self.rhs();
        let rows = (0..self.m).filter(|&i| self.at(i, q) > PIVOT_TOL);
        if bland {
            let mut best: Option<(usize, f64)> = None;
            for i in rows {
                let ratio = self.at(i, rhs).max(0.0) / self.at(i, q);
                best = match best {
                    Some((li, lr)) if !(ratio < lr - 1e-14 || (ratio <= lr + 1e-14 && self.basis[i] < self.basis[li])) => {
                        Some((li, lr))
                    }
                    _ => Some((i, ratio)),
                };
            }
            return best.map(|(i, _)| i);
        }
        let bound = rows
            .clone()
            .map(|i| (self.at(i, rhs).max(0.0) + HARRIS_TOL) / self.at(i, q))
            .fold(f64::INFINITY, f64::min);
        rows.filter(|&i| self.at(i, rhs).max(0.0) / self.at(i, q) <= bound)
            .max_by(|&i, &k| self.at(i, q).total_cmp(&self.at(k, q)))
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let w = self.width;
        let inv = 1.0 / self.t[r * w + q];
        for v in &mut self.t[r * w..(r + 1) * w] {
            *v *= inv;
        }
        let pivot_row: Vec<f64> = self.t[r * w..(r + 1) * w].to_vec();
        for i in 0..=self.m {
            if i == r {
                continue;
            }
            let f = self.t[i * w + q];
            if f != 0.0 {
                let row = &mut self.t[i * w..(i + 1) * w];
                for (v, pr) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pr;
                }
                row[q] = 0.0;
            }
        }
        let rhs = self.rhs();
        for i in 0..self.m {
            let v = &mut self.t[i * w + rhs];
            if *v < 0.0 && *v > -HARRIS_TOL {
                *v = 0.0;
            }
        }
        self.basis[r] = q;
    }
}

/// Gauss-Jordan inverse with partial pivoting; `None` if singular.
fn invert(a: &mut [f64], m: usize) -> Option<Vec<f64>> {
    let mut inv = vec![0.0; m * m];
    for i in 0..m {
        inv[i * m + i] = 1.0;
    }
    for c in 0..m {
        let p = (c..m).max_by(|&i, &k| a[i * m + c].abs().total_cmp(&a[k * m + c].abs()))?;
        if a[p * m + c].abs() < 1e-12 {
            return None;
        }
        if p != c {
            for j in 0..m {
                a.swap(p * m + j, c * m + j);
                inv.swap(p * m + j, c * m + j);
            }
        }
        let d = 1.0 / a[c * m + c];
        for j in 0..m {
            a[c * m + j] *= d;
            inv[c * m + j] *= d;
        }
        for i in 0..m {
            let f = a[i * m + c];
            if i != c && f != 0.0 {
                for j in 0..m {
                    a[i * m + j] -= f * a[c * m + j];
                    inv[i * m + j] -= f * inv[c * m + j];
                }
            }
        }
    }
    Some(inv)
}

/// `columns[j]` is column `j` of `A` (length `b.len()`).
pub fn phase_one(columns: &[Vec<f64>], b: &[f64], feas_tol: f64, rule: PivotRule) -> Result<PhaseOne> {
    let m = b.len();
    let n = columns.len();
    if columns.iter().any(|c| c.len() != m) {
        return Err(Error::ShapeMismatch("constraint column length".into()));
    }
    let sign: Vec<f64> = b.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect();
    let mut tab = Tableau::new(columns, b, &sign);

    let max_pivots = 50 * (n + m) + 1000;
    let mut pivots = 0;
    let mut degenerate = 0;
    let mut since_refresh = 0;
    loop {
        let bland = rule == PivotRule::Bland || degenerate >= DEGENERATE_RUN;
        let Some(q) = tab.entering(bland) else {
            // confirm optimality on a freshly inverted basis
            if since_refresh > 0 && tab.refresh() {
                since_refresh = 0;
                if tab.entering(bland).is_some() {
                    continue;
                }
            }
            break;
        };
        // Phase 1 is bounded below by 0, so an improving column always has a pivot row.
        let Some(r) = tab.leaving(q, bland) else {
            return Err(Error::NumericalInstability("unbounded direction in phase 1".into()));
        };
        let step = tab.at(r, tab.rhs()).max(0.0) / tab.at(r, q);
        degenerate = if step < 1e-14 { degenerate + 1 } else { 0 };
        tab.pivot(r, q);
        pivots += 1;
        since_refresh += 1;
        if since_refresh >= REFRESH.max(m) {
            tab.refresh();
            since_refresh = 0;
        }
        if pivots > max_pivots {
            return Err(Error::NumericalInstability(format!(
                "pivot limit reached with phase-1 objective {:e}",
                tab.objective()
            )));
        }
    }

    let objective = tab.objective();
    let (w, rhs) = (tab.width, tab.rhs());
    if objective <= feas_tol {
        let mut x = vec![0.0; n];
        for (i, &bj) in tab.basis.iter().enumerate() {
            if bj < n {
                x[bj] = tab.t[i * w + rhs].max(0.0);
            }
        }
        Ok(PhaseOne::Feasible { x, objective, pivots })
    } else {
        // reduced cost of artificial i is 1 − y_i
        let y = (0..m).map(|i| sign[i] * (1.0 - tab.t[m * w + n + i])).collect();
        Ok(PhaseOne::Infeasible { y, objective, pivots })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_feasible(cols: &[Vec<f64>], b: &[f64], x: &[f64]) {
        assert!(x.iter().all(|&v| v >= 0.0));
        for (i, bi) in b.iter().enumerate() {
            let lhs: f64 = cols.iter().zip(x).map(|(c, xj)| c[i] * xj).sum();
            assert!((lhs - bi).abs() < 1e-10);
        }
    }

    #[test]
    fn simple_feasible() {
        // x + y = 1, x − y = 0.5
        let cols = vec![vec![1.0, 1.0], vec![1.0, -1.0]];
        let b = [1.0, 0.5];
        for rule in [PivotRule::Bland, PivotRule::DantzigBland] {
            match phase_one(&cols, &b, 1e-10, rule).unwrap() {
                PhaseOne::Feasible { x, .. } => check_feasible(&cols, &b, &x),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn simple_infeasible_with_dual() {
        // x + y = 1, x + y = 2
        let cols = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        let b = [1.0, 2.0];
        match phase_one(&cols, &b, 1e-10, PivotRule::Bland).unwrap() {
            PhaseOne::Infeasible { y, objective, .. } => {
                assert!(objective > 0.5);
                for c in &cols {
                    assert!(c[0] * y[0] + c[1] * y[1] <= 1e-12);
                }
                assert!(y[0] * b[0] + y[1] * b[1] > 0.5);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_rhs_is_flipped() {
        // −x = −2 → x = 2; x ≥ 0 with x = −1 is infeasible
        let cols = vec![vec![-1.0]];
        assert!(matches!(phase_one(&cols, &[-2.0], 1e-10, PivotRule::Bland).unwrap(), PhaseOne::Feasible { .. }));
        match phase_one(&[vec![1.0]], &[-1.0], 1e-10, PivotRule::Bland).unwrap() {
            PhaseOne::Infeasible { y, .. } => {
                assert!(y[0] <= 1e-12);
                assert!(-y[0] > 0.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_convex_hull() {
        // point (0.5, 0.5) in the hull of many repeated square corners
        let corners = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)];
        let cols: Vec<Vec<f64>> =
            (0..20).map(|k| corners[k % 4]).map(|(a, b)| vec![a, b, 1.0]).collect();
        let b = [0.5, 0.5, 1.0];
        for rule in [PivotRule::Bland, PivotRule::DantzigBland] {
            match phase_one(&cols, &b, 1e-10, rule).unwrap() {
                PhaseOne::Feasible { x, .. } => check_feasible(&cols, &b, &x),
                other => panic!("{other:?}"),
            }
        }
    }
}
