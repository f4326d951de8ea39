//! Dense two-phase simplex for `min cᵀx s.t. Ax = b, x ≥ 0` at desk scale.
//!
//! Pivoting follows Bland's rule, so it terminates on degenerate problems. The
//! final basis is re-solved with an LU factorization to clean up the round-off
//! that tableau updates accumulate.

use nalgebra::{DMatrix, DVector};

use crate::error::{check_len, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub value: f64,
    /// Row multipliers `y` with `A_Bᵀ y = c_B` (rows dropped as redundant get 0).
    pub duals: Vec<f64>,
    pub basis: Vec<usize>,
}

const EPS: f64 = 1e-11;

struct Tableau {
    /// `m` constraint rows followed by the objective row; the last column is the right-hand side.
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> f64 {
        self.t[r][self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c];
        self.t[r].iter_mut().for_each(|v| *v /= p);
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                row.iter_mut().zip(&prow).for_each(|(v, &q)| *v -= f * q);
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
    }

    /// Runs Bland's rule on columns `< allowed` until optimal. Returns false if unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        let m = self.basis.len();
        loop {
            let obj = &self.t[m];
            let Some(enter) = (0..allowed).find(|&j| obj[j] < -EPS) else {
                return true;
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..m {
                let a = self.t[r][enter];
                if a > EPS {
                    let ratio = self.rhs(r) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - EPS || (ratio <= lratio + EPS && self.basis[r] < self.basis[lr]) {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    }
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }
}

/// Solves `min cᵀx s.t. Ax = b, x ≥ 0` with `a` given as rows.
#[allow(clippy::needless_range_loop)]
pub fn solve_standard_form(a: &[Vec<f64>], b: &[f64], c: &[f64]) -> Result<LpSolution> {
    let m = a.len();
    check_len("LP right-hand side", m, b.len())?;
    let n = c.len();
    for row in a {
        check_len("LP constraint row", n, row.len())?;
    }
    if m == 0 {
        if c.iter().any(|&v| v < 0.0) {
            return Err(Error::Infeasible("unbounded"));
        }
        return Ok(LpSolution {
            x: vec![0.0; n],
            value: 0.0,
            duals: vec![],
            basis: vec![],
        });
    }
    // Phase I on [A I | b] with b >= 0.
    let cols = n + m;
    let mut t = Vec::with_capacity(m + 1);
    for (i, row) in a.iter().enumerate() {
        let s = if b[i] < 0.0 { -1.0 } else { 1.0 };
        let mut r: Vec<f64> = row.iter().map(|&v| s * v).collect();
        r.extend((0..m).map(|j| if j == i { 1.0 } else { 0.0 }));
        r.push(s * b[i]);
        t.push(r);
    }
    let mut obj = vec![0.0; cols + 1];
    for row in &t {
        for j in 0..n {
            obj[j] -= row[j];
        }
        obj[cols] -= row[cols];
    }
    t.push(obj);
    let mut tab = Tableau {
        t,
        basis: (n..n + m).collect(),
        cols,
    };
    tab.optimize(n);
    let scale = 1.0 + b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if -tab.t[m][cols] > 1e-9 * scale {
        return Err(Error::Infeasible("infeasible"));
    }
    // Drive remaining artificials out of the basis; rows where that is impossible are redundant.
    let mut active = vec![true; m];
    for r in 0..m {
        if tab.basis[r] >= n {
            match (0..n).find(|&j| tab.t[r][j].abs() > 1e-9) {
                Some(j) => tab.pivot(r, j),
                None => active[r] = false,
            }
        }
    }
    // Phase II objective row: c_j - c_Bᵀ column_j.
    let mut obj = vec![0.0; cols + 1];
    obj[..n].copy_from_slice(c);
    for r in 0..m {
        let bj = tab.basis[r];
        if !active[r] || bj >= n {
            continue;
        }
        let cb = c[bj];
        if cb != 0.0 {
            for j in 0..=cols {
                obj[j] -= cb * tab.t[r][j];
            }
        }
    }
    tab.t[m] = obj;
    for r in 0..m {
        if !active[r] {
            tab.t[r].iter_mut().for_each(|v| *v = 0.0);
        }
    }
    if !tab.optimize(n) {
        return Err(Error::Infeasible("unbounded"));
    }

    let rows: Vec<usize> = (0..m).filter(|&r| active[r]).collect();
    let basis: Vec<usize> = rows.iter().map(|&r| tab.basis[r]).collect();
    let mut x = vec![0.0; n];
    for &r in &rows {
        x[tab.basis[r]] = tab.rhs(r).max(0.0);
    }
    let mut duals = vec![0.0; m];
    let k = rows.len();
    let ab = DMatrix::from_fn(k, k, |i, j| a[rows[i]][basis[j]]);
    let lu = ab.clone().lu();
    let bb = DVector::from_iterator(k, rows.iter().map(|&r| b[r]));
    if let Some(xb) = lu.solve(&bb) {
        if xb.iter().all(|&v| v >= -1e-9) {
            for (j, &col) in basis.iter().enumerate() {
                x[col] = xb[j].max(0.0);
            }
        }
    }
    let cb = DVector::from_iterator(k, basis.iter().map(|&j| c[j]));
    if let Some(y) = ab.transpose().lu().solve(&cb) {
        for (i, &r) in rows.iter().enumerate() {
            duals[r] = y[i];
        }
    }
    let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    Ok(LpSolution { x, value, duals, basis })
}

/// `min_x ‖Bx - b‖₁ + λ‖x‖₁` for a row-major `rows x cols` matrix `B`.
///
/// Returns the minimizer; the caller evaluates the objective exactly.
pub fn l1l1_minimizer(rows: usize, cols: usize, data: &[f64], rhs: &[f64], lambda: f64) -> Result<Vec<f64>> {
    check_len("matrix data", rows * cols, data.len())?;
    check_len("right-hand side", rows, rhs.len())?;
    // Variables: x⁺, x⁻ (cols each), r⁺, r⁻ (rows each);  B(x⁺ - x⁻) - r⁺ + r⁻ = b.
    let n = 2 * cols + 2 * rows;
    let mut a = vec![vec![0.0; n]; rows];
    for (i, row) in a.iter_mut().enumerate() {
        for j in 0..cols {
            let v = data[i * cols + j];
            row[j] = v;
            row[cols + j] = -v;
        }
        row[2 * cols + i] = -1.0;
        row[2 * cols + rows + i] = 1.0;
    }
    let mut c = vec![lambda; 2 * cols];
    c.extend(std::iter::repeat_n(1.0, 2 * rows));
    let sol = solve_standard_form(&a, rhs, &c)?;
    Ok((0..cols).map(|j| sol.x[j] - sol.x[cols + j]).collect())
}
