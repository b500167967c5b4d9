//! Dense symmetric-indefinite factorization and condition estimation.
//!
//! The interpolation system `[[A, P], [P^T, 0]]` is symmetric but indefinite
//! (zero block on the diagonal), so plain Cholesky/LDL^T cannot factor it.
//! This is the classical Bunch-Kaufman pivoted LDL^T: 1x1 and 2x2 diagonal
//! pivots chosen by the partial-pivoting test with
//! `alpha = (1 + sqrt(17))/8`, lower-triangular storage.

use crate::{Error, Result};
use nalgebra::DMatrix;

const ALPHA: f64 = 0.640_388_203_202_208_4; // (1 + sqrt(17)) / 8

#[derive(Clone, Copy, Debug)]
enum Step {
    /// 1x1 pivot at this elimination index, swapped with row/col `kp`.
    Single { kp: usize },
    /// 2x2 pivot on rows (k, k+1), row k+1 swapped with `kp`.
    Double { kp: usize },
}

/// `P A P^T = L D L^T` with unit lower-triangular `L` and block-diagonal `D`
/// of 1x1 and 2x2 blocks.
pub(crate) struct BunchKaufman {
    f: DMatrix<f64>,
    steps: Vec<(usize, Step)>,
    n: usize,
}

impl BunchKaufman {
    /// Factor a symmetric matrix (only the lower triangle is referenced).
    pub fn factor(mut a: DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        if n != a.ncols() {
            return Err(Error::InvalidArgument("matrix must be square".into()));
        }
        let mut steps = Vec::with_capacity(n);
        let mut k = 0usize;
        while k < n {
            let absakk = a[(k, k)].abs();
            let (imax, colmax) = if k + 1 < n {
                let mut im = k + 1;
                let mut cm = a[(k + 1, k)].abs();
                for i in k + 2..n {
                    let v = a[(i, k)].abs();
                    if v > cm {
                        cm = v;
                        im = i;
                    }
                }
                (im, cm)
            } else {
                (k, 0.0)
            };

            if absakk.max(colmax) == 0.0 {
                return Err(Error::SolverBreakdown(format!(
                    "exact zero pivot column at elimination step {k}"
                )));
            }

            let (kstep, kp) = if absakk >= ALPHA * colmax {
                (1, k)
            } else {
                // largest off-diagonal magnitude in row/column imax
                let mut rowmax = 0.0f64;
                for j in k..imax {
                    rowmax = rowmax.max(a[(imax, j)].abs());
                }
                for i in imax + 1..n {
                    rowmax = rowmax.max(a[(i, imax)].abs());
                }
                if absakk >= ALPHA * colmax * (colmax / rowmax) {
                    (1, k)
                } else if a[(imax, imax)].abs() >= ALPHA * rowmax {
                    (1, imax)
                } else {
                    (2, imax)
                }
            };

            let kk = k + kstep - 1;
            if kp != kk {
                swap_sym(&mut a, kk, kp);
                if kstep == 2 {
                    let t = a[(kk, k)];
                    a[(kk, k)] = a[(kp, k)];
                    a[(kp, k)] = t;
                }
            }

            if kstep == 1 {
                let d = a[(k, k)];
                if d == 0.0 {
                    return Err(Error::SolverBreakdown(format!(
                        "zero 1x1 pivot at step {k}"
                    )));
                }
                let r1 = 1.0 / d;
                for j in k + 1..n {
                    let w = a[(j, k)] * r1;
                    for i in j..n {
                        a[(i, j)] -= a[(i, k)] * w;
                    }
                }
                for i in k + 1..n {
                    a[(i, k)] *= r1;
                }
                steps.push((k, Step::Single { kp }));
                k += 1;
            } else {
                // 2x2 pivot [[a11, d21], [d21, a22]] on rows (k, k+1)
                if k + 2 < n {
                    let d21 = a[(k + 1, k)];
                    let d11 = a[(k + 1, k + 1)] / d21;
                    let d22 = a[(k, k)] / d21;
                    let t = 1.0 / (d11 * d22 - 1.0);
                    if !t.is_finite() {
                        return Err(Error::SolverBreakdown(format!(
                            "singular 2x2 pivot at step {k}"
                        )));
                    }
                    let d21 = t / d21;
                    for j in k + 2..n {
                        let wk = d21 * (d11 * a[(j, k)] - a[(j, k + 1)]);
                        let wkp1 = d21 * (d22 * a[(j, k + 1)] - a[(j, k)]);
                        for i in j..n {
                            a[(i, j)] -= a[(i, k)] * wk + a[(i, k + 1)] * wkp1;
                        }
                        a[(j, k)] = wk;
                        a[(j, k + 1)] = wkp1;
                    }
                }
                steps.push((k, Step::Double { kp }));
                k += 2;
            }
        }
        Ok(BunchKaufman { f: a, n, steps })
    }

    /// Solve `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        assert_eq!(b.len(), self.n);
        let a = &self.f;
        let n = self.n;

        // forward: apply P, solve L, apply D^{-1} blockwise
        for &(k, step) in &self.steps {
            match step {
                Step::Single { kp } => {
                    b.swap(k, kp);
                    let bk = b[k];
                    for i in k + 1..n {
                        b[i] -= a[(i, k)] * bk;
                    }
                    b[k] /= a[(k, k)];
                }
                Step::Double { kp } => {
                    b.swap(k + 1, kp);
                    let bk = b[k];
                    let bk1 = b[k + 1];
                    for i in k + 2..n {
                        b[i] -= a[(i, k)] * bk + a[(i, k + 1)] * bk1;
                    }
                    let akm1k = a[(k + 1, k)];
                    let akm1 = a[(k, k)] / akm1k;
                    let ak = a[(k + 1, k + 1)] / akm1k;
                    let denom = akm1 * ak - 1.0;
                    let bkm1 = b[k] / akm1k;
                    let bks = b[k + 1] / akm1k;
                    b[k] = (ak * bkm1 - bks) / denom;
                    b[k + 1] = (akm1 * bks - bkm1) / denom;
                }
            }
        }

        // backward: solve L^T, undo P
        for &(k, step) in self.steps.iter().rev() {
            match step {
                Step::Single { kp } => {
                    let mut s = b[k];
                    for i in k + 1..n {
                        s -= a[(i, k)] * b[i];
                    }
                    b[k] = s;
                    b.swap(k, kp);
                }
                Step::Double { kp } => {
                    let mut s0 = b[k];
                    let mut s1 = b[k + 1];
                    for i in k + 2..n {
                        s0 -= a[(i, k)] * b[i];
                        s1 -= a[(i, k + 1)] * b[i];
                    }
                    b[k] = s0;
                    b[k + 1] = s1;
                    b.swap(k + 1, kp);
                }
            }
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

/// Symmetric interchange of rows/columns `kk < kp` in lower storage.
fn swap_sym(a: &mut DMatrix<f64>, kk: usize, kp: usize) {
    let n = a.nrows();
    for i in kp + 1..n {
        let t = a[(i, kk)];
        a[(i, kk)] = a[(i, kp)];
        a[(i, kp)] = t;
    }
    for j in kk + 1..kp {
        let t = a[(j, kk)];
        a[(j, kk)] = a[(kp, j)];
        a[(kp, j)] = t;
    }
    let t = a[(kk, kk)];
    a[(kk, kk)] = a[(kp, kp)];
    a[(kp, kp)] = t;
}

/// 1-norm condition estimate, Hager's method: `|A|_1 * est(|A^{-1}|_1)`
/// using solves with the existing factorization (A is symmetric, so no
/// transpose solves are needed).
pub(crate) fn condest_1norm(a: &DMatrix<f64>, fac: &BunchKaufman) -> f64 {
    let n = a.nrows();
    let anorm = (0..n)
        .map(|j| (0..n).map(|i| a[(i, j)].abs()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let mut x = vec![1.0 / n as f64; n];
    let mut est = 0.0f64;
    for _ in 0..5 {
        let y = fac.solve(&x);
        est = y.iter().map(|v| v.abs()).sum();
        let xi: Vec<f64> = y
            .iter()
            .map(|&v| if v >= 0.0 { 1.0 } else { -1.0 })
            .collect();
        let z = fac.solve(&xi);
        let (jmax, zmax) = z
            .iter()
            .enumerate()
            .map(|(j, &v)| (j, v.abs()))
            .max_by(|p, q| p.1.total_cmp(&q.1))
            .expect("n >= 1");
        let zx: f64 = z.iter().zip(&x).map(|(&a, &b)| a * b).sum();
        if zmax <= zx.abs() {
            break;
        }
        x = vec![0.0; n];
        x[jmax] = 1.0;
    }
    anorm * est
}

/// Neumaier compensated accumulator: the running error of the plain sum is
/// carried separately, so totals stay accurate to ~eps of the true result
/// even when terms cancel from magnitudes ~1e8 larger.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    err: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.err += (self.sum - t) + v;
        } else {
            self.err += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(self) -> f64 {
        self.sum + self.err
    }
}

/// 2-norm condition number from the full singular spectrum (exact but
/// O(n^3) with a large constant; reserved for modest sizes).
pub(crate) fn cond_svd(a: &DMatrix<f64>) -> f64 {
    let sv = a.clone().singular_values();
    let smax = sv.max();
    let smin = sv.min();
    if smin == 0.0 {
        f64::INFINITY
    } else {
        smax / smin
    }
}
