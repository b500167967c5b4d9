//! Constrained kernel interpolation: fit, evaluate, native-space tools.
//!
//! An interpolant has the form `s(x) = p(x) + sum_j c_j h(x - x_j)` with
//! `p` of degree `m - 1` and the kernel coefficients constrained by
//! `sum_j c_j q(x_j) = 0` for every polynomial `q` of degree `m - 1`. Fitting
//! solves the symmetric saddle-point system `[[A, P], [P^T, 0]] [c; a] = [f; 0]`
//! by a pivoted symmetric-indefinite factorization.

use crate::geometry::PointSet;
use crate::kernel::KernelParams;
use crate::linalg::{cond_svd, condest_1norm, BunchKaufman, CompensatedSum};
use crate::par;
use crate::polynomials::{poly_matrix, smallest_failing_degree, PolynomialBasis};
use crate::{Error, Result};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Relative tolerance for the node-residual and moment-condition invariants.
pub const RESIDUAL_RTOL: f64 = 1e-8;
/// Condition estimate above which a fit logs a warning.
pub const CONDITION_WARN: f64 = 1e12;
/// Condition estimate above which a fit fails unless forced.
pub const CONDITION_FAIL: f64 = 1e15;
/// Sizes up to this use the exact singular-value condition number; larger
/// systems use the 1-norm estimator.
const SVD_CONDITION_LIMIT: usize = 500;

#[derive(Clone, Copy, Debug, Default)]
pub struct FitOptions {
    /// Proceed even when the condition estimate exceeds [`CONDITION_FAIL`].
    pub force: bool,
}

/// Solve-quality numbers recorded by [`fit`].
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Condition estimate of the full saddle-point matrix.
    pub condition: f64,
    /// `max_i |s(x_i) - f_i|`.
    pub max_node_residual: f64,
    /// `|P^T c|_inf`.
    pub moment_residual: f64,
}

/// A fitted interpolant; immutable, cheap to share, thread-safe to evaluate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InterpolationModel {
    params: KernelParams,
    centers: PointSet,
    coefficients: Vec<f64>,
    poly_coeffs: Vec<f64>,
    diagnostics: Option<Diagnostics>,
}

impl InterpolationModel {
    /// Assemble a model directly from its parts (e.g. a polynomial with no
    /// kernel term, or a native-space combination with no polynomial part).
    pub fn from_parts(
        params: KernelParams,
        centers: PointSet,
        coefficients: Vec<f64>,
        poly_coeffs: Vec<f64>,
    ) -> Result<Self> {
        if centers.dim() != params.n() {
            return Err(Error::InvalidArgument(format!(
                "centers have dimension {}, kernel expects {}",
                centers.dim(),
                params.n()
            )));
        }
        if coefficients.len() != centers.len() {
            return Err(Error::InvalidArgument(
                "one kernel coefficient per center required".into(),
            ));
        }
        let basis = PolynomialBasis::new(params.n(), params.order() - 1)?;
        if poly_coeffs.len() != basis.len() {
            return Err(Error::InvalidArgument(format!(
                "polynomial part needs {} graded-lex coefficients, got {}",
                basis.len(),
                poly_coeffs.len()
            )));
        }
        Ok(InterpolationModel {
            params,
            centers,
            coefficients,
            poly_coeffs,
            diagnostics: None,
        })
    }

    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    pub fn centers(&self) -> &PointSet {
        &self.centers
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Coefficients of the polynomial part in the graded-lex basis.
    pub fn poly_coeffs(&self) -> &[f64] {
        &self.poly_coeffs
    }

    pub fn diagnostics(&self) -> Option<&Diagnostics> {
        self.diagnostics.as_ref()
    }

    pub fn evaluate(&self, points: &PointSet) -> Result<Vec<f64>> {
        evaluate(self, points)
    }
}

/// Kernel collocation matrix `A[i][j] = h(x_i - x_j)` as parallel rows.
pub(crate) fn kernel_matrix_rows(params: &KernelParams, x: &PointSet) -> Vec<Vec<f64>> {
    let n = x.len();
    par::map_collect(n, |i| {
        let xi = x.point(i);
        (0..n)
            .map(|j| {
                let d2: f64 = xi
                    .iter()
                    .zip(x.point(j))
                    .map(|(&a, &b)| (a - b) * (a - b))
                    .sum();
                params.eval_sq(d2)
            })
            .collect()
    })
}

/// Fit with default options.
pub fn fit(params: &KernelParams, x: &PointSet, values: &[f64]) -> Result<InterpolationModel> {
    fit_with(params, x, values, FitOptions::default())
}

/// Fit the constrained interpolation system.
///
/// `X` must be a determining set for polynomials of degree `m - 1`; the
/// returned model satisfies the node-residual and moment-condition
/// invariants to [`RESIDUAL_RTOL`] or the fit fails with the condition
/// estimate attached.
pub fn fit_with(
    params: &KernelParams,
    x: &PointSet,
    values: &[f64],
    options: FitOptions,
) -> Result<InterpolationModel> {
    let n = x.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty point set".into()));
    }
    if x.dim() != params.n() {
        return Err(Error::InvalidArgument(format!(
            "points have dimension {}, kernel expects {}",
            x.dim(),
            params.n()
        )));
    }
    if values.len() != n {
        return Err(Error::InvalidArgument(format!(
            "{} values for {} points",
            values.len(),
            n
        )));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("values must be finite".into()));
    }

    let degree = params.order() - 1;
    if let Some(d) = smallest_failing_degree(x, degree)? {
        return Err(Error::Unisolvency { degree: d });
    }
    let basis = PolynomialBasis::new(params.n(), degree)?;
    let q = basis.len();
    let size = n + q;

    let a_rows = kernel_matrix_rows(params, x);
    let p = poly_matrix(&basis, x)?;
    let mut s = DMatrix::<f64>::zeros(size, size);
    for i in 0..n {
        for j in 0..n {
            s[(i, j)] = a_rows[i][j];
        }
        for j in 0..q {
            s[(i, n + j)] = p[(i, j)];
            s[(n + j, i)] = p[(i, j)];
        }
    }

    let mut rhs = vec![0.0f64; size];
    rhs[..n].copy_from_slice(values);

    let fac = match BunchKaufman::factor(s.clone()) {
        Ok(f) => f,
        Err(Error::SolverBreakdown(detail)) => {
            // exactly singular: report as ill-conditioning with the estimate
            let condition = if n <= SVD_CONDITION_LIMIT {
                cond_svd(&s)
            } else {
                f64::INFINITY
            };
            return Err(Error::IllConditioned { condition, detail });
        }
        Err(e) => return Err(e),
    };
    let mut sol = fac.solve(&rhs);
    // iterative refinement with compensated residuals: the solution
    // coefficients can exceed the data by many orders on fine point sets
    // (flat kernel), and a plain dot product would bury the true residual
    // under summation rounding
    for _ in 0..3 {
        let mut residual = rhs.clone();
        for (i, r) in residual.iter_mut().enumerate() {
            let mut acc = CompensatedSum::default();
            acc.add(-*r);
            for j in 0..size {
                acc.add(s[(i, j)] * sol[j]);
            }
            *r = -acc.value();
        }
        let correction = fac.solve(&residual);
        for (v, dc) in sol.iter_mut().zip(&correction) {
            *v += dc;
        }
    }

    let condition = if n <= SVD_CONDITION_LIMIT {
        cond_svd(&s)
    } else {
        condest_1norm(&s, &fac)
    };
    if condition > CONDITION_WARN {
        log::warn!(
            "interpolation system condition estimate {condition:.3e} (N = {n}); \
             residual checks still enforced"
        );
    }
    if condition > CONDITION_FAIL && !options.force {
        return Err(Error::IllConditioned {
            condition,
            detail: format!("exceeds the hard limit {CONDITION_FAIL:.1e}; pass force to override"),
        });
    }

    let model = InterpolationModel {
        params: params.clone(),
        centers: x.clone(),
        coefficients: sol[..n].to_vec(),
        poly_coeffs: sol[n..].to_vec(),
        diagnostics: None,
    };

    let at_nodes = evaluate(&model, x)?;
    let max_node_residual = at_nodes
        .iter()
        .zip(values)
        .map(|(s, f)| (s - f).abs())
        .fold(0.0f64, f64::max);
    let moment_residual = (0..q)
        .map(|j| {
            (0..n)
                .map(|i| p[(i, j)] * model.coefficients[i])
                .sum::<f64>()
                .abs()
        })
        .fold(0.0f64, f64::max);

    let f_scale = 1.0 + values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let c_scale = 1.0
        + model
            .coefficients
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
    if max_node_residual > RESIDUAL_RTOL * f_scale || moment_residual > RESIDUAL_RTOL * c_scale {
        return Err(Error::IllConditioned {
            condition,
            detail: format!(
                "node residual {max_node_residual:.3e} (limit {:.3e}) or moment residual \
                 {moment_residual:.3e} (limit {:.3e}) beyond tolerance",
                RESIDUAL_RTOL * f_scale,
                RESIDUAL_RTOL * c_scale
            ),
        });
    }

    Ok(InterpolationModel {
        diagnostics: Some(Diagnostics {
            condition,
            max_node_residual,
            moment_residual,
        }),
        ..model
    })
}

/// Single-point evaluation without spawning parallel work (used inside
/// already-parallel loops).
pub(crate) fn evaluate_one(model: &InterpolationModel, basis: &PolynomialBasis, x: &[f64]) -> f64 {
    // compensated: kernel terms c_j h(x - x_j) cancel down from magnitudes
    // far above the result when the system is badly conditioned
    let mut acc = CompensatedSum::default();
    acc.add(basis.eval(&model.poly_coeffs, x));
    for (j, &c) in model.coefficients.iter().enumerate() {
        let d2: f64 = x
            .iter()
            .zip(model.centers.point(j))
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum();
        acc.add(c * model.params.eval_sq(d2));
    }
    acc.value()
}

/// Evaluate the interpolant pointwise by direct summation.
pub fn evaluate(model: &InterpolationModel, points: &PointSet) -> Result<Vec<f64>> {
    if points.dim() != model.params.n() {
        return Err(Error::InvalidArgument(format!(
            "evaluation points have dimension {}, kernel expects {}",
            points.dim(),
            model.params.n()
        )));
    }
    let basis = PolynomialBasis::new(model.params.n(), model.params.order() - 1)?;
    Ok(par::map_collect(points.len(), |i| {
        evaluate_one(model, &basis, points.point(i))
    }))
}

/// Draw a random coefficient vector in the discrete moment-constraint null
/// space at `Y` (`P^T c = 0`), unit Euclidean norm: together with the kernel
/// it defines a native-space test function `f = sum_j c_j h(. - y_j)`.
pub fn make_native_test_function(
    params: &KernelParams,
    y: &PointSet,
    seed: u64,
) -> Result<Vec<f64>> {
    if y.dim() != params.n() {
        return Err(Error::InvalidArgument("dimension mismatch".into()));
    }
    let basis = PolynomialBasis::new(params.n(), params.order() - 1)?;
    if y.len() <= basis.len() {
        return Err(Error::Precondition(format!(
            "need more than {} points for a nontrivial constraint null space, got {}",
            basis.len(),
            y.len()
        )));
    }
    let p = poly_matrix(&basis, y)?;
    let qr = p.clone().qr();
    let qmat = qr.q();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _attempt in 0..16 {
        let r: Vec<f64> = (0..y.len())
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        let mut c = r.clone();
        // project out range(P) twice (classical re-orthogonalization)
        for _ in 0..2 {
            let qt_c = qmat.transpose() * nalgebra::DVector::from_column_slice(&c);
            let proj = &qmat * qt_c;
            for (ci, pi) in c.iter_mut().zip(proj.iter()) {
                *ci -= pi;
            }
        }
        let norm: f64 = c.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-10 {
            continue; // draw happened to lie in range(P)
        }
        for v in &mut c {
            *v /= norm;
        }
        let violation = (0..basis.len())
            .map(|j| (0..y.len()).map(|i| p[(i, j)] * c[i]).sum::<f64>().abs())
            .fold(0.0f64, f64::max);
        if violation <= 1e-10 {
            return Ok(c);
        }
    }
    Err(Error::Precondition(
        "failed to produce a constrained vector within tolerance".into(),
    ))
}

/// Native-space semi-norm of the finitely generated function with
/// coefficients `c` at centers `Y`: `sqrt(c^T A c)` with `A` the kernel
/// matrix. Requires the moment constraints to hold at `Y`; the quadratic
/// form is then nonnegative (conditional positive definiteness of order m),
/// so a significantly negative value is reported as a kernel bug.
pub fn semi_norm(params: &KernelParams, y: &PointSet, c: &[f64]) -> Result<f64> {
    if y.dim() != params.n() {
        return Err(Error::InvalidArgument("dimension mismatch".into()));
    }
    if c.len() != y.len() {
        return Err(Error::InvalidArgument(format!(
            "{} coefficients for {} centers",
            c.len(),
            y.len()
        )));
    }
    let basis = PolynomialBasis::new(params.n(), params.order() - 1)?;
    let p = poly_matrix(&basis, y)?;
    let c_scale = 1.0 + c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let violation = (0..basis.len())
        .map(|j| (0..y.len()).map(|i| p[(i, j)] * c[i]).sum::<f64>().abs())
        .fold(0.0f64, f64::max);
    if violation > RESIDUAL_RTOL * c_scale {
        return Err(Error::Precondition(format!(
            "coefficients violate the moment constraints: |P^T c|_inf = {violation:.3e}"
        )));
    }
    let a_rows = kernel_matrix_rows(params, y);
    let row_dots: Vec<f64> = a_rows
        .iter()
        .zip(c)
        .map(|(row, &ci)| ci * row.iter().zip(c).map(|(&a, &cj)| a * cj).sum::<f64>())
        .collect();
    let qform: f64 = row_dots.iter().sum();

    let max_a = a_rows
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let c_sq: f64 = c.iter().map(|v| v * v).sum();
    let tolerance = 1e-10 * c_sq * max_a;
    if qform < -tolerance {
        return Err(Error::CpdViolation {
            quadratic_form: qform,
            tolerance,
        });
    }
    Ok(qform.max(0.0).sqrt())
}
