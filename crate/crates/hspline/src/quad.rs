//! Adaptive Gauss-Kronrod quadrature (15-point Kronrod / 7-point Gauss).
//!
//! Serves as the independent cross-check of the closed-form spectral moments:
//! it integrates the kernel's Fourier density directly, so it must not share
//! any code with the log-gamma route.

use crate::{Error, Result};

/// Kronrod abscissae on [0, 1] (positive half, descending), QUADPACK dqk15.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

/// 7-point Gauss weights, paired with the odd Kronrod abscissae.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_67,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 15-point Kronrod panel: returns (integral, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut result_gauss = WG[3] * f_center;
    let mut result_kronrod = WGK[7] * f_center;
    let mut result_abs = result_kronrod.abs();

    let mut fv = [0.0f64; 15];
    fv[7] = f_center;
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = f1;
        fv[14 - j] = f2;
        result_kronrod += WGK[j] * (f1 + f2);
        result_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            result_gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * result_kronrod;
    let mut result_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        result_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let result = result_kronrod * half;
    let result_abs = result_abs * half.abs();
    let result_asc = result_asc * half.abs();
    let mut err = ((result_kronrod - result_gauss) * half).abs();
    if result_asc != 0.0 && err != 0.0 {
        err = result_asc * (200.0 * err / result_asc).powf(1.5).min(1.0);
    }
    let min_err = 50.0 * f64::EPSILON * result_abs;
    if result_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && min_err > err {
        err = min_err;
    }
    (result, err)
}

/// Adaptive integration of `f` over `[a, b]` to relative tolerance
/// `rel_tol` (with absolute floor `abs_tol`), splitting the worst panel.
pub(crate) fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<f64> {
    const MAX_PANELS: usize = 400;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidArgument(format!(
            "integrate requires finite a < b, got [{a}, {b}]"
        )));
    }
    struct Panel {
        a: f64,
        b: f64,
        value: f64,
        err: f64,
    }
    let (value, err) = gk15(&f, a, b);
    let mut panels = vec![Panel { a, b, value, err }];
    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let total_err: f64 = panels.iter().map(|p| p.err).sum();
        if total_err <= (rel_tol * total.abs()).max(abs_tol) {
            return Ok(total);
        }
        if panels.len() >= MAX_PANELS {
            return Err(Error::Precondition(format!(
                "adaptive quadrature failed to converge: error {total_err:.3e} on {} panels",
                panels.len()
            )));
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .map(|(i, _)| i)
            .expect("nonempty");
        let Panel { a, b, .. } = panels.swap_remove(worst);
        let mid = 0.5 * (a + b);
        let (v1, e1) = gk15(&f, a, mid);
        let (v2, e2) = gk15(&f, mid, b);
        panels.push(Panel {
            a,
            b: mid,
            value: v1,
            err: e1,
        });
        panels.push(Panel {
            a: mid,
            b,
            value: v2,
            err: e2,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(|x| x * x, 0.0, 1.0, 1e-12, 0.0).unwrap();
        assert_relative_eq!(v, 1.0 / 3.0, max_relative = 1e-14);
    }

    #[test]
    fn gamma_tail_integral() {
        // int_0^60 x^5 e^{-x} = 5! to 1e-12
        let v = integrate(|x| x.powi(5) * (-x).exp(), 0.0, 60.0, 1e-12, 0.0).unwrap();
        assert_relative_eq!(v, 120.0, max_relative = 1e-11);
    }

    #[test]
    fn oscillatory_needs_subdivision() {
        // int_0^10 sin(7x) dx = (1 - cos 70)/7
        let v = integrate(|x| (7.0 * x).sin(), 0.0, 10.0, 1e-11, 0.0).unwrap();
        assert_relative_eq!(v, (1.0 - (70.0f64).cos()) / 7.0, max_relative = 1e-9);
    }

    #[test]
    fn bessel_k0_total_mass() {
        // int_0^inf K_0 = pi/2; the tail beyond 60 is ~e^{-60}
        let v = integrate(
            |t| crate::kernel::bessel_k(0, t).unwrap(),
            1e-14,
            60.0,
            1e-11,
            0.0,
        )
        .unwrap();
        assert_relative_eq!(v, std::f64::consts::FRAC_PI_2, max_relative = 1e-9);
    }

    #[test]
    fn rejects_bad_interval() {
        assert!(integrate(|x| x, 1.0, 0.0, 1e-9, 0.0).is_err());
        assert!(integrate(|x| x, 0.0, f64::INFINITY, 1e-9, 0.0).is_err());
    }
}
