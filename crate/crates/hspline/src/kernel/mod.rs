//! The shifted surface spline kernel and its Fourier-transform density.

mod bessel;

pub use bessel::bessel_k;

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Parameters of the shifted surface spline
/// `h(x) = (-1)^m (|x|^2 + c^2)^{lambda/2} * (1/2) ln(|x|^2 + c^2)`.
///
/// `n` and `lambda` must be even (`n >= 2`, `lambda >= 2`), `c > 0`. The
/// conditional positive definiteness order `m = 1 + lambda/2` is derived, not
/// stored. `l_const` is the positive constant `l(lambda, n)` multiplying the
/// kernel's Fourier transform; no closed form is assumed for it, so it is
/// configurable (default 1) and every bound scales by `sqrt(l_const)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    n: usize,
    lambda: u32,
    c: f64,
    l_const: f64,
}

impl KernelParams {
    pub fn new(n: usize, lambda: u32, c: f64) -> Result<Self> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "dimension n must be even and >= 2, got {n}"
            )));
        }
        if lambda < 2 || !lambda.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "exponent lambda must be even and >= 2, got {lambda}"
            )));
        }
        if !c.is_finite() || c <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "shift c must be finite and > 0, got {c} (the c = 0 thin-plate limit is not supported)"
            )));
        }
        Ok(KernelParams {
            n,
            lambda,
            c,
            l_const: 1.0,
        })
    }

    pub fn with_l_const(mut self, l_const: f64) -> Result<Self> {
        if !l_const.is_finite() || l_const <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "l_const must be finite and > 0, got {l_const}"
            )));
        }
        self.l_const = l_const;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn l_const(&self) -> f64 {
        self.l_const
    }

    /// Order of conditional positive definiteness, `m = 1 + lambda/2`.
    pub fn order(&self) -> u32 {
        1 + self.lambda / 2
    }

    /// Bessel order in the Fourier density, `nu = (n + lambda)/2`.
    pub fn bessel_order(&self) -> u32 {
        (self.n as u32 + self.lambda) / 2
    }

    /// `(-1)^m`.
    pub fn sign(&self) -> f64 {
        if self.order() % 2 == 1 {
            -1.0
        } else {
            1.0
        }
    }

    /// Kernel value from the squared distance; no validation.
    pub(crate) fn eval_sq(&self, dist_sq: f64) -> f64 {
        let q = dist_sq + self.c * self.c;
        self.sign() * q.powi((self.lambda / 2) as i32) * 0.5 * q.ln()
    }
}

/// Evaluate `h(x)`; smooth everywhere for `c > 0`, natural logarithm, the
/// outer exponent 1/2 of the log absorbed as the factor 1/2.
pub fn kernel_eval(params: &KernelParams, x: &[f64]) -> Result<f64> {
    if x.len() != params.n {
        return Err(Error::InvalidArgument(format!(
            "point has dimension {}, kernel expects {}",
            x.len(),
            params.n
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "kernel_eval requires finite coordinates".into(),
        ));
    }
    Ok(params.eval_sq(x.iter().map(|v| v * v).sum()))
}

/// Radial profile of the kernel's Fourier transform,
/// `l_const * r^{-lambda-n} * (c r)^{nu} * K_nu(c r)` with
/// `nu = (n + lambda)/2`; strictly positive, decays like `e^{-c r}`.
pub fn fourier_density(params: &KernelParams, r: f64) -> Result<f64> {
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::Domain(format!(
            "fourier_density requires r > 0, got {r}"
        )));
    }
    let nu = params.bessel_order();
    let t = params.c * r;
    let k = bessel_k(nu, t)?;
    Ok(
        params.l_const
            * r.powi(-((params.lambda as i32) + params.n as i32))
            * t.powi(nu as i32)
            * k,
    )
}
