//! Constants of the exponential error bound, in overflow-safe log space.
//!
//! The bound has the shape `|f(x) - s(x)| <= A * omega^{1/delta} * |f|_h`
//! with `omega = (2/3)^{1/(3 C gamma_n)}` and
//! `C = max(2 rho' sqrt(n) e^{2 n gamma_n}, 2/(3 b0))`. Already for `n = 4`,
//! `e^{2 n gamma_n} = e^{5056}`, far beyond f64 range, so `B`, `C`,
//! `1/delta_0` and friends exist here only as natural logs. `omega` itself
//! differs from 1 by roughly `e^{-2 n gamma_n}` and is *never* materialized:
//! only `L = ln(1/omega)` is stored (as `ln L`), and the bound's decrement
//! `D = L / spacing` is assembled in log space.

use crate::kernel::KernelParams;
use crate::polynomials::{gamma_n, gamma_n_f64};
use crate::special::dd::Dd;
use crate::special::{ln_factorial, ln_gamma, ln_unit_ball_volume};
use crate::{Error, Result};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

/// Value stored as its natural log (always positive in this crate).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogValue {
    pub ln: f64,
}

impl LogValue {
    /// Materialize; may overflow to `inf` or underflow to 0.
    pub fn value(self) -> f64 {
        self.ln.exp()
    }
}

/// Which of the three spectral moment regimes `n - lambda` falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseTag {
    /// `n - lambda > 3`
    A,
    /// `n - lambda <= 1`
    B,
    /// `1 < n - lambda <= 3`
    C,
}

/// The moment-bound constants `s`, `rho`, `Delta_0` for the kernel's case.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentCase {
    pub case_tag: CaseTag,
    pub s: u32,
    /// `rho` as an exact rational `rho_num / rho_den`.
    pub rho_num: u64,
    pub rho_den: u64,
    pub rho: f64,
    pub delta_0: f64,
    pub ln_delta_0: f64,
}

/// Case split on `n - lambda` (both even, so the three conditions are
/// exhaustive and mutually exclusive, and `ceil((n-lambda-3)/2)` is exact in
/// integer arithmetic).
pub fn moment_case(params: &KernelParams) -> MomentCase {
    let m = params.order() as u64;
    let d = params.n() as i64 - params.lambda() as i64;
    if d > 3 {
        // s = ceil((d - 3)/2) = (d - 2)/2 for even d
        let s = ((d - 2) / 2) as u64;
        let rho_den = 2 * m + 3;
        let rho_num = rho_den + s;
        let rho = rho_num as f64 / rho_den as f64;
        // Delta_0 = [(2m+3) ... (2m+2+s)] / rho^{2m+2}, product exact first
        let mut product: u128 = 1;
        let mut overflow = false;
        for i in (2 * m + 3)..=(2 * m + 2 + s) {
            match product.checked_mul(i as u128) {
                Some(p) => product = p,
                None => {
                    overflow = true;
                    break;
                }
            }
        }
        let ln_product = if overflow {
            ((2 * m + 3)..=(2 * m + 2 + s))
                .map(|i| (i as f64).ln())
                .sum()
        } else {
            (product as f64).ln()
        };
        let ln_delta_0 =
            ln_product + (2 * m + 2) as f64 * ((rho_den as f64).ln() - (rho_num as f64).ln());
        let delta_0 = if overflow {
            ln_delta_0.exp()
        } else {
            product as f64 * (rho_den as f64 / rho_num as f64).powi((2 * m + 2) as i32)
        };
        MomentCase {
            case_tag: CaseTag::A,
            s: s as u32,
            rho_num,
            rho_den,
            rho,
            delta_0,
            ln_delta_0,
        }
    } else if d <= 1 {
        // s = -ceil((d - 3)/2) = (2 - d)/2 for even d
        let s = ((2 - d) / 2) as u64;
        let mut product: u128 = 1;
        for i in (2 * m + 3 - s)..=(2 * m + 2) {
            product = product.checked_mul(i as u128).expect("desk-scale product");
        }
        let delta_0 = 1.0 / product as f64;
        MomentCase {
            case_tag: CaseTag::B,
            s: s as u32,
            rho_num: 1,
            rho_den: 1,
            rho: 1.0,
            delta_0,
            ln_delta_0: -(product as f64).ln(),
        }
    } else {
        MomentCase {
            case_tag: CaseTag::C,
            s: 0,
            rho_num: 1,
            rho_den: 1,
            rho: 1.0,
            delta_0: 1.0,
            ln_delta_0: 0.0,
        }
    }
}

fn biguint_to_string<S: serde::Serializer>(
    x: &BigUint,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn biguint_from_string<'de, D: serde::Deserializer<'de>>(
    d: D,
) -> std::result::Result<BigUint, D::Error> {
    let s = <String as serde::Deserialize>::deserialize(d)?;
    s.parse::<BigUint>()
        .map_err(|e| serde::de::Error::custom(format!("invalid integer: {e}")))
}

/// Every constant of the error bound for one `(params, b0)` pair.
///
/// Log-space identities maintained by construction:
/// `ln_delta_0 = -ln(3 gamma_n (m+1)) - ln_c_const`,
/// `ln_d0 = ln_delta_0 - ln 2`,
/// `ln_ln_inv_omega = ln(ln(3/2)) - ln(3 gamma_n) - ln_c_const`,
/// `ln_ln_inv_omega_prime = ln_ln_inv_omega - ln 2`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundConstants {
    pub params: KernelParams,
    pub b0: f64,
    #[serde(
        serialize_with = "biguint_to_string",
        deserialize_with = "biguint_from_string"
    )]
    pub gamma_n: BigUint,
    pub gamma_n_f64: f64,
    /// Volume of the unit ball, `pi^{n/2} / (n/2)!`.
    pub alpha_n: f64,
    pub ln_alpha_n: f64,
    pub moment_case: MomentCase,
    /// `rho' = rho / c`.
    pub rho_prime: f64,
    /// `ln B`, `B = 2 rho' sqrt(n) e^{2 n gamma_n}`.
    pub ln_b_const: f64,
    /// `ln C`, `C = max(B, 2/(3 b0))`.
    pub ln_c_const: f64,
    /// `ln delta_0`, `delta_0 = 1/(3 C gamma_n (m+1))`.
    pub ln_delta_0: f64,
    /// `ln d_0`, `d_0 = delta_0 / 2`.
    pub ln_d0: f64,
    /// `ln L` with `L = ln(1/omega) = ln(3/2)/(3 C gamma_n)`.
    pub ln_ln_inv_omega: f64,
    /// `ln L'` with `L' = L/2` (`omega' = sqrt(omega)`).
    pub ln_ln_inv_omega_prime: f64,
    /// C-free part of `ln L`: `ln(ln(3/2)) - ln(3 gamma_n)`. Kept separate
    /// so the bound's decrement can be assembled with the `ln C` terms
    /// cancelling exactly (the decrement at `delta = delta_0` is
    /// `(m+1) ln(3/2)` by algebra, and that cancellation must survive
    /// rounding even when `ln C ~ 5e3`).
    pub ln_decay_numerator: f64,
    /// `ln A`, `A = sqrt(l) (pi/2)^{1/4} sqrt(n alpha_n) c^{lambda/2} sqrt(Delta_0)`.
    pub ln_amplitude: f64,
}

/// Assemble all bound constants; everything that can exceed float range is
/// produced directly in log space and stays there.
pub fn bound_constants(params: &KernelParams, b0: f64) -> Result<BoundConstants> {
    if !b0.is_finite() || b0 <= 0.0 {
        return Err(Error::Domain(format!("b0 must be > 0, got {b0}")));
    }
    let n = params.n();
    let gamma = gamma_n(n as u32)?;
    let gamma_f = gamma_n_f64(n as u32)?;
    let mc = moment_case(params);
    let m = params.order() as f64;
    let c = params.c();

    let rho_prime = mc.rho / c;
    let ln_b_const = (2.0 * rho_prime * (n as f64).sqrt()).ln() + 2.0 * n as f64 * gamma_f;
    let ln_c_const = ln_b_const.max((2.0 / (3.0 * b0)).ln());

    let ln_delta_0 = -(3.0 * gamma_f * (m + 1.0)).ln() - ln_c_const;
    let ln_d0 = ln_delta_0 - std::f64::consts::LN_2;
    let ln_decay_numerator = 1.5f64.ln().ln() - (3.0 * gamma_f).ln();
    let ln_ln_inv_omega = ln_decay_numerator - ln_c_const;
    let ln_ln_inv_omega_prime = ln_ln_inv_omega - std::f64::consts::LN_2;

    let ln_alpha_n = ln_unit_ball_volume(n)?;
    let alpha_n = ln_alpha_n.exp();
    let ln_amplitude = 0.5 * params.l_const().ln()
        + 0.25 * (std::f64::consts::FRAC_PI_2).ln()
        + 0.5 * ((n as f64).ln() + ln_alpha_n)
        + 0.5 * params.lambda() as f64 * c.ln()
        + 0.5 * mc.ln_delta_0;

    Ok(BoundConstants {
        params: params.clone(),
        b0,
        gamma_n: gamma,
        gamma_n_f64: gamma_f,
        alpha_n,
        ln_alpha_n,
        moment_case: mc,
        rho_prime,
        ln_b_const,
        ln_c_const,
        ln_delta_0,
        ln_d0,
        ln_ln_inv_omega,
        ln_ln_inv_omega_prime,
        ln_decay_numerator,
        ln_amplitude,
    })
}

/// Which spacing the bound is parameterized by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpacingForm {
    /// Subcube side `delta` (admissible iff `delta <= delta_0`), decrement
    /// uses `L`.
    Delta,
    /// Fill distance `d` (admissible iff `d <= d_0`), decrement uses
    /// `L' = L/2`.
    Fill,
}

/// A fully decomposed bound evaluation: the bound is
/// `exp(ln_bound) = A * f_norm * e^{-decrement}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundEvaluation {
    pub form: SpacingForm,
    pub ln_spacing: f64,
    /// `exp(ln_spacing)`; 0 when the spacing is below f64 range.
    pub spacing: f64,
    pub f_norm: f64,
    pub ln_amplitude: f64,
    pub ln_f_norm: f64,
    /// `D = L / spacing` (or `L' / spacing`); the bound is
    /// `A * f_norm * e^{-D}`.
    pub decrement: f64,
    pub ln_bound: f64,
    /// Admissibility threshold (`ln delta_0` or `ln d_0`).
    pub ln_threshold: f64,
    pub hypothesis_ok: bool,
    /// True when the hypothesis failed but evaluation was forced.
    pub forced: bool,
}

/// Evaluate the certified bound at a spacing given in ordinary units.
pub fn error_bound(
    bc: &BoundConstants,
    spacing: f64,
    form: SpacingForm,
    f_norm: f64,
    force: bool,
) -> Result<BoundEvaluation> {
    if !spacing.is_finite() || spacing <= 0.0 {
        return Err(Error::Domain(format!(
            "spacing must be finite and > 0, got {spacing}"
        )));
    }
    error_bound_from_ln(bc, spacing.ln(), form, f_norm, force)
}

/// Evaluate the certified bound at a spacing expressed *relative to the
/// admissible threshold*: `spacing = threshold * e^{ln_offset}` with the
/// threshold `delta_0` (Delta form) or `d_0` (Fill form).
///
/// In this parameterization every occurrence of `C` cancels symbolically:
/// the decrement is exactly `(m+1) ln(3/2) e^{-ln_offset}` for both forms,
/// so the evaluation stays accurate for any `n` (at `n = 8`,
/// `ln C ~ 2.7e8` and even one f64 rounding of an absolute spacing log
/// would cost ~3e-8 in the exponent).
pub fn error_bound_at_offset(
    bc: &BoundConstants,
    form: SpacingForm,
    ln_offset: f64,
    f_norm: f64,
    force: bool,
) -> Result<BoundEvaluation> {
    if !ln_offset.is_finite() {
        return Err(Error::Domain(format!(
            "ln_offset must be finite, got {ln_offset}"
        )));
    }
    if !f_norm.is_finite() || f_norm < 0.0 {
        return Err(Error::Domain(format!(
            "f_norm must be finite and >= 0, got {f_norm}"
        )));
    }
    let (ln_threshold, threshold_name) = match form {
        SpacingForm::Delta => (bc.ln_delta_0, "delta_0"),
        SpacingForm::Fill => (bc.ln_d0, "d_0"),
    };
    let hypothesis_ok = ln_offset <= 0.0;
    if !hypothesis_ok && !force {
        return Err(Error::HypothesisViolated {
            form: match form {
                SpacingForm::Delta => "delta".into(),
                SpacingForm::Fill => "fill".into(),
            },
            spacing: (ln_threshold + ln_offset).exp(),
            threshold_name: threshold_name.into(),
            threshold_str: sci_string_from_ln(ln_threshold),
            ln_threshold,
        });
    }
    let m = bc.params.order() as f64;
    let decrement = (m + 1.0) * 1.5f64.ln() * (-ln_offset).exp();
    let ln_f_norm = f_norm.ln();
    let ln_spacing = ln_threshold + ln_offset;
    Ok(BoundEvaluation {
        form,
        ln_spacing,
        spacing: ln_spacing.exp(),
        f_norm,
        ln_amplitude: bc.ln_amplitude,
        ln_f_norm,
        decrement,
        ln_bound: bc.ln_amplitude + ln_f_norm - decrement,
        ln_threshold,
        hypothesis_ok,
        forced: force && !hypothesis_ok,
    })
}

/// Evaluate the certified bound with the spacing supplied as its natural
/// log (the only usable entry point when the admissible spacings are below
/// f64 range, e.g. `delta_0 ~ e^{-5070}` at `n = 4`).
pub fn error_bound_from_ln(
    bc: &BoundConstants,
    ln_spacing: f64,
    form: SpacingForm,
    f_norm: f64,
    force: bool,
) -> Result<BoundEvaluation> {
    if !ln_spacing.is_finite() {
        return Err(Error::Domain(format!(
            "ln(spacing) must be finite, got {ln_spacing}"
        )));
    }
    if !f_norm.is_finite() || f_norm < 0.0 {
        return Err(Error::Domain(format!(
            "f_norm must be finite and >= 0, got {f_norm}"
        )));
    }
    let (ln_threshold, threshold_name) = match form {
        SpacingForm::Delta => (bc.ln_delta_0, "delta_0"),
        SpacingForm::Fill => (bc.ln_d0, "d_0"),
    };
    let hypothesis_ok = ln_spacing <= ln_threshold;
    if !hypothesis_ok && !force {
        return Err(Error::HypothesisViolated {
            form: match form {
                SpacingForm::Delta => "delta".into(),
                SpacingForm::Fill => "fill".into(),
            },
            spacing: ln_spacing.exp(),
            threshold_name: threshold_name.into(),
            threshold_str: sci_string_from_ln(ln_threshold),
            ln_threshold,
        });
    }

    // D = exp(ln L - ln spacing), assembled with the ln C term separated so
    // it cancels exactly against a threshold-valued spacing; plain f64
    // subtraction would smear the cancellation by ~|ln C| * eps.
    let mut exponent = Dd::from_f64(bc.ln_decay_numerator);
    if form == SpacingForm::Fill {
        exponent = exponent.sub(Dd::from_f64(std::f64::consts::LN_2));
    }
    let exponent = exponent
        .sub(Dd::from_f64(bc.ln_c_const))
        .sub(Dd::from_f64(ln_spacing));
    let decrement = exponent.to_f64().exp();

    let ln_f_norm = f_norm.ln(); // -inf for the zero function
    let ln_bound = bc.ln_amplitude + ln_f_norm - decrement;
    Ok(BoundEvaluation {
        form,
        ln_spacing,
        spacing: ln_spacing.exp(),
        f_norm,
        ln_amplitude: bc.ln_amplitude,
        ln_f_norm,
        decrement,
        ln_bound,
        ln_threshold,
        hypothesis_ok,
        forced: force && !hypothesis_ok,
    })
}

/// Exact spectral moment `M(k) = int |xi|^k dmu(xi)` of the kernel's
/// Fourier density, from the closed-form radial reduction.
///
/// With `nu = (n+lambda)/2`, the density integrates against `r^{k+n-1}` to a
/// Mellin-type Bessel integral `int_0^inf t^{mu-1} K_nu(t) dt
/// = 2^{mu-2} Gamma((mu-nu)/2) Gamma((mu+nu)/2)` at `mu = k + (n-lambda)/2`,
/// giving
/// `M(k) = l n alpha_n c^{lambda-k} 2^{k+(n-lambda)/2-2}
///         Gamma((k-lambda)/2) Gamma((k+n)/2)`,
/// convergent exactly when `k > lambda`.
pub fn moment_exact(params: &KernelParams, k: u32) -> Result<LogValue> {
    if k as i64 <= params.lambda() as i64 {
        return Err(Error::Domain(format!(
            "moment diverges: k = {k} <= lambda = {}",
            params.lambda()
        )));
    }
    let n = params.n() as f64;
    let lambda = params.lambda() as f64;
    let kf = k as f64;
    let ln = params.l_const().ln()
        + n.ln()
        + ln_unit_ball_volume(params.n())?
        + (lambda - kf) * params.c().ln()
        + (kf + (n - lambda) / 2.0 - 2.0) * std::f64::consts::LN_2
        + ln_gamma((kf - lambda) / 2.0)?
        + ln_gamma((kf + n) / 2.0)?;
    Ok(LogValue { ln })
}

/// Right-hand side of the spectral moment bound:
/// `l sqrt(pi/2) n alpha_n c^{lambda-k} Delta_0 rho^k k!` (claimed for
/// `k >= 2m + 2`).
pub fn moment_bound_rhs(params: &KernelParams, k: u32) -> Result<LogValue> {
    let m = params.order();
    if k < 2 * m + 2 {
        return Err(Error::Precondition(format!(
            "moment bound is claimed only for k >= 2m+2 = {}, got k = {k}",
            2 * m + 2
        )));
    }
    let mc = moment_case(params);
    let n = params.n() as f64;
    let lambda = params.lambda() as f64;
    let kf = k as f64;
    let ln = params.l_const().ln()
        + 0.5 * (std::f64::consts::FRAC_PI_2).ln()
        + n.ln()
        + ln_unit_ball_volume(params.n())?
        + (lambda - kf) * params.c().ln()
        + mc.ln_delta_0
        + kf * mc.rho.ln()
        + ln_factorial(k);
    Ok(LogValue { ln })
}

/// Independent cross-check of [`moment_exact`]: adaptive quadrature of the
/// Fourier density against `r^{k+n-1}`, with the truncation radius extended
/// until the remaining (exponentially decaying) tail contributes below
/// 1e-16 of the total.
pub fn moment_quadrature(params: &KernelParams, k: u32) -> Result<f64> {
    if k as i64 <= params.lambda() as i64 {
        return Err(Error::Domain(format!(
            "moment diverges: k = {k} <= lambda = {}",
            params.lambda()
        )));
    }
    let n = params.n();
    let alpha_n = ln_unit_ball_volume(n)?.exp();
    let pref = n as f64 * alpha_n;
    let integrand = |r: f64| -> f64 {
        pref * r.powi((k + n as u32 - 1) as i32)
            * crate::kernel::fourier_density(params, r).expect("r > 0 inside panel")
    };
    // initial radius past the integrand's peak (~(k + n)/c), then extend
    let mut hi = (k as f64 + n as f64 + 20.0) / params.c();
    let mut total = crate::quad::integrate(integrand, 0.0, hi, 1e-10, 0.0)?;
    for _ in 0..60 {
        let segment = crate::quad::integrate(integrand, hi, 2.0 * hi, 1e-10, 1e-300)?;
        total += segment;
        hi *= 2.0;
        if segment.abs() <= 1e-16 * total.abs() {
            break;
        }
    }
    Ok(total)
}

/// Exact-arithmetic check of `sqrt((2k)!) <= 2^k k!`, equivalently
/// `(2k)! <= 4^k (k!)^2`, for `k = 1..=k_max`.
pub fn verify_lemma23(k_max: u32) -> bool {
    let mut k_fact = BigUint::from(1u32);
    let mut two_k_fact = BigUint::from(1u32);
    let mut four_pow = BigUint::from(1u32);
    for k in 1..=k_max {
        k_fact *= k;
        two_k_fact *= 2 * k - 1;
        two_k_fact *= 2 * k;
        four_pow *= 4u32;
        if two_k_fact > &four_pow * &k_fact * &k_fact {
            return false;
        }
    }
    true
}

/// Render a log-space value as a short scientific-notation string
/// (e.g. `ln(delta_0)` -> `"4.6655e-24"`), usable far beyond f64 range.
pub fn sci_string_from_ln(ln_v: f64) -> String {
    if ln_v == f64::NEG_INFINITY {
        return "0".to_string();
    }
    if ln_v.is_nan() {
        return "nan".to_string();
    }
    if !ln_v.is_finite() {
        return "inf".to_string();
    }
    let log10 = ln_v / std::f64::consts::LN_10;
    let mut exp10 = log10.floor();
    let mut mantissa = 10f64.powf(log10 - exp10);
    if mantissa >= 9.999_95 {
        mantissa = 1.0;
        exp10 += 1.0;
    }
    format!("{mantissa:.4}e{exp10}")
}
