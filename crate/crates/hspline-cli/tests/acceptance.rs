//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! Run with `cargo test -p hspline-cli --test acceptance` (add
//! `-- --nocapture` to see the per-criterion lines).

use approx::assert_relative_eq;
use hspline::bounds::{
    bound_constants, error_bound_at_offset, error_bound_from_ln, moment_bound_rhs, moment_case,
    moment_exact, moment_quadrature, verify_lemma23, CaseTag, SpacingForm,
};
use hspline::geometry::{grid_points, jittered_points, CubeDomain, PointSet};
use hspline::harness::{run_convergence, HarnessConfig, TargetSpec};
use hspline::interpolator::fit;
use hspline::polynomials::{poly_matrix, polybound_check, PolynomialBasis};
use hspline::{Error, KernelParams};
use std::process::Command;

fn params(n: usize, lambda: u32, c: f64) -> KernelParams {
    KernelParams::new(n, lambda, c).unwrap()
}

/// Criterion 1: the `constants` CLI reproduces the reference constants for
/// (n=2, lambda=2, c=1, b0=1, l=1).
#[test]
fn c01_constants_reproduction() {
    let out = Command::new(env!("CARGO_BIN_EXE_hspline"))
        .args([
            "constants",
            "--n",
            "2",
            "--lambda",
            "2",
            "--c",
            "1",
            "--b0",
            "1",
        ])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid JSON");

    assert_eq!(doc["gamma_n"], "12");
    assert_relative_eq!(
        doc["alpha_n"].as_f64().unwrap(),
        std::f64::consts::PI,
        max_relative = 1e-12
    );
    assert_eq!(doc["moment_case"]["case_tag"], "b");
    assert_eq!(doc["moment_case"]["s"], 1);
    assert_eq!(doc["moment_case"]["rho"].as_f64().unwrap(), 1.0);
    assert_relative_eq!(
        doc["moment_case"]["delta_0"].as_f64().unwrap(),
        1.0 / 6.0,
        max_relative = 1e-12
    );
    let ln_b = doc["ln_b_const"].as_f64().unwrap();
    assert!((ln_b - (48.0 + (2.0 * 2f64.sqrt()).ln())).abs() < 1e-10);
    let delta0 = doc["ln_delta_0"].as_f64().unwrap().exp();
    assert!((delta0 / 4.6655e-24 - 1.0).abs() < 1e-4);
    let amplitude = doc["ln_amplitude"].as_f64().unwrap().exp();
    assert!((amplitude - 1.14562).abs() < 1e-5);
    assert_eq!(doc["params"]["l_const"].as_f64().unwrap(), 1.0);
    println!("criterion 1 (constants reproduction): PASS");
}

/// Criterion 2: exactly one moment case holds per (n, lambda) and the spot
/// values match.
#[test]
fn c02_case_split_audit() {
    for n in [2usize, 4, 6, 8, 10] {
        for lambda in [2u32, 4, 6, 8] {
            let d = n as i64 - lambda as i64;
            let conditions = [d > 3, d <= 1, 1 < d && d <= 3];
            assert_eq!(
                conditions.iter().filter(|&&x| x).count(),
                1,
                "(n, lambda) = ({n}, {lambda})"
            );
            let mc = moment_case(&params(n, lambda, 1.0));
            let expect = if conditions[0] {
                CaseTag::A
            } else if conditions[1] {
                CaseTag::B
            } else {
                CaseTag::C
            };
            assert_eq!(mc.case_tag, expect, "(n, lambda) = ({n}, {lambda})");
        }
    }
    let mc = moment_case(&params(2, 2, 1.0));
    assert_relative_eq!(mc.delta_0, 1.0 / 6.0, max_relative = 1e-12);
    let mc = moment_case(&params(2, 4, 1.0));
    assert_relative_eq!(mc.delta_0, 1.0 / 56.0, max_relative = 1e-12);
    let mc = moment_case(&params(4, 2, 1.0));
    assert_eq!((mc.rho, mc.delta_0), (1.0, 1.0));
    let mc = moment_case(&params(8, 2, 1.0));
    assert_eq!((mc.rho_num, mc.rho_den), (9, 7));
    assert!((mc.delta_0 / 12.3972 - 1.0).abs() < 1e-4);
    println!("criterion 2 (case-split audit): PASS");
}

/// Criterion 3: closed-form moments agree with adaptive quadrature of the
/// Fourier density to 1e-8 relative.
#[test]
fn c03_moment_oracle_agreement() {
    let mut worst = 0.0f64;
    for n in [2usize, 4] {
        for lambda in [2u32, 4] {
            for c in [0.5, 1.0, 2.0] {
                let p = params(n, lambda, c);
                let m = p.order();
                for k in (2 * m + 2)..=(2 * m + 6) {
                    let exact = moment_exact(&p, k).unwrap().value();
                    let quad = moment_quadrature(&p, k).unwrap();
                    worst = worst.max((exact / quad - 1.0).abs());
                }
            }
        }
    }
    assert!(worst <= 1e-8, "worst relative disagreement {worst:.3e}");
    println!("criterion 3 (moment oracle agreement, worst {worst:.2e}): PASS");
}

/// Criterion 4: factorial growth of the exact moments stays within rho, and
/// the (n=2, lambda=2, c=1, k=6) spot values match.
#[test]
fn c04_moment_growth() {
    let mut max_excess = f64::NEG_INFINITY;
    for n in [2usize, 4, 6, 8] {
        for lambda in [2u32, 4, 6] {
            for c in [0.5, 1.0, 2.0] {
                let p = params(n, lambda, c);
                let rho = moment_case(&p).rho;
                let m = p.order();
                for k in (2 * m + 2)..=(2 * m + 40) {
                    let a = moment_exact(&p, k).unwrap();
                    let b = moment_exact(&p, k + 1).unwrap();
                    let growth = (b.ln - a.ln).exp() * c / (k as f64 + 1.0);
                    max_excess = max_excess.max(growth - rho);
                }
            }
        }
    }
    assert!(max_excess <= 1e-9, "max growth excess {max_excess:.3e}");

    let p = params(2, 2, 1.0);
    let m6 = moment_exact(&p, 6).unwrap().value();
    let rhs6 = moment_bound_rhs(&p, 6).unwrap().value();
    assert!((m6 / 603.186 - 1.0).abs() < 1e-4, "M(6) = {m6}");
    assert!((rhs6 / 944.981 - 1.0).abs() < 1e-4, "RHS(6) = {rhs6}");
    assert!((m6 / rhs6 / 0.6383 - 1.0).abs() < 1e-4);
    println!("criterion 4 (moment growth, max excess {max_excess:.2e}): PASS");
}

/// Criterion 5: the factorial inequality holds in exact integer arithmetic
/// through k = 40.
#[test]
fn c05_lemma23_exact() {
    assert!(verify_lemma23(40));
    println!("criterion 5 (factorial inequality, exact integers): PASS");
}

/// Criterion 6: the randomized polynomial cube bound passes for n=1 (k <= 2)
/// and n=2 (k = 1), 200 trials each, q = gamma_n (k+1).
#[test]
fn c06_polybound_empirical() {
    for (n, k, q) in [(1u32, 0u32, 2u32), (1, 1, 4), (1, 2, 6), (2, 1, 24)] {
        let r = polybound_check(n, k, q, 200, 2024).unwrap();
        assert!(
            r.pass,
            "(n, k) = ({n}, {k}): max ratio {} vs bound {}",
            r.max_ratio, r.bound
        );
    }
    println!("criterion 6 (polynomial cube bound, 200 trials/case): PASS");
}

/// Criterion 7: fit invariants on 20 deterministic-seeded configurations,
/// polynomial reproduction on the evaluation grid, unisolvency error.
#[test]
fn c07_interpolation_correctness() {
    let domain = CubeDomain::unit(2);
    for i in 0..20u64 {
        let spacing = 1.0 / (4 + (i % 5)) as f64;
        let lambda = if i % 2 == 0 { 2 } else { 4 };
        // shifts kept at or below ~1/spacing: larger c makes the kernel so
        // flat that the system is numerically singular in f64 and the fit
        // rightly refuses
        let c = [0.4, 0.7, 1.0][(i % 3) as usize];
        let p = params(2, lambda, c);
        let x = jittered_points(&domain, spacing, 100 + i).unwrap();
        assert!(x.len() <= 200);
        let a = 1.0 + (i % 3) as f64;
        let b = 1.0 + (i % 2) as f64;
        let values: Vec<f64> = x
            .iter()
            .map(|pt| (a * pt[0] + 0.3).sin() * (b * pt[1]).cos() + 0.25 * (pt[0] - pt[1]))
            .collect();
        let model = fit(&p, &x, &values).unwrap();

        // independent residual recomputation
        let back = model.evaluate(&x).unwrap();
        let node_res = back
            .iter()
            .zip(&values)
            .map(|(s, f)| (s - f).abs())
            .fold(0.0f64, f64::max);
        let f_scale = 1.0 + values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(
            node_res <= 1e-8 * f_scale,
            "config {i}: node residual {node_res:.3e}"
        );
        let basis = PolynomialBasis::new(2, p.order() - 1).unwrap();
        let pm = poly_matrix(&basis, &x).unwrap();
        let c_scale = 1.0
            + model
                .coefficients()
                .iter()
                .fold(0.0f64, |m, v| m.max(v.abs()));
        for j in 0..basis.len() {
            let moment: f64 = (0..x.len())
                .map(|r| pm[(r, j)] * model.coefficients()[r])
                .sum();
            assert!(
                moment.abs() <= 1e-8 * c_scale,
                "config {i}: moment {j} = {moment:.3e}"
            );
        }
    }

    // polynomial reproduction on a 101 x 101 grid
    let p = params(2, 2, 1.0);
    let x = jittered_points(&domain, 0.125, 9).unwrap();
    let target = |pt: &[f64]| 0.75 - 1.5 * pt[0] + 2.25 * pt[1];
    let values: Vec<f64> = x.iter().map(target).collect();
    let model = fit(&p, &x, &values).unwrap();
    let grid = grid_points(&domain, 0.01).unwrap();
    assert_eq!(grid.len(), 101 * 101);
    let s = model.evaluate(&grid).unwrap();
    let worst = grid
        .iter()
        .zip(&s)
        .map(|(pt, si)| (si - target(pt)).abs())
        .fold(0.0f64, f64::max);
    assert!(worst <= 1e-7, "polynomial reproduction error {worst:.3e}");

    // collinear triple raises the unisolvency error naming the degree
    let line = PointSet::new(2, vec![0.0, 0.0, 0.5, 0.5, 1.0, 1.0]).unwrap();
    match fit(&p, &line, &[0.0, 1.0, 2.0]) {
        Err(Error::Unisolvency { degree }) => assert_eq!(degree, 1),
        other => panic!("expected unisolvency error, got {other:?}"),
    }
    println!("criterion 7 (interpolation correctness): PASS");
}

fn native_config(seed: u64) -> HarnessConfig {
    HarnessConfig {
        n: 2,
        lambda: 2,
        c: 1.0,
        l_const: 1.0,
        b0: 1.0,
        domain_lower: None,
        domain_side: 1.0,
        levels: 4,
        delta1: 0.25,
        target: TargetSpec::NativeCombination { centers: 12 },
        eval_resolution: 101,
        fill_resolution: 201,
        seed,
        force_hypothesis: true,
    }
}

/// Criterion 8: for 5 seeded native targets the certified bound holds at
/// every level with slack >= 10x (bound forced past the d <= d_0 hypothesis,
/// violation recorded).
#[test]
fn c08_certified_bound_audit() {
    let mut min_slack = f64::INFINITY;
    for seed in [1u64, 2, 3, 4, 5] {
        let report = run_convergence(&native_config(seed)).unwrap();
        assert!(report.target_semi_norm.unwrap() > 0.0);
        for (li, l) in report.levels.iter().enumerate() {
            assert!(!l.failed, "seed {seed} level {li} failed");
            let ln_bound = l.ln_bound.expect("bound evaluated");
            assert_eq!(l.bound_hypothesis_violated, Some(true));
            assert!(
                l.max_error.ln() <= ln_bound,
                "seed {seed} level {li}: error {} above bound {}",
                l.max_error,
                ln_bound.exp()
            );
            let slack = ln_bound.exp() / l.max_error;
            min_slack = min_slack.min(slack);
            assert!(
                slack >= 10.0,
                "seed {seed} level {li}: slack {slack:.2} < 10"
            );
        }
    }
    println!("criterion 8 (certified bound audit, min slack {min_slack:.0}x): PASS");
}

/// Criterion 9: the 4-level jittered experiment on a smooth non-polynomial
/// target decays strictly, finishes below 0.1x the coarsest error, and fits
/// an exponential-type rate with omega_emp < 1 and r^2 >= 0.9. (The paper's
/// own omega differs from 1 by ~e^{-48} and is not observable at desk
/// scale; both values are printed for comparison.)
#[test]
fn c09_convergence_behavior() {
    let config = HarnessConfig {
        n: 2,
        lambda: 2,
        c: 0.15,
        l_const: 1.0,
        b0: 1.0,
        domain_lower: None,
        domain_side: 1.0,
        levels: 4,
        delta1: 0.25,
        target: TargetSpec::GaussianBump {
            center: None,
            width: Some(0.25),
        },
        eval_resolution: 101,
        fill_resolution: 201,
        seed: 42,
        force_hypothesis: true,
    };
    let report = run_convergence(&config).unwrap();
    let errs: Vec<f64> = report
        .levels
        .iter()
        .map(|l| {
            assert!(!l.failed);
            l.max_error
        })
        .collect();
    for w in errs.windows(2) {
        assert!(w[1] < w[0], "errors must strictly decrease: {errs:?}");
    }
    assert!(
        errs[errs.len() - 1] < 0.1 * errs[0],
        "finest {} vs coarsest {}",
        errs[errs.len() - 1],
        errs[0]
    );
    let fitted = report.fitted.expect("rate fit available");
    assert!(fitted.omega_emp < 1.0, "omega_emp = {}", fitted.omega_emp);
    assert!(fitted.r_squared >= 0.9, "r^2 = {}", fitted.r_squared);
    let bc = bound_constants(&config.params().unwrap(), config.b0).unwrap();
    println!(
        "criterion 9 (convergence: omega_emp = {:.4}, r^2 = {:.4}; certified omega' = 1 - {} \
         at this scale): PASS",
        fitted.omega_emp,
        fitted.r_squared,
        hspline::bounds::sci_string_from_ln(bc.ln_ln_inv_omega_prime),
    );
}

/// Criterion 10: at n = 4 every constant is finite in log space, the five
/// log-space identities hold to 1e-12, and the decrement at delta = delta_0
/// is 3 ln(3/2) to 1e-12 for every lambda=2 parameter set tested.
#[test]
fn c10_log_space_integrity() {
    let ln2 = std::f64::consts::LN_2;
    for (n, b0) in [(4usize, 1.0f64), (4, 0.1), (2, 1.0), (6, 1.0), (8, 10.0)] {
        let p = params(n, 2, 1.0);
        let bc = bound_constants(&p, b0).unwrap();
        for v in [
            bc.ln_b_const,
            bc.ln_c_const,
            bc.ln_delta_0,
            bc.ln_d0,
            bc.ln_ln_inv_omega,
            bc.ln_ln_inv_omega_prime,
            bc.ln_amplitude,
        ] {
            assert!(v.is_finite(), "(n, b0) = ({n}, {b0})");
        }
        let gamma = bc.gamma_n_f64;
        let m = p.order() as f64;
        // the five log-space identities
        assert!((bc.ln_c_const - bc.ln_b_const.max((2.0 / (3.0 * b0)).ln())).abs() < 1e-12);
        assert!((bc.ln_delta_0 - (-(3.0 * gamma * (m + 1.0)).ln() - bc.ln_c_const)).abs() < 1e-12);
        assert!(
            (bc.ln_ln_inv_omega - (1.5f64.ln().ln() - (3.0 * gamma).ln() - bc.ln_c_const)).abs()
                < 1e-12
        );
        assert!((bc.ln_ln_inv_omega_prime - (bc.ln_ln_inv_omega - ln2)).abs() < 1e-12);
        assert!((bc.ln_d0 - (bc.ln_delta_0 - ln2)).abs() < 1e-12);

        // decrement at the admissible threshold: D = 3 ln(3/2) for m = 2
        let expect = 3.0 * 1.5f64.ln();
        let ev = error_bound_at_offset(&bc, SpacingForm::Delta, 0.0, 1.0, false).unwrap();
        assert!(
            (ev.decrement - expect).abs() < 1e-12,
            "(n, b0) = ({n}, {b0}): D = {}",
            ev.decrement
        );
        if n <= 4 {
            let ev =
                error_bound_from_ln(&bc, bc.ln_delta_0, SpacingForm::Delta, 1.0, false).unwrap();
            assert!(
                (ev.decrement - expect).abs() < 1e-12,
                "(n, b0) = ({n}, {b0}) via absolute log spacing: D = {}",
                ev.decrement
            );
        }
    }
    // n = 4 headline value: ln B = 5056 + ln 4
    let bc = bound_constants(&params(4, 2, 1.0), 1.0).unwrap();
    assert!((bc.ln_b_const - (5056.0 + 4f64.ln())).abs() < 1e-9);
    println!("criterion 10 (log-space integrity at n = 4): PASS");
}
