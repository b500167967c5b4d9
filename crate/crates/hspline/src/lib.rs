//! Scattered-data interpolation with shifted surface splines in even dimensions.
//!
//! The kernel is the radial function
//! `h(x) = (-1)^m (|x|^2 + c^2)^{lambda/2} * (1/2) ln(|x|^2 + c^2)`
//! with even dimension `n`, even exponent `lambda`, shift `c > 0`, and
//! conditional positive definiteness of order `m = 1 + lambda/2`. Interpolants
//! carry a polynomial part of degree `m - 1` and kernel coefficients
//! constrained to annihilate that polynomial space.
//!
//! Besides fitting and evaluating interpolants, the crate computes the
//! constants of the exponential-type error bound
//! `|f(x) - s(x)| <= A * omega^{1/delta} * |f|_h` for quasi-uniform data on
//! cubes. Those constants overflow any float format (they contain
//! `e^{2 n gamma_n}` with `gamma_2 = 12`, `gamma_4 = 632`, ...), so the
//! [`bounds`] module keeps every extreme quantity in log space; `omega` is
//! never materialized, only `ln(1/omega)`.
//!
//! The [`harness`] module runs convergence experiments against the bound and
//! hosts the verification suites (spectral moment growth, the polynomial
//! cube bound, and an exact-arithmetic factorial inequality).
//!
//! With the default `parallel` feature, batch evaluation, matrix assembly,
//! probe-grid scans, and randomized verification trials run on rayon;
//! disabling the feature yields an identical sequential implementation
//! (results do not depend on the thread count either way).
//!
//! ```
//! use hspline::geometry::{grid_points, jittered_points, CubeDomain};
//! use hspline::interpolator::fit;
//! use hspline::KernelParams;
//!
//! let params = KernelParams::new(2, 2, 0.5)?; // n = 2, lambda = 2, c = 1/2
//! let domain = CubeDomain::unit(2);
//! let sites = jittered_points(&domain, 0.125, 7)?;
//! let data: Vec<f64> = sites.iter().map(|p| (p[0] - p[1]).sin()).collect();
//!
//! let model = fit(&params, &sites, &data)?;
//! let grid = grid_points(&domain, 0.05)?;
//! let surface = model.evaluate(&grid)?;
//! assert_eq!(surface.len(), grid.len());
//! # Ok::<(), hspline::Error>(())
//! ```

pub mod bounds;
mod error;
pub mod geometry;
pub mod harness;
pub mod interpolator;
pub mod io;
pub mod kernel;
mod linalg;
mod par;
pub mod polynomials;
mod quad;
pub mod special;

pub use error::{Error, Result};
pub use kernel::KernelParams;
