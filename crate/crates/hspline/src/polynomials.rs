//! Multivariate polynomial bases, unisolvency tests, the `gamma_n`
//! recursion, and an empirical checker for the discrete polynomial bound on
//! cubes.

use crate::geometry::PointSet;
use crate::par;
use crate::{Error, Result};
use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Monomial basis of all `x^alpha` with `|alpha| <= degree`, in graded
/// lexicographic order (sorted by total degree, ties broken lexicographically
/// with the first variable strongest): `1, x1, x2, x1^2, x1 x2, x2^2, ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialBasis {
    dim: usize,
    degree: u32,
    multi_indices: Vec<Vec<u32>>,
}

impl PolynomialBasis {
    pub fn new(dim: usize, degree: u32) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument(
                "basis dimension must be >= 1".into(),
            ));
        }
        let mut multi_indices = Vec::new();
        for total in 0..=degree {
            let mut alpha = vec![0u32; dim];
            emit_degree(&mut multi_indices, &mut alpha, 0, total);
        }
        debug_assert_eq!(
            multi_indices.len() as u64,
            binomial(dim as u64 + degree as u64, dim as u64)
        );
        Ok(PolynomialBasis {
            dim,
            degree,
            multi_indices,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Number of basis monomials, `binomial(dim + degree, dim)`.
    pub fn len(&self) -> usize {
        self.multi_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn multi_indices(&self) -> &[Vec<u32>] {
        &self.multi_indices
    }

    /// Value of the `j`-th monomial at `x`.
    pub fn monomial(&self, j: usize, x: &[f64]) -> f64 {
        self.multi_indices[j]
            .iter()
            .zip(x)
            .map(|(&a, &v)| v.powi(a as i32))
            .product()
    }

    /// Evaluate the polynomial with the given coefficient vector.
    pub fn eval(&self, coeffs: &[f64], x: &[f64]) -> f64 {
        coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| c * self.monomial(j, x))
            .sum()
    }
}

/// Exponent vectors of total degree exactly `total`, descending
/// lexicographically (first variable heaviest).
fn emit_degree(out: &mut Vec<Vec<u32>>, alpha: &mut Vec<u32>, pos: usize, remaining: u32) {
    if pos + 1 == alpha.len() {
        alpha[pos] = remaining;
        out.push(alpha.clone());
        return;
    }
    for e in (0..=remaining).rev() {
        alpha[pos] = e;
        emit_degree(out, alpha, pos + 1, remaining - e);
    }
    alpha[pos] = 0;
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// `gamma_1 = 2`, `gamma_n = 2n (1 + gamma_{n-1})`, exact integers.
pub fn gamma_n(n: u32) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Domain("gamma_n requires n >= 1".into()));
    }
    let mut g = BigUint::from(2u32);
    for i in 2..=n {
        g = BigUint::from(2 * i) * (BigUint::from(1u32) + g);
    }
    Ok(g)
}

/// `gamma_n` as f64 (exact through n = 14, where it still fits in 53 bits).
pub fn gamma_n_f64(n: u32) -> Result<f64> {
    gamma_n(n)?
        .to_f64()
        .ok_or_else(|| Error::Domain("gamma_n does not fit an f64".into()))
}

/// Vandermonde-style collocation matrix: entry `(i, j)` is monomial `j` of
/// the basis evaluated at point `i`.
pub fn poly_matrix(basis: &PolynomialBasis, points: &PointSet) -> Result<DMatrix<f64>> {
    if points.dim() != basis.dim() {
        return Err(Error::InvalidArgument(format!(
            "points have dimension {}, basis {}",
            points.dim(),
            basis.dim()
        )));
    }
    let n = points.len();
    let q = basis.len();
    Ok(DMatrix::from_fn(n, q, |i, j| {
        basis.monomial(j, points.point(i))
    }))
}

/// Is `X` a determining set for polynomials of the given degree (the only
/// such polynomial vanishing on all of `X` is zero)?
///
/// Decided by the numerical column rank of the collocation matrix: full rank
/// against the threshold `sigma_max * max(N, dim) * eps * 100`, or an
/// explicit `tol` on the smallest singular value.
pub fn is_determining(points: &PointSet, degree: u32, tol: Option<f64>) -> Result<bool> {
    if let Some(t) = tol {
        if t.is_nan() || t < 0.0 {
            return Err(Error::InvalidArgument(format!("tol must be >= 0, got {t}")));
        }
    }
    let basis = PolynomialBasis::new(points.dim(), degree)?;
    if points.len() < basis.len() {
        return Ok(false);
    }
    let p = poly_matrix(&basis, points)?;
    let sv = p.singular_values();
    let sigma_max = sv.max();
    let sigma_min = sv.min();
    let threshold = tol
        .unwrap_or_else(|| sigma_max * points.len().max(basis.len()) as f64 * f64::EPSILON * 100.0);
    Ok(sigma_min > threshold)
}

/// Smallest degree `<= max_degree` for which `X` fails to be determining.
pub(crate) fn smallest_failing_degree(points: &PointSet, max_degree: u32) -> Result<Option<u32>> {
    for d in 0..=max_degree {
        if !is_determining(points, d, None)? {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// Outcome of one randomized polynomial-bound verification run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyBoundReport {
    pub n: u32,
    pub degree: u32,
    pub q: u32,
    pub trials: u32,
    pub seed: u64,
    /// Largest observed `sup_Q |p| / sup_Y |p|`.
    pub max_ratio: f64,
    /// The certified constant `e^{2 n gamma_n (k+1)}`.
    pub bound: f64,
    pub ln_bound: f64,
    pub pass: bool,
}

/// Randomized check that polynomials of degree `k` on the unit cube are
/// bounded by `e^{2 n gamma_n (k+1)}` times their sup over one sample point
/// per subcube of a `q^n` subdivision (hypothesis: `q >= gamma_n (k+1)`).
///
/// One random selection `Y` (one uniform point per subcube, from the seed's
/// stream 0) is shared by all trials; trial `t` draws its polynomial
/// coefficients uniformly from `[-1, 1]` on stream `t + 1`, so trials can run
/// in parallel with a deterministic outcome. `sup_Q` is approximated on a
/// dense lattice with 50 points per axis per subcube.
pub fn polybound_check(n: u32, k: u32, q: u32, trials: u32, seed: u64) -> Result<PolyBoundReport> {
    if !(1..=2).contains(&n) {
        return Err(Error::Domain(format!(
            "polybound_check supports n in {{1, 2}}, got {n}"
        )));
    }
    if k > 3 {
        return Err(Error::Domain(format!(
            "polybound_check supports degree k <= 3, got {k}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be >= 1".into()));
    }
    let gamma = gamma_n_f64(n)?;
    let q_min = gamma * (k + 1) as f64;
    if (q as f64) < q_min {
        return Err(Error::Precondition(format!(
            "q = {q} violates the hypothesis q >= gamma_n (k+1) = {q_min}"
        )));
    }
    let dim = n as usize;
    let basis = PolynomialBasis::new(dim, k)?;
    let cells = q as usize;

    // one sample point per subcube, shared across trials
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(0);
    let mut sample_points: Vec<Vec<f64>> = Vec::with_capacity(cells.pow(n));
    let mut idx = vec![0usize; dim];
    loop {
        let p: Vec<f64> = idx
            .iter()
            .map(|&i| (i as f64 + rng.random_range(0.0..1.0)) / cells as f64)
            .collect();
        sample_points.push(p);
        if !advance(&mut idx, cells) {
            break;
        }
    }

    let grid_per_axis = 50 * cells + 1;
    let ratios = par::map_collect(trials as usize, |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64 + 1);
        let coeffs: Vec<f64> = (0..basis.len())
            .map(|_| rng.random_range(-1.0..=1.0))
            .collect();
        let sup_y = sample_points
            .iter()
            .map(|p| basis.eval(&coeffs, p).abs())
            .fold(0.0f64, f64::max);
        let mut sup_q = 0.0f64;
        let mut gi = vec![0usize; dim];
        let mut x = vec![0.0f64; dim];
        loop {
            for (a, &i) in gi.iter().enumerate() {
                x[a] = i as f64 / (grid_per_axis - 1) as f64;
            }
            sup_q = sup_q.max(basis.eval(&coeffs, &x).abs());
            if !advance(&mut gi, grid_per_axis) {
                break;
            }
        }
        sup_q / sup_y
    });
    let max_ratio = ratios.into_iter().fold(0.0f64, f64::max);
    let ln_bound = 2.0 * n as f64 * gamma * (k + 1) as f64;
    let bound = ln_bound.exp();
    Ok(PolyBoundReport {
        n,
        degree: k,
        q,
        trials,
        seed,
        max_ratio,
        bound,
        ln_bound,
        pass: max_ratio <= bound,
    })
}

fn advance(idx: &mut [usize], base: usize) -> bool {
    for d in (0..idx.len()).rev() {
        idx[d] += 1;
        if idx[d] < base {
            return true;
        }
        idx[d] = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_n_first_values() {
        assert_eq!(gamma_n(1).unwrap(), BigUint::from(2u32));
        assert_eq!(gamma_n(2).unwrap(), BigUint::from(12u32));
        assert_eq!(gamma_n(3).unwrap(), BigUint::from(78u32));
        assert_eq!(gamma_n(4).unwrap(), BigUint::from(632u32));
        assert!(gamma_n(0).is_err());
    }

    #[test]
    fn gamma_n_increasing_and_even() {
        let mut prev = BigUint::from(0u32);
        for n in 1..=12 {
            let g = gamma_n(n).unwrap();
            assert!(g > prev, "gamma must increase at n = {n}");
            assert_eq!(&g % 2u32, BigUint::from(0u32), "gamma_{n} must be even");
            prev = g;
        }
    }

    #[test]
    fn graded_lex_order_n2() {
        let b = PolynomialBasis::new(2, 2).unwrap();
        let expect: Vec<Vec<u32>> = vec![
            vec![0, 0],
            vec![1, 0],
            vec![0, 1],
            vec![2, 0],
            vec![1, 1],
            vec![0, 2],
        ];
        assert_eq!(b.multi_indices(), expect.as_slice());
        assert_eq!(b.len(), 6);
    }

    #[test]
    fn basis_count_matches_binomial() {
        for (dim, deg, count) in [(1usize, 3u32, 4usize), (2, 1, 3), (2, 3, 10), (4, 2, 15)] {
            assert_eq!(PolynomialBasis::new(dim, deg).unwrap().len(), count);
        }
    }

    #[test]
    fn poly_matrix_rows() {
        let b = PolynomialBasis::new(2, 1).unwrap();
        let origin = PointSet::new(2, vec![0.0, 0.0]).unwrap();
        let m = poly_matrix(&b, &origin).unwrap();
        assert_eq!(m.as_slice(), &[1.0, 0.0, 0.0][..]); // column-major 1x3
        let p23 = PointSet::new(2, vec![2.0, 3.0]).unwrap();
        let m = poly_matrix(&b, &p23).unwrap();
        assert_eq!((m[(0, 0)], m[(0, 1)], m[(0, 2)]), (1.0, 2.0, 3.0));
    }

    #[test]
    fn poly_matrix_degree_zero_is_ones() {
        let b = PolynomialBasis::new(2, 0).unwrap();
        let pts = PointSet::new(2, vec![0.3, 0.7, -1.0, 2.0, 5.0, 5.0]).unwrap();
        let m = poly_matrix(&b, &pts).unwrap();
        assert_eq!(m.ncols(), 1);
        assert!(m.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn determining_examples() {
        // triangle is unisolvent for linears
        let tri = PointSet::new(2, vec![0.0, 0.0, 1.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(is_determining(&tri, 1, None).unwrap());
        // collinear points are not
        let line = PointSet::new(2, vec![0.0, 0.0, 0.5, 0.5, 1.0, 1.0]).unwrap();
        assert!(!is_determining(&line, 1, None).unwrap());
        // one point determines constants
        let single = PointSet::new(2, vec![0.3, 0.9]).unwrap();
        assert!(is_determining(&single, 0, None).unwrap());
        // too few points can never determine
        assert!(!is_determining(&single, 1, None).unwrap());
    }

    #[test]
    fn square_generic_collocation_is_invertible() {
        for seed in 0..20u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b = PolynomialBasis::new(2, 2).unwrap();
            let coords: Vec<f64> = (0..2 * b.len())
                .map(|_| rng.random_range(-1.0..1.0))
                .collect();
            let pts = PointSet::new(2, coords).unwrap();
            assert!(is_determining(&pts, 2, None).unwrap(), "seed {seed}");
            let m = poly_matrix(&b, &pts).unwrap();
            assert!(m.determinant().abs() > 0.0);
        }
    }

    #[test]
    fn determining_is_monotone_under_superset() {
        for seed in 0..50u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
            let degree = (seed % 3) as u32;
            let b = PolynomialBasis::new(2, degree).unwrap();
            let n_pts = b.len() + 2;
            let coords: Vec<f64> = (0..2 * n_pts)
                .map(|_| rng.random_range(-1.0..1.0))
                .collect();
            let pts = PointSet::new(2, coords.clone()).unwrap();
            if !is_determining(&pts, degree, None).unwrap() {
                continue; // (never happens for generic draws)
            }
            let mut extended = coords;
            extended.push(rng.random_range(-1.0..1.0));
            extended.push(rng.random_range(-1.0..1.0));
            let sup = PointSet::new(2, extended).unwrap();
            assert!(
                is_determining(&sup, degree, None).unwrap(),
                "superset lost unisolvency (seed {seed})"
            );
        }
    }

    #[test]
    fn polybound_constants_have_ratio_one() {
        let r = polybound_check(1, 0, 2, 10, 99).unwrap();
        assert_eq!(r.max_ratio, 1.0);
        assert!(r.pass);
        assert!((r.bound - (4.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn polybound_line_case() {
        let r = polybound_check(1, 1, 4, 50, 7).unwrap();
        assert!(r.pass, "max ratio {} vs bound {}", r.max_ratio, r.bound);
        assert!((r.ln_bound - 8.0).abs() < 1e-12);
        // the lemma's slack is enormous; observed ratios stay tiny
        assert!(r.max_ratio < 100.0);
    }

    #[test]
    fn polybound_never_fails_across_seeds() {
        for seed in [0u64, 1, 2, 3, 4] {
            let r = polybound_check(1, 2, 6, 40, seed).unwrap();
            assert!(r.pass, "seed {seed}: ratio {}", r.max_ratio);
        }
    }

    #[test]
    fn polybound_plane_constants() {
        let r = polybound_check(2, 0, 12, 10, 3).unwrap();
        assert_eq!(r.max_ratio, 1.0);
        assert!(r.pass);
    }

    #[test]
    fn polybound_preconditions() {
        assert!(polybound_check(1, 1, 3, 10, 0).is_err()); // q < gamma_1 * 2
        assert!(polybound_check(3, 1, 100, 10, 0).is_err()); // n out of range
        assert!(polybound_check(1, 4, 100, 10, 0).is_err()); // k out of range
    }

    #[test]
    fn polybound_deterministic() {
        let a = polybound_check(1, 1, 4, 20, 5).unwrap();
        let b = polybound_check(1, 1, 4, 20, 5).unwrap();
        assert_eq!(a.max_ratio, b.max_ratio);
    }
}
