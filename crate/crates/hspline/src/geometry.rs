//! Point sets on cube domains: generation, fill distance, subcube coverage.

use crate::par;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Axis-aligned closed cube `[lower, lower + side]^dim`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubeDomain {
    dim: usize,
    lower: Vec<f64>,
    side: f64,
}

impl CubeDomain {
    pub fn new(lower: Vec<f64>, side: f64) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::InvalidArgument("cube needs dimension >= 1".into()));
        }
        if lower.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("cube corner must be finite".into()));
        }
        if !side.is_finite() || side <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "cube side must be > 0, got {side}"
            )));
        }
        Ok(CubeDomain {
            dim: lower.len(),
            lower,
            side,
        })
    }

    /// `[0, 1]^dim`.
    pub fn unit(dim: usize) -> Self {
        CubeDomain::new(vec![0.0; dim], 1.0).expect("unit cube is valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim
            && p.iter()
                .zip(&self.lower)
                .all(|(&x, &lo)| x >= lo && x <= lo + self.side)
    }
}

/// Finite set of distinct points in `R^dim`, optionally tied to a domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
    domain: Option<CubeDomain>,
}

/// Two points closer than this (max-coordinate metric) are duplicates.
const DUPLICATE_TOL: f64 = 1e-14;

impl PointSet {
    /// Row-major coordinates; rejects non-finite values and duplicate points
    /// (within 1e-14 absolute per coordinate).
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be >= 1".into()));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidArgument(format!(
                "coordinate count {} is not a multiple of dim {dim}",
                coords.len()
            )));
        }
        if coords.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "point coordinates must be finite".into(),
            ));
        }
        let set = PointSet {
            dim,
            coords,
            domain: None,
        };
        let n = set.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let close = set
                    .point(i)
                    .iter()
                    .zip(set.point(j))
                    .all(|(a, b)| (a - b).abs() <= DUPLICATE_TOL);
                if close {
                    return Err(Error::InvalidArgument(format!(
                        "duplicate points at indices {i} and {j}"
                    )));
                }
            }
        }
        Ok(set)
    }

    pub fn from_rows(dim: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let mut coords = Vec::with_capacity(rows.len() * dim);
        for r in rows {
            if r.len() != dim {
                return Err(Error::InvalidArgument(format!(
                    "row has {} coordinates, expected {dim}",
                    r.len()
                )));
            }
            coords.extend_from_slice(r);
        }
        PointSet::new(dim, coords)
    }

    pub fn empty(dim: usize) -> Self {
        PointSet {
            dim: dim.max(1),
            coords: Vec::new(),
            domain: None,
        }
    }

    /// Attach a domain, verifying every point lies in the closed cube.
    pub fn with_domain(mut self, domain: CubeDomain) -> Result<Self> {
        if domain.dim() != self.dim {
            return Err(Error::InvalidArgument(format!(
                "domain dim {} != point dim {}",
                domain.dim(),
                self.dim
            )));
        }
        if let Some(i) = (0..self.len()).find(|&i| !domain.contains(self.point(i))) {
            return Err(Error::InvalidArgument(format!(
                "point {i} lies outside the domain"
            )));
        }
        self.domain = Some(domain);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn domain(&self) -> Option<&CubeDomain> {
        self.domain.as_ref()
    }

    /// Keep the listed rows (used to take subsets for test functions).
    pub fn subset(&self, indices: &[usize]) -> Result<PointSet> {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            if i >= self.len() {
                return Err(Error::InvalidArgument(format!("index {i} out of range")));
            }
            coords.extend_from_slice(self.point(i));
        }
        PointSet::new(self.dim, coords)
    }
}

/// How to produce a point set on a cube; serializable for configs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    /// Regular lattice including the boundary.
    Grid { spacing: f64 },
    /// One uniform point in every cell of the `spacing`-lattice, so every
    /// closed subcube of that partition contains exactly one point.
    Jittered { spacing: f64, seed: u64 },
    /// First `count` Halton points (bases = first dim primes), scaled.
    Halton { count: usize },
}

pub fn generate_points(domain: &CubeDomain, spec: &GeneratorSpec) -> Result<PointSet> {
    match *spec {
        GeneratorSpec::Grid { spacing } => grid_points(domain, spacing),
        GeneratorSpec::Jittered { spacing, seed } => jittered_points(domain, spacing, seed),
        GeneratorSpec::Halton { count } => halton_points(domain, count),
    }
}

/// Cells per axis for a partition of `side` into cells of side `delta`
/// (the last cell may be smaller).
fn cells_per_axis(side: f64, delta: f64) -> usize {
    ((side / delta) * (1.0 - 1e-12)).ceil().max(1.0) as usize
}

pub fn grid_points(domain: &CubeDomain, spacing: f64) -> Result<PointSet> {
    if !spacing.is_finite() || spacing <= 0.0 {
        return Err(Error::Domain(format!("spacing must be > 0, got {spacing}")));
    }
    let steps = cells_per_axis(domain.side(), spacing);
    let per_axis = steps + 1;
    let dim = domain.dim();
    let total = per_axis
        .checked_pow(dim as u32)
        .filter(|&t| t <= 20_000_000);
    let total = total.ok_or_else(|| Error::Precondition("grid would exceed 2e7 points".into()))?;
    let mut coords = Vec::with_capacity(total * dim);
    let mut idx = vec![0usize; dim];
    loop {
        for (a, &i) in idx.iter().enumerate() {
            coords.push(domain.lower()[a] + domain.side() * (i as f64 / steps as f64));
        }
        if !advance(&mut idx, per_axis) {
            break;
        }
    }
    PointSet::new(dim, coords)?.with_domain(domain.clone())
}

pub fn jittered_points(domain: &CubeDomain, spacing: f64, seed: u64) -> Result<PointSet> {
    if !spacing.is_finite() || spacing <= 0.0 {
        return Err(Error::Domain(format!("spacing must be > 0, got {spacing}")));
    }
    let q = cells_per_axis(domain.side(), spacing);
    let dim = domain.dim();
    let total = q.checked_pow(dim as u32).filter(|&t| t <= 20_000_000);
    let total =
        total.ok_or_else(|| Error::Precondition("jitter grid would exceed 2e7 points".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coords = Vec::with_capacity(total * dim);
    let mut idx = vec![0usize; dim];
    loop {
        for (a, &i) in idx.iter().enumerate() {
            let lo = domain.lower()[a] + spacing * i as f64;
            let hi = (lo + spacing).min(domain.lower()[a] + domain.side());
            let u: f64 = rng.random_range(0.0..1.0);
            coords.push(lo + u * (hi - lo));
        }
        if !advance(&mut idx, q) {
            break;
        }
    }
    PointSet::new(dim, coords)?.with_domain(domain.clone())
}

pub fn halton_points(domain: &CubeDomain, count: usize) -> Result<PointSet> {
    if count == 0 {
        return Err(Error::Domain("halton count must be >= 1".into()));
    }
    let dim = domain.dim();
    let bases = first_primes(dim);
    let mut coords = Vec::with_capacity(count * dim);
    for i in 1..=count {
        for (a, &b) in bases.iter().enumerate() {
            coords.push(domain.lower()[a] + domain.side() * radical_inverse(i, b));
        }
    }
    PointSet::new(dim, coords)?.with_domain(domain.clone())
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

fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let b = base as f64;
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= b;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

fn first_primes(count: usize) -> Vec<usize> {
    let mut primes = Vec::with_capacity(count);
    let mut candidate = 2usize;
    while primes.len() < count {
        if primes.iter().all(|&p| !candidate.is_multiple_of(p)) {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

/// Rigorous bracket for the fill distance `d(E, X) = sup_y inf_x |y - x|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FillDistance {
    /// Max nearest-neighbor distance over the probe grid (never above the
    /// true fill distance).
    pub lower: f64,
    /// `lower` plus the probe grid's covering radius; never below the true
    /// fill distance. Certified bounds must be evaluated at this value.
    pub upper: f64,
}

/// Bracket the fill distance with a regular probe grid of `resolution`
/// points per axis. The bracket width is the probe covering radius
/// `(sqrt(dim)/2) * side/(resolution - 1)`, so it shrinks like
/// `1/resolution`.
pub fn fill_distance(
    domain: &CubeDomain,
    points: &PointSet,
    resolution: usize,
) -> Result<FillDistance> {
    if points.is_empty() {
        return Err(Error::Domain("fill_distance of an empty set".into()));
    }
    if points.dim() != domain.dim() {
        return Err(Error::InvalidArgument("dimension mismatch".into()));
    }
    if resolution < 2 {
        return Err(Error::Domain(format!(
            "resolution must be >= 2 probe points per axis, got {resolution}"
        )));
    }
    let dim = domain.dim();
    if dim > 16 {
        return Err(Error::Precondition(
            "fill_distance probe grid supports dim <= 16".into(),
        ));
    }
    let total = resolution
        .checked_pow(dim as u32)
        .filter(|&t| t <= 50_000_000)
        .ok_or_else(|| Error::Precondition("probe grid would exceed 5e7 points".into()))?;
    let step = domain.side() / (resolution - 1) as f64;

    let lower = par::max_reduce(total, |flat| {
        let mut probe = [0.0f64; 16];
        let probe = &mut probe[..dim];
        let mut rem = flat;
        for a in (0..dim).rev() {
            probe[a] = domain.lower()[a] + step * (rem % resolution) as f64;
            rem /= resolution;
        }
        let mut best = f64::INFINITY;
        for p in points.iter() {
            let d2: f64 = p
                .iter()
                .zip(probe.iter())
                .map(|(&a, &b)| (a - b) * (a - b))
                .sum();
            if d2 < best {
                best = d2;
            }
        }
        best.sqrt()
    });
    let covering_radius = 0.5 * (dim as f64).sqrt() * step;
    Ok(FillDistance {
        lower,
        upper: lower + covering_radius,
    })
}

/// Result of the subcube-coverage hypothesis check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coverage {
    pub pass: bool,
    /// Lexicographic index of the first empty cell, if any.
    pub first_empty_cell: Option<usize>,
    pub cells_per_axis: usize,
}

/// Does every cell of the `ceil(side/delta)^dim` partition (last cell per
/// axis possibly smaller, which only strengthens the hypothesis) contain a
/// point of `X`?
///
/// Each point is assigned to exactly one cell (half-open boxes, the last one
/// closed), so a point on a shared face witnesses only the upper cell. That
/// is the conservative reading: a pass here implies every *closed* subcube
/// contains a point, which is the hypothesis certified bounds rely on; a
/// borderline configuration may fail even though boundary points would cover
/// the closed cells, never the other way around.
pub fn subcube_coverage(domain: &CubeDomain, delta: f64, points: &PointSet) -> Result<Coverage> {
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::Domain(format!("delta must be > 0, got {delta}")));
    }
    if delta > domain.side() * (1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "delta {delta} exceeds the cube side {}",
            domain.side()
        )));
    }
    if !points.is_empty() && points.dim() != domain.dim() {
        return Err(Error::InvalidArgument("dimension mismatch".into()));
    }
    let dim = domain.dim();
    let q = cells_per_axis(domain.side(), delta);
    let total = q
        .checked_pow(dim as u32)
        .filter(|&t| t <= 50_000_000)
        .ok_or_else(|| Error::Precondition("coverage partition would exceed 5e7 cells".into()))?;
    let mut occupied = vec![false; total];

    'points: for p in points.iter() {
        let mut flat = 0usize;
        for (&x, &lo) in p.iter().zip(domain.lower()) {
            let t = (x - lo) / delta;
            if t < 0.0 || t > q as f64 {
                continue 'points; // numerically outside the partition
            }
            flat = flat * q + (t.floor() as usize).min(q - 1);
        }
        occupied[flat] = true;
    }

    let first_empty_cell = occupied.iter().position(|&o| !o);
    Ok(Coverage {
        pass: first_empty_cell.is_none(),
        first_empty_cell,
        cells_per_axis: q,
    })
}
