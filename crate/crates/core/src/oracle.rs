//! Brute-force cross-checks and seeded random inputs for the property suites.
//!
//! Nothing here calls the closed formulas it is meant to check.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cluster::ProximityCluster;
use crate::error::{Error, Result};
use crate::flagval::{BranchSpec, CurveSpec, ExceptionalValuation, FlagSpec};
use crate::scalar::{ExactScalar, Int, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClusterGenSpec {
    pub max_points: usize,
    /// Probability `num/den` that a point with a legal satellite target is
    /// satellite.
    pub satellite_probability: (u32, u32),
    pub seed: u64,
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn bernoulli(rng: &mut impl Rng, (num, den): (u32, u32)) -> bool {
    den > 0 && rng.gen_range(0..den) < num
}

/// Satellite targets allowed for the point following the current last one.
pub fn legal_targets(c: &ProximityCluster) -> Vec<usize> {
    let n = c.len();
    let mut t = Vec::new();
    if n >= 2 {
        t.push(n - 1);
    }
    if let Some(s) = c.satellite_of(n) {
        t.push(s);
    }
    t
}

/// Appends `count` random points to `c`.
pub fn grow(c: &mut ProximityCluster, count: usize, p: (u32, u32), rng: &mut impl Rng) {
    for _ in 0..count {
        let targets = legal_targets(c);
        let sat = if !targets.is_empty() && bernoulli(rng, p) {
            targets.choose(rng).copied()
        } else {
            None
        };
        c.push(sat).expect("legal target");
    }
}

pub fn random_cluster(spec: &ClusterGenSpec) -> ProximityCluster {
    let mut rng = rng_from_seed(spec.seed);
    random_cluster_with(&mut rng, spec.max_points, spec.satellite_probability)
}

pub fn random_cluster_with(
    rng: &mut impl Rng,
    max_points: usize,
    p: (u32, u32),
) -> ProximityCluster {
    let n = rng.gen_range(1..=max_points.max(1));
    let mut c = ProximityCluster::free_chain(1);
    grow(&mut c, n - 1, p, rng);
    c
}

/// Multiplicities `m_1..m_n` solved directly from the raw satellite list.
pub fn oracle_multiplicities(c: &ProximityCluster, n: usize) -> Vec<Int> {
    let sat = c.satellites();
    let mut m = vec![Int::zero(); n + 1];
    for i in (1..=n).rev() {
        if i == n {
            m[i] = Int::one();
            continue;
        }
        let mut s = Int::zero();
        for k in (i + 1)..=n {
            if k == i + 1 || sat[k - 1] == Some(i) {
                s += &m[k];
            }
        }
        m[i] = s;
    }
    m.split_off(1)
}

/// Noether's formula: the dot product of the two curvette multiplicity
/// sequences over the shared points.
pub fn noether_intersection_oracle(c: &ProximityCluster, i: usize, j: usize) -> Int {
    let a = oracle_multiplicities(c, i);
    let b = oracle_multiplicities(c, j);
    a.iter().zip(&b).map(|(x, y)| x * y).sum()
}

/// Dual graph edges straight from the separation rule: `{i, j}` is an edge
/// iff `p_j → p_i` and no `p_k` is proximate to both.
pub fn brute_force_dual_edges(c: &ProximityCluster, n: usize) -> Vec<(usize, usize)> {
    let prox = |a: usize, b: usize| c.is_proximate(a, b);
    let mut out = Vec::new();
    for j in 1..=n {
        for i in 1..j {
            if prox(j, i) && !(1..=n).any(|k| prox(k, i) && prox(k, j)) {
                out.push((i, j));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Exact shoelace area of a simple polygon.
pub fn polygon_area(vertices: &[Point]) -> Result<ExactScalar> {
    if vertices.len() < 3 {
        return Err(Error::DegeneratePolygon(format!(
            "{} vertices",
            vertices.len()
        )));
    }
    let mut twice = ExactScalar::zero();
    for k in 0..vertices.len() {
        let a = &vertices[k];
        let b = &vertices[(k + 1) % vertices.len()];
        twice = twice.try_add(&a.x.try_mul(&b.y)?.try_sub(&a.y.try_mul(&b.x)?)?)?;
    }
    if twice.is_zero() {
        return Err(Error::DegeneratePolygon("zero area".into()));
    }
    Ok(twice.abs().scale(&crate::scalar::rat(1, 2)))
}

/// A random cluster of at least two points with a random flag on it.
pub fn random_flag(
    rng: &mut impl Rng,
    max_points: usize,
    p: (u32, u32),
    satellite_q: Option<bool>,
) -> (ProximityCluster, FlagSpec) {
    let mut c = random_cluster_with(rng, max_points.max(2), p);
    if c.len() < 2 {
        grow(&mut c, 1, p, rng);
    }
    let r = c.len();
    let sat = satellite_q.unwrap_or_else(|| rng.gen_bool(0.5));
    let flag = if sat {
        let mut etas = vec![r - 1];
        if let Some(s) = c.satellite_of(r) {
            etas.push(s);
        }
        FlagSpec::satellite(r, *etas.choose(rng).expect("nonempty"))
    } else {
        FlagSpec::free(r)
    };
    (c, flag)
}

/// A branch sharing `p_1..p_{i0}` with the flag's infinite cluster and then
/// leaving it; its multiplicities are those of a curvette of a random
/// continuation, restricted to the shared points.
pub fn random_branch(val: &ExceptionalValuation, rng: &mut impl Rng) -> BranchSpec {
    let r = val.r();
    let i0 = rng.gen_range(1..=r + 3);
    let ext = val.extended_cluster(i0 + 1).expect("extension");
    let mut c = ext.truncate(i0).expect("prefix");
    let taken = ext.satellite_of(i0 + 1);
    let mut options: Vec<Option<usize>> = vec![None];
    options.extend(legal_targets(&c).into_iter().filter(|&t| Some(t) != taken).map(Some));
    c.push(*options.choose(rng).expect("free point always available"))
        .expect("legal target");
    let extra = rng.gen_range(0..4);
    grow(&mut c, extra, (1, 2), rng);
    let m = c.multiplicity_sequence(c.len()).expect("valid cluster");
    BranchSpec::new(m[..i0].to_vec())
}

pub fn random_curve(val: &ExceptionalValuation, rng: &mut impl Rng, branches: usize) -> CurveSpec {
    let branches: Vec<BranchSpec> = (0..branches.max(1)).map(|_| random_branch(val, rng)).collect();
    let mut degree: Int = branches.iter().map(|b| b.mults[0].clone()).sum();
    degree += Int::from(rng.gen_range(0..3u32));
    CurveSpec { degree, branches }
}

/// Input for the non-positive at infinity suites.
#[derive(Clone, Debug)]
pub struct NpiInput {
    pub cluster: ProximityCluster,
    pub flag: FlagSpec,
    pub line_support: Vec<usize>,
}

fn npi_values(c: &ProximityCluster, s: usize) -> (Int, Int) {
    let m = oracle_multiplicities(c, c.len());
    let v: Int = m[..s].iter().sum();
    let b: Int = m.iter().map(|x| x * x).sum();
    (v, b)
}

/// Searches for a random flag whose divisorial valuation is non-positive at
/// infinity for the line through `p_1..p_s`. With `minimal` set, only
/// inputs with `ν_r(v)² = β̄_{g+1}(ν_r)` are returned.
pub fn random_npi(rng: &mut impl Rng, max_points: usize, minimal: bool) -> NpiInput {
    loop {
        let s = rng.gen_range(2..=3usize);
        let mut c = ProximityCluster::free_chain(s);
        let extra = rng.gen_range(0..=max_points.saturating_sub(s));
        let p = if minimal { (1, 4) } else { (2, 3) };
        grow(&mut c, extra, p, rng);
        let (v, b) = npi_values(&c, s);
        let vv = &v * &v;
        let ok = if minimal { vv == b } else { vv >= b };
        if !ok || c.len() < s {
            continue;
        }
        let r = c.len();
        let mut etas = vec![None, Some(r - 1)];
        if let Some(t) = c.satellite_of(r) {
            etas.push(Some(t));
        }
        let flag = match *etas.choose(rng).expect("nonempty") {
            None => FlagSpec::free(r),
            Some(eta) => FlagSpec::satellite(r, eta),
        };
        return NpiInput {
            cluster: c,
            flag,
            line_support: (1..=s).collect(),
        };
    }
}

/// The vertex set of a polygon, for order-insensitive comparison.
pub fn vertex_set(vertices: &[Point]) -> BTreeSet<String> {
    vertices.iter().map(|p| p.to_string()).collect()
}

/// Whether `poly` is convex, counterclockwise and without repeated or
/// collinear vertices.
pub fn is_strictly_convex_ccw(poly: &[Point]) -> bool {
    let n = poly.len();
    n >= 3
        && (0..n).all(|k| {
            crate::scalar::cross(&poly[k], &poly[(k + 1) % n], &poly[(k + 2) % n]).is_positive()
        })
}
