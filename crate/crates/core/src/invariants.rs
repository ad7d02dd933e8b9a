//! Maximal contact values, Puiseux exponents and curvette intersections of
//! divisorial valuations.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cluster::{graph_shape, DualGraph, GraphShape, ProximityCluster};
use crate::error::{Error, Result};
use crate::scalar::{int_vec_serde, rat_int, rat_serde, rat_vec_serde, Int, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalContactData {
    /// `β̄_0..β̄_{g+1}`.
    #[serde(with = "int_vec_serde")]
    pub betabar: Vec<Int>,
    /// `e_0..e_g`.
    #[serde(with = "int_vec_serde")]
    pub e: Vec<Int>,
    /// `n_1..n_g`.
    #[serde(with = "int_vec_serde")]
    pub n_factors: Vec<Int>,
    pub g: usize,
    #[serde(with = "rat_serde")]
    pub volume: Rat,
}

impl MaximalContactData {
    /// Derives the gcd ladder and volume from `β̄_0..β̄_{g+1}`.
    pub fn from_betabar(betabar: Vec<Int>) -> Result<Self> {
        if betabar.len() < 2 || betabar.iter().any(|b| !b.is_positive()) {
            return Err(Error::NotAMultiplicitySequence(
                "maximal contact values must be at least two positive integers".into(),
            ));
        }
        let g = betabar.len() - 2;
        let mut e = vec![betabar[0].clone()];
        for j in 1..=g {
            let next = e[j - 1].gcd(&betabar[j]);
            if next >= e[j - 1] {
                return Err(Error::NotAMultiplicitySequence(format!(
                    "gcd ladder does not drop at j = {j}"
                )));
            }
            e.push(next);
        }
        let n_factors = (1..=g).map(|j| &e[j - 1] / &e[j]).collect();
        let volume = Rat::new(Int::one(), betabar[g + 1].clone());
        Ok(Self {
            betabar,
            e,
            n_factors,
            g,
            volume,
        })
    }

    /// `β̄_{g+1}`, the inverse of the volume.
    pub fn last(&self) -> &Int {
        &self.betabar[self.g + 1]
    }

    /// `e_j`, with `e_{-1}` read as 0.
    pub fn e_at(&self, j: isize) -> Int {
        if j < 0 {
            Int::zero()
        } else {
            self.e[j as usize].clone()
        }
    }

    /// `n_j` with `n_0 = 1`.
    pub fn n_at(&self, j: usize) -> Int {
        if j == 0 {
            Int::one()
        } else {
            self.n_factors[j - 1].clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PuiseuxExponents {
    /// `β′_1..β′_{g+1}`.
    #[serde(with = "rat_vec_serde")]
    pub beta_prime: Vec<Rat>,
    /// Continued fraction `[a_0, ..., a_s]` of each `β′_j`.
    pub cf: Vec<Vec<u64>>,
}

pub fn curvette_multiplicities(cluster: &ProximityCluster, k: usize) -> Result<Vec<Int>> {
    cluster.multiplicity_sequence(k)
}

fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Intersection multiplicity of the curvettes of `p_n` and `p_k`.
pub fn curvette_value(cluster: &ProximityCluster, n: usize, k: usize) -> Result<Int> {
    let a = cluster.multiplicity_sequence(n)?;
    let b = cluster.multiplicity_sequence(k)?;
    Ok(dot(&a, &b))
}

pub fn maximal_contact_values(cluster: &ProximityCluster, n: usize) -> Result<MaximalContactData> {
    let c = cluster.truncate(n)?;
    let graph = c.dual_graph(n)?;
    let shape = graph_shape(&graph, &c)?;
    let m = c.multiplicity_sequence(n)?;
    Ok(contact_from_parts(&c, &m, &shape))
}

fn contact_from_parts(c: &ProximityCluster, m: &[Int], shape: &GraphShape) -> MaximalContactData {
    let g = shape.puiseux_pair_count;
    let mut betabar = vec![m[0].clone()];
    for j in 1..=g {
        let l = shape.dead_ends[j - 1];
        let ml = c.multiplicity_sequence(l).expect("dead end inside cluster");
        betabar.push(dot(m, &ml));
    }
    betabar.push(dot(m, m));
    MaximalContactData::from_betabar(betabar).expect("valid cluster gives valid contact data")
}

/// Continued fraction of a positive rational by Euclid's algorithm.
pub fn continued_fraction(x: &Rat) -> Vec<u64> {
    let mut p = x.numer().clone();
    let mut q = x.denom().clone();
    let mut out = Vec::new();
    while !q.is_zero() {
        let (a, r) = p.div_rem(&q);
        out.push(u64::try_from(&a).expect("partial quotient fits in u64"));
        p = q;
        q = r;
    }
    out
}

pub fn cf_value(cf: &[u64]) -> Rat {
    let mut acc: Option<Rat> = None;
    for &a in cf.iter().rev() {
        let a = Rat::from_integer(Int::from(a));
        acc = Some(match acc {
            None => a,
            Some(t) => a + t.recip(),
        });
    }
    acc.unwrap_or_else(Rat::zero)
}

pub fn puiseux_exponents(mc: &MaximalContactData) -> PuiseuxExponents {
    let beta_prime: Vec<Rat> = (1..=mc.g + 1)
        .map(|j| {
            let num = &mc.betabar[j] - mc.n_at(j - 1) * &mc.betabar[j - 1];
            Rat::one() + Rat::new(num, mc.e[j - 1].clone())
        })
        .collect();
    let cf = beta_prime.iter().map(continued_fraction).collect();
    PuiseuxExponents { beta_prime, cf }
}

/// Inverse of [`maximal_contact_values`]: the multiplicity sequence of the
/// divisorial valuation with the given maximal contact values.
pub fn multiplicities_from_betabar(betabar: &[Int]) -> Result<Vec<Int>> {
    let mc = MaximalContactData::from_betabar(betabar.to_vec())?;
    let bad = |why: &str| Error::NotAMultiplicitySequence(why.to_string());
    if !mc.e[mc.g].is_one() {
        return Err(bad("gcd of the maximal contact values must be 1"));
    }
    let px = puiseux_exponents(&mc);
    let mut m: Vec<Int> = Vec::new();
    for j in 1..=mc.g {
        let e = &mc.e[j - 1];
        let top = &px.beta_prime[j - 1] * rat_int(e);
        if !top.is_integer() || px.beta_prime[j - 1] <= Rat::one() {
            return Err(bad("Puiseux exponent inconsistent with the gcd ladder"));
        }
        let (mut a, mut b) = (top.to_integer(), e.clone());
        let mut first = true;
        while !b.is_zero() {
            let (q, r) = a.div_rem(&b);
            let mut count = q;
            // Later pairs start at the star vertex of the previous one.
            if first && j > 1 {
                count -= 1;
            }
            first = false;
            let mut k = Int::zero();
            while k < count {
                m.push(b.clone());
                k += 1;
            }
            a = b;
            b = r;
        }
    }
    let tail = &px.beta_prime[mc.g];
    if !tail.is_integer() || tail < &Rat::one() {
        return Err(bad("last Puiseux exponent must be a positive integer"));
    }
    let tail = tail.to_integer();
    if mc.g == 0 {
        m.push(Int::one());
    }
    let mut k = Int::one();
    while k < tail {
        m.push(Int::one());
        k += 1;
    }
    Ok(m)
}

/// Reconstructs the cluster of centers from maximal contact values.
pub fn cluster_from_betabar(betabar: &[Int]) -> Result<ProximityCluster> {
    let m = multiplicities_from_betabar(betabar)?;
    let c = ProximityCluster::from_multiplicities(&m)?;
    let mc = maximal_contact_values(&c, c.len())?;
    if mc.betabar != betabar {
        return Err(Error::NotAMultiplicitySequence(
            "maximal contact values are not realised by any cluster".into(),
        ));
    }
    Ok(c)
}

/// Invariants of every divisorial valuation `ν_k`, `k ≤ n`, of a cluster.
#[derive(Clone, Debug)]
pub struct PrefixData {
    pub mults: Vec<Int>,
    pub contact: MaximalContactData,
    pub shape: GraphShape,
}

/// Cached per-prefix data used to evaluate curvette intersections.
#[derive(Clone, Debug)]
pub struct ValuationTable {
    cluster: ProximityCluster,
    graph: DualGraph,
    prefixes: Vec<PrefixData>,
}

impl ValuationTable {
    pub fn new(cluster: &ProximityCluster) -> Result<Self> {
        let n = cluster.len();
        let mut prefixes = Vec::with_capacity(n);
        for k in 1..=n {
            let c = cluster.truncate(k)?;
            let shape = graph_shape(&c.dual_graph(k)?, &c)?;
            let mults = c.multiplicity_sequence(k)?;
            let contact = contact_from_parts(&c, &mults, &shape);
            prefixes.push(PrefixData {
                mults,
                contact,
                shape,
            });
        }
        Ok(Self {
            cluster: cluster.clone(),
            graph: cluster.dual_graph(n)?,
            prefixes,
        })
    }

    pub fn cluster(&self) -> &ProximityCluster {
        &self.cluster
    }

    pub fn graph(&self) -> &DualGraph {
        &self.graph
    }

    pub fn prefix(&self, k: usize) -> Result<&PrefixData> {
        self.cluster.check_index(k)?;
        Ok(&self.prefixes[k - 1])
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        self.cluster.check_index(i)?;
        self.cluster.check_index(j)?;
        if i >= j {
            return Err(Error::OrderViolation { i, j });
        }
        Ok(())
    }

    /// Largest `m` such that all points of the `m`-th Puiseux pair of `ν_j`
    /// lie among `p_1..p_i`.
    pub fn rho(&self, i: usize, j: usize) -> usize {
        let shape = &self.prefixes[j - 1].shape;
        shape
            .star_vertices
            .iter()
            .take_while(|&&st| st <= i)
            .count()
    }

    /// Whether the pair `(i, j)` falls under the first case of the formula.
    pub fn is_first_case(&self, i: usize, j: usize) -> Result<bool> {
        self.check_pair(i, j)?;
        let rho = self.rho(i, j);
        let shape = &self.prefixes[j - 1].shape;
        let next_dead_end = shape.dead_end(rho + 1).unwrap_or(j);
        Ok(self.cluster.is_free(i) && i < next_dead_end)
    }

    /// `(φ_i, φ_j)` from the maximal contact data of `ν_i` and `ν_j` alone.
    pub fn intersection_formula(&self, i: usize, j: usize) -> Result<Int> {
        let first = self.is_first_case(i, j)?;
        let rho = self.rho(i, j);
        let mi = &self.prefixes[i - 1].contact;
        let mj = &self.prefixes[j - 1].contact;
        let err = || Error::MalformedGraph { vertex: i, degree: rho };
        let e_i = mi.e.get(rho).ok_or_else(err)?;
        let e_j = mj.e.get(rho).ok_or_else(err)?;
        if first {
            let st = if rho == 0 {
                0
            } else {
                self.prefixes[j - 1].shape.star(rho)
            };
            let d = Int::from(i - st);
            let lead = mi.e_at(rho as isize - 1) * &mj.betabar[rho];
            Ok(lead + d * e_i * e_j)
        } else {
            let bj = mj.betabar.get(rho + 1).ok_or_else(err)?;
            let bi = mi.betabar.get(rho + 1).ok_or_else(err)?;
            Ok((e_i * bj).min(e_j * bi))
        }
    }

    /// `β̄_{ρ+1}(ν_i)/e_ρ(ν_i) ≤ β̄_{ρ+1}(ν_j)/e_ρ(ν_j)` compared with `i ≼ j`.
    ///
    /// Returns `(ratio_inequality, precedes)`. On pairs in the second case
    /// of the formula the two agree.
    pub fn monotonicity(&self, i: usize, j: usize) -> Result<(bool, bool)> {
        self.check_pair(i, j)?;
        let rho = self.rho(i, j);
        let mi = &self.prefixes[i - 1].contact;
        let mj = &self.prefixes[j - 1].contact;
        let err = || Error::MalformedGraph { vertex: i, degree: rho };
        let li = Rat::new(
            mi.betabar.get(rho + 1).ok_or_else(err)?.clone(),
            mi.e.get(rho).ok_or_else(err)?.clone(),
        );
        let lj = Rat::new(
            mj.betabar.get(rho + 1).ok_or_else(err)?.clone(),
            mj.e.get(rho).ok_or_else(err)?.clone(),
        );
        Ok((li <= lj, self.graph.precedes(i, j)))
    }
}

/// Closed-form intersection multiplicity of the curvettes of `p_i` and `p_j`,
/// `i < j`.
pub fn intersection_formula(cluster: &ProximityCluster, i: usize, j: usize) -> Result<Int> {
    cluster.check_index(i)?;
    cluster.check_index(j)?;
    if i >= j {
        return Err(Error::OrderViolation { i, j });
    }
    ValuationTable::new(&cluster.truncate(j)?)?.intersection_formula(i, j)
}

/// Number of maximal runs of equal values.
pub fn run_count(values: &[Int]) -> usize {
    if values.is_empty() {
        return 0;
    }
    1 + values.windows(2).filter(|w| w[0] != w[1]).count()
}
