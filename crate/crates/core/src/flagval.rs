//! Exceptional curve valuations of flags `X_r ⊃ E_r ⊃ {q}`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cluster::{graph_shape, DualGraph, GraphShape, ProximityCluster};
use crate::error::{Error, Result};
use crate::invariants::{maximal_contact_values, MaximalContactData};
use crate::scalar::{ExactScalar, Int, Point, Rat};

/// Position of `q = p_{r+1}` on `E_r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "q", rename_all = "lowercase")]
pub enum QKind {
    Free,
    Satellite { eta: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlagSpec {
    pub r: usize,
    pub q: QKind,
}

impl FlagSpec {
    pub fn free(r: usize) -> Self {
        Self { r, q: QKind::Free }
    }

    pub fn satellite(r: usize, eta: usize) -> Self {
        Self {
            r,
            q: QKind::Satellite { eta },
        }
    }
}

/// A value in `ℤ²` ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairValue {
    pub first: Int,
    pub second: Int,
}

impl PairValue {
    pub fn new(first: Int, second: Int) -> Self {
        Self { first, second }
    }

    pub fn zero() -> Self {
        Self::new(Int::zero(), Int::zero())
    }

    pub fn add(&self, o: &PairValue) -> PairValue {
        PairValue::new(&self.first + &o.first, &self.second + &o.second)
    }

    pub fn scale(&self, k: &Int) -> PairValue {
        PairValue::new(&self.first * k, &self.second * k)
    }
}

impl fmt::Display for PairValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

/// Multiplicities of an analytic branch at the points `p_1, p_2, ...` of the
/// flag's infinite cluster (points past `p_{r+1}` are the satellite points
/// proximate to `p_r`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchSpec {
    pub mults: Vec<Int>,
}

impl BranchSpec {
    pub fn new(mults: Vec<Int>) -> Self {
        Self { mults }
    }

    pub fn from_u64(mults: &[u64]) -> Self {
        Self::new(mults.iter().map(|&m| Int::from(m)).collect())
    }

    /// Largest index with nonzero multiplicity.
    pub fn top(&self) -> usize {
        self.mults.iter().rposition(|m| !m.is_zero()).map_or(0, |p| p + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSpec {
    pub degree: Int,
    pub branches: Vec<BranchSpec>,
}

/// The rank two valuation `ν = ν_{E•}` attached to a flag.
#[derive(Clone, Debug)]
pub struct ExceptionalValuation {
    cluster: ProximityCluster,
    flag: FlagSpec,
    graph: DualGraph,
    shape: GraphShape,
    mults_r: Vec<Int>,
    mults_eta: Vec<Int>,
    contact_r: MaximalContactData,
}

pub fn build_flag(cluster: &ProximityCluster, flag: FlagSpec) -> Result<ExceptionalValuation> {
    ExceptionalValuation::new(cluster, flag)
}

impl ExceptionalValuation {
    pub fn new(cluster: &ProximityCluster, flag: FlagSpec) -> Result<Self> {
        cluster.check_index(flag.r)?;
        let r = flag.r;
        let cluster = cluster.truncate(r)?;
        let graph = cluster.dual_graph(r)?;
        let mults_eta = match flag.q {
            QKind::Free => Vec::new(),
            QKind::Satellite { eta } => {
                if eta == r {
                    return Err(Error::EtaEqualsR { r });
                }
                if eta == 0 || eta > r || !graph.has_edge(eta, r) {
                    return Err(Error::EtaNotAdjacent { eta, r });
                }
                cluster.multiplicity_sequence(eta)?
            }
        };
        let shape = graph_shape(&graph, &cluster)?;
        let mults_r = cluster.multiplicity_sequence(r)?;
        let contact_r = maximal_contact_values(&cluster, r)?;
        Ok(Self {
            cluster,
            flag,
            graph,
            shape,
            mults_r,
            mults_eta,
            contact_r,
        })
    }

    pub fn cluster(&self) -> &ProximityCluster {
        &self.cluster
    }

    pub fn flag(&self) -> FlagSpec {
        self.flag
    }

    pub fn r(&self) -> usize {
        self.flag.r
    }

    pub fn eta(&self) -> Option<usize> {
        match self.flag.q {
            QKind::Free => None,
            QKind::Satellite { eta } => Some(eta),
        }
    }

    pub fn require_eta(&self) -> Result<usize> {
        self.eta().ok_or(Error::FreeFlagHasNoEta)
    }

    pub fn is_satellite(&self) -> bool {
        self.eta().is_some()
    }

    pub fn graph(&self) -> &DualGraph {
        &self.graph
    }

    pub fn shape(&self) -> &GraphShape {
        &self.shape
    }

    pub fn contact_r(&self) -> &MaximalContactData {
        &self.contact_r
    }

    /// `m_i(ν_r)` for `i ≤ r`.
    pub fn mults_r(&self) -> &[Int] {
        &self.mults_r
    }

    /// `m_i(ν_η)` for `i ≤ η` (empty for a free flag).
    pub fn mults_eta(&self) -> &[Int] {
        &self.mults_eta
    }

    /// `β̄_{g+1}(ν_r)`.
    pub fn volume_inverse(&self) -> &Int {
        self.contact_r.last()
    }

    /// Number of Puiseux pairs of `ν`: that of `ν_r` when both `p_r` and `q`
    /// are satellite points, one more otherwise.
    pub fn g_star(&self) -> usize {
        let g = self.contact_r.g;
        if self.is_satellite() && self.cluster.is_satellite(self.r()) {
            g
        } else {
            g + 1
        }
    }

    /// The first `len` points of the flag's infinite cluster.
    pub fn extended_cluster(&self, len: usize) -> Result<ProximityCluster> {
        let r = self.r();
        if len <= r {
            return self.cluster.truncate(len.max(1));
        }
        let mut c = self.cluster.clone();
        c.push(self.eta())?;
        for _ in r + 2..=len {
            c.push(Some(r))?;
        }
        Ok(c)
    }

    /// `ν(𝔪_i)` for `i ≥ 1`.
    pub fn weight(&self, i: usize) -> PairValue {
        let r = self.r();
        let first = if i <= r {
            self.mults_r[i - 1].clone()
        } else {
            Int::zero()
        };
        let second = if i > r {
            Int::one()
        } else {
            self.mults_eta.get(i - 1).cloned().unwrap_or_else(Int::zero)
        };
        PairValue::new(first, second)
    }

    /// Checks the proximity inequalities of a branch and returns its support
    /// length.
    pub fn validate_branch(&self, germ: &BranchSpec) -> Result<usize> {
        let bad = |why: String| Error::BranchInvalid(why);
        let s = germ.top();
        if s == 0 {
            return Err(bad("branch has no positive multiplicity".into()));
        }
        if germ.mults[..s].iter().any(|m| !m.is_positive()) {
            return Err(bad("multiplicities must be a positive prefix followed by zeros".into()));
        }
        let ext = self.extended_cluster(s.max(self.r() + 1))?;
        for i in 1..=s {
            let mut sum = Int::zero();
            for j in ext.proximate_points(i, s) {
                sum += &germ.mults[j - 1];
            }
            if germ.mults[i - 1] < sum {
                return Err(bad(format!(
                    "proximity inequality fails at point {i}: {} < {}",
                    germ.mults[i - 1], sum
                )));
            }
        }
        Ok(s)
    }

    /// `ν(f)` for a germ given by its multiplicities.
    pub fn pair_value(&self, germ: &BranchSpec) -> Result<PairValue> {
        let s = self.validate_branch(germ)?;
        Ok(self.pair_value_unchecked(&germ.mults[..s]))
    }

    fn pair_value_unchecked(&self, mults: &[Int]) -> PairValue {
        let mut acc = PairValue::zero();
        for (k, m) in mults.iter().enumerate() {
            if !m.is_zero() {
                acc = acc.add(&self.weight(k + 1).scale(m));
            }
        }
        acc
    }

    /// Sum of the branch values of a curve.
    pub fn curve_value(&self, curve: &CurveSpec) -> Result<PairValue> {
        if curve.branches.is_empty() {
            return Err(Error::BranchInvalid("curve has no branch".into()));
        }
        if !curve.degree.is_positive() {
            return Err(Error::BranchInvalid("degree must be positive".into()));
        }
        let mut acc = PairValue::zero();
        let mut mult_p = Int::zero();
        for b in &curve.branches {
            acc = acc.add(&self.pair_value(b)?);
            mult_p += &b.mults[0];
        }
        if mult_p > curve.degree {
            return Err(Error::BranchInvalid(format!(
                "multiplicity {mult_p} at p exceeds the degree {}",
                curve.degree
            )));
        }
        Ok(acc)
    }

    /// Value of the curvette of `p_k` in the extended cluster.
    pub fn curvette_pair_value(&self, k: usize) -> Result<PairValue> {
        let ext = self.extended_cluster(k.max(1))?;
        let m = ext.multiplicity_sequence(k)?;
        Ok(self.pair_value_unchecked(&m))
    }

    /// `ν_r(φ_i) = (φ_r, φ_i)` for `i ≤ r`.
    pub fn nu_r_phi(&self, i: usize) -> Result<Int> {
        self.cluster.check_index(i)?;
        let mi = self.cluster.multiplicity_sequence(i)?;
        Ok(mi.iter().zip(&self.mults_r).map(|(a, b)| a * b).sum())
    }

    /// `β̄_j(ν)` for `0 ≤ j ≤ g*`: the value of the curvette of `ℓ_j`
    /// (`ℓ_0 = 1`), and for a free flag `β̄_{g*}(ν)` is the value of the
    /// curvette of `q`.
    pub fn betabar_pair(&self, j: usize) -> Result<PairValue> {
        let gs = self.g_star();
        if j > gs {
            return Err(Error::IndexOutOfRange { index: j, len: gs });
        }
        if j == 0 {
            return Ok(self.weight(1));
        }
        if !self.is_satellite() && j == gs {
            return self.curvette_pair_value(self.r() + 1);
        }
        let l = self
            .shape
            .dead_end(j)
            .ok_or(Error::IndexOutOfRange { index: j, len: gs })?;
        self.curvette_pair_value(l)
    }

    /// `e_j(ν_r)` and `e_j(ν_η)` computed along the values `β̄_0(ν)..β̄_j(ν)`.
    pub fn e_pair(&self, j: usize) -> Result<(Int, Int)> {
        let mut a = Int::zero();
        let mut b = Int::zero();
        for k in 0..=j {
            let v = self.betabar_pair(k)?;
            a = a.gcd(&v.first);
            b = b.gcd(&v.second);
        }
        Ok((a, b))
    }

    /// Slopes `(s_0, s_g)` of the two rays bounding the value cone.
    pub fn slopes(&self) -> Result<(Rat, Rat)> {
        let b = self.volume_inverse();
        if !self.is_satellite() {
            return Ok((Rat::zero(), Rat::new(Int::one(), b.clone())));
        }
        let v0 = self.betabar_pair(0)?;
        let vg = self.betabar_pair(self.g_star())?;
        Ok((
            Rat::new(v0.second, v0.first),
            Rat::new(vg.second, vg.first),
        ))
    }

    /// `β̄_{g+1}(ν_r)·|s_g − s_0|`, which equals 1.
    pub fn slope_gap_identity(&self) -> Result<Rat> {
        let (s0, sg) = self.slopes()?;
        Ok(Rat::from_integer(self.volume_inverse().clone()) * (sg - s0).abs())
    }

    /// `|e_{g*−1}(ν_η)·β̄_{g*}(ν_r) − e_{g*−1}(ν_r)·β̄_{g*}(ν_η)|`, which equals 1.
    pub fn unimodular_determinant(&self) -> Result<Int> {
        self.require_eta()?;
        let gs = self.g_star();
        let (er, ee) = self.e_pair(gs - 1)?;
        let v = self.betabar_pair(gs)?;
        Ok((ee * &v.first - er * &v.second).abs())
    }

    /// The triangle `𝔠(ν) ∩ 𝔥(ν)` cut at `first = μ̂`.
    pub fn value_cone_slice(&self, muhat: &ExactScalar) -> Result<Vec<Point>> {
        if !muhat.is_positive() {
            return Err(Error::NonPositiveMuhat);
        }
        let (s0, sg) = self.slopes()?;
        Ok(vec![
            Point::origin(),
            Point::new(muhat.clone(), muhat.scale(&s0)),
            Point::new(muhat.clone(), muhat.scale(&sg)),
        ])
    }
}

pub fn pair_value(val: &ExceptionalValuation, germ: &BranchSpec) -> Result<PairValue> {
    val.pair_value(germ)
}

pub fn value_cone_slice(val: &ExceptionalValuation, muhat: &ExactScalar) -> Result<Vec<Point>> {
    val.value_cone_slice(muhat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn example1() -> ExceptionalValuation {
        let c = ProximityCluster::with_satellites(12, &[(5, 3), (6, 3), (11, 9), (12, 10)]).unwrap();
        build_flag(&c, FlagSpec::satellite(12, 10)).unwrap()
    }

    #[test]
    fn free_chain_weights() {
        let v = build_flag(&ProximityCluster::free_chain(2), FlagSpec::free(2)).unwrap();
        let w: Vec<PairValue> = (1..=3).map(|i| v.weight(i)).collect();
        assert_eq!(
            w,
            vec![
                PairValue::new(int(1), int(0)),
                PairValue::new(int(1), int(0)),
                PairValue::new(int(0), int(1)),
            ]
        );
    }

    #[test]
    fn cusp_weights() {
        let c = ProximityCluster::with_satellites(3, &[(3, 1)]).unwrap();
        let v = build_flag(&c, FlagSpec::satellite(3, 1)).unwrap();
        let w2: Vec<Int> = (1..=4).map(|i| v.weight(i).second).collect();
        assert_eq!(w2, ints(&[1, 0, 0, 1]));
        assert_eq!(v.slope_gap_identity().unwrap(), rat(1, 1));
        assert_eq!(v.unimodular_determinant().unwrap(), int(1));
    }

    #[test]
    fn flag_errors() {
        let c = ProximityCluster::with_satellites(3, &[(3, 1)]).unwrap();
        assert_eq!(
            build_flag(&c, FlagSpec::satellite(3, 3)).unwrap_err().code(),
            "EtaEqualsR"
        );
        let chain = ProximityCluster::free_chain(4);
        assert_eq!(
            build_flag(&chain, FlagSpec::satellite(4, 2)).unwrap_err().code(),
            "EtaNotAdjacent"
        );
        let v = build_flag(&chain, FlagSpec::free(4)).unwrap();
        assert_eq!(v.unimodular_determinant().unwrap_err().code(), "FreeFlagHasNoEta");
    }

    #[test]
    fn example1_weights_and_values() {
        let v = example1();
        assert_eq!(v.mults_r(), ints(&[9, 9, 9, 3, 3, 3, 3, 3, 3, 2, 1, 1]).as_slice());
        assert_eq!(v.mults_eta(), ints(&[3, 3, 3, 1, 1, 1, 1, 1, 1, 1]).as_slice());
        assert_eq!(v.nu_r_phi(10).unwrap(), int(101));
        assert_eq!(v.g_star(), 2);
        assert_eq!(v.betabar_pair(1).unwrap().first, int(30));
        assert_eq!(v.betabar_pair(2).unwrap().first, int(101));
        let w2: Vec<Int> = (1..=13).map(|i| v.weight(i).second).collect();
        assert_eq!(w2, ints(&[3, 3, 3, 1, 1, 1, 1, 1, 1, 1, 0, 0, 1]));
        assert_eq!(v.slope_gap_identity().unwrap(), rat(1, 1));
        assert_eq!(v.unimodular_determinant().unwrap(), int(1));
    }

    #[test]
    fn free_flag_curvette_of_q() {
        let c = ProximityCluster::with_satellites(3, &[(3, 1)]).unwrap();
        let v = build_flag(&c, FlagSpec::free(3)).unwrap();
        let top = v.betabar_pair(v.g_star()).unwrap();
        assert_eq!(top, PairValue::new(int(6), int(1)));
    }

    #[test]
    fn germ_through_first_point_only() {
        let v = example1();
        let g = BranchSpec::new(ints(&[1]));
        assert_eq!(v.pair_value(&g).unwrap(), PairValue::new(int(9), int(3)));
        let bad = BranchSpec::new(ints(&[1, 2]));
        assert_eq!(v.pair_value(&bad).unwrap_err().code(), "BranchInvalid");
        let gap = BranchSpec::new(ints(&[1, 0, 1]));
        assert_eq!(v.pair_value(&gap).unwrap_err().code(), "BranchInvalid");
    }

    #[test]
    fn cone_slice_rejects_nonpositive() {
        let v = example1();
        assert_eq!(
            v.value_cone_slice(&ExactScalar::zero()).unwrap_err().code(),
            "NonPositiveMuhat"
        );
    }
}
