//! Proximity clusters of infinitely near points, their multiplicity
//! sequences and dual graphs.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Int;

/// One entry of a raw cluster description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRecord {
    pub id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub satellite_of: Option<usize>,
}

/// A validated simple sequence of point blow-ups.
///
/// Point `i ≥ 2` is always proximate to `i − 1`; only the optional second
/// proximity is stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProximityCluster {
    sat: Vec<Option<usize>>,
}

impl ProximityCluster {
    pub fn validate(points: &[PointRecord]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyCluster);
        }
        for (pos, p) in points.iter().enumerate() {
            if p.id != pos + 1 {
                return Err(Error::NonConsecutiveIds {
                    expected: pos + 1,
                    found: p.id,
                });
            }
        }
        let mut c = Self { sat: Vec::with_capacity(points.len()) };
        for p in points {
            c.push(p.satellite_of)?;
        }
        Ok(c)
    }

    /// Builds a cluster from the satellite targets of points `1..=n`.
    pub fn from_satellites(sat: &[Option<usize>]) -> Result<Self> {
        let records: Vec<PointRecord> = sat
            .iter()
            .enumerate()
            .map(|(i, s)| PointRecord {
                id: i + 1,
                satellite_of: *s,
            })
            .collect();
        Self::validate(&records)
    }

    /// Builds a cluster of `n` points with the listed `(point, target)`
    /// satellite proximities.
    pub fn with_satellites(n: usize, satellites: &[(usize, usize)]) -> Result<Self> {
        let mut sat = vec![None; n];
        for &(i, j) in satellites {
            if i == 0 || i > n {
                return Err(Error::IndexOutOfRange { index: i, len: n });
            }
            sat[i - 1] = Some(j);
        }
        Self::from_satellites(&sat)
    }

    pub fn free_chain(n: usize) -> Self {
        Self { sat: vec![None; n.max(1)] }
    }

    /// Appends a point, checking the proximity rule.
    pub fn push(&mut self, satellite_of: Option<usize>) -> Result<()> {
        let i = self.sat.len() + 1;
        if let Some(j) = satellite_of {
            if j == 0 || j + 1 >= i {
                return Err(Error::SatelliteOfSelfOrLater { point: i, target: j });
            }
            if !self.is_proximate(i - 1, j) {
                return Err(Error::SatelliteTargetInvalid {
                    point: i,
                    target: j,
                    prev: i - 1,
                });
            }
        }
        self.sat.push(satellite_of);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.sat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sat.is_empty()
    }

    pub fn records(&self) -> Vec<PointRecord> {
        self.sat
            .iter()
            .enumerate()
            .map(|(i, s)| PointRecord {
                id: i + 1,
                satellite_of: *s,
            })
            .collect()
    }

    pub fn satellites(&self) -> &[Option<usize>] {
        &self.sat
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.len() {
            Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            })
        } else {
            Ok(())
        }
    }

    pub fn satellite_of(&self, i: usize) -> Option<usize> {
        self.sat.get(i.wrapping_sub(1)).copied().flatten()
    }

    pub fn is_satellite(&self, i: usize) -> bool {
        self.satellite_of(i).is_some()
    }

    pub fn is_free(&self, i: usize) -> bool {
        !self.is_satellite(i)
    }

    /// Whether `p_i → p_j`.
    pub fn is_proximate(&self, i: usize, j: usize) -> bool {
        i >= 2 && (j + 1 == i || self.satellite_of(i) == Some(j))
    }

    /// The points `p_i` is proximate to, in increasing order.
    pub fn proximities(&self, i: usize) -> Vec<usize> {
        let mut v = Vec::new();
        if let Some(j) = self.satellite_of(i) {
            v.push(j);
        }
        if i >= 2 {
            v.push(i - 1);
        }
        v
    }

    /// The points `p_k`, `k ≤ n`, proximate to `p_j`; always consecutive.
    pub fn proximate_points(&self, j: usize, n: usize) -> Vec<usize> {
        ((j + 1)..=n.min(self.len()))
            .filter(|&k| self.is_proximate(k, j))
            .collect()
    }

    pub fn truncate(&self, n: usize) -> Result<Self> {
        self.check_index(n)?;
        Ok(Self {
            sat: self.sat[..n].to_vec(),
        })
    }

    /// `m_1..m_n`: the multiplicities of the curvette of `p_n`, equivalently
    /// the values of the maximal ideals under the divisorial valuation of `E_n`.
    pub fn multiplicity_sequence(&self, n: usize) -> Result<Vec<Int>> {
        self.check_index(n)?;
        let mut m = vec![Int::zero(); n + 1];
        m[n] = Int::one();
        for i in (1..n).rev() {
            let mut s = Int::zero();
            for k in self.proximate_points(i, n) {
                s += &m[k];
            }
            m[i] = if s.is_zero() { Int::one() } else { s };
        }
        m.remove(0);
        Ok(m)
    }

    /// Recovers the cluster from a multiplicity sequence ending in 1.
    pub fn from_multiplicities(m: &[Int]) -> Result<Self> {
        let n = m.len();
        let bad = |why: String| Error::NotAMultiplicitySequence(why);
        if n == 0 {
            return Err(Error::EmptyCluster);
        }
        if !m[n - 1].is_one() {
            return Err(bad("last multiplicity must be 1".into()));
        }
        if m.iter().any(|x| *x < Int::one()) {
            return Err(bad("multiplicities must be positive".into()));
        }
        let mut sat: Vec<Option<usize>> = vec![None; n];
        for i in 1..n {
            // Points proximate to p_i are p_{i+1}, ..., p_{i+k}; their
            // multiplicities must add up to m_i.
            let mut sum = Int::zero();
            let mut k = 0;
            while sum < m[i - 1] && i + k < n {
                k += 1;
                sum += &m[i + k - 1];
            }
            if sum != m[i - 1] {
                return Err(bad(format!("proximity sum fails at point {i}")));
            }
            for p in (i + 2)..=(i + k) {
                if let Some(prev) = sat[p - 1] {
                    return Err(bad(format!(
                        "point {p} would be proximate to both {prev} and {i}"
                    )));
                }
                sat[p - 1] = Some(i);
            }
        }
        let c = Self::from_satellites(&sat).map_err(|e| bad(e.to_string()))?;
        if c.multiplicity_sequence(n)? != m {
            return Err(bad("proximity equalities do not hold".into()));
        }
        Ok(c)
    }

    /// Dual graph of the exceptional divisors `E_1..E_n` on the last surface.
    pub fn dual_graph(&self, n: usize) -> Result<DualGraph> {
        self.check_index(n)?;
        let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        for k in 2..=n {
            edges.insert((k - 1, k));
            if let Some(s) = self.satellite_of(k) {
                // p_k is the intersection point of E_{k-1} and E_s.
                edges.remove(&(s, k - 1));
                edges.insert((s, k));
            }
        }
        Ok(DualGraph::from_edges(n, edges.into_iter().collect()))
    }
}

/// A labelled tree with root 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    parent: Vec<usize>,
    depth: Vec<usize>,
}

impl DualGraph {
    /// `edges` are pairs `(i, j)` with `i < j`, sorted.
    pub fn from_edges(n: usize, mut edges: Vec<(usize, usize)>) -> Self {
        edges.sort_unstable();
        let mut adj = vec![Vec::new(); n + 1];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for v in &mut adj {
            v.sort_unstable();
        }
        let mut parent = vec![0; n + 1];
        let mut depth = vec![usize::MAX; n + 1];
        let mut queue = VecDeque::new();
        if n >= 1 {
            depth[1] = 0;
            queue.push_back(1);
        }
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        Self {
            n,
            edges,
            adj,
            parent,
            depth,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> usize {
        1
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        self.edges.binary_search(&(a, b)).is_ok()
    }

    pub fn is_tree(&self) -> bool {
        self.n >= 1
            && self.edges.len() + 1 == self.n
            && (1..=self.n).all(|v| self.depth[v] != usize::MAX)
    }

    /// Vertices on the path from the root to `v`, root first.
    pub fn root_path(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut x = v;
        while x != 1 {
            x = self.parent[x];
            path.push(x);
        }
        path.reverse();
        path
    }

    /// `a ≼ b`: the path from the root to `b` goes through `a`.
    pub fn precedes(&self, a: usize, b: usize) -> bool {
        let mut x = b;
        loop {
            if x == a {
                return true;
            }
            if x == 1 || self.depth[x] <= self.depth[a] {
                return false;
            }
            x = self.parent[x];
        }
    }

    /// Vertices reachable from `start` without crossing the edge `{a, b}`.
    pub fn component_without_edge(&self, start: usize, a: usize, b: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if (v == a && w == b) || (v == b && w == a) {
                    continue;
                }
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }
}

/// Dead ends, star vertices and Puiseux pair structure of a dual graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphShape {
    /// `ℓ_1..ℓ_g`, followed by `ℓ_{g+1} = n` when the last point is free.
    pub dead_ends: Vec<usize>,
    /// `st_1..st_g`.
    pub star_vertices: Vec<usize>,
    pub puiseux_pair_count: usize,
    pub tail_length: usize,
    /// Vertex to the indices `j ∈ 1..=g` of the pairs `Γ^j` containing it.
    pub pair_membership: BTreeMap<usize, BTreeSet<usize>>,
}

impl GraphShape {
    /// `ℓ_j` for `j ∈ 1..=g+1`, or `None` when `ℓ_{g+1}` does not exist.
    pub fn dead_end(&self, j: usize) -> Option<usize> {
        self.dead_ends.get(j.checked_sub(1)?).copied()
    }

    /// `st_j` for `j ∈ 1..=g`; `st_0` is reported as the root.
    pub fn star(&self, j: usize) -> usize {
        if j == 0 {
            1
        } else {
            self.star_vertices[j - 1]
        }
    }
}

/// Computes the shape of the dual graph of the full cluster.
pub fn graph_shape(graph: &DualGraph, cluster: &ProximityCluster) -> Result<GraphShape> {
    let n = graph.vertex_count();
    if n != cluster.len() {
        return Err(Error::DimensionMismatch {
            left: n,
            right: cluster.len(),
        });
    }
    for v in 1..=n {
        if graph.degree(v) > 3 || (v == 1 && graph.degree(v) > 1) {
            return Err(Error::MalformedGraph {
                vertex: v,
                degree: graph.degree(v),
            });
        }
    }
    if n == 1 {
        return Ok(GraphShape {
            dead_ends: vec![1],
            star_vertices: vec![],
            puiseux_pair_count: 0,
            tail_length: 0,
            pair_membership: BTreeMap::new(),
        });
    }
    let main_path = graph.root_path(n);
    let mut on_main = vec![usize::MAX; n + 1];
    for (pos, &v) in main_path.iter().enumerate() {
        on_main[v] = pos;
    }
    let last_free = cluster.is_free(n);

    // Each dead end off the main path hangs from it at its star vertex.
    let mut hanging: Vec<(usize, usize)> = Vec::new();
    for v in 2..=n {
        if graph.degree(v) != 1 || v == n {
            continue;
        }
        let mut x = v;
        while on_main[x] == usize::MAX {
            let up = graph.parent[x];
            if on_main[up] == usize::MAX && graph.degree(up) != 2 {
                return Err(Error::MalformedGraph {
                    vertex: up,
                    degree: graph.degree(up),
                });
            }
            x = up;
        }
        hanging.push((on_main[x], v));
    }
    hanging.sort_unstable();
    let star_vertices: Vec<usize> = hanging.iter().map(|&(pos, _)| main_path[pos]).collect();
    let mut dead_ends: Vec<usize> = hanging.iter().map(|&(_, v)| v).collect();
    let g = dead_ends.len();

    for (k, &st) in star_vertices.iter().enumerate() {
        let want = if st == n && !last_free { 2 } else { 3 };
        if graph.degree(st) != want || (k > 0 && star_vertices[k - 1] == st) {
            return Err(Error::MalformedGraph {
                vertex: st,
                degree: graph.degree(st),
            });
        }
    }
    let stars3 = (1..=n).filter(|&v| graph.degree(v) == 3).count();
    let expected3 = if last_free { g } else { g.saturating_sub(1) };
    if stars3 != expected3 || (!last_free && star_vertices.last() != Some(&n)) {
        return Err(Error::MalformedGraph {
            vertex: n,
            degree: graph.degree(n),
        });
    }

    let tail_length = if last_free {
        let from = star_vertices.last().map(|&s| on_main[s]).unwrap_or(0);
        dead_ends.push(n);
        main_path.len() - 1 - from
    } else {
        0
    };

    let mut pair_membership: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for j in 1..=g {
        let lo = if j == 1 { 1 } else { star_vertices[j - 2] };
        let hi = dead_ends[j - 1];
        for v in 1..=n {
            if graph.precedes(lo, v) && graph.precedes(v, hi) {
                pair_membership.entry(v).or_default().insert(j);
            }
        }
    }

    Ok(GraphShape {
        dead_ends,
        star_vertices,
        puiseux_pair_count: g,
        tail_length,
        pair_membership,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| int(x)).collect()
    }

    pub(crate) fn enric() -> ProximityCluster {
        ProximityCluster::with_satellites(10, &[(4, 2), (5, 2), (6, 4), (7, 5), (9, 7), (10, 8)])
            .unwrap()
    }

    #[test]
    fn smallest_satellite_cluster() {
        let c = ProximityCluster::with_satellites(3, &[(3, 1)]).unwrap();
        assert_eq!(c.multiplicity_sequence(3).unwrap(), ints(&[2, 1, 1]));
        let g = c.dual_graph(3).unwrap();
        assert_eq!(g.edges(), &[(1, 3), (2, 3)]);
        assert!(!g.precedes(2, 1));
        assert!(g.precedes(3, 2));
    }

    #[test]
    fn proximity_rule_enforced() {
        let e = ProximityCluster::with_satellites(4, &[(4, 1)]).unwrap_err();
        assert_eq!(e.code(), "SatelliteTargetInvalid");
        let e = ProximityCluster::with_satellites(3, &[(3, 2)]).unwrap_err();
        assert_eq!(e.code(), "SatelliteOfSelfOrLater");
        let e = ProximityCluster::with_satellites(2, &[(2, 5)]).unwrap_err();
        assert_eq!(e.code(), "SatelliteOfSelfOrLater");
        let recs = vec![
            PointRecord { id: 1, satellite_of: None },
            PointRecord { id: 3, satellite_of: None },
        ];
        assert_eq!(
            ProximityCluster::validate(&recs).unwrap_err().code(),
            "NonConsecutiveIds"
        );
        assert_eq!(ProximityCluster::validate(&[]).unwrap_err().code(), "EmptyCluster");
    }

    #[test]
    fn enric_multiplicities() {
        let c = enric();
        assert_eq!(
            c.multiplicity_sequence(10).unwrap(),
            ints(&[24, 24, 9, 9, 6, 3, 3, 2, 1, 1])
        );
        let back = ProximityCluster::from_multiplicities(&ints(&[24, 24, 9, 9, 6, 3, 3, 2, 1, 1]))
            .unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn free_chain_basics() {
        let c = ProximityCluster::free_chain(3);
        assert_eq!(c.multiplicity_sequence(3).unwrap(), ints(&[1, 1, 1]));
        let g = c.dual_graph(3).unwrap();
        assert_eq!(g.edges(), &[(1, 2), (2, 3)]);
        assert!(g.precedes(2, 3));
        let s = graph_shape(&g, &c).unwrap();
        assert_eq!(s.dead_ends, vec![3]);
        assert!(s.star_vertices.is_empty());
        assert_eq!(s.tail_length, 2);
        assert!(s.pair_membership.is_empty());
    }

    #[test]
    fn enric_shape() {
        let c = enric();
        let g = c.dual_graph(10).unwrap();
        assert!(g.is_tree());
        let s = graph_shape(&g, &c).unwrap();
        assert_eq!(s.puiseux_pair_count, 2);
        assert_eq!(s.dead_ends, vec![3, 8]);
        assert_eq!(s.star_vertices, vec![7, 10]);
        assert_eq!(s.tail_length, 0);
        assert_eq!(s.pair_membership[&7], BTreeSet::from([1, 2]));
        assert_eq!(s.pair_membership[&3], BTreeSet::from([1]));
        assert_eq!(s.pair_membership[&9], BTreeSet::from([2]));
    }

    #[test]
    fn tail_after_star() {
        let c = ProximityCluster::with_satellites(5, &[(3, 1)]).unwrap();
        let s = graph_shape(&c.dual_graph(5).unwrap(), &c).unwrap();
        assert_eq!(s.dead_ends, vec![2, 5]);
        assert_eq!(s.star_vertices, vec![3]);
        assert_eq!(s.tail_length, 2);
    }

    #[test]
    fn single_point() {
        let c = ProximityCluster::free_chain(1);
        let g = c.dual_graph(1).unwrap();
        assert!(g.is_tree());
        let s = graph_shape(&g, &c).unwrap();
        assert_eq!(s.puiseux_pair_count, 0);
    }

    #[test]
    fn rejects_bad_sequences() {
        assert!(ProximityCluster::from_multiplicities(&ints(&[2, 1])).is_err());
        assert!(ProximityCluster::from_multiplicities(&ints(&[3, 1, 1])).is_err());
        assert!(ProximityCluster::from_multiplicities(&ints(&[3, 2, 1, 1])).is_ok());
        assert!(ProximityCluster::from_multiplicities(&ints(&[1, 2])).is_err());
    }
}
