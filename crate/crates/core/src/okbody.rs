//! Newton-Okounkov bodies of exceptional curve valuations.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cluster::ProximityCluster;
use crate::error::{Error, Result};
use crate::flagval::{CurveSpec, ExceptionalValuation, PairValue};
use crate::invariants::MaximalContactData;
use crate::scalar::{cross, rat_int, rat_to_string, ExactScalar, Int, Point, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Triangle,
    Quadrilateral,
}

/// A convex polygon with exact vertices, listed counterclockwise from the
/// origin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Body {
    pub vertices: Vec<Point>,
    pub shape: Shape,
    pub minimal: bool,
    pub muhat: ExactScalar,
}

impl Body {
    pub fn from_points(points: &[Point], minimal: bool, muhat: ExactScalar) -> Result<Self> {
        let vertices = convex_hull(points)?;
        let shape = match vertices.len() {
            3 => Shape::Triangle,
            4 => Shape::Quadrilateral,
            k => return Err(Error::DegeneratePolygon(format!("hull has {k} vertices"))),
        };
        Ok(Self {
            vertices,
            shape,
            minimal,
            muhat,
        })
    }

    /// Twice the signed area.
    pub fn twice_area(&self) -> ExactScalar {
        let n = self.vertices.len();
        let mut acc = ExactScalar::zero();
        for k in 0..n {
            let a = &self.vertices[k];
            let b = &self.vertices[(k + 1) % n];
            acc = acc + (&a.x * &b.y - &a.y * &b.x);
        }
        acc
    }

    pub fn area(&self) -> ExactScalar {
        self.twice_area().scale(&Rat::new(Int::one(), Int::from(2)))
    }
}

/// Convex hull, counterclockwise, without collinear points, starting at the
/// origin when it is a vertex and at the lowest point otherwise.
pub fn convex_hull(points: &[Point]) -> Result<Vec<Point>> {
    let mut pts = points.to_vec();
    for p in &pts {
        p.x.try_sub(&pts[0].x)?;
        p.y.try_sub(&pts[0].y)?;
    }
    pts.sort_by(|a, b| a.lex_cmp(b));
    pts.dedup();
    if pts.len() < 3 {
        return Err(Error::DegeneratePolygon(format!(
            "{} distinct points",
            pts.len()
        )));
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).signum() <= 0
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).signum() <= 0
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(Error::DegeneratePolygon("all points are collinear".into()));
    }
    if let Some(k) = lower.iter().position(|p| *p == Point::origin()) {
        lower.rotate_left(k);
    }
    Ok(lower)
}

/// Data certifying a supraminimal curve: its branches and value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupraminimalCertificate {
    pub curve: CurveSpec,
    pub value_pair: PairValue,
    /// `ν(f)` second component over the degree.
    pub c: Rat,
    /// `ν_r(f)` over the degree.
    pub mu: Rat,
}

impl SupraminimalCertificate {
    /// Certificate with the value computed from the branch data.
    pub fn from_curve(val: &ExceptionalValuation, curve: CurveSpec) -> Result<Self> {
        let value_pair = val.curve_value(&curve)?;
        let c = Rat::new(value_pair.second.clone(), curve.degree.clone());
        let mu = Rat::new(value_pair.first.clone(), curve.degree.clone());
        Ok(Self {
            curve,
            value_pair,
            c,
            mu,
        })
    }
}

/// Whether `μ̂² = β̄_{g+1}`.
pub fn is_minimal_consistent(mc: &MaximalContactData, muhat: &ExactScalar) -> bool {
    muhat.is_positive() && muhat.square() == ExactScalar::from_int(mc.last())
}

pub fn body_minimal(val: &ExceptionalValuation) -> Result<Body> {
    let muhat = ExactScalar::sqrt_int(val.volume_inverse());
    let tri = val.value_cone_slice(&muhat)?;
    Body::from_points(&tri, true, muhat)
}

pub fn body_nonminimal(val: &ExceptionalValuation, cert: &SupraminimalCertificate) -> Result<Body> {
    let computed = val.curve_value(&cert.curve)?;
    let deg = rat_int(&cert.curve.degree);
    let inconsistent = |claimed: String, computed: String| Error::CertificateInconsistent {
        claimed,
        computed,
    };
    if computed != cert.value_pair {
        return Err(inconsistent(cert.value_pair.to_string(), computed.to_string()));
    }
    let mu = rat_int(&computed.first) / &deg;
    let c = rat_int(&computed.second) / &deg;
    if mu != cert.mu || c != cert.c {
        return Err(inconsistent(
            format!("mu = {}, c = {}", rat_to_string(&cert.mu), rat_to_string(&cert.c)),
            format!("mu = {}, c = {}", rat_to_string(&mu), rat_to_string(&c)),
        ));
    }
    let b = val.volume_inverse();
    let value_sq = &computed.first * &computed.first;
    let bound = &cert.curve.degree * &cert.curve.degree * b;
    if value_sq <= bound {
        return Err(Error::NotSupraminimal {
            value_sq: value_sq.to_string(),
            bound: bound.to_string(),
        });
    }
    let br = rat_int(b);
    let (low, high) = match val.eta() {
        Some(eta) => {
            let phi = rat_int(&val.nu_r_phi(eta)?);
            (phi.clone(), phi + Rat::one())
        }
        None => (Rat::zero(), Rat::one()),
    };
    let q1 = Point::rat(&br / &mu, low / &mu);
    let q2 = Point::rat(&br / &mu, high / &mu);
    let q3 = Point::rat(mu.clone(), c);
    Body::from_points(&[Point::origin(), q1, q2, q3], false, ExactScalar::from_rat(mu))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NpiCheck {
    pub is_npi: bool,
    /// `ν_r(v)`, the value of the line.
    pub nu_v: Int,
}

fn check_support(cluster: &ProximityCluster, r: usize, support: &[usize]) -> Result<()> {
    let bad = |why: &str| Error::LineSupportInvalid(why.to_string());
    if support.len() < 2 {
        return Err(bad("the line must pass through p_1 and p_2"));
    }
    if support.iter().enumerate().any(|(k, &i)| i != k + 1) {
        return Err(bad("support must be 1, 2, ..., s"));
    }
    if support.len() > r {
        return Err(bad("support leaves the cluster"));
    }
    if support.iter().any(|&i| cluster.is_satellite(i)) {
        return Err(bad("a line only passes through free points"));
    }
    Ok(())
}

pub fn check_npi(cluster: &ProximityCluster, r: usize, line_support: &[usize]) -> Result<NpiCheck> {
    if r < 2 {
        return Err(Error::RTooSmall(r));
    }
    cluster.check_index(r)?;
    check_support(cluster, r, line_support)?;
    let m = cluster.multiplicity_sequence(r)?;
    let nu_v: Int = line_support.iter().map(|&i| m[i - 1].clone()).sum();
    let b: Int = m.iter().map(|x| x * x).sum();
    Ok(NpiCheck {
        is_npi: &nu_v * &nu_v >= b,
        nu_v,
    })
}

/// `ν_η(v)`: the second component of the value of the line.
pub fn line_value_eta(val: &ExceptionalValuation, line_support: &[usize]) -> Result<Int> {
    let eta = val.require_eta()?;
    Ok(line_support
        .iter()
        .filter(|&&i| i <= eta)
        .map(|&i| val.mults_eta()[i - 1].clone())
        .sum())
}

/// Whether the satellite non-minimal case takes `ν_r(φ_η)` rather than
/// `ν_r(φ_η) + 1`: `η ≼ r` when the line attaches on the side of the root,
/// and `η ⋠ r` when it attaches on the side of `η`.
pub fn npi_lower_case(val: &ExceptionalValuation, line_support: &[usize], eta: usize) -> bool {
    let s = line_support.len();
    let root_side = graph_class(val, s) == BranchClass::SameAsRoot;
    val.graph().precedes(eta, val.r()) == root_side
}

/// The two nonzero vertices of the body of a non-positive at infinity
/// valuation, by the closed formulas.
pub fn npi_vertices(val: &ExceptionalValuation, line_support: &[usize]) -> Result<(Point, Point)> {
    let chk = check_npi(val.cluster(), val.r(), line_support)?;
    if !chk.is_npi {
        return Err(Error::NotNpi);
    }
    let v = rat_int(&chk.nu_v);
    let b = rat_int(val.volume_inverse());
    let minimal = &v * &v == b;
    let one = Rat::one();
    Ok(match (minimal, val.eta()) {
        (false, None) => (
            Point::rat(&b / &v, &one / &v),
            Point::rat(v.clone(), Rat::zero()),
        ),
        (false, Some(eta)) => {
            let phi = rat_int(&val.nu_r_phi(eta)?);
            let second = if npi_lower_case(val, line_support, eta) {
                phi
            } else {
                phi + &one
            };
            let eta_v = rat_int(&line_value_eta(val, line_support)?);
            (Point::rat(&b / &v, second / &v), Point::rat(v.clone(), eta_v))
        }
        (true, None) => (
            Point::rat(v.clone(), Rat::zero()),
            Point::rat(v.clone(), &one / &v),
        ),
        (true, Some(_)) => (
            Point::rat(v.clone(), (&b - &one) / &v),
            Point::rat(v.clone(), &b / &v),
        ),
    })
}

pub fn body_npi(val: &ExceptionalValuation, line_support: &[usize]) -> Result<Body> {
    let (q2, q3) = npi_vertices(val, line_support)?;
    let chk = check_npi(val.cluster(), val.r(), line_support)?;
    let minimal = &chk.nu_v * &chk.nu_v == *val.volume_inverse();
    Body::from_points(
        &[Point::origin(), q2, q3],
        minimal,
        ExactScalar::from_int(&chk.nu_v),
    )
}

/// Side of the cut `Γ_ν − {η, r}` a branch attaches to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchClass {
    SameAsRoot,
    OppositeRoot,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeClassification {
    pub shape: Shape,
    /// Classes read off the slopes of the branch values.
    pub by_slope: Vec<BranchClass>,
    /// Classes read off the dual graph.
    pub by_graph: Vec<BranchClass>,
}

/// Class of a branch from the position of its last point `p_{i0}`.
pub fn graph_class(val: &ExceptionalValuation, i0: usize) -> BranchClass {
    let r = val.r();
    let same = match val.eta() {
        None => i0 <= r,
        Some(eta) => {
            let start = if i0 > r { eta } else { i0 };
            val.graph()
                .component_without_edge(start, eta, r)
                .contains(&1)
        }
    };
    if same {
        BranchClass::SameAsRoot
    } else {
        BranchClass::OppositeRoot
    }
}

pub fn classify_shape(val: &ExceptionalValuation, curve: &CurveSpec) -> Result<ShapeClassification> {
    if curve.branches.is_empty() {
        return Err(Error::BranchInvalid("curve has no branch".into()));
    }
    let (s0, sg) = val.slopes()?;
    let mut by_slope = Vec::new();
    let mut by_graph = Vec::new();
    for (k, b) in curve.branches.iter().enumerate() {
        let v = val.pair_value(b)?;
        let slope = Rat::new(v.second.clone(), v.first.clone());
        let class = if slope == s0 {
            BranchClass::SameAsRoot
        } else if slope == sg {
            BranchClass::OppositeRoot
        } else {
            return Err(Error::BranchSlopeUnrecognized { branch: k });
        };
        let g = graph_class(val, b.top());
        if g != class {
            return Err(Error::ClassificationMismatch { branch: k });
        }
        by_slope.push(class);
        by_graph.push(g);
    }
    let shape = if by_slope.iter().all(|c| *c == by_slope[0]) {
        Shape::Triangle
    } else {
        Shape::Quadrilateral
    };
    Ok(ShapeClassification {
        shape,
        by_slope,
        by_graph,
    })
}

/// 2×2 rational matrix acting on row vectors: `(x, y) ↦ (x, y)·A`.
pub type Matrix2 = [[Rat; 2]; 2];

/// The matrix taking `ν` to its normalised equivalent valuation `ν′`.
pub fn normalization_matrix(val: &ExceptionalValuation) -> Result<Matrix2> {
    let v0 = val.betabar_pair(0)?;
    let b0r = rat_int(&v0.first);
    if val.eta().is_none() {
        return Ok([
            [b0r.recip(), Rat::zero()],
            [Rat::zero(), Rat::one()],
        ]);
    }
    let vg = val.betabar_pair(val.g_star())?;
    let delta = rat_int(&(&vg.first * &v0.second - &vg.second * &v0.first));
    Ok([
        [b0r.recip(), rat_int(&v0.second) / &delta],
        [Rat::zero(), -(&b0r / &delta)],
    ])
}

pub fn det(a: &Matrix2) -> Rat {
    &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0]
}

pub fn apply(a: &Matrix2, p: &Point) -> Point {
    Point {
        x: p.x.scale(&a[0][0]) + p.y.scale(&a[1][0]),
        y: p.x.scale(&a[0][1]) + p.y.scale(&a[1][1]),
    }
}

pub fn apply_pair(a: &Matrix2, v: &PairValue) -> (Rat, Rat) {
    let x = rat_int(&v.first);
    let y = rat_int(&v.second);
    (
        &x * &a[0][0] + &y * &a[1][0],
        &x * &a[0][1] + &y * &a[1][1],
    )
}

/// The body of the normalised valuation `ν′`.
pub fn normalize(val: &ExceptionalValuation, body: &Body) -> Result<Body> {
    let a = normalization_matrix(val)?;
    let pts: Vec<Point> = body.vertices.iter().map(|p| apply(&a, p)).collect();
    Body::from_points(&pts, body.minimal, body.muhat.clone())
}

/// Vertices of the normalised body by the closed formulas, for comparison
/// with [`normalize`]. The last vertex of the non-minimal body is returned
/// with its second coordinate `α` read from the image of `(μ̂, c)`.
pub fn normalized_closed_form(val: &ExceptionalValuation, body: &Body) -> Result<Vec<Point>> {
    let v0 = val.betabar_pair(0)?;
    let b0 = rat_int(&v0.first);
    let gs = val.g_star();
    let mu = &body.muhat;
    if body.minimal {
        let bg = rat_int(&val.betabar_pair(gs)?.first);
        return Ok(vec![
            Point::origin(),
            Point::new(mu.scale(&b0.recip()), ExactScalar::zero()),
            Point::new(mu.scale(&b0.recip()), mu.scale(&bg.recip())),
        ]);
    }
    let b = rat_int(val.volume_inverse());
    let (er, _) = val.e_pair(gs - 1)?;
    let inv = &ExactScalar::one() / mu;
    let x = inv.scale(&(&b / &b0));
    let top = Point::new(x.clone(), inv.scale(&rat_int(&er)));
    let bottom = Point::new(x, ExactScalar::zero());
    let a = normalization_matrix(val)?;
    let q3 = body
        .vertices
        .iter()
        .find(|p| p.x == *mu)
        .cloned()
        .ok_or_else(|| Error::DegeneratePolygon("no vertex at first = mu".into()))?;
    let image = apply(&a, &q3);
    Ok(vec![Point::origin(), bottom, image, top])
}

/// `ν′(𝔪_r)` and the value it is expected to take,
/// `(1/β̄_0(ν_r), ±e_{g*−1}(ν_η))` with sign `+` iff `η ≼ r`.
pub fn normalized_max_ideal(val: &ExceptionalValuation) -> Result<((Rat, Rat), (Rat, Rat))> {
    let eta = val.require_eta()?;
    let a = normalization_matrix(val)?;
    let got = apply_pair(&a, &val.weight(val.r()));
    let b0 = rat_int(&val.betabar_pair(0)?.first);
    let (_, ee) = val.e_pair(val.g_star() - 1)?;
    let sign = if val.graph().precedes(eta, val.r()) {
        Rat::one()
    } else {
        -Rat::one()
    };
    Ok((got, (b0.recip(), sign * rat_int(&ee))))
}

/// Whether every point of `body` lies in the triangle `tri` (counterclockwise
/// or clockwise) and every side of `tri` carries a point of `body`.
pub fn inscribed_in(body: &Body, tri: &[Point]) -> bool {
    let orient = cross(&tri[0], &tri[1], &tri[2]).signum();
    if orient == 0 {
        return false;
    }
    let side = |k: usize, p: &Point| {
        orient * cross(&tri[k], &tri[(k + 1) % 3], p).signum()
    };
    let inside = body
        .vertices
        .iter()
        .all(|p| (0..3).all(|k| side(k, p) >= 0));
    let touches = (0..3).all(|k| body.vertices.iter().any(|p| side(k, p) == 0));
    inside && touches
}

/// Compares two vertex lists as sets.
pub fn same_vertices(a: &[Point], b: &[Point]) -> bool {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(|p, q| p.lex_cmp(q));
    y.sort_by(|p, q| p.lex_cmp(q));
    x == y
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flagval::{build_flag, BranchSpec, FlagSpec};
    use crate::scalar::{int, rat};

    fn q(a: i64, b: i64, c: i64, d: i64) -> Point {
        Point::rat(rat(a, b), rat(c, d))
    }

    #[test]
    fn hull_drops_interior_and_collinear() {
        let pts = vec![
            q(0, 1, 0, 1),
            q(2, 1, 0, 1),
            q(1, 1, 0, 1),
            q(2, 1, 2, 1),
            q(1, 1, 1, 2),
        ];
        let h = convex_hull(&pts).unwrap();
        assert_eq!(h, vec![q(0, 1, 0, 1), q(2, 1, 0, 1), q(2, 1, 2, 1)]);
    }

    #[test]
    fn minimal_consistency() {
        let mc = MaximalContactData::from_betabar(vec![int(8), int(12), int(45), int(180)]).unwrap();
        assert!(!is_minimal_consistent(&mc, &ExactScalar::from(rat(135, 10))));
        let sq = MaximalContactData::from_betabar(vec![int(1), int(4)]).unwrap();
        assert!(is_minimal_consistent(&sq, &ExactScalar::from(2)));
        let e1 = MaximalContactData::from_betabar(vec![int(9), int(30), int(101), int(303)]).unwrap();
        assert!(!is_minimal_consistent(&e1, &ExactScalar::from(18)));
    }

    #[test]
    fn order_valuation_body() {
        let v = build_flag(&ProximityCluster::free_chain(1), FlagSpec::free(1)).unwrap();
        let b = body_minimal(&v).unwrap();
        assert_eq!(b.vertices, vec![q(0, 1, 0, 1), q(1, 1, 0, 1), q(1, 1, 1, 1)]);
        assert_eq!(b.area(), ExactScalar::from(rat(1, 2)));
    }

    #[test]
    fn minimal_body_with_radical() {
        let c = ProximityCluster::with_satellites(3, &[(3, 1)]).unwrap();
        let v = build_flag(&c, FlagSpec::satellite(3, 2)).unwrap();
        let b = body_minimal(&v).unwrap();
        assert_eq!(b.area(), ExactScalar::from(rat(1, 2)));
        assert!(!b.muhat.is_rational());
    }

    #[test]
    fn npi_guards() {
        let c = ProximityCluster::free_chain(2);
        assert_eq!(check_npi(&c, 1, &[1, 2]).unwrap_err().code(), "RTooSmall");
        assert_eq!(check_npi(&c, 2, &[1]).unwrap_err().code(), "LineSupportInvalid");
        assert_eq!(check_npi(&c, 2, &[2, 3]).unwrap_err().code(), "LineSupportInvalid");
        let chk = check_npi(&c, 2, &[1, 2]).unwrap();
        assert!(chk.is_npi);
        assert_eq!(chk.nu_v, int(2));
        let sat = ProximityCluster::with_satellites(3, &[(3, 1)]).unwrap();
        assert_eq!(check_npi(&sat, 3, &[1, 2, 3]).unwrap_err().code(), "LineSupportInvalid");
    }

    #[test]
    fn certificate_checks() {
        let c = ProximityCluster::free_chain(5);
        let v = build_flag(&c, FlagSpec::free(5)).unwrap();
        let curve = CurveSpec {
            degree: int(1),
            branches: vec![BranchSpec::new(vec![int(1), int(1)])],
        };
        let cert = SupraminimalCertificate::from_curve(&v, curve).unwrap();
        assert_eq!(cert.value_pair, PairValue::new(int(2), int(0)));
        assert_eq!(body_nonminimal(&v, &cert).unwrap_err().code(), "NotSupraminimal");
        let mut wrong = cert.clone();
        wrong.value_pair = PairValue::new(int(3), int(0));
        assert_eq!(
            body_nonminimal(&v, &wrong).unwrap_err().code(),
            "CertificateInconsistent"
        );
    }
}
