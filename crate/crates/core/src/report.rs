//! Machine-readable reports for each pipeline step, plus DOT and SVG output.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cluster::graph_shape;
use crate::document::{MuSource, ProblemDocument};
use crate::error::{Error, Result};
use crate::invariants::{maximal_contact_values, puiseux_exponents};
use crate::okbody::{
    body_minimal, body_nonminimal, body_npi, classify_shape, normalize, Body, BranchClass,
    SupraminimalCertificate,
};
use crate::scalar::{int_vec_serde, rat_serde, rat_vec_serde, ExactScalar, Int, Rat};
use crate::zariski::{check_pair, decompose_npi, ZariskiChecks, ZariskiPair};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub code: String,
    pub message: String,
}

impl From<&Error> for ErrorReport {
    fn from(e: &Error) -> Self {
        Self {
            code: e.code().to_string(),
            message: e.to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointKind {
    Free,
    Satellite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointReport {
    pub id: usize,
    pub kind: PointKind,
    pub proximate_to: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub valid: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
}

pub fn validate(doc: &ProblemDocument) -> ValidateReport {
    let checked = doc.proximity_cluster().and_then(|c| {
        doc.valuation()?;
        Ok(c)
    });
    match checked {
        Ok(c) => ValidateReport {
            valid: true,
            points: (1..=c.len())
                .map(|i| PointReport {
                    id: i,
                    kind: if c.is_satellite(i) {
                        PointKind::Satellite
                    } else {
                        PointKind::Free
                    },
                    proximate_to: c.proximities(i),
                })
                .collect(),
            error: None,
        },
        Err(e) => ValidateReport {
            valid: false,
            points: Vec::new(),
            error: Some(ErrorReport::from(&e)),
        },
    }
}

/// Invariants of the divisorial valuation `ν_r` of the last point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsReport {
    pub r: usize,
    #[serde(with = "int_vec_serde")]
    pub multiplicities: Vec<Int>,
    #[serde(with = "int_vec_serde")]
    pub betabar: Vec<Int>,
    #[serde(with = "int_vec_serde")]
    pub e: Vec<Int>,
    #[serde(with = "int_vec_serde")]
    pub n: Vec<Int>,
    #[serde(with = "rat_vec_serde")]
    pub beta_prime: Vec<Rat>,
    pub continued_fractions: Vec<Vec<u64>>,
    #[serde(with = "rat_serde")]
    pub volume: Rat,
    pub g: usize,
    pub dead_ends: Vec<usize>,
    pub star_vertices: Vec<usize>,
}

pub fn invariants(doc: &ProblemDocument) -> Result<InvariantsReport> {
    let c = doc.proximity_cluster()?;
    let r = c.len();
    let mc = maximal_contact_values(&c, r)?;
    let px = puiseux_exponents(&mc);
    let shape = graph_shape(&c.dual_graph(r)?, &c)?;
    Ok(InvariantsReport {
        r,
        multiplicities: c.multiplicity_sequence(r)?,
        betabar: mc.betabar.clone(),
        e: mc.e.clone(),
        n: mc.n_factors.clone(),
        beta_prime: px.beta_prime,
        continued_fractions: px.cf,
        volume: mc.volume.clone(),
        g: mc.g,
        dead_ends: shape.dead_ends,
        star_vertices: shape.star_vertices,
    })
}

/// Vertex labels are point indices, plus `C` for a curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualGraphReport {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl DualGraphReport {
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph dual {\n");
        for v in &self.vertices {
            let _ = writeln!(s, "  \"{v}\";");
        }
        for (a, b) in &self.edges {
            let _ = writeln!(s, "  \"{a}\" -- \"{b}\";");
        }
        s.push_str("}\n");
        s
    }
}

/// The dual graph of `ν_r`. With a curve, the graph of the flag's infinite
/// cluster is extended far enough to hold every branch and a vertex `C` is
/// joined to the last point of each branch.
pub fn dual_graph(doc: &ProblemDocument) -> Result<DualGraphReport> {
    let c = doc.proximity_cluster()?;
    let r = c.len();
    let (cluster, tops) = match doc.curve() {
        Some(curve) => {
            let val = doc.valuation()?;
            let mut tops = BTreeSet::new();
            for b in &curve.branches {
                tops.insert(val.validate_branch(b)?);
            }
            let n = tops.iter().copied().max().unwrap_or(r).max(r);
            (val.extended_cluster(n)?, tops)
        }
        None => (c, BTreeSet::new()),
    };
    let g = cluster.dual_graph(cluster.len())?;
    let mut vertices: Vec<String> = (1..=cluster.len()).map(|i| i.to_string()).collect();
    let mut edges: Vec<(String, String)> = g
        .edges()
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    if !tops.is_empty() {
        vertices.push("C".into());
        edges.extend(tops.iter().map(|t| (t.to_string(), "C".to_string())));
    }
    Ok(DualGraphReport { vertices, edges })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BodyReport {
    #[serde(flatten)]
    pub body: Body,
    pub area: ExactScalar,
    /// The body of the normalised equivalent valuation.
    pub normalized: Body,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch_classes: Option<Vec<BranchClass>>,
}

pub fn body(doc: &ProblemDocument) -> Result<BodyReport> {
    let val = doc.valuation()?;
    let (body, branch_classes) = match &doc.mu_source {
        MuSource::Minimal => (body_minimal(&val)?, None),
        MuSource::Npi { line_support } => (body_npi(&val, line_support)?, None),
        MuSource::Curve { .. } => {
            let curve = doc.curve().expect("curve source");
            let cert = SupraminimalCertificate::from_curve(&val, curve.clone())?;
            let b = body_nonminimal(&val, &cert)?;
            (b, Some(classify_shape(&val, &curve)?.by_slope))
        }
    };
    Ok(BodyReport {
        area: body.area(),
        normalized: normalize(&val, &body)?,
        body,
        branch_classes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZariskiReport {
    #[serde(flatten)]
    pub pair: ZariskiPair,
    pub checks: ZariskiChecks,
}

pub fn zariski(doc: &ProblemDocument, t: &Rat) -> Result<ZariskiReport> {
    let val = doc.valuation()?;
    let support = doc.line_support().ok_or(Error::NotNpi)?;
    let pair = decompose_npi(&val, support, t)?;
    let checks = check_pair(&val, support, &pair)?;
    Ok(ZariskiReport { pair, checks })
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

/// SVG drawing of a body. Coordinates are rounded to `10⁻⁶` for display
/// only; the labels carry the exact values.
pub fn body_svg(body: &Body) -> String {
    let pts: Vec<(f64, f64)> = body
        .vertices
        .iter()
        .map(|p| (p.x.to_f64(), p.y.to_f64()))
        .collect();
    let max_x = pts.iter().map(|p| p.0).fold(f64::MIN, f64::max);
    let min_x = pts.iter().map(|p| p.0).fold(f64::MAX, f64::min);
    let max_y = pts.iter().map(|p| p.1).fold(f64::MIN, f64::max);
    let min_y = pts.iter().map(|p| p.1).fold(f64::MAX, f64::min);
    let (w, h, pad) = (640.0, 480.0, 60.0);
    let sx = (w - 2.0 * pad) / (max_x - min_x).max(1e-12);
    let sy = (h - 2.0 * pad) / (max_y - min_y).max(1e-12);
    let scale = sx.min(sy);
    let map = |(x, y): (f64, f64)| {
        (
            round6(pad + (x - min_x) * scale),
            round6(h - pad - (y - min_y) * scale),
        )
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    let poly: Vec<String> = pts
        .iter()
        .map(|&p| {
            let (x, y) = map(p);
            format!("{x},{y}")
        })
        .collect();
    let _ = writeln!(
        s,
        "  <polygon points=\"{}\" fill=\"#cfe0f3\" stroke=\"#1f4e79\" stroke-width=\"1.5\"/>",
        poly.join(" ")
    );
    for (p, v) in pts.iter().zip(&body.vertices) {
        let (x, y) = map(*p);
        let _ = writeln!(s, "  <circle cx=\"{x}\" cy=\"{y}\" r=\"3\" fill=\"#1f4e79\"/>");
        let _ = writeln!(
            s,
            "  <text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\">{}</text>",
            round6(x + 5.0),
            round6(y - 5.0),
            xml_escape(&v.to_string())
        );
    }
    s.push_str("</svg>\n");
    s
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
