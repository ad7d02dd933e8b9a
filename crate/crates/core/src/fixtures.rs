//! Worked examples as problem documents.

use crate::cluster::ProximityCluster;
use crate::document::{MuSource, ProblemDocument};
use crate::flagval::QKind;

fn cluster(n: usize, sat: &[(usize, usize)]) -> ProximityCluster {
    ProximityCluster::with_satellites(n, sat).expect("fixture clusters are valid")
}

/// Ten points with multiplicities `(24, 24, 9, 9, 6, 3, 3, 2, 1, 1)` and two
/// Puiseux pairs.
pub fn enric() -> ProblemDocument {
    ProblemDocument::new(
        &cluster(10, &[(4, 2), (5, 2), (6, 4), (7, 5), (9, 7), (10, 8)]),
        QKind::Free,
        MuSource::Minimal,
    )
}

/// Non-positive at infinity, line through `p_1, p_2`, `q = E_10 ∩ E_12`.
pub fn example1() -> ProblemDocument {
    ProblemDocument::new(
        &cluster(12, &[(5, 3), (6, 3), (11, 9), (12, 10)]),
        QKind::Satellite { eta: 10 },
        MuSource::Npi {
            line_support: vec![1, 2],
        },
    )
}

/// Supraminimal curve of degree 10 with one branch; the body is a triangle.
pub fn example2() -> ProblemDocument {
    ProblemDocument::new(
        &cluster(12, &[(3, 1), (10, 8), (11, 8), (12, 8)]),
        QKind::Satellite { eta: 8 },
        MuSource::Curve {
            degree: 10,
            branches: vec![vec![6, 3, 3, 3, 3, 3, 3, 3, 1, 1, 1]],
        },
    )
}

/// Nodal cubic whose two branches attach on both sides of `{η, r}`; the body
/// is a quadrilateral.
pub fn example3() -> ProblemDocument {
    let mut sat = vec![(8, 6), (14, 12)];
    sat.extend((9..=13).map(|i| (i, 7)));
    sat.extend((15..=19).map(|i| (i, 13)));
    ProblemDocument::new(
        &cluster(19, &sat),
        QKind::Satellite { eta: 13 },
        MuSource::Curve {
            degree: 3,
            branches: vec![vec![1; 7], vec![1]],
        },
    )
}

/// All fixtures by name.
pub fn all() -> Vec<(&'static str, ProblemDocument)> {
    vec![
        ("enric", enric()),
        ("example1", example1()),
        ("example2", example2()),
        ("example3", example3()),
    ]
}

pub fn by_name(name: &str) -> Option<ProblemDocument> {
    all().into_iter().find(|(n, _)| *n == name).map(|(_, d)| d)
}
