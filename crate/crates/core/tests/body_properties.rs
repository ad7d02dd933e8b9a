use nobody::cluster::ProximityCluster;
use nobody::flagval::{build_flag, BranchSpec, CurveSpec, ExceptionalValuation, FlagSpec};
use nobody::okbody::{
    body_minimal, body_nonminimal, body_npi, classify_shape, det, inscribed_in,
    normalization_matrix, normalize, normalized_closed_form, normalized_max_ideal,
    same_vertices, Body, Shape, SupraminimalCertificate,
};
use nobody::oracle::{
    is_strictly_convex_ccw, polygon_area, random_curve, random_flag, random_npi, rng_from_seed,
};
use nobody::scalar::{int, rat, ExactScalar, Rat};
use nobody::zariski::{break_points, check_pair, decompose_npi, slice_body};
use num_traits::Signed;
use proptest::prelude::*;

fn half() -> ExactScalar {
    ExactScalar::from(rat(1, 2))
}

fn check_normalized(val: &ExceptionalValuation, body: &Body) {
    let a = normalization_matrix(val).unwrap();
    let n = normalize(val, body).unwrap();
    assert_eq!(n.area(), half().scale(&det(&a).abs()));
    let closed = nobody::okbody::convex_hull(&normalized_closed_form(val, body).unwrap()).unwrap();
    assert!(same_vertices(&closed, &n.vertices));
    if val.is_satellite() {
        let (got, want) = normalized_max_ideal(val).unwrap();
        assert_eq!(got, want);
    }
}

fn check_body(val: &ExceptionalValuation, body: &Body) {
    assert!(is_strictly_convex_ccw(&body.vertices));
    assert_eq!(body.area(), half());
    assert_eq!(polygon_area(&body.vertices).unwrap(), half());
    let tri = val.value_cone_slice(&body.muhat).unwrap();
    assert!(inscribed_in(body, &tri), "{:?} not inscribed in {:?}", body.vertices, tri);
    check_normalized(val, body);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn satellite_flag_identities(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let (c, flag) = random_flag(&mut rng, 30, (1, 2), Some(true));
        let val = build_flag(&c, flag).unwrap();
        prop_assert_eq!(val.slope_gap_identity().unwrap(), rat(1, 1));
        prop_assert_eq!(val.unimodular_determinant().unwrap(), int(1));
    }

    #[test]
    fn minimal_bodies(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let (c, flag) = random_flag(&mut rng, 20, (1, 2), None);
        let val = build_flag(&c, flag).unwrap();
        let body = body_minimal(&val).unwrap();
        prop_assert_eq!(body.shape, Shape::Triangle);
        prop_assert!(same_vertices(&body.vertices, &val.value_cone_slice(&body.muhat).unwrap()));
        check_body(&val, &body);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn npi_bodies(seed in any::<u64>(), minimal in any::<bool>()) {
        let mut rng = rng_from_seed(seed);
        let input = random_npi(&mut rng, 14, minimal);
        let val = build_flag(&input.cluster, input.flag).unwrap();
        let s = &input.line_support;
        let body = body_npi(&val, s).unwrap();
        prop_assert_eq!(body.shape, Shape::Triangle);
        check_body(&val, &body);
        prop_assert!(same_vertices(&slice_body(&val, s).unwrap().vertices, &body.vertices));

        let ts = break_points(&val, s).unwrap();
        let mut samples = ts.clone();
        for w in ts.windows(2) {
            samples.push((&w[0] + &w[1]) / Rat::from_integer(int(2)));
        }
        for t in &samples {
            let pair = decompose_npi(&val, s, t).unwrap();
            let chk = check_pair(&val, s, &pair).unwrap();
            prop_assert!(chk.all(), "t = {}: {:?}", t, chk);
        }

        if body.minimal {
            prop_assert!(same_vertices(&body_minimal(&val).unwrap().vertices, &body.vertices));
        } else {
            let line = CurveSpec {
                degree: int(1),
                branches: vec![BranchSpec::new(vec![int(1); s.len()])],
            };
            let cert = SupraminimalCertificate::from_curve(&val, line).unwrap();
            let nm = body_nonminimal(&val, &cert).unwrap();
            prop_assert!(same_vertices(&nm.vertices, &body.vertices));
        }
    }

    #[test]
    fn shape_classification(seed in any::<u64>(), branches in 1usize..4) {
        let mut rng = rng_from_seed(seed);
        let (c, flag) = random_flag(&mut rng, 16, (1, 2), None);
        let val = build_flag(&c, flag).unwrap();
        let curve = random_curve(&val, &mut rng, branches);
        let cls = classify_shape(&val, &curve).unwrap();
        prop_assert_eq!(&cls.by_slope, &cls.by_graph);
        if branches == 1 {
            prop_assert_eq!(cls.shape, Shape::Triangle);
        }
        if let Ok(cert) = SupraminimalCertificate::from_curve(&val, curve) {
            if let Ok(body) = body_nonminimal(&val, &cert) {
                check_body(&val, &body);
            }
        }
    }
}

#[test]
fn chain_free_flag_body() {
    let c = ProximityCluster::free_chain(4);
    let val = build_flag(&c, FlagSpec::free(4)).unwrap();
    let body = body_npi(&val, &[1, 2, 3, 4]).unwrap();
    check_body(&val, &body);
}
