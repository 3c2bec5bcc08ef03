mod common;

use canmod::analysis::{analyze, AnalyzeOptions};
use canmod::canonical::{canonical_map, hyperelliptic_structure, map_degree};
use canmod::dsl::parse_curve;
use canmod::Settings;
use common::{corpus_cases, corpus_curve};

const SYMMETRIC_NODES: &str = "field Q
point N1 branches [1, -1] node
point N2 branches [2, -2] node
point N3 branches [3, -3] node
";

#[test]
fn nodes_symmetric_under_negation_give_a_hyperelliptic_curve() {
    let c = parse_curve(SYMMETRIC_NODES).unwrap();
    let mp = canonical_map(&c, 0).unwrap();
    assert_eq!(map_degree(&mp, &c.branch_points()).unwrap(), 2);
    let h = hyperelliptic_structure(&mp, 3, &c.branch_points()).unwrap();
    assert_eq!(h.lambda.map_degree(), 2);
}

#[test]
fn bundled_three_nodal_curve_is_canonically_embedded() {
    let c = corpus_curve("E3");
    let mp = canonical_map(&c, 0).unwrap();
    assert_eq!(map_degree(&mp, &c.branch_points()).unwrap(), 1);
    assert!(hyperelliptic_structure(&mp, 3, &c.branch_points()).is_err());
}

#[test]
fn corpus_models_have_the_expected_degree_and_genus() {
    let options = AnalyzeOptions { clifford: false, ..AnalyzeOptions::default() };
    // (name, map degree, d', g')
    let expected = [("E1", 1, 1, 0), ("E2", 2, 1, 0), ("E3", 1, 4, 3), ("E4", 1, 2, 0), ("E5", 1, 4, 0), ("E6", 2, 1, 0)];
    for (case, (name, deg, d, gp)) in corpus_cases().iter().zip(expected) {
        assert_eq!(case.name, name);
        let a = analyze(&case.curve, &Settings::default(), &options).unwrap();
        assert_eq!((a.map_degree, a.image.d_prime, a.image.g_prime), (deg, d, gp), "{name}");
        assert_eq!(a.genus, case.genus, "{name}");
    }
}
