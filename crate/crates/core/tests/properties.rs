mod common;

use canmod::algebra::linalg::Subspace;
use canmod::algebra::modular::{exact_rank, exact_rank_at_most};
use canmod::algebra::{q, Q};
use canmod::canonical::{blowup, canonical_map, image_profile, image_profile_bounded, map_degree};
use canmod::dsl::{describe_curve, parse_curve, parse_curve_file, serialize_curve_file};
use canmod::normality::forms_upper_bound;
use canmod::sheaves::{h0, h1, raw_degree, sections, Place, RankOneSheaf};
use canmod::Settings;
use common::random_curve;
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn twisted(f: &RankOneSheaf, place: Place, d: i64) -> RankOneSheaf {
    let mut divisor = f.divisor.clone();
    *divisor.entry(place).or_insert(0) += d;
    RankOneSheaf::new(f.stalks.clone(), divisor)
}

fn low_rank_matrix(left: Vec<Vec<i64>>, right: Vec<Vec<i64>>) -> Vec<Vec<BigInt>> {
    left.iter()
        .map(|a| {
            (0..right[0].len())
                .map(|j| a.iter().zip(&right).map(|(x, r)| BigInt::from(*x) * BigInt::from(r[j]) * BigInt::from(1_000_003i64)).sum())
                .collect()
        })
        .collect()
}

fn matrix(max_rank: usize) -> impl Strategy<Value = Vec<Vec<BigInt>>> {
    (1..=max_rank, 1usize..7, 1usize..7).prop_flat_map(|(k, m, n)| {
        (
            prop::collection::vec(prop::collection::vec(-9i64..=9, k), m),
            prop::collection::vec(prop::collection::vec(-(1i64 << 40)..=(1i64 << 40), n), k),
        )
            .prop_map(|(l, r)| low_rank_matrix(l, r))
    })
}

fn rational_rank(rows: &[Vec<BigInt>], ncols: usize) -> usize {
    Subspace::from_vectors(ncols, rows.iter().map(|r| r.iter().map(|x| Q::from_integer(x.clone())).collect())).dim()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn curve_files_round_trip(seed in any::<u64>()) {
        let c = random_curve(seed).curve;
        let file = describe_curve(&c);
        let text = serialize_curve_file(&file);
        prop_assert_eq!(parse_curve_file(&text).unwrap(), file);
        prop_assert_eq!(parse_curve(&text).unwrap(), c);
    }

    #[test]
    fn riemann_roch_and_duality_for_twists_of_omega(seed in any::<u64>(), d in -6i64..10) {
        let rc = random_curve(seed);
        let c = &rc.curve;
        let s = Settings::default();
        let f = twisted(&RankOneSheaf::omega(c), Place::Infinity, d);
        let (a, b) = (h0(c, &f, &s).unwrap(), h1(c, &f, &s).unwrap());
        prop_assert_eq!(a as i64 - b as i64, raw_degree(c, &f) + 1 - rc.genus as i64);
        prop_assert_eq!(b, h0(c, &twisted(&RankOneSheaf::structure(c), Place::Infinity, -d), &s).unwrap());
    }

    #[test]
    fn local_h0_formula_matches_section_basis(seed in any::<u64>(), d in -4i64..8, e in -2i64..3) {
        let c = random_curve(seed).curve;
        let s = Settings::default();
        let smooth = (20..).map(q).find(|t: &Q| !c.is_branch_point(t)).unwrap();
        let f = twisted(&twisted(&RankOneSheaf::structure(&c), Place::Infinity, d), Place::Finite(smooth), e);
        let basis = sections(&c, &f, &s).unwrap();
        prop_assert_eq!(h0(&c, &f, &s).unwrap(), basis.dim());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn image_profile_is_unchanged_by_model_sheaf_bounds(seed in any::<u64>()) {
        let rc = random_curve(seed);
        prop_assume!(rc.genus <= 5);
        let c = &rc.curve;
        let s = Settings::default();
        let eta: usize = rc.etas.iter().sum();
        let mp = canonical_map(c, eta).unwrap();
        let deg = map_degree(&mp, &c.branch_points()).unwrap();
        let bl = blowup(c, &s).unwrap();
        let bound = |l| if deg == 1 { forms_upper_bound(c, &bl, l, &s) } else { None };
        prop_assert_eq!(image_profile_bounded(&mp, deg, &s, &bound).unwrap(), image_profile(&mp, deg, &s).unwrap());
    }
}

proptest! {
    #[test]
    fn exact_rank_agrees_with_rational_elimination(rows in matrix(4)) {
        let ncols = rows[0].len();
        let r = exact_rank(&rows, ncols, true);
        prop_assert_eq!(r.rank, rational_rank(&rows, ncols));
        let kept: Vec<Vec<BigInt>> = r.independent.iter().map(|&i| rows[i].clone()).collect();
        prop_assert_eq!(rational_rank(&kept, ncols), r.rank);
        let kernel = r.kernel.unwrap();
        prop_assert_eq!(kernel.len(), ncols - r.rank);
        for v in &kernel {
            for row in &rows {
                let dot: Q = row.iter().zip(v).map(|(a, b)| Q::from_integer(a.clone()) * b).sum();
                prop_assert!(dot.is_zero());
            }
        }
        prop_assert_eq!(exact_rank_at_most(&rows, ncols, r.rank).rank, r.rank);
    }
}
