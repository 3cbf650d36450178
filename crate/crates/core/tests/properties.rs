use std::sync::OnceLock;

use kronecker_core::matching::{
    canonical_linked_pair, canonical_tableau, grading_c2, mf_cones, ColumnCatalog, DEFAULT_SEARCH_CAP,
};
use kronecker_core::mirror::{classical_period, LaurentPolynomial, DEFAULT_TERM_CAP};
use kronecker_core::polyhedra::{lattice_points_at_height, Cone};
use kronecker_core::tableaux::{
    enumerate_pairs_at_height, mon_minus, mon_plus, pair_from_exponent, ExponentVector, LinkedPair, QuiverSpec,
};
use num_bigint::BigInt;
use proptest::prelude::*;

struct Fixture {
    spec: QuiverSpec,
    plus: ColumnCatalog,
    minus: ColumnCatalog,
    points: Vec<Vec<i64>>,
    pairs: Vec<LinkedPair>,
}

fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let spec = QuiverSpec::new(3, 2, 3).unwrap();
        let [(lv, gv, vert), (lh, gh, horiz)] = mf_cones(&grading_c2(&spec).unwrap()).unwrap();
        let cone: Cone = kronecker_core::polyhedra::intersect(&vert, &horiz).unwrap();
        let mut points = Vec::new();
        for h in 1..=2 {
            points.extend(lattice_points_at_height(&cone, h, &spec.height(), 1_000_000).unwrap());
        }
        Fixture {
            spec,
            plus: ColumnCatalog::new(&lh, &gh).unwrap(),
            minus: ColumnCatalog::new(&lv, &gv).unwrap(),
            points,
            pairs: enumerate_pairs_at_height(&spec, 2, 1_000_000).unwrap(),
        }
    })
}

fn laurent() -> impl Strategy<Value = LaurentPolynomial> {
    (1usize..=3).prop_flat_map(|d| {
        prop::collection::vec((prop::collection::vec(-3i64..=3, d), -5i64..=5), 1..6).prop_map(move |terms| {
            LaurentPolynomial::new(d, terms.into_iter().map(|(e, c)| (e, BigInt::from(c)))).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_tableaux_have_the_requested_monomial(i in any::<prop::sample::Index>()) {
        let f = fixture();
        let v = ExponentVector::from_point(f.spec, &f.points[i.index(f.points.len())]).unwrap();
        let t = canonical_tableau(&v, &f.plus, DEFAULT_SEARCH_CAP).unwrap().unwrap();
        prop_assert_eq!(mon_plus(&t, &f.spec).unwrap(), v.clone());
        let t = canonical_tableau(&v, &f.minus, DEFAULT_SEARCH_CAP).unwrap().unwrap();
        prop_assert_eq!(mon_minus(&t, &f.spec).unwrap(), v);
    }

    #[test]
    fn canonical_pairs_are_linked(i in any::<prop::sample::Index>()) {
        let f = fixture();
        let v = ExponentVector::from_point(f.spec, &f.points[i.index(f.points.len())]).unwrap();
        let p = canonical_linked_pair(&v, &f.plus, &f.minus, DEFAULT_SEARCH_CAP).unwrap().unwrap();
        prop_assert_eq!(mon_plus(&p.plus, &f.spec).unwrap(), mon_minus(&p.minus, &f.spec).unwrap());
        prop_assert_eq!(p.exponent(), v);
    }

    #[test]
    fn reconstruction_inverts_the_monomial(i in any::<prop::sample::Index>()) {
        let f = fixture();
        let p = &f.pairs[i.index(f.pairs.len())];
        let rec = pair_from_exponent(&mon_plus(&p.plus, &f.spec).unwrap()).unwrap();
        prop_assert!(rec.semistandard);
        prop_assert_eq!(&rec.pair.plus, &p.plus);
        prop_assert_eq!(&rec.pair.minus, &p.minus);
    }

    #[test]
    fn laurent_text_round_trips(f in laurent()) {
        // the text only fixes the variables that occur, so pad back to `f.dim`
        let back: LaurentPolynomial = f.to_string().parse().unwrap();
        prop_assert!(back.dim <= f.dim);
        let padded = LaurentPolynomial::new(
            f.dim,
            back.terms.into_iter().map(|(mut e, c)| {
                e.resize(f.dim, 0);
                (e, c)
            }),
        )
        .unwrap();
        prop_assert_eq!(padded, f);
    }

    #[test]
    fn period_is_invariant_under_elementary_maps(f in laurent(), a in 0usize..3, b in 0usize..3, s in -2i64..=2) {
        let d = f.dim;
        let (a, b) = (a % d, b % d);
        let mut m: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
        if a != b {
            m[a][b] = s;
        }
        m.swap(0, a);
        let g = f.transform(&m).unwrap();
        prop_assert_eq!(
            classical_period(&f, 6, DEFAULT_TERM_CAP).unwrap(),
            classical_period(&g, 6, DEFAULT_TERM_CAP).unwrap()
        );
    }
}
