use kronecker_core::matching::{fallback_search, grading_c0, grading_c2, sagbi_pipeline, PipelineConfig};
use kronecker_core::semiinvariant::verify_lm;
use kronecker_core::polyhedra::{kronecker_halfspaces, lattice_points_at_height};
use kronecker_core::tableaux::{
    build_linked_pair, enumerate_pairs_at_height, pair_from_exponent, Label, QuiverSpec, Tableau,
};

const PLUS: [&str; 20] = [
    "21 21;22 31;32 32",
    "21 31;31 12;32 32",
    "21 31;22 12;31 32",
    "21 21;12 31;32 32",
    "21 21;12 31;22 32",
    "21 21;12 22;31 32",
    "21 21;12 22;22 31",
    "21 31;12 12;31 32",
    "21 21;12 12;31 32",
    "21 21;12 12;22 31",
    "11 21;12 31;32 32",
    "11 21;12 31;22 32",
    "11 21;12 22;21 32",
    "11 31;12 12;31 32",
    "11 31;12 12;21 32",
    "11 21;12 12;31 32",
    "11 21;12 12;22 31",
    "11 21;12 12;21 32",
    "11 21;12 12;21 22",
    "11 11;12 12;21 32",];
const MINUS: [&str; 20] = [
    "21 21 32;22 33 33",
    "21 31 32;12 33 33",
    "21 31 33;22 33 12",
    "21 21 32;12 33 33",
    "21 21 32;12 23 33",
    "21 21 33;22 33 12",
    "21 21 33;22 23 12",
    "21 31 33;12 33 12",
    "21 21 33;12 33 12",
    "21 21 33;12 23 12",
    "11 21 32;12 33 33",
    "11 21 32;12 23 33",
    "11 21 23;12 22 33",
    "11 31 33;12 33 12",
    "11 23 31;12 12 33",
    "11 21 33;12 33 12",
    "11 21 33;12 23 12",
    "11 21 23;12 12 33",
    "11 21 23;12 23 12",
    "11 11 23;12 12 33",];

fn parse(list: &[&str]) -> Vec<Tableau> {
    list.iter().map(|s| s.parse().unwrap()).collect()
}

#[test]
fn k323_c2_pipeline_reproduces_the_reference_pairs() {
    let spec = QuiverSpec::new(3, 2, 3).unwrap();
    let r = sagbi_pipeline(&grading_c2(&spec).unwrap(), &PipelineConfig::default()).unwrap();
    assert_eq!(r.hilbert.count_by_height(), vec![(1, 20)]);
    assert!(r.all_verified);
    assert_eq!(r.fallback_needed, 0);
    let plus: Vec<Tableau> = r.generators.iter().map(|g| g.pair.clone().unwrap().plus).collect();
    let minus: Vec<Tableau> = r.generators.iter().map(|g| g.pair.clone().unwrap().minus).collect();
    assert_eq!(plus, parse(&PLUS));
    assert_eq!(minus, parse(&MINUS));
    assert_eq!(r.polytope.vertices, 20);
    assert_eq!(r.polytope.lattice_points, 20);
    assert_eq!(r.fan.rays.len(), 12);
    assert_eq!(r.toric.fano, Some(true));
    assert_eq!(r.toric.gorenstein, Some(true));
    assert_eq!(r.toric.terminal, Some(true));
}

#[test]
fn k423_c2_pipeline() {
    let spec = QuiverSpec::new(4, 2, 3).unwrap();
    let cfg = PipelineConfig {
        max_degree: 2,
        certify_window: 1,
        ..PipelineConfig::default()
    };
    let r = sagbi_pipeline(&grading_c2(&spec).unwrap(), &cfg).unwrap();
    assert_eq!(r.hilbert.count_by_height(), vec![(1, 126), (2, 80)]);
    assert!(r.hilbert.window_clean);
    assert!(r.all_verified);
    assert_eq!(r.polytope.vertices, 142);
    assert_eq!(r.toric.gorenstein, Some(true));
    assert_eq!(r.toric.fano, Some(true));
    assert_eq!(r.toric.terminal, Some(true));
    assert_eq!(r.toric.fano_index, Some(4.into()));
    assert_eq!(r.toric.spanning_vertices, Some(30));
    assert_eq!(r.toric.spanning_lattice_points, Some(31));
}

#[test]
fn c0_pipeline_is_the_gelfand_cetlin_degeneration() {
    let spec = QuiverSpec::new(3, 2, 3).unwrap();
    let r = sagbi_pipeline(&grading_c0(&spec), &PipelineConfig::default()).unwrap();
    assert_eq!(r.hilbert.count_by_height(), vec![(1, 20)]);
    assert!(r.all_verified);
    assert_eq!(r.polytope.vertices, 18);
    assert_eq!(r.fan.rays.len(), 13);
    let gc = kronecker_halfspaces(&spec).double_description().unwrap();
    let pts = lattice_points_at_height(&gc, 1, &spec.height(), 1000).unwrap();
    assert_eq!(r.hilbert.generators, pts);
    for g in &r.generators {
        let rec = pair_from_exponent(&g.exponent).unwrap();
        assert!(rec.semistandard);
        assert_eq!(g.pair.as_ref(), Some(&rec.pair));
    }
}

#[test]
fn fallback_recovers_from_a_shuffled_pair() {
    let spec = QuiverSpec::new(3, 2, 3).unwrap();
    let c = grading_c0(&spec);
    let mut failing = 0;
    for pair in enumerate_pairs_at_height(&spec, 1, 1000).unwrap() {
        let mut rows: Vec<Vec<Label>> = pair.plus.rows().to_vec();
        rows[0].reverse();
        let plus = Tableau::new(rows).unwrap();
        let shuffled = build_linked_pair(&spec, plus, pair.minus.clone()).unwrap().unwrap();
        if verify_lm(&shuffled, &c, 1000).unwrap() {
            continue;
        }
        failing += 1;
        let found = fallback_search(&shuffled, &c, 1000, 1000).unwrap().unwrap();
        assert_eq!(found.exponent(), pair.exponent());
        assert!(verify_lm(&found, &c, 1000).unwrap());
    }
    assert!(failing > 0);
}
