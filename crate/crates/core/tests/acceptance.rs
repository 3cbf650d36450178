//! End-to-end acceptance run. Prints one PASS/FAIL line per check and fails
//! if any check fails.

use std::collections::BTreeSet;
use std::io::Write;
use std::sync::Mutex;

use kronecker_core::matching::{
    block_diagonal_mf, grading_c0, grading_c2, induced_matching_field, mf_cones, sagbi_pipeline, GrassmannianSpec,
    Orientation, PipelineConfig, PipelineReport,
};
use kronecker_core::mirror::{classical_period, laurent_from_rays, newton_invariants, LaurentPolynomial};
use kronecker_core::polyhedra::{
    classify_toric, hilbert_basis, intersect, kronecker_halfspaces, kronecker_intersection,
    lattice_points_at_height, normal_fan_rays, Cone, HilbertBasis,
};
use kronecker_core::semiinvariant::{expand, semi_invariance_check, GroupElement};
use kronecker_core::tableaux::{
    enumerate_pairs_at_height, enumerate_pairs_backtracking, mon_minus, mon_plus, pair_from_exponent,
    ExponentVector, LinkedPair, QuiverSpec, Tableau,
};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const LATTICE_CAP: u64 = 50_000_000;
const ORBIT_CAP: u64 = 50_000_000;
const TERM_CAP: u64 = 20_000_000;

const K323_MF_PLUS: [&str; 20] = [
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
    "11 11;12 12;21 32",
];

const K323_MF_MINUS: [&str; 20] = [
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
    "11 11 23;12 12 33",
];

const K423_DEGREE_THREE: [&str; 20] = [
    "11 11 11 11 11 22;12 12 12 12 32 32;21 21 21 31 42 42",
    "11 11 11 11 11 22;12 12 12 22 32 32;21 21 21 31 42 42",
    "11 11 11 11 11 22;12 12 12 12 32 32;21 21 21 21 42 42",
    "11 11 22 22 32 32;21 21 31 31 41 41;31 32 42 42 42 42",
    "11 11 22 22 32 32;21 21 31 31 41 41;31 42 42 42 42 42",
    "11 11 22 22 32 32;21 21 31 31 41 41;31 32 32 42 42 42",
    "11 11 11 11 11 22;12 12 12 12 32 32;21 21 31 31 42 42",
    "11 11 11 11 11 22;12 12 22 22 32 32;21 21 31 31 42 42",
    "11 11 11 11 11 22;12 12 12 22 32 32;21 21 31 31 42 42",
    "11 11 22 22 32 32;21 21 41 41 41 41;31 42 42 42 42 42",
    "11 11 22 32 32 32;21 21 41 41 41 41;31 42 42 42 42 42",
    "11 11 32 32 32 32;21 21 41 41 41 41;31 42 42 42 42 42",
    "11 11 11 11 21 22;12 12 22 22 32 32;21 21 31 31 42 42",
    "11 11 11 11 21 22;12 12 12 22 32 32;21 21 31 31 42 42",
    "11 11 11 21 21 22;12 12 22 22 32 32;21 21 31 31 42 42",
    "11 11 11 11 21 22;12 12 12 22 32 32;21 21 21 31 42 42",
    "11 11 22 32 32 32;21 21 31 41 41 41;31 32 42 42 42 42",
    "11 11 22 22 32 32;21 21 31 41 41 41;31 32 42 42 42 42",
    "11 11 22 22 32 32;21 21 31 41 41 41;31 42 42 42 42 42",
    "11 11 22 32 32 32;21 21 31 41 41 41;31 42 42 42 42 42",
];

const K323_PERIOD: [u64; 21] = [
    1, 0, 0, 18, 0, 0, 4590, 0, 0, 1728720, 0, 0, 876610350, 0, 0, 520461209268, 0, 0, 343838539188144, 0, 0,
];

#[derive(Default)]
struct Board {
    lines: Mutex<Vec<(String, bool)>>,
}

impl Board {
    fn check(&self, name: &str, ok: bool) {
        let _ = writeln!(std::io::stdout().lock(), "{} {name}", if ok { "PASS" } else { "FAIL" });
        self.lines.lock().unwrap().push((name.to_string(), ok));
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&self, name: &str, got: T, want: T) {
        let ok = got == want;
        if ok {
            self.check(name, true);
        } else {
            self.check(&format!("{name} (got {got:?}, want {want:?})"), false);
        }
    }

    fn failures(&self) -> Vec<String> {
        self.lines.lock().unwrap().iter().filter(|(_, ok)| !ok).map(|(n, _)| n.clone()).collect()
    }
}

fn spec(n: u32, r1: u32, r2: u32) -> QuiverSpec {
    QuiverSpec::new(n, r1, r2).unwrap()
}

fn split(h: &HilbertBasis) -> Vec<(i64, usize)> {
    h.count_by_height()
}

fn parse_all(list: &[&str]) -> Vec<Tableau> {
    list.iter().map(|s| s.parse().unwrap()).collect()
}

fn pairs_of(s: QuiverSpec, h: &HilbertBasis) -> Vec<LinkedPair> {
    h.generators
        .iter()
        .map(|g| pair_from_exponent(&ExponentVector::from_point(s, g).unwrap()).unwrap().pair)
        .collect()
}

fn linked(p: &LinkedPair) -> bool {
    let s = p.exponent().spec();
    mon_plus(&p.plus, &s).unwrap() == mon_minus(&p.minus, &s).unwrap()
}

/// Cones built along the way, certified at the end.
#[derive(Default)]
struct Built {
    cones: Mutex<Vec<(String, Cone)>>,
    pairs: Mutex<Vec<LinkedPair>>,
}

fn gc_example(board: &Board, built: &Built, n: u32) -> HilbertBasis {
    let s = spec(n, 2, 3);
    let tag = format!("{} K{n}23 GC", n - 2);
    let cone = kronecker_halfspaces(&s).double_description().unwrap();
    let (max_degree, window) = if n == 3 { (1, 2) } else { (3, 2) };
    let hb = hilbert_basis(&cone, &s.height(), max_degree, window, LATTICE_CAP).unwrap();
    let pairs = pairs_of(s, &hb);
    board.eq(
        &format!("{tag}: every generator is a semi-standard pair"),
        pairs.iter().all(|p| p.is_semistandard()),
        true,
    );
    let poly = cone.slice(1, &s.height()).unwrap();
    let fan = normal_fan_rays(&poly).unwrap();
    let toric = classify_toric(&fan).unwrap();
    if n == 3 {
        board.eq("1 K323 GC: generators", hb.generators.len(), 20);
        board.eq("1 K323 GC: all of height 1", split(&hb), vec![(1, 20)]);
        board.eq("1 K323 GC: polytope vertices", poly.vertices.len(), 18);
        board.eq("1 K323 GC: fan rays", fan.rays.len(), 13);
        board.eq(
            "1 K323 GC: gorenstein, fano, terminal",
            (toric.gorenstein, toric.fano, toric.terminal),
            (Some(true), Some(true), Some(true)),
        );
    } else {
        board.eq("2 K423 GC: generators", hb.generators.len(), 232);
        board.eq("2 K423 GC: split by height", split(&hb), vec![(1, 126), (2, 86), (3, 20)]);
        board.eq("2 K423 GC: nothing above height 3 in the window", hb.window_clean, true);
        let got: BTreeSet<String> = hb
            .heights
            .iter()
            .zip(&pairs)
            .filter(|(&h, _)| h == 3)
            .map(|(_, p)| p.plus.to_string())
            .collect();
        let reference = parse_all(&K423_DEGREE_THREE);
        board.eq(
            "2 K423 GC: reference tableaux are 3 x 6",
            reference.iter().all(|t| t.shape() == (3, 6)),
            true,
        );
        let want: BTreeSet<String> = reference.iter().map(|t| t.to_string()).collect();
        board.eq("2 K423 GC: height-3 generators are the reference tableaux", got, want);
        board.eq("2 K423 GC: polytope vertices", poly.vertices.len(), 141);
        board.eq("2 K423 GC: fan rays", fan.rays.len(), 26);
        board.eq("2 K423 GC: fano, not gorenstein", (toric.fano, toric.gorenstein), (Some(true), Some(false)));
    }
    built.cones.lock().unwrap().push((tag, cone));
    built.pairs.lock().unwrap().extend(pairs);
    hb
}

fn mf_example(board: &Board, built: &Built, n: u32) -> (PipelineReport, LaurentPolynomial) {
    let s = spec(n, 2, 3);
    let c = grading_c2(&s).unwrap();
    let (max_degree, certify_window) = if n == 3 { (4, 2) } else { (2, 1) };
    let cfg = PipelineConfig {
        max_degree,
        certify_window,
        ..PipelineConfig::default()
    };
    let r = sagbi_pipeline(&c, &cfg).unwrap();
    let [(_, _, vert), (_, _, horiz)] = mf_cones(&c).unwrap();
    let both = intersect(&vert, &horiz).unwrap();
    for (name, cone) in [("vertical", vert), ("horizontal", horiz), ("intersection", both)] {
        built.cones.lock().unwrap().push((format!("K{n}23 MF {name}"), cone));
    }
    built.pairs.lock().unwrap().extend(r.generators.iter().filter_map(|g| g.pair.clone()));
    let f = laurent_from_rays(&r.fan).unwrap();
    let inv = newton_invariants(&f).unwrap();
    let verified = r.generators.iter().filter(|g| g.lm_verified).count();
    if n == 3 {
        board.eq("3 K323 MF: generators", r.generators.len(), 20);
        board.eq("3 K323 MF: all of height 1", split(&r.hilbert), vec![(1, 20)]);
        let plus: Vec<Option<Tableau>> = r.generators.iter().map(|g| g.pair.as_ref().map(|p| p.plus.clone())).collect();
        let minus: Vec<Option<Tableau>> =
            r.generators.iter().map(|g| g.pair.as_ref().map(|p| p.minus.clone())).collect();
        board.eq("3 K323 MF: plus tableaux in reference order", plus, parse_all(&K323_MF_PLUS).into_iter().map(Some).collect());
        board.eq(
            "3 K323 MF: minus tableaux in reference order",
            minus,
            parse_all(&K323_MF_MINUS).into_iter().map(Some).collect(),
        );
        board.eq("3 K323 MF: leading monomials verified", verified, 20);
        board.eq("3 K323 MF: no fallback", r.fallback_needed, 0);
        board.eq("3 K323 MF: polytope vertices", r.polytope.vertices, 20);
        board.eq("3 K323 MF: vertices are the only lattice points", r.polytope.lattice_points, 20);
        board.eq("3 K323 MF: fan rays", r.fan.rays.len(), 12);
        board.eq(
            "3 K323 MF: gorenstein, fano, terminal",
            (r.toric.gorenstein, r.toric.fano, r.toric.terminal),
            (Some(true), Some(true), Some(true)),
        );
        board.eq("3 K323 MF: mirror newton polytope reflexive", inv.reflexive, Some(true));
        board.eq("3 K323 MF: mirror lattice points", inv.lattice_points, Some(13));
        let p = classical_period(&f, 21, TERM_CAP).unwrap();
        let want: Vec<BigInt> = K323_PERIOD.iter().map(|&x| BigInt::from(x)).collect();
        board.eq("3 K323 MF: period c_0..c_20", p.coefficients, want);
    } else {
        board.eq("4 K423 MF: generators", r.generators.len(), 206);
        board.eq("4 K423 MF: split by height", split(&r.hilbert), vec![(1, 126), (2, 80)]);
        board.eq("4 K423 MF: leading monomials verified", verified, 206);
        board.eq("4 K423 MF: polytope vertices", r.polytope.vertices, 142);
        board.eq("4 K423 MF: some vertex is not a lattice point", r.polytope.is_lattice, false);
        board.eq(
            "4 K423 MF: gorenstein, fano, terminal",
            (r.toric.gorenstein, r.toric.fano, r.toric.terminal),
            (Some(true), Some(true), Some(true)),
        );
        board.eq("4 K423 MF: fano index", r.toric.fano_index.clone(), Some(BigInt::from(4)));
        board.eq("4 K423 MF: mirror polytope vertices", inv.vertices, 30);
        board.eq("4 K423 MF: mirror lattice points are vertices and origin", inv.lattice_points, Some(31));
        board.eq("4 K423 MF: origin is interior", inv.origin_interior, true);
    }
    (r, f)
}

fn bijection_sweep(board: &Board, built: &Built) {
    let mut specs = Vec::new();
    for n in 1..=12u32 {
        for r1 in 1..=12u32 {
            for r2 in 1..=12u32 {
                if n * r1 * r2 <= 12 {
                    specs.push(spec(n, r1, r2));
                }
            }
        }
    }
    let bad: Vec<String> = specs
        .par_iter()
        .flat_map_iter(|&s| (1..=3u32).map(move |h| (s, h)))
        .filter_map(|(s, h)| {
            let cone = kronecker_halfspaces(&s).double_description().unwrap();
            let points = lattice_points_at_height(&cone, h as i64, &s.height(), LATTICE_CAP).unwrap();
            let lattice = enumerate_pairs_at_height(&s, h, LATTICE_CAP).unwrap();
            let tableaux = enumerate_pairs_backtracking(&s, h, LATTICE_CAP).unwrap();
            let monomials: BTreeSet<Vec<i64>> = lattice.iter().map(|p| p.exponent().to_point()).collect();
            let points: BTreeSet<Vec<i64>> = points.into_iter().collect();
            let ok = monomials == points
                && lattice.len() == points.len()
                && lattice.iter().all(|p| p.is_semistandard())
                && lattice == tableaux;
            built.pairs.lock().unwrap().extend(lattice);
            (!ok).then(|| format!("n={} r1={} r2={} h={h}", s.n, s.r1, s.r2))
        })
        .collect();
    board.eq(&format!("5a bijection and dual enumerators on {} specs, heights 1..3", specs.len()), bad, vec![]);
}

fn semi_invariance(board: &Board) {
    let s = spec(3, 2, 3);
    let cone = kronecker_halfspaces(&s).double_description().unwrap();
    let hb = hilbert_basis(&cone, &s.height(), 1, 1, LATTICE_CAP).unwrap();
    let pairs = pairs_of(s, &hb);
    let bad = pairs
        .par_iter()
        .enumerate()
        .filter(|(i, p)| {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + *i as u64);
            let f = expand(p, ORBIT_CAP).unwrap();
            !(0..5).all(|_| {
                let g = GroupElement::random(&s, &mut rng);
                semi_invariance_check(&f, &g, 2, &mut rng).unwrap()
            })
        })
        .count();
    board.eq(&format!("5c semi-invariance of {} degree-1 generators, 5 group elements each", pairs.len()), bad, 0);
}

fn cone_agreement(board: &Board, built: &Built) {
    for s in [spec(3, 2, 3), spec(4, 2, 3)] {
        let a = kronecker_halfspaces(&s).double_description().unwrap();
        let b = kronecker_intersection(&s).unwrap();
        let a_in_b = a.rays().unwrap().iter().all(|r| b.contains(r).unwrap());
        let b_in_a = b.rays().unwrap().iter().all(|r| a.contains(r).unwrap());
        board.eq(
            &format!("5d intersection equals the kronecker cone for n={} r1={} r2={}", s.n, s.r1, s.r2),
            (a_in_b, b_in_a, a.lineality.is_empty() && b.lineality.is_empty()),
            (true, true, true),
        );
        built.cones.lock().unwrap().push((format!("kronecker intersection n={}", s.n), b));
    }
}

fn matching_fields(board: &Board) {
    for s in [spec(3, 2, 3), spec(4, 2, 3)] {
        for o in [Orientation::Vertical, Orientation::Horizontal] {
            let g = GrassmannianSpec::new(s, o);
            let subsets = binomial(g.big_n(), g.r());
            let c0 = induced_matching_field(&grading_c0(&s), &g).unwrap();
            let c2 = induced_matching_field(&grading_c2(&s).unwrap(), &g).unwrap();
            board.eq(
                &format!("5e n={} {o:?}: C0 gives the identity on all {subsets} subsets", s.n),
                (c0.assignment.len(), c0 == block_diagonal_mf(0, g.r(), g.big_n())),
                (subsets, true),
            );
            board.eq(
                &format!("5e n={} {o:?}: C2 gives the block-diagonal field on all {subsets} subsets", s.n),
                (c2.assignment.len(), c2 == block_diagonal_mf(2, g.r(), g.big_n())),
                (subsets, true),
            );
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn random_unimodular(d: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..4 * d {
        let (a, b) = (rng.gen_range(0..d), rng.gen_range(0..d));
        if a == b {
            continue;
        }
        let s = if rng.gen_bool(0.5) { 1 } else { -1 };
        let src = m[b].clone();
        m[a].iter_mut().zip(&src).for_each(|(x, y)| *x += s * y);
    }
    let (a, b) = (rng.gen_range(0..d), rng.gen_range(0..d));
    m.swap(a, b);
    m
}

fn period_invariance(board: &Board, f: &LaurentPolynomial) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let maps: Vec<Vec<Vec<i64>>> = (0..10).map(|_| random_unimodular(f.dim, &mut rng)).collect();
    let base = classical_period(f, 21, TERM_CAP).unwrap();
    let same = maps
        .par_iter()
        .filter(|m| {
            let g = f.transform(m).unwrap();
            g != *f && classical_period(&g, 21, TERM_CAP).unwrap() == base
        })
        .count();
    board.eq("5f period c_0..c_20 unchanged under 10 unimodular maps", same, 10);
}

#[test]
fn acceptance() {
    let board = Board::default();
    let built = Built::default();

    gc_example(&board, &built, 3);
    gc_example(&board, &built, 4);
    let (_, k3_mirror) = mf_example(&board, &built, 3);
    mf_example(&board, &built, 4);

    bijection_sweep(&board, &built);
    let pairs = built.pairs.lock().unwrap().clone();
    let unlinked = pairs.par_iter().filter(|p| !linked(p)).count();
    board.eq(&format!("5b Mon(T+) = Mon(T-) on {} constructed pairs", pairs.len()), unlinked, 0);
    semi_invariance(&board);
    cone_agreement(&board, &built);
    matching_fields(&board);
    period_invariance(&board, &k3_mirror);
    let cones = built.cones.lock().unwrap();
    let uncertified: Vec<&String> = cones.iter().filter(|(_, c)| !c.certify().unwrap()).map(|(n, _)| n).collect();
    board.eq(&format!("5g double-description certificate on {} cones", cones.len()), uncertified, vec![]);

    let failures = board.failures();
    assert!(failures.is_empty(), "failed checks: {failures:#?}");
}
