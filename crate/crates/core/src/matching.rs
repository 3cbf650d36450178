//! Matching fields on the two Grassmannians attached to a Kronecker quiver,
//! canonical tableaux, and the matching-field SAGBI pipeline.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_with::serde_as;

use crate::error::{Error, Result};
use crate::polyhedra::{
    classify_toric, hilbert_basis, intersect, normal_fan_rays, Cone, FanRays, HilbertBasis, Polytope, ToricReport,
};
use crate::semiinvariant::{verify_lm, Grading};
use crate::tableaux::{build_linked_pair, ExponentVector, Label, LinkedPair, QuiverSpec, Side, Tableau};

/// `C_0`: `c^i_{jk} = k j (r2 + 1)^(i - 1)`.
pub fn grading_c0(spec: &QuiverSpec) -> Grading {
    let base = spec.r2 as i64 + 1;
    let mut c = vec![0; spec.dim()];
    for i in 1..=spec.n {
        for j in 1..=spec.r2 {
            for k in 1..=spec.r1 {
                c[spec.index(i, j, k)] = k as i64 * j as i64 * base.pow(i - 1);
            }
        }
    }
    Grading { spec: *spec, c }
}

/// `C_2`: `C_0` with `c^1_{1k} = k (r2+1)^n` and `c^1_{2k} = 2k (r2+1)^n`.
pub fn grading_c2(spec: &QuiverSpec) -> Result<Grading> {
    if spec.r1 != 2 {
        return Err(Error::Unsupported(format!("the C_2 grading needs r1 = 2, got {spec}")));
    }
    let big = (spec.r2 as i64 + 1)
        .checked_pow(spec.n)
        .ok_or(Error::Overflow("C_2 grading"))?;
    let mut g = grading_c0(spec);
    for j in 1..=spec.r2.min(2) {
        for k in 1..=spec.r1 {
            g.c[spec.index(1, j, k)] = j as i64 * k as i64 * big;
        }
    }
    Ok(g)
}

/// How the coordinates of a Grassmannian are laid over those of the quiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    /// `Gr(r2, n r1)`: the matrices `x^i` side by side; rows are `j`.
    Horizontal,
    /// `Gr(r1, n r2)`: the matrices `x^i` stacked and transposed; rows are `k`.
    Vertical,
}

impl Orientation {
    /// The tableau side whose columns are the Plücker monomials.
    pub fn side(self) -> Side {
        match self {
            Orientation::Horizontal => Side::Plus,
            Orientation::Vertical => Side::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GrassmannianSpec {
    pub quiver: QuiverSpec,
    pub orientation: Orientation,
}

impl GrassmannianSpec {
    pub fn new(quiver: QuiverSpec, orientation: Orientation) -> Self {
        GrassmannianSpec { quiver, orientation }
    }

    pub fn r(&self) -> usize {
        self.orientation.side().rows(&self.quiver) as usize
    }

    pub fn big_n(&self) -> usize {
        (self.quiver.n * self.orientation.side().label_range(&self.quiver)) as usize
    }

    /// Tableau label of a (0-based) matrix column.
    pub fn label(&self, col: usize) -> Label {
        let m = self.orientation.side().label_range(&self.quiver) as usize;
        Label::new((col / m + 1) as u32, (col % m + 1) as u32)
    }

    /// Flat quiver coordinate of the matrix entry `(row, col)`.
    pub fn variable(&self, row: usize, col: usize) -> usize {
        self.orientation.side().variable(&self.quiver, row, self.label(col))
    }
}

/// For each `r`-subset `J` (0-based, increasing) a permutation `sigma`:
/// row `t` of the chosen monomial uses column `J[sigma[t]]`.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingField {
    pub r: usize,
    pub big_n: usize,
    #[serde_as(as = "Vec<(_, _)>")]
    pub assignment: BTreeMap<Vec<usize>, Vec<usize>>,
}

impl MatchingField {
    pub fn get(&self, subset: &[usize]) -> Option<&[usize]> {
        self.assignment.get(subset).map(Vec::as_slice)
    }

    /// Matrix columns of the chosen monomial, row by row.
    pub fn chosen_columns(&self, subset: &[usize]) -> Option<Vec<usize>> {
        self.get(subset).map(|s| s.iter().map(|&t| subset[t]).collect())
    }
}

fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for x in start..=n - (r - cur.len()) {
            cur.push(x);
            rec(x + 1, n, r, cur, out);
            cur.pop();
        }
    }
    if r <= n {
        rec(0, n, r, &mut cur, &mut out);
    }
    out
}

fn permutations(r: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..r).collect();
    let mut out = vec![p.clone()];
    while next_permutation(&mut p) {
        out.push(p.clone());
    }
    out
}

/// Advances to the next lexicographic arrangement; false after the last one.
fn next_permutation<T: Ord>(p: &mut [T]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// `Lambda_b`: the transposition of the first two rows exactly when
/// `|J ∩ {1..b}| = 1`.
pub fn block_diagonal_mf(b: usize, r: usize, big_n: usize) -> MatchingField {
    let assignment = subsets(big_n, r)
        .into_iter()
        .map(|j| {
            let mut sigma: Vec<usize> = (0..r).collect();
            if r >= 2 && j.iter().filter(|&&x| x < b).count() == 1 {
                sigma.swap(0, 1);
            }
            (j, sigma)
        })
        .collect();
    MatchingField { r, big_n, assignment }
}

/// The matching field of leading terms of the Plücker coordinates under `c`.
/// Fails with [`Error::Incoherent`] naming the first subset with a tie.
pub fn induced_matching_field(c: &Grading, g: &GrassmannianSpec) -> Result<MatchingField> {
    if c.spec != g.quiver {
        return Err(Error::Shape(format!("grading for {} but Grassmannian of {}", c.spec, g.quiver)));
    }
    let (r, big_n) = (g.r(), g.big_n());
    let perms = permutations(r);
    let mut assignment = BTreeMap::new();
    for j in subsets(big_n, r) {
        let mut best: Option<(i128, &Vec<usize>)> = None;
        let mut tie = false;
        for p in &perms {
            let w: i128 = p
                .iter()
                .enumerate()
                .map(|(row, &t)| c.c[g.variable(row, j[t])] as i128)
                .sum();
            match best {
                Some((b, _)) if w < b => {}
                Some((b, _)) if w == b => tie = true,
                _ => {
                    best = Some((w, p));
                    tie = false;
                }
            }
        }
        if tie {
            let one_based: Vec<usize> = j.iter().map(|x| x + 1).collect();
            return Err(Error::Incoherent(format!(
                "{:?} orientation: the minor on columns {one_based:?} has no unique leading term",
                g.orientation
            )));
        }
        let sigma = best.expect("at least one permutation").1.clone();
        assignment.insert(j, sigma);
    }
    Ok(MatchingField { r, big_n, assignment })
}

fn check_shape(lambda: &MatchingField, g: &GrassmannianSpec) -> Result<()> {
    if lambda.r != g.r() || lambda.big_n != g.big_n() {
        return Err(Error::Shape(format!(
            "matching field for Gr({}, {}) used on Gr({}, {})",
            lambda.r,
            lambda.big_n,
            g.r(),
            g.big_n()
        )));
    }
    Ok(())
}

/// Exponent vectors, in quiver coordinates, of the chosen monomials.
pub fn mf_exponents(lambda: &MatchingField, g: &GrassmannianSpec) -> Result<Vec<Vec<i64>>> {
    check_shape(lambda, g)?;
    Ok(lambda
        .assignment
        .keys()
        .map(|j| {
            let mut v = vec![0i64; g.quiver.dim()];
            for (row, col) in lambda.chosen_columns(j).expect("own key").into_iter().enumerate() {
                v[g.variable(row, col)] += 1;
            }
            v
        })
        .collect())
}

pub fn mf_cone(lambda: &MatchingField, g: &GrassmannianSpec) -> Result<Cone> {
    Cone::from_rays(g.quiver.dim(), &mf_exponents(lambda, g)?).double_description()
}

pub fn mf_polytope(lambda: &MatchingField, g: &GrassmannianSpec) -> Result<Polytope> {
    let pts: Vec<Vec<num_rational::BigRational>> = mf_exponents(lambda, g)?
        .iter()
        .map(|v| v.iter().map(|&x| num_rational::BigRational::from_integer(x.into())).collect())
        .collect();
    Polytope::from_points(g.quiver.dim(), &pts)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    /// 0-based columns of the Plücker coordinate.
    pub subset: Vec<usize>,
    /// Flat quiver coordinates with exponent one.
    pub support: Vec<usize>,
    /// The single-column tableau, top to bottom.
    pub column: Vec<Label>,
}

/// Leading monomials of the Plücker coordinates ordered by their column
/// words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnCatalog {
    pub grassmannian: GrassmannianSpec,
    pub entries: Vec<CatalogEntry>,
}

impl ColumnCatalog {
    pub fn new(lambda: &MatchingField, g: &GrassmannianSpec) -> Result<Self> {
        check_shape(lambda, g)?;
        let mut entries: Vec<CatalogEntry> = lambda
            .assignment
            .keys()
            .map(|j| {
                let cols = lambda.chosen_columns(j).expect("own key");
                let mut support: Vec<usize> = cols.iter().enumerate().map(|(row, &c)| g.variable(row, c)).collect();
                support.sort_unstable();
                CatalogEntry {
                    subset: j.clone(),
                    support,
                    column: cols.iter().map(|&c| g.label(c)).collect(),
                }
            })
            .collect();
        entries.sort_by(|a, b| a.column.cmp(&b.column));
        Ok(ColumnCatalog {
            grassmannian: *g,
            entries,
        })
    }

    pub fn side(&self) -> Side {
        self.grassmannian.orientation.side()
    }
}

/// Default bound on search nodes of [`canonical_tableau`].
pub const DEFAULT_SEARCH_CAP: u64 = 10_000_000;

struct Search<'a> {
    cat: &'a ColumnCatalog,
    // coordinates covered by some entry at index >= i
    reach: Vec<Vec<bool>>,
    a: Vec<u32>,
    nodes: u64,
    cap: u64,
}

impl Search<'_> {
    fn run(&mut self, i: usize, rest: &mut [u32]) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Error::cap("canonical tableau search", self.cap, self.nodes - 1));
        }
        if rest.iter().all(|&x| x == 0) {
            self.a[i..].iter_mut().for_each(|x| *x = 0);
            return Ok(true);
        }
        if i == self.cat.entries.len() || rest.iter().zip(&self.reach[i]).any(|(&x, &ok)| x > 0 && !ok) {
            return Ok(false);
        }
        let support = &self.cat.entries[i].support;
        let top = support.iter().map(|&v| rest[v]).min().unwrap_or(0);
        for m in (0..=top).rev() {
            for &v in support {
                rest[v] -= m;
            }
            self.a[i] = m;
            let found = self.run(i + 1, rest)?;
            for &v in support {
                rest[v] += m;
            }
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Lex-maximal multiplicities `a` over the catalog with `sum a_J exp(C_J) = m`.
pub fn canonical_factorization(m: &ExponentVector, cat: &ColumnCatalog, cap: u64) -> Result<Option<Vec<u32>>> {
    if m.spec() != cat.grassmannian.quiver {
        return Err(Error::Shape(format!(
            "exponent for {} but catalog for {}",
            m.spec(),
            cat.grassmannian.quiver
        )));
    }
    let dim = m.entries.len();
    let len = cat.entries.len();
    let mut reach = vec![vec![false; dim]; len + 1];
    for i in (0..len).rev() {
        reach[i] = reach[i + 1].clone();
        for &v in &cat.entries[i].support {
            reach[i][v] = true;
        }
    }
    let mut s = Search {
        cat,
        reach,
        a: vec![0; len],
        nodes: 0,
        cap,
    };
    let mut rest = m.entries.clone();
    Ok(s.run(0, &mut rest)?.then_some(s.a))
}

/// `a_1` copies of `C_{J_1}`, then `a_2` copies of `C_{J_2}`, and so on.
pub fn canonical_tableau(m: &ExponentVector, cat: &ColumnCatalog, cap: u64) -> Result<Option<Tableau>> {
    let Some(a) = canonical_factorization(m, cat, cap)? else {
        return Ok(None);
    };
    let columns: Vec<Vec<Label>> = cat
        .entries
        .iter()
        .zip(&a)
        .flat_map(|(e, &k)| std::iter::repeat_n(e.column.clone(), k as usize))
        .collect();
    let rows = cat.grassmannian.r();
    if columns.is_empty() {
        return Ok(Some(Tableau::empty(rows)));
    }
    Tableau::from_columns(&columns, rows).map(Some)
}

/// Canonical tableaux on both sides, linked.
pub fn canonical_linked_pair(
    v: &ExponentVector,
    plus: &ColumnCatalog,
    minus: &ColumnCatalog,
    cap: u64,
) -> Result<Option<LinkedPair>> {
    if plus.side() != Side::Plus || minus.side() != Side::Minus {
        return Err(Error::Precondition("catalogs passed on the wrong sides".into()));
    }
    let (Some(tp), Some(tm)) = (canonical_tableau(v, plus, cap)?, canonical_tableau(v, minus, cap)?) else {
        return Ok(None);
    };
    build_linked_pair(&v.spec(), tp, tm)
}

/// All distinct arrangements of each row, in lex order.
fn row_arrangements(t: &Tableau) -> Vec<Vec<Vec<Label>>> {
    t.rows()
        .iter()
        .map(|row| {
            let mut p = row.clone();
            p.sort();
            let mut out = vec![p.clone()];
            while next_permutation(&mut p) {
                out.push(p.clone());
            }
            out
        })
        .collect()
}

/// Odometer over the product of per-row arrangements, last row fastest.
fn product_tableaux(choices: &[Vec<Vec<Label>>]) -> impl Iterator<Item = Tableau> + '_ {
    let mut idx = vec![0usize; choices.len()];
    let mut done = choices.iter().any(Vec::is_empty);
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let rows: Vec<Vec<Label>> = idx.iter().zip(choices).map(|(&i, c)| c[i].clone()).collect();
        let mut t = choices.len();
        loop {
            if t == 0 {
                done = true;
                break;
            }
            t -= 1;
            idx[t] += 1;
            if idx[t] < choices[t].len() {
                break;
            }
            idx[t] = 0;
        }
        Tableau::new(rows).ok()
    })
}

/// Searches pairs obtained by rearranging the entries within each row of
/// `pair`, plus side outer and minus side inner, for one whose expansion
/// has leading monomial `Mon(pair)`. At most `tries` pairs are expanded.
pub fn fallback_search(pair: &LinkedPair, c: &Grading, orbit_cap: u64, tries: u64) -> Result<Option<LinkedPair>> {
    let plus = row_arrangements(&pair.plus);
    let minus = row_arrangements(&pair.minus);
    let mut n = 0u64;
    for tp in product_tableaux(&plus) {
        for tm in product_tableaux(&minus) {
            n += 1;
            if n > tries {
                return Err(Error::cap("row rearrangement search", tries, tries));
            }
            let Some(cand) = build_linked_pair(&pair.spec, tp.clone(), tm)? else {
                continue;
            };
            if verify_lm(&cand, c, orbit_cap)? {
                return Ok(Some(cand));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorReport {
    pub exponent: ExponentVector,
    pub degree: i64,
    pub pair: Option<LinkedPair>,
    pub lm_verified: bool,
    pub fallback_used: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeSummary {
    pub dim: usize,
    pub vertices: usize,
    pub lattice_points: u64,
    pub is_lattice: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub spec: QuiverSpec,
    pub grading: Grading,
    pub vertical: MatchingField,
    pub horizontal: MatchingField,
    pub hilbert: HilbertBasis,
    pub generators: Vec<GeneratorReport>,
    pub all_verified: bool,
    pub fallback_needed: usize,
    pub polytope: PolytopeSummary,
    pub fan: FanRays,
    pub toric: ToricReport,
    /// Hypotheses taken on trust rather than checked.
    pub assumptions: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub max_degree: i64,
    pub certify_window: i64,
    pub lattice_cap: u64,
    pub orbit_cap: u64,
    pub search_cap: u64,
    pub fallback_tries: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            max_degree: 4,
            certify_window: 2,
            lattice_cap: 50_000_000,
            orbit_cap: crate::semiinvariant::DEFAULT_ORBIT_CAP,
            search_cap: DEFAULT_SEARCH_CAP,
            fallback_tries: 10_000,
        }
    }
}

/// Cones `C_1` (vertical) and `C_2` (horizontal) of the matching fields
/// induced by `c`, with the fields themselves.
pub fn mf_cones(c: &Grading) -> Result<[(MatchingField, GrassmannianSpec, Cone); 2]> {
    let spec = c.spec;
    let build = |o| -> Result<_> {
        let g = GrassmannianSpec::new(spec, o);
        let lambda = induced_matching_field(c, &g)?;
        let cone = mf_cone(&lambda, &g)?;
        Ok((lambda, g, cone))
    };
    Ok([build(Orientation::Vertical)?, build(Orientation::Horizontal)?])
}

fn verify_generator(
    v: &[i64],
    degree: i64,
    c: &Grading,
    plus: &ColumnCatalog,
    minus: &ColumnCatalog,
    cfg: &PipelineConfig,
) -> GeneratorReport {
    let spec = c.spec;
    let exponent = match ExponentVector::from_point(spec, v) {
        Ok(e) => e,
        Err(e) => {
            return GeneratorReport {
                exponent: ExponentVector::zero(spec),
                degree,
                pair: None,
                lm_verified: false,
                fallback_used: false,
                error: Some(e.to_string()),
            }
        }
    };
    let mut report = GeneratorReport {
        exponent: exponent.clone(),
        degree,
        pair: None,
        lm_verified: false,
        fallback_used: false,
        error: None,
    };
    let run = |report: &mut GeneratorReport| -> Result<()> {
        let Some(pair) = canonical_linked_pair(&exponent, plus, minus, cfg.search_cap)? else {
            report.error = Some("no canonical factorization on one side".into());
            return Ok(());
        };
        if verify_lm(&pair, c, cfg.orbit_cap)? {
            report.pair = Some(pair);
            report.lm_verified = true;
            return Ok(());
        }
        report.pair = Some(pair.clone());
        if let Some(found) = fallback_search(&pair, c, cfg.orbit_cap, cfg.fallback_tries)? {
            report.pair = Some(found);
            report.lm_verified = true;
            report.fallback_used = true;
        } else {
            report.error = Some("no row rearrangement has the required leading monomial".into());
        }
        Ok(())
    };
    if let Err(e) = run(&mut report) {
        report.error = Some(e.to_string());
    }
    report
}

/// Runs the matching-field construction for the grading `c`.
pub fn sagbi_pipeline(c: &Grading, cfg: &PipelineConfig) -> Result<PipelineReport> {
    let spec = c.spec;
    let [(vertical, gv, cv), (horizontal, gh, ch)] = mf_cones(c)?;
    let cone = intersect(&cv, &ch)?;
    let height = spec.height();
    let hilbert = hilbert_basis(&cone, &height, cfg.max_degree, cfg.certify_window, cfg.lattice_cap)?;
    let minus = ColumnCatalog::new(&vertical, &gv)?;
    let plus = ColumnCatalog::new(&horizontal, &gh)?;
    let generators: Vec<GeneratorReport> = hilbert
        .generators
        .par_iter()
        .zip(&hilbert.heights)
        .map(|(v, &h)| verify_generator(v, h, c, &plus, &minus, cfg))
        .collect();
    let all_verified = hilbert.window_clean && generators.iter().all(|g| g.lm_verified);
    let fallback_needed = generators.iter().filter(|g| g.fallback_used).count();
    let poly = cone.slice(1, &height)?;
    let fan = normal_fan_rays(&poly)?;
    let toric = classify_toric(&fan)?;
    let lattice_points =
        crate::polyhedra::LatticeEnumerator::new(&cone, 1, &height)?.count(cfg.lattice_cap)?;
    let polytope = PolytopeSummary {
        dim: poly.dim(),
        vertices: poly.vertices.len(),
        lattice_points,
        is_lattice: poly.is_lattice(),
    };
    let assumptions = vec![format!(
        "the Plücker coordinates of Gr({}, {}) and Gr({}, {}) form SAGBI bases for the induced matching fields",
        gv.r(),
        gv.big_n(),
        gh.r(),
        gh.big_n()
    )];
    Ok(PipelineReport {
        spec,
        grading: c.clone(),
        vertical,
        horizontal,
        hilbert,
        generators,
        all_verified,
        fallback_needed,
        polytope,
        fan,
        toric,
        assumptions,
    })
}
