//! Double-labelled tableaux, linked pairs and their exponent vectors.
//!
//! Coordinates `x^i_{jk}` live on `n` matrices of shape `r2 x r1`: `i` is the
//! arrow, `j` the row (in `1..=r2`) and `k` the column (in `1..=r1`). A label
//! `(i, k)` in row `j` of the plus tableau and a label `(i, j)` in row `k` of
//! the minus tableau both stand for `x^i_{jk}`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyhedra::{kronecker_halfspaces, lattice_points_at_height, Height};

/// Arrow count and dimension vector of a Kronecker quiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuiverSpec {
    pub n: u32,
    pub r1: u32,
    pub r2: u32,
}

impl QuiverSpec {
    pub fn new(n: u32, r1: u32, r2: u32) -> Result<Self> {
        if n == 0 || r1 == 0 || r2 == 0 {
            return Err(Error::InvalidSpec(format!(
                "n, r1, r2 must be positive (got n={n}, r1={r1}, r2={r2})"
            )));
        }
        Ok(Self { n, r1, r2 })
    }

    pub fn coprime(&self) -> bool {
        self.r1.gcd(&self.r2) == 1
    }

    /// Stability parameter `(-r2, r1)`.
    pub fn theta(&self) -> (i64, i64) {
        (-(self.r2 as i64), self.r1 as i64)
    }

    pub fn lcm(&self) -> u32 {
        self.r1.lcm(&self.r2)
    }

    /// Number of coordinates `n * r1 * r2`.
    pub fn dim(&self) -> usize {
        (self.n * self.r1 * self.r2) as usize
    }

    /// Flat index of `x^i_{jk}` (all arguments 1-based), ordered by `i`, then `j`, then `k`.
    pub fn index(&self, i: u32, j: u32, k: u32) -> usize {
        debug_assert!((1..=self.n).contains(&i));
        debug_assert!((1..=self.r2).contains(&j));
        debug_assert!((1..=self.r1).contains(&k));
        (((i - 1) * self.r2 + (j - 1)) * self.r1 + (k - 1)) as usize
    }

    /// Inverse of [`QuiverSpec::index`].
    pub fn coords(&self, idx: usize) -> (u32, u32, u32) {
        let idx = idx as u32;
        let k = idx % self.r1 + 1;
        let j = (idx / self.r1) % self.r2 + 1;
        let i = idx / (self.r1 * self.r2) + 1;
        (i, j, k)
    }

    /// Height of the Kronecker cone: coordinate sum divided by `lcm(r1, r2)`.
    pub fn height(&self) -> Height {
        Height::uniform(self.dim(), self.lcm() as i64)
    }

    /// Expected dimension `n r1 r2 - r1^2 - r2^2 + 1` of the moduli space (coprime case).
    pub fn expected_dimension(&self) -> i64 {
        let (n, r1, r2) = (self.n as i64, self.r1 as i64, self.r2 as i64);
        n * r1 * r2 - r1 * r1 - r2 * r2 + 1
    }
}

impl fmt::Display for QuiverSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K^{}_{{{},{}}}", self.n, self.r1, self.r2)
    }
}

/// Which tableau of a linked pair a label belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// `r2` rows, labels `(arrow, k)` with `k <= r1`.
    Plus,
    /// `r1` rows, labels `(arrow, j)` with `j <= r2`.
    Minus,
}

impl Side {
    pub fn rows(self, spec: &QuiverSpec) -> u32 {
        match self {
            Side::Plus => spec.r2,
            Side::Minus => spec.r1,
        }
    }

    pub fn label_range(self, spec: &QuiverSpec) -> u32 {
        match self {
            Side::Plus => spec.r1,
            Side::Minus => spec.r2,
        }
    }

    /// Flat coordinate index of a label sitting in (0-based) `row` on this side.
    pub fn variable(self, spec: &QuiverSpec, row: usize, label: Label) -> usize {
        let row = row as u32 + 1;
        match self {
            Side::Plus => spec.index(label.first, row, label.second),
            Side::Minus => spec.index(label.first, label.second, row),
        }
    }

    /// All labels valid on this side, in increasing order.
    pub fn alphabet(self, spec: &QuiverSpec) -> Vec<Label> {
        let m = self.label_range(spec);
        (1..=spec.n)
            .flat_map(|i| (1..=m).map(move |p| Label::new(i, p)))
            .collect()
    }
}

/// A double label `ip`; ordered lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[u32; 2]", into = "[u32; 2]")]
pub struct Label {
    pub first: u32,
    pub second: u32,
}

impl Label {
    pub const fn new(first: u32, second: u32) -> Self {
        Self { first, second }
    }
}

impl From<[u32; 2]> for Label {
    fn from([first, second]: [u32; 2]) -> Self {
        Self { first, second }
    }
}

impl From<Label> for [u32; 2] {
    fn from(l: Label) -> Self {
        [l.first, l.second]
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.first < 10 && self.second < 10 {
            write!(f, "{}{}", self.first, self.second)
        } else {
            write!(f, "{}:{}", self.first, self.second)
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    /// Accepts `i:p` or the compact two-digit form `ip`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad label {s:?}"));
        if let Some((a, b)) = s.split_once(':') {
            let first = a.trim().parse().map_err(|_| bad())?;
            let second = b.trim().parse().map_err(|_| bad())?;
            return Ok(Label::new(first, second));
        }
        let digits: Vec<u32> = s.chars().map(|c| c.to_digit(10)).collect::<Option<_>>().ok_or_else(bad)?;
        match digits.as_slice() {
            [a, b] => Ok(Label::new(*a, *b)),
            _ => Err(bad()),
        }
    }
}

/// A rectangular tableau of labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Label>>", into = "Vec<Vec<Label>>")]
pub struct Tableau {
    rows: Vec<Vec<Label>>,
}

impl Tableau {
    pub fn new(rows: Vec<Vec<Label>>) -> Result<Self> {
        if let Some(first) = rows.first() {
            let width = first.len();
            if let Some(bad) = rows.iter().position(|r| r.len() != width) {
                return Err(Error::Shape(format!(
                    "row {} has length {} but row 1 has length {width}",
                    bad + 1,
                    rows[bad].len()
                )));
            }
        }
        Ok(Self { rows })
    }

    /// An `rows x 0` tableau.
    pub fn empty(rows: usize) -> Self {
        Self {
            rows: vec![Vec::new(); rows],
        }
    }

    pub fn rows(&self) -> &[Vec<Label>] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.row_count(), self.col_count())
    }

    pub fn cell_count(&self) -> usize {
        self.row_count() * self.col_count()
    }

    pub fn get(&self, row: usize, col: usize) -> Label {
        self.rows[row][col]
    }

    pub fn column(&self, col: usize) -> Vec<Label> {
        self.rows.iter().map(|r| r[col]).collect()
    }

    /// Tableau whose columns are the given columns, left to right.
    pub fn from_columns(columns: &[Vec<Label>], rows: usize) -> Result<Self> {
        if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
            return Err(Error::Shape(format!(
                "column of height {} in a tableau with {rows} rows",
                bad.len()
            )));
        }
        let rows = (0..rows)
            .map(|r| columns.iter().map(|c| c[r]).collect())
            .collect();
        Ok(Self { rows })
    }

    /// Rows weakly increasing, columns strictly increasing.
    pub fn is_semistandard(&self) -> bool {
        let rows_ok = self
            .rows
            .iter()
            .all(|r| r.windows(2).all(|w| w[0] <= w[1]));
        let cols_ok = self
            .rows
            .windows(2)
            .all(|w| w[0].iter().zip(&w[1]).all(|(a, b)| a < b));
        rows_ok && cols_ok
    }

    fn check_side(&self, side: Side, spec: &QuiverSpec) -> Result<()> {
        if self.cell_count() == 0 {
            return Ok(());
        }
        let rows = side.rows(spec) as usize;
        if self.row_count() != rows {
            return Err(Error::Shape(format!(
                "{side:?} tableau for {spec} needs {rows} rows, got {}",
                self.row_count()
            )));
        }
        let m = side.label_range(spec);
        for l in self.rows.iter().flatten() {
            if !(1..=spec.n).contains(&l.first) || !(1..=m).contains(&l.second) {
                return Err(Error::Label {
                    label: (l.first, l.second),
                    reason: format!("{side:?} labels need arrow in 1..={} and index in 1..={m}", spec.n),
                });
            }
        }
        Ok(())
    }

    /// Exponent vector of the monomial this tableau encodes on the given side.
    pub fn monomial(&self, side: Side, spec: &QuiverSpec) -> Result<ExponentVector> {
        self.check_side(side, spec)?;
        let mut v = ExponentVector::zero(*spec);
        for (r, row) in self.rows.iter().enumerate() {
            for &l in row {
                v.entries[side.variable(spec, r, l)] += 1;
            }
        }
        Ok(v)
    }
}

impl TryFrom<Vec<Vec<Label>>> for Tableau {
    type Error = Error;

    fn try_from(rows: Vec<Vec<Label>>) -> Result<Self> {
        Tableau::new(rows)
    }
}

impl From<Tableau> for Vec<Vec<Label>> {
    fn from(t: Tableau) -> Self {
        t.rows
    }
}

impl FromStr for Tableau {
    type Err = Error;

    /// Rows separated by `;`, labels by whitespace: `"21 21 32; 22 33 33"`.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Ok(Tableau::empty(0));
        }
        let rows = s
            .split(';')
            .map(|r| r.split_whitespace().map(str::parse).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Tableau::new(rows)
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, row) in self.rows.iter().enumerate() {
            if r > 0 {
                f.write_str("; ")?;
            }
            for (c, l) in row.iter().enumerate() {
                if c > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{l}")?;
            }
        }
        Ok(())
    }
}

/// `Mon(T^+)` as an exponent vector.
pub fn mon_plus(t: &Tableau, spec: &QuiverSpec) -> Result<ExponentVector> {
    t.monomial(Side::Plus, spec)
}

/// `Mon(T^-)` as an exponent vector.
pub fn mon_minus(t: &Tableau, spec: &QuiverSpec) -> Result<ExponentVector> {
    t.monomial(Side::Minus, spec)
}

/// Exponents `v^i_{jk}` of a monomial in the quiver coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentVector {
    pub n: u32,
    pub r1: u32,
    pub r2: u32,
    pub entries: Vec<u32>,
}

impl ExponentVector {
    pub fn zero(spec: QuiverSpec) -> Self {
        Self {
            n: spec.n,
            r1: spec.r1,
            r2: spec.r2,
            entries: vec![0; spec.dim()],
        }
    }

    pub fn new(spec: QuiverSpec, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != spec.dim() {
            return Err(Error::Shape(format!(
                "exponent vector of length {} for {spec} (expected {})",
                entries.len(),
                spec.dim()
            )));
        }
        Ok(Self {
            n: spec.n,
            r1: spec.r1,
            r2: spec.r2,
            entries,
        })
    }

    /// Converts a lattice point; fails on negative entries.
    pub fn from_point(spec: QuiverSpec, point: &[i64]) -> Result<Self> {
        let entries = point
            .iter()
            .map(|&x| u32::try_from(x).map_err(|_| Error::Precondition(format!("entry {x} is not a valid exponent"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(spec, entries)
    }

    /// Builds a vector from `(i, j, k, multiplicity)` entries (1-based indices).
    pub fn from_sparse(spec: QuiverSpec, terms: &[(u32, u32, u32, u32)]) -> Self {
        let mut v = Self::zero(spec);
        for &(i, j, k, e) in terms {
            v.entries[spec.index(i, j, k)] += e;
        }
        v
    }

    pub fn spec(&self) -> QuiverSpec {
        QuiverSpec {
            n: self.n,
            r1: self.r1,
            r2: self.r2,
        }
    }

    pub fn get(&self, i: u32, j: u32, k: u32) -> u32 {
        self.entries[self.spec().index(i, j, k)]
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|&e| e as u64).sum()
    }

    /// `total / lcm(r1, r2)` when integral.
    pub fn height(&self) -> Option<u64> {
        let l = self.spec().lcm() as u64;
        let t = self.total();
        t.is_multiple_of(l).then_some(t / l)
    }

    pub fn to_point(&self) -> Vec<i64> {
        self.entries.iter().map(|&e| e as i64).collect()
    }

    /// Sum of the entries of row `j` of all `n` matrices (plus-side row length).
    pub fn plus_row_sum(&self, j: u32) -> u64 {
        let spec = self.spec();
        (1..=spec.n)
            .flat_map(|i| (1..=spec.r1).map(move |k| (i, k)))
            .map(|(i, k)| self.get(i, j, k) as u64)
            .sum()
    }

    /// Sum of the entries of column `k` of all `n` matrices (minus-side row length).
    pub fn minus_row_sum(&self, k: u32) -> u64 {
        let spec = self.spec();
        (1..=spec.n)
            .flat_map(|i| (1..=spec.r2).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j, k) as u64)
            .sum()
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.r1, self.r2, &self.entries).cmp(&(other.n, other.r1, other.r2, &other.entries))
    }
}

/// A cell position, 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

/// One matched pair of cells of a linked pair.
///
/// Its variable is `x^arrow_{jk}` with `j = plus.row + 1` and `k = minus.row + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Atom {
    pub arrow: u32,
    pub plus: Cell,
    pub minus: Cell,
}

/// Two tableaux encoding the same monomial, together with a cell-level link.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinkedPair {
    pub spec: QuiverSpec,
    pub plus: Tableau,
    pub minus: Tableau,
    pub atoms: Vec<Atom>,
}

impl LinkedPair {
    pub fn exponent(&self) -> ExponentVector {
        self.plus
            .monomial(Side::Plus, &self.spec)
            .expect("linked pair holds a valid plus tableau")
    }

    pub fn is_semistandard(&self) -> bool {
        self.plus.is_semistandard() && self.minus.is_semistandard()
    }

    /// Number of columns of the minus tableau (`a r2`).
    pub fn minus_cols(&self) -> usize {
        self.minus.col_count()
    }

    /// Number of columns of the plus tableau (`a r1`).
    pub fn plus_cols(&self) -> usize {
        self.plus.col_count()
    }

    pub fn empty(spec: QuiverSpec) -> Self {
        Self {
            spec,
            plus: Tableau::empty(spec.r2 as usize),
            minus: Tableau::empty(spec.r1 as usize),
            atoms: Vec::new(),
        }
    }
}

/// Links `plus` and `minus` if they encode the same monomial.
///
/// Within each variable class, plus cells and minus cells are matched in
/// row-major reading order.
pub fn build_linked_pair(spec: &QuiverSpec, plus: Tableau, minus: Tableau) -> Result<Option<LinkedPair>> {
    let plus = if plus.cell_count() == 0 { Tableau::empty(spec.r2 as usize) } else { plus };
    let minus = if minus.cell_count() == 0 { Tableau::empty(spec.r1 as usize) } else { minus };
    if plus.row_count() != spec.r2 as usize || minus.row_count() != spec.r1 as usize {
        return Err(Error::Shape(format!(
            "linked pair for {spec} needs {} plus rows and {} minus rows (got {} and {})",
            spec.r2,
            spec.r1,
            plus.row_count(),
            minus.row_count()
        )));
    }
    if plus.cell_count() != minus.cell_count() {
        return Err(Error::Shape(format!(
            "plus tableau has {} cells but minus tableau has {}",
            plus.cell_count(),
            minus.cell_count()
        )));
    }
    let vp = mon_plus(&plus, spec)?;
    let vm = mon_minus(&minus, spec)?;
    if vp != vm {
        return Ok(None);
    }

    let mut minus_cells: Vec<Vec<Cell>> = vec![Vec::new(); spec.dim()];
    for (r, row) in minus.rows().iter().enumerate() {
        for (c, &l) in row.iter().enumerate() {
            minus_cells[Side::Minus.variable(spec, r, l)].push(Cell { row: r, col: c });
        }
    }
    let mut next = vec![0usize; spec.dim()];
    let mut atoms = Vec::with_capacity(plus.cell_count());
    for (r, row) in plus.rows().iter().enumerate() {
        for (c, &l) in row.iter().enumerate() {
            let var = Side::Plus.variable(spec, r, l);
            let minus = minus_cells[var][next[var]];
            next[var] += 1;
            atoms.push(Atom {
                arrow: l.first,
                plus: Cell { row: r, col: c },
                minus,
            });
        }
    }
    Ok(Some(LinkedPair {
        spec: *spec,
        plus,
        minus,
        atoms,
    }))
}

/// A pair rebuilt from an exponent vector, with sorted rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    pub pair: LinkedPair,
    pub semistandard: bool,
}

/// The unique row-sorted linked pair with monomial `v`, if the row lengths are consistent.
pub fn pair_from_exponent(v: &ExponentVector) -> Option<Reconstruction> {
    let spec = v.spec();
    let plus_len = v.plus_row_sum(1);
    let minus_len = v.minus_row_sum(1);
    if (1..=spec.r2).any(|j| v.plus_row_sum(j) != plus_len)
        || (1..=spec.r1).any(|k| v.minus_row_sum(k) != minus_len)
    {
        return None;
    }
    let plus_rows = (1..=spec.r2)
        .map(|j| {
            let mut row = Vec::with_capacity(plus_len as usize);
            for l in Side::Plus.alphabet(&spec) {
                let e = v.get(l.first, j, l.second);
                row.extend(std::iter::repeat_n(l, e as usize));
            }
            row
        })
        .collect();
    let minus_rows = (1..=spec.r1)
        .map(|k| {
            let mut row = Vec::with_capacity(minus_len as usize);
            for l in Side::Minus.alphabet(&spec) {
                let e = v.get(l.first, l.second, k);
                row.extend(std::iter::repeat_n(l, e as usize));
            }
            row
        })
        .collect();
    let plus = Tableau::new(plus_rows).ok()?;
    let minus = Tableau::new(minus_rows).ok()?;
    let pair = build_linked_pair(&spec, plus, minus).ok()??;
    let semistandard = pair.is_semistandard();
    Some(Reconstruction { pair, semistandard })
}

/// Semi-standard linked pairs at a given height, via lattice points of the Kronecker cone.
///
/// Ordered lexicographically by exponent vector.
pub fn enumerate_pairs_at_height(spec: &QuiverSpec, height: u32, cap: u64) -> Result<Vec<LinkedPair>> {
    if height == 0 {
        return Ok(vec![LinkedPair::empty(*spec)]);
    }
    let cone = kronecker_halfspaces(spec).double_description()?;
    let points = lattice_points_at_height(&cone, height as i64, &spec.height(), cap)?;
    points
        .iter()
        .map(|p| {
            let v = ExponentVector::from_point(*spec, p)?;
            let rec = pair_from_exponent(&v).ok_or_else(|| {
                Error::Precondition(format!("cone point {p:?} violates the row-sum equations"))
            })?;
            if !rec.semistandard {
                return Err(Error::Precondition(format!(
                    "cone point {p:?} reconstructs a non-semi-standard pair"
                )));
            }
            Ok(rec.pair)
        })
        .collect()
}

/// Independent enumerator: fills semi-standard plus tableaux cell by cell and
/// keeps those whose row-sorted minus partner is semi-standard.
pub fn enumerate_pairs_backtracking(spec: &QuiverSpec, height: u32, cap: u64) -> Result<Vec<LinkedPair>> {
    let total = height as u64 * spec.lcm() as u64;
    let rows = spec.r2 as usize;
    let cols = (total / spec.r2 as u64) as usize;
    if height == 0 {
        return Ok(vec![LinkedPair::empty(*spec)]);
    }
    // a strictly increasing column needs at least as many letters as rows
    if [Side::Plus, Side::Minus].iter().any(|s| spec.n * s.label_range(spec) < s.rows(spec)) {
        return Ok(Vec::new());
    }
    let alphabet = Side::Plus.alphabet(spec);
    let mut grid = vec![vec![0usize; cols]; rows];
    let mut out = Vec::new();
    let mut visited = 0u64;
    fill_cell(spec, &alphabet, &mut grid, 0, &mut out, &mut visited, cap)?;
    out.sort_by_key(|a| a.exponent());
    Ok(out)
}

fn fill_cell(
    spec: &QuiverSpec,
    alphabet: &[Label],
    grid: &mut Vec<Vec<usize>>,
    pos: usize,
    out: &mut Vec<LinkedPair>,
    visited: &mut u64,
    cap: u64,
) -> Result<()> {
    *visited += 1;
    if *visited > cap {
        return Err(Error::cap("backtracking tableau enumeration", cap, out.len() as u64));
    }
    let rows = grid.len();
    let cols = grid[0].len();
    if pos == rows * cols {
        let plus = Tableau::new(
            grid.iter()
                .map(|r| r.iter().map(|&a| alphabet[a]).collect())
                .collect(),
        )?;
        let v = mon_plus(&plus, spec)?;
        if let Some(rec) = pair_from_exponent(&v) {
            if rec.semistandard {
                out.push(rec.pair);
            }
        }
        return Ok(());
    }
    let (r, c) = (pos / cols, pos % cols);
    let mut lo = 0;
    if c > 0 {
        lo = lo.max(grid[r][c - 1]);
    }
    if r > 0 {
        lo = lo.max(grid[r - 1][c] + 1);
    }
    // room for the strictly increasing tail of this column
    let hi = alphabet.len().saturating_sub(rows - r);
    for a in lo..=hi.min(alphabet.len().saturating_sub(1)) {
        if a + (rows - r) > alphabet.len() {
            break;
        }
        grid[r][c] = a;
        fill_cell(spec, alphabet, grid, pos + 1, out, visited, cap)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k323() -> QuiverSpec {
        QuiverSpec::new(3, 2, 3).unwrap()
    }

    #[test]
    fn one_cell_tableau_is_semistandard() {
        let t: Tableau = "11".parse().unwrap();
        assert!(t.is_semistandard());
    }

    #[test]
    fn reference_degree_three_tableau_is_semistandard() {
        let t: Tableau = "11 11 11 11 11 22;12 12 12 12 32 32;21 21 21 31 42 42".parse().unwrap();
        assert!(t.is_semistandard());
    }

    #[test]
    fn equal_labels_in_a_column_are_not_semistandard() {
        let t: Tableau = "21;21".parse().unwrap();
        assert!(!t.is_semistandard());
    }

    #[test]
    fn ragged_rows_are_a_shape_error() {
        assert!(matches!("11 12;21".parse::<Tableau>(), Err(Error::Shape(_))));
    }

    #[test]
    fn monomials_of_first_matching_field_pair() {
        let spec = k323();
        let plus: Tableau = "21 21;22 31;32 32".parse().unwrap();
        let minus: Tableau = "21 21 32;22 33 33".parse().unwrap();
        let expected = ExponentVector::from_sparse(spec, &[(2, 1, 1, 2), (2, 2, 2, 1), (3, 2, 1, 1), (3, 3, 2, 2)]);
        assert_eq!(mon_plus(&plus, &spec).unwrap(), expected);
        assert_eq!(mon_minus(&minus, &spec).unwrap(), expected);
        let pair = build_linked_pair(&spec, plus, minus).unwrap().unwrap();
        assert_eq!(pair.atoms.len(), 6);
        for atom in &pair.atoms {
            let pl = pair.plus.get(atom.plus.row, atom.plus.col);
            let ml = pair.minus.get(atom.minus.row, atom.minus.col);
            assert_eq!(pl.first, atom.arrow);
            assert_eq!(ml.first, atom.arrow);
            assert_eq!(pl.second as usize, atom.minus.row + 1);
            assert_eq!(ml.second as usize, atom.plus.row + 1);
        }
    }

    #[test]
    fn empty_tableau_has_zero_monomial() {
        let spec = k323();
        assert_eq!(mon_plus(&Tableau::empty(0), &spec).unwrap(), ExponentVector::zero(spec));
    }

    #[test]
    fn single_cell_minus_tableau() {
        let spec = QuiverSpec::new(1, 1, 2).unwrap();
        let t: Tableau = "12".parse().unwrap();
        let v = mon_minus(&t, &spec).unwrap();
        assert_eq!(v.get(1, 2, 1), 1);
        assert_eq!(v.total(), 1);
    }

    #[test]
    fn out_of_range_label_is_rejected() {
        let spec = k323();
        let t: Tableau = "41 11;12 12;21 21".parse().unwrap();
        assert!(matches!(mon_plus(&t, &spec), Err(Error::Label { .. })));
    }

    #[test]
    fn mismatched_monomials_do_not_link() {
        let spec = k323();
        let plus: Tableau = "21 21;22 31;32 32".parse().unwrap();
        let minus: Tableau = "21 21 32;22 33 32".parse().unwrap();
        assert!(build_linked_pair(&spec, plus, minus).unwrap().is_none());
    }

    #[test]
    fn reconstruction_of_first_matching_field_vector() {
        let spec = k323();
        let v = ExponentVector::from_sparse(spec, &[(2, 1, 1, 2), (2, 2, 2, 1), (3, 2, 1, 1), (3, 3, 2, 2)]);
        let rec = pair_from_exponent(&v).unwrap();
        assert!(rec.semistandard);
        assert_eq!(rec.pair.plus, "21 21;22 31;32 32".parse().unwrap());
        assert_eq!(rec.pair.minus, "21 21 32;22 33 33".parse().unwrap());
    }

    #[test]
    fn reconstruction_edge_cases() {
        let spec = k323();
        let rec = pair_from_exponent(&ExponentVector::zero(spec)).unwrap();
        assert!(rec.semistandard);
        assert_eq!(rec.pair.atoms.len(), 0);
        let single = ExponentVector::from_sparse(spec, &[(1, 1, 1, 1)]);
        assert!(pair_from_exponent(&single).is_none());
    }

    #[test]
    fn grassmannian_columns_at_height_one() {
        let spec = QuiverSpec::new(3, 1, 2).unwrap();
        let pairs = enumerate_pairs_backtracking(&spec, 1, 1_000_000).unwrap();
        assert_eq!(pairs.len(), 3);
        assert_eq!(enumerate_pairs_at_height(&spec, 1, 1_000_000).unwrap(), pairs);
    }

    #[test]
    fn height_zero_is_the_empty_pair() {
        let spec = k323();
        let pairs = enumerate_pairs_at_height(&spec, 0, 10).unwrap();
        assert_eq!(pairs, vec![LinkedPair::empty(spec)]);
    }

    #[test]
    fn k323_has_twenty_pairs_at_height_one() {
        let spec = k323();
        let lattice = enumerate_pairs_at_height(&spec, 1, 1_000_000).unwrap();
        assert_eq!(lattice.len(), 20);
        assert_eq!(enumerate_pairs_backtracking(&spec, 1, 1_000_000).unwrap(), lattice);
    }

    #[test]
    fn index_round_trip() {
        let spec = QuiverSpec::new(4, 2, 3).unwrap();
        for idx in 0..spec.dim() {
            let (i, j, k) = spec.coords(idx);
            assert_eq!(spec.index(i, j, k), idx);
        }
    }
}
