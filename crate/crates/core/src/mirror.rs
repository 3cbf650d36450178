//! Laurent polynomial mirrors of toric degenerations and their classical
//! periods.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{CheckedAdd, CheckedMul, One, Signed, ToPrimitive, Zero};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::error::{Error, Result};
use crate::polyhedra::linalg::smith_normal_form;
use crate::polyhedra::triangulate::pulling_triangulation;
use crate::polyhedra::{classify_toric, Cone, FanRays, Height, HalfspaceKind, LatticeEnumerator};

/// A Laurent polynomial in `dim` variables with nonzero integer coefficients.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentPolynomial {
    pub dim: usize,
    #[serde_as(as = "Vec<(_, DisplayFromStr)>")]
    pub terms: BTreeMap<Vec<i64>, BigInt>,
}

impl LaurentPolynomial {
    pub fn new(dim: usize, terms: impl IntoIterator<Item = (Vec<i64>, BigInt)>) -> Result<Self> {
        let mut out: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != dim {
                return Err(Error::Shape(format!("exponent of length {} in {dim} variables", e.len())));
            }
            *out.entry(e).or_default() += c;
        }
        out.retain(|_, c| !c.is_zero());
        Ok(LaurentPolynomial { dim, terms: out })
    }

    /// Sum of the monomials `x^e` with coefficient one.
    pub fn from_exponents(dim: usize, exps: &[Vec<i64>]) -> Result<Self> {
        Self::new(dim, exps.iter().map(|e| (e.clone(), BigInt::one())))
    }

    pub fn constant(dim: usize, c: i64) -> Self {
        Self::new(dim, [(vec![0; dim], BigInt::from(c))]).expect("matching length")
    }

    pub fn exponents(&self) -> Vec<Vec<i64>> {
        self.terms.keys().cloned().collect()
    }

    /// The polynomial with exponents `e` replaced by `m e`.
    pub fn transform(&self, m: &[Vec<i64>]) -> Result<Self> {
        let d = m.len();
        let terms = self.terms.iter().map(|(e, c)| {
            let img: Vec<i64> = m.iter().map(|row| row.iter().zip(e).map(|(a, b)| a * b).sum()).collect();
            (img, c.clone())
        });
        Self::new(d, terms)
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let num: Vec<String> = monomial_factors(e, 1);
            let den: Vec<String> = monomial_factors(e, -1);
            let sep = if n == 0 {
                if c.is_negative() { "-" } else { "" }
            } else if c.is_negative() {
                " - "
            } else {
                " + "
            };
            write!(f, "{sep}")?;
            let a = c.abs();
            let head = match (a.is_one(), num.is_empty()) {
                (true, true) => "1".to_string(),
                (true, false) => num.join("*"),
                (false, true) => a.to_string(),
                (false, false) => format!("{a}*{}", num.join("*")),
            };
            write!(f, "{head}")?;
            match den.len() {
                0 => {}
                1 => write!(f, "/{}", den[0])?,
                _ => write!(f, "/({})", den.join("*"))?,
            }
        }
        Ok(())
    }
}

fn monomial_factors(e: &[i64], sign: i64) -> Vec<String> {
    e.iter()
        .enumerate()
        .filter(|(_, &x)| x * sign > 0)
        .map(|(i, &x)| {
            let p = x * sign;
            if p == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{p}", i + 1)
            }
        })
        .collect()
}

/// Parses sums of terms like `3*x1^2*x2/(x3*x4)`, `x_{12}/x5` or `1/(x1 x3)`;
/// factors may be separated by `*` or spaces. The number of variables is the
/// largest index that occurs.
impl FromStr for LaurentPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut raw: Vec<(BTreeMap<usize, i64>, BigInt)> = Vec::new();
        let mut dim = 0;
        let cleaned: String = s.replace("\\\\", " ").replace(['{', '}', '_', '\n', '\\'], " ");
        let mut signs = Vec::new();
        let mut parts = Vec::new();
        let mut cur = String::new();
        let mut depth = 0;
        let mut sign = 1;
        let mut prev = ' ';
        for ch in cleaned.chars() {
            let after_caret = prev == '^';
            if !ch.is_whitespace() {
                prev = ch;
            }
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            if depth == 0 && !after_caret && (ch == '+' || ch == '-') {
                if !cur.trim().is_empty() {
                    parts.push(std::mem::take(&mut cur));
                    signs.push(sign);
                }
                cur.clear();
                sign = if ch == '-' { -1 } else { 1 };
                continue;
            }
            cur.push(ch);
        }
        if !cur.trim().is_empty() {
            parts.push(cur);
            signs.push(sign);
        }
        for (part, sign) in parts.iter().zip(signs) {
            let (num, den) = match part.split_once('/') {
                Some((a, b)) => (a, Some(b)),
                None => (part.as_str(), None),
            };
            let mut exps = BTreeMap::new();
            let mut coef = BigInt::from(sign);
            parse_factors(num, 1, &mut exps, &mut coef, &mut dim)?;
            if let Some(d) = den {
                let d = d.trim().trim_start_matches('(').trim_end_matches(')');
                parse_factors(d, -1, &mut exps, &mut coef, &mut dim)?;
            }
            raw.push((exps, coef));
        }
        let terms = raw.into_iter().map(|(m, c)| {
            let mut e = vec![0; dim];
            for (i, x) in m {
                e[i] += x;
            }
            (e, c)
        });
        LaurentPolynomial::new(dim, terms)
    }
}

fn parse_factors(
    s: &str,
    sign: i64,
    exps: &mut BTreeMap<usize, i64>,
    coef: &mut BigInt,
    dim: &mut usize,
) -> Result<()> {
    let bad = |t: &str| Error::Parse(format!("cannot read factor {t:?}"));
    let spaced = s.replace('*', " ");
    let mut tokens: Vec<&str> = spaced.split_whitespace().collect();
    // `x 12` after stripping braces from `x_{12}`
    let mut merged = Vec::new();
    while let Some(t) = tokens.first().copied() {
        tokens.remove(0);
        if t == "x" {
            let idx = tokens.first().copied().ok_or_else(|| bad(t))?;
            tokens.remove(0);
            merged.push(format!("x{idx}"));
        } else if t.starts_with('^') && !merged.is_empty() {
            let last: String = merged.pop().expect("nonempty");
            merged.push(format!("{last}{t}"));
        } else {
            merged.push(t.to_string());
        }
    }
    for t in merged {
        if let Some(rest) = t.strip_prefix('x') {
            let (idx, pow) = match rest.split_once('^') {
                Some((a, b)) => (a, b.parse::<i64>().map_err(|_| bad(&t))?),
                None => (rest, 1),
            };
            let i: usize = idx.parse().map_err(|_| bad(&t))?;
            if i == 0 {
                return Err(bad(&t));
            }
            *dim = (*dim).max(i);
            *exps.entry(i - 1).or_default() += sign * pow;
        } else {
            let c: BigInt = t.parse().map_err(|_| bad(&t))?;
            if sign < 0 {
                if c.is_zero() || !(&*coef % &c).is_zero() {
                    return Err(Error::Parse(format!("non-integral coefficient from {t:?}")));
                }
                *coef /= c;
            } else {
                *coef *= c;
            }
        }
    }
    Ok(())
}

/// The mirror of a terminal Fano fan: coefficient one on every vertex of
/// the convex hull of the rays.
pub fn laurent_from_rays(f: &FanRays) -> Result<LaurentPolynomial> {
    let report = classify_toric(f)?;
    if !report.complete {
        return Err(Error::Precondition("the fan is not complete".into()));
    }
    if report.terminal != Some(true) {
        return Err(Error::Unsupported(
            "coefficients for a non-terminal spanning polytope are not determined".into(),
        ));
    }
    let d = f.dim();
    let homog: Vec<Vec<i64>> = f
        .rays
        .iter()
        .map(|r| r.iter().copied().chain([1]).collect())
        .collect();
    let q = Cone::from_rays(d + 1, &homog).double_description()?;
    let verts: Vec<Vec<i64>> = q.rays()?.iter().map(|r| r[..d].to_vec()).collect();
    LaurentPolynomial::from_exponents(d, &verts)
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonReport {
    pub dim: usize,
    pub polytope_dim: usize,
    pub vertices: usize,
    pub lattice_points: Option<u64>,
    pub origin_interior: bool,
    pub reflexive: Option<bool>,
    pub terminal: Option<bool>,
    /// `dim! vol`, for full-dimensional Newton polytopes.
    #[serde_as(as = "Option<DisplayFromStr>")]
    pub normalized_volume: Option<BigInt>,
}

fn abs_det(rows: &[Vec<i64>]) -> BigInt {
    let d = rows.len();
    smith_normal_form(rows, d).diagonal.iter().fold(BigInt::one(), |a, x| a * x.abs())
}

/// Lattice invariants of the Newton polytope.
pub fn newton_invariants(f: &LaurentPolynomial) -> Result<NewtonReport> {
    let d = f.dim;
    let homog: Vec<Vec<i64>> = f.terms.keys().map(|e| e.iter().copied().chain([1]).collect()).collect();
    if homog.is_empty() {
        return Err(Error::EmptyPolynomial);
    }
    let q = Cone::from_rays(d + 1, &homog).double_description()?;
    let verts = q.rays()?.to_vec();
    let polytope_dim = q.dimension() - 1;
    let hs = q.halfspaces()?;
    let full = polytope_dim == d;
    let origin_interior = full && hs.iter().all(|h| h.kind == HalfspaceKind::Inequality && h.normal[d] > 0);
    let height = Height::new((0..=d).map(|i| i64::from(i == d)).collect(), 1);
    let lattice_points = Some(LatticeEnumerator::new(&q, 1, &height)?.count(u64::MAX)?);
    let reflexive = origin_interior.then(|| hs.iter().all(|h| h.normal[d] == 1));
    let terminal = origin_interior.then(|| lattice_points == Some(verts.len() as u64 + 1));
    let normalized_volume = if full {
        let simplices = pulling_triangulation(&verts)?;
        let vol = simplices.iter().fold(BigInt::zero(), |acc, s| {
            let rows: Vec<Vec<i64>> = s.iter().map(|&i| verts[i].clone()).collect();
            acc + abs_det(&rows)
        });
        Some(vol)
    } else {
        None
    };
    Ok(NewtonReport {
        dim: d,
        polytope_dim,
        vertices: verts.len(),
        lattice_points,
        origin_interior,
        reflexive,
        terminal,
        normalized_volume,
    })
}

/// `c_0, c_1, ...` with `c_k` the constant term of `f^k`.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodSequence {
    #[serde_as(as = "Vec<DisplayFromStr>")]
    pub coefficients: Vec<BigInt>,
}

/// Default bound on the number of terms of an intermediate power.
pub const DEFAULT_TERM_CAP: u64 = 20_000_000;

trait Coef: Clone + Zero + CheckedAdd + CheckedMul + Send + Sync {
    fn from_big(x: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Coef for i128 {
    fn from_big(x: &BigInt) -> Option<Self> {
        x.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coef for BigInt {
    fn from_big(x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

enum Fail {
    Overflow,
    Cap(u64),
}

type Power<T> = FxHashMap<Vec<i32>, T>;

fn times<T: Coef>(p: &Power<T>, f: &[(Vec<i32>, T)], cap: u64) -> std::result::Result<Power<T>, Fail> {
    let mut out: Power<T> = FxHashMap::default();
    out.reserve(p.len() * 2);
    for (e, c) in p {
        for (g, a) in f {
            let key: Vec<i32> = e.iter().zip(g).map(|(x, y)| x + y).collect();
            let prod = c.checked_mul(a).ok_or(Fail::Overflow)?;
            let slot = out.entry(key).or_insert_with(T::zero);
            *slot = slot.checked_add(&prod).ok_or(Fail::Overflow)?;
        }
        if out.len() as u64 > cap {
            return Err(Fail::Cap(out.len() as u64));
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

fn period_with<T: Coef>(f: &LaurentPolynomial, n: usize, cap: u64) -> std::result::Result<Vec<BigInt>, Fail> {
    let terms: Vec<(Vec<i32>, T)> = f
        .terms
        .iter()
        .map(|(e, c)| {
            let e: Vec<i32> = e.iter().map(|&x| i32::try_from(x).map_err(|_| Fail::Overflow)).collect::<std::result::Result<_, _>>()?;
            Ok((e, T::from_big(c).ok_or(Fail::Overflow)?))
        })
        .collect::<std::result::Result<_, Fail>>()?;
    let half = n / 2;
    let mut powers: Vec<Power<T>> = Vec::with_capacity(half + 1);
    let mut one: Power<T> = FxHashMap::default();
    one.insert(vec![0; f.dim], T::from_big(&BigInt::one()).ok_or(Fail::Overflow)?);
    powers.push(one);
    while powers.len() <= half {
        let next = times(powers.last().expect("nonempty"), &terms, cap)?;
        powers.push(next);
    }
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let (a, b) = (k.div_ceil(2), k / 2);
        let (pa, pb) = (&powers[a], &powers[b]);
        let mut sum = T::zero();
        let mut neg = Vec::with_capacity(f.dim);
        for (e, c) in pb {
            neg.clear();
            neg.extend(e.iter().map(|x| -x));
            if let Some(d) = pa.get(&neg) {
                let prod = c.checked_mul(d).ok_or(Fail::Overflow)?;
                sum = sum.checked_add(&prod).ok_or(Fail::Overflow)?;
            }
        }
        out.push(sum.to_big());
    }
    Ok(out)
}

/// First `n` period coefficients, by pairing `f^ceil(k/2)` with `f^floor(k/2)`.
pub fn classical_period(f: &LaurentPolynomial, n: usize, term_cap: u64) -> Result<PeriodSequence> {
    if n == 0 {
        return Err(Error::Precondition("at least one period coefficient".into()));
    }
    let res = match period_with::<i128>(f, n, term_cap) {
        Err(Fail::Overflow) => period_with::<BigInt>(f, n, term_cap),
        other => other,
    };
    match res {
        Ok(coefficients) => Ok(PeriodSequence { coefficients }),
        Err(Fail::Cap(p)) => Err(Error::cap("terms of a power of the polynomial", term_cap, p)),
        Err(Fail::Overflow) => Err(Error::Overflow("exponents of the polynomial")),
    }
}
