//! Semi-invariants of linked tableaux pairs by signed Weyl-orbit expansion.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::error::{Error, Result};
use crate::tableaux::{ExponentVector, LinkedPair, QuiverSpec};

/// Default bound on the number of Weyl group elements in one expansion.
pub const DEFAULT_ORBIT_CAP: u64 = 50_000_000;

/// Sparse polynomial in the `x^i_{jk}` with integer coefficients.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiInvariant {
    pub spec: QuiverSpec,
    pub degree: u32,
    /// Terms sorted by exponent; no zero coefficients.
    #[serde_as(as = "Vec<(_, DisplayFromStr)>")]
    pub terms: Vec<(ExponentVector, BigInt)>,
}

impl SemiInvariant {
    /// Character `(-a r2, a r1)`.
    pub fn weight(&self) -> (i64, i64) {
        let a = self.degree as i64;
        (-a * self.spec.r2 as i64, a * self.spec.r1 as i64)
    }

    pub fn coefficient(&self, v: &ExponentVector) -> BigInt {
        self.terms
            .binary_search_by(|(e, _)| e.cmp(v))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_default()
    }

    /// Value at the matrices `a[i][j][k]` (arrow, row, column).
    pub fn evaluate(&self, a: &[Vec<Vec<BigRational>>]) -> BigRational {
        let spec = self.spec;
        let vars: Vec<&BigRational> = (0..spec.dim())
            .map(|idx| {
                let (i, j, k) = spec.coords(idx);
                &a[i as usize - 1][j as usize - 1][k as usize - 1]
            })
            .collect();
        let mut powers: Vec<Vec<BigRational>> = vars.iter().map(|&x| vec![BigRational::one(), x.clone()]).collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = BigRational::from_integer(c.clone());
                for (idx, &p) in e.entries.iter().enumerate() {
                    if p == 0 {
                        continue;
                    }
                    while powers[idx].len() <= p as usize {
                        let next = powers[idx].last().unwrap() * vars[idx];
                        powers[idx].push(next);
                    }
                    t *= &powers[idx][p as usize];
                }
                t
            })
            .sum()
    }
}

/// Weights `c^i_{jk}` of the coordinates, indexed like exponent vectors.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grading {
    pub spec: QuiverSpec,
    #[serde_as(as = "Vec<DisplayFromStr>")]
    pub c: Vec<i64>,
}

impl Grading {
    pub fn new(spec: QuiverSpec, c: Vec<i64>) -> Result<Self> {
        if c.len() != spec.dim() {
            return Err(Error::Shape(format!("grading of length {} for {spec}", c.len())));
        }
        if c.iter().any(|&x| x < 0) {
            return Err(Error::Precondition("grading entries must be nonnegative".into()));
        }
        Ok(Grading { spec, c })
    }

    pub fn zero(spec: QuiverSpec) -> Self {
        Grading { spec, c: vec![0; spec.dim()] }
    }

    pub fn get(&self, i: u32, j: u32, k: u32) -> i64 {
        self.c[self.spec.index(i, j, k)]
    }

    /// The `n` matrices `c^i`, each `r2 x r1`.
    pub fn matrices(&self) -> Vec<Vec<Vec<i64>>> {
        let s = self.spec;
        (1..=s.n)
            .map(|i| (1..=s.r2).map(|j| (1..=s.r1).map(|k| self.get(i, j, k)).collect()).collect())
            .collect()
    }
}

pub fn grading_value(v: &ExponentVector, c: &Grading) -> Result<i128> {
    if v.spec() != c.spec {
        return Err(Error::Shape(format!("exponent for {} but grading for {}", v.spec(), c.spec)));
    }
    Ok(v.entries.iter().zip(&c.c).map(|(&e, &w)| e as i128 * w as i128).sum())
}

/// Exponent of maximal grading value, and whether it is the only one.
pub fn leading_monomial(f: &SemiInvariant, c: &Grading) -> Result<(ExponentVector, bool)> {
    let mut best: Option<(i128, &ExponentVector)> = None;
    let mut unique = true;
    for (e, _) in &f.terms {
        let w = grading_value(e, c)?;
        match best {
            Some((b, _)) if w < b => {}
            Some((b, _)) if w == b => unique = false,
            _ => {
                best = Some((w, e));
                unique = true;
            }
        }
    }
    best.map(|(_, e)| (e.clone(), unique)).ok_or(Error::EmptyPolynomial)
}

fn permutations(r: usize) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..r).collect();
    fn rec(p: &mut Vec<usize>, i: usize, sign: i64, out: &mut Vec<(Vec<usize>, i64)>) {
        if i == p.len() {
            out.push((p.clone(), sign));
            return;
        }
        for j in i..p.len() {
            p.swap(i, j);
            rec(p, i + 1, if i == j { sign } else { -sign }, out);
            p.swap(i, j);
        }
    }
    rec(&mut p, 0, 1, &mut out);
    out
}

fn factorial(r: u32) -> u128 {
    (1..=r as u128).product()
}

pub fn orbit_size(pair: &LinkedPair) -> Option<u128> {
    let s = pair.spec;
    factorial(s.r1)
        .checked_pow(pair.minus_cols() as u32)?
        .checked_mul(factorial(s.r2).checked_pow(pair.plus_cols() as u32)?)
}

type Poly = FxHashMap<u128, i64>;

fn multiply(a: &Poly, b: &[(u128, i64)]) -> Poly {
    let mut out = Poly::default();
    for (&ka, &ca) in a {
        for &(kb, cb) in b {
            *out.entry(ka + kb).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// `f = sum over (tau, rho) of sign * prod_atoms x^i_{rho_c+(j), tau_c-(k)}`.
///
/// For a fixed choice of the minus-column permutations the sum over the
/// plus-column permutations factors column by column, so the orbit is
/// summed as a product of small polynomials.
pub fn expand(pair: &LinkedPair, cap: u64) -> Result<SemiInvariant> {
    let spec = pair.spec;
    let size = orbit_size(pair).ok_or(Error::Overflow("orbit size"))?;
    if size > cap as u128 || cap > i64::MAX as u64 {
        return Err(Error::cap("Weyl orbit size", cap, 0));
    }
    let cells = pair.atoms.len();
    let (r1, r2) = (spec.r1 as usize, spec.r2 as usize);
    let degree = if cells == 0 { 0 } else { (cells / (r1 * r2)) as u32 };
    let bits = (u64::BITS - (cells as u64).leading_zeros()).max(1) as usize;
    if bits * spec.dim() > 128 {
        return Err(Error::Unsupported(format!(
            "exponent packing needs {} bits for {spec} at {cells} cells",
            bits * spec.dim()
        )));
    }
    let unit = |i: u32, j: usize, k: usize| -> u128 { 1u128 << (bits * spec.index(i, j as u32 + 1, k as u32 + 1)) };

    let perm1 = permutations(r1);
    let perm2 = permutations(r2);
    let minus_cols = pair.minus_cols();
    let plus_cols = pair.plus_cols();
    let mut by_plus_col: Vec<Vec<(u32, usize, usize, usize)>> = vec![Vec::new(); plus_cols];
    for a in &pair.atoms {
        by_plus_col[a.plus.col].push((a.arrow, a.plus.row, a.minus.col, a.minus.row));
    }
    let tau_count = (perm1.len() as u64).pow(minus_cols as u32);

    let total: Poly = (0..tau_count)
        .into_par_iter()
        .fold(Poly::default, |mut acc, code| {
            let mut tau = Vec::with_capacity(minus_cols);
            let mut rest = code;
            let mut sign = 1i64;
            for _ in 0..minus_cols {
                let (p, s) = &perm1[(rest % perm1.len() as u64) as usize];
                rest /= perm1.len() as u64;
                tau.push(p);
                sign *= s;
            }
            let mut poly = Poly::default();
            poly.insert(0, sign);
            for col in &by_plus_col {
                let factor: Vec<(u128, i64)> = perm2
                    .iter()
                    .map(|(rho, s)| {
                        let key = col
                            .iter()
                            .map(|&(i, j, mc, k)| unit(i, rho[j], tau[mc][k]))
                            .sum();
                        (key, *s)
                    })
                    .collect();
                poly = multiply(&poly, &factor);
                if poly.is_empty() {
                    break;
                }
            }
            for (k, c) in poly {
                *acc.entry(k).or_insert(0) += c;
            }
            acc
        })
        .reduce(Poly::default, |mut a, b| {
            for (k, c) in b {
                *a.entry(k).or_insert(0) += c;
            }
            a
        });

    let mask = (1u128 << bits) - 1;
    let mut terms: Vec<(ExponentVector, BigInt)> = total
        .into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|(key, c)| {
            let entries = (0..spec.dim()).map(|s| ((key >> (bits * s)) & mask) as u32).collect();
            (ExponentVector::new(spec, entries).expect("length matches"), BigInt::from(c))
        })
        .collect();
    terms.sort();
    Ok(SemiInvariant { spec, degree, terms })
}

/// Whether the leading monomial of `f_pair` under `c` is unique and equal
/// to the monomial of the pair.
pub fn verify_lm(pair: &LinkedPair, c: &Grading, cap: u64) -> Result<bool> {
    let f = expand(pair, cap)?;
    if f.terms.is_empty() {
        return Ok(false);
    }
    let (lm, unique) = leading_monomial(&f, c)?;
    Ok(unique && lm == pair.exponent())
}

/// `(g1, g2)` in `GL(r1) x GL(r2)`.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupElement {
    #[serde_as(as = "Vec<Vec<DisplayFromStr>>")]
    pub g1: Vec<Vec<BigRational>>,
    #[serde_as(as = "Vec<Vec<DisplayFromStr>>")]
    pub g2: Vec<Vec<BigRational>>,
}

fn det(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            for k in c..n {
                let v = &f * &a[c][k];
                a[r][k] -= v;
            }
        }
    }
    d
}

fn inverse(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(p, c);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in 0..2 * n {
                    let v = &f * &a[c][k];
                    a[r][k] -= v;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn matmul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    a.iter()
        .map(|row| {
            (0..b[0].len())
                .map(|j| row.iter().zip(b).map(|(x, r)| x * &r[j]).sum())
                .collect()
        })
        .collect()
}

fn random_rational<R: Rng>(rng: &mut R) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-6i64..=6)), BigInt::from(rng.gen_range(1i64..=4)))
}

pub fn random_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> Vec<Vec<BigRational>> {
    (0..rows).map(|_| (0..cols).map(|_| random_rational(rng)).collect()).collect()
}

impl GroupElement {
    pub fn new(g1: Vec<Vec<BigRational>>, g2: Vec<Vec<BigRational>>) -> Result<Self> {
        for (name, g) in [("g1", &g1), ("g2", &g2)] {
            if g.iter().any(|r| r.len() != g.len()) {
                return Err(Error::InvalidGroupElement(format!("{name} is not square")));
            }
            if det(g).is_zero() {
                return Err(Error::InvalidGroupElement(format!("{name} is singular")));
            }
        }
        Ok(GroupElement { g1, g2 })
    }

    pub fn identity(spec: &QuiverSpec) -> Self {
        let id = |n: usize| -> Vec<Vec<BigRational>> {
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
                .collect()
        };
        GroupElement {
            g1: id(spec.r1 as usize),
            g2: id(spec.r2 as usize),
        }
    }

    pub fn random<R: Rng>(spec: &QuiverSpec, rng: &mut R) -> Self {
        loop {
            let g1 = random_matrix(spec.r1 as usize, spec.r1 as usize, rng);
            let g2 = random_matrix(spec.r2 as usize, spec.r2 as usize, rng);
            if let Ok(g) = GroupElement::new(g1, g2) {
                return g;
            }
        }
    }

    /// `A_i -> g2 A_i g1^{-1}` for every arrow.
    pub fn act(&self, a: &[Vec<Vec<BigRational>>]) -> Result<Vec<Vec<Vec<BigRational>>>> {
        let inv = inverse(&self.g1).ok_or_else(|| Error::InvalidGroupElement("g1 is singular".into()))?;
        Ok(a.iter().map(|ai| matmul(&matmul(&self.g2, ai), &inv)).collect())
    }
}

/// Checks `f(g . A) = det(g1)^{-a r2} det(g2)^{a r1} f(A)` at `samples`
/// random rational points.
pub fn semi_invariance_check<R: Rng>(f: &SemiInvariant, g: &GroupElement, samples: usize, rng: &mut R) -> Result<bool> {
    let spec = f.spec;
    if g.g1.len() != spec.r1 as usize || g.g2.len() != spec.r2 as usize {
        return Err(Error::InvalidGroupElement("matrix sizes do not match the dimension vector".into()));
    }
    let (d1, d2) = (det(&g.g1), det(&g.g2));
    if d1.is_zero() || d2.is_zero() {
        return Err(Error::InvalidGroupElement("singular matrix".into()));
    }
    let (w1, w2) = f.weight();
    let pow = |x: &BigRational, e: i64| -> BigRational {
        let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
        if e.is_negative() {
            p.recip()
        } else {
            p
        }
    };
    let character = pow(&d1, w1) * pow(&d2, w2);
    for _ in 0..samples {
        let a: Vec<Vec<Vec<BigRational>>> = (0..spec.n)
            .map(|_| random_matrix(spec.r2 as usize, spec.r1 as usize, rng))
            .collect();
        let lhs = f.evaluate(&g.act(&a)?);
        let rhs = &character * f.evaluate(&a);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}
