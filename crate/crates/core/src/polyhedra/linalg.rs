//! Exact integer linear algebra: rank, saturated kernels, Hermite and Smith
//! normal forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::num::{lift, lower, mul, sub, Checked, Int};
use crate::error::Result;

fn rank_generic<T: Int>(mut m: Vec<Vec<T>>) -> Checked<usize> {
    let rows = m.len();
    if rows == 0 {
        return Ok(0);
    }
    let cols = m[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..rows {
            if m[r][c].is_zero() {
                continue;
            }
            let g = m[rank][c].gcd(&m[r][c]);
            let a = m[rank][c].div_floor(&g);
            let b = m[r][c].div_floor(&g);
            for cc in c..cols {
                m[r][cc] = sub(&mul(&m[r][cc], &a)?, &mul(&m[rank][cc], &b)?)?;
            }
            super::num::make_primitive(&mut m[r][c..]);
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    Ok(rank)
}

/// Rank over the rationals.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    match rank_generic::<i128>(lift(rows)) {
        Ok(r) => r,
        Err(_) => rank_generic::<BigInt>(lift(rows)).expect("BigInt cannot overflow"),
    }
}

/// Rank of the rows selected by `idx`.
pub fn rank_of(rows: &[Vec<i64>], idx: impl IntoIterator<Item = usize>) -> usize {
    let sub: Vec<Vec<i64>> = idx.into_iter().map(|i| rows[i].clone()).collect();
    rank(&sub)
}

/// Row Hermite normal form: echelon, positive pivots, entries above each
/// pivot reduced into `[0, pivot)`. Zero rows are dropped.
pub fn hnf(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let nrows = m.len();
    if nrows == 0 {
        return m;
    }
    let ncols = m[0].len();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        // gcd-combine all rows below r into row r at column c
        for i in r + 1..nrows {
            if m[i][c].is_zero() {
                continue;
            }
            if m[r][c].is_zero() {
                m.swap(r, i);
                continue;
            }
            let e = m[r][c].extended_gcd(&m[i][c]);
            let (g, s, t) = (e.gcd, e.x, e.y);
            let a = &m[r][c] / &g;
            let b = &m[i][c] / &g;
            for cc in c..ncols {
                let top = &s * &m[r][cc] + &t * &m[i][cc];
                let bot = &a * &m[i][cc] - &b * &m[r][cc];
                m[r][cc] = top;
                m[i][cc] = bot;
            }
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            for x in m[r].iter_mut() {
                *x = -x.clone();
            }
        }
        let p = m[r][c].clone();
        for i in 0..r {
            let q = m[i][c].div_floor(&p);
            if !q.is_zero() {
                for cc in c..ncols {
                    let d = &q * &m[r][cc];
                    m[i][cc] -= d;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

pub fn hnf_i64(rows: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    lower(&hnf(&lift::<BigInt>(rows)), "Hermite normal form")
}

/// Lattice basis of `{x in Z^dim : rows * x = 0}`, in Hermite normal form.
pub fn kernel_basis(rows: &[Vec<i64>], dim: usize) -> Result<Vec<Vec<i64>>> {
    let a: Vec<Vec<BigInt>> = lift(rows);
    // column operations on `a`, mirrored on the unimodular `u`
    let mut cols: Vec<Vec<BigInt>> = (0..dim).map(|c| a.iter().map(|r| r[c].clone()).collect()).collect();
    let mut u: Vec<Vec<BigInt>> = (0..dim)
        .map(|c| (0..dim).map(|r| if r == c { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut p = 0;
    for i in 0..a.len() {
        if p == dim {
            break;
        }
        for c in p + 1..dim {
            if cols[c][i].is_zero() {
                continue;
            }
            if cols[p][i].is_zero() {
                cols.swap(p, c);
                u.swap(p, c);
                continue;
            }
            let e = cols[p][i].extended_gcd(&cols[c][i]);
            let (g, s, t) = (e.gcd, e.x, e.y);
            let ap = &cols[p][i] / &g;
            let ac = &cols[c][i] / &g;
            let comb = |x: &Vec<BigInt>, y: &Vec<BigInt>| -> (Vec<BigInt>, Vec<BigInt>) {
                let np = x.iter().zip(y).map(|(xp, yc)| &s * xp + &t * yc).collect();
                let nc = x.iter().zip(y).map(|(xp, yc)| &ac * xp - &ap * yc).collect();
                (np, nc)
            };
            let (np, nc) = comb(&cols[p], &cols[c]);
            cols[p] = np;
            cols[c] = nc;
            let (up, uc) = comb(&u[p], &u[c]);
            u[p] = up;
            u[c] = uc;
        }
        if !cols[p][i].is_zero() {
            p += 1;
        }
    }
    let basis: Vec<Vec<BigInt>> = u[p..].to_vec();
    lower(&hnf(&basis), "kernel basis")
}

/// Lattice basis of `span(vectors) ∩ Z^dim`.
pub fn saturated_span(vectors: &[Vec<i64>], dim: usize) -> Result<Vec<Vec<i64>>> {
    let normals = kernel_basis(vectors, dim)?;
    kernel_basis(&normals, dim)
}

/// Coordinates of `x` in a basis given in row echelon form, or `None` if `x`
/// is not in the span.
pub fn coordinates_in_echelon(basis: &[Vec<i64>], x: &[BigRational]) -> Option<Vec<BigRational>> {
    let mut rest: Vec<BigRational> = x.to_vec();
    let mut out = Vec::with_capacity(basis.len());
    for b in basis {
        let piv = b.iter().position(|&e| e != 0)?;
        let coef = &rest[piv] / BigRational::from_integer(BigInt::from(b[piv]));
        for (r, &e) in rest.iter_mut().zip(b) {
            if e != 0 {
                *r -= &coef * BigRational::from_integer(BigInt::from(e));
            }
        }
        out.push(coef);
    }
    rest.iter().all(Zero::is_zero).then_some(out)
}

/// Smith normal form `left * a * right = diag`.
#[derive(Debug, Clone)]
pub struct Smith {
    /// Nonzero invariant factors `d_1 | d_2 | ...`.
    pub diagonal: Vec<BigInt>,
    pub left: Vec<Vec<BigInt>>,
    pub right: Vec<Vec<BigInt>>,
}

pub fn smith_normal_form(a: &[Vec<i64>], ncols: usize) -> Smith {
    let mut m: Vec<Vec<BigInt>> = lift(a);
    let nrows = m.len();
    let identity = |n: usize| -> Vec<Vec<BigInt>> {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect()
    };
    let mut left = identity(nrows);
    let mut right = identity(ncols);
    let mut diagonal = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        left.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        for row in right.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut done = true;
            // clear column t
            for i in t + 1..nrows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                for j in t..ncols {
                    let d = &q * &m[t][j];
                    m[i][j] -= d;
                }
                for j in 0..nrows {
                    let d = &q * &left[t][j];
                    left[i][j] -= d;
                }
                if !m[i][t].is_zero() {
                    done = false;
                    m.swap(t, i);
                    left.swap(t, i);
                }
            }
            // clear row t
            for j in t + 1..ncols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                for i in t..nrows {
                    let d = &q * &m[i][t];
                    m[i][j] -= d;
                }
                for row in right.iter_mut() {
                    let d = &q * &row[t];
                    row[j] -= d;
                }
                if !m[t][j].is_zero() {
                    done = false;
                    for row in m.iter_mut() {
                        row.swap(t, j);
                    }
                    for row in right.iter_mut() {
                        row.swap(t, j);
                    }
                }
            }
            if !done {
                continue;
            }
            // divisibility: the pivot must divide the remaining block
            let bad = (t + 1..nrows)
                .flat_map(|i| (t + 1..ncols).map(move |j| (i, j)))
                .find(|&(i, j)| !m[i][j].is_multiple_of(&m[t][t]));
            match bad {
                None => break,
                Some((i, _)) => {
                    // add row i to row t and repeat
                    for j in t..ncols {
                        let v = m[i][j].clone();
                        m[t][j] += v;
                    }
                    for j in 0..nrows {
                        let v = left[i][j].clone();
                        left[t][j] += v;
                    }
                }
            }
        }
        if m[t][t].is_negative() {
            for j in t..ncols {
                m[t][j] = -m[t][j].clone();
            }
            for j in 0..nrows {
                left[t][j] = -left[t][j].clone();
            }
        }
        diagonal.push(m[t][t].clone());
        t += 1;
    }
    Smith { diagonal, left, right }
}
