//! Double description with lineality handling and a combinatorial
//! adjacency test.

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use super::linalg::kernel_basis;
use super::num::{dot, lift, lower, make_primitive, mul, sub, Checked, Int, Overflow};
use crate::error::Result;

/// Extreme rays and a lineality basis.
type RaysAndLines<T> = (Vec<Vec<T>>, Vec<Vec<T>>);

/// Generators of a polyhedral cone: extreme rays modulo the lineality space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generators {
    pub rays: Vec<Vec<i64>>,
    pub lineality: Vec<Vec<i64>>,
}

/// Facet description: irredundant inequalities `a.x >= 0` plus a basis of
/// the equations `e.x = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facets {
    pub inequalities: Vec<Vec<i64>>,
    pub equations: Vec<Vec<i64>>,
}

struct Ray<T> {
    v: Vec<T>,
    zeros: FixedBitSet,
}

fn combine<T: Int>(ca: &T, a: &[T], cb: &T, b: &[T]) -> Checked<Vec<T>> {
    let mut out = Vec::with_capacity(a.len());
    for (x, y) in a.iter().zip(b) {
        out.push(sub(&mul(ca, x)?, &mul(cb, y)?)?);
    }
    make_primitive(&mut out);
    Ok(out)
}

/// Core iteration on the full space `T^dim` with inequalities only.
fn dd_core<T: Int>(ineqs: &[Vec<T>], dim: usize) -> Checked<RaysAndLines<T>> {
    let m = ineqs.len();
    let mut lin: Vec<Vec<T>> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    let mut rays: Vec<Ray<T>> = Vec::new();
    let mut processed = FixedBitSet::with_capacity(m);

    for (idx, a) in ineqs.iter().enumerate() {
        let lin_vals: Vec<T> = lin.iter().map(|l| dot(a, l)).collect::<Checked<_>>()?;
        if let Some(p) = lin_vals.iter().position(|s| !s.is_zero()) {
            let mut l0 = lin.swap_remove(p);
            let mut s0 = lin_vals[p].clone();
            if s0.is_negative() {
                l0.iter_mut().for_each(|x| *x = -x.clone());
                s0 = -s0;
            }
            let mut rest = Vec::with_capacity(lin.len());
            for l in lin.drain(..) {
                let s = dot(a, &l)?;
                rest.push(if s.is_zero() { l } else { combine(&s0, &l, &s, &l0)? });
            }
            lin = rest;
            for r in rays.iter_mut() {
                let s = dot(a, &r.v)?;
                if !s.is_zero() {
                    r.v = combine(&s0, &r.v, &s, &l0)?;
                }
                r.zeros.insert(idx);
            }
            rays.push(Ray { v: l0, zeros: processed.clone() });
            processed.insert(idx);
            continue;
        }

        let vals: Vec<T> = rays.iter().map(|r| dot(a, &r.v)).collect::<Checked<_>>()?;
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        processed.insert(idx);
        if neg.is_empty() {
            for (r, s) in rays.iter_mut().zip(&vals) {
                if s.is_zero() {
                    r.zeros.insert(idx);
                }
            }
            continue;
        }
        let need = dim.saturating_sub(lin.len()).saturating_sub(2);
        let all = &rays;
        let created: Vec<Ray<T>> = pos
            .par_iter()
            .map(|&p| -> Checked<Vec<Ray<T>>> {
                let mut out = Vec::new();
                for &n in &neg {
                    let mut common = all[p].zeros.clone();
                    common.intersect_with(&all[n].zeros);
                    if common.count_ones(..) < need {
                        continue;
                    }
                    let blocked = all
                        .iter()
                        .enumerate()
                        .any(|(i, r)| i != p && i != n && common.is_subset(&r.zeros));
                    if blocked {
                        continue;
                    }
                    let neg_s = -vals[n].clone();
                    // vals[p] * n + (-vals[n]) * p vanishes on `a`
                    let mut v = Vec::with_capacity(dim);
                    for (x, y) in all[n].v.iter().zip(&all[p].v) {
                        v.push(super::num::add(&mul(&vals[p], x)?, &mul(&neg_s, y)?)?);
                    }
                    make_primitive(&mut v);
                    common.insert(idx);
                    out.push(Ray { v, zeros: common });
                }
                Ok(out)
            })
            .collect::<Checked<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        let mut next: Vec<Ray<T>> = Vec::with_capacity(rays.len() + created.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_positive() {
                next.push(r);
            } else if vals[i].is_zero() {
                r.zeros.insert(idx);
                next.push(r);
            }
        }
        next.extend(created);
        rays = next;
    }
    Ok((rays.into_iter().map(|r| r.v).collect(), lin))
}

fn expand<T: Int>(coords: &[T], basis: &[Vec<T>], dim: usize) -> Checked<Vec<T>> {
    let mut x = vec![T::zero(); dim];
    for (c, b) in coords.iter().zip(basis) {
        if c.is_zero() {
            continue;
        }
        for (xi, bi) in x.iter_mut().zip(b) {
            *xi = super::num::add(xi, &mul(c, bi)?)?;
        }
    }
    make_primitive(&mut x);
    Ok(x)
}

fn solve<T: Int>(ineqs: &[Vec<i64>], basis: &[Vec<i64>], dim: usize) -> Checked<RaysAndLines<T>> {
    let basis_t: Vec<Vec<T>> = lift(basis);
    let mut reduced: Vec<Vec<T>> = Vec::with_capacity(ineqs.len());
    for a in lift::<T>(ineqs) {
        let mut r: Vec<T> = basis_t.iter().map(|b| dot(&a, b)).collect::<Checked<_>>()?;
        if r.iter().all(Zero::is_zero) {
            continue;
        }
        make_primitive(&mut r);
        if !reduced.contains(&r) {
            reduced.push(r);
        }
    }
    let (rays, lin) = dd_core(&reduced, basis.len())?;
    let rays = rays.iter().map(|r| expand(r, &basis_t, dim)).collect::<Checked<_>>()?;
    let lin = lin.iter().map(|l| expand(l, &basis_t, dim)).collect::<Checked<_>>()?;
    Ok((rays, lin))
}

/// Generators of `{x : A x >= 0, E x = 0}` in `Z^dim`.
pub fn hrep_to_vrep(ineqs: &[Vec<i64>], eqs: &[Vec<i64>], dim: usize) -> Result<Generators> {
    let basis = kernel_basis(eqs, dim)?;
    let (mut rays, lineality) = match solve::<i128>(ineqs, &basis, dim) {
        Ok((r, l)) => (lower(&r, "double description")?, lower(&l, "double description")?),
        Err(Overflow) => {
            let (r, l) = solve::<BigInt>(ineqs, &basis, dim).expect("BigInt cannot overflow");
            (lower(&r, "double description")?, lower(&l, "double description")?)
        }
    };
    rays.sort();
    rays.dedup();
    let lineality = if lineality.is_empty() {
        lineality
    } else {
        super::linalg::hnf_i64(&lineality)?
    };
    Ok(Generators { rays, lineality })
}

/// Facets of the cone generated by `rays` plus the linear span of
/// `lineality`.
pub fn vrep_to_hrep(rays: &[Vec<i64>], lineality: &[Vec<i64>], dim: usize) -> Result<Facets> {
    let dual = hrep_to_vrep(rays, lineality, dim)?;
    Ok(Facets {
        inequalities: dual.rays,
        equations: dual.lineality,
    })
}
