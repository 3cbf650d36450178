//! Pulling triangulations of pointed cones and fundamental parallelepipeds
//! of simplicial cones.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::dd;
use super::linalg::{coordinates_in_echelon, rank, saturated_span, smith_normal_form};
use super::num::dot_i64;
use crate::error::{Error, Result};

/// Simplicial cones (as index sets into `rays`) covering `cone(rays)`.
pub fn pulling_triangulation(rays: &[Vec<i64>]) -> Result<Vec<Vec<usize>>> {
    let idx: Vec<usize> = (0..rays.len()).collect();
    let mut out = Vec::new();
    pull(rays, idx, &mut out)?;
    for s in out.iter_mut() {
        s.sort_unstable();
    }
    out.sort();
    Ok(out)
}

fn pull(rays: &[Vec<i64>], subset: Vec<usize>, out: &mut Vec<Vec<usize>>) -> Result<()> {
    let gens: Vec<Vec<i64>> = subset.iter().map(|&i| rays[i].clone()).collect();
    let k = rank(&gens);
    if subset.len() == k {
        out.push(subset);
        return Ok(());
    }
    let apex = subset[0];
    let dim = rays[apex].len();
    let facets = dd::vrep_to_hrep(&gens, &[], dim)?;
    for a in &facets.inequalities {
        if dot_i64(a, &rays[apex]) == 0 {
            continue;
        }
        let face: Vec<usize> = subset.iter().copied().filter(|&i| dot_i64(a, &rays[i]) == 0).collect();
        let mut sub = Vec::new();
        pull(rays, face, &mut sub)?;
        for mut s in sub {
            s.push(apex);
            out.push(s);
        }
    }
    Ok(())
}

/// Lattice points `sum l_i g_i` with `0 <= l_i < 1` in the saturated lattice
/// spanned by the linearly independent `gens`. The origin comes first.
pub fn parallelepiped_points(gens: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let dim = gens.first().map_or(0, Vec::len);
    let k = gens.len();
    if rank(gens) != k {
        return Err(Error::Precondition("parallelepiped generators are dependent".into()));
    }
    let basis = saturated_span(gens, dim)?;
    // m[r][i] = coordinate r of generator i in the lattice basis
    let mut m = vec![vec![0i64; k]; k];
    for (i, g) in gens.iter().enumerate() {
        let x: Vec<BigRational> = g.iter().map(|&v| BigRational::from_integer(v.into())).collect();
        let c = coordinates_in_echelon(&basis, &x).expect("generator lies in its span");
        for (r, cr) in c.iter().enumerate() {
            m[r][i] = cr.to_integer().to_i64().ok_or(Error::Overflow("parallelepiped"))?;
        }
    }
    let s = smith_normal_form(&m, k);
    let d: Vec<BigInt> = s.diagonal.clone();
    let total: u64 = d
        .iter()
        .try_fold(1u64, |acc, x| acc.checked_mul(x.to_u64()?))
        .ok_or(Error::Overflow("parallelepiped size"))?;
    let mut out = Vec::with_capacity(total as usize);
    let mut y = vec![BigInt::zero(); k];
    loop {
        // l = frac(right * diag^-1 * y)
        let scaled: Vec<BigRational> = y.iter().zip(&d).map(|(yi, di)| BigRational::new(yi.clone(), di.clone())).collect();
        let mut point = vec![BigRational::zero(); dim];
        for i in 0..k {
            let li: BigRational = (0..k)
                .map(|j| BigRational::from_integer(s.right[i][j].clone()) * &scaled[j])
                .sum();
            let frac = &li - li.floor();
            for (p, &g) in point.iter_mut().zip(&gens[i]) {
                *p += &frac * BigRational::from_integer(g.into());
            }
        }
        out.push(
            point
                .iter()
                .map(|p| {
                    debug_assert!(p.is_integer());
                    p.to_integer().to_i64().ok_or(Error::Overflow("parallelepiped"))
                })
                .collect::<Result<Vec<i64>>>()?,
        );
        let mut i = 0;
        loop {
            if i == k {
                return Ok(out);
            }
            y[i] += 1;
            if y[i] < d[i] {
                break;
            }
            y[i] = BigInt::zero();
            i += 1;
        }
    }
}

/// `|det|` of the simplicial cone relative to its saturated lattice.
pub fn multiplicity(gens: &[Vec<i64>]) -> Result<u64> {
    Ok(parallelepiped_points(gens)?.len() as u64)
}
