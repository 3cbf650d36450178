//! Classification of the toric variety of a complete fan.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use super::fan::FanRays;
use super::lattice::LatticeEnumerator;
use super::linalg::{rank, smith_normal_form};
use super::num::dot_i64;
use super::{dd, Cone, Height};
use crate::error::Result;

/// `Z^free_rank` plus the listed cyclic factors (all greater than one).
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroup {
    pub free_rank: usize,
    #[serde_as(as = "Vec<DisplayFromStr>")]
    pub torsion: Vec<BigInt>,
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricReport {
    pub complete: bool,
    pub fano: Option<bool>,
    pub gorenstein: Option<bool>,
    pub terminal: Option<bool>,
    pub reflexive: Option<bool>,
    #[serde_as(as = "Option<DisplayFromStr>")]
    pub fano_index: Option<BigInt>,
    pub class_group: Option<ClassGroup>,
    /// Vertices of the convex hull of the rays.
    pub spanning_vertices: Option<usize>,
    /// Lattice points of the convex hull of the rays.
    pub spanning_lattice_points: Option<u64>,
}

/// Every ridge of the maximal cones lies in exactly two of them.
fn ridges_paired(f: &FanRays) -> Result<bool> {
    let d = f.dim();
    let mut ridges: FxHashMap<Vec<usize>, u32> = FxHashMap::default();
    for cone in &f.maximal_cones {
        let gens: Vec<Vec<i64>> = cone.iter().map(|&i| f.rays[i].clone()).collect();
        if rank(&gens) != d {
            return Ok(false);
        }
        let facets = dd::vrep_to_hrep(&gens, &[], d)?;
        for a in &facets.inequalities {
            let ridge: Vec<usize> = cone.iter().copied().filter(|&i| dot_i64(a, &f.rays[i]) == 0).collect();
            *ridges.entry(ridge).or_default() += 1;
        }
    }
    Ok(ridges.values().all(|&c| c == 2))
}

fn class_group_and_index(rays: &[Vec<i64>], d: usize) -> (ClassGroup, Option<BigInt>) {
    let s = smith_normal_form(rays, d);
    let r = s.diagonal.len();
    let n = rays.len();
    let torsion: Vec<BigInt> = s.diagonal.iter().filter(|x| !x.is_one()).cloned().collect();
    // class of the anticanonical divisor in Z^n / im(rays)
    let y: Vec<BigInt> = s.left.iter().map(|row| row.iter().sum()).collect();
    let free_gcd = y[r..].iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    let index = if free_gcd.is_zero() {
        None
    } else {
        let mut m = free_gcd.clone();
        loop {
            let ok = free_gcd.is_multiple_of(&m)
                && s.diagonal.iter().zip(&y).all(|(di, yi)| yi.is_multiple_of(&m.gcd(di)));
            if ok {
                break Some(m);
            }
            m -= 1;
        }
    };
    (
        ClassGroup {
            free_rank: n - r,
            torsion,
        },
        index,
    )
}

pub fn classify_toric(f: &FanRays) -> Result<ToricReport> {
    let d = f.dim();
    let empty = ToricReport {
        complete: false,
        fano: None,
        gorenstein: None,
        terminal: None,
        reflexive: None,
        fano_index: None,
        class_group: None,
        spanning_vertices: None,
        spanning_lattice_points: None,
    };
    if f.rays.is_empty() || !ridges_paired(f)? {
        return Ok(empty);
    }
    // Q = conv(rays), homogenised at the last coordinate
    let homog: Vec<Vec<i64>> = f
        .rays
        .iter()
        .map(|r| {
            let mut v = r.clone();
            v.push(1);
            v
        })
        .collect();
    let q = Cone::from_rays(d + 1, &homog).double_description()?;
    let hs = q.halfspaces()?;
    let origin_interior = hs.iter().all(|h| h.kind == super::HalfspaceKind::Inequality && h.normal[d] > 0);
    if !origin_interior {
        return Ok(empty);
    }
    let complete = true;
    let mut sorted = homog.clone();
    sorted.sort();
    let all_vertices = q.rays()? == sorted.as_slice();
    let fano = complete && origin_interior && all_vertices;
    let reflexive = hs.iter().all(|h| {
        let c = BigInt::from(h.normal[d]);
        h.normal[..d].iter().all(|&a| BigInt::from(a).is_multiple_of(&c))
    });
    let height = Height::new((0..=d).map(|i| i64::from(i == d)).collect(), 1);
    let points = LatticeEnumerator::new(&q, 1, &height)?.count(u64::MAX)?;
    let terminal = fano && points == f.rays.len() as u64 + 1;
    let (class_group, index) = class_group_and_index(&f.rays, d);
    Ok(ToricReport {
        complete,
        fano: Some(fano),
        gorenstein: Some(reflexive),
        terminal: Some(terminal),
        reflexive: Some(reflexive),
        fano_index: if fano { index.filter(|m| m.is_positive()) } else { None },
        class_group: Some(class_group),
        spanning_vertices: Some(q.rays()?.len()),
        spanning_lattice_points: Some(points),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fan(rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>) -> FanRays {
        let d = rays[0].len();
        FanRays {
            rays,
            maximal_cones: cones,
            basis: (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect(),
        }
    }

    #[test]
    fn projective_plane() {
        let f = fan(vec![vec![1, 0], vec![0, 1], vec![-1, -1]], vec![vec![0, 1], vec![1, 2], vec![0, 2]]);
        let r = classify_toric(&f).unwrap();
        assert!(r.complete);
        assert_eq!(r.fano, Some(true));
        assert_eq!(r.gorenstein, Some(true));
        assert_eq!(r.terminal, Some(true));
        assert_eq!(r.fano_index, Some(BigInt::from(3)));
        assert_eq!(r.class_group, Some(ClassGroup { free_rank: 1, torsion: vec![] }));
        assert_eq!(r.spanning_lattice_points, Some(4));
    }

    #[test]
    fn product_of_lines() {
        let f = fan(
            vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
        );
        let r = classify_toric(&f).unwrap();
        assert_eq!(r.fano_index, Some(BigInt::from(2)));
        assert_eq!(r.class_group.unwrap().free_rank, 2);
    }

    #[test]
    fn weighted_plane_is_not_gorenstein() {
        // P(1,1,3): rays (1,0), (0,1), (-1,-3)
        let f = fan(vec![vec![1, 0], vec![0, 1], vec![-1, -3]], vec![vec![0, 1], vec![1, 2], vec![0, 2]]);
        let r = classify_toric(&f).unwrap();
        assert_eq!(r.fano, Some(true));
        assert_eq!(r.gorenstein, Some(false));
        assert_eq!(r.terminal, Some(false));
    }

    #[test]
    fn incomplete_fan() {
        let f = fan(vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]]);
        let r = classify_toric(&f).unwrap();
        assert!(!r.complete);
        assert_eq!(r.fano, None);
    }
}
