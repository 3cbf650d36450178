//! Normal fans of polytopes in intrinsic lattice coordinates.

use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use super::num::{dot_i64, primitive};
use super::{dd, homogenize, Polytope};
use crate::error::{Error, Result};

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanRays {
    /// Primitive inner facet normals in the dual of the intrinsic lattice,
    /// sorted lexicographically.
    #[serde_as(as = "Vec<Vec<DisplayFromStr>>")]
    pub rays: Vec<Vec<i64>>,
    /// For each vertex of the polytope (in its stored order), the rays of
    /// the facets through it.
    pub maximal_cones: Vec<Vec<usize>>,
    /// Lattice basis in which the rays are expressed.
    #[serde_as(as = "Vec<Vec<DisplayFromStr>>")]
    pub basis: Vec<Vec<i64>>,
}

impl FanRays {
    pub fn dim(&self) -> usize {
        self.rays.first().map_or(self.basis.len(), Vec::len)
    }
}

pub fn normal_fan_rays(p: &Polytope) -> Result<FanRays> {
    let k = p.dim();
    if p.is_empty() || k == 0 {
        return Ok(FanRays {
            rays: Vec::new(),
            maximal_cones: Vec::new(),
            basis: p.basis.clone(),
        });
    }
    let homog: Vec<Vec<i64>> = p
        .intrinsic_vertices()
        .iter()
        .map(|v| homogenize(v))
        .collect::<Result<_>>()?;
    let facets = dd::vrep_to_hrep(&homog, &[], k + 1)?;
    if !facets.equations.is_empty() {
        return Err(Error::Precondition("polytope is not full-dimensional in its lattice".into()));
    }
    let mut normals: Vec<(Vec<i64>, Vec<i64>)> = facets
        .inequalities
        .iter()
        .map(|f| (primitive(&f[..k]), f.clone()))
        .collect();
    normals.sort();
    let rays: Vec<Vec<i64>> = normals.iter().map(|(n, _)| n.clone()).collect();
    let maximal_cones = homog
        .iter()
        .map(|v| {
            normals
                .iter()
                .enumerate()
                .filter(|(_, (_, f))| dot_i64(f, v) == 0)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    Ok(FanRays {
        rays,
        maximal_cones,
        basis: p.basis.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn pts(raw: &[&[i64]]) -> Vec<Vec<BigRational>> {
        raw.iter()
            .map(|p| p.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
            .collect()
    }

    #[test]
    fn unit_square() {
        let p = Polytope::from_points(2, &pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])).unwrap();
        let f = normal_fan_rays(&p).unwrap();
        assert_eq!(f.rays, vec![vec![-1, 0], vec![0, -1], vec![0, 1], vec![1, 0]]);
        assert_eq!(f.maximal_cones.len(), 4);
        assert!(f.maximal_cones.iter().all(|c| c.len() == 2));
    }

    #[test]
    fn point_has_empty_fan() {
        let p = Polytope::from_points(3, &pts(&[&[1, 2, 3]])).unwrap();
        let f = normal_fan_rays(&p).unwrap();
        assert!(f.rays.is_empty());
    }

    #[test]
    fn triangle_in_a_plane_of_space() {
        // standard simplex x + y + z = 1
        let p = Polytope::from_points(3, &pts(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap();
        assert_eq!(p.dim(), 2);
        let f = normal_fan_rays(&p).unwrap();
        assert_eq!(f.rays.len(), 3);
        let sum: Vec<i64> = (0..2).map(|j| f.rays.iter().map(|r| r[j]).sum()).collect();
        assert_eq!(sum, vec![0, 0]);
    }
}
