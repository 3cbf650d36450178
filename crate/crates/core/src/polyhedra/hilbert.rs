//! Hilbert bases of pointed cones graded by a height function.

use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use super::lattice::LatticeEnumerator;
use super::linalg::saturated_span;
use super::triangulate::{parallelepiped_points, pulling_triangulation};
use super::{Cone, Height};
use crate::error::{Error, Result};

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertBasis {
    /// Generators sorted by height, then lexicographically.
    #[serde_as(as = "Vec<Vec<DisplayFromStr>>")]
    pub generators: Vec<Vec<i64>>,
    pub heights: Vec<i64>,
    /// Every generator of height at most this value is listed.
    pub certified_up_to: i64,
    /// No generator appeared above the requested maximal degree.
    pub window_clean: bool,
    /// Number of lattice points at each height `1..=certified_up_to`.
    pub slice_sizes: Vec<u64>,
}

impl HilbertBasis {
    pub fn count_by_height(&self) -> Vec<(i64, usize)> {
        let mut out: Vec<(i64, usize)> = Vec::new();
        for &h in &self.heights {
            match out.last_mut() {
                Some((g, c)) if *g == h => *c += 1,
                _ => out.push((h, 1)),
            }
        }
        out
    }

    pub fn at_height(&self, h: i64) -> impl Iterator<Item = &Vec<i64>> {
        self.generators.iter().zip(&self.heights).filter(move |(_, &g)| g == h).map(|(v, _)| v)
    }
}

/// Flat storage of equally long small-integer points.
struct Slice {
    stride: usize,
    data: Vec<i16>,
}

impl Slice {
    fn len(&self) -> usize {
        self.data.len().checked_div(self.stride).unwrap_or(0)
    }

    fn get(&self, i: usize) -> &[i16] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }
}

fn check_integral_heights(cone: &Cone, height: &Height) -> Result<()> {
    let rays = cone.rays()?;
    for b in saturated_span(rays, cone.ambient_dim)? {
        if height.of(&b).is_none() {
            return Err(Error::Precondition(
                "the height takes non-integral values on the lattice of the cone".into(),
            ));
        }
    }
    Ok(())
}

/// Degree-by-degree Hilbert basis: a point of height `h` is a new generator
/// iff it is not a generator of smaller height plus a lattice point of the
/// cone. Heights up to `max_degree + certify_window` are processed.
pub fn hilbert_basis(
    cone: &Cone,
    height: &Height,
    max_degree: i64,
    certify_window: i64,
    cap: u64,
) -> Result<HilbertBasis> {
    if max_degree < 1 || certify_window < 0 {
        return Err(Error::Precondition("max_degree must be positive".into()));
    }
    check_integral_heights(cone, height)?;
    let dim = cone.ambient_dim;
    let top = max_degree + certify_window;
    let mut slices: Vec<Slice> = Vec::new();
    let mut gens: Vec<(i64, Vec<i16>)> = Vec::new();
    let mut slice_sizes = Vec::new();
    let mut window_clean = true;
    for h in 1..=top {
        let en = LatticeEnumerator::new(cone, h, height)?;
        let chunks = en.map_points(cap, |x| {
            x.iter()
                .map(|&v| i16::try_from(v).map_err(|_| Error::Overflow("lattice point storage")))
                .collect::<Result<Vec<i16>>>()
        })?;
        let mut data = Vec::with_capacity(chunks.len() * dim);
        for c in chunks {
            data.extend(c?);
        }
        let slice = Slice { stride: dim, data };
        slice_sizes.push(slice.len() as u64);
        let index: FxHashMap<&[i16], usize> = (0..slice.len()).map(|i| (slice.get(i), i)).collect();
        let reducible: Vec<AtomicBool> = (0..slice.len()).map(|_| AtomicBool::new(false)).collect();
        gens.par_iter().filter(|(g, _)| *g < h).for_each(|(gh, g)| {
            let rest = &slices[(h - gh - 1) as usize];
            let mut sum = vec![0i16; dim];
            for q in 0..rest.len() {
                for ((s, a), b) in sum.iter_mut().zip(g).zip(rest.get(q)) {
                    *s = a + b;
                }
                if let Some(&i) = index.get(sum.as_slice()) {
                    reducible[i].store(true, Ordering::Relaxed);
                }
            }
        });
        drop(index);
        for (i, red) in reducible.iter().enumerate() {
            if !red.load(Ordering::Relaxed) {
                if h > max_degree {
                    window_clean = false;
                }
                gens.push((h, slice.get(i).to_vec()));
            }
        }
        if h < top {
            slices.push(slice);
        }
    }
    let mut out: Vec<(i64, Vec<i64>)> = gens
        .into_iter()
        .map(|(h, g)| (h, g.into_iter().map(i64::from).collect()))
        .collect();
    out.sort();
    Ok(HilbertBasis {
        heights: out.iter().map(|(h, _)| *h).collect(),
        generators: out.into_iter().map(|(_, g)| g).collect(),
        certified_up_to: top,
        window_clean,
        slice_sizes,
    })
}

/// Hilbert basis from a triangulation: the generators and parallelepiped
/// points of all simplicial pieces generate the monoid, and the irreducible
/// ones among them form the basis. Meant for small cones.
pub fn hilbert_basis_exact(cone: &Cone) -> Result<Vec<Vec<i64>>> {
    if !cone.is_pointed() {
        return Err(Error::Precondition("Hilbert basis of a cone with lineality".into()));
    }
    let rays = cone.rays()?;
    let facets = cone.facets()?;
    let mut cands: Vec<Vec<i64>> = rays.to_vec();
    for simplex in pulling_triangulation(rays)? {
        let g: Vec<Vec<i64>> = simplex.iter().map(|&i| rays[i].clone()).collect();
        cands.extend(parallelepiped_points(&g)?.into_iter().filter(|p| p.iter().any(|&x| x != 0)));
    }
    cands.sort();
    cands.dedup();
    let inside = |x: &[i64]| facets.iter().all(|h| h.holds(x));
    let irreducible: Vec<Vec<i64>> = cands
        .par_iter()
        .filter(|x| {
            !cands.iter().any(|c| {
                if c == *x {
                    return false;
                }
                let d: Vec<i64> = x.iter().zip(c).map(|(a, b)| a - b).collect();
                inside(&d)
            })
        })
        .cloned()
        .collect();
    Ok(irreducible)
}
