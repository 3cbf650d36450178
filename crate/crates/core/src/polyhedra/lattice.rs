//! Lattice points of a cone at a fixed height by bounded descent over the
//! coordinates.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_integer::Integer;
use rayon::prelude::*;

use super::{dd, Cone, Height};
use crate::error::{Error, Result};

/// `a . (x_0..x_t) + c >= 0`, or `= 0` for equations.
#[derive(Debug, Clone)]
struct Row {
    a: Vec<i128>,
    c: i128,
    equation: bool,
}

/// Enumerates `{x in Z^d : x in cone, height(x) = h}` for a fixed cone,
/// height and `h`. Level `t` is pruned by the exact facets of the
/// projection of the height-`h` slice onto the first `t + 1` coordinates.
#[derive(Debug, Clone)]
pub struct LatticeEnumerator {
    dim: usize,
    lo: Vec<i128>,
    hi: Vec<i128>,
    // rows of level t with a nonzero coefficient on x_t
    levels: Vec<Vec<Row>>,
    // the cone is the origin and the height is positive
    empty: bool,
}

/// `c x >= d` turned into a bound on `x`, or infeasibility.
fn apply(c: i128, d: i128, lo: &mut i128, hi: &mut i128) -> bool {
    match c.signum() {
        1 => *lo = (*lo).max(Integer::div_ceil(&d, &c)),
        -1 => *hi = (*hi).min(Integer::div_floor(&d, &c)),
        _ => {
            if d > 0 {
                return false;
            }
        }
    }
    true
}

impl LatticeEnumerator {
    pub fn new(cone: &Cone, h: i64, height: &Height) -> Result<Self> {
        if !cone.is_pointed() {
            return Err(Error::Precondition("lattice points of a cone with lineality".into()));
        }
        if h < 0 {
            return Err(Error::Precondition("negative height".into()));
        }
        let dim = cone.ambient_dim;
        let rays = cone.rays()?;
        let target = h as i128 * height.divisor as i128;
        let heights: Vec<i64> = rays
            .iter()
            .map(|r| {
                let hr = super::num::dot_i64(&height.weights, r);
                if hr <= 0 {
                    return Err(Error::Precondition("height is not positive on a ray".into()));
                }
                i64::try_from(hr).map_err(|_| Error::Overflow("ray height"))
            })
            .collect::<Result<_>>()?;
        let mut lo = vec![0i128; dim];
        let mut hi = vec![0i128; dim];
        for (n, (r, &hr)) in rays.iter().zip(&heights).enumerate() {
            let hr = hr as i128;
            for t in 0..dim {
                let num = r[t] as i128 * target;
                let (f, c) = (Integer::div_floor(&num, &hr), Integer::div_ceil(&num, &hr));
                if n == 0 {
                    lo[t] = f;
                    hi[t] = c;
                } else {
                    lo[t] = lo[t].min(f);
                    hi[t] = hi[t].max(c);
                }
            }
        }
        let levels = (0..dim)
            .into_par_iter()
            .map(|t| -> Result<Vec<Row>> {
                let proj: Vec<Vec<i64>> = rays
                    .iter()
                    .zip(&heights)
                    .map(|(r, &hr)| {
                        let mut v = r[..=t].to_vec();
                        v.push(hr);
                        v
                    })
                    .collect();
                let f = dd::vrep_to_hrep(&proj, &[], t + 2)?;
                let mk = |a: &Vec<i64>, equation: bool| Row {
                    a: a[..=t].iter().map(|&x| x as i128).collect(),
                    c: a[t + 1] as i128 * target,
                    equation,
                };
                Ok(f.equations
                    .iter()
                    .map(|a| mk(a, true))
                    .chain(f.inequalities.iter().map(|a| mk(a, false)))
                    .filter(|r| r.a[t] != 0)
                    .collect())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LatticeEnumerator {
            dim,
            lo,
            hi,
            levels,
            empty: rays.is_empty() && h > 0,
        })
    }

    /// Feasible range of `x_t` given the prefix `x_0..x_{t-1}`.
    fn range(&self, t: usize, x: &[i64]) -> Option<(i128, i128)> {
        let (mut lo, mut hi) = (self.lo[t], self.hi[t]);
        for row in &self.levels[t] {
            let s: i128 = row.c + row.a[..t].iter().zip(x).map(|(a, &v)| a * v as i128).sum::<i128>();
            let a_t = row.a[t];
            if !apply(a_t, -s, &mut lo, &mut hi) {
                return None;
            }
            if row.equation && !apply(-a_t, s, &mut lo, &mut hi) {
                return None;
            }
            if lo > hi {
                return None;
            }
        }
        (lo <= hi).then_some((lo, hi))
    }

    fn descend<P, F: Fn(&[i64]) -> P>(&self, t: usize, x: &mut Vec<i64>, out: &mut Vec<P>, f: &F, ctl: &Control) {
        if ctl.stop.load(Ordering::Relaxed) {
            return;
        }
        if t == self.dim {
            if ctl.count.fetch_add(1, Ordering::Relaxed) >= ctl.cap {
                ctl.stop.store(true, Ordering::Relaxed);
                return;
            }
            out.push(f(x));
            return;
        }
        let Some((lo, hi)) = self.range(t, x) else {
            return;
        };
        for v in lo..=hi {
            x.push(v as i64);
            self.descend(t + 1, x, out, f, ctl);
            x.pop();
        }
    }

    /// Maps `f` over the lattice points in lex order. Fails with a resource
    /// error once more than `cap` points have been produced.
    pub fn map_points<P: Send, F: Fn(&[i64]) -> P + Sync>(&self, cap: u64, f: F) -> Result<Vec<P>> {
        if self.empty {
            return Ok(Vec::new());
        }
        let ctl = Control {
            count: AtomicU64::new(0),
            stop: AtomicBool::new(false),
            cap,
        };
        // breadth-first expansion of the first levels for parallel work
        let mut frontier: Vec<Vec<i64>> = vec![Vec::new()];
        let mut depth = 0;
        while depth < self.dim && frontier.len() < 256 {
            let mut next = Vec::new();
            for x in frontier {
                if let Some((lo, hi)) = self.range(depth, &x) {
                    for v in lo..=hi {
                        let mut y = x.clone();
                        y.push(v as i64);
                        next.push(y);
                    }
                }
            }
            frontier = next;
            depth += 1;
        }
        let chunks: Vec<Vec<P>> = frontier
            .into_par_iter()
            .map(|mut x| {
                let mut out = Vec::new();
                self.descend(depth, &mut x, &mut out, &f, &ctl);
                out
            })
            .collect();
        let total = ctl.count.load(Ordering::Relaxed);
        if ctl.stop.load(Ordering::Relaxed) {
            return Err(Error::cap("lattice points", cap, total.min(cap)));
        }
        Ok(chunks.into_iter().flatten().collect())
    }

    pub fn points(&self, cap: u64) -> Result<Vec<Vec<i64>>> {
        self.map_points(cap, |x| x.to_vec())
    }

    pub fn count(&self, cap: u64) -> Result<u64> {
        Ok(self.map_points(cap, |_| ())?.len() as u64)
    }
}

struct Control {
    count: AtomicU64,
    stop: AtomicBool,
    cap: u64,
}

/// Lattice points of height exactly `h`, in lex order.
pub fn lattice_points_at_height(cone: &Cone, h: i64, height: &Height, cap: u64) -> Result<Vec<Vec<i64>>> {
    LatticeEnumerator::new(cone, h, height)?.points(cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedra::{kronecker_halfspaces, Halfspace};
    use crate::tableaux::QuiverSpec;

    fn brute(cone: &Cone, h: i64, height: &Height, bound: i64) -> Vec<Vec<i64>> {
        let d = cone.ambient_dim;
        let mut out = Vec::new();
        let mut x = vec![-bound; d];
        loop {
            if height.of(&x) == Some(h) && cone.contains(&x).unwrap() {
                out.push(x.clone());
            }
            let mut i = d;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if x[i] < bound {
                    x[i] += 1;
                    break;
                }
                x[i] = -bound;
            }
        }
    }

    #[test]
    fn triangle_cone_matches_brute_force() {
        let cone = Cone::from_rays(3, &[vec![1, 0, 1], vec![-1, 2, 1], vec![0, -1, 2]])
            .double_description()
            .unwrap();
        let height = Height::new(vec![0, 0, 1], 1);
        for h in 0..4 {
            let got = lattice_points_at_height(&cone, h, &height, 1 << 20).unwrap();
            assert_eq!(got, brute(&cone, h, &height, 8), "height {h}");
        }
    }

    #[test]
    fn k323_height_one() {
        let spec = QuiverSpec::new(3, 2, 3).unwrap();
        let cone = kronecker_halfspaces(&spec).double_description().unwrap();
        let pts = lattice_points_at_height(&cone, 1, &spec.height(), 1 << 20).unwrap();
        assert_eq!(pts.len(), 20);
        let mut sorted = pts.clone();
        sorted.sort();
        assert_eq!(pts, sorted);
        assert_eq!(lattice_points_at_height(&cone, 0, &spec.height(), 10).unwrap(), vec![vec![0; 18]]);
    }

    #[test]
    fn cap_is_reported() {
        let spec = QuiverSpec::new(3, 2, 3).unwrap();
        let cone = kronecker_halfspaces(&spec).double_description().unwrap();
        let err = lattice_points_at_height(&cone, 1, &spec.height(), 5).unwrap_err();
        assert!(matches!(err, Error::ResourceCap { cap: 5, .. }));
    }

    #[test]
    fn equation_cone_in_the_plane() {
        let cone = Cone::from_hrep(
            3,
            vec![
                Halfspace::inequality(vec![1, 0, 0]),
                Halfspace::inequality(vec![0, 1, 0]),
                Halfspace::equation(vec![1, 1, -1]),
            ],
        )
        .double_description()
        .unwrap();
        let height = Height::new(vec![0, 0, 1], 1);
        let pts = lattice_points_at_height(&cone, 3, &height, 100).unwrap();
        assert_eq!(pts, vec![vec![0, 3, 3], vec![1, 2, 3], vec![2, 1, 3], vec![3, 0, 3]]);
    }

    #[test]
    fn origin_cone_has_points_only_at_height_zero() {
        // two rows but one letter: no column can be strict
        let spec = QuiverSpec::new(1, 1, 2).unwrap();
        let cone = kronecker_halfspaces(&spec).double_description().unwrap();
        assert!(cone.rays().unwrap().is_empty());
        let height = spec.height();
        assert_eq!(lattice_points_at_height(&cone, 0, &height, 10).unwrap(), vec![vec![0, 0]]);
        for h in 1..=3 {
            assert!(lattice_points_at_height(&cone, h, &height, 10).unwrap().is_empty());
        }
    }
}
