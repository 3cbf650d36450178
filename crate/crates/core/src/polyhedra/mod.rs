//! Exact rational cones and polytopes.

pub mod dd;
pub mod fan;
pub mod hilbert;
pub mod lattice;
pub mod linalg;
pub mod num;
pub mod toric;
pub mod triangulate;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

pub use fan::{normal_fan_rays, FanRays};
pub use hilbert::{hilbert_basis, hilbert_basis_exact, HilbertBasis};
pub use lattice::{lattice_points_at_height, LatticeEnumerator};
pub use toric::{classify_toric, ClassGroup, ToricReport};

use crate::error::{Error, Result};
use crate::tableaux::QuiverSpec;
use num::{dot_i64, gcd_slice, primitive};

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Linear functional `x -> weights.x / divisor`.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Height {
    #[serde_as(as = "Vec<DisplayFromStr>")]
    pub weights: Vec<i64>,
    #[serde_as(as = "DisplayFromStr")]
    pub divisor: i64,
}

impl Height {
    pub fn new(weights: Vec<i64>, divisor: i64) -> Self {
        assert!(divisor > 0, "height divisor must be positive");
        Height { weights, divisor }
    }

    pub fn uniform(dim: usize, divisor: i64) -> Self {
        Height::new(vec![1; dim], divisor)
    }

    /// Height of `x` when it is an integer.
    pub fn of(&self, x: &[i64]) -> Option<i64> {
        let s = dot_i64(&self.weights, x);
        let d = self.divisor as i128;
        (s % d == 0).then(|| (s / d) as i64)
    }

    pub fn of_rational(&self, x: &[i64]) -> BigRational {
        BigRational::new(BigInt::from(dot_i64(&self.weights, x)), BigInt::from(self.divisor))
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HalfspaceKind {
    Inequality,
    Equation,
}

/// `normal.x >= 0` or `normal.x = 0`, with primitive nonzero normal.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Halfspace {
    #[serde_as(as = "Vec<DisplayFromStr>")]
    pub normal: Vec<i64>,
    pub kind: HalfspaceKind,
}

impl Halfspace {
    pub fn inequality(normal: Vec<i64>) -> Self {
        Halfspace::new(normal, HalfspaceKind::Inequality)
    }

    pub fn equation(normal: Vec<i64>) -> Self {
        Halfspace::new(normal, HalfspaceKind::Equation)
    }

    fn new(normal: Vec<i64>, kind: HalfspaceKind) -> Self {
        assert!(normal.iter().any(|&x| x != 0), "halfspace normal must be nonzero");
        Halfspace {
            normal: primitive(&normal),
            kind,
        }
    }

    pub fn value(&self, x: &[i64]) -> i128 {
        dot_i64(&self.normal, x)
    }

    pub fn holds(&self, x: &[i64]) -> bool {
        let v = self.value(x);
        match self.kind {
            HalfspaceKind::Inequality => v >= 0,
            HalfspaceKind::Equation => v == 0,
        }
    }

    pub fn holds_rational(&self, x: &[BigRational]) -> bool {
        let v: BigRational = self.normal.iter().zip(x).map(|(&a, b)| rat(a) * b).sum();
        match self.kind {
            HalfspaceKind::Inequality => !v.is_negative(),
            HalfspaceKind::Equation => v.is_zero(),
        }
    }
}

/// Polyhedral cone in `Q^dim` with optional half-space and ray descriptions.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cone {
    pub ambient_dim: usize,
    pub hrep: Option<Vec<Halfspace>>,
    #[serde_as(as = "Option<Vec<Vec<DisplayFromStr>>>")]
    pub vrep: Option<Vec<Vec<i64>>>,
    #[serde_as(as = "Vec<Vec<DisplayFromStr>>")]
    pub lineality: Vec<Vec<i64>>,
}

impl Cone {
    pub fn from_hrep(ambient_dim: usize, hrep: Vec<Halfspace>) -> Self {
        Cone {
            ambient_dim,
            hrep: Some(hrep),
            vrep: None,
            lineality: Vec::new(),
        }
    }

    /// Cone generated by `rays`; zero vectors are dropped and the rest made
    /// primitive.
    pub fn from_rays(ambient_dim: usize, rays: &[Vec<i64>]) -> Self {
        let mut v: Vec<Vec<i64>> = rays
            .iter()
            .filter(|r| r.iter().any(|&x| x != 0))
            .map(|r| primitive(r))
            .collect();
        v.sort();
        v.dedup();
        Cone {
            ambient_dim,
            hrep: None,
            vrep: Some(v),
            lineality: Vec::new(),
        }
    }

    fn split_hrep(&self) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
        let mut ineqs = Vec::new();
        let mut eqs = Vec::new();
        for h in self.hrep.iter().flatten() {
            match h.kind {
                HalfspaceKind::Inequality => ineqs.push(h.normal.clone()),
                HalfspaceKind::Equation => eqs.push(h.normal.clone()),
            }
        }
        (ineqs, eqs)
    }

    /// Fills in whichever representation is missing. An existing half-space
    /// list is kept as given; rays are always the extreme rays.
    pub fn double_description(mut self) -> Result<Cone> {
        match (&self.hrep, &self.vrep) {
            (Some(_), None) => {
                let (ineqs, eqs) = self.split_hrep();
                let g = dd::hrep_to_vrep(&ineqs, &eqs, self.ambient_dim)?;
                self.vrep = Some(g.rays);
                self.lineality = g.lineality;
            }
            (None, Some(rays)) => {
                let f = dd::vrep_to_hrep(rays, &self.lineality, self.ambient_dim)?;
                let g = dd::hrep_to_vrep(&f.inequalities, &f.equations, self.ambient_dim)?;
                self.hrep = Some(facets_to_halfspaces(&f));
                self.vrep = Some(g.rays);
                self.lineality = g.lineality;
            }
            (Some(_), Some(_)) => {}
            (None, None) => return Err(Error::Precondition("cone has no representation".into())),
        }
        Ok(self)
    }

    /// Irredundant facet description computed from the rays.
    pub fn facets(&self) -> Result<Vec<Halfspace>> {
        let rays = self.rays()?;
        let f = dd::vrep_to_hrep(rays, &self.lineality, self.ambient_dim)?;
        Ok(facets_to_halfspaces(&f))
    }

    pub fn rays(&self) -> Result<&[Vec<i64>]> {
        self.vrep
            .as_deref()
            .ok_or_else(|| Error::Precondition("cone has no ray description".into()))
    }

    pub fn halfspaces(&self) -> Result<&[Halfspace]> {
        self.hrep
            .as_deref()
            .ok_or_else(|| Error::Precondition("cone has no half-space description".into()))
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn dimension(&self) -> usize {
        let mut gens: Vec<Vec<i64>> = self.vrep.clone().unwrap_or_default();
        gens.extend(self.lineality.iter().cloned());
        linalg::rank(&gens)
    }

    pub fn contains(&self, x: &[i64]) -> Result<bool> {
        if let Some(h) = &self.hrep {
            return Ok(h.iter().all(|h| h.holds(x)));
        }
        Ok(self.facets()?.iter().all(|h| h.holds(x)))
    }

    pub fn contains_rational(&self, x: &[BigRational]) -> Result<bool> {
        if let Some(h) = &self.hrep {
            return Ok(h.iter().all(|h| h.holds_rational(x)));
        }
        Ok(self.facets()?.iter().all(|h| h.holds_rational(x)))
    }

    /// Checks that the two representations describe the same cone: rays
    /// and lineality satisfy every half-space, every ray is extreme, and
    /// every facet of the ray cone lies on a facet of the half-space cone.
    pub fn certify(&self) -> Result<bool> {
        let rays = self.rays()?;
        let hs = self.halfspaces()?;
        let cone_dim = self.dimension();
        let tight_rows = |pts: &[&Vec<i64>]| -> Vec<Vec<i64>> {
            hs.iter()
                .filter(|h| pts.iter().all(|p| h.value(p) == 0))
                .map(|h| h.normal.clone())
                .collect()
        };
        if !rays.iter().all(|r| hs.iter().all(|h| h.holds(r))) {
            return Ok(false);
        }
        if !self.lineality.iter().all(|l| hs.iter().all(|h| h.value(l) == 0)) {
            return Ok(false);
        }
        let all: Vec<&Vec<i64>> = rays.iter().collect();
        let implicit = linalg::rank(&tight_rows(&all));
        if implicit + cone_dim != self.ambient_dim {
            return Ok(false);
        }
        for r in rays {
            if linalg::rank(&tight_rows(&[r])) + 1 + self.lineality.len() != self.ambient_dim {
                return Ok(false);
            }
        }
        let f = dd::vrep_to_hrep(rays, &self.lineality, self.ambient_dim)?;
        for a in &f.inequalities {
            let face: Vec<&Vec<i64>> = rays.iter().filter(|r| dot_i64(a, r) == 0).collect();
            if linalg::rank(&tight_rows(&face)) != implicit + 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Half-space description with coordinates renamed by `map`: coordinate
    /// `o` of this cone becomes coordinate `map[o]` of a cone in `Q^dim`.
    pub fn pull_back(&self, map: &[usize], dim: usize) -> Result<Cone> {
        let hs = self.halfspaces()?;
        let moved = hs
            .iter()
            .map(|h| {
                let mut n = vec![0; dim];
                for (o, &a) in h.normal.iter().enumerate() {
                    n[map[o]] = a;
                }
                Halfspace { normal: n, kind: h.kind }
            })
            .collect();
        Ok(Cone::from_hrep(dim, moved))
    }

    /// Slice `{x in cone : height(x) = h}`.
    pub fn slice(&self, h: i64, height: &Height) -> Result<Polytope> {
        if !self.is_pointed() {
            return Err(Error::Precondition("slice of a cone with lineality".into()));
        }
        let rays = self.rays()?;
        let mut verts = Vec::with_capacity(rays.len());
        for r in rays {
            let hr = height.of_rational(r);
            if !hr.is_positive() {
                return Err(Error::Precondition("height is not positive on a ray".into()));
            }
            let scale = rat(h) / hr;
            verts.push(r.iter().map(|&x| rat(x) * &scale).collect());
        }
        let mut normals = linalg::kernel_basis(rays, self.ambient_dim)?;
        normals.push(height.weights.clone());
        let basis = linalg::kernel_basis(&normals, self.ambient_dim)?;
        Ok(Polytope::with_basis(self.ambient_dim, verts, basis))
    }
}

fn facets_to_halfspaces(f: &dd::Facets) -> Vec<Halfspace> {
    let mut out: Vec<Halfspace> = f.equations.iter().map(|e| Halfspace::equation(e.clone())).collect();
    out.extend(f.inequalities.iter().map(|a| Halfspace::inequality(a.clone())));
    out
}

/// Concatenation of the half-space descriptions.
pub fn intersect(a: &Cone, b: &Cone) -> Result<Cone> {
    if a.ambient_dim != b.ambient_dim {
        return Err(Error::Precondition(format!(
            "ambient dimensions differ: {} vs {}",
            a.ambient_dim, b.ambient_dim
        )));
    }
    let mut hs = a.halfspaces()?.to_vec();
    hs.extend(b.halfspaces()?.iter().cloned());
    Cone::from_hrep(a.ambient_dim, hs).double_description()
}

/// Polytope given by its vertices and the lattice of its affine hull.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polytope {
    pub ambient_dim: usize,
    #[serde_as(as = "Vec<Vec<DisplayFromStr>>")]
    pub vertices: Vec<Vec<BigRational>>,
    #[serde_as(as = "Vec<DisplayFromStr>")]
    pub translation: Vec<BigRational>,
    /// Lattice basis, in Hermite normal form, of the integer points of the
    /// direction space.
    #[serde_as(as = "Vec<Vec<DisplayFromStr>>")]
    pub basis: Vec<Vec<i64>>,
}

impl Polytope {
    fn with_basis(ambient_dim: usize, mut vertices: Vec<Vec<BigRational>>, basis: Vec<Vec<i64>>) -> Self {
        vertices.sort();
        vertices.dedup();
        let translation = vertices.first().cloned().unwrap_or_else(|| vec![BigRational::zero(); ambient_dim]);
        Polytope {
            ambient_dim,
            vertices,
            translation,
            basis,
        }
    }

    /// Convex hull of rational points; redundant points are removed.
    pub fn from_points(ambient_dim: usize, points: &[Vec<BigRational>]) -> Result<Polytope> {
        if points.is_empty() {
            return Ok(Polytope::with_basis(ambient_dim, Vec::new(), Vec::new()));
        }
        let homog: Vec<Vec<i64>> = points.iter().map(|p| homogenize(p)).collect::<Result<_>>()?;
        let cone = Cone::from_rays(ambient_dim + 1, &homog).double_description()?;
        let verts: Vec<Vec<BigRational>> = cone.rays()?.iter().map(|r| dehomogenize(r)).collect();
        // direction lattice: vectors orthogonal to the affine equations
        let eqs: Vec<Vec<i64>> = cone
            .halfspaces()?
            .iter()
            .filter(|h| h.kind == HalfspaceKind::Equation)
            .map(|h| h.normal[..ambient_dim].to_vec())
            .collect();
        let basis = linalg::kernel_basis(&eqs, ambient_dim)?;
        Ok(Polytope::with_basis(ambient_dim, verts, basis))
    }

    pub fn dim(&self) -> usize {
        if self.vertices.is_empty() {
            0
        } else {
            self.basis.len()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_lattice(&self) -> bool {
        self.vertices.iter().all(|v| v.iter().all(|x| x.is_integer()))
    }

    /// Coordinates of `x - translation` in the lattice basis.
    pub fn intrinsic(&self, x: &[BigRational]) -> Option<Vec<BigRational>> {
        let d: Vec<BigRational> = x.iter().zip(&self.translation).map(|(a, b)| a - b).collect();
        linalg::coordinates_in_echelon(&self.basis, &d)
    }

    /// Vertices in intrinsic coordinates.
    pub fn intrinsic_vertices(&self) -> Vec<Vec<BigRational>> {
        self.vertices
            .iter()
            .map(|v| self.intrinsic(v).expect("vertex lies in the affine hull"))
            .collect()
    }
}

/// `(den * p, den)` made primitive.
pub fn homogenize(p: &[BigRational]) -> Result<Vec<i64>> {
    let mut den = BigInt::from(1);
    for x in p {
        den = num_integer::Integer::lcm(&den, x.denom());
    }
    let mut out: Vec<i64> = Vec::with_capacity(p.len() + 1);
    for x in p {
        let v = (x * BigRational::from_integer(den.clone())).to_integer();
        out.push(i64::try_from(v).map_err(|_| Error::Overflow("homogenize"))?);
    }
    out.push(i64::try_from(den).map_err(|_| Error::Overflow("homogenize"))?);
    let g = gcd_slice(&out);
    Ok(out.into_iter().map(|x| x / g).collect())
}

pub fn dehomogenize(r: &[i64]) -> Vec<BigRational> {
    let (last, head) = r.split_last().expect("nonempty");
    head.iter()
        .map(|&x| BigRational::new(BigInt::from(x), BigInt::from(*last)))
        .collect()
}

/// The half-space model of the Kronecker cone.
pub fn kronecker_halfspaces(spec: &QuiverSpec) -> Cone {
    let (n, r1, r2) = (spec.n as usize, spec.r1 as usize, spec.r2 as usize);
    let dim = spec.dim();
    let idx = |i: usize, j: usize, k: usize| spec.index(i as u32, j as u32, k as u32);
    let mut hs = Vec::new();
    for t in 0..dim {
        let mut a = vec![0; dim];
        a[t] = 1;
        hs.push(Halfspace::inequality(a));
    }
    for j in 1..r2 {
        let mut a = vec![0; dim];
        for i in 1..=n {
            for k in 1..=r1 {
                a[idx(i, j, k)] += 1;
                a[idx(i, j + 1, k)] -= 1;
            }
        }
        hs.push(Halfspace::equation(a));
    }
    for k in 1..r1 {
        let mut a = vec![0; dim];
        for i in 1..=n {
            for j in 1..=r2 {
                a[idx(i, j, k)] += 1;
                a[idx(i, j, k + 1)] -= 1;
            }
        }
        hs.push(Halfspace::equation(a));
    }
    // plus side: rows j, j+1 with labels (i, k) in lex order
    for j in 1..r2 {
        let labels: Vec<(usize, usize)> = (1..=n).flat_map(|i| (1..=r1).map(move |k| (i, k))).collect();
        for (p, _) in labels.iter().enumerate() {
            let mut a = vec![0; dim];
            for &(s, l) in &labels[..p] {
                a[idx(s, j, l)] += 1;
            }
            for &(s, l) in &labels[..=p] {
                a[idx(s, j + 1, l)] -= 1;
            }
            hs.push(Halfspace::inequality(a));
        }
    }
    // minus side: rows k, k+1 with labels (i, j)
    for k in 1..r1 {
        let labels: Vec<(usize, usize)> = (1..=n).flat_map(|i| (1..=r2).map(move |j| (i, j))).collect();
        for (p, _) in labels.iter().enumerate() {
            let mut a = vec![0; dim];
            for &(s, m) in &labels[..p] {
                a[idx(s, m, k)] += 1;
            }
            for &(s, m) in &labels[..=p] {
                a[idx(s, m, k + 1)] -= 1;
            }
            hs.push(Halfspace::inequality(a));
        }
    }
    Cone::from_hrep(dim, hs)
}

/// Coordinate maps identifying an exponent vector with the plus-side
/// exponents of `(n r1, 1, r2)` (matrices stacked horizontally) and with
/// those of `(n r2, 1, r1)` (stacked vertically, then transposed).
pub fn kronecker_views(spec: &QuiverSpec) -> Result<[(QuiverSpec, Vec<usize>); 2]> {
    let (n, r1, r2) = (spec.n, spec.r1, spec.r2);
    let horizontal = QuiverSpec::new(n * r1, 1, r2)?;
    let vertical = QuiverSpec::new(n * r2, 1, r1)?;
    // index in the view -> index in the original space
    let mut hmap = vec![0; spec.dim()];
    let mut vmap = vec![0; spec.dim()];
    for i in 1..=n {
        for j in 1..=r2 {
            for k in 1..=r1 {
                let orig = spec.index(i, j, k);
                hmap[horizontal.index((i - 1) * r1 + k, j, 1)] = orig;
                vmap[vertical.index((i - 1) * r2 + j, k, 1)] = orig;
            }
        }
    }
    Ok([(horizontal, hmap), (vertical, vmap)])
}

/// The cone cut out by the two Grassmannian views of `spec`.
pub fn kronecker_intersection(spec: &QuiverSpec) -> Result<Cone> {
    let [(h, hmap), (v, vmap)] = kronecker_views(spec)?;
    let a = kronecker_halfspaces(&h).pull_back(&hmap, spec.dim())?;
    let b = kronecker_halfspaces(&v).pull_back(&vmap, spec.dim())?;
    intersect(&a, &b)
}
