//! Reproduction of the worked examples against a table of expected values.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matching::{grading_c0, grading_c2, sagbi_pipeline, PipelineConfig, PipelineReport};
use crate::mirror::{classical_period, laurent_from_rays, newton_invariants, DEFAULT_TERM_CAP};
use crate::polyhedra::{classify_toric, hilbert_basis, kronecker_halfspaces, normal_fan_rays, HilbertBasis};
use crate::semiinvariant::{verify_lm, DEFAULT_ORBIT_CAP};
use crate::tableaux::{pair_from_exponent, ExponentVector, QuiverSpec, Tableau};

/// Version of the expected-values table.
pub const EXPECTED_VERSION: &str = "1";

/// Canonical plus tableaux of the 20 generators of the `C_2` example on `K^3_{2,3}`, in order.
pub const K323_MF_PLUS: [&str; 20] = [
    "21 21;22 31;32 32",
    "21 31;31 12;32 32",
    "21 31;22 12;31 32",
    "21 21;12 31;32 32",
    "21 21;12 31;22 32",
    "21 21;12 22;31 32",
    "21 21;12 22;22 31",
    "21 31;12 12;31 32",
    "21 21;12 12;31 32",
    "21 21;12 12;22 31",
    "11 21;12 31;32 32",
    "11 21;12 31;22 32",
    "11 21;12 22;21 32",
    "11 31;12 12;31 32",
    "11 31;12 12;21 32",
    "11 21;12 12;31 32",
    "11 21;12 12;22 31",
    "11 21;12 12;21 32",
    "11 21;12 12;21 22",
    "11 11;12 12;21 32",
];

/// The matching minus tableaux.
pub const K323_MF_MINUS: [&str; 20] = [
    "21 21 32;22 33 33",
    "21 31 32;12 33 33",
    "21 31 33;22 33 12",
    "21 21 32;12 33 33",
    "21 21 32;12 23 33",
    "21 21 33;22 33 12",
    "21 21 33;22 23 12",
    "21 31 33;12 33 12",
    "21 21 33;12 33 12",
    "21 21 33;12 23 12",
    "11 21 32;12 33 33",
    "11 21 32;12 23 33",
    "11 21 23;12 22 33",
    "11 31 33;12 33 12",
    "11 23 31;12 12 33",
    "11 21 33;12 33 12",
    "11 21 33;12 23 12",
    "11 21 23;12 12 33",
    "11 21 23;12 23 12",
    "11 11 23;12 12 33",
];

/// Plus tableaux of the degree-three generators of `K^4_{2,3}`.
pub const K423_GC_DEGREE_THREE: [&str; 20] = [
    "11 11 11 11 11 22;12 12 12 12 32 32;21 21 21 31 42 42",
    "11 11 11 11 11 22;12 12 12 22 32 32;21 21 21 31 42 42",
    "11 11 11 11 11 22;12 12 12 12 32 32;21 21 21 21 42 42",
    "11 11 22 22 32 32;21 21 31 31 41 41;31 32 42 42 42 42",
    "11 11 22 22 32 32;21 21 31 31 41 41;31 42 42 42 42 42",
    "11 11 22 22 32 32;21 21 31 31 41 41;31 32 32 42 42 42",
    "11 11 11 11 11 22;12 12 12 12 32 32;21 21 31 31 42 42",
    "11 11 11 11 11 22;12 12 22 22 32 32;21 21 31 31 42 42",
    "11 11 11 11 11 22;12 12 12 22 32 32;21 21 31 31 42 42",
    "11 11 22 22 32 32;21 21 41 41 41 41;31 42 42 42 42 42",
    "11 11 22 32 32 32;21 21 41 41 41 41;31 42 42 42 42 42",
    "11 11 32 32 32 32;21 21 41 41 41 41;31 42 42 42 42 42",
    "11 11 11 11 21 22;12 12 22 22 32 32;21 21 31 31 42 42",
    "11 11 11 11 21 22;12 12 12 22 32 32;21 21 31 31 42 42",
    "11 11 11 21 21 22;12 12 22 22 32 32;21 21 31 31 42 42",
    "11 11 11 11 21 22;12 12 12 22 32 32;21 21 21 31 42 42",
    "11 11 22 32 32 32;21 21 31 41 41 41;31 32 42 42 42 42",
    "11 11 22 22 32 32;21 21 31 41 41 41;31 32 42 42 42 42",
    "11 11 22 22 32 32;21 21 31 41 41 41;31 42 42 42 42 42",
    "11 11 22 32 32 32;21 21 31 41 41 41;31 42 42 42 42 42",
];

pub const K323_PERIOD: [u64; 21] = [
    1, 0, 0, 18, 0, 0, 4590, 0, 0, 1728720, 0, 0, 876610350, 0, 0, 520461209268, 0, 0, 343838539188144, 0, 0,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Example {
    K323Gc,
    K423Gc,
    K323Mf,
    K423Mf,
}

impl Example {
    pub const ALL: [Example; 4] = [Example::K323Gc, Example::K423Gc, Example::K323Mf, Example::K423Mf];

    pub fn spec(self) -> QuiverSpec {
        let n = match self {
            Example::K323Gc | Example::K323Mf => 3,
            Example::K423Gc | Example::K423Mf => 4,
        };
        QuiverSpec::new(n, 2, 3).expect("valid spec")
    }
}

impl fmt::Display for Example {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Example::K323Gc => "K323-gc",
            Example::K423Gc => "K423-gc",
            Example::K323Mf => "K323-mf",
            Example::K423Mf => "K423-mf",
        })
    }
}

impl FromStr for Example {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Example::ALL
            .into_iter()
            .find(|e| e.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown example {s:?}; expected one of K323-gc, K423-gc, K323-mf, K423-mf")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metric {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproReport {
    pub example: Example,
    pub table_version: String,
    pub slow: bool,
    pub metrics: Vec<Metric>,
    pub pass: bool,
    /// Wall-clock seconds per stage.
    pub stages: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReproOptions {
    /// Also run the expensive checks: degree-three expansions and the
    /// twelve-variable period.
    pub slow: bool,
    pub lattice_cap: u64,
}

impl Default for ReproOptions {
    fn default() -> Self {
        ReproOptions {
            slow: false,
            lattice_cap: 50_000_000,
        }
    }
}

struct Recorder {
    metrics: Vec<Metric>,
    stages: Vec<(String, f64)>,
    clock: Instant,
}

impl Recorder {
    fn new() -> Self {
        Recorder {
            metrics: Vec::new(),
            stages: Vec::new(),
            clock: Instant::now(),
        }
    }

    fn check<T: ToString + PartialEq>(&mut self, name: &str, expected: T, computed: T) {
        self.metrics.push(Metric {
            name: name.into(),
            matches: expected == computed,
            expected: expected.to_string(),
            computed: computed.to_string(),
        });
    }

    fn stage(&mut self, name: &str) {
        self.stages.push((name.into(), self.clock.elapsed().as_secs_f64()));
        self.clock = Instant::now();
    }
}

fn by_height(h: &HilbertBasis) -> String {
    h.count_by_height()
        .iter()
        .map(|(d, c)| format!("{d}:{c}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or("none".into(), T::to_string)
}

fn gelfand_cetlin(ex: Example, opts: &ReproOptions, rec: &mut Recorder) -> Result<()> {
    let spec = ex.spec();
    let height = spec.height();
    let cone = kronecker_halfspaces(&spec).double_description()?;
    rec.check("cone certified", true, cone.certify()?);
    rec.stage("cone");
    let (max_degree, window) = if ex == Example::K323Gc { (1, 2) } else { (3, 2) };
    let hb = hilbert_basis(&cone, &height, max_degree, window, opts.lattice_cap)?;
    rec.stage("hilbert basis");
    let (total, split) = if ex == Example::K323Gc { (20, "1:20") } else { (232, "1:126,2:86,3:20") };
    rec.check("generators", total, hb.generators.len());
    rec.check("generators by height", split.to_string(), by_height(&hb));
    rec.check("no generator above the search degree", true, hb.window_clean);
    let pairs: Vec<_> = hb
        .generators
        .iter()
        .map(|g| ExponentVector::from_point(spec, g).ok().and_then(|v| pair_from_exponent(&v)))
        .collect();
    rec.check(
        "generators are semi-standard pairs",
        hb.generators.len(),
        pairs.iter().filter(|p| p.as_ref().is_some_and(|r| r.semistandard)).count(),
    );
    if ex == Example::K423Gc {
        let reference: Vec<Tableau> = K423_GC_DEGREE_THREE.iter().map(|s| s.parse()).collect::<Result<_>>()?;
        let mut got: Vec<Tableau> = hb
            .heights
            .iter()
            .zip(&pairs)
            .filter(|(&h, _)| h == 3)
            .filter_map(|(_, p)| p.as_ref().map(|r| r.pair.plus.clone()))
            .collect();
        let mut want = reference.clone();
        got.sort_by_key(|t| t.to_string());
        want.sort_by_key(|t| t.to_string());
        rec.check("degree-three plus tableaux equal the reference list", true, got == want);
    }
    if ex == Example::K323Gc || opts.slow {
        let c0 = grading_c0(&spec);
        let ok = pairs
            .iter()
            .filter_map(|p| p.as_ref())
            .map(|r| verify_lm(&r.pair, &c0, DEFAULT_ORBIT_CAP))
            .collect::<Result<Vec<bool>>>()?;
        rec.check("leading monomials verified", hb.generators.len(), ok.iter().filter(|&&b| b).count());
        rec.stage("expansions");
    }
    let poly = cone.slice(1, &height)?;
    let fan = normal_fan_rays(&poly)?;
    let toric = classify_toric(&fan)?;
    rec.stage("polytope and fan");
    let (verts, rays) = if ex == Example::K323Gc { (18, 13) } else { (141, 26) };
    rec.check("polytope vertices", verts, poly.vertices.len());
    rec.check("fan rays", rays, fan.rays.len());
    rec.check("fano", "true".to_string(), opt(&toric.fano));
    let gorenstein = if ex == Example::K323Gc { "true" } else { "false" };
    rec.check("gorenstein", gorenstein.to_string(), opt(&toric.gorenstein));
    if ex == Example::K323Gc {
        rec.check("terminal", "true".to_string(), opt(&toric.terminal));
    }
    Ok(())
}

fn matching_field(ex: Example, opts: &ReproOptions, rec: &mut Recorder) -> Result<()> {
    let spec = ex.spec();
    let (max_degree, certify_window) = if ex == Example::K323Mf { (4, 2) } else { (2, 1) };
    let cfg = PipelineConfig {
        max_degree,
        certify_window,
        lattice_cap: opts.lattice_cap,
        ..PipelineConfig::default()
    };
    let r: PipelineReport = sagbi_pipeline(&grading_c2(&spec)?, &cfg)?;
    rec.stage("pipeline");
    let (total, split) = if ex == Example::K323Mf { (20, "1:20") } else { (206, "1:126,2:80") };
    rec.check("generators", total, r.generators.len());
    rec.check("generators by height", split.to_string(), by_height(&r.hilbert));
    rec.check("no generator above the search degree", true, r.hilbert.window_clean);
    rec.check("leading monomials verified", total, r.generators.iter().filter(|g| g.lm_verified).count());
    rec.check("fallback used", 0, r.fallback_needed);
    if ex == Example::K323Mf {
        let plus: Vec<Tableau> = K323_MF_PLUS.iter().map(|s| s.parse()).collect::<Result<_>>()?;
        let minus: Vec<Tableau> = K323_MF_MINUS.iter().map(|s| s.parse()).collect::<Result<_>>()?;
        let got_plus: Vec<Option<Tableau>> = r.generators.iter().map(|g| g.pair.as_ref().map(|p| p.plus.clone())).collect();
        let got_minus: Vec<Option<Tableau>> = r.generators.iter().map(|g| g.pair.as_ref().map(|p| p.minus.clone())).collect();
        rec.check("plus tableaux equal the reference list in order", true, got_plus == plus.into_iter().map(Some).collect::<Vec<_>>());
        rec.check("minus tableaux equal the reference list in order", true, got_minus == minus.into_iter().map(Some).collect::<Vec<_>>());
    }
    let (verts, rays) = if ex == Example::K323Mf { (20, Some(12)) } else { (142, None) };
    rec.check("polytope vertices", verts, r.polytope.vertices);
    if ex == Example::K323Mf {
        rec.check("polytope lattice points", 20, r.polytope.lattice_points);
    } else {
        rec.check("polytope has a non-lattice vertex", true, !r.polytope.is_lattice);
    }
    if let Some(rays) = rays {
        rec.check("fan rays", rays, r.fan.rays.len());
    }
    for (name, v) in [("fano", r.toric.fano), ("gorenstein", r.toric.gorenstein), ("terminal", r.toric.terminal)] {
        rec.check(name, "true".to_string(), opt(&v));
    }
    if ex == Example::K423Mf {
        rec.check("fano index", "4".to_string(), opt(&r.toric.fano_index));
    }
    let f = laurent_from_rays(&r.fan)?;
    let inv = newton_invariants(&f)?;
    rec.stage("mirror");
    let (mv, mp) = if ex == Example::K323Mf { (12, 13) } else { (30, 31) };
    rec.check("mirror vertices", mv, inv.vertices);
    rec.check("mirror lattice points", mp.to_string(), opt(&inv.lattice_points));
    if ex == Example::K323Mf {
        rec.check("mirror reflexive", "true".to_string(), opt(&inv.reflexive));
        let p = classical_period(&f, 21, DEFAULT_TERM_CAP)?;
        let want: Vec<BigInt> = K323_PERIOD.iter().map(|&x| BigInt::from(x)).collect();
        let show = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        rec.check("period", show(&want), show(&p.coefficients));
        rec.stage("period");
    } else if opts.slow {
        let p = classical_period(&f, 13, DEFAULT_TERM_CAP)?;
        let off = p.coefficients.iter().enumerate().all(|(k, c)| k % 4 == 0 || c == &BigInt::from(0));
        rec.check("period vanishes off multiples of the fano index", true, off);
        rec.stage("period");
    }
    Ok(())
}

/// Runs one worked example and compares every checkable constant.
pub fn reproduce(ex: Example, opts: &ReproOptions) -> Result<ReproReport> {
    let mut rec = Recorder::new();
    match ex {
        Example::K323Gc | Example::K423Gc => gelfand_cetlin(ex, opts, &mut rec)?,
        Example::K323Mf | Example::K423Mf => matching_field(ex, opts, &mut rec)?,
    }
    let pass = rec.metrics.iter().all(|m| m.matches);
    Ok(ReproReport {
        example: ex,
        table_version: EXPECTED_VERSION.into(),
        slow: opts.slow,
        metrics: rec.metrics,
        pass,
        stages: rec.stages,
    })
}
