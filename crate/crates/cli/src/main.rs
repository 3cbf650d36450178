//! Batch driver: each subcommand writes one JSON artifact and prints a short
//! summary.

mod cache;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use kronecker_core::matching::{grading_c0, grading_c2, mf_cones, sagbi_pipeline, PipelineConfig, PipelineReport};
use kronecker_core::mirror::{
    classical_period, laurent_from_rays, newton_invariants, LaurentPolynomial, NewtonReport, PeriodSequence,
    DEFAULT_TERM_CAP,
};
use kronecker_core::polyhedra::{
    classify_toric, hilbert_basis, intersect, kronecker_halfspaces, normal_fan_rays, Cone, FanRays, HilbertBasis,
    LatticeEnumerator, Polytope, ToricReport,
};
use kronecker_core::reproduce::{reproduce, Example, ReproOptions, ReproReport};
use kronecker_core::semiinvariant::{Grading, DEFAULT_ORBIT_CAP};
use kronecker_core::tableaux::QuiverSpec;
use kronecker_core::Error;

use cache::Cache;

pub const SCHEMA: &str = "kronecker-artifact/1";
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "kronecker", version, about = "Toric degenerations of Kronecker moduli spaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Debug, Serialize)]
struct Job {
    #[arg(long, default_value_t = 3)]
    n: u32,
    #[arg(long, default_value_t = 2)]
    r1: u32,
    #[arg(long, default_value_t = 3)]
    r2: u32,
    /// `c0`, `c2`, or a JSON file holding the matrices `c^i` (n x r2 x r1).
    #[arg(long, default_value = "c0")]
    grading: String,
    #[arg(long, default_value_t = 4)]
    max_degree: i64,
    #[arg(long, default_value_t = 2)]
    certify_window: i64,
    #[arg(long, default_value_t = 50_000_000)]
    lattice_cap: u64,
    #[arg(long, default_value_t = DEFAULT_ORBIT_CAP)]
    orbit_cap: u64,
    #[arg(long, default_value_t = DEFAULT_TERM_CAP)]
    term_cap: u64,
}

#[derive(Args, Clone, Debug)]
struct Io {
    /// Directory receiving the artifact.
    #[arg(long, default_value = "kronecker-out")]
    out: PathBuf,
    /// Skip the artifact cache.
    #[arg(long)]
    no_cache: bool,
    /// Upstream artifact to start from instead of recomputing it.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// The cone of exponents (Kronecker cone for c0, matching-field intersection otherwise).
    Cone {
        #[command(flatten)]
        job: Job,
        #[command(flatten)]
        io: Io,
    },
    /// Hilbert basis of the cone.
    Generators {
        #[command(flatten)]
        job: Job,
        #[command(flatten)]
        io: Io,
    },
    /// Height-one slice of the cone.
    Polytope {
        #[command(flatten)]
        job: Job,
        #[command(flatten)]
        io: Io,
    },
    /// Normal fan of the polytope.
    Fan {
        #[command(flatten)]
        job: Job,
        #[command(flatten)]
        io: Io,
    },
    /// Toric classification of the fan.
    Classify {
        #[command(flatten)]
        job: Job,
        #[command(flatten)]
        io: Io,
    },
    /// Laurent polynomial on the rays of the fan.
    Mirror {
        #[command(flatten)]
        job: Job,
        #[command(flatten)]
        io: Io,
    },
    /// Classical period `c_0..c_terms` of the mirror, or of `--polynomial`.
    Period {
        #[arg(long, default_value_t = 20)]
        terms: usize,
        /// Laurent polynomial in `x1, x2, ...`, e.g. `x1 + x2 + 1/(x1*x2)`.
        #[arg(long)]
        polynomial: Option<String>,
        #[command(flatten)]
        job: Job,
        #[command(flatten)]
        io: Io,
    },
    /// Matching-field construction with leading-monomial checks.
    VerifySagbi {
        #[command(flatten)]
        job: Job,
        #[command(flatten)]
        io: Io,
    },
    /// Recompute a worked example and compare against the expected values.
    Reproduce {
        /// One of K323-gc, K423-gc, K323-mf, K423-mf.
        example: String,
        #[arg(long)]
        slow: bool,
        #[command(flatten)]
        io: Io,
    },
}

/// Failure with its exit status.
#[derive(Debug)]
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 4,
            kind: "usage",
            message: message.into(),
        }
    }

    fn mismatch(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            kind: "mismatch",
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::ResourceCap { .. } => (3, "resource_cap"),
            Error::Incoherent(_) => (1, "incoherent"),
            Error::InvalidSpec(_) | Error::Parse(_) | Error::Shape(_) | Error::Label { .. } => (4, "usage"),
            Error::Unsupported(_) => (1, "unsupported"),
            _ => (1, "computation"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: 1,
            kind: "io",
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure {
            code: 4,
            kind: "artifact",
            message: e.to_string(),
        }
    }
}

type Res<T> = Result<T, Failure>;

#[derive(Serialize, Deserialize)]
struct Artifact<T> {
    schema: String,
    kind: String,
    code_version: String,
    config: serde_json::Value,
    data: T,
}

#[derive(Serialize, Deserialize, Clone)]
struct ConeData {
    cone: Cone,
    dimension: usize,
    pointed: bool,
    certified: bool,
}

#[derive(Serialize, Deserialize, Clone)]
struct PolytopeData {
    polytope: Polytope,
    dim: usize,
    vertices: usize,
    lattice_points: u64,
    is_lattice: bool,
}

#[derive(Serialize, Deserialize, Clone)]
struct MirrorData {
    polynomial: LaurentPolynomial,
    text: String,
    newton: NewtonReport,
}

fn load_grading(job: &Job, spec: &QuiverSpec) -> Res<Grading> {
    match job.grading.as_str() {
        "c0" => Ok(grading_c0(spec)),
        "c2" => Ok(grading_c2(spec)?),
        path => {
            let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("grading file {path}: {e}")))?;
            let m: Vec<Vec<Vec<i64>>> = serde_json::from_str(&text)?;
            let mut c = vec![0; spec.dim()];
            if m.len() != spec.n as usize
                || m.iter().any(|x| x.len() != spec.r2 as usize || x.iter().any(|r| r.len() != spec.r1 as usize))
            {
                return Err(Failure::usage(format!("grading file {path} must hold {} matrices of shape {} x {}", spec.n, spec.r2, spec.r1)));
            }
            for (i, mat) in m.iter().enumerate() {
                for (j, row) in mat.iter().enumerate() {
                    for (k, &x) in row.iter().enumerate() {
                        c[spec.index(i as u32 + 1, j as u32 + 1, k as u32 + 1)] = x;
                    }
                }
            }
            Ok(Grading::new(*spec, c)?)
        }
    }
}

struct Ctx {
    job: Job,
    spec: QuiverSpec,
    grading: Grading,
    cache: Option<Cache>,
    config: serde_json::Value,
}

impl Ctx {
    fn new(job: &Job, io: &Io) -> Res<Self> {
        let spec = QuiverSpec::new(job.n, job.r1, job.r2)?;
        if job.lattice_cap == 0 || job.orbit_cap == 0 || job.term_cap == 0 {
            return Err(Failure::usage("caps must be positive"));
        }
        let grading = load_grading(job, &spec)?;
        let mut config = serde_json::to_value(job)?;
        config["grading"] = serde_json::to_value(&grading.c)?;
        let cache = if io.no_cache { None } else { Some(Cache::from_env()?) };
        Ok(Ctx {
            job: job.clone(),
            spec,
            grading,
            cache,
            config,
        })
    }

    fn cached<T: Serialize + DeserializeOwned>(&self, kind: &str, f: impl FnOnce() -> Res<T>) -> Res<Artifact<T>> {
        let key = cache::key(kind, &self.config, CODE_VERSION);
        if let Some(c) = &self.cache {
            if let Some(a) = c.get::<Artifact<T>>(kind, &key) {
                if a.schema == SCHEMA && a.code_version == CODE_VERSION && a.kind == kind {
                    return Ok(a);
                }
            }
        }
        let a = Artifact {
            schema: SCHEMA.into(),
            kind: kind.into(),
            code_version: CODE_VERSION.into(),
            config: self.config.clone(),
            data: f()?,
        };
        if let Some(c) = &self.cache {
            c.put(kind, &key, &a)?;
        }
        Ok(a)
    }

    fn is_c0(&self) -> bool {
        self.grading == grading_c0(&self.spec)
    }

    fn cone(&self) -> Res<Artifact<ConeData>> {
        self.cached("cone", || {
            let cone = if self.is_c0() {
                kronecker_halfspaces(&self.spec).double_description()?
            } else {
                let [(_, _, a), (_, _, b)] = mf_cones(&self.grading)?;
                intersect(&a, &b)?
            };
            Ok(ConeData {
                dimension: cone.dimension(),
                pointed: cone.is_pointed(),
                certified: cone.certify()?,
                cone,
            })
        })
    }

    fn generators(&self) -> Res<Artifact<HilbertBasis>> {
        let cone = self.cone()?.data.cone;
        self.cached("generators", || {
            Ok(hilbert_basis(
                &cone,
                &self.spec.height(),
                self.job.max_degree,
                self.job.certify_window,
                self.job.lattice_cap,
            )?)
        })
    }

    fn polytope(&self) -> Res<Artifact<PolytopeData>> {
        let cone = self.cone()?.data.cone;
        self.cached("polytope", || {
            let height = self.spec.height();
            let p = cone.slice(1, &height)?;
            let lattice_points = LatticeEnumerator::new(&cone, 1, &height)?.count(self.job.lattice_cap)?;
            Ok(PolytopeData {
                dim: p.dim(),
                vertices: p.vertices.len(),
                is_lattice: p.is_lattice(),
                lattice_points,
                polytope: p,
            })
        })
    }

    fn fan(&self, input: Option<&Path>) -> Res<Artifact<FanRays>> {
        if let Some(path) = input {
            let p: Artifact<PolytopeData> = read_artifact(path, "polytope")?;
            return self.derived("fan", p.config, || Ok(normal_fan_rays(&p.data.polytope)?));
        }
        let p = self.polytope()?.data.polytope;
        self.cached("fan", || Ok(normal_fan_rays(&p)?))
    }

    fn mirror(&self, input: Option<&Path>) -> Res<Artifact<MirrorData>> {
        let build = |f: &FanRays| -> Res<MirrorData> {
            let polynomial = laurent_from_rays(f)?;
            Ok(MirrorData {
                text: polynomial.to_string(),
                newton: newton_invariants(&polynomial)?,
                polynomial,
            })
        };
        if let Some(path) = input {
            let f: Artifact<FanRays> = read_artifact(path, "fan")?;
            return self.derived("mirror", f.config, || build(&f.data));
        }
        let f = self.fan(None)?.data;
        self.cached("mirror", || build(&f))
    }

    /// An artifact computed from a user-supplied upstream file; not cached.
    fn derived<T>(&self, kind: &str, config: serde_json::Value, f: impl FnOnce() -> Res<T>) -> Res<Artifact<T>> {
        Ok(Artifact {
            schema: SCHEMA.into(),
            kind: kind.into(),
            code_version: CODE_VERSION.into(),
            config,
            data: f()?,
        })
    }
}

fn read_artifact<T: DeserializeOwned>(path: &Path, kind: &str) -> Res<Artifact<T>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("missing upstream artifact {}: {e}", path.display())))?;
    let head: Artifact<serde_json::Value> = serde_json::from_str(&text)?;
    if head.schema != SCHEMA {
        return Err(Failure::usage(format!("{} has schema {}, expected {SCHEMA}", path.display(), head.schema)));
    }
    if head.kind != kind {
        return Err(Failure::usage(format!("{} is a {} artifact, expected {kind}", path.display(), head.kind)));
    }
    Ok(serde_json::from_str(&text)?)
}

fn write_artifact<T: Serialize>(io: &Io, a: &Artifact<T>) -> Res<PathBuf> {
    fs::create_dir_all(&io.out)?;
    let path = io.out.join(format!("{}.json", a.kind));
    let mut text = serde_json::to_string_pretty(a)?;
    text.push('\n');
    fs::write(&path, text)?;
    Ok(path)
}

fn run(cmd: Cmd) -> Res<()> {
    match cmd {
        Cmd::Cone { job, io } => {
            let a = Ctx::new(&job, &io)?.cone()?;
            let d = &a.data;
            println!(
                "cone in dimension {}: {} rays, dimension {}, pointed {}, certified {}",
                d.cone.ambient_dim,
                d.cone.rays()?.len(),
                d.dimension,
                d.pointed,
                d.certified
            );
            done(&io, &a)
        }
        Cmd::Generators { job, io } => {
            let a = Ctx::new(&job, &io)?.generators()?;
            let h = &a.data;
            let split: Vec<String> = h.count_by_height().iter().map(|(d, c)| format!("{c} at height {d}")).collect();
            println!("{} generators ({}), certified up to height {}", h.generators.len(), split.join(", "), h.certified_up_to);
            if !h.window_clean {
                println!("warning: a generator appeared above the requested maximal degree");
            }
            done(&io, &a)
        }
        Cmd::Polytope { job, io } => {
            let a = Ctx::new(&job, &io)?.polytope()?;
            let d = &a.data;
            println!("polytope of dimension {}: {} vertices, {} lattice points", d.dim, d.vertices, d.lattice_points);
            done(&io, &a)
        }
        Cmd::Fan { job, io } => {
            let a = Ctx::new(&job, &io)?.fan(io.input.as_deref())?;
            println!("fan in dimension {}: {} rays, {} maximal cones", a.data.dim(), a.data.rays.len(), a.data.maximal_cones.len());
            done(&io, &a)
        }
        Cmd::Classify { job, io } => {
            let ctx = Ctx::new(&job, &io)?;
            let fan = ctx.fan(io.input.as_deref())?;
            let report: ToricReport = classify_toric(&fan.data)?;
            let a = ctx.derived("classify", fan.config, || Ok(report))?;
            let r = &a.data;
            let show = |b: Option<bool>| b.map_or("-".to_string(), |x| x.to_string());
            println!(
                "complete {}, fano {}, gorenstein {}, terminal {}, fano index {}",
                r.complete,
                show(r.fano),
                show(r.gorenstein),
                show(r.terminal),
                r.fano_index.as_ref().map_or("-".into(), |x| x.to_string())
            );
            done(&io, &a)
        }
        Cmd::Mirror { job, io } => {
            let a = Ctx::new(&job, &io)?.mirror(io.input.as_deref())?;
            let d = &a.data;
            println!("{} terms in {} variables", d.polynomial.terms.len(), d.polynomial.dim);
            println!("{}", d.text);
            done(&io, &a)
        }
        Cmd::Period { terms, polynomial, job, io } => {
            let ctx = Ctx::new(&job, &io)?;
            let (f, config) = match (&polynomial, &io.input) {
                (Some(s), _) => (s.parse::<LaurentPolynomial>()?, serde_json::json!({ "polynomial": s })),
                (None, Some(path)) => {
                    let m: Artifact<MirrorData> = read_artifact(path, "mirror")?;
                    (m.data.polynomial, m.config)
                }
                (None, None) => {
                    let m = ctx.mirror(None)?;
                    (m.data.polynomial, m.config)
                }
            };
            let mut config = config;
            config["terms"] = terms.into();
            let a = ctx.derived("period", config, || Ok(classical_period(&f, terms + 1, job.term_cap)?))?;
            let p: &PeriodSequence = &a.data;
            let shown: Vec<String> = p.coefficients.iter().map(|c| c.to_string()).collect();
            println!("({})", shown.join(", "));
            done(&io, &a)
        }
        Cmd::VerifySagbi { job, io } => {
            let ctx = Ctx::new(&job, &io)?;
            let cfg = PipelineConfig {
                max_degree: job.max_degree,
                certify_window: job.certify_window,
                lattice_cap: job.lattice_cap,
                orbit_cap: job.orbit_cap,
                ..PipelineConfig::default()
            };
            let a = ctx.cached("verify-sagbi", || Ok(sagbi_pipeline(&ctx.grading, &cfg)?))?;
            let r: &PipelineReport = &a.data;
            let ok = r.generators.iter().filter(|g| g.lm_verified).count();
            println!(
                "{} generators, {} with the expected leading monomial, {} via row rearrangement",
                r.generators.len(),
                ok,
                r.fallback_needed
            );
            println!(
                "polytope: {} vertices, {} lattice points; fan: {} rays",
                r.polytope.vertices,
                r.polytope.lattice_points,
                r.fan.rays.len()
            );
            for s in &r.assumptions {
                println!("assumed: {s}");
            }
            done(&io, &a)?;
            if !r.all_verified {
                return Err(Failure::mismatch("some generators failed the leading-monomial check"));
            }
            Ok(())
        }
        Cmd::Reproduce { example, slow, io } => {
            let ex: Example = example.parse().map_err(|e: Error| Failure::usage(e.to_string()))?;
            let cache = if io.no_cache { None } else { Some(Cache::from_env()?) };
            let config = serde_json::json!({ "example": ex.to_string(), "slow": slow });
            let key = cache::key("reproduce", &config, CODE_VERSION);
            let hit = cache
                .as_ref()
                .and_then(|c| c.get::<Artifact<ReproReport>>("reproduce", &key))
                .filter(|a| a.schema == SCHEMA && a.code_version == CODE_VERSION);
            let a = match hit {
                Some(a) => a,
                None => {
                    let opts = ReproOptions {
                        slow,
                        ..ReproOptions::default()
                    };
                    let a = Artifact {
                        schema: SCHEMA.into(),
                        kind: "reproduce".into(),
                        code_version: CODE_VERSION.into(),
                        config,
                        data: reproduce(ex, &opts)?,
                    };
                    if let Some(c) = &cache {
                        c.put("reproduce", &key, &a)?;
                    }
                    a
                }
            };
            let r = &a.data;
            for m in &r.metrics {
                let mark = if m.matches { "ok  " } else { "FAIL" };
                println!("{mark} {}: expected {}, computed {}", m.name, m.expected, m.computed);
            }
            println!("{}: {}", r.example, if r.pass { "pass" } else { "fail" });
            done(&io, &a)?;
            if !r.pass {
                return Err(Failure::mismatch(format!("{} does not match the expected values", r.example)));
            }
            Ok(())
        }
    }
}

fn done<T: Serialize>(io: &Io, a: &Artifact<T>) -> Res<()> {
    let path = write_artifact(io, a)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            report(&Failure::usage(e.to_string()));
            return ExitCode::from(4);
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            report(&f);
            ExitCode::from(f.code)
        }
    }
}

fn report(f: &Failure) {
    let v = serde_json::json!({ "error": f.kind, "message": f.message, "exit_code": f.code });
    eprintln!("{v}");
}
