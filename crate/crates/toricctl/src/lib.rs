//! The `toricctl` front end: argument parsing, command dispatch and the
//! JSON envelope every command prints.

pub mod io;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use toric_core::complex::{complex_power, primitive_collections, underlying_complex, Face, SimplicialComplex};
use toric_core::error::{Error, Result};
use toric_core::fan::{DegreeVector, Fan};
use toric_core::gauss::GaussRat;
use toric_core::oracle::{self, BandConfig, SuiteSummary, VandermondeConfig};
use toric_core::stability;
use toric_core::system::{evaluate_jet, evaluate_jet_exact, is_member, stabilize, PolySystem};

use crate::io::{complex_to_value, fan_hash, fan_to_value, load_complex_source, load_fan, load_system, system_to_value, ComplexSource};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_SEED: u64 = 20_240_601;

pub mod exit {
    pub const OK: i32 = 0;
    pub const ORACLE_FAILURE: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const INVALID_FAN: i32 = 3;
    pub const SHAPE: i32 = 4;
    pub const CAP: i32 = 5;
}

#[derive(Debug, Parser)]
#[command(name = "toricctl", version, about = "Toric fans, Stanley-Reisner complexes and bounded-multiplicity polynomial systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fan validation, predicates and power fans.
    #[command(subcommand)]
    Fan(FanCmd),
    /// Simplicial complexes of fans.
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// Polynomial systems.
    #[command(subcommand)]
    Poly(PolyCmd),
    /// Seeded certification suites.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Stability dimensions and the E1 vanishing table.
    #[command(subcommand)]
    Stability(StabilityCmd),
}

#[derive(Debug, Subcommand)]
pub enum FanCmd {
    /// Validate and report every predicate of a fan.
    Analyze {
        /// Fan JSON file, or a builtin: cp(m), hirzebruch(k), affine(m).
        fan: String,
        /// Coordinate bound for the degree-vector search (default 10 r).
        #[arg(long)]
        bound: Option<u64>,
        /// Degree vector for a stability report, e.g. 5,7,5,12.
        #[arg(long, requires = "n")]
        degrees: Option<DegreeVector>,
        #[arg(long)]
        n: Option<u64>,
        /// Include the E1 table (needs --degrees and --n >= 2).
        #[arg(long)]
        e1: bool,
    },
    /// Check the fan axioms.
    Validate { fan: String },
    /// The power fan F(Σ, n).
    Power {
        fan: String,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum ComplexCmd {
    /// The power complex K(n) of a complex or of a fan's complex.
    Power {
        source: String,
        #[arg(long)]
        n: usize,
    },
    /// Minimal non-faces (primitive collections for a fan).
    Primitives { source: String },
}

#[derive(Debug, Subcommand)]
pub enum PolyCmd {
    /// Test the bounded-multiplicity condition.
    Check {
        #[arg(long)]
        fan: String,
        #[arg(long)]
        system: String,
        #[arg(long)]
        n: usize,
    },
    /// Apply the stabilization map (root form only).
    Stabilize {
        #[arg(long)]
        system: String,
        /// Degree shift a, e.g. 1,0,2.
        #[arg(long, value_delimiter = ',')]
        shift: Vec<u64>,
    },
    /// Evaluate the n-jet map at a point.
    Jet {
        #[arg(long)]
        system: String,
        #[arg(long)]
        n: usize,
        /// Point as "re,im" with rational parts, e.g. 1/2,0.
        #[arg(long, default_value = "0,0")]
        at: String,
    },
}

#[derive(Debug, Args)]
pub struct SeedArgs {
    #[arg(long, env = "TORICCTL_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum OracleCmd {
    /// Confluent Vandermonde rank and Hermite codimension.
    Vandermonde {
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 50)]
        height: i64,
        #[command(flatten)]
        seed: SeedArgs,
    },
    /// Brute-force band enumeration against its closed form.
    Band {
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 8)]
        d_prime_max: u64,
        #[arg(long, default_value_t = 4)]
        n_max: u64,
        #[command(flatten)]
        seed: SeedArgs,
    },
    /// Polyhedral product versus arrangement complement.
    Complement {
        /// Fans to test (files or builtins); defaults to the fixture set.
        #[arg(long = "fan")]
        fans: Vec<String>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[command(flatten)]
        seed: SeedArgs,
    },
    /// Jet of the jet section at zero.
    Jetsection {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long, default_value_t = 50)]
        height: i64,
        #[command(flatten)]
        seed: SeedArgs,
    },
    /// Exact gcd test versus root multisets on planted and generic systems.
    Membership {
        #[arg(long, default_value_t = 400)]
        trials: usize,
        #[command(flatten)]
        seed: SeedArgs,
    },
    /// Stabilization degree law and verdict preservation.
    Stabilization {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        seed: SeedArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum StabilityCmd {
    /// Stability dimension, connectivity and related quantities.
    Report {
        #[arg(long)]
        fan: String,
        #[arg(long)]
        degrees: DegreeVector,
        #[arg(long)]
        n: u64,
    },
    /// The E1 vanishing table.
    E1 {
        #[arg(long)]
        fan: String,
        #[arg(long)]
        degrees: DegreeVector,
        #[arg(long)]
        n: u64,
        /// Top of the s window.
        #[arg(long)]
        s_max: Option<i64>,
        /// Print the aligned text table instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Stability dimension for maps into projective space.
    Projective {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
    },
}

/// What a command printed and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::LengthMismatch { .. } => exit::SHAPE,
        Error::CapExceeded(_) => exit::CAP,
        Error::UnsupportedFan(_) => exit::INVALID_FAN,
        Error::Internal(_) => exit::ORACLE_FAILURE,
        Error::InvalidInput(_) | Error::Structure { .. } | Error::Undefined(_) => exit::PARSE,
    }
}

fn error_outcome(e: &Error) -> Outcome {
    let mut body = json!({ "error": e.to_string() });
    if let Error::Structure { pointer, message } = e {
        body["pointer"] = json!(pointer);
        body["message"] = json!(message);
    }
    Outcome { code: exit_code(e), stdout: String::new(), stderr: body.to_string() + "\n" }
}

struct Report {
    command: &'static str,
    provenance: &'static str,
    input_hash: Option<String>,
    seed: Option<u64>,
    result: Value,
    code: i32,
}

impl Report {
    fn new(command: &'static str, provenance: &'static str, result: Value) -> Self {
        Report { command, provenance, input_hash: None, seed: None, result, code: exit::OK }
    }

    fn hash(mut self, fan: &Fan) -> Self {
        self.input_hash = Some(fan_hash(fan));
        self
    }

    fn code(mut self, code: i32) -> Self {
        self.code = code;
        self
    }

    fn render(self) -> Outcome {
        let mut env = json!({
            "tool": "toricctl",
            "version": VERSION,
            "command": self.command,
            "provenance": self.provenance,
        });
        if let Some(h) = self.input_hash {
            env["input_hash"] = json!(h);
        }
        if let Some(s) = self.seed {
            env["seed"] = json!(s);
        }
        env["result"] = self.result;
        let stdout = serde_json::to_string_pretty(&env).expect("JSON values always serialize") + "\n";
        Outcome { code: self.code, stdout, stderr: String::new() }
    }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report types serialize")
}

fn faces_json(faces: &[Face]) -> Value {
    json!(faces.iter().map(|f| f.vertices().to_vec()).collect::<Vec<_>>())
}

fn faces_one_based(faces: &[Face]) -> Value {
    json!(faces.iter().map(Face::one_based).collect::<Vec<_>>())
}

fn validation_json(fan: &Fan) -> (bool, Value) {
    let report = fan.validate();
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            let mut j = to_value(v);
            j["message"] = json!(v.to_string());
            j
        })
        .collect();
    (report.is_valid(), json!({ "valid": report.is_valid(), "violations": violations }))
}

/// Loads a fan and rejects it with exit code 3 if it breaks an axiom.
fn valid_fan(source: &str) -> std::result::Result<Fan, Outcome> {
    let fan = load_fan(source).map_err(|e| error_outcome(&e))?;
    let (ok, validation) = validation_json(&fan);
    if ok {
        Ok(fan)
    } else {
        let body = json!({ "error": "invalid fan", "validation": validation });
        Err(Outcome { code: exit::INVALID_FAN, stdout: String::new(), stderr: body.to_string() + "\n" })
    }
}

pub fn run(cli: Cli) -> Outcome {
    let result = match cli.command {
        Command::Fan(c) => run_fan(c),
        Command::Complex(c) => run_complex(c),
        Command::Poly(c) => run_poly(c),
        Command::Oracle(c) => run_oracle(c),
        Command::Stability(c) => run_stability(c),
    };
    match result {
        Ok(Ok(report)) => report.render(),
        Ok(Err(outcome)) => outcome,
        Err(e) => error_outcome(&e),
    }
}

/// Runs with the given argument vector (program name first).
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { exit::PARSE } else { exit::OK };
            let text = e.render().to_string();
            if code == exit::OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            }
        }
    }
}

type CmdResult = Result<std::result::Result<Report, Outcome>>;

fn run_fan(cmd: FanCmd) -> CmdResult {
    match cmd {
        FanCmd::Analyze { fan: source, bound, degrees, n, e1 } => {
            let fan = load_fan(&source)?;
            let (ok, validation) = validation_json(&fan);
            let mut result = json!({
                "source": source,
                "dim": fan.dim(),
                "ray_count": fan.ray_count(),
                "cone_count": fan.cones().len(),
                "validation": validation,
            });
            if !ok {
                return Ok(Ok(Report::new("fan analyze", PROV_FAN, result).hash(&fan).code(exit::INVALID_FAN)));
            }
            let pcs = primitive_collections(&fan)?;
            let complex = underlying_complex(&fan)?;
            result["smooth"] = json!(fan.is_smooth());
            result["completeness"] = to_value(&fan.completeness());
            result["complete"] = json!(fan.is_complete());
            result["spans_lattice"] = json!(fan.spans_lattice());
            result["primitive_collections"] = faces_json(&pcs);
            result["primitive_collections_one_based"] = faces_one_based(&pcs);
            result["r_min"] = json!(pcs.iter().map(Face::len).min());
            result["degree_search"] = to_value(&fan.find_degree_vector(bound));
            result["cox_group_rank"] = json!(fan.cox_group_rank()?);
            result["complex"] = json!({
                "vertices": complex.vertex_count(),
                "face_count": complex.faces().len(),
                "max_faces": complex_to_value(&complex)["max_faces"],
            });
            if let (Some(d), Some(n)) = (degrees, n) {
                result["stability"] = stability_json(&d, &fan, n)?;
                if e1 {
                    if n < 2 {
                        return Err(Error::InvalidInput("--e1 needs n >= 2".into()));
                    }
                    let table = stability::e1_support(&d, &fan, n, None)?;
                    result["e1"] = to_value(&table);
                    result["e1_table"] = json!(table.render_table());
                }
            }
            Ok(Ok(Report::new("fan analyze", PROV_FAN, result).hash(&fan)))
        }
        FanCmd::Validate { fan: source } => {
            let fan = load_fan(&source)?;
            let (ok, validation) = validation_json(&fan);
            let report = Report::new("fan validate", PROV_FAN, validation).hash(&fan);
            Ok(Ok(if ok { report } else { report.code(exit::INVALID_FAN) }))
        }
        FanCmd::Power { fan: source, n } => {
            let fan = match valid_fan(&source) {
                Ok(f) => f,
                Err(o) => return Ok(Err(o)),
            };
            let power = fan.power(n)?;
            let (_, validation) = validation_json(&power);
            let via_fan = underlying_complex(&power)?;
            let via_complex = complex_power(&underlying_complex(&fan)?, n)?;
            let result = json!({
                "n": n,
                "fan": fan_to_value(&power),
                "cone_count": power.cones().len(),
                "validation": validation,
                "complex_matches_power_complex": via_fan == via_complex,
            });
            Ok(Ok(Report::new("fan power", PROV_POWER, result).hash(&fan)))
        }
    }
}

fn stability_json(d: &DegreeVector, fan: &Fan, n: u64) -> Result<Value> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    if n == 1 {
        let (dim, kind) = stability::stability_dim_n1(d, fan)?;
        return Ok(json!({
            "n": 1,
            "stability_dim": dim,
            "equivalence": kind,
            "degree_null": fan.degree_is_null(d)?,
        }));
    }
    let mut v = to_value(&stability::report(d, fan, n)?);
    v["band"] = to_value(&stability::min_unknown_band(d, fan, n)?);
    if d.min() >= n {
        v["truncation"] = to_value(&stability::truncation_dim(d, fan, n)?);
    }
    Ok(v)
}

fn complex_of(source: &str) -> Result<(SimplicialComplex, Option<Fan>)> {
    Ok(match load_complex_source(source)? {
        ComplexSource::Fan(f) => (underlying_complex(&f)?, Some(f)),
        ComplexSource::Complex(k) => (k, None),
    })
}

fn run_complex(cmd: ComplexCmd) -> CmdResult {
    match cmd {
        ComplexCmd::Power { source, n } => {
            let (k, fan) = complex_of(&source)?;
            let p = complex_power(&k, n)?;
            let mut result = complex_to_value(&p);
            result["face_count"] = json!(p.faces().len());
            result["minimal_non_faces"] = faces_json(&p.minimal_non_faces());
            let mut report = Report::new("complex power", PROV_POWER, result);
            if let Some(f) = fan {
                report = report.hash(&f);
            }
            Ok(Ok(report))
        }
        ComplexCmd::Primitives { source } => {
            let (k, fan) = complex_of(&source)?;
            let mnf = k.minimal_non_faces();
            let result = json!({
                "minimal_non_faces": faces_json(&mnf),
                "one_based": faces_one_based(&mnf),
                "r_min": mnf.iter().map(Face::len).min(),
            });
            let mut report = Report::new("complex primitives", PROV_PRIMITIVE, result);
            if let Some(f) = fan {
                report = report.hash(&f);
            }
            Ok(Ok(report))
        }
    }
}

fn parse_point(s: &str) -> Result<GaussRat> {
    let (re, im) = s.split_once(',').ok_or_else(|| Error::InvalidInput(format!("point {s:?} must be \"re,im\"")))?;
    Ok(GaussRat::new(GaussRat::parse_component(re)?, GaussRat::parse_component(im)?))
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn run_poly(cmd: PolyCmd) -> CmdResult {
    match cmd {
        PolyCmd::Check { fan, system, n } => {
            let fan = match valid_fan(&fan) {
                Ok(f) => f,
                Err(o) => return Ok(Err(o)),
            };
            let sys = load_system(&system)?;
            let m = is_member(&sys, &fan, n)?;
            let mut result = json!({
                "member": m.member,
                "n": n,
                "representation": m.representation,
                "degrees": sys.degrees().entries(),
            });
            if let Some(w) = &m.witness {
                let mut wj = json!({
                    "collection": w.collection.vertices(),
                    "collection_one_based": w.collection.one_based(),
                });
                if let Some(f) = &w.factor {
                    wj["common_factor"] = json!(f.to_string());
                }
                if let Some(z) = w.root {
                    wj["common_root"] = complex_json(z);
                }
                result["witness"] = wj;
            }
            if sys.degrees().entries().iter().all(|&d| (n as u64) > d) {
                result["note"] = json!("contractible regime: n exceeds every degree");
            }
            Ok(Ok(Report::new("poly check", PROV_MEMBER, result).hash(&fan)))
        }
        PolyCmd::Stabilize { system, shift } => {
            let sys = load_system(&system)?;
            let out = stabilize(&sys, &shift)?;
            let result = json!({
                "degrees_before": sys.degrees().entries(),
                "degrees_after": out.degrees().entries(),
                "system": system_to_value(&out),
            });
            Ok(Ok(Report::new("poly stabilize", PROV_STAB, result)))
        }
        PolyCmd::Jet { system, n, at } => {
            let sys = load_system(&system)?;
            let alpha = parse_point(&at)?;
            let result = match &sys {
                PolySystem::Coefficients(polys) => {
                    let blocks: Vec<Vec<[String; 2]>> = polys
                        .iter()
                        .map(|f| {
                            Ok(toric_core::poly::jet(f, n)?
                                .eval(&alpha)
                                .iter()
                                .map(|z| [GaussRat::component_string(&z.re), GaussRat::component_string(&z.im)])
                                .collect())
                        })
                        .collect::<Result<_>>()?;
                    let point = evaluate_jet_exact(polys, n, &alpha)?;
                    json!({ "exact": true, "blocks": blocks, "zero_blocks": point.zero_support(0.0).vertices() })
                }
                PolySystem::Roots(_) => {
                    let point = evaluate_jet(&sys, n, alpha.to_complex())?;
                    let blocks: Vec<Vec<Value>> = point.blocks().iter().map(|b| b.iter().map(|&z| complex_json(z)).collect()).collect();
                    json!({ "exact": false, "blocks": blocks, "zero_blocks": point.zero_support(toric_core::system::ROOT_TOLERANCE).vertices() })
                }
            };
            Ok(Ok(Report::new("poly jet", PROV_JET, result)))
        }
    }
}

fn suite_report(command: &'static str, provenance: &'static str, s: SuiteSummary) -> Report {
    let code = if s.all_passed { exit::OK } else { exit::ORACLE_FAILURE };
    let seed = s.seed;
    let mut r = Report::new(command, provenance, to_value(&s)).code(code);
    r.seed = Some(seed);
    r
}

fn run_oracle(cmd: OracleCmd) -> CmdResult {
    Ok(Ok(match cmd {
        OracleCmd::Vandermonde { k, n, d, trials, height, seed } => {
            let cfg = VandermondeConfig { k, n, d, height, ..VandermondeConfig::default() };
            suite_report("oracle vandermonde", PROV_VANDERMONDE, oracle::vandermonde_suite(&cfg, seed.seed, trials)?)
        }
        OracleCmd::Band { trials, d_prime_max, n_max, seed } => {
            let cfg = BandConfig { d_prime_max, n_max };
            suite_report("oracle band", PROV_BAND, oracle::band_suite(&cfg, seed.seed, trials)?)
        }
        OracleCmd::Complement { fans, samples, seed } => {
            let fans = if fans.is_empty() {
                oracle::fixture_fans()
            } else {
                let mut out = Vec::new();
                for f in fans {
                    match valid_fan(&f) {
                        Ok(fan) => out.push((f, fan)),
                        Err(o) => return Ok(Err(o)),
                    }
                }
                out
            };
            suite_report("oracle complement", PROV_COMPLEMENT, oracle::complement_suite_on(&fans, samples, seed.seed)?)
        }
        OracleCmd::Jetsection { trials, n_max, height, seed } => {
            suite_report("oracle jetsection", PROV_JET, oracle::jetsection_suite(n_max, height, seed.seed, trials)?)
        }
        OracleCmd::Membership { trials, seed } => {
            suite_report("oracle membership", PROV_MEMBER, oracle::membership_suite(seed.seed, trials)?)
        }
        OracleCmd::Stabilization { trials, seed } => {
            suite_report("oracle stabilization", PROV_STAB, oracle::stabilization_suite(seed.seed, trials)?)
        }
    }))
}

fn run_stability(cmd: StabilityCmd) -> CmdResult {
    match cmd {
        StabilityCmd::Report { fan, degrees, n } => {
            let fan = match valid_fan(&fan) {
                Ok(f) => f,
                Err(o) => return Ok(Err(o)),
            };
            if degrees.len() != fan.ray_count() {
                return Err(Error::LengthMismatch { expected: fan.ray_count(), got: degrees.len() });
            }
            let mut result = stability_json(&degrees, &fan, n)?;
            if n >= 2 {
                result["connectivity"] = json!(stability::connectivity_bound(&fan, n)?);
            }
            Ok(Ok(Report::new("stability report", PROV_STABILITY, result).hash(&fan)))
        }
        StabilityCmd::E1 { fan, degrees, n, s_max, text } => {
            let fan = match valid_fan(&fan) {
                Ok(f) => f,
                Err(o) => return Ok(Err(o)),
            };
            let table = stability::e1_support(&degrees, &fan, n, s_max)?;
            if text {
                return Ok(Err(Outcome { code: exit::OK, stdout: table.render_table(), stderr: String::new() }));
            }
            let mut result = to_value(&table);
            result["table"] = json!(table.render_table());
            Ok(Ok(Report::new("stability e1", PROV_E1, result).hash(&fan)))
        }
        StabilityCmd::Projective { d, m, n } => {
            let result = json!({ "d": d, "m": m, "n": n, "stability_dim": stability::stability_dim_projective(d, m, n)? });
            Ok(Ok(Report::new("stability projective", PROV_STABILITY, result)))
        }
    }
}

const PROV_FAN: &str = "fan axioms; Stanley-Reisner complex and primitive collections; degree-null linear system";
const PROV_POWER: &str = "power fan F(Σ,n) and the power complex K_Σ(n) on [r]×[n]";
const PROV_PRIMITIVE: &str = "minimal non-faces of a simplicial complex";
const PROV_MEMBER: &str = "no primitive collection shares a root of multiplicity ≥ n";
const PROV_STAB: &str = "stabilization f ↦ (φ_D(f_i)(z − x_i)^{a_i}) with degree law D ↦ D + a";
const PROV_JET: &str = "jet map f ↦ (f, f + f', …, f + f^(n−1)) and its section at 0";
const PROV_VANDERMONDE: &str = "stacked confluent Vandermonde matrix has rank nk for distinct points, d ≥ nk";
const PROV_BAND: &str = "min over t of a(t) = (2n·r_min − 3)d′ + t − 1 equals d(D;Σ,n) + 2";
const PROV_COMPLEMENT: &str = "polyhedral product of (C^n, C^n∖0) is the complement of the coordinate arrangement";
const PROV_STABILITY: &str = "d(D;Σ,n) = (2n·r_min − 3)⌊d_min/n⌋ − 2; connectivity 2n·r_min − 5";
const PROV_E1: &str = "vanishing of E¹_{k,s} below (2n·r_min − 2)k and outside the compact-support degree range";
