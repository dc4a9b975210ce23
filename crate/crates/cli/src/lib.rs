//! Command-line front end for the lemnatomic toolkit.
//!
//! [`run`] parses an argument vector, executes one command and returns the
//! exit code with the text to print, so the binary is a thin shell around it
//! and tests can drive commands in-process.
//!
//! Exit codes: 0 success, 1 bad input or usage, 2 a verification sweep found
//! a violation, 3 numeric precision ran out.

pub mod cache;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lemnatomic::classfield::{
    density_report, frobenius_orbit_check, orbit_law_scan, prop2_evidence, semisplit_primes, splitting_law_scan,
    splitting_primes, theorem_search, verify_prop1, DiscriminantPolicy, TheoremSearch,
};
use lemnatomic::gaussint::{factor, primes_up_to_norm, GaussPrime};
use lemnatomic::gfq::{Fe, ResidueField};
use lemnatomic::lemnatomic::{compute_lemnatomic, normalize_modulus, LemnatomicRecord, Method};
use lemnatomic::residue::{Normalization, ResidueRing, UnitGroup};
use lemnatomic::zipoly::PolyZi;
use lemnatomic::{Error, Exec, GaussInt};

use cache::Cache;

/// Version tag attached to every JSON report.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "lemnatomic", version, about = "Lemnatomic polynomials and splitting-prime experiments over Z[i]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Norm bound for prime scans.
    #[arg(long, global = true, value_name = "N", default_value_t = 1000)]
    max_norm: u64,
    /// Modulus β, for commands that take one.
    #[arg(long, global = true, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Starting precision of the numeric pipeline.
    #[arg(long, global = true, default_value_t = lemnatomic::lemniscate::DEFAULT_PRECISION)]
    precision_bits: u32,
    #[arg(long, global = true, value_enum, default_value_t = MethodArg::Exact)]
    method: MethodArg,
    /// How a prime's residue class is chosen among its associates.
    #[arg(long, global = true, value_enum, default_value_t = NormArg::Primary)]
    normalization: NormArg,
    /// Directory for cached lemnatomic polynomials.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Let the witness search run on an even discriminant using its odd primes.
    #[arg(long, global = true)]
    allow_even_disc: bool,
    /// Run scans on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Exact,
    Numeric,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NormArg {
    Primary,
    Raw,
}

/// Polynomial arguments are a JSON file, inline JSON, or `lemnatomic:<beta>`.
#[derive(Debug, Subcommand)]
enum Command {
    /// List the Gaussian primes of norm at most --max-norm.
    Primes {
        #[arg(long)]
        odd_only: bool,
    },
    /// Factor a Gaussian integer into a unit and normalized primes.
    Factor {
        #[arg(allow_hyphen_values = true)]
        z: String,
    },
    /// The primary associate of an odd Gaussian integer.
    Primary {
        #[arg(allow_hyphen_values = true)]
        z: String,
    },
    /// Structure of the unit group (R/βR)*.
    Unitgroup {
        #[arg(allow_hyphen_values = true, value_name = "BETA")]
        modulus: Option<String>,
    },
    /// Compute the lemnatomic polynomial Λ_β.
    Lemnatomic {
        #[arg(allow_hyphen_values = true, value_name = "BETA")]
        modulus: Option<String>,
    },
    /// Reduce a polynomial modulo an odd prime and factor it.
    Reduce {
        poly: String,
        #[arg(allow_hyphen_values = true)]
        pi: String,
    },
    /// Test whether a polynomial splits completely modulo an odd prime.
    SplitTest {
        poly: String,
        #[arg(allow_hyphen_values = true)]
        pi: String,
    },
    /// The odd primes modulo which a polynomial splits completely.
    ScanSplitting { poly: String },
    /// The odd primes with a degree-one prime above them in K.
    Semisplit { poly: String },
    /// Check that Λ_β stays separable modulo every odd prime not dividing β.
    VerifyProp1 {
        #[arg(allow_hyphen_values = true, value_name = "BETA")]
        modulus: Option<String>,
    },
    /// Whether semi-split primes of K generate (R/βR)*.
    Prop2Evidence { poly: String },
    /// Search for a witness modulus among divisors built from disc(h).
    VerifyTheorem {
        poly: String,
        #[arg(long, default_value_t = 2)]
        exponent_bound: u32,
        #[arg(long, default_value_t = 10_000)]
        norm_cap: u64,
    },
    /// Share of odd primes modulo which a polynomial splits completely.
    Density { poly: String },
    /// Check factor degrees of Λ_β mod π against the order of π's class.
    OrbitCheck {
        #[arg(allow_hyphen_values = true, value_name = "BETA")]
        modulus: Option<String>,
        /// A single prime; without it every prime up to --max-norm is checked.
        #[arg(long, allow_hyphen_values = true)]
        pi: Option<String>,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

type CmdResult = std::result::Result<Emitted, Error>;

/// Output of a command; `violation` turns a finished run into exit code 2.
struct Emitted {
    stdout: String,
    violation: Option<String>,
}

struct Ctx {
    json: bool,
    max_norm: u64,
    beta: Option<String>,
    precision_bits: u32,
    method: Method,
    normalization: Normalization,
    cache: Option<Cache>,
    allow_even_disc: bool,
    exec: Exec,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct Versioned<'a, T> {
    schema_version: u32,
    #[serde(flatten)]
    body: &'a T,
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports always serialize") + "\n"
}

fn versioned<T: Serialize>(v: &T) -> String {
    to_json(&Versioned { schema_version: REPORT_SCHEMA_VERSION, body: v })
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

fn parse_gauss(s: &str) -> Result<GaussInt, Error> {
    s.trim().parse()
}

fn parse_odd_prime(s: &str) -> Result<GaussPrime, Error> {
    let z = parse_gauss(s)?;
    let p = GaussPrime::from_associate(&z).ok_or_else(|| Error::invalid(format!("{z} is not a Gaussian prime")))?;
    if !p.is_odd() {
        return Err(Error::NotOdd(z.to_string()));
    }
    Ok(p)
}

fn fe_string(x: Fe) -> String {
    if x.b == 0 {
        x.a.to_string()
    } else {
        format!("{}+{}i", x.a, x.b)
    }
}

impl Ctx {
    fn beta(&self, positional: Option<&String>) -> Result<GaussInt, Error> {
        let s = positional.or(self.beta.as_ref()).ok_or_else(|| Error::invalid("a modulus is required (positional or --beta)"))?;
        parse_gauss(s)
    }

    fn emit<T: Serialize>(&self, body: &T, text: String) -> CmdResult {
        let stdout = if self.json { versioned(body) } else { text };
        Ok(Emitted { stdout, violation: None })
    }

    /// `Λ_β` through the cache when one is configured.
    fn lambda(&mut self, beta: &GaussInt) -> Result<LemnatomicRecord, Error> {
        let beta = normalize_modulus(beta)?;
        if let Some(cache) = &self.cache {
            if let Some(hit) = cache.load(&beta, self.method) {
                return Ok(hit);
            }
        }
        let record = compute_lemnatomic(&beta, self.method, self.precision_bits, self.exec)?;
        if let Some(cache) = &self.cache {
            if let Err(e) = cache.store(&record) {
                self.warnings.push(format!("warning: could not write cache in {}: {e}", cache.dir().display()));
            }
        }
        Ok(record)
    }

    fn poly(&mut self, arg: &str) -> Result<PolyZi, Error> {
        if let Some(b) = arg.strip_prefix("lemnatomic:") {
            return Ok(self.lambda(&parse_gauss(b)?)?.coefficients);
        }
        let text = if arg.trim_start().starts_with('{') {
            arg.to_string()
        } else {
            std::fs::read_to_string(arg).map_err(|e| Error::invalid(format!("cannot read polynomial file {arg}: {e}")))?
        };
        // a lemnatomic record or cache entry carries the polynomial under "coefficients"
        if let Ok(serde_json::Value::Object(map)) = serde_json::from_str::<serde_json::Value>(&text) {
            if let Some(inner) = map.get("coefficients") {
                return PolyZi::from_json(&inner.to_string());
            }
        }
        PolyZi::from_json(&text)
    }
}

fn execute(ctx: &mut Ctx, command: Command) -> CmdResult {
    match command {
        Command::Primes { odd_only } => {
            let primes = primes_up_to_norm(ctx.max_norm, odd_only);
            let mut text = String::new();
            for p in &primes {
                let kind = serde_json::to_value(p.kind).expect("kind serializes");
                writeln!(text, "{}\tnorm {}\t{}", p.value, p.norm, kind.as_str().unwrap_or_default()).unwrap();
            }
            let stdout = if ctx.json { to_json(&primes) } else { text };
            Ok(Emitted { stdout, violation: None })
        }
        Command::Factor { z } => {
            let z = parse_gauss(&z)?;
            let f = factor(&z)?;
            #[derive(Serialize)]
            struct FactorJson {
                unit: GaussInt,
                factors: Vec<(GaussInt, u32)>,
            }
            let body = FactorJson { unit: f.unit.clone(), factors: f.factors.iter().map(|(p, e)| (p.value.clone(), *e)).collect() };
            let mut text = format!("{z} = ({})", f.unit);
            for (p, e) in &body.factors {
                write!(text, " * ({p})").unwrap();
                if *e > 1 {
                    write!(text, "^{e}").unwrap();
                }
            }
            text.push('\n');
            let stdout = if ctx.json { serde_json::to_string(&body).expect("serializes") + "\n" } else { text };
            Ok(Emitted { stdout, violation: None })
        }
        Command::Primary { z } => {
            let z = parse_gauss(&z)?;
            let p = z.primary()?;
            let unit = GaussInt::units().into_iter().find(|u| u * &z == p).expect("primary is an associate");
            #[derive(Serialize)]
            struct PrimaryJson {
                input: GaussInt,
                primary: GaussInt,
                unit: GaussInt,
            }
            let text = format!("{p} = ({unit}) * ({z})\n");
            let body = PrimaryJson { input: z, primary: p, unit };
            let stdout = if ctx.json { serde_json::to_string(&body).expect("serializes") + "\n" } else { text };
            Ok(Emitted { stdout, violation: None })
        }
        Command::Unitgroup { modulus } => {
            let beta = ctx.beta(modulus.as_ref())?;
            let group = UnitGroup::new(ResidueRing::new(&beta)?)?;
            use lemnatomic::residue::FiniteAbelianGroup;
            let text = format!(
                "(R/βR)* for β = {}: order {}, invariant factors [{}], generators [{}]\n",
                group.ring().modulus(),
                group.order(),
                join(group.invariant_factors()),
                join(group.generators())
            );
            ctx.emit(&group.to_json(), text)
        }
        Command::Lemnatomic { modulus } => {
            let beta = ctx.beta(modulus.as_ref())?;
            let r = ctx.lambda(&beta)?;
            let mut text = format!(
                "Λ_{} = {}\ndegree: {}\ncoefficients: [{}]\nmethod: {}\n",
                r.beta,
                r.coefficients,
                r.degree,
                join(r.coefficients.coeffs()),
                r.method
            );
            if let Some(bits) = r.precision_bits {
                writeln!(text, "precision bits: {bits}").unwrap();
            }
            if let Some(agree) = r.pipelines_agree {
                writeln!(text, "pipelines agree: {agree}").unwrap();
            }
            writeln!(text, "checksum: {}", r.checksum).unwrap();
            ctx.emit(&r, text)
        }
        Command::Reduce { poly, pi } => {
            let h = ctx.poly(&poly)?;
            let pi = parse_odd_prime(&pi)?;
            let k = ResidueField::new(&pi)?;
            let reduced = k.reduce_poly(&h);
            let squarefree = reduced.is_squarefree();
            let degrees = if squarefree && !reduced.is_zero() { Some(reduced.factor_degrees()?) } else { None };
            #[derive(Serialize)]
            struct ReduceJson {
                pi: GaussInt,
                field_size: u64,
                i_image: String,
                coefficients: Vec<String>,
                squarefree: bool,
                factor_degrees: Option<Vec<u32>>,
            }
            let body = ReduceJson {
                pi: pi.value.clone(),
                field_size: k.size(),
                i_image: fe_string(k.i_image()),
                coefficients: reduced.coeffs().iter().map(|&c| fe_string(c)).collect(),
                squarefree,
                factor_degrees: degrees,
            };
            let mut text = format!(
                "modulo {} (field of size {}, i -> {}): [{}]\nsquarefree: {}\n",
                body.pi,
                body.field_size,
                body.i_image,
                body.coefficients.join(", "),
                squarefree
            );
            if let Some(d) = &body.factor_degrees {
                writeln!(text, "factor degrees: [{}]", join(d)).unwrap();
            }
            ctx.emit(&body, text)
        }
        Command::SplitTest { poly, pi } => {
            let h = ctx.poly(&poly)?;
            let pi = parse_odd_prime(&pi)?;
            let reduced = ResidueField::new(&pi)?.reduce_poly(&h);
            #[derive(Serialize)]
            struct SplitJson {
                poly: PolyZi,
                pi: GaussInt,
                squarefree: bool,
                has_root: bool,
                splits_completely: bool,
            }
            let body = SplitJson {
                pi: pi.value.clone(),
                squarefree: reduced.is_squarefree(),
                has_root: reduced.has_root(),
                splits_completely: reduced.splits_completely(),
                poly: h,
            };
            let text = format!(
                "{} modulo {}: splits completely: {}, squarefree: {}, has a root: {}\n",
                body.poly, body.pi, body.splits_completely, body.squarefree, body.has_root
            );
            ctx.emit(&body, text)
        }
        Command::ScanSplitting { poly } => {
            let h = ctx.poly(&poly)?;
            let r = splitting_primes(&h, ctx.max_norm, ctx.exec)?;
            let text = format!(
                "{} splits completely modulo {} odd primes of norm <= {}:\n[{}]\nskipped: [{}]\n",
                r.poly,
                r.primes.len(),
                r.bound,
                join(&r.primes),
                join(&r.skipped)
            );
            ctx.emit(&r, text)
        }
        Command::Semisplit { poly } => {
            let g = ctx.poly(&poly)?;
            let r = semisplit_primes(&g, ctx.max_norm, ctx.exec)?;
            let text = format!(
                "{} has a root modulo {} odd primes of norm <= {}:\n[{}]\nskipped: [{}]\n",
                r.poly,
                r.primes.len(),
                r.bound,
                join(&r.primes),
                join(&r.skipped)
            );
            ctx.emit(&r, text)
        }
        Command::VerifyProp1 { modulus } => {
            let beta = ctx.beta(modulus.as_ref())?;
            let lambda = ctx.lambda(&beta)?;
            let r = verify_prop1(&lambda.beta, &lambda.coefficients, ctx.max_norm, ctx.exec)?;
            let text = format!(
                "Λ_{} separable modulo {} odd primes of norm <= {} not dividing β: {}\ncounterexamples: [{}]\n",
                r.beta,
                r.checked,
                r.bound,
                r.passed,
                join(&r.counterexamples)
            );
            let mut out = ctx.emit(&r, text)?;
            if !r.passed {
                out.violation = Some(format!("Λ_{} is inseparable modulo {}", r.beta, join(&r.counterexamples)));
            }
            Ok(out)
        }
        Command::Prop2Evidence { poly } => {
            let g = ctx.poly(&poly)?;
            let beta = ctx.beta(None)?;
            let r = prop2_evidence(&g, &beta, ctx.max_norm, ctx.normalization, ctx.exec)?;
            let text = format!(
                "K defined by {}, β = {}, {} classes, {} semi-split primes of norm <= {}\nclasses: [{}]\nsubgroup order {} of {}\ncriterion satisfied: {}\nnote: {}\n",
                r.poly,
                r.beta,
                serde_json::to_value(r.normalization).unwrap().as_str().unwrap_or_default(),
                r.semisplit_count,
                r.bound,
                r.classes.join(", "),
                r.subgroup_order,
                r.group_order,
                r.criterion_satisfied,
                r.note
            );
            ctx.emit(&r, text)
        }
        Command::VerifyTheorem { poly, exponent_bound, norm_cap } => {
            let h = ctx.poly(&poly)?;
            let params = TheoremSearch {
                bound: ctx.max_norm,
                exponent_bound,
                norm_cap,
                normalization: ctx.normalization,
                policy: if ctx.allow_even_disc { DiscriminantPolicy::AllowEven } else { DiscriminantPolicy::RequireOdd },
            };
            let r = theorem_search(&h, params, ctx.exec)?;
            let mut text = format!("h = {}\ndisc = {}\n{} split primes of norm <= {}\n", r.poly, r.disc, r.split_prime_count, r.bound);
            for c in &r.candidates {
                writeln!(
                    text,
                    "  β = {}: P-classes generate {} of {}{}",
                    c.beta,
                    c.subgroup_order,
                    c.group_order,
                    if c.witness { "  (witness)" } else { "" }
                )
                .unwrap();
            }
            writeln!(text, "witnesses: [{}]", join(&r.witnesses)).unwrap();
            for n in &r.notes {
                writeln!(text, "note: {n}").unwrap();
            }
            ctx.emit(&r, text)
        }
        Command::Density { poly } => {
            let h = ctx.poly(&poly)?;
            let r = density_report(&h, ctx.max_norm, ctx.exec)?;
            let text = format!(
                "{}: {} of {} odd primes of norm <= {} split completely, ratio {:.6} (1/deg = {:.6})\n",
                r.poly, r.count_p, r.count_all_odd, r.bound, r.ratio, r.galois_expectation
            );
            ctx.emit(&r, text)
        }
        Command::OrbitCheck { modulus, pi } => {
            let beta = ctx.beta(modulus.as_ref())?;
            let lambda = ctx.lambda(&beta)?;
            let beta = lambda.beta.clone();
            if let Some(pi) = pi {
                let pi = parse_odd_prime(&pi)?;
                if pi.value.divides(&beta) {
                    return Err(Error::invalid(format!("{} divides β = {beta}", pi.value)));
                }
                let group = UnitGroup::new(ResidueRing::new(&beta)?)?;
                let c = frobenius_orbit_check(&group, &lambda.coefficients, &pi)?;
                let text = format!(
                    "Λ_{beta} modulo {}: factor degrees [{}], class {} of order {}, consistent: {}\n",
                    c.pi,
                    join(&c.degrees),
                    c.class,
                    c.class_order,
                    c.consistent
                );
                let mut out = ctx.emit(&c, text)?;
                if !c.consistent {
                    out.violation = Some(format!("orbit law fails for π = {}", c.pi));
                }
                return Ok(out);
            }
            let orbit = orbit_law_scan(&beta, &lambda.coefficients, ctx.max_norm, ctx.exec)?;
            let law = splitting_law_scan(&beta, &lambda.coefficients, ctx.max_norm, ctx.exec)?;
            #[derive(Serialize)]
            struct OrbitJson<'a> {
                orbit: &'a lemnatomic::classfield::OrbitReport,
                splitting_law: &'a lemnatomic::classfield::SplittingLawReport,
            }
            let text = format!(
                "Λ_{beta}, {} odd primes of norm <= {} not dividing β\norbit law exceptions: [{}]\nsplit completely: {}, splitting law exceptions: [{}]\n",
                orbit.checked,
                orbit.bound,
                orbit.exceptions.iter().map(|c| c.pi.to_string()).collect::<Vec<_>>().join(", "),
                law.split_count,
                join(&law.exceptions)
            );
            let mut out = ctx.emit(&OrbitJson { orbit: &orbit, splitting_law: &law }, text)?;
            if !orbit.exceptions.is_empty() || !law.exceptions.is_empty() {
                out.violation = Some(format!("{} orbit and {} splitting-law exceptions", orbit.exceptions.len(), law.exceptions.len()));
            }
            Ok(out)
        }
    }
}

/// Rewrites `--beta -3` as `--beta=-3` so that literals starting with a minus
/// sign are not mistaken for flags.
fn glue_hyphen_values<I, T>(args: I) -> Vec<OsString>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut out: Vec<OsString> = Vec::new();
    let mut it = args.into_iter().map(Into::into).peekable();
    while let Some(arg) = it.next() {
        let takes_literal = arg == "--beta" || arg == "--pi";
        match it.peek().and_then(|v| v.to_str()) {
            Some(v) if takes_literal && v.starts_with('-') && !v.starts_with("--") => {
                let mut glued = arg;
                glued.push("=");
                glued.push(v);
                out.push(glued);
                it.next();
            }
            _ => out.push(arg),
        }
    }
    out
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(glue_hyphen_values(args)) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: rendered, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: rendered }
            };
        }
    };
    let mut ctx = Ctx {
        json: cli.json,
        max_norm: cli.max_norm,
        beta: cli.beta,
        precision_bits: cli.precision_bits,
        method: match cli.method {
            MethodArg::Exact => Method::Exact,
            MethodArg::Numeric => Method::Numeric,
            MethodArg::Both => Method::Both,
        },
        normalization: match cli.normalization {
            NormArg::Primary => Normalization::Primary,
            NormArg::Raw => Normalization::Raw,
        },
        cache: cli.cache_dir.map(Cache::new),
        allow_even_disc: cli.allow_even_disc,
        exec: if cli.sequential { Exec::Sequential } else { Exec::default() },
        warnings: Vec::new(),
    };
    let result = execute(&mut ctx, cli.command);
    let mut stderr: String = ctx.warnings.iter().map(|w| format!("{w}\n")).collect();
    match result {
        Ok(Emitted { stdout, violation: None }) => Outcome { code: 0, stdout, stderr },
        Ok(Emitted { stdout, violation: Some(msg) }) => {
            writeln!(stderr, "verification failed: {msg}").unwrap();
            Outcome { code: 2, stdout, stderr }
        }
        Err(e) => {
            writeln!(stderr, "error: {e}").unwrap();
            Outcome { code: exit_code(&e), stdout: String::new(), stderr }
        }
    }
}

/// Bad input is 1, exhausted precision 3, anything else is a broken invariant.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_input_error() {
        1
    } else if e.is_precision_error() {
        3
    } else {
        2
    }
}
