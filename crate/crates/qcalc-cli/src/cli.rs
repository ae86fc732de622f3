//! Argument parsing, config merging and dispatch.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use habiro::glued::RelativePrecision;
use habiro::{EtaleAlgebraSpec, EtaleSpecJson, HabiroPrecision};
use num_bigint::BigInt;
use qcomplex::{bockstein, build_complex, cohomology_mod, Base, Flavor, ToricAlgebraSpec};
use qcore::arith::divisors;
use qcore::qanalog::{cyclotomic, q_binomial, q_factorial, q_integer, q_pochhammer};
use qcore::ZqPoly;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::acceptance;
use crate::report::{run_jobs, CheckRecord, Report};
use crate::suites::{self, DeltaParams, QpdParams};

#[derive(Parser, Debug)]
#[command(name = "qcalc", version, about = "Exact q-calculus computations and verification suites")]
pub struct Cli {
    /// JSON config file; command-line flags take precedence over it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Worker threads (QCALC_THREADS is used when absent).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Omit wall times and the generation timestamp.
    #[arg(long, global = true)]
    pub no_timestamps: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlavorArg {
    Qdr,
    Qhodge,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Flavor {
        match f {
            FlavorArg::Qdr => Flavor::QDeRham,
            FlavorArg::Qhodge => Flavor::QHodge,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// [n]_q
    Integer,
    /// [n]_q!
    Factorial,
    /// q-binomial (n choose k)
    Binomial,
    /// (q;q)_n
    Pochhammer,
    /// Phi_n(q)
    Cyclotomic,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print a q-analogue as a polynomial.
    Qanalog {
        kind: Kind,
        #[arg(allow_hyphen_values = true, required = true)]
        args: Vec<i64>,
    },
    /// Print Phi_m and check the divisor product formula.
    Cyclotomic {
        m: u64,
        /// Check the product formula for every m' up to this bound (default: m).
        #[arg(long)]
        verify_upto: Option<u64>,
    },
    /// Delta-ring identities, rule checks and decomposition witnesses.
    DeltaSuite(DeltaArgs),
    /// q-divided power lifts, the alpha = 1 obstruction and Nygaard checks.
    QpdSuite(QpdArgs),
    /// Cohomology tables of q-Hodge or q-de Rham complexes.
    Cohomology(CohomologyArgs),
    /// Compare the decalage of the q-Hodge complex with the q-de Rham complex.
    DecalageCheck(DecalageArgs),
    /// Expand a polynomial at roots of unity and check consistency.
    HabiroElement(ElementArgs),
    /// Relative Habiro ring of an etale algebra.
    RelativeHabiro(RelativeArgs),
    /// Run the full acceptance suite.
    VerifyAll,
}

#[derive(Args, Debug)]
pub struct DeltaArgs {
    #[arg(long, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
    #[arg(long)]
    pub trunc: Option<u32>,
    /// Random pairs per prime for the sum and product rules.
    #[arg(long)]
    pub pairs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Iteration depth for the decomposition witnesses.
    #[arg(long)]
    pub depth: Option<u32>,
    /// Primes for the q-decomposition witnesses.
    #[arg(long, value_delimiter = ',')]
    pub q_primes: Option<Vec<u64>>,
}

#[derive(Args, Debug)]
pub struct QpdArgs {
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
    /// Largest Nygaard power checked.
    #[arg(long)]
    pub max_n: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    pub unit_primes: Option<Vec<u64>>,
    #[arg(long)]
    pub unit_max_n: Option<u64>,
}

#[derive(Args, Debug)]
pub struct CohomologyArgs {
    #[arg(long)]
    pub vars: Option<usize>,
    /// Invert the variables.
    #[arg(long)]
    pub laurent: bool,
    #[arg(long)]
    pub m: Option<u64>,
    /// Work modulo (q^m - 1)^k.
    #[arg(long)]
    pub mod_power: Option<u32>,
    /// Exponent window `lo..hi`, applied to each variable.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    #[arg(long)]
    pub flavor: Option<FlavorArg>,
    /// Add Bockstein matrices.
    #[arg(long)]
    pub bockstein: bool,
}

#[derive(Args, Debug)]
pub struct DecalageArgs {
    #[arg(long)]
    pub vars: Option<usize>,
    /// Half-width r of the box [-r, r]^n.
    #[arg(long)]
    pub window: Option<i64>,
    /// Compare cohomology mod (q-1)^k for k up to this.
    #[arg(long)]
    pub mod_power: Option<u32>,
}

#[derive(Args, Debug)]
pub struct ElementArgs {
    /// Integer coefficients, constant term first.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub coeffs: Option<Vec<i64>>,
    /// Index set as a list or `1..N`.
    #[arg(long)]
    pub index: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
    #[arg(long)]
    pub a: Option<u32>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Replace coefficient k of the m-component by c, as `m:k:c`.
    #[arg(long, allow_hyphen_values = true)]
    pub corrupt: Option<String>,
}

#[derive(Args, Debug)]
pub struct RelativeArgs {
    /// JSON spec file, or one of `integers`, `gaussian`, `golden`.
    #[arg(long)]
    pub spec: Option<String>,
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub prime_precision: Option<u32>,
    #[arg(long)]
    pub n: Option<usize>,
}

/// Values a config file may provide. Unknown keys are rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
    pub timestamps: Option<bool>,
    pub primes: Option<Vec<u64>>,
    pub q_primes: Option<Vec<u64>>,
    pub trunc: Option<u32>,
    pub pairs: Option<usize>,
    pub seed: Option<u64>,
    pub depth: Option<u32>,
    pub alphas: Option<Vec<u32>>,
    pub max_n: Option<u64>,
    pub unit_primes: Option<Vec<u64>>,
    pub unit_max_n: Option<u64>,
    pub vars: Option<usize>,
    pub laurent: Option<bool>,
    pub m: Option<u64>,
    pub mod_power: Option<u32>,
    pub window: Option<Value>,
    pub flavor: Option<FlavorArg>,
    pub bockstein: Option<bool>,
    pub coeffs: Option<Vec<i64>>,
    pub index: Option<Value>,
    pub a: Option<u32>,
    pub n: Option<usize>,
    pub spec: Option<String>,
    pub prime_precision: Option<u32>,
}

/// Input problems; reported with exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn bad(msg: impl std::fmt::Display) -> ConfigError {
    ConfigError(msg.to_string())
}

pub fn load_config(path: &Path) -> Result<FileConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))
}

/// Flag, then QCALC_THREADS, then config file.
pub fn resolve_threads(flag: Option<usize>, env: Option<&str>, file: Option<usize>) -> Result<Option<usize>, ConfigError> {
    let t = match (flag, env) {
        (Some(t), _) => Some(t),
        (None, Some(s)) => Some(s.trim().parse::<usize>().map_err(|_| bad(format!("QCALC_THREADS={s:?} is not a thread count")))?),
        (None, None) => file,
    };
    if t == Some(0) {
        return Err(bad("thread count must be positive"));
    }
    Ok(t)
}

pub fn parse_window(s: &str) -> Result<(i64, i64), ConfigError> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| bad(format!("window {s:?} is not lo..hi")))?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad(format!("window {s:?}")))?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad(format!("window {s:?}")))?;
    if lo > hi {
        return Err(bad(format!("window {s:?} is empty")));
    }
    Ok((lo, hi))
}

fn window_from_value(v: &Value) -> Result<(i64, i64), ConfigError> {
    match v {
        Value::String(s) => parse_window(s),
        Value::Array(a) if a.len() == 2 => match (a[0].as_i64(), a[1].as_i64()) {
            (Some(lo), Some(hi)) if lo <= hi => Ok((lo, hi)),
            _ => Err(bad(format!("window {v}"))),
        },
        _ => Err(bad(format!("window {v}"))),
    }
}

pub fn parse_index(s: &str) -> Result<Vec<u64>, ConfigError> {
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: u64 = lo.trim().parse().map_err(|_| bad(format!("index {s:?}")))?;
        let hi: u64 = hi.trim().parse().map_err(|_| bad(format!("index {s:?}")))?;
        return Ok((lo..=hi).collect());
    }
    s.split(',').map(|t| t.trim().parse().map_err(|_| bad(format!("index {s:?}")))).collect()
}

fn index_from_value(v: &Value) -> Result<Vec<u64>, ConfigError> {
    match v {
        Value::String(s) => parse_index(s),
        Value::Array(a) => a.iter().map(|x| x.as_u64().ok_or_else(|| bad(format!("index {v}")))).collect(),
        _ => Err(bad(format!("index {v}"))),
    }
}

fn nonempty<T>(name: &str, v: Vec<T>) -> Result<Vec<T>, ConfigError> {
    if v.is_empty() {
        return Err(bad(format!("{name} must be nonempty")));
    }
    Ok(v)
}

fn primes(name: &str, v: Vec<u64>) -> Result<Vec<u64>, ConfigError> {
    let v = nonempty(name, v)?;
    if let Some(p) = v.iter().find(|&&p| !qcore::arith::is_prime(p)) {
        return Err(bad(format!("{name}: {p} is not prime")));
    }
    Ok(v)
}

/// What a subcommand produced.
pub enum Output {
    Text(String),
    Report(Report),
    /// Report whose CSV rendering is a custom table.
    Table(Report, String),
}

pub struct Settings {
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub timestamps: bool,
    pub threads: Option<usize>,
}

/// Parses arguments, runs the command, writes output, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qcalc: {e}");
            2
        }
    }
}

fn execute(cli: Cli) -> Result<i32, ConfigError> {
    let file = match &cli.config {
        Some(p) => load_config(p)?,
        None => FileConfig::default(),
    };
    let env = std::env::var("QCALC_THREADS").ok();
    let settings = Settings {
        output: cli.output.clone().or(file.output.clone()),
        format: cli.format.or(file.format),
        timestamps: !cli.no_timestamps && file.timestamps.unwrap_or(true),
        threads: resolve_threads(cli.threads, env.as_deref(), file.threads)?,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = settings.threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(bad)?;
    let out = pool.install(|| dispatch(&cli.command, &file))?;
    emit(out, &settings)
}

fn emit(out: Output, s: &Settings) -> Result<i32, ConfigError> {
    let (text, code) = match out {
        Output::Text(t) => (t + "\n", 0),
        Output::Report(r) => {
            let code = if r.pass() { 0 } else { 1 };
            let text = match s.format.unwrap_or(Format::Json) {
                Format::Json => serde_json::to_string_pretty(&r.to_json(s.timestamps)).unwrap() + "\n",
                Format::Csv => r.to_csv(s.timestamps),
            };
            (text, code)
        }
        Output::Table(r, csv) => {
            let code = if r.pass() { 0 } else { 1 };
            let text = match s.format.unwrap_or(Format::Csv) {
                Format::Json => serde_json::to_string_pretty(&r.to_json(s.timestamps)).unwrap() + "\n",
                Format::Csv => csv,
            };
            (text, code)
        }
    };
    match &s.output {
        Some(p) => std::fs::write(p, text).map_err(|e| bad(format!("{}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    Ok(code)
}

fn dispatch(cmd: &Command, f: &FileConfig) -> Result<Output, ConfigError> {
    match cmd {
        Command::Qanalog { kind, args } => qanalog(*kind, args).map(Output::Text),
        Command::Cyclotomic { m, verify_upto } => Ok(Output::Report(cyclotomic_report(*m, verify_upto.unwrap_or(*m))?)),
        Command::DeltaSuite(a) => {
            let p = DeltaParams {
                primes: primes("primes", a.primes.clone().or(f.primes.clone()).unwrap_or(vec![2, 3, 5, 7]))?,
                trunc: a.trunc.or(f.trunc).unwrap_or(8),
                pairs: a.pairs.or(f.pairs).unwrap_or(100),
                pair_trunc: 4,
                seed: a.seed.or(f.seed).unwrap_or(2024),
                witness_depth: a.depth.or(f.depth).unwrap_or(2),
                witness_primes: vec![],
                witness_q_primes: primes("q-primes", a.q_primes.clone().or(f.q_primes.clone()).unwrap_or(vec![2, 3]))?,
                budget: 40,
            };
            if p.trunc < 2 {
                return Err(bad("trunc must be at least 2"));
            }
            let p = DeltaParams { witness_primes: p.primes.clone(), ..p };
            let config = json!({
                "primes": p.primes, "trunc": p.trunc, "pairs": p.pairs, "pair_trunc": p.pair_trunc, "seed": p.seed,
                "depth": p.witness_depth, "q_primes": p.witness_q_primes, "budget": p.budget,
            });
            Ok(Output::Report(Report::new("delta-suite", config, run_jobs(suites::delta_jobs(&p)))))
        }
        Command::QpdSuite(a) => {
            let ps = primes("primes", a.primes.clone().or(f.primes.clone()).unwrap_or(vec![2, 3, 5]))?;
            let alphas = nonempty("alphas", a.alphas.clone().or(f.alphas.clone()).unwrap_or(vec![2, 3]))?;
            if alphas.contains(&0) || alphas.contains(&1) {
                return Err(bad("alphas must be at least 2"));
            }
            let p = QpdParams {
                alphas,
                primes: ps.clone(),
                obstruction_primes: ps.clone(),
                nygaard_primes: ps.clone(),
                nygaard_max_n: a.max_n.or(f.max_n).unwrap_or(3),
                unit_primes: primes("unit-primes", a.unit_primes.clone().or(f.unit_primes.clone()).unwrap_or(vec![2, 3, 5, 7]))?,
                unit_max_n: a.unit_max_n.or(f.unit_max_n).unwrap_or(6),
            };
            let config = json!({
                "alphas": p.alphas, "primes": p.primes, "max_n": p.nygaard_max_n,
                "unit_primes": p.unit_primes, "unit_max_n": p.unit_max_n,
            });
            Ok(Output::Report(Report::new("qpd-suite", config, run_jobs(suites::qpd_jobs(&p)))))
        }
        Command::Cohomology(a) => cohomology(a, f),
        Command::DecalageCheck(a) => {
            let n = a.vars.or(f.vars).unwrap_or(2);
            let r = match (a.window, &f.window) {
                (Some(r), _) => r,
                (None, Some(v)) => v.as_i64().ok_or_else(|| bad("decalage window is a half-width"))?,
                (None, None) => 6,
            };
            let k = a.mod_power.or(f.mod_power).unwrap_or(3);
            if n == 0 || r < 0 || k == 0 {
                return Err(bad("need vars >= 1, window >= 0, mod-power >= 1"));
            }
            let config = json!({ "vars": n, "window": r, "mod_power": k });
            Ok(Output::Report(Report::new("decalage-check", config, run_jobs(suites::decalage_jobs(n, r, k)))))
        }
        Command::HabiroElement(a) => habiro_element(a, f),
        Command::RelativeHabiro(a) => relative(a, f),
        Command::VerifyAll => Ok(Output::Report(verify_all())),
    }
}

fn qanalog(kind: Kind, args: &[i64]) -> Result<String, ConfigError> {
    let arity = if kind == Kind::Binomial { 2 } else { 1 };
    if args.len() != arity {
        return Err(bad(format!("{kind:?} takes {arity} argument(s)")));
    }
    let nat = |x: i64| u64::try_from(x).map_err(|_| bad(format!("{x} must be nonnegative")));
    let f = match kind {
        Kind::Integer => q_integer(args[0]),
        Kind::Factorial => q_factorial(nat(args[0])?),
        Kind::Binomial => q_binomial(nat(args[0])?, nat(args[1])?),
        Kind::Pochhammer => q_pochhammer(nat(args[0])?),
        Kind::Cyclotomic => {
            let m = nat(args[0])?;
            if m == 0 {
                return Err(bad("cyclotomic index must be positive"));
            }
            cyclotomic(m)
        }
    };
    Ok(f.to_string())
}

pub fn cyclotomic_report(m: u64, upto: u64) -> Result<Report, ConfigError> {
    if m == 0 || upto == 0 {
        return Err(bad("m must be positive"));
    }
    let checks: Vec<CheckRecord> = (1..=upto)
        .map(|k| {
            let prod = divisors(k).into_iter().fold(ZqPoly::one(), |acc, d| &acc * &cyclotomic(d));
            CheckRecord::new(format!("product/m={k}"), prod == &ZqPoly::monomial(1, k as i64) - &ZqPoly::one())
        })
        .collect();
    let result = json!({ "m": m, "phi": cyclotomic(m).to_string(), "degree": qcore::arith::euler_phi(m) });
    Ok(Report::new("cyclotomic", json!({ "m": m, "verify_upto": upto }), checks).with_result(result))
}

fn cohomology(a: &CohomologyArgs, f: &FileConfig) -> Result<Output, ConfigError> {
    let n = a.vars.or(f.vars).unwrap_or(1);
    let laurent = a.laurent || f.laurent.unwrap_or(false);
    let m = a.m.or(f.m).unwrap_or(1);
    let k = a.mod_power.or(f.mod_power).unwrap_or(1);
    let window = match (&a.window, &f.window) {
        (Some(s), _) => parse_window(s)?,
        (None, Some(v)) => window_from_value(v)?,
        (None, None) => if laurent { (-4, 4) } else { (0, 4) },
    };
    let flavor: Flavor = a.flavor.or(f.flavor).unwrap_or(FlavorArg::Qhodge).into();
    let with_beta = a.bockstein || f.bockstein.unwrap_or(false);
    if n == 0 || m == 0 || k == 0 {
        return Err(bad("need vars >= 1, m >= 1, mod-power >= 1"));
    }
    let spec = ToricAlgebraSpec::new(vec![laurent; n], vec![window; n]).map_err(bad)?;
    let complex = build_complex(&spec, flavor, Base::Polynomial).map_err(bad)?;
    let table = if with_beta {
        if k != 1 {
            return Err(bad("the Bockstein is computed mod q^m - 1 only"));
        }
        bockstein(&complex, m)
    } else {
        cohomology_mod(&complex, m, k)
    }
    .map_err(bad)?;
    let mut checks = vec![
        CheckRecord::new("d_squared_zero", complex.d_squared_zero()),
        CheckRecord::new("euler_consistent", table.euler_consistent),
    ];
    if let Some(b) = table.beta_squared_zero {
        checks.push(CheckRecord::new("beta_squared_zero", b));
    }
    let config = json!({
        "vars": n, "laurent": laurent, "m": m, "mod_power": k, "window": [window.0, window.1],
        "flavor": flavor.to_string(), "bockstein": with_beta,
    });
    let csv = table.to_csv();
    Ok(Output::Table(Report::new("cohomology", config, checks).with_result(table.to_json()), csv))
}

fn habiro_element(a: &ElementArgs, f: &FileConfig) -> Result<Output, ConfigError> {
    let coeffs = a.coeffs.clone().or(f.coeffs.clone()).ok_or_else(|| bad("--coeffs is required"))?;
    let index = match (&a.index, &f.index) {
        (Some(s), _) => parse_index(s)?,
        (None, Some(v)) => index_from_value(v)?,
        (None, None) => (1..=8).collect(),
    };
    let prec = HabiroPrecision {
        primes: primes("primes", a.primes.clone().or(f.primes.clone()).unwrap_or(vec![2, 3]))?,
        a: a.a.or(f.a).unwrap_or(4),
        n: a.n.or(f.n).unwrap_or(4),
    };
    if prec.a == 0 || prec.n == 0 {
        return Err(bad("a and n must be positive"));
    }
    let poly = ZqPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect());
    let mut e = suites::habiro_element(&poly, &index, &prec).map_err(bad)?;
    let mut corrupted = Value::Null;
    if let Some(c) = &a.corrupt {
        let parts: Vec<&str> = c.split(':').collect();
        let parsed = match parts.as_slice() {
            [m, k, v] => m.parse::<u64>().ok().zip(k.parse::<usize>().ok()).zip(v.parse::<i64>().ok()),
            _ => None,
        };
        let ((m, k), v) = parsed.ok_or_else(|| bad(format!("corrupt {c:?} is not m:k:c")))?;
        e = e.corrupt(m, k, &ZqPoly::constant(v)).map_err(bad)?;
        corrupted = json!({ "m": m, "k": k, "value": v });
    }
    let config = json!({ "coeffs": coeffs, "index": index, "primes": prec.primes, "a": prec.a, "n": prec.n, "corrupt": corrupted });
    let mut result = suites::element_json(&e);
    result["polynomial"] = json!(poly.to_string());
    Ok(Output::Report(Report::new("habiro-element", config, suites::element_checks(&e)).with_result(result)))
}

fn load_spec(s: &str) -> Result<EtaleAlgebraSpec, ConfigError> {
    match s {
        "integers" => Ok(EtaleAlgebraSpec::integers()),
        "gaussian" => Ok(EtaleAlgebraSpec::gaussian()),
        "golden" => Ok(EtaleAlgebraSpec::golden()),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{path}: {e}")))?;
            let j: EtaleSpecJson = serde_json::from_str(&text).map_err(|e| bad(format!("{path}: {e}")))?;
            EtaleAlgebraSpec::from_json(&j).map_err(bad)
        }
    }
}

fn relative(a: &RelativeArgs, f: &FileConfig) -> Result<Output, ConfigError> {
    let spec_name = a.spec.clone().or(f.spec.clone()).ok_or_else(|| bad("--spec is required"))?;
    let spec = load_spec(&spec_name)?;
    let m = a.m.or(f.m).unwrap_or(6);
    let prec = RelativePrecision { n: a.n.or(f.n).unwrap_or(2) as u32, a: a.prime_precision.or(f.prime_precision).unwrap_or(4) };
    if m == 0 || prec.n == 0 || prec.a == 0 {
        return Err(bad("m, n and prime-precision must be positive"));
    }
    let (checks, result) = suites::relative_checks(&spec, m, prec).map_err(bad)?;
    let config = json!({ "spec": serde_json::to_value(spec.to_json()).unwrap(), "m": m, "n": prec.n, "prime_precision": prec.a });
    Ok(Output::Report(Report::new("relative-habiro", config, checks).with_result(result)))
}

/// Every acceptance criterion, one record per criterion followed by its checks.
pub fn verify_all() -> Report {
    let mut checks = Vec::new();
    for c in acceptance::criteria() {
        let t = Instant::now();
        let o = acceptance::run(&c);
        let mut head = CheckRecord::new(format!("criterion/{}", c.number), o.pass()).detail(json!({
            "title": c.title,
            "checks": o.checks.len(),
            "failed": o.failed_ids(),
            "budget_s": c.budget.as_secs(),
            "within_budget": o.within_budget(),
        }));
        head.wall_time_ms = Some(t.elapsed().as_millis());
        checks.push(head);
        checks.extend(o.checks.into_iter().map(|mut r| {
            r.id = format!("{}/{}", c.number, r.id);
            r
        }));
    }
    Report::new("verify-all", json!({ "criteria": 12 }), checks)
}
