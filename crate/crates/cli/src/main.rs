use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;

use fsig_core::arith::{parse_rational, primes_between, CoeffField, Field, PrimeField, Rationals};
use fsig_core::closed_basis::{closed_groebner, BasisCase, BasisError, IdealSpec};
use fsig_core::fsig::{
    corollary_b_check, fsig_at_p, fsig_empirical, nvol_simple, FsigError, PiecewiseFn,
};
use fsig_core::lengths::{
    length_general, length_oracle, length_simple, length_wlp, Characteristic, LengthError,
    LengthResult,
};
use fsig_core::mutation::Mutation;
use fsig_core::oracle::buchberger;
use fsig_core::par::set_thread_count;
use fsig_core::poly::Poly;
use fsig_core::sweep::{run_sweep, write_rows, OutputFormat, PairSpec, SweepConfig, SweepError};
use fsig_core::verify::{run_verify, Suite, VerifyConfig};

/// Exact colengths, Groebner bases and F-signature functions of
/// `x^a y^b (x^u + y^v)^c`.
#[derive(Parser)]
#[command(name = "fsig", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Groebner basis of (x^M, y^N, (x^a y^b (x+y)^c)^K).
    Basis(BasisArgs),
    /// Colength of (x^M, y^N, (x^a y^b (x+y)^c)^K).
    Length(LengthArgs),
    /// F-signature psi_p(r/p) at a fixed prime.
    Fsig(FsigArgs),
    /// Limit F-signature function, or its value at t.
    Limit(LimitArgs),
    /// Normalized volume of x^a y^b (x+y)^c at t.
    Nvol(NvolArgs),
    /// Table of psi_p(floor(tp)/p) against the limit.
    Sweep(SweepArgs),
    /// Cross-check closed forms against the oracles.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct IdealArgs {
    #[arg(long = "m", visible_alias = "M")]
    m: u64,
    /// Defaults to M.
    #[arg(long = "n", visible_alias = "N")]
    n: Option<u64>,
    #[arg(long = "k", visible_alias = "K")]
    k: u64,
    #[arg(long, default_value_t = 0)]
    a: u64,
    #[arg(long, default_value_t = 0)]
    b: u64,
    #[arg(long, default_value_t = 1)]
    c: u64,
    /// `q` or `p=<prime>`.
    #[arg(long, default_value = "q")]
    field: CoeffField,
    #[arg(long)]
    json: bool,
}

impl IdealArgs {
    fn spec(&self) -> IdealSpec {
        IdealSpec {
            m: self.m,
            n: self.n.unwrap_or(self.m),
            k: self.k,
            a: self.a,
            b: self.b,
            c: self.c,
        }
    }

    fn is_simple(&self) -> bool {
        self.a == 0 && self.b == 0 && self.c == 1
    }
}

#[derive(Args)]
struct BasisArgs {
    #[command(flatten)]
    ideal: IdealArgs,
    /// Compute with Buchberger's algorithm instead of the closed form.
    #[arg(long)]
    oracle: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LengthRoute {
    Formula,
    Wlp,
    Oracle,
    All,
}

#[derive(Args)]
struct LengthArgs {
    #[command(flatten)]
    ideal: IdealArgs,
    #[arg(long, value_enum, default_value_t = LengthRoute::Formula)]
    route: LengthRoute,
}

#[derive(Args)]
struct FsigArgs {
    #[arg(long)]
    a: u64,
    #[arg(long)]
    b: u64,
    #[arg(long)]
    c: u64,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    r: u64,
    #[arg(long, default_value_t = 1)]
    u: u64,
    #[arg(long, default_value_t = 1)]
    v: u64,
    /// Use the rank oracle; required when u or v exceeds 1.
    #[arg(long)]
    empirical: bool,
}

#[derive(Args)]
struct LimitArgs {
    #[arg(long)]
    a: u64,
    #[arg(long)]
    b: u64,
    #[arg(long)]
    c: u64,
    #[arg(long, default_value_t = 1)]
    u: u64,
    #[arg(long, default_value_t = 1)]
    v: u64,
    /// Evaluate at t instead of printing the whole function.
    #[arg(long, value_parser = rational)]
    t: Option<BigRational>,
}

#[derive(Args)]
struct NvolArgs {
    #[arg(long)]
    a: u64,
    #[arg(long)]
    b: u64,
    #[arg(long)]
    c: u64,
    #[arg(long, value_parser = rational)]
    t: BigRational,
    /// Also compare a quarter of the volume with the limit F-signature.
    #[arg(long)]
    check_corollary: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    a: u64,
    #[arg(long)]
    b: u64,
    #[arg(long)]
    c: u64,
    #[arg(long, default_value_t = 1)]
    u: u64,
    #[arg(long, default_value_t = 1)]
    v: u64,
    /// Comma-separated primes or inclusive ranges, e.g. `31,37,101..131`.
    #[arg(long, value_parser = prime_list)]
    primes: PrimeList,
    /// Number of grid points.
    #[arg(long, default_value_t = 10)]
    count: usize,
    /// Grid start; defaults to 0.
    #[arg(long, value_parser = rational)]
    from: Option<BigRational>,
    /// Grid end (exclusive); defaults to the threshold.
    #[arg(long, value_parser = rational)]
    to: Option<BigRational>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Basis,
    Length,
    Fsig,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    suite: SuiteArg,
    #[arg(long, default_value_t = 6)]
    max_size: u64,
    #[arg(long, value_parser = prime_list, default_value = "31,101")]
    primes: PrimeList,
    /// Corrupt one case condition to confirm the suites can fail.
    #[arg(long, hide = true)]
    mutate: Option<Mutation>,
}

#[derive(Clone, Debug)]
struct PrimeList(Vec<u64>);

fn rational(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn prime_list(s: &str) -> Result<PrimeList, String> {
    let mut primes = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        let num = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| format!("`{t}` is not an integer"))
        };
        if let Some((lo, hi)) = item.split_once("..") {
            primes.extend(primes_between(num(lo)?, num(hi)?));
        } else {
            let p = num(item)?;
            PrimeField::new(p).map_err(|e| e.to_string())?;
            primes.push(p);
        }
    }
    if primes.is_empty() {
        return Err(format!("`{s}` contains no primes"));
    }
    primes.sort_unstable();
    primes.dedup();
    Ok(PrimeList(primes))
}

/// Failures that end the process with a nonzero status.
enum Failure {
    /// Bad input or a violated hypothesis: status 2.
    Usage(String),
    /// A cross-check disagreed: status 1.
    Mismatch(String),
}

impl From<LengthError> for Failure {
    fn from(e: LengthError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<FsigError> for Failure {
    fn from(e: FsigError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<BasisError> for Failure {
    fn from(e: BasisError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<SweepError> for Failure {
    fn from(e: SweepError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("write failed: {e}"))
    }
}

type Out<'a> = &'a mut dyn Write;

fn characteristic(field: CoeffField) -> Characteristic {
    match field.characteristic() {
        0 => Characteristic::Zero,
        p => Characteristic::Prime(p),
    }
}

#[derive(Serialize)]
struct BasisJson {
    route: &'static str,
    field: String,
    case: Option<&'static str>,
    generators: Vec<String>,
    lt_ideal: String,
}

fn case_name(case: BasisCase) -> &'static str {
    match case {
        BasisCase::PurePowers => "pure-powers",
        BasisCase::Truncated => "truncated",
        BasisCase::Swapped => "swapped",
    }
}

fn basis_in<F: Field>(field: &F, args: &BasisArgs) -> Result<BasisJson, Failure> {
    let spec = args.ideal.spec();
    let name = args.ideal.field.to_string();
    if args.oracle {
        let gens = [
            Poly::monomial(field, spec.m as u32, 0),
            Poly::monomial(field, 0, spec.n as u32),
            Poly::power_xy(field, spec.a, spec.b, spec.c, 1, 1, spec.k)
                .map_err(|e| Failure::Usage(e.to_string()))?,
        ];
        let gb = buchberger(&gens).map_err(|e| Failure::Usage(e.to_string()))?;
        return Ok(BasisJson {
            route: "buchberger",
            field: name,
            case: None,
            generators: gb.generators.iter().map(ToString::to_string).collect(),
            lt_ideal: gb.lt_ideal.to_string(),
        });
    }
    let closed = closed_groebner(field, &spec)?;
    Ok(BasisJson {
        route: "closed",
        field: name,
        case: Some(case_name(closed.case)),
        generators: closed
            .basis
            .generators
            .iter()
            .map(ToString::to_string)
            .collect(),
        lt_ideal: closed.basis.lt_ideal.to_string(),
    })
}

fn cmd_basis(args: &BasisArgs, out: Out) -> Result<(), Failure> {
    let result = match args.ideal.field {
        CoeffField::Rationals => basis_in(&Rationals, args)?,
        CoeffField::Prime(fp) => basis_in(&fp, args)?,
    };
    if args.ideal.json {
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&result).expect("strings serialize")
        )?;
        return Ok(());
    }
    writeln!(out, "route: {}", result.route)?;
    if let Some(case) = result.case {
        writeln!(out, "case: {case}")?;
    }
    writeln!(out, "generators:")?;
    for g in &result.generators {
        writeln!(out, "  {g}")?;
    }
    writeln!(out, "lt_ideal: {}", result.lt_ideal)?;
    Ok(())
}

fn formula_length(args: &IdealArgs) -> Result<LengthResult, LengthError> {
    let ch = characteristic(args.field);
    if args.is_simple() {
        let s = args.spec();
        length_simple(s.k, s.m, s.n, ch)
    } else {
        length_general(&args.spec(), ch)
    }
}

fn wlp_length(args: &IdealArgs) -> Result<LengthResult, LengthError> {
    if !args.is_simple() {
        return Err(LengthError::Domain(
            "the wlp route needs a = b = 0, c = 1".into(),
        ));
    }
    let s = args.spec();
    length_wlp(s.k, s.m, s.n, characteristic(args.field))
}

fn oracle_length(args: &IdealArgs) -> Result<LengthResult, LengthError> {
    match args.field {
        CoeffField::Rationals => length_oracle(&Rationals, &args.spec()),
        CoeffField::Prime(fp) => length_oracle(&fp, &args.spec()),
    }
}

#[derive(Serialize)]
struct LengthJson {
    route: String,
    value: u64,
    case: Option<String>,
    hypotheses: Vec<String>,
}

impl LengthJson {
    fn new(r: &LengthResult) -> Self {
        Self {
            route: r.route.to_string(),
            value: r.value,
            case: r.case_tag.map(|c| format!("{c:?}")),
            hypotheses: r.hypotheses.iter().map(|h| h.condition.clone()).collect(),
        }
    }
}

fn cmd_length(args: &LengthArgs, out: Out) -> Result<(), Failure> {
    let results = match args.route {
        LengthRoute::Formula => vec![formula_length(&args.ideal)?],
        LengthRoute::Wlp => vec![wlp_length(&args.ideal)?],
        LengthRoute::Oracle => vec![oracle_length(&args.ideal)?],
        LengthRoute::All => {
            let mut rs = vec![formula_length(&args.ideal)?];
            if args.ideal.is_simple() {
                rs.push(wlp_length(&args.ideal)?);
            }
            rs.push(oracle_length(&args.ideal)?);
            rs
        }
    };
    let agree = results.iter().all(|r| r.value == results[0].value);
    if args.ideal.json {
        let json: Vec<LengthJson> = results.iter().map(LengthJson::new).collect();
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&json).expect("strings serialize")
        )?;
    } else if results.len() == 1 {
        let r = &results[0];
        writeln!(out, "{}", r.value)?;
        match r.case_tag {
            Some(tag) => writeln!(out, "route: {} (case {tag:?})", r.route)?,
            None => writeln!(out, "route: {}", r.route)?,
        }
    } else {
        for r in &results {
            writeln!(out, "{}: {}", r.route, r.value)?;
        }
        if agree {
            writeln!(out, "length: {}", results[0].value)?;
        }
    }
    if !agree {
        return Err(Failure::Mismatch("routes disagree".into()));
    }
    Ok(())
}

fn cmd_fsig(args: &FsigArgs, out: Out) -> Result<(), Failure> {
    let value = if args.empirical {
        fsig_empirical(args.a, args.b, args.c, args.u, args.v, args.p, args.r)?
    } else if args.u != 1 || args.v != 1 {
        return Err(Failure::Usage(
            "no closed form for u, v > 1 at a fixed prime; pass --empirical".into(),
        ));
    } else {
        fsig_at_p(args.a, args.b, args.c, args.p, args.r)?
    };
    writeln!(out, "{value}")?;
    Ok(())
}

fn cmd_limit(args: &LimitArgs, out: Out) -> Result<(), Failure> {
    let spec = PairSpec {
        a: args.a,
        b: args.b,
        c: args.c,
        u: args.u,
        v: args.v,
    };
    let f: PiecewiseFn = spec.limit()?;
    match &args.t {
        Some(t) => writeln!(out, "{}", f.eval(t))?,
        None => writeln!(out, "{}", f.to_json_string())?,
    }
    Ok(())
}

fn cmd_nvol(args: &NvolArgs, out: Out) -> Result<(), Failure> {
    writeln!(out, "{}", nvol_simple(args.a, args.b, args.c, &args.t)?)?;
    if args.check_corollary {
        let holds = corollary_b_check(args.a, args.b, args.c, &args.t)?;
        writeln!(out, "corollary_b: {holds}")?;
        if !holds {
            return Err(Failure::Mismatch(
                "nvol/4 differs from the limit F-signature".into(),
            ));
        }
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs, out: Out) -> Result<(), Failure> {
    let spec = PairSpec {
        a: args.a,
        b: args.b,
        c: args.c,
        u: args.u,
        v: args.v,
    };
    let interval = match (&args.from, &args.to) {
        (None, None) => None,
        (from, to) => {
            let lambda = spec.lambda()?;
            Some((
                from.clone().unwrap_or_default(),
                to.clone().unwrap_or(lambda),
            ))
        }
    };
    let config = SweepConfig {
        spec,
        primes: args.primes.0.clone(),
        count: args.count,
        interval,
    };
    let rows = run_sweep(&config)?;
    let format = match args.format {
        Format::Json => OutputFormat::Json,
        Format::Csv => OutputFormat::Csv,
    };
    match &args.output {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Failure::Usage(format!("cannot create {}: {e}", path.display())))?;
            write_rows(BufWriter::new(file), &config, &rows, format)?;
        }
        None => write_rows(out, &config, &rows, format)?,
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, out: Out) -> Result<(), Failure> {
    let suite = match args.suite {
        SuiteArg::Basis => Suite::Basis,
        SuiteArg::Length => Suite::Length,
        SuiteArg::Fsig => Suite::Fsig,
        SuiteArg::All => Suite::All,
    };
    let config = VerifyConfig {
        suite,
        max_size: args.max_size,
        primes: args.primes.0.clone(),
        mutation: args.mutate,
    };
    let report = run_verify(&config);
    write!(out, "{report}")?;
    match report.first_failure() {
        None => Ok(()),
        Some((name, ce)) => Err(Failure::Mismatch(format!(
            "{name} failed at {}: expected {}, got {}",
            ce.params, ce.expected, ce.actual
        ))),
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("FSIG_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("FSIG_THREADS=`{raw}` is not a positive integer")))?;
    set_thread_count(threads).map_err(|e| Failure::Usage(format!("FSIG_THREADS: {e}")))
}

fn run(cli: &Cli, out: Out) -> Result<(), Failure> {
    configure_threads()?;
    match &cli.command {
        Command::Basis(a) => cmd_basis(a, out),
        Command::Length(a) => cmd_length(a, out),
        Command::Fsig(a) => cmd_fsig(a, out),
        Command::Limit(a) => cmd_limit(a, out),
        Command::Nvol(a) => cmd_nvol(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
        Command::Verify(a) => cmd_verify(a, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = run(&cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
