use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use sumrank::fqlin::DEFAULT_BUDGET;
use sumrank::report::{analyze, static_data, verify, CodeFile, Descriptor, CHECKS};
use sumrank::search::{search, SearchReport};
use sumrank::{Error, SweepOpts};

#[derive(Parser)]
#[command(name = "sumrank", version, about = "Construct, analyze and verify sum-rank-metric codes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a code from a family descriptor and write a code file.
    Construct(ConstructArgs),
    /// Weight distribution, minimum distance and MSRD/one-weight tests.
    Analyze(AnalyzeArgs),
    /// Run cross-checks between the metric and geometric pictures.
    Verify(VerifyArgs),
    /// Enumerate block shapes of two-dimensional one-weight MSRD codes.
    Search(SearchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct Sweep {
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Maximum number of projective points in any sweep.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
}

impl Sweep {
    fn opts(&self) -> SweepOpts {
        SweepOpts { workers: self.workers.max(1), budget: self.budget }
    }
}

#[derive(Args)]
struct ConstructArgs {
    /// Full descriptor as JSON, or @path to a JSON file. Flags override its fields.
    #[arg(long)]
    descriptor: Option<String>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    e: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    sigma_power: Option<u32>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Modulus of F_{q^m} over F_p, lowest degree first, e.g. 1,1,0,0,1.
    #[arg(long)]
    modulus: Option<String>,
    /// Block lengths for the random family, e.g. 2,2,1.
    #[arg(long)]
    profile: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Basis of U for simplex as JSON, or @path.
    #[arg(long = "U-basis", alias = "u-basis")]
    u_basis: Option<String>,
    /// Singer polynomial c_0..c_k as JSON, or @path.
    #[arg(long)]
    poly: Option<String>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Code file, or - for stdin.
    code: String,
    #[command(flatten)]
    sweep: Sweep,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    code: String,
    /// Comma-separated subset of: duality, geometry-msrd, ext-formula, bonisoli, line-cover.
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<String>>,
    #[command(flatten)]
    sweep: Sweep,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    m: u32,
    /// Number of blocks.
    #[arg(long)]
    t: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Report only this shape, e.g. 3,1,1.
    #[arg(long)]
    profile: Option<String>,
    /// Cap on the number of candidate shapes.
    #[arg(long, default_value_t = 1 << 20)]
    cap: u128,
    #[command(flatten)]
    sweep: Sweep,
    #[command(flatten)]
    output: Output,
}

enum Fail {
    Invalid(String, String),
    Budget(String),
    Io(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::TooLarge { .. } => Fail::Budget(e.to_string()),
            _ => {
                let kind = format!("{e:?}");
                let kind = kind.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string();
                Fail::Invalid(kind, e.to_string())
            }
        }
    }
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail::Invalid("Usage".into(), msg.into())
}

fn read_arg(s: &str) -> Result<String, Fail> {
    match s.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| Fail::Io(format!("{path}: {e}"))),
        None => Ok(s.to_string()),
    }
}

fn read_input(path: &str) -> Result<String, Fail> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Fail::Io(e.to_string()))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Fail::Io(format!("{path}: {e}")))
}

fn json_arg<T: serde::de::DeserializeOwned>(s: &str, what: &str) -> Result<T, Fail> {
    serde_json::from_str(&read_arg(s)?).map_err(|e| invalid(format!("{what}: {e}")))
}

fn list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Fail> {
    s.split(',').map(|x| x.trim().parse().map_err(|_| invalid(format!("{what}: cannot parse {x:?}")))).collect()
}

fn emit(out: &Output, text: &str) -> Result<(), Fail> {
    match &out.out {
        Some(p) => fs::write(p, text).map_err(|e| Fail::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut o = io::stdout().lock();
            o.write_all(text.as_bytes()).map_err(|e| Fail::Io(e.to_string()))
        }
    }
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn joined<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn load_code(path: &str) -> Result<sumrank::SumRankCode, Fail> {
    Ok(CodeFile::parse(&read_input(path)?)?.to_code()?)
}

fn construct(a: ConstructArgs) -> Result<u8, Fail> {
    if a.output.format == Some(Format::Csv) {
        return Err(invalid("construct writes JSON only"));
    }
    let mut d = match &a.descriptor {
        Some(s) => json_arg::<Descriptor>(s, "descriptor")?,
        None => Descriptor::default(),
    };
    if let Some(v) = a.family {
        d.family = v;
    }
    if let Some(v) = a.q {
        d.q = v;
    }
    if let Some(v) = a.m {
        d.m = v;
    }
    d.e = a.e.or(d.e);
    d.k = a.k.or(d.k);
    d.sigma_power = a.sigma_power.or(d.sigma_power);
    d.t = a.t.or(d.t);
    d.n = a.n.or(d.n);
    d.seed = a.seed.or(d.seed);
    if let Some(s) = &a.modulus {
        d.modulus = Some(list(s, "modulus")?);
    }
    if let Some(s) = &a.profile {
        d.profile = Some(list(s, "profile")?);
    }
    if let Some(s) = &a.u_basis {
        d.u_basis = Some(json_arg(s, "U basis")?);
    }
    if let Some(s) = &a.poly {
        d.poly = Some(json_arg(s, "poly")?);
    }
    if d.family.is_empty() || d.q == 0 || d.m == 0 {
        return Err(invalid("family, q and m are required"));
    }
    let built = d.build()?;
    emit(&a.output, &pretty(&CodeFile::new(&built.code, Some(d), built.lift)))?;
    Ok(0)
}

fn analyze_cmd(a: AnalyzeArgs) -> Result<u8, Fail> {
    let c = load_code(&a.code)?;
    let r = match analyze(&c, a.sweep.opts()) {
        Ok(r) => r,
        Err(e @ Error::TooLarge { .. }) => {
            emit(&a.output, &pretty(&json!({ "status": "budget_exceeded", "static": static_data(&c) })))?;
            return Err(e.into());
        }
        Err(e) => return Err(e.into()),
    };
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => pretty(&r),
        Format::Csv => csv_text(
            &["weight", "rank_list", "projective_codewords", "codewords"],
            r.weight_distribution
                .by_rank_list
                .iter()
                .map(|x| {
                    vec![
                        x.rank_list.iter().sum::<usize>().to_string(),
                        joined(&x.rank_list),
                        x.count.to_string(),
                        (x.count * r.weight_distribution.scalars).to_string(),
                    ]
                })
                .collect(),
        ),
    };
    emit(&a.output, &text)?;
    Ok(0)
}

fn verify_cmd(a: VerifyArgs) -> Result<u8, Fail> {
    let names: Vec<String> = a.checks.unwrap_or_else(|| CHECKS.iter().map(|s| s.to_string()).collect());
    if let Some(bad) = names.iter().find(|n| !CHECKS.contains(&n.as_str())) {
        return Err(invalid(format!("unknown check {bad:?}; expected one of {}", CHECKS.join(", "))));
    }
    let c = load_code(&a.code)?;
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let r = verify(&c, &names, a.sweep.opts())?;
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => pretty(&r),
        Format::Csv => csv_text(
            &["check", "applicable", "passed"],
            r.checks.iter().map(|x| vec![x.check.clone(), x.applicable.to_string(), x.passed.to_string()]).collect(),
        ),
    };
    emit(&a.output, &text)?;
    Ok(if r.passed() { 0 } else { 1 })
}

fn search_csv(r: &SearchReport) -> String {
    csv_text(
        &["q", "m", "t", "profile", "admissible", "witness", "witness_verified", "reasons", "scope"],
        r.rows
            .iter()
            .map(|x| {
                vec![
                    x.q.to_string(),
                    x.m.to_string(),
                    x.t.to_string(),
                    joined(&x.profile),
                    x.admissible.to_string(),
                    x.witness.clone().unwrap_or_default(),
                    x.witness_verified.map(|b| b.to_string()).unwrap_or_default(),
                    x.reasons.join("; "),
                    r.label.clone(),
                ]
            })
            .collect(),
    )
}

fn search_cmd(a: SearchArgs) -> Result<u8, Fail> {
    if a.k != 2 {
        return Err(Fail::from(Error::WrongDimension { expected: 2, got: a.k }));
    }
    let mut r = search(a.q, a.m, a.t, a.cap, a.sweep.opts())?;
    if let Some(p) = &a.profile {
        let mut p: Vec<usize> = list(p, "profile")?;
        p.sort_unstable_by(|x, y| y.cmp(x));
        r.rows.retain(|x| x.profile == p || x.profile.is_empty());
    }
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => search_csv(&r),
        Format::Json => pretty(&r),
    };
    emit(&a.output, &text)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Construct(a) => construct(a),
        Cmd::Analyze(a) => analyze_cmd(a),
        Cmd::Verify(a) => verify_cmd(a),
        Cmd::Search(a) => search_cmd(a),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let (code, kind, msg) = match f {
                Fail::Invalid(kind, msg) => (2, kind, msg),
                Fail::Io(msg) => (2, "Io".to_string(), msg),
                Fail::Budget(msg) => (3, "TooLarge".to_string(), msg),
            };
            eprintln!("{}", json!({ "error": kind, "message": msg, "exit_code": code }));
            ExitCode::from(code)
        }
    }
}
