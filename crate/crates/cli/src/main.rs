use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ehs_core::harness::selftest::{run_selftest, SelftestOptions};
use ehs_core::harness::{run_suite, Grid, Point, SamplerConfig, SuiteOptions, Target, VerificationReport, LINK_TOL};
use ehs_core::inversions::KindTag;
use ehs_core::summations::{BaileyPair, Extent, IdentityId};
use ehs_core::{iterate_box, Error, MultiIndex};

#[derive(Parser, Debug)]
#[command(name = "ehs", version, about = "Randomized checks of elliptic matrix inversions and summation identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the identity, inversion and Bailey pair catalog.
    List,
    /// Check one identity on random constrained parameters.
    Verify(VerifyArgs),
    /// Check one inversion pair on random sequences or progressions.
    Invert(InvertArgs),
    /// Run the acceptance checks.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug)]
struct Sampling {
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Upper bound on |p|.
    #[arg(long = "p-max", default_value_t = 0.5)]
    p_max: f64,
    /// Pin p = 0.
    #[arg(long = "p-zero")]
    p_zero: bool,
    /// Also write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Record wall time in the report; breaks byte-identical reruns.
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("extent").required(true).args(["n", "big_n"])))]
struct VerifyArgs {
    #[arg(long)]
    identity: String,
    #[arg(long)]
    r: usize,
    /// Box corner, comma separated.
    #[arg(long)]
    n: Option<String>,
    /// Simplex size.
    #[arg(long = "N")]
    big_n: Option<i64>,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[command(flatten)]
    sampling: Sampling,
}

#[derive(Args, Debug)]
struct InvertArgs {
    #[arg(long)]
    kind: String,
    /// Progression step of the geometric kinds.
    #[arg(long, default_value_t = 1)]
    m: i64,
    #[arg(long)]
    r: usize,
    /// Row, comma separated.
    #[arg(long)]
    n: String,
    /// Column, comma separated; every l ≤ n when omitted.
    #[arg(long)]
    l: Option<String>,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Bound on the normalization link of geometric kinds.
    #[arg(long = "link-tol", default_value_t = LINK_TOL)]
    link_tol: f64,
    #[command(flatten)]
    sampling: Sampling,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    /// Fewer trials and smaller grids.
    #[arg(long)]
    quick: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: Option<PathBuf>,
}

type Outcome = Result<bool, Error>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::List => {
            print!("{}", catalog());
            Ok(true)
        }
        Command::Verify(args) => verify(args),
        Command::Invert(args) => invert(args),
        Command::Selftest(args) => selftest(args),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("ehs: {e}");
            ExitCode::from(2)
        }
    }
}

fn catalog() -> String {
    let mut s = String::from("identities\n");
    for id in IdentityId::ALL {
        s.push_str(&format!(
            "  {:<24} {:<13} {:<40} {:<40} {}\n",
            id.name(),
            id.domain_kind().name(),
            schema(id),
            id.constraint().unwrap_or("-"),
            id.anchor()
        ));
    }
    s.push_str("inversions\n");
    for k in KindTag::ALL {
        s.push_str(&format!("  {:<24} {}\n", k.name(), k.description()));
    }
    s.push_str("bailey pairs\n");
    for b in BaileyPair::ALL {
        s.push_str(&format!(
            "  {:<24} {:<32} {}\n",
            b.name(),
            b.kernel(),
            b.constraint().unwrap_or("-")
        ));
    }
    s
}

/// Parameter names with indexed families written against `r`.
fn schema(id: IdentityId) -> String {
    let r = if id.fixed_dim().is_some() { 1 } else { 3 };
    let mut out: Vec<String> = Vec::new();
    let names = id.schema(r);
    let mut i = 0;
    while i < names.len() {
        let name = &names[i];
        let prefix = name.trim_end_matches(|c: char| c.is_ascii_digit());
        if prefix.len() == name.len() || id.fixed_dim().is_some() {
            out.push(name.clone());
            i += 1;
            continue;
        }
        let run = names[i..].iter().take_while(|v| v.trim_end_matches(|c: char| c.is_ascii_digit()) == prefix).count();
        let last = match run as i64 - r as i64 {
            0 => "r".to_string(),
            d => format!("(r+{d})"),
        };
        out.push(format!("{prefix}1..{prefix}{last}"));
        i += run;
    }
    out.join(",")
}

fn index(csv: &str, r: usize, flag: &str) -> Result<MultiIndex, Error> {
    let entries = csv
        .split(',')
        .map(|v| v.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| Error::Usage(format!("--{flag} must be comma-separated integers, got `{csv}`")))?;
    if entries.len() != r {
        return Err(Error::Usage(format!("--{flag} has {} entries but --r is {r}", entries.len())));
    }
    if entries.iter().any(|&v| v < 0) {
        return Err(Error::Usage(format!("--{flag} entries must be non-negative")));
    }
    Ok(MultiIndex::new(entries))
}

fn options(s: &Sampling, tol: f64) -> Result<SuiteOptions, Error> {
    if !(tol >= 0.0) {
        return Err(Error::Usage(format!("--tol must be non-negative, got {tol}")));
    }
    let mut cfg = SamplerConfig::new(s.seed).with_p_max(s.p_max)?;
    cfg.p_zero = s.p_zero;
    let mut opts = SuiteOptions::new(s.trials, tol, cfg);
    opts.command = std::env::args().collect();
    opts.timing = s.timing;
    Ok(opts)
}

fn finish(report: &VerificationReport, json: Option<&PathBuf>) -> Outcome {
    let s = &report.summary;
    let worst = s.max_rel_error.map_or("-".to_string(), |v| format!("{v:e}"));
    println!(
        "{}: {} pass, {} fail, {} degenerate, {} resampled draws, max rel error {worst}",
        report.selection.join(","),
        s.pass_count,
        s.fail_count,
        s.degenerate_count,
        s.resampled_draws
    );
    for t in report.trials.iter().filter(|t| t.status == ehs_core::Status::Fail) {
        println!(
            "  fail: trial {} rel_error {:e} condition {:e}{}",
            t.trial_index,
            t.rel_error,
            t.condition,
            t.error.as_ref().map_or(String::new(), |e| format!(" ({e})"))
        );
    }
    write_json(json, &report.to_json())?;
    Ok(s.fail_count == 0)
}

fn write_json(path: Option<&PathBuf>, text: &str) -> Result<(), Error> {
    if let Some(path) = path {
        std::fs::write(path, text).map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Outcome {
    let id = IdentityId::parse(&args.identity)?;
    let extent = match (&args.n, args.big_n) {
        (Some(n), None) => Extent::Box(index(n, args.r, "n")?),
        (None, Some(big)) => Extent::Simplex(big),
        _ => return Err(Error::Usage("give exactly one of --n and --N".into())),
    };
    let grid = Grid::Point(Point {
        r: args.r,
        extent,
        columns: vec![],
    });
    let opts = options(&args.sampling, args.tol)?;
    let report = run_suite(&[Target::Identity(id)], &grid, &opts)?;
    finish(&report, args.sampling.json.as_ref())
}

fn invert(args: InvertArgs) -> Outcome {
    let kind = KindTag::parse(&args.kind)?;
    let n = index(&args.n, args.r, "n")?;
    let columns = match &args.l {
        Some(l) => vec![index(l, args.r, "l")?],
        None => iterate_box(&n).collect(),
    };
    let grid = Grid::Point(Point {
        r: args.r,
        extent: Extent::Box(n),
        columns,
    });
    let mut opts = options(&args.sampling, args.tol)?;
    if !(args.link_tol >= 0.0) {
        return Err(Error::Usage(format!("--link-tol must be non-negative, got {}", args.link_tol)));
    }
    opts.link_tol = args.link_tol;
    let report = run_suite(&[Target::Inversion { kind, m: args.m }], &grid, &opts)?;
    finish(&report, args.sampling.json.as_ref())
}

fn selftest(args: SelftestArgs) -> Outcome {
    let report = run_selftest(SelftestOptions {
        seed: args.seed,
        quick: args.quick,
    })?;
    print!("{}", report.text());
    write_json(args.json.as_ref(), &report.to_json())?;
    Ok(report.passed())
}
