//! Command-line front end: every campaign and primitive as a subcommand.
//!
//! Exit codes: 0 success, 2 validation or hypothesis failure, 3 scale
//! refusal, 64 malformed invocation, 1 internal error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use burgess::congruence::{self, ResidueSet};
use burgess::dirichlet::Character;
use burgess::error::Error;
use burgess::harness::{self, Campaign, ExperimentConfig};
use burgess::report::{self, Format};
use burgess::sums::{self, UnionOfIntervals};

#[derive(Parser)]
#[command(
    name = "burgess",
    about = "Character sums over intervals and unions of intervals: exact counts, reference bounds, verification campaigns",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate or classify a Dirichlet character.
    Char(CharArgs),
    /// Interval or union character sum.
    Sum(SumArgs),
    /// Count congruence solutions N(l, S, n).
    CountN(CountArgs),
    /// Proposition campaign: counts, bound, and the inequality chain.
    VerifyProp(CampaignArgs),
    /// Theorem campaign: mean-value sums against the reference bounds.
    VerifyTheorem(CampaignArgs),
    /// Corollary campaign: union sums against decomposition certificates.
    VerifyCorollary(CampaignArgs),
    /// Reduction campaign: tuple counts against the congruence count.
    VerifyReduction(CampaignArgs),
    /// Sharpness sweep over consecutive sets S = {1..m}.
    Extremal(ExtremalArgs),
}

#[derive(Args)]
struct CharSpec {
    /// Modulus q.
    #[arg(long = "q")]
    q: u64,
    /// Use the quadratic character (Jacobi symbol); q must necessarily be odd.
    #[arg(long, conflicts_with = "exponents")]
    quadratic: bool,
    /// Generator exponents for a table-mode character, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    exponents: Option<Vec<i64>>,
}

impl CharSpec {
    fn build(&self) -> Result<Character, Error> {
        if self.quadratic {
            Character::quadratic(self.q)
        } else if let Some(exps) = &self.exponents {
            Character::from_exponents(self.q, exps)
        } else {
            Character::principal(self.q)
        }
    }
}

#[derive(Args)]
struct CharArgs {
    #[command(flatten)]
    spec: CharSpec,
    /// Evaluate the character at this integer.
    #[arg(long)]
    eval: Option<i64>,
    /// Print order, conductor, primitivity, and principality.
    #[arg(long)]
    classify: bool,
}

#[derive(Args)]
struct SumArgs {
    #[command(flatten)]
    spec: CharSpec,
    /// Interval start N; the sum runs over N < n <= N + len.
    #[arg(long, allow_hyphen_values = true)]
    from: Option<i64>,
    /// Interval length.
    #[arg(long)]
    len: Option<u64>,
    /// Union of intervals as start:length pairs, e.g. 0:5,10:3.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["from", "len"])]
    intervals: Option<Vec<String>>,
}

#[derive(Args)]
struct CountArgs {
    /// The prime modulus l.
    #[arg(long = "l")]
    ell: u64,
    /// Residues, comma separated.
    #[arg(long, value_delimiter = ',')]
    set: Option<Vec<u64>>,
    /// File with one residue per line.
    #[arg(long, conflicts_with = "set")]
    set_file: Option<PathBuf>,
    /// Congruence size n.
    #[arg(long = "n")]
    n: u64,
    /// Force the brute-force oracle instead of the histogram algorithm.
    #[arg(long)]
    oracle: bool,
}

#[derive(Args)]
struct CampaignArgs {
    /// JSON config mirroring the ExperimentConfig fields; defaults to the
    /// campaign's canonical grid.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report output path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_enum, default_value = "csv")]
    format: CliFormat,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config's modulus list.
    #[arg(long = "q", value_delimiter = ',')]
    q_list: Option<Vec<u64>>,
    /// Override the config's prime list (proposition campaign).
    #[arg(long = "l", value_delimiter = ',')]
    ell_list: Option<Vec<u64>>,
    /// H rule exponent: H = ceil(H-mul * q^H-pow) + H-add.
    #[arg(long = "H-pow")]
    h_pow: Option<f64>,
    /// H rule multiplier.
    #[arg(long = "H-mul")]
    h_mul: Option<f64>,
    /// H rule offset.
    #[arg(long = "H-add")]
    h_add: Option<i64>,
    /// Fixed J instead of floor(q / (2H)).
    #[arg(long = "J")]
    j_fixed: Option<u64>,
    /// Override r.
    #[arg(long)]
    r: Option<u32>,
    /// Override epsilon in the bound formulas.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Where to write corollary certificates (JSON).
    #[arg(long)]
    certs_out: Option<PathBuf>,
    /// Log one line per row to stderr.
    #[arg(long)]
    verbose: bool,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum CliFormat {
    Csv,
    Json,
}

impl From<CliFormat> for Format {
    fn from(f: CliFormat) -> Format {
        match f {
            CliFormat::Csv => Format::Csv,
            CliFormat::Json => Format::Json,
        }
    }
}

#[derive(Args)]
struct ExtremalArgs {
    /// The prime modulus l.
    #[arg(long = "l")]
    ell: u64,
    /// n:m pairs, e.g. 5:100,10:50,20:25.
    #[arg(long, value_delimiter = ',', default_value = "5:100,10:50,20:25")]
    pairs: Vec<String>,
    /// Check with the brute-force oracle as well.
    #[arg(long)]
    oracle: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version print to stdout and succeed
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(64);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Char(args) => cmd_char(args),
        Command::Sum(args) => cmd_sum(args),
        Command::CountN(args) => cmd_count(args),
        Command::VerifyProp(args) => cmd_campaign(Campaign::Proposition, args),
        Command::VerifyTheorem(args) => cmd_campaign(Campaign::Theorem, args),
        Command::VerifyCorollary(args) => cmd_campaign(Campaign::Corollary, args),
        Command::VerifyReduction(args) => cmd_campaign(Campaign::Reduction, args),
        Command::Extremal(args) => cmd_extremal(args),
    }
}

fn format_complex(z: num_complex::Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{}{}i", z.re, if z.im < 0.0 { "-" } else { "+" }, z.im.abs())
    }
}

fn cmd_char(args: CharArgs) -> Result<ExitCode, Error> {
    let chi = args.spec.build()?;
    if let Some(n) = args.eval {
        println!("{}", format_complex(chi.eval_complex(n)));
    }
    if args.classify || args.eval.is_none() {
        println!("modulus: {}", chi.modulus());
        println!("order: {}", chi.order());
        println!("conductor: {}", chi.conductor());
        println!("primitive: {}", chi.is_primitive());
        println!("principal: {}", chi.is_principal());
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_interval(spec: &str) -> Result<(u64, u64), Error> {
    let (start, len) = spec.split_once(':').ok_or_else(|| Error::InvalidInput {
        what: "interval",
        detail: format!("expected start:length, got {spec}"),
    })?;
    let parse = |s: &str| {
        s.trim().parse::<u64>().map_err(|_| Error::InvalidInput {
            what: "interval",
            detail: format!("not a number: {s}"),
        })
    };
    Ok((parse(start)?, parse(len)?))
}

fn cmd_sum(args: SumArgs) -> Result<ExitCode, Error> {
    let chi = args.spec.build()?;
    let value = if let Some(specs) = &args.intervals {
        let intervals = specs
            .iter()
            .map(|s| parse_interval(s))
            .collect::<Result<Vec<_>, _>>()?;
        let a = UnionOfIntervals::new(chi.modulus(), intervals)?;
        sums::union_sum(&chi, &a)
    } else {
        let from = args.from.unwrap_or(0);
        let len = args.len.ok_or(Error::InvalidInput {
            what: "sum",
            detail: "need --len (with --from) or --intervals".into(),
        })?;
        sums::interval_sum(&chi, from, len)
    };
    println!("{}", format_complex(value));
    Ok(ExitCode::SUCCESS)
}

fn read_set_file(path: &Path) -> Result<Vec<u64>, Error> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        out.push(line.parse::<u64>().map_err(|_| Error::InvalidInput {
            what: "set file",
            detail: format!("not a residue: {line}"),
        })?);
    }
    Ok(out)
}

fn cmd_count(args: CountArgs) -> Result<ExitCode, Error> {
    let elements = match (&args.set, &args.set_file) {
        (Some(list), None) => list.clone(),
        (None, Some(path)) => read_set_file(path)?,
        (None, None) => vec![],
        (Some(_), Some(_)) => unreachable!("clap conflicts"),
    };
    let mut sorted = elements.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidInput {
            what: "residue set",
            detail: "duplicate residues in --set".into(),
        });
    }
    let set = ResidueSet::new(args.ell, elements)?;
    let count = if args.oracle {
        congruence::count_bruteforce(&set, args.n)?
    } else {
        congruence::count_fast(&set, args.n)?
    };
    println!("{}", count.count);
    Ok(ExitCode::SUCCESS)
}

fn load_config(campaign: Campaign, args: &CampaignArgs) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
                path: path.clone(),
                detail: e.to_string(),
            })?;
            let cfg: ExperimentConfig =
                serde_json::from_str(&text).map_err(|e| Error::Config {
                    path: path.clone(),
                    detail: e.to_string(),
                })?;
            cfg
        }
        None => ExperimentConfig::default_for(campaign),
    };
    cfg.campaign = campaign;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(q_list) = &args.q_list {
        cfg.q_list = q_list.clone();
    }
    if let Some(ell_list) = &args.ell_list {
        cfg.ell_list = ell_list.clone();
    }
    if let Some(h_pow) = args.h_pow {
        cfg.h_pow = h_pow;
    }
    if let Some(h_mul) = args.h_mul {
        cfg.h_mul = h_mul;
    }
    if let Some(h_add) = args.h_add {
        cfg.h_add = h_add;
    }
    if args.j_fixed.is_some() {
        cfg.j_fixed = args.j_fixed;
    }
    if let Some(r) = args.r {
        cfg.r = r;
    }
    if let Some(epsilon) = args.epsilon {
        cfg.epsilon = epsilon;
    }
    Ok(cfg)
}

fn cmd_campaign(campaign: Campaign, args: CampaignArgs) -> Result<ExitCode, Error> {
    let cfg = match load_config(campaign, &args) {
        Ok(cfg) => cfg,
        Err(Error::Config { path, detail }) => {
            // malformed invocation: bad or missing config file
            eprintln!("error: config {}: {detail}", path.display());
            eprintln!("usage: burgess verify-{} --config <json> [--out <path>] [--format csv|json] [--seed <n>]",
                campaign.name());
            return Ok(ExitCode::from(64));
        }
        Err(e) => return Err(e),
    };
    let started = std::time::Instant::now();
    let (rows, certs) = harness::run_campaign(&cfg)?;
    if args.verbose {
        for row in &rows {
            eprintln!(
                "{} q={} ell={} lhs={} pass={} {}",
                row.campaign,
                row.q.map_or("-".into(), |v| v.to_string()),
                row.ell.map_or("-".into(), |v| v.to_string()),
                row.lhs.map_or("-".into(), |v| v.to_string()),
                row.pass,
                row.reason
            );
        }
        eprintln!(
            "{} rows in {} ms",
            rows.len(),
            started.elapsed().as_millis()
        );
    }
    let format: Format = args.format.into();
    match &args.out {
        Some(path) => report::write_reports(&rows, path, format)?,
        None => match format {
            Format::Csv => print!("{}", report::to_csv(&rows)),
            Format::Json => print!("{}", report::to_json(&rows)),
        },
    }
    if let Some(path) = &args.certs_out {
        report::write_certificates(&certs, path)?;
    }
    let skipped = rows.iter().filter(|r| r.reason.starts_with("skipped:")).count();
    let failed = rows
        .iter()
        .filter(|r| !r.pass && !r.reason.starts_with("skipped:"))
        .count();
    eprintln!(
        "{}: {} rows, {} skipped, {} failed",
        campaign.name(),
        rows.len(),
        skipped,
        failed
    );
    if failed > 0 {
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_extremal(args: ExtremalArgs) -> Result<ExitCode, Error> {
    println!("{:>6} {:>6} {:>14} {:>14} {:>8}", "n", "m", "N", "n^2*m", "ratio");
    for pair in &args.pairs {
        let (n, m) = pair.split_once(':').ok_or_else(|| Error::InvalidInput {
            what: "extremal pairs",
            detail: format!("expected n:m, got {pair}"),
        })?;
        let n: u64 = n.trim().parse().map_err(|_| Error::InvalidInput {
            what: "extremal pairs",
            detail: format!("not a number: {n}"),
        })?;
        let m: u64 = m.trim().parse().map_err(|_| Error::InvalidInput {
            what: "extremal pairs",
            detail: format!("not a number: {m}"),
        })?;
        let set = ResidueSet::consecutive(args.ell, m)?;
        let count = if args.oracle {
            congruence::count_bruteforce(&set, n)?
        } else {
            congruence::count_fast(&set, n)?
        };
        let scale = (n * n * m) as f64;
        println!(
            "{:>6} {:>6} {:>14} {:>14} {:>8.4}",
            n,
            m,
            count.count,
            n * n * m,
            count.count as f64 / scale
        );
    }
    Ok(ExitCode::SUCCESS)
}
