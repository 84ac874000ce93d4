use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bcq::constructions::CaseKind;
use bcq::graph_core::Format;
use bcq::verify::{
    run_survey, verify, Family, SurveySpec, VerificationReport, VerifyError, VerifyOptions,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

const ENV_LIMIT: &str = "BCQ_ORACLE_LIMIT";

const EXIT_USAGE: u8 = 2;
const EXIT_FINDING: u8 = 3;
const EXIT_LIMIT: u8 = 4;

/// Build, verify and survey cubic graphs of bialternating cycle quotient type.
#[derive(Parser, Debug)]
#[command(name = "bcq", version)]
struct Cli {
    /// TOML file whose keys mirror the long flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Seed for the random relabelling in oracle self-checks
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Largest graph the brute-force oracle accepts (also read from BCQ_ORACLE_LIMIT)
    #[arg(long, global = true)]
    vertex_limit: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a graph and export it
    Construct {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum)]
        format: Option<OutFormat>,
        /// Output file (stdout when absent)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the check battery and print a JSON report
    Verify {
        #[command(flatten)]
        target: Target,
        /// Also compute the full automorphism group
        #[arg(long)]
        oracle: bool,
    },
    /// Check every valid tuple in a range; writes JSON lines
    Survey(SurveyArgs),
    /// Human-readable summary of the check battery, oracle included
    Report {
        #[command(flatten)]
        target: Target,
    },
}

#[derive(Args, Debug)]
struct Target {
    /// xb, xb1, xb2, mobius, prism or htg
    family: String,
    /// Comma-separated parameters, e.g. 5,12,1,8,7
    params: String,
}

#[derive(Args, Debug, Default)]
struct SurveyArgs {
    #[arg(long)]
    m_min: Option<u32>,
    #[arg(long)]
    m_max: Option<u32>,
    /// Ring lengths, comma separated
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<u32>>,
    /// Keep only these classification cases (e.g. OddOdd,Invalid)
    #[arg(long, value_delimiter = ',')]
    case: Option<Vec<CaseKind>>,
    /// Skip the brute-force oracle
    #[arg(long)]
    no_oracle: bool,
    /// Run the oracle only up to this many vertices
    #[arg(long)]
    oracle_max_order: Option<usize>,
    /// Refuse surveys with more tuples than this
    #[arg(long)]
    max_tuples: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum OutFormat {
    Graph6,
    Dot,
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Graph6 => Format::Graph6,
            OutFormat::Dot => Format::Dot,
            OutFormat::Json => Format::Json,
        }
    }
}

/// Optional config file; every key mirrors a flag.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct Config {
    seed: Option<u64>,
    vertex_limit: Option<usize>,
    format: Option<OutFormat>,
    oracle: Option<bool>,
    m_min: Option<u32>,
    m_max: Option<u32>,
    n: Option<Vec<u32>>,
    case: Option<Vec<String>>,
    oracle_max_order: Option<usize>,
    max_tuples: Option<usize>,
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        Failure {
            code: if e.is_resource_limit() {
                EXIT_LIMIT
            } else {
                EXIT_USAGE
            },
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<Config, Failure> {
    let Some(path) = path else {
        return Ok(Config::default());
    };
    let text =
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn vertex_limit(cli: Option<usize>, config: Option<usize>) -> Result<usize, Failure> {
    if let Some(v) = cli.or(config) {
        return Ok(v);
    }
    match std::env::var(ENV_LIMIT) {
        Ok(s) => s.trim().parse().map_err(|_| {
            Failure::usage(format!("{ENV_LIMIT} must be a positive integer, got {s:?}"))
        }),
        Err(_) => Ok(bcq::aut_search::DEFAULT_VERTEX_LIMIT),
    }
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, bytes).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::usage(e.to_string()))
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let config = load_config(cli.config.as_deref())?;
    let limit = vertex_limit(cli.vertex_limit, config.vertex_limit)?;
    let seed = cli.seed.or(config.seed).unwrap_or(0);
    match cli.command {
        Command::Construct {
            target,
            format,
            out,
        } => {
            let family = Family::parse(&target.family, &target.params)?;
            let g = family.build().map_err(VerifyError::from)?;
            let format = format.or(config.format).unwrap_or(OutFormat::Json);
            let mut bytes = g.export(format.into());
            if !bytes.ends_with(b"\n") {
                bytes.push(b'\n');
            }
            write_output(out.or(config.out).as_deref(), &bytes)?;
            Ok(0)
        }
        Command::Verify { target, oracle } => {
            let family = Family::parse(&target.family, &target.params)?;
            let opts = VerifyOptions {
                oracle: oracle || config.oracle.unwrap_or(false),
                vertex_limit: limit,
                seed,
                ..VerifyOptions::default()
            };
            let report = verify(&family, &opts)?;
            let json = serde_json::to_string_pretty(&report).expect("report serializes");
            println!("{json}");
            Ok(if report.has_findings() {
                EXIT_FINDING
            } else {
                0
            })
        }
        Command::Report { target } => {
            let family = Family::parse(&target.family, &target.params)?;
            let opts = VerifyOptions {
                oracle: true,
                vertex_limit: limit,
                seed,
                ..VerifyOptions::default()
            };
            let report = verify(&family, &opts)?;
            print!("{}", render(&report));
            Ok(if report.has_findings() {
                EXIT_FINDING
            } else {
                0
            })
        }
        Command::Survey(args) => survey(args, config, limit),
    }
}

fn survey(args: SurveyArgs, config: Config, limit: usize) -> Result<u8, Failure> {
    let defaults = SurveySpec::default();
    let cases = match (args.case, config.case) {
        (Some(c), _) => Some(c),
        (None, Some(names)) => Some(
            names
                .iter()
                .map(|s| s.parse::<CaseKind>().map_err(Failure::usage))
                .collect::<Result<_, _>>()?,
        ),
        (None, None) => None,
    };
    let spec = SurveySpec {
        m_min: args.m_min.or(config.m_min).unwrap_or(defaults.m_min),
        m_max: args.m_max.or(config.m_max).unwrap_or(defaults.m_max),
        n_values: args.n.or(config.n).unwrap_or(defaults.n_values),
        cases,
        oracle: !args.no_oracle && config.oracle.unwrap_or(true),
        oracle_max_order: args
            .oracle_max_order
            .or(config.oracle_max_order)
            .unwrap_or(defaults.oracle_max_order),
        vertex_limit: limit,
        max_tuples: args
            .max_tuples
            .or(config.max_tuples)
            .unwrap_or(defaults.max_tuples),
    };
    if let Some(bad) = spec.n_values.iter().find(|&&n| n == 0 || n % 4 != 0) {
        return Err(Failure::usage(format!(
            "n values must be positive multiples of 4, got {bad}"
        )));
    }
    let records = run_survey(&spec)?;
    let mut bytes = Vec::new();
    for r in &records {
        serde_json::to_writer(&mut bytes, r).expect("record serializes");
        bytes.push(b'\n');
    }
    write_output(args.out.or(config.out).as_deref(), &bytes)?;
    let disagreements = records.iter().filter(|r| !r.agree).count();
    eprintln!("{} tuples, {disagreements} disagreement(s)", records.len());
    Ok(if disagreements > 0 { EXIT_FINDING } else { 0 })
}

fn render(r: &VerificationReport) -> String {
    let mut s = String::new();
    let mut line = |k: &str, v: String| s.push_str(&format!("{k:<24}{v}\n"));
    line("graph", format!("{} ({} vertices)", r.label, r.order));
    if let Some(c) = &r.theorem_case {
        line(
            "classification",
            format!("{} ({})", c.case.as_str(), c.detail),
        );
    }
    line("girth", r.girth.to_string());
    if let Some(q) = &r.quotient_type {
        line("quotient type", format!("{:?}", q.kind));
    }
    for g in &r.generators {
        let status = match &g.violation {
            None => "automorphism".to_string(),
            Some(e) => format!("fails at {e}"),
        };
        line(&format!("generator {}", g.label), status);
    }
    if let Some(fg) = &r.formula_group {
        line(
            "formula group",
            format!(
                "order {}, transitive {}, regular {}, preserves rings {}",
                fg.order, fg.transitive, fg.regular, fg.preserves_c
            ),
        );
    }
    if let Some(inv) = &r.cayley_involutions {
        line("Cayley involutions", inv.len().to_string());
    }
    if let Some(o) = &r.oracle {
        line("|Aut|", o.aut_order.to_string());
        line("vertex stabilizer", o.point_stabilizer_order.to_string());
        line("rings Aut-invariant", o.c_invariant.to_string());
        line(
            "ring-preserving part",
            format!(
                "order {}, transitive {}",
                o.c_preserving_order, o.c_preserving_transitive
            ),
        );
        line("2-arc-regular", o.two_arc_regular.to_string());
        for (k, orbit) in o.edge_orbits.iter().enumerate() {
            let cycles: Vec<String> = orbit
                .cycles
                .iter()
                .map(|(len, c)| format!("{len}:{c}"))
                .collect();
            line(
                &format!("edge orbit {k}"),
                format!(
                    "{} edges, rep {}-{}, cycles {}",
                    orbit.size,
                    orbit.representative.0,
                    orbit.representative.1,
                    cycles.join(" ")
                ),
            );
        }
    }
    for c in &r.claims {
        line(
            "claim",
            format!(
                "{}: expected {}, observed {} [{}]",
                c.what,
                c.expected,
                c.observed,
                if c.holds { "ok" } else { "FAIL" }
            ),
        );
    }
    if r.findings.is_empty() {
        line("findings", "none".into());
    }
    for f in &r.findings {
        line("finding", f.clone());
    }
    s
}
