use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tricat::io::{
    emit_report, parse_bundle, parse_report, read_manifest, resolve, run_checks, run_suite, verify_bundle, Check,
    CheckDecl, FixtureManifest, Format, Report,
};
use tricat::subcat::{ClosureKind, Side};
use tricat::{Error, Result};

/// Checks triple categories of triangular matrix rings against fixture
/// manifests.
#[derive(Parser)]
#[command(name = "tricat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Budget {
    /// Idempotents enumerated when splitting summands.
    #[arg(long)]
    budget_summands: Option<u64>,
    /// Candidates tried by the exhaustive isomorphism search.
    #[arg(long)]
    budget_iso: Option<u64>,
    /// Short exact sequences enumerated per pair of ends.
    #[arg(long)]
    budget_ses: Option<u64>,
    /// Maps enumerated by relative-projectivity checks.
    #[arg(long)]
    budget_maps: Option<u64>,
    /// Highest degree checked for Ext and Tor vanishing.
    #[arg(long)]
    budget_imax: Option<usize>,
}

#[derive(Args)]
struct Common {
    /// Fixture manifest (JSON).
    #[arg(long)]
    fixture: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Also write the JSON report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    #[command(flatten)]
    budget: Budget,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Json => Format::Json,
            OutputFormat::Text => Format::Text,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    #[value(name = "E", alias = "e")]
    E,
    #[value(name = "M", alias = "m")]
    M,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::E => Side::E,
            SideArg::M => Side::M,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Load and validate a manifest.
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Classify one triple, or every object of a category.
    Classify {
        #[command(flatten)]
        common: Common,
        #[arg(long, conflicts_with = "category")]
        triple: Option<String>,
        #[arg(long, requires = "side")]
        category: Option<String>,
        #[arg(long, value_enum)]
        side: Option<SideArg>,
    },
    /// Subcategory checks.
    #[command(subcommand)]
    Subcat(SubcatCommand),
    /// Diagram checks.
    #[command(subcommand)]
    Diagram(DiagramCommand),
    /// Recollement audit.
    #[command(subcommand)]
    Recollement(RecollementCommand),
    /// Named suites from a manifest.
    #[command(subcommand)]
    Suite(SuiteCommand),
}

#[derive(Subcommand)]
enum SubcatCommand {
    /// `coresolving`, `resolving`, or a closure kind such as `Extensions`.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        subcategory: String,
        #[arg(long)]
        kind: String,
        /// Adds the Ext (Tor) vanishing clause for this bimodule.
        #[arg(long)]
        bimodule: Option<String>,
    },
    Frobenius {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        category: String,
        #[arg(long, value_enum)]
        side: SideArg,
    },
}

#[derive(Subcommand)]
enum DiagramCommand {
    /// Verify the squares and snake diagrams of a bundle.
    Verify {
        /// Diagram bundle (JSON).
        #[arg(long)]
        fixture: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum RecollementCommand {
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        category: String,
        /// Both sides when omitted.
        #[arg(long, value_enum)]
        side: Option<SideArg>,
    },
}

#[derive(Subcommand)]
enum SuiteCommand {
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        suite: String,
        /// Compare the JSON report with this golden file.
        #[arg(long)]
        golden: Option<PathBuf>,
        /// Compare only the verdict sequence with the golden file.
        #[arg(long, requires = "golden")]
        verdicts_only: bool,
    },
    /// Regenerate a golden report.
    GoldenUpdate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        suite: String,
        #[arg(long)]
        golden: PathBuf,
    },
}

fn load(common: &Common) -> Result<FixtureManifest> {
    let mut file = read_manifest(&common.fixture)?;
    let b = &common.budget;
    let budgets = &mut file.budgets;
    if let Some(v) = b.budget_summands {
        budgets.summands = v;
    }
    if let Some(v) = b.budget_iso {
        budgets.iso = v;
    }
    if let Some(v) = b.budget_ses {
        budgets.ses = v;
    }
    if let Some(v) = b.budget_maps {
        budgets.maps = v;
    }
    if b.budget_imax.is_some() {
        budgets.imax = b.budget_imax;
    }
    resolve(&file).map_err(|e| e.context(&common.fixture.display().to_string()))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Prints the report, writes it to `--report` when given, and maps its
/// verdicts to an exit code.
fn finish(report: &Report, format: OutputFormat, path: Option<&Path>) -> Result<u8> {
    std::io::stdout()
        .write_all(&emit_report(report, format.into()))
        .map_err(|e| Error::Io(e.to_string()))?;
    if let Some(p) = path {
        write_file(p, &emit_report(report, Format::Json))?;
    }
    Ok(report.exit_code() as u8)
}

fn single(common: &Common, name: &str, check: Check) -> Result<u8> {
    let m = load(common)?;
    let decl = CheckDecl {
        name: name.to_string(),
        check,
    };
    let report = run_checks(&m, name, &[decl], common.seed)?;
    finish(&report, common.format, common.report.as_deref())
}

fn subcat_check(subcategory: &str, kind: &str, bimodule: Option<String>) -> Result<Check> {
    let subcategory = subcategory.to_string();
    Ok(match kind {
        "coresolving" => Check::Coresolving { subcategory, bimodule },
        "resolving" => Check::Resolving { subcategory, bimodule },
        other => {
            let kind: ClosureKind = serde_json::from_value(serde_json::Value::String(other.to_string()))
                .map_err(|_| Error::Malformed(format!("unknown check kind {other:?}")))?;
            Check::Closure { subcategory, kind }
        }
    })
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Validate { common } => {
            let m = load(&common)?;
            println!(
                "{}: valid; {} algebras, {} modules, {} bimodules, {} subcategories, {} triples, {} categories, {} suites",
                common.fixture.display(),
                m.algebras.len(),
                m.modules.len(),
                m.bimodules.len(),
                m.subcategories.len(),
                m.triples.len(),
                m.categories.len(),
                m.suites.len()
            );
            Ok(0)
        }
        Command::Classify {
            common,
            triple,
            category,
            side,
        } => {
            let check = match (triple, category, side) {
                (Some(triple), _, _) => Check::ClassifyTriple { triple },
                (None, Some(category), Some(side)) => Check::Classify {
                    category,
                    side: side.into(),
                },
                _ => return Err(Error::Malformed("classify needs --triple or --category with --side".into())),
            };
            single(&common, "classify", check)
        }
        Command::Subcat(SubcatCommand::Check {
            common,
            subcategory,
            kind,
            bimodule,
        }) => single(&common, "subcat", subcat_check(&subcategory, &kind, bimodule)?),
        Command::Subcat(SubcatCommand::Frobenius { common, category, side }) => single(
            &common,
            "subcat",
            Check::Frobenius {
                category,
                side: side.into(),
            },
        ),
        Command::Diagram(DiagramCommand::Verify { fixture, format, report }) => {
            let text = fs::read_to_string(&fixture).map_err(|e| Error::Io(format!("{}: {e}", fixture.display())))?;
            let bundle = parse_bundle(&text).map_err(|e| e.context(&fixture.display().to_string()))?;
            finish(&verify_bundle(&bundle)?, format, report.as_deref())
        }
        Command::Recollement(RecollementCommand::Verify { common, category, side }) => {
            let m = load(&common)?;
            let sides = match side {
                Some(s) => vec![s.into()],
                None => vec![Side::E, Side::M],
            };
            let checks: Vec<CheckDecl> = sides
                .into_iter()
                .map(|side| CheckDecl {
                    name: format!("recollement on {side:?}"),
                    check: Check::Recollement {
                        category: category.clone(),
                        side,
                    },
                })
                .collect();
            let report = run_checks(&m, "recollement", &checks, common.seed)?;
            finish(&report, common.format, common.report.as_deref())
        }
        Command::Suite(SuiteCommand::Run {
            common,
            suite,
            golden,
            verdicts_only,
        }) => {
            let m = load(&common)?;
            let report = run_suite(&m, &suite, common.seed)?;
            let code = finish(&report, common.format, common.report.as_deref())?;
            if let Some(g) = golden {
                let expected = fs::read(&g).map_err(|e| Error::Io(format!("{}: {e}", g.display())))?;
                let matches = if verdicts_only {
                    parse_report(&expected)?.verdicts() == report.verdicts()
                } else {
                    expected == emit_report(&report, Format::Json)
                };
                if !matches {
                    eprintln!("report differs from golden file {}", g.display());
                    return Ok(1);
                }
                eprintln!("report matches golden file {}", g.display());
            }
            Ok(code)
        }
        Command::Suite(SuiteCommand::GoldenUpdate { common, suite, golden }) => {
            let m = load(&common)?;
            let report = run_suite(&m, &suite, common.seed)?;
            write_file(&golden, &emit_report(&report, Format::Json))?;
            eprintln!("wrote {}", golden.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(64);
        }
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
