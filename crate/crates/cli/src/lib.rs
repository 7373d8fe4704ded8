//! Command-line front end for qualitative belief fusion problems.
//!
//! Exit codes: 0 success, 1 unreadable input file, 2 invalid document or
//! failed validation, 3 degenerate fusion.

pub mod document;
pub mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use qbelief::{
    enumerate_hyper_power_set, fuse, ApproxMode, Combiner, Error, FusionConfig, Qbba, Rule,
};

use document::{Problem, ProblemDocument};
use render::Format;

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNREADABLE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "qbelief",
    version,
    about = "Qualitative belief assignments and their fusion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fuse two sources and print the result table.
    Fuse(FuseArgs),
    /// Check every source of a document.
    Validate { file: PathBuf },
    /// List the hyper-power set of the document's frame under its model.
    Enumerate {
        file: PathBuf,
        /// Largest frame to enumerate.
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long)]
        unicode: bool,
    },
    /// Qualitative belief and plausibility of one proposition.
    Belpl {
        file: PathBuf,
        #[arg(long)]
        source: String,
        #[arg(long)]
        prop: String,
        #[arg(long, value_enum, default_value_t = ApproxArg::Deferred)]
        approx: ApproxArg,
        #[arg(long, value_enum, default_value_t = CombinerArg::Min)]
        confidence: CombinerArg,
    },
}

#[derive(Args, Debug)]
struct FuseArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = RuleArg::Pcr5)]
    rule: RuleArg,
    #[arg(long, value_enum, default_value_t = ApproxArg::Deferred)]
    approx: ApproxArg,
    #[arg(long, value_enum, default_value_t = CombinerArg::Min)]
    confidence: CombinerArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,
    /// Append the derivation steps.
    #[arg(long)]
    trace: bool,
    /// Use ∪ and ∩ in table headers.
    #[arg(long)]
    unicode: bool,
    /// The two sources to fuse, when the document has more.
    #[arg(long, value_delimiter = ',')]
    sources: Vec<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RuleArg {
    Conjunctive,
    Pcr5,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ApproxArg {
    Stepwise,
    Deferred,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CombinerArg {
    Min,
    Average,
    Interval,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Table,
    Json,
}

impl From<RuleArg> for Rule {
    fn from(value: RuleArg) -> Self {
        match value {
            RuleArg::Conjunctive => Rule::Conjunctive,
            RuleArg::Pcr5 => Rule::Pcr5,
        }
    }
}

impl From<ApproxArg> for ApproxMode {
    fn from(value: ApproxArg) -> Self {
        match value {
            ApproxArg::Stepwise => ApproxMode::Stepwise,
            ApproxArg::Deferred => ApproxMode::Deferred,
        }
    }
}

impl From<CombinerArg> for Combiner {
    fn from(value: CombinerArg) -> Self {
        match value {
            CombinerArg::Min => Combiner::Min,
            CombinerArg::Average => Combiner::Average,
            CombinerArg::Interval => Combiner::Interval,
        }
    }
}

/// A failed command: exit code plus the lines for standard error.
#[derive(Debug)]
struct Failure {
    code: i32,
    lines: Vec<String>,
}

impl Failure {
    fn new(code: i32, line: impl Into<String>) -> Self {
        Self {
            code,
            lines: vec![line.into()],
        }
    }

    fn invalid(line: impl Into<String>) -> Self {
        Self::new(EXIT_INVALID, line)
    }
}

fn library_failure(e: Error) -> Failure {
    match e {
        Error::DegenerateProportion { .. } => Failure::new(EXIT_DEGENERATE, e.to_string()),
        _ => Failure::invalid(e.to_string()),
    }
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Fuse(args) => run_fuse(&args),
        Command::Validate { file } => run_validate(&file),
        Command::Enumerate {
            file,
            limit,
            unicode,
        } => run_enumerate(&file, limit, unicode),
        Command::Belpl {
            file,
            source,
            prop,
            approx,
            confidence,
        } => run_belpl(&file, &source, &prop, approx.into(), confidence.into()),
    };
    match outcome {
        Ok((code, text)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(failure) => {
            for line in &failure.lines {
                let _ = writeln!(err, "error: {line}");
            }
            failure.code
        }
    }
}

fn load(path: &Path) -> Result<Problem, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Failure::new(
            EXIT_UNREADABLE,
            format!("cannot read {}: {e}", path.display()),
        )
    })?;
    ProblemDocument::from_json(&text)
        .map_err(Failure::invalid)?
        .resolve()
        .map_err(|lines| Failure {
            code: EXIT_INVALID,
            lines,
        })
}

fn pick_sources<'a>(
    problem: &'a Problem,
    wanted: &[String],
) -> Result<[(&'a str, &'a Qbba); 2], Failure> {
    let names: Vec<&String> = if wanted.is_empty() {
        match problem.sources.len() {
            2 => problem.sources.keys().collect(),
            k => {
                return Err(Failure::invalid(format!(
                    "fusion needs two sources, the document has {k}; choose them with --sources"
                )))
            }
        }
    } else if wanted.len() == 2 {
        wanted.iter().collect()
    } else {
        return Err(Failure::invalid("--sources takes exactly two names"));
    };
    let get = |name: &String| {
        problem
            .sources
            .get_key_value(name)
            .map(|(k, q)| (k.as_str(), q))
            .ok_or_else(|| Failure::invalid(format!("no source named `{name}`")))
    };
    Ok([get(names[0])?, get(names[1])?])
}

fn run_fuse(args: &FuseArgs) -> Result<(i32, String), Failure> {
    let problem = load(&args.file)?;
    let sources = pick_sources(&problem, &args.sources)?;
    let config = FusionConfig::new(args.rule.into(), args.approx.into(), args.confidence.into());
    let result = fuse(sources[0].1, sources[1].1, config).map_err(library_failure)?;
    let format = match args.format {
        FormatArg::Table => Format::Table,
        FormatArg::Json => Format::Json,
    };
    Ok((
        EXIT_OK,
        render::render(format, &sources, &result, args.unicode, args.trace),
    ))
}

fn run_validate(file: &Path) -> Result<(i32, String), Failure> {
    let problem = load(file)?;
    let mut text = String::new();
    let mut failed = false;
    for (name, q) in &problem.sources {
        let diagnostics = q.validate();
        failed |= !diagnostics.is_empty();
        for d in &diagnostics {
            text.push_str(&format!("{name}: {}: {}\n", d.key, d.message));
        }
        if diagnostics.is_empty() {
            let normalized = if q.is_quasi_normalized() {
                "quasi-normalized"
            } else {
                "not quasi-normalized"
            };
            text.push_str(&format!("{name}: ok ({normalized})\n"));
        }
    }
    Ok((if failed { EXIT_INVALID } else { EXIT_OK }, text))
}

fn run_enumerate(
    file: &Path,
    limit: Option<usize>,
    unicode: bool,
) -> Result<(i32, String), Failure> {
    let problem = load(file)?;
    let frame = match limit {
        Some(k) => problem.frame.with_limit(k),
        None => problem.frame.clone(),
    };
    let elements = enumerate_hyper_power_set(&frame, &problem.model).map_err(library_failure)?;
    let mut text = format!("{} elements\n", elements.len());
    for p in &elements {
        text.push_str(&if unicode {
            frame.render_unicode(p)
        } else {
            frame.render(p)
        });
        text.push('\n');
    }
    Ok((EXIT_OK, text))
}

fn run_belpl(
    file: &Path,
    source: &str,
    prop: &str,
    mode: ApproxMode,
    how: Combiner,
) -> Result<(i32, String), Failure> {
    let problem = load(file)?;
    let q = problem
        .sources
        .get(source)
        .ok_or_else(|| Failure::invalid(format!("no source named `{source}`")))?;
    let p = problem
        .frame
        .parse(prop)
        .map_err(|e| Failure::invalid(format!("--prop `{prop}`: {e}")))?;
    let bel = q.qbelief(&p, how, mode).map_err(library_failure)?;
    let pl = q.qplausibility(&p, how, mode).map_err(library_failure)?;
    let name = problem.frame.render(&p);
    let enrichment = q.enrichment();
    Ok((
        EXIT_OK,
        format!(
            "Bel({name}) = {}\nPl({name}) = {}\n",
            render::cell(&bel, enrichment),
            render::cell(&pl, enrichment)
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_fusion_maps_to_exit_three() {
        let e = Error::DegenerateProportion {
            left: "L0(1)".into(),
            right: "L0(1)".into(),
        };
        assert_eq!(library_failure(e).code, EXIT_DEGENERATE);
        assert_eq!(library_failure(Error::FrameMismatch).code, EXIT_INVALID);
    }

    #[test]
    fn run_writes_to_the_given_streams() {
        let file = concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/tests/fixtures/numeric_pair.json"
        );
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            [
                "qbelief",
                "fuse",
                file,
                "--rule",
                "conjunctive",
                "--approx",
                "stepwise",
            ],
            &mut out,
            &mut err,
        );
        assert_eq!(code, EXIT_OK);
        assert!(err.is_empty());
        assert!(String::from_utf8(out).unwrap().contains("A&B: L1(0.3)"));
    }
}
