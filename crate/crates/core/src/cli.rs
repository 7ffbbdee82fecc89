//! The `pegrec` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::analysis::{check_well_formed, with_default_recovery, GrammarSets, LabelSelection};
use crate::dsl::{parse_grammar, GrammarSource};
use crate::engine::{run_parse, Limits, MatchOptions, ParseStatus};
use crate::model::{Grammar, Label};
use crate::report::render;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SYNTAX_ERRORS: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_ENGINE_FAULT: i32 = 4;

const EXIT_CODES: &str = "\
Exit status:
  0  accepted / grammar OK
  1  input has syntax errors (recovered or not)
  2  grammar failed the well-formedness check
  3  unreadable file, invalid grammar or bad arguments
  4  engine fault (nesting limit exceeded)";

#[derive(Debug, Parser)]
#[command(name = "pegrec", version, about = "Parse with labeled-failure PEGs and recovery", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a grammar and check it for left recursion and nullable repetition.
    Check { grammar: PathBuf },
    /// Print FIRST and FOLLOW sets of the syntactic rules.
    Sets { grammar: PathBuf },
    /// Parse an input file and report recovered and unrecovered errors.
    Parse(ParseArgs),
}

#[derive(Debug, Args)]
struct ParseArgs {
    grammar: PathBuf,
    input: PathBuf,
    /// Emit {status, diagnostics, tree?} as JSON.
    #[arg(long)]
    json: bool,
    /// Include the parse tree.
    #[arg(long)]
    tree: bool,
    /// Treat every label as unrecoverable.
    #[arg(long)]
    no_recovery: bool,
    /// Add FOLLOW-based recovery for these labels (comma separated, or `all`).
    #[arg(long, value_name = "LABELS")]
    default_recovery: Option<String>,
    #[arg(long, value_name = "N", default_value_t = Limits::default().max_depth)]
    max_depth: usize,
    #[arg(long, value_name = "N", default_value_t = Limits::default().max_recovery_depth)]
    max_recovery_depth: usize,
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// Runs the command line `args` (including the program name) and returns the
/// exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut io = Io { out, err };
    let code = match &cli.command {
        Command::Check { grammar } => check(grammar, &mut io),
        Command::Sets { grammar } => sets(grammar, &mut io),
        Command::Parse(args) => parse(args, &mut io),
    };
    let _ = io.out.flush();
    code
}

fn load(path: &PathBuf, io: &mut Io<'_>) -> Option<Grammar> {
    match GrammarSource::from_path(path).and_then(|src| parse_grammar(&src)) {
        Ok(g) => Some(g),
        Err(e) => {
            let _ = writeln!(io.err, "{}: {e}", path.display());
            None
        }
    }
}

fn check(path: &PathBuf, io: &mut Io<'_>) -> i32 {
    let Some(g) = load(path, io) else {
        return EXIT_USAGE;
    };
    let diags = check_well_formed(&g);
    if diags.is_empty() {
        let _ = writeln!(io.out, "OK");
        return EXIT_OK;
    }
    for d in diags {
        let _ = writeln!(io.out, "{d}");
    }
    EXIT_CHECK_FAILED
}

fn sets(path: &PathBuf, io: &mut Io<'_>) -> i32 {
    let Some(g) = load(path, io) else {
        return EXIT_USAGE;
    };
    let sets = GrammarSets::compute(&g);
    for rule in g
        .rules
        .iter()
        .filter(|r| !r.is_lexical() || r.name == g.start)
    {
        let first = sets.first(&rule.body);
        let follow = sets.follow(&rule.name);
        let _ = writeln!(io.out, "{}: FIRST = {first}, FOLLOW = {follow}", rule.name);
    }
    EXIT_OK
}

fn selection(list: &str) -> Result<LabelSelection, String> {
    if list == "all" {
        return Ok(LabelSelection::All);
    }
    list.split(',')
        .map(|s| Label::new(s.trim()).map_err(|e| format!("--default-recovery: {e}")))
        .collect::<Result<Vec<_>, _>>()
        .map(LabelSelection::Only)
}

fn parse(args: &ParseArgs, io: &mut Io<'_>) -> i32 {
    let Some(mut g) = load(&args.grammar, io) else {
        return EXIT_USAGE;
    };
    if let Some(list) = &args.default_recovery {
        let synthesized = selection(list).and_then(|sel| {
            with_default_recovery(&g, &sel).map_err(|e| format!("--default-recovery: {e}"))
        });
        match synthesized {
            Ok(with) => g = with,
            Err(e) => {
                let _ = writeln!(io.err, "{e}");
                return EXIT_USAGE;
            }
        }
    }
    let input = match std::fs::read_to_string(&args.input) {
        Ok(text) => text,
        Err(e) => {
            let _ = writeln!(io.err, "cannot read {}: {e}", args.input.display());
            return EXIT_USAGE;
        }
    };

    let opts = MatchOptions {
        recovery: !args.no_recovery,
        build_tree: args.tree,
        limits: Limits {
            max_depth: args.max_depth,
            max_recovery_depth: args.max_recovery_depth,
        },
    };
    let report = match run_parse(&g, &input, &opts) {
        Ok(report) => report,
        Err(fault) => {
            let _ = writeln!(io.err, "engine fault: {fault}");
            return EXIT_ENGINE_FAULT;
        }
    };
    let diags = render(&report, &g, &input);

    if args.json {
        let mut doc = json!({ "status": report.status.as_str(), "diagnostics": diags });
        if let Some(tree) = report.outcome.tree.as_ref().filter(|_| args.tree) {
            doc["tree"] = serde_json::to_value(tree).expect("trees serialize");
        }
        let _ = writeln!(io.out, "{doc:#}");
    } else {
        for d in &diags {
            let _ = writeln!(io.out, "{d}");
        }
        if let Some(tree) = &report.outcome.tree {
            let _ = write!(io.out, "{}", tree.render(&input));
        }
    }
    match report.status {
        ParseStatus::Accepted => EXIT_OK,
        ParseStatus::AcceptedWithErrors | ParseStatus::Rejected => EXIT_SYNTAX_ERRORS,
    }
}
