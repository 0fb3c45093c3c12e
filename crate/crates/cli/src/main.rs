mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

const GRAMMAR: &str = "\
Inequality grammar:
  ineq  := expr ('<=' | '>=') expr
  expr  := ['-'] term (('+' | '-') term)*
  term  := [coef ['*']] atom | '0'
  coef  := integer ['/' integer]
  atom  := 'H(' vars ['|' vars] ')' | 'I(' vars ';' vars ['|' vars] ')'
  vars  := name (',' name)*
Names are identifiers such as x, y1 or X_2; at most 8 distinct variables.
H(A|B) means H(A,B) - H(B); I(A;B|C) means H(A,C) + H(B,C) - H(A,B,C) - H(C).
Example: \"2 H(x,y,z) <= H(x,y) + H(x,z) + H(y,z)\"

Exit codes: 0 success or the inequality holds, 2 a definite negative finding
(not Shannon-type, violated, no split exists), 1 error.";

#[derive(Parser)]
#[command(name = "entdim", version, about = "Exact checks for linear information inequalities", after_help = GRAMMAR)]
struct Cli {
    /// Print compact single-line JSON instead of indented JSON.
    #[arg(long, global = true)]
    compact: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
pub struct IneqArgs {
    /// Declared variable order, comma separated (default: first appearance).
    #[arg(long, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether an inequality follows from the elemental Shannon inequalities.
    #[command(after_help = GRAMMAR)]
    Check {
        ineq: String,
        #[command(flatten)]
        vars: IneqArgs,
    },
    /// Slack of an inequality on the entropy vector of a distribution file.
    Eval {
        #[arg(long)]
        ineq: String,
        /// {"m", "atoms": [{"point", "prob": "p/q"}]} or {"m", "support": [[...]]}
        #[arg(long)]
        dist: String,
        #[command(flatten)]
        vars: IneqArgs,
    },
    /// Search group coset points for a violation.
    GroupSearch {
        #[arg(long)]
        ineq: String,
        /// Largest group order taken from the built-in catalog.
        #[arg(long, default_value_t = 24)]
        max_order: usize,
        /// JSON list of groups to scan instead of the built-in catalog.
        #[arg(long)]
        groups: Option<String>,
        /// Subgroup tuples scanned per group before moving on.
        #[arg(long, default_value_t = 5_000_000)]
        max_tuples: u64,
        #[command(flatten)]
        vars: IneqArgs,
    },
    /// Build a Cantor-set counterexample from a violating group.
    Counterexample {
        #[arg(long)]
        ineq: String,
        /// {"order", "table"} or {"perm_degree", "generators"}; searched for when absent.
        #[arg(long, requires = "subgroups")]
        group: Option<String>,
        /// JSON list of subgroups as element-index arrays.
        #[arg(long, requires = "group")]
        subgroups: Option<String>,
        #[arg(long, default_value_t = 24)]
        max_order: usize,
        #[command(flatten)]
        vars: IneqArgs,
    },
    /// Dimensions of a Cantor-type set and of its projections.
    Cantor {
        /// {"m", "N", "points"}
        #[arg(long)]
        witness: String,
        /// One projection, as comma-separated 1-based positions.
        #[arg(long, value_delimiter = ',')]
        project: Option<Vec<usize>>,
    },
    /// Search for a splitting of a finite body within per-part budgets.
    Split {
        /// {"m", "N", "points"}
        #[arg(long)]
        body: String,
        /// {"parts": [{"subset": [1], "bits": 2.0}, ...]}
        #[arg(long)]
        spec: String,
        #[arg(long, conflicts_with = "greedy")]
        exhaustive: bool,
        #[arg(long)]
        greedy: bool,
    },
    /// Worked constructions.
    Demo {
        #[command(subcommand)]
        demo: Demo,
    },
}

#[derive(Subcommand)]
enum Demo {
    /// The cube with an attached bar, which breaks the unsplit inequality.
    CubeBar {
        /// Cube side; a perfect square of at least 4.
        #[arg(long, default_value_t = 16)]
        k: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            // one line: clap's message up to its usage block
            let rendered = e.to_string();
            let detail: Vec<&str> = rendered
                .lines()
                .take_while(|l| !l.starts_with("Usage:"))
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect();
            eprintln!("error: usage: {}", detail.join(" ").trim_start_matches("error: "));
            return ExitCode::from(1);
        }
    };
    let started = std::time::Instant::now();
    let result = match cli.command {
        Command::Check { ineq, vars } => commands::check(&ineq, &vars),
        Command::Eval { ineq, dist, vars } => commands::eval(&ineq, &dist, &vars),
        Command::GroupSearch { ineq, max_order, groups, max_tuples, vars } => {
            commands::group_search(&ineq, max_order, groups.as_deref(), max_tuples, &vars)
        }
        Command::Counterexample { ineq, group, subgroups, max_order, vars } => {
            let given = group.zip(subgroups);
            commands::counterexample(&ineq, given.as_ref().map(|(g, s)| (g.as_str(), s.as_str())), max_order, &vars)
        }
        Command::Cantor { witness, project } => commands::cantor(&witness, project.as_deref()),
        Command::Split { body, spec, exhaustive: _, greedy } => commands::split(&body, &spec, greedy),
        Command::Demo { demo: Demo::CubeBar { k } } => commands::cube_bar(k),
    };
    match result {
        Ok(mut report) => {
            report.timing_ms = started.elapsed().as_secs_f64() * 1e3;
            let mut out = std::io::stdout().lock();
            // a closed pipe is not worth a panic
            let _ = writeln!(out, "{}", report.render(cli.compact));
            ExitCode::from(report.exit_code)
        }
        Err(e) => {
            eprintln!("error: {}: {}", e.kind(), e.detail().replace('\n', " "));
            ExitCode::from(1)
        }
    }
}
