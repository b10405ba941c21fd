//! The `qecad` command: decide, eliminate, decompose and ask model questions.

mod dump;

use std::io::Write;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qecad::cad::{compute_cad_with, Budget, CadError};
use qecad::formula::{parse, Formula};
use qecad::poly::{natural_cmp, VarOrder};
use qecad::qe::{decide, eliminate, Decision, QeError, QeOptions};
use qecad::stats::{parse_model, CiStatement, ModelRegistry, PolynomialModel, QuestionArgs, QuestionRegistry, StatsError, Task};

pub use dump::{CellRecord, DecisionRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_TIMEOUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "qecad", version, about = "Real quantifier elimination by cylindrical algebraic decomposition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide a sentence and print true or false.
    Decide {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        run: RunFlags,
        /// Print the deciding values of the outer quantifier block.
        #[arg(long)]
        witness: bool,
    },
    /// Print a quantifier-free formula equivalent to the input.
    Eliminate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Decompose space for the polynomials of a formula and dump the cells.
    /// Variables are ordered by name (x1 before x2 before x10) unless --var-order is given.
    Cad {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        run: RunFlags,
        /// Number of levels to build (default: all).
        #[arg(long)]
        levels: Option<usize>,
        /// Decimal digits for sample coordinates.
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
        precision: u32,
        /// Also print exact defining data of sample coordinates.
        #[arg(long)]
        exact: bool,
    },
    /// Compile a question about named or file-defined models and answer it.
    Model {
        /// implicitize, identify, bound, include, equal, overlap or ci-implication.
        question: Option<String>,
        /// Built-in model names or model files.
        models: Vec<String>,
        /// Quantity over the first model's parameters (identify, bound); repeatable.
        #[arg(long = "quantity")]
        quantities: Vec<String>,
        /// Independence premise such as "1 _|_ 3 | 2"; repeatable.
        #[arg(long = "premise")]
        premises: Vec<String>,
        /// Independence conclusion; several are read as a disjunction.
        #[arg(long = "conclusion")]
        conclusions: Vec<String>,
        /// Number of Gaussian variables for ci-implication.
        #[arg(long)]
        dimension: Option<usize>,
        /// Print the compiled formula instead of answering.
        #[arg(long)]
        print_formula: bool,
        /// List built-in models and questions.
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        run: RunFlags,
        /// Print the deciding values of the outer quantifier block.
        #[arg(long)]
        witness: bool,
    },
}

#[derive(Args, Debug)]
struct Input {
    /// File holding a formula (`-` for standard input).
    file: Option<String>,
    /// Formula text.
    #[arg(short = 'f', long = "formula", conflicts_with = "file", allow_hyphen_values = true)]
    formula: Option<String>,
}

#[derive(Args, Debug)]
struct RunFlags {
    /// Comma-separated variable order; decomposition cost depends heavily on it.
    #[arg(long, value_delimiter = ',')]
    var_order: Option<Vec<String>>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seconds before giving up.
    #[arg(long, env = "QECAD_TIME_BUDGET")]
    time_budget: Option<f64>,
    /// Exit with status 1 when the answer is false.
    #[arg(long)]
    assert_true: bool,
    /// Evaluate every child of every quantifier node.
    #[arg(long)]
    no_short_circuit: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

enum Failure {
    Usage(String),
    Timeout,
    /// Standard output went away (`qecad cad … | head`).
    Closed,
    Other(String),
}

impl From<QeError> for Failure {
    fn from(e: QeError) -> Self {
        match e {
            QeError::Cad(CadError::Timeout) | QeError::Cad(CadError::CellLimit(_)) => Failure::Timeout,
            QeError::NotASentence(_) | QeError::BadVarOrder(_) => Failure::Usage(e.to_string()),
            other => Failure::Other(other.to_string()),
        }
    }
}

impl From<CadError> for Failure {
    fn from(e: CadError) -> Self {
        Failure::from(QeError::Cad(e))
    }
}

impl From<StatsError> for Failure {
    fn from(e: StatsError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return Failure::Closed;
        }
        Failure::Other(e.to_string())
    }
}

impl RunFlags {
    fn options(&self) -> QeOptions {
        QeOptions { short_circuit: !self.no_short_circuit, budget: self.budget(), var_order: self.var_order.clone() }
    }

    fn budget(&self) -> Budget {
        Budget {
            deadline: self.time_budget.filter(|s| *s > 0.0).map(|s| Instant::now() + Duration::from_secs_f64(s)),
            max_cells: None,
        }
    }
}

fn read_formula(input: &Input) -> Result<Formula, Failure> {
    let text = match (&input.formula, &input.file) {
        (Some(f), _) => f.clone(),
        (None, Some(path)) if path == "-" => std::io::read_to_string(std::io::stdin())?,
        (None, Some(path)) => std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?,
        (None, None) => return Err(Failure::Usage("give a formula file or --formula".into())),
    };
    parse(&text).map_err(|e| Failure::Usage(format!("parse error at {e}")))
}

/// Runs the command line `argv` (program name first) and returns the exit status.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Timeout) => {
            let _ = writeln!(err, "error: time budget exceeded");
            EXIT_TIMEOUT
        }
        Err(Failure::Closed) => EXIT_OK,
        Err(Failure::Other(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Decide { input, run, witness } => {
            let f = read_formula(&input)?;
            let d = decide(&f, &run.options())?;
            report_decision(&d, &run, witness, out)
        }
        Command::Eliminate { input, run } => {
            let f = read_formula(&input)?;
            let e = eliminate(&f, &run.options())?;
            match run.format {
                Format::Text => writeln!(out, "{}", e.formula)?,
                Format::Json => writeln!(out, "{}", serde_json::json!({ "formula": e.formula.to_string(), "cells": e.cells }))?,
            }
            Ok(if run.assert_true && e.formula == Formula::False { EXIT_FALSE } else { EXIT_OK })
        }
        Command::Cad { input, run, levels, precision, exact } => {
            let f = read_formula(&input)?;
            let names = match &run.var_order {
                Some(order) => {
                    let mut names = order.clone();
                    for v in f.all_vars() {
                        if !names.contains(&v) {
                            return Err(Failure::Usage(format!("--var-order misses {v}")));
                        }
                    }
                    names.retain(|v| f.all_vars().contains(v));
                    names
                }
                None => {
                    let mut names = f.all_vars();
                    names.sort_by(|a, b| natural_cmp(a, b));
                    names
                }
            };
            let vars = VarOrder::new(&names);
            let j = levels.unwrap_or(vars.len()).min(vars.len());
            let tree = compute_cad_with(&f.polynomials(), &vars, j, run.budget())?;
            dump::write_tree(&tree, j, precision as usize, exact, run.format == Format::Json, out)?;
            Ok(EXIT_OK)
        }
        Command::Model { question, models, quantities, premises, conclusions, dimension, print_formula, list, run, witness } => {
            let registry = ModelRegistry::default();
            let questions = QuestionRegistry::default();
            if list {
                writeln!(out, "models:")?;
                for n in registry.names() {
                    writeln!(out, "  {n}")?;
                }
                writeln!(out, "questions:")?;
                for q in questions.iter() {
                    writeln!(out, "  {:<15} {}", q.name(), q.summary())?;
                }
                return Ok(EXIT_OK);
            }
            let question = question.ok_or_else(|| Failure::Usage("name a question or pass --list".into()))?;
            let loaded: Vec<PolynomialModel> = models.iter().map(|m| load_model(&registry, m)).collect::<Result<_, _>>()?;
            let refs: Vec<&PolynomialModel> = loaded.iter().collect();
            let parse_ci = |v: &[String]| v.iter().map(|s| s.parse::<CiStatement>()).collect::<Result<Vec<_>, _>>();
            let args = QuestionArgs { quantities, premises: parse_ci(&premises)?, conclusions: parse_ci(&conclusions)?, dimension };
            let task = questions.compile(&question, &refs, &args)?;
            if print_formula {
                writeln!(out, "{}", task.formula())?;
                return Ok(EXIT_OK);
            }
            match task {
                Task::Decide(f) => {
                    let d = decide(&f, &run.options())?;
                    report_decision(&d, &run, witness, out)
                }
                Task::Eliminate(f) => {
                    let e = eliminate(&f, &run.options())?;
                    writeln!(out, "{}", e.formula)?;
                    Ok(EXIT_OK)
                }
            }
        }
    }
}

fn load_model(registry: &ModelRegistry, name: &str) -> Result<PolynomialModel, Failure> {
    if let Ok(m) = registry.get(name) {
        return Ok(m.clone());
    }
    match std::fs::read_to_string(name) {
        Ok(text) => Ok(parse_model(&text)?),
        Err(_) => Err(Failure::Usage(format!("{name} is neither a built-in model nor a readable file"))),
    }
}

fn report_decision(d: &Decision, run: &RunFlags, witness: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    match run.format {
        Format::Text => {
            writeln!(out, "{}", d.value)?;
            if witness {
                if let Some(w) = &d.witness {
                    writeln!(out, "witness: {w}")?;
                }
            }
        }
        Format::Json => {
            let rec = DecisionRecord::new(d, witness);
            writeln!(out, "{}", serde_json::to_string(&rec).expect("serializable"))?;
        }
    }
    Ok(if run.assert_true && !d.value { EXIT_FALSE } else { EXIT_OK })
}
