//! Command-line front end. Every subcommand is a thin shell over the library
//! modules; exit codes encode verdicts for scripting: 0 ok/true, 1
//! false/unsat/loser, 2 usage error, 3 budget exceeded or inconclusive.

use btl::checker::{self, Assignment, Mode};
use btl::formula::{Formula, StateFormula};
use btl::game;
use btl::models::{build_a, build_b, unravel, Tree};
use btl::parser::{self, json};
use btl::rewriter;
use btl::sat::{self, SatOutcome, SearchBounds};
use btl::tiling::{self, TilingVerdict};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "btl", about = "Workbench for hybrid branching-time logics", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Args)]
struct FormulaInput {
    /// Formula text.
    #[arg(long, conflicts_with = "file")]
    formula: Option<String>,
    /// File containing the formula text.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    LeafLoop,
    Strict,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::LeafLoop => Mode::LeafLoop,
            ModeArg::Strict => Mode::Strict,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Pipeline {
    UNormal,
    ENormal,
    ToCtl,
    EliminatePastFairness,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    A,
    B,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a formula and print its metrics.
    Parse(FormulaInput),
    /// Model-check a formula on a tree.
    Check {
        #[arg(long)]
        tree: PathBuf,
        #[command(flatten)]
        formula: FormulaInput,
        #[arg(long, value_enum, default_value = "leaf-loop")]
        mode: ModeArg,
        /// Node to check at (external id; default: the root).
        #[arg(long)]
        node: Option<u64>,
        /// Assignment as comma-separated external node ids.
        #[arg(long, value_delimiter = ',')]
        assign: Option<Vec<u64>>,
    },
    /// Apply a rewrite pipeline to a formula.
    Rewrite {
        #[arg(long, value_enum)]
        pipeline: Pipeline,
        #[command(flatten)]
        formula: FormulaInput,
    },
    /// Encode a tiling instance as a formula.
    EncodeTiling {
        #[arg(long)]
        instance: PathBuf,
        /// Emit a single named subformula (chi1..chi10, psi1..psi7).
        #[arg(long)]
        part: Option<String>,
    },
    /// Solve the tiling game on a bounded board.
    SolveTiling {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        width: usize,
        #[arg(long)]
        max_rows: usize,
    },
    /// Solve the tree comparison game.
    GameSolve {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        rounds: usize,
    },
    /// Replay a scripted game.
    GameReplay {
        #[arg(long)]
        script: PathBuf,
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Bounded-model satisfiability search.
    Sat {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        branch: usize,
        /// Proposition universe, comma separated.
        #[arg(long, value_delimiter = ',')]
        props: Vec<String>,
        #[arg(long, default_value_t = 5)]
        max_nodes: usize,
    },
    /// Emit one of the built-in transition-system families.
    BuildModel {
        #[arg(long, value_enum)]
        family: Family,
        /// Level `i` for family A; round count `k` for family B.
        #[arg(long)]
        index: usize,
        /// Unravel to a tree of this depth instead of printing the system.
        #[arg(long)]
        depth: Option<usize>,
        /// White-path length for family B.
        #[arg(long, default_value_t = 1)]
        s: usize,
        /// Embedded-copy level for family B.
        #[arg(long)]
        n: Option<usize>,
    },
}

enum CliError {
    Usage(String),
    Budget(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Budget(m) => m,
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn read_file(path: &PathBuf) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn formula_text(input: &FormulaInput) -> Result<String, CliError> {
    match (&input.formula, &input.file) {
        (Some(t), None) => Ok(t.clone()),
        (None, Some(p)) => Ok(String::from_utf8_lossy(&read_file(p)?).into_owned()),
        _ => Err(CliError::Usage("provide exactly one of --formula or --file".into())),
    }
}

fn parse_state(text: &str) -> Result<StateFormula, CliError> {
    parser::parse_formula(text.trim()).map_err(usage)
}

fn load_tree_file(path: &PathBuf) -> Result<Tree, CliError> {
    json::load_tree(&read_file(path)?).map_err(usage)
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Parse(input) => {
            let f = parse_state(&formula_text(input)?)?;
            let c = f.classify();
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "class": c.level.to_string(),
                        "size": f.size(),
                        "depth": f.depth(),
                        "k": c.vars,
                        "uses_past": c.uses_past,
                        "uses_fairness": c.uses_fairness,
                        "printed": parser::print_formula(&f),
                    })
                );
            } else {
                println!("class: {}", c.level);
                println!("size: {}", f.size());
                println!("depth: {}", f.depth());
                println!("variables: {}", c.vars);
                println!("past: {}  fairness: {}", c.uses_past, c.uses_fairness);
                println!("printed: {}", parser::print_formula(&f));
            }
            Ok(0)
        }
        Command::Check { tree, formula, mode, node, assign } => {
            let t = load_tree_file(tree)?;
            let f = parse_state(&formula_text(formula)?)?;
            let mode: Mode = (*mode).into();
            let k = f.classify().vars;
            let at = match node {
                Some(id) => t.node_by_ext_id(*id).map_err(usage)?,
                None => t.root(),
            };
            let assignment = match assign {
                Some(ids) => {
                    let mut nodes = Vec::new();
                    for id in ids {
                        nodes.push(t.node_by_ext_id(*id).map_err(usage)?);
                    }
                    Assignment(nodes)
                }
                None => Assignment::all(t.root(), k),
            };
            let truth = checker::check_state(&t, at, &assignment, &f, mode).map_err(usage)?;
            if cli.json {
                println!("{}", json!({ "holds": truth }));
            } else {
                println!("{}", if truth { "holds" } else { "does not hold" });
            }
            Ok(if truth { 0 } else { 1 })
        }
        Command::Rewrite { pipeline, formula } => {
            let text = formula_text(formula)?;
            let report = match pipeline {
                Pipeline::UNormal => {
                    let f = parse_state(&text)?;
                    plain_report(&f, rewriter::to_u_normal(&f).map_err(usage)?)
                }
                Pipeline::ENormal => {
                    let f = parse_state(&text)?;
                    plain_report(&f, rewriter::to_e_normal(&f).map_err(usage)?)
                }
                Pipeline::ToCtl => {
                    let f = parse_state(&text)?;
                    plain_report(&f, rewriter::ctlplus_to_ctl(&f).map_err(usage)?)
                }
                Pipeline::EliminatePastFairness => {
                    // this pipeline also works on bare path formulas
                    let f = parser::parse_any_formula(text.trim()).map_err(usage)?;
                    rewriter::eliminate_past_fairness(&f).map_err(usage)?
                }
            };
            if cli.json {
                println!("{}", report.to_json());
            } else {
                println!("{}", parser::print_any_formula(&report.output));
                eprintln!(
                    "size {} -> {} ({:?}{})",
                    report.input_size,
                    report.output_size,
                    report.kind,
                    if report.fresh_propositions.is_empty() {
                        String::new()
                    } else {
                        format!(", fresh: {}", report.fresh_propositions.join(", "))
                    }
                );
            }
            Ok(0)
        }
        Command::EncodeTiling { instance, part } => {
            let inst = json::load_tiling_instance(&read_file(instance)?).map_err(usage)?;
            let f = match part {
                Some(name) => tiling::subformula(&inst, name).map_err(usage)?,
                None => tiling::encode_tiling(&inst).map_err(usage)?,
            };
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "formula": parser::print_formula(&f),
                        "size": f.size(),
                        "depth": f.depth(),
                    })
                );
            } else {
                println!("{}", parser::print_formula(&f));
                eprintln!("size {}", f.size());
            }
            Ok(0)
        }
        Command::SolveTiling { instance, width, max_rows } => {
            let inst = json::load_tiling_instance(&read_file(instance)?).map_err(usage)?;
            let verdict = tiling::solve_tiling(&inst, *width, *max_rows)
                .map_err(|e| CliError::Budget(e.to_string()))?;
            let (name, code) = match verdict {
                TilingVerdict::EWins => ("E-wins", 0),
                TilingVerdict::AWins => ("A-wins", 1),
                TilingVerdict::Inconclusive => ("inconclusive", 3),
            };
            if cli.json {
                println!("{}", json!({ "verdict": name }));
            } else {
                println!("{name}");
            }
            Ok(code)
        }
        Command::GameSolve { left, right, rounds } => {
            let l = load_tree_file(left)?;
            let r = load_tree_file(right)?;
            let w = game::solve_game(&l, &r, *rounds);
            let (name, code) = match w {
                game::Player::Spoiler => ("spoiler", 0),
                game::Player::Duplicator => ("duplicator", 1),
            };
            if cli.json {
                println!("{}", json!({ "winner": name, "rounds": rounds }));
            } else {
                println!("{name}");
            }
            Ok(code)
        }
        Command::GameReplay { script, left, right } => {
            let l = load_tree_file(left)?;
            let r = load_tree_file(right)?;
            let text = String::from_utf8_lossy(&read_file(script)?).into_owned();
            let transcript = game::replay(&text, &l, &r).map_err(usage)?;
            let (name, code) = match transcript.winner {
                game::Player::Spoiler => ("spoiler", 0),
                game::Player::Duplicator => ("duplicator", 1),
            };
            if cli.json {
                let sel: Vec<_> = transcript
                    .selections
                    .iter()
                    .map(|&(a, b)| json!([l.ext_id(a), r.ext_id(b)]))
                    .collect();
                println!(
                    "{}",
                    json!({
                        "winner": name,
                        "selections": sel,
                        "moves": transcript.entries.iter().map(|e| e.description.clone()).collect::<Vec<_>>(),
                    })
                );
            } else {
                for e in &transcript.entries {
                    println!("{:>3}: {}", e.line, e.description);
                }
                println!("winner: {name}");
            }
            Ok(code)
        }
        Command::Sat { formula, depth, branch, props, max_nodes } => {
            let f = parse_state(formula)?;
            let props: Vec<&str> = props.iter().map(|s| s.as_str()).collect();
            let bounds = SearchBounds::new(*depth, *branch, &props, *max_nodes);
            match sat::bounded_sat(&f, &bounds) {
                Ok(SatOutcome::Satisfiable(tree)) => {
                    println!("{}", json::save_tree(&tree));
                    Ok(0)
                }
                Ok(SatOutcome::UnsatWithinBounds) => {
                    if cli.json {
                        println!("{}", json!({ "verdict": "unsat-within-bounds" }));
                    } else {
                        println!("unsat-within-bounds");
                    }
                    Ok(1)
                }
                Err(sat::SatError::BudgetExceeded(n)) => {
                    Err(CliError::Budget(format!("budget exceeded after {n} candidates")))
                }
                Err(e) => Err(usage(e)),
            }
        }
        Command::BuildModel { family, index, depth, s, n } => {
            let ts = match family {
                Family::A => build_a(*index),
                Family::B => {
                    let level = n.unwrap_or(*index);
                    if *s == 0 {
                        return Err(CliError::Usage("family B needs --s >= 1".into()));
                    }
                    build_b(*index, *s, level)
                }
            };
            match depth {
                Some(d) => println!("{}", json::save_tree(&unravel(&ts, *d))),
                None => println!("{}", json::save_transition_system(&ts)),
            }
            Ok(0)
        }
    }
}

fn plain_report(input: &StateFormula, output: StateFormula) -> rewriter::RewriteReport {
    rewriter::RewriteReport {
        input: Formula::State(input.clone()),
        input_size: input.size(),
        output_size: output.size(),
        output: Formula::State(output),
        kind: rewriter::EquivalenceKind::Logical,
        fresh_propositions: Vec::new(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
