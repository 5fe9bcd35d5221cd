//! Command-line front end. Verdict commands exit with 0 for yes and 1 for
//! no; any error exits with 2 after a one-line diagnostic on stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use syncord::logic::{automaton_to_formula, compile_formula, parse_formula_with, SetEnv};
use syncord::oracle::verify_against_brute_force;
use syncord::orderdecide::{self, Order, Side};
use syncord::ordertype::{equivalent_orders, order_type};
use syncord::{Direction, Relation, SyncAutomaton, UpSet};

#[derive(Parser)]
#[command(
    name = "syncord",
    version,
    about = "Decide properties of synchronous relations on the naturals"
)]
struct Cli {
    /// Print results as JSON.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Whether the pair (K, L) belongs to the relation.
    Member { file: PathBuf, k: u64, l: u64 },
    /// Check an order property.
    Check { property: Property, file: PathBuf },
    /// Infinite ascending and descending chains, with witnesses.
    Chains { file: PathBuf },
    /// Whether an infinite antichain exists, else the size bound.
    Antichains { file: PathBuf },
    /// Least maximal or minimal element, if any.
    Extremal { side: SideArg, file: PathBuf },
    /// Reduced order type of a linear order.
    Type { file: PathBuf },
    /// Whether two linear orders have the same type.
    Equiv { first: PathBuf, second: PathBuf },
    /// Build a new relation and write it as JSON.
    Op {
        #[command(subcommand)]
        op: Op,
        /// Output file (default: stdout).
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Compile a formula to an automaton.
    Compile {
        formula: String,
        /// Bind a set name: NAME=UP(t=..;p=..;head={..};res={..}).
        #[arg(long = "let", value_name = "NAME=SET")]
        bindings: Vec<String>,
        /// Coordinate order, comma separated (default: free variables sorted).
        #[arg(long)]
        vars: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print a formula over x1..xn defining the relation.
    ToFormula { file: PathBuf },
    /// Print the normal form of a binary relation.
    Normalize { file: PathBuf },
    /// Print the automaton in Graphviz DOT.
    ExportDot { file: PathBuf },
    /// Brute-force checks on a finite prefix.
    Oracle {
        #[command(subcommand)]
        action: OracleAction,
    },
}

#[derive(Subcommand)]
enum Op {
    Union {
        first: PathBuf,
        second: PathBuf,
    },
    Intersect {
        first: PathBuf,
        second: PathBuf,
    },
    Complement {
        file: PathBuf,
    },
    Inverse {
        file: PathBuf,
    },
    Compose {
        first: PathBuf,
        second: PathBuf,
    },
    /// First order followed by the second (supports must be disjoint).
    Sum {
        first: PathBuf,
        second: PathBuf,
    },
    /// {(m x + r, m y + r) : (x, y) in R}.
    Scale {
        file: PathBuf,
        m: u64,
        r: u64,
    },
    /// The natural order restricted to SET.
    Trace {
        set: String,
        direction: DirectionArg,
    },
    /// Append the rest of N ordered as w or w*.
    CompleteWith {
        file: PathBuf,
        completion: Completion,
    },
    /// Close the finitely many gaps in the support.
    Collapse {
        file: PathBuf,
    },
}

#[derive(Subcommand)]
enum OracleAction {
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 100)]
        max: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Order,
    Linear,
    Complete,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Max,
    Min,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Asc,
    Desc,
}

#[derive(Clone, Copy, ValueEnum)]
enum Completion {
    #[value(name = "w", alias = "omega")]
    Omega,
    #[value(name = "w*", alias = "omega-star")]
    OmegaStar,
}

fn load(path: &Path) -> Result<SyncAutomaton> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    SyncAutomaton::from_json_str(&text).with_context(|| format!("{}", path.display()))
}

fn load_relation(path: &Path) -> Result<Relation> {
    Ok(Relation::new(&load(path)?)?)
}

fn write_automaton(a: &SyncAutomaton, output: Option<&Path>) -> Result<()> {
    let text = a.to_json_string();
    match output {
        Some(path) => {
            fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn verdict(json: bool, yes: bool) -> u8 {
    if json {
        println!("{}", json!({ "verdict": yes }));
    } else {
        println!("{}", if yes { "yes" } else { "no" });
    }
    u8::from(!yes)
}

fn run(cli: Cli) -> Result<u8> {
    let json = cli.json;
    match cli.command {
        Command::Member { file, k, l } => {
            let a = load(&file)?;
            if a.arity() != 2 {
                bail!("member needs a binary automaton, got arity {}", a.arity());
            }
            Ok(verdict(json, a.accepts(&[k, l])))
        }
        Command::Check { property, file } => {
            let r = load_relation(&file)?;
            let yes = match property {
                Property::Order => orderdecide::is_strict_order(&r),
                Property::Linear => orderdecide::is_linear(&r)?,
                Property::Complete => orderdecide::is_complete(&r),
            };
            Ok(verdict(json, yes))
        }
        Command::Chains { file } => {
            let order = Order::new(&load_relation(&file)?)?;
            let asc = order.infinite_chain(Direction::Asc);
            let desc = order.infinite_chain(Direction::Desc);
            let body = json!({
                "asc": asc.exists,
                "desc": desc.exists,
                "witness": { "asc": asc.witness, "desc": desc.witness },
            });
            println!("{body}");
            Ok(0)
        }
        Command::Antichains { file } => {
            let order = Order::new(&load_relation(&file)?)?;
            let infinite = order.has_infinite_antichain();
            let bound = order.antichain_bound().ok();
            println!("{}", json!({ "infinite": infinite, "bound": bound }));
            Ok(0)
        }
        Command::Extremal { side, file } => {
            let side = match side {
                SideArg::Max => Side::Max,
                SideArg::Min => Side::Min,
            };
            let found = orderdecide::extremal_element(&load_relation(&file)?, side)?;
            if json {
                println!("{}", json!({ "exists": found.is_some(), "witness": found }));
            } else {
                match found {
                    Some(x) => println!("{x}"),
                    None => println!("none"),
                }
            }
            Ok(u8::from(found.is_none()))
        }
        Command::Type { file } => {
            let ty = order_type(&load_relation(&file)?)?;
            if json {
                println!("{}", json!({ "type": ty.to_string() }));
            } else {
                println!("{ty}");
            }
            Ok(0)
        }
        Command::Equiv { first, second } => {
            let yes = equivalent_orders(&load_relation(&first)?, &load_relation(&second)?)?;
            Ok(verdict(json, yes))
        }
        Command::Op { op, output } => {
            let result = match op {
                Op::Union { first, second } => load(&first)?.union(&load(&second)?)?,
                Op::Intersect { first, second } => load(&first)?.intersection(&load(&second)?)?,
                Op::Complement { file } => load(&file)?.complement(),
                Op::Inverse { file } => load_relation(&file)?.inverse().into_automaton(),
                Op::Compose { first, second } => load_relation(&first)?
                    .compose(&load_relation(&second)?)
                    .into_automaton(),
                Op::Sum { first, second } => load_relation(&first)?
                    .sum_disjoint(&load_relation(&second)?)?
                    .into_automaton(),
                Op::Scale { file, m, r } => load(&file)?.scale(m, r)?,
                Op::Trace { set, direction } => {
                    let set: UpSet = set.parse()?;
                    let direction = match direction {
                        DirectionArg::Asc => Direction::Asc,
                        DirectionArg::Desc => Direction::Desc,
                    };
                    Relation::natural_order_on(&set, direction).into_automaton()
                }
                Op::CompleteWith { file, completion } => {
                    let direction = match completion {
                        Completion::Omega => Direction::Asc,
                        Completion::OmegaStar => Direction::Desc,
                    };
                    load_relation(&file)?
                        .complete_with(direction)?
                        .into_automaton()
                }
                Op::Collapse { file } => load_relation(&file)?
                    .collapse_finite_complement()?
                    .into_automaton(),
            };
            write_automaton(&result, output.as_deref())?;
            Ok(0)
        }
        Command::Compile {
            formula,
            bindings,
            vars,
            output,
        } => {
            let mut env = SetEnv::default();
            for binding in &bindings {
                let (name, set) = binding
                    .split_once('=')
                    .ok_or_else(|| anyhow!("--let expects NAME=SET, got `{binding}`"))?;
                env.bind(name.trim(), set.parse()?)?;
            }
            let f = parse_formula_with(&formula, &env)?;
            let vars: Option<Vec<String>> = vars.map(|v| {
                v.split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect()
            });
            let (a, names) = compile_formula(&f, vars.as_deref())?;
            if json && output.is_some() {
                println!("{}", json!({ "vars": names }));
            }
            write_automaton(&a, output.as_deref())?;
            Ok(0)
        }
        Command::ToFormula { file } => {
            let f = automaton_to_formula(&load(&file)?)?;
            if json {
                println!("{}", json!({ "formula": f.to_string() }));
            } else {
                println!("{f}");
            }
            Ok(0)
        }
        Command::Normalize { file } => {
            print!("{}", load_relation(&file)?.normal_form().dump());
            Ok(0)
        }
        Command::ExportDot { file } => {
            print!("{}", load(&file)?.to_dot());
            Ok(0)
        }
        Command::Oracle {
            action: OracleAction::Verify { file, max },
        } => {
            let report = verify_against_brute_force(&load(&file)?, max)?;
            println!("{}", serde_json::to_string(&report)?);
            Ok(u8::from(!report.is_clean()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let msg = format!("{e:#}").replace('\n', " ");
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
