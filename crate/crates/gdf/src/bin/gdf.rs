//! Command-line surface for the Gauss diagram pipeline: expansions, snip
//! trees, the descending projection, formula tables, formula and oracle
//! evaluation, and the verification suites.
//!
//! Diagram codes are given inline with `--code` or read from a file with
//! `--input`.  All randomized suites take an explicit `--seed` (default 7)
//! and print it, so runs are reproducible byte for byte.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gdf::braid;
use gdf::diagram::{GaussDiagram, PlanarDiagram};
use gdf::error::Error;
use gdf::expansion::{eval_formula, s_diagram, s_inv_diagram, FormulaTable};
use gdf::oracle::{alexander, c2_invariant, eval_singular_pd};
use gdf::projection::{Pipeline, Routing};
use gdf::tree::c;
use gdf::verify;
use gdf::words;

#[derive(Parser)]
#[command(name = "gdf", about = "Gauss diagram formulas for finite type invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DiagramInput {
    /// Inline diagram code, e.g. "O1+ U2+ O3+ U1+ O2+ U3+"
    #[arg(long)]
    code: Option<String>,
    /// File containing a diagram code
    #[arg(long)]
    input: Option<String>,
}

impl DiagramInput {
    fn read(&self) -> Result<GaussDiagram, Error> {
        let text = match (&self.code, &self.input) {
            (Some(c), None) => c.clone(),
            (None, Some(path)) => fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("{path}: {e}")))?,
            _ => return Err(Error::Parse("give exactly one of --code or --input".into())),
        };
        GaussDiagram::parse(text.trim())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RoutingArg {
    Standard,
    Reverse,
}

impl From<RoutingArg> for Routing {
    fn from(r: RoutingArg) -> Routing {
        match r {
            RoutingArg::Standard => Routing::Standard,
            RoutingArg::Reverse => Routing::Reverse,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sum over all subdiagrams of a diagram
    S(DiagramInput),
    /// Signed inclusion-exclusion inverse of the subdiagram sum
    Sinv(DiagramInput),
    /// Snip-tree serialization of a diagram
    Tree(DiagramInput),
    /// Project a diagram to a signed sum of descending planar diagrams
    Project {
        #[command(flatten)]
        input: DiagramInput,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = RoutingArg::Standard)]
        routing: RoutingArg,
    },
    /// Formula table of the degree-2 invariant, as JSON
    Omega {
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// Write the table here instead of stdout
        #[arg(long)]
        out: Option<String>,
    },
    /// Evaluate a formula table on a diagram
    Eval {
        /// JSON table produced by `omega`
        #[arg(long)]
        table: String,
        #[command(flatten)]
        input: DiagramInput,
    },
    /// Evaluate an oracle invariant on a planar diagram or braid closure
    Oracle {
        /// alexander or c2
        #[arg(long, default_value = "c2")]
        invariant: String,
        /// Planar diagram code
        #[arg(long)]
        pd: Option<String>,
        /// Braid word, signed generator indices like "1 -2 1"
        #[arg(long)]
        braid: Option<String>,
        #[arg(long, default_value_t = 2)]
        strands: usize,
    },
    /// Run a verification suite and print its report
    Verify {
        /// lemma1, lemma2, lemma3, main, or words
        suite: String,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Exhaustive bound for the lemma1 inversion check
        #[arg(long)]
        max_chords: Option<usize>,
        /// Write the JSON report here (the summary still goes to stdout)
        #[arg(long)]
        out: Option<String>,
    },
    /// Word analogues: subword expansion, tables, evaluation, verification
    Word {
        #[command(subcommand)]
        command: WordCommand,
    },
}

#[derive(Subcommand)]
enum WordCommand {
    /// Signed subword expansion of a word, e.g. --code "a b a'"
    Sinv {
        #[arg(long)]
        code: String,
    },
    /// Subword formula table for a named invariant, as JSON
    Omega {
        /// exp_<g>, <name>*<name>, or lk_<i>_<j>
        #[arg(long, default_value = "exp_a*exp_b")]
        invariant: String,
        /// Space-separated generator names; defaults to "a b", or the
        /// pure braid generators for lk invariants
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long, default_value_t = 3)]
        strands: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Evaluate a word formula table on a word
    Eval {
        #[arg(long)]
        table: String,
        #[arg(long)]
        code: String,
    },
    /// Run the word verification suite
    Verify {
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn write_or_print(out: &Option<String>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
            println!("wrote {path}");
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::S(input) => {
            print!("{}", s_diagram(&input.read()?).dump());
        }
        Command::Sinv(input) => {
            print!("{}", s_inv_diagram(&input.read()?).dump());
        }
        Command::Tree(input) => {
            println!("{}", c(&input.read()?));
        }
        Command::Project { input, degree, routing } => {
            let mut pipe =
                Pipeline::new(c2_invariant(), degree).with_routing(routing.into());
            print!("{}", pipe.p_diagram(&input.read()?)?.dump());
        }
        Command::Omega { degree, out } => {
            let table = Pipeline::new(c2_invariant(), degree).omega_table()?;
            let js = serde_json::to_string_pretty(&table)
                .map_err(|e| Error::Parse(e.to_string()))?;
            write_or_print(&out, &format!("{js}\n"))?;
        }
        Command::Eval { table, input } => {
            let text = fs::read_to_string(&table)
                .map_err(|e| Error::Parse(format!("{table}: {e}")))?;
            let table: FormulaTable =
                serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            println!("{}", eval_formula(&table, &input.read()?));
        }
        Command::Oracle { invariant, pd, braid, strands } => {
            let pd = match (pd, braid) {
                (Some(code), None) => PlanarDiagram::from_key(&code)?,
                (None, Some(word)) => {
                    let mut letters = Vec::new();
                    for tok in word.split_whitespace() {
                        let v: i64 = tok
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad braid letter {tok:?}")))?;
                        letters.push((v.unsigned_abs() as usize, if v < 0 { -1 } else { 1 }));
                    }
                    braid::braid_closure(strands, &letters)?.1
                }
                _ => return Err(Error::Parse("give exactly one of --pd or --braid".into())),
            };
            match invariant.as_str() {
                "alexander" => println!("{}", alexander(&pd)?.to_string_pretty()),
                "c2" => println!("{}", eval_singular_pd(&pd, &c2_invariant())?),
                other => {
                    return Err(Error::Parse(format!(
                        "unknown invariant {other:?}; expected alexander or c2"
                    )))
                }
            }
        }
        Command::Verify { suite, seed, max_chords, out } => {
            let report = match (suite.as_str(), max_chords) {
                ("lemma1", Some(bound)) => verify::Report {
                    suite: "lemma1".to_string(),
                    checks: vec![
                        verify::check_inversion_exhaustive(bound),
                        verify::check_inversion_random(seed, 200),
                    ],
                },
                _ => verify::run_suite(&suite, seed)?,
            };
            println!("seed {seed}");
            print!("{}", report.summary());
            if let Some(path) = out {
                let js = serde_json::to_string_pretty(&report)
                    .map_err(|e| Error::Parse(e.to_string()))?;
                fs::write(&path, format!("{js}\n"))
                    .map_err(|e| Error::Parse(format!("{path}: {e}")))?;
            }
            return Ok(report.passed());
        }
        Command::Word { command } => match command {
            WordCommand::Sinv { code } => {
                print!("{}", words::s_inv_word_one(&words::Word::parse(&code)?).dump());
            }
            WordCommand::Omega { invariant, alphabet, strands, out } => {
                let nu = words::named_invariant(&invariant, strands)?;
                let alphabet = match alphabet {
                    Some(a) => a.split_whitespace().map(str::to_string).collect(),
                    None if invariant.starts_with("lk_") => {
                        words::pure_braid_alphabet(strands)
                    }
                    None => vec!["a".to_string(), "b".to_string()],
                };
                let table = words::omega_word_table(&nu, nu.degree, &alphabet)?;
                let js = serde_json::to_string_pretty(&table)
                    .map_err(|e| Error::Parse(e.to_string()))?;
                write_or_print(&out, &format!("{js}\n"))?;
            }
            WordCommand::Eval { table, code } => {
                let text = fs::read_to_string(&table)
                    .map_err(|e| Error::Parse(format!("{table}: {e}")))?;
                let table: words::WordFormulaTable =
                    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
                println!("{}", words::eval_word_formula(&table, &words::Word::parse(&code)?));
            }
            WordCommand::Verify { seed } => {
                let report = verify::words_suite(seed);
                println!("seed {seed}");
                print!("{}", report.summary());
                return Ok(report.passed());
            }
        },
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
