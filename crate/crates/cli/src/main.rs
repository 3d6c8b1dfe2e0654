mod report;

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use vpt_core::oracle::{brute_equiv, brute_functional, OracleVerdict};
use vpt_core::pumping::shrink_witness;
use vpt_core::semantics::{accepts, fst_transduce, transduce};
use vpt_core::strategy::{fst_checkers, vpt_checkers};
use vpt_core::vpt_check::{
    check_equiv_functional, domain_equiv, height_bound, CheckOptions, CheckOutcome, DomainComparison, EquivOutcome,
    EquivWitness, Scope,
};
use vpt_core::{out_string, parse_machine, CheckError, Fst, InputWord, Machine, StructuredAlphabet, Vpt};

use report::{Document, WitnessDoc};

#[derive(Parser)]
#[command(name = "vpt", version, about = "Visibly pushdown transducers: run, check functionality and equivalence")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct SearchArgs {
    /// Largest stack height explored; defaults to the exact bound 8N⁴.
    #[arg(long)]
    height_cap: Option<usize>,
    /// Largest search size before giving up with an inconclusive result.
    #[arg(long, env = "VPT_NODE_BUDGET", default_value_t = vpt_core::vpt_check::DEFAULT_NODE_BUDGET)]
    node_budget: usize,
}

impl SearchArgs {
    fn options(&self) -> CheckOptions {
        CheckOptions { height_cap: self.height_cap, node_budget: self.node_budget }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FstMethod {
    Delay,
    Bounded,
}

#[derive(Subcommand)]
enum Command {
    /// Print the outputs of a machine on an input word.
    Run {
        file: PathBuf,
        /// Space-separated input symbols.
        #[arg(long, allow_hyphen_values = true)]
        input: String,
    },
    /// Decide whether a VPT has at most one output per input.
    CheckFunctional {
        file: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        /// Decision procedure: expansion or oracle.
        #[arg(long, default_value = "expansion")]
        strategy: String,
        /// Length bound for the oracle strategy.
        #[arg(long, default_value_t = 12)]
        max_len: usize,
    },
    /// Decide equivalence of two functional VPTs.
    Equiv {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Decide whether two machines accept the same inputs.
    DomainEquiv {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, env = "VPT_NODE_BUDGET", default_value_t = vpt_core::vpt_check::DEFAULT_NODE_BUDGET)]
        node_budget: usize,
    },
    /// Enumerate all inputs up to a length and compare outputs.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        max_len: usize,
        /// Compare against a second machine instead of checking functionality.
        #[arg(long)]
        against: Option<PathBuf>,
    },
    /// Turn a tall input with two outputs into a shorter one.
    Shrink {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        input: String,
        /// Repeat until the height is at most 8N⁴.
        #[arg(long)]
        repeat: bool,
    },
    /// Decide functionality of a finite-state transducer.
    FstCheck {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "delay")]
        method: FstMethod,
        /// Length bound for the bounded method; defaults to 3m².
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Check a machine file for consistency.
    Validate { file: PathBuf },
}

/// Failure that ends the process with exit code 2.
struct Usage(String);

impl<E: Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn load(path: &Path) -> Result<Machine, Usage> {
    let text = std::fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    parse_machine(&text).map_err(|e| Usage(format!("{}:{e}", path.display())))
}

fn load_checked(path: &Path) -> Result<Machine, Usage> {
    let m = load(path)?;
    let report = m.validate();
    if let Some(v) = report.violations.first() {
        return Err(Usage(format!("{}: invalid machine: {v}", path.display())));
    }
    Ok(m)
}

fn load_vpt(path: &Path) -> Result<Vpt, Usage> {
    match load_checked(path)? {
        Machine::Vpt(t) => Ok(t),
        other => Err(Usage(format!("{}: expected a vpt, found a {}", path.display(), other.kind()))),
    }
}

fn load_fst(path: &Path) -> Result<Fst, Usage> {
    match load_checked(path)? {
        Machine::Fst(f) => Ok(f),
        other => Err(Usage(format!("{}: expected an fst, found a {}", path.display(), other.kind()))),
    }
}

fn parse_input(alphabet: &StructuredAlphabet, text: &str) -> Result<InputWord, Usage> {
    alphabet.parse_word(text).map_err(|e| Usage(format!("input: {e}")))
}

fn strings<'a>(words: impl IntoIterator<Item = &'a Vec<char>>) -> Vec<String> {
    words.into_iter().map(|w| out_string(w)).collect()
}

fn witness(alphabet: &StructuredAlphabet, input: &[vpt_core::Sym], outputs: Vec<String>) -> WitnessDoc {
    WitnessDoc { input: alphabet.display_word(input).to_string(), outputs }
}

fn execute(command: Command) -> Result<Document, Usage> {
    Ok(match command {
        Command::Run { file, input } => {
            let m = load_checked(&file)?;
            let u = parse_input(m.alphabet(), &input)?;
            let (accepted, outputs) = match &m {
                Machine::Vpa(a) => (accepts(a, &u), Vec::new()),
                Machine::Vpt(t) => {
                    let outs = transduce(t, &u);
                    (!outs.is_empty(), strings(&outs))
                }
                Machine::Fst(f) => {
                    let outs = fst_transduce(f, &u);
                    (vpt_core::semantics::fst_accepts(f, &u), strings(&outs))
                }
            };
            Document::run(accepted, outputs)
        }
        Command::CheckFunctional { file, search, strategy, max_len } => {
            let t = load_vpt(&file)?;
            let registry = vpt_checkers(max_len);
            let Some(checker) = registry.get(&strategy) else {
                return Err(Usage(format!("unknown strategy `{strategy}`; known: {}", registry.names().join(", "))));
            };
            let opts = search.options();
            let bound = if t.state_count() == 0 { None } else { Some(height_bound(t.state_count())?) };
            let mut doc = Document::new("check-functional");
            doc.strategy = Some(checker.name().to_string());
            doc.height_bound = bound;
            match checker.check(&t, &opts) {
                Ok(CheckOutcome::Functional { exact, scope }) => {
                    doc.result = "functional";
                    doc.functional = Some(true);
                    doc.exact = Some(exact);
                    match scope {
                        Scope::HeightCap(c) => doc.height_cap = Some(c),
                        Scope::InputLength(l) => doc.max_len = Some(l),
                    }
                }
                Ok(CheckOutcome::NonFunctional(w)) => {
                    doc.result = "non-functional";
                    doc.functional = Some(false);
                    doc.exact = Some(true);
                    doc.witness = Some(witness(t.alphabet(), &w.input, strings([&w.out1, &w.out2])));
                }
                Ok(CheckOutcome::Inconclusive { explored, functional_up_to }) => {
                    doc.result = "inconclusive";
                    doc.explored = Some(explored);
                    doc.functional_up_to = functional_up_to;
                }
                Err(e @ CheckError::UnverifiedWitness(_)) => return Err(Usage(format!("internal error: {e}"))),
                Err(e) => return Err(e.into()),
            }
            doc
        }
        Command::Equiv { first, second, search } => {
            let (t1, t2) = (load_vpt(&first)?, load_vpt(&second)?);
            let merged = t1.alphabet().merge(t2.alphabet())?;
            let mut doc = Document::new("equiv");
            match check_equiv_functional(&t1, &t2, &search.options()) {
                Ok(EquivOutcome::Equivalent { exact }) => {
                    doc.result = "equivalent";
                    doc.exact = Some(exact);
                }
                Ok(EquivOutcome::NotEquivalent(EquivWitness::Domain(u))) => {
                    doc.result = "not-equivalent";
                    doc.exact = Some(true);
                    doc.witness_kind = Some("domain");
                    doc.accepted_by = Some(if accepts(&t1.over_alphabet(&merged)?, &u) { 1 } else { 2 });
                    doc.witness = Some(witness(&merged, &u, Vec::new()));
                }
                Ok(EquivOutcome::NotEquivalent(EquivWitness::Output { input, out1, out2 })) => {
                    doc.result = "not-equivalent";
                    doc.exact = Some(true);
                    doc.witness_kind = Some("output");
                    doc.witness = Some(witness(&merged, &input, strings([&out1, &out2])));
                }
                Ok(EquivOutcome::Inconclusive { explored }) => {
                    doc.result = "inconclusive";
                    doc.explored = Some(explored);
                }
                Err(CheckError::NonFunctionalInput { which }) => {
                    doc.result = "input-not-functional";
                    doc.which = Some(which);
                }
                Err(e) => return Err(e.into()),
            }
            doc
        }
        Command::DomainEquiv { first, second, node_budget } => {
            let (t1, t2) = (load_vpt(&first)?, load_vpt(&second)?);
            let merged = t1.alphabet().merge(t2.alphabet())?;
            let opts = CheckOptions { height_cap: None, node_budget };
            let mut doc = Document::new("domain-equiv");
            match domain_equiv(&t1, &t2, &opts)? {
                DomainComparison::Equal => doc.result = "equal",
                DomainComparison::Differ(u) => {
                    doc.result = "differ";
                    doc.accepted_by = Some(if accepts(&t1.over_alphabet(&merged)?, &u) { 1 } else { 2 });
                    doc.witness = Some(witness(&merged, &u, Vec::new()));
                }
                DomainComparison::Inconclusive { explored } => {
                    doc.result = "inconclusive";
                    doc.explored = Some(explored);
                }
            }
            doc
        }
        Command::Oracle { file, max_len, against } => {
            let t1 = load_vpt(&file)?;
            let mut doc = Document::new("oracle");
            doc.bound = Some(max_len);
            let (report, alphabet) = match against {
                None => (brute_functional(&t1, max_len)?, t1.alphabet().clone()),
                Some(path) => {
                    let t2 = load_vpt(&path)?;
                    (brute_equiv(&t1, &t2, max_len)?, t1.alphabet().merge(t2.alphabet())?)
                }
            };
            doc.checked = Some(report.checked_count);
            match report.verdict {
                OracleVerdict::Functional => doc.verdict = Some("functional-up-to"),
                OracleVerdict::EquivUpTo(_) => doc.verdict = Some("equiv-up-to"),
                OracleVerdict::NonFunctional(w) => {
                    doc.verdict = Some("non-functional");
                    doc.witness = Some(witness(&alphabet, &w.input, strings([&w.out1, &w.out2])));
                }
                OracleVerdict::Differ { input, outputs1, outputs2 } => {
                    doc.verdict = Some("differ");
                    doc.witness = Some(witness(&alphabet, &input, Vec::new()));
                    doc.outputs1 = Some(strings(&outputs1));
                    doc.outputs2 = Some(strings(&outputs2));
                }
            }
            doc.result = doc.verdict.unwrap_or_default();
            doc
        }
        Command::Shrink { file, input, repeat } => {
            let t = load_vpt(&file)?;
            let mut u = parse_input(t.alphabet(), &input)?;
            let bound = height_bound(t.state_count())?;
            let before = u.len();
            let mut steps = 0;
            loop {
                u = shrink_witness(&t, &u)?;
                steps += 1;
                if !repeat || vpt_core::nested::height(&u)? <= bound {
                    break;
                }
            }
            let mut doc = Document::new("shrink");
            doc.result = "shrunk";
            doc.length_before = Some(before);
            doc.length_after = Some(u.len());
            doc.steps = Some(steps);
            doc.witness = Some(witness(t.alphabet(), &u, strings(&transduce(&t, &u))));
            doc
        }
        Command::FstCheck { file, method, max_len } => {
            let f = load_fst(&file)?;
            let registry = fst_checkers(max_len);
            let name = match method {
                FstMethod::Delay => "delay",
                FstMethod::Bounded => "bounded",
            };
            let checker = registry.get(name).expect("registered");
            let v = checker.check(&f);
            let mut doc = Document::new("fst-check");
            doc.strategy = Some(name.to_string());
            doc.result = if v.functional { "functional" } else { "non-functional" };
            doc.functional = Some(v.functional);
            doc.exact = Some(v.exact);
            if let Some(w) = v.witness {
                doc.witness = Some(witness(f.alphabet(), &w.input, strings([&w.out1, &w.out2])));
            }
            doc
        }
        Command::Validate { file } => {
            let m = load(&file)?;
            let report = m.validate();
            let mut doc = Document::new("validate");
            doc.result = if report.is_clean() { "clean" } else { "invalid" };
            doc.kind = Some(m.kind());
            doc.violations = Some(report.violations.iter().map(ToString::to_string).collect());
            doc
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(doc) => {
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            if doc.result == "inconclusive" {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
