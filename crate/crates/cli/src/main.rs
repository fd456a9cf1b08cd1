//! `autolin` command-line front end. JSON goes to standard output unless
//! `--pretty` asks for a short human summary.

mod load;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use autolin::automata::json::{dfa_to_string, render};
use autolin::automata::{
    boolean, complement, determinize, equivalent, is_empty, minimize, prefix_closure, project,
    right_quotient_symbol, BoolOp,
};
use autolin::autofn::{check_functional, length_bound, Functionality};
use autolin::compile::{compile, verify_machine};
use autolin::crossing::{extract_automatic, DEFAULT_STATE_CAP};
use autolin::learning::{run_session, LearnVerdict, Text, TextKind};
use autolin::symbol::{parse_word, show, Symbol};
use autolin::tm::{default_budget, run_deterministic, run_nondet, run_traced, visit_bound_estimate};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use load::CliError;

#[derive(Parser)]
#[command(name = "autolin", version, about = "Automatic functions, linear-time machines and automatic learners")]
struct Cli {
    /// Human-readable summary instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Built-in functions, relations, machines, families and learners.
    Fixtures {
        #[command(subcommand)]
        cmd: FixturesCmd,
    },
    /// Evaluates an automatic function on one input.
    Eval {
        #[arg(long)]
        function: String,
        #[arg(long)]
        input: String,
    },
    /// Decides functionality of a binary relation and reports its length slack.
    CheckFunction {
        #[arg(long)]
        relation: String,
    },
    /// Compiles an automatic function into a one-tape machine.
    Compile {
        #[arg(long)]
        function: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compares a compiled machine with the function on all short inputs.
    VerifyCompile {
        #[arg(long)]
        function: String,
        #[arg(long, default_value_t = 8)]
        maxlen: usize,
        /// Check this machine instead of compiling afresh.
        #[arg(long)]
        machine: Option<String>,
    },
    /// Runs a machine on one input.
    RunTm {
        #[arg(long)]
        machine: String,
        #[arg(long)]
        input: String,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Explore every branch of a nondeterministic machine.
        #[arg(long)]
        nondet: bool,
    },
    /// Recovers the automatic function computed by a linear-time machine.
    Extract {
        #[arg(long)]
        machine: String,
        #[arg(long, default_value_t = 4)]
        rate: usize,
        /// Visit bound; estimated from runs up to length 6 when absent.
        #[arg(long)]
        visits: Option<usize>,
        #[arg(long, default_value_t = 5)]
        validate_len: usize,
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Automatic family analysis.
    Family {
        #[command(subcommand)]
        cmd: FamilyCmd,
    },
    /// Runs a learning session on a text for one target index.
    Learn(LearnArgs),
    /// Regular-language operations on automata in JSON form.
    Automaton {
        #[command(subcommand)]
        cmd: AutomatonCmd,
    },
}

#[derive(Subcommand)]
enum FixturesCmd {
    List,
    /// Prints the JSON form of a fixture.
    Dump { name: String },
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Minimal DFA of the language of one index.
    Language {
        #[arg(long)]
        family: String,
        #[arg(long)]
        index: String,
    },
    /// Indices whose slice up to length `b` is a tell-tale.
    Telltale {
        #[arg(long)]
        family: String,
        #[arg(long)]
        b: usize,
    },
    /// Tell-tale levels for every index up to a length.
    Scan {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 3)]
        index_len: usize,
        #[arg(long, default_value_t = 5)]
        bmax: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TextArg {
    Canonical,
    Fat,
    Permuted,
    Scripted,
}

#[derive(Args)]
struct LearnArgs {
    #[arg(long)]
    family: String,
    /// `missing-string`, `twotape:NAME`, `queue:NAME`, `stackpair:NAME` or `theorem35`.
    #[arg(long)]
    learner: String,
    #[arg(long, value_enum, default_value = "canonical")]
    text: TextArg,
    #[arg(long)]
    target: String,
    #[arg(long, default_value_t = 600)]
    cycles: usize,
    #[arg(long)]
    rate: Option<usize>,
    #[arg(long)]
    slack: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Word length limit of a permuted text.
    #[arg(long, default_value_t = 4)]
    maxlen: usize,
    /// Leading words of a scripted text, comma separated.
    #[arg(long, value_delimiter = ',')]
    prefix: Vec<String>,
    #[arg(long)]
    report: Option<PathBuf>,
    /// Record device contents after every cycle in the report.
    #[arg(long)]
    devices: bool,
}

#[derive(Subcommand)]
enum AutomatonCmd {
    Determinize { a: String },
    Minimize { a: String },
    Complement { a: String },
    And { a: String, b: String },
    Or { a: String, b: String },
    Diff { a: String, b: String },
    /// Exits 1 with a distinguishing word when the languages differ.
    Equiv { a: String, b: String },
    /// Exits 1 with a shortest word when the language is non-empty.
    Empty { a: String },
    PrefixClosure { a: String },
    /// Right quotient by the all-padding symbol of a convolution automaton.
    PadQuotient { a: String },
    Project {
        a: String,
        #[arg(long, value_delimiter = ',', required = true)]
        keep: Vec<usize>,
    },
    /// Exits 1 when the word is rejected.
    Accepts {
        a: String,
        #[arg(long)]
        word: String,
    },
}

/// What a command prints and how it ends.
struct Outcome {
    json: String,
    summary: String,
    ok: bool,
}

impl Outcome {
    fn new<T: Serialize>(value: &T, summary: impl Into<String>, ok: bool) -> Self {
        Outcome { json: render(value), summary: summary.into(), ok }
    }

    fn raw(json: String, summary: impl Into<String>) -> Self {
        Outcome { json, summary: summary.into(), ok: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(out) => {
            if cli.pretty {
                println!("{}", out.summary);
            } else {
                print!("{}", out.json);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status())
        }
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(path.display().to_string(), e.to_string()))
}

fn dispatch(cmd: Cmd) -> Result<Outcome, CliError> {
    Ok(match cmd {
        Cmd::Fixtures { cmd: FixturesCmd::List } => {
            let all = load::catalog();
            let summary = all.iter().map(|(n, k)| format!("{n}\t{k}")).collect::<Vec<_>>().join("\n");
            let list: Vec<_> = all.iter().map(|(n, k)| json!({"name": n, "kind": k})).collect();
            Outcome::new(&list, summary, true)
        }
        Cmd::Fixtures { cmd: FixturesCmd::Dump { name } } => {
            let text = load::dump(&name)?;
            Outcome::raw(text, format!("{name}: dumped"))
        }
        Cmd::Eval { function, input } => {
            let f = load::function(&function)?;
            let x = load::input(&input, f.input_alphabet())?;
            match f.evaluate(&x)? {
                Some(y) => Outcome { json: format!("{}\n", show(&y)), summary: show(&y), ok: true },
                None => Outcome { json: "null\n".into(), summary: format!("{input:?} is outside the domain"), ok: false },
            }
        }
        Cmd::CheckFunction { relation } => {
            let r = load::relation(&relation)?;
            match check_functional(&r)? {
                Functionality::Functional => {
                    let c = length_bound(&r)?;
                    Outcome::new(&json!({"functional": true, "slack": c}), format!("functional, slack {c}"), true)
                }
                Functionality::Counterexample { input, first, second } => {
                    let (x, a, b) = (show(&input), show(&first), show(&second));
                    let summary = format!("not functional: {x:?} maps to {a:?} and {b:?}");
                    Outcome::new(
                        &json!({"functional": false, "counterexample": {"input": x, "first": a, "second": b}}),
                        summary,
                        false,
                    )
                }
            }
        }
        Cmd::Compile { function, out } => {
            let m = compile(&load::function(&function)?)?;
            let text = m.to_json_string();
            let summary = format!("{} states, {} transitions", m.states().len(), m.to_json().transitions.len());
            match out {
                Some(p) => {
                    write(&p, &text)?;
                    Outcome::new(&json!({"out": p.display().to_string(), "states": m.states().len()}), summary, true)
                }
                None => Outcome::raw(text, summary),
            }
        }
        Cmd::VerifyCompile { function, maxlen, machine } => {
            let f = load::function(&function)?;
            let m = match machine {
                Some(m) => load::machine(&m)?,
                None => compile(&f)?,
            };
            let r = verify_machine(&f, &m, maxlen)?;
            let summary = format!(
                "{} inputs up to {maxlen}: {} failures, max steps {}, max visits {}",
                r.inputs,
                r.failures.len(),
                r.max_steps,
                r.max_visits
            );
            Outcome::new(&r, summary, r.passed())
        }
        Cmd::RunTm { machine, input, budget, trace, nondet } => {
            let m = load::machine(&machine)?;
            let x = load::input(&input, m.input_alphabet())?;
            let budget = budget.unwrap_or_else(|| default_budget(x.len()));
            if nondet {
                let r = run_nondet(&m, &x, budget)?;
                let summary = match r.output() {
                    Some(y) => format!("accepted, output {:?}", show(y)),
                    None => "no accepting branch".into(),
                };
                let ok = !r.accepting.is_empty();
                return Ok(Outcome::new(&r, summary, ok));
            }
            let mut r = if trace.is_some() { run_traced(&m, &x, budget)? } else { run_deterministic(&m, &x, budget)? };
            if let (Some(p), Some(t)) = (&trace, r.trace.take()) {
                write(p, &render(&t))?;
            }
            let output = r.output.as_deref().map_or_else(|| "none".to_string(), |y| format!("{:?}", show(y)));
            let summary = format!("{:?} after {} steps, max visits {}, output {output}", r.outcome, r.steps, r.max_visits());
            let ok = r.accepted();
            Outcome::new(&r, summary, ok)
        }
        Cmd::Extract { machine, rate, visits, validate_len, cap, out } => {
            let m = load::machine(&machine)?;
            let visits = match visits {
                Some(v) => v,
                None => visit_bound_estimate(&m, 6)?.ok_or_else(|| {
                    CliError::Verdict("machine exceeds the default budget; pass --visits".into())
                })?,
            };
            let (f, r) = extract_automatic(&m, rate, visits, validate_len, cap)?;
            if let Some(p) = out {
                write(&p, &dfa_to_string(f.graph()))?;
            }
            let summary = format!(
                "graph with {} states, slack {}, validated on {} inputs",
                r.graph_states, r.slack, r.validated_inputs
            );
            Outcome::new(&r, summary, true)
        }
        Cmd::Family { cmd } => family(cmd)?,
        Cmd::Learn(args) => learn(args)?,
        Cmd::Automaton { cmd } => automaton(cmd)?,
    })
}

fn family(cmd: FamilyCmd) -> Result<Outcome, CliError> {
    Ok(match cmd {
        FamilyCmd::Language { family, index } => {
            let fam = load::family(&family)?;
            let e = load::input(&index, fam.index_alphabet())?;
            let d = fam.language_of(&e)?;
            Outcome::raw(dfa_to_string(&d), format!("language of {index:?}: {} states", d.num_states()))
        }
        FamilyCmd::Telltale { family, b } => {
            let d = load::family(&family)?.telltale_level_set(b)?;
            Outcome::raw(dfa_to_string(&d), format!("tell-tale level {b}: {} states", d.num_states()))
        }
        FamilyCmd::Scan { family, index_len, bmax } => {
            let r = load::family(&family)?.learnability_scan(index_len, bmax)?;
            let lines: Vec<String> = r
                .entries
                .iter()
                .map(|e| match (e.level, &e.witness) {
                    (Some(b), _) => format!("{:?}\tlevel {b}", e.index),
                    (None, Some(w)) => format!("{:?}\tuncertified, blocked by {w:?}", e.index),
                    (None, None) => format!("{:?}\tuncertified", e.index),
                })
                .collect();
            let ok = r.passed();
            Outcome::new(&r, lines.join("\n"), ok)
        }
    })
}

fn learn(a: LearnArgs) -> Result<Outcome, CliError> {
    let fam = load::family(&a.family)?;
    let spec = load::learner(&a.learner)?;
    let target = load::input(&a.target, fam.index_alphabet())?;
    let kind = match a.text {
        TextArg::Canonical => TextKind::Canonical,
        TextArg::Fat => TextKind::Fat,
        TextArg::Permuted => TextKind::Permuted { maxlen: a.maxlen },
        TextArg::Scripted => TextKind::Scripted {
            prefix: a.prefix.iter().map(|w| parse_word(w, fam.word_alphabet())).collect(),
        },
    };
    let lang = fam.language_of(&target)?;
    let mut text = Text::new(kind, &lang, a.seed)?;
    let mut l = spec.build()?;
    let rate = a.rate.unwrap_or(l.rate());
    let slack = a.slack.unwrap_or(l.slack());
    let r = run_session(l.as_mut(), &mut text, a.cycles, rate, slack, a.devices)?;
    if let Some(p) = &a.report {
        write(p, &render(&r))?;
    }
    let h = &r.final_hypothesis;
    let correct = fam.is_index(h) && fam.index_equivalent(h, &target)?;
    let v = LearnVerdict {
        target: show(&target),
        final_hypothesis: show(h),
        last_change: r.last_change,
        converged: r.converged,
        correct,
        budget_ok: r.budget_ok(),
        passed: r.converged && correct && r.budget_ok(),
    };
    let summary = format!(
        "{spec} on {:?}: hypothesis {:?} since cycle {}, converged {}, correct {}, budget violations {}",
        v.target, v.final_hypothesis, v.last_change, v.converged, v.correct, r.budget_violations
    );
    let ok = v.passed;
    Ok(Outcome::new(&v, summary, ok))
}

fn automaton(cmd: AutomatonCmd) -> Result<Outcome, CliError> {
    let dfa = |d: autolin::Dfa, what: &str| {
        let summary = format!("{what}: {} states", d.num_states());
        Outcome::raw(dfa_to_string(&d), summary)
    };
    let word_json = |w: &[Symbol]| w.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    Ok(match cmd {
        AutomatonCmd::Determinize { a } => dfa(determinize(&load::nfa(&a)?), "determinized"),
        AutomatonCmd::Minimize { a } => dfa(minimize(&load::dfa(&a)?), "minimized"),
        AutomatonCmd::Complement { a } => dfa(complement(&load::dfa(&a)?), "complement"),
        AutomatonCmd::And { a, b } => dfa(minimize(&boolean(BoolOp::And, &load::dfa(&a)?, &load::dfa(&b)?)?), "intersection"),
        AutomatonCmd::Or { a, b } => dfa(minimize(&boolean(BoolOp::Or, &load::dfa(&a)?, &load::dfa(&b)?)?), "union"),
        AutomatonCmd::Diff { a, b } => dfa(minimize(&boolean(BoolOp::Diff, &load::dfa(&a)?, &load::dfa(&b)?)?), "difference"),
        AutomatonCmd::Equiv { a, b } => {
            let e = equivalent(&load::dfa(&a)?, &load::dfa(&b)?)?;
            let cex = e.counterexample.as_deref().map(word_json);
            let summary = match &cex {
                None => "equivalent".to_string(),
                Some(w) => format!("differ on [{}]", w.join(", ")),
            };
            Outcome::new(&json!({"equal": e.equal, "counterexample": cex}), summary, e.equal)
        }
        AutomatonCmd::Empty { a } => {
            let w = is_empty(&load::dfa(&a)?);
            let summary = match &w {
                None => "empty".to_string(),
                Some(w) => format!("accepts [{}]", word_json(w).join(", ")),
            };
            Outcome::new(&json!({"empty": w.is_none(), "witness": w.as_deref().map(word_json)}), summary, w.is_none())
        }
        AutomatonCmd::PrefixClosure { a } => dfa(minimize(&determinize(&prefix_closure(&load::nfa(&a)?))), "prefix closure"),
        AutomatonCmd::PadQuotient { a } => {
            let n = load::nfa(&a)?;
            let arity = n.alphabet().arity().ok_or(autolin::Error::NotConvolution)?;
            let q = right_quotient_symbol(&n, &Symbol::Tuple(vec![None; arity]))?;
            dfa(minimize(&determinize(&q)), "quotient")
        }
        AutomatonCmd::Project { a, keep } => dfa(minimize(&determinize(&project(&load::dfa(&a)?, &keep)?)), "projection"),
        AutomatonCmd::Accepts { a, word } => {
            let d = load::dfa(&a)?;
            let w = load::symbols(d.alphabet(), &word)?;
            let yes = d.accepts(&w);
            Outcome::new(&json!({"accepted": yes}), if yes { "accepted" } else { "rejected" }, yes)
        }
    })
}
