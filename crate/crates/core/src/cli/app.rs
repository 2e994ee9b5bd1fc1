//! Command-line front end. `run` parses arguments, dispatches and returns the
//! process exit code.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::constructions::{ba_control, Abstraction, AbstractionBudget, Outcome, PipelineBudget};
use crate::decide::{self, Class, DecideBudget};
use crate::error::{Error, Result};
use crate::model::{align_alphabets, hardness_pair, Vass, Word};
use crate::monoid::{decorate_vass, transition_monoid};
use crate::oracle;
use crate::reachability::{empty_updown, Answer, BudgetReport, SearchBudget, Verdict};

use super::format::{parse_file, print_model};
use super::monoid_file::parse_monoid;

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "vassinc", version, about = "Emptiness, inclusion and equivalence for VASS languages")]
pub struct Cli {
    #[command(flatten)]
    pub opts: Opts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Node cap for searches, abstractions and complement constructions.
    #[arg(long, global = true, default_value_t = 200_000)]
    pub max_nodes: usize,
    /// Counter-sum cap for the pruned forward reachability search.
    #[arg(long, global = true, default_value_t = 64)]
    pub max_counter_sum: u64,
    /// Largest threshold tried by adaptive abstraction.
    #[arg(long, global = true, default_value_t = 64)]
    pub abstraction_cap: u64,
    /// Word length bound for the brute-force oracles.
    #[arg(long, global = true, default_value_t = 6)]
    pub oracle_len: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Is the language empty? A counterexample is an accepted word.
    Empty { model: PathBuf },
    /// Is WORD accepted?
    Member { model: PathBuf, word: String },
    /// Number of accepting runs over WORD.
    Runs { model: PathBuf, word: String },
    /// Is L(A) included in L(B)? B must belong to the class.
    Include {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_parser = parse_class)]
        class: Class,
    },
    /// Is L(A) = L(B)? Both must belong to the class.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_parser = parse_class)]
        class: Class,
    },
    /// Prints a VASS for the complement language.
    Complement {
        model: PathBuf,
        #[arg(long, value_parser = parse_class)]
        class: Class,
    },
    /// Decorates the letters with monoid elements of the suffix.
    Decorate {
        model: PathBuf,
        #[arg(long, conflicts_with = "transition_monoid")]
        monoid: Option<PathBuf>,
        /// Use the transition monoid of the control automaton (the default).
        #[arg(long)]
        transition_monoid: bool,
    },
    /// Counter abstraction of an upward VASS.
    Abstract {
        model: PathBuf,
        /// Prints the finite automaton of the abstraction at this threshold.
        #[arg(long, required_unless_present = "adaptive", conflicts_with = "adaptive")]
        threshold: Option<u64>,
        /// Searches for a threshold making the control k-ambiguous and
        /// prints the VASS with that control.
        #[arg(long)]
        adaptive: bool,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Does every word have at most K accepting runs?
    Ambiguity {
        model: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Deterministic pair whose languages coincide iff the singleton seed's
    /// target is unreachable.
    GenHard {
        seed: PathBuf,
        /// Writes PREFIX.v1.vass and PREFIX.v2.vass instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brute-force checks over words up to --oracle-len.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Accepted words, one per line.
    Lang { model: PathBuf },
    Include { a: PathBuf, b: PathBuf },
    Equiv { a: PathBuf, b: PathBuf },
    /// Largest number of accepting runs over one word.
    Ambiguity { model: PathBuf },
    /// Largest number of maximal runs of the control automaton over one word.
    Maxruns { model: PathBuf },
}

fn parse_class(s: &str) -> std::result::Result<Class, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct BudgetJson {
    pub max_nodes: usize,
    pub max_counter_sum: u64,
    pub abstraction_cap: u64,
    pub oracle_len: usize,
    pub nodes_expanded: usize,
    pub frontier: usize,
    pub cutoff: Option<String>,
}

/// What every command reports. `output` holds the printed model, word list
/// or count for commands that produce one.
#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub verdict: Answer,
    pub counterexample: Option<String>,
    pub budget: BudgetJson,
    pub output: Option<String>,
}

impl Opts {
    fn search(&self) -> SearchBudget {
        SearchBudget { max_nodes: self.max_nodes, max_counter_sum: self.max_counter_sum }
    }

    fn decide(&self) -> DecideBudget {
        DecideBudget {
            search: self.search(),
            pipeline: PipelineBudget {
                abstraction: self.abstraction(),
                max_states: self.max_nodes,
                ..PipelineBudget::default()
            },
        }
    }

    fn abstraction(&self) -> AbstractionBudget {
        AbstractionBudget { max_threshold: self.abstraction_cap, max_nodes: self.max_nodes }
    }

    fn report(&self, verdict: Answer, counterexample: Option<String>, spent: &BudgetReport) -> Report {
        Report {
            verdict,
            counterexample,
            budget: BudgetJson {
                max_nodes: self.max_nodes,
                max_counter_sum: self.max_counter_sum,
                abstraction_cap: self.abstraction_cap,
                oracle_len: self.oracle_len,
                nodes_expanded: spent.nodes_expanded,
                frontier: spent.frontier,
                cutoff: spent.cutoff.clone(),
            },
            output: None,
        }
    }

    fn done(&self, output: String) -> Report {
        Report { output: Some(output), ..self.report(Answer::Yes, None, &BudgetReport::default()) }
    }

    fn gave_up(&self, why: String) -> Report {
        self.report(Answer::Unknown, None, &BudgetReport { cutoff: Some(why), ..BudgetReport::default() })
    }
}

/// Letters separated by spaces; `eps` is the empty word.
pub fn render_word(v: &Vass, w: &[usize]) -> String {
    if w.is_empty() {
        "eps".into()
    } else {
        v.word_names(w).join(" ")
    }
}

/// Whitespace- or comma-separated letter names, or one character per letter
/// when every letter is a single character. `eps` and "" are the empty word.
pub fn parse_word(v: &Vass, s: &str) -> Result<Word> {
    let s = s.trim();
    if s.is_empty() || s == "eps" {
        return Ok(vec![]);
    }
    if s.contains(|c: char| c.is_whitespace() || c == ',') {
        let parts: Vec<&str> = s.split(|c: char| c.is_whitespace() || c == ',').filter(|p| !p.is_empty()).collect();
        return v.parse_word(&parts);
    }
    if v.symbol(s).is_some() {
        return Ok(vec![v.symbol(s).unwrap_or_default()]);
    }
    if v.alphabet.iter().all(|a| a.chars().count() == 1) {
        let chars: Vec<String> = s.chars().map(String::from).collect();
        return v.parse_word(&chars.iter().map(String::as_str).collect::<Vec<_>>());
    }
    Err(Error::InvalidArgument(format!("cannot split {s:?} into letters of the alphabet")))
}

fn load(p: &Path) -> Result<Vass> {
    parse_file(&p.to_string_lossy())
}

fn verdict_report(opts: &Opts, v: &Vass, verdict: &Verdict) -> Report {
    let cex = verdict.witness.as_ref().map(|w| render_word(v, w));
    opts.report(verdict.answer, cex, &verdict.report)
}

fn outcome(opts: &Opts, o: Outcome<Vass>) -> Report {
    match o {
        Outcome::Done(c) => opts.done(print_model(&c)),
        Outcome::Unknown(why) => opts.gave_up(why),
    }
}

fn flip_emptiness(v: Verdict) -> Verdict {
    let answer = match v.answer {
        Answer::Yes => Answer::No,
        Answer::No => Answer::Yes,
        Answer::Unknown => Answer::Unknown,
    };
    Verdict { answer, ..v }
}

fn bounded(opts: &Opts, v: &Vass, cex: Option<Word>) -> Report {
    match cex {
        Some(w) => opts.report(Answer::No, Some(render_word(v, &w)), &BudgetReport::default()),
        None => opts.report(Answer::Yes, None, &BudgetReport::default()),
    }
}

/// Runs one parsed command.
pub fn execute(cli: &Cli) -> Result<Report> {
    let o = &cli.opts;
    Ok(match &cli.command {
        Command::Empty { model } => {
            let v = load(model)?;
            verdict_report(o, &v, &flip_emptiness(empty_updown(&v, &o.search())?))
        }
        Command::Member { model, word } => {
            let v = load(model)?;
            let w = parse_word(&v, word)?;
            let answer = if oracle::accepts(&v, &w)? { Answer::Yes } else { Answer::No };
            o.report(answer, None, &BudgetReport::default())
        }
        Command::Runs { model, word } => {
            let v = load(model)?;
            let w = parse_word(&v, word)?;
            o.done(oracle::count_accepting_runs(&v, &w)?.to_string())
        }
        Command::Include { a, b, class } => {
            let (v1, v2) = align_alphabets(&load(a)?, &load(b)?)?;
            verdict_report(o, &v1, &decide::include(&v1, &v2, *class, &o.decide())?)
        }
        Command::Equiv { a, b, class } => {
            let (v1, v2) = align_alphabets(&load(a)?, &load(b)?)?;
            verdict_report(o, &v1, &decide::equivalent(&v1, &v2, *class, &o.decide())?)
        }
        Command::Complement { model, class } => outcome(o, decide::complement(&load(model)?, *class, &o.decide())?),
        Command::Decorate { model, monoid, .. } => {
            let v = load(model)?;
            let (m, h) = match monoid {
                Some(p) => {
                    let path = p.to_string_lossy();
                    let text = std::fs::read_to_string(p).map_err(|e| Error::Io { path: path.to_string(), msg: e.to_string() })?;
                    parse_monoid(&text, &path, &v)?
                }
                None => {
                    let tm = transition_monoid(&v.control_automaton(), o.decide().pipeline.max_monoid)?;
                    (tm.monoid, tm.hom)
                }
            };
            o.done(print_model(&decorate_vass(&v, &m, &h)?))
        }
        Command::Abstract { model, threshold, k, .. } => {
            let v = load(model)?;
            match threshold {
                Some(m) => match Abstraction::new(&v, *m)?.to_automaton(o.max_nodes)? {
                    Some(a) => o.done(print_model(&a)),
                    None => o.gave_up(format!("abstraction exceeds {} nodes", o.max_nodes)),
                },
                None => match ba_control(&v, *k, &o.abstraction())? {
                    Outcome::Done(b) => o.done(format!("# threshold {}\n{}", b.threshold, print_model(&b.vass))),
                    Outcome::Unknown(why) => o.gave_up(why),
                },
            }
        }
        Command::Ambiguity { model, k } => {
            let v = load(model)?;
            if *k == 0 {
                return Err(Error::InvalidArgument("k must be at least 1".into()));
            }
            match decide::ambiguity_counterexample(&v, *k)? {
                Some(w) => o.report(Answer::No, Some(render_word(&v, &w)), &BudgetReport::default()),
                None => o.report(Answer::Yes, None, &BudgetReport::default()),
            }
        }
        Command::GenHard { seed, out } => {
            let (v1, v2) = hardness_pair(&load(seed)?)?;
            let (t1, t2) = (print_model(&v1), print_model(&v2));
            match out {
                None => o.done(format!("{t1}\n{t2}")),
                Some(prefix) => {
                    let mut names = Vec::new();
                    for (tag, text) in [("v1", &t1), ("v2", &t2)] {
                        let path = format!("{}.{tag}.vass", prefix.to_string_lossy());
                        std::fs::write(&path, text).map_err(|e| Error::Io { path: path.clone(), msg: e.to_string() })?;
                        names.push(path);
                    }
                    o.done(names.join("\n"))
                }
            }
        }
        Command::Oracle(cmd) => match cmd {
            OracleCommand::Lang { model } => {
                let v = load(model)?;
                let words = oracle::bounded_language(&v, o.oracle_len)?;
                o.done(words.iter().map(|w| render_word(&v, w)).collect::<Vec<_>>().join("\n"))
            }
            OracleCommand::Include { a, b } => {
                let (v1, v2) = align_alphabets(&load(a)?, &load(b)?)?;
                bounded(o, &v1, oracle::bounded_inclusion(&v1, &v2, o.oracle_len)?)
            }
            OracleCommand::Equiv { a, b } => {
                let (v1, v2) = align_alphabets(&load(a)?, &load(b)?)?;
                bounded(o, &v1, oracle::bounded_equivalence(&v1, &v2, o.oracle_len)?)
            }
            OracleCommand::Ambiguity { model } => o.done(oracle::bounded_ambiguity(&load(model)?, o.oracle_len)?.to_string()),
            OracleCommand::Maxruns { model } => {
                let v = load(model)?;
                o.done(oracle::max_maximal_runs(&v.control_automaton(), o.oracle_len)?.to_string())
            }
        },
    })
}

pub fn exit_code(a: Answer) -> i32 {
    match a {
        Answer::Yes => EXIT_YES,
        Answer::No => EXIT_NO,
        Answer::Unknown => EXIT_UNKNOWN,
    }
}

fn render_text(r: &Report) -> String {
    let mut s = String::new();
    if let Some(out) = &r.output {
        s.push_str(out);
        if !out.ends_with('\n') {
            s.push('\n');
        }
        if r.verdict == Answer::Yes {
            return s;
        }
    }
    s.push_str(&format!("verdict: {}\n", r.verdict));
    if let Some(c) = &r.counterexample {
        s.push_str(&format!("counterexample: {c}\n"));
    }
    if let Some(c) = &r.budget.cutoff {
        s.push_str(&format!("gave up: {c}\n"));
    }
    s
}

/// Parses `args` (program name first), runs the command and writes to the
/// given streams. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_YES };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok(r) => {
            let text = match cli.opts.format {
                OutputFormat::Text => render_text(&r),
                OutputFormat::Json => serde_json::to_string(&r).unwrap_or_default() + "\n",
            };
            let _ = out.write_all(text.as_bytes());
            exit_code(r.verdict)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}
