//! The `cozero` command line. Exit code 0 means success or a true
//! verdict, 1 a false or negative verdict, 2 an error; errors are one
//! line on stderr, `error: <kind>: <message>`.

use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::checker::{check_translation, exists_roundtrip, Assignment, QfChecker, Verdict, DEFAULT_DELTA_BUDGET};
use crate::constructions::extend::{extend_many, ExtensionProblem};
use crate::constructions::mix::mix;
use crate::constructions::validate::{validate_sign_family, ValidateOptions};
use crate::constructions::witness::witness;
use crate::formula::lgroup::{expand_bound, LGroupFormula};
use crate::formula::parse::parse_lgroup;
use crate::io::{parse_assignment, parse_family, parse_mix, parse_var, write_family, write_term_functions};
use crate::pl::term_apply;
use crate::sign::{lambda, LambdaFamily, SignEntries};
use crate::term::{Term, Var};
use crate::translate::count::count_translation;
use crate::translate::emit::{write_json, write_text};
use crate::translate::{translate, HeightSchedule};

#[derive(Parser, Debug)]
#[command(name = "cozero", version, about = "Translate l-group formulas into the lattice of cozero sets and check them")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Text,
    Json,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Formula text.
    #[arg(long)]
    pub expr: Option<String>,
    /// File holding the formula.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Translate a formula into the lattice language.
    Translate {
        #[command(flatten)]
        source: Source,
        /// `paper` or `fixed:D`.
        #[arg(long, default_value = "paper")]
        schedule: String,
        #[arg(long, value_enum, default_value = "text")]
        emit: Emit,
        /// Report sizes instead of writing the formula.
        #[arg(long)]
        count_only: bool,
    },
    /// Evaluate a quantifier-free formula and its translation.
    CheckQf {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        functions: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        emit: Emit,
        /// Include timings in the verdict.
        #[arg(long)]
        timings: bool,
    },
    /// Evaluate a formula and its translation with function witnesses for
    /// every quantifier.
    CheckCert {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        functions: PathBuf,
        /// Assignment file with one function per quantified variable.
        #[arg(long)]
        witnesses: PathBuf,
        #[arg(long, default_value = "fixed:1")]
        schedule: String,
        /// Largest number of delta conjuncts to evaluate.
        #[arg(long, default_value_t = DEFAULT_DELTA_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value = "json")]
        emit: Emit,
    },
    /// Build the mixed function of a mix file.
    Mix {
        #[arg(long)]
        input: PathBuf,
    },
    /// Realize the new indices of a sign family.
    Extend {
        #[arg(long)]
        functions: PathBuf,
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        sparse: bool,
    },
    /// Build a function for a quantified variable from a sign family.
    Witness {
        #[arg(long)]
        functions: PathBuf,
        /// The quantified variable, `x<k>`.
        #[arg(long)]
        var: String,
        #[arg(long, default_value_t = 1)]
        d: u64,
        /// Generate the family from this assignment of the variable.
        #[arg(long, conflicts_with = "family", required_unless_present = "family")]
        hidden: Option<PathBuf>,
        /// Read the family from a file.
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long)]
        sparse: bool,
    },
    /// Generate a family from a hidden function, forget it, rebuild a
    /// witness and compare the formula under both.
    Roundtrip {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        functions: PathBuf,
        #[arg(long)]
        var: String,
        #[arg(long)]
        hidden: PathBuf,
        #[arg(long)]
        d: Option<u64>,
    },
    /// Check a sign family for the open sign condition.
    ValidateFamily {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        sparse: bool,
        /// Also check the arithmetic conditions.
        #[arg(long)]
        arithmetic: bool,
        /// Also check the weak form of the third condition.
        #[arg(long)]
        weak_o3: bool,
        #[arg(long, value_enum, default_value = "text")]
        emit: Emit,
    },
    /// Write the family of sign sets of an assignment.
    Lambda {
        #[arg(long)]
        functions: PathBuf,
        #[arg(long, default_value_t = 1)]
        d: u64,
        /// Comma-separated variables; all assigned ones by default.
        #[arg(long)]
        vars: Option<String>,
        #[arg(long)]
        sparse: bool,
    },
}

/// A failure: its kind and a one-line message.
#[derive(Debug)]
pub struct Failure {
    pub kind: &'static str,
    pub msg: String,
}

fn fail(kind: &'static str, e: impl Display) -> Failure {
    Failure { kind, msg: e.to_string().replace('\n', " ") }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| fail("io", format!("{}: {e}", path.display())))
}

fn out_err(e: std::io::Error) -> Failure {
    fail("io", e)
}

fn formula(text: &str) -> Result<LGroupFormula, Failure> {
    parse_lgroup(text).map_err(|e| fail("parse", e))
}

fn schedule(text: &str) -> Result<HeightSchedule, Failure> {
    text.parse().map_err(|e| fail("schedule", e))
}

fn assignment(path: &Path) -> Result<Assignment, Failure> {
    parse_assignment(&read(path)?).map_err(|e| fail("format", format!("{}: {e}", path.display())))
}

fn var(text: &str) -> Result<Var, Failure> {
    parse_var(text).ok_or_else(|| fail("usage", format!("`{text}` is not a variable x<k>")))
}

fn verdict(v: &Verdict, emit: Emit, asg: &Assignment, out: &mut dyn Write) -> Result<i32, Failure> {
    match emit {
        Emit::Json => writeln!(out, "{}", serde_json::to_string(v).expect("verdict")).map_err(out_err)?,
        Emit::Text => writeln!(out, "lhs: {}\nrhs: {}\nagree: {}", v.lhs, v.rhs, v.agree).map_err(out_err)?,
    }
    if !v.agree {
        return Err(fail("theorem-violation", v.diagnostic(asg)));
    }
    Ok(if v.lhs { 0 } else { 1 })
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Translate { source, schedule: s, emit, count_only } => {
            let text = match (source.expr, source.file) {
                (Some(e), _) => e,
                (None, Some(p)) => read(&p)?,
                (None, None) => unreachable!("clap requires a source"),
            };
            let phi = formula(&text)?;
            let s = schedule(&s)?;
            if count_only {
                let r = count_translation(&phi, &s).map_err(|e| fail("translate", e))?;
                match emit {
                    Emit::Text => write!(out, "{}", r.to_text()).map_err(out_err)?,
                    Emit::Json => writeln!(out, "{}", serde_json::to_string(&r).expect("report")).map_err(out_err)?,
                }
                return Ok(if r.consistent { 0 } else { 1 });
            }
            let r = translate(&phi, &s).map_err(|e| fail("translate", e))?;
            match emit {
                Emit::Text => write_text(&r, out),
                Emit::Json => write_json(&r, out),
            }
            .map_err(|e| fail("emit", e))?;
            Ok(0)
        }
        Command::CheckQf { formula: f, functions, emit, timings } => {
            let phi = formula(&f)?;
            let asg = assignment(&functions)?;
            let v = QfChecker::new(asg.clone()).check(&phi, timings).map_err(|e| fail("check", e))?;
            verdict(&v, emit, &asg, out)
        }
        Command::CheckCert { formula: f, functions, witnesses, schedule: s, budget, emit } => {
            let phi = formula(&f)?;
            let asg = assignment(&functions)?;
            let w = assignment(&witnesses)?;
            let v = check_translation(&phi, &asg, &w, &schedule(&s)?, budget).map_err(|e| fail("check", e))?;
            verdict(&v, emit, &asg, out)
        }
        Command::Mix { input } => {
            let m = parse_mix(&read(&input)?).map_err(|e| fail("format", e))?;
            let h = mix(&m).map_err(|e| fail("mix", e))?;
            writeln!(out, "{h}").map_err(out_err)?;
            Ok(0)
        }
        Command::Extend { functions, family, sparse } => {
            let asg = assignment(&functions)?;
            let fam = parse_family(&read(&family)?, sparse).map_err(|e| fail("format", e))?;
            let terms = fam.index_terms().to_vec();
            let known = |t: &Term| t.support().all(|v| asg.contains_key(&v));
            let n = terms.iter().take_while(|t| known(t)).count();
            let new_var = |t: &Term| {
                let vs: Vec<Var> = t.support().collect();
                vs.len() == 1 && *t == Term::var(vs[0]) && !asg.contains_key(&vs[0])
            };
            if let Some(t) = terms[n..].iter().find(|t| !new_var(t)) {
                return Err(fail("family", format!("index term {t} must be a new variable listed after every known term")));
            }
            let base = terms[..n].iter().map(|t| term_apply(t, &asg)).collect::<Result<_, _>>().map_err(|e| fail("family", e))?;
            let made = extend_many(&ExtensionProblem { base, family: fam }).map_err(|e| fail("extend", e))?;
            let items: Vec<_> = terms[n..].iter().cloned().zip(made).collect();
            write!(out, "{}", write_term_functions(&items)).map_err(out_err)?;
            Ok(0)
        }
        Command::Witness { functions, var: v, d, hidden, family, sparse } => {
            let asg = assignment(&functions)?;
            let y = var(&v)?;
            let vars: Vec<Var> = asg.keys().copied().filter(|x| *x != y).collect();
            let fam: Box<dyn SignEntries> = match (hidden, family) {
                (Some(p), _) => {
                    let mut all = asg.clone();
                    let h = assignment(&p)?;
                    let g = h.get(&y).ok_or_else(|| fail("format", format!("{} does not assign {y}", p.display())))?;
                    all.insert(y, g.clone());
                    let mut vs = vars.clone();
                    vs.push(y);
                    Box::new(LambdaFamily::new(&vs, expand_bound(&d.into()), &all).map_err(|e| fail("family", e))?)
                }
                (None, Some(p)) => Box::new(parse_family(&read(&p)?, sparse).map_err(|e| fail("format", e))?),
                (None, None) => unreachable!("clap requires a family source"),
            };
            let w = witness(d, &vars, y, &asg, fam.as_ref()).map_err(|e| fail("witness", e))?;
            let seeds: Vec<String> = w.seeds.iter().map(|t| t.to_string()).collect();
            writeln!(out, "# seeds: {}", seeds.join(" ; ")).map_err(out_err)?;
            writeln!(out, "# realized pairs: {}", w.realized_pairs).map_err(out_err)?;
            writeln!(out, "{y} -> {}", w.g).map_err(out_err)?;
            Ok(0)
        }
        Command::Roundtrip { formula: f, functions, var: v, hidden, d } => {
            let phi = formula(&f)?;
            let asg = assignment(&functions)?;
            let y = var(&v)?;
            let h = assignment(&hidden)?;
            let g = h.get(&y).ok_or_else(|| fail("format", format!("{} does not assign {y}", hidden.display())))?;
            let r = exists_roundtrip(&phi, &asg, y, g, d).map_err(|e| fail("roundtrip", e))?;
            writeln!(out, "{}", serde_json::to_string(&r).expect("round trip")).map_err(out_err)?;
            Ok(if r.agree && r.family_valid { 0 } else { 1 })
        }
        Command::ValidateFamily { family, sparse, arithmetic, weak_o3, emit } => {
            let fam = parse_family(&read(&family)?, sparse).map_err(|e| fail("format", e))?;
            let r = validate_sign_family(&fam, ValidateOptions { arithmetic, weak_o3 });
            match emit {
                Emit::Text => write!(out, "{}", r.to_text()).map_err(out_err)?,
                Emit::Json => writeln!(out, "{}", serde_json::to_string(&r).expect("report")).map_err(out_err)?,
            }
            Ok(if r.passed() { 0 } else { 1 })
        }
        Command::Lambda { functions, d, vars, sparse } => {
            let asg = assignment(&functions)?;
            let vs: Vec<Var> = match vars {
                Some(list) => list.split(',').map(var).collect::<Result<_, _>>()?,
                None => asg.keys().copied().collect(),
            };
            let fam = lambda(d, &vs, &asg).map_err(|e| fail("lambda", e))?;
            write!(out, "{}", write_family(&fam, sparse)).map_err(out_err)?;
            Ok(0)
        }
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let first = e.to_string().lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
            let _ = writeln!(err, "error: usage: {first}");
            return 2;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}: {}", f.kind, f.msg);
            2
        }
    }
}
