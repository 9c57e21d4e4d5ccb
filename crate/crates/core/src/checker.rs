//! Evaluation of both sides of the translation over the concrete model,
//! with quantifiers discharged by certificates.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::rc::Rc;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::constructions::validate::{validate_sign_family, ValidateOptions};
use crate::constructions::witness::{witness, WitnessError};
use crate::formula::lattice::{LatTerm, LatticeFormula, PairTuple};
use crate::formula::lgroup::{expand_bound, LGroupFormula};
use crate::pl::{term_apply, PLFunction};
use crate::rational::Height;
use crate::semilinear::SemilinearSet;
use crate::sign::{LambdaFamily, SignEntries, SignFamily};
use crate::term::{enumerate_terms, small_bound, Term, TermPair, Var};
use crate::formula::pairs::Square;
use crate::translate::count::delta_counts;
use crate::translate::{translate, HeightSchedule, TranslateError};

/// Default cap on the number of `δ` conjuncts evaluated in one call.
pub const DEFAULT_DELTA_BUDGET: u64 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("no witness for the quantifier {0}")]
    QuantifierWithoutWitness(String),
    #[error("variable {0} has no value")]
    MissingVariable(String),
    #[error("delta over {0} exceeds the evaluation budget")]
    BudgetExceeded(String),
    #[error("formula is not quantifier-free")]
    NotQuantifierFree,
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
}

/// Values of the variables and of the quantified variables. Every
/// quantifier of the input binds a distinct variable, so one map serves
/// as the certificate for all of them.
pub type Assignment = BTreeMap<Var, PLFunction>;

/// `C ⊨ φ(f̄)`, where `E y. ψ` holds if `ψ` holds with `y` set to its
/// witness in `witnesses`.
pub fn eval_lgroup(phi: &LGroupFormula, assignment: &Assignment, witnesses: &Assignment) -> Result<bool, CheckError> {
    let mut env = assignment.clone();
    eval_lg(phi, &mut env, witnesses)
}

fn eval_lg(phi: &LGroupFormula, env: &mut Assignment, witnesses: &Assignment) -> Result<bool, CheckError> {
    match phi {
        LGroupFormula::Atom(s, t) => {
            let value = |u: &Term| term_apply(u, env).map_err(|e| CheckError::MissingVariable(e.to_string()));
            Ok(value(t)?.lt_set(&value(s)?).is_empty())
        }
        LGroupFormula::And(a, b) => Ok(eval_lg(a, env, witnesses)? && eval_lg(b, env, witnesses)?),
        LGroupFormula::Not(a) => Ok(!eval_lg(a, env, witnesses)?),
        LGroupFormula::Exists(y, body) => {
            let g = witnesses.get(y).ok_or_else(|| CheckError::QuantifierWithoutWitness(format!("E {y}")))?;
            let saved = env.insert(*y, g.clone());
            let out = eval_lg(body, env, witnesses);
            match saved {
                Some(f) => env.insert(*y, f),
                None => env.remove(y),
            };
            out
        }
    }
}

/// `{s < t}` for pairs over a fixed assignment, cached.
pub struct Valuation {
    assignment: Assignment,
    values: RefCell<HashMap<Term, Option<PLFunction>>>,
    sets: RefCell<HashMap<TermPair, Option<SemilinearSet>>>,
}

impl Valuation {
    pub fn new(assignment: Assignment) -> Self {
        Valuation { assignment, values: RefCell::default(), sets: RefCell::default() }
    }

    fn value(&self, t: &Term) -> Option<PLFunction> {
        if let Some(v) = self.values.borrow().get(t) {
            return v.clone();
        }
        let v = term_apply(t, &self.assignment).ok();
        self.values.borrow_mut().insert(t.clone(), v.clone());
        v
    }
}

impl SignEntries for Valuation {
    fn entry(&self, s: &Term, t: &Term) -> Option<SemilinearSet> {
        self.pair(&TermPair::new(s.clone(), t.clone()))
    }

    fn pair(&self, p: &TermPair) -> Option<SemilinearSet> {
        if let Some(e) = self.sets.borrow().get(p) {
            return e.clone();
        }
        let e = match (self.value(&p.first), self.value(&p.second)) {
            (Some(a), Some(b)) => Some(a.lt_set(&b)),
            _ => None,
        };
        self.sets.borrow_mut().insert(p.clone(), e.clone());
        e
    }
}

/// Values for the variables bound by the `E` nodes of a lattice formula,
/// numbered in pre-order.
pub trait Certificate {
    fn witness(&self, node: usize, tuple: &PairTuple) -> Option<Rc<dyn SignEntries>>;
}

/// Binds every tuple to the sign sets of one global assignment, which
/// includes a function for each quantified variable.
pub struct FunctionCertificate {
    valuation: Rc<Valuation>,
}

impl FunctionCertificate {
    pub fn new(assignment: Assignment) -> Self {
        FunctionCertificate { valuation: Rc::new(Valuation::new(assignment)) }
    }
}

impl Certificate for FunctionCertificate {
    fn witness(&self, _node: usize, _tuple: &PairTuple) -> Option<Rc<dyn SignEntries>> {
        Some(self.valuation.clone())
    }
}

/// Explicit sets per node.
#[derive(Clone, Debug, Default)]
pub struct ExplicitCertificate {
    pub nodes: BTreeMap<usize, HashMap<TermPair, SemilinearSet>>,
}

impl Certificate for ExplicitCertificate {
    fn witness(&self, node: usize, _tuple: &PairTuple) -> Option<Rc<dyn SignEntries>> {
        self.nodes.get(&node).map(|m| Rc::new(m.clone()) as Rc<dyn SignEntries>)
    }
}

/// For quantifier-free formulas.
pub struct NoCertificate;

impl Certificate for NoCertificate {
    fn witness(&self, _node: usize, _tuple: &PairTuple) -> Option<Rc<dyn SignEntries>> {
        None
    }
}

/// Pairs bound by one block; explicit lists are hashed once.
enum Bound<'a> {
    Listed(HashSet<&'a TermPair>),
    Tuple(&'a PairTuple),
}

impl Bound<'_> {
    fn contains(&self, p: &TermPair) -> bool {
        match self {
            Bound::Listed(set) => set.contains(p),
            Bound::Tuple(t) => t.contains(p),
        }
    }
}

struct Env<'a> {
    free: &'a dyn SignEntries,
    frames: Vec<(Bound<'a>, Rc<dyn SignEntries>)>,
}

impl SignEntries for Env<'_> {
    fn entry(&self, s: &Term, t: &Term) -> Option<SemilinearSet> {
        self.pair(&TermPair::new(s.clone(), t.clone()))
    }

    fn pair(&self, p: &TermPair) -> Option<SemilinearSet> {
        for (bound, values) in self.frames.iter().rev() {
            if bound.contains(p) {
                return values.pair(p);
            }
        }
        self.free.pair(p)
    }
}

/// `L_C ⊨ Φ(asg)`: `≤` is inclusion, `bot` the empty set, and each `E`
/// takes its values from `cert`.
pub fn eval_lattice(
    phi: &LatticeFormula,
    asg: &dyn SignEntries,
    cert: &dyn Certificate,
    delta_budget: u64,
) -> Result<bool, CheckError> {
    let mut env = Env { free: asg, frames: Vec::new() };
    let mut budget = delta_budget;
    eval_lat(phi, 0, &mut env, cert, &mut budget)
}

fn missing(p: &TermPair) -> CheckError {
    CheckError::MissingVariable(format!("v[{}|{}]", p.first, p.second))
}

fn lat_term(t: &LatTerm, env: &Env) -> Result<SemilinearSet, CheckError> {
    match t {
        LatTerm::Var(p) => env.pair(p).ok_or_else(|| missing(p)),
        LatTerm::Meet(a, b) => Ok(lat_term(a, env)?.intersect(&lat_term(b, env)?)),
        LatTerm::Join(a, b) => Ok(lat_term(a, env)?.union(&lat_term(b, env)?)),
    }
}

fn eval_lat<'a>(
    phi: &'a LatticeFormula,
    node: usize,
    env: &mut Env<'a>,
    cert: &dyn Certificate,
    budget: &mut u64,
) -> Result<bool, CheckError> {
    match phi {
        LatticeFormula::Leq(a, b) => Ok(lat_term(a, env)?.is_subset(&lat_term(b, env)?)),
        LatticeFormula::IsBottom(p) => Ok(env.pair(p).ok_or_else(|| missing(p))?.is_empty()),
        LatticeFormula::And(items) => {
            let mut next = node;
            for g in items {
                if !eval_lat(g, next, env, cert, budget)? {
                    return Ok(false);
                }
                next += g.exists_count();
            }
            Ok(true)
        }
        LatticeFormula::Not(a) => Ok(!eval_lat(a, node, env, cert, budget)?),
        LatticeFormula::Exists(tuple, body) => {
            let values = cert
                .witness(node, tuple)
                .ok_or_else(|| CheckError::QuantifierWithoutWitness(format!("node {node} over {tuple}")))?;
            let bound = match tuple {
                PairTuple::Explicit(pairs) => Bound::Listed(pairs.iter().collect()),
                PairTuple::Space(_) => Bound::Tuple(tuple),
            };
            env.frames.push((bound, values));
            let out = eval_lat(body, node + 1, env, cert, budget);
            env.frames.pop();
            out
        }
        LatticeFormula::Delta { vars, bound } => {
            let label = || format!("Ht({};{bound})", vars.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
            // Every conjunct is charged up front; the whole block is then
            // decided on one materialized family.
            let total = delta_counts(bound, vars.len())
                .into_values()
                .try_fold(BigUint::zero(), |acc, n| n.map(|n| acc + n))
                .and_then(|n| n.to_u64())
                .filter(|n| *n <= *budget)
                .ok_or_else(|| CheckError::BudgetExceeded(label()))?;
            *budget -= total;
            let terms = Square::new(vars, bound.clone()).terms().ok_or_else(|| CheckError::BudgetExceeded(label()))?;
            let fam = SignFamily::restrict(&*env, terms).map_err(|e| CheckError::MissingVariable(e.to_string()))?;
            let report = validate_sign_family(&fam, ValidateOptions { arithmetic: true, weak_o3: false });
            Ok(report.violations.iter().all(|v| v.condition == "open"))
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Timings {
    pub lhs_us: u128,
    pub rhs_us: u128,
}

/// Both sides of the equivalence for one formula and assignment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub formula: String,
    pub lhs: bool,
    pub rhs: bool,
    pub agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl Verdict {
    /// Everything needed to reproduce a disagreement.
    pub fn diagnostic(&self, assignment: &Assignment) -> String {
        let mut out = format!("formula: {}\nlhs: {}\nrhs: {}\n", self.formula, self.lhs, self.rhs);
        for (v, f) in assignment {
            out.push_str(&format!("{v} -> pl: {f}\n"));
        }
        out
    }
}

/// The family `Λ_{d,x̄}` substituted into a translation; `x̄` is the key
/// set of the assignment.
fn substitution(assignment: &Assignment, d: &Height) -> Box<dyn SignEntries> {
    let vars: Vec<Var> = assignment.keys().copied().collect();
    if vars.is_empty() {
        // Ht over no variables is empty; variable-free pairs still need a value.
        return Box::new(Valuation::new(Assignment::new()));
    }
    Box::new(LambdaFamily::new(&vars, d.clone(), assignment).expect("keys are assigned"))
}

/// Evaluates `φ` directly and its paper translation under `Λ_{d_φ,x̄}`.
pub fn check_qf_equiv(phi: &LGroupFormula, assignment: &Assignment, timed: bool) -> Result<Verdict, CheckError> {
    QfChecker::new(assignment.clone()).check(phi, timed)
}

/// [`check_qf_equiv`] for many formulas under one assignment. Each side
/// keeps its own cache of term values and sign sets.
pub struct QfChecker {
    assignment: Assignment,
    direct: Valuation,
    families: RefCell<HashMap<Height, Rc<Cached>>>,
}

struct Cached {
    inner: Box<dyn SignEntries>,
    memo: RefCell<HashMap<TermPair, Option<SemilinearSet>>>,
}

impl SignEntries for Cached {
    fn entry(&self, s: &Term, t: &Term) -> Option<SemilinearSet> {
        let key = TermPair::new(s.clone(), t.clone());
        if let Some(e) = self.memo.borrow().get(&key) {
            return e.clone();
        }
        let e = self.inner.entry(s, t);
        self.memo.borrow_mut().insert(key, e.clone());
        e
    }
}

impl QfChecker {
    pub fn new(assignment: Assignment) -> Self {
        QfChecker { direct: Valuation::new(assignment.clone()), assignment, families: RefCell::default() }
    }

    fn direct(&self, phi: &LGroupFormula) -> Result<bool, CheckError> {
        match phi {
            LGroupFormula::Atom(s, t) => {
                let e = self.direct.entry(t, s).ok_or_else(|| CheckError::MissingVariable(format!("a variable of {phi}")))?;
                Ok(e.is_empty())
            }
            LGroupFormula::And(a, b) => Ok(self.direct(a)? && self.direct(b)?),
            LGroupFormula::Not(a) => Ok(!self.direct(a)?),
            LGroupFormula::Exists(..) => Err(CheckError::NotQuantifierFree),
        }
    }

    pub fn check(&self, phi: &LGroupFormula, timed: bool) -> Result<Verdict, CheckError> {
        if !phi.is_quantifier_free() {
            return Err(CheckError::NotQuantifierFree);
        }
        let started = Instant::now();
        let lhs = self.direct(phi)?;
        let lhs_us = started.elapsed().as_micros();
        let started = Instant::now();
        let tr = translate(phi, &HeightSchedule::Paper)?;
        let fam = self
            .families
            .borrow_mut()
            .entry(tr.substitution_bound.clone())
            .or_insert_with(|| {
                let inner = substitution(&self.assignment, &tr.substitution_bound);
                Rc::new(Cached { inner, memo: RefCell::default() })
            })
            .clone();
        let rhs = eval_lattice(&tr.formula, fam.as_ref(), &NoCertificate, DEFAULT_DELTA_BUDGET)?;
        let rhs_us = started.elapsed().as_micros();
        Ok(Verdict {
            formula: phi.to_string(),
            lhs,
            rhs,
            agree: lhs == rhs,
            timings: timed.then_some(Timings { lhs_us, rhs_us }),
        })
    }
}

/// Translates under `schedule` and evaluates both sides with the same
/// function witnesses: directly, and through `Λ` with a
/// [`FunctionCertificate`] for every `E` block.
pub fn check_translation(
    phi: &LGroupFormula,
    assignment: &Assignment,
    witnesses: &Assignment,
    schedule: &HeightSchedule,
    delta_budget: u64,
) -> Result<Verdict, CheckError> {
    let lhs = eval_lgroup(phi, assignment, witnesses)?;
    let tr = translate(phi, schedule)?;
    let fam = substitution(assignment, &tr.substitution_bound);
    let mut all = assignment.clone();
    all.extend(witnesses.iter().map(|(v, f)| (*v, f.clone())));
    let cert = FunctionCertificate::new(all);
    let rhs = eval_lattice(&tr.formula, fam.as_ref(), &cert, delta_budget)?;
    Ok(Verdict { formula: phi.to_string(), lhs, rhs, agree: lhs == rhs, timings: None })
}

/// Result of one generate-and-forget round trip through the witness
/// construction.
#[derive(Clone, Debug, Serialize)]
pub struct RoundTrip {
    pub formula: String,
    pub bound: u64,
    /// Index terms on which the family was validated.
    pub validated_terms: usize,
    pub family_valid: bool,
    pub realized_pairs: usize,
    pub witness: String,
    pub with_hidden: bool,
    pub with_witness: bool,
    pub agree: bool,
}

/// Builds `Λ_{(2d)^4,(x̄,y)}` from `assignment` and `hidden`, checks it on
/// the terms the construction reads, forgets `hidden` and rebuilds a
/// witness `g′`; then compares `φ(f̄, hidden)` with `φ(f̄, g′)`.
pub fn exists_roundtrip(
    phi: &LGroupFormula,
    assignment: &Assignment,
    y: Var,
    hidden: &PLFunction,
    d: Option<u64>,
) -> Result<RoundTrip, CheckError> {
    exists_roundtrip_with(phi, assignment, y, hidden, d, |fam| Box::new(fam))
}

/// As [`exists_roundtrip`], with a hook that may alter the family before
/// the witness is built.
pub fn exists_roundtrip_with<'f>(
    phi: &LGroupFormula,
    assignment: &Assignment,
    y: Var,
    hidden: &PLFunction,
    d: Option<u64>,
    alter: impl FnOnce(LambdaFamily) -> Box<dyn SignEntries + 'f>,
) -> Result<RoundTrip, CheckError> {
    if !phi.is_quantifier_free() {
        return Err(CheckError::NotQuantifierFree);
    }
    let d = d.unwrap_or_else(|| small_bound(&phi.max_height()).unwrap_or(u64::MAX)).max(1);
    let vars: Vec<Var> = assignment.keys().copied().filter(|v| *v != y).collect();
    let mut with_hidden = assignment.clone();
    with_hidden.insert(y, hidden.clone());
    let mut all = vars.clone();
    all.push(y);
    let outer = expand_bound(&Height::from(d));
    let lambda = LambdaFamily::new(&all, outer, &with_hidden).map_err(|e| CheckError::MissingVariable(e.to_string()))?;
    let fam = alter(lambda);

    // δ and (†) on the index terms the construction reads.
    let out = witness(d, &vars, y, assignment, fam.as_ref());
    let mut terms: BTreeSet<Term> = enumerate_terms(&all, d).terms.into_iter().collect();
    terms.insert(Term::var(y));
    if let Ok(w) = &out {
        terms.extend(w.seeds.iter().cloned());
    }
    let family_valid = match SignFamily::restrict(fam.as_ref(), terms.iter().cloned().collect()) {
        Ok(f) => validate_sign_family(&f, ValidateOptions { arithmetic: true, weak_o3: false }).passed(),
        Err(_) => false,
    };
    let w = out?;

    let mut with_witness = assignment.clone();
    with_witness.insert(y, w.g.clone());
    let lhs = eval_lgroup(phi, &with_hidden, &Assignment::new())?;
    let rhs = eval_lgroup(phi, &with_witness, &Assignment::new())?;
    Ok(RoundTrip {
        formula: phi.to_string(),
        bound: d,
        validated_terms: terms.len(),
        family_valid,
        realized_pairs: w.realized_pairs,
        witness: w.g.to_string(),
        with_hidden: lhs,
        with_witness: rhs,
        agree: lhs == rhs,
    })
}
