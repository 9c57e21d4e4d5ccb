//! `φ ↦ φ_Λ`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use crate::formula::lattice::{LatticeFormula, PairTuple};
use crate::formula::lgroup::{expand_bound, iterate_bound, LGroupFormula};
use crate::formula::pairs::{PairSpace, Square};
use crate::rational::Height;
use crate::term::{TermPair, Var};
use crate::translate::delta::{delta_block, witness_space};

/// Largest quantifier count for which the paper bound is computed; the bound
/// has about `4^N` bits.
pub const PAPER_QUANTIFIER_LIMIT: usize = 12;

/// How the height bound of each quantifier step is chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HeightSchedule {
    /// `d = D_φ'` at each step and `(2d)^4` inside `Δ`.
    Paper,
    /// The given `d` at every step, also inside `Δ`. Small enough to write
    /// out, but the equivalence is no longer guaranteed.
    Fixed(Height),
}

impl HeightSchedule {
    pub fn is_paper(&self) -> bool {
        matches!(self, HeightSchedule::Paper)
    }
}

impl fmt::Display for HeightSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeightSchedule::Paper => write!(f, "paper"),
            HeightSchedule::Fixed(d) => write!(f, "fixed:{d}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid schedule `{0}`: expected `paper` or `fixed:D` with D >= 1")]
pub struct ScheduleParseError(String);

impl FromStr for HeightSchedule {
    type Err = ScheduleParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "paper" {
            return Ok(HeightSchedule::Paper);
        }
        s.strip_prefix("fixed:")
            .and_then(|d| d.parse::<BigUint>().ok())
            .filter(|d| *d >= BigUint::one())
            .map(HeightSchedule::Fixed)
            .ok_or_else(|| ScheduleParseError(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TranslateError {
    #[error("schedule fixed:{fixed} is below the largest term height {required} of the formula")]
    ScheduleTooSmall { fixed: Height, required: Height },
    #[error("{0} quantifiers exceed the limit of {PAPER_QUANTIFIER_LIMIT} for the paper schedule; use --count-only with a fixed schedule")]
    TooManyQuantifiers(usize),
}

/// One `E y. φ'` of the input and what it became.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantifierStep {
    /// Pre-order index of the node in the input formula.
    pub lgroup_node: usize,
    pub var: Var,
    /// `x̄`: the other free variables of `φ'`.
    pub context: Vec<Var>,
    /// `d` of this step.
    pub bound: Height,
    /// The height used inside `Δ`.
    pub expansion: Height,
    /// Pre-order index among `E` nodes of the output for the `Ȳ` block;
    /// `None` when `y` is not free in `φ'` and the step is dropped.
    pub lattice_node: Option<usize>,
    /// Index of the `W̄` block of `Δ`, when there is one.
    pub witness_node: Option<usize>,
}

impl QuantifierStep {
    /// `Ȳ`: pairs over `Ht_{(x̄,y)}(d)` not inside `Ht_x̄(d)`.
    pub fn bound_space(&self) -> PairSpace {
        bound_space(&self.bound, &self.context, self.var)
    }

    pub fn witness_space(&self) -> PairSpace {
        witness_space(&self.bound, &self.expansion, &self.context, self.var)
    }
}

#[derive(Clone, Debug)]
pub struct TranslationResult {
    pub formula: LatticeFormula,
    pub schedule: HeightSchedule,
    /// Free variables of the input.
    pub free_vars: Vec<Var>,
    /// The `d` at which `Λ_{d,x̄}` is substituted into the output.
    pub substitution_bound: Height,
    pub steps: Vec<QuantifierStep>,
}

impl TranslationResult {
    /// Fixed schedules give up the guarantee that the translation is
    /// equivalent to the input.
    pub fn unsound(&self) -> bool {
        !self.schedule.is_paper()
    }

    /// The banner printed above fixed-schedule output.
    pub fn banner(&self) -> Option<String> {
        self.unsound().then(|| {
            format!(
                "# UNSOUND-SCHEDULE: {} replaces the paper height bounds; equivalence with the input is not guaranteed",
                self.schedule
            )
        })
    }

    /// The square `Ht_x̄(d)^2` that holds every free variable.
    pub fn free_square(&self) -> Square {
        Square::new(&self.free_vars, self.substitution_bound.clone())
    }
}

pub fn bound_space(d: &Height, context: &[Var], y: Var) -> PairSpace {
    let mut all = context.to_vec();
    all.push(y);
    PairSpace::new(Square::new(&all, d.clone()), vec![Square::new(context, d.clone())])
}

/// Translates a core formula.
pub fn translate(phi: &LGroupFormula, schedule: &HeightSchedule) -> Result<TranslationResult, TranslateError> {
    let metrics_d = phi.max_height();
    let n = phi.quantifier_count();
    let substitution_bound = match schedule {
        HeightSchedule::Paper => {
            if n > PAPER_QUANTIFIER_LIMIT {
                return Err(TranslateError::TooManyQuantifiers(n));
            }
            iterate_bound(&metrics_d, n)
        }
        HeightSchedule::Fixed(d) => {
            if *d < metrics_d {
                return Err(TranslateError::ScheduleTooSmall { fixed: d.clone(), required: metrics_d });
            }
            d.clone()
        }
    };
    let mut state = State { schedule, lgroup_node: 0, lattice_node: 0, steps: Vec::new() };
    let formula = state.lower(phi);
    Ok(TranslationResult {
        formula,
        schedule: schedule.clone(),
        free_vars: phi.free_vars().into_iter().collect(),
        substitution_bound,
        steps: state.steps,
    })
}

struct State<'a> {
    schedule: &'a HeightSchedule,
    lgroup_node: usize,
    lattice_node: usize,
    steps: Vec<QuantifierStep>,
}

impl State<'_> {
    fn lower(&mut self, phi: &LGroupFormula) -> LatticeFormula {
        let node = self.lgroup_node;
        self.lgroup_node += 1;
        match phi {
            LGroupFormula::Atom(s, t) => LatticeFormula::IsBottom(TermPair::new(t.clone(), s.clone())),
            LGroupFormula::And(a, b) => {
                let a = self.lower(a);
                let b = self.lower(b);
                LatticeFormula::And(vec![a, b])
            }
            LGroupFormula::Not(a) => LatticeFormula::not(self.lower(a)),
            LGroupFormula::Exists(y, body) => {
                let free = body.free_vars();
                let (bound, expansion) = match self.schedule {
                    HeightSchedule::Paper => {
                        let d = iterate_bound(&body.max_height(), body.quantifier_count());
                        let e = expand_bound(&d);
                        (d, e)
                    }
                    HeightSchedule::Fixed(d) => (d.clone(), d.clone()),
                };
                let context: Vec<Var> = free.iter().copied().filter(|v| v != y).collect();
                let index = self.steps.len();
                self.steps.push(QuantifierStep {
                    lgroup_node: node,
                    var: *y,
                    context: context.clone(),
                    bound: bound.clone(),
                    expansion: expansion.clone(),
                    lattice_node: None,
                    witness_node: None,
                });
                if !free.contains(y) {
                    return self.lower(body);
                }
                let outer = self.lattice_node;
                self.lattice_node += 1;
                let delta = delta_block(&bound, &expansion, &context, *y);
                let witness = matches!(delta, LatticeFormula::Exists(..)).then(|| {
                    self.lattice_node += 1;
                    outer + 1
                });
                self.steps[index].lattice_node = Some(outer);
                self.steps[index].witness_node = witness;
                let body = self.lower(body);
                LatticeFormula::exists(
                    PairTuple::Space(bound_space(&bound, &context, *y)),
                    LatticeFormula::And(vec![delta, body]),
                )
            }
        }
    }
}
