//! A function `g` for the quantified variable `y` that realizes a family
//! over `Ht_{(x̄,y)}((2d)^4)` on all pairs of `Ht_{(x̄,y)}(d)`.
//!
//! Every such pair reduces, through (O4)–(O6), to a pair `(y, r)` or
//! `(r, y)` with `r` a term in `x̄` alone, or to a pair free of `y`. So it
//! suffices to realize the family on the index terms `R ∪ {y}`, where `R`
//! collects those `r`, and check the rest directly.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Signed;

use crate::constructions::extend::{extend_one, ExtendError, ExtensionProblem};
use crate::formula::lgroup::expand_bound;
use crate::pl::{term_apply, PLFunction};
use crate::rational::Height;
use crate::sign::{SignEntries, SignFamily};
use crate::term::{enumerate_terms, Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WitnessError {
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("family differs from the sign sets of the assignment at ({0}, {1})")]
    BaseMismatch(String, String),
    #[error("postcondition failed: {0}")]
    PostconditionFailed(String),
}

#[derive(Clone, Debug)]
pub struct WitnessOutcome {
    pub g: PLFunction,
    /// The terms `r` whose values seed the extension.
    pub seeds: Vec<Term>,
    /// Pairs of `Ht_{(x̄,y)}(d)` checked against the output.
    pub realized_pairs: usize,
}

/// `y = p*y + s0`, `t = q*y + t0` with `p != q` give the seed
/// `(t0 - s0) / (p - q)`.
fn seed(s: &Term, t: &Term, y: Var) -> Option<Term> {
    let (p, s0) = s.split(y);
    let (q, t0) = t.split(y);
    (p != q).then(|| t0.sub(&s0).scale(&(p - q).recip()))
}

/// The chain of pairs linking `(s, t)` to `(y, r)` or `(r, y)`, each step
/// labelled by the property that equates it with the previous one.
fn chain(s: &Term, t: &Term, y: Var) -> Vec<(&'static str, Term, Term)> {
    let (p, s0) = s.split(y);
    let (q, t0) = t.split(y);
    let yt = Term::var(y);
    let w = t0.sub(&s0);
    if p == q {
        return vec![("o4", s0, t0)];
    }
    let k = &p - &q;
    let r = w.scale(&k.recip());
    let mut out = vec![
        ("o4", s.sub(&s0), t.sub(&s0)),
        ("o5", yt.scale(&k), w.clone()),
    ];
    if k.is_positive() {
        out.push(("o6", yt, r));
    } else {
        out.push(("o6", yt.neg(), r.neg()));
        out.push(("o4", r.clone(), Term::var(y)));
    }
    out
}

fn lookup(fam: &dyn SignEntries, s: &Term, t: &Term) -> Result<crate::semilinear::SemilinearSet, WitnessError> {
    fam.entry(s, t).ok_or_else(|| WitnessError::InvalidFamily(format!("entry ({s}, {t}) is missing")))
}

/// `fam` must be indexed by (at least) `Ht_{(vars,y)}((2d)^4)`.
pub fn witness(
    d: u64,
    vars: &[Var],
    y: Var,
    assignment: &BTreeMap<Var, PLFunction>,
    fam: &dyn SignEntries,
) -> Result<WitnessOutcome, WitnessError> {
    let outer: Height = expand_bound(&Height::from(d));
    let mut all = vars.to_vec();
    all.retain(|v| *v != y);
    let context = all.clone();
    all.push(y);
    let target = enumerate_terms(&all, d).terms;
    let small = enumerate_terms(&context, d).terms;

    let mut seeds: BTreeSet<Term> = BTreeSet::new();
    seeds.insert(Term::zero());
    for s in &target {
        for t in &target {
            if let Some(r) = seed(s, t, y) {
                seeds.insert(r);
            }
        }
    }
    let mut sorted_context = context.clone();
    sorted_context.sort();
    if let Some(r) = seeds.iter().find(|r| !r.is_zero() && !r.within(&sorted_context, &outer)) {
        return Err(WitnessError::PostconditionFailed(format!("seed {r} exceeds height {outer}")));
    }

    let value = |t: &Term| term_apply(t, assignment).map_err(|e| WitnessError::InvalidFamily(e.to_string()));
    let base_terms: BTreeSet<Term> = small.iter().cloned().chain(seeds.iter().cloned()).collect();
    let base_values: Vec<(Term, PLFunction)> =
        base_terms.iter().map(|t| Ok((t.clone(), value(t)?))).collect::<Result<_, WitnessError>>()?;
    for (s, fs) in &base_values {
        for (t, ft) in &base_values {
            if lookup(fam, s, t)? != fs.lt_set(ft) {
                return Err(WitnessError::BaseMismatch(s.to_string(), t.to_string()));
            }
        }
    }

    let seeds: Vec<Term> = seeds.into_iter().collect();
    let mut index: Vec<Term> = seeds.clone();
    index.push(Term::var(y));
    let family = SignFamily::restrict(fam, index).map_err(|e| WitnessError::InvalidFamily(e.to_string()))?;
    let base: Vec<PLFunction> = seeds.iter().map(&value).collect::<Result<_, _>>()?;
    let g = extend_one(&ExtensionProblem { base, family }).map_err(|e| match e {
        ExtendError::InvalidFamily(m) => WitnessError::InvalidFamily(m),
        ExtendError::Inconsistent(p) => WitnessError::InvalidFamily(format!("prescribed values disagree at {p}")),
        other => WitnessError::PostconditionFailed(other.to_string()),
    })?;

    let mut full = assignment.clone();
    full.insert(y, g.clone());
    let values: Vec<PLFunction> = target
        .iter()
        .map(|t| term_apply(t, &full).map_err(|e| WitnessError::InvalidFamily(e.to_string())))
        .collect::<Result<_, _>>()?;
    for (i, s) in target.iter().enumerate() {
        for (j, t) in target.iter().enumerate() {
            let want = lookup(fam, s, t)?;
            if values[i].lt_set(&values[j]) == want {
                continue;
            }
            // Find the step of the reduction that the family breaks.
            let mut prev = want;
            for (axiom, a, b) in chain(s, t, y) {
                let next = lookup(fam, &a, &b)?;
                if next != prev {
                    return Err(WitnessError::InvalidFamily(format!(
                        "{axiom} fails between ({s}, {t}) and ({a}, {b})"
                    )));
                }
                prev = next;
            }
            return Err(WitnessError::PostconditionFailed(format!("({s}, {t}) is not realized")));
        }
    }
    Ok(WitnessOutcome { g, seeds, realized_pairs: target.len() * target.len() })
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;
    use crate::pl::pl_points;
    use crate::rational::rat;
    use crate::semilinear::SemilinearSet;
    use crate::sign::{LambdaFamily, PatchedFamily};
    use crate::term::TermPair;

    const X: Var = Var(1);
    const Y: Var = Var(2);

    fn setup(f: PLFunction, hidden: PLFunction) -> (BTreeMap<Var, PLFunction>, LambdaFamily) {
        let asg: BTreeMap<Var, PLFunction> = [(X, f)].into_iter().collect();
        let mut with_hidden = asg.clone();
        with_hidden.insert(Y, hidden);
        let fam = LambdaFamily::new(&[X, Y], 16u32.into(), &with_hidden).unwrap();
        (asg, fam)
    }

    fn realizes(asg: &BTreeMap<Var, PLFunction>, g: &PLFunction, fam: &LambdaFamily) -> bool {
        let mut full = asg.clone();
        full.insert(Y, g.clone());
        let target = enumerate_terms(&[X, Y], 1).terms;
        target.iter().all(|s| {
            target.iter().all(|t| {
                let l = term_apply(s, &full).unwrap().lt_set(&term_apply(t, &full).unwrap());
                Some(l) == fam.entry(s, t)
            })
        })
    }

    #[test]
    fn seeds_at_height_one() {
        let r: BTreeSet<String> = {
            let target = enumerate_terms(&[X, Y], 1).terms;
            target.iter().flat_map(|s| target.iter().filter_map(|t| seed(s, t, Y))).map(|t| t.to_string()).collect()
        };
        let expected: BTreeSet<String> =
            ["-2*x1", "-1*x1", "-1/2*x1", "0", "1/2*x1", "x1", "2*x1"].iter().map(|s| s.to_string()).collect();
        assert_eq!(r, expected);
    }

    #[test]
    fn half_of_identity() {
        let (asg, fam) = setup(PLFunction::identity(), PLFunction::identity().scale(&rat(1, 2)));
        let out = witness(1, &[X], Y, &asg, &fam).unwrap();
        assert!(realizes(&asg, &out.g, &fam));
        assert_eq!(out.realized_pairs, 81);
    }

    #[test]
    fn equal_to_base_is_forced() {
        let f = pl_points(&[((0, 1), (0, 1)), ((1, 2), (1, 1)), ((1, 1), (-1, 3))]);
        let (asg, fam) = setup(f.clone(), f.clone());
        assert_eq!(witness(1, &[X], Y, &asg, &fam).unwrap().g, f);
    }

    #[test]
    fn corrupted_families_are_rejected() {
        let (asg, fam) = setup(PLFunction::identity(), PLFunction::identity().scale(&rat(1, 2)));
        let x = Term::var(X);
        let bad = PatchedFamily {
            base: &fam,
            patches: HashMap::from([(TermPair::new(Term::zero(), x.clone()), SemilinearSet::empty())]),
        };
        assert!(matches!(witness(1, &[X], Y, &asg, &bad), Err(WitnessError::BaseMismatch(..))));
        let y = Term::var(Y);
        let bad = PatchedFamily {
            base: &fam,
            patches: HashMap::from([(TermPair::new(y.clone(), x.clone()), SemilinearSet::empty())]),
        };
        assert!(matches!(witness(1, &[X], Y, &asg, &bad), Err(WitnessError::InvalidFamily(_))));
    }

    #[test]
    fn no_context_variables() {
        let hidden = pl_points(&[((0, 1), (-1, 1)), ((1, 1), (1, 1))]);
        let fam = LambdaFamily::new(&[Y], 16u32.into(), &[(Y, hidden)].into_iter().collect()).unwrap();
        let out = witness(1, &[], Y, &BTreeMap::new(), &fam).unwrap();
        assert_eq!(out.g.lt_set(&PLFunction::zero()), "[0,1/2)".parse().unwrap());
    }
}
