//! Brute-force oracles shared by the integration tests. None of them call
//! the library routines they are used to check.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use cozero::checker::Assignment;
use cozero::formula::lgroup::LGroupFormula;
use cozero::pl::PLFunction;
use cozero::rational::{rat, Rational};
use cozero::term::{Term, Var};
use num_integer::Integer;

/// Every rational `k/n` with `|k|, |n| <= d`, by listing numerators and
/// denominators.
pub fn rationals_upto(d: i64) -> Vec<Rational> {
    let mut out = BTreeSet::new();
    for n in 1..=d {
        for k in -d..=d {
            if k.gcd(&n) == 1 || k == 0 {
                out.insert(rat(k, n));
            }
        }
    }
    out.into_iter().collect()
}

/// All coefficient vectors over `vars` with entries from
/// [`rationals_upto`].
pub fn terms_upto(vars: &[Var], d: i64) -> Vec<Term> {
    let qs = rationals_upto(d);
    let mut out = vec![Vec::new()];
    for _ in vars {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<Rational>| {
                qs.iter().map(move |q| {
                    let mut v = prefix.clone();
                    v.push(q.clone());
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(|cs| Term::from_coeffs(vars.iter().copied().zip(cs))).collect()
}

/// Union of the breakpoints of the assigned functions.
pub fn breakpoints(asg: &Assignment) -> Vec<Rational> {
    let all: BTreeSet<Rational> = asg.values().flat_map(|f| f.breakpoints().iter().cloned()).collect();
    all.into_iter().collect()
}

/// Value of a term at one point, from the coefficients and point values.
pub fn value_at(t: &Term, asg: &Assignment, p: &Rational) -> Rational {
    t.coeffs().map(|(v, q)| q * asg[&v].eval_at(p).unwrap()).sum()
}

/// `s <= t` everywhere. Both sides are linear between consecutive
/// breakpoints of the assignment, so the breakpoints decide it.
pub fn atom_holds(s: &Term, t: &Term, asg: &Assignment, points: &[Rational]) -> bool {
    points.iter().all(|p| value_at(s, asg, p) <= value_at(t, asg, p))
}

pub fn eval_qf(phi: &LGroupFormula, asg: &Assignment, points: &[Rational], memo: &mut BTreeMap<String, bool>) -> bool {
    match phi {
        LGroupFormula::Atom(s, t) => {
            let key = format!("{s}<={t}");
            if let Some(b) = memo.get(&key) {
                return *b;
            }
            let b = atom_holds(s, t, asg, points);
            memo.insert(key, b);
            b
        }
        LGroupFormula::And(a, b) => eval_qf(a, asg, points, memo) && eval_qf(b, asg, points, memo),
        LGroupFormula::Not(a) => !eval_qf(a, asg, points, memo),
        LGroupFormula::Exists(..) => panic!("quantifier in a quantifier-free oracle"),
    }
}

/// `{s < t}` sampled at breakpoints and midpoints of a refinement that
/// contains every crossing of `s` and `t`.
pub fn lt_samples(f: &PLFunction, g: &PLFunction) -> Vec<(Rational, bool)> {
    let mut points: BTreeSet<Rational> = f.breakpoints().iter().chain(g.breakpoints()).cloned().collect();
    let list: Vec<Rational> = points.iter().cloned().collect();
    for w in list.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let da = g.eval_at(a).unwrap() - f.eval_at(a).unwrap();
        let db = g.eval_at(b).unwrap() - f.eval_at(b).unwrap();
        if (da < Rational::from_integer(0.into())) != (db < Rational::from_integer(0.into())) && da != db {
            points.insert(a + (b - a) * &da / (&da - &db));
        }
    }
    let list: Vec<Rational> = points.into_iter().collect();
    let mut out = Vec::new();
    for (i, p) in list.iter().enumerate() {
        out.push((p.clone(), f.eval_at(p).unwrap() < g.eval_at(p).unwrap()));
        if let Some(q) = list.get(i + 1) {
            let m = (p + q) / Rational::from_integer(2.into());
            out.push((m.clone(), f.eval_at(&m).unwrap() < g.eval_at(&m).unwrap()));
        }
    }
    out
}
