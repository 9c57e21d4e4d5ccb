//! Sizes of a translation, computed without writing it out.
//!
//! Conjunct counts of `δ_{e,x̄}` factor over coordinates. With `R` the
//! rationals of height at most `e`, `n = |x̄|` and `c(a) = #{b ∈ R : a+b ∈ R}`:
//! (o1) has `|R|^n` instances, (o2) and (o3) `|R|^{3n}` each, (o4)
//! `(Σ_a c(a)^2)^n - |R|^{2n}`, (o5) `(Σ_a c(a)c(-a))^n - |R|^{2n}`, and (o6)
//! `Σ_q (m(q)^n m(1/q)^n - 1)` over `q > 0, q ≠ 1` with
//! `m(q) = #{a ∈ R : qa ∈ R}`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::formula::lattice::LatticeFormula;
use crate::formula::lgroup::LGroupFormula;
use crate::formula::pairs::Square;
use crate::rational::{count_rationals, enumerate_rationals, Height};
use crate::term::Var;
use crate::translate::axioms::AxiomKind;
use crate::translate::delta::delta_block_free_count;
use crate::translate::translation::{translate, HeightSchedule, TranslateError, TranslationResult};

/// Largest `|R|` for which (o4)–(o6) are counted; the sums are quadratic.
pub const RATIONAL_SUM_LIMIT: usize = 5000;

/// Conjunct counts of `δ_{e,x̄}` by axiom kind; `None` where too large to
/// count.
pub fn delta_counts(e: &Height, n: usize) -> BTreeMap<AxiomKind, Option<BigUint>> {
    let mut out = BTreeMap::new();
    let r = if n == 0 { Some(BigUint::zero()) } else { count_rationals(e) };
    let size = r.map(|r| if n == 0 { r } else { r.pow(n as u32) });
    out.insert(AxiomKind::O1, size.clone());
    out.insert(AxiomKind::O2, size.as_ref().map(|s| s.pow(3)));
    out.insert(AxiomKind::O3, size.as_ref().map(|s| s.pow(3)));
    let sums = if n == 0 {
        Some((BigUint::zero(), BigUint::zero(), BigUint::zero()))
    } else {
        e.to_u64().and_then(|e| arithmetic_counts(e, n))
    };
    out.insert(AxiomKind::O4, sums.as_ref().map(|s| s.0.clone()));
    out.insert(AxiomKind::O5, sums.as_ref().map(|s| s.1.clone()));
    out.insert(AxiomKind::O6, sums.map(|s| s.2));
    out
}

/// Raw (o4) and (o5) counts, before the trivial instances are removed.
pub fn raw_shift_counts(e: u64, n: usize) -> Option<(BigUint, BigUint)> {
    let (o4, o5, _) = sums(e)?;
    Some((o4.pow(n as u32), o5.pow(n as u32)))
}

fn sums(e: u64) -> Option<(BigUint, BigUint, Vec<(usize, usize)>)> {
    if count_rationals(&BigUint::from(e))?.to_usize()? > RATIONAL_SUM_LIMIT {
        return None;
    }
    // Small fractions as reduced (numerator, denominator) pairs.
    let values: Vec<(i64, i64)> = enumerate_rationals(e)
        .iter()
        .map(|q| (q.numer().to_i64().expect("small"), q.denom().to_i64().expect("small")))
        .collect();
    let set: HashSet<(i64, i64)> = values.iter().copied().collect();
    let reduce = |n: i64, d: i64| {
        let g = n.gcd(&d).max(1);
        (n / g, d / g)
    };
    let add = |(a, b): (i64, i64), (c, d): (i64, i64)| reduce(a * d + c * b, b * d);
    let c: HashMap<(i64, i64), usize> =
        values.iter().map(|&a| (a, values.iter().filter(|&&b| set.contains(&add(a, b))).count())).collect();
    let o4: usize = values.iter().map(|a| c[a] * c[a]).sum();
    let o5: usize = values.iter().map(|&(n, d)| c[&(n, d)] * c.get(&(-n, d)).copied().unwrap_or(0)).sum();
    let positive: Vec<(i64, i64)> = values.iter().copied().filter(|&(n, _)| n > 0).collect();
    let mut ratios: BTreeSet<(i64, i64)> = BTreeSet::new();
    for &(a, b) in &positive {
        for &(c, d) in &positive {
            let q = reduce(c * b, d * a);
            if q != (1, 1) {
                ratios.insert(q);
            }
        }
    }
    let m = |(p, q): (i64, i64)| values.iter().filter(|&&(a, b)| set.contains(&reduce(a * p, b * q))).count();
    let pairs = ratios.iter().map(|&(p, q)| (m((p, q)), m((q, p)))).collect();
    Some((BigUint::from(o4), BigUint::from(o5), pairs))
}

fn arithmetic_counts(e: u64, n: usize) -> Option<(BigUint, BigUint, BigUint)> {
    let (o4, o5, ratios) = sums(e)?;
    let size = BigUint::from(enumerate_rationals(e).len()).pow(n as u32);
    let trivial = size.pow(2);
    let o6 = ratios
        .into_iter()
        .map(|(a, b)| BigUint::from(a).pow(n as u32) * BigUint::from(b).pow(n as u32) - 1u32)
        .sum();
    Some((o4.pow(n as u32) - &trivial, o5.pow(n as u32) - trivial, o6))
}

/// Counts for one quantifier step.
#[derive(Clone, Debug, Serialize)]
pub struct StepCount {
    pub var: String,
    pub context: Vec<String>,
    pub bound: String,
    pub expansion: String,
    /// `|Ȳ|`.
    pub bound_pairs: Option<String>,
    /// `|W̄|`.
    pub witness_pairs: Option<String>,
    /// Free variables of the `Δ` block, counted on its symbolic form.
    pub delta_free: Option<String>,
    /// The same number from `|Ht_x̄(E)|^2 + |Ht_{x̄y}(d)|^2 - |Ht_x̄(d)|^2`.
    pub delta_free_formula: Option<String>,
    pub conjuncts: BTreeMap<AxiomKind, Option<String>>,
    pub dropped: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CountReport {
    pub formula: String,
    pub schedule: String,
    pub unsound_schedule: bool,
    pub max_height: String,
    pub quantifiers: usize,
    /// `D_φ`, written out when it has at most 60 digits.
    pub bound: String,
    pub bound_digits: usize,
    pub free_vars: Option<String>,
    /// `|Ht_x̄(D_φ)|^2`, the bound on the free variables.
    pub free_vars_limit: Option<String>,
    pub free_vars_within_limit: bool,
    pub steps: Vec<StepCount>,
    /// Every count computed two ways agrees.
    pub consistent: bool,
}

fn show(n: Option<BigUint>) -> Option<String> {
    n.map(|n| n.to_string())
}

/// Builds the count report for `phi` under `schedule`.
pub fn count_translation(phi: &LGroupFormula, schedule: &HeightSchedule) -> Result<CountReport, TranslateError> {
    let result = translate(phi, schedule)?;
    Ok(report(phi, &result))
}

pub fn report(phi: &LGroupFormula, result: &TranslationResult) -> CountReport {
    let mut consistent = true;
    let mut steps = Vec::new();
    for step in &result.steps {
        let all: Vec<Var> = step.context.iter().copied().chain([step.var]).collect();
        let block = crate::translate::delta::delta_block(&step.bound, &step.expansion, &step.context, step.var);
        let delta_free = block.free_pairs().count();
        let formula = delta_block_free_count(&step.bound, &step.expansion, &step.context, step.var);
        if delta_free.is_some() && formula.is_some() && delta_free != formula {
            consistent = false;
        }
        steps.push(StepCount {
            var: step.var.to_string(),
            context: step.context.iter().map(|v| v.to_string()).collect(),
            bound: step.bound.to_string(),
            expansion: step.expansion.to_string(),
            bound_pairs: show(step.bound_space().count()),
            witness_pairs: show(step.witness_space().count()),
            delta_free: show(delta_free),
            delta_free_formula: show(formula),
            conjuncts: delta_counts(&step.expansion, all.len()).into_iter().map(|(k, v)| (k, show(v))).collect(),
            dropped: step.lattice_node.is_none(),
        });
    }
    let free = result.formula.free_pairs();
    let limit_square = lemma_square(result);
    let within = free.is_within(&limit_square) || free_vars_are_constant(&result.formula);
    let bound = result.substitution_bound.to_string();
    CountReport {
        formula: phi.to_string(),
        schedule: result.schedule.to_string(),
        unsound_schedule: result.unsound(),
        max_height: phi.max_height().to_string(),
        quantifiers: phi.quantifier_count(),
        bound_digits: bound.len(),
        bound: if bound.len() <= 60 { bound } else { format!("{}...({} digits)", &bound[..20], bound.len()) },
        free_vars: show(free.count()),
        free_vars_limit: show(limit_square.count()),
        free_vars_within_limit: within,
        steps,
        consistent,
    }
}

/// `Ht_x̄(d)^2` for the free variables `x̄` of the input and the
/// substitution bound `d`.
pub fn lemma_square(result: &TranslationResult) -> Square {
    result.free_square()
}

/// Variable-free atoms such as `0 <= 0` produce `v[0|0]` even though
/// `Ht_∅` is empty; such pairs are accepted.
fn free_vars_are_constant(f: &LatticeFormula) -> bool {
    let free = f.free_pairs();
    free.regions().is_empty() && free.explicit().iter().all(|p| p.first.is_zero() && p.second.is_zero())
}

impl CountReport {
    pub fn to_text(&self) -> String {
        let na = |s: &Option<String>| s.clone().unwrap_or_else(|| "n/a".to_string());
        let mut out = String::new();
        if self.unsound_schedule {
            out.push_str(&format!(
                "# UNSOUND-SCHEDULE: {} replaces the paper height bounds; equivalence with the input is not guaranteed\n",
                self.schedule
            ));
        }
        out.push_str(&format!("formula: {}\n", self.formula));
        out.push_str(&format!("schedule: {}\n", self.schedule));
        out.push_str(&format!("d_phi: {}\n", self.max_height));
        out.push_str(&format!("N_phi: {}\n", self.quantifiers));
        out.push_str(&format!("D_phi: {}\n", self.bound));
        out.push_str(&format!("free variables: {}\n", na(&self.free_vars)));
        out.push_str(&format!(
            "free variable limit: {} ({})\n",
            na(&self.free_vars_limit),
            if self.free_vars_within_limit { "within" } else { "EXCEEDED" }
        ));
        for (i, s) in self.steps.iter().enumerate() {
            out.push_str(&format!(
                "step {i}: E {} over ({}), d = {}, E = {}{}\n",
                s.var,
                s.context.join(","),
                s.bound,
                s.expansion,
                if s.dropped { ", dropped (variable not free)" } else { "" }
            ));
            out.push_str(&format!("  bound pairs: {}\n", na(&s.bound_pairs)));
            out.push_str(&format!("  witness pairs: {}\n", na(&s.witness_pairs)));
            out.push_str(&format!(
                "  Delta free variables: {} (formula {})\n",
                na(&s.delta_free),
                na(&s.delta_free_formula)
            ));
            let parts: Vec<String> = s.conjuncts.iter().map(|(k, v)| format!("{k}={}", na(v))).collect();
            out.push_str(&format!("  delta conjuncts: {}\n", parts.join(" ")));
        }
        out.push_str(&format!("consistent: {}\n", self.consistent));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse::parse_lgroup;
    use crate::term::enumerate_terms;
    use crate::translate::axioms::IndexSet;

    #[test]
    fn closed_forms_match_generation() {
        for (d, n) in [(1u64, 1usize), (2, 1), (3, 1), (1, 2), (2, 2)] {
            let vars: Vec<Var> = (1..=n as u32).map(Var).collect();
            let set = IndexSet::new(enumerate_terms(&vars, d).terms);
            let mut generated: BTreeMap<AxiomKind, usize> = BTreeMap::new();
            for inst in set.all_instances() {
                *generated.entry(inst.kind()).or_default() += 1;
            }
            for (kind, count) in delta_counts(&BigUint::from(d), n) {
                let expected = generated.get(&kind).copied().unwrap_or(0);
                assert_eq!(count, Some(BigUint::from(expected)), "d={d} n={n} {kind}");
            }
        }
        assert_eq!(raw_shift_counts(1, 1), Some((BigUint::from(17u32), BigUint::from(17u32))));
    }

    #[test]
    fn paper_schedule_report() {
        let phi = parse_lgroup("E y. 0 <= y").unwrap();
        let r = count_translation(&phi, &HeightSchedule::Paper).unwrap();
        assert_eq!(r.bound, "16");
        assert_eq!(r.free_vars.as_deref(), Some("0"));
        assert_eq!(r.steps[0].delta_free.as_deref(), Some("9"));
        assert_eq!(r.steps[0].delta_free_formula.as_deref(), Some("9"));
        assert_eq!(r.steps[0].conjuncts[&AxiomKind::O1].as_deref(), Some("319"));
        assert!(r.consistent && r.free_vars_within_limit);

        let phi = parse_lgroup("E y. (y <= x1)").unwrap();
        let r = count_translation(&phi, &HeightSchedule::Paper).unwrap();
        assert_eq!(r.steps[0].delta_free.as_deref(), Some("101833"));
        assert_eq!(r.free_vars.as_deref(), Some("101761"));
    }

    #[test]
    fn two_quantifiers() {
        let phi = parse_lgroup("E y. E z. (x1 <= y & y <= z)").unwrap();
        let r = count_translation(&phi, &HeightSchedule::Paper).unwrap();
        assert_eq!(r.bound, "1048576");
        assert!(r.consistent);
        assert!(r.free_vars_within_limit);
        assert!(r.to_text().contains("D_phi: 1048576"));
    }
}
