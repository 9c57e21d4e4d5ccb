//! Realizing an open sign condition: given `f_1..f_n` and a family that
//! agrees with their sign sets, build `f_{n+1}` with
//! `{f_i < f_{n+1}} = O_{i,n+1}` and `{f_{n+1} < f_i} = O_{n+1,i}`.

use std::collections::BTreeMap;

use crate::constructions::mix::{mix, MixError, MixInput};
use crate::constructions::validate::{validate_sign_family, ValidateOptions};
use crate::partial::{glue, tietze_extend, PartialPLFunction, Piece};
use crate::pl::{dist_fn, PLFunction, PlError};
use crate::rational::{int, midpoint, Rational};
use crate::semilinear::{Cell, SemilinearSet, SetError};
use crate::sign::SignFamily;

/// `base` holds `f_1..f_n`; the family is indexed by `n + k` terms whose
/// first `n` stand for the base functions.
#[derive(Clone, Debug)]
pub struct ExtensionProblem {
    pub base: Vec<PLFunction>,
    pub family: SignFamily,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtendError {
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("inconsistent family: the prescribed values disagree at {0}")]
    Inconsistent(Rational),
    #[error("postcondition failed: {0}")]
    PostconditionFailed(String),
    #[error("at index {index}: {source}")]
    At { index: usize, source: Box<ExtendError> },
}

impl From<MixError> for ExtendError {
    fn from(e: MixError) -> Self {
        ExtendError::PostconditionFailed(e.to_string())
    }
}

fn internal(e: PlError) -> ExtendError {
    ExtendError::PostconditionFailed(e.to_string())
}

fn set_err(e: SetError) -> ExtendError {
    ExtendError::PostconditionFailed(e.to_string())
}

impl ExtensionProblem {
    fn check(&self, new: usize) -> Result<(), ExtendError> {
        let fam = &self.family;
        if fam.len() < new {
            return Err(ExtendError::InvalidFamily(format!("{} indices for {} functions", fam.len(), new)));
        }
        let report = validate_sign_family(fam, ValidateOptions::default());
        if let Some(v) = report.violations.first() {
            return Err(ExtendError::InvalidFamily(v.to_string()));
        }
        for i in 0..self.base.len() {
            for j in 0..self.base.len() {
                if *fam.get(i, j) != self.base[i].lt_set(&self.base[j]) {
                    return Err(ExtendError::InvalidFamily(format!(
                        "entry ({}, {}) is not the sign set of the base functions",
                        fam.index_terms()[i],
                        fam.index_terms()[j]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// One new function for a family over exactly `n + 1` indices.
pub fn extend_one(problem: &ExtensionProblem) -> Result<PLFunction, ExtendError> {
    let n = problem.base.len();
    if problem.family.len() != n + 1 {
        return Err(ExtendError::InvalidFamily(format!(
            "expected {} indices, found {}",
            n + 1,
            problem.family.len()
        )));
    }
    problem.check(n + 1)?;
    if n == 0 {
        return Ok(PLFunction::zero());
    }
    let fam = &problem.family;
    let fs = &problem.base;
    let above: Vec<&SemilinearSet> = (0..n).map(|i| fam.get(i, n)).collect();
    let below: Vec<&SemilinearSet> = (0..n).map(|i| fam.get(n, i)).collect();

    // E_i: where the new function must equal f_i.
    let parts: Vec<(SemilinearSet, PLFunction)> =
        (0..n).map(|i| (above[i].union(below[i]).complement(), fs[i].clone())).collect();
    let fixed = match PartialPLFunction::from_parts(&parts) {
        Ok(p) => p,
        Err(PlError::Mismatch(p)) => return Err(ExtendError::Inconsistent(p)),
        Err(e) => return Err(internal(e)),
    };
    let e = fixed.domain().clone();

    // X_I: the cells of X ∖ E grouped by I = {i : f_i < f_{n+1}}.
    let mut pieces: BTreeMap<Vec<usize>, Vec<Cell>> = BTreeMap::new();
    for cell in e.complement().cells() {
        let p = match cell {
            Cell::Point(p) => p.clone(),
            Cell::Interval { lo, hi, .. } => midpoint(lo, hi),
        };
        let lower: Vec<usize> = (0..n).filter(|&i| above[i].contains(&p)).collect();
        pieces.entry(lower).or_default().push(cell.clone());
    }

    let mut glued = parts.clone();
    for (lower, cells) in pieces {
        let x_i = SemilinearSet::from_cells(cells).map_err(set_err)?;
        let upper: Vec<usize> = (0..n).filter(|i| !lower.contains(i)).collect();
        let max_of = |ix: &[usize]| ix.iter().map(|&i| fs[i].clone()).reduce(|a, b| a.max(&b));
        let min_of = |ix: &[usize]| ix.iter().map(|&i| fs[i].clone()).reduce(|a, b| a.min(&b));
        let one = PLFunction::constant(int(1));
        let (f_lo, f_hi) = match (max_of(&lower), min_of(&upper)) {
            (Some(lo), Some(hi)) => (lo, hi),
            (Some(lo), None) => (lo.clone(), lo.add(&one)),
            (None, Some(hi)) => (hi.sub(&one), hi),
            (None, None) => unreachable!("n > 0"),
        };
        let space = x_i.closure();
        let frontier = space.difference(&x_i);
        let points = frontier
            .as_points()
            .ok_or_else(|| ExtendError::PostconditionFailed(format!("frontier {frontier} is not finite")))?;
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut knots = Vec::new();
        for p in &points {
            let v = fixed
                .value_at(p)
                .ok_or_else(|| ExtendError::PostconditionFailed(format!("frontier point {p} outside E")))?;
            let at_lo = f_lo.eval_at(p).map_err(internal)? == v;
            let at_hi = f_hi.eval_at(p).map_err(internal)? == v;
            if !at_lo && !at_hi {
                return Err(ExtendError::PostconditionFailed(format!(
                    "frontier point {p} meets neither bound of its piece"
                )));
            }
            if at_lo {
                a.push(p.clone());
            }
            if at_hi {
                b.push(p.clone());
            }
            knots.push(v);
        }
        let ab = SemilinearSet::points(points.iter().cloned()).map_err(set_err)?;
        let (h, d) = if points.is_empty() {
            (f_lo.clone(), PLFunction::constant(int(1)))
        } else {
            let pieces = knots.into_iter().map(Piece::Point).collect();
            let partial = PartialPLFunction::new(ab.clone(), pieces).map_err(internal)?;
            (tietze_extend(&partial).map_err(internal)?, dist_fn(&ab).map_err(internal)?)
        };
        let input = MixInput {
            space: space.clone(),
            a: SemilinearSet::points(a).map_err(set_err)?,
            b: SemilinearSet::points(b).map_err(set_err)?,
            u: x_i,
            f: f_lo,
            g: f_hi,
            h,
            d,
        };
        glued.push((space, mix(&input)?));
    }
    let g = glue(&glued).map_err(internal)?;
    for i in 0..n {
        if fs[i].lt_set(&g) != *above[i] || g.lt_set(&fs[i]) != *below[i] {
            return Err(ExtendError::PostconditionFailed(format!(
                "sign sets against {} are not realized",
                fam.index_terms()[i]
            )));
        }
    }
    Ok(g)
}

/// New functions for every index past the base, one at a time.
pub fn extend_many(problem: &ExtensionProblem) -> Result<Vec<PLFunction>, ExtendError> {
    let n = problem.base.len();
    let total = problem.family.len();
    if total < n {
        return Err(ExtendError::InvalidFamily(format!("{total} indices for {n} base functions")));
    }
    let terms = problem.family.index_terms();
    let mut base = problem.base.clone();
    let mut out = Vec::new();
    for index in n..total {
        let family = SignFamily::restrict(&problem.family, terms[..=index].to_vec())
            .map_err(|e| ExtendError::InvalidFamily(e.to_string()))?;
        let step = ExtensionProblem { base: base.clone(), family };
        let g = extend_one(&step).map_err(|e| ExtendError::At { index, source: Box::new(e) })?;
        base.push(g.clone());
        out.push(g);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pl::pl_points;
    use crate::rational::rat;
    use crate::term::{Term, Var};

    fn set(t: &str) -> SemilinearSet {
        t.parse().unwrap()
    }

    fn vars(n: u32) -> Vec<Term> {
        (1..=n).map(|k| Term::var(Var(k))).collect()
    }

    fn family_of(fs: &[PLFunction]) -> SignFamily {
        SignFamily::from_fn::<()>(vars(fs.len() as u32), |i, j| Ok(fs[i].lt_set(&fs[j]))).unwrap()
    }

    #[test]
    fn worked_instance() {
        let family = SignFamily::new(vars(2), vec![set("empty"), set("(0,1/2)"), set("(1/2,1]"), set("empty")]);
        // O_{2,1} must be open in X; (1/2,1] is, since 1 ends the space.
        let family = family.unwrap();
        let g = extend_one(&ExtensionProblem { base: vec![PLFunction::zero()], family }).unwrap();
        assert_eq!(PLFunction::zero().lt_set(&g), set("(0,1/2)"));
        assert_eq!(g.lt_set(&PLFunction::zero()), set("(1/2,1]"));
    }

    #[test]
    fn stated_worked_instance() {
        let family = SignFamily::new(vars(2), vec![set("empty"), set("(0,1/2)"), set("(1/2,1)"), set("empty")]).unwrap();
        let g = extend_one(&ExtensionProblem { base: vec![PLFunction::zero()], family }).unwrap();
        let expected = pl_points(&[((0, 1), (0, 1)), ((1, 4), (1, 4)), ((1, 2), (0, 1)), ((3, 4), (-1, 8)), ((1, 1), (0, 1))]);
        assert_eq!(g, expected);
    }

    #[test]
    fn degenerate_family_forces_equality() {
        let f = pl_points(&[((0, 1), (1, 1)), ((1, 1), (-1, 1))]);
        let family = family_of(&[f.clone(), f.clone()]);
        let g = extend_one(&ExtensionProblem { base: vec![f.clone()], family }).unwrap();
        assert_eq!(g, f);
    }

    #[test]
    fn hidden_functions_are_realized() {
        let f1 = PLFunction::identity();
        let f2 = pl_points(&[((0, 1), (1, 2)), ((1, 1), (1, 2))]);
        let g1 = pl_points(&[((0, 1), (1, 1)), ((1, 2), (0, 1)), ((1, 1), (1, 1))]);
        let g2 = g1.scale(&rat(1, 2)).sub(&PLFunction::constant(rat(1, 8)));
        let all = [f1.clone(), f2.clone(), g1, g2];
        let family = family_of(&all);
        let out = extend_many(&ExtensionProblem { base: vec![f1, f2], family: family.clone() }).unwrap();
        assert_eq!(out.len(), 2);
        let realized: Vec<PLFunction> = all[..2].iter().cloned().chain(out).collect();
        assert_eq!(family_of(&realized), family);
    }

    #[test]
    fn bad_families_are_rejected() {
        let family = SignFamily::new(vars(2), vec![set("empty"), set("(0,1)"), set("(0,1)"), set("empty")]).unwrap();
        let e = extend_one(&ExtensionProblem { base: vec![PLFunction::zero()], family }).unwrap_err();
        assert!(matches!(e, ExtendError::InvalidFamily(_)));
        let family = SignFamily::new(vars(2), vec![set("(0,1)"), set("empty"), set("empty"), set("empty")]).unwrap();
        let e = extend_one(&ExtensionProblem { base: vec![PLFunction::zero()], family }).unwrap_err();
        assert!(matches!(e, ExtendError::InvalidFamily(_)));
    }

    #[test]
    fn empty_base() {
        let family = SignFamily::new(vars(1), vec![set("empty")]).unwrap();
        assert_eq!(extend_one(&ExtensionProblem { base: vec![], family }).unwrap(), PLFunction::zero());
        let family = SignFamily::new(vars(1), vec![set("empty")]).unwrap();
        assert!(extend_many(&ExtensionProblem { base: vec![PLFunction::zero()], family }).unwrap().is_empty());
    }
}
