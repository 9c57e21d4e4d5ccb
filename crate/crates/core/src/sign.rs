//! Term-indexed families of open sets and the family `Λ_{d,x̄}(f̄)` of sign
//! sets of an assignment.

use std::collections::{BTreeMap, HashMap};

use crate::pl::{term_apply, PLFunction, PlError};
use crate::rational::Height;
use crate::semilinear::SemilinearSet;
use crate::term::{enumerate_terms, Term, TermPair, Var};

/// Read access to a family `(O_{s,t})` by index terms. `None` means the
/// pair is outside the family's index set.
pub trait SignEntries {
    fn entry(&self, s: &Term, t: &Term) -> Option<SemilinearSet>;

    fn pair(&self, p: &TermPair) -> Option<SemilinearSet> {
        self.entry(&p.first, &p.second)
    }
}

/// A materialized family over a finite list of index terms, stored row by
/// row: entry `(i, j)` at `i * m + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignFamily {
    index_terms: Vec<Term>,
    entries: Vec<SemilinearSet>,
    positions: HashMap<Term, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("index term {0} appears twice")]
    DuplicateIndex(Term),
    #[error("expected {expected} entries, got {got}")]
    WrongSize { expected: usize, got: usize },
    #[error("{0} is not an index pair of the family")]
    UnknownPair(TermPair),
}

impl SignFamily {
    pub fn new(index_terms: Vec<Term>, entries: Vec<SemilinearSet>) -> Result<Self, FamilyError> {
        let m = index_terms.len();
        if entries.len() != m * m {
            return Err(FamilyError::WrongSize { expected: m * m, got: entries.len() });
        }
        let mut positions = HashMap::with_capacity(m);
        for (i, t) in index_terms.iter().enumerate() {
            if positions.insert(t.clone(), i).is_some() {
                return Err(FamilyError::DuplicateIndex(t.clone()));
            }
        }
        Ok(SignFamily { index_terms, entries, positions })
    }

    /// Builds a family by evaluating `entry(i, j)` on every position pair.
    pub fn from_fn<E>(
        index_terms: Vec<Term>,
        mut entry: impl FnMut(usize, usize) -> Result<SemilinearSet, E>,
    ) -> Result<Self, E> {
        let m = index_terms.len();
        let mut entries = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                entries.push(entry(i, j)?);
            }
        }
        Ok(SignFamily::new(index_terms, entries).expect("distinct index terms"))
    }

    /// Materializes the entries of `source` over `index_terms`.
    pub fn restrict(source: &dyn SignEntries, index_terms: Vec<Term>) -> Result<Self, FamilyError> {
        let terms = index_terms.clone();
        SignFamily::from_fn(index_terms, |i, j| {
            source
                .entry(&terms[i], &terms[j])
                .ok_or_else(|| FamilyError::UnknownPair(TermPair::new(terms[i].clone(), terms[j].clone())))
        })
    }

    /// Entries row by row.
    pub fn entries(&self) -> &[SemilinearSet] {
        &self.entries
    }

    pub fn index_terms(&self) -> &[Term] {
        &self.index_terms
    }

    pub fn len(&self) -> usize {
        self.index_terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index_terms.is_empty()
    }

    pub fn position(&self, t: &Term) -> Option<usize> {
        self.positions.get(t).copied()
    }

    pub fn get(&self, i: usize, j: usize) -> &SemilinearSet {
        &self.entries[i * self.len() + j]
    }

    pub fn set(&mut self, s: &Term, t: &Term, value: SemilinearSet) -> Result<(), FamilyError> {
        let pair = || FamilyError::UnknownPair(TermPair::new(s.clone(), t.clone()));
        let i = self.position(s).ok_or_else(pair)?;
        let j = self.position(t).ok_or_else(pair)?;
        let m = self.len();
        self.entries[i * m + j] = value;
        Ok(())
    }

    /// Index pairs with their entries, row by row.
    pub fn iter(&self) -> impl Iterator<Item = (&Term, &Term, &SemilinearSet)> {
        let m = self.len();
        self.entries.iter().enumerate().map(move |(k, e)| (&self.index_terms[k / m], &self.index_terms[k % m], e))
    }
}

impl SignEntries for SignFamily {
    fn entry(&self, s: &Term, t: &Term) -> Option<SemilinearSet> {
        Some(self.get(self.position(s)?, self.position(t)?).clone())
    }
}

impl SignEntries for HashMap<TermPair, SemilinearSet> {
    fn entry(&self, s: &Term, t: &Term) -> Option<SemilinearSet> {
        self.get(&TermPair::new(s.clone(), t.clone())).cloned()
    }
}

/// `Λ_{d,x̄}(f̄)` computed on demand, for index universes too large to
/// materialize.
#[derive(Clone, Debug)]
pub struct LambdaFamily {
    vars: Vec<Var>,
    bound: Height,
    assignment: BTreeMap<Var, PLFunction>,
}

impl LambdaFamily {
    /// Fails when a variable of `vars` is unassigned.
    pub fn new(vars: &[Var], bound: Height, assignment: &BTreeMap<Var, PLFunction>) -> Result<Self, PlError> {
        let mut vars = vars.to_vec();
        vars.sort();
        vars.dedup();
        let mut own = BTreeMap::new();
        for v in &vars {
            let f = assignment.get(v).ok_or(PlError::UnboundVariable(*v))?;
            own.insert(*v, f.clone());
        }
        Ok(LambdaFamily { vars, bound, assignment: own })
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn bound(&self) -> &Height {
        &self.bound
    }

    pub fn contains(&self, t: &Term) -> bool {
        !self.vars.is_empty() && t.within(&self.vars, &self.bound)
    }

    pub fn value(&self, t: &Term) -> Result<PLFunction, PlError> {
        term_apply(t, &self.assignment)
    }
}

impl SignEntries for LambdaFamily {
    fn entry(&self, s: &Term, t: &Term) -> Option<SemilinearSet> {
        if !self.contains(s) || !self.contains(t) {
            return None;
        }
        let fs = self.value(s).expect("variables checked");
        let ft = self.value(t).expect("variables checked");
        Some(fs.lt_set(&ft))
    }
}

/// A family with some entries replaced.
pub struct PatchedFamily<'a> {
    pub base: &'a dyn SignEntries,
    pub patches: HashMap<TermPair, SemilinearSet>,
}

impl SignEntries for PatchedFamily<'_> {
    fn entry(&self, s: &Term, t: &Term) -> Option<SemilinearSet> {
        match self.patches.get(&TermPair::new(s.clone(), t.clone())) {
            Some(e) => Some(e.clone()),
            None => self.base.entry(s, t),
        }
    }
}

/// Materialized `Λ_{d,x̄}(f̄)`: entries `{s(f̄) < t(f̄)}` for all
/// `s, t ∈ Ht_x̄(d)`, indices in canonical term order.
pub fn lambda(d: u64, vars: &[Var], assignment: &BTreeMap<Var, PLFunction>) -> Result<SignFamily, PlError> {
    let universe = enumerate_terms(vars, d);
    let values: Vec<PLFunction> = universe.terms.iter().map(|t| term_apply(t, assignment)).collect::<Result<_, _>>()?;
    SignFamily::from_fn(universe.terms, |i, j| Ok(values[i].lt_set(&values[j])))
}
