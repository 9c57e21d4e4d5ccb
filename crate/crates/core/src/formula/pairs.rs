//! Symbolic sets of lattice variables `v_{s,t}`: squares `Ht_x̄(d)^2`,
//! squares with other squares removed, and finite unions of those.
//!
//! Two facts keep this exact. The intersection of `Ht_V(a)^2` and
//! `Ht_W(b)^2` is `Ht_{V∩W}(min(a,b))^2`. And `Ht_V(a)` contains the term
//! `a*v1 + ... + a*vk`, which lies in `Ht_W(b)` only if the whole of
//! `Ht_V(a)` does; so a square is covered by a union of squares only when
//! one of them covers it.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::rational::{count_rationals, Height};
use crate::term::{enumerate_terms, Term, TermPair, Var};

/// `Ht_vars(bound)^2`; empty when `vars` is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Square {
    vars: Vec<Var>,
    bound: Height,
}

impl Square {
    pub fn new(vars: &[Var], bound: Height) -> Self {
        let mut vars = vars.to_vec();
        vars.sort();
        vars.dedup();
        Square { vars, bound }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn bound(&self) -> &Height {
        &self.bound
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty() || self.bound.is_zero()
    }

    pub fn contains_term(&self, t: &Term) -> bool {
        !self.is_empty() && t.within(&self.vars, &self.bound)
    }

    pub fn contains(&self, p: &TermPair) -> bool {
        self.contains_term(&p.first) && self.contains_term(&p.second)
    }

    /// Inclusion of the underlying term sets.
    pub fn is_subset(&self, other: &Square) -> bool {
        self.is_empty()
            || (self.bound <= other.bound && self.vars.iter().all(|v| other.vars.binary_search(v).is_ok()))
    }

    pub fn intersect(&self, other: &Square) -> Square {
        let vars: Vec<Var> = self.vars.iter().filter(|v| other.vars.binary_search(v).is_ok()).copied().collect();
        Square { vars, bound: self.bound.clone().min(other.bound.clone()) }
    }

    /// Number of terms `|Ht_vars(bound)|`, when countable.
    pub fn term_count(&self) -> Option<BigUint> {
        if self.is_empty() {
            return Some(BigUint::zero());
        }
        Some(count_rationals(&self.bound)?.pow(self.vars.len() as u32))
    }

    pub fn count(&self) -> Option<BigUint> {
        self.term_count().map(|n| n.pow(2))
    }

    /// The terms of the square's side, when the bound is small enough to
    /// enumerate.
    pub fn terms(&self) -> Option<Vec<Term>> {
        if self.is_empty() {
            return Some(Vec::new());
        }
        let n = self.term_count()?.to_usize()?;
        if n > ENUMERATION_LIMIT {
            return None;
        }
        Some(enumerate_terms(&self.vars, self.bound.to_u64()?).terms)
    }
}

/// Largest term universe that is ever enumerated explicitly.
pub const ENUMERATION_LIMIT: usize = 200_000;

impl fmt::Display for Square {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = self.vars.iter().map(|v| v.to_string()).collect();
        write!(f, "Ht({};{})^2", vars.join(","), self.bound)
    }
}

/// `base` minus the union of `excluded`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairSpace {
    base: Square,
    excluded: Vec<Square>,
}

impl PairSpace {
    pub fn new(base: Square, excluded: Vec<Square>) -> Self {
        let excluded: Vec<Square> =
            excluded.into_iter().map(|y| base.intersect(&y)).filter(|y| !y.is_empty()).collect();
        PairSpace { base, excluded }
    }

    pub fn base(&self) -> &Square {
        &self.base
    }

    pub fn excluded(&self) -> &[Square] {
        &self.excluded
    }

    pub fn contains(&self, p: &TermPair) -> bool {
        self.base.contains(p) && !self.excluded.iter().any(|y| y.contains(p))
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty() || self.excluded.iter().any(|y| self.base.is_subset(y))
    }

    pub fn intersect(&self, other: &PairSpace) -> PairSpace {
        let mut excluded = self.excluded.clone();
        excluded.extend(other.excluded.iter().cloned());
        PairSpace::new(self.base.intersect(&other.base), excluded)
    }

    /// Number of pairs, by inclusion–exclusion over the removed squares.
    pub fn count(&self) -> Option<BigUint> {
        if self.is_empty() {
            return Some(BigUint::zero());
        }
        let k = self.excluded.len();
        let mut plus = BigUint::zero();
        let mut minus = BigUint::zero();
        for mask in 0u32..(1 << k) {
            let mut sq = self.base.clone();
            for (i, y) in self.excluded.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    sq = sq.intersect(y);
                }
            }
            let c = sq.count()?;
            if mask.count_ones() % 2 == 0 {
                plus += c;
            } else {
                minus += c;
            }
        }
        Some(plus - minus)
    }

    /// The pairs in canonical order (first term, then second), when the
    /// base square is small enough to enumerate.
    pub fn pairs(&self) -> Option<Vec<TermPair>> {
        let terms = self.base.terms()?;
        let mut out = Vec::new();
        for s in &terms {
            for t in &terms {
                let p = TermPair::new(s.clone(), t.clone());
                if !self.excluded.iter().any(|y| y.contains(&p)) {
                    out.push(p);
                }
            }
        }
        Some(out)
    }

    /// `self` minus `other`, as a union of spaces.
    fn subtract(&self, other: &PairSpace) -> Vec<PairSpace> {
        let mut out = Vec::new();
        let mut outside = self.excluded.clone();
        outside.push(other.base.clone());
        out.push(PairSpace::new(self.base.clone(), outside));
        for y in &other.excluded {
            out.push(PairSpace::new(self.base.intersect(y), self.excluded.clone()));
        }
        out.retain(|r| !r.is_empty());
        out
    }

    /// True when every pair of `self` lies in `sq`.
    fn is_within(&self, sq: &Square) -> bool {
        self.is_empty() || self.base.is_subset(sq) || self.excluded.iter().any(|y| self.base.is_subset(y))
    }
}

impl From<Square> for PairSpace {
    fn from(sq: Square) -> Self {
        PairSpace::new(sq, Vec::new())
    }
}

impl fmt::Display for PairSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        for y in &self.excluded {
            write!(f, " \\ {y}")?;
        }
        Ok(())
    }
}

/// A set of lattice variables: `(⋃ regions ∖ holes) ∪ explicit`, with
/// holes inside the regions and explicit pairs outside them.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreePairs {
    regions: Vec<PairSpace>,
    holes: BTreeSet<TermPair>,
    explicit: BTreeSet<TermPair>,
}

/// Most regions handled by inclusion–exclusion counting.
const REGION_LIMIT: usize = 16;

impl FreePairs {
    pub fn empty() -> Self {
        FreePairs::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = TermPair>) -> Self {
        FreePairs { explicit: pairs.into_iter().collect(), ..FreePairs::default() }
    }

    pub fn from_space(space: PairSpace) -> Self {
        let mut out = FreePairs::empty();
        if !space.is_empty() {
            out.regions.push(space);
        }
        out
    }

    fn in_regions(&self, p: &TermPair) -> bool {
        self.regions.iter().any(|r| r.contains(p))
    }

    pub fn contains(&self, p: &TermPair) -> bool {
        (self.in_regions(p) && !self.holes.contains(p)) || self.explicit.contains(p)
    }

    pub fn regions(&self) -> &[PairSpace] {
        &self.regions
    }

    pub fn explicit(&self) -> &BTreeSet<TermPair> {
        &self.explicit
    }

    fn normalize(&mut self) {
        let regions = std::mem::take(&mut self.regions);
        let holes = std::mem::take(&mut self.holes);
        self.regions = regions;
        self.holes = holes.into_iter().filter(|h| self.in_regions(h)).collect();
        let explicit = std::mem::take(&mut self.explicit);
        self.explicit = explicit.into_iter().filter(|p| !self.in_regions(p) || self.holes.contains(p)).collect();
        // An explicit pair inside a hole fills it.
        let filled: Vec<TermPair> = self.explicit.iter().filter(|p| self.holes.contains(*p)).cloned().collect();
        for p in filled {
            self.holes.remove(&p);
            self.explicit.remove(&p);
        }
    }

    pub fn union(&self, other: &FreePairs) -> FreePairs {
        let mut holes = BTreeSet::new();
        for h in &self.holes {
            if !other.contains(h) {
                holes.insert(h.clone());
            }
        }
        for h in &other.holes {
            if !self.contains(h) {
                holes.insert(h.clone());
            }
        }
        let mut out = FreePairs {
            regions: self.regions.iter().chain(&other.regions).cloned().collect(),
            holes,
            explicit: self.explicit.union(&other.explicit).cloned().collect(),
        };
        out.normalize();
        out
    }

    pub fn subtract_space(&self, space: &PairSpace) -> FreePairs {
        let mut out = FreePairs {
            regions: self.regions.iter().flat_map(|r| r.subtract(space)).collect(),
            holes: self.holes.clone(),
            explicit: self.explicit.iter().filter(|p| !space.contains(p)).cloned().collect(),
        };
        out.normalize();
        out
    }

    pub fn subtract_pairs(&self, pairs: &BTreeSet<TermPair>) -> FreePairs {
        let mut out = self.clone();
        out.explicit.retain(|p| !pairs.contains(p));
        out.holes.extend(pairs.iter().filter(|p| self.in_regions(p)).cloned());
        out.normalize();
        out
    }

    /// Exact size, or `None` when a term universe is too large to count or
    /// there are too many regions.
    pub fn count(&self) -> Option<BigUint> {
        let k = self.regions.len();
        if k > REGION_LIMIT {
            return None;
        }
        let mut plus = BigUint::zero();
        let mut minus = BigUint::zero();
        for mask in 1u32..(1 << k) {
            let mut acc: Option<PairSpace> = None;
            for (i, r) in self.regions.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    acc = Some(match acc {
                        None => r.clone(),
                        Some(a) => a.intersect(r),
                    });
                }
            }
            let c = acc.expect("nonempty mask").count()?;
            if mask.count_ones() % 2 == 1 {
                plus += c;
            } else {
                minus += c;
            }
        }
        Some(plus - minus - BigUint::from(self.holes.len()) + BigUint::from(self.explicit.len()))
    }

    pub fn is_empty(&self) -> bool {
        self.regions.iter().all(|r| r.is_empty()) && self.explicit.is_empty()
    }

    /// True when every pair lies in `sq`. Holes are ignored, so a region
    /// that leaves `sq` only through its holes is reported as leaving it.
    pub fn is_within(&self, sq: &Square) -> bool {
        self.regions.iter().all(|r| r.is_within(sq)) && self.explicit.iter().all(|p| sq.contains(p))
    }

    /// All pairs in canonical order, when every region is enumerable.
    pub fn pairs(&self) -> Option<Vec<TermPair>> {
        let mut out: BTreeSet<TermPair> = self.explicit.clone();
        for r in &self.regions {
            out.extend(r.pairs()?.into_iter().filter(|p| !self.holes.contains(p)));
        }
        Some(out.into_iter().collect())
    }
}
