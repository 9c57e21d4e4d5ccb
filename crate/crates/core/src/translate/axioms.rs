//! Instances of the axioms (O1)–(O6) over a finite set of index terms,
//! generated lazily in a fixed order. Instances whose two sides coincide
//! are skipped.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::formula::pairs::{Square, ENUMERATION_LIMIT};
use crate::rational::{Height, Rational};
use crate::sign::SignEntries;
use crate::term::{Term, TermPair, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AxiomKind {
    O1,
    O2,
    O3,
    O4,
    O5,
    O6,
}

impl AxiomKind {
    pub const ALL: [AxiomKind; 6] =
        [AxiomKind::O1, AxiomKind::O2, AxiomKind::O3, AxiomKind::O4, AxiomKind::O5, AxiomKind::O6];
}

impl fmt::Display for AxiomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = *self as u8 + 1;
        write!(f, "o{n}")
    }
}

/// One conjunct of `δ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomInstance {
    /// `v_{s,s} = bot`.
    O1 { s: Term },
    /// `v_{r,s} /\ v_{s,t} <= v_{r,t}`.
    O2 { r: Term, s: Term, t: Term },
    /// `v_{r,t} <= v_{r,s} \/ v_{s,t}`.
    O3 { r: Term, s: Term, t: Term },
    /// `v_{s+r,t+r} = v_{s,t}`.
    O4 { r: Term, s: Term, t: Term },
    /// `v_{r+s,t} = v_{r,t-s}`.
    O5 { r: Term, s: Term, t: Term },
    /// `v_{q*s,t} = v_{s,t/q}`.
    O6 { q: Rational, s: Term, t: Term },
}

impl AxiomInstance {
    pub fn kind(&self) -> AxiomKind {
        match self {
            AxiomInstance::O1 { .. } => AxiomKind::O1,
            AxiomInstance::O2 { .. } => AxiomKind::O2,
            AxiomInstance::O3 { .. } => AxiomKind::O3,
            AxiomInstance::O4 { .. } => AxiomKind::O4,
            AxiomInstance::O5 { .. } => AxiomKind::O5,
            AxiomInstance::O6 { .. } => AxiomKind::O6,
        }
    }

    /// The instance parameters, in the order they are quantified.
    pub fn terms(&self) -> Vec<&Term> {
        match self {
            AxiomInstance::O1 { s } => vec![s],
            AxiomInstance::O2 { r, s, t }
            | AxiomInstance::O3 { r, s, t }
            | AxiomInstance::O4 { r, s, t }
            | AxiomInstance::O5 { r, s, t } => vec![r, s, t],
            AxiomInstance::O6 { s, t, .. } => vec![s, t],
        }
    }

    /// The two variables an equational instance equates.
    pub fn equated(&self) -> Option<(TermPair, TermPair)> {
        let p = |a: Term, b: Term| TermPair::new(a, b);
        match self {
            AxiomInstance::O4 { r, s, t } => Some((p(s.add(r), t.add(r)), p(s.clone(), t.clone()))),
            AxiomInstance::O5 { r, s, t } => Some((p(r.add(s), t.clone()), p(r.clone(), t.sub(s)))),
            AxiomInstance::O6 { q, s, t } => {
                Some((p(s.scale(q), t.clone()), p(s.clone(), t.scale(&(Rational::one() / q)))))
            }
            _ => None,
        }
    }

    /// Truth of the instance in a family; `None` when an entry is missing.
    pub fn holds(&self, fam: &dyn SignEntries) -> Option<bool> {
        let e = |a: &Term, b: &Term| fam.entry(a, b);
        Some(match self {
            AxiomInstance::O1 { s } => e(s, s)?.is_empty(),
            AxiomInstance::O2 { r, s, t } => e(r, s)?.intersect(&e(s, t)?).is_subset(&e(r, t)?),
            AxiomInstance::O3 { r, s, t } => e(r, t)?.is_subset(&e(r, s)?.union(&e(s, t)?)),
            _ => {
                let (a, b) = self.equated().expect("equational axiom");
                fam.pair(&a)? == fam.pair(&b)?
            }
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        obj.insert("kind".into(), serde_json::to_value(self.kind()).expect("kind"));
        if let AxiomInstance::O6 { q, .. } = self {
            obj.insert("q".into(), q.to_string().into());
        }
        obj.insert("terms".into(), self.terms().iter().map(|t| t.to_string()).collect::<Vec<_>>().into());
        serde_json::Value::Object(obj)
    }
}

/// Sorted index terms with membership by binary search.
#[derive(Clone, Debug)]
pub struct IndexSet {
    terms: Arc<Vec<Term>>,
}

impl IndexSet {
    pub fn new(mut terms: Vec<Term>) -> Self {
        terms.sort();
        terms.dedup();
        IndexSet { terms: Arc::new(terms) }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.terms.binary_search(t).is_ok()
    }

    /// Scalars `q > 0, q != 1` for which some nonzero index term `s` has
    /// `q*s` in the set. Every nontrivial (O6) instance uses one of them:
    /// either `s` or `t/q` is nonzero and is paired with `q*s` or `t`.
    pub fn scaling_ratios(&self) -> Vec<Rational> {
        let mut groups: BTreeMap<Term, Vec<Rational>> = BTreeMap::new();
        for t in self.terms.iter() {
            let Some((_, lead)) = t.coeffs().next() else { continue };
            let size = lead.abs();
            groups.entry(t.scale(&(Rational::one() / &size))).or_default().push(size);
        }
        let mut out = BTreeSet::new();
        for sizes in groups.values() {
            for a in sizes {
                for b in sizes {
                    if a != b {
                        out.insert(b / a);
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    /// Instances of the requested kinds, kind by kind.
    pub fn instances(&self, kinds: &[AxiomKind]) -> Box<dyn Iterator<Item = AxiomInstance> + Send> {
        let mut kinds = kinds.to_vec();
        kinds.sort();
        kinds.dedup();
        let mut it: Box<dyn Iterator<Item = AxiomInstance> + Send> = Box::new(std::iter::empty());
        for k in kinds {
            it = Box::new(it.chain(self.instances_of(k)));
        }
        it
    }

    pub fn all_instances(&self) -> Box<dyn Iterator<Item = AxiomInstance> + Send> {
        self.instances(&AxiomKind::ALL)
    }

    fn instances_of(&self, kind: AxiomKind) -> Box<dyn Iterator<Item = AxiomInstance> + Send> {
        let terms = self.terms.clone();
        let m = terms.len();
        let set = self.clone();
        match kind {
            AxiomKind::O1 => Box::new((0..m).map(move |i| AxiomInstance::O1 { s: terms[i].clone() })),
            AxiomKind::O2 | AxiomKind::O3 => Box::new(triples(m).map(move |(i, j, k)| {
                let (r, s, t) = (terms[i].clone(), terms[j].clone(), terms[k].clone());
                if kind == AxiomKind::O2 {
                    AxiomInstance::O2 { r, s, t }
                } else {
                    AxiomInstance::O3 { r, s, t }
                }
            })),
            AxiomKind::O4 => Box::new((0..m).filter(move |&i| !terms[i].is_zero()).flat_map(move |i| {
                let set = set.clone();
                let r = set.terms[i].clone();
                let shifted: Vec<usize> = (0..m).filter(|&j| set.contains(&set.terms[j].add(&r))).collect();
                let pairs: Vec<(usize, usize)> =
                    shifted.iter().flat_map(|&j| shifted.iter().map(move |&k| (j, k))).collect();
                pairs.into_iter().map(move |(j, k)| AxiomInstance::O4 {
                    r: r.clone(),
                    s: set.terms[j].clone(),
                    t: set.terms[k].clone(),
                })
            })),
            AxiomKind::O5 => Box::new((0..m).flat_map(move |i| {
                let set = set.clone();
                let terms = set.terms.clone();
                (0..m).filter(move |&j| !terms[j].is_zero()).flat_map(move |j| {
                    let set = set.clone();
                    let (r, s) = (set.terms[i].clone(), set.terms[j].clone());
                    let ok = set.contains(&r.add(&s));
                    (0..if ok { m } else { 0 }).filter_map(move |k| {
                        let t = &set.terms[k];
                        set.contains(&t.sub(&s)).then(|| AxiomInstance::O5 { r: r.clone(), s: s.clone(), t: t.clone() })
                    })
                })
            })),
            AxiomKind::O6 => {
                let ratios = self.scaling_ratios();
                Box::new(ratios.into_iter().flat_map(move |q| {
                    let set = set.clone();
                    let inv = Rational::one() / &q;
                    let ss: Vec<usize> = (0..m).filter(|&j| set.contains(&set.terms[j].scale(&q))).collect();
                    let ts: Vec<usize> = (0..m).filter(|&k| set.contains(&set.terms[k].scale(&inv))).collect();
                    let pairs: Vec<(usize, usize)> =
                        ss.iter().flat_map(|&j| ts.iter().map(move |&k| (j, k))).collect();
                    pairs.into_iter().filter_map(move |(j, k)| {
                        let (s, t) = (&set.terms[j], &set.terms[k]);
                        (!(s.is_zero() && t.is_zero()))
                            .then(|| AxiomInstance::O6 { q: q.clone(), s: s.clone(), t: t.clone() })
                    })
                }))
            }
        }
    }
}

fn triples(m: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..m).flat_map(move |i| (0..m).flat_map(move |j| (0..m).map(move |k| (i, j, k))))
}

/// The conjuncts of `δ_{bound,vars}` in emission order, or `None` when the
/// term universe is too large to enumerate.
pub fn delta_instances(vars: &[Var], bound: &Height) -> Option<Box<dyn Iterator<Item = AxiomInstance> + Send>> {
    let sq = Square::new(vars, bound.clone());
    if sq.term_count()?.to_usize()? > ENUMERATION_LIMIT {
        return None;
    }
    Some(IndexSet::new(sq.terms()?).all_instances())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::enumerate_terms;

    fn counts(vars: &[Var], d: u64) -> BTreeMap<AxiomKind, usize> {
        let set = IndexSet::new(enumerate_terms(vars, d).terms);
        let mut out = BTreeMap::new();
        for inst in set.all_instances() {
            *out.entry(inst.kind()).or_insert(0) += 1;
        }
        out
    }

    #[test]
    fn one_variable_height_one() {
        let c = counts(&[Var(1)], 1);
        assert_eq!(c.get(&AxiomKind::O1), Some(&3));
        assert_eq!(c.get(&AxiomKind::O2), Some(&27));
        assert_eq!(c.get(&AxiomKind::O3), Some(&27));
        // 17 triples satisfy the side condition; the 9 with r = 0 are trivial.
        assert_eq!(c.get(&AxiomKind::O4), Some(&8));
        assert_eq!(c.get(&AxiomKind::O5), Some(&8));
        assert_eq!(c.get(&AxiomKind::O6), None);
    }

    #[test]
    fn scaling_ratios_at_height_two() {
        let set = IndexSet::new(enumerate_terms(&[Var(1)], 2).terms);
        let rs: Vec<String> = set.scaling_ratios().iter().map(|q| q.to_string()).collect();
        assert_eq!(rs, ["1/4", "1/2", "2", "4"]);
    }

    #[test]
    fn equational_sides_differ() {
        let set = IndexSet::new(enumerate_terms(&[Var(1), Var(2)], 2).terms);
        for inst in set.instances(&[AxiomKind::O4, AxiomKind::O5, AxiomKind::O6]) {
            let (a, b) = inst.equated().unwrap();
            assert_ne!(a, b, "{inst:?}");
            for t in [&a.first, &a.second, &b.first, &b.second] {
                assert!(set.contains(t));
            }
        }
    }
}
