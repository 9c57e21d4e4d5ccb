//! Formal rational linear combinations of variables.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{enumerate_rationals, parse_rational, rat_height, Height, Rational};

/// Variable `v_k`, printed as `x<k>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Var(pub u32);

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// `q1*v1 + ... + qn*vn` with zero coefficients never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Term {
    coeffs: BTreeMap<Var, Rational>,
}

impl Term {
    pub fn zero() -> Self {
        Term::default()
    }

    pub fn var(v: Var) -> Self {
        Term::monomial(Rational::one(), v)
    }

    pub fn monomial(q: Rational, v: Var) -> Self {
        let mut coeffs = BTreeMap::new();
        if !q.is_zero() {
            coeffs.insert(v, q);
        }
        Term { coeffs }
    }

    pub fn from_coeffs(pairs: impl IntoIterator<Item = (Var, Rational)>) -> Self {
        let mut t = Term::zero();
        for (v, q) in pairs {
            t.add_assign_monomial(v, &q);
        }
        t
    }

    fn add_assign_monomial(&mut self, v: Var, q: &Rational) {
        let entry = self.coeffs.entry(v).or_insert_with(Rational::zero);
        *entry += q;
        if entry.is_zero() {
            self.coeffs.remove(&v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, v: Var) -> Rational {
        self.coeffs.get(&v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (Var, &Rational)> + '_ {
        self.coeffs.iter().map(|(v, q)| (*v, q))
    }

    pub fn support(&self) -> impl Iterator<Item = Var> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn mentions(&self, v: Var) -> bool {
        self.coeffs.contains_key(&v)
    }

    /// Maximum coefficient height; the zero term has height 1.
    pub fn height(&self) -> Height {
        self.coeffs.values().map(rat_height).max().unwrap_or_else(BigUint::one)
    }

    pub fn add(&self, other: &Term) -> Term {
        let mut out = self.clone();
        for (v, q) in &other.coeffs {
            out.add_assign_monomial(*v, q);
        }
        out
    }

    pub fn sub(&self, other: &Term) -> Term {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &Rational) -> Term {
        if q.is_zero() {
            return Term::zero();
        }
        Term { coeffs: self.coeffs.iter().map(|(v, c)| (*v, c * q)).collect() }
    }

    pub fn neg(&self) -> Term {
        Term { coeffs: self.coeffs.iter().map(|(v, c)| (*v, -c)).collect() }
    }

    /// Replaces `v` by `replacement`.
    pub fn substitute(&self, v: Var, replacement: &Term) -> Term {
        match self.coeffs.get(&v) {
            None => self.clone(),
            Some(q) => {
                let mut rest = self.clone();
                rest.coeffs.remove(&v);
                rest.add(&replacement.scale(q))
            }
        }
    }

    /// True when every variable of the term is in `vars` (sorted) and its
    /// height is at most `bound`.
    pub fn within(&self, vars: &[Var], bound: &Height) -> bool {
        self.coeffs.keys().all(|v| vars.binary_search(v).is_ok()) && &self.height() <= bound
    }

    /// Splits off the coefficient of `v`: `self = q*v + rest`.
    pub fn split(&self, v: Var) -> (Rational, Term) {
        let mut rest = self.clone();
        let q = rest.coeffs.remove(&v).unwrap_or_else(Rational::zero);
        (q, rest)
    }
}

/// Canonical order: lexicographic on the coefficient vector, variables in
/// increasing index order, missing coefficients read as zero.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.coeffs.iter().peekable();
        let mut b = other.coeffs.iter().peekable();
        let zero = Rational::zero();
        loop {
            let (qa, qb) = match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some((va, qa)), Some((vb, qb))) => match va.cmp(vb) {
                    Ordering::Equal => {
                        let r = (*qa, *qb);
                        a.next();
                        b.next();
                        r
                    }
                    Ordering::Less => {
                        let r = (*qa, &zero);
                        a.next();
                        r
                    }
                    Ordering::Greater => {
                        let r = (&zero, *qb);
                        b.next();
                        r
                    }
                },
                (Some((_, qa)), None) => {
                    let r = (*qa, &zero);
                    a.next();
                    r
                }
                (None, Some((_, qb))) => {
                    let r = (&zero, *qb);
                    b.next();
                    r
                }
            };
            match qa.cmp(qb) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (v, q)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if q.is_one() {
                write!(f, "{v}")?;
            } else {
                write!(f, "{q}*{v}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl From<Var> for Term {
    fn from(v: Var) -> Self {
        Term::var(v)
    }
}

/// Ordered pair `(s, t)` indexing the lattice variable `v_{s,t}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermPair {
    pub first: Term,
    pub second: Term,
}

impl TermPair {
    pub fn new(first: Term, second: Term) -> Self {
        TermPair { first, second }
    }
}

impl fmt::Display for TermPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v[{}|{}]", self.first, self.second)
    }
}

impl Serialize for TermPair {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The finite set of terms over `vars` of height at most `bound`, in
/// canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermUniverse {
    pub vars: Vec<Var>,
    pub bound: u64,
    pub terms: Vec<Term>,
}

impl TermUniverse {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.terms.binary_search(t).is_ok()
    }

    pub fn position(&self, t: &Term) -> Option<usize> {
        self.terms.binary_search(t).ok()
    }
}

/// Enumerates the terms over `vars` of height at most `d`. The empty
/// variable tuple yields the empty universe.
pub fn enumerate_terms(vars: &[Var], d: u64) -> TermUniverse {
    let mut sorted = vars.to_vec();
    sorted.sort();
    sorted.dedup();
    let terms = if sorted.is_empty() || d == 0 {
        Vec::new()
    } else {
        let coeffs = enumerate_rationals(d);
        let mut terms = vec![Term::zero()];
        // Earlier variables are more significant, so extend from the last.
        for v in sorted.iter().rev() {
            let mut next = Vec::with_capacity(terms.len() * coeffs.len());
            for q in &coeffs {
                let head = Term::monomial(q.clone(), *v);
                for t in &terms {
                    next.push(head.add(t));
                }
            }
            terms = next;
        }
        terms
    };
    TermUniverse { vars: sorted, bound: d, terms }
}

/// Converts a height bound to a machine integer for enumeration.
pub fn small_bound(b: &Height) -> Option<u64> {
    b.to_u64()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseTermError {
    #[error("bad summand `{0}`")]
    Summand(String),
    #[error(transparent)]
    Rational(#[from] crate::rational::ParseRationalError),
}

/// Parses the standalone term syntax: `c*x<k>` summands joined by `+`,
/// `x<k>` for coefficient one, and `0` for the zero term.
pub fn parse_term(text: &str) -> Result<Term, ParseTermError> {
    let mut out = Term::zero();
    for summand in text.split('+') {
        let s = summand.trim();
        if s.is_empty() {
            return Err(ParseTermError::Summand(summand.to_string()));
        }
        let (coeff, name) = match s.rsplit_once('*') {
            Some((c, n)) => (parse_rational(c)?, n.trim()),
            None if s.starts_with('x') || s.starts_with("-x") => {
                let neg = s.starts_with('-');
                let q = if neg { -Rational::one() } else { Rational::one() };
                (q, s.trim_start_matches('-'))
            }
            None => {
                if parse_rational(s)?.is_zero() {
                    continue;
                }
                return Err(ParseTermError::Summand(s.to_string()));
            }
        };
        let k = name
            .strip_prefix('x')
            .and_then(|k| k.parse::<u32>().ok())
            .ok_or_else(|| ParseTermError::Summand(s.to_string()))?;
        out.add_assign_monomial(Var(k), &coeff);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn x(k: u32) -> Term {
        Term::var(Var(k))
    }

    #[test]
    fn heights() {
        let t = x(1).scale(&rat(1, 2)).add(&x(2).scale(&int(3)));
        assert_eq!(t.height(), BigUint::from(3u32));
        let q = rat(-5, 3);
        assert_eq!(x(1).add(&x(2)).scale(&q).height(), rat_height(&q));
        assert_eq!(Term::zero().height(), BigUint::one());
    }

    #[test]
    fn arithmetic_is_canonical() {
        assert_eq!(x(1).add(&x(1).neg()), Term::zero());
        assert!(x(1).add(&x(1).neg()).coeffs().next().is_none());
        assert_eq!(
            x(1).add(&x(2)).scale(&rat(1, 2)),
            Term::from_coeffs([(Var(1), rat(1, 2)), (Var(2), rat(1, 2))])
        );
        let half = x(1).scale(&rat(1, 2));
        assert_eq!(half.add(&half), x(1));
    }

    #[test]
    fn universes() {
        let u = enumerate_terms(&[Var(1)], 1);
        assert_eq!(u.terms, vec![x(1).neg(), Term::zero(), x(1)]);
        assert_eq!(enumerate_terms(&[Var(1), Var(2)], 1).len(), 9);
        assert!(enumerate_terms(&[], 5).is_empty());
        let u = enumerate_terms(&[Var(1), Var(2)], 2);
        assert_eq!(u.len(), 49);
        assert!(u.terms.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn text_syntax() {
        let t = parse_term("1/2*x1 + -1*x2").unwrap();
        assert_eq!(t, Term::from_coeffs([(Var(1), rat(1, 2)), (Var(2), int(-1))]));
        assert_eq!(t.to_string(), "1/2*x1 + -1*x2");
        assert_eq!(parse_term("0").unwrap(), Term::zero());
        assert_eq!(Term::zero().to_string(), "0");
        assert_eq!(parse_term("x3").unwrap(), x(3));
        assert!(parse_term("y").is_err());
        assert!(parse_term("x1 +").is_err());
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-12i64..=12, 1i64..=12).prop_map(|(n, d)| rat(n, d))
    }

    fn arb_term() -> impl Strategy<Value = Term> {
        prop::collection::vec((0u32..3, arb_rational()), 0..4)
            .prop_map(|cs| Term::from_coeffs(cs.into_iter().map(|(v, q)| (Var(v), q))))
    }

    proptest! {
        #[test]
        fn sum_height_bound(s in arb_term(), t in arb_term()) {
            let bound = BigUint::from(2u32) * s.height() * t.height();
            prop_assert!(s.add(&t).height() <= bound);
        }

        #[test]
        fn scale_height_bound(q in arb_rational(), t in arb_term()) {
            prop_assert!(t.scale(&q).height() <= rat_height(&q) * t.height());
        }

        #[test]
        fn text_round_trip(t in arb_term()) {
            prop_assert_eq!(parse_term(&t.to_string()).unwrap(), t);
        }

        #[test]
        fn universe_shape(nvars in 1usize..3, d in 1u64..4, d2 in 0u64..3) {
            let vars: Vec<Var> = (1..=nvars as u32).map(Var).collect();
            let small = enumerate_terms(&vars, d);
            let large = enumerate_terms(&vars, d + d2);
            prop_assert!(small.terms.iter().all(|t| large.contains(t)));
            prop_assert!(small.terms.iter().all(|t| small.contains(&t.neg())));
            prop_assert!(small.contains(&Term::zero()));
            prop_assert_eq!(small.len(), enumerate_rationals(d).len().pow(nvars as u32));
            prop_assert!(small.terms.iter().all(|t| t.within(&vars, &BigUint::from(d))));
        }
    }
}
