//! Semilinear subsets of `X = [0,1] ∩ Q`.
//!
//! A set is a sorted list of pairwise disjoint, non-mergeable cells, so two
//! sets are equal iff their cell lists are equal. Every operation works on a
//! common refinement: the sorted endpoints of the operands (plus `0` and `1`)
//! split `X` into points and open gaps, membership is constant on each piece,
//! and the result is rebuilt from the per-piece flags.
//!
//! Topology is relative to `X`, so `[0, 1/2)` is open and `(1/2, 1]` is open.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::rational::{midpoint, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Cell {
    Point(Rational),
    Interval { lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool },
}

impl Cell {
    pub fn closed(lo: Rational, hi: Rational) -> Cell {
        Cell::Interval { lo, hi, lo_closed: true, hi_closed: true }
    }

    pub fn open(lo: Rational, hi: Rational) -> Cell {
        Cell::Interval { lo, hi, lo_closed: false, hi_closed: false }
    }

    pub fn contains(&self, p: &Rational) -> bool {
        match self {
            Cell::Point(q) => q == p,
            Cell::Interval { lo, hi, lo_closed, hi_closed } => {
                let above = if *lo_closed { p >= lo } else { p > lo };
                let below = if *hi_closed { p <= hi } else { p < hi };
                above && below
            }
        }
    }

    fn endpoints(&self) -> (&Rational, &Rational) {
        match self {
            Cell::Point(p) => (p, p),
            Cell::Interval { lo, hi, .. } => (lo, hi),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Point(p) => write!(f, "{{{p}}}"),
            Cell::Interval { lo, hi, lo_closed, hi_closed } => write!(
                f,
                "{}{lo},{hi}{}",
                if *lo_closed { '[' } else { '(' },
                if *hi_closed { ']' } else { ')' }
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SemilinearSet {
    cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SetError {
    #[error("cell {0} is not inside [0,1]")]
    OutOfRange(String),
    #[error("empty interval {0}")]
    EmptyInterval(String),
    #[error("cannot parse set: {0}")]
    Parse(String),
}

/// Pieces of the refinement of `X` by a sorted list of points: point `i`,
/// then the open gap between points `i` and `i + 1`.
struct Refinement {
    points: Vec<Rational>,
}

impl Refinement {
    fn new(mut points: Vec<Rational>) -> Refinement {
        points.push(Rational::zero());
        points.push(Rational::one());
        points.retain(|p| *p >= Rational::zero() && *p <= Rational::one());
        points.sort();
        points.dedup();
        Refinement { points }
    }

    fn of(sets: &[&SemilinearSet]) -> Refinement {
        let mut pts = Vec::new();
        for s in sets {
            for c in &s.cells {
                let (lo, hi) = c.endpoints();
                pts.push(lo.clone());
                pts.push(hi.clone());
            }
        }
        Refinement::new(pts)
    }

    fn gaps(&self) -> impl Iterator<Item = Rational> + '_ {
        self.points.windows(2).map(|w| midpoint(&w[0], &w[1]))
    }

    /// Sample points: each point followed by its gap's midpoint.
    fn samples(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(2 * self.points.len());
        let mids: Vec<Rational> = self.gaps().collect();
        for (i, p) in self.points.iter().enumerate() {
            out.push(p.clone());
            if let Some(m) = mids.get(i) {
                out.push(m.clone());
            }
        }
        out
    }

    /// Rebuilds a canonical set from membership flags in `samples` order.
    fn build(&self, flags: &[bool]) -> SemilinearSet {
        debug_assert_eq!(flags.len(), 2 * self.points.len() - 1);
        let mut cells = Vec::new();
        let mut i = 0;
        while i < flags.len() {
            if !flags[i] {
                i += 1;
                continue;
            }
            let start = i;
            while i + 1 < flags.len() && flags[i + 1] {
                i += 1;
            }
            let end = i;
            // Even indices are points, odd indices are gaps.
            let lo = self.points[start / 2].clone();
            let lo_closed = start % 2 == 0;
            let (hi, hi_closed) =
                if end % 2 == 0 { (self.points[end / 2].clone(), true) } else { (self.points[end / 2 + 1].clone(), false) };
            if start == end && lo_closed {
                cells.push(Cell::Point(lo));
            } else {
                cells.push(Cell::Interval { lo, hi, lo_closed, hi_closed });
            }
            i += 1;
        }
        SemilinearSet { cells }
    }
}

impl SemilinearSet {
    pub fn empty() -> Self {
        SemilinearSet::default()
    }

    /// The whole space `[0,1]`.
    pub fn full() -> Self {
        SemilinearSet { cells: vec![Cell::closed(Rational::zero(), Rational::one())] }
    }

    pub fn point(p: Rational) -> Self {
        SemilinearSet::from_cells(vec![Cell::Point(p)]).expect("point inside [0,1]")
    }

    pub fn points(ps: impl IntoIterator<Item = Rational>) -> Result<Self, SetError> {
        SemilinearSet::from_cells(ps.into_iter().map(Cell::Point).collect())
    }

    pub fn interval(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Result<Self, SetError> {
        SemilinearSet::from_cells(vec![Cell::Interval { lo, hi, lo_closed, hi_closed }])
    }

    /// Canonicalizes an arbitrary list of cells inside `[0,1]`.
    pub fn from_cells(cells: Vec<Cell>) -> Result<Self, SetError> {
        for c in &cells {
            let (lo, hi) = c.endpoints();
            if *lo < Rational::zero() || *hi > Rational::one() {
                return Err(SetError::OutOfRange(c.to_string()));
            }
            if lo > hi || (lo == hi && matches!(c, Cell::Interval { .. })) {
                return Err(SetError::EmptyInterval(c.to_string()));
            }
        }
        let raw = SemilinearSet { cells };
        let r = Refinement::of(&[&raw]);
        let flags: Vec<bool> = r.samples().iter().map(|p| raw.cells.iter().any(|c| c.contains(p))).collect();
        Ok(r.build(&flags))
    }

    /// Builds a set from membership flags on the points and gaps of a sorted
    /// point list that includes `0` and `1`.
    pub(crate) fn from_pieces(points: &[Rational], point_in: &[bool], gap_in: &[bool]) -> Self {
        let r = Refinement { points: points.to_vec() };
        let mut flags = Vec::with_capacity(points.len() * 2);
        for i in 0..points.len() {
            flags.push(point_in[i]);
            if i + 1 < points.len() {
                flags.push(gap_in[i]);
            }
        }
        r.build(&flags)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn contains(&self, p: &Rational) -> bool {
        // Cells are sorted: find the last cell starting at or before p.
        let idx = self.cells.partition_point(|c| c.endpoints().0 <= p);
        idx > 0 && self.cells[idx - 1].contains(p)
    }

    fn combine(&self, other: &SemilinearSet, op: impl Fn(bool, bool) -> bool) -> SemilinearSet {
        let r = Refinement::of(&[self, other]);
        let flags: Vec<bool> = r.samples().iter().map(|p| op(self.contains(p), other.contains(p))).collect();
        r.build(&flags)
    }

    fn is_full(&self) -> bool {
        matches!(self.cells.as_slice(), [Cell::Interval { lo, hi, lo_closed: true, hi_closed: true }] if lo.is_zero() && hi.is_one())
    }

    pub fn union(&self, other: &SemilinearSet) -> SemilinearSet {
        if self.is_empty() || other.is_full() || self == other {
            return other.clone();
        }
        if other.is_empty() || self.is_full() {
            return self.clone();
        }
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &SemilinearSet) -> SemilinearSet {
        if self.is_empty() || other.is_full() || self == other {
            return self.clone();
        }
        if other.is_empty() || self.is_full() {
            return other.clone();
        }
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &SemilinearSet) -> SemilinearSet {
        self.combine(other, |a, b| a && !b)
    }

    /// Complement relative to `[0,1]`.
    pub fn complement(&self) -> SemilinearSet {
        let r = Refinement::of(&[self]);
        let flags: Vec<bool> = r.samples().iter().map(|p| !self.contains(p)).collect();
        r.build(&flags)
    }

    pub fn union_all<'a>(sets: impl IntoIterator<Item = &'a SemilinearSet>) -> SemilinearSet {
        sets.into_iter().fold(SemilinearSet::empty(), |acc, s| acc.union(s))
    }

    pub fn intersect_all<'a>(sets: impl IntoIterator<Item = &'a SemilinearSet>) -> SemilinearSet {
        sets.into_iter().fold(SemilinearSet::full(), |acc, s| acc.intersect(s))
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn is_subset(&self, other: &SemilinearSet) -> bool {
        if self.is_empty() || other.is_full() || self == other {
            return true;
        }
        if other.is_empty() {
            return false;
        }
        let r = Refinement::of(&[self, other]);
        r.samples().iter().all(|p| !self.contains(p) || other.contains(p))
    }

    pub fn is_disjoint(&self, other: &SemilinearSet) -> bool {
        if self.is_empty() || other.is_empty() {
            return true;
        }
        let r = Refinement::of(&[self, other]);
        r.samples().iter().all(|p| !(self.contains(p) && other.contains(p)))
    }

    /// Per-piece flags: `(refinement, point flags, gap flags)`.
    fn pieces(&self) -> (Refinement, Vec<bool>, Vec<bool>) {
        let r = Refinement::of(&[self]);
        let pts: Vec<bool> = r.points.iter().map(|p| self.contains(p)).collect();
        let gaps: Vec<bool> = r.gaps().map(|m| self.contains(&m)).collect();
        (r, pts, gaps)
    }

    pub fn closure(&self) -> SemilinearSet {
        let (r, pts, gaps) = self.pieces();
        let n = pts.len();
        let pts: Vec<bool> = (0..n)
            .map(|i| pts[i] || (i > 0 && gaps[i - 1]) || (i + 1 < n && gaps[i]))
            .collect();
        SemilinearSet::from_pieces(&r.points, &pts, &gaps)
    }

    pub fn interior(&self) -> SemilinearSet {
        let (r, pts, gaps) = self.pieces();
        let n = pts.len();
        // The ends of X only need their inner neighbour.
        let pts: Vec<bool> = (0..n)
            .map(|i| pts[i] && (i == 0 || gaps[i - 1]) && (i + 1 == n || gaps[i]))
            .collect();
        SemilinearSet::from_pieces(&r.points, &pts, &gaps)
    }

    pub fn boundary(&self) -> SemilinearSet {
        self.closure().difference(&self.interior())
    }

    pub fn is_open(&self) -> bool {
        self.interior() == *self
    }

    pub fn is_closed(&self) -> bool {
        self.closure() == *self
    }

    pub fn equals(&self, other: &SemilinearSet) -> bool {
        self == other
    }

    /// Isolated points of the set, when every cell is a point.
    pub fn as_points(&self) -> Option<Vec<Rational>> {
        self.cells
            .iter()
            .map(|c| match c {
                Cell::Point(p) => Some(p.clone()),
                Cell::Interval { .. } => None,
            })
            .collect()
    }

    /// Every endpoint of every cell, sorted.
    pub fn endpoints(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        for c in &self.cells {
            let (lo, hi) = c.endpoints();
            out.push(lo.clone());
            out.push(hi.clone());
        }
        out.dedup();
        out
    }
}

impl fmt::Display for SemilinearSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cells.is_empty() {
            return write!(f, "empty");
        }
        for (i, c) in self.cells.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for SemilinearSet {
    type Err = SetError;

    /// `empty`, or cells joined by `+`: `[0,1/2) + {3/4} + (7/8,1]`. A
    /// point cell may list several points: `{0, 1/2}`.
    fn from_str(text: &str) -> Result<Self, SetError> {
        let t = text.trim();
        if t == "empty" {
            return Ok(SemilinearSet::empty());
        }
        let bad = |m: &str| SetError::Parse(format!("{m} in `{t}`"));
        let mut cells = Vec::new();
        for part in t.split('+') {
            let p = part.trim();
            let num = |s: &str| parse_rational(s).map_err(|_| bad("bad endpoint"));
            if let Some(inner) = p.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
                for q in inner.split(',') {
                    cells.push(Cell::Point(num(q)?));
                }
                continue;
            }
            let lo_closed = match p.chars().next() {
                Some('[') => true,
                Some('(') => false,
                _ => return Err(bad("expected `[`, `(` or `{`")),
            };
            let hi_closed = match p.chars().last() {
                Some(']') => true,
                Some(')') => false,
                _ => return Err(bad("expected `]` or `)`")),
            };
            let inner = &p[1..p.len() - 1];
            let (lo, hi) = inner.split_once(',').ok_or_else(|| bad("expected `lo,hi`"))?;
            cells.push(Cell::Interval { lo: num(lo)?, hi: num(hi)?, lo_closed, hi_closed });
        }
        SemilinearSet::from_cells(cells)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn s(text: &str) -> SemilinearSet {
        text.parse().unwrap()
    }

    #[test]
    fn boolean_operations() {
        assert_eq!(s("[0,1/2)").complement(), s("[1/2,1]"));
        assert_eq!(s("[0,1/4]").union(&s("[1/4,1/2]")), s("[0,1/2]"));
        assert_eq!(s("(0,1)").intersect(&s("{1/2}")), s("{1/2}"));
        assert_eq!(s("[0,1]").difference(&s("{1/2}")), s("[0,1/2) + (1/2,1]"));
        assert_eq!(s("empty").complement(), SemilinearSet::full());
    }

    #[test]
    fn topology_is_relative_to_unit_interval() {
        assert_eq!(s("(0,1/2)").closure(), s("[0,1/2]"));
        assert_eq!(s("[0,1/2]").interior(), s("[0,1/2)"));
        assert_eq!(s("(1/4,3/4)").boundary(), s("{1/4} + {3/4}"));
        assert!(s("(0,1/2) + (3/4,1]").is_open());
        assert!(s("{0} + [1/2,1]").is_closed());
        assert!(s("[0,1/2) + [1/2,1]").equals(&s("[0,1]")));
        assert!(SemilinearSet::full().is_open() && SemilinearSet::full().is_closed());
        assert!(s("{1/3}").interior().is_empty());
    }

    #[test]
    fn canonical_form_merges_and_sorts() {
        let a = SemilinearSet::from_cells(vec![
            Cell::Point(rat(1, 2)),
            Cell::open(rat(0, 1), rat(1, 2)),
            Cell::Interval { lo: rat(1, 2), hi: rat(3, 4), lo_closed: false, hi_closed: true },
        ])
        .unwrap();
        assert_eq!(a, s("(0,3/4]"));
        assert_eq!(a.to_string(), "(0,3/4]");
        assert_eq!(s("{1/2, 0}").to_string(), "{0} + {1/2}");
        assert!("[0,2]".parse::<SemilinearSet>().is_err());
        assert!("(1/2,1/2)".parse::<SemilinearSet>().is_err());
        assert!("[0,1".parse::<SemilinearSet>().is_err());
    }

    pub(crate) fn arb_set() -> impl Strategy<Value = SemilinearSet> {
        let cell = (0i64..=8, 0i64..=8, any::<bool>(), any::<bool>(), any::<bool>()).prop_map(|(a, b, lc, hc, pt)| {
            let (lo, hi) = (a.min(b), a.max(b));
            if pt || lo == hi {
                Cell::Point(rat(lo, 8))
            } else {
                Cell::Interval { lo: rat(lo, 8), hi: rat(hi, 8), lo_closed: lc, hi_closed: hc }
            }
        });
        prop::collection::vec(cell, 0..5).prop_map(|cells| SemilinearSet::from_cells(cells).unwrap())
    }

    proptest! {
        #[test]
        fn boolean_algebra_laws(a in arb_set(), b in arb_set(), c in arb_set()) {
            prop_assert_eq!(a.union(&b), b.union(&a));
            prop_assert_eq!(a.intersect(&b), b.intersect(&a));
            prop_assert_eq!(a.intersect(&b.union(&c)), a.intersect(&b).union(&a.intersect(&c)));
            prop_assert_eq!(a.union(&b.intersect(&c)), a.union(&b).intersect(&a.union(&c)));
            prop_assert_eq!(a.union(&b).complement(), a.complement().intersect(&b.complement()));
            prop_assert_eq!(a.intersect(&b).complement(), a.complement().union(&b.complement()));
            prop_assert_eq!(a.complement().complement(), a.clone());
            prop_assert_eq!(a.difference(&b), a.intersect(&b.complement()));
            prop_assert_eq!(a.is_subset(&b), a.union(&b) == b);
            prop_assert_eq!(a.is_disjoint(&b), a.intersect(&b).is_empty());
        }

        #[test]
        fn topological_laws(a in arb_set()) {
            let cl = a.closure();
            let int = a.interior();
            prop_assert_eq!(cl.closure(), cl.clone());
            prop_assert_eq!(int.interior(), int.clone());
            prop_assert!(int.is_subset(&a) && a.is_subset(&cl));
            prop_assert_eq!(a.boundary(), cl.difference(&int));
            prop_assert!(cl.is_closed() && int.is_open());
            if a.is_open() {
                prop_assert!(a.complement().is_closed());
            }
        }

        #[test]
        fn every_set_is_a_boolean_combination_of_closed_cells(a in arb_set()) {
            // Each cell is a closed interval minus at most two closed points.
            let mut rebuilt = SemilinearSet::empty();
            for c in a.cells() {
                let piece = match c {
                    Cell::Point(p) => SemilinearSet::point(p.clone()),
                    Cell::Interval { lo, hi, lo_closed, hi_closed } => {
                        let mut cl = SemilinearSet::interval(lo.clone(), hi.clone(), true, true).unwrap();
                        if !lo_closed { cl = cl.difference(&SemilinearSet::point(lo.clone())); }
                        if !hi_closed { cl = cl.difference(&SemilinearSet::point(hi.clone())); }
                        cl
                    }
                };
                rebuilt = rebuilt.union(&piece);
            }
            prop_assert_eq!(rebuilt, a);
        }

        #[test]
        fn text_round_trip(a in arb_set()) {
            prop_assert_eq!(a.to_string().parse::<SemilinearSet>().unwrap(), a);
        }
    }
}
