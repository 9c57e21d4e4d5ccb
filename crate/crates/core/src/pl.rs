//! Continuous piecewise-linear functions `[0,1] ∩ Q -> Q` with rational
//! breakpoints and values: the reference model of a constructible l-group.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::rational::{midpoint, parse_rational, Rational};
use crate::semilinear::{Cell, SemilinearSet};
use crate::term::{Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlError {
    #[error("point {0} is outside [0,1]")]
    OutOfDomain(Rational),
    #[error("breakpoints must increase strictly from 0 to 1")]
    BadBreakpoints,
    #[error("distance to the empty set")]
    EmptySet,
    #[error("set {0} is not closed in [0,1]")]
    DomainNotClosed(String),
    #[error("closed sets do not cover [0,1]; {0} is missing")]
    CoverIncomplete(Rational),
    #[error("parts disagree at {0}")]
    Mismatch(Rational),
    #[error("variable {0} is unassigned")]
    UnboundVariable(Var),
    #[error("cannot parse function: {0}")]
    Parse(String),
}

/// Breakpoints `0 = b_0 < ... < b_n = 1` with one value each; collinear
/// breakpoints are always removed, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PLFunction {
    breakpoints: Vec<Rational>,
    values: Vec<Rational>,
}

fn collinear(a: (&Rational, &Rational), b: (&Rational, &Rational), c: (&Rational, &Rational)) -> bool {
    (b.1 - a.1) * (c.0 - b.0) == (c.1 - b.1) * (b.0 - a.0)
}

/// Merges two sorted breakpoint lists.
fn merge_points(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
                x
            }
            (Some(x), Some(y)) if x < y => {
                i += 1;
                x
            }
            (Some(_), Some(y)) => {
                j += 1;
                y
            }
            (Some(x), None) => {
                i += 1;
                x
            }
            (None, Some(y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        out.push(next.clone());
    }
    out
}

impl PLFunction {
    /// Builds a function from `(breakpoint, value)` pairs covering `[0,1]`.
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<Self, PlError> {
        let ok = points.first().is_some_and(|p| p.0.is_zero())
            && points.last().is_some_and(|p| p.0.is_one())
            && points.windows(2).all(|w| w[0].0 < w[1].0);
        if !ok || points.len() < 2 {
            return Err(PlError::BadBreakpoints);
        }
        let (breakpoints, values) = points.into_iter().unzip();
        Ok(PLFunction::canonical(breakpoints, values))
    }

    fn canonical(breakpoints: Vec<Rational>, values: Vec<Rational>) -> Self {
        let mut bs: Vec<Rational> = Vec::with_capacity(breakpoints.len());
        let mut vs: Vec<Rational> = Vec::with_capacity(values.len());
        for (b, v) in breakpoints.into_iter().zip(values) {
            while bs.len() >= 2 {
                let n = bs.len();
                if collinear((&bs[n - 2], &vs[n - 2]), (&bs[n - 1], &vs[n - 1]), (&b, &v)) {
                    bs.pop();
                    vs.pop();
                } else {
                    break;
                }
            }
            bs.push(b);
            vs.push(v);
        }
        PLFunction { breakpoints: bs, values: vs }
    }

    /// Interpolates through sorted knots inside `[0,1]`, extending constantly
    /// before the first and after the last knot. No knots gives zero.
    pub fn interpolate(knots: &[(Rational, Rational)]) -> Self {
        let Some(first) = knots.first() else {
            return PLFunction::constant(Rational::zero());
        };
        let last = knots.last().expect("nonempty");
        let mut pts = Vec::with_capacity(knots.len() + 2);
        if !first.0.is_zero() {
            pts.push((Rational::zero(), first.1.clone()));
        }
        pts.extend(knots.iter().cloned());
        if !last.0.is_one() {
            pts.push((Rational::one(), last.1.clone()));
        }
        let (b, v) = pts.into_iter().unzip();
        PLFunction::canonical(b, v)
    }

    pub fn constant(c: Rational) -> Self {
        PLFunction { breakpoints: vec![Rational::zero(), Rational::one()], values: vec![c.clone(), c] }
    }

    pub fn zero() -> Self {
        PLFunction::constant(Rational::zero())
    }

    /// The identity `x -> x`.
    pub fn identity() -> Self {
        PLFunction { breakpoints: vec![Rational::zero(), Rational::one()], values: vec![Rational::zero(), Rational::one()] }
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn points(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.breakpoints.iter().zip(&self.values)
    }

    pub fn eval_at(&self, p: &Rational) -> Result<Rational, PlError> {
        if p.is_negative() || *p > Rational::one() {
            return Err(PlError::OutOfDomain(p.clone()));
        }
        Ok(self.eval_unchecked(p))
    }

    fn eval_unchecked(&self, p: &Rational) -> Rational {
        let i = self.breakpoints.partition_point(|b| b <= p);
        if i == 0 {
            return self.values[0].clone();
        }
        if i == self.breakpoints.len() {
            return self.values[i - 1].clone();
        }
        let (b0, b1) = (&self.breakpoints[i - 1], &self.breakpoints[i]);
        let (v0, v1) = (&self.values[i - 1], &self.values[i]);
        v0 + (v1 - v0) * (p - b0) / (b1 - b0)
    }

    fn values_on(&self, points: &[Rational]) -> Vec<Rational> {
        // Two-pointer walk; `points` is sorted.
        let mut out = Vec::with_capacity(points.len());
        let mut seg = 0;
        for p in points {
            while seg + 2 < self.breakpoints.len() && self.breakpoints[seg + 1] < *p {
                seg += 1;
            }
            if self.breakpoints[seg] == *p {
                out.push(self.values[seg].clone());
            } else if self.breakpoints[seg + 1] == *p {
                out.push(self.values[seg + 1].clone());
            } else {
                let (b0, b1) = (&self.breakpoints[seg], &self.breakpoints[seg + 1]);
                let (v0, v1) = (&self.values[seg], &self.values[seg + 1]);
                out.push(v0 + (v1 - v0) * (p - b0) / (b1 - b0));
            }
        }
        out
    }

    fn zip_with(&self, other: &PLFunction, op: impl Fn(&Rational, &Rational) -> Rational) -> PLFunction {
        let pts = merge_points(&self.breakpoints, &other.breakpoints);
        let a = self.values_on(&pts);
        let b = other.values_on(&pts);
        let vs = a.iter().zip(&b).map(|(x, y)| op(x, y)).collect();
        PLFunction::canonical(pts, vs)
    }

    pub fn add(&self, other: &PLFunction) -> PLFunction {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &PLFunction) -> PLFunction {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> PLFunction {
        PLFunction { breakpoints: self.breakpoints.clone(), values: self.values.iter().map(|v| -v).collect() }
    }

    pub fn scale(&self, q: &Rational) -> PLFunction {
        if q.is_zero() {
            return PLFunction::zero();
        }
        PLFunction { breakpoints: self.breakpoints.clone(), values: self.values.iter().map(|v| v * q).collect() }
    }

    /// Breakpoints of both functions plus every point where `self - other`
    /// changes sign inside a segment, with both functions' values there.
    fn refine_crossings(&self, other: &PLFunction) -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
        let pts = merge_points(&self.breakpoints, &other.breakpoints);
        let a = self.values_on(&pts);
        let b = other.values_on(&pts);
        let mut ps = Vec::with_capacity(pts.len() * 2);
        let mut av = Vec::with_capacity(pts.len() * 2);
        let mut bv = Vec::with_capacity(pts.len() * 2);
        for i in 0..pts.len() {
            if i > 0 {
                let d0 = &a[i - 1] - &b[i - 1];
                let d1 = &a[i] - &b[i];
                if (d0.is_positive() && d1.is_negative()) || (d0.is_negative() && d1.is_positive()) {
                    let t = &d0 / (&d0 - &d1);
                    let c = &pts[i - 1] + (&pts[i] - &pts[i - 1]) * &t;
                    let va = &a[i - 1] + (&a[i] - &a[i - 1]) * &t;
                    ps.push(c);
                    av.push(va.clone());
                    bv.push(va);
                }
            }
            ps.push(pts[i].clone());
            av.push(a[i].clone());
            bv.push(b[i].clone());
        }
        (ps, av, bv)
    }

    pub fn min(&self, other: &PLFunction) -> PLFunction {
        let (ps, a, b) = self.refine_crossings(other);
        let vs = a.into_iter().zip(b).map(|(x, y)| if x <= y { x } else { y }).collect();
        PLFunction::canonical(ps, vs)
    }

    pub fn max(&self, other: &PLFunction) -> PLFunction {
        let (ps, a, b) = self.refine_crossings(other);
        let vs = a.into_iter().zip(b).map(|(x, y)| if x >= y { x } else { y }).collect();
        PLFunction::canonical(ps, vs)
    }

    pub fn abs(&self) -> PLFunction {
        self.max(&self.neg())
    }

    /// `{self < other}`, open in `X`.
    pub fn lt_set(&self, other: &PLFunction) -> SemilinearSet {
        other.sub(self).sign_set(|v| v.is_positive())
    }

    /// `{self = 0}`, closed in `X`.
    pub fn zero_set(&self) -> SemilinearSet {
        self.sign_set(|v| v.is_zero())
    }

    /// `{self != 0}`, open in `X`.
    pub fn cozero_set(&self) -> SemilinearSet {
        self.sign_set(|v| !v.is_zero())
    }

    /// Set where the value satisfies `pred`; exact because the sign is
    /// constant strictly between consecutive breakpoints once zero
    /// crossings are added.
    fn sign_set(&self, pred: impl Fn(&Rational) -> bool) -> SemilinearSet {
        let (ps, vs, _) = self.refine_crossings(&PLFunction::zero());
        let point_in: Vec<bool> = vs.iter().map(&pred).collect();
        let gap_in: Vec<bool> = vs.windows(2).map(|w| pred(&midpoint(&w[0], &w[1]))).collect();
        SemilinearSet::from_pieces(&ps, &point_in, &gap_in)
    }

    /// Values at the endpoints of a cell and at every breakpoint inside it.
    pub(crate) fn knots_on(&self, cell: &Cell) -> Vec<(Rational, Rational)> {
        match cell {
            Cell::Point(p) => vec![(p.clone(), self.eval_unchecked(p))],
            Cell::Interval { lo, hi, .. } => {
                let mut out = vec![(lo.clone(), self.eval_unchecked(lo))];
                for (b, v) in self.points() {
                    if b > lo && b < hi {
                        out.push((b.clone(), v.clone()));
                    }
                }
                out.push((hi.clone(), self.eval_unchecked(hi)));
                out
            }
        }
    }
}

pub fn pl_const(c: Rational) -> PLFunction {
    PLFunction::constant(c)
}

/// Pointwise distance to a nonempty closed set `A`: the infimum of
/// `|x - a|` over `a` in `A`. Its zero set is exactly `A`.
pub fn dist_fn(a: &SemilinearSet) -> Result<PLFunction, PlError> {
    if a.is_empty() {
        return Err(PlError::EmptySet);
    }
    if !a.is_closed() {
        return Err(PlError::DomainNotClosed(a.to_string()));
    }
    let x = PLFunction::identity();
    let mut acc: Option<PLFunction> = None;
    for cell in a.cells() {
        let d = match cell {
            Cell::Point(p) => x.sub(&pl_const(p.clone())).abs(),
            Cell::Interval { lo, hi, .. } => {
                let left = pl_const(lo.clone()).sub(&x);
                let right = x.sub(&pl_const(hi.clone()));
                left.max(&right).max(&PLFunction::zero())
            }
        };
        acc = Some(match acc {
            None => d,
            Some(prev) => prev.min(&d),
        });
    }
    Ok(acc.expect("nonempty"))
}

/// Evaluates the linear combination `t(f1, ..., fn)`.
pub fn term_apply(t: &Term, assignment: &BTreeMap<Var, PLFunction>) -> Result<PLFunction, PlError> {
    let mut out = PLFunction::zero();
    for (v, q) in t.coeffs() {
        let f = assignment.get(&v).ok_or(PlError::UnboundVariable(v))?;
        out = out.add(&f.scale(q));
    }
    Ok(out)
}

impl fmt::Display for PLFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pl:")?;
        for (b, v) in self.points() {
            write!(f, " ({b}, {v})")?;
        }
        Ok(())
    }
}

impl FromStr for PLFunction {
    type Err = PlError;

    /// `pl: (0, -1) (1/2, 0) (1, 1)`.
    fn from_str(text: &str) -> Result<Self, PlError> {
        let t = text.trim();
        let body = t.strip_prefix("pl:").ok_or_else(|| PlError::Parse(format!("missing `pl:` in `{t}`")))?;
        let mut points = Vec::new();
        for chunk in body.split(')') {
            let c = chunk.trim();
            if c.is_empty() {
                continue;
            }
            let inner = c.strip_prefix('(').ok_or_else(|| PlError::Parse(format!("expected `(` near `{c}`")))?;
            let (b, v) = inner.split_once(',').ok_or_else(|| PlError::Parse(format!("expected `b, v` in `{c}`")))?;
            let b = parse_rational(b).map_err(|e| PlError::Parse(e.to_string()))?;
            let v = parse_rational(v).map_err(|e| PlError::Parse(e.to_string()))?;
            points.push((b, v));
        }
        PLFunction::new(points)
    }
}

/// Convenience: `PLFunction` through integer-ratio points.
pub fn pl_points(points: &[((i64, i64), (i64, i64))]) -> PLFunction {
    let pts = points
        .iter()
        .map(|((bn, bd), (vn, vd))| (crate::rational::rat(*bn, *bd), crate::rational::rat(*vn, *vd)))
        .collect();
    PLFunction::new(pts).expect("valid breakpoints")
}

/// `x -> a*x + b`.
pub fn pl_affine(a: Rational, b: Rational) -> PLFunction {
    PLFunction::identity().scale(&a).add(&pl_const(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn tent() -> PLFunction {
        pl_points(&[((0, 1), (0, 1)), ((1, 2), (1, 1)), ((1, 1), (0, 1))])
    }

    fn set(t: &str) -> SemilinearSet {
        t.parse().unwrap()
    }

    #[test]
    fn lattice_operations() {
        let x = PLFunction::identity();
        let one_minus_x = pl_affine(int(-1), int(1));
        let m = x.max(&one_minus_x);
        assert_eq!(m.eval_at(&rat(1, 2)).unwrap(), rat(1, 2));
        assert!(m.breakpoints().contains(&rat(1, 2)));
        assert_eq!(tent().add(&tent().neg()), PLFunction::zero());
        assert_eq!(pl_const(int(-2)).abs(), pl_const(int(2)));
    }

    #[test]
    fn evaluation() {
        assert_eq!(tent().eval_at(&rat(1, 4)).unwrap(), rat(1, 2));
        assert_eq!(tent().eval_at(&rat(1, 2)).unwrap(), int(1));
        assert_eq!(tent().eval_at(&int(1)).unwrap(), int(0));
        assert_eq!(tent().eval_at(&rat(3, 2)), Err(PlError::OutOfDomain(rat(3, 2))));
        assert_eq!(tent().eval_at(&rat(-1, 2)), Err(PlError::OutOfDomain(rat(-1, 2))));
    }

    #[test]
    fn sign_sets() {
        let x = PLFunction::identity();
        assert_eq!(x.lt_set(&pl_affine(int(-1), int(1))), set("[0,1/2)"));
        assert_eq!(x.min(&PLFunction::zero()).zero_set(), SemilinearSet::full());
        assert_eq!(pl_const(int(1)).cozero_set(), SemilinearSet::full());
        assert_eq!(tent().zero_set(), set("{0} + {1}"));
    }

    #[test]
    fn distance_functions() {
        let x = PLFunction::identity();
        let half = rat(1, 2);
        assert_eq!(dist_fn(&set("{1/2}")).unwrap(), x.sub(&pl_const(half.clone())).abs());
        assert_eq!(dist_fn(&SemilinearSet::full()).unwrap(), PLFunction::zero());
        let expected = x.min(&pl_const(half).sub(&x).max(&PLFunction::zero()));
        assert_eq!(dist_fn(&set("{0} + [1/2,1]")).unwrap(), expected);
        assert_eq!(dist_fn(&SemilinearSet::empty()), Err(PlError::EmptySet));
        assert!(matches!(dist_fn(&set("(0,1/2]")), Err(PlError::DomainNotClosed(_))));
    }

    #[test]
    fn term_application() {
        let x = PLFunction::identity();
        let mut asg = BTreeMap::new();
        asg.insert(Var(1), x.clone());
        asg.insert(Var(2), x);
        let t = Term::var(Var(1)).sub(&Term::var(Var(2)));
        assert_eq!(term_apply(&t, &asg).unwrap(), PLFunction::zero());
        asg.insert(Var(1), tent());
        let half = Term::var(Var(1)).scale(&rat(1, 2));
        assert_eq!(term_apply(&half, &asg).unwrap(), tent().scale(&rat(1, 2)));
        assert_eq!(term_apply(&Term::zero(), &asg).unwrap(), PLFunction::zero());
        assert_eq!(term_apply(&Term::var(Var(9)), &asg), Err(PlError::UnboundVariable(Var(9))));
    }

    #[test]
    fn canonical_form_and_text() {
        let f = pl_points(&[((0, 1), (0, 1)), ((1, 4), (1, 4)), ((1, 1), (1, 1))]);
        assert_eq!(f, PLFunction::identity());
        let g: PLFunction = "pl: (0, -1) (1/2, 0) (1, 1)".parse().unwrap();
        assert_eq!(g, pl_affine(int(2), int(-1)));
        assert_eq!(tent().to_string(), "pl: (0, 0) (1/2, 1) (1, 0)");
        assert!("pl: (0, 1) (1/2, 0)".parse::<PLFunction>().is_err());
        assert!("pl: (1/2, 1) (0, 0) (1, 1)".parse::<PLFunction>().is_err());
    }

    pub(crate) fn arb_pl() -> impl Strategy<Value = PLFunction> {
        (prop::collection::btree_set(1i64..12, 0..4), prop::collection::vec(-6i64..=6, 6)).prop_map(|(bs, vs)| {
            let mut pts = vec![(int(0), rat(vs[0], 2))];
            for (i, b) in bs.iter().enumerate() {
                pts.push((rat(*b, 12), rat(vs[i + 1], 2)));
            }
            pts.push((int(1), rat(vs[5], 2)));
            PLFunction::new(pts).unwrap()
        })
    }

    fn arb_point() -> impl Strategy<Value = Rational> {
        (0i64..=97, 1i64..=97).prop_map(|(n, d)| rat(n.min(d), d))
    }

    proptest! {
        #[test]
        fn l_group_identity(f in arb_pl(), g in arb_pl()) {
            prop_assert_eq!(f.min(&g).add(&f.max(&g)), f.add(&g));
        }

        #[test]
        fn pointwise_semantics(f in arb_pl(), g in arb_pl(), ps in prop::collection::vec(arb_point(), 100)) {
            let q = rat(-3, 7);
            let (sum, mn, mx, ab, sc) = (f.add(&g), f.min(&g), f.max(&g), f.abs(), f.scale(&q));
            for p in &ps {
                let (a, b) = (f.eval_at(p).unwrap(), g.eval_at(p).unwrap());
                prop_assert_eq!(sum.eval_at(p).unwrap(), &a + &b);
                prop_assert_eq!(mn.eval_at(p).unwrap(), (&a).min(&b).clone());
                prop_assert_eq!(mx.eval_at(p).unwrap(), (&a).max(&b).clone());
                prop_assert_eq!(ab.eval_at(p).unwrap(), a.abs());
                prop_assert_eq!(sc.eval_at(p).unwrap(), &a * &q);
                prop_assert_eq!(f.lt_set(&g).contains(p), a < b);
                prop_assert_eq!(f.zero_set().contains(p), a.is_zero());
            }
        }

        #[test]
        fn sign_sets_are_open_or_closed(f in arb_pl(), g in arb_pl()) {
            prop_assert!(f.lt_set(&g).is_open());
            prop_assert!(f.cozero_set().is_open());
            prop_assert!(f.zero_set().is_closed());
            prop_assert!(f.lt_set(&g).is_disjoint(&g.lt_set(&f)));
        }

        #[test]
        fn text_round_trip(f in arb_pl()) {
            prop_assert_eq!(f.to_string().parse::<PLFunction>().unwrap(), f);
        }
    }
}
