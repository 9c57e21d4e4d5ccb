//! Core formulas of divisible l-groups: atoms `s <= t`, `&`, `~` and `E`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::rational::Height;
use crate::term::{Term, Var};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LGroupFormula {
    /// `lhs <= rhs`.
    Atom(Term, Term),
    And(Box<LGroupFormula>, Box<LGroupFormula>),
    Not(Box<LGroupFormula>),
    Exists(Var, Box<LGroupFormula>),
}

impl LGroupFormula {
    pub fn atom(lhs: Term, rhs: Term) -> Self {
        LGroupFormula::Atom(lhs, rhs)
    }

    pub fn and(a: LGroupFormula, b: LGroupFormula) -> Self {
        LGroupFormula::And(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: LGroupFormula) -> Self {
        LGroupFormula::Not(Box::new(a))
    }

    pub fn exists(v: Var, a: LGroupFormula) -> Self {
        LGroupFormula::Exists(v, Box::new(a))
    }

    /// `~(~a & ~b)`.
    pub fn or(a: LGroupFormula, b: LGroupFormula) -> Self {
        Self::not(Self::and(Self::not(a), Self::not(b)))
    }

    /// `~(a & ~b)`.
    pub fn implies(a: LGroupFormula, b: LGroupFormula) -> Self {
        Self::not(Self::and(a, Self::not(b)))
    }

    /// `~E v. ~a`.
    pub fn forall(v: Var, a: LGroupFormula) -> Self {
        Self::not(Self::exists(v, Self::not(a)))
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match self {
            LGroupFormula::Atom(s, t) => {
                for v in s.support().chain(t.support()) {
                    if !bound.contains(&v) {
                        out.insert(v);
                    }
                }
            }
            LGroupFormula::And(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            LGroupFormula::Not(a) => a.collect_free(bound, out),
            LGroupFormula::Exists(v, a) => {
                bound.push(*v);
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable occurring in the formula, free or bound.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            LGroupFormula::Atom(s, t) => out.extend(s.support().chain(t.support())),
            LGroupFormula::Exists(v, _) => {
                out.insert(*v);
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a LGroupFormula)) {
        f(self);
        match self {
            LGroupFormula::Atom(..) => {}
            LGroupFormula::And(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            LGroupFormula::Not(a) | LGroupFormula::Exists(_, a) => a.visit(f),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.quantifier_count() == 0
    }

    /// `N_φ`: the number of `E` nodes.
    pub fn quantifier_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |f| {
            if matches!(f, LGroupFormula::Exists(..)) {
                n += 1;
            }
        });
        n
    }

    /// `d_φ`: the largest height of a term in an atom, at least 1.
    pub fn max_height(&self) -> Height {
        let mut d = BigUint::one();
        self.visit(&mut |f| {
            if let LGroupFormula::Atom(s, t) = f {
                d = d.clone().max(s.height()).max(t.height());
            }
        });
        d
    }

    pub fn metrics(&self) -> Metrics {
        let d = self.max_height();
        let n = self.quantifier_count();
        Metrics { bound: iterate_bound(&d, n), max_height: d, quantifiers: n }
    }

    pub fn shape(&self) -> Shape {
        match self {
            LGroupFormula::Atom(..) => Shape::QF,
            LGroupFormula::And(a, b) => a.shape().and(b.shape()),
            LGroupFormula::Not(a) => a.shape().negate(),
            LGroupFormula::Exists(_, a) => a.shape().exists(),
        }
    }
}

/// `d_φ`, `N_φ` and `D_φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metrics {
    pub max_height: Height,
    pub quantifiers: usize,
    pub bound: Height,
}

/// `(2d)^4`.
pub fn expand_bound(d: &Height) -> Height {
    (d * 2u32).pow(4)
}

/// `n` iterations of `x -> (2x)^4` starting at `d`.
pub fn iterate_bound(d: &Height, n: usize) -> Height {
    (0..n).fold(d.clone(), |x, _| expand_bound(&x))
}

/// `2^((4^(n+1) - 4) / 3) * d^(4^n)`, the closed form of [`iterate_bound`].
pub fn closed_form_bound(d: &Height, n: usize) -> Height {
    let four_n = BigUint::from(4u32).pow(n as u32);
    let exp2 = (&four_n * 4u32 - 4u32) / 3u32;
    let two_pow = BigUint::one() << usize::try_from(&exp2).expect("exponent fits in memory");
    two_pow * d.pow(u32::try_from(&four_n).expect("exponent fits in memory"))
}

/// Quantifier-alternation class: a formula is `E_n` for every `n >= exists`
/// and `A_n` for every `n >= forall`. Quantifier-free formulas are both
/// `E_0` and `A_0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shape {
    pub exists: usize,
    pub forall: usize,
}

impl Shape {
    pub const QF: Shape = Shape { exists: 0, forall: 0 };

    pub fn and(self, other: Shape) -> Shape {
        Shape { exists: self.exists.max(other.exists), forall: self.forall.max(other.forall) }
    }

    pub fn negate(self) -> Shape {
        Shape { exists: self.forall, forall: self.exists }
    }

    pub fn exists(self) -> Shape {
        let e = self.exists.min(self.forall + 1).max(1);
        Shape { exists: e, forall: e + 1 }
    }

    /// True when every class of `self` is also a class of `other`'s input,
    /// i.e. `self` is no more complex than `other`.
    pub fn within(self, other: Shape) -> bool {
        self.exists <= other.exists && self.forall <= other.forall
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exists == 0 {
            write!(f, "quantifier-free")
        } else if self.exists <= self.forall {
            write!(f, "E{}", self.exists)
        } else {
            write!(f, "A{}", self.forall)
        }
    }
}

impl fmt::Display for LGroupFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LGroupFormula::Atom(s, t) => write!(f, "{s} <= {t}"),
            LGroupFormula::And(a, b) => write!(f, "({a} & {b})"),
            LGroupFormula::Not(a) => write!(f, "~{a}"),
            LGroupFormula::Exists(v, a) => write!(f, "(E {v}. {a})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn x(k: u32) -> Term {
        Term::var(Var(k))
    }

    #[test]
    fn free_variables() {
        let a = LGroupFormula::atom(x(1), x(2));
        assert_eq!(a.free_vars(), BTreeSet::from([Var(1), Var(2)]));
        let e = LGroupFormula::exists(Var(3), LGroupFormula::atom(x(3), x(1)));
        assert_eq!(e.free_vars(), BTreeSet::from([Var(1)]));
        assert_eq!(e.all_vars(), BTreeSet::from([Var(1), Var(3)]));
    }

    #[test]
    fn bounds() {
        let one = BigUint::one();
        assert_eq!(iterate_bound(&one, 0), one);
        assert_eq!(iterate_bound(&one, 1), BigUint::from(16u32));
        assert_eq!(iterate_bound(&one, 2), BigUint::from(1_048_576u32));
        for d in 1..=5u32 {
            for n in 0..=3 {
                let d = BigUint::from(d);
                assert_eq!(iterate_bound(&d, n), closed_form_bound(&d, n));
            }
        }
        let phi = LGroupFormula::exists(Var(2), LGroupFormula::atom(Term::monomial(rat(1, 3), Var(2)), x(1)));
        let m = phi.metrics();
        assert_eq!((m.max_height, m.quantifiers, m.bound), (BigUint::from(3u32), 1, BigUint::from(1296u32)));
    }

    #[test]
    fn shapes() {
        let qf = LGroupFormula::atom(x(1), x(2));
        assert_eq!(qf.shape(), Shape::QF);
        let e1 = LGroupFormula::exists(Var(2), qf.clone());
        assert_eq!(e1.shape().to_string(), "E1");
        let a1 = LGroupFormula::forall(Var(2), qf.clone());
        assert_eq!(a1.shape().to_string(), "A1");
        let ea = LGroupFormula::exists(Var(3), a1.clone());
        assert_eq!(ea.shape().to_string(), "E2");
        assert_eq!(LGroupFormula::and(e1, a1).shape(), Shape { exists: 2, forall: 2 });
    }

    #[test]
    fn printing() {
        let f = LGroupFormula::not(LGroupFormula::exists(
            Var(3),
            LGroupFormula::and(LGroupFormula::atom(Term::zero(), x(3)), LGroupFormula::atom(x(3), x(1))),
        ));
        assert_eq!(f.to_string(), "~(E x3. (0 <= x3 & x3 <= x1))");
    }
}
