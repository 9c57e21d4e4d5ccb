//! Formulas over the lattice of cozero sets. Variables are `v_{s,t}` for
//! term pairs. Besides `<=` and `bot`, atoms may meet and join variables,
//! and two symbolic nodes stand for objects too large to write out: a
//! quantifier block over a [`PairSpace`] and the axiom conjunction
//! `δ_{d,x̄}`.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::io;

use crate::formula::lgroup::Shape;
use crate::formula::pairs::{FreePairs, PairSpace, Square};
use crate::rational::Height;
use crate::term::{TermPair, Var};
use crate::translate::axioms::{delta_instances, AxiomInstance};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LatTerm {
    Var(TermPair),
    Meet(Box<LatTerm>, Box<LatTerm>),
    Join(Box<LatTerm>, Box<LatTerm>),
}

impl LatTerm {
    pub fn meet(a: LatTerm, b: LatTerm) -> Self {
        LatTerm::Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: LatTerm, b: LatTerm) -> Self {
        LatTerm::Join(Box::new(a), Box::new(b))
    }

    fn collect_vars(&self, out: &mut BTreeSet<TermPair>) {
        match self {
            LatTerm::Var(p) => {
                out.insert(p.clone());
            }
            LatTerm::Meet(a, b) | LatTerm::Join(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

impl From<TermPair> for LatTerm {
    fn from(p: TermPair) -> Self {
        LatTerm::Var(p)
    }
}

/// The variables bound by one quantifier block.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PairTuple {
    Explicit(Vec<TermPair>),
    Space(PairSpace),
}

impl PairTuple {
    pub fn contains(&self, p: &TermPair) -> bool {
        match self {
            PairTuple::Explicit(v) => v.contains(p),
            PairTuple::Space(s) => s.contains(p),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            PairTuple::Explicit(v) => v.is_empty(),
            PairTuple::Space(s) => s.is_empty(),
        }
    }

    pub fn count(&self) -> Option<num_bigint::BigUint> {
        match self {
            PairTuple::Explicit(v) => Some(v.len().into()),
            PairTuple::Space(s) => s.count(),
        }
    }

    pub fn pairs(&self) -> Option<Vec<TermPair>> {
        match self {
            PairTuple::Explicit(v) => Some(v.clone()),
            PairTuple::Space(s) => s.pairs(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LatticeFormula {
    Leq(LatTerm, LatTerm),
    IsBottom(TermPair),
    /// Conjunction; the empty conjunction is `true`.
    And(Vec<LatticeFormula>),
    Not(Box<LatticeFormula>),
    Exists(PairTuple, Box<LatticeFormula>),
    /// `δ_{bound,vars}`, expanded on demand.
    Delta { vars: Vec<Var>, bound: Height },
}

impl LatticeFormula {
    pub fn leq(a: impl Into<LatTerm>, b: impl Into<LatTerm>) -> Self {
        LatticeFormula::Leq(a.into(), b.into())
    }

    /// `a = b`, stored as `a <= b & b <= a`.
    pub fn equal(a: impl Into<LatTerm>, b: impl Into<LatTerm>) -> Self {
        let (a, b) = (a.into(), b.into());
        LatticeFormula::And(vec![LatticeFormula::Leq(a.clone(), b.clone()), LatticeFormula::Leq(b, a)])
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: LatticeFormula) -> Self {
        LatticeFormula::Not(Box::new(a))
    }

    pub fn exists(tuple: PairTuple, body: LatticeFormula) -> Self {
        LatticeFormula::Exists(tuple, Box::new(body))
    }

    pub fn delta(vars: &[Var], bound: Height) -> Self {
        let mut vars = vars.to_vec();
        vars.sort();
        vars.dedup();
        LatticeFormula::Delta { vars, bound }
    }

    /// Free variables, symbolically.
    pub fn free_pairs(&self) -> FreePairs {
        match self {
            LatticeFormula::Leq(a, b) => {
                let mut out = BTreeSet::new();
                a.collect_vars(&mut out);
                b.collect_vars(&mut out);
                FreePairs::from_pairs(out)
            }
            LatticeFormula::IsBottom(p) => FreePairs::from_pairs([p.clone()]),
            LatticeFormula::And(items) => items.iter().fold(FreePairs::empty(), |acc, f| acc.union(&f.free_pairs())),
            LatticeFormula::Not(a) => a.free_pairs(),
            LatticeFormula::Exists(PairTuple::Explicit(v), body) => {
                body.free_pairs().subtract_pairs(&v.iter().cloned().collect())
            }
            LatticeFormula::Exists(PairTuple::Space(s), body) => body.free_pairs().subtract_space(s),
            LatticeFormula::Delta { vars, bound } => FreePairs::from_space(Square::new(vars, bound.clone()).into()),
        }
    }

    /// Free variables in canonical order; `None` when some symbolic part is
    /// too large to enumerate.
    pub fn free_vars(&self) -> Option<Vec<TermPair>> {
        self.free_pairs().pairs()
    }

    pub fn shape(&self) -> Shape {
        match self {
            LatticeFormula::Leq(..) | LatticeFormula::IsBottom(_) | LatticeFormula::Delta { .. } => Shape::QF,
            LatticeFormula::And(items) => items.iter().fold(Shape::QF, |acc, f| acc.and(f.shape())),
            LatticeFormula::Not(a) => a.shape().negate(),
            LatticeFormula::Exists(t, a) if t.is_empty() => a.shape(),
            LatticeFormula::Exists(_, a) => a.shape().exists(),
        }
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a LatticeFormula)) {
        f(self);
        match self {
            LatticeFormula::And(items) => items.iter().for_each(|g| g.visit(f)),
            LatticeFormula::Not(a) | LatticeFormula::Exists(_, a) => a.visit(f),
            _ => {}
        }
    }

    /// Number of `E` nodes, the indices used by certificates.
    pub fn exists_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |g| {
            if matches!(g, LatticeFormula::Exists(..)) {
                n += 1;
            }
        });
        n
    }

    /// Replaces every symbolic node by its explicit form. `None` when some
    /// part is too large to enumerate.
    pub fn materialize(&self) -> Option<LatticeFormula> {
        Some(match self {
            LatticeFormula::And(items) => {
                LatticeFormula::And(items.iter().map(|f| f.materialize()).collect::<Option<_>>()?)
            }
            LatticeFormula::Not(a) => LatticeFormula::not(a.materialize()?),
            LatticeFormula::Exists(t, a) => LatticeFormula::exists(PairTuple::Explicit(t.pairs()?), a.materialize()?),
            LatticeFormula::Delta { vars, bound } => {
                let instances = delta_instances(vars, bound)?;
                LatticeFormula::And(instances.map(|i| i.to_formula()).collect())
            }
            other => other.clone(),
        })
    }

    /// Writes the formula as text. With `expand`, symbolic nodes are written
    /// out in full, streaming the axiom instances of `δ` nodes.
    pub fn write_text(&self, out: &mut dyn io::Write, expand: bool) -> io::Result<()> {
        match self {
            LatticeFormula::And(items) if items.is_empty() => write!(out, "true"),
            LatticeFormula::And(items) => {
                write!(out, "(")?;
                for (i, f) in items.iter().enumerate() {
                    if i > 0 {
                        write!(out, " & ")?;
                    }
                    f.write_text(out, expand)?;
                }
                write!(out, ")")
            }
            LatticeFormula::Not(a) => {
                write!(out, "~")?;
                a.write_text(out, expand)
            }
            LatticeFormula::Exists(t, a) => {
                write!(out, "(E ")?;
                match (t, expand) {
                    (PairTuple::Space(s), true) => {
                        let pairs = s.pairs().ok_or_else(too_large)?;
                        write!(out, "{}", explicit_tuple(&pairs))?;
                    }
                    _ => write!(out, "{t}")?,
                }
                write!(out, ". ")?;
                a.write_text(out, expand)?;
                write!(out, ")")
            }
            LatticeFormula::Delta { vars, bound } if expand => {
                let instances = delta_instances(vars, bound).ok_or_else(too_large)?;
                let mut first = true;
                write!(out, "(")?;
                for inst in instances {
                    if !first {
                        write!(out, " & ")?;
                    }
                    first = false;
                    write!(out, "{}", inst.to_formula())?;
                }
                if first {
                    write!(out, "true")?;
                }
                write!(out, ")")
            }
            other => write!(out, "{other}"),
        }
    }
}

fn too_large() -> io::Error {
    io::Error::other("formula too large to expand")
}

fn explicit_tuple(pairs: &[TermPair]) -> String {
    let mut s = String::from("{");
    for (i, p) in pairs.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        write!(s, "{p}").expect("write to string");
    }
    s.push('}');
    s
}

impl fmt::Display for LatTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatTerm::Var(p) => write!(f, "{p}"),
            LatTerm::Meet(a, b) => write!(f, "({a} /\\ {b})"),
            LatTerm::Join(a, b) => write!(f, "({a} \\/ {b})"),
        }
    }
}

impl fmt::Display for PairTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairTuple::Explicit(v) => write!(f, "{}", explicit_tuple(v)),
            PairTuple::Space(s) => write!(f, "{{{s}}}"),
        }
    }
}

impl fmt::Display for LatticeFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeFormula::Leq(a, b) => write!(f, "{a} <= {b}"),
            LatticeFormula::IsBottom(p) => write!(f, "{p} = bot"),
            LatticeFormula::And(items) if items.is_empty() => write!(f, "true"),
            LatticeFormula::And(items) => {
                write!(f, "(")?;
                for (i, g) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, " & ")?;
                    }
                    write!(f, "{g}")?;
                }
                write!(f, ")")
            }
            LatticeFormula::Not(a) => write!(f, "~{a}"),
            LatticeFormula::Exists(t, a) => write!(f, "(E {t}. {a})"),
            LatticeFormula::Delta { vars, bound } => {
                let vars: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
                write!(f, "delta({};{})", vars.join(","), bound)
            }
        }
    }
}

impl AxiomInstance {
    pub fn to_formula(&self) -> LatticeFormula {
        use AxiomInstance::*;
        let v = |a: &crate::term::Term, b: &crate::term::Term| LatTerm::Var(TermPair::new(a.clone(), b.clone()));
        match self {
            O1 { s } => LatticeFormula::IsBottom(TermPair::new(s.clone(), s.clone())),
            O2 { r, s, t } => LatticeFormula::Leq(LatTerm::meet(v(r, s), v(s, t)), v(r, t)),
            O3 { r, s, t } => LatticeFormula::Leq(v(r, t), LatTerm::join(v(r, s), v(s, t))),
            _ => {
                let (a, b) = self.equated().expect("equational axiom");
                LatticeFormula::equal(a, b)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Term;

    fn x(k: u32) -> Term {
        Term::var(Var(k))
    }

    #[test]
    fn printing() {
        let p = TermPair::new(x(2), x(1));
        assert_eq!(LatticeFormula::IsBottom(p.clone()).to_string(), "v[x2|x1] = bot");
        let f = LatticeFormula::And(vec![
            LatticeFormula::leq(LatTerm::meet(p.clone().into(), p.clone().into()), p.clone()),
            LatticeFormula::not(LatticeFormula::And(vec![])),
        ]);
        assert_eq!(f.to_string(), "((v[x2|x1] /\\ v[x2|x1]) <= v[x2|x1] & ~true)");
        let d = LatticeFormula::delta(&[Var(2), Var(1)], 16u32.into());
        assert_eq!(d.to_string(), "delta(x1,x2;16)");
        let space = PairSpace::new(Square::new(&[Var(1)], 1u32.into()), vec![]);
        let e = LatticeFormula::exists(PairTuple::Space(space), d);
        assert_eq!(e.to_string(), "(E {Ht(x1;1)^2}. delta(x1,x2;16))");
    }

    #[test]
    fn delta_free_variables_and_expansion() {
        let d = LatticeFormula::delta(&[Var(1)], 1u32.into());
        assert_eq!(d.free_pairs().count(), Some(9u32.into()));
        let m = d.materialize().unwrap();
        let LatticeFormula::And(items) = &m else { panic!() };
        // 3 + 27 + 27 + 8 (o4) + 8 (o5) + 0 (o6)
        assert_eq!(items.len(), 73);
        assert_eq!(m.free_vars().unwrap().len(), 9);
        let mut text = Vec::new();
        d.write_text(&mut text, true).unwrap();
        assert_eq!(String::from_utf8(text).unwrap(), m.to_string());
    }

    #[test]
    fn exists_binds_its_block() {
        let p = TermPair::new(x(1), Term::zero());
        let q = TermPair::new(Term::zero(), x(1));
        let body = LatticeFormula::leq(p.clone(), q.clone());
        let e = LatticeFormula::exists(PairTuple::Explicit(vec![p]), body);
        assert_eq!(e.free_vars().unwrap(), vec![q]);
        assert_eq!(e.shape().to_string(), "E1");
        assert_eq!(LatticeFormula::not(e).shape().to_string(), "A1");
    }
}
