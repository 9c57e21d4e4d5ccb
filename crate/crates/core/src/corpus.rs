//! Seeded random instances and the enumerated quantifier-free corpus.
//!
//! Functions and sets live on the grid of eighths so that random
//! functions often touch, cross and agree on whole intervals.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::checker::Assignment;
use crate::constructions::mix::MixInput;
use crate::formula::lgroup::LGroupFormula;
use crate::partial::{tietze_extend, PartialPLFunction};
use crate::pl::{dist_fn, PLFunction};
use crate::rational::{int, rat, Rational};
use crate::semilinear::{Cell, SemilinearSet};
use crate::term::{enumerate_terms, Var};

pub const SEED_ENV: &str = "COZERO_SEED";
pub const DEFAULT_SEED: u64 = 7;

/// `COZERO_SEED`, or [`DEFAULT_SEED`] when unset or unparsable.
pub fn seed() -> u64 {
    std::env::var(SEED_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
}

/// Independent generator number `stream` under the session seed.
pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed());
    r.set_stream(stream);
    r
}

fn eighth(k: i64) -> Rational {
    rat(k, 8)
}

/// A value in `{-1, -3/4, ..., 1}`.
pub fn random_value(rng: &mut impl Rng) -> Rational {
    rat(rng.gen_range(-4..=4), 4)
}

/// Up to `max_inner` interior breakpoints on the grid of eighths.
pub fn random_pl(rng: &mut impl Rng, max_inner: usize) -> PLFunction {
    let mut inner: Vec<i64> = (1..8).collect();
    inner.shuffle(rng);
    inner.truncate(rng.gen_range(0..=max_inner.min(7)));
    inner.sort();
    let points = std::iter::once(0)
        .chain(inner)
        .chain(std::iter::once(8))
        .map(|k| (eighth(k), random_value(rng)))
        .collect();
    PLFunction::new(points).expect("grid breakpoints increase")
}

pub fn random_assignment(rng: &mut impl Rng, vars: &[Var]) -> Assignment {
    vars.iter().map(|v| (*v, random_pl(rng, 3))).collect()
}

/// A closed subset of `[0,1]` made of grid points and grid intervals,
/// possibly empty.
pub fn random_closed_set(rng: &mut impl Rng) -> SemilinearSet {
    let mut out = SemilinearSet::empty();
    for _ in 0..rng.gen_range(0..=3) {
        let a = rng.gen_range(0..=8);
        let cell = if rng.gen_bool(0.5) {
            SemilinearSet::point(eighth(a))
        } else {
            let b = rng.gen_range(a..=8);
            if a == b {
                SemilinearSet::point(eighth(a))
            } else {
                SemilinearSet::interval(eighth(a), eighth(b), true, true).expect("grid interval")
            }
        };
        out = out.union(&cell);
    }
    out
}

fn random_space(rng: &mut impl Rng) -> SemilinearSet {
    match rng.gen_range(0..4) {
        0 => SemilinearSet::full(),
        1 => {
            let a = rng.gen_range(0..7);
            let b = rng.gen_range(a + 1..=8);
            SemilinearSet::interval(eighth(a), eighth(b), true, true).expect("grid interval")
        }
        2 => {
            let a = rng.gen_range(0..3);
            let c = rng.gen_range(5..8);
            let left = SemilinearSet::interval(eighth(a), eighth(a + 2), true, true).expect("grid interval");
            let right = SemilinearSet::interval(eighth(c), int(1), true, true).expect("grid interval");
            left.union(&right)
        }
        _ => {
            let left = SemilinearSet::interval(int(0), rat(1, 2), true, true).expect("grid interval");
            left.union(&SemilinearSet::point(eighth(rng.gen_range(5..=8))))
        }
    }
}

/// A random input satisfying every precondition of the mix construction.
pub fn random_mix_input(rng: &mut impl Rng) -> MixInput {
    let space = random_space(rng);
    let z = random_closed_set(rng).intersect(&space);
    let mut a = SemilinearSet::empty();
    let mut b = SemilinearSet::empty();
    for cell in z.cells() {
        let c = SemilinearSet::from_cells(vec![cell.clone()]).expect("cell of a set");
        match (cell, rng.gen_range(0..5)) {
            (Cell::Point(_), 0) => {
                a = a.union(&c);
                b = b.union(&c);
            }
            (_, k) if k % 2 == 1 => a = a.union(&c),
            _ => b = b.union(&c),
        }
    }
    let both = a.intersect(&b);
    let f = random_pl(rng, 3);
    let gap = if both.is_empty() {
        random_pl(rng, 2).abs().add(&PLFunction::constant(rat(1, 4)))
    } else {
        dist_fn(&both).expect("nonempty closed").scale(&rat(rng.gen_range(1..=4), 2))
    };
    let g = f.add(&gap);
    let d = if z.is_empty() {
        PLFunction::constant(int(1))
    } else {
        dist_fn(&z).expect("nonempty closed").scale(&rat(rng.gen_range(1..=3), 1))
    };
    let on_ab = PartialPLFunction::from_parts(&[(a.clone(), f.clone()), (b.clone(), g.clone())]).expect("F = G on A ∩ B");
    let h = tietze_extend(&on_ab).expect("closed domain").add(&d.min(&PLFunction::constant(int(1))).scale(&random_value(rng)));
    let u = space.difference(&z);
    MixInput { space, a, b, u, f, g, h, d }
}

/// Boolean shapes over numbered leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Leaf(usize),
    Not(Box<Shape>),
    And(Box<Shape>, Box<Shape>),
}

impl Shape {
    pub fn leaves(&self) -> usize {
        match self {
            Shape::Leaf(_) => 1,
            Shape::Not(a) => a.leaves(),
            Shape::And(a, b) => a.leaves() + b.leaves(),
        }
    }

    pub fn instantiate(&self, atoms: &[&LGroupFormula]) -> LGroupFormula {
        match self {
            Shape::Leaf(i) => atoms[*i].clone(),
            Shape::Not(a) => LGroupFormula::not(a.instantiate(atoms)),
            Shape::And(a, b) => LGroupFormula::and(a.instantiate(atoms), b.instantiate(atoms)),
        }
    }

    fn shifted(&self, by: usize) -> Shape {
        match self {
            Shape::Leaf(i) => Shape::Leaf(i + by),
            Shape::Not(a) => Shape::Not(Box::new(a.shifted(by))),
            Shape::And(a, b) => Shape::And(Box::new(a.shifted(by)), Box::new(b.shifted(by))),
        }
    }
}

/// Every shape with at most `leaves` leaves (numbered left to right) and
/// at most `depth` connectives on any branch.
pub fn shapes(leaves: usize, depth: usize) -> Vec<Shape> {
    let mut by_leaves: Vec<Vec<Vec<Shape>>> = vec![vec![Vec::new(); leaves + 1]; depth + 1];
    for dd in 0..=depth {
        if leaves >= 1 {
            by_leaves[dd][1].push(Shape::Leaf(0));
        }
        if dd == 0 {
            continue;
        }
        for n in 1..=leaves {
            let negs: Vec<Shape> = by_leaves[dd - 1][n].iter().map(|s| Shape::Not(Box::new(s.clone()))).collect();
            by_leaves[dd][n].extend(negs);
            for k in 1..n {
                let mut ands = Vec::new();
                for l in &by_leaves[dd - 1][k] {
                    for r in &by_leaves[dd - 1][n - k] {
                        ands.push(Shape::And(Box::new(l.clone()), Box::new(r.shifted(k))));
                    }
                }
                by_leaves[dd][n].extend(ands);
            }
        }
    }
    (1..=leaves).flat_map(|n| by_leaves[depth][n].clone()).collect()
}

/// All atoms `s <= t` with `s, t` in `Ht_vars(d)`.
pub fn atoms(vars: &[Var], d: u64) -> Vec<LGroupFormula> {
    let terms = enumerate_terms(vars, d).terms;
    terms.iter().flat_map(|s| terms.iter().map(move |t| LGroupFormula::atom(s.clone(), t.clone()))).collect()
}

/// Every formula obtained by filling a shape with atoms, leaves filled
/// independently.
pub fn qf_corpus<'a>(atoms: &'a [LGroupFormula], shapes: &'a [Shape]) -> impl Iterator<Item = LGroupFormula> + 'a {
    shapes.iter().flat_map(move |shape| {
        let n = shape.leaves();
        let total = atoms.len().pow(n as u32);
        (0..total).map(move |mut k| {
            let mut chosen = Vec::with_capacity(n);
            for _ in 0..n {
                chosen.push(&atoms[k % atoms.len()]);
                k /= atoms.len();
            }
            shape.instantiate(&chosen)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_counts() {
        let all = shapes(2, 3);
        assert_eq!(all.iter().filter(|s| s.leaves() == 1).count(), 4);
        assert_eq!(all.iter().filter(|s| s.leaves() == 2).count(), 14);
        assert_eq!(shapes(1, 0), vec![Shape::Leaf(0)]);
    }

    #[test]
    fn corpus_size() {
        let a = atoms(&[Var(1), Var(2)], 1);
        assert_eq!(a.len(), 81);
        let s = shapes(2, 1);
        assert_eq!(qf_corpus(&a, &s).count(), 2 * 81 + 81 * 81);
    }

    #[test]
    fn generators_are_seeded() {
        let f: Vec<PLFunction> = (0..3).map(|_| random_pl(&mut rng(1), 3)).collect();
        assert!(f.windows(2).all(|w| w[0] == w[1]));
        let mut r = rng(2);
        for _ in 0..50 {
            let m = random_mix_input(&mut r);
            assert_eq!(m.check(), Ok(()), "{}", crate::io::write_mix(&m));
        }
    }
}
