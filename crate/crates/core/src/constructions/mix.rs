//! The mixed function `H` between two functions `F <= G`.

use crate::pl::PLFunction;
use crate::rational::rat;
use crate::semilinear::SemilinearSet;

/// Data for [`mix`]: on the closed `space`, `A ∪ B = space ∖ U`, `d`
/// vanishes exactly on `A ∪ B`, `F <= G` with `F < G` on `U`, and `h`
/// equals `F` on `A` and `G` on `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixInput {
    pub space: SemilinearSet,
    pub a: SemilinearSet,
    pub b: SemilinearSet,
    pub u: SemilinearSet,
    pub f: PLFunction,
    pub g: PLFunction,
    pub h: PLFunction,
    pub d: PLFunction,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MixError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("postcondition failed: {0}")]
    PostconditionFailed(String),
}

impl MixInput {
    /// The first violated precondition, if any.
    pub fn check(&self) -> Result<(), MixError> {
        let fail = |msg: &str| Err(MixError::PreconditionViolated(msg.to_string()));
        let space = &self.space;
        if !space.is_closed() {
            return fail("space is not closed");
        }
        if !self.a.is_closed() || !self.a.is_subset(space) {
            return fail("A is not a closed subset of space");
        }
        if !self.b.is_closed() || !self.b.is_subset(space) {
            return fail("B is not a closed subset of space");
        }
        if !self.u.is_subset(space) || !space.difference(&self.u).is_closed() {
            return fail("U is not open in space");
        }
        let ab = self.a.union(&self.b);
        if ab != space.difference(&self.u) {
            return fail("A ∪ B differs from space ∖ U");
        }
        if self.d.zero_set().intersect(space) != ab {
            return fail("the zero set of d in space differs from A ∪ B");
        }
        if !self.g.lt_set(&self.f).is_disjoint(space) {
            return fail("F > G somewhere on space");
        }
        if !self.u.is_subset(&self.f.lt_set(&self.g)) {
            return fail("F = G somewhere on U");
        }
        if !self.a.is_subset(&self.h.sub(&self.f).zero_set()) {
            return fail("h differs from F on A");
        }
        if !self.b.is_subset(&self.h.sub(&self.g).zero_set()) {
            return fail("h differs from G on B");
        }
        Ok(())
    }
}

/// `F + ½((|h−F|+|d|) ∧ (G−F)) + ½((|h−F|+|d|) ∧ ((G−F−|d|) ∨ 0))`, which
/// equals `h` on `A ∪ B` and lies strictly between `F` and `G` on `U`.
pub fn mix(input: &MixInput) -> Result<PLFunction, MixError> {
    input.check()?;
    let half = rat(1, 2);
    let (f, g) = (&input.f, &input.g);
    let gap = g.sub(f);
    let d = input.d.abs();
    let reach = input.h.sub(f).abs().add(&d);
    let first = reach.min(&gap);
    let second = reach.min(&gap.sub(&d).max(&PLFunction::zero()));
    let h = f.add(&first.scale(&half)).add(&second.scale(&half));

    let ab = input.a.union(&input.b);
    if !ab.is_subset(&h.sub(&input.h).zero_set()) {
        return Err(MixError::PostconditionFailed("H differs from h on A ∪ B".into()));
    }
    if !input.u.is_subset(&f.lt_set(&h)) || !input.u.is_subset(&h.lt_set(g)) {
        return Err(MixError::PostconditionFailed("H leaves (F, G) on U".into()));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn set(t: &str) -> SemilinearSet {
        t.parse().unwrap()
    }

    fn worked() -> MixInput {
        let x = PLFunction::identity();
        MixInput {
            space: SemilinearSet::full(),
            a: set("{0}"),
            b: set("{1}"),
            u: set("(0,1)"),
            f: PLFunction::zero(),
            g: PLFunction::constant(int(1)),
            h: x.clone(),
            d: x.min(&x.neg().add(&PLFunction::constant(int(1)))),
        }
    }

    #[test]
    fn worked_example() {
        let h = mix(&worked()).unwrap();
        assert_eq!(h.eval_at(&rat(1, 2)).unwrap(), rat(3, 4));
        assert_eq!(h.eval_at(&rat(1, 4)).unwrap(), rat(1, 2));
        assert_eq!(h.eval_at(&int(0)).unwrap(), int(0));
        assert_eq!(h.eval_at(&int(1)).unwrap(), int(1));
    }

    #[test]
    fn preconditions_are_checked() {
        let mut bad = worked();
        bad.h = PLFunction::constant(int(1));
        assert!(matches!(mix(&bad), Err(MixError::PreconditionViolated(m)) if m.contains("on A")));
        let mut bad = worked();
        bad.u = set("(0,1]");
        assert!(matches!(mix(&bad), Err(MixError::PreconditionViolated(_))));
        let mut bad = worked();
        bad.d = PLFunction::identity();
        assert!(matches!(mix(&bad), Err(MixError::PreconditionViolated(m)) if m.contains("zero set")));
    }
}
