//! The axiom blocks `δ_{d,x̄}` and `Δ_{d,x̄,y}`.

use crate::formula::lattice::{LatticeFormula, PairTuple};
use crate::formula::lgroup::expand_bound;
use crate::formula::pairs::{PairSpace, Square};
use crate::rational::Height;
use crate::term::Var;
use crate::translate::axioms::delta_instances;

/// `δ_{d,vars}` as a symbolic node.
pub fn gen_delta(d: &Height, vars: &[Var]) -> LatticeFormula {
    LatticeFormula::delta(vars, d.clone())
}

/// `δ_{d,vars}` written out as a conjunction, or `None` when `Ht_vars(d)` is
/// too large to enumerate.
pub fn gen_delta_explicit(d: &Height, vars: &[Var]) -> Option<LatticeFormula> {
    let instances = delta_instances(vars, d)?;
    Some(LatticeFormula::And(instances.map(|i| i.to_formula()).collect()))
}

/// The pairs over `Ht_{(vars,y)}(e)` that leave both `Ht_vars(e)` and
/// `Ht_{(vars,y)}(d)`.
pub fn witness_space(d: &Height, e: &Height, vars: &[Var], y: Var) -> PairSpace {
    let mut all = vars.to_vec();
    all.push(y);
    PairSpace::new(Square::new(&all, e.clone()), vec![Square::new(vars, e.clone()), Square::new(&all, d.clone())])
}

/// `E W. δ_{e,(vars,y)}`. The quantifier is dropped when there is nothing
/// to bind, which happens exactly when `e <= d`.
pub fn delta_block(d: &Height, e: &Height, vars: &[Var], y: Var) -> LatticeFormula {
    let mut all = vars.to_vec();
    all.push(y);
    let body = gen_delta(e, &all);
    let w = witness_space(d, e, vars, y);
    if w.is_empty() {
        body
    } else {
        LatticeFormula::exists(PairTuple::Space(w), body)
    }
}

/// `Δ_{d,vars,y} = E W. δ_{(2d)^4,(vars,y)}`.
#[allow(non_snake_case)]
pub fn gen_Delta(d: &Height, vars: &[Var], y: Var) -> LatticeFormula {
    delta_block(d, &expand_bound(d), vars, y)
}

/// `|Ht_vars(e)|^2 + |Ht_{(vars,y)}(d)|^2 - |Ht_vars(d)|^2`, the number of
/// free variables of `Δ_{d,vars,y}` with `e = (2d)^4`.
pub fn delta_block_free_count(d: &Height, e: &Height, vars: &[Var], y: Var) -> Option<num_bigint::BigUint> {
    let mut all = vars.to_vec();
    all.push(y);
    let outer = Square::new(vars, e.clone()).count()?;
    let inner = Square::new(&all, d.clone()).count()?;
    let overlap = Square::new(vars, d.clone().min(e.clone())).count()?;
    Some(outer + inner - overlap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn delta_at_height_one() {
        let f = gen_delta_explicit(&BigUint::from(1u32), &[Var(1)]).unwrap();
        let LatticeFormula::And(items) = &f else { panic!("conjunction expected") };
        assert_eq!(items.len(), 3 + 27 + 27 + 8 + 8);
        assert!(f.shape().exists == 0);
    }

    #[test]
    fn big_delta_free_variables() {
        let one = BigUint::from(1u32);
        let f = gen_Delta(&one, &[Var(1)], Var(2));
        assert_eq!(f.shape().to_string(), "E1");
        let count = f.free_pairs().count().unwrap();
        assert_eq!(count, BigUint::from(319u32 * 319 + 81 - 9));
        assert_eq!(delta_block_free_count(&one, &BigUint::from(16u32), &[Var(1)], Var(2)), Some(count));
        assert_eq!(f.to_string(), "(E {Ht(x1,x2;16)^2 \\ Ht(x1;16)^2 \\ Ht(x1,x2;1)^2}. delta(x1,x2;16))");
    }

    #[test]
    fn empty_context() {
        let one = BigUint::from(1u32);
        let f = gen_Delta(&one, &[], Var(1));
        assert_eq!(f.free_pairs().count(), Some(BigUint::from(9u32)));
        assert_eq!(delta_block_free_count(&one, &BigUint::from(16u32), &[], Var(1)), Some(BigUint::from(9u32)));
    }

    #[test]
    fn collapsed_block_has_no_quantifier() {
        let two = BigUint::from(2u32);
        let f = delta_block(&two, &two, &[Var(1)], Var(2));
        assert_eq!(f, gen_delta(&two, &[Var(1), Var(2)]));
    }
}
