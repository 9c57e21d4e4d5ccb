// Check a slice of the quantifier-free corpus against random assignments.
//
// Set `COZERO_SEED` to change the assignments.

use std::error::Error;

use cozero::checker::QfChecker;
use cozero::corpus::{atoms, qf_corpus, random_assignment, rng, shapes};
use cozero::term::Var;

pub fn run_example() -> Result<String, Box<dyn Error>> {
    let vars = [Var(1), Var(2)];
    let atom_list = atoms(&vars, 1);
    let shape_list = shapes(2, 1);
    let mut r = rng(0);
    let (mut checked, mut held) = (0, 0);
    for _ in 0..3 {
        let checker = QfChecker::new(random_assignment(&mut r, &vars));
        for phi in qf_corpus(&atom_list, &shape_list).step_by(7) {
            let v = checker.check(&phi, false)?;
            if !v.agree {
                return Err(format!("disagreement on {}", v.formula).into());
            }
            checked += 1;
            held += v.lhs as usize;
        }
    }
    Ok(format!("{checked} checks agree ({held} true)\n"))
}

fn main() -> Result<(), Box<dyn Error>> {
    print!("{}", run_example()?);
    Ok(())
}
