// The sign sets of any assignment form a valid family; breaking one
// entry is caught.

use std::error::Error;

use cozero::constructions::validate::{validate_sign_family, ValidateOptions};
use cozero::corpus::{random_assignment, rng};
use cozero::sign::lambda;
use cozero::term::{Term, Var};

pub fn run_example() -> Result<String, Box<dyn Error>> {
    let vars = [Var(1), Var(2)];
    let asg = random_assignment(&mut rng(5), &vars);
    let mut fam = lambda(1, &vars, &asg)?;
    let options = ValidateOptions { arithmetic: true, weak_o3: false };
    let mut out = validate_sign_family(&fam, options).to_text();

    let (x1, x2) = (Term::var(Var(1)), Term::var(Var(2)));
    fam.set(&x1, &x2, "(0,1)".parse()?)?;
    fam.set(&x2, &x1, "(0,1)".parse()?)?;
    let broken = validate_sign_family(&fam, options);
    out.push_str(&format!("after corrupting two entries: {} violations\n", broken.violations.len()));
    Ok(out)
}

fn main() -> Result<(), Box<dyn Error>> {
    print!("{}", run_example()?);
    Ok(())
}
