// Check an existential formula and its translation under a reduced
// schedule, using one function witness for both sides.

use std::error::Error;

use cozero::checker::{check_translation, Assignment};
use cozero::formula::parse::parse_lgroup;
use cozero::pl::PLFunction;
use cozero::rational::rat;
use cozero::term::Var;
use cozero::translate::translate;

pub fn run_example() -> Result<String, Box<dyn Error>> {
    let phi = parse_lgroup("E y. (0 <= y & y <= x1)")?;
    let schedule = "fixed:1".parse()?;
    let tr = translate(&phi, &schedule)?;
    let y = tr.steps[0].var;
    let asg: Assignment = [(Var(1), PLFunction::identity())].into_iter().collect();
    let mut out = format!("{}\n", tr.banner().unwrap_or_default());
    for (name, g) in [("x/2", PLFunction::identity().scale(&rat(1, 2))), ("x - 1/2", PLFunction::identity().sub(&PLFunction::constant(rat(1, 2))))] {
        let wit: Assignment = [(y, g)].into_iter().collect();
        let v = check_translation(&phi, &asg, &wit, &schedule, u64::MAX)?;
        out.push_str(&format!("witness {name}: lhs {} rhs {} agree {}\n", v.lhs, v.rhs, v.agree));
    }
    Ok(out)
}

fn main() -> Result<(), Box<dyn Error>> {
    print!("{}", run_example()?);
    Ok(())
}
