// Realize a prescribed pair of sign sets against `f1 = 0`.

use std::error::Error;

use cozero::constructions::extend::{extend_one, ExtensionProblem};
use cozero::io::parse_family;
use cozero::pl::PLFunction;

const FAMILY: &str = "
index: x1 ; x2
v[x1|x2] : (0,1/2)
v[x2|x1] : (1/2,1)
";

pub fn run_example() -> Result<String, Box<dyn Error>> {
    let family = parse_family(FAMILY, true)?;
    let f1 = PLFunction::zero();
    let f2 = extend_one(&ExtensionProblem { base: vec![f1.clone()], family })?;
    Ok(format!("f2 = {f2}\n{{f1 < f2}} = {}\n{{f2 < f1}} = {}\n", f1.lt_set(&f2), f2.lt_set(&f1)))
}

fn main() -> Result<(), Box<dyn Error>> {
    print!("{}", run_example()?);
    Ok(())
}
