// The text formats: an assignment, its sign family and a mix input,
// each written and read back.

use std::error::Error;

use cozero::corpus::{random_mix_input, rng};
use cozero::io::{parse_assignment, parse_family, parse_mix, write_assignment, write_family, write_mix};
use cozero::sign::lambda;

const FUNCTIONS: &str = "
# two tents
x1 -> pl: (0, 0) (1/2, 1) (1, 0)
x2 -> pl: (0, 1/2) (1, 1/2)
";

pub fn run_example() -> Result<String, Box<dyn Error>> {
    let asg = parse_assignment(FUNCTIONS)?;
    assert_eq!(parse_assignment(&write_assignment(&asg))?, asg);

    let vars: Vec<_> = asg.keys().copied().collect();
    let fam = lambda(1, &vars, &asg)?;
    let text = write_family(&fam, true);
    assert_eq!(parse_family(&text, true)?, fam);

    let m = random_mix_input(&mut rng(11));
    assert_eq!(parse_mix(&write_mix(&m))?, m);
    Ok(format!("{}{text}{}", write_assignment(&asg), write_mix(&m)))
}

fn main() -> Result<(), Box<dyn Error>> {
    print!("{}", run_example()?);
    Ok(())
}
