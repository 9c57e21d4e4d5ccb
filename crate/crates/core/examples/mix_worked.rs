// The mixed function for `F = 0`, `G = 1`, `h = x` on `[0,1]`.

use std::error::Error;

use cozero::constructions::mix::{mix, MixInput};
use cozero::pl::PLFunction;
use cozero::rational::{int, rat};
use cozero::semilinear::SemilinearSet;

pub fn run_example() -> Result<String, Box<dyn Error>> {
    let x = PLFunction::identity();
    let input = MixInput {
        space: SemilinearSet::full(),
        a: "{0}".parse()?,
        b: "{1}".parse()?,
        u: "(0,1)".parse()?,
        f: PLFunction::zero(),
        g: PLFunction::constant(int(1)),
        h: x.clone(),
        // Vanishes exactly on {0, 1}.
        d: x.min(&x.neg().add(&PLFunction::constant(int(1)))),
    };
    let h = mix(&input)?;
    Ok(format!("H = {h}\nH(1/4) = {}\nH(1/2) = {}\n", h.eval_at(&rat(1, 4))?, h.eval_at(&rat(1, 2))?))
}

fn main() -> Result<(), Box<dyn Error>> {
    print!("{}", run_example()?);
    Ok(())
}
