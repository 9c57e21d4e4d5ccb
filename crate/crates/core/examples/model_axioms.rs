// The four properties of the function model on small inputs: distance
// functions, closures of cozero sets, Tietze extension and glueing.

use std::error::Error;

use cozero::partial::{glue, tietze_extend, PartialPLFunction};
use cozero::pl::{dist_fn, PLFunction};
use cozero::rational::{int, rat};
use cozero::semilinear::SemilinearSet;

pub fn run_example() -> Result<String, Box<dyn Error>> {
    let z: SemilinearSet = "{0} + [1/2,3/4]".parse()?;
    let d = dist_fn(&z)?;
    let mut out = format!("dist to {z}: {d}\nzero set: {}\n", d.zero_set());

    let f: PLFunction = "pl: (0, 0) (1/4, 0) (1/2, 1) (3/4, 0) (1, 0)".parse()?;
    out.push_str(&format!("closure of coz(f): {}\n", f.cozero_set().closure()));

    let a: SemilinearSet = "[0,1/4] + {1}".parse()?;
    let ext = tietze_extend(&PartialPLFunction::restrict(&PLFunction::identity(), &a)?)?;
    out.push_str(&format!("x extended from {a}: {ext}\n"));

    let left = SemilinearSet::interval(int(0), rat(1, 2), true, true)?;
    let right = SemilinearSet::interval(rat(1, 2), int(1), true, true)?;
    let g = glue(&[(left, PLFunction::identity()), (right, PLFunction::constant(rat(1, 2)))])?;
    out.push_str(&format!("glued: {g}\n"));
    Ok(out)
}

fn main() -> Result<(), Box<dyn Error>> {
    print!("{}", run_example()?);
    Ok(())
}
