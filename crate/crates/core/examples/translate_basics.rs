// Translate a few formulas and print the lattice side.
//
// ```bash
// cargo run --example translate_basics
// ```

use std::error::Error;

use cozero::formula::parse::parse_lgroup;
use cozero::translate::emit::write_text;
use cozero::translate::{translate, HeightSchedule};

pub fn run_example() -> Result<String, Box<dyn Error>> {
    let mut out = Vec::new();
    for text in ["x1 <= x2", "~(x1 <= 0) & 1/2*x1 <= x2", "x1 = x2"] {
        let phi = parse_lgroup(text)?;
        let r = translate(&phi, &HeightSchedule::Paper)?;
        out.extend_from_slice(format!("{phi}\n  ").as_bytes());
        write_text(&r, &mut out)?;
    }
    Ok(String::from_utf8(out)?)
}

fn main() -> Result<(), Box<dyn Error>> {
    print!("{}", run_example()?);
    Ok(())
}
