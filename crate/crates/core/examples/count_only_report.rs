// Sizes of a translation under the paper schedule. Nothing is
// materialized; the counts come from closed formulas.

use std::error::Error;

use cozero::formula::parse::parse_lgroup;
use cozero::translate::count::count_translation;
use cozero::translate::HeightSchedule;

pub fn run_example() -> Result<String, Box<dyn Error>> {
    let mut out = String::new();
    for text in ["E y. 0 <= y", "E y. (0 <= y & y <= x1)"] {
        let report = count_translation(&parse_lgroup(text)?, &HeightSchedule::Paper)?;
        if !report.consistent {
            return Err(format!("{text}: counts disagree").into());
        }
        out.push_str(&report.to_text());
        out.push('\n');
    }
    Ok(out)
}

fn main() -> Result<(), Box<dyn Error>> {
    print!("{}", run_example()?);
    Ok(())
}
