// Hide `y = x/2`, keep only its sign sets, and rebuild a witness.

use std::collections::BTreeMap;
use std::error::Error;

use cozero::checker::exists_roundtrip;
use cozero::constructions::witness::witness;
use cozero::formula::parse::parse_lgroup;
use cozero::formula::lgroup::expand_bound;
use cozero::pl::PLFunction;
use cozero::rational::{rat, Height};
use cozero::sign::LambdaFamily;
use cozero::term::Var;

pub fn run_example() -> Result<String, Box<dyn Error>> {
    let (x1, y) = (Var(1), Var(2));
    let f = PLFunction::identity();
    let hidden = f.scale(&rat(1, 2));
    let asg: BTreeMap<Var, PLFunction> = [(x1, f)].into_iter().collect();
    let mut full = asg.clone();
    full.insert(y, hidden.clone());
    let fam = LambdaFamily::new(&[x1, y], expand_bound(&Height::from(1u32)), &full)?;
    let w = witness(1, &[x1], y, &asg, &fam)?;
    let seeds: Vec<String> = w.seeds.iter().map(|t| t.to_string()).collect();
    let mut out = format!("seeds: {}\nwitness: {}\nrealized pairs: {}\n", seeds.join(", "), w.g, w.realized_pairs);

    let phi = parse_lgroup("0 <= x2 & x2 <= x1 & ~(x1 <= x2)")?;
    let rt = exists_roundtrip(&phi, &asg, y, &hidden, None)?;
    out.push_str(&format!("{}: hidden {} / witness {}\n", rt.formula, rt.with_hidden, rt.with_witness));
    Ok(out)
}

fn main() -> Result<(), Box<dyn Error>> {
    print!("{}", run_example()?);
    Ok(())
}
