//! Text and JSON output of a translation. Fixed schedules are written out
//! in full; paper schedules keep their symbolic blocks.

use std::io::{self, Write};

use serde_json::json;

use crate::formula::lattice::{LatTerm, LatticeFormula, PairTuple};
use crate::term::TermPair;
use crate::translate::axioms::delta_instances;
use crate::translate::TranslationResult;

fn expand(result: &TranslationResult) -> bool {
    result.unsound()
}

/// The banner line (fixed schedules only), then the formula on one line.
pub fn write_text(result: &TranslationResult, out: &mut dyn Write) -> io::Result<()> {
    if let Some(b) = result.banner() {
        writeln!(out, "{b}")?;
    }
    result.formula.write_text(out, expand(result))?;
    writeln!(out)
}

fn pair_json(p: &TermPair) -> serde_json::Value {
    json!([p.first.to_string(), p.second.to_string()])
}

fn term_json(t: &LatTerm) -> serde_json::Value {
    match t {
        LatTerm::Var(p) => json!({ "var": pair_json(p) }),
        LatTerm::Meet(a, b) => json!({ "meet": [term_json(a), term_json(b)] }),
        LatTerm::Join(a, b) => json!({ "join": [term_json(a), term_json(b)] }),
    }
}

fn write_value(out: &mut dyn Write, v: &serde_json::Value) -> io::Result<()> {
    serde_json::to_writer(&mut *out, v).map_err(io::Error::other)
}

fn write_node(f: &LatticeFormula, out: &mut dyn Write, expand: bool) -> io::Result<()> {
    match f {
        LatticeFormula::Leq(a, b) => write_value(out, &json!({ "op": "leq", "lhs": term_json(a), "rhs": term_json(b) })),
        LatticeFormula::IsBottom(p) => write_value(out, &json!({ "op": "is_bottom", "var": pair_json(p) })),
        LatticeFormula::And(items) => {
            write!(out, "{{\"op\":\"and\",\"args\":[")?;
            for (i, g) in items.iter().enumerate() {
                if i > 0 {
                    write!(out, ",")?;
                }
                write_node(g, out, expand)?;
            }
            write!(out, "]}}")
        }
        LatticeFormula::Not(a) => {
            write!(out, "{{\"op\":\"not\",\"arg\":")?;
            write_node(a, out, expand)?;
            write!(out, "}}")
        }
        LatticeFormula::Exists(t, a) => {
            write!(out, "{{\"op\":\"exists\",\"tuple\":")?;
            match (t, expand) {
                (PairTuple::Space(s), false) => write_value(out, &json!({ "space": s.to_string() }))?,
                _ => {
                    let pairs = t.pairs().ok_or_else(|| io::Error::other("tuple too large to expand"))?;
                    write_value(out, &json!({ "pairs": pairs.iter().map(pair_json).collect::<Vec<_>>() }))?
                }
            }
            write!(out, ",\"body\":")?;
            write_node(a, out, expand)?;
            write!(out, "}}")
        }
        LatticeFormula::Delta { vars, bound } => {
            let names: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
            write!(out, "{{\"op\":\"delta\",\"vars\":")?;
            write_value(out, &json!(names))?;
            write!(out, ",\"bound\":\"{bound}\"")?;
            if expand {
                let instances = delta_instances(vars, bound).ok_or_else(|| io::Error::other("delta too large to expand"))?;
                write!(out, ",\"conjuncts\":[")?;
                for (i, inst) in instances.enumerate() {
                    if i > 0 {
                        write!(out, ",")?;
                    }
                    write_value(out, &inst.to_json())?;
                }
                write!(out, "]")?;
            }
            write!(out, "}}")
        }
    }
}

/// One JSON object: schedule data, the quantifier steps and the formula
/// tree.
pub fn write_json(result: &TranslationResult, out: &mut dyn Write) -> io::Result<()> {
    let steps: Vec<serde_json::Value> = result
        .steps
        .iter()
        .map(|s| {
            json!({
                "var": s.var.to_string(),
                "context": s.context.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "bound": s.bound.to_string(),
                "expansion": s.expansion.to_string(),
                "lattice_node": s.lattice_node,
                "witness_node": s.witness_node,
            })
        })
        .collect();
    let header = json!({
        "schedule": result.schedule.to_string(),
        "unsound_schedule": result.unsound(),
        "banner": result.banner(),
        "free_vars": result.free_vars.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "substitution_bound": result.substitution_bound.to_string(),
        "steps": steps,
    });
    let mut text = serde_json::to_string(&header).map_err(io::Error::other)?;
    text.pop();
    write!(out, "{text},\"formula\":")?;
    write_node(&result.formula, out, expand(result))?;
    writeln!(out, "}}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse::{parse_lattice, parse_lgroup};
    use crate::translate::translate;

    fn run(text: &str, schedule: &str, json: bool) -> String {
        let r = translate(&parse_lgroup(text).unwrap(), &schedule.parse().unwrap()).unwrap();
        let mut buf = Vec::new();
        if json {
            write_json(&r, &mut buf).unwrap();
        } else {
            write_text(&r, &mut buf).unwrap();
        }
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn text_output() {
        assert_eq!(run("x1 <= x2", "paper", false), "v[x2|x1] = bot\n");
        let fixed = run("E y. 0 <= y", "fixed:1", false);
        let mut lines = fixed.lines();
        assert!(lines.next().unwrap().starts_with("# UNSOUND-SCHEDULE: fixed:1"));
        let body = lines.next().unwrap();
        assert!(!body.contains("delta(") && !body.contains("Ht("));
        // The expanded text parses back to the materialized formula.
        let r = translate(&parse_lgroup("E y. 0 <= y").unwrap(), &"fixed:1".parse().unwrap()).unwrap();
        assert_eq!(parse_lattice(body).unwrap(), r.formula.materialize().unwrap());
    }

    #[test]
    fn json_output() {
        let v: serde_json::Value = serde_json::from_str(&run("E y. 0 <= y", "fixed:1", true)).unwrap();
        assert_eq!(v["unsound_schedule"], true);
        let body = &v["formula"]["body"]["args"];
        assert_eq!(body[0]["op"], "delta");
        assert_eq!(body[0]["conjuncts"].as_array().unwrap().len(), 73);
        assert_eq!(v["formula"]["tuple"]["pairs"].as_array().unwrap().len(), 9);
        let v: serde_json::Value = serde_json::from_str(&run("E y. 0 <= y", "paper", true)).unwrap();
        assert_eq!(v["formula"]["tuple"]["space"], "Ht(x1;1)^2");
        assert!(v["banner"].is_null());
    }
}
