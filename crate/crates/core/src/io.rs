//! Text formats for assignments, sign families and mix inputs. Blank lines
//! and lines starting with `#` are skipped everywhere.

use std::collections::HashMap;

use crate::checker::Assignment;
use crate::constructions::mix::MixInput;
use crate::pl::PLFunction;
use crate::semilinear::SemilinearSet;
use crate::sign::SignFamily;
use crate::term::{parse_term, Term, TermPair, Var};

/// `line` is 0 for problems not tied to one line.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{}{msg}", if *line == 0 { String::new() } else { format!("line {line}: ") })]
pub struct FormatError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError { line, msg: msg.into() }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_var(text: &str) -> Option<Var> {
    let k = text.trim().strip_prefix('x')?;
    if k.starts_with('0') || k.starts_with('+') {
        return None;
    }
    k.parse().ok().filter(|&k| k > 0).map(Var)
}

/// `x1 -> pl: (0, 0) (1, 1)` per line.
pub fn parse_assignment(text: &str) -> Result<Assignment, FormatError> {
    let mut out = Assignment::new();
    for (n, line) in content_lines(text) {
        let (name, f) = line.split_once("->").ok_or_else(|| err(n, "expected `x<k> -> pl: ...`"))?;
        let v = parse_var(name).ok_or_else(|| err(n, format!("bad variable `{}`", name.trim())))?;
        let f: PLFunction = f.parse().map_err(|e: crate::pl::PlError| err(n, e.to_string()))?;
        if out.insert(v, f).is_some() {
            return Err(err(n, format!("{v} assigned twice")));
        }
    }
    Ok(out)
}

pub fn write_assignment(asg: &Assignment) -> String {
    asg.iter().map(|(v, f)| format!("{v} -> {f}\n")).collect()
}

/// Functions keyed by arbitrary terms, written as `t -> pl: ...`.
pub fn write_term_functions(items: &[(Term, PLFunction)]) -> String {
    items.iter().map(|(t, f)| format!("{t} -> {f}\n")).collect()
}

fn parse_pair(text: &str) -> Option<TermPair> {
    let inner = text.trim().strip_prefix("v[")?.strip_suffix(']')?;
    let (s, t) = inner.split_once('|')?;
    Some(TermPair::new(parse_term(s).ok()?, parse_term(t).ok()?))
}

/// Header `index: t1 ; t2 ; ...`, then `v[s|t] : SET` lines. Without
/// `sparse` every pair of index terms needs a line; with it, missing
/// pairs are empty.
pub fn parse_family(text: &str, sparse: bool) -> Result<SignFamily, FormatError> {
    let mut lines = content_lines(text);
    let (hn, header) = lines.next().ok_or_else(|| err(0, "missing `index:` header"))?;
    let list = header.strip_prefix("index:").ok_or_else(|| err(hn, "expected `index: t1 ; t2 ; ...`"))?;
    let mut terms = Vec::new();
    for t in list.split(';') {
        let t = parse_term(t).map_err(|e| err(hn, e.to_string()))?;
        if terms.contains(&t) {
            return Err(err(hn, format!("index term {t} repeated")));
        }
        terms.push(t);
    }
    let mut entries: HashMap<TermPair, SemilinearSet> = HashMap::new();
    for (n, line) in lines {
        let (pair, set) = line.rsplit_once(" : ").ok_or_else(|| err(n, "expected `v[s|t] : SET`"))?;
        let pair = parse_pair(pair).ok_or_else(|| err(n, format!("bad pair `{}`", pair.trim())))?;
        if !terms.contains(&pair.first) || !terms.contains(&pair.second) {
            return Err(err(n, format!("pair {pair} is outside the index")));
        }
        let set: SemilinearSet = set.trim().parse().map_err(|e: crate::semilinear::SetError| err(n, e.to_string()))?;
        if entries.insert(pair.clone(), set).is_some() {
            return Err(err(n, format!("pair {pair} given twice")));
        }
    }
    let mut values = Vec::with_capacity(terms.len() * terms.len());
    for s in &terms {
        for t in &terms {
            match entries.remove(&TermPair::new(s.clone(), t.clone())) {
                Some(e) => values.push(e),
                None if sparse => values.push(SemilinearSet::empty()),
                None => return Err(err(0, format!("no entry for v[{s}|{t}]; pass --sparse to default to empty"))),
            }
        }
    }
    SignFamily::new(terms, values).map_err(|e| err(0, e.to_string()))
}

/// Every entry, or only the nonempty ones when `sparse`.
pub fn write_family(fam: &SignFamily, sparse: bool) -> String {
    let header: Vec<String> = fam.index_terms().iter().map(|t| t.to_string()).collect();
    let mut out = format!("index: {}\n", header.join(" ; "));
    for (s, t, e) in fam.iter() {
        if sparse && e.is_empty() {
            continue;
        }
        out.push_str(&format!("v[{s}|{t}] : {e}\n"));
    }
    out
}

const MIX_KEYS: [&str; 8] = ["space", "A", "B", "U", "F", "G", "h", "d"];

/// `key: value` lines for `space`, `A`, `B`, `U` (sets) and `F`, `G`, `h`,
/// `d` (functions).
pub fn parse_mix(text: &str) -> Result<MixInput, FormatError> {
    let mut sets: HashMap<&str, SemilinearSet> = HashMap::new();
    let mut fns: HashMap<&str, PLFunction> = HashMap::new();
    for (n, line) in content_lines(text) {
        let (key, value) = line.split_once(':').ok_or_else(|| err(n, "expected `key: value`"))?;
        let key = MIX_KEYS
            .iter()
            .find(|k| **k == key.trim())
            .ok_or_else(|| err(n, format!("unknown key `{}`", key.trim())))?;
        if sets.contains_key(key) || fns.contains_key(key) {
            return Err(err(n, format!("`{key}` given twice")));
        }
        if ["space", "A", "B", "U"].contains(key) {
            sets.insert(key, value.trim().parse().map_err(|e: crate::semilinear::SetError| err(n, e.to_string()))?);
        } else {
            fns.insert(key, value.trim().parse().map_err(|e: crate::pl::PlError| err(n, e.to_string()))?);
        }
    }
    let mut set = |k: &str| sets.remove(k).ok_or_else(|| err(0, format!("missing `{k}`")));
    let (space, a, b, u) = (set("space")?, set("A")?, set("B")?, set("U")?);
    let mut f = |k: &str| fns.remove(k).ok_or_else(|| err(0, format!("missing `{k}`")));
    Ok(MixInput { space, a, b, u, f: f("F")?, g: f("G")?, h: f("h")?, d: f("d")? })
}

pub fn write_mix(m: &MixInput) -> String {
    format!(
        "space: {}\nA: {}\nB: {}\nU: {}\nF: {}\nG: {}\nh: {}\nd: {}\n",
        m.space, m.a, m.b, m.u, m.f, m.g, m.h, m.d
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pl::pl_points;
    use crate::rational::rat;
    use crate::sign::lambda;

    #[test]
    fn assignments_round_trip() {
        let text = "# base\nx1 -> pl: (0, -1) (1/2, 0) (1, 1)\n\nx3 -> pl: (0, 0) (1, 0)\n";
        let asg = parse_assignment(text).unwrap();
        assert_eq!(asg[&Var(1)], PLFunction::identity().scale(&rat(2, 1)).sub(&PLFunction::constant(rat(1, 1))));
        assert_eq!(parse_assignment(&write_assignment(&asg)).unwrap(), asg);
        assert_eq!(parse_assignment("x1 -> pl: (0,0) (1,1)\ny -> pl: (0,0) (1,0)").unwrap_err().line, 2);
        assert!(parse_assignment("x01 -> pl: (0,0) (1,1)").is_err());
    }

    #[test]
    fn families_round_trip() {
        let asg: Assignment = [(Var(1), pl_points(&[((0, 1), (-1, 1)), ((1, 1), (1, 1))]))].into_iter().collect();
        let fam = lambda(1, &[Var(1)], &asg).unwrap();
        for sparse in [false, true] {
            assert_eq!(parse_family(&write_family(&fam, sparse), sparse).unwrap(), fam);
        }
        assert!(parse_family(&write_family(&fam, true), false).is_err());
        let e = parse_family("index: x1 ; x2\nv[x1|x3] : empty\n", true).unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn mix_files() {
        let text = "space: [0,1]\nA: {0}\nB: {1}\nU: (0,1)\nF: pl: (0, 0) (1, 0)\nG: pl: (0, 1) (1, 1)\nh: pl: (0, 0) (1, 1)\nd: pl: (0, 0) (1/2, 1/2) (1, 0)\n";
        let m = parse_mix(text).unwrap();
        assert_eq!(parse_mix(&write_mix(&m)).unwrap(), m);
        assert!(parse_mix("space: [0,1]\n").unwrap_err().msg.contains("missing"));
    }
}
