//! Functions defined on closed semilinear subsets of `X`: Tietze extension
//! and glueing over closed covers.


use crate::pl::{PLFunction, PlError};
use crate::rational::{midpoint, Rational};
use crate::semilinear::{Cell, SemilinearSet};

/// Value data for one cell of a [`PartialPLFunction`]'s domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Piece {
    Point(Rational),
    /// A global function whose restriction to the cell is the fragment.
    Fragment(PLFunction),
}

/// A continuous function on a closed domain, given per domain cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialPLFunction {
    domain: SemilinearSet,
    pieces: Vec<Piece>,
}

impl PartialPLFunction {
    pub fn new(domain: SemilinearSet, pieces: Vec<Piece>) -> Result<Self, PlError> {
        if !domain.is_closed() {
            return Err(PlError::DomainNotClosed(domain.to_string()));
        }
        if pieces.len() != domain.cells().len() {
            return Err(PlError::Parse(format!(
                "{} pieces for {} domain cells",
                pieces.len(),
                domain.cells().len()
            )));
        }
        for (cell, piece) in domain.cells().iter().zip(&pieces) {
            if matches!((cell, piece), (Cell::Interval { .. }, Piece::Point(_))) {
                return Err(PlError::Parse(format!("interval cell {cell} needs a fragment")));
            }
        }
        Ok(PartialPLFunction { domain, pieces })
    }

    /// `f` restricted to the closed set `domain`.
    pub fn restrict(f: &PLFunction, domain: &SemilinearSet) -> Result<Self, PlError> {
        PartialPLFunction::from_parts(&[(domain.clone(), f.clone())])
    }

    /// The function equal to `f_k` on `A_k` for closed `A_k`, defined on the
    /// union of the `A_k`. Fails with `Mismatch` where two parts disagree.
    pub fn from_parts(parts: &[(SemilinearSet, PLFunction)]) -> Result<Self, PlError> {
        for (a, _) in parts {
            if !a.is_closed() {
                return Err(PlError::DomainNotClosed(a.to_string()));
            }
        }
        let domain = SemilinearSet::union_all(parts.iter().map(|(a, _)| a));
        // Candidate points: every set endpoint and every breakpoint. Between
        // two consecutive candidates each part is linear and each set is
        // either all in or all out.
        let mut candidates: Vec<Rational> = Vec::new();
        for (a, f) in parts {
            candidates.extend(a.endpoints());
            candidates.extend(f.breakpoints().iter().cloned());
        }
        candidates.sort();
        candidates.dedup();

        let value_at = |p: &Rational| -> Result<Option<Rational>, PlError> {
            let mut found: Option<Rational> = None;
            for (a, f) in parts {
                if a.contains(p) {
                    let v = f.eval_at(p)?;
                    match &found {
                        Some(w) if *w != v => return Err(PlError::Mismatch(p.clone())),
                        _ => found = Some(v),
                    }
                }
            }
            Ok(found)
        };

        let mut pieces = Vec::with_capacity(domain.cells().len());
        for cell in domain.cells() {
            match cell {
                Cell::Point(p) => {
                    pieces.push(Piece::Point(value_at(p)?.expect("point of the union")));
                }
                Cell::Interval { lo, hi, .. } => {
                    let mut knots = Vec::new();
                    for p in candidates.iter().filter(|p| *p >= lo && *p <= hi) {
                        let v = value_at(p)?.expect("closed cell of the union");
                        knots.push((p.clone(), v));
                    }
                    // Overlaps on a whole segment are caught at its endpoints,
                    // which are candidates in both parts' closed sets.
                    pieces.push(Piece::Fragment(PLFunction::interpolate(&knots)));
                }
            }
        }
        Ok(PartialPLFunction { domain, pieces })
    }

    pub fn domain(&self) -> &SemilinearSet {
        &self.domain
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Knots determining the function: cell endpoints, interior breakpoints
    /// and isolated points, in increasing order.
    fn knots(&self) -> Vec<(Rational, Rational)> {
        let mut out = Vec::new();
        for (cell, piece) in self.domain.cells().iter().zip(&self.pieces) {
            match piece {
                Piece::Point(v) => {
                    let Cell::Point(p) = cell else { unreachable!("checked on construction") };
                    out.push((p.clone(), v.clone()));
                }
                Piece::Fragment(f) => out.extend(f.knots_on(cell)),
            }
        }
        out
    }

    /// Value at a point of the domain.
    pub fn value_at(&self, p: &Rational) -> Option<Rational> {
        for (cell, piece) in self.domain.cells().iter().zip(&self.pieces) {
            if cell.contains(p) {
                return Some(match piece {
                    Piece::Point(v) => v.clone(),
                    Piece::Fragment(f) => f.eval_at(p).expect("cell inside [0,1]"),
                });
            }
        }
        None
    }

    /// True when `f` equals this function on its whole domain.
    pub fn agrees_with(&self, f: &PLFunction) -> bool {
        self.domain.cells().iter().zip(&self.pieces).all(|(cell, piece)| match piece {
            Piece::Point(v) => {
                let Cell::Point(p) = cell else { return false };
                f.eval_at(p).as_ref() == Ok(v)
            }
            Piece::Fragment(g) => {
                let cell_set = SemilinearSet::from_cells(vec![cell.clone()]).expect("valid cell");
                f.lt_set(g).is_disjoint(&cell_set) && g.lt_set(f).is_disjoint(&cell_set)
            }
        })
    }
}

/// Extends a function on a closed domain to all of `X`: linear
/// interpolation across each gap between consecutive cells and constant
/// beyond the first and last cell. The empty domain gives zero.
pub fn tietze_extend(g: &PartialPLFunction) -> Result<PLFunction, PlError> {
    if !g.domain.is_closed() {
        return Err(PlError::DomainNotClosed(g.domain.to_string()));
    }
    let mut knots = g.knots();
    knots.dedup();
    Ok(PLFunction::interpolate(&knots))
}

/// The unique function equal to each part on its closed set, when the
/// closed sets cover `X` and the parts agree on overlaps.
pub fn glue(parts: &[(SemilinearSet, PLFunction)]) -> Result<PLFunction, PlError> {
    let partial = PartialPLFunction::from_parts(parts)?;
    let missing = partial.domain.complement();
    if let Some(cell) = missing.cells().first() {
        let witness = match cell {
            Cell::Point(p) => p.clone(),
            Cell::Interval { lo, hi, lo_closed, .. } => {
                if *lo_closed {
                    lo.clone()
                } else {
                    midpoint(lo, hi)
                }
            }
        };
        return Err(PlError::CoverIncomplete(witness));
    }
    match partial.pieces.as_slice() {
        [Piece::Fragment(f)] => Ok(f.clone()),
        _ => Ok(PLFunction::interpolate(&partial.knots())),
    }
}

/// Tietze extension of `f|A` for closed `A`; zero when `A` is empty.
pub fn extend_from(f: &PLFunction, a: &SemilinearSet) -> Result<PLFunction, PlError> {
    if a.is_empty() {
        return Ok(PLFunction::zero());
    }
    tietze_extend(&PartialPLFunction::restrict(f, a)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pl::{pl_affine, pl_const, pl_points};
    use crate::rational::{int, rat};

    fn set(t: &str) -> SemilinearSet {
        t.parse().unwrap()
    }

    fn x() -> PLFunction {
        PLFunction::identity()
    }

    #[test]
    fn tietze_interpolates_gaps() {
        let g = PartialPLFunction::new(
            set("{0} + [1/2,1]"),
            vec![Piece::Point(int(1)), Piece::Fragment(PLFunction::zero())],
        )
        .unwrap();
        let expected = pl_affine(int(-2), int(1)).max(&PLFunction::zero());
        assert_eq!(tietze_extend(&g).unwrap(), expected);
        assert!(g.agrees_with(&expected));

        let f = pl_points(&[((0, 1), (1, 1)), ((1, 3), (-1, 1)), ((1, 1), (2, 1))]);
        let whole = PartialPLFunction::restrict(&f, &SemilinearSet::full()).unwrap();
        assert_eq!(tietze_extend(&whole).unwrap(), f);

        let two = PartialPLFunction::new(set("{0} + {1}"), vec![Piece::Point(int(0)), Piece::Point(int(1))]).unwrap();
        assert_eq!(tietze_extend(&two).unwrap(), x());

        let empty = PartialPLFunction::new(SemilinearSet::empty(), vec![]).unwrap();
        assert_eq!(tietze_extend(&empty).unwrap(), PLFunction::zero());
    }

    #[test]
    fn partial_functions_need_closed_domains() {
        assert!(matches!(
            PartialPLFunction::new(set("(0,1/2]"), vec![Piece::Fragment(x())]),
            Err(PlError::DomainNotClosed(_))
        ));
        assert!(PartialPLFunction::new(set("[0,1/2]"), vec![Piece::Point(int(0))]).is_err());
    }

    #[test]
    fn glueing() {
        let tent = pl_points(&[((0, 1), (0, 1)), ((1, 2), (1, 2)), ((1, 1), (0, 1))]);
        let parts = vec![(set("[0,1/2]"), x()), (set("[1/2,1]"), pl_affine(int(-1), int(1)))];
        assert_eq!(glue(&parts).unwrap(), tent);
        assert_eq!(glue(&[(SemilinearSet::full(), tent.clone())]).unwrap(), tent);
        let bad = vec![(set("[0,1/2]"), PLFunction::zero()), (set("[1/2,1]"), pl_const(int(1)))];
        assert_eq!(glue(&bad), Err(PlError::Mismatch(rat(1, 2))));
        let gap = vec![(set("[0,1/4]"), x()), (set("[1/2,1]"), x())];
        assert!(matches!(glue(&gap), Err(PlError::CoverIncomplete(_))));
        let open = vec![(set("[0,1/2)"), x()), (set("[1/2,1]"), x())];
        assert!(matches!(glue(&open), Err(PlError::DomainNotClosed(_))));
    }

    #[test]
    fn overlapping_parts_must_agree_on_segments() {
        let parts = vec![(set("[0,3/4]"), x()), (set("[1/4,1]"), x().scale(&rat(1, 2)).add(&pl_const(rat(1, 8))))];
        // Equal at 1/4 only; the overlap [1/4,3/4] is a segment.
        assert!(matches!(glue(&parts), Err(PlError::Mismatch(_))));
    }
}
