//! Lines of `PG(3, q)`: reguli through three skew lines and spreads.

use std::collections::{BTreeSet, HashSet};

use crate::algebra::{FieldElem, FiniteField};
use crate::linalg::{projective_points, Subspace};
use crate::pline::Chain;
use crate::{Error, Result};

use super::Representation;
use crate::pline::ProjectiveLine;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regulus {
    /// The `q + 1` lines, sorted.
    pub lines: Vec<Subspace>,
    /// The `q + 1` transversal lines of the opposite regulus, sorted.
    pub transversals: Vec<Subspace>,
}

impl Regulus {
    pub fn contains(&self, l: &Subspace) -> bool {
        self.lines.binary_search(l).is_ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpreadClass {
    NotSpread,
    Spread,
    RegularSpread,
}

impl std::fmt::Display for SpreadClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SpreadClass::NotSpread => "not_spread",
            SpreadClass::Spread => "spread",
            SpreadClass::RegularSpread => "regular_spread",
        })
    }
}

fn check_line(l: &Subspace) -> Result<()> {
    if l.ambient() != 4 || l.dim() != 2 {
        return Err(Error::InvalidArgument(format!(
            "expected a line of PG(3, q), got a {}-space of a {}-space",
            l.dim(),
            l.ambient()
        )));
    }
    Ok(())
}

/// The line through the point `p` meeting the skew lines `l2` and `l3`,
/// where `p` lies on neither.
fn line_through(p: &[FieldElem], l2: &Subspace, l3: &Subspace, f: &FiniteField) -> Result<Subspace> {
    let pt = Subspace::from_vectors(&[p.to_vec()], 4, f);
    let plane = pt.join(l2, f);
    let q = plane.meet(l3, f);
    if plane.dim() != 3 || q.dim() != 1 {
        return Err(Error::Internal("no unique line through a point meeting two skew lines".into()));
    }
    Ok(pt.join(&q, f))
}

/// The unique regulus containing three pairwise skew lines.
pub fn regulus_through_three(lines: [&Subspace; 3], f: &FiniteField) -> Result<Regulus> {
    for l in lines {
        check_line(l)?;
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if lines[i].meet(lines[j], f).dim() != 0 {
            return Err(Error::NotSkew);
        }
    }
    let [l1, l2, l3] = lines;
    let mut transversals = l1.points(f).iter().map(|p| line_through(p, l2, l3, f)).collect::<Result<Vec<_>>>()?;
    transversals.sort();
    let mut reg = transversals[0]
        .points(f)
        .iter()
        .map(|p| line_through(p, &transversals[1], &transversals[2], f))
        .collect::<Result<Vec<_>>>()?;
    reg.sort();
    reg.dedup();

    let q1 = f.order() + 1;
    let sound = reg.len() == q1
        && transversals.len() == q1
        && lines.iter().all(|l| reg.contains(l))
        && reg.iter().all(|l| transversals.iter().all(|t| l.meet(t, f).dim() == 1));
    if !sound {
        return Err(Error::Internal("regulus construction is inconsistent".into()));
    }
    Ok(Regulus { lines: reg, transversals })
}

/// Classifies a set of lines of `PG(3, q)`.
pub fn classify_line_set(lines: &[Subspace], f: &FiniteField) -> Result<SpreadClass> {
    for l in lines {
        check_line(l)?;
    }
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if lines[i].meet(&lines[j], f).dim() != 0 {
                return Ok(SpreadClass::NotSpread);
            }
        }
    }
    let q = f.order() as u64;
    let total = (q.pow(4) - 1) / (q - 1);
    if lines.len() as u64 * (q + 1) != total {
        return Ok(SpreadClass::NotSpread);
    }
    let set: HashSet<&Subspace> = lines.iter().collect();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            for k in j + 1..lines.len() {
                let reg = regulus_through_three([&lines[i], &lines[j], &lines[k]], f)?;
                if !reg.lines.iter().all(|l| set.contains(l)) {
                    return Ok(SpreadClass::Spread);
                }
            }
        }
    }
    Ok(SpreadClass::RegularSpread)
}

/// Classifies the image of a chain under a representation with `dim U = 2`.
pub fn spread_check(rep: &Representation, line: &ProjectiveLine, chain: &Chain) -> Result<SpreadClass> {
    if rep.dim() != 2 {
        return Err(Error::InvalidArgument(format!("spread test needs dim U = 2, got {}", rep.dim())));
    }
    if **line.ring() != **rep.ring() {
        return Err(Error::InvalidArgument("line and representation use different rings".into()));
    }
    let images: Vec<Subspace> = chain.points().iter().map(|&p| rep.phi_image(line, p)).collect();
    classify_line_set(&images, rep.field())
}

/// Every line of `PG(3, q)`, sorted.
pub fn all_lines_pg3(f: &FiniteField) -> Vec<Subspace> {
    let pts = projective_points(4, f);
    let mut out = BTreeSet::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            out.insert(Subspace::from_vectors(&[pts[i].clone(), pts[j].clone()], 4, f));
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_field;

    /// Reguli and hyperbolic quadrics (point sets of a regulus) of `PG(3, q)`.
    fn count_reguli(f: &FiniteField) -> (usize, usize) {
        let lines = all_lines_pg3(f);
        let mut seen = BTreeSet::new();
        let mut quadrics = BTreeSet::new();
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                if lines[i].meet(&lines[j], f).dim() != 0 {
                    continue;
                }
                for k in j + 1..lines.len() {
                    if lines[i].meet(&lines[k], f).dim() != 0 || lines[j].meet(&lines[k], f).dim() != 0 {
                        continue;
                    }
                    let reg = regulus_through_three([&lines[i], &lines[j], &lines[k]], f).unwrap();
                    let pts: BTreeSet<Vec<FieldElem>> = reg.lines.iter().flat_map(|l| l.points(f)).collect();
                    let opposite: BTreeSet<Vec<FieldElem>> =
                        reg.transversals.iter().flat_map(|l| l.points(f)).collect();
                    assert_eq!(pts, opposite);
                    quadrics.insert(pts);
                    seen.insert(reg.lines);
                }
            }
        }
        (seen.len(), quadrics.len())
    }

    #[test]
    fn line_counts() {
        assert_eq!(all_lines_pg3(&make_field(2, 1).unwrap()).len(), 35);
        assert_eq!(all_lines_pg3(&make_field(3, 1).unwrap()).len(), 130);
    }

    #[test]
    fn reguli_in_pg32() {
        // |PGL(4,2)| / |PGO+(4,2)| = 20160 / 72 quadrics, two reguli on each
        assert_eq!(count_reguli(&make_field(2, 1).unwrap()), (560, 280));
    }

    #[test]
    fn not_skew_rejected() {
        let f = make_field(2, 1).unwrap();
        let lines = all_lines_pg3(&f);
        let l0 = &lines[0];
        let meeting = lines.iter().find(|l| *l != l0 && l.meet(l0, &f).dim() == 1).unwrap();
        let skew = lines.iter().find(|l| l.meet(l0, &f).dim() == 0).unwrap();
        assert!(matches!(regulus_through_three([l0, meeting, skew], &f), Err(Error::NotSkew)));
    }

    #[test]
    fn too_few_lines_is_not_a_spread() {
        let f = make_field(2, 1).unwrap();
        let lines = all_lines_pg3(&f);
        let skew: Vec<Subspace> =
            vec![lines[0].clone(), lines.iter().find(|l| l.meet(&lines[0], &f).dim() == 0).unwrap().clone()];
        assert_eq!(classify_line_set(&skew, &f).unwrap(), SpreadClass::NotSpread);
    }
}
