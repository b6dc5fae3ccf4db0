//! Deciding whether the image of the standard chain is a regulus or a
//! quasi-regulus.
//!
//! With `x` a generator of `F` and `ρ_x = φ(x)`, the image is a regulus iff
//! `ρ_x = h(x)·I` for some isomorphism `h: F → K`, and a quasi-regulus iff
//! `ρ_x` is diagonalizable over `K` with all eigenvalues of the form
//! `h(x)`, `h` an isomorphism. Eigenspaces `U_h` are the classes of
//! projectively linked transversals.

use std::collections::{HashMap, HashSet};

use crate::algebra::{homomorphisms, FieldElem, FieldHom};
use crate::linalg::{projective_point_count, projective_points, Mat, Subspace};
use crate::pline::{enumerate_points, PointId, ProjectiveLine};
use crate::rings::SubfieldEmbedding;
use crate::{Error, Result};

use super::pg3::regulus_through_three;
use super::transversal::eigen_homomorphism;
use super::Representation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegulusVerdict {
    Regulus,
    QuasiRegulus,
    Neither,
}

impl std::fmt::Display for RegulusVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RegulusVerdict::Regulus => "regulus",
            RegulusVerdict::QuasiRegulus => "quasi_regulus",
            RegulusVerdict::Neither => "neither",
        })
    }
}

#[derive(Clone, Debug)]
pub struct LinkClass {
    pub alpha: FieldHom,
    /// `U_h = {u : u·y = h(y)u for all y ∈ F}`.
    pub subspace: Subspace,
    /// Number of transversals `Ku × Ku` with `u ∈ U_h`.
    pub transversal_count: u64,
}

#[derive(Clone, Debug)]
pub struct RegulusCertificate {
    pub verdict: RegulusVerdict,
    pub reason: String,
    /// The isomorphism `h` with `φ|F = h·I`, for reguli.
    pub alpha: Option<FieldHom>,
    pub classes: Vec<LinkClass>,
    /// Rows are eigenvectors of `ρ_x` forming a basis of `U`, class by
    /// class, when `ρ_x` diagonalizes.
    pub witness_basis: Option<Mat>,
    /// For `dim U = 2`: whether the image equals the regulus of `PG(3, K)`
    /// through the images of `R(E,0)`, `R(0,E)`, `R(E,E)`.
    pub synthetic_regulus: Option<bool>,
}

pub fn regulus_verdict(rep: &Representation, line: &ProjectiveLine, emb: &SubfieldEmbedding) -> Result<RegulusCertificate> {
    rep.check_compatible(line, emb)?;
    let f = emb.field();
    let k = rep.field();
    let d = rep.dim();

    let synthetic_regulus = if d == 2 {
        let images = rep.standard_chain_images(line, emb)?;
        let [a, b, c] = [line.e0(), line.zero_e(), line.ee()].map(|p| rep.phi_image(line, p));
        match regulus_through_three([&a, &b, &c], k) {
            Ok(reg) => {
                let img: HashSet<&Subspace> = images.iter().map(|(_, s)| s).collect();
                let lines: HashSet<&Subspace> = reg.lines.iter().collect();
                Some(img == lines)
            }
            Err(Error::NotSkew) => Some(false),
            Err(e) => return Err(e),
        }
    } else {
        None
    };

    let isos: Vec<FieldHom> = homomorphisms(f, k).into_iter().filter(|h| h.is_surjective()).collect();
    if isos.is_empty() {
        return Ok(RegulusCertificate {
            verdict: RegulusVerdict::Neither,
            reason: format!("{f} and {k} are not isomorphic"),
            alpha: None,
            classes: Vec::new(),
            witness_basis: None,
            synthetic_regulus,
        });
    }

    let x = f.ring_generator();
    let rho = rep.phi(emb.apply(x));
    let mut classes = Vec::new();
    for h in isos {
        let shifted = rho.sub(&Mat::scalar(d, h.apply(x)), k);
        let sub = Subspace::from_rows(&shifted.left_kernel(k), k);
        if sub.dim() == 0 {
            continue;
        }
        for i in 0..sub.dim() {
            if eigen_homomorphism(rep, emb, sub.basis().row(i)).as_ref() != Some(&h) {
                return Err(Error::Internal("eigenvector of the generator is not a common eigenvector".into()));
            }
        }
        let transversal_count = projective_point_count(sub.dim(), k.order());
        classes.push(LinkClass { alpha: h, subspace: sub, transversal_count });
    }
    let total: usize = classes.iter().map(|c| c.subspace.dim()).sum();
    if total != d {
        return Ok(RegulusCertificate {
            verdict: RegulusVerdict::Neither,
            reason: format!("eigenspaces of conjugate eigenvalues span only {total} of {d} dimensions"),
            alpha: None,
            classes,
            witness_basis: None,
            synthetic_regulus,
        });
    }
    let witness = classes.iter().skip(1).fold(classes[0].subspace.basis().clone(), |m, c| m.vcat(c.subspace.basis()));
    let (verdict, reason, alpha) = if classes.len() == 1 {
        let h = classes[0].alpha.clone();
        (RegulusVerdict::Regulus, format!("F acts on U as scalars through {}", h.describe()), Some(h))
    } else {
        (
            RegulusVerdict::QuasiRegulus,
            format!("generator diagonalizes with {} distinct conjugate eigenvalues", classes.len()),
            None,
        )
    };
    Ok(RegulusCertificate { verdict, reason, alpha, classes, witness_basis: Some(witness), synthetic_regulus })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectSumReport {
    pub dimension_sum: usize,
    pub ambient: usize,
    /// The class subspaces are independent.
    pub independent: bool,
    /// Each `Φ(p) ∩ (U_h × U_h)` has dimension `dim U_h` and equals the
    /// image of `p` under the restricted representation.
    pub traces_match: bool,
    /// The restricted representation on each `U_h` yields a regulus.
    pub traces_are_reguli: Vec<bool>,
    /// Each `Φ(p)` is the join of its traces.
    pub elements_split: bool,
}

impl DirectSumReport {
    pub fn holds(&self) -> bool {
        self.dimension_sum == self.ambient
            && self.independent
            && self.traces_match
            && self.elements_split
            && self.traces_are_reguli.iter().all(|&b| b)
    }
}

/// Checks the decomposition of a quasi-regulus into reguli on the
/// subspaces `U_h × U_h`.
pub fn verify_direct_sum(
    rep: &Representation,
    line: &ProjectiveLine,
    emb: &SubfieldEmbedding,
    cert: &RegulusCertificate,
) -> Result<DirectSumReport> {
    if cert.verdict == RegulusVerdict::Neither {
        return Err(Error::InvalidArgument("no class decomposition for this representation".into()));
    }
    let k = rep.field();
    let d = rep.dim();
    let f = emb.field();
    let dimension_sum = cert.classes.iter().map(|c| c.subspace.dim()).sum();
    let joined = cert.classes.iter().fold(Subspace::zero(d), |acc, c| acc.join(&c.subspace, k));
    let independent = joined.dim() == dimension_sum;

    let images = rep.standard_chain_images(line, emb)?;
    let rep_f = rep.of_subfield(emb)?;
    let line_f = enumerate_points(rep_f.ring())?;
    let emb_f = SubfieldEmbedding::scalar(f, rep_f.ring())?;

    let f_coords: HashMap<PointId, (FieldElem, FieldElem)> = projective_points(2, f)
        .into_iter()
        .map(|v| (line.expect_point(emb.apply(v[0]), emb.apply(v[1])), (v[0], v[1])))
        .collect();

    let mut traces_match = true;
    let mut traces_are_reguli = Vec::new();
    let mut joins: Vec<Subspace> = vec![Subspace::zero(2 * d); images.len()];
    for class in &cert.classes {
        let s = &class.subspace;
        let m = s.dim();
        let mut double = Mat::zeros(2 * m, 2 * d);
        double.set_block(0, 0, s.basis());
        double.set_block(m, d, s.basis());
        let w = Subspace::from_rows(&double, k);

        let restricted = rep_f.restrict(s)?;
        traces_are_reguli.push(regulus_verdict(&restricted, &line_f, &emb_f)?.verdict == RegulusVerdict::Regulus);

        for (slot, (p, img)) in joins.iter_mut().zip(&images) {
            let trace = img.meet(&w, k);
            let &(x, y) = f_coords
                .get(p)
                .ok_or_else(|| Error::Internal("standard chain point outside the subfield line".into()))?;
            let ring_f = restricted.ring();
            let pf = line_f.expect_point(ring_f.elem(x.index()), ring_f.elem(y.index()));
            let embedded = restricted.phi_image(&line_f, pf).image(&double, k);
            if trace.dim() != m || trace != embedded {
                traces_match = false;
            }
            *slot = slot.join(&trace, k);
        }
    }
    let elements_split = joins.iter().zip(&images).all(|(j, (_, img))| j == img);
    Ok(DirectSumReport { dimension_sum, ambient: d, independent, traces_match, traces_are_reguli, elements_split })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_field;
    use crate::representation::{natural_rep, regular_rep, Representation};
    use crate::rings::FiniteRing;

    #[test]
    fn natural_m2_is_regulus() {
        for (p, n) in [(2, 1), (3, 1), (2, 2)] {
            let k = make_field(p, n).unwrap();
            let r = FiniteRing::matrix_ring(2, &k).unwrap();
            let emb = SubfieldEmbedding::scalar(&k, &r).unwrap();
            let rep = natural_rep(&r);
            let line = enumerate_points(&r).unwrap();
            let c = regulus_verdict(&rep, &line, &emb).unwrap();
            assert_eq!(c.verdict, RegulusVerdict::Regulus);
            assert_eq!(c.synthetic_regulus, Some(true));
            assert_eq!(c.classes.len(), 1);
            assert_eq!(c.classes[0].transversal_count, k.order() as u64 + 1);
        }
    }

    #[test]
    fn twisted_diagonal_is_quasi_regulus() {
        let gf4 = make_field(2, 2).unwrap();
        let rep = Representation::diagonal(&gf4, &[gf4.aut(0), gf4.aut(1)]).unwrap();
        let emb = SubfieldEmbedding::scalar(&gf4, rep.ring()).unwrap();
        let line = enumerate_points(rep.ring()).unwrap();
        let c = regulus_verdict(&rep, &line, &emb).unwrap();
        assert_eq!(c.verdict, RegulusVerdict::QuasiRegulus);
        assert_eq!(c.synthetic_regulus, Some(false));
        let report = verify_direct_sum(&rep, &line, &emb, &c).unwrap();
        assert!(report.holds(), "{report:?}");
    }

    #[test]
    fn regular_subfield_of_m2_is_neither() {
        let k = make_field(2, 1).unwrap();
        let gf4 = make_field(2, 2).unwrap();
        let r = FiniteRing::matrix_ring(2, &k).unwrap();
        let emb = SubfieldEmbedding::regular(&gf4, &r).unwrap();
        let rep = natural_rep(&r);
        let line = enumerate_points(&r).unwrap();
        let c = regulus_verdict(&rep, &line, &emb).unwrap();
        assert_eq!(c.verdict, RegulusVerdict::Neither);
        assert_eq!(c.synthetic_regulus, Some(false));
    }

    #[test]
    fn regular_rep_over_scalars_is_regulus_in_higher_dimension() {
        let k = make_field(2, 1).unwrap();
        let r = FiniteRing::matrix_ring(2, &k).unwrap();
        let emb = SubfieldEmbedding::scalar(&k, &r).unwrap();
        let rep = regular_rep(&emb).unwrap();
        let line = enumerate_points(&r).unwrap();
        let c = regulus_verdict(&rep, &line, &emb).unwrap();
        assert_eq!(c.verdict, RegulusVerdict::Regulus);
        assert_eq!(c.synthetic_regulus, None);
        assert!(verify_direct_sum(&rep, &line, &emb, &c).unwrap().holds());
    }
}
