//! Transversals of the image of the standard chain.
//!
//! For a nonzero `u ∈ U` spanning a sub-bimodule, `Ku × Ku` meets every
//! `Φ(p)`, `p ∈ ℙ(F)`, in exactly one point, and `uy = α(y)u` defines a
//! field monomorphism `α: F → K`.

use crate::algebra::{FieldElem, FieldHom, FiniteField};
use crate::linalg::{normalize, Mat, Subspace};
use crate::pline::ProjectiveLine;
use crate::rings::SubfieldEmbedding;
use crate::{Error, Result};

use super::{points_of_u, Representation};

/// Upper bound on candidate lines `(x,0)K + (0,y)K` tested geometrically.
pub const CANDIDATE_LINE_CAP: u64 = 4_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TransversalKind {
    Weak,
    Full,
}

#[derive(Clone, Debug)]
pub struct TransversalRecord {
    /// Normalized spanning vector of the sub-bimodule `Ku`.
    pub u: Vec<FieldElem>,
    pub alpha: FieldHom,
    pub kind: TransversalKind,
    pub rep_fingerprint: u64,
}

impl TransversalRecord {
    pub fn line(&self, rep: &Representation) -> Subspace {
        transversal_line(rep, &self.u)
    }
}

/// The map `α` with `u·y = α(y)u` for all `y ∈ F`, if `u` is a common
/// eigenvector of `φ(F)`.
pub fn eigen_homomorphism(rep: &Representation, emb: &SubfieldEmbedding, u: &[FieldElem]) -> Option<FieldHom> {
    let k = rep.field();
    let j = u.iter().position(|x| !x.is_zero())?;
    let mut table = Vec::with_capacity(emb.field().order());
    for y in emb.field().elements() {
        let v = rep.act(u, emb.apply(y));
        let lambda = k.div(v[j], u[j]).ok()?;
        if v.iter().zip(u).any(|(&vi, &ui)| vi != k.mul(lambda, ui)) {
            return None;
        }
        table.push(lambda);
    }
    FieldHom::from_table(emb.field().clone(), k.clone(), table).ok()
}

/// Whether `Ku` is closed under the right action of `F`.
pub fn is_sub_bimodule(rep: &Representation, emb: &SubfieldEmbedding, u: &[FieldElem]) -> bool {
    let k = rep.field();
    let ku = Subspace::from_vectors(&[u.to_vec()], u.len(), k);
    ku.dim() == 1 && emb.field().elements().all(|y| ku.contains(&rep.act(u, emb.apply(y)), k))
}

/// Whether `uF = Ku` as sets.
pub fn is_cyclic_submodule(rep: &Representation, emb: &SubfieldEmbedding, u: &[FieldElem]) -> bool {
    let k = rep.field();
    let ku: std::collections::BTreeSet<Vec<FieldElem>> =
        k.elements().map(|c| u.iter().map(|&x| k.mul(c, x)).collect()).collect();
    let uf: std::collections::BTreeSet<Vec<FieldElem>> =
        emb.field().elements().map(|y| rep.act(u, emb.apply(y))).collect();
    ku == uf
}

/// `Ku × Ku` inside `U × U`.
pub fn transversal_line(rep: &Representation, u: &[FieldElem]) -> Subspace {
    let d = rep.dim();
    let zero = vec![FieldElem::ZERO; d];
    let a: Vec<FieldElem> = u.iter().copied().chain(zero.iter().copied()).collect();
    let b: Vec<FieldElem> = zero.iter().copied().chain(u.iter().copied()).collect();
    Subspace::from_vectors(&[a, b], 2 * d, rep.field())
}

/// All transversals of the form `Ku × Ku`, one per sub-bimodule `Ku`.
pub fn weak_transversals(rep: &Representation, emb: &SubfieldEmbedding) -> Result<Vec<TransversalRecord>> {
    if **emb.ring() != **rep.ring() {
        return Err(Error::InvalidArgument("embedding targets a different ring".into()));
    }
    let mut out = Vec::new();
    for u in points_of_u(rep)? {
        if let Some(alpha) = eigen_homomorphism(rep, emb, &u) {
            let kind = if alpha.is_surjective() { TransversalKind::Full } else { TransversalKind::Weak };
            out.push(TransversalRecord { u, alpha, kind, rep_fingerprint: rep.fingerprint() });
        }
    }
    Ok(out)
}

/// A line meeting every image in exactly one point.
pub fn is_weak_transversal(t: &Subspace, images: &[Subspace], f: &FiniteField) -> bool {
    t.dim() == 2 && images.iter().all(|s| s.meet(t, f).dim() == 1)
}

/// A weak transversal all of whose points lie on some image.
pub fn is_transversal(t: &Subspace, images: &[Subspace], f: &FiniteField) -> bool {
    is_weak_transversal(t, images, f) && t.points(f).iter().all(|p| images.iter().any(|s| s.contains(p, f)))
}

/// Weak transversals of `ℙ(F)^Φ` found by testing every line that meets
/// `U × 0` and `0 × U`.
pub fn geometric_weak_transversals(
    rep: &Representation,
    line: &ProjectiveLine,
    emb: &SubfieldEmbedding,
) -> Result<Vec<Subspace>> {
    let k = rep.field();
    let d = rep.dim();
    let images: Vec<Subspace> = rep.standard_chain_images(line, emb)?.into_iter().map(|(_, s)| s).collect();
    let pts = points_of_u(rep)?;
    let n = pts.len() as u64;
    if n * n > CANDIDATE_LINE_CAP {
        return Err(Error::CapExceeded {
            what: "candidate transversal lines",
            limit: CANDIDATE_LINE_CAP as usize,
            requested: (n * n) as usize,
        });
    }
    let zero = vec![FieldElem::ZERO; d];
    let mut found = Vec::new();
    for x in &pts {
        let a: Vec<FieldElem> = x.iter().copied().chain(zero.iter().copied()).collect();
        for y in &pts {
            let b: Vec<FieldElem> = zero.iter().copied().chain(y.iter().copied()).collect();
            let t = Subspace::from_vectors(&[a.clone(), b], 2 * d, k);
            if is_weak_transversal(&t, &images, k) {
                found.push(t);
            }
        }
    }
    found.sort();
    Ok(found)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Linkage {
    /// `α₁ = α₂`.
    pub by_automorphism: bool,
    /// The map `T₁ ∩ Φ(p) ↦ T₂ ∩ Φ(p)` over the standard chain is the
    /// restriction of a projectivity `T₁ → T₂`.
    pub by_projectivity: bool,
}

/// Decides whether two transversals are projectively linked, by comparing
/// the field maps and, independently, by fitting a projectivity on three
/// points and testing it on the rest.
pub fn projectively_linked(
    rep: &Representation,
    line: &ProjectiveLine,
    emb: &SubfieldEmbedding,
    t1: &TransversalRecord,
    t2: &TransversalRecord,
) -> Result<Linkage> {
    if t1.rep_fingerprint != rep.fingerprint() || t2.rep_fingerprint != rep.fingerprint() {
        return Err(Error::ForeignTransversal);
    }
    let k = rep.field();
    let images = rep.standard_chain_images(line, emb)?;
    let coords = |t: &TransversalRecord| -> Result<Vec<[FieldElem; 2]>> {
        let tl = t.line(rep);
        let j = t.u.iter().position(|x| !x.is_zero()).expect("transversal vectors are nonzero");
        images
            .iter()
            .map(|(_, s)| {
                let m = s.meet(&tl, k);
                if m.dim() != 1 {
                    return Err(Error::Internal("transversal does not meet an image in one point".into()));
                }
                let w = m.basis().row(0);
                Ok([w[j], w[rep.dim() + j]])
            })
            .collect()
    };
    let src = coords(t1)?;
    let dst = coords(t2)?;
    let by_projectivity = match fit_projectivity(&src[..3], &dst[..3], k) {
        Some(m) => src.iter().zip(&dst).all(|(x, y)| same_point(&m.apply_row(x, k), y, k)),
        None => false,
    };
    Ok(Linkage { by_automorphism: t1.alpha == t2.alpha, by_projectivity })
}

fn same_point(x: &[FieldElem], y: &[FieldElem], k: &FiniteField) -> bool {
    normalize(x, k).is_some() && normalize(x, k) == normalize(y, k)
}

/// The unique `2 × 2` matrix mapping three distinct points of `PG(1, K)`
/// to three distinct points, up to scalars.
fn fit_projectivity(src: &[[FieldElem; 2]], dst: &[[FieldElem; 2]], k: &FiniteField) -> Option<Mat> {
    let frame = |p: &[[FieldElem; 2]]| -> Option<Mat> {
        let ab = Mat::from_rows(&[p[0].to_vec(), p[1].to_vec()], 2);
        let inv = ab.inverse(k)?;
        // c = λa + μb  ⇔  (λ, μ) = c · [a; b]⁻¹
        let lm = inv.apply_row(&p[2], k);
        if lm.iter().any(|x| x.is_zero()) {
            return None;
        }
        let rows: Vec<Vec<FieldElem>> = (0..2).map(|i| p[i].iter().map(|&x| k.mul(lm[i], x)).collect()).collect();
        Some(Mat::from_rows(&rows, 2))
    };
    let p = frame(src)?;
    let q = frame(dst)?;
    Some(p.inverse(k)?.mul(&q, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_field;
    use crate::pline::enumerate_points;
    use crate::representation::natural_rep;
    use crate::rings::FiniteRing;

    #[test]
    fn natural_m2_transversals() {
        for (p, n) in [(2, 1), (3, 1)] {
            let k = make_field(p, n).unwrap();
            let r = FiniteRing::matrix_ring(2, &k).unwrap();
            let emb = SubfieldEmbedding::scalar(&k, &r).unwrap();
            let rep = natural_rep(&r);
            let line = enumerate_points(&r).unwrap();
            let ts = weak_transversals(&rep, &emb).unwrap();
            // every u spans a sub-bimodule, α = id
            assert_eq!(ts.len(), k.order() + 1);
            assert!(ts.iter().all(|t| t.kind == TransversalKind::Full && t.alpha == FieldHom::identity(&k)));
            let geo = geometric_weak_transversals(&rep, &line, &emb).unwrap();
            let mut analytic: Vec<Subspace> = ts.iter().map(|t| t.line(&rep)).collect();
            analytic.sort();
            assert_eq!(geo, analytic);
            let l = projectively_linked(&rep, &line, &emb, &ts[0], &ts[1]).unwrap();
            assert!(l.by_automorphism && l.by_projectivity);
        }
    }

    #[test]
    fn twisted_transversals_are_not_linked() {
        let gf4 = make_field(2, 2).unwrap();
        let rep = crate::representation::Representation::diagonal(&gf4, &[gf4.aut(0), gf4.aut(1)]).unwrap();
        let emb = SubfieldEmbedding::scalar(&gf4, rep.ring()).unwrap();
        let line = enumerate_points(rep.ring()).unwrap();
        let ts = weak_transversals(&rep, &emb).unwrap();
        assert_eq!(ts.len(), 2);
        let l = projectively_linked(&rep, &line, &emb, &ts[0], &ts[1]).unwrap();
        assert_eq!(l, Linkage { by_automorphism: false, by_projectivity: false });
        let l = projectively_linked(&rep, &line, &emb, &ts[1], &ts[1]).unwrap();
        assert_eq!(l, Linkage { by_automorphism: true, by_projectivity: true });
    }

    #[test]
    fn foreign_records_rejected() {
        let k = make_field(2, 1).unwrap();
        let r = FiniteRing::matrix_ring(2, &k).unwrap();
        let emb = SubfieldEmbedding::scalar(&k, &r).unwrap();
        let rep = natural_rep(&r);
        let line = enumerate_points(&r).unwrap();
        let mut ts = weak_transversals(&rep, &emb).unwrap();
        ts[0].rep_fingerprint ^= 1;
        assert!(matches!(
            projectively_linked(&rep, &line, &emb, &ts[0], &ts[1]),
            Err(Error::ForeignTransversal)
        ));
    }

    #[test]
    fn cyclic_iff_surjective() {
        let k3 = make_field(3, 1).unwrap();
        let gf9 = make_field(3, 2).unwrap();
        // GF(3) inside GF(9) acting on GF(9)^1: α is not onto
        let r = FiniteRing::field_ring(&gf9);
        let emb = SubfieldEmbedding::from_image(
            k3.clone(),
            r.clone(),
            k3.elements().map(|x| r.scalar(gf9.from_int(x.index() as i64))).collect(),
            crate::rings::EmbedMode::Scalar,
        )
        .unwrap();
        let rep = natural_rep(&r);
        let ts = weak_transversals(&rep, &emb).unwrap();
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0].kind, TransversalKind::Weak);
        assert!(!is_cyclic_submodule(&rep, &emb, &ts[0].u));
        assert!(is_sub_bimodule(&rep, &emb, &ts[0].u));
        let line = enumerate_points(&r).unwrap();
        let images: Vec<Subspace> = rep.standard_chain_images(&line, &emb).unwrap().into_iter().map(|x| x.1).collect();
        let t = ts[0].line(&rep);
        assert!(is_weak_transversal(&t, &images, &gf9));
        assert!(!is_transversal(&t, &images, &gf9));
    }
}
