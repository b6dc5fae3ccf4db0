//! Point maps between chain geometries over 2×2 matrix rings.
//!
//! A [`MorphismSpec`] describes `R(A,B) ↦ R'((A^κ, B^κ)·H')`, optionally
//! preceded by the correlation-type map
//! `R(A,B) ↦ {(X,Y) : −X B^ωT + Y A^ωT = 0}`.

use std::collections::HashSet;
use std::sync::Arc;

use crate::algebra::{FieldAut, FieldElem, FieldHom, FiniteField};
use crate::linalg::Mat;
use crate::pline::{ChainGeometry, PointId, ProjectiveLine};
use crate::rings::{FiniteRing, RingElem, RingKind, RingMat2, SubfieldEmbedding};
use crate::{Error, Result};

/// `(c_ij) ↦ (c_ji^ω)` on a matrix ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OmegaTranspose {
    pub omega: FieldAut,
}

impl OmegaTranspose {
    pub fn new(omega: FieldAut) -> Self {
        OmegaTranspose { omega }
    }

    pub fn apply_mat(&self, k: &FiniteField, m: &Mat) -> Mat {
        m.transpose().map(|c| self.omega.apply(k, c))
    }

    pub fn apply(&self, ring: &FiniteRing, a: RingElem) -> RingElem {
        let m = self.apply_mat(ring.field(), ring.matrix(a));
        ring.from_matrix(&m).expect("a full matrix ring is closed under ω-transpose")
    }
}

fn check_m2(ring: &FiniteRing) -> Result<()> {
    match ring.kind() {
        RingKind::MatrixRing { n: 2 } => Ok(()),
        other => Err(Error::InvalidArgument(format!("expected a ring of 2×2 matrices, got {other}"))),
    }
}

/// `A ↦ A^κ`, entrywise.
fn kappa_elem(kappa: &FieldHom, src: &FiniteRing, tgt: &FiniteRing, a: RingElem) -> RingElem {
    let m = src.matrix(a).map(|c| kappa.apply(c));
    tgt.from_matrix(&m).expect("full matrix rings correspond under κ")
}

#[derive(Clone, Debug)]
pub struct MorphismSpec {
    pub kappa: FieldHom,
    /// `H' ∈ GL_2(R')`.
    pub h: RingMat2,
    /// `H'_1` when `H' = diag(H'_1, H'_1)`.
    pub h1: Option<Mat>,
    pub omega: Option<FieldAut>,
    pub source: Arc<FiniteRing>,
    pub target: Arc<FiniteRing>,
}

impl MorphismSpec {
    pub fn new(
        kappa: FieldHom,
        h: RingMat2,
        omega: Option<FieldAut>,
        source: &Arc<FiniteRing>,
        target: &Arc<FiniteRing>,
    ) -> Result<Self> {
        check_m2(source)?;
        check_m2(target)?;
        if **kappa.source() != **source.field() || **kappa.target() != **target.field() {
            return Err(Error::IncompatibleFields("κ must map K to K'".into()));
        }
        if !kappa.is_surjective() {
            return Err(Error::InvalidArgument("κ must be an isomorphism".into()));
        }
        if !target.mat2_is_invertible(&h) {
            return Err(Error::NotInvertible);
        }
        Ok(MorphismSpec { kappa, h, h1: None, omega, source: source.clone(), target: target.clone() })
    }

    pub fn identity(ring: &Arc<FiniteRing>) -> Result<Self> {
        Self::new(FieldHom::identity(ring.field()), ring.mat2_identity(), None, ring, ring)
    }

    fn check_lines(&self, src: &ProjectiveLine, tgt: &ProjectiveLine) -> Result<()> {
        if **src.ring() != *self.source || **tgt.ring() != *self.target {
            return Err(Error::InvalidArgument("lines do not match the morphism's rings".into()));
        }
        Ok(())
    }

    /// Image of one point, applying the correlation factor first if present.
    pub fn apply(&self, src: &ProjectiveLine, tgt: &ProjectiveLine, p: PointId) -> Result<PointId> {
        self.check_lines(src, tgt)?;
        let p = match self.omega {
            Some(w) => apply_correlation(w, src, p)?,
            None => p,
        };
        Ok(self.semilinear(src, tgt, p))
    }

    fn semilinear(&self, src: &ProjectiveLine, tgt: &ProjectiveLine, p: PointId) -> PointId {
        let (a, b) = src.rep(p);
        let ka = kappa_elem(&self.kappa, &self.source, &self.target, a);
        let kb = kappa_elem(&self.kappa, &self.source, &self.target, b);
        let (x, y) = self.target.row_times((ka, kb), &self.h);
        tgt.expect_point(x, y)
    }

    /// The full point map as a table indexed by source points.
    pub fn point_map(&self, src: &ProjectiveLine, tgt: &ProjectiveLine) -> Result<Vec<PointId>> {
        src.ids().map(|p| self.apply(src, tgt, p)).collect()
    }
}

/// `R(A,B) ↦ R'((A^κ, B^κ)·H')`.
pub fn apply_semilinear(m: &MorphismSpec, src: &ProjectiveLine, tgt: &ProjectiveLine, p: PointId) -> Result<PointId> {
    if m.omega.is_some() {
        return Err(Error::InvalidArgument("spec carries a correlation factor".into()));
    }
    m.apply(src, tgt, p)
}

/// The point `{(X,Y) ∈ R² : −X B^ωT + Y A^ωT = 0}` for `p = R(A,B)`,
/// computed as a solution space over `K`.
pub fn apply_correlation(omega: FieldAut, line: &ProjectiveLine, p: PointId) -> Result<PointId> {
    let ring = line.ring();
    check_m2(ring)?;
    let k = ring.field();
    let wt = OmegaTranspose::new(omega);
    let (a, b) = line.rep(p);
    let (at, bt) = (ring.matrix(wt.apply(ring, a)).clone(), ring.matrix(wt.apply(ring, b)).clone());
    let basis = ring.basis();
    let n = basis.len();
    let flat = |m: &Mat| m.data().to_vec();

    // rows: X = B_i contributes −B_i·B^ωT, Y = B_i contributes B_i·A^ωT
    let mut rows: Vec<Vec<FieldElem>> = basis.iter().map(|bi| flat(&bi.mul(&bt, k).neg(k))).collect();
    rows.extend(basis.iter().map(|bi| flat(&bi.mul(&at, k))));
    let system = Mat::from_rows(&rows, 4);
    let kernel = system.left_kernel(k);
    if kernel.rows() != n {
        return Err(Error::Internal(format!("solution space has dimension {} instead of {n}", kernel.rows())));
    }

    let to_elem = |coeffs: &[FieldElem]| -> RingElem {
        let m = basis.iter().zip(coeffs).fold(Mat::zeros(2, 2), |acc, (bi, &c)| acc.add(&bi.scale(c, k), k));
        ring.from_matrix(&m).expect("basis combinations lie in the ring")
    };
    let mut solutions = Vec::with_capacity(ring.order());
    for code in 0..ring.order() as u64 {
        let c = crate::linalg::vector_from_code(code, n, k.order());
        let v = kernel.apply_row(&c, k);
        solutions.push((to_elem(&v[..n]), to_elem(&v[n..])));
    }
    solutions.sort();
    let point = solutions
        .iter()
        .find_map(|&(x, y)| line.point_of(x, y))
        .ok_or_else(|| Error::Internal("solution set contains no admissible pair".into()))?;
    let (x, y) = line.rep(point);
    if line.submodule(x, y) != solutions {
        return Err(Error::Internal("solution set is not a point".into()));
    }
    Ok(point)
}

/// `R(A, E+AB) ↦ R(A^ωT, E + A^ωT B^ωT)`, using a precomputed normal form
/// table of the line.
pub fn apply_correlation_closed_form(
    omega: FieldAut,
    line: &ProjectiveLine,
    normal_forms: &[Option<(RingElem, RingElem)>],
    p: PointId,
) -> Result<PointId> {
    let ring = line.ring();
    check_m2(ring)?;
    let (a, b) = normal_forms[p.index()].ok_or_else(|| Error::Internal("point without normal form".into()))?;
    let wt = OmegaTranspose::new(omega);
    let (at, bt) = (wt.apply(ring, a), wt.apply(ring, b));
    line.point_of(at, ring.add(ring.one(), ring.mul(at, bt)))
        .ok_or_else(|| Error::Internal("closed form produced a non-admissible pair".into()))
}

/// `[[A,B],[C,D]] ↦ [[D^ωT, −B^ωT], [−C^ωT, A^ωT]]⁻¹`.
pub fn contragredient_auto(omega: FieldAut, ring: &FiniteRing, g: &RingMat2) -> Result<RingMat2> {
    check_m2(ring)?;
    if !ring.mat2_is_invertible(g) {
        return Err(Error::NotInvertible);
    }
    let wt = OmegaTranspose::new(omega);
    let [a, b, c, d] = g.map(|x| wt.apply(ring, x));
    let m = [d, ring.neg(b), ring.neg(c), a];
    ring.mat2_inverse(&m).ok_or(Error::NotInvertible)
}

/// Checks `H₁⁻¹ (F^ωT)^κ H₁ ⊆ F'` (or `= F'` when `strict`).
fn inclusion_holds(
    kappa: &FieldHom,
    h1: &Mat,
    omega: Option<FieldAut>,
    src: &SubfieldEmbedding,
    tgt: &SubfieldEmbedding,
    strict: bool,
) -> Result<bool> {
    let (r, r2) = (src.ring(), tgt.ring());
    let k2 = r2.field();
    let h1_inv = h1.inverse(k2).ok_or(Error::NotInvertible)?;
    let mut image = HashSet::new();
    for &f in src.image() {
        let f = match omega {
            Some(w) => OmegaTranspose::new(w).apply(r, f),
            None => f,
        };
        let m = h1_inv.mul(&r.matrix(f).map(|c| kappa.apply(c)).mul(h1, k2), k2);
        let e = r2.from_matrix(&m).expect("full matrix ring");
        if !tgt.contains(e) {
            return Ok(false);
        }
        image.insert(e);
    }
    Ok(!strict || image.len() == tgt.image().len())
}

fn diag_spec(
    kappa: FieldHom,
    h1: &Mat,
    omega: Option<FieldAut>,
    src: &ChainGeometry,
    tgt: &ChainGeometry,
) -> Result<MorphismSpec> {
    let r2 = tgt.line().ring();
    let k2 = r2.field();
    if h1.rows() != 2 || h1.cols() != 2 || h1.inverse(k2).is_none() {
        return Err(Error::NotInvertible);
    }
    let e = r2.from_matrix(h1).expect("full matrix ring");
    let h = [e, r2.zero(), r2.zero(), e];
    let mut spec = MorphismSpec::new(kappa, h, omega, src.line().ring(), r2)?;
    spec.h1 = Some(h1.clone());
    Ok(spec)
}

/// Builds the map `R(A,B) ↦ R'((A^κ,B^κ)·diag(H₁,H₁))`, preceded by the
/// correlation for `ω` if given, after checking the inclusion condition.
/// With `strict`, the condition must hold with equality.
pub fn make_fundamental(
    kappa: FieldHom,
    h1: &Mat,
    omega: Option<FieldAut>,
    src: &ChainGeometry,
    tgt: &ChainGeometry,
    strict: bool,
) -> Result<MorphismSpec> {
    let spec = diag_spec(kappa, h1, omega, src, tgt)?;
    if !inclusion_holds(&spec.kappa, h1, omega, src.embedding(), tgt.embedding(), strict)? {
        return Err(Error::InclusionCondition(format!(
            "H1^-1 F^{} H1 is not {} F'",
            if omega.is_some() { "ωTκ" } else { "κ" },
            if strict { "equal to" } else { "contained in" }
        )));
    }
    let map = spec.point_map(src.line(), tgt.line())?;
    if !is_fundamental(&map, src, tgt) {
        return Err(Error::Internal("constructed map is not fundamental".into()));
    }
    Ok(spec)
}

/// As [`make_fundamental`] without the inclusion check; for negative
/// controls.
pub fn make_fundamental_unchecked(
    kappa: FieldHom,
    h1: &Mat,
    omega: Option<FieldAut>,
    src: &ChainGeometry,
    tgt: &ChainGeometry,
) -> Result<MorphismSpec> {
    diag_spec(kappa, h1, omega, src, tgt)
}

pub fn inclusion_condition(
    kappa: &FieldHom,
    h1: &Mat,
    omega: Option<FieldAut>,
    src: &SubfieldEmbedding,
    tgt: &SubfieldEmbedding,
    strict: bool,
) -> Result<bool> {
    inclusion_holds(kappa, h1, omega, src, tgt, strict)
}

fn is_fundamental(map: &[PointId], src: &ChainGeometry, tgt: &ChainGeometry) -> bool {
    let base_ok = src.line().base_points().iter().zip(tgt.line().base_points()).all(|(p, q)| map[p.index()] == q);
    base_ok && src.standard_chain().points().iter().all(|p| tgt.standard_chain().contains(map[p.index()]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MorphismReport {
    pub bijective: bool,
    pub distant_preserving_forward: bool,
    pub distant_preserving_backward: bool,
    pub chains_into_chains: bool,
    /// Chains map onto chains and every target chain is hit.
    pub chains_onto_chains: bool,
    pub fundamental: bool,
}

impl MorphismReport {
    /// A fundamental bijective morphism.
    pub fn is_fundamental_morphism(&self) -> bool {
        self.bijective
            && self.distant_preserving_forward
            && self.distant_preserving_backward
            && self.chains_into_chains
            && self.fundamental
    }

    pub fn is_fundamental_isomorphism(&self) -> bool {
        self.is_fundamental_morphism() && self.chains_onto_chains
    }
}

pub fn verify_morphism(m: &MorphismSpec, src: &ChainGeometry, tgt: &ChainGeometry) -> Result<MorphismReport> {
    let map = m.point_map(src.line(), tgt.line())?;
    Ok(verify_point_map(&map, src, tgt))
}

/// Verifies an arbitrary point map given as a table.
pub fn verify_point_map(map: &[PointId], src: &ChainGeometry, tgt: &ChainGeometry) -> MorphismReport {
    let (l, l2) = (src.line(), tgt.line());
    let distinct: HashSet<PointId> = map.iter().copied().collect();
    let bijective = distinct.len() == map.len() && map.len() == l2.len();

    let mut forward = true;
    let mut backward = true;
    for p in l.ids() {
        for q in l.ids() {
            let d = l.is_distant(p, q);
            let d2 = l2.is_distant(map[p.index()], map[q.index()]);
            forward &= !d || d2;
            backward &= !d2 || d;
        }
    }

    let mut into = true;
    let mut onto = true;
    let mut hit = HashSet::new();
    for c in src.chains() {
        let image: Vec<PointId> = c.points().iter().map(|p| map[p.index()]).collect();
        match tgt.chain_containing(&image) {
            Some(_) => {}
            None => into = false,
        }
        match tgt.find_chain(&image) {
            Some(i) => {
                hit.insert(i);
            }
            None => onto = false,
        }
    }
    onto &= hit.len() == tgt.chains().len();

    MorphismReport {
        bijective,
        distant_preserving_forward: forward,
        distant_preserving_backward: backward,
        chains_into_chains: into,
        chains_onto_chains: onto,
        fundamental: is_fundamental(map, src, tgt),
    }
}

/// Every matrix of `GL(2, K)`, in index order.
pub fn gl2_field(k: &FiniteField) -> Vec<Mat> {
    let q = k.order() as u64;
    (0..q.pow(4))
        .map(|code| Mat::from_vec(2, 2, crate::linalg::vector_from_code(code, 4, k.order())))
        .filter(|m| m.inverse(k).is_some())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_field;
    use crate::pline::DEFAULT_CHAIN_CAP;

    fn geom(p: u32, n: u32, regular: bool) -> ChainGeometry {
        let k = make_field(p, 1).unwrap();
        let r = FiniteRing::matrix_ring(2, &k).unwrap();
        let emb = if regular {
            SubfieldEmbedding::regular(&make_field(p, n).unwrap(), &r).unwrap()
        } else {
            SubfieldEmbedding::scalar(&k, &r).unwrap()
        };
        ChainGeometry::build(&emb, DEFAULT_CHAIN_CAP).unwrap()
    }

    #[test]
    fn omega_transpose_is_antiautomorphism() {
        let k = make_field(2, 2).unwrap();
        let r = FiniteRing::matrix_ring(2, &k).unwrap();
        let wt = OmegaTranspose::new(k.aut(1));
        for a in r.elements().step_by(7) {
            for b in r.elements().step_by(5) {
                assert_eq!(wt.apply(&r, r.mul(a, b)), r.mul(wt.apply(&r, b), wt.apply(&r, a)));
            }
        }
    }

    #[test]
    fn correlation_fixes_base_points_and_matches_closed_form() {
        for p in [2, 3] {
            let k = make_field(p, 1).unwrap();
            let r = FiniteRing::matrix_ring(2, &k).unwrap();
            let line = ProjectiveLine::new(&r, crate::pline::DEFAULT_PAIR_CAP).unwrap();
            let w = k.identity_aut();
            for b in line.base_points() {
                assert_eq!(apply_correlation(w, &line, b).unwrap(), b);
            }
            let nf = line.normal_form_table();
            let mut seen = HashSet::new();
            for q in line.ids() {
                let x = apply_correlation(w, &line, q).unwrap();
                assert_eq!(x, apply_correlation_closed_form(w, &line, &nf, q).unwrap());
                assert_eq!(apply_correlation(w, &line, x).unwrap(), q);
                seen.insert(x);
            }
            assert_eq!(seen.len(), line.len());
        }
    }

    #[test]
    fn correlation_example() {
        let k = make_field(2, 1).unwrap();
        let r = FiniteRing::matrix_ring(2, &k).unwrap();
        let line = ProjectiveLine::new(&r, crate::pline::DEFAULT_PAIR_CAP).unwrap();
        let e12 = r.from_matrix(&Mat::from_vec(2, 2, vec![k.elem(0), k.elem(1), k.elem(0), k.elem(0)])).unwrap();
        let e21 = r.from_matrix(&Mat::from_vec(2, 2, vec![k.elem(0), k.elem(0), k.elem(1), k.elem(0)])).unwrap();
        let p = line.expect_point(e12, r.one());
        let img = apply_correlation(k.identity_aut(), &line, p).unwrap();
        assert_eq!(img, line.expect_point(e21, r.one()));
    }

    #[test]
    fn contragredient_compatibility() {
        let k = make_field(2, 1).unwrap();
        let r = FiniteRing::matrix_ring(2, &k).unwrap();
        let line = ProjectiveLine::new(&r, crate::pline::DEFAULT_PAIR_CAP).unwrap();
        let w = k.identity_aut();
        assert_eq!(contragredient_auto(w, &r, &r.mat2_identity()).unwrap(), r.mat2_identity());
        let gens = crate::rings::gl2_generators(&r);
        for g in &gens {
            let cg = contragredient_auto(w, &r, g).unwrap();
            for h in &gens {
                let lhs = contragredient_auto(w, &r, &r.mat2_mul(g, h)).unwrap();
                assert_eq!(lhs, r.mat2_mul(&cg, &contragredient_auto(w, &r, h).unwrap()));
            }
            for p in line.ids() {
                let lhs = apply_correlation(w, &line, line.apply(g, p)).unwrap();
                assert_eq!(lhs, line.apply(&cg, apply_correlation(w, &line, p).unwrap()));
            }
        }
    }

    #[test]
    fn swap_exchanges_base_points() {
        let k = make_field(2, 1).unwrap();
        let r = FiniteRing::matrix_ring(2, &k).unwrap();
        let line = ProjectiveLine::new(&r, crate::pline::DEFAULT_PAIR_CAP).unwrap();
        let swap = [r.zero(), r.one(), r.one(), r.zero()];
        let m = MorphismSpec::new(FieldHom::identity(&k), swap, None, &r, &r).unwrap();
        assert_eq!(apply_semilinear(&m, &line, &line, line.e0()).unwrap(), line.zero_e());
        assert_eq!(apply_semilinear(&m, &line, &line, line.zero_e()).unwrap(), line.e0());
    }

    #[test]
    fn fundamental_sweep_q2() {
        let g = geom(2, 2, true);
        let k = g.line().ring().field().clone();
        for h1 in gl2_field(&k) {
            for omega in [None, Some(k.identity_aut())] {
                let spec = make_fundamental(FieldHom::identity(&k), &h1, omega, &g, &g, false).unwrap();
                let rep = verify_morphism(&spec, &g, &g).unwrap();
                assert!(rep.is_fundamental_isomorphism(), "{h1:?} {omega:?} {rep:?}");
            }
        }
    }

    #[test]
    fn scalars_embed_into_gf4_chains() {
        let small = geom(2, 1, false);
        let big = geom(2, 2, true);
        let k = small.line().ring().field().clone();
        let spec = make_fundamental(FieldHom::identity(&k), &Mat::identity(2), None, &small, &big, false).unwrap();
        let rep = verify_morphism(&spec, &small, &big).unwrap();
        assert!(rep.is_fundamental_morphism());
        assert!(!rep.chains_onto_chains);
        assert!(matches!(
            make_fundamental(FieldHom::identity(&k), &Mat::identity(2), None, &small, &big, true),
            Err(Error::InclusionCondition(_))
        ));
    }

    #[test]
    fn negative_control() {
        let big = geom(2, 2, true);
        let small = geom(2, 1, false);
        let k = small.line().ring().field().clone();
        assert!(matches!(
            make_fundamental(FieldHom::identity(&k), &Mat::identity(2), None, &big, &small, false),
            Err(Error::InclusionCondition(_))
        ));
        let spec = make_fundamental_unchecked(FieldHom::identity(&k), &Mat::identity(2), None, &big, &small).unwrap();
        let rep = verify_morphism(&spec, &big, &small).unwrap();
        assert!(!rep.chains_into_chains);
    }
}
