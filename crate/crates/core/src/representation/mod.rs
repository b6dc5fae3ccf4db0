//! Projective representations of `ℙ(R)` through `(K, R)`-bimodules.
//!
//! A [`Representation`] stores `φ(a)` for every ring element as a `d × d`
//! matrix over `K` acting on row vectors of `U = K^d` from the right, so
//! `u·a = u φ(a)`. The point `R(a, b)` goes to the row space of
//! `[φ(a) | φ(b)]` inside `U × U = K^{2d}`.

mod pg3;
mod regulus;
mod transversal;

pub use pg3::{all_lines_pg3, classify_line_set, regulus_through_three, spread_check, Regulus, SpreadClass};
pub use regulus::{regulus_verdict, verify_direct_sum, DirectSumReport, LinkClass, RegulusCertificate, RegulusVerdict};
pub use transversal::{
    eigen_homomorphism, geometric_weak_transversals, is_cyclic_submodule, is_sub_bimodule, is_transversal,
    is_weak_transversal, projectively_linked, transversal_line, weak_transversals, Linkage, TransversalKind,
    TransversalRecord,
};

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::algebra::{FieldAut, FieldElem, FiniteField};
use crate::linalg::{Mat, Subspace};
use crate::pline::{standard_chain, PointId, ProjectiveLine};
use crate::rings::{FiniteRing, RingElem, SubfieldEmbedding};
use crate::{Error, Result};

/// Upper bound on the number of projective points of `U` that analyses
/// enumerate.
pub const PROJECTIVE_POINT_CAP: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepKind {
    /// `U = K^d` through the defining matrix realization of `R`.
    Natural,
    /// `U = R` as a left vector space over an embedded field.
    Regular,
    /// `φ(k) = diag(k^{α_1}, …, k^{α_d})` on the field ring `K`.
    Diagonal(Vec<FieldAut>),
    Custom,
}

#[derive(Clone, Debug)]
pub struct Representation {
    ring: Arc<FiniteRing>,
    field: Arc<FiniteField>,
    dim: usize,
    images: Vec<Mat>,
    faithful: bool,
    kind: RepKind,
    fingerprint: u64,
}

impl Representation {
    /// Wraps a full table of images, checking that it is a unital ring
    /// homomorphism `R → End_K(U)` on every pair of elements.
    pub fn from_images(ring: Arc<FiniteRing>, field: Arc<FiniteField>, images: Vec<Mat>, kind: RepKind) -> Result<Self> {
        if images.len() != ring.order() {
            return Err(Error::InvalidArgument("one image per ring element is required".into()));
        }
        let dim = images[0].rows();
        if dim == 0 {
            return Err(Error::InvalidArgument("the zero module is excluded".into()));
        }
        if images.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::InvalidArgument("images must be square of equal size".into()));
        }
        if images[ring.one().index()] != Mat::identity(dim) {
            return Err(Error::NotHomomorphism("E is not mapped to the identity".into()));
        }
        for a in ring.elements() {
            for b in ring.elements() {
                let (ma, mb) = (&images[a.index()], &images[b.index()]);
                if images[ring.add(a, b).index()] != ma.add(mb, &field)
                    || images[ring.mul(a, b).index()] != ma.mul(mb, &field)
                {
                    return Err(Error::NotHomomorphism(format!("representation fails at ({a}, {b})")));
                }
            }
        }
        let distinct: std::collections::HashSet<&Mat> = images.iter().collect();
        let faithful = distinct.len() == images.len();

        let mut h = DefaultHasher::new();
        field.modulus().hash(&mut h);
        field.characteristic().hash(&mut h);
        ring.order().hash(&mut h);
        ring.basis().hash(&mut h);
        images.hash(&mut h);
        let fingerprint = h.finish();
        Ok(Representation { ring, field, dim, images, faithful, kind, fingerprint })
    }

    /// `U = K^d` with `u·a = u·mat(a)`.
    pub fn natural(ring: &Arc<FiniteRing>) -> Self {
        let images = ring.elements().map(|a| ring.matrix(a).clone()).collect();
        Self::from_images(ring.clone(), ring.field().clone(), images, RepKind::Natural)
            .expect("the defining realization is a representation")
    }

    /// `U = R` as a left vector space over the embedded field `F`, with `R`
    /// acting by right multiplication. The scalar field of `U` is `F`.
    pub fn regular(emb: &SubfieldEmbedding) -> Result<Self> {
        let ring = emb.ring();
        let f = emb.field();
        let span = |gens: &[RingElem]| -> Vec<RingElem> {
            let products: Vec<RingElem> =
                gens.iter().flat_map(|&g| f.elements().map(move |x| (x, g))).map(|(x, g)| ring.mul(emb.apply(x), g)).collect();
            ring.additive_span(&products)
        };

        let mut basis: Vec<RingElem> = Vec::new();
        let mut covered = vec![false; ring.order()];
        covered[0] = true;
        for r in ring.elements() {
            if covered[r.index()] {
                continue;
            }
            basis.push(r);
            for s in span(&basis) {
                covered[s.index()] = true;
            }
        }
        let d = basis.len();
        if f.order().pow(d as u32) != ring.order() {
            return Err(Error::Internal("ring is not free over the embedded field".into()));
        }

        let mut coords: Vec<Option<Vec<FieldElem>>> = vec![None; ring.order()];
        for code in 0..ring.order() as u64 {
            let x = crate::linalg::vector_from_code(code, d, f.order());
            let elem = x
                .iter()
                .zip(&basis)
                .fold(ring.zero(), |acc, (&xi, &bi)| ring.add(acc, ring.mul(emb.apply(xi), bi)));
            coords[elem.index()] = Some(x);
        }
        let images = ring
            .elements()
            .map(|r| {
                let rows: Vec<Vec<FieldElem>> = basis
                    .iter()
                    .map(|&b| coords[ring.mul(b, r).index()].clone().expect("coordinates cover the ring"))
                    .collect();
                Mat::from_rows(&rows, d)
            })
            .collect();
        Self::from_images(ring.clone(), f.clone(), images, RepKind::Regular)
    }

    /// `φ(k) = k^α · I_d` on the field ring of `K`.
    pub fn basis(field: &Arc<FiniteField>, dim: usize, alpha: FieldAut) -> Result<Self> {
        Self::diagonal(field, &vec![alpha; dim])
    }

    /// `φ(k) = diag(k^{α_1}, …, k^{α_d})` on the field ring of `K`.
    pub fn diagonal(field: &Arc<FiniteField>, auts: &[FieldAut]) -> Result<Self> {
        if auts.is_empty() {
            return Err(Error::InvalidArgument("the zero module is excluded".into()));
        }
        let ring = FiniteRing::field_ring(field);
        let images = field
            .elements()
            .map(|k| {
                let mut m = Mat::zeros(auts.len(), auts.len());
                for (i, a) in auts.iter().enumerate() {
                    m[(i, i)] = a.apply(field, k);
                }
                m
            })
            .collect();
        let kind = RepKind::Diagonal(auts.to_vec());
        Self::from_images(ring, field.clone(), images, kind)
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &RepKind {
        &self.kind
    }

    pub fn is_faithful(&self) -> bool {
        self.faithful
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn phi(&self, a: RingElem) -> &Mat {
        &self.images[a.index()]
    }

    /// `u·a`.
    pub fn act(&self, u: &[FieldElem], a: RingElem) -> Vec<FieldElem> {
        self.phi(a).apply_row(u, &self.field)
    }

    pub fn phi_image(&self, line: &ProjectiveLine, p: PointId) -> Subspace {
        let (a, b) = line.rep(p);
        Subspace::from_rows(&self.phi(a).hcat(self.phi(b)), &self.field)
    }

    /// `Φ` on every point of the standard chain `ℙ(F)`, in point order.
    pub fn standard_chain_images(&self, line: &ProjectiveLine, emb: &SubfieldEmbedding) -> Result<Vec<(PointId, Subspace)>> {
        self.check_compatible(line, emb)?;
        let chain = standard_chain(line, emb)?;
        Ok(chain.points().iter().map(|&p| (p, self.phi_image(line, p))).collect())
    }

    /// The induced representation of the field ring of `F`.
    pub fn of_subfield(&self, emb: &SubfieldEmbedding) -> Result<Self> {
        if **emb.ring() != *self.ring {
            return Err(Error::InvalidArgument("embedding targets a different ring".into()));
        }
        let f = emb.field();
        let images = f.elements().map(|x| self.phi(emb.apply(x)).clone()).collect();
        Self::from_images(FiniteRing::field_ring(f), self.field.clone(), images, RepKind::Custom)
    }

    /// Restriction to an invariant subspace given by an echelon basis; the
    /// new coordinates are read off at the pivot columns.
    pub fn restrict(&self, sub: &Subspace) -> Result<Self> {
        let f = &self.field;
        let b = sub.basis();
        let pivots: Vec<usize> =
            (0..b.rows()).map(|i| b.row(i).iter().position(|x| !x.is_zero()).expect("echelon rows are nonzero")).collect();
        let mut images = Vec::with_capacity(self.ring.order());
        for a in self.ring.elements() {
            let moved = b.mul(self.phi(a), f);
            let coords: Vec<Vec<FieldElem>> =
                (0..moved.rows()).map(|i| pivots.iter().map(|&c| moved[(i, c)]).collect()).collect();
            let c = Mat::from_rows(&coords, b.rows());
            if c.mul(b, f) != moved {
                return Err(Error::InvalidArgument("subspace is not invariant".into()));
            }
            images.push(c);
        }
        Self::from_images(self.ring.clone(), f.clone(), images, RepKind::Custom)
    }

    pub(crate) fn check_compatible(&self, line: &ProjectiveLine, emb: &SubfieldEmbedding) -> Result<()> {
        if **line.ring() != *self.ring || **emb.ring() != *self.ring {
            return Err(Error::InvalidArgument("line, embedding and representation use different rings".into()));
        }
        Ok(())
    }
}

pub fn natural_rep(ring: &Arc<FiniteRing>) -> Representation {
    Representation::natural(ring)
}

pub fn regular_rep(emb: &SubfieldEmbedding) -> Result<Representation> {
    Representation::regular(emb)
}

pub fn basis_rep(field: &Arc<FiniteField>, dim: usize, alpha: FieldAut) -> Result<Representation> {
    Representation::basis(field, dim, alpha)
}

pub fn phi_image(rep: &Representation, line: &ProjectiveLine, p: PointId) -> Subspace {
    rep.phi_image(line, p)
}

/// Projective points of `U` as normalized vectors, guarded by the cap.
pub(crate) fn points_of_u(rep: &Representation) -> Result<Vec<Vec<FieldElem>>> {
    let count = crate::linalg::projective_point_count(rep.dim(), rep.field().order());
    if count > PROJECTIVE_POINT_CAP {
        return Err(Error::CapExceeded {
            what: "projective points of U",
            limit: PROJECTIVE_POINT_CAP as usize,
            requested: count as usize,
        });
    }
    Ok(crate::linalg::projective_points(rep.dim(), rep.field()))
}
