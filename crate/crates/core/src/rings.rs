//! Finite unital rings realized as subalgebras of `M(d, K)`.
//!
//! Every ring is enumerated once at construction: elements get dense indices
//! (coordinates over the K-basis read as base-`q` digits) and addition,
//! multiplication and inversion become table lookups.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::algebra::{homomorphisms, FieldElem, FiniteField};
use crate::linalg::Mat;
use crate::{Error, Result};

/// Largest ring order for which multiplication tables are built.
pub const MAX_RING_ORDER: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RingElem(pub(crate) u32);

impl RingElem {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.0)
    }
}

/// A 2×2 matrix over a ring, row-major `[a, b, c, d]`.
pub type RingMat2 = [RingElem; 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    MatrixRing { n: usize },
    DualNumbers,
    ProductRing { m: usize },
    UpperTriangular,
    Custom,
}

impl fmt::Display for RingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingKind::MatrixRing { n } => write!(f, "matrix_ring({n})"),
            RingKind::DualNumbers => write!(f, "dual_numbers"),
            RingKind::ProductRing { m } => write!(f, "product_ring({m})"),
            RingKind::UpperTriangular => write!(f, "upper_triangular"),
            RingKind::Custom => write!(f, "custom"),
        }
    }
}

pub struct FiniteRing {
    field: Arc<FiniteField>,
    dim: usize,
    basis: Vec<Mat>,
    kind: RingKind,
    elems: Vec<Mat>,
    index: HashMap<Mat, RingElem>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inverse: Vec<Option<RingElem>>,
    units: Vec<RingElem>,
    one: RingElem,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteRing")
            .field("kind", &self.kind)
            .field("field", &self.field)
            .field("dim", &self.dim)
            .field("order", &self.order())
            .finish()
    }
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.dim == other.dim && self.basis == other.basis
    }
}

impl Eq for FiniteRing {}

fn unit_matrix(d: usize, i: usize, j: usize) -> Mat {
    let mut m = Mat::zeros(d, d);
    m[(i, j)] = FieldElem::ONE;
    m
}

impl FiniteRing {
    /// Builds the K-span of `basis` inside `M(d, K)`, checking linear
    /// independence, multiplicative closure and that the identity lies in it.
    pub fn from_basis(field: Arc<FiniteField>, basis: Vec<Mat>, kind: RingKind) -> Result<Arc<FiniteRing>> {
        let dim = basis.first().map(Mat::rows).ok_or_else(|| Error::NotSubring("empty basis".into()))?;
        if basis.iter().any(|b| b.rows() != dim || b.cols() != dim) {
            return Err(Error::NotSubring("basis matrices must all be d×d".into()));
        }
        let q = field.order();
        let order = q
            .checked_pow(basis.len() as u32)
            .filter(|&o| o <= MAX_RING_ORDER)
            .ok_or(Error::CapExceeded {
                what: "ring order",
                limit: MAX_RING_ORDER,
                requested: q.saturating_pow(basis.len() as u32),
            })?;
        let flat = Mat::from_rows(&basis.iter().map(|b| b.data().to_vec()).collect::<Vec<_>>(), dim * dim);
        if flat.rank(&field) != basis.len() {
            return Err(Error::NotSubring("basis is linearly dependent".into()));
        }

        let elems: Vec<Mat> = (0..order)
            .map(|mut e| {
                let mut m = Mat::zeros(dim, dim);
                for b in &basis {
                    let c = field.elem(e % q);
                    e /= q;
                    if !c.is_zero() {
                        m = m.add(&b.scale(c, &field), &field);
                    }
                }
                m
            })
            .collect();
        let index: HashMap<Mat, RingElem> =
            elems.iter().enumerate().map(|(i, m)| (m.clone(), RingElem(i as u32))).collect();

        for a in &basis {
            for b in &basis {
                if !index.contains_key(&a.mul(b, &field)) {
                    return Err(Error::NotSubring("basis products leave the span".into()));
                }
            }
        }
        let one = *index
            .get(&Mat::identity(dim))
            .ok_or_else(|| Error::NotSubring("identity matrix is not in the span".into()))?;

        let lookup = |m: &Mat| -> Result<u32> {
            index.get(m).map(|r| r.0).ok_or_else(|| Error::Internal("closure violated while tabulating".into()))
        };
        let mut add = vec![0u32; order * order];
        let mut mul = vec![0u32; order * order];
        for a in 0..order {
            for b in 0..order {
                add[a * order + b] = lookup(&elems[a].add(&elems[b], &field))?;
                mul[a * order + b] = lookup(&elems[a].mul(&elems[b], &field))?;
            }
        }
        let neg = elems.iter().map(|m| lookup(&m.neg(&field))).collect::<Result<Vec<_>>>()?;

        let mut inverse = vec![None; order];
        for a in 0..order {
            if let Some(inv) = elems[a].inverse(&field) {
                inverse[a] = match index.get(&inv) {
                    Some(&r) => Some(r),
                    // Unreachable for subalgebras (the inverse is a polynomial in
                    // the element), kept as an exhaustive fallback.
                    None => (0..order)
                        .find(|&b| mul[a * order + b] == one.0 && mul[b * order + a] == one.0)
                        .map(|b| RingElem(b as u32)),
                };
            }
        }
        let units = (0..order).filter(|&a| inverse[a].is_some()).map(|a| RingElem(a as u32)).collect();

        Ok(Arc::new(FiniteRing { field, dim, basis, kind, elems, index, add, mul, neg, inverse, units, one }))
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    /// Size `d` of the realizing matrices.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    /// Dimension of the ring as a K-vector space.
    pub fn rank_over_field(&self) -> usize {
        self.basis.len()
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = RingElem> + Clone {
        (0..self.elems.len() as u32).map(RingElem)
    }

    pub fn elem(&self, index: usize) -> RingElem {
        assert!(index < self.order());
        RingElem(index as u32)
    }

    pub fn zero(&self) -> RingElem {
        RingElem(0)
    }

    pub fn one(&self) -> RingElem {
        self.one
    }

    pub fn matrix(&self, a: RingElem) -> &Mat {
        &self.elems[a.index()]
    }

    pub fn from_matrix(&self, m: &Mat) -> Option<RingElem> {
        self.index.get(m).copied()
    }

    /// `k·E` for `k ∈ K`.
    pub fn scalar(&self, k: FieldElem) -> RingElem {
        self.from_matrix(&Mat::scalar(self.dim, k)).expect("scalars lie in every ring containing E")
    }

    #[inline]
    pub fn add(&self, a: RingElem, b: RingElem) -> RingElem {
        RingElem(self.add[a.index() * self.order() + b.index()])
    }

    #[inline]
    pub fn mul(&self, a: RingElem, b: RingElem) -> RingElem {
        RingElem(self.mul[a.index() * self.order() + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: RingElem) -> RingElem {
        RingElem(self.neg[a.index()])
    }

    pub fn sub(&self, a: RingElem, b: RingElem) -> RingElem {
        self.add(a, self.neg(b))
    }

    pub fn is_unit(&self, a: RingElem) -> bool {
        self.inverse[a.index()].is_some()
    }

    pub fn inv(&self, a: RingElem) -> Option<RingElem> {
        self.inverse[a.index()]
    }

    pub fn units(&self) -> &[RingElem] {
        &self.units
    }

    pub fn is_commutative(&self) -> bool {
        self.basis.iter().all(|a| self.basis.iter().all(|b| a.mul(b, &self.field) == b.mul(a, &self.field)))
    }

    /// All `r` with `rs = sr` for every `s` in `set`.
    pub fn centralizer(&self, set: &[RingElem]) -> Vec<RingElem> {
        self.elements().filter(|&r| set.iter().all(|&s| self.mul(r, s) == self.mul(s, r))).collect()
    }

    pub fn center(&self) -> Vec<RingElem> {
        let all: Vec<RingElem> = self.elements().collect();
        self.centralizer(&all)
    }

    /// Additive closure of a set of elements.
    pub fn additive_span(&self, gens: &[RingElem]) -> Vec<RingElem> {
        let mut seen = vec![false; self.order()];
        let mut out = vec![self.zero()];
        seen[0] = true;
        let mut queue = VecDeque::from([self.zero()]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.add(x, g);
                if !std::mem::replace(&mut seen[y.index()], true) {
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort();
        out
    }

    // 2×2 matrices over the ring.

    pub fn mat2_identity(&self) -> RingMat2 {
        [self.one, self.zero(), self.zero(), self.one]
    }

    pub fn mat2_diag(&self, a: RingElem, d: RingElem) -> RingMat2 {
        [a, self.zero(), self.zero(), d]
    }

    pub fn mat2_mul(&self, g: &RingMat2, h: &RingMat2) -> RingMat2 {
        let dot = |a: RingElem, b: RingElem, c: RingElem, d: RingElem| self.add(self.mul(a, b), self.mul(c, d));
        [
            dot(g[0], h[0], g[1], h[2]),
            dot(g[0], h[1], g[1], h[3]),
            dot(g[2], h[0], g[3], h[2]),
            dot(g[2], h[1], g[3], h[3]),
        ]
    }

    /// Row vector `(a, b)` times `g`.
    pub fn row_times(&self, (a, b): (RingElem, RingElem), g: &RingMat2) -> (RingElem, RingElem) {
        (
            self.add(self.mul(a, g[0]), self.mul(b, g[2])),
            self.add(self.mul(a, g[1]), self.mul(b, g[3])),
        )
    }

    /// The `2d × 2d` block matrix over K.
    pub fn mat2_flatten(&self, g: &RingMat2) -> Mat {
        let d = self.dim;
        let mut m = Mat::zeros(2 * d, 2 * d);
        for (k, &x) in g.iter().enumerate() {
            m.set_block((k / 2) * d, (k % 2) * d, self.matrix(x));
        }
        m
    }

    pub fn mat2_is_invertible(&self, g: &RingMat2) -> bool {
        self.mat2_flatten(g).rank(&self.field) == 2 * self.dim
    }

    /// Inverse in `GL_2(R)`: invert the flattening over K and read the blocks
    /// back, requiring each to lie in `R`.
    pub fn mat2_inverse(&self, g: &RingMat2) -> Option<RingMat2> {
        let d = self.dim;
        let inv = self.mat2_flatten(g).inverse(&self.field)?;
        let block = |i: usize, j: usize| self.from_matrix(&inv.block(i * d, j * d, d, d));
        Some([block(0, 0)?, block(0, 1)?, block(1, 0)?, block(1, 1)?])
    }

    /// Every invertible 2×2 matrix over the ring, by direct test of all
    /// `|R|^4` candidates.
    pub fn invertible_mat2_exhaustive(&self) -> Result<Vec<RingMat2>> {
        let n = self.order();
        let total = n.checked_pow(4).unwrap_or(usize::MAX);
        if total > 1 << 20 {
            return Err(Error::CapExceeded { what: "2x2 matrix enumeration", limit: 1 << 20, requested: total });
        }
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                for c in self.elements() {
                    for d in self.elements() {
                        let g = [a, b, c, d];
                        if self.mat2_is_invertible(&g) {
                            out.push(g);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn matrix_ring(n: usize, field: &Arc<FiniteField>) -> Result<Arc<FiniteRing>> {
        if n == 0 {
            return Err(Error::InvalidArgument("matrix size must be positive".into()));
        }
        let basis = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| unit_matrix(n, i, j)).collect();
        FiniteRing::from_basis(field.clone(), basis, RingKind::MatrixRing { n })
    }

    /// The field itself as a ring of 1×1 matrices; element indices agree
    /// with field element indices.
    pub fn field_ring(field: &Arc<FiniteField>) -> Arc<FiniteRing> {
        FiniteRing::matrix_ring(1, field).expect("a field within the field cap fits the ring cap")
    }

    /// `K(ε) = K + Kε`, realized as `[[a, b], [0, a]]`.
    pub fn dual_numbers(field: &Arc<FiniteField>) -> Result<Arc<FiniteRing>> {
        let eps = unit_matrix(2, 0, 1);
        FiniteRing::from_basis(field.clone(), vec![Mat::identity(2), eps], RingKind::DualNumbers)
    }

    /// `K^m` as diagonal matrices.
    pub fn product_ring(field: &Arc<FiniteField>, m: usize) -> Result<Arc<FiniteRing>> {
        if m == 0 {
            return Err(Error::InvalidArgument("product of zero copies".into()));
        }
        let basis = (0..m).map(|i| unit_matrix(m, i, i)).collect();
        FiniteRing::from_basis(field.clone(), basis, RingKind::ProductRing { m })
    }

    /// Upper triangular 2×2 matrices.
    pub fn upper_triangular(field: &Arc<FiniteField>) -> Result<Arc<FiniteRing>> {
        let basis = vec![unit_matrix(2, 0, 0), unit_matrix(2, 0, 1), unit_matrix(2, 1, 1)];
        FiniteRing::from_basis(field.clone(), basis, RingKind::UpperTriangular)
    }

    /// The `ε` of a dual-number ring.
    pub fn epsilon(&self) -> Option<RingElem> {
        (self.kind == RingKind::DualNumbers).then(|| self.from_matrix(&unit_matrix(2, 0, 1)).expect("ε in ring"))
    }
}

pub fn is_unit(r: &FiniteRing, a: RingElem) -> bool {
    r.is_unit(a)
}

pub fn units(r: &FiniteRing) -> Vec<RingElem> {
    r.units().to_vec()
}

pub fn centralizer(set: &[RingElem], r: &FiniteRing) -> Vec<RingElem> {
    r.centralizer(set)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EmbedMode {
    /// `F = K` as the scalar matrices.
    Scalar,
    /// `F = GF(q^n)` inside `M(n, GF(q))` through a companion matrix.
    Regular,
}

impl fmt::Display for EmbedMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EmbedMode::Scalar => "scalar",
            EmbedMode::Regular => "regular",
        })
    }
}

/// A verified unital monomorphism `F → R`.
#[derive(Clone, Debug)]
pub struct SubfieldEmbedding {
    field: Arc<FiniteField>,
    ring: Arc<FiniteRing>,
    image: Vec<RingElem>,
    preimage: HashMap<RingElem, FieldElem>,
    mode: EmbedMode,
}

impl SubfieldEmbedding {
    pub fn from_image(
        field: Arc<FiniteField>,
        ring: Arc<FiniteRing>,
        image: Vec<RingElem>,
        mode: EmbedMode,
    ) -> Result<Self> {
        if image.len() != field.order() {
            return Err(Error::InvalidArgument("embedding table has wrong length".into()));
        }
        if image[1] != ring.one() || image[0] != ring.zero() {
            return Err(Error::NotHomomorphism("embedding is not unital".into()));
        }
        for a in field.elements() {
            for b in field.elements() {
                let (ia, ib) = (image[a.index()], image[b.index()]);
                if image[field.add(a, b).index()] != ring.add(ia, ib)
                    || image[field.mul(a, b).index()] != ring.mul(ia, ib)
                {
                    return Err(Error::NotHomomorphism(format!("embedding fails at ({a}, {b})")));
                }
            }
        }
        let preimage: HashMap<RingElem, FieldElem> = field.elements().map(|x| (image[x.index()], x)).collect();
        if preimage.len() != field.order() {
            return Err(Error::NotHomomorphism("embedding is not injective".into()));
        }
        Ok(SubfieldEmbedding { field, ring, image, preimage, mode })
    }

    /// `F` as scalar matrices; when `F` is a proper subfield of `K` it goes in
    /// through the first monomorphism `F → K`.
    pub fn scalar(field: &Arc<FiniteField>, ring: &Arc<FiniteRing>) -> Result<Self> {
        let k = ring.field();
        let image = if **field == **k {
            field.elements().map(|x| ring.scalar(x)).collect()
        } else {
            let h = crate::algebra::homomorphisms(field, k).into_iter().next().ok_or_else(|| {
                Error::IncompatibleFields(format!("scalar embedding needs F inside K, got F = {field}, K = {k}"))
            })?;
            field.elements().map(|x| ring.scalar(h.apply(x))).collect()
        };
        Self::from_image(field.clone(), ring.clone(), image, EmbedMode::Scalar)
    }

    /// Embeds `F = GF(q^n)` into `M(n, GF(q))`, sending the ring generator of
    /// `F` to the companion matrix of its minimal polynomial over `K`.
    pub fn regular(field: &Arc<FiniteField>, ring: &Arc<FiniteRing>) -> Result<Self> {
        let k = ring.field();
        let RingKind::MatrixRing { n } = ring.kind() else {
            return Err(Error::IncompatibleFields("regular embedding needs a full matrix ring".into()));
        };
        if field.characteristic() != k.characteristic() || field.degree() as usize != n * k.degree() as usize {
            return Err(Error::IncompatibleFields(format!("{field} does not have degree {n} over {k}")));
        }
        let iota = homomorphisms(k, field)
            .into_iter()
            .next()
            .ok_or_else(|| Error::IncompatibleFields(format!("{k} does not embed in {field}")))?;
        let back: HashMap<FieldElem, FieldElem> = k.elements().map(|x| (iota.apply(x), x)).collect();

        // Minimal polynomial over K: product of (X - θ^(q^j)), j < n, in F[X].
        let theta = field.ring_generator();
        let q_deg = k.degree();
        let mut minpoly = vec![field.one()];
        for j in 0..n as u32 {
            let root = field.frobenius(theta, j * q_deg);
            let mut next = vec![field.zero(); minpoly.len() + 1];
            for (i, &c) in minpoly.iter().enumerate() {
                next[i + 1] = field.add(next[i + 1], c);
                next[i] = field.sub(next[i], field.mul(c, root));
            }
            minpoly = next;
        }
        let coeffs: Vec<FieldElem> = minpoly
            .iter()
            .map(|c| back.get(c).copied())
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Internal("minimal polynomial has coefficients outside K".into()))?;

        let mut companion = Mat::zeros(n, n);
        for i in 0..n.saturating_sub(1) {
            companion[(i, i + 1)] = k.one();
        }
        for j in 0..n {
            companion[(n - 1, j)] = k.neg(coeffs[j]);
        }
        let powers: Vec<Mat> = (0..field.degree() as usize)
            .scan(Mat::identity(n), |acc, _| {
                let cur = acc.clone();
                *acc = acc.mul(&companion, k);
                Some(cur)
            })
            .collect();
        let image = field
            .elements()
            .map(|y| {
                let m = field
                    .coeffs(y)
                    .iter()
                    .zip(&powers)
                    .fold(Mat::zeros(n, n), |acc, (&c, pw)| acc.add(&pw.scale(k.from_int(c as i64), k), k));
                ring.from_matrix(&m).ok_or_else(|| Error::Internal("companion power outside ring".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_image(field.clone(), ring.clone(), image, EmbedMode::Regular)
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn mode(&self) -> EmbedMode {
        self.mode
    }

    pub fn apply(&self, x: FieldElem) -> RingElem {
        self.image[x.index()]
    }

    pub fn image(&self) -> &[RingElem] {
        &self.image
    }

    pub fn preimage(&self, r: RingElem) -> Option<FieldElem> {
        self.preimage.get(&r).copied()
    }

    pub fn contains(&self, r: RingElem) -> bool {
        self.preimage.contains_key(&r)
    }

    /// Whether `r f r⁻¹ ∈ F` for all units `r` and nonzero `f ∈ F`.
    pub fn is_normal_subgroup(&self) -> bool {
        let r = &self.ring;
        r.units().iter().all(|&u| {
            let u_inv = r.inv(u).expect("units are invertible");
            self.field.nonzero_elements().all(|f| self.contains(r.mul(r.mul(u, self.apply(f)), u_inv)))
        })
    }

    /// Whether the left F-span of the centralizer of `F` is all of `R`.
    pub fn has_centralizing_basis(&self) -> bool {
        let r = &self.ring;
        let z = r.centralizer(&self.image);
        let products: Vec<RingElem> = self
            .field
            .nonzero_elements()
            .flat_map(|f| z.iter().map(move |&c| (f, c)))
            .map(|(f, c)| r.mul(self.apply(f), c))
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        r.additive_span(&products).len() == r.order()
    }
}

pub fn embed_subfield(field: &Arc<FiniteField>, ring: &Arc<FiniteRing>, mode: EmbedMode) -> Result<SubfieldEmbedding> {
    match mode {
        EmbedMode::Scalar => SubfieldEmbedding::scalar(field, ring),
        EmbedMode::Regular => SubfieldEmbedding::regular(field, ring),
    }
}

/// Elementary transvections for every ring element and diagonal unit
/// matrices; the identity comes first.
pub fn gl2_generators(r: &FiniteRing) -> Vec<RingMat2> {
    let (zero, one) = (r.zero(), r.one());
    let mut gens = vec![r.mat2_identity()];
    gens.extend(r.elements().filter(|&x| x != zero).map(|x| [one, x, zero, one]));
    gens.extend(r.elements().filter(|&x| x != zero).map(|x| [one, zero, x, one]));
    gens.extend(r.units().iter().filter(|&&u| u != one).map(|&u| r.mat2_diag(u, one)));
    gens.extend(r.units().iter().filter(|&&u| u != one).map(|&u| r.mat2_diag(one, u)));
    gens
}

/// The group generated by `gens`, by breadth-first closure.
pub fn group_closure(r: &FiniteRing, gens: &[RingMat2], cap: usize) -> Result<HashSet<RingMat2>> {
    let id = r.mat2_identity();
    let mut seen = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for h in gens {
            let gh = r.mat2_mul(&g, h);
            if seen.insert(gh) {
                if seen.len() > cap {
                    return Err(Error::PartialOrbit { what: "group elements", limit: cap, found: seen.len() });
                }
                queue.push_back(gh);
            }
        }
    }
    Ok(seen)
}
