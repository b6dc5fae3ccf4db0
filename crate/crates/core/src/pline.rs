//! The projective line over a finite ring, the distant relation, and the
//! chains of a generalized chain geometry.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::linalg::Mat;
use crate::rings::{gl2_generators, FiniteRing, RingElem, RingMat2, SubfieldEmbedding};
use crate::{Error, Result};

pub const DEFAULT_PAIR_CAP: usize = 1_000_000;
pub const DEFAULT_CHAIN_CAP: usize = 100_000;

const NO_POINT: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointId(pub(crate) u32);

impl PointId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A point `R(a, b)` with its canonical representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Point {
    pub id: PointId,
    pub rep: (RingElem, RingElem),
}

/// `ℙ(R)`: one canonical pair per unit orbit of admissible pairs.
#[derive(Clone, Debug)]
pub struct ProjectiveLine {
    ring: Arc<FiniteRing>,
    reps: Vec<(RingElem, RingElem)>,
    lookup: Vec<u32>,
}

/// Whether `aR + bR = R`. For finite rings this is the same as `(a, b)`
/// being the first row of an invertible matrix.
pub fn is_unimodular(ring: &FiniteRing, a: RingElem, b: RingElem) -> bool {
    let k = ring.field();
    let d2 = ring.dim() * ring.dim();
    let rows: Vec<Vec<_>> = [a, b]
        .iter()
        .flat_map(|&x| ring.basis().iter().map(move |bi| ring.matrix(x).mul(bi, k).data().to_vec()))
        .collect();
    Mat::from_rows(&rows, d2).rank(k) == ring.rank_over_field()
}

pub fn enumerate_points(ring: &Arc<FiniteRing>) -> Result<ProjectiveLine> {
    ProjectiveLine::new(ring, DEFAULT_PAIR_CAP)
}

impl ProjectiveLine {
    /// Scans pairs in lexicographic index order; the first unassigned
    /// admissible pair of each unit orbit is its least element and becomes the
    /// representative.
    pub fn new(ring: &Arc<FiniteRing>, pair_cap: usize) -> Result<Self> {
        let n = ring.order();
        let pairs = n * n;
        if pairs > pair_cap {
            return Err(Error::CapExceeded { what: "pair enumeration", limit: pair_cap, requested: pairs });
        }
        let mut lookup = vec![NO_POINT; pairs];
        let mut reps = Vec::new();
        for a in ring.elements() {
            for b in ring.elements() {
                if lookup[a.index() * n + b.index()] != NO_POINT || !is_unimodular(ring, a, b) {
                    continue;
                }
                let id = reps.len() as u32;
                reps.push((a, b));
                for &u in ring.units() {
                    let (ua, ub) = (ring.mul(u, a), ring.mul(u, b));
                    lookup[ua.index() * n + ub.index()] = id;
                }
            }
        }
        Ok(ProjectiveLine { ring: ring.clone(), reps, lookup })
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = PointId> + Clone {
        (0..self.reps.len() as u32).map(PointId)
    }

    pub fn rep(&self, p: PointId) -> (RingElem, RingElem) {
        self.reps[p.index()]
    }

    pub fn point(&self, p: PointId) -> Point {
        Point { id: p, rep: self.rep(p) }
    }

    /// The point generated by an admissible pair, or `None` if the pair is not
    /// admissible.
    pub fn point_of(&self, a: RingElem, b: RingElem) -> Option<PointId> {
        let id = self.lookup[a.index() * self.ring.order() + b.index()];
        (id != NO_POINT).then_some(PointId(id))
    }

    pub fn expect_point(&self, a: RingElem, b: RingElem) -> PointId {
        self.point_of(a, b).expect("pair is admissible")
    }

    /// `R(1, 0)`.
    pub fn e0(&self) -> PointId {
        self.expect_point(self.ring.one(), self.ring.zero())
    }

    /// `R(0, 1)`.
    pub fn zero_e(&self) -> PointId {
        self.expect_point(self.ring.zero(), self.ring.one())
    }

    /// `R(1, 1)`.
    pub fn ee(&self) -> PointId {
        self.expect_point(self.ring.one(), self.ring.one())
    }

    pub fn base_points(&self) -> [PointId; 3] {
        [self.e0(), self.zero_e(), self.ee()]
    }

    /// The cyclic submodule `R(a, b)` as a sorted list of pairs.
    pub fn submodule(&self, a: RingElem, b: RingElem) -> Vec<(RingElem, RingElem)> {
        let r = &self.ring;
        let mut out: Vec<_> = r.elements().map(|x| (r.mul(x, a), r.mul(x, b))).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Distant iff the matrix stacking both representatives is invertible.
    pub fn is_distant(&self, p: PointId, q: PointId) -> bool {
        let (a, b) = self.rep(p);
        let (c, d) = self.rep(q);
        self.ring.mat2_is_invertible(&[a, b, c, d])
    }

    /// Image of a point under `g ∈ GL_2(R)` acting on row vectors.
    pub fn apply(&self, g: &RingMat2, p: PointId) -> PointId {
        let (a, b) = self.ring.row_times(self.rep(p), g);
        self.expect_point(a, b)
    }

    pub fn permutation(&self, g: &RingMat2) -> Vec<PointId> {
        self.ids().map(|p| self.apply(g, p)).collect()
    }

    /// The points `R(A, E + AB)` for all `A, B ∈ R`.
    pub fn normal_form_points(&self) -> Vec<PointId> {
        let r = &self.ring;
        let mut out: Vec<PointId> = r
            .elements()
            .flat_map(|a| r.elements().map(move |b| (a, b)))
            .filter_map(|(a, b)| self.point_of(a, r.add(r.one(), r.mul(a, b))))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// For each point, some `(A, B)` with `p = R(A, E + AB)`.
    pub fn normal_form_table(&self) -> Vec<Option<(RingElem, RingElem)>> {
        let r = &self.ring;
        let mut table = vec![None; self.len()];
        for a in r.elements() {
            for b in r.elements() {
                if let Some(p) = self.point_of(a, r.add(r.one(), r.mul(a, b))) {
                    table[p.index()].get_or_insert((a, b));
                }
            }
        }
        table
    }

    /// Graphviz rendering of the distant graph.
    pub fn distant_graph_dot(&self) -> String {
        let mut out = String::from("graph distant {\n");
        for p in self.ids() {
            let _ = writeln!(out, "  p{};", p.0);
        }
        for p in self.ids() {
            for q in self.ids().filter(|q| *q > p) {
                if self.is_distant(p, q) {
                    let _ = writeln!(out, "  p{} -- p{};", p.0, q.0);
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

pub fn is_distant(line: &ProjectiveLine, p: PointId, q: PointId) -> bool {
    line.is_distant(p, q)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    points: Vec<PointId>,
    witness: RingMat2,
}

impl Chain {
    pub fn points(&self) -> &[PointId] {
        &self.points
    }

    /// A matrix mapping the standard chain onto this one.
    pub fn witness(&self) -> &RingMat2 {
        &self.witness
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: PointId) -> bool {
        self.points.binary_search(&p).is_ok()
    }
}

/// `ℙ(F)` inside `ℙ(R)`: `R(1, 0)` together with `R(x, 1)` for `x ∈ F`.
pub fn standard_chain(line: &ProjectiveLine, emb: &SubfieldEmbedding) -> Result<Chain> {
    if **line.ring() != **emb.ring() {
        return Err(Error::InvalidArgument("embedding and projective line use different rings".into()));
    }
    let r = line.ring();
    let mut points: Vec<PointId> = std::iter::once(line.e0())
        .chain(emb.field().elements().map(|x| line.expect_point(emb.apply(x), r.one())))
        .collect();
    points.sort();
    points.dedup();
    Ok(Chain { points, witness: r.mat2_identity() })
}

/// Breadth-first orbit of the standard chain under the generators of
/// `GL_2(R)`, each chain stored once.
pub fn enumerate_chains(line: &ProjectiveLine, emb: &SubfieldEmbedding, cap: usize) -> Result<Vec<Chain>> {
    let r = line.ring();
    let start = standard_chain(line, emb)?;
    let gens: Vec<RingMat2> = gl2_generators(r).into_iter().skip(1).collect();
    let perms: Vec<Vec<PointId>> = gens.iter().map(|g| line.permutation(g)).collect();

    let mut seen: HashMap<Vec<PointId>, usize> = HashMap::from([(start.points.clone(), 0)]);
    let mut chains = vec![start];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for (g, perm) in gens.iter().zip(&perms) {
            let mut image: Vec<PointId> = chains[i].points.iter().map(|p| perm[p.index()]).collect();
            image.sort();
            if seen.contains_key(&image) {
                continue;
            }
            if chains.len() >= cap {
                return Err(Error::PartialOrbit { what: "chains", limit: cap, found: chains.len() });
            }
            let witness = r.mat2_mul(&chains[i].witness, g);
            seen.insert(image.clone(), chains.len());
            queue.push_back(chains.len());
            chains.push(Chain { points: image, witness });
        }
    }
    Ok(chains)
}

/// The chains through three pairwise distant points.
pub fn chains_through<'a>(line: &ProjectiveLine, points: [PointId; 3], chains: &'a [Chain]) -> Result<Vec<&'a Chain>> {
    let [p, q, s] = points;
    if !(line.is_distant(p, q) && line.is_distant(p, s) && line.is_distant(q, s)) {
        return Err(Error::NotDistant);
    }
    Ok(chains.iter().filter(|c| points.iter().all(|&x| c.contains(x))).collect())
}

/// `Σ(F, R)` with its chain set enumerated.
#[derive(Clone, Debug)]
pub struct ChainGeometry {
    line: ProjectiveLine,
    emb: SubfieldEmbedding,
    chains: Vec<Chain>,
    by_point: Vec<Vec<usize>>,
}

impl ChainGeometry {
    pub fn build(emb: &SubfieldEmbedding, chain_cap: usize) -> Result<Self> {
        let line = ProjectiveLine::new(emb.ring(), DEFAULT_PAIR_CAP)?;
        Self::from_line(line, emb, chain_cap)
    }

    pub fn from_line(line: ProjectiveLine, emb: &SubfieldEmbedding, chain_cap: usize) -> Result<Self> {
        let chains = enumerate_chains(&line, emb, chain_cap)?;
        let mut by_point = vec![Vec::new(); line.len()];
        for (i, c) in chains.iter().enumerate() {
            for p in c.points() {
                by_point[p.index()].push(i);
            }
        }
        Ok(ChainGeometry { line, emb: emb.clone(), chains, by_point })
    }

    pub fn line(&self) -> &ProjectiveLine {
        &self.line
    }

    pub fn embedding(&self) -> &SubfieldEmbedding {
        &self.emb
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn standard_chain(&self) -> &Chain {
        &self.chains[0]
    }

    pub fn chain_size(&self) -> usize {
        self.emb.field().order() + 1
    }

    pub fn chains_at(&self, p: PointId) -> &[usize] {
        &self.by_point[p.index()]
    }

    /// Index of a chain containing every point of `set`, if any.
    pub fn chain_containing(&self, set: &[PointId]) -> Option<usize> {
        let first = *set.first()?;
        self.chains_at(first).iter().copied().find(|&i| set.iter().all(|&p| self.chains[i].contains(p)))
    }

    pub fn find_chain(&self, points: &[PointId]) -> Option<usize> {
        let mut sorted = points.to_vec();
        sorted.sort();
        self.chain_containing(&sorted).filter(|&i| self.chains[i].points == sorted)
    }
}
