//! Brute-force helpers shared by the integration tests. Everything here
//! works on raw indices and prime-field arithmetic so it does not lean on
//! the library's own linear algebra.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use chaingeom::{FiniteRing, RingElem};

/// Determinant of a square matrix over `GF(p)` by elimination.
pub fn det_mod_p(mut m: Vec<Vec<u32>>, p: u32) -> u32 {
    let n = m.len();
    let mut det = 1u64;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if piv != col {
            m.swap(piv, col);
            det = (p as u64 - det % p as u64) % p as u64;
        }
        let pv = m[col][col];
        det = det * pv as u64 % p as u64;
        let inv = (1..p).find(|x| x * pv % p == 1).unwrap();
        for r in col + 1..n {
            let factor = m[r][col] * inv % p;
            if factor == 0 {
                continue;
            }
            for c in col..n {
                m[r][c] = (m[r][c] + p * p - factor * m[col][c] % p) % p;
            }
        }
    }
    det as u32
}

/// Entries of a ring element as integers; valid for prime fields only.
pub fn entries(r: &FiniteRing, a: RingElem) -> Vec<Vec<u32>> {
    let m = r.matrix(a);
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)].index() as u32).collect()).collect()
}

/// Invertibility of `[[a, b], [c, d]]` over `R` through the determinant of
/// the block matrix over the prime field.
pub fn invertible(r: &FiniteRing, g: [RingElem; 4]) -> bool {
    let p = r.field().characteristic();
    assert_eq!(r.field().degree(), 1, "oracle needs a prime field");
    let blocks: Vec<Vec<Vec<u32>>> = g.iter().map(|&x| entries(r, x)).collect();
    let d = blocks[0].len();
    let mut big = vec![vec![0u32; 2 * d]; 2 * d];
    for (k, b) in blocks.iter().enumerate() {
        let (r0, c0) = ((k / 2) * d, (k % 2) * d);
        for i in 0..d {
            for j in 0..d {
                big[r0 + i][c0 + j] = b[i][j];
            }
        }
    }
    det_mod_p(big, p) != 0
}

/// Every invertible 2×2 matrix over `R`.
pub fn gl2(r: &FiniteRing) -> Vec<[RingElem; 4]> {
    let els: Vec<RingElem> = r.elements().collect();
    let mut out = Vec::new();
    for &a in &els {
        for &b in &els {
            for &c in &els {
                for &d in &els {
                    if invertible(r, [a, b, c, d]) {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

pub type Submodule = BTreeSet<(RingElem, RingElem)>;

/// `R(a, b)` as a set.
pub fn submodule(r: &FiniteRing, a: RingElem, b: RingElem) -> Submodule {
    r.elements().map(|x| (r.mul(x, a), r.mul(x, b))).collect()
}

/// Points of `ℙ(R)` as submodules generated by first rows of invertible
/// matrices.
pub fn points_oracle(r: &FiniteRing) -> BTreeSet<Submodule> {
    let els: Vec<RingElem> = r.elements().collect();
    let mut out = BTreeSet::new();
    for &a in &els {
        for &b in &els {
            if els.iter().any(|&c| els.iter().any(|&d| invertible(r, [a, b, c, d]))) {
                out.insert(submodule(r, a, b));
            }
        }
    }
    out
}

/// Index from submodule to the library's point ids.
pub fn point_index(line: &chaingeom::ProjectiveLine) -> HashMap<Submodule, chaingeom::PointId> {
    line.ids()
        .map(|p| {
            let (a, b) = line.rep(p);
            (submodule(line.ring(), a, b), p)
        })
        .collect()
}
