//! String descriptors for fields, rings, embeddings, representations and
//! automorphisms.
//!
//! Fields are written `gf(9)` or `gf(3^2)`; rings `m2:gf(3)`, `dual:gf(2)`,
//! `prod2:gf(3)`, `ut2:gf(2)` or a bare field for the field itself.
//! Canonical output always uses `gf(q)`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::algebra::{make_field, FieldAut, FiniteField};
use crate::representation::Representation;
use crate::rings::{EmbedMode, FiniteRing, RingKind, SubfieldEmbedding};
use crate::{Error, Result};

fn invalid(s: &str) -> Error {
    Error::InvalidDescriptor(s.to_string())
}

/// `(p, n)` from `gf(q)` or `gf(p^n)`.
pub fn parse_field_order(s: &str) -> Result<(u32, u32)> {
    let t = s.trim().to_ascii_lowercase();
    let inner = t.strip_prefix("gf(").and_then(|r| r.strip_suffix(')')).ok_or_else(|| invalid(s))?;
    if let Some((p, n)) = inner.split_once('^') {
        let p: u32 = p.trim().parse().map_err(|_| invalid(s))?;
        let n: u32 = n.trim().parse().map_err(|_| invalid(s))?;
        if n == 0 {
            return Err(invalid(s));
        }
        return Ok((p, n));
    }
    let q: u64 = inner.trim().parse().map_err(|_| invalid(s))?;
    prime_power(q).ok_or_else(|| invalid(s))
}

fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut m, mut n) = (q, 0);
    while m % p == 0 {
        m /= p;
        n += 1;
    }
    (m == 1).then_some((p as u32, n))
}

pub fn parse_field(s: &str) -> Result<Arc<FiniteField>> {
    let (p, n) = parse_field_order(s)?;
    make_field(p, n)
}

pub fn field_descriptor(f: &FiniteField) -> String {
    format!("gf({})", f.order())
}

pub fn parse_ring(s: &str) -> Result<Arc<FiniteRing>> {
    let t = s.trim().to_ascii_lowercase();
    let Some((kind, field)) = t.split_once(':') else {
        return Ok(FiniteRing::field_ring(&parse_field(&t)?));
    };
    let k = parse_field(field)?;
    if kind == "dual" {
        return FiniteRing::dual_numbers(&k);
    }
    if kind == "ut2" {
        return FiniteRing::upper_triangular(&k);
    }
    let sized = |prefix: &str| -> Option<usize> { kind.strip_prefix(prefix)?.parse().ok().filter(|&n| n >= 1) };
    if let Some(n) = sized("m") {
        return if n == 1 { Ok(FiniteRing::field_ring(&k)) } else { FiniteRing::matrix_ring(n, &k) };
    }
    if let Some(m) = sized("prod") {
        return FiniteRing::product_ring(&k, m);
    }
    Err(invalid(s))
}

pub fn ring_descriptor(r: &FiniteRing) -> String {
    let k = field_descriptor(r.field());
    match r.kind() {
        RingKind::MatrixRing { n: 1 } => k,
        RingKind::MatrixRing { n } => format!("m{n}:{k}"),
        RingKind::DualNumbers => format!("dual:{k}"),
        RingKind::ProductRing { m } => format!("prod{m}:{k}"),
        RingKind::UpperTriangular => format!("ut2:{k}"),
        RingKind::Custom => format!("custom:{k}"),
    }
}

pub fn parse_embed_mode(s: &str) -> Result<EmbedMode> {
    match s.trim().to_ascii_lowercase().as_str() {
        "scalar" => Ok(EmbedMode::Scalar),
        "regular" => Ok(EmbedMode::Regular),
        _ => Err(invalid(s)),
    }
}

/// `frob^i`, `id`, or a bare exponent `i`, reduced modulo the degree of `field`.
pub fn parse_aut(s: &str, field: &FiniteField) -> Result<FieldAut> {
    let t = s.trim().to_ascii_lowercase();
    let power = match t.as_str() {
        "id" | "identity" => 0,
        _ => t.strip_prefix("frob^").unwrap_or(&t).parse::<u32>().map_err(|_| invalid(s))?,
    };
    Ok(field.aut(power % field.degree()))
}

pub fn aut_descriptor(a: FieldAut) -> String {
    format!("frob^{}", a.power())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepDescriptor {
    Natural,
    Regular,
    /// `φ(k) = k^α·I_dim` on a field ring.
    Basis { power: u32, dim: usize },
    /// `φ(k) = diag(k^{α_1}, …)` on a field ring.
    Diagonal(Vec<u32>),
}

impl FromStr for RepDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let exponent = |x: &str| -> Result<u32> {
            let x = x.trim();
            match x {
                "id" | "identity" => Ok(0),
                _ => x.strip_prefix("frob^").unwrap_or(x).parse().map_err(|_| invalid(s)),
            }
        };
        match t.as_str() {
            "natural" => return Ok(RepDescriptor::Natural),
            "regular" => return Ok(RepDescriptor::Regular),
            _ => {}
        }
        if let Some(rest) = t.strip_prefix("basis:") {
            let (alpha, dim) = match rest.split_once(':') {
                Some((a, d)) => (a, d.trim().parse::<usize>().map_err(|_| invalid(s))?),
                None => (rest, 2),
            };
            if dim == 0 {
                return Err(invalid(s));
            }
            return Ok(RepDescriptor::Basis { power: exponent(alpha)?, dim });
        }
        if let Some(rest) = t.strip_prefix("diag:") {
            let powers = rest.split(',').map(exponent).collect::<Result<Vec<u32>>>()?;
            return Ok(RepDescriptor::Diagonal(powers));
        }
        Err(invalid(s))
    }
}

impl fmt::Display for RepDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepDescriptor::Natural => f.write_str("natural"),
            RepDescriptor::Regular => f.write_str("regular"),
            RepDescriptor::Basis { power, dim } => write!(f, "basis:frob^{power}:{dim}"),
            RepDescriptor::Diagonal(ps) => {
                let parts: Vec<String> = ps.iter().map(|p| format!("frob^{p}")).collect();
                write!(f, "diag:{}", parts.join(","))
            }
        }
    }
}

impl RepDescriptor {
    /// Builds the representation of `emb.ring()`; the twisted kinds need the
    /// ring to be a field.
    pub fn build(&self, emb: &SubfieldEmbedding) -> Result<Representation> {
        let ring = emb.ring();
        let twisted_field = || -> Result<&Arc<FiniteField>> {
            if ring.kind() == (RingKind::MatrixRing { n: 1 }) {
                Ok(ring.field())
            } else {
                Err(Error::InvalidDescriptor(format!("{self} needs a field as ring, got {}", ring_descriptor(ring))))
            }
        };
        match self {
            RepDescriptor::Natural => Ok(Representation::natural(ring)),
            RepDescriptor::Regular => Representation::regular(emb),
            RepDescriptor::Basis { power, dim } => {
                let k = twisted_field()?;
                Representation::basis(k, *dim, k.aut(power % k.degree()))
            }
            RepDescriptor::Diagonal(ps) => {
                let k = twisted_field()?;
                let auts: Vec<FieldAut> = ps.iter().map(|p| k.aut(p % k.degree())).collect();
                Representation::diagonal(k, &auts)
            }
        }
    }
}

/// Parses ring, field and embedding mode and builds the embedding.
pub fn parse_geometry(ring: &str, field: &str, embed: &str) -> Result<SubfieldEmbedding> {
    let r = parse_ring(ring)?;
    let f = parse_field(field)?;
    let mode = parse_embed_mode(embed)?;
    crate::rings::embed_subfield(&f, &r, mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_descriptors() {
        assert_eq!(parse_field_order("gf(9)").unwrap(), (3, 2));
        assert_eq!(parse_field_order("GF(3^2)").unwrap(), (3, 2));
        assert_eq!(parse_field_order("gf(2)").unwrap(), (2, 1));
        for bad in ["gf(6)", "gf(1)", "gf(x)", "f(4)", "gf(4", "gf(2^0)"] {
            assert!(matches!(parse_field_order(bad), Err(Error::InvalidDescriptor(_))), "{bad}");
        }
        assert_eq!(field_descriptor(&parse_field("gf(2^2)").unwrap()), "gf(4)");
    }

    #[test]
    fn ring_descriptors_round_trip() {
        for s in ["m2:gf(3)", "dual:gf(2)", "prod2:gf(3)", "ut2:gf(2)", "gf(4)", "m3:gf(2)"] {
            let r = parse_ring(s).unwrap();
            assert_eq!(ring_descriptor(&r), s);
        }
        assert_eq!(ring_descriptor(&parse_ring("m1:gf(5)").unwrap()), "gf(5)");
        for bad in ["m0:gf(2)", "foo:gf(2)", "m2:gf(6)", "m2"] {
            assert!(parse_ring(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn rep_descriptors() {
        assert_eq!("natural".parse::<RepDescriptor>().unwrap(), RepDescriptor::Natural);
        assert_eq!("basis:1".parse::<RepDescriptor>().unwrap(), RepDescriptor::Basis { power: 1, dim: 2 });
        assert_eq!("basis:frob^1:4".parse::<RepDescriptor>().unwrap(), RepDescriptor::Basis { power: 1, dim: 4 });
        assert_eq!("diag:0,0,1,1".parse::<RepDescriptor>().unwrap(), RepDescriptor::Diagonal(vec![0, 0, 1, 1]));
        for s in ["basis:frob^1:4", "diag:frob^0,frob^1", "natural", "regular"] {
            let d: RepDescriptor = s.parse().unwrap();
            assert_eq!(d.to_string().parse::<RepDescriptor>().unwrap(), d);
        }
        assert!("basis:x".parse::<RepDescriptor>().is_err());
        assert!("basis:1:0".parse::<RepDescriptor>().is_err());
    }

    #[test]
    fn twisted_reps_need_a_field() {
        let emb = parse_geometry("m2:gf(2)", "gf(2)", "scalar").unwrap();
        assert!(RepDescriptor::Basis { power: 0, dim: 2 }.build(&emb).is_err());
        let emb = parse_geometry("gf(4)", "gf(4)", "scalar").unwrap();
        let rep = RepDescriptor::Basis { power: 1, dim: 2 }.build(&emb).unwrap();
        assert_eq!(rep.dim(), 2);
    }

    #[test]
    fn auts() {
        let f = parse_field("gf(8)").unwrap();
        assert_eq!(parse_aut("frob^4", &f).unwrap(), f.aut(1));
        assert_eq!(parse_aut("id", &f).unwrap(), f.identity_aut());
        assert_eq!(aut_descriptor(f.aut(2)), "frob^2");
        assert!(parse_aut("frob^", &f).is_err());
    }
}
