mod common;

use std::collections::BTreeSet;

use chaingeom::descriptor::parse_geometry;
use chaingeom::pline::{chains_through, ChainGeometry, DEFAULT_CHAIN_CAP};
use chaingeom::representation::{spread_check, Representation, SpreadClass};
use chaingeom::{PointId, SubfieldEmbedding};
use common::{gl2, point_index, submodule};

/// Chains as images of the standard chain under every invertible matrix.
fn chains_oracle(emb: &SubfieldEmbedding, geom: &ChainGeometry) -> BTreeSet<Vec<PointId>> {
    let r = emb.ring();
    let index = point_index(geom.line());
    let f = emb.field();
    let mut std_pairs = vec![(emb.apply(f.one()), emb.apply(f.zero()))];
    std_pairs.extend(f.elements().map(|x| (emb.apply(x), emb.apply(f.one()))));
    let mut out = BTreeSet::new();
    for g in gl2(r) {
        let mut pts: Vec<PointId> = std_pairs
            .iter()
            .map(|&(a, b)| {
                let (x, y) = r.row_times((a, b), &g);
                index[&submodule(r, x, y)]
            })
            .collect();
        pts.sort();
        out.insert(pts);
    }
    out
}

#[test]
fn chain_sets_match_full_group_images() {
    for (ring, field, mode) in [
        ("m2:gf(2)", "gf(2)", "scalar"),
        ("m2:gf(2)", "gf(4)", "regular"),
        ("dual:gf(2)", "gf(2)", "scalar"),
        ("prod2:gf(2)", "gf(2)", "scalar"),
        ("ut2:gf(2)", "gf(2)", "scalar"),
    ] {
        let emb = parse_geometry(ring, field, mode).unwrap();
        let geom = ChainGeometry::build(&emb, DEFAULT_CHAIN_CAP).unwrap();
        let lib: BTreeSet<Vec<PointId>> = geom.chains().iter().map(|c| c.points().to_vec()).collect();
        assert_eq!(lib.len(), geom.chains().len(), "duplicate chains for {ring}");
        assert_eq!(lib, chains_oracle(&emb, &geom), "{ring} over {field}");
    }
}

#[test]
fn distant_iff_joined_by_a_chain() {
    for (ring, field, mode) in [("m2:gf(2)", "gf(4)", "regular"), ("dual:gf(3)", "gf(3)", "scalar")] {
        let emb = parse_geometry(ring, field, mode).unwrap();
        let geom = ChainGeometry::build(&emb, DEFAULT_CHAIN_CAP).unwrap();
        let line = geom.line();
        for p in line.ids() {
            for q in line.ids().filter(|&q| q != p) {
                assert_eq!(line.is_distant(p, q), geom.chain_containing(&[p, q]).is_some());
            }
        }
    }
}

/// `g⁻¹ F* g ⊆ F*` for every unit `g`, checked on matrices.
fn normal_in_units(emb: &SubfieldEmbedding) -> bool {
    let r = emb.ring();
    r.units().iter().all(|&g| {
        let gi = r.inv(g).unwrap();
        emb.image().iter().skip(1).all(|&f| emb.contains(r.mul(r.mul(gi, f), g)))
    })
}

#[test]
fn gf4_in_m2_gf2() {
    let emb = parse_geometry("m2:gf(2)", "gf(4)", "regular").unwrap();
    assert!(normal_in_units(&emb));
    assert!(emb.is_normal_subgroup());
    let geom = ChainGeometry::build(&emb, DEFAULT_CHAIN_CAP).unwrap();
    let through = chains_through(geom.line(), geom.line().base_points(), geom.chains()).unwrap();
    assert_eq!(through.len(), 1);
    let rep = Representation::natural(emb.ring());
    for c in geom.chains() {
        assert_eq!(spread_check(&rep, geom.line(), c).unwrap(), SpreadClass::RegularSpread);
    }
}

#[test]
fn gf9_in_m2_gf3() {
    let emb = parse_geometry("m2:gf(3)", "gf(9)", "regular").unwrap();
    assert!(!normal_in_units(&emb));
    assert!(!emb.is_normal_subgroup());
    let geom = ChainGeometry::build(&emb, DEFAULT_CHAIN_CAP).unwrap();
    assert_eq!(geom.chain_size(), 10);
    let through = chains_through(geom.line(), geom.line().base_points(), geom.chains()).unwrap();
    assert!(through.len() > 1);
    let rep = Representation::natural(emb.ring());
    for c in geom.chains().iter().step_by(7) {
        assert_eq!(spread_check(&rep, geom.line(), c).unwrap(), SpreadClass::RegularSpread);
    }
}

#[test]
fn scalar_chains_are_reguli_not_spreads() {
    let emb = parse_geometry("m2:gf(3)", "gf(3)", "scalar").unwrap();
    let geom = ChainGeometry::build(&emb, DEFAULT_CHAIN_CAP).unwrap();
    let rep = Representation::natural(emb.ring());
    assert_eq!(spread_check(&rep, geom.line(), geom.standard_chain()).unwrap(), SpreadClass::NotSpread);
}
