use std::collections::{BTreeMap, BTreeSet};

use chaingeom::descriptor::{parse_geometry, RepDescriptor};
use chaingeom::pline::enumerate_points;
use chaingeom::representation::{
    geometric_weak_transversals, is_cyclic_submodule, is_sub_bimodule, is_transversal, projectively_linked,
    regulus_verdict, verify_direct_sum, weak_transversals, RegulusVerdict, Representation, TransversalKind,
};
use chaingeom::{FieldElem, FiniteField, ProjectiveLine, RingElem, Subspace, SubfieldEmbedding};

type Vector = Vec<FieldElem>;
type VecSet = BTreeSet<Vector>;

fn add(k: &FiniteField, x: &[FieldElem], y: &[FieldElem]) -> Vector {
    x.iter().zip(y).map(|(&a, &b)| k.add(a, b)).collect()
}

fn scale(k: &FiniteField, c: FieldElem, x: &[FieldElem]) -> Vector {
    x.iter().map(|&a| k.mul(c, a)).collect()
}

/// Closure of `{0}` under adding multiples of the generators.
fn span(k: &FiniteField, gens: &[Vector], n: usize) -> VecSet {
    let mut set: VecSet = [vec![FieldElem::ZERO; n]].into();
    for g in gens {
        let mut next = VecSet::new();
        for s in &set {
            for c in k.elements() {
                next.insert(add(k, s, &scale(k, c, g)));
            }
        }
        set = next;
    }
    set
}

fn all_vectors(k: &FiniteField, n: usize) -> Vec<Vector> {
    let q = k.order();
    (0..q.pow(n as u32))
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let e = k.elem(code % q);
                    code /= q;
                    e
                })
                .collect()
        })
        .collect()
}

fn proj_points(k: &FiniteField, n: usize) -> Vec<Vector> {
    all_vectors(k, n)
        .into_iter()
        .filter(|v| v.iter().find(|x| !x.is_zero()) == Some(&k.one()))
        .collect()
}

/// All 2-dimensional subspaces of `K^n`.
fn all_lines(k: &FiniteField, n: usize) -> BTreeSet<VecSet> {
    let pts = proj_points(k, n);
    let mut out = BTreeSet::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            out.insert(span(k, &[pts[i].clone(), pts[j].clone()], n));
        }
    }
    out
}

fn as_set(s: &Subspace, k: &FiniteField) -> VecSet {
    let rows: Vec<Vector> = (0..s.dim()).map(|i| s.basis().row(i).to_vec()).collect();
    span(k, &rows, s.ambient())
}

/// `u·φ(a)`, multiplied out entry by entry.
fn act(rep: &Representation, u: &[FieldElem], a: RingElem) -> Vector {
    let k = rep.field();
    let m = rep.phi(a);
    (0..rep.dim())
        .map(|j| (0..rep.dim()).fold(FieldElem::ZERO, |acc, i| k.add(acc, k.mul(u[i], m[(i, j)]))))
        .collect()
}

/// `{(u·a, u·b) : u ∈ U}`.
fn image_oracle(rep: &Representation, a: RingElem, b: RingElem) -> VecSet {
    all_vectors(rep.field(), rep.dim())
        .iter()
        .map(|u| act(rep, u, a).into_iter().chain(act(rep, u, b)).collect())
        .collect()
}

fn standard_images(rep: &Representation, line: &ProjectiveLine, emb: &SubfieldEmbedding) -> Vec<VecSet> {
    let images = rep.standard_chain_images(line, emb).unwrap();
    let k = rep.field();
    images
        .iter()
        .map(|(p, s)| {
            let (a, b) = line.rep(*p);
            let oracle = image_oracle(rep, a, b);
            assert_eq!(as_set(s, k), oracle, "image of {p:?}");
            oracle
        })
        .collect()
}

fn meets_in_one_point(a: &VecSet, b: &VecSet, q: usize) -> bool {
    a.intersection(b).count() == q
}

/// For a common eigenvector `u` of `φ(F)`, the table `y ↦ λ` with `u·y = λu`.
fn eigen_table(rep: &Representation, emb: &SubfieldEmbedding, u: &[FieldElem]) -> Option<Vec<FieldElem>> {
    let k = rep.field();
    let j = u.iter().position(|x| !x.is_zero())?;
    emb.field()
        .elements()
        .map(|y| {
            let v = act(rep, u, emb.apply(y));
            let lambda = k.mul(v[j], k.inv(u[j]).unwrap());
            (v == scale(k, lambda, u)).then_some(lambda)
        })
        .collect()
}

fn ku_line(rep: &Representation, u: &[FieldElem]) -> VecSet {
    let z = vec![FieldElem::ZERO; rep.dim()];
    let a: Vector = u.iter().copied().chain(z.iter().copied()).collect();
    let b: Vector = z.iter().copied().chain(u.iter().copied()).collect();
    span(rep.field(), &[a, b], 2 * rep.dim())
}

struct Case {
    ring: &'static str,
    field: &'static str,
    embed: &'static str,
    rep: &'static str,
}

const fn case(ring: &'static str, field: &'static str, embed: &'static str, rep: &'static str) -> Case {
    Case { ring, field, embed, rep }
}

const CASES: &[Case] = &[
    case("m2:gf(2)", "gf(2)", "scalar", "natural"),
    case("m2:gf(3)", "gf(3)", "scalar", "natural"),
    case("m2:gf(4)", "gf(4)", "scalar", "natural"),
    case("prod2:gf(2)", "gf(2)", "scalar", "regular"),
    case("dual:gf(2)", "gf(2)", "scalar", "regular"),
    case("ut2:gf(2)", "gf(2)", "scalar", "natural"),
    case("gf(4)", "gf(4)", "scalar", "basis:frob^1:2"),
    case("gf(4)", "gf(4)", "scalar", "diag:frob^0,frob^1"),
    case("gf(4)", "gf(2)", "scalar", "basis:frob^0:2"),
    case("m2:gf(2)", "gf(4)", "regular", "natural"),
    case("m2:gf(3)", "gf(9)", "regular", "natural"),
];

fn build(c: &Case) -> (SubfieldEmbedding, ProjectiveLine, Representation) {
    let emb = parse_geometry(c.ring, c.field, c.embed).unwrap();
    let line = enumerate_points(emb.ring()).unwrap();
    let rep = c.rep.parse::<RepDescriptor>().unwrap().build(&emb).unwrap();
    (emb, line, rep)
}

#[test]
fn weak_transversals_match_line_enumeration() {
    for c in CASES {
        let (emb, line, rep) = build(c);
        let k = rep.field();
        let q = k.order();
        let d = rep.dim();
        let images = standard_images(&rep, &line, &emb);
        let label = format!("{} / {} / {}", c.ring, c.field, c.rep);

        let lines_of_uu = all_lines(k, 2 * d);
        // every line of U × U meeting each image in one point
        let oracle: BTreeSet<VecSet> =
            lines_of_uu.iter().filter(|t| images.iter().all(|s| meets_in_one_point(s, t, q))).cloned().collect();

        // lines meeting the three base images already have the shape Ku × Ku
        let base: Vec<VecSet> = line
            .base_points()
            .iter()
            .map(|&p| {
                let (a, b) = line.rep(p);
                image_oracle(&rep, a, b)
            })
            .collect();
        let ku_lines: BTreeSet<VecSet> = proj_points(k, d).iter().map(|u| ku_line(&rep, u)).collect();
        for t in &lines_of_uu {
            if base.iter().all(|s| meets_in_one_point(s, t, q)) {
                assert!(ku_lines.contains(t), "{label}: base transversal not of shape Ku × Ku");
            }
        }

        let eigen: BTreeMap<Vector, Vec<FieldElem>> =
            proj_points(k, d).into_iter().filter_map(|u| eigen_table(&rep, &emb, &u).map(|t| (u, t))).collect();
        let eigen_lines: BTreeSet<VecSet> = eigen.keys().map(|u| ku_line(&rep, u)).collect();
        assert_eq!(oracle, eigen_lines, "{label}: eigenvector lines");

        let geometric: BTreeSet<VecSet> =
            geometric_weak_transversals(&rep, &line, &emb).unwrap().iter().map(|t| as_set(t, k)).collect();
        assert_eq!(geometric, oracle, "{label}: geometric search");

        let records = weak_transversals(&rep, &emb).unwrap();
        let analytic: BTreeSet<VecSet> = records.iter().map(|t| as_set(&t.line(&rep), k)).collect();
        assert_eq!(analytic, oracle, "{label}: analytic search");

        let lib_images: Vec<Subspace> =
            rep.standard_chain_images(&line, &emb).unwrap().into_iter().map(|(_, s)| s).collect();
        for t in &records {
            assert!(is_sub_bimodule(&rep, &emb, &t.u));
            let table = &eigen[&t.u];
            let surjective = table.iter().collect::<BTreeSet<_>>().len() == q;
            let covered = {
                let line_set = ku_line(&rep, &t.u);
                line_set.iter().all(|v| images.iter().any(|s| s.contains(v)))
            };
            assert_eq!(t.kind == TransversalKind::Full, surjective, "{label}");
            assert_eq!(t.alpha.is_surjective(), surjective, "{label}");
            assert_eq!(is_cyclic_submodule(&rep, &emb, &t.u), surjective, "{label}");
            assert_eq!(is_transversal(&t.line(&rep), &lib_images, k), covered, "{label}");
            assert_eq!(covered, surjective, "{label}");
        }
        for v in proj_points(k, d) {
            assert_eq!(is_sub_bimodule(&rep, &emb, &v), eigen.contains_key(&v), "{label}");
        }
        // any two weak transversals are skew
        let lines: Vec<&VecSet> = oracle.iter().collect();
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                assert_eq!(lines[i].intersection(lines[j]).count(), 1, "{label}");
            }
        }
    }
}

/// Regulus through three pairwise skew lines, by line enumeration.
fn synthetic_regulus(k: &FiniteField, l: [&VecSet; 3]) -> Option<BTreeSet<VecSet>> {
    let q = k.order();
    let all = all_lines(k, 4);
    if (0..3).any(|i| (i + 1..3).any(|j| l[i].intersection(l[j]).count() != 1)) {
        return None;
    }
    let trans: Vec<&VecSet> = all.iter().filter(|t| l.iter().all(|s| meets_in_one_point(s, t, q))).collect();
    assert_eq!(trans.len(), q + 1);
    Some(all.iter().filter(|m| trans.iter().all(|t| meets_in_one_point(m, t, q))).cloned().collect())
}

fn expected_verdict(rep: &Representation, emb: &SubfieldEmbedding) -> RegulusVerdict {
    let k = rep.field();
    let q = k.order();
    let eig: Vec<(Vector, Vec<FieldElem>)> = proj_points(k, rep.dim())
        .into_iter()
        .filter_map(|u| eigen_table(rep, emb, &u).map(|t| (u, t)))
        .filter(|(_, t)| emb.field().order() == q && t.iter().collect::<BTreeSet<_>>().len() == q)
        .collect();
    let spanned = span(k, &eig.iter().map(|(u, _)| u.clone()).collect::<Vec<_>>(), rep.dim());
    if spanned.len() != q.pow(rep.dim() as u32) {
        return RegulusVerdict::Neither;
    }
    let tables: BTreeSet<&Vec<FieldElem>> = eig.iter().map(|(_, t)| t).collect();
    if tables.len() == 1 {
        RegulusVerdict::Regulus
    } else {
        RegulusVerdict::QuasiRegulus
    }
}

#[test]
fn regulus_verdicts_match_oracles() {
    let mut synthetic_checked = 0;
    for c in CASES {
        let (emb, line, rep) = build(c);
        let label = format!("{} / {} / {}", c.ring, c.field, c.rep);
        let cert = regulus_verdict(&rep, &line, &emb).unwrap();
        assert_eq!(cert.verdict, expected_verdict(&rep, &emb), "{label}");
        if rep.dim() != 2 {
            continue;
        }
        let k = rep.field();
        let images = standard_images(&rep, &line, &emb);
        let base: Vec<VecSet> = line
            .base_points()
            .iter()
            .map(|&p| {
                let (a, b) = line.rep(p);
                image_oracle(&rep, a, b)
            })
            .collect();
        let img: BTreeSet<VecSet> = images.into_iter().collect();
        let is_regulus = synthetic_regulus(k, [&base[0], &base[1], &base[2]]).is_some_and(|reg| reg == img);
        assert_eq!(cert.synthetic_regulus, Some(is_regulus), "{label}");
        assert_eq!(cert.verdict == RegulusVerdict::Regulus, is_regulus, "{label}");
        synthetic_checked += 1;
    }
    assert!(synthetic_checked >= 6);
}

#[test]
fn linkage_by_automorphism_matches_projectivity() {
    for c in CASES {
        let (emb, line, rep) = build(c);
        let full: Vec<_> =
            weak_transversals(&rep, &emb).unwrap().into_iter().filter(|t| t.kind == TransversalKind::Full).collect();
        for t1 in &full {
            for t2 in &full {
                let l = projectively_linked(&rep, &line, &emb, t1, t2).unwrap();
                assert_eq!(l.by_automorphism, l.by_projectivity, "{} / {}", c.ring, c.rep);
            }
        }
    }
}

#[test]
fn twisted_diagonal_splits_into_two_reguli() {
    let emb = parse_geometry("gf(4)", "gf(4)", "scalar").unwrap();
    let line = enumerate_points(emb.ring()).unwrap();
    let rep = "diag:frob^0,frob^0,frob^1,frob^1".parse::<RepDescriptor>().unwrap().build(&emb).unwrap();
    let k = rep.field();
    let cert = regulus_verdict(&rep, &line, &emb).unwrap();
    assert_eq!(cert.verdict, RegulusVerdict::QuasiRegulus);
    assert_eq!(cert.classes.len(), 2);

    // eigenspaces by brute force, grouped by eigenvalue table
    let mut spaces: BTreeMap<Vec<FieldElem>, Vec<Vector>> = BTreeMap::new();
    for u in all_vectors(k, 4).into_iter().filter(|u| u.iter().any(|x| !x.is_zero())) {
        if let Some(t) = eigen_table(&rep, &emb, &u) {
            spaces.entry(t).or_default().push(u);
        }
    }
    assert_eq!(spaces.len(), 2);
    let doubled: Vec<VecSet> = spaces
        .values()
        .map(|us| {
            let zero = vec![FieldElem::ZERO; 4];
            let gens: Vec<Vector> = us
                .iter()
                .flat_map(|u| {
                    [u.iter().chain(&zero).copied().collect(), zero.iter().chain(u).copied().collect()]
                })
                .collect();
            span(k, &gens, 8)
        })
        .collect();
    assert!(doubled.iter().all(|w| w.len() == 4usize.pow(4)));
    assert_eq!(doubled[0].intersection(&doubled[1]).count(), 1);
    for img in standard_images(&rep, &line, &emb) {
        let t0: Vec<&Vector> = img.intersection(&doubled[0]).collect();
        let t1: Vec<&Vector> = img.intersection(&doubled[1]).collect();
        assert_eq!((t0.len(), t1.len()), (4usize.pow(2), 4usize.pow(2)));
        let sums: VecSet = t0.iter().flat_map(|x| t1.iter().map(|y| add(k, x, y))).collect();
        assert_eq!(sums, img);
    }
    let report = verify_direct_sum(&rep, &line, &emb, &cert).unwrap();
    assert_eq!((report.dimension_sum, report.ambient), (4, 4));
    assert!(report.holds(), "{report:?}");
}

#[test]
fn centralizing_basis_iff_regular_image_is_regulus() {
    let mut cases = Vec::new();
    for q in ["gf(2)", "gf(3)"] {
        for r in ["m2", "dual", "ut2", "prod2"] {
            cases.push((format!("{r}:{q}"), q.to_string(), "scalar"));
        }
    }
    cases.push(("m2:gf(2)".into(), "gf(4)".into(), "regular"));
    cases.push(("m2:gf(3)".into(), "gf(9)".into(), "regular"));
    for (ring, field, mode) in &cases {
        let emb = parse_geometry(ring, field, mode).unwrap();
        let r = emb.ring();
        // F is central in R iff its centralizer is everything
        let central = r.elements().all(|x| emb.image().iter().all(|&f| r.mul(x, f) == r.mul(f, x)));
        assert_eq!(emb.has_centralizing_basis(), central, "{ring} / {field}");
        let line = enumerate_points(r).unwrap();
        let rep = Representation::regular(&emb).unwrap();
        let verdict = regulus_verdict(&rep, &line, &emb).unwrap().verdict;
        assert_eq!(verdict == RegulusVerdict::Regulus, central, "{ring} / {field}");
    }
}

#[test]
fn distant_iff_complementary_images() {
    let emb = parse_geometry("m2:gf(2)", "gf(2)", "scalar").unwrap();
    let line = enumerate_points(emb.ring()).unwrap();
    let rep = Representation::natural(emb.ring());
    let images: Vec<VecSet> = line
        .ids()
        .map(|p| {
            let (a, b) = line.rep(p);
            image_oracle(&rep, a, b)
        })
        .collect();
    for p in line.ids() {
        for q in line.ids() {
            let trivial = images[p.index()].intersection(&images[q.index()]).count() == 1;
            assert_eq!(line.is_distant(p, q), trivial);
        }
    }
}

#[test]
fn images_do_not_depend_on_representatives() {
    for (ring, mode) in [("m2:gf(2)", "natural"), ("dual:gf(3)", "regular"), ("ut2:gf(2)", "natural")] {
        let field = if ring.ends_with("gf(3)") { "gf(3)" } else { "gf(2)" };
        let emb = parse_geometry(ring, field, "scalar").unwrap();
        let line = enumerate_points(emb.ring()).unwrap();
        let rep = mode.parse::<RepDescriptor>().unwrap().build(&emb).unwrap();
        let r = emb.ring();
        for p in line.ids() {
            let lib = as_set(&rep.phi_image(&line, p), rep.field());
            let (a, b) = line.rep(p);
            for &u in r.units() {
                assert_eq!(image_oracle(&rep, r.mul(u, a), r.mul(u, b)), lib, "{ring}");
            }
        }
    }
}
