//! The subcommands. Each builds a [`Certificate`]; the text report is
//! rendered from the certificate alone.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use chaingeom::descriptor::{field_descriptor, parse_geometry, parse_ring, ring_descriptor, RepDescriptor};
use chaingeom::morphisms::{make_fundamental, make_fundamental_unchecked, verify_morphism};
use chaingeom::pline::{enumerate_points, DEFAULT_CHAIN_CAP};
use chaingeom::representation::{is_cyclic_submodule, regulus_verdict, spread_check, weak_transversals};
use chaingeom::{ChainGeometry, Error, FieldAut, FieldHom, Mat, SpreadClass, TransversalKind};

use crate::certificate::*;
use crate::suite::{run_suite, SuiteOptions};
use crate::CliError;

pub struct GeometryArgs {
    pub ring: String,
    pub field: String,
    pub embed: String,
}

pub struct AnalyzeArgs {
    pub geometry: GeometryArgs,
    pub rep: String,
    pub cap: Option<usize>,
    pub timings: bool,
    pub seed: u64,
}

pub struct MorphismArgs {
    pub source: GeometryArgs,
    pub target: GeometryArgs,
    pub kappa: String,
    pub h1: String,
    pub omega: Option<String>,
    pub strict: bool,
    pub force: bool,
}

fn build_geometry(g: &GeometryArgs, cap: Option<usize>) -> Result<ChainGeometry, CliError> {
    let emb = parse_geometry(&g.ring, &g.field, &g.embed)?;
    Ok(ChainGeometry::build(&emb, cap.unwrap_or(DEFAULT_CHAIN_CAP))?)
}

fn geometry_info(g: &ChainGeometry) -> GeometryInfo {
    let emb = g.embedding();
    GeometryInfo {
        ring: ring_descriptor(emb.ring()),
        field: field_descriptor(emb.field()),
        embed: emb.mode().to_string(),
    }
}

fn vec_indices(v: &[chaingeom::FieldElem]) -> Vec<usize> {
    v.iter().map(|x| x.index()).collect()
}

pub fn analyze(args: &AnalyzeArgs) -> Result<Certificate, CliError> {
    let mut cert = Certificate::new("analyze", args.seed);
    if args.timings {
        cert.timings = Some(Default::default());
    }
    let rep_desc: RepDescriptor = args.rep.parse()?;
    let start = Instant::now();
    let g = build_geometry(&args.geometry, args.cap)?;
    cert.record_timing("chains", start.elapsed().as_secs_f64());
    let (line, emb) = (g.line(), g.embedding());
    cert.geometry = Some(geometry_info(&g));
    cert.counts = Some(Counts { points: line.len(), chains: Some(g.chains().len()), chain_size: Some(g.chain_size()) });

    let rep = rep_desc.build(emb)?;
    cert.representation = Some(RepInfo {
        descriptor: rep_desc.to_string(),
        field: field_descriptor(rep.field()),
        dim_u: rep.dim(),
        faithful: rep.is_faithful(),
    });

    let start = Instant::now();
    let records = weak_transversals(&rep, emb)?;
    let mut equivalences = true;
    for r in &records {
        let full = r.kind == TransversalKind::Full;
        equivalences &= full == r.alpha.is_surjective() && full == is_cyclic_submodule(&rep, emb, &r.u);
        cert.transversals.push(TransversalInfo {
            u: vec_indices(&r.u),
            alpha: r.alpha.describe(),
            kind: if full { "full" } else { "weak" }.to_string(),
        });
    }
    cert.checks.push(CheckResult {
        id: "prop2.2".into(),
        passed: equivalences,
        detail: format!("{} transversals; full iff α surjective iff Ku cyclic", records.len()),
    });

    let v = regulus_verdict(&rep, line, emb)?;
    cert.record_timing("verdict", start.elapsed().as_secs_f64());
    cert.verdict = Some(VerdictInfo {
        verdict: v.verdict.to_string(),
        reason: v.reason.clone(),
        alpha: v.alpha.as_ref().map(|a| a.describe()),
        classes: v
            .classes
            .iter()
            .map(|c| LinkClassInfo {
                alpha: c.alpha.describe(),
                dim: c.subspace.dim(),
                transversals: c.transversal_count,
                basis: mat_rows(c.subspace.basis()),
            })
            .collect(),
        witness_basis: v.witness_basis.as_ref().map(mat_rows),
        synthetic_regulus: v.synthetic_regulus,
    });
    if let Some(syn) = v.synthetic_regulus {
        let analytic = v.verdict == chaingeom::RegulusVerdict::Regulus;
        cert.checks.push(CheckResult {
            id: "thm3.1".into(),
            passed: syn == analytic,
            detail: format!("analytic {analytic}, synthetic {syn}"),
        });
    }

    if rep.dim() == 2 {
        let start = Instant::now();
        let mut s = SpreadSummary { checked: 0, not_spread: 0, spread: 0, regular_spread: 0, per_chain: Vec::new() };
        for c in g.chains() {
            let class = spread_check(&rep, line, c)?;
            s.checked += 1;
            match class {
                SpreadClass::NotSpread => s.not_spread += 1,
                SpreadClass::Spread => s.spread += 1,
                SpreadClass::RegularSpread => s.regular_spread += 1,
            }
            s.per_chain.push(class.to_string());
        }
        cert.spreads = Some(s);
        cert.record_timing("spreads", start.elapsed().as_secs_f64());
    }
    Ok(cert)
}

pub fn verify_suite(seed: u64, only: Vec<String>, timings: bool) -> Result<Certificate, CliError> {
    run_suite(&SuiteOptions { seed, only, timings })
}

fn parse_h1(s: &str, k: &chaingeom::FiniteField) -> Result<Mat, CliError> {
    if s.trim() == "id" {
        return Ok(Mat::identity(2));
    }
    let bad = || Error::InvalidDescriptor(format!("H1 {s:?}: expected id or four element indices a,b,c,d"));
    let idx: Vec<usize> = s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
    if idx.len() != 4 || idx.iter().any(|&i| i >= k.order()) {
        return Err(bad().into());
    }
    Ok(Mat::from_vec(2, 2, idx.into_iter().map(|i| k.elem(i)).collect()))
}

fn parse_kappa(s: &str, src: &chaingeom::FiniteField) -> Result<FieldAut, CliError> {
    Ok(chaingeom::descriptor::parse_aut(s, src)?)
}

pub fn morphism(args: &MorphismArgs) -> Result<Certificate, CliError> {
    let mut cert = Certificate::new("morphism", 0);
    let src = build_geometry(&args.source, None)?;
    let tgt = build_geometry(&args.target, None)?;
    let k = src.line().ring().field();
    let kappa = FieldHom::from_aut(k, parse_kappa(&args.kappa, k)?);
    let h1 = parse_h1(&args.h1, k)?;
    let omega = args.omega.as_deref().map(|w| parse_kappa(w, k)).transpose()?;
    let spec = if args.force {
        make_fundamental_unchecked(kappa, &h1, omega, &src, &tgt)?
    } else {
        make_fundamental(kappa, &h1, omega, &src, &tgt, args.strict)?
    };
    let report = verify_morphism(&spec, &src, &tgt)?;
    let passed = if args.strict { report.is_fundamental_isomorphism() } else { report.is_fundamental_morphism() };
    cert.geometry = Some(geometry_info(&src));
    cert.counts = Some(Counts { points: src.line().len(), chains: Some(src.chains().len()), chain_size: Some(src.chain_size()) });
    let label = format!("{} -> {}", describe_geometry(&geometry_info(&src)), describe_geometry(&geometry_info(&tgt)));
    cert.morphism_reports.push(MorphismInfo {
        label,
        kappa: spec.kappa.describe(),
        h1: Some(mat_rows(&h1)),
        omega: omega.map(|w| format!("frob^{}", w.power())),
        verdicts: report.into(),
    });
    cert.checks.push(CheckResult {
        id: if args.strict { "fundamental_isomorphism" } else { "fundamental_morphism" }.into(),
        passed,
        detail: String::new(),
    });
    Ok(cert)
}

pub fn chains(g: &GeometryArgs, cap: Option<usize>) -> Result<(Certificate, ChainGeometry), CliError> {
    let mut cert = Certificate::new("chains", 0);
    let geom = build_geometry(g, cap)?;
    cert.geometry = Some(geometry_info(&geom));
    cert.counts = Some(Counts { points: geom.line().len(), chains: Some(geom.chains().len()), chain_size: Some(geom.chain_size()) });
    Ok((cert, geom))
}

pub fn points(ring: &str) -> Result<(Certificate, chaingeom::ProjectiveLine), CliError> {
    let mut cert = Certificate::new("points", 0);
    let r = parse_ring(ring)?;
    let line = enumerate_points(&r)?;
    cert.geometry = Some(GeometryInfo {
        ring: ring_descriptor(&r),
        field: field_descriptor(r.field()),
        embed: "scalar".into(),
    });
    cert.counts = Some(Counts { points: line.len(), chains: None, chain_size: None });
    Ok((cert, line))
}

fn describe_geometry(g: &GeometryInfo) -> String {
    format!("Σ({}, {}) [{}]", g.field, g.ring, g.embed)
}

pub fn write_output(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// Human-readable report of a certificate.
pub fn render(cert: &Certificate) -> String {
    let mut out = String::new();
    let w = &mut out;
    if let Some(g) = &cert.geometry {
        let _ = writeln!(w, "geometry     {}", describe_geometry(g));
    }
    if let Some(c) = &cert.counts {
        let _ = write!(w, "points       {}", c.points);
        if let (Some(n), Some(s)) = (c.chains, c.chain_size) {
            let _ = write!(w, "\nchains       {n} of size {s}");
        }
        let _ = writeln!(w);
    }
    if let Some(r) = &cert.representation {
        let faithful = if r.faithful { "faithful" } else { "not faithful" };
        let _ = writeln!(w, "rep          {} over {}, dim U = {}, {faithful}", r.descriptor, r.field, r.dim_u);
    }
    if cert.command == "analyze" {
        let _ = writeln!(w, "transversals {}", cert.transversals.len());
        for t in &cert.transversals {
            let _ = writeln!(w, "  u = {:?}  α = {}  {}", t.u, t.alpha, t.kind);
        }
    }
    if let Some(v) = &cert.verdict {
        let _ = writeln!(w, "verdict      {} ({})", v.verdict, v.reason);
        if let Some(a) = &v.alpha {
            let _ = writeln!(w, "  α = {a}");
        }
        for c in &v.classes {
            let _ = writeln!(w, "  class α = {}: dim {}, {} transversals", c.alpha, c.dim, c.transversals);
        }
        if let Some(s) = v.synthetic_regulus {
            let _ = writeln!(w, "  synthetic regulus check: {s}");
        }
    }
    if let Some(s) = &cert.spreads {
        let _ = writeln!(
            w,
            "spreads      {} checked: {} regular_spread, {} spread, {} not_spread",
            s.checked, s.regular_spread, s.spread, s.not_spread
        );
    }
    for m in &cert.morphism_reports {
        let v = &m.verdicts;
        let h1 = m.h1.as_ref().map_or("none".to_string(), |h| format!("{h:?}"));
        let _ = writeln!(w, "morphism     {} κ={} H1={h1} ω={}", m.label, m.kappa, m.omega.as_deref().unwrap_or("none"));
        for (name, b) in [
            ("bijective", v.bijective),
            ("distant_preserving_forward", v.distant_preserving_forward),
            ("distant_preserving_backward", v.distant_preserving_backward),
            ("chains_into_chains", v.chains_into_chains),
            ("chains_onto_chains", v.chains_onto_chains),
            ("fundamental", v.fundamental),
        ] {
            if cert.command == "morphism" {
                let _ = writeln!(w, "  {name:<28} {b}");
            }
        }
    }
    if !cert.checks.is_empty() {
        let width = cert.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
        for c in &cert.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(w, "{status}  {:<width$}  {}", c.id, c.detail);
        }
    }
    if let Some(t) = &cert.timings {
        for (k, s) in t {
            let _ = writeln!(w, "time  {k}: {s:.3}s");
        }
    }
    out
}

/// Exit status for a finished certificate.
pub fn verdict(cert: &Certificate) -> Result<(), CliError> {
    let failed: Vec<&str> = cert.checks.iter().filter(|c| !c.passed).map(|c| c.id.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::VerificationFailed(format!("failed: {}", failed.join(", "))))
    }
}
