//! JSON certificate written by every command.
//!
//! Field order is the declaration order below. Nothing here depends on hash
//! iteration order, so equal inputs give equal bytes.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

pub const SCHEMA_VERSION: &str = "chaingeom-cert/1";

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub schema_version: &'static str,
    pub command: String,
    pub geometry: Option<GeometryInfo>,
    pub counts: Option<Counts>,
    pub representation: Option<RepInfo>,
    pub transversals: Vec<TransversalInfo>,
    pub verdict: Option<VerdictInfo>,
    pub spreads: Option<SpreadSummary>,
    pub morphism_reports: Vec<MorphismInfo>,
    pub checks: Vec<CheckResult>,
    pub timings: Option<BTreeMap<String, f64>>,
    pub rng_seed: u64,
}

impl Certificate {
    pub fn new(command: &str, rng_seed: u64) -> Self {
        Certificate {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            geometry: None,
            counts: None,
            representation: None,
            transversals: Vec::new(),
            verdict: None,
            spreads: None,
            morphism_reports: Vec::new(),
            checks: Vec::new(),
            timings: None,
            rng_seed,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json())
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn record_timing(&mut self, label: &str, seconds: f64) {
        if let Some(t) = self.timings.as_mut() {
            t.insert(label.to_string(), seconds);
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct GeometryInfo {
    pub ring: String,
    pub field: String,
    pub embed: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Counts {
    pub points: usize,
    pub chains: Option<usize>,
    pub chain_size: Option<usize>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RepInfo {
    pub descriptor: String,
    pub field: String,
    pub dim_u: usize,
    pub faithful: bool,
}

/// A transversal `Ku × Ku`; vectors are written as field element indices.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TransversalInfo {
    pub u: Vec<usize>,
    pub alpha: String,
    pub kind: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LinkClassInfo {
    pub alpha: String,
    pub dim: usize,
    pub transversals: u64,
    pub basis: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct VerdictInfo {
    pub verdict: String,
    pub reason: String,
    pub alpha: Option<String>,
    pub classes: Vec<LinkClassInfo>,
    pub witness_basis: Option<Vec<Vec<usize>>>,
    pub synthetic_regulus: Option<bool>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SpreadSummary {
    pub checked: usize,
    pub not_spread: usize,
    pub spread: usize,
    pub regular_spread: usize,
    /// One entry per checked chain, in chain order.
    pub per_chain: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MorphismInfo {
    pub label: String,
    pub kappa: String,
    pub h1: Option<Vec<Vec<usize>>>,
    pub omega: Option<String>,
    pub verdicts: MorphismVerdicts,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MorphismVerdicts {
    pub bijective: bool,
    pub distant_preserving_forward: bool,
    pub distant_preserving_backward: bool,
    pub chains_into_chains: bool,
    pub chains_onto_chains: bool,
    pub fundamental: bool,
}

impl From<chaingeom::MorphismReport> for MorphismVerdicts {
    fn from(r: chaingeom::MorphismReport) -> Self {
        MorphismVerdicts {
            bijective: r.bijective,
            distant_preserving_forward: r.distant_preserving_forward,
            distant_preserving_backward: r.distant_preserving_backward,
            chains_into_chains: r.chains_into_chains,
            chains_onto_chains: r.chains_onto_chains,
            fundamental: r.fundamental,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckResult {
    pub id: String,
    pub passed: bool,
    pub detail: String,
}

/// Rows of a matrix as element indices.
pub fn mat_rows(m: &chaingeom::Mat) -> Vec<Vec<usize>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.index()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_certificate_has_fixed_shape() {
        let c = Certificate::new("points", 3);
        let v: serde_json::Value = serde_json::from_str(&c.to_json()).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(v["schema_version"], "chaingeom-cert/1");
        assert!(v["timings"].is_null());
        assert_eq!(keys.len(), 12);
        let text = c.to_json();
        assert!(text.find("\"schema_version\"").unwrap() < text.find("\"rng_seed\"").unwrap());
    }

    #[test]
    fn timings_only_recorded_when_enabled() {
        let mut c = Certificate::new("analyze", 0);
        c.record_timing("x", 1.0);
        assert!(c.timings.is_none());
        c.timings = Some(BTreeMap::new());
        c.record_timing("x", 1.0);
        assert_eq!(c.timings.unwrap().len(), 1);
    }
}
