//! Machine-readable reports. Field order and list order are fixed, so a
//! report is byte-stable for a given input.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::decide::{
    analyze, gauss_bonnet_from, star_split, verify_additivity, verify_induction_identity, AdditivityReport, Analysis,
    Decision, GaussBonnetReport, InductionReport,
};
use crate::error::Result;
use crate::orbifold::{OrbifoldComplex, ValidationMode, ValidationReport};
use crate::order::{check_intersection_closure, check_minimal_components, IntersectionReport, MinimalReport};
use crate::rational::Rational;

pub const REPORT_VERSION: &str = "1";

/// Upper bound on the number of star/complement splits tried by `verify`.
pub const MAX_SPLITS: usize = 64;

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Validate,
    Sectors,
    Euler,
    Decide,
    Verify,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsBlock {
    pub dimension: Option<usize>,
    pub f_vector: Vec<usize>,
    pub inertia_nodes: u64,
    pub reduced: bool,
    pub chi: i64,
    pub chi_orb: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentRow {
    pub id: usize,
    pub element_order: u32,
    pub dim: usize,
    pub chi: i64,
    pub chi_orb: Rational,
    pub image_size: usize,
    pub node_count: usize,
    pub sheets: usize,
    pub pure: bool,
    pub minimal: bool,
    pub nontwisted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitFailure {
    pub vertex: u32,
    #[serde(flatten)]
    pub report: AdditivityReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditivityBlock {
    pub vertices: Vec<u32>,
    pub failures: Vec<SplitFailure>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InductionBlock {
    #[serde(flatten)]
    pub report: InductionReport,
    pub premise_gaps: Vec<usize>,
    pub failed: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifierBlocks {
    pub gauss_bonnet: GaussBonnetReport,
    pub additivity: AdditivityBlock,
    pub minimal_components: MinimalReport,
    pub intersection_closure: IntersectionReport,
    pub induction: InductionBlock,
    /// Plausible input with conditions (iii) and (iv) disagreeing.
    pub counterexample: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFile {
    pub report_version: String,
    pub command: Command,
    pub input_digest: String,
    pub validation: ValidationReport,
    /// Sectors are the connected components of the inertia complex; both
    /// conditions are evaluated per component.
    pub sector_scope: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariants: Option<InvariantsBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<ComponentRow>>,
    /// Strict image containments `[a, b]` meaning component a < component b.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poset_edges: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decision: Option<Decision>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verifiers: Option<VerifierBlocks>,
}

impl ReportFile {
    /// 0 when everything requested was produced and consistent, 1 for invalid
    /// input, 2 for a consistency violation.
    pub fn exit_code(&self) -> i32 {
        if !self.validation.is_valid() {
            return 1;
        }
        let counterexample = self.decision.as_ref().is_some_and(|d| d.is_counterexample());
        let failed = self.verifiers.as_ref().is_some_and(|v| !v.passed);
        if counterexample || failed {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}

pub fn invariants_block(oc: &OrbifoldComplex) -> InvariantsBlock {
    let c = oc.complex();
    InvariantsBlock {
        dimension: c.dimension(),
        f_vector: c.f_vector(),
        inertia_nodes: oc.order_sum(),
        reduced: oc.is_reduced(),
        chi: oc.euler_characteristic(),
        chi_orb: oc.euler_satake(),
    }
}

pub fn component_rows(analysis: &Analysis) -> Vec<ComponentRow> {
    analysis
        .components
        .iter()
        .enumerate()
        .map(|(k, c)| ComponentRow {
            id: c.id,
            element_order: c.element_order,
            dim: c.dim,
            chi: c.chi,
            chi_orb: c.chi_orb.clone(),
            image_size: c.image.len(),
            node_count: c.nodes.len(),
            sheets: c.sheets,
            pure: c.pure,
            minimal: analysis.poset.is_minimal(k),
            nontwisted: c.is_nontwisted,
        })
        .collect()
}

/// Up to [`MAX_SPLITS`] vertices spread evenly over the vertex range.
pub fn split_vertices(oc: &OrbifoldComplex) -> Vec<u32> {
    let n = oc.complex().vertex_count() as usize;
    if n <= MAX_SPLITS {
        return (0..n as u32).collect();
    }
    let mut out: Vec<u32> = (0..MAX_SPLITS).map(|k| (k * n / MAX_SPLITS) as u32).collect();
    out.dedup();
    out
}

pub fn additivity_block(oc: &OrbifoldComplex) -> Result<AdditivityBlock> {
    let vertices = split_vertices(oc);
    let mut failures = Vec::new();
    for &v in &vertices {
        let (star, rest) = star_split(oc, v);
        let report = verify_additivity(oc, &star, &rest)?;
        if !report.holds {
            failures.push(SplitFailure { vertex: v, report });
        }
    }
    Ok(AdditivityBlock { holds: failures.is_empty(), vertices, failures })
}

pub fn verifier_blocks(oc: &OrbifoldComplex, analysis: &Analysis) -> Result<VerifierBlocks> {
    let gauss_bonnet = gauss_bonnet_from(oc, &analysis.components);
    let additivity = additivity_block(oc)?;
    let minimal_components = check_minimal_components(oc, &analysis.components, &analysis.poset);
    let intersection_closure = check_intersection_closure(oc, &analysis.components);
    let report = verify_induction_identity(oc, &analysis.components, &analysis.poset);
    let induction = InductionBlock {
        premise_gaps: report.premise_gaps(),
        failed: report.failures().map(|e| e.component).collect(),
        report,
    };
    let counterexample = analysis.decision.is_counterexample();
    let passed = gauss_bonnet.holds
        && additivity.holds
        && intersection_closure.passes()
        && induction.failed.is_empty()
        && !counterexample;
    Ok(VerifierBlocks {
        gauss_bonnet,
        additivity,
        minimal_components,
        intersection_closure,
        induction,
        counterexample,
        passed,
    })
}

/// Runs `command` on an already parsed input. Invalid input yields a report
/// carrying only the validation findings.
pub fn build_report(command: Command, input_digest: String, oc: &OrbifoldComplex, mode: ValidationMode) -> Result<ReportFile> {
    let validation = oc.validate(mode);
    let mut report = ReportFile {
        report_version: REPORT_VERSION.to_string(),
        command,
        input_digest,
        sector_scope: "connected_component".to_string(),
        invariants: None,
        components: None,
        poset_edges: None,
        decision: None,
        verifiers: None,
        validation,
    };
    if !report.validation.is_valid() || command == Command::Validate {
        return Ok(report);
    }
    report.invariants = Some(invariants_block(oc));
    if command == Command::Euler {
        return Ok(report);
    }
    let analysis = analyze(oc)?;
    report.components = Some(component_rows(&analysis));
    report.poset_edges = Some(analysis.poset.strict_pairs().into_iter().map(|(a, b)| [a, b]).collect());
    if matches!(command, Command::Decide | Command::Verify) {
        report.decision = Some(analysis.decision.clone());
    }
    if command == Command::Verify {
        report.verifiers = Some(verifier_blocks(oc, &analysis)?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;

    #[test]
    fn digest_is_sha256_hex() {
        assert_eq!(digest(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn invalid_input_stops_after_validation() {
        let mut oc = builders::fixture("teardrop3").unwrap();
        let top = oc.complex().maximal_simplices()[0];
        oc.set_order(top, 2).unwrap();
        let r = build_report(Command::Verify, String::new(), &oc, ValidationMode::Lax).unwrap();
        assert!(!r.validation.is_valid());
        assert!(r.components.is_none() && r.verifiers.is_none());
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn report_round_trips_and_is_stable() {
        let oc = builders::fixture("teardrop3").unwrap();
        let a = build_report(Command::Verify, digest(b"x"), &oc, ValidationMode::Strict).unwrap();
        let b = build_report(Command::Verify, digest(b"x"), &oc, ValidationMode::Strict).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let back: ReportFile = serde_json::from_str(&a.to_json()).unwrap();
        assert_eq!(back, a);
        assert_eq!(a.exit_code(), 0);
    }

    #[test]
    fn split_vertices_are_bounded() {
        let oc = builders::fixture("headline4d").unwrap();
        let v = split_vertices(&oc);
        assert!(v.len() <= MAX_SPLITS && !v.is_empty());
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }
}
