//! Plain-text rendering of reports.

use std::fmt::Write;
use std::path::Path;

use cyclorb::decide::InductionOutcome;
use cyclorb::report::ReportFile;
use cyclorb::Verdict;

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

/// Validation findings and counterexamples, one line each, for standard error.
pub fn diagnostics(path: &Path, report: &ReportFile) -> String {
    let mut s = String::new();
    for f in &report.validation.findings {
        let _ = writeln!(s, "error: {}: {f}", path.display());
    }
    if let Some(v) = &report.verifiers {
        if !v.passed {
            let _ = writeln!(s, "error: {}: consistency violation, see the verify report", path.display());
        }
    }
    if report.decision.as_ref().is_some_and(|d| d.is_counterexample()) {
        let _ = writeln!(s, "error: {}: conditions (iii) and (iv) disagree on a plausible input", path.display());
    }
    s
}

pub fn text(report: &ReportFile) -> String {
    let mut s = String::new();
    let v = &report.validation;
    if !v.is_valid() {
        let _ = writeln!(s, "invalid: {} finding(s)", v.findings.len());
        return s;
    }
    let _ = writeln!(s, "valid");
    if let Some(inv) = &report.invariants {
        let dim = inv.dimension.map_or("empty".to_string(), |d| d.to_string());
        let _ = writeln!(s, "dimension: {dim}");
        let _ = writeln!(s, "f-vector: {:?}", inv.f_vector);
        let _ = writeln!(s, "chi: {}", inv.chi);
        let _ = writeln!(s, "chi_orb: {}", inv.chi_orb);
    }
    if let Some(rows) = &report.components {
        let _ = writeln!(s, "components: {}", rows.len());
        let _ = writeln!(s, "  {:>4} {:>5} {:>3} {:>5} {:>10} {:>7} {:>6}  flags", "id", "|g|", "dim", "chi", "chi_orb", "nodes", "image");
        for r in rows {
            let mut flags = Vec::new();
            if r.nontwisted {
                flags.push("nontwisted");
            }
            if r.minimal {
                flags.push("minimal");
            }
            if !r.pure {
                flags.push("impure");
            }
            let _ = writeln!(
                s,
                "  {:>4} {:>5} {:>3} {:>5} {:>10} {:>7} {:>6}  {}",
                r.id,
                r.element_order,
                r.dim,
                r.chi,
                r.chi_orb.to_string(),
                r.node_count,
                r.image_size,
                flags.join(",")
            );
        }
    }
    if let Some(d) = &report.decision {
        let verdict = match d.verdict {
            Verdict::Admits => "admits a nonvanishing vector field",
            Verdict::DoesNotAdmit => "admits no nonvanishing vector field",
            Verdict::NotApplicable => "conditions disagree; not a closed almost-complex cyclic orbifold",
        };
        let _ = writeln!(s, "admits: {}", d.admits);
        let _ = writeln!(s, "verdict: {verdict}");
        let _ = writeln!(s, "condition (iii), every component has chi = 0: {}", d.condition_iii);
        let _ = writeln!(s, "condition (iv), every component has chi_orb = 0: {}", d.condition_iv);
        let _ = writeln!(s, "classical: chi = {}, chi_orb = {}", d.classical.chi, d.classical.chi_orb);
        let plaus = if d.plausibility.plausible { "plausible" } else { "implausible" };
        let _ = writeln!(s, "almost-complex structure: {plaus} ({} finding(s))", d.plausibility.findings.len());
        for w in &d.witnesses {
            let _ = writeln!(
                s,
                "  witness: component {} (|g| = {}): chi = {}, chi_orb = {}",
                w.component, w.element_order, w.chi, w.chi_orb
            );
        }
    }
    if let Some(v) = &report.verifiers {
        let gb = &v.gauss_bonnet;
        let _ = writeln!(s, "gauss-bonnet: {} (sector sum {} vs chi {})", pass(gb.holds), gb.sector_sum, gb.chi);
        let _ = writeln!(
            s,
            "additivity: {} ({} star splits, {} failed)",
            pass(v.additivity.holds),
            v.additivity.vertices.len(),
            v.additivity.failures.len()
        );
        let m = &v.minimal_components;
        let _ = writeln!(
            s,
            "minimal components: {} warning(s), {} note(s) over {} component(s)",
            m.warnings.len(),
            m.notes.len(),
            m.checked.len()
        );
        let ic = &v.intersection_closure;
        let _ = writeln!(s, "intersection closure: {} ({} pairs)", pass(ic.passes()), ic.pairs_checked);
        let ind = &v.induction;
        let verified = ind.report.entries.iter().filter(|e| matches!(e.outcome, InductionOutcome::Verified { .. })).count();
        let unmet =
            ind.report.entries.iter().filter(|e| matches!(e.outcome, InductionOutcome::HypothesisUnmet { .. })).count();
        let _ = writeln!(
            s,
            "induction: {} ({verified} verified, {} failed, {} premise gap(s), {unmet} hypothesis unmet)",
            pass(ind.failed.is_empty()),
            ind.failed.len(),
            ind.premise_gaps.len()
        );
        let _ = writeln!(s, "overall: {}", pass(v.passed));
    }
    s
}
