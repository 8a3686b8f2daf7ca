//! Computations on the sector components: the inertia
//! Gauss–Bonnet sum, additivity of the Euler–Satake characteristic, the
//! generic/singular split behind the induction step, and the final decision.

use serde::{Deserialize, Serialize};

use crate::complex::{sign, SimplexId};
use crate::error::{Error, Result};
use crate::inertia::{almost_complex_plausibility, components_of, PlausibilityReport, SectorComponent};
use crate::orbifold::OrbifoldComplex;
use crate::order::{image_poset, SectorPoset};
use crate::rational::{Rational, WeightedSum};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussBonnetReport {
    pub sector_sum: Rational,
    pub chi: i64,
    pub holds: bool,
}

/// Checks `Σ_C χ_orb(C) = χ(X_Q)` over all sector components.
pub fn verify_inertia_gauss_bonnet(oc: &OrbifoldComplex) -> Result<GaussBonnetReport> {
    let components = components_of(oc)?;
    Ok(gauss_bonnet_from(oc, &components))
}

pub fn gauss_bonnet_from(oc: &OrbifoldComplex, components: &[SectorComponent]) -> GaussBonnetReport {
    let sector_sum: Rational = components.iter().map(|c| &c.chi_orb).sum();
    let chi = oc.euler_characteristic();
    GaussBonnetReport { holds: sector_sum == Rational::from_integer(chi), sector_sum, chi }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditivityReport {
    pub a: Rational,
    pub b: Rational,
    pub intersection: Rational,
    pub total: Rational,
    pub holds: bool,
}

/// Checks `χ_orb(A) + χ_orb(B) − χ_orb(A ∩ B) = χ_orb(Q)` for a face-closed cover.
pub fn verify_additivity(oc: &OrbifoldComplex, a: &[SimplexId], b: &[SimplexId]) -> Result<AdditivityReport> {
    let c = oc.complex();
    c.check_face_closed(a)?;
    c.check_face_closed(b)?;
    let mut in_a = vec![false; c.len()];
    let mut in_b = vec![false; c.len()];
    for s in a {
        in_a[s.index()] = true;
    }
    for s in b {
        in_b[s.index()] = true;
    }
    if let Some(missing) = c.ids().find(|s| !in_a[s.index()] && !in_b[s.index()]) {
        return Err(Error::CoverNotTotal(c.vertices(missing).to_vec()));
    }
    let both: Vec<SimplexId> = c.ids().filter(|s| in_a[s.index()] && in_b[s.index()]).collect();
    let (ra, rb, ri) = (oc.euler_satake_of(a), oc.euler_satake_of(b), oc.euler_satake_of(&both));
    let total = oc.euler_satake();
    let holds = &(&ra + &rb) - &ri == total;
    Ok(AdditivityReport { a: ra, b: rb, intersection: ri, total, holds })
}

/// Closed star of a vertex and the complementary closed subcomplex.
pub fn star_split(oc: &OrbifoldComplex, vertex: u32) -> (Vec<SimplexId>, Vec<SimplexId>) {
    let c = oc.complex();
    let mut in_star = vec![false; c.len()];
    for s in c.ids().rev() {
        if c.vertices(s).binary_search(&vertex).is_ok() || in_star[s.index()] {
            in_star[s.index()] = true;
            for f in c.facets(s) {
                in_star[f.index()] = true;
            }
        }
    }
    let star = c.ids().filter(|s| in_star[s.index()]).collect();
    let rest = c.ids().filter(|s| c.vertices(*s).binary_search(&vertex).is_err()).collect();
    (star, rest)
}

/// Generic and singular parts of a component's Euler–Satake characteristic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacteristicSplit {
    /// `(1/|g|) Σ (-1)^dim` over nodes with `m_σ = |g|`.
    pub generic: Rational,
    /// `Σ (-1)^dim / m_σ` over nodes with `m_σ > |g|`.
    pub singular: Rational,
}

pub fn split_characteristic(oc: &OrbifoldComplex, component: &SectorComponent) -> CharacteristicSplit {
    let c = oc.complex();
    let mut generic = 0i64;
    let mut singular = WeightedSum::default();
    for n in &component.nodes {
        let (m, s) = (oc.order(n.simplex), sign(c.dim(n.simplex)));
        if m == component.element_order {
            generic += s;
        } else {
            singular.add(s, m);
        }
    }
    CharacteristicSplit {
        generic: Rational::new(generic, component.element_order as i64),
        singular: singular.total(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum InductionOutcome {
    /// Premises hold and `χ_orb(C) = χ(C)/|g|`.
    Verified { chi_orb: Rational, scaled_chi: Rational },
    /// Premises hold but the identity fails.
    Failed { chi_orb: Rational, scaled_chi: Rational },
    /// Some strict predecessor has nonzero χ or χ_orb.
    HypothesisUnmet { predecessors: Vec<usize> },
    /// Some node with `m_σ > |g|` lies under no strict predecessor.
    PremiseGap { uncovered: Vec<Vec<u32>> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InductionEntry {
    pub component: usize,
    #[serde(flatten)]
    pub outcome: InductionOutcome,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InductionReport {
    pub entries: Vec<InductionEntry>,
}

impl InductionReport {
    pub fn failures(&self) -> impl Iterator<Item = &InductionEntry> {
        self.entries.iter().filter(|e| matches!(e.outcome, InductionOutcome::Failed { .. }))
    }

    pub fn premise_gaps(&self) -> Vec<usize> {
        self.entries
            .iter()
            .filter(|e| matches!(e.outcome, InductionOutcome::PremiseGap { .. }))
            .map(|e| e.component)
            .collect()
    }

    pub fn verified(&self) -> Vec<usize> {
        self.entries
            .iter()
            .filter(|e| matches!(e.outcome, InductionOutcome::Verified { .. }))
            .map(|e| e.component)
            .collect()
    }
}

/// The induction step, asserted only where its literal premises hold: every
/// strict predecessor has vanishing χ and χ_orb, and every node with
/// `m_σ > |g|` sits over the image of a strict predecessor.
pub fn verify_induction_identity(
    oc: &OrbifoldComplex,
    components: &[SectorComponent],
    poset: &SectorPoset,
) -> InductionReport {
    let mut entries = Vec::with_capacity(components.len());
    for (k, comp) in components.iter().enumerate() {
        let preds = poset.strict_predecessors(k);
        let nonvanishing: Vec<usize> = preds
            .iter()
            .copied()
            .filter(|&p| components[p].chi != 0 || !components[p].chi_orb.is_zero())
            .collect();
        let outcome = if !nonvanishing.is_empty() {
            InductionOutcome::HypothesisUnmet { predecessors: nonvanishing }
        } else {
            let mut uncovered: Vec<Vec<u32>> = comp
                .nodes
                .iter()
                .filter(|n| oc.order(n.simplex) > comp.element_order)
                .filter(|n| !preds.iter().any(|&p| components[p].image_contains(n.simplex)))
                .map(|n| oc.complex().vertices(n.simplex).to_vec())
                .collect();
            uncovered.dedup();
            if !uncovered.is_empty() {
                InductionOutcome::PremiseGap { uncovered }
            } else {
                let scaled_chi = Rational::new(comp.chi, comp.element_order as i64);
                let chi_orb = comp.chi_orb.clone();
                if chi_orb == scaled_chi {
                    InductionOutcome::Verified { chi_orb, scaled_chi }
                } else {
                    InductionOutcome::Failed { chi_orb, scaled_chi }
                }
            }
        };
        entries.push(InductionEntry { component: comp.id, outcome });
    }
    InductionReport { entries }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Admits,
    DoesNotAdmit,
    /// Conditions (iii) and (iv) disagree, so the input cannot be a closed
    /// almost-complex cyclic orbifold.
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub component: usize,
    pub element_order: u32,
    pub chi: i64,
    pub chi_orb: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalInvariants {
    pub chi_orb: Rational,
    pub chi: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    /// Every component has χ = 0.
    pub condition_iii: bool,
    /// Every component has χ_orb = 0.
    pub condition_iv: bool,
    pub consistent: bool,
    /// True only when both conditions hold.
    pub admits: bool,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub classical: ClassicalInvariants,
    pub plausibility: PlausibilityReport,
}

impl Decision {
    /// A disagreement between the two conditions on an input that passes the
    /// almost-complex plausibility checks.
    pub fn is_counterexample(&self) -> bool {
        self.plausibility.plausible && !self.consistent
    }
}

/// Decides nonvanishing from precomputed components.
pub fn decide_from(oc: &OrbifoldComplex, components: &[SectorComponent]) -> Decision {
    let condition_iii = components.iter().all(|c| c.chi == 0);
    let condition_iv = components.iter().all(|c| c.chi_orb.is_zero());
    let consistent = condition_iii == condition_iv;
    let verdict = match (consistent, condition_iii) {
        (false, _) => Verdict::NotApplicable,
        (true, true) => Verdict::Admits,
        (true, false) => Verdict::DoesNotAdmit,
    };
    let witnesses = components
        .iter()
        .filter(|c| c.chi != 0 || !c.chi_orb.is_zero())
        .map(|c| Witness { component: c.id, element_order: c.element_order, chi: c.chi, chi_orb: c.chi_orb.clone() })
        .collect();
    Decision {
        condition_iii,
        condition_iv,
        consistent,
        admits: verdict == Verdict::Admits,
        verdict,
        witnesses,
        classical: ClassicalInvariants { chi_orb: oc.euler_satake(), chi: oc.euler_characteristic() },
        plausibility: almost_complex_plausibility(oc, components),
    }
}

/// Decides whether the orbifold admits a nonvanishing vector field by
/// evaluating conditions (iii) and (iv) on every sector component.
pub fn decide_nonvanishing(oc: &OrbifoldComplex) -> Result<Decision> {
    let components = components_of(oc)?;
    Ok(decide_from(oc, &components))
}

/// Everything computed for one input, shared by the verifiers and reports.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub components: Vec<SectorComponent>,
    pub poset: SectorPoset,
    pub decision: Decision,
}

pub fn analyze(oc: &OrbifoldComplex) -> Result<Analysis> {
    let components = components_of(oc)?;
    let poset = image_poset(&components);
    let decision = decide_from(oc, &components);
    Ok(Analysis { components, poset, decision })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::fixture;

    #[test]
    fn whole_cover_is_additive() {
        let oc = fixture("sphere236").unwrap();
        let all: Vec<SimplexId> = oc.complex().ids().collect();
        let r = verify_additivity(&oc, &all, &all).unwrap();
        assert!(r.holds);
        assert_eq!(r.total, Rational::zero());
    }

    #[test]
    fn covers_must_be_closed_and_total() {
        let oc = fixture("teardrop3").unwrap();
        let c = oc.complex();
        let top = c.maximal_simplices();
        assert!(matches!(verify_additivity(&oc, &top, &top), Err(Error::NotFaceClosed(_))));
        let (star, _) = star_split(&oc, 0);
        assert!(matches!(verify_additivity(&oc, &star, &star), Err(Error::CoverNotTotal(_))));
    }

    #[test]
    fn star_splits_of_the_cone_vertex() {
        let oc = fixture("teardrop3").unwrap();
        let (star, rest) = star_split(&oc, 4);
        // cone vertex, 4 link vertices, 4 spokes, 4 rim edges, 4 triangles
        assert_eq!(star.len(), 1 + 4 + 8 + 4);
        let r = verify_additivity(&oc, &star, &rest).unwrap();
        assert!(r.holds);
        // a disk around a cone point of order 3: 1/3 + 4 - 8 + 4
        assert_eq!(r.a, Rational::new(1, 3));
    }

    #[test]
    fn split_adds_up() {
        let oc = fixture("sphere236").unwrap();
        for comp in components_of(&oc).unwrap() {
            let s = split_characteristic(&oc, &comp);
            assert_eq!(&s.generic + &s.singular, comp.chi_orb);
        }
    }

    #[test]
    fn teardrop3_decision() {
        let d = decide_nonvanishing(&fixture("teardrop3").unwrap()).unwrap();
        assert!(!d.admits && d.consistent && !d.is_counterexample());
        let points: Vec<&Witness> = d.witnesses.iter().filter(|w| w.element_order == 3).collect();
        assert_eq!(points.len(), 2);
        assert!(points.iter().all(|w| w.chi == 1));
        assert_eq!(d.classical, ClassicalInvariants { chi_orb: Rational::new(4, 3), chi: 2 });
    }

    #[test]
    fn headline4d_classical_invariants_vanish() {
        let oc = fixture("headline4d").unwrap();
        let d = decide_nonvanishing(&oc).unwrap();
        assert_eq!(d.classical, ClassicalInvariants { chi_orb: Rational::zero(), chi: 0 });
        assert_eq!(d.verdict, Verdict::DoesNotAdmit);
        assert!(verify_inertia_gauss_bonnet(&oc).unwrap().holds);
    }

    #[test]
    fn pentacircle_verdict_and_induction() {
        let oc = fixture("pentacircle").unwrap();
        let a = analyze(&oc).unwrap();
        assert_eq!(a.decision.verdict, Verdict::Admits);
        assert!(!a.decision.plausibility.plausible);
        let report = verify_induction_identity(&oc, &a.components, &a.poset);
        assert_eq!(report.verified(), vec![1]);
        assert_eq!(report.premise_gaps(), vec![0]);
    }
}
