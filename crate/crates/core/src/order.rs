//! Ordering sector components by containment of their images.
//!
//! `A ≤ B` when every simplex under `A` is under `B`; `A ≡ B` when the images
//! coincide. Minimal means belonging to a minimal `≡`-class.

use serde::{Deserialize, Serialize};

use crate::complex::SimplexId;
use crate::error::{Error, Result};
use crate::inertia::{InertiaNode, SectorComponent};
use crate::orbifold::OrbifoldComplex;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorPoset {
    n: usize,
    /// Row-major `leq[a * n + b]` for `a ≤ b`.
    leq: Vec<bool>,
    /// Components grouped by equal image; classes and members in id order.
    pub equiv_classes: Vec<Vec<usize>>,
    /// Indices into `equiv_classes`.
    pub minimal_classes: Vec<usize>,
}

impl SectorPoset {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    pub fn equiv(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) && self.leq(b, a)
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) && !self.leq(b, a)
    }

    /// All `(a, b)` with `a ≤ b`, reflexive pairs included.
    pub fn leq_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|a| (0..self.n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.leq(a, b))
            .collect()
    }

    /// All `(a, b)` with `a < b`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        self.leq_pairs().into_iter().filter(|&(a, b)| !self.leq(b, a)).collect()
    }

    pub fn strict_predecessors(&self, b: usize) -> Vec<usize> {
        (0..self.n).filter(|&a| self.less(a, b)).collect()
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.equiv_classes.iter().position(|c| c.contains(&a)).expect("every component has a class")
    }

    pub fn is_minimal(&self, a: usize) -> bool {
        self.minimal_classes.contains(&self.class_of(a))
    }
}

fn is_subset(a: &[SimplexId], b: &[SimplexId]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut it = b.iter();
    'outer: for x in a {
        for y in it.by_ref() {
            if y == x {
                continue 'outer;
            }
            if y > x {
                return false;
            }
        }
        return false;
    }
    true
}

fn intersect(a: &[SimplexId], b: &[SimplexId]) -> Vec<SimplexId> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Computes `≤`, `≡` and the minimal classes by exact image inclusion.
/// Components are indexed by position in `components`.
pub fn image_poset(components: &[SectorComponent]) -> SectorPoset {
    let n = components.len();
    let mut leq = vec![false; n * n];
    for a in 0..n {
        for b in 0..n {
            leq[a * n + b] = a == b || is_subset(&components[a].image, &components[b].image);
        }
    }
    let mut equiv_classes: Vec<Vec<usize>> = Vec::new();
    for a in 0..n {
        match equiv_classes.iter_mut().find(|c| leq[c[0] * n + a] && leq[a * n + c[0]]) {
            Some(class) => class.push(a),
            None => equiv_classes.push(vec![a]),
        }
    }
    let minimal_classes = (0..equiv_classes.len())
        .filter(|&k| {
            let r = equiv_classes[k][0];
            !(0..n).any(|a| leq[a * n + r] && !leq[r * n + a])
        })
        .collect();
    SectorPoset { n, leq, equiv_classes, minimal_classes }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MinimalNote {
    /// Isotropy order varies over the component's nodes.
    VaryingOrder { component: usize, orders: Vec<u32> },
    NotPure { component: usize },
    /// The element has order below the local group order, so it does not
    /// generate the isotropy group. Recorded, not a violation.
    NonGenerating { component: usize, element_order: u32, order: u32 },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalReport {
    pub checked: Vec<usize>,
    pub warnings: Vec<MinimalNote>,
    pub notes: Vec<MinimalNote>,
}

impl MinimalReport {
    pub fn passes(&self) -> bool {
        self.warnings.is_empty()
    }
}

/// For each component in a minimal class: constant isotropy order and pure
/// dimension. Violations are warnings.
pub fn check_minimal_components(
    oc: &OrbifoldComplex,
    components: &[SectorComponent],
    poset: &SectorPoset,
) -> MinimalReport {
    let mut report = MinimalReport::default();
    for &k in &poset.minimal_classes {
        for &a in &poset.equiv_classes[k] {
            let c = &components[a];
            report.checked.push(a);
            let mut orders: Vec<u32> = c.nodes.iter().map(|n| oc.order(n.simplex)).collect();
            orders.sort_unstable();
            orders.dedup();
            if orders.len() > 1 {
                report.warnings.push(MinimalNote::VaryingOrder { component: c.id, orders: orders.clone() });
            }
            if !c.pure {
                report.warnings.push(MinimalNote::NotPure { component: c.id });
            }
            if let Some(&m) = orders.last() {
                if c.element_order < m {
                    report.notes.push(MinimalNote::NonGenerating {
                        component: c.id,
                        element_order: c.element_order,
                        order: m,
                    });
                }
            }
        }
    }
    report.checked.sort_unstable();
    report
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionFailure {
    pub a: usize,
    pub b: usize,
    /// Simplices of the intersection not covered by any component image inside it.
    pub uncovered: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionReport {
    pub pairs_checked: usize,
    pub failures: Vec<IntersectionFailure>,
}

impl IntersectionReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every pair of components, checks that the intersection of their images
/// is a union of component images.
pub fn check_intersection_closure(oc: &OrbifoldComplex, components: &[SectorComponent]) -> IntersectionReport {
    let mut report = IntersectionReport::default();
    let n = components.len();
    let mut covered: Vec<bool> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            report.pairs_checked += 1;
            let meet = intersect(&components[a].image, &components[b].image);
            if meet.is_empty() {
                continue;
            }
            covered.clear();
            covered.resize(meet.len(), false);
            for c in components.iter().filter(|c| is_subset(&c.image, &meet)) {
                for s in &c.image {
                    if let Ok(i) = meet.binary_search(s) {
                        covered[i] = true;
                    }
                }
            }
            let uncovered: Vec<Vec<u32>> = meet
                .iter()
                .zip(&covered)
                .filter(|(_, &c)| !c)
                .map(|(s, _)| oc.complex().vertices(*s).to_vec())
                .collect();
            if !uncovered.is_empty() {
                report.failures.push(IntersectionFailure { a, b, uncovered });
            }
        }
    }
    report
}

/// The nodes of `sup` lying over the image of `sub`.
pub fn embedded_nodes(sub: &SectorComponent, sup: &SectorComponent) -> Result<Vec<InertiaNode>> {
    if !is_subset(&sub.image, &sup.image) {
        return Err(Error::NotContained { sub: sub.id, sup: sup.id });
    }
    Ok(sup.nodes.iter().filter(|n| sub.image_contains(n.simplex)).copied().collect())
}
