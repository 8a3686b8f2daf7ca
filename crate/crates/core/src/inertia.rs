//! The inertia complex and its sector components.
//!
//! Nodes are pairs `(σ, g)` with `g ∈ Z_{m_σ}`; every facet incidence
//! `τ < σ` joins `(σ, g)` to `(τ, r(g))` where `r` is the restriction
//! monomorphism. Connected components of this graph are the sectors.
//! A component may contain several nodes over one simplex when a loop of
//! restrictions composes to a nontrivial unit; characteristics count nodes.

use std::collections::HashMap;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::complex::{sign, SimplexId};
use crate::error::Result;
use crate::orbifold::{apply_monomorphism, element_order, OrbifoldComplex};
use crate::rational::{Rational, WeightedSum};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InertiaNode {
    pub simplex: SimplexId,
    pub element: u32,
}

/// Nodes and face edges over a validated orbifold complex. Edges are derived
/// on demand from the labeling rather than stored.
#[derive(Clone, Debug)]
pub struct InertiaComplex<'a> {
    oc: &'a OrbifoldComplex,
    /// `offsets[σ]` is the index of node `(σ, 0)`; one extra trailing entry.
    offsets: Vec<u32>,
}

impl<'a> InertiaComplex<'a> {
    pub fn orbifold(&self) -> &'a OrbifoldComplex {
        self.oc
    }

    pub fn node_count(&self) -> usize {
        *self.offsets.last().unwrap_or(&0) as usize
    }

    pub fn edge_count(&self) -> usize {
        let c = self.oc.complex();
        c.ids().map(|s| self.oc.order(s) as usize * c.facets(s).len()).sum()
    }

    #[inline]
    pub fn index_of(&self, node: InertiaNode) -> usize {
        (self.offsets[node.simplex.index()] + node.element) as usize
    }

    pub fn node(&self, index: usize) -> InertiaNode {
        let s = self.offsets.partition_point(|&o| o as usize <= index) - 1;
        InertiaNode { simplex: SimplexId(s as u32), element: (index - self.offsets[s] as usize) as u32 }
    }

    pub fn nodes(&self) -> impl Iterator<Item = InertiaNode> + '_ {
        self.oc
            .complex()
            .ids()
            .flat_map(move |s| (0..self.oc.order(s)).map(move |element| InertiaNode { simplex: s, element }))
    }

    /// The face neighbors `(τ, r(g))` of a node, one per facet.
    pub fn face_neighbors(&self, node: InertiaNode) -> impl Iterator<Item = InertiaNode> + '_ {
        let m = self.oc.order(node.simplex);
        self.oc.complex().facets(node.simplex).iter().enumerate().map(move |(j, &f)| InertiaNode {
            simplex: f,
            element: apply_monomorphism(self.oc.unit(node.simplex, j), node.element, m, self.oc.order(f)),
        })
    }

    /// Every edge as a pair of node indices, upper node first.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.nodes().flat_map(move |n| {
            let from = self.index_of(n);
            self.face_neighbors(n).map(move |t| (from, self.index_of(t)))
        })
    }
}

/// Builds the inertia complex; fails on an invalid labeling.
pub fn build_inertia(oc: &OrbifoldComplex) -> Result<InertiaComplex<'_>> {
    oc.ensure_valid()?;
    Ok(build_inertia_unchecked(oc))
}

pub(crate) fn build_inertia_unchecked(oc: &OrbifoldComplex) -> InertiaComplex<'_> {
    let mut offsets = Vec::with_capacity(oc.complex().len() + 1);
    let mut total = 0u32;
    for &m in oc.labeling().orders() {
        offsets.push(total);
        total = total.checked_add(m).expect("inertia node count fits in u32");
    }
    offsets.push(total);
    InertiaComplex { oc, offsets }
}

/// A connected component of the inertia complex with its invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorComponent {
    pub id: usize,
    /// Sorted by simplex, then element.
    pub nodes: Vec<InertiaNode>,
    /// Additive order of the elements, constant on a component.
    pub element_order: u32,
    /// Sorted, duplicate-free simplices under the nodes.
    pub image: Vec<SimplexId>,
    pub chi: i64,
    pub chi_orb: Rational,
    pub dim: usize,
    pub is_nontwisted: bool,
    /// All maximal nodes share one dimension.
    pub pure: bool,
    /// Largest number of nodes over a single simplex.
    pub sheets: usize,
}

impl SectorComponent {
    /// Whether every node has the same additive element order.
    pub fn element_order_is_constant(&self, oc: &OrbifoldComplex) -> bool {
        self.nodes.iter().all(|n| element_order(n.element, oc.order(n.simplex)) == self.element_order)
    }

    pub fn contains(&self, node: &InertiaNode) -> bool {
        self.nodes.binary_search(node).is_ok()
    }

    pub fn image_contains(&self, s: SimplexId) -> bool {
        self.image.binary_search(&s).is_ok()
    }
}

/// Fills in the invariants of one component from its node set.
pub fn component_invariants(inertia: &InertiaComplex<'_>, nodes: Vec<InertiaNode>) -> SectorComponent {
    let members: std::collections::HashSet<InertiaNode> = nodes.iter().copied().collect();
    let mut below = std::collections::HashSet::new();
    for &n in &nodes {
        for t in inertia.face_neighbors(n) {
            debug_assert!(members.contains(&t));
            below.insert(t);
        }
    }
    finish_component(inertia.orbifold(), nodes, |n| below.contains(n))
}

fn finish_component(
    oc: &OrbifoldComplex,
    mut nodes: Vec<InertiaNode>,
    has_coface: impl Fn(&InertiaNode) -> bool,
) -> SectorComponent {
    nodes.sort_unstable();
    let c = oc.complex();
    let first = nodes[0];
    let element_order = element_order(first.element, oc.order(first.simplex));
    let mut image: Vec<SimplexId> = Vec::new();
    let (mut chi, mut dim, mut sheets, mut run) = (0i64, 0usize, 0usize, 0usize);
    let mut weighted = WeightedSum::default();
    let mut maximal_dims: Option<(usize, usize)> = None;
    for n in &nodes {
        let d = c.dim(n.simplex);
        chi += sign(d);
        weighted.add(sign(d), oc.order(n.simplex));
        dim = dim.max(d);
        if image.last() == Some(&n.simplex) {
            run += 1;
        } else {
            image.push(n.simplex);
            run = 1;
        }
        sheets = sheets.max(run);
        if !has_coface(n) {
            maximal_dims = Some(match maximal_dims {
                None => (d, d),
                Some((lo, hi)) => (lo.min(d), hi.max(d)),
            });
        }
    }
    let pure = matches!(maximal_dims, Some((lo, hi)) if lo == hi);
    SectorComponent {
        id: 0,
        is_nontwisted: element_order == 1,
        nodes,
        element_order,
        image,
        chi,
        chi_orb: weighted.total(),
        dim,
        pure,
        sheets,
    }
}

/// Partitions the inertia nodes into connected components, ordered by
/// element order and then by smallest node, so nontwisted components come first.
pub fn sector_components(inertia: &InertiaComplex<'_>) -> Vec<SectorComponent> {
    let n = inertia.node_count();
    let mut uf: UnionFind<u32> = UnionFind::new(n);
    let mut has_coface = vec![false; n];
    for (a, b) in inertia.edges() {
        uf.union(a as u32, b as u32);
        has_coface[b] = true;
    }
    let mut slot: HashMap<u32, usize> = HashMap::new();
    let mut groups: Vec<(usize, Vec<InertiaNode>)> = Vec::new();
    for (i, node) in inertia.nodes().enumerate() {
        let root = uf.find_mut(i as u32);
        let k = *slot.entry(root).or_insert_with(|| {
            groups.push((i, Vec::new()));
            groups.len() - 1
        });
        groups[k].1.push(node);
    }
    let oc = inertia.orbifold();
    let mut components: Vec<(usize, SectorComponent)> = groups
        .into_iter()
        .map(|(first, nodes)| {
            let comp = finish_component(oc, nodes, |node| has_coface[inertia.index_of(*node)]);
            (first, comp)
        })
        .collect();
    components.sort_by_key(|(first, c)| (c.element_order, *first));
    components
        .into_iter()
        .enumerate()
        .map(|(id, (_, mut c))| {
            c.id = id;
            c
        })
        .collect()
}

/// Convenience: validate, build the inertia complex and extract components.
pub fn components_of(oc: &OrbifoldComplex) -> Result<Vec<SectorComponent>> {
    Ok(sector_components(&build_inertia(oc)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlausibilityFinding {
    OddDimension { dim: usize },
    NotPureEven { component: usize, dim: usize, pure: bool },
    CodimensionTooSmall { component: usize, dim: usize, top_dim: usize },
}

/// Necessary conditions for an almost-complex structure. Passing them makes
/// the input plausible, never certified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlausibilityReport {
    pub plausible: bool,
    pub top_dim: Option<usize>,
    pub findings: Vec<PlausibilityFinding>,
}

pub fn almost_complex_plausibility(oc: &OrbifoldComplex, components: &[SectorComponent]) -> PlausibilityReport {
    let top = oc.complex().dimension();
    let mut findings = Vec::new();
    if let Some(n) = top {
        if n % 2 == 1 {
            findings.push(PlausibilityFinding::OddDimension { dim: n });
        }
    }
    let total = oc.complex().len();
    for c in components {
        if !c.pure || c.dim % 2 == 1 {
            findings.push(PlausibilityFinding::NotPureEven { component: c.id, dim: c.dim, pure: c.pure });
        }
        if let Some(n) = top {
            if !c.is_nontwisted && c.image.len() != total && c.dim + 2 > n {
                findings.push(PlausibilityFinding::CodimensionTooSmall { component: c.id, dim: c.dim, top_dim: n });
            }
        }
    }
    PlausibilityReport { plausible: findings.is_empty(), top_dim: top, findings }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::fixture;
    use crate::{Error, SimplicialComplex};

    #[test]
    fn trivial_labeling_mirrors_the_complex() {
        let oc = OrbifoldComplex::trivial(SimplicialComplex::build(&[[0, 1, 2], [1, 2, 3]]).unwrap());
        let inertia = build_inertia(&oc).unwrap();
        assert_eq!(inertia.node_count(), oc.complex().len());
        assert_eq!(inertia.edge_count(), oc.complex().incidence_count());
        let comps = sector_components(&inertia);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].chi_orb, Rational::from_integer(oc.euler_characteristic()));
    }

    #[test]
    fn node_indexing() {
        let oc = fixture("pentacircle").unwrap();
        let inertia = build_inertia(&oc).unwrap();
        assert_eq!(inertia.node_count(), 30);
        for (k, n) in inertia.nodes().enumerate() {
            assert_eq!(inertia.index_of(n), k);
            assert_eq!(inertia.node(k), n);
        }
        // edges to vertices of an edge: 3 edges × 2 facets × 5 elements
        assert_eq!(inertia.edges().count(), 30);
    }

    #[test]
    fn teardrop3_components() {
        let oc = fixture("teardrop3").unwrap();
        let comps = components_of(&oc).unwrap();
        assert_eq!(comps.iter().map(|c| c.nodes.len()).collect::<Vec<_>>(), vec![26, 1, 1]);
        let cone = oc.complex().find(&[4]).unwrap();
        assert_eq!(comps[1].nodes, vec![InertiaNode { simplex: cone, element: 1 }]);
        assert_eq!(comps[2].nodes, vec![InertiaNode { simplex: cone, element: 2 }]);
        assert_eq!((comps[1].chi, comps[1].chi_orb.clone()), (1, Rational::new(1, 3)));
        assert_eq!(comps[0].chi_orb, oc.euler_satake());
        let plaus = almost_complex_plausibility(&oc, &comps);
        assert!(plaus.plausible);
    }

    #[test]
    fn pentacircle_is_implausible() {
        let oc = fixture("pentacircle").unwrap();
        let comps = components_of(&oc).unwrap();
        let plaus = almost_complex_plausibility(&oc, &comps);
        assert!(!plaus.plausible);
        assert!(plaus.findings.contains(&PlausibilityFinding::OddDimension { dim: 1 }));
    }

    #[test]
    fn invalid_labels_are_refused() {
        let mut oc = fixture("teardrop3").unwrap();
        let top = oc.complex().maximal_simplices()[0];
        oc.set_order(top, 2).unwrap();
        assert!(matches!(build_inertia(&oc), Err(Error::InvalidOrbifold(_))));
    }
}
