//! Cyclic isotropy labels on a simplicial complex.
//!
//! Each simplex σ carries the order `m_σ` of the cyclic group `Z_{m_σ}` fixing
//! the points of its open stratum. Each (simplex, facet) incidence carries a
//! unit `u` modulo `m_σ` describing the monomorphism `Z_{m_σ} → Z_{m_τ}`,
//! `g ↦ u·g·(m_τ/m_σ)`. Compositions along chains multiply units, so a
//! descending chain from σ to any face τ is summarized by one unit mod `m_σ`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::complex::{sign, SimplexId, SimplicialComplex};
use crate::error::{Error, Result};
use crate::rational::{Rational, WeightedSum};

/// One facet monomorphism, spelled out with vertex lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceRestriction {
    pub from: Vec<u32>,
    pub to: Vec<u32>,
    pub unit: u32,
}

/// Isotropy orders per simplex and units per facet incidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicLabeling {
    orders: Vec<u32>,
    units: Vec<u32>,
}

impl CyclicLabeling {
    /// All orders 1, all units 1.
    pub fn trivial(complex: &SimplicialComplex) -> Self {
        CyclicLabeling { orders: vec![1; complex.len()], units: vec![1; complex.incidence_count()] }
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValidationMode {
    /// Local label axioms only.
    Lax,
    /// Label axioms plus closed-pseudomanifold structure.
    Strict,
}

/// A single violated axiom. Simplices are given by vertex lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValidationFinding {
    /// `m_σ` does not divide `m_τ` for a facet τ of σ.
    Divisibility { simplex: Vec<u32>, facet: Vec<u32>, order: u32, facet_order: u32 },
    /// A restriction unit is out of range or not invertible modulo `m_σ`.
    Unit { simplex: Vec<u32>, facet: Vec<u32>, unit: u32, order: u32 },
    /// The two facet chains from σ to a codimension-two face disagree.
    Diamond { simplex: Vec<u32>, face: Vec<u32>, left: u32, right: u32 },
    /// Strict mode: a maximal simplex below the top dimension.
    NotPure { simplex: Vec<u32>, dim: usize, top_dim: usize },
    /// Strict mode: a codimension-one simplex without exactly two cofacets.
    FacetCount { simplex: Vec<u32>, cofacets: u32 },
}

impl fmt::Display for ValidationFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationFinding::Divisibility { simplex, facet, order, facet_order } => write!(
                f,
                "divisibility: order {order} of {simplex:?} does not divide order {facet_order} of its facet {facet:?}"
            ),
            ValidationFinding::Unit { simplex, facet, unit, order } => {
                write!(f, "unit: {unit} on {simplex:?} -> {facet:?} is not a unit modulo {order}")
            }
            ValidationFinding::Diamond { simplex, face, left, right } => write!(
                f,
                "diamond: chains from {simplex:?} to {face:?} give units {left} and {right}"
            ),
            ValidationFinding::NotPure { simplex, dim, top_dim } => {
                write!(f, "pseudomanifold: maximal simplex {simplex:?} has dimension {dim} < {top_dim}")
            }
            ValidationFinding::FacetCount { simplex, cofacets } => {
                write!(f, "pseudomanifold: {simplex:?} bounds {cofacets} top simplices, expected 2")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub findings: Vec<ValidationFinding>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.findings.is_empty()
    }
}

/// A simplicial complex with a cyclic isotropy labeling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbifoldComplex {
    complex: SimplicialComplex,
    labeling: CyclicLabeling,
}

impl OrbifoldComplex {
    /// Trivially labeled complex (every order 1).
    pub fn trivial(complex: SimplicialComplex) -> Self {
        let labeling = CyclicLabeling::trivial(&complex);
        OrbifoldComplex { complex, labeling }
    }

    pub fn empty() -> Self {
        Self::trivial(SimplicialComplex::empty())
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn labeling(&self) -> &CyclicLabeling {
        &self.labeling
    }

    #[inline]
    pub fn order(&self, s: SimplexId) -> u32 {
        self.labeling.orders[s.index()]
    }

    /// Unit of the restriction from `s` to its facet `j` (omitting vertex `j`).
    #[inline]
    pub fn unit(&self, s: SimplexId, j: usize) -> u32 {
        self.labeling.units[self.complex.incidence(s, j)]
    }

    pub fn set_order(&mut self, s: SimplexId, order: u32) -> Result<()> {
        if order == 0 {
            return Err(Error::InvalidOrder { order, min: 1 });
        }
        self.labeling.orders[s.index()] = order;
        Ok(())
    }

    /// Sets the unit on the incidence `s → facet j`; the value is stored as given
    /// and checked by [`validate`].
    pub fn set_unit(&mut self, s: SimplexId, j: usize, unit: u32) {
        let at = self.complex.incidence(s, j);
        self.labeling.units[at] = unit;
    }

    /// Sets the unit of the restriction between two simplices given by vertices.
    pub fn set_restriction(&mut self, from: &[u32], to: &[u32], unit: u32) -> Result<()> {
        let s = self.complex.find(from).ok_or_else(|| Error::UnknownSimplex(from.to_vec()))?;
        let t = self.complex.find(to).ok_or_else(|| Error::UnknownSimplex(to.to_vec()))?;
        let j = self
            .complex
            .facets(s)
            .iter()
            .position(|&f| f == t)
            .ok_or_else(|| Error::NotAFacet { simplex: from.to_vec(), face: to.to_vec() })?;
        self.set_unit(s, j, unit);
        Ok(())
    }

    /// Incidences whose unit differs from the default 1, in incidence order.
    pub fn restrictions(&self) -> Vec<FaceRestriction> {
        let mut out = Vec::new();
        for s in self.complex.ids() {
            for (j, &f) in self.complex.facets(s).iter().enumerate() {
                let unit = self.unit(s, j);
                if unit != 1 {
                    out.push(FaceRestriction {
                        from: self.complex.vertices(s).to_vec(),
                        to: self.complex.vertices(f).to_vec(),
                        unit,
                    });
                }
            }
        }
        out
    }

    /// Whether every top-dimensional simplex has order 1. Derived, never asserted.
    pub fn is_reduced(&self) -> bool {
        match self.complex.dimension() {
            None => true,
            Some(d) => self.complex.ids_of_dim(d).all(|s| self.order(s) == 1),
        }
    }

    /// Total Σ_σ m_σ, the number of inertia nodes.
    pub fn order_sum(&self) -> u64 {
        self.labeling.orders.iter().map(|&m| m as u64).sum()
    }

    /// Effective unit (mod `m_σ`) of the composed restriction from `simplex`
    /// down to its face `face`, following the chain that drops the first
    /// surplus vertex at each step.
    pub fn restriction_unit(&self, simplex: SimplexId, face: SimplexId) -> Result<u32> {
        let c = &self.complex;
        if !c.is_face(face, simplex) {
            return Err(Error::NotAFace { simplex: c.vertices(simplex).to_vec(), face: c.vertices(face).to_vec() });
        }
        let modulus = self.order(simplex) as u64;
        let target = c.vertices(face);
        let mut unit = 1u64 % modulus.max(1);
        let mut current = simplex;
        while current != face {
            let verts = c.vertices(current);
            let j = verts
                .iter()
                .position(|v| target.binary_search(v).is_err())
                .expect("strictly larger simplex has a surplus vertex");
            unit = unit * self.unit(current, j) as u64 % modulus;
            current = c.facets(current)[j];
        }
        Ok(unit as u32)
    }

    /// Image of `element ∈ Z_{m_σ}` in `Z_{m_τ}` for a face τ of σ.
    pub fn restrict_element(&self, simplex: SimplexId, face: SimplexId, element: u32) -> Result<u32> {
        let m = self.order(simplex);
        if element >= m {
            return Err(Error::ElementOutOfRange { element: element as u64, order: m });
        }
        let unit = self.restriction_unit(simplex, face)?;
        Ok(apply_monomorphism(unit, element, m, self.order(face)))
    }

    /// Exact `Σ (-1)^dim / m_σ` over all simplices.
    pub fn euler_satake(&self) -> Rational {
        let mut sum = WeightedSum::default();
        for s in self.complex.ids() {
            sum.add(sign(self.complex.dim(s)), self.order(s));
        }
        sum.total()
    }

    /// Exact `Σ (-1)^dim / m_σ` over the given simplices.
    pub fn euler_satake_of(&self, simplices: &[SimplexId]) -> Rational {
        let mut sum = WeightedSum::default();
        for &s in simplices {
            sum.add(sign(self.complex.dim(s)), self.order(s));
        }
        sum.total()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.complex.euler_characteristic()
    }

    /// Checks divisibility, unit invertibility and diamond compatibility; in
    /// strict mode also the closed-pseudomanifold conditions.
    pub fn validate(&self, mode: ValidationMode) -> ValidationReport {
        let c = &self.complex;
        let mut findings = Vec::new();
        for s in c.ids() {
            let m = self.order(s);
            let facets = c.facets(s);
            for (j, &f) in facets.iter().enumerate() {
                let mf = self.order(f);
                if !mf.is_multiple_of(m) {
                    findings.push(ValidationFinding::Divisibility {
                        simplex: c.vertices(s).to_vec(),
                        facet: c.vertices(f).to_vec(),
                        order: m,
                        facet_order: mf,
                    });
                }
                let u = self.unit(s, j);
                if !unit_in_range(u, m) {
                    findings.push(ValidationFinding::Unit {
                        simplex: c.vertices(s).to_vec(),
                        facet: c.vertices(f).to_vec(),
                        unit: u,
                        order: m,
                    });
                }
            }
            // Facet j then facet i of that (i < j) equals facet i then facet j-1.
            let m64 = m as u64;
            let diamonds = if facets.len() > 2 { facets.len() } else { 0 };
            for j in 1..diamonds {
                for i in 0..j {
                    let via_j = self.unit(s, j) as u64 * self.unit(facets[j], i) as u64 % m64;
                    let via_i = self.unit(s, i) as u64 * self.unit(facets[i], j - 1) as u64 % m64;
                    if via_i != via_j {
                        let face = c.facets(facets[j])[i];
                        findings.push(ValidationFinding::Diamond {
                            simplex: c.vertices(s).to_vec(),
                            face: c.vertices(face).to_vec(),
                            left: via_i as u32,
                            right: via_j as u32,
                        });
                    }
                }
            }
        }
        if mode == ValidationMode::Strict {
            findings.extend(pseudomanifold_findings(c));
        }
        ValidationReport { findings }
    }

    /// Errors unless [`validate`](Self::validate) in lax mode is clean.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate(ValidationMode::Lax);
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidOrbifold(report.findings.len()))
        }
    }

    /// Barycentric subdivision with transported labels.
    ///
    /// A subdivision simplex is a chain `σ_0 < … < σ_k`; its open interior sits
    /// in the open stratum of `σ_k`, so it gets `m_{σ_k}`. Dropping a lower
    /// element keeps the top, giving the identity restriction; dropping the top
    /// restricts along `σ_k → σ_{k-1}`.
    pub fn barycentric_subdivide(&self) -> OrbifoldComplex {
        let sd = self.complex.barycentric_subdivision();
        let mut out = OrbifoldComplex::trivial(sd);
        for s in out.complex.ids() {
            let chain = out.complex.vertices(s);
            let k = chain.len() - 1;
            let top = SimplexId(chain[k]);
            out.labeling.orders[s.index()] = self.order(top);
            if k > 0 {
                let below = SimplexId(chain[k - 1]);
                let unit = self.restriction_unit(top, below).expect("chain elements are nested faces");
                let at = out.complex.incidence(s, k);
                out.labeling.units[at] = unit.max(1);
            }
        }
        out
    }

    pub(crate) fn orders_mut(&mut self) -> &mut [u32] {
        &mut self.labeling.orders
    }
}

/// Allowed units: `1 ≤ u < m` with `gcd(u, m) = 1`; for `m = 1` only `u = 1`.
pub fn unit_in_range(unit: u32, order: u32) -> bool {
    if order <= 1 {
        unit == 1
    } else {
        unit >= 1 && unit < order && unit.gcd(&order) == 1
    }
}

/// `g ↦ u·g·(m_to/m_from) mod m_to`.
#[inline]
pub fn apply_monomorphism(unit: u32, element: u32, m_from: u32, m_to: u32) -> u32 {
    let scale = (m_to / m_from) as u64;
    ((unit as u64 * element as u64 % m_from as u64) * scale % m_to as u64) as u32
}

/// Additive order of `g` in `Z_m`.
#[inline]
pub fn element_order(element: u32, modulus: u32) -> u32 {
    modulus / element.gcd(&modulus)
}

fn pseudomanifold_findings(c: &SimplicialComplex) -> Vec<ValidationFinding> {
    let Some(top) = c.dimension() else { return Vec::new() };
    let mut findings = Vec::new();
    for s in c.maximal_simplices() {
        let d = c.dim(s);
        if d < top {
            findings.push(ValidationFinding::NotPure { simplex: c.vertices(s).to_vec(), dim: d, top_dim: top });
        }
    }
    if top > 0 {
        let counts = c.cofacet_counts();
        for s in c.ids_of_dim(top - 1) {
            if counts[s.index()] != 2 {
                findings.push(ValidationFinding::FacetCount {
                    simplex: c.vertices(s).to_vec(),
                    cofacets: counts[s.index()],
                });
            }
        }
    }
    findings
}

/// Free-function form of [`OrbifoldComplex::validate`].
pub fn validate(oc: &OrbifoldComplex, mode: ValidationMode) -> ValidationReport {
    oc.validate(mode)
}

/// Free-function form of [`OrbifoldComplex::restrict_element`].
pub fn restrict_element(oc: &OrbifoldComplex, simplex: SimplexId, face: SimplexId, element: u32) -> Result<u32> {
    oc.restrict_element(simplex, face, element)
}

/// Free-function form of [`OrbifoldComplex::euler_satake`] with an optional subset.
pub fn euler_satake(oc: &OrbifoldComplex, subset: Option<&[SimplexId]>) -> Rational {
    match subset {
        Some(s) => oc.euler_satake_of(s),
        None => oc.euler_satake(),
    }
}

/// Free-function form of [`OrbifoldComplex::barycentric_subdivide`].
pub fn barycentric_subdivide(oc: &OrbifoldComplex) -> OrbifoldComplex {
    oc.barycentric_subdivide()
}
