//! Face-closed simplicial complexes.
//!
//! Simplices are stored level by level (one level per dimension) as flat,
//! lexicographically sorted vertex tuples. A simplex id is its position in the
//! global order "by dimension, then lexicographic", which makes every
//! complex built from the same simplices identical. Because lower-dimensional
//! simplices always get smaller ids, a chain of faces listed bottom to top is
//! an increasing id sequence; barycentric subdivision relies on this.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a simplex in its complex.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[repr(transparent)]
#[serde(transparent)]
pub struct SimplexId(pub u32);

impl SimplexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for SimplexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Level {
    width: usize,
    /// Global id of the first simplex in this level.
    offset: usize,
    /// Global index of the first facet incidence of this level.
    incidence_offset: usize,
    verts: Vec<u32>,
    /// `width` facet ids per simplex, facet `j` omitting vertex `j`; empty for vertices.
    facets: Vec<SimplexId>,
}

impl Level {
    fn len(&self) -> usize {
        self.verts.len() / self.width
    }

    fn simplex(&self, local: usize) -> &[u32] {
        &self.verts[local * self.width..(local + 1) * self.width]
    }

    fn find(&self, key: &[u32]) -> Option<usize> {
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.simplex(mid).cmp(key) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// Sorts and deduplicates a flat buffer of `width`-tuples.
    fn sorted(width: usize, flat: Vec<u32>) -> Vec<u32> {
        let n = flat.len() / width;
        let mut order: Vec<usize> = (0..n).collect();
        let tuple = |i: usize| &flat[i * width..(i + 1) * width];
        order.sort_unstable_by(|&a, &b| tuple(a).cmp(tuple(b)));
        order.dedup_by(|a, b| tuple(*a) == tuple(*b));
        let mut out = Vec::with_capacity(order.len() * width);
        for i in order {
            out.extend_from_slice(tuple(i));
        }
        out
    }
}

/// A finite simplicial complex closed under taking faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: u32,
    levels: Vec<Level>,
    len: usize,
    incidences: usize,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        SimplicialComplex { vertex_count: 0, levels: Vec::new(), len: 0, incidences: 0 }
    }

    /// Face closure of `maximal`; the vertex count is one past the largest index used.
    pub fn build<S: AsRef<[u32]>>(maximal: &[S]) -> Result<Self> {
        let count = maximal
            .iter()
            .flat_map(|s| s.as_ref().iter().copied())
            .max()
            .map_or(0, |v| v + 1);
        Self::build_with_vertex_count(count, maximal)
    }

    /// Face closure of `maximal` over a fixed vertex set `0..vertex_count`.
    pub fn build_with_vertex_count<S: AsRef<[u32]>>(vertex_count: u32, maximal: &[S]) -> Result<Self> {
        if maximal.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut buffers: Vec<Vec<u32>> = Vec::new();
        let mut sorted = Vec::new();
        for s in maximal {
            sorted.clear();
            sorted.extend_from_slice(s.as_ref());
            sorted.sort_unstable();
            if sorted.is_empty() {
                return Err(Error::EmptySimplex(sorted.clone()));
            }
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::DuplicateVertex(s.as_ref().to_vec()));
            }
            if let Some(&v) = sorted.iter().find(|&&v| v >= vertex_count) {
                return Err(Error::VertexOutOfRange { vertex: v, count: vertex_count });
            }
            let k = sorted.len();
            if k > 24 {
                return Err(Error::Format(format!("simplex with {k} vertices is too large")));
            }
            if buffers.len() < k {
                buffers.resize_with(k, Vec::new);
            }
            for mask in 1u32..(1 << k) {
                let width = mask.count_ones() as usize;
                let buf = &mut buffers[width - 1];
                buf.extend((0..k).filter(|i| mask & (1 << i) != 0).map(|i| sorted[i]));
            }
        }
        Ok(Self::from_levels(vertex_count, buffers))
    }

    /// Assembles a complex from unsorted per-dimension tuple buffers, which
    /// must already be face closed.
    pub(crate) fn from_levels(vertex_count: u32, buffers: Vec<Vec<u32>>) -> Self {
        let mut levels: Vec<Level> = Vec::with_capacity(buffers.len());
        let (mut offset, mut incidence_offset) = (0, 0);
        for (d, flat) in buffers.into_iter().enumerate() {
            let width = d + 1;
            let verts = Level::sorted(width, flat);
            if verts.is_empty() {
                break;
            }
            let mut level = Level { width, offset, incidence_offset, verts, facets: Vec::new() };
            if d > 0 {
                let below = &levels[d - 1];
                let mut facets = Vec::with_capacity(level.verts.len());
                let mut scratch = Vec::with_capacity(width - 1);
                for local in 0..level.len() {
                    let s = level.simplex(local);
                    for j in 0..width {
                        scratch.clear();
                        scratch.extend(s.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &v)| v));
                        let f = below.find(&scratch).expect("facet present in face-closed input");
                        facets.push(SimplexId((below.offset + f) as u32));
                    }
                }
                level.facets = facets;
                incidence_offset += level.verts.len();
            }
            offset += level.len();
            levels.push(level);
        }
        SimplicialComplex { vertex_count, levels, len: offset, incidences: incidence_offset }
    }

    pub fn vertex_count(&self) -> u32 {
        self.vertex_count
    }

    /// Total number of simplices of all dimensions.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.levels.len().checked_sub(1)
    }

    pub fn ids(&self) -> impl DoubleEndedIterator<Item = SimplexId> + ExactSizeIterator {
        (0..self.len as u32).map(SimplexId)
    }

    /// Ids of all simplices of dimension `d`.
    pub fn ids_of_dim(&self, d: usize) -> impl Iterator<Item = SimplexId> {
        let range = self.levels.get(d).map_or(0..0, |l| l.offset..l.offset + l.len());
        range.map(|i| SimplexId(i as u32))
    }

    /// Number of simplices per dimension (the f-vector).
    pub fn f_vector(&self) -> Vec<usize> {
        self.levels.iter().map(Level::len).collect()
    }

    #[inline]
    fn locate(&self, id: SimplexId) -> (&Level, usize) {
        let i = id.index();
        let level = self
            .levels
            .iter()
            .rev()
            .find(|l| l.offset <= i)
            .expect("simplex id in range");
        (level, i - level.offset)
    }

    #[inline]
    pub fn dim(&self, id: SimplexId) -> usize {
        self.locate(id).0.width - 1
    }

    #[inline]
    pub fn vertices(&self, id: SimplexId) -> &[u32] {
        let (level, local) = self.locate(id);
        level.simplex(local)
    }

    /// Codimension-one faces; entry `j` omits vertex `j`.
    #[inline]
    pub fn facets(&self, id: SimplexId) -> &[SimplexId] {
        let (level, local) = self.locate(id);
        if level.width == 1 {
            &[]
        } else {
            &level.facets[local * level.width..(local + 1) * level.width]
        }
    }

    /// Position of the (simplex, facet `j`) incidence in a flat per-incidence array.
    #[inline]
    pub fn incidence(&self, id: SimplexId, j: usize) -> usize {
        let (level, local) = self.locate(id);
        debug_assert!(level.width > 1 && j < level.width);
        level.incidence_offset + local * level.width + j
    }

    /// Number of (simplex, facet) incidences.
    pub fn incidence_count(&self) -> usize {
        self.incidences
    }

    /// Looks up a simplex by its vertex set, in any order.
    pub fn find(&self, vertices: &[u32]) -> Option<SimplexId> {
        if vertices.is_empty() {
            return None;
        }
        let level = self.levels.get(vertices.len() - 1)?;
        let hit = if vertices.windows(2).all(|w| w[0] < w[1]) {
            level.find(vertices)
        } else {
            let mut sorted = vertices.to_vec();
            sorted.sort_unstable();
            level.find(&sorted)
        };
        hit.map(|local| SimplexId((level.offset + local) as u32))
    }

    /// Whether `face` (given by vertices) is a face of `simplex`, including itself.
    pub fn is_face(&self, face: SimplexId, simplex: SimplexId) -> bool {
        let (f, s) = (self.vertices(face), self.vertices(simplex));
        f.iter().all(|v| s.binary_search(v).is_ok())
    }

    /// Simplices that are not a facet of anything.
    pub fn maximal_simplices(&self) -> Vec<SimplexId> {
        let mut covered = vec![false; self.len];
        for level in self.levels.iter().skip(1) {
            for f in &level.facets {
                covered[f.index()] = true;
            }
        }
        self.ids().filter(|id| !covered[id.index()]).collect()
    }

    /// Number of cofacets of every simplex, indexed by id.
    pub fn cofacet_counts(&self) -> Vec<u32> {
        let mut counts = vec![0u32; self.len];
        for level in self.levels.iter().skip(1) {
            for f in &level.facets {
                counts[f.index()] += 1;
            }
        }
        counts
    }

    /// Alternating count `Σ (-1)^dim` over the whole complex.
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// Alternating count over a set of simplices.
    pub fn euler_characteristic_of(&self, simplices: &[SimplexId]) -> i64 {
        simplices.iter().map(|&s| sign(self.dim(s))).sum()
    }

    /// Checks that every facet of every member is a member.
    pub fn check_face_closed(&self, simplices: &[SimplexId]) -> Result<()> {
        let mut member = vec![false; self.len];
        for &s in simplices {
            member[s.index()] = true;
        }
        for &s in simplices {
            if let Some(f) = self.facets(s).iter().find(|f| !member[f.index()]) {
                return Err(Error::NotFaceClosed(self.vertices(*f).to_vec()));
            }
        }
        Ok(())
    }

    /// The barycentric subdivision. Vertex `i` of the result is the barycenter
    /// of simplex `#i` of `self`, and each simplex of the result lists its
    /// chain of original simplices bottom to top.
    pub fn barycentric_subdivision(&self) -> SimplicialComplex {
        let top = self.levels.len();
        let mut buffers: Vec<Vec<u32>> = vec![Vec::new(); top];
        let mut faces: Vec<u32> = Vec::new();
        let mut chain: Vec<u32> = Vec::with_capacity(top);
        let mut scratch: Vec<u32> = Vec::with_capacity(top);
        for id in self.ids() {
            let verts = self.vertices(id);
            let k = verts.len();
            // Every face of `id`, indexed by vertex-position mask.
            faces.clear();
            faces.push(u32::MAX);
            for mask in 1u32..(1 << k) {
                if mask == (1 << k) - 1 {
                    faces.push(id.0);
                    continue;
                }
                scratch.clear();
                scratch.extend((0..k).filter(|i| mask & (1 << i) != 0).map(|i| verts[i]));
                faces.push(self.find(&scratch).expect("face of a stored simplex").0);
            }
            chain.clear();
            emit_chains((1 << k) - 1, &faces, &mut chain, &mut buffers);
        }
        SimplicialComplex::from_levels(self.len as u32, buffers)
    }
}

/// Emits every chain of faces ending at `mask`, descending through proper submasks.
fn emit_chains(mask: u32, faces: &[u32], chain: &mut Vec<u32>, buffers: &mut [Vec<u32>]) {
    chain.push(faces[mask as usize]);
    let buf = &mut buffers[chain.len() - 1];
    buf.extend(chain.iter().rev());
    let mut sub = (mask - 1) & mask;
    while sub != 0 {
        emit_chains(sub, faces, chain, buffers);
        sub = (sub - 1) & mask;
    }
    chain.pop();
}

#[inline]
pub(crate) fn sign(dim: usize) -> i64 {
    if dim.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Face closure of the given maximal simplices (`build_complex`).
pub fn build_complex<S: AsRef<[u32]>>(maximal: &[S]) -> Result<SimplicialComplex> {
    SimplicialComplex::build(maximal)
}
