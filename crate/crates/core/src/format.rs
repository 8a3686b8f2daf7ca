//! The JSON orbifold file format (version "1").
//!
//! ```json
//! {
//!   "format_version": "1",
//!   "vertices": 3,
//!   "maximal_simplices": [[0, 1], [1, 2], [0, 2]],
//!   "isotropy": [{"simplex": [0, 1], "order": 5}],
//!   "restrictions": [{"from": [0, 2], "to": [0], "unit": 2}]
//! }
//! ```
//!
//! Faces of the maximal simplices are added on load. Simplices not listed in
//! `isotropy` have order 1 and incidences not listed in `restrictions` have
//! unit 1. The canonical form written by [`serialize`] lists maximal simplices,
//! non-trivial orders and non-default units in simplex-id order.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbifold::{unit_in_range, FaceRestriction, OrbifoldComplex};
use crate::SimplicialComplex;

pub const FORMAT_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsotropyEntry {
    pub simplex: Vec<u32>,
    pub order: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbifoldFile {
    pub format_version: String,
    pub vertices: u32,
    pub maximal_simplices: Vec<Vec<u32>>,
    #[serde(default)]
    pub isotropy: Vec<IsotropyEntry>,
    #[serde(default)]
    pub restrictions: Vec<FaceRestriction>,
}

impl OrbifoldFile {
    pub fn from_orbifold(oc: &OrbifoldComplex) -> Self {
        let c = oc.complex();
        OrbifoldFile {
            format_version: FORMAT_VERSION.to_string(),
            vertices: c.vertex_count(),
            maximal_simplices: c.maximal_simplices().iter().map(|&s| c.vertices(s).to_vec()).collect(),
            isotropy: c
                .ids()
                .filter(|&s| oc.order(s) != 1)
                .map(|s| IsotropyEntry { simplex: c.vertices(s).to_vec(), order: oc.order(s) })
                .collect(),
            restrictions: oc.restrictions(),
        }
    }

    /// Builds the complex, checking orders, units and that every referenced
    /// simplex exists. Label axioms are left to validation.
    pub fn to_orbifold(&self) -> Result<OrbifoldComplex> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::UnknownVersion(self.format_version.clone()));
        }
        let complex = SimplicialComplex::build_with_vertex_count(self.vertices, &self.maximal_simplices)?;
        let mut oc = OrbifoldComplex::trivial(complex);
        let mut seen = vec![false; oc.complex().len()];
        for entry in &self.isotropy {
            let s = oc.complex().find(&entry.simplex).ok_or_else(|| Error::UnknownSimplex(entry.simplex.clone()))?;
            if std::mem::replace(&mut seen[s.index()], true) {
                return Err(Error::Format(format!("isotropy of {:?} given twice", entry.simplex)));
            }
            oc.set_order(s, entry.order)?;
        }
        for r in &self.restrictions {
            let s = oc.complex().find(&r.from).ok_or_else(|| Error::UnknownSimplex(r.from.clone()))?;
            let m = oc.order(s);
            if !unit_in_range(r.unit, m) {
                return Err(Error::InvalidUnit { unit: r.unit, order: m });
            }
            oc.set_restriction(&r.from, &r.to, r.unit)?;
        }
        Ok(oc)
    }
}

pub fn parse_str(text: &str) -> Result<OrbifoldComplex> {
    let file: OrbifoldFile = serde_json::from_str(text)?;
    file.to_orbifold()
}

pub fn parse(path: impl AsRef<Path>) -> Result<OrbifoldComplex> {
    parse_str(&std::fs::read_to_string(path)?)
}

pub fn to_json(oc: &OrbifoldComplex) -> String {
    let mut s = serde_json::to_string_pretty(&OrbifoldFile::from_orbifold(oc)).expect("serializable");
    s.push('\n');
    s
}

pub fn serialize(oc: &OrbifoldComplex, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_json(oc))?;
    Ok(())
}
