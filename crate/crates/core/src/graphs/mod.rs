//! Atom systems, product-graph addresses, lightcones and tilings.

mod address;
mod lightcone;
mod spec;
mod tiling;

pub use address::{neighbors, VertexAddress};
pub use lightcone::{
    build_lightcone, build_lightcone_rooted, enumerate_edge_orbits, EdgeOrbit, LocalSubgraph, VertexLabel,
};
pub use spec::{
    builtin_spec, symmetry_classes, validate_spec, AdditiveProductSpec, AtomGraph, SpecFile, BUILTIN_SPECS, UNREACHABLE,
};
pub use tiling::{pentagon_hexagon_patch, tiling_orbits_and_lightcones, tri_square_hex_patch, Patch, TilingFamily};

use crate::error::{Error, Result};

/// Anything the engines can evaluate: an additive product graph or a tiling.
#[derive(Clone, Debug)]
pub enum GraphSource {
    Product { name: String, spec: AdditiveProductSpec },
    Tiling(TilingFamily),
}

/// Every name accepted by [`GraphSource::named`].
pub const GRAPH_NAMES: [&str; 6] = ["fig-a", "fig-b", "fig-c", "k34-tree", "tiling-5-6", "tiling-3-4-6"];

impl GraphSource {
    pub fn named(name: &str) -> Result<Self> {
        if let Some(t) = TilingFamily::from_name(name) {
            return Ok(GraphSource::Tiling(t));
        }
        Ok(GraphSource::Product {
            name: name.to_string(),
            spec: builtin_spec(name)?,
        })
    }

    pub fn from_spec_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let spec = AdditiveProductSpec::from_json(&text)?;
        Ok(GraphSource::Product {
            name: path.display().to_string(),
            spec,
        })
    }

    pub fn name(&self) -> &str {
        match self {
            GraphSource::Product { name, .. } => name,
            GraphSource::Tiling(t) => t.name(),
        }
    }

    pub fn spec(&self) -> Option<&AdditiveProductSpec> {
        match self {
            GraphSource::Product { spec, .. } => Some(spec),
            GraphSource::Tiling(_) => None,
        }
    }

    pub fn num_categories(&self) -> usize {
        match self {
            GraphSource::Product { spec, .. } => spec.num_categories(),
            GraphSource::Tiling(_) => TilingFamily::NUM_TYPES,
        }
    }

    /// Category → parameter class. Tiling edge types are their own classes.
    pub fn sharing(&self) -> Vec<usize> {
        match self {
            GraphSource::Product { spec, .. } => spec.sharing().to_vec(),
            GraphSource::Tiling(_) => (0..TilingFamily::NUM_TYPES).collect(),
        }
    }

    pub fn num_classes(&self) -> usize {
        match self {
            GraphSource::Product { spec, .. } => spec.num_classes(),
            GraphSource::Tiling(_) => TilingFamily::NUM_TYPES,
        }
    }

    /// All edge orbits with their radius-`radius` lightcones.
    pub fn orbits_with_lightcones(&self, radius: usize) -> Result<Vec<(EdgeOrbit, LocalSubgraph)>> {
        match self {
            GraphSource::Product { spec, .. } => Ok(enumerate_edge_orbits(spec)
                .into_iter()
                .map(|o| {
                    let g = build_lightcone(spec, &o, radius);
                    (o, g)
                })
                .collect()),
            GraphSource::Tiling(t) => tiling_orbits_and_lightcones(*t, radius),
        }
    }

    pub fn require_spec(&self) -> Result<&AdditiveProductSpec> {
        self.spec()
            .ok_or_else(|| Error::Unsupported(format!("{} is not an additive product graph", self.name())))
    }
}
