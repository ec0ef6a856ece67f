//! Cut fractions for any graph source through either engine.

use serde::{Deserialize, Serialize};

use crate::engine::{cut_fraction_iterative, EngineOptions};
use crate::error::{Error, Result};
use crate::graphs::{EdgeOrbit, GraphSource, LocalSubgraph};
use crate::oracle::{contraction_expectation, elimination_order, CircuitSpec, EliminationOrder, DEFAULT_ENTRY_BUDGET};
use crate::params::ParamSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Iterative,
    Oracle,
}

impl std::str::FromStr for EngineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iterative" => Ok(EngineKind::Iterative),
            "oracle" => Ok(EngineKind::Oracle),
            other => Err(Error::InvalidParams(format!("unknown engine {other:?}"))),
        }
    }
}

impl std::fmt::Display for EngineKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EngineKind::Iterative => "iterative",
            EngineKind::Oracle => "oracle",
        })
    }
}

/// Lightcones prepared once for repeated contraction at one depth.
#[derive(Clone, Debug)]
pub struct OracleEvaluator {
    pub p: usize,
    pub budget: u128,
    pub orbits: Vec<(EdgeOrbit, LocalSubgraph, EliminationOrder)>,
}

impl OracleEvaluator {
    pub fn new(source: &GraphSource, p: usize, budget: u128) -> Result<Self> {
        let orbits = source
            .orbits_with_lightcones(p)?
            .into_iter()
            .map(|(o, g)| {
                let g = g.trimmed();
                let order = elimination_order(&g);
                (o, g, order)
            })
            .collect();
        Ok(Self { p, budget, orbits })
    }

    pub fn max_width(&self) -> usize {
        self.orbits.iter().map(|o| o.2.width).max().unwrap_or(0)
    }

    pub fn cut_fraction(&self, params: &ParamSet) -> Result<f64> {
        if params.p() != self.p {
            return Err(Error::InvalidParams(format!(
                "betas: expected {} layers, got {}",
                self.p,
                params.p()
            )));
        }
        let mut total = 0.0;
        for (o, g, order) in &self.orbits {
            let zz = contraction_expectation(CircuitSpec::new(g, params)?, order, self.budget)?;
            total -= o.weight_f64() * zz;
        }
        Ok((0.5 + 0.5 * total).clamp(0.0, 1.0))
    }
}

/// Expected cut fraction. Tilings require the oracle engine.
pub fn cut_fraction(source: &GraphSource, params: &ParamSet, engine: EngineKind) -> Result<f64> {
    params.check_for(source.num_categories(), params.p())?;
    match (engine, source) {
        (EngineKind::Iterative, GraphSource::Product { spec, .. }) => {
            cut_fraction_iterative(spec, params, EngineOptions::default())
        }
        (EngineKind::Iterative, GraphSource::Tiling(t)) => {
            Err(Error::Unsupported(format!("{} needs the oracle engine", t.name())))
        }
        (EngineKind::Oracle, _) => OracleEvaluator::new(source, params.p(), DEFAULT_ENTRY_BUDGET)?.cut_fraction(params),
    }
}
