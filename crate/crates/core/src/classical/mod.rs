//! Classical k-local MaxCut baselines evaluated on edge lightcones.

mod bm;
mod threshold;

pub use bm::{bm_coefficients, bm_cut_probability, bm_exact, BmConfig, BmScheme};
pub use threshold::{
    optimal_thresholds, threshold_analytic, threshold_cut_probability, threshold_exact, ThresholdConfig,
    ThresholdSearch, EXACT_VERTEX_CAP,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graphs::{EdgeOrbit, GraphSource, LocalSubgraph};

/// A Monte Carlo (or exact, with zero error) probability estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: u64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            stderr: 0.0,
            samples: 0,
        }
    }

    fn from_hits(hits: u64, samples: u64) -> Self {
        let p = hits as f64 / samples as f64;
        Self {
            value: p,
            stderr: (p * (1.0 - p) / samples as f64).sqrt(),
            samples,
        }
    }
}

const BATCH: u64 = 1 << 14;

/// Counts successes of `trial` over `samples` draws. Batch `b` uses ChaCha stream `b`
/// of `seed`, so results do not depend on how batches are scheduled.
pub(crate) fn monte_carlo<F>(samples: u64, seed: u64, trial: F) -> Estimate
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    let batches = samples.div_ceil(BATCH);
    let hits: u64 = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let n = BATCH.min(samples - b * BATCH);
            (0..n).filter(|_| trial(&mut rng)).count() as u64
        })
        .sum();
    Estimate::from_hits(hits, samples)
}

/// Seed for orbit group `i`, so groups draw independent samples and their standard
/// errors add in quadrature.
pub(crate) fn group_seed(seed: u64, i: usize) -> u64 {
    let mut z = seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Orbits grouped by the automorphisms of the atom system (tilings are already one
/// orbit per edge type), each with its summed weight and lightcone.
pub fn orbit_groups(source: &GraphSource, radius: usize) -> Result<Vec<(f64, EdgeOrbit, LocalSubgraph)>> {
    let pairs = source.orbits_with_lightcones(radius)?;
    let Some(spec) = source.spec() else {
        return Ok(pairs.into_iter().map(|(o, g)| (o.weight_f64(), o, g)).collect());
    };
    let auts = spec.automorphisms();
    let key = |o: &EdgeOrbit| {
        auts.iter()
            .map(|(s, pi)| {
                (
                    pi[o.category],
                    s[o.edge.0].min(s[o.edge.1]),
                    s[o.edge.0].max(s[o.edge.1]),
                )
            })
            .min()
            .unwrap_or((o.category, o.edge.0, o.edge.1))
    };
    let mut groups: Vec<((usize, usize, usize), f64, EdgeOrbit, LocalSubgraph)> = Vec::new();
    for (o, g) in pairs {
        let k = key(&o);
        match groups.iter_mut().find(|x| x.0 == k) {
            Some(x) => x.1 += o.weight_f64(),
            None => groups.push((k, o.weight_f64(), o, g)),
        }
    }
    Ok(groups.into_iter().map(|(_, w, o, g)| (w, o, g)).collect())
}

/// Weighted sum over orbits with standard errors added in quadrature.
pub fn combine(parts: &[(f64, Estimate)]) -> Estimate {
    let value = parts.iter().map(|(w, e)| w * e.value).sum();
    let stderr = parts.iter().map(|(w, e)| (w * e.stderr).powi(2)).sum::<f64>().sqrt();
    let samples = parts.iter().map(|(_, e)| e.samples).max().unwrap_or(0);
    Estimate { value, stderr, samples }
}

/// A classical algorithm with its configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Algorithm {
    Threshold(ThresholdConfig),
    Bm(BmConfig),
}

/// `sum_g w_g Pr[edge g is cut]` over the graph's orbits.
pub fn classical_cut_fraction(source: &GraphSource, algorithm: &Algorithm) -> Result<Estimate> {
    let mut parts = Vec::new();
    match algorithm {
        Algorithm::Threshold(cfg) => {
            for (i, (w, _, g)) in orbit_groups(source, cfg.steps())?.into_iter().enumerate() {
                let cfg = ThresholdConfig {
                    seed: group_seed(cfg.seed, i),
                    ..cfg.clone()
                };
                parts.push((w, threshold_cut_probability(&g, &cfg)?));
            }
        }
        Algorithm::Bm(cfg) => {
            let sharing = source.sharing();
            for (i, (w, _, g)) in orbit_groups(source, cfg.k + 1)?.into_iter().enumerate() {
                let cfg = BmConfig {
                    seed: group_seed(cfg.seed, i),
                    ..cfg.clone()
                };
                parts.push((w, bm_cut_probability(&g, &cfg, &sharing)?));
            }
        }
    }
    Ok(combine(&parts))
}
