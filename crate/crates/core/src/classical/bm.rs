use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{monte_carlo, Estimate};
use crate::error::{Error, Result};
use crate::graphs::LocalSubgraph;

/// Per-distance coefficient rules for the signed Gaussian sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BmScheme {
    /// `(D - 1)^(-d/2)`.
    Para1,
    /// One over the square root of the distance-`d` shell size.
    Para2,
    /// Shell restricted to vertices strictly closer to `u` than to the reference neighbor.
    Para3,
    /// Shell restricted to vertices not farther from `u` than from the reference neighbor.
    Para4,
}

impl std::str::FromStr for BmScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "para1" => Ok(BmScheme::Para1),
            "para2" => Ok(BmScheme::Para2),
            "para3" => Ok(BmScheme::Para3),
            "para4" => Ok(BmScheme::Para4),
            other => Err(Error::InvalidParams(format!("unknown scheme {other:?}"))),
        }
    }
}

impl std::fmt::Display for BmScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BmScheme::Para1 => "para1",
            BmScheme::Para2 => "para2",
            BmScheme::Para3 => "para3",
            BmScheme::Para4 => "para4",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BmConfig {
    pub k: usize,
    pub scheme: BmScheme,
    /// Edge class whose neighbor serves as reference for Para3/Para4.
    pub neighbor_class: usize,
    /// Branching constant for Para1; the endpoint degree when `None`.
    pub d: Option<f64>,
    /// Para2 normalized by the distance-`k` shell only.
    pub literal_k: bool,
    pub samples: u64,
    pub seed: u64,
}

impl BmConfig {
    pub fn new(k: usize, scheme: BmScheme, samples: u64, seed: u64) -> Self {
        Self {
            k,
            scheme,
            neighbor_class: 0,
            d: None,
            literal_k: false,
            samples,
            seed,
        }
    }
}

/// Coefficient of every lightcone vertex in `X_u`'s sum: `(-1)^d c(d)` for `d(w, u) <= k`,
/// zero beyond. `sharing` maps edge categories to classes.
pub fn bm_coefficients(g: &LocalSubgraph, u: usize, cfg: &BmConfig, sharing: &[usize]) -> Result<Vec<f64>> {
    if cfg.k == 0 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    if g.radius < cfg.k + 1 {
        return Err(Error::RadiusTooSmall {
            radius: g.radius,
            required: cfg.k + 1,
        });
    }
    let k = cfg.k;
    let du = g.distances_from(u);
    let shell = |d: usize| du.iter().filter(|&&x| x == d).count();
    let coef: Vec<f64> = match cfg.scheme {
        BmScheme::Para1 => {
            let d = cfg.d.unwrap_or(g.degree(u) as f64);
            if d < 2.0 {
                return Err(Error::InvalidParams(format!("Para1 needs D >= 2, got {d}")));
            }
            (0..=k).map(|i| (d - 1.0).powf(-(i as f64) / 2.0)).collect()
        }
        BmScheme::Para2 if cfg.literal_k => vec![(shell(k) as f64).powf(-0.5); k + 1],
        BmScheme::Para2 => (0..=k).map(|i| (shell(i) as f64).powf(-0.5)).collect(),
        BmScheme::Para3 | BmScheme::Para4 => {
            let reference = g
                .adjacency()
                .swap_remove(u)
                .into_iter()
                .filter(|&(_, c)| sharing.get(c) == Some(&cfg.neighbor_class))
                .map(|(w, _)| w)
                .min()
                .ok_or_else(|| Error::InvalidParams(format!("vertex has no edge of class {}", cfg.neighbor_class)))?;
            let dv = g.distances_from(reference);
            let strict = cfg.scheme == BmScheme::Para3;
            (0..=k)
                .map(|i| {
                    let size = (0..du.len())
                        .filter(|&w| du[w] == i && if strict { du[w] < dv[w] } else { du[w] <= dv[w] })
                        .count();
                    if size == 0 {
                        0.0
                    } else {
                        (size as f64).powf(-0.5)
                    }
                })
                .collect()
        }
    };
    Ok(du
        .iter()
        .map(|&d| {
            if d <= k {
                if d % 2 == 0 {
                    coef[d]
                } else {
                    -coef[d]
                }
            } else {
                0.0
            }
        })
        .collect())
}

/// Monte Carlo estimate of `Pr[X_u != X_v]` for the root edge `(u, v)`.
pub fn bm_cut_probability(g: &LocalSubgraph, cfg: &BmConfig, sharing: &[usize]) -> Result<Estimate> {
    if cfg.samples == 0 {
        return Err(Error::InvalidParams("samples must be at least 1".into()));
    }
    let (u, v) = g.root_edge;
    let a = bm_coefficients(g, u, cfg, sharing)?;
    let b = bm_coefficients(g, v, cfg, sharing)?;
    let support: Vec<(f64, f64)> = a
        .iter()
        .zip(&b)
        .filter(|(x, y)| **x != 0.0 || **y != 0.0)
        .map(|(x, y)| (*x, *y))
        .collect();
    Ok(monte_carlo(cfg.samples, cfg.seed, |rng| {
        let (mut sa, mut sb) = (0.0, 0.0);
        for &(x, y) in &support {
            let z: f64 = rng.sample(StandardNormal);
            sa += x * z;
            sb += y * z;
        }
        (sa > 0.0) != (sb > 0.0)
    }))
}

/// Exact `Pr[X_u != X_v] = arccos(rho) / pi` for the two jointly Gaussian sums.
pub fn bm_exact(g: &LocalSubgraph, cfg: &BmConfig, sharing: &[usize]) -> Result<f64> {
    let (u, v) = g.root_edge;
    let a = bm_coefficients(g, u, cfg, sharing)?;
    let b = bm_coefficients(g, v, cfg, sharing)?;
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>();
    let rho = dot(&a, &b) / (dot(&a, &a) * dot(&b, &b)).sqrt();
    Ok(rho.clamp(-1.0, 1.0).acos() / std::f64::consts::PI)
}
