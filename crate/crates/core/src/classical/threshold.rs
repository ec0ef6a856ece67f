use num_rational::Ratio;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::{combine, group_seed, monte_carlo, orbit_groups, Estimate};
use crate::error::{Error, Result};
use crate::graphs::{GraphSource, LocalSubgraph};

/// Largest lightcone enumerated exactly by [`threshold_exact`].
pub const EXACT_VERTEX_CAP: usize = 22;

/// `thresholds[i]` is used in round `i + 1`; the number of rounds is its length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdConfig {
    pub thresholds: Vec<usize>,
    pub samples: u64,
    pub seed: u64,
}

impl ThresholdConfig {
    pub fn steps(&self) -> usize {
        self.thresholds.len()
    }

    fn check(&self, g: &LocalSubgraph) -> Result<()> {
        if self.thresholds.is_empty() || self.samples == 0 {
            return Err(Error::InvalidParams(
                "threshold run needs at least one step and one sample".into(),
            ));
        }
        if g.radius < self.steps() {
            return Err(Error::RadiusTooSmall {
                radius: g.radius,
                required: self.steps(),
            });
        }
        Ok(())
    }
}

/// Synchronous rounds on a lightcone: in round `i` only vertices within `steps - i` of
/// the root edge move, so every update sees its full neighborhood.
struct Rounds {
    adj: Vec<Vec<usize>>,
    movers: Vec<Vec<usize>>,
    thresholds: Vec<usize>,
    root: (usize, usize),
}

impl Rounds {
    fn new(g: &LocalSubgraph, thresholds: &[usize]) -> Self {
        let adj = g
            .adjacency()
            .into_iter()
            .map(|a| a.into_iter().map(|(w, _)| w).collect())
            .collect();
        let n = thresholds.len();
        let movers = (1..=n)
            .map(|i| (0..g.num_vertices()).filter(|&v| g.dist[v] <= n - i).collect())
            .collect();
        Self {
            adj,
            movers,
            thresholds: thresholds.to_vec(),
            root: g.root_edge,
        }
    }

    /// Runs all rounds on `spins` (true = -1) and reports whether the root edge is cut.
    fn cut(&self, spins: &mut [bool], scratch: &mut Vec<(usize, bool)>) -> bool {
        for (movers, &tau) in self.movers.iter().zip(&self.thresholds) {
            scratch.clear();
            for &v in movers {
                let same = self.adj[v].iter().filter(|&&w| spins[w] == spins[v]).count();
                if same >= tau {
                    scratch.push((v, !spins[v]));
                }
            }
            for &(v, s) in scratch.iter() {
                spins[v] = s;
            }
        }
        spins[self.root.0] != spins[self.root.1]
    }
}

/// Monte Carlo probability that the root edge ends cut, from uniform random spins.
pub fn threshold_cut_probability(g: &LocalSubgraph, cfg: &ThresholdConfig) -> Result<Estimate> {
    cfg.check(g)?;
    let rounds = Rounds::new(g, &cfg.thresholds);
    let n = g.num_vertices();
    Ok(monte_carlo(cfg.samples, cfg.seed, |rng| {
        let mut spins = vec![false; n];
        let mut word = 0u64;
        for (i, s) in spins.iter_mut().enumerate() {
            if i % 64 == 0 {
                word = rng.next_u64();
            }
            *s = word >> (i % 64) & 1 == 1;
        }
        rounds.cut(&mut spins, &mut Vec::new())
    }))
}

/// Exact probability by enumerating all `2^n` initial spin assignments (`n` at most
/// [`EXACT_VERTEX_CAP`]).
pub fn threshold_exact(g: &LocalSubgraph, thresholds: &[usize]) -> Result<f64> {
    let n = g.num_vertices();
    if n > EXACT_VERTEX_CAP {
        return Err(Error::TooLarge {
            n,
            cap: EXACT_VERTEX_CAP,
        });
    }
    if g.radius < thresholds.len() {
        return Err(Error::RadiusTooSmall {
            radius: g.radius,
            required: thresholds.len(),
        });
    }
    let rounds = Rounds::new(g, thresholds);
    let mut spins = vec![false; n];
    let mut scratch = Vec::new();
    let mut hits = 0u64;
    for x in 0..1u64 << n {
        for (i, s) in spins.iter_mut().enumerate() {
            *s = x >> i & 1 == 1;
        }
        if rounds.cut(&mut spins, &mut scratch) {
            hits += 1;
        }
    }
    Ok(hits as f64 / (1u64 << n) as f64)
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Closed form for one round of the threshold algorithm on the `d`-regular tree. It
/// matches the flip rule for `2 tau > d`; at `tau = d/2` it still returns 1/2.
pub fn threshold_analytic(d: u64, tau: u64) -> Result<Ratio<u64>> {
    if d < 2 || 2 * tau < d || tau > d || d > 30 {
        return Err(Error::BadRange {
            degree: d as usize,
            tau: tau as usize,
        });
    }
    let sum: u64 = (d - tau + 1..tau).map(|i| binomial(d - 1, i)).sum();
    Ok(Ratio::new(1, 2) + Ratio::new(binomial(d - 1, tau - 1) * sum, 4u64.pow(d as u32 - 1)))
}

/// Result of the exhaustive threshold search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSearch {
    pub best: Vec<usize>,
    pub value: Estimate,
    /// Candidates within one standard error of the best (exact ties when enumerated).
    pub ties: Vec<Vec<usize>>,
    pub all: Vec<(Vec<usize>, Estimate)>,
}

/// Tries every vector in `[1, d]^steps` (`d` = largest degree in the lightcones). Small
/// lightcones are enumerated exactly, larger ones use Monte Carlo with common seeds.
pub fn optimal_thresholds(source: &GraphSource, steps: usize, samples: u64, seed: u64) -> Result<ThresholdSearch> {
    if steps == 0 {
        return Err(Error::InvalidParams("steps must be at least 1".into()));
    }
    let groups = orbit_groups(source, steps)?;
    let d = groups
        .iter()
        .flat_map(|(_, _, g)| {
            (0..g.num_vertices())
                .filter(|&v| g.dist[v] < steps)
                .map(|v| g.degree(v))
        })
        .max()
        .unwrap_or(1);
    let exact = groups.iter().all(|(_, _, g)| g.num_vertices() <= EXACT_VERTEX_CAP);
    let mut all = Vec::new();
    let mut taus = vec![1usize; steps];
    loop {
        let mut parts = Vec::new();
        for (i, (w, _, g)) in groups.iter().enumerate() {
            let e = if exact {
                Estimate::exact(threshold_exact(g, &taus)?)
            } else {
                let seed = group_seed(seed, i);
                threshold_cut_probability(
                    g,
                    &ThresholdConfig {
                        thresholds: taus.clone(),
                        samples,
                        seed,
                    },
                )?
            };
            parts.push((*w, e));
        }
        all.push((taus.clone(), combine(&parts)));
        // odometer over [1, d]^steps
        let mut i = 0;
        while i < steps && taus[i] == d {
            taus[i] = 1;
            i += 1;
        }
        if i == steps {
            break;
        }
        taus[i] += 1;
    }
    let (best, value) = all
        .iter()
        .fold(None::<&(Vec<usize>, Estimate)>, |acc, c| match acc {
            Some(b) if b.1.value >= c.1.value => Some(b),
            _ => Some(c),
        })
        .cloned()
        .expect("nonempty search");
    let slack = if exact { 1e-12 } else { value.stderr };
    let ties = all
        .iter()
        .filter(|(_, e)| e.value >= value.value - slack)
        .map(|(t, _)| t.clone())
        .collect();
    Ok(ThresholdSearch { best, value, ties, all })
}
