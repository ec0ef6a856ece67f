//! Multi-start box-constrained quasi-Newton ascent over `(gamma, beta)`.

use std::f64::consts::{FRAC_PI_2, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{cut_fraction_iterative, EngineOptions};
use crate::error::{Error, Result};
use crate::eval::{EngineKind, OracleEvaluator};
use crate::graphs::GraphSource;
use crate::oracle::DEFAULT_ENTRY_BUDGET;
use crate::params::{Mode, ParamSet};

pub const METHOD: &str = "projected-bfgs/central-fd";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub starts: usize,
    pub gamma_box: (f64, f64),
    pub beta_box: (f64, f64),
    /// Stop when the objective improves by less than this (relative) twice in a row.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub fd_step: f64,
    /// Extra seed point, typically from [`warm_start`].
    pub warm_start: Option<ParamSet>,
    pub entry_budget: u128,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            starts: 50,
            gamma_box: (0.0, FRAC_PI_2),
            beta_box: (0.0, FRAC_PI_2),
            tol: 1e-8,
            max_iter: 300,
            seed: 0,
            fd_step: 1e-6,
            warm_start: None,
            entry_budget: DEFAULT_ENTRY_BUDGET,
        }
    }
}

impl OptimizerConfig {
    /// Both boxes become `[0, 2 pi]`.
    pub fn widened(mut self) -> Self {
        self.gamma_box = (0.0, TAU);
        self.beta_box = (0.0, TAU);
        self
    }

    fn check(&self) -> Result<()> {
        if self.starts == 0 {
            return Err(Error::InvalidParams("starts must be at least 1".into()));
        }
        for (name, (lo, hi)) in [("gamma box", self.gamma_box), ("beta box", self.beta_box)] {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(Error::InvalidParams(format!("{name} [{lo}, {hi}] is empty")));
            }
        }
        Ok(())
    }
}

/// One line of the optimization log. `start` counts random starts from 0; the warm
/// start, if any, comes last.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StartLog {
    pub start: usize,
    pub iterations: usize,
    pub value: f64,
    pub params: Vec<f64>,
    pub method: String,
}

#[derive(Clone, Debug)]
pub struct OptimizeResult {
    pub best: ParamSet,
    pub value: f64,
    pub log: Vec<StartLog>,
}

/// Appends one layer: layers `1..p` copied, the new one extrapolated linearly from the
/// last two (or duplicated when `p = 1`).
pub fn warm_start(params: &ParamSet) -> ParamSet {
    let p = params.p();
    let next = |xs: &[f64]| -> f64 {
        match xs {
            [] => 0.0,
            [x] => *x,
            [.., a, b] => 2.0 * b - a,
        }
    };
    let m = params.num_classes();
    let mut gammas = params.gammas.clone();
    let mut betas = params.betas.clone();
    if p == 0 {
        gammas.push(vec![0.0; m.max(1)]);
        betas.push(0.0);
    } else {
        let row: Vec<f64> = (0..m)
            .map(|k| next(&params.gammas.iter().map(|g| g[k]).collect::<Vec<_>>()))
            .collect();
        gammas.push(row);
        betas.push(next(&params.betas));
    }
    ParamSet {
        gammas,
        betas,
        sharing: params.sharing.clone(),
    }
}

/// Objective built once per run.
enum Objective<'a> {
    Iterative(&'a crate::graphs::AdditiveProductSpec),
    Oracle(OracleEvaluator),
}

impl Objective<'_> {
    fn eval(&self, params: &ParamSet) -> Result<f64> {
        match self {
            Objective::Iterative(spec) => cut_fraction_iterative(spec, params, EngineOptions::default()),
            Objective::Oracle(ev) => ev.cut_fraction(params),
        }
    }
}

/// Sharing vector for a mode.
pub fn sharing_for(source: &GraphSource, mode: Mode) -> Vec<usize> {
    match mode {
        Mode::Qaoa => vec![0; source.num_categories()],
        Mode::Ma => source.sharing(),
    }
}

/// Maximizes the cut fraction from `config.starts` uniform random points (plus the warm
/// start). Deterministic for a fixed seed; ties go to the lowest start index.
pub fn optimize(
    source: &GraphSource,
    p: usize,
    mode: Mode,
    engine: EngineKind,
    config: &OptimizerConfig,
) -> Result<OptimizeResult> {
    config.check()?;
    if p == 0 {
        return Err(Error::InvalidParams("p must be at least 1".into()));
    }
    let sharing = sharing_for(source, mode);
    let m = sharing.iter().max().map_or(1, |&k| k + 1);
    let objective = match (engine, source) {
        (EngineKind::Iterative, GraphSource::Product { spec, .. }) => Objective::Iterative(spec),
        (EngineKind::Iterative, GraphSource::Tiling(t)) => {
            return Err(Error::Unsupported(format!("{} needs the oracle engine", t.name())))
        }
        (EngineKind::Oracle, _) => Objective::Oracle(OracleEvaluator::new(source, p, config.entry_budget)?),
    };
    let dim = p * (m + 1);
    let mut lower = vec![config.gamma_box.0; p * m];
    lower.extend(vec![config.beta_box.0; p]);
    let mut upper = vec![config.gamma_box.1; p * m];
    upper.extend(vec![config.beta_box.1; p]);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut seeds: Vec<Vec<f64>> = (0..config.starts)
        .map(|_| {
            (0..dim)
                .map(|i| {
                    if lower[i] < upper[i] {
                        rng.random_range(lower[i]..upper[i])
                    } else {
                        lower[i]
                    }
                })
                .collect()
        })
        .collect();
    if let Some(w) = &config.warm_start {
        let w = if w.num_classes() == m {
            w.clone()
        } else {
            w.per_category()
        };
        if w.p() != p || w.num_classes() != m {
            return Err(Error::InvalidParams(format!(
                "warm start has {} layers and {} classes, expected {p} and {m}",
                w.p(),
                w.num_classes()
            )));
        }
        seeds.push(
            w.to_flat()
                .iter()
                .zip(lower.iter().zip(&upper))
                .map(|(x, (l, u))| x.clamp(*l, *u))
                .collect(),
        );
    }

    let f = |x: &[f64]| -> Result<f64> { objective.eval(&ParamSet::from_flat(x, p, &sharing)?) };
    let runs: Vec<Result<StartLog>> = seeds
        .par_iter()
        .enumerate()
        .map(|(start, x0)| {
            let (x, value, iterations) = ascend(&f, x0.clone(), &lower, &upper, config)?;
            Ok(StartLog {
                start,
                iterations,
                value,
                params: x,
                method: METHOD.to_string(),
            })
        })
        .collect();
    let log: Vec<StartLog> = runs.into_iter().collect::<Result<_>>()?;
    let best = log
        .iter()
        .fold(None::<&StartLog>, |acc, s| match acc {
            Some(b) if b.value >= s.value => Some(b),
            _ => Some(s),
        })
        .expect("at least one start");
    let params = ParamSet::from_flat(&best.params, p, &sharing)?;
    let value = objective.eval(&params)?;
    Ok(OptimizeResult {
        best: params,
        value,
        log,
    })
}

/// Projected BFGS ascent with an Armijo backtracking search along the projected path.
fn ascend(
    f: &(dyn Fn(&[f64]) -> Result<f64> + Sync),
    mut x: Vec<f64>,
    lower: &[f64],
    upper: &[f64],
    config: &OptimizerConfig,
) -> Result<(Vec<f64>, f64, usize)> {
    let n = x.len();
    let project = |v: &mut Vec<f64>| {
        for i in 0..n {
            v[i] = v[i].clamp(lower[i], upper[i]);
        }
    };
    project(&mut x);
    // minimize the negated objective
    let obj = |v: &[f64]| f(v).map(|y| -y);
    let grad = |v: &[f64]| -> Result<Vec<f64>> {
        let h = config.fd_step;
        let mut g = vec![0.0; n];
        let mut w = v.to_vec();
        for i in 0..n {
            if lower[i] == upper[i] {
                continue;
            }
            w[i] = v[i] + h;
            let up = obj(&w)?;
            w[i] = v[i] - h;
            let down = obj(&w)?;
            w[i] = v[i];
            g[i] = (up - down) / (2.0 * h);
        }
        Ok(g)
    };
    let mut fx = obj(&x)?;
    let mut g = grad(&x)?;
    let mut hinv = identity(n);
    let mut small_steps = 0;
    let mut iterations = 0;
    while iterations < config.max_iter {
        iterations += 1;
        // variables pinned at a bound with the gradient pushing outward
        let active: Vec<bool> = (0..n)
            .map(|i| lower[i] == upper[i] || (x[i] <= lower[i] && g[i] > 0.0) || (x[i] >= upper[i] && g[i] < 0.0))
            .collect();
        let pg: f64 = (0..n).filter(|&i| !active[i]).map(|i| g[i] * g[i]).sum::<f64>().sqrt();
        if pg < 1e-9 {
            break;
        }
        let mut d: Vec<f64> = (0..n)
            .map(|i| {
                if active[i] {
                    0.0
                } else {
                    -(0..n).filter(|&j| !active[j]).map(|j| hinv[i][j] * g[j]).sum::<f64>()
                }
            })
            .collect();
        if dot(&d, &g) >= 0.0 {
            hinv = identity(n);
            d = (0..n).map(|i| if active[i] { 0.0 } else { -g[i] }).collect();
        }
        let dmax = d.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let mut t = if dmax > 0.5 { 0.5 / dmax } else { 1.0 };
        let mut accepted = None;
        for _ in 0..40 {
            let mut xn: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + t * b).collect();
            project(&mut xn);
            let step: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
            let fn_ = obj(&xn)?;
            if fn_ <= fx + 1e-4 * dot(&g, &step) {
                accepted = Some((xn, fn_, step));
                break;
            }
            t *= 0.5;
        }
        let Some((xn, fn_, s)) = accepted else {
            if hinv == identity(n) {
                break;
            }
            hinv = identity(n);
            continue;
        };
        let gn = grad(&xn)?;
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 {
            bfgs_update(&mut hinv, &s, &y, sy);
        }
        let improvement = fx - fn_;
        x = xn;
        g = gn;
        fx = fn_;
        if improvement < config.tol * (1.0 + fx.abs()) {
            small_steps += 1;
            if small_steps >= 2 {
                break;
            }
        } else {
            small_steps = 0;
        }
    }
    Ok((x, -fx, iterations))
}

fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn bfgs_update(h: &mut [Vec<f64>], s: &[f64], y: &[f64], sy: f64) {
    let n = s.len();
    let rho = 1.0 / sy;
    let hy: Vec<f64> = (0..n).map(|i| dot(&h[i], y)).collect();
    let yhy = dot(y, &hy);
    for i in 0..n {
        for j in 0..n {
            h[i][j] += (1.0 + rho * yhy) * rho * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
        }
    }
}
