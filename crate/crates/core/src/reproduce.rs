//! Table reproduction: every cell is recomputed and checked against the published value.

use serde::{Deserialize, Serialize};

use crate::classical::{classical_cut_fraction, optimal_thresholds, Algorithm, BmConfig, BmScheme, Estimate};
use crate::error::{Error, Result};
use crate::eval::{cut_fraction, EngineKind, OracleEvaluator};
use crate::graphs::GraphSource;
use crate::optimizer::{optimize, OptimizerConfig};
use crate::params::{Mode, ParamSet};
use crate::reference::{
    CLASSICAL_COLUMNS, CLASSICAL_VALUES, FIGURE_GRAPHS, MA_ANGLES, MA_VALUES, QAOA_ANGLES, QAOA_VALUES, THRESHOLDS,
    TILINGS, TILING_VALUES,
};

pub const QUANTUM_TOL: f64 = 1e-3;
pub const DEEP_QUANTUM_TOL: f64 = 5e-3;
pub const CLASSICAL_TOL: f64 = 5e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One reproduced table cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub table: u8,
    pub graph: String,
    pub column: String,
    /// `p` for quantum cells, `k` or steps for classical ones.
    pub depth: usize,
    pub expected: String,
    pub value: String,
    pub stderr: Option<f64>,
    pub tolerance: Option<f64>,
    pub status: Status,
    pub detail: String,
}

impl Cell {
    fn numeric(table: u8, graph: &str, column: &str, depth: usize, expected: f64, got: f64, tol: f64) -> Self {
        let pass = (got - expected).abs() <= tol;
        Self {
            table,
            graph: graph.into(),
            column: column.into(),
            depth,
            expected: format!("{expected:.5}"),
            value: format!("{got:.5}"),
            stderr: None,
            tolerance: Some(tol),
            status: if pass { Status::Pass } else { Status::Fail },
            detail: String::new(),
        }
    }

    fn estimate(table: u8, graph: &str, column: &str, depth: usize, expected: f64, e: Estimate, tol: f64) -> Self {
        let mut c = Self::numeric(table, graph, column, depth, expected, e.value, tol);
        c.value = format!("{:.4}", e.value);
        c.expected = format!("{expected:.3}");
        c.stderr = Some(e.stderr);
        c.detail = format!("samples={}", e.samples);
        c
    }

    fn skipped(table: u8, graph: &str, column: &str, depth: usize, expected: f64, why: String) -> Self {
        Self {
            table,
            graph: graph.into(),
            column: column.into(),
            depth,
            expected: format!("{expected:.5}"),
            value: String::new(),
            stderr: None,
            tolerance: None,
            status: Status::Skipped,
            detail: why,
        }
    }
}

/// Budgets and seeds. Sample counts default to the published ones.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReproduceConfig {
    pub unlock_deep: bool,
    pub threshold_samples: u64,
    pub deep_threshold_samples: u64,
    pub bm_samples: u64,
    pub seed: u64,
    pub optimizer: OptimizerConfig,
}

impl Default for ReproduceConfig {
    fn default() -> Self {
        Self {
            unlock_deep: false,
            threshold_samples: 1_000_000,
            deep_threshold_samples: 100_000,
            bm_samples: 10_000_000,
            seed: 1,
            optimizer: OptimizerConfig::default(),
        }
    }
}

impl ReproduceConfig {
    fn max_depth(&self) -> usize {
        if self.unlock_deep {
            3
        } else {
            2
        }
    }

    fn threshold_samples_for(&self, steps: usize) -> u64 {
        if steps >= 3 {
            self.deep_threshold_samples
        } else {
            self.threshold_samples
        }
    }
}

pub fn reproduce(table: u8, cfg: &ReproduceConfig) -> Result<Vec<Cell>> {
    match table {
        1 => table1(cfg),
        2 => table2(cfg),
        3 => table3(cfg),
        4 => published_angles(Mode::Ma, cfg),
        5 => published_angles(Mode::Qaoa, cfg),
        6 => table6(cfg),
        t => Err(Error::InvalidParams(format!("table must be 1..6, got {t}"))),
    }
}

/// Column name to algorithm. `a` columns use neighbor class 0, `b` columns class 1.
pub fn classical_column(column: &str, k: usize, cfg: &ReproduceConfig) -> Result<Option<Algorithm>> {
    let (scheme, class) = match column {
        "threshold" => return Ok(None),
        "para1" => (BmScheme::Para1, 0),
        "para2" => (BmScheme::Para2, 0),
        "para3a" => (BmScheme::Para3, 0),
        "para3b" => (BmScheme::Para3, 1),
        "para4a" => (BmScheme::Para4, 0),
        "para4b" => (BmScheme::Para4, 1),
        other => return Err(Error::InvalidParams(format!("unknown classical column {other:?}"))),
    };
    let mut bm = BmConfig::new(k, scheme, cfg.bm_samples, cfg.seed);
    bm.neighbor_class = class;
    Ok(Some(Algorithm::Bm(bm)))
}

fn classical_cells(
    table: u8,
    source: &GraphSource,
    k: usize,
    expected: &[Option<f64>],
    cfg: &ReproduceConfig,
) -> Result<Vec<Cell>> {
    let mut cells = Vec::new();
    for (column, want) in CLASSICAL_COLUMNS.iter().zip(expected) {
        let Some(want) = *want else { continue };
        let estimate = match classical_column(column, k, cfg)? {
            None => optimal_thresholds(source, k, cfg.threshold_samples_for(k), cfg.seed)?.value,
            Some(alg) => classical_cut_fraction(source, &alg)?,
        };
        cells.push(Cell::estimate(
            table,
            source.name(),
            column,
            k,
            want,
            estimate,
            CLASSICAL_TOL,
        ));
    }
    Ok(cells)
}

pub fn table1(cfg: &ReproduceConfig) -> Result<Vec<Cell>> {
    let mut cells = Vec::new();
    for (g, name) in FIGURE_GRAPHS.iter().enumerate() {
        let source = GraphSource::named(name)?;
        for k in 1..=cfg.max_depth() {
            cells.extend(classical_cells(1, &source, k, &CLASSICAL_VALUES[g][k - 1], cfg)?);
        }
    }
    Ok(cells)
}

/// Our flip rule fires at `tau` agreeing neighbors; the table counts `tau - 1`.
pub fn to_table_convention(taus: &[usize]) -> Vec<usize> {
    taus.iter().map(|t| t.saturating_sub(1)).collect()
}

fn show_taus(options: &[Vec<usize>]) -> String {
    let one = |t: &Vec<usize>| {
        if t.len() == 1 {
            t[0].to_string()
        } else {
            format!("({})", t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
        }
    };
    let parts: Vec<String> = options.iter().map(one).collect();
    if parts.len() > 1 {
        format!("[{}]", parts.join(" or "))
    } else {
        parts.join("")
    }
}

pub fn table2(cfg: &ReproduceConfig) -> Result<Vec<Cell>> {
    let mut cells = Vec::new();
    for (g, name) in FIGURE_GRAPHS.iter().enumerate() {
        let source = GraphSource::named(name)?;
        for steps in 1..=cfg.max_depth() {
            let search = optimal_thresholds(&source, steps, cfg.threshold_samples_for(steps), cfg.seed)?;
            let want: Vec<Vec<usize>> = THRESHOLDS[g][steps - 1].iter().map(|t| t.to_vec()).collect();
            let ties: Vec<Vec<usize>> = search.ties.iter().map(|t| to_table_convention(t)).collect();
            let best = to_table_convention(&search.best);
            // a reported tie must be reproduced in full, a single vector must be among ours
            let pass = if want.len() > 1 {
                want.iter().all(|w| ties.contains(w))
            } else {
                ties.contains(&want[0])
            };
            let shown = if want.len() > 1 { ties.clone() } else { vec![best] };
            cells.push(Cell {
                table: 2,
                graph: name.to_string(),
                column: "tau".into(),
                depth: steps,
                expected: show_taus(&want),
                value: show_taus(&shown),
                stderr: Some(search.value.stderr),
                tolerance: None,
                status: if pass { Status::Pass } else { Status::Fail },
                detail: format!("cut={:.4} ties={}", search.value.value, show_taus(&ties)),
            });
        }
    }
    Ok(cells)
}

pub fn table3(cfg: &ReproduceConfig) -> Result<Vec<Cell>> {
    let mut cells = Vec::new();
    for (g, name) in FIGURE_GRAPHS.iter().enumerate() {
        let source = GraphSource::named(name)?;
        for p in 1..=cfg.max_depth() {
            for mode in [Mode::Qaoa, Mode::Ma] {
                let want = match mode {
                    Mode::Qaoa => QAOA_VALUES[g][p - 1],
                    Mode::Ma => MA_VALUES[g][p - 1],
                };
                let tol = if p >= 3 { DEEP_QUANTUM_TOL } else { QUANTUM_TOL };
                let r = optimize(&source, p, mode, EngineKind::Iterative, &cfg.optimizer)?;
                let mut cell = Cell::numeric(3, name, &mode.to_string(), p, want, r.value, tol);
                // attaining more than the published optimum is fine
                if r.value >= want - tol {
                    cell.status = Status::Pass;
                }
                cell.detail = format!("params={:?}", r.best.to_flat());
                cells.push(cell);
            }
        }
    }
    Ok(cells)
}

/// The published angles as a parameter set for `graph` (a figure graph index).
pub fn published_params(source: &GraphSource, g: usize, p: usize, mode: Mode) -> Result<ParamSet> {
    let a = match mode {
        Mode::Qaoa => QAOA_ANGLES[g][p - 1],
        Mode::Ma => MA_ANGLES[g][p - 1],
    };
    match mode {
        Mode::Qaoa => ParamSet::qaoa(a.gammas, a.betas, source.num_categories()),
        Mode::Ma => ParamSet::ma(a.gammas, a.betas, &source.sharing()),
    }
}

/// Tables of angles: evaluating them must give the best values.
pub fn published_angles(mode: Mode, cfg: &ReproduceConfig) -> Result<Vec<Cell>> {
    let table = if mode == Mode::Ma { 4 } else { 5 };
    let mut cells = Vec::new();
    for (g, name) in FIGURE_GRAPHS.iter().enumerate() {
        let source = GraphSource::named(name)?;
        for p in 1..=cfg.max_depth() {
            let want = match mode {
                Mode::Qaoa => QAOA_VALUES[g][p - 1],
                Mode::Ma => MA_VALUES[g][p - 1],
            };
            let params = published_params(&source, g, p, mode)?;
            let got = cut_fraction(&source, &params, EngineKind::Iterative)?;
            cells.push(Cell::numeric(table, name, &mode.to_string(), p, want, got, QUANTUM_TOL));
        }
    }
    Ok(cells)
}

pub fn table6(cfg: &ReproduceConfig) -> Result<Vec<Cell>> {
    let mut cells = Vec::new();
    for (t, name) in TILINGS.iter().enumerate() {
        let source = GraphSource::named(name)?;
        for p in 1..=2 {
            let row = &TILING_VALUES[t][p - 1];
            for (mode, want) in [(Mode::Ma, row[0]), (Mode::Qaoa, row[1])] {
                if p >= 2 && !cfg.unlock_deep {
                    cells.push(Cell::skipped(
                        6,
                        name,
                        &mode.to_string(),
                        p,
                        want,
                        "needs --unlock-deep".into(),
                    ));
                    continue;
                }
                let eval = OracleEvaluator::new(&source, p, cfg.optimizer.entry_budget)?;
                let entries = 2u128.pow(2 * p as u32 + 1).checked_pow(eval.max_width() as u32);
                if entries.is_none_or(|e| e > cfg.optimizer.entry_budget) {
                    let why = format!("contraction width {} exceeds the entry budget", eval.max_width());
                    cells.push(Cell::skipped(6, name, &mode.to_string(), p, want, why));
                    continue;
                }
                let r = optimize(&source, p, mode, EngineKind::Oracle, &cfg.optimizer)?;
                let mut cell = Cell::numeric(6, name, &mode.to_string(), p, want, r.value, QUANTUM_TOL);
                cell.detail = format!("width={} params={:?}", eval.max_width(), r.best.to_flat());
                cells.push(cell);
            }
            let classical: Vec<Option<f64>> = row[2..].iter().map(|&v| Some(v)).collect();
            cells.extend(classical_cells(6, &source, p, &classical, cfg)?);
        }
    }
    Ok(cells)
}

/// RFC-4180 CSV with a header row.
pub fn cells_to_csv(cells: &[Cell]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for c in cells {
        w.serialize(c).map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_display() {
        assert_eq!(show_taus(&[vec![2], vec![3]]), "[2 or 3]");
        assert_eq!(show_taus(&[vec![1, 2, 2]]), "(1,2,2)");
        assert_eq!(to_table_convention(&[3, 4]), vec![2, 3]);
    }

    #[test]
    fn csv_quotes_fields() {
        let mut c = Cell::numeric(3, "fig-a", "qaoa", 1, 0.6459, 0.6459, 1e-3);
        c.detail = "params=[0.1, 0.2]".into();
        let s = cells_to_csv(&[c]).unwrap();
        assert!(s.starts_with("table,graph,column,depth,expected,value,stderr,tolerance,status,detail\n"));
        assert!(s.contains("\"params=[0.1, 0.2]\""));
    }

    #[test]
    fn published_cells_pass() {
        let cells = published_angles(
            Mode::Qaoa,
            &ReproduceConfig {
                unlock_deep: false,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(cells.len(), 6);
        assert!(cells.iter().all(|c| c.status == Status::Pass), "{cells:?}");
    }
}
