//! One test per acceptance criterion. Each prints a `criterion N: PASS|FAIL` line to the
//! real stdout so the summary shows up even when output is captured.
//!
//! Set `LOWGIRTH_UNLOCK_DEEP=1` to include the p = 3 optimization cells.

use std::io::Write;

use lowgirth_qaoa::classical::{classical_cut_fraction, threshold_analytic, Algorithm, ThresholdConfig};
use lowgirth_qaoa::engine::{EngineOptions, IterativeEngine};
use lowgirth_qaoa::eval::{cut_fraction, EngineKind};
use lowgirth_qaoa::graphs::{
    build_lightcone, builtin_spec, enumerate_edge_orbits, AdditiveProductSpec, GraphSource, GRAPH_NAMES,
};
use lowgirth_qaoa::optimizer::OptimizerConfig;
use lowgirth_qaoa::oracle::{
    contraction_expectation, elimination_order, statevector_expectation, CircuitSpec, DEFAULT_ENTRY_BUDGET,
};
use lowgirth_qaoa::params::{Mode, ParamSet};
use lowgirth_qaoa::qmc::{
    f_sigma, qmc_edge_expectation, qmc_edge_fixed, qmc_statevector, random_direction, Pauli, QmcParams,
};
use lowgirth_qaoa::reproduce::{self, Cell, ReproduceConfig, Status};
use lowgirth_qaoa::Error;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PUBLISHED_TOL: f64 = 1e-3;
const ORACLE_TOL: f64 = 1e-9;
const TIED_TOL: f64 = 1e-12;
const TRIVIAL_TOL: f64 = 1e-12;
const ANALYTIC_SIGMAS: f64 = 3.0;
const CROSS_TABLE_TOL: f64 = 1e-6;
const QMC_NORM_TOL: f64 = 1e-12;
const QMC_ORACLE_TOL: f64 = 1e-9;

fn deep() -> bool {
    std::env::var("LOWGIRTH_UNLOCK_DEEP").is_ok_and(|v| v == "1")
}

fn report(n: usize, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "criterion {n}: {verdict} ({detail})").unwrap();
}

fn report_cells(n: usize, cells: &[Cell], note: &str) {
    let mut out = std::io::stdout().lock();
    for c in cells.iter().filter(|c| c.status != Status::Pass) {
        writeln!(
            out,
            "  criterion {n} cell: table {} {} {} depth {} expected {} got {} [{:?}] {}",
            c.table, c.graph, c.column, c.depth, c.expected, c.value, c.status, c.detail
        )
        .unwrap();
    }
    drop(out);
    let failed = cells.iter().filter(|c| c.status == Status::Fail).count();
    let skipped = cells.iter().filter(|c| c.status == Status::Skipped).count();
    let detail = format!("{} cells, {failed} failed, {skipped} skipped{note}", cells.len());
    report(n, failed == 0, &detail);
    assert_eq!(failed, 0, "criterion {n}: {failed} cells outside tolerance");
}

fn random_params(rng: &mut ChaCha8Rng, p: usize, sharing: &[usize]) -> ParamSet {
    let classes = sharing.iter().max().map_or(0, |&m| m + 1);
    let x: Vec<f64> = (0..p * (classes + 1)).map(|_| rng.random_range(-3.2..3.2)).collect();
    ParamSet::from_flat(&x, p, sharing).unwrap()
}

#[test]
fn criterion_01_published_parameters() {
    let cfg = ReproduceConfig::default();
    let mut cells = reproduce::published_angles(Mode::Ma, &cfg).unwrap();
    cells.extend(reproduce::published_angles(Mode::Qaoa, &cfg).unwrap());
    assert!(cells.iter().all(|c| c.tolerance == Some(PUBLISHED_TOL)));
    report_cells(1, &cells, "");
}

#[test]
fn criterion_02_optimization_from_scratch() {
    let cfg = ReproduceConfig {
        unlock_deep: deep(),
        optimizer: OptimizerConfig::default(),
        ..Default::default()
    };
    let cells = reproduce::table3(&cfg).unwrap();
    let note = if deep() {
        ""
    } else {
        "; p=3 gated by LOWGIRTH_UNLOCK_DEEP"
    };
    report_cells(2, &cells, note);
}

#[test]
fn criterion_03_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for (name, p) in [("fig-a", 1), ("fig-b", 1), ("fig-c", 1), ("fig-a", 2)] {
        let spec = builtin_spec(name).unwrap();
        let orbits = enumerate_edge_orbits(&spec);
        let cones: Vec<_> = orbits.iter().map(|o| build_lightcone(&spec, o, p).trimmed()).collect();
        let orders: Vec<_> = cones.iter().map(elimination_order).collect();
        for _ in 0..50 {
            let params = random_params(&mut rng, p, spec.sharing());
            let mut eng = IterativeEngine::new(&spec, &params, EngineOptions::default()).unwrap();
            for ((o, g), order) in orbits.iter().zip(&cones).zip(&orders) {
                let zz = -eng.edge_expectation(o).unwrap();
                let sv = statevector_expectation(CircuitSpec::new(g, &params).unwrap(), 26).unwrap();
                let tn = contraction_expectation(CircuitSpec::new(g, &params).unwrap(), order, DEFAULT_ENTRY_BUDGET)
                    .unwrap();
                worst = worst.max((zz - sv).abs()).max((zz - tn).abs());
            }
        }
    }
    let pass = worst < ORACLE_TOL;
    report(
        3,
        pass,
        &format!("max deviation {worst:.2e}, tolerance {ORACLE_TOL:.0e}"),
    );
    assert!(pass);
}

#[test]
fn criterion_04_tied_parameters() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    let names = ["fig-a", "fig-b", "fig-c"];
    for draw in 0..100 {
        let spec = builtin_spec(names[draw % 3]).unwrap();
        let p = 1 + draw % 2;
        let c = spec.num_categories();
        let qaoa = random_params(&mut rng, p, &vec![0; c]);
        // one class per category, every class carrying the same angle
        let ma = qaoa.per_category();
        assert_eq!(ma.num_classes(), c);
        let a = cut_fraction(
            &GraphSource::named(names[draw % 3]).unwrap(),
            &qaoa,
            EngineKind::Iterative,
        )
        .unwrap();
        let mut eng = IterativeEngine::new(&spec, &ma, EngineOptions::default()).unwrap();
        let b = eng.cut_fraction().unwrap();
        worst = worst.max((a - b).abs());
    }
    let pass = worst <= TIED_TOL;
    report(4, pass, &format!("max deviation {worst:.2e} over 100 draws"));
    assert!(pass);
}

#[test]
fn criterion_05_trivial_parameters() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    let mut checked = 0;
    let mut skipped = Vec::new();
    for name in GRAPH_NAMES {
        let source = GraphSource::named(name).unwrap();
        let engine = if source.spec().is_some() {
            EngineKind::Iterative
        } else {
            EngineKind::Oracle
        };
        for p in 1..=3 {
            for zero_gamma in [true, false] {
                let mut params = random_params(&mut rng, p, &source.sharing());
                if zero_gamma {
                    params.gammas.iter_mut().flatten().for_each(|g| *g = 0.0);
                } else {
                    params.betas.iter_mut().for_each(|b| *b = 0.0);
                }
                match cut_fraction(&source, &params, engine) {
                    Ok(v) => {
                        worst = worst.max((v - 0.5).abs());
                        checked += 1;
                    }
                    Err(Error::WidthOverflow { width, .. }) => skipped.push(format!("{name} p={p} width {width}")),
                    Err(e) => panic!("{name} p={p}: {e}"),
                }
            }
        }
    }
    let pass = worst <= TRIVIAL_TOL;
    skipped.dedup();
    let skipped = if skipped.is_empty() {
        String::new()
    } else {
        format!("; skipped over budget: {}", skipped.join(", "))
    };
    report(
        5,
        pass,
        &format!("{checked} evaluations, max |value - 0.5| = {worst:.2e}{skipped}"),
    );
    assert!(pass);
}

#[test]
fn criterion_06_classical_table() {
    let cfg = ReproduceConfig {
        unlock_deep: true,
        ..Default::default()
    };
    let cells = reproduce::table1(&cfg).unwrap();
    report_cells(6, &cells, "");
}

fn regular_tree(d: usize) -> AdditiveProductSpec {
    let atoms = vec!["[[0, 1]]"; d].join(", ");
    AdditiveProductSpec::from_json(&format!(r#"{{"n": 2, "atoms": [{atoms}]}}"#)).unwrap()
}

#[test]
fn criterion_07_threshold_closed_form() {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for d in 3..=5usize {
        let spec = regular_tree(d);
        let source = GraphSource::Product {
            name: format!("tree-{d}"),
            spec,
        };
        // at tau = d/2 the closed form gives 1/2 while the flip rule does not
        for tau in d / 2 + 1..=d {
            let want = threshold_analytic(d as u64, tau as u64).unwrap();
            let want = *want.numer() as f64 / *want.denom() as f64;
            let cfg = ThresholdConfig {
                thresholds: vec![tau],
                samples: 1_000_000,
                seed: 7 + tau as u64,
            };
            let e = classical_cut_fraction(&source, &Algorithm::Threshold(cfg)).unwrap();
            let z = (e.value - want).abs() / e.stderr.max(1e-12);
            worst = worst.max(z);
            cases += 1;
        }
    }
    let pass = worst <= ANALYTIC_SIGMAS;
    report(
        7,
        pass,
        &format!("{cases} (d, tau) cases, worst deviation {worst:.2} standard errors"),
    );
    assert!(pass);
}

#[test]
fn criterion_08_threshold_vectors() {
    let cfg = ReproduceConfig {
        unlock_deep: true,
        ..Default::default()
    };
    let cells = reproduce::table2(&cfg).unwrap();
    report_cells(8, &cells, "");
}

#[test]
fn criterion_09_tilings() {
    let cfg = ReproduceConfig {
        unlock_deep: true,
        ..Default::default()
    };
    let cells = reproduce::table6(&cfg).unwrap();
    report_cells(9, &cells, "");
}

#[test]
fn criterion_10_tiling_matches_fig_a() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let fig = GraphSource::named("fig-a").unwrap();
    let tiling = GraphSource::named("tiling-3-4-6").unwrap();
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (g0, g1, b): (f64, f64, f64) = (
            rng.random_range(-1.6..1.6),
            rng.random_range(-1.6..1.6),
            rng.random_range(-1.6..1.6),
        );
        let a = cut_fraction(
            &fig,
            &ParamSet::qaoa(&[g0], &[b], fig.num_categories()).unwrap(),
            EngineKind::Iterative,
        )
        .unwrap();
        let t = cut_fraction(
            &tiling,
            &ParamSet::qaoa(&[g0], &[b], tiling.num_categories()).unwrap(),
            EngineKind::Oracle,
        )
        .unwrap();
        worst = worst.max((a - t).abs());
        // tiling edge type 1 plays the role of the fig-a class 0
        let a = cut_fraction(
            &fig,
            &ParamSet::ma(&[g0, g1], &[b], &fig.sharing()).unwrap(),
            EngineKind::Iterative,
        )
        .unwrap();
        let t = cut_fraction(
            &tiling,
            &ParamSet::ma(&[g1, g0], &[b], &tiling.sharing()).unwrap(),
            EngineKind::Oracle,
        )
        .unwrap();
        worst = worst.max((a - t).abs());
    }
    let pass = worst <= CROSS_TABLE_TOL;
    report(10, pass, &format!("max deviation {worst:.2e} over 40 evaluations"));
    assert!(pass);
}

#[test]
fn criterion_11_quantum_maxcut() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut norm_worst = 0.0f64;
    for p in 1..=3 {
        for _ in 0..10 {
            let mut v = || (0..p).map(|_| rng.random_range(-3.2..3.2)).collect::<Vec<f64>>();
            let theta = QmcParams::new(v(), v(), v(), v()).unwrap();
            let (m, n) = (random_direction(&mut rng), random_direction(&mut rng));
            let s: Complex64 = f_sigma(&theta, Pauli::I, m, n).iter().sum();
            norm_worst = norm_worst.max((s - 1.0).norm());
        }
    }

    let spec = builtin_spec("fig-a").unwrap();
    let orbit = &enumerate_edge_orbits(&spec)[0];
    let e = qmc_edge_expectation(&spec, orbit, &QmcParams::zeros(1), 10_000, 11).unwrap();
    let z = (e.value - 0.5).abs() / e.stderr;

    let edge = AdditiveProductSpec::from_json(r#"{"n": 2, "atoms": [[[0, 1]]]}"#).unwrap();
    let orbit = &enumerate_edge_orbits(&edge)[0];
    let g = build_lightcone(&edge, orbit, 1);
    let mut sv_worst = 0.0f64;
    for _ in 0..20 {
        let mut a = || vec![rng.random_range(-3.2..3.2)];
        let theta = QmcParams::new(a(), a(), a(), a()).unwrap();
        let (m, n) = (random_direction(&mut rng), random_direction(&mut rng));
        let rec = qmc_edge_fixed(&edge, orbit, &theta, m, n).unwrap();
        let sv = qmc_statevector(&g, &theta, &[(m, n), (m, n)], 14).unwrap();
        sv_worst = sv_worst.max((rec - sv).abs());
    }

    let pass = norm_worst <= QMC_NORM_TOL && z <= 3.0 && sv_worst <= QMC_ORACLE_TOL;
    report(
        11,
        pass,
        &format!(
            "sum f^I off by {norm_worst:.1e}; zero-angle estimate {:.4} +- {:.4} ({z:.2} se); recursion vs statevector {sv_worst:.1e}",
            e.value, e.stderr
        ),
    );
    assert!(pass);
}
