use lowgirth_qaoa::classical::{bm_cut_probability, threshold_cut_probability, BmConfig, BmScheme, ThresholdConfig};
use lowgirth_qaoa::config::f_table;
use lowgirth_qaoa::engine::{cut_fraction_iterative, EngineOptions};
use lowgirth_qaoa::graphs::{build_lightcone, builtin_spec, enumerate_edge_orbits};
use lowgirth_qaoa::params::ParamSet;
use lowgirth_qaoa::qmc::{f_sigma, Pauli, QmcParams};
use num_complex::Complex64;
use proptest::prelude::*;

fn angles(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.2f64..3.2, n)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn cut_fraction_is_a_probability(name in prop::sample::select(vec!["fig-a", "fig-b", "fig-c", "k34-tree"]), x in angles(13)) {
        let spec = builtin_spec(name).unwrap();
        let ps = ParamSet::from_flat(&x[..spec.num_classes() + 1], 1, spec.sharing()).unwrap();
        let v = cut_fraction_iterative(&spec, &ps, EngineOptions::default()).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
    }

    #[test]
    fn negating_all_angles_keeps_the_value(x in angles(6)) {
        let spec = builtin_spec("fig-c").unwrap();
        let ps = ParamSet::from_flat(&x, 2, spec.sharing()).unwrap();
        let a = cut_fraction_iterative(&spec, &ps, EngineOptions::default()).unwrap();
        let b = cut_fraction_iterative(&spec, &ps.negated(), EngineOptions::default()).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn memo_and_symmetry_do_not_change_values(x in angles(6)) {
        let spec = builtin_spec("fig-a").unwrap();
        let ps = ParamSet::from_flat(&x, 2, spec.sharing()).unwrap();
        let full = cut_fraction_iterative(&spec, &ps, EngineOptions::default()).unwrap();
        let bare = cut_fraction_iterative(&spec, &ps, EngineOptions { memo: false, symmetry: false }).unwrap();
        prop_assert!((full - bare).abs() < 1e-12);
    }

    #[test]
    fn flat_round_trip(x in angles(9)) {
        let sharing = [0, 1, 1, 1];
        let ps = ParamSet::from_flat(&x, 3, &sharing).unwrap();
        prop_assert_eq!(ps.to_flat(), x);
    }

    #[test]
    fn f_table_sums_to_one(betas in angles(3)) {
        let s: Complex64 = f_table(&betas).iter().sum();
        prop_assert!((s - 1.0).norm() < 1e-12);
    }

    #[test]
    fn qmc_identity_insert_sums_to_one(x in angles(8), m in angles(3), n in angles(3)) {
        let theta = QmcParams::new(x[0..2].to_vec(), x[2..4].to_vec(), x[4..6].to_vec(), x[6..8].to_vec()).unwrap();
        let unit = |v: &[f64]| {
            let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt().max(1e-9);
            [v[0] / r, v[1] / r, v[2] / r]
        };
        let s: Complex64 = f_sigma(&theta, Pauli::I, unit(&m), unit(&n)).iter().sum();
        prop_assert!((s - 1.0).norm() < 1e-12);
    }

    #[test]
    fn lightcones_respect_the_radius(name in prop::sample::select(vec!["fig-a", "fig-b", "fig-c", "k34-tree"]), p in 1usize..3) {
        let spec = builtin_spec(name).unwrap();
        for orbit in enumerate_edge_orbits(&spec) {
            let g = build_lightcone(&spec, &orbit, p);
            prop_assert!(g.dist.iter().all(|&d| d <= p));
            let (l, r) = g.root_edge;
            prop_assert_eq!((g.dist[l], g.dist[r]), (0, 0));
            for v in 0..g.num_vertices() {
                if g.dist[v] < p {
                    let lv = match &g.vertices[v] {
                        lowgirth_qaoa::graphs::VertexLabel::Address(a) => a.last(),
                        lowgirth_qaoa::graphs::VertexLabel::Patch(_) => unreachable!(),
                    };
                    prop_assert_eq!(g.degree(v), spec.degree(lv));
                }
            }
        }
    }
}

#[test]
fn classical_estimates_are_deterministic_and_scale() {
    let spec = builtin_spec("fig-b").unwrap();
    let orbit = &enumerate_edge_orbits(&spec)[0];
    let g = build_lightcone(&spec, orbit, 3);
    let cfg = |samples| ThresholdConfig {
        thresholds: vec![3, 3],
        samples,
        seed: 9,
    };
    let a = threshold_cut_probability(&g, &cfg(40_000)).unwrap();
    let b = threshold_cut_probability(&g, &cfg(40_000)).unwrap();
    assert_eq!(a, b);
    let c = threshold_cut_probability(&g, &cfg(160_000)).unwrap();
    let ratio = a.stderr / c.stderr;
    assert!((ratio - 2.0).abs() < 0.05, "stderr ratio {ratio}");

    let sharing = spec.sharing().to_vec();
    for scheme in [BmScheme::Para1, BmScheme::Para2, BmScheme::Para3, BmScheme::Para4] {
        let e = bm_cut_probability(&g, &BmConfig::new(2, scheme, 20_000, 3), &sharing).unwrap();
        assert!((0.0..=1.0).contains(&e.value));
        assert_eq!(
            e,
            bm_cut_probability(&g, &BmConfig::new(2, scheme, 20_000, 3), &sharing).unwrap()
        );
    }
}
