#![allow(clippy::approx_constant)]

use lowgirth_qaoa::eval::{cut_fraction, EngineKind};
use lowgirth_qaoa::graphs::{builtin_spec, AdditiveProductSpec, GraphSource, SpecFile};
use lowgirth_qaoa::params::ParamSet;
use lowgirth_qaoa::Error;

#[test]
fn spec_files_load_like_builtins() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig-b.json");
    let spec = builtin_spec("fig-b").unwrap();
    std::fs::write(&path, serde_json::to_string(&spec.to_file()).unwrap()).unwrap();
    let loaded = GraphSource::from_spec_path(&path).unwrap();
    let ps = ParamSet::qaoa(&[0.2617], &[0.3927], 2).unwrap();
    let a = cut_fraction(&loaded, &ps, EngineKind::Iterative).unwrap();
    let b = cut_fraction(&GraphSource::named("fig-b").unwrap(), &ps, EngineKind::Iterative).unwrap();
    assert_eq!(a, b);
    assert!((a - 0.66238).abs() < 1e-5);
}

#[test]
fn malformed_specs_are_rejected() {
    let bad = [
        r#"{"n": 3, "atoms": [[[0, 1]], [[2, 2]]]}"#,
        r#"{"n": 3, "atoms": [[[0, 1], [1, 0]]]}"#,
        r#"{"n": 2, "atoms": [[[0, 5]]]}"#,
        r#"{"n": 4, "atoms": [[[0, 1]], [[2, 3]]]}"#,
        r#"{"n": 3, "atoms": [[[0, 1]], [[1, 2]]], "classes": [[0]]}"#,
        r#"{"n": 3, "atoms": "nope"}"#,
    ];
    for text in bad {
        assert!(AdditiveProductSpec::from_json(text).is_err(), "{text}");
    }
    let missing = GraphSource::from_spec_path(std::path::Path::new("/nonexistent/spec.json"));
    assert!(matches!(missing, Err(Error::Io(_))));
}

#[test]
fn class_overrides_change_sharing() {
    let spec = builtin_spec("fig-a").unwrap();
    let all_one = spec.with_classes(vec![vec![0, 1, 2, 3]]).unwrap();
    assert_eq!(all_one.sharing(), &[0, 0, 0, 0]);
    let file: SpecFile = all_one.to_file();
    assert_eq!(file.classes, Some(vec![vec![0, 1, 2, 3]]));
}

#[test]
fn tilings_need_the_oracle_engine() {
    let src = GraphSource::named("tiling-5-6").unwrap();
    let ps = ParamSet::qaoa(&[0.2], &[0.3], src.num_categories()).unwrap();
    assert!(cut_fraction(&src, &ps, EngineKind::Iterative).is_err());
    assert!(cut_fraction(&src, &ps, EngineKind::Oracle).is_ok());
}
