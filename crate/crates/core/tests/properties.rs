use qmiddle_core::field::FieldTable;
use qmiddle_core::geometry::Geometry;
use qmiddle_core::verifier::{oracle_sweep, run_property_suite, SuiteMode};

fn geo(q: u64) -> Geometry {
    Geometry::new(FieldTable::for_order(q, 5).unwrap())
}

#[test]
fn suite_exhaustive_q3() {
    let report = run_property_suite(&geo(3), SuiteMode::Exhaustive);
    assert!(report.all_passed(), "{report}");
}

#[test]
fn suite_sampled_q5() {
    let report = run_property_suite(&geo(5), SuiteMode::sampled());
    assert!(report.all_passed(), "{report}");
}

#[test]
fn oracle_sweep_q3() {
    let r = oracle_sweep(&geo(3), SuiteMode::Exhaustive);
    assert_eq!(r.pairs, 121 * 120 / 2);
    assert_eq!(r.triples, 121 * 120 * 119 / 6);
    assert_eq!(r.enumerated, 2420);
    assert!(r.passed(), "{:?}", r.examples);
}

#[test]
fn sampled_runs_are_deterministic() {
    let g = geo(4);
    let a = serde_json::to_string(&run_property_suite(&g, SuiteMode::sampled())).unwrap();
    let b = serde_json::to_string(&run_property_suite(&g, SuiteMode::sampled())).unwrap();
    assert_eq!(a, b);
}
