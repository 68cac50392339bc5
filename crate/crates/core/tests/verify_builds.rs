use qmiddle_core::builder::{build_cycle_k1, build_cycle_k2, BuildOptions};
use qmiddle_core::certificate::CycleCertificate;
use qmiddle_core::field::FieldTable;
use qmiddle_core::geometry::Geometry;
use qmiddle_core::orbits::ClassTable;
use qmiddle_core::verifier::{verify_certificate, Status};

fn k2(q: u64, seed: u64) -> CycleCertificate {
    let geo = Geometry::new(FieldTable::for_order(q, 5).unwrap());
    let classes = ClassTable::build(&geo).unwrap();
    build_cycle_k2(&geo, &classes, seed, &BuildOptions::default())
        .unwrap()
        .0
}

fn first_failure(cert: &CycleCertificate) -> (String, Option<u64>) {
    let report = verify_certificate(cert);
    assert!(!report.is_valid());
    let c = report.first_violation().unwrap();
    let index = c
        .witness
        .as_ref()
        .and_then(|w| w.get("index"))
        .and_then(|i| i.as_u64());
    (c.check.clone(), index)
}

#[test]
fn k2_builds_verify() {
    for (q, seed, len) in [(2, 1, 310), (2, 16, 310), (3, 0, 2420), (3, 5, 2420)] {
        let cert = k2(q, seed);
        let report = verify_certificate(&cert);
        assert!(report.is_valid(), "q={q} seed={seed}\n{report}");
        assert_eq!(report.vertices, len);
    }
}

#[test]
fn k1_builds_verify() {
    for q in [2, 3, 4, 5] {
        let geo = Geometry::new(FieldTable::for_order(q, 3).unwrap());
        let cert = build_cycle_k1(&geo, 1).unwrap();
        assert!(verify_certificate(&cert).is_valid());
    }
}

#[test]
fn swapped_vertices_break_at_index() {
    let mut cert = k2(2, 1);
    cert.vertices.swap(10, 11);
    assert_eq!(first_failure(&cert), ("edges".into(), Some(9)));
}

#[test]
fn deleted_vertex_is_a_count_mismatch() {
    let mut cert = k2(2, 1);
    cert.vertices.remove(100);
    assert_eq!(first_failure(&cert).0, "count");
}

#[test]
fn duplicated_vertex_is_caught() {
    let mut cert = k2(2, 1);
    let v = cert.vertices[4].clone();
    cert.vertices[6] = v;
    let report = verify_certificate(&cert);
    let distinct = report
        .checks
        .iter()
        .find(|c| c.check == "distinct")
        .unwrap();
    assert_eq!(distinct.status, Status::Fail);
    assert_eq!(distinct.witness.as_ref().unwrap()["index"], 6);
}

#[test]
fn bogus_subspace_is_caught() {
    let mut cert = k2(2, 1);
    let json = cert.to_json().replacen(
        r#"{"dim":3,"points":[0,1,2,"#,
        r#"{"dim":3,"points":[0,1,3,"#,
        1,
    );
    cert = CycleCertificate::from_json(&json).unwrap();
    assert_eq!(first_failure(&cert), ("subspaces".into(), Some(0)));
}

#[test]
fn bad_field_is_caught() {
    let mut cert = k2(2, 1);
    cert.field.poly = vec![1, 1, 1, 1, 1, 1];
    assert_eq!(first_failure(&cert).0, "field");
    let mut cert = k2(2, 1);
    cert.q = 3;
    assert_eq!(first_failure(&cert).0, "field");
}
