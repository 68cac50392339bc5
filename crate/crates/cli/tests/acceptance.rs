//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::collections::HashSet;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_integer::gcd;
use qmiddle_core::builder::{
    build_cycle_k1, build_cycle_k2, closes, find_class_path, first_path_break, flip_tail_observed,
    BuildOptions,
};
use qmiddle_core::certificate::CycleCertificate;
use qmiddle_core::field::FieldTable;
use qmiddle_core::geometry::{Geometry, Subspace};
use qmiddle_core::orbits::ClassTable;
use qmiddle_core::verifier::{oracle_sweep, run_property_suite, verify_certificate, SuiteMode};

type Outcome = Result<String, String>;

fn qmiddle(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qmiddle"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn geo5(q: u64) -> Geometry {
    Geometry::new(FieldTable::for_order(q, 5).unwrap())
}

fn end_to_end_k2() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut notes = Vec::new();
    for (q, expected) in [(2, 310), (3, 2420), (4, 11594), (5, 40612)] {
        let path = dir.path().join(format!("q{q}.json"));
        let p = path.to_str().unwrap();
        let start = Instant::now();
        let build = qmiddle(&[
            "build",
            "--q",
            &q.to_string(),
            "--k",
            "2",
            "--seed",
            "0",
            "--out",
            p,
        ]);
        let verify = qmiddle(&["verify", p]);
        let elapsed = start.elapsed();
        if build.status.code() != Some(0) || verify.status.code() != Some(0) {
            return Err(format!(
                "q={q}: build exit {:?}, verify exit {:?}",
                build.status.code(),
                verify.status.code()
            ));
        }
        let cert = CycleCertificate::load(&path).map_err(|e| e.to_string())?;
        if cert.vertices.len() != expected {
            return Err(format!(
                "q={q}: {} vertices, expected {expected}",
                cert.vertices.len()
            ));
        }
        if elapsed > Duration::from_secs(60) {
            return Err(format!("q={q}: took {elapsed:?}"));
        }
        notes.push(format!(
            "q={q}: {expected} in {:.2}s",
            elapsed.as_secs_f64()
        ));
    }
    Ok(notes.join(", "))
}

fn end_to_end_k1() -> Outcome {
    let mut total = 0;
    for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
        let geo = Geometry::new(FieldTable::for_order(q, 3).unwrap());
        let s = geo.s();
        for ell in (1..s).filter(|&l| gcd(l, s) == 1) {
            let cert = build_cycle_k1(&geo, ell).map_err(|e| format!("q={q} ell={ell}: {e}"))?;
            if cert.vertices.len() != 2 * s as usize {
                return Err(format!("q={q} ell={ell}: length {}", cert.vertices.len()));
            }
            let report = verify_certificate(&cert);
            if !report.is_valid() {
                return Err(format!("q={q} ell={ell}: {:?}", report.first_violation()));
            }
            total += 1;
        }
    }
    // one run through the binary as well
    let out = qmiddle(&["build", "--q", "16", "--k", "1", "--ell", "2"]);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    if json["vertices"].as_array().map(Vec::len) != Some(2 * 273) {
        return Err("binary k=1 build at q=16 has the wrong length".into());
    }
    Ok(format!("{total} (q, ell) pairs verified"))
}

fn property_suite() -> Outcome {
    for q in [2, 3] {
        let report = run_property_suite(&geo5(q), SuiteMode::Exhaustive);
        if report.checks.len() != 13 || !report.all_passed() {
            return Err(format!("q={q}\n{report}"));
        }
    }
    Ok("13/13 checks at q=2 and q=3".into())
}

/// Lexicographically least rotation of the sequence or its reverse.
fn dihedral_canonical(cycle: &[Subspace]) -> Vec<Subspace> {
    let mut reversed = cycle.to_vec();
    reversed.reverse();
    [cycle.to_vec(), reversed]
        .into_iter()
        .flat_map(|seq| {
            (0..seq.len()).map(move |r| {
                let mut rot = seq.clone();
                rot.rotate_left(r);
                rot
            })
        })
        .min()
        .unwrap()
}

fn multiplicity() -> Outcome {
    let geo = geo5(2);
    let classes = ClassTable::build(&geo).map_err(|e| e.to_string())?;
    let mut distinct = HashSet::new();
    for seed in 0..10 {
        let (cert, _) = build_cycle_k2(&geo, &classes, seed, &BuildOptions::default())
            .map_err(|e| e.to_string())?;
        if !verify_certificate(&cert).is_valid() {
            return Err(format!("seed {seed} does not verify"));
        }
        distinct.insert(dihedral_canonical(&cert.vertices));
    }
    if distinct.len() < 10 {
        return Err(format!(
            "only {} distinct cycles from 10 seeds",
            distinct.len()
        ));
    }
    Ok(format!(
        "{} distinct cycles from seeds 0..10",
        distinct.len()
    ))
}

fn oracle_equivalence() -> Outcome {
    let mut notes = Vec::new();
    for q in [2, 3] {
        let r = oracle_sweep(&geo5(q), SuiteMode::Exhaustive);
        if !r.passed() {
            return Err(format!(
                "q={q}: {} mismatches, e.g. {:?}",
                r.mismatches,
                r.examples.first()
            ));
        }
        notes.push(format!(
            "q={q}: {} pairs, {} triples, {} subspaces",
            r.pairs, r.triples, r.enumerated
        ));
    }
    Ok(notes.join("; "))
}

fn flip_machinery() -> Outcome {
    let geo = geo5(2);
    let classes = ClassTable::build(&geo).map_err(|e| e.to_string())?;
    // seed 16 gives ell = 0, so P ends on <a, a^2, a^4>, <a, a^2>
    let plan = find_class_path(&geo, &classes, 16, None).map_err(|e| e.to_string())?;
    if plan.ell != 0 {
        return Err(format!(
            "seed 16 no longer gives ell = 0 (got {})",
            plan.ell
        ));
    }
    for g in [3u32, 5] {
        let geo = &geo;
        let mut path: Vec<Subspace> = (0..g as u64)
            .flat_map(|j| plan.chosen.iter().map(move |x| geo.shift(x, j)))
            .collect();
        let mut multiset = path.clone();
        multiset.sort();
        let mut broken = None;
        let flips = flip_tail_observed(geo, &mut path, g, &mut |n, now| {
            let mut m = now.to_vec();
            m.sort();
            if broken.is_none() && (first_path_break(now).is_some() || m != multiset) {
                broken = Some(n);
            }
        })
        .map_err(|e| format!("g={g}: {e}"))?;
        if let Some(n) = broken {
            return Err(format!(
                "g={g}: reversal {n} broke the path or its multiset"
            ));
        }
        if flips != g - 1 || !closes(&path) {
            return Err(format!("g={g}: {flips} flips, closes = {}", closes(&path)));
        }
    }
    // archived natural runs with g > 1
    let mut notes = Vec::new();
    for (q, seed, g) in [(3u64, 5u64, 11u32), (4, 0, 11), (4, 12, 31)] {
        let geo = geo5(q);
        let classes = ClassTable::build(&geo).map_err(|e| e.to_string())?;
        let (cert, _) = build_cycle_k2(&geo, &classes, seed, &BuildOptions::default())
            .map_err(|e| e.to_string())?;
        if cert.meta.g != g || cert.meta.flips != g - 1 || !verify_certificate(&cert).is_valid() {
            return Err(format!("q={q} seed={seed}: meta {:?}", cert.meta));
        }
        notes.push(format!("q={q} seed={seed} g={g}"));
    }
    Ok(format!("synthetic g=3,5; natural {}", notes.join(", ")))
}

fn negative_controls() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut seen = Vec::new();
    for (name, expected) in [
        ("swapped.json", 1),
        ("deleted.json", 1),
        ("duplicated.json", 1),
        ("truncated.json", 2),
    ] {
        let code = qmiddle(&["verify", dir.join(name).to_str().unwrap()])
            .status
            .code();
        if code != Some(expected) {
            return Err(format!("{name}: exit {code:?}, expected {expected}"));
        }
        seen.push(format!("{name}={expected}"));
    }
    Ok(seen.join(" "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("k=2 build and verify, q in 2..=5", end_to_end_k2),
        ("k=1 every coprime shift", end_to_end_k1),
        ("property suite exhaustive at q=2,3", property_suite),
        ("10 distinct cycles at q=2", multiplicity),
        ("echelon oracle equivalence", oracle_equivalence),
        ("tail flipping", flip_machinery),
        ("corrupted certificates rejected", negative_controls),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}) [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
