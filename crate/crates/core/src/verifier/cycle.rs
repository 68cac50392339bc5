//! Independent validation of a cycle certificate.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::echelon::EchelonOracle;
use super::report::{CheckResult, Status};
use crate::certificate::CycleCertificate;
use crate::field::{find_primitive_polynomial, is_primitive, prime_power, SmallField};
use crate::geometry::{gaussian_coefficient, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Validity {
    Valid,
    Invalid,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub verdict: Validity,
    pub vertices: usize,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn is_valid(&self) -> bool {
        self.verdict == Validity::Valid
    }

    /// The first failing check in report order.
    pub fn first_violation(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.status == Status::Fail)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        match (self.verdict, self.first_violation()) {
            (Validity::Valid, _) => {
                write!(f, "VALID: Hamiltonian cycle on {} vertices", self.vertices)
            }
            (_, Some(c)) => write!(f, "INVALID: first violation in {}", c.check),
            (_, None) => write!(f, "INVALID"),
        }
    }
}

const FIELD: &str = "field";
const COUNT: &str = "count";
const SUBSPACES: &str = "subspaces";
const EDGES: &str = "edges";
const CLOSING: &str = "closing_edge";
const DISTINCT: &str = "distinct";

/// Checks that `cert` describes a Hamiltonian cycle in the middle levels.
///
/// Runs, in order: the field description, the vertex count, every vertex
/// being a subspace of the stated dimension, consecutive containment, the
/// closing edge and distinctness. Uses only [`EchelonOracle`] arithmetic.
pub fn verify_certificate(cert: &CycleCertificate) -> VerifyReport {
    let mut checks = Vec::with_capacity(6);
    let oracle = match field_oracle(cert) {
        Ok(o) => {
            checks.push(CheckResult::pass(FIELD));
            o
        }
        Err(detail) => {
            checks.push(CheckResult::fail(FIELD, json!({ "detail": detail })));
            for name in [COUNT, SUBSPACES, EDGES, CLOSING, DISTINCT] {
                checks.push(CheckResult::skipped(name));
            }
            return finish(cert, checks);
        }
    };
    let k = cert.k;
    let v = &cert.vertices;

    let expected = gaussian_coefficient::<u64>(cert.q as u64, cert.n, k).map(|g| 2 * g);
    checks.push(match expected {
        Ok(e) if e == v.len() as u64 => CheckResult::pass(COUNT),
        Ok(e) => CheckResult::fail(COUNT, json!({ "expected": e, "found": v.len() })),
        Err(err) => CheckResult::fail(COUNT, json!({ "detail": err.to_string() })),
    });

    let bad: Vec<Option<String>> = v
        .par_iter()
        .map(|x| vertex_problem(&oracle, k, x))
        .collect();
    checks.push(match bad.iter().position(Option::is_some) {
        None => CheckResult::pass(SUBSPACES),
        Some(i) => CheckResult::fail(
            SUBSPACES,
            json!({ "index": i, "vertex": v[i], "detail": bad[i].clone() }),
        ),
    });

    let edge_ok = |i: usize, j: usize| {
        bad[i].is_none() && bad[j].is_none() && adjacent(&oracle, &v[i], &v[j])
    };
    let broken = (0..v.len().saturating_sub(1))
        .into_par_iter()
        .find_first(|&i| !edge_ok(i, i + 1));
    checks.push(match broken {
        None => CheckResult::pass(EDGES),
        Some(i) => CheckResult::fail(EDGES, json!({ "index": i, "from": v[i], "to": v[i + 1] })),
    });

    checks.push(if v.len() > 2 && edge_ok(v.len() - 1, 0) {
        CheckResult::pass(CLOSING)
    } else {
        CheckResult::fail(CLOSING, json!({ "index": v.len().saturating_sub(1) }))
    });

    let mut seen: HashMap<&Subspace, usize> = HashMap::with_capacity(v.len());
    let repeat = v
        .iter()
        .enumerate()
        .find_map(|(i, x)| seen.insert(x, i).map(|first| (first, i)));
    checks.push(match repeat {
        None => CheckResult::pass(DISTINCT),
        Some((first, i)) => CheckResult::fail(
            DISTINCT,
            json!({ "index": i, "first": first, "vertex": v[i] }),
        ),
    });

    finish(cert, checks)
}

fn finish(cert: &CycleCertificate, checks: Vec<CheckResult>) -> VerifyReport {
    let verdict = if checks.iter().all(CheckResult::passed) {
        Validity::Valid
    } else {
        Validity::Invalid
    };
    VerifyReport {
        verdict,
        vertices: cert.vertices.len(),
        checks,
    }
}

fn field_oracle(cert: &CycleCertificate) -> Result<EchelonOracle, String> {
    let f = &cert.field;
    let (p, m) =
        prime_power(cert.q as u64).ok_or_else(|| format!("q = {} is not a prime power", cert.q))?;
    if (p, m) != (f.p, f.m) {
        return Err(format!(
            "q = {} is {p}^{m}, field says {}^{}",
            cert.q, f.p, f.m
        ));
    }
    if cert.k == 0 || cert.n != 2 * cert.k + 1 || f.n != cert.n {
        return Err(format!(
            "need n = 2k + 1, got n = {} (field n = {}), k = {}",
            cert.n, f.n, cert.k
        ));
    }
    if (cert.q as u64)
        .checked_pow(cert.n)
        .is_none_or(|e| e > 1 << 24)
    {
        return Err(format!("GF({}^{}) is too large to verify", cert.q, cert.n));
    }
    let oracle = EchelonOracle::new(p, m, &f.poly).map_err(|e| e.to_string())?;
    let prime = SmallField::prime(p).map_err(|e| e.to_string())?;
    let base = if m == 1 {
        prime
    } else {
        let poly = find_primitive_polynomial(p, m).map_err(|e| e.to_string())?;
        SmallField::extension(&prime, &poly).map_err(|e| e.to_string())?
    };
    if !is_primitive(&base, &f.poly) {
        return Err(format!("{:?} is not primitive over GF({})", f.poly, cert.q));
    }
    Ok(oracle)
}

fn vertex_problem(oracle: &EchelonOracle, k: u32, x: &Subspace) -> Option<String> {
    let dim = x.dim();
    if dim != k && dim != k + 1 {
        return Some(format!("dimension {dim} is outside the middle levels"));
    }
    let pts = x.points();
    if let Some(&p) = pts.iter().find(|&&p| p >= oracle.s()) {
        return Some(format!("point {p} is not below s = {}", oracle.s()));
    }
    if pts.windows(2).any(|w| w[0] >= w[1]) {
        return Some("points are not strictly ascending".into());
    }
    let rank = oracle.rank(pts);
    if rank != dim as usize {
        return Some(format!("rank {rank} differs from dimension {dim}"));
    }
    if oracle.span(pts) != pts {
        return Some("point set is not closed under linear combination".into());
    }
    None
}

fn adjacent(oracle: &EchelonOracle, a: &Subspace, b: &Subspace) -> bool {
    let (big, small) = if a.dim() == b.dim() + 1 {
        (a, b)
    } else if b.dim() == a.dim() + 1 {
        (b, a)
    } else {
        return false;
    };
    oracle.contains(big.points(), small.points())
}
