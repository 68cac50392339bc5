use std::collections::HashSet;

use num_integer::gcd;

use super::{closes, first_path_break, BuildError};
use crate::certificate::{CycleCertificate, CycleMeta, FieldDescription, Verdict};
use crate::geometry::{Geometry, Subspace};

/// Hamiltonian cycle in the middle levels of P_q(3) for a shift `ell` coprime to `q^2 + q + 1`.
///
/// The line `Y = span(1, alpha)` is a planar difference set mod `s`, so some
/// point `j` of `Y` has `j + ell` in `Y` too. With `X = {j}` the copies
/// `alpha^(i ell) (X, Y)` close up after `s` steps.
pub fn build_cycle_k1(geo: &Geometry, ell: u32) -> Result<CycleCertificate, BuildError> {
    if geo.n() != 3 {
        return Err(BuildError::Precondition(format!(
            "k = 1 needs n = 3, got n = {}",
            geo.n()
        )));
    }
    let s = geo.s();
    if ell == 0 || ell >= s || gcd(ell, s) != 1 {
        return Err(BuildError::Precondition(format!(
            "ell = {ell} must lie in 1..{s} and be coprime to {s}"
        )));
    }
    let y = geo.span_pair(0, 1)?;
    let j = y
        .points()
        .iter()
        .copied()
        .find(|&j| y.contains_point((j + ell) % s))
        .ok_or_else(|| BuildError::Invariant(format!("no pair at difference {ell} in line {y}")))?;
    let x = Subspace::from_points(1, vec![j]);

    let mut vertices = Vec::with_capacity(2 * s as usize);
    for i in 0..s as u64 {
        vertices.push(geo.shift(&x, i * ell as u64));
        vertices.push(geo.shift(&y, i * ell as u64));
    }
    let distinct: HashSet<&Subspace> = vertices.iter().collect();
    if distinct.len() != vertices.len() {
        return Err(BuildError::Invariant(
            "repeated vertex in the k = 1 cycle".into(),
        ));
    }
    if let Some(i) = first_path_break(&vertices) {
        return Err(BuildError::Invariant(format!(
            "no edge between vertices {i} and {}",
            i + 1
        )));
    }
    if !closes(&vertices) {
        return Err(BuildError::Invariant("closing edge missing".into()));
    }

    let table = geo.table();
    Ok(CycleCertificate {
        q: table.q(),
        n: 3,
        k: 1,
        field: FieldDescription::of(table),
        meta: CycleMeta {
            seed: 0,
            ell,
            g: 1,
            flips: 0,
        },
        vertices,
        verdict: Verdict::HamiltonianCycle,
    })
}
