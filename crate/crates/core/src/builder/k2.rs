use std::collections::HashSet;

use num_integer::gcd;

use super::plan::{find_class_path_filtered, ClassOrders, PathPlan};
use super::{adjacent, closes, first_path_break, BuildError};
use crate::certificate::{CycleCertificate, CycleMeta, FieldDescription, Verdict};
use crate::geometry::{gaussian_coefficient, Geometry, Subspace};
use crate::orbits::ClassTable;

#[derive(Clone, Debug)]
pub struct BuildOptions {
    /// Only accept plans with `gcd(ell, s) = 1` and `ell != 0`.
    pub require_coprime: bool,
    /// Further seeds tried (`seed + 1`, `seed + 2`, ...) when a seed yields no acceptable plan.
    pub max_retries: u32,
    /// Fixed class orders instead of seeded ones.
    pub orders: Option<ClassOrders>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            require_coprime: false,
            max_retries: 64,
            orders: None,
        }
    }
}

/// Vertices the tail-flipping schedule is anchored on.
#[derive(Clone, Debug)]
pub struct FlipLandmarks {
    /// `<1, a, a^2>`, first vertex of every copy of `P`.
    pub head_plane: Subspace,
    /// `<1, a^2>`, second vertex of every copy of `P`.
    pub head_line: Subspace,
    /// `<a, a^2, a^4>`, next-to-last vertex of `Pi`.
    pub tail_plane: Subspace,
    /// `<a, a^2>`, last vertex of `Pi`.
    pub tail_line: Subspace,
}

impl FlipLandmarks {
    pub fn new(geo: &Geometry) -> Result<Self, BuildError> {
        let plane = |a, b, c| -> Result<Subspace, BuildError> {
            geo.span_triple(a, b, c)?
                .ok_or_else(|| BuildError::Invariant(format!("<{a},{b},{c}> is not a plane")))
        };
        Ok(Self {
            head_plane: plane(0, 1, 2)?,
            head_line: geo.span_pair(0, 2)?,
            tail_plane: plane(1, 2, 4)?,
            tail_line: geo.span_pair(1, 2)?,
        })
    }
}

/// `Pi = P, a^ell P, ..., a^((s/g - 1) ell) P`.
pub fn assemble_pi(geo: &Geometry, plan: &PathPlan) -> Result<Vec<Subspace>, BuildError> {
    let s = geo.s();
    if plan.ell == 0 || plan.ell >= s {
        return Err(BuildError::Precondition(format!(
            "assemble_pi needs 0 < ell < {s}, got {}",
            plan.ell
        )));
    }
    let copies = (s / plan.g) as u64;
    let mut pi = Vec::with_capacity(copies as usize * plan.chosen.len());
    for i in 0..copies {
        let j = i * plan.ell as u64;
        pi.extend(plan.chosen.iter().map(|x| geo.shift(x, j)));
    }
    ensure_distinct(&pi)?;
    if let Some(i) = first_path_break(&pi) {
        return Err(BuildError::Invariant(format!(
            "Pi breaks between vertices {i} and {}",
            i + 1
        )));
    }
    Ok(pi)
}

fn ensure_distinct(path: &[Subspace]) -> Result<(), BuildError> {
    let mut seen = HashSet::with_capacity(path.len());
    for (i, x) in path.iter().enumerate() {
        if !seen.insert(x) {
            return Err(BuildError::Invariant(format!(
                "vertex {x} repeats at index {i}"
            )));
        }
    }
    Ok(())
}

/// Turns `Pi` into a Hamiltonian cycle: directly when `g = 1`, otherwise by
/// chaining `Pi, a Pi, ..., a^(g-1) Pi` and flipping prefixes. Returns the
/// cycle and the number of reversals performed.
pub fn close_or_flip(
    geo: &Geometry,
    plan: &PathPlan,
    pi: Vec<Subspace>,
) -> Result<(Vec<Subspace>, u32), BuildError> {
    if plan.g == 1 {
        if !closes(&pi) {
            return Err(BuildError::Invariant(
                "Pi does not close although g = 1".into(),
            ));
        }
        return Ok((pi, 0));
    }
    let mut path = Vec::with_capacity(pi.len() * plan.g as usize);
    for j in 0..plan.g as u64 {
        path.extend(pi.iter().map(|x| geo.shift(x, j)));
    }
    if let Some(i) = first_path_break(&path) {
        return Err(BuildError::Invariant(format!(
            "chained copies of Pi break at {i}"
        )));
    }
    let flips = flip_tail(geo, &mut path, plan.g)?;
    Ok((path, flips))
}

/// Closes `T = Pi, a Pi, ..., a^(g-1) Pi` into a cycle by prefix reversals.
///
/// `T` must start with `<1, a, a^2>` and each block `a^j Pi` must end with
/// `a^j <a, a^2, a^4>, a^j <a, a^2>`. Step `i` reverses the prefix ending at
/// `a^(2i-2) <a, a^2, a^4>` and then the prefix ending at `a^(2i) <1, a, a^2>`.
/// After `(g-1)/2` steps the path runs from `a^(g-1) <1, a, a^2>` to
/// `a^(g-1) <a, a^2>`, which closes it.
pub fn flip_tail(geo: &Geometry, path: &mut [Subspace], g: u32) -> Result<u32, BuildError> {
    flip_tail_observed(geo, path, g, &mut |_, _| {})
}

/// [`flip_tail`] with a callback after each reversal, receiving the reversal count so far.
pub fn flip_tail_observed(
    geo: &Geometry,
    path: &mut [Subspace],
    g: u32,
    observer: &mut dyn FnMut(u32, &[Subspace]),
) -> Result<u32, BuildError> {
    if g.is_multiple_of(2) {
        return Err(BuildError::Precondition(format!("g = {g} must be odd")));
    }
    let marks = FlipLandmarks::new(geo)?;
    let mut flips = 0;
    for step in 1..=(g - 1) / 2 {
        let a = 2 * step as u64 - 2;
        let fail = |detail: String| BuildError::Flip { step, detail };

        let head = geo.shift(&marks.head_plane, a);
        if path[0] != head {
            return Err(fail(format!(
                "path starts with {} instead of {head}",
                path[0]
            )));
        }
        let end = geo.shift(&marks.tail_plane, a);
        let idx =
            locate(path, &end).ok_or_else(|| fail(format!("pinned vertex {end} not found")))?;
        let next = geo.shift(&marks.tail_line, a);
        if path.get(idx + 1) != Some(&next) {
            return Err(fail(format!("{end} is not followed by {next}")));
        }
        reverse_prefix(path, idx)
            .map_err(|i| fail(format!("first reversal broke the path at {i}")))?;
        flips += 1;
        observer(flips, path);

        let end = geo.shift(&marks.head_plane, a + 2);
        let idx =
            locate(path, &end).ok_or_else(|| fail(format!("pinned vertex {end} not found")))?;
        let next = geo.shift(&marks.head_line, a + 2);
        if path.get(idx + 1) != Some(&next) {
            return Err(fail(format!("{end} is not followed by {next}")));
        }
        reverse_prefix(path, idx)
            .map_err(|i| fail(format!("second reversal broke the path at {i}")))?;
        flips += 1;
        observer(flips, path);
    }

    let last_shift = g as u64 - 1;
    let first = geo.shift(&marks.head_plane, last_shift);
    let last = geo.shift(&marks.tail_line, last_shift);
    if path.first() != Some(&first) || path.last() != Some(&last) {
        return Err(BuildError::Flip {
            step: (g - 1) / 2,
            detail: format!("final endpoints are not {first} ... {last}"),
        });
    }
    if !adjacent(&last, &first) {
        return Err(BuildError::Invariant("flipped path does not close".into()));
    }
    Ok(flips)
}

fn locate(path: &[Subspace], x: &Subspace) -> Option<usize> {
    path.iter().position(|y| y == x)
}

/// Reverses `path[..=end]` and re-checks every edge.
fn reverse_prefix(path: &mut [Subspace], end: usize) -> Result<(), usize> {
    path[..=end].reverse();
    match first_path_break(path) {
        Some(i) => Err(i),
        None => Ok(()),
    }
}

/// The `ell = 0` variant: `Pi = P, a P, ..., a^(s-1) P` is already a cycle.
pub fn build_cycle_k2_ell0(
    geo: &Geometry,
    plan: &PathPlan,
    seed: u64,
) -> Result<CycleCertificate, BuildError> {
    if plan.ell != 0 {
        return Err(BuildError::Precondition(format!(
            "expected ell = 0, got {}",
            plan.ell
        )));
    }
    let s = geo.s() as u64;
    let mut pi = Vec::with_capacity(s as usize * plan.chosen.len());
    for j in 0..s {
        pi.extend(plan.chosen.iter().map(|x| geo.shift(x, j)));
    }
    ensure_distinct(&pi)?;
    finish(geo, plan, seed, pi, 0)
}

fn finish(
    geo: &Geometry,
    plan: &PathPlan,
    seed: u64,
    cycle: Vec<Subspace>,
    flips: u32,
) -> Result<CycleCertificate, BuildError> {
    let q = geo.q();
    let expected = 2 * gaussian_coefficient::<u64>(q as u64, 5, 2)?;
    if cycle.len() as u64 != expected {
        return Err(BuildError::Invariant(format!(
            "cycle has {} vertices, expected {expected}",
            cycle.len()
        )));
    }
    if let Some(i) = first_path_break(&cycle) {
        return Err(BuildError::Invariant(format!(
            "cycle breaks between vertices {i} and {}",
            i + 1
        )));
    }
    if !closes(&cycle) {
        return Err(BuildError::Invariant("closing edge missing".into()));
    }
    let table = geo.table();
    Ok(CycleCertificate {
        q,
        n: 5,
        k: 2,
        field: FieldDescription::of(table),
        meta: CycleMeta {
            seed,
            ell: plan.ell,
            g: plan.g,
            flips,
        },
        vertices: cycle,
        verdict: Verdict::HamiltonianCycle,
    })
}

/// Full `k = 2` construction: class path, then the `ell = 0`, `g = 1` or flipping branch.
pub fn build_cycle_k2(
    geo: &Geometry,
    classes: &ClassTable,
    seed: u64,
    options: &BuildOptions,
) -> Result<(CycleCertificate, PathPlan), BuildError> {
    let s = geo.s();
    let accept = |ell: u32| !options.require_coprime || (ell != 0 && gcd(ell, s) == 1);
    let mut tried = 0;
    let plan = loop {
        let current = seed + tried as u64;
        match find_class_path_filtered(geo, classes, current, options.orders.as_ref(), &accept) {
            Ok(plan) => break (plan, current),
            Err(BuildError::ConstructionFailure { .. })
                if options.require_coprime
                    && tried < options.max_retries
                    && options.orders.is_none() =>
            {
                tried += 1;
            }
            Err(err) => return Err(err),
        }
    };
    let (plan, used_seed) = plan;
    let cert = if plan.ell == 0 {
        build_cycle_k2_ell0(geo, &plan, used_seed)?
    } else {
        let pi = assemble_pi(geo, &plan)?;
        let (cycle, flips) = close_or_flip(geo, &plan, pi)?;
        finish(geo, &plan, used_seed, cycle, flips)?
    };
    Ok((cert, plan))
}
