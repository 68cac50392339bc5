//! Cycle construction in the middle levels of P_q(3) and P_q(5).
//!
//! Both constructions pick a short path `P` meeting every shift class once
//! and then concatenate shifted copies of it. For `k = 2` the copies are
//! shifted by `ell`, read off the last plane of `P`; when `gcd(ell, s) = g > 1`
//! the `g` resulting cycles are chained into a Hamiltonian path and closed by
//! repeated prefix reversals (see [`flip_tail`]).

mod k1;
mod k2;
mod plan;

pub use k1::build_cycle_k1;
pub use k2::{
    assemble_pi, build_cycle_k2, build_cycle_k2_ell0, close_or_flip, flip_tail, flip_tail_observed,
    BuildOptions, FlipLandmarks,
};
pub use plan::{find_class_path, find_class_path_filtered, ClassOrders, PathPlan, PinnedClasses};

use thiserror::Error;

use crate::geometry::{GeometryError, Subspace};
use crate::orbits::OrbitError;

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(
        "construction failed (seed {seed}, A order {order_a:?}, B order {order_b:?}): {detail}"
    )]
    ConstructionFailure {
        seed: u64,
        order_a: Vec<usize>,
        order_b: Vec<usize>,
        detail: String,
    },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("flip step {step} failed: {detail}")]
    Flip { step: u32, detail: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
}

/// Index of the first consecutive pair that is not a middle-levels edge.
///
/// Consecutive vertices must differ in dimension by one, the smaller
/// contained in the larger.
pub fn first_path_break(path: &[Subspace]) -> Option<usize> {
    path.windows(2).position(|w| !adjacent(&w[0], &w[1]))
}

pub(crate) fn adjacent(a: &Subspace, b: &Subspace) -> bool {
    if a.dim() == b.dim() + 1 {
        a.contains(b)
    } else if b.dim() == a.dim() + 1 {
        b.contains(a)
    } else {
        false
    }
}

/// Whether `path` closes into a cycle through the edge last -> first.
pub fn closes(path: &[Subspace]) -> bool {
    match (path.first(), path.last()) {
        (Some(a), Some(b)) if path.len() > 2 => adjacent(b, a),
        _ => false,
    }
}
