use num_integer::gcd;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::BuildError;
use crate::geometry::{Geometry, Subspace};
use crate::orbits::ClassTable;

/// Reshuffles tried from one seed before giving up.
const MAX_RESTARTS: u32 = 16;
/// Search nodes explored per class ordering.
const NODE_BUDGET: u64 = 200_000;

/// The four classes whose positions in the orderings are fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PinnedClasses {
    /// Plane class of `<1, a, a^2>`, first in the A order.
    pub a_first: usize,
    /// Plane class of `<1, a, a^3>`, last in the A order.
    pub a_last: usize,
    /// Line class of `<1, a^2>`, first in the B order.
    pub b_first: usize,
    /// Line class of `<1, a>`, last in the B order.
    pub b_last: usize,
}

impl PinnedClasses {
    pub fn locate(geo: &Geometry, classes: &ClassTable) -> Result<Self, BuildError> {
        let plane = |a, b, c| -> Result<usize, BuildError> {
            let z = geo
                .span_triple(a, b, c)?
                .ok_or_else(|| BuildError::Invariant(format!("<{a},{b},{c}> is not a plane")))?;
            Ok(classes.class_of(geo, &z)?)
        };
        let line = |a, b| -> Result<usize, BuildError> {
            Ok(classes.class_of(geo, &geo.span_pair(a, b)?)?)
        };
        let pinned = Self {
            a_first: plane(0, 1, 2)?,
            a_last: plane(0, 1, 3)?,
            b_first: line(0, 2)?,
            b_last: line(0, 1)?,
        };
        if pinned.a_first == pinned.a_last || pinned.b_first == pinned.b_last {
            return Err(BuildError::Invariant(format!(
                "pinned classes collide: {pinned:?}"
            )));
        }
        // V_e must be the only line of B_e inside U_e
        if classes.special_partner(pinned.a_last) == pinned.b_last {
            return Err(BuildError::Invariant(
                "B_e is the special partner of A_e".into(),
            ));
        }
        Ok(pinned)
    }
}

/// Caller-supplied class orders `A_1..A_e` and `B_1..B_e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassOrders {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl ClassOrders {
    /// Pinned ends with the remaining classes in an order drawn from `rng`.
    fn shuffled(pinned: &PinnedClasses, e: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut mid_a: Vec<usize> = (0..e)
            .filter(|&c| c != pinned.a_first && c != pinned.a_last)
            .collect();
        let mut mid_b: Vec<usize> = (0..e)
            .filter(|&c| c != pinned.b_first && c != pinned.b_last)
            .collect();
        mid_a.shuffle(rng);
        mid_b.shuffle(rng);
        let mut a = vec![pinned.a_first];
        a.extend(mid_a);
        a.push(pinned.a_last);
        let mut b = vec![pinned.b_first];
        b.extend(mid_b);
        b.push(pinned.b_last);
        Self { a, b }
    }

    fn validate(&self, pinned: &PinnedClasses, e: usize) -> Result<(), BuildError> {
        let is_perm = |v: &[usize]| {
            let mut w = v.to_vec();
            w.sort_unstable();
            w == (0..e).collect::<Vec<_>>()
        };
        if !is_perm(&self.a) || !is_perm(&self.b) {
            return Err(BuildError::Precondition(format!(
                "class orders must be permutations of 0..{e}"
            )));
        }
        if self.a[0] != pinned.a_first
            || self.a[e - 1] != pinned.a_last
            || self.b[0] != pinned.b_first
            || self.b[e - 1] != pinned.b_last
        {
            return Err(BuildError::Precondition(format!(
                "class orders must respect the pinned ends {pinned:?}"
            )));
        }
        Ok(())
    }
}

/// A path `U_1, V_1, ..., U_e, V_e` meeting every shift class once.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathPlan {
    pub order_a: Vec<usize>,
    pub order_b: Vec<usize>,
    /// Alternating planes and lines, `2e` entries.
    pub chosen: Vec<Subspace>,
    /// Shift with `U_e = alpha^ell <a, a^2, a^4>`.
    pub ell: u32,
    /// `gcd(ell, s)`; equals `s` when `ell = 0`.
    pub g: u32,
}

/// Finds a class path for `seed`, or for the given orders when supplied.
pub fn find_class_path(
    geo: &Geometry,
    classes: &ClassTable,
    seed: u64,
    orders: Option<&ClassOrders>,
) -> Result<PathPlan, BuildError> {
    find_class_path_filtered(geo, classes, seed, orders, &|_| true)
}

/// Like [`find_class_path`], but backtracks until the resulting `ell` passes `accept`.
pub fn find_class_path_filtered(
    geo: &Geometry,
    classes: &ClassTable,
    seed: u64,
    orders: Option<&ClassOrders>,
    accept: &dyn Fn(u32) -> bool,
) -> Result<PathPlan, BuildError> {
    if geo.n() != 5 {
        return Err(BuildError::Precondition(format!(
            "k = 2 needs n = 5, got n = {}",
            geo.n()
        )));
    }
    let e = classes.class_count();
    let pinned = PinnedClasses::locate(geo, classes)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let attempts = if orders.is_some() { 1 } else { MAX_RESTARTS };
    let mut last = ClassOrders {
        a: Vec::new(),
        b: Vec::new(),
    };
    for _ in 0..attempts {
        let ord = match orders {
            Some(o) => {
                o.validate(&pinned, e)?;
                o.clone()
            }
            None => ClassOrders::shuffled(&pinned, e, &mut rng),
        };
        let mut search = Search::new(geo, classes, &ord, &pinned, accept)?;
        if let Some(ell) = search.run()? {
            let chosen = std::mem::take(&mut search.chosen);
            return Ok(PathPlan {
                order_a: ord.a,
                order_b: ord.b,
                chosen,
                ell,
                g: gcd(ell, geo.s()),
            });
        }
        last = ord;
    }
    Err(BuildError::ConstructionFailure {
        seed,
        order_a: last.a,
        order_b: last.b,
        detail: "backtracking exhausted every class ordering tried".into(),
    })
}

struct Search<'a> {
    geo: &'a Geometry,
    classes: &'a ClassTable,
    orders: &'a ClassOrders,
    pinned: &'a PinnedClasses,
    accept: &'a dyn Fn(u32) -> bool,
    /// `<a, a^2, a^4> = alpha^last_offset rep(A_e)`.
    last_offset: u32,
    tail_line: Subspace,
    chosen: Vec<Subspace>,
    budget: u64,
}

impl<'a> Search<'a> {
    fn new(
        geo: &'a Geometry,
        classes: &'a ClassTable,
        orders: &'a ClassOrders,
        pinned: &'a PinnedClasses,
        accept: &'a dyn Fn(u32) -> bool,
    ) -> Result<Self, BuildError> {
        let tail_plane = geo.span_triple(1, 2, 4)?.expect("<a, a^2, a^4> is a plane");
        let (class, last_offset) = classes.classify(geo, &tail_plane)?;
        debug_assert_eq!(class, pinned.a_last);
        Ok(Self {
            geo,
            classes,
            orders,
            pinned,
            accept,
            last_offset,
            tail_line: geo.span_pair(1, 2)?,
            chosen: Vec::new(),
            budget: NODE_BUDGET,
        })
    }

    fn run(&mut self) -> Result<Option<u32>, BuildError> {
        let u1 = self
            .geo
            .span_triple(0, 1, 2)?
            .expect("<1, a, a^2> is a plane");
        let v1 = self.geo.span_pair(0, 2)?;
        debug_assert!(u1.contains(&v1));
        self.chosen = vec![u1, v1.clone()];
        self.extend(1, &v1)
    }

    /// Chooses `U_{i+1}, V_{i+1}` (0-based `i`) after `prev_v`.
    fn extend(&mut self, i: usize, prev_v: &Subspace) -> Result<Option<u32>, BuildError> {
        if self.budget == 0 {
            return Ok(None);
        }
        self.budget -= 1;
        let e = self.orders.a.len();
        let s = self.geo.s();
        if i == e - 1 {
            for (u, j) in
                self.classes
                    .planes_in_class_containing(self.geo, self.pinned.a_last, prev_v)
            {
                let ell = (j + s - self.last_offset) % s;
                let v = self.geo.shift(&self.tail_line, ell as u64);
                let inside = self
                    .classes
                    .lines_in_class_inside(self.geo, self.pinned.b_last, &u);
                if inside.len() != 1 || inside[0].0 != v {
                    return Err(BuildError::Invariant(format!(
                        "U_e = {u} does not contain {v} as its unique line of class B_e"
                    )));
                }
                if (self.accept)(ell) {
                    self.chosen.push(u);
                    self.chosen.push(v);
                    return Ok(Some(ell));
                }
            }
            return Ok(None);
        }
        let (a, b) = (self.orders.a[i], self.orders.b[i]);
        for (u, _) in self.classes.planes_in_class_containing(self.geo, a, prev_v) {
            for (v, _) in self.classes.lines_in_class_inside(self.geo, b, &u) {
                self.chosen.push(u.clone());
                self.chosen.push(v.clone());
                if let Some(ell) = self.extend(i + 1, &v)? {
                    return Ok(Some(ell));
                }
                self.chosen.truncate(self.chosen.len() - 2);
            }
        }
        Ok(None)
    }
}
