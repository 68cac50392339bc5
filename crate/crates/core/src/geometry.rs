//! Projective geometry of F_q^n in the exponent-mod-`s` encoding.
//!
//! A projective point is the residue `e mod s` of any exponent `e` with
//! `alpha^e` on the point; scaling by GF(q)* adds a multiple of `s`. A
//! subspace is stored as its sorted point set, so the shift `X -> alpha^j X`
//! is `+j mod s` on every point.

use std::fmt;

use num_traits::{checked_pow, PrimInt, Unsigned};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::FieldTable;

/// Residue mod `s` naming a one-dimensional subspace.
pub type Point = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("degenerate span: repeated point {0}")]
    Degenerate(Point),
    #[error("Gaussian coefficient [{n} choose {r}]_{q} overflows the target integer type")]
    Overflow { q: u64, n: u32, r: u32 },
    #[error("invalid dimension {r} for ambient dimension {n}")]
    InvalidDimension { n: u32, r: u32 },
}

/// Exact q-binomial coefficient, i.e. the number of `r`-dimensional subspaces of F_q^n.
pub fn gaussian_coefficient<T>(q: u64, n: u32, r: u32) -> Result<T, GeometryError>
where
    T: PrimInt + Unsigned,
{
    if r > n {
        return Err(GeometryError::InvalidDimension { n, r });
    }
    let overflow = GeometryError::Overflow { q, n, r };
    let q_t = T::from(q).ok_or(overflow.clone())?;
    let one = T::one();
    let mut acc = one;
    // acc runs through [n choose i]_q, so every division is exact
    for i in 0..r {
        let num = checked_pow(q_t, (n - i) as usize).ok_or(overflow.clone())? - one;
        let den = checked_pow(q_t, (i + 1) as usize).ok_or(overflow.clone())? - one;
        acc = acc.checked_mul(&num).ok_or(overflow.clone())? / den;
    }
    Ok(acc)
}

/// Number of points of a `dim`-dimensional subspace, `(q^dim - 1)/(q - 1)`.
pub fn points_in_dim(q: u32, dim: u32) -> usize {
    (0..dim).map(|i| (q as usize).pow(i)).sum()
}

/// A subspace given by its dimension and sorted projective point set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subspace {
    dim: u32,
    points: Vec<Point>,
}

impl Subspace {
    /// Wraps a point set without checking closure; `points` is sorted and deduplicated.
    pub fn from_points(dim: u32, mut points: Vec<Point>) -> Self {
        points.sort_unstable();
        points.dedup();
        Self { dim, points }
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn contains_point(&self, x: Point) -> bool {
        self.points.binary_search(&x).is_ok()
    }

    /// Point-set inclusion `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> bool {
        if other.points.len() > self.points.len() {
            return false;
        }
        let mut it = self.points.iter();
        'outer: for x in &other.points {
            for y in it.by_ref() {
                if y == x {
                    continue 'outer;
                }
                if y > x {
                    return false;
                }
            }
            return false;
        }
        true
    }

    /// `alpha^j X`, with `s` the number of projective points.
    pub fn shifted(&self, j: u64, s: u32) -> Subspace {
        let j = (j % s as u64) as u32;
        let mut points: Vec<Point> = self
            .points
            .iter()
            .map(|&x| {
                let y = x + j;
                if y >= s {
                    y - s
                } else {
                    y
                }
            })
            .collect();
        points.sort_unstable();
        Subspace {
            dim: self.dim,
            points,
        }
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<dim {}: {:?}>", self.dim, self.points)
    }
}

/// Span and enumeration routines over a fixed [`FieldTable`].
///
/// Pair spans go through a precomputed table of the lines `span(0, d)`; a
/// general pair span is a shift of one of them. Spans with a new point
/// (`span_with`) use the Zech table directly.
#[derive(Clone, Debug)]
pub struct Geometry {
    table: FieldTable,
    /// `lines[d]` for `1 <= d < s`; `lines[0]` is unused.
    lines: Vec<Vec<Point>>,
}

impl Geometry {
    pub fn new(table: FieldTable) -> Self {
        let s = table.s();
        let q = table.q();
        let mut lines = vec![Vec::new(); s as usize];
        for d in 1..s {
            let mut pts = Vec::with_capacity(q as usize + 1);
            pts.push(0);
            pts.push(d);
            for j in 0..q - 1 {
                let e = table
                    .log_sum(0, d + j * s)
                    .expect("distinct projective points never sum to zero");
                pts.push(e % s);
            }
            pts.sort_unstable();
            lines[d as usize] = pts;
        }
        Self { table, lines }
    }

    pub fn table(&self) -> &FieldTable {
        &self.table
    }

    pub fn q(&self) -> u32 {
        self.table.q()
    }

    pub fn n(&self) -> u32 {
        self.table.n()
    }

    pub fn s(&self) -> u32 {
        self.table.s()
    }

    pub fn point(&self, exponent: u64) -> Point {
        (exponent % self.s() as u64) as Point
    }

    pub fn shift(&self, x: &Subspace, j: u64) -> Subspace {
        x.shifted(j, self.s())
    }

    /// The line through two distinct points.
    pub fn span_pair(&self, a: Point, b: Point) -> Result<Subspace, GeometryError> {
        let s = self.s();
        let (a, b) = (a % s, b % s);
        if a == b {
            return Err(GeometryError::Degenerate(a));
        }
        let d = if b > a { b - a } else { b + s - a };
        let base = Subspace {
            dim: 2,
            points: self.lines[d as usize].clone(),
        };
        Ok(base.shifted(a as u64, s))
    }

    /// `span(X, c)`, or `None` when `c` already lies in `X`.
    pub fn span_with(&self, x: &Subspace, c: Point) -> Option<Subspace> {
        let s = self.s();
        let c = c % s;
        if x.contains_point(c) {
            return None;
        }
        let mut pts = Vec::with_capacity(x.points.len() * self.q() as usize + 1);
        pts.extend_from_slice(&x.points);
        pts.push(c);
        self.push_cross_sums(x, c, &mut pts);
        pts.sort_unstable();
        debug_assert!(pts.windows(2).all(|w| w[0] < w[1]));
        Some(Subspace {
            dim: x.dim + 1,
            points: pts,
        })
    }

    fn push_cross_sums(&self, x: &Subspace, c: Point, out: &mut Vec<Point>) {
        let s = self.s();
        for &y in &x.points {
            for j in 0..self.q() - 1 {
                if let Some(e) = self.table.log_sum(y, c + j * s) {
                    out.push(e % s);
                }
            }
        }
    }

    /// `span(a, b, c)`; `Ok(None)` when the three points are dependent.
    pub fn span_triple(
        &self,
        a: Point,
        b: Point,
        c: Point,
    ) -> Result<Option<Subspace>, GeometryError> {
        let s = self.s();
        let (a, b, c) = (a % s, b % s, c % s);
        if a == c || b == c {
            return Err(GeometryError::Degenerate(c));
        }
        let line = self.span_pair(a, b)?;
        Ok(self.span_with(&line, c))
    }

    /// Span of an arbitrary point list.
    pub fn span_points(&self, points: &[Point]) -> Subspace {
        let mut acc = Subspace {
            dim: 0,
            points: Vec::new(),
        };
        for &p in points {
            if let Some(next) = self.span_with(&acc, p) {
                acc = next;
            }
        }
        acc
    }

    /// All lines contained in `x`, each once, in sorted order.
    pub fn lines_in(&self, x: &Subspace) -> Vec<Subspace> {
        let mut out = Vec::new();
        for (i, &a) in x.points.iter().enumerate() {
            for &b in &x.points[i + 1..] {
                let line = self.span_pair(a, b).expect("distinct points");
                // each line is produced once, from its two smallest points
                if line.points[0] == a && line.points[1] == b {
                    out.push(line);
                }
            }
        }
        out.sort();
        out
    }

    /// Every `r`-dimensional subspace exactly once, sorted.
    pub fn enumerate_grassmannian(&self, r: u32) -> Vec<Subspace> {
        let mut all: Vec<Subspace> = (0..self.s())
            .into_par_iter()
            .flat_map_iter(|first| self.enumerate_with_min(r, first))
            .collect();
        all.sort();
        all
    }

    /// The `r`-dimensional subspaces whose smallest point is `first`.
    ///
    /// Each subspace has a unique greedy basis `g_1 < g_2 < ...` where
    /// `g_{i+1}` is the smallest point outside `span(g_1..g_i)`; the search
    /// walks increasing generators and prunes any step that adds a point
    /// below the new generator.
    pub fn enumerate_with_min(&self, r: u32, first: Point) -> Vec<Subspace> {
        let mut out = Vec::new();
        if r == 0 || r > self.n() {
            return out;
        }
        let start = Subspace {
            dim: 1,
            points: vec![first],
        };
        self.extend_greedy(&start, first, r, &mut out);
        out
    }

    fn extend_greedy(&self, cur: &Subspace, last: Point, r: u32, out: &mut Vec<Subspace>) {
        if cur.dim == r {
            out.push(cur.clone());
            return;
        }
        let s = self.s();
        let mut scratch = Vec::new();
        for c in last + 1..s {
            if cur.contains_point(c) {
                continue;
            }
            scratch.clear();
            if !self.cross_sums_at_least(cur, c, &mut scratch) {
                continue;
            }
            scratch.extend_from_slice(&cur.points);
            scratch.push(c);
            scratch.sort_unstable();
            let next = Subspace {
                dim: cur.dim + 1,
                points: scratch.clone(),
            };
            self.extend_greedy(&next, c, r, out);
        }
    }

    /// Pushes the new points of `span(x, c)` into `out`, stopping early with
    /// `false` as soon as one is smaller than `c`.
    fn cross_sums_at_least(&self, x: &Subspace, c: Point, out: &mut Vec<Point>) -> bool {
        let s = self.s();
        for &y in &x.points {
            for j in 0..self.q() - 1 {
                if let Some(e) = self.table.log_sum(y, c + j * s) {
                    let p = e % s;
                    if p < c {
                        return false;
                    }
                    out.push(p);
                }
            }
        }
        true
    }

    /// Ordered differences `(y - x) mod s` over distinct point pairs of `x`.
    pub fn differences(&self, x: &Subspace) -> Vec<u32> {
        let s = self.s();
        let mut out = Vec::with_capacity(x.points.len() * x.points.len());
        for &a in &x.points {
            for &b in &x.points {
                if a != b {
                    out.push(if b > a { b - a } else { b + s - a });
                }
            }
        }
        out
    }

    /// Replaces the stored line `span(0, d)` with `span(0, other)`. Only for
    /// fault-injection runs of the property suite.
    #[doc(hidden)]
    pub fn inject_span_fault(&mut self, d: u32, other: u32) {
        self.lines[d as usize] = self.lines[other as usize].clone();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn geo(q: u64, n: u32) -> Geometry {
        Geometry::new(FieldTable::for_order(q, n).unwrap())
    }

    /// Brute-force subspace count: closed sets of nonzero vectors, via row
    /// spaces of all generator tuples, independent of the log tables.
    fn brute_force_count(q: u64, n: u32, r: u32) -> usize {
        let t = FieldTable::for_order(q, n).unwrap();
        let base = t.base();
        let total = (q as u32).pow(n);
        let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
        let combine = |gens: &[u32]| -> Vec<u32> {
            let mut space: BTreeSet<u32> = BTreeSet::new();
            space.insert(0);
            for &g in gens {
                let gv = t.decode(g);
                let mut next = space.clone();
                for &v in &space {
                    let vv = t.decode(v);
                    for c in 1..q as u32 {
                        let w: Vec<u32> = vv
                            .iter()
                            .zip(&gv)
                            .map(|(&a, &b)| base.add(a, base.mul(c, b)))
                            .collect();
                        next.insert(t.encode(&w));
                    }
                }
                space = next;
            }
            space.into_iter().collect()
        };
        fn rec(
            start: u32,
            total: u32,
            depth: u32,
            gens: &mut Vec<u32>,
            f: &dyn Fn(&[u32]) -> Vec<u32>,
            q: u64,
            r: u32,
            seen: &mut BTreeSet<Vec<u32>>,
        ) {
            if depth == 0 {
                let sp = f(gens);
                if sp.len() as u64 == q.pow(r) {
                    seen.insert(sp);
                }
                return;
            }
            for g in start..total {
                gens.push(g);
                rec(g + 1, total, depth - 1, gens, f, q, r, seen);
                gens.pop();
            }
        }
        rec(1, total, r, &mut Vec::new(), &combine, q, r, &mut seen);
        seen.len()
    }

    #[test]
    fn gaussian_frozen_values() {
        assert_eq!(gaussian_coefficient::<u64>(2, 5, 0).unwrap(), 1);
        assert_eq!(gaussian_coefficient::<u64>(7, 5, 0).unwrap(), 1);
        assert_eq!(gaussian_coefficient::<u64>(2, 5, 2).unwrap(), 155);
        assert_eq!(gaussian_coefficient::<u64>(3, 5, 2).unwrap(), 1210);
        assert_eq!(gaussian_coefficient::<u64>(4, 5, 2).unwrap(), 5797);
        assert_eq!(gaussian_coefficient::<u64>(5, 5, 2).unwrap(), 20306);
        assert_eq!(gaussian_coefficient::<u64>(2, 5, 3).unwrap(), 155);
        assert_eq!(gaussian_coefficient::<u64>(3, 3, 1).unwrap(), 13);
        assert_eq!(gaussian_coefficient::<u128>(16, 3, 1).unwrap(), 273);
    }

    #[test]
    fn gaussian_matches_product_form() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let s = (q.pow(5) - 1) / (q - 1);
            assert_eq!(
                gaussian_coefficient::<u64>(q, 5, 2).unwrap(),
                s * (q * q + 1)
            );
            assert_eq!(
                gaussian_coefficient::<u64>(q, 5, 3).unwrap(),
                s * (q * q + 1)
            );
            assert_eq!(gaussian_coefficient::<u64>(q, 5, 1).unwrap(), s);
        }
    }

    #[test]
    fn gaussian_matches_brute_force() {
        assert_eq!(brute_force_count(2, 5, 2), 155);
        assert_eq!(brute_force_count(2, 5, 3), 155);
        assert_eq!(brute_force_count(3, 5, 1), 121);
        assert_eq!(brute_force_count(2, 3, 2), 7);
    }

    #[test]
    fn gaussian_overflow_detected() {
        assert!(matches!(
            gaussian_coefficient::<u8>(3, 5, 2),
            Err(GeometryError::Overflow { .. })
        ));
        assert!(gaussian_coefficient::<u64>(1 << 20, 12, 6).is_err());
        assert!(matches!(
            gaussian_coefficient::<u64>(2, 3, 4),
            Err(GeometryError::InvalidDimension { .. })
        ));
    }

    #[test]
    fn span_pair_gf32_frozen() {
        let g = geo(2, 5);
        assert_eq!(g.span_pair(0, 1).unwrap().points(), &[0, 1, 18]);
    }

    #[test]
    fn span_pair_basic_properties() {
        for q in [2, 3, 4] {
            let g = geo(q, 5);
            let s = g.s();
            for a in (0..s).step_by(3) {
                for b in 0..s {
                    if a == b {
                        assert_eq!(g.span_pair(a, b), Err(GeometryError::Degenerate(a)));
                        continue;
                    }
                    let l = g.span_pair(a, b).unwrap();
                    assert_eq!(l.points().len(), q as usize + 1);
                    assert_eq!(l, g.span_pair(b, a).unwrap());
                    assert!(l.contains_point(a) && l.contains_point(b));
                }
            }
        }
    }

    #[test]
    fn span_pair_is_representative_independent() {
        for q in [2, 3] {
            let g = geo(q, 5);
            for l in g.enumerate_grassmannian(2) {
                for &a in l.points() {
                    for &b in l.points() {
                        if a != b {
                            assert_eq!(g.span_pair(a, b).unwrap(), l);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn span_triple_cases() {
        let g = geo(2, 5);
        assert_eq!(g.span_triple(0, 1, 2).unwrap().unwrap().points().len(), 7);
        let l = g.span_pair(3, 9).unwrap();
        let x = *l.points().iter().find(|&&x| x != 3 && x != 9).unwrap();
        assert_eq!(g.span_triple(3, 9, x).unwrap(), None);
        assert!(g.span_triple(4, 4, 5).is_err());
        assert!(g.span_triple(4, 5, 5).is_err());
        let g3 = geo(3, 5);
        for i in 1..g3.s() {
            let z = g3.span_triple(0, i, 2 * i).unwrap().expect("independent");
            assert_eq!(z.points().len(), 13);
        }
    }

    #[test]
    fn containment() {
        let g = geo(2, 5);
        let u = g.span_triple(0, 1, 2).unwrap().unwrap();
        assert!(u.contains(&g.span_pair(0, 2).unwrap()));
        assert!(u.contains(&u));
        // frozen: <0,1,2> = {0,1,2,17,18,19,...}; 4 is not a point of it
        assert!(!u.contains_point(4));
        assert!(!u.contains(&g.span_pair(0, 4).unwrap()));
    }

    #[test]
    fn shift_group_action() {
        let g = geo(3, 5);
        let x = g.span_triple(0, 5, 17).unwrap().unwrap();
        assert_eq!(g.shift(&x, 0), x);
        assert_eq!(g.shift(&x, g.s() as u64), x);
        assert_eq!(g.shift(&g.shift(&x, 40), 100), g.shift(&x, 140));
    }

    #[test]
    fn shift_commutes_with_span() {
        let g = geo(3, 5);
        for j in [1u64, 7, 60] {
            for (a, b) in [(0, 1), (4, 90), (100, 3)] {
                let l = g.span_pair(a, b).unwrap();
                let moved = g
                    .span_pair(g.point(a as u64 + j), g.point(b as u64 + j))
                    .unwrap();
                assert_eq!(g.shift(&l, j), moved);
            }
        }
    }

    #[test]
    fn grassmannian_counts() {
        let g = geo(2, 5);
        assert_eq!(g.enumerate_grassmannian(1).len(), 31);
        assert_eq!(g.enumerate_grassmannian(2).len(), 155);
        assert_eq!(g.enumerate_grassmannian(3).len(), 155);
        let g = geo(3, 5);
        assert_eq!(g.enumerate_grassmannian(2).len(), 1210);
        assert_eq!(g.enumerate_grassmannian(3).len(), 1210);
        let g = geo(4, 3);
        assert_eq!(g.enumerate_grassmannian(2).len(), 21);
        assert_eq!(g.enumerate_grassmannian(3).len(), 1);
    }

    #[test]
    fn grassmannian_is_closed_and_distinct() {
        let g = geo(3, 5);
        for r in [2, 3] {
            let all = g.enumerate_grassmannian(r);
            let set: BTreeSet<_> = all.iter().cloned().collect();
            assert_eq!(set.len(), all.len());
            for x in &all {
                assert_eq!(x.points().len(), points_in_dim(3, r));
                // closure: every pair spans a line inside x
                for l in g.lines_in(x) {
                    assert!(x.contains(&l));
                }
            }
        }
    }

    #[test]
    fn lines_in_plane_count() {
        let g = geo(3, 5);
        let z = g.span_triple(0, 1, 2).unwrap().unwrap();
        assert_eq!(g.lines_in(&z).len(), 13);
    }

    #[test]
    fn line_differences_are_distinct() {
        for q in [2, 3] {
            let g = geo(q, 5);
            for l in g.enumerate_grassmannian(2) {
                let diffs = g.differences(&l);
                let set: BTreeSet<_> = diffs.iter().collect();
                assert_eq!(diffs.len(), (q * q + q) as usize);
                assert_eq!(set.len(), diffs.len());
            }
        }
    }

    #[test]
    fn intersection_dimension_law() {
        // adjacent pairs satisfy dim X + dim Y - 2 dim(X ∩ Y) = 1
        let g = geo(2, 5);
        let planes = g.enumerate_grassmannian(3);
        let lines = g.enumerate_grassmannian(2);
        for z in planes.iter().step_by(5) {
            for l in &lines {
                let common = l.points().iter().filter(|p| z.contains_point(**p)).count();
                let dim_common = match common {
                    0 => 0,
                    1 => 1,
                    3 => 2,
                    other => panic!("intersection with {other} points is not a subspace"),
                };
                assert_eq!(z.contains(l), 3 + 2 - 2 * dim_common == 1);
            }
        }
    }

    #[test]
    fn subspace_json_shape() {
        let x = Subspace::from_points(2, vec![18, 0, 1]);
        assert_eq!(
            serde_json::to_string(&x).unwrap(),
            r#"{"dim":2,"points":[0,1,18]}"#
        );
    }

    proptest::proptest! {
        #[test]
        fn shift_roundtrip(j in 0u64..10_000, a in 0u32..121, b in 0u32..121) {
            proptest::prop_assume!(a != b);
            let g = geo(3, 5);
            let l = g.span_pair(a, b).unwrap();
            let back = g.shift(&g.shift(&l, j), (g.s() as u64) * 100 - j);
            proptest::prop_assert_eq!(back, l);
        }
    }
}
