//! Shift classes (the relations E_2 and E_3 on F_q^5) and their incidences.
//!
//! A class is an orbit under `X -> alpha X`. Its canonical representative is
//! the member whose sorted point list is lexicographically smallest; such a
//! member always contains point 0, so only the `|X|` shifts that move a point
//! of `X` onto 0 need to be compared.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{Geometry, Point, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrbitError {
    #[error("orbit of {subspace} has length {len}, expected {expected}")]
    ShortOrbit {
        subspace: Subspace,
        len: u32,
        expected: u32,
    },
    #[error("found {found} shift classes of dimension {r}, expected {expected}")]
    ClassCount {
        r: u32,
        found: usize,
        expected: usize,
    },
    #[error("{0} is not a member of any known class")]
    Unclassified(Subspace),
    #[error("incidence violation: {0}")]
    Incidence(String),
    #[error("shift classes need ambient dimension 5, got {0}")]
    UnsupportedDimension(u32),
}

/// One orbit of r-dimensional subspaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftClass {
    pub r: u32,
    pub id: usize,
    pub rep: Subspace,
    pub size: u32,
}

/// Canonical representative of the orbit of `x` and the shift `j` with `x = alpha^j rep`.
pub fn canonicalize(geo: &Geometry, x: &Subspace) -> (Subspace, u32) {
    let s = geo.s();
    let mut best: Option<(Subspace, u32)> = None;
    for &p in x.points() {
        let cand = x.shifted((s - p) as u64, s);
        if best
            .as_ref()
            .is_none_or(|(b, _)| cand.points() < b.points())
        {
            best = Some((cand, p));
        }
    }
    best.expect("subspace has at least one point")
}

/// Number of shifts `j mod s` fixing `x`.
pub fn stabilizer_order(geo: &Geometry, x: &Subspace) -> u32 {
    let s = geo.s();
    let p0 = x.points()[0];
    x.points()
        .iter()
        .filter(|&&p| {
            let j = if p >= p0 { p - p0 } else { p + s - p0 };
            x.shifted(j as u64, s) == *x
        })
        .count() as u32
}

/// The `s` shifts of `x` in shift order.
pub fn orbit(geo: &Geometry, x: &Subspace) -> Result<Vec<Subspace>, OrbitError> {
    let s = geo.s();
    let members: Vec<Subspace> = (0..s as u64).map(|j| geo.shift(x, j)).collect();
    let distinct: BTreeSet<&Subspace> = members.iter().collect();
    if distinct.len() != s as usize {
        return Err(OrbitError::ShortOrbit {
            subspace: x.clone(),
            len: distinct.len() as u32,
            expected: s,
        });
    }
    Ok(members)
}

/// All shift classes of r-dimensional subspaces, sorted by representative.
pub fn enumerate_classes(geo: &Geometry, r: u32) -> Result<Vec<ShiftClass>, OrbitError> {
    if geo.n() != 5 {
        return Err(OrbitError::UnsupportedDimension(geo.n()));
    }
    let reps: BTreeSet<Subspace> = geo
        .enumerate_with_min(r, 0)
        .iter()
        .map(|x| canonicalize(geo, x).0)
        .collect();
    let q = geo.q() as usize;
    let expected = q * q + 1;
    if reps.len() != expected {
        return Err(OrbitError::ClassCount {
            r,
            found: reps.len(),
            expected,
        });
    }
    let s = geo.s();
    reps.into_iter()
        .enumerate()
        .map(|(id, rep)| {
            let size = s / stabilizer_order(geo, &rep);
            if size != s {
                return Err(OrbitError::ShortOrbit {
                    subspace: rep,
                    len: size,
                    expected: s,
                });
            }
            Ok(ShiftClass { r, id, rep, size })
        })
        .collect()
}

/// E_2 and E_3 classes of F_q^5 together with the special-partner map.
///
/// Building the table checks class sizes and counts, and that every plane
/// class has exactly one special line class, bijectively.
#[derive(Clone, Debug)]
pub struct ClassTable {
    lines: Vec<ShiftClass>,
    planes: Vec<ShiftClass>,
    line_index: HashMap<Vec<Point>, usize>,
    plane_index: HashMap<Vec<Point>, usize>,
    special: Vec<usize>,
}

impl ClassTable {
    pub fn build(geo: &Geometry) -> Result<Self, OrbitError> {
        let lines = enumerate_classes(geo, 2)?;
        let planes = enumerate_classes(geo, 3)?;
        let index =
            |cs: &[ShiftClass]| cs.iter().map(|c| (c.rep.points().to_vec(), c.id)).collect();
        let mut table = Self {
            line_index: index(&lines),
            plane_index: index(&planes),
            lines,
            planes,
            special: Vec::new(),
        };
        let special = (0..table.planes.len())
            .map(|id| {
                let rep = table.planes[id].rep.clone();
                table.special_class_of(geo, &rep)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let distinct: BTreeSet<_> = special.iter().collect();
        if distinct.len() != special.len() {
            return Err(OrbitError::Incidence(format!(
                "special partner map is not injective: {special:?}"
            )));
        }
        table.special = special;
        Ok(table)
    }

    pub fn line_classes(&self) -> &[ShiftClass] {
        &self.lines
    }

    pub fn plane_classes(&self) -> &[ShiftClass] {
        &self.planes
    }

    pub fn classes(&self, r: u32) -> &[ShiftClass] {
        match r {
            2 => &self.lines,
            3 => &self.planes,
            _ => &[],
        }
    }

    /// Number of classes per dimension, `q^2 + 1`.
    pub fn class_count(&self) -> usize {
        self.lines.len()
    }

    /// Class id and shift `j` with `x = alpha^j rep`.
    pub fn classify(&self, geo: &Geometry, x: &Subspace) -> Result<(usize, u32), OrbitError> {
        let (rep, j) = canonicalize(geo, x);
        let index = match x.dim() {
            2 => &self.line_index,
            3 => &self.plane_index,
            _ => return Err(OrbitError::Unclassified(x.clone())),
        };
        index
            .get(rep.points())
            .map(|&id| (id, j))
            .ok_or_else(|| OrbitError::Unclassified(x.clone()))
    }

    pub fn class_of(&self, geo: &Geometry, x: &Subspace) -> Result<usize, OrbitError> {
        self.classify(geo, x).map(|(id, _)| id)
    }

    /// The line class contributing `q + 1` lines to each plane of `plane_class`.
    pub fn special_partner(&self, plane_class: usize) -> usize {
        self.special[plane_class]
    }

    /// Inverse of [`special_partner`](Self::special_partner).
    pub fn special_plane_class(&self, line_class: usize) -> usize {
        self.special
            .iter()
            .position(|&l| l == line_class)
            .expect("special map is a bijection")
    }

    /// How many lines of `z` fall in each line class (classes with zero omitted).
    pub fn incidence_counts(
        &self,
        geo: &Geometry,
        z: &Subspace,
    ) -> Result<BTreeMap<usize, usize>, OrbitError> {
        let mut counts = BTreeMap::new();
        for l in geo.lines_in(z) {
            if !z.contains(&l) {
                return Err(OrbitError::Incidence(format!("line {l} escapes plane {z}")));
            }
            *counts.entry(self.class_of(geo, &l)?).or_insert(0) += 1;
        }
        Ok(counts)
    }

    /// Incidence profile of a plane: one class with `q + 1` lines, every other class with one.
    pub fn incidence_profile(
        &self,
        geo: &Geometry,
        z: &Subspace,
    ) -> Result<BTreeMap<usize, usize>, OrbitError> {
        let counts = self.incidence_counts(geo, z)?;
        check_profile(geo.q() as usize, self.class_count(), &counts)
            .map_err(|msg| OrbitError::Incidence(format!("plane {z}: {msg}")))?;
        Ok(counts)
    }

    fn special_class_of(&self, geo: &Geometry, z: &Subspace) -> Result<usize, OrbitError> {
        let counts = self.incidence_profile(geo, z)?;
        let q = geo.q() as usize;
        Ok(*counts
            .iter()
            .find(|(_, &c)| c == q + 1)
            .map(|(id, _)| id)
            .expect("profile checked"))
    }

    /// Members of a plane class containing the line `v`, in increasing shift order.
    pub fn planes_in_class_containing(
        &self,
        geo: &Geometry,
        plane_class: usize,
        v: &Subspace,
    ) -> Vec<(Subspace, u32)> {
        let s = geo.s();
        let rep = &self.planes[plane_class].rep;
        let v0 = v.points()[0];
        let mut out: Vec<(Subspace, u32)> = rep
            .points()
            .iter()
            .filter_map(|&p| {
                let j = if v0 >= p { v0 - p } else { v0 + s - p };
                let cand = rep.shifted(j as u64, s);
                cand.contains(v).then_some((cand, j))
            })
            .collect();
        out.sort_by_key(|&(_, j)| j);
        out
    }

    /// Members of a line class lying inside the plane `u`, in increasing shift order.
    pub fn lines_in_class_inside(
        &self,
        geo: &Geometry,
        line_class: usize,
        u: &Subspace,
    ) -> Vec<(Subspace, u32)> {
        let s = geo.s();
        let rep = &self.lines[line_class].rep;
        let b0 = rep.points()[0];
        let mut out: Vec<(Subspace, u32)> = u
            .points()
            .iter()
            .filter_map(|&x| {
                let j = if x >= b0 { x - b0 } else { x + s - b0 };
                let cand = rep.shifted(j as u64, s);
                u.contains(&cand).then_some((cand, j))
            })
            .collect();
        out.sort_by_key(|&(_, j)| j);
        out.dedup_by_key(|(_, j)| *j);
        out
    }

    /// Per-class counts of the planes through a line.
    pub fn dual_incidence_counts(
        &self,
        geo: &Geometry,
        v: &Subspace,
    ) -> Result<BTreeMap<usize, usize>, OrbitError> {
        let mut counts = BTreeMap::new();
        for z in planes_through(geo, v) {
            *counts.entry(self.class_of(geo, &z)?).or_insert(0) += 1;
        }
        Ok(counts)
    }
}

/// Checks the `(q + 1, 1, ..., 1)` shape over `classes` classes.
pub fn check_profile(
    q: usize,
    classes: usize,
    counts: &BTreeMap<usize, usize>,
) -> Result<(), String> {
    let big: Vec<_> = counts.iter().filter(|(_, &c)| c == q + 1).collect();
    let ones = counts.values().filter(|&&c| c == 1).count();
    let total: usize = counts.values().sum();
    if big.len() != 1 || ones != classes - 1 || counts.len() != classes || total != q * q + q + 1 {
        return Err(format!(
            "profile {counts:?} is not (q+1, 1 x q^2) with q = {q}"
        ));
    }
    Ok(())
}

/// All planes containing the line `v`.
pub fn planes_through(geo: &Geometry, v: &Subspace) -> Vec<Subspace> {
    let mut covered: BTreeSet<Point> = v.points().iter().copied().collect();
    let mut out = Vec::new();
    for c in 0..geo.s() {
        if covered.contains(&c) {
            continue;
        }
        let z = geo.span_with(v, c).expect("c lies outside v");
        covered.extend(z.points().iter().copied());
        out.push(z);
    }
    out.sort();
    out
}
