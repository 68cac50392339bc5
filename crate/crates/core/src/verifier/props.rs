//! Property suite for the shift-class structure of lines and planes in PG(4, q).
//!
//! Each check is phrased directly in terms of point sets so that a faulty
//! span table shows up as a concrete counterexample instead of a panic.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::echelon::EchelonOracle;
use super::report::CheckResult;
use crate::geometry::{gaussian_coefficient, Geometry, Point, Subspace};
use crate::orbits::{canonicalize, check_profile, stabilizer_order};

/// Seed used for sampled runs unless one is given explicitly.
pub const DEFAULT_SAMPLE_SEED: u64 = 0x5EED_0005;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum SuiteMode {
    /// Every line, every plane and every `(r, i)` pair.
    Exhaustive,
    /// `samples` random lines, planes and `(r, i)` pairs drawn from `seed`.
    Sampled { seed: u64, samples: usize },
}

impl SuiteMode {
    pub fn sampled() -> Self {
        SuiteMode::Sampled {
            seed: DEFAULT_SAMPLE_SEED,
            samples: 2000,
        }
    }

    /// Exhaustive for `q <= 3`, sampled above.
    pub fn default_for(q: u32) -> Self {
        if q <= 3 {
            SuiteMode::Exhaustive
        } else {
            Self::sampled()
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub q: u32,
    pub mode: SuiteMode,
    pub checks: Vec<CheckResult>,
}

impl PropertyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.check == name)
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let passed = self.checks.iter().filter(|c| c.passed()).count();
        write!(
            f,
            "{passed}/{} checks passed (q = {})",
            self.checks.len(),
            self.q
        )
    }
}

/// Names of the checks, in report order.
pub const CHECKS: [&str; 13] = [
    "class_size",
    "class_count",
    "progression_independent",
    "line_pairs",
    "line_differences",
    "shared_difference",
    "plane_progression",
    "progression_lines",
    "special_class_unique",
    "other_classes_single",
    "incidence_profile",
    "line_classes_differ",
    "plane_classes_differ",
];

type Outcome = Result<(), Value>;

/// Runs all thirteen checks on `geo`, which must be GF(q^5).
pub fn run_property_suite(geo: &Geometry, mode: SuiteMode) -> PropertyReport {
    let q = geo.q();
    if geo.n() != 5 {
        let checks = CHECKS
            .iter()
            .map(|&c| {
                CheckResult::fail(
                    c,
                    json!({ "detail": format!("needs n = 5, got {}", geo.n()) }),
                )
            })
            .collect();
        return PropertyReport { q, mode, checks };
    }
    let ctx = Context::new(geo, mode);
    let outcomes: [Outcome; 13] = [
        ctx.class_size(),
        ctx.class_count(),
        ctx.progression_independent(),
        ctx.line_pairs(),
        ctx.line_differences(),
        ctx.shared_difference(),
        ctx.plane_progression(),
        ctx.progression_lines(),
        ctx.special_class_unique(),
        ctx.other_classes_single(),
        ctx.incidence_profile(),
        ctx.line_classes_differ(),
        ctx.plane_classes_differ(),
    ];
    let checks = CHECKS
        .iter()
        .zip(outcomes)
        .map(|(&name, outcome)| CheckResult::from_outcome(name, outcome))
        .collect();
    PropertyReport { q, mode, checks }
}

/// A plane with its lines and their class ids.
struct PlaneLines {
    plane: Subspace,
    lines: Vec<Subspace>,
    classes: Vec<Option<usize>>,
}

impl PlaneLines {
    fn counts(&self) -> Result<BTreeMap<usize, usize>, Value> {
        let mut counts = BTreeMap::new();
        for (l, c) in self.lines.iter().zip(&self.classes) {
            let c = c.ok_or_else(|| json!({ "plane": self.plane, "unclassified_line": l }))?;
            *counts.entry(c).or_insert(0) += 1;
        }
        Ok(counts)
    }

    /// The class contributing `q + 1` lines, if exactly one does.
    fn special(&self, q: usize) -> Option<usize> {
        let counts = self.counts().ok()?;
        let mut big = counts.iter().filter(|(_, &n)| n == q + 1);
        match (big.next(), big.next()) {
            (Some((&c, _)), None) => Some(c),
            _ => None,
        }
    }
}

struct Context<'a> {
    geo: &'a Geometry,
    oracle: EchelonOracle,
    q: u32,
    s: u32,
    exhaustive: bool,
    line_reps: Vec<Subspace>,
    plane_reps: Vec<Subspace>,
    line_ids: HashMap<Subspace, usize>,
    lines: Vec<Subspace>,
    planes: Vec<PlaneLines>,
    /// `(r, i)` pairs for the arithmetic-progression checks.
    progressions: Vec<(Point, u32)>,
}

impl<'a> Context<'a> {
    fn new(geo: &'a Geometry, mode: SuiteMode) -> Self {
        let s = geo.s();
        let reps = |r: u32| -> Vec<Subspace> {
            let set: BTreeSet<Subspace> = geo
                .enumerate_with_min(r, 0)
                .iter()
                .map(|x| canonicalize(geo, x).0)
                .collect();
            set.into_iter().collect()
        };
        let line_reps = reps(2);
        let plane_reps = reps(3);
        let line_ids = line_reps
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, r)| (r, i))
            .collect();

        let (lines, planes, progressions) = match mode {
            SuiteMode::Exhaustive => {
                let progressions = (0..s).flat_map(|r| (1..s).map(move |i| (r, i))).collect();
                (
                    geo.enumerate_grassmannian(2),
                    geo.enumerate_grassmannian(3),
                    progressions,
                )
            }
            SuiteMode::Sampled { seed, samples } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut lines = BTreeSet::new();
                let mut planes = BTreeSet::new();
                let mut progressions = Vec::with_capacity(samples);
                for _ in 0..samples {
                    let a = rng.gen_range(0..s);
                    let b = (a + rng.gen_range(1..s)) % s;
                    let c = rng.gen_range(0..s);
                    if let Ok(l) = geo.span_pair(a, b) {
                        if let Some(z) = geo.span_with(&l, c) {
                            planes.insert(z);
                        }
                        lines.insert(l);
                    }
                    progressions.push((rng.gen_range(0..s), rng.gen_range(1..s)));
                }
                (
                    lines.into_iter().collect(),
                    planes.into_iter().collect(),
                    progressions,
                )
            }
        };

        let mut ctx = Self {
            geo,
            oracle: EchelonOracle::from_table(geo.table()),
            q: geo.q(),
            s,
            exhaustive: mode == SuiteMode::Exhaustive,
            line_reps,
            plane_reps,
            line_ids,
            lines,
            planes: Vec::new(),
            progressions,
        };
        ctx.planes = planes.into_par_iter().map(|z| ctx.plane_lines(z)).collect();
        ctx
    }

    fn line_class(&self, l: &Subspace) -> Option<usize> {
        self.line_ids.get(&canonicalize(self.geo, l).0).copied()
    }

    fn plane_lines(&self, plane: Subspace) -> PlaneLines {
        let lines = self.geo.lines_in(&plane);
        let classes = lines.iter().map(|l| self.line_class(l)).collect();
        PlaneLines {
            plane,
            lines,
            classes,
        }
    }

    fn expected_classes(&self) -> usize {
        (self.q * self.q + 1) as usize
    }

    /// `alpha^r, alpha^(r+i), alpha^(r+2i)` as residues.
    fn progression(&self, r: Point, i: u32) -> [Point; 3] {
        let s = self.s as u64;
        let (r, i) = (r as u64, i as u64);
        [r % s, (r + i) % s, (r + 2 * i) % s].map(|x| x as Point)
    }

    fn find_plane_failure(&self, test: impl Fn(&PlaneLines) -> Outcome + Sync + Send) -> Outcome {
        match self.planes.par_iter().map(test).find_first(Result::is_err) {
            Some(err) => err,
            None => Ok(()),
        }
    }

    /// Every class has `s` members.
    fn class_size(&self) -> Outcome {
        for (r, reps) in [(2, &self.line_reps), (3, &self.plane_reps)] {
            for rep in reps.iter() {
                let stab = stabilizer_order(self.geo, rep);
                if stab != 1 {
                    return Err(json!({ "r": r, "rep": rep, "orbit_size": self.s / stab }));
                }
            }
        }
        if self.exhaustive {
            for (r, members) in [
                (2, &self.lines),
                (3, &self.planes.iter().map(|p| p.plane.clone()).collect()),
            ] {
                let mut sizes: HashMap<Subspace, u32> = HashMap::new();
                for x in members.iter() {
                    *sizes.entry(canonicalize(self.geo, x).0).or_insert(0) += 1;
                }
                if let Some((rep, &n)) = sizes.iter().find(|(_, &n)| n != self.s) {
                    return Err(json!({ "r": r, "rep": rep, "orbit_size": n }));
                }
            }
        }
        Ok(())
    }

    /// `q^2 + 1` classes per dimension, `s (q^2 + 1)` subspaces.
    fn class_count(&self) -> Outcome {
        let expected = self.expected_classes();
        for (r, n) in [(2, self.line_reps.len()), (3, self.plane_reps.len())] {
            if n != expected {
                return Err(json!({ "r": r, "classes": n, "expected": expected }));
            }
        }
        if self.exhaustive {
            let total = self.s as usize * expected;
            let gauss = gaussian_coefficient::<u64>(self.q as u64, 5, 2)
                .map_err(|e| json!(e.to_string()))?;
            for (r, n) in [(2, self.lines.len()), (3, self.planes.len())] {
                if n != total || n as u64 != gauss {
                    return Err(json!({ "r": r, "subspaces": n, "expected": total }));
                }
            }
        }
        Ok(())
    }

    /// `1, alpha^i, alpha^(2i)` are independent for every `i`.
    fn progression_independent(&self) -> Outcome {
        for i in 1..self.s {
            let pts = self.progression(0, i);
            if self.oracle.rank(&pts) != 3 {
                return Err(json!({ "i": i }));
            }
            if !matches!(self.geo.span_triple(pts[0], pts[1], pts[2]), Ok(Some(_))) {
                return Err(json!({ "i": i, "detail": "span arithmetic reports dependence" }));
            }
        }
        Ok(())
    }

    /// A line is spanned by exactly `q^2 + q` ordered pairs of its points.
    fn line_pairs(&self) -> Outcome {
        let want = (self.q * self.q + self.q) as usize;
        let bad = self.lines.par_iter().find_first(|l| {
            let pts = l.points();
            let spanning = pts
                .iter()
                .flat_map(|&x| pts.iter().map(move |&y| (x, y)))
                .filter(|&(x, y)| x != y && self.geo.span_pair(x, y).ok().as_ref() == Some(*l))
                .count();
            spanning != want
        });
        match bad {
            Some(l) => Err(json!({ "line": l })),
            None => Ok(()),
        }
    }

    /// Differences inside a line are distinct, and the class representatives
    /// split `1..s` into disjoint difference sets.
    fn line_differences(&self) -> Outcome {
        let repeated = |l: &Subspace| {
            let d = self.geo.differences(l);
            d.iter().collect::<BTreeSet<_>>().len() != d.len()
        };
        if let Some(l) = self.lines.par_iter().find_first(|l| repeated(l)) {
            return Err(json!({ "line": l }));
        }
        let mut owner = vec![None; self.s as usize];
        for (id, rep) in self.line_reps.iter().enumerate() {
            for d in self.geo.differences(rep) {
                if let Some(prev) = owner[d as usize].replace(id) {
                    return Err(json!({ "difference": d, "classes": [prev, id] }));
                }
            }
        }
        match (1..self.s).find(|&d| owner[d as usize].is_none()) {
            Some(d) => Err(json!({ "uncovered_difference": d })),
            None => Ok(()),
        }
    }

    /// Two lines of a plane with a common difference `i` force an `i`-progression in it.
    fn shared_difference(&self) -> Outcome {
        self.find_plane_failure(|pl| {
            let mut by_diff: BTreeMap<u32, usize> = BTreeMap::new();
            for l in &pl.lines {
                for d in self.geo.differences(l) {
                    *by_diff.entry(d).or_insert(0) += 1;
                }
            }
            for (&i, _) in by_diff.iter().filter(|(_, &n)| n >= 2) {
                if !self.has_progression(&pl.plane, i) {
                    return Err(json!({ "plane": pl.plane, "i": i }));
                }
            }
            Ok(())
        })
    }

    fn has_progression(&self, z: &Subspace, i: u32) -> bool {
        z.points().iter().any(|&r| {
            let pts = self.progression(r, i);
            pts.iter().all(|&x| z.contains_point(x)) && self.oracle.rank(&pts) == 3
        })
    }

    /// Every plane is `<alpha^r, alpha^(r+i), alpha^(r+2i)>`.
    fn plane_progression(&self) -> Outcome {
        let s = self.s;
        self.find_plane_failure(|pl| {
            let z = &pl.plane;
            let found = z.points().iter().find_map(|&r| {
                z.points().iter().filter(|&&t| t != r).find_map(|&t| {
                    let i = if t > r { t - r } else { t + s - r };
                    let pts = self.progression(r, i);
                    (z.contains_point(pts[2]) && self.oracle.rank(&pts) == 3).then_some(pts)
                })
            });
            match found {
                Some(pts)
                    if self
                        .geo
                        .span_triple(pts[0], pts[1], pts[2])
                        .ok()
                        .flatten()
                        .as_ref()
                        == Some(z) =>
                {
                    Ok(())
                }
                Some(pts) => {
                    Err(json!({ "plane": z, "progression": pts, "detail": "span differs" }))
                }
                None => Err(json!({ "plane": z })),
            }
        })
    }

    /// `<alpha^r, alpha^(r+i), alpha^(r+2i)>` holds at least `q + 1` lines of `[<1, alpha^i>]`.
    fn progression_lines(&self) -> Outcome {
        let need = self.q as usize + 1;
        let bad = self.progressions.par_iter().map(|&(r, i)| {
            let pts = self.progression(r, i);
            let z = match self.geo.span_triple(pts[0], pts[1], pts[2]) {
                Ok(Some(z)) => z,
                _ => return Err(json!({ "r": r, "i": i, "detail": "not a plane" })),
            };
            let target = self
                .geo
                .span_pair(0, i)
                .ok()
                .and_then(|l| self.line_class(&l));
            let hits = self
                .geo
                .lines_in(&z)
                .iter()
                .filter(|l| target.is_some() && self.line_class(l) == target)
                .count();
            if hits < need {
                return Err(json!({ "r": r, "i": i, "plane": z, "lines_in_class": hits }));
            }
            Ok(())
        });
        bad.find_first(Result::is_err).unwrap_or(Ok(()))
    }

    /// Exactly one class gives `q + 1` lines, none gives more, and it is
    /// the same class across a plane's shift class.
    fn special_class_unique(&self) -> Outcome {
        let q = self.q as usize;
        let rep_special: HashMap<Subspace, Option<usize>> = self
            .plane_reps
            .iter()
            .map(|z| (z.clone(), self.plane_lines(z.clone()).special(q)))
            .collect();
        self.find_plane_failure(|pl| {
            let counts = pl.counts()?;
            let big: Vec<_> = counts.iter().filter(|(_, &n)| n > q).collect();
            if big.len() != 1 || *big[0].1 != q + 1 {
                return Err(json!({ "plane": pl.plane, "counts": counts }));
            }
            let special = Some(*big[0].0);
            let rep = canonicalize(self.geo, &pl.plane).0;
            if rep_special.get(&rep).copied().flatten() != special {
                return Err(json!({ "plane": pl.plane, "rep": rep, "detail": "special class differs from representative" }));
            }
            Ok(())
        })
    }

    /// Apart from its special class a plane has at most one line per class.
    fn other_classes_single(&self) -> Outcome {
        let q = self.q as usize;
        self.find_plane_failure(|pl| {
            let counts = pl.counts()?;
            let special = pl.special(q);
            match counts.iter().find(|(&c, &n)| Some(c) != special && n > 1) {
                Some((&c, &n)) => Err(json!({ "plane": pl.plane, "class": c, "lines": n })),
                None => Ok(()),
            }
        })
    }

    /// Profile `(q + 1, 1, ..., 1)` over all `q^2 + 1` classes.
    fn incidence_profile(&self) -> Outcome {
        let q = self.q as usize;
        let total = q * q + q + 1;
        self.find_plane_failure(|pl| {
            let fail = |detail: String| Err(json!({ "plane": pl.plane, "detail": detail }));
            if let Some(l) = pl.lines.iter().find(|l| !pl.plane.contains(l)) {
                return fail(format!("line {l} is not inside the plane"));
            }
            if pl.lines.len() != total {
                return fail(format!("{} lines, expected {total}", pl.lines.len()));
            }
            let counts = pl.counts()?;
            check_profile(q, self.expected_classes(), &counts).or_else(fail)
        })
    }

    fn line_classes_differ(&self) -> Outcome {
        let class = |b| {
            self.geo
                .span_pair(0, b)
                .ok()
                .and_then(|l| self.line_class(&l))
        };
        match (class(1), class(2)) {
            (Some(a), Some(b)) if a != b => Ok(()),
            (a, b) => Err(json!({ "class_01": a, "class_02": b })),
        }
    }

    fn plane_classes_differ(&self) -> Outcome {
        let rep = |c| {
            self.geo
                .span_triple(0, 1, c)
                .ok()
                .flatten()
                .map(|z| canonicalize(self.geo, &z).0)
        };
        match (rep(2), rep(3)) {
            (Some(a), Some(b)) if a != b => Ok(()),
            (a, b) => Err(json!({ "rep_012": a, "rep_013": b })),
        }
    }
}

/// Result of comparing span arithmetic against the echelon oracle.
#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub q: u32,
    pub pairs: usize,
    pub triples: usize,
    pub enumerated: usize,
    pub mismatches: usize,
    /// Up to ten mismatching inputs.
    pub examples: Vec<Value>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }

    pub fn as_check(&self) -> CheckResult {
        if self.passed() {
            CheckResult::pass("echelon_oracle")
        } else {
            CheckResult::fail(
                "echelon_oracle",
                json!({ "mismatches": self.mismatches, "examples": self.examples }),
            )
        }
    }
}

/// Checks every `span_pair`, `span_triple` and enumerated subspace against
/// the echelon oracle: rank equals dimension and point sets agree.
///
/// Exhaustive mode covers all pairs `a < b`, all triples `a < b < c` and the
/// full Grassmannians of lines and planes; sampled mode draws `samples` of each.
pub fn oracle_sweep(geo: &Geometry, mode: SuiteMode) -> OracleReport {
    let oracle = EchelonOracle::from_table(geo.table());
    let s = geo.s();
    let check_sub = |x: &Subspace, gens: &[Point]| -> Option<Value> {
        let dim = x.dim() as usize;
        if oracle.rank(x.points()) != dim
            || oracle.rank(gens) != dim
            || oracle.span(gens) != x.points()
        {
            Some(json!({ "generators": gens, "subspace": x }))
        } else {
            None
        }
    };
    let pair = |a: Point, b: Point| match geo.span_pair(a, b) {
        Ok(l) => check_sub(&l, &[a, b]),
        Err(e) => Some(json!({ "generators": [a, b], "detail": e.to_string() })),
    };
    let triple = |a: Point, b: Point, c: Point| match geo.span_triple(a, b, c) {
        Ok(Some(z)) => check_sub(&z, &[a, b, c]),
        Ok(None) => (oracle.rank(&[a, b, c]) != 2)
            .then(|| json!({ "generators": [a, b, c], "detail": "reported dependent" })),
        Err(e) => Some(json!({ "generators": [a, b, c], "detail": e.to_string() })),
    };

    let (pairs, triples, enumerated): (Vec<(Point, Point)>, Vec<[Point; 3]>, Vec<Subspace>) =
        match mode {
            SuiteMode::Exhaustive => {
                let pairs = (0..s)
                    .flat_map(|a| (a + 1..s).map(move |b| (a, b)))
                    .collect();
                let triples = (0..s)
                    .flat_map(|a| (a + 1..s).flat_map(move |b| (b + 1..s).map(move |c| [a, b, c])))
                    .collect();
                let mut all = geo.enumerate_grassmannian(2);
                all.extend(geo.enumerate_grassmannian(3));
                (pairs, triples, all)
            }
            SuiteMode::Sampled { seed, samples } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut pairs = Vec::with_capacity(samples);
                let mut triples = Vec::with_capacity(samples);
                for _ in 0..samples {
                    let a = rng.gen_range(0..s);
                    let b = (a + rng.gen_range(1..s)) % s;
                    pairs.push((a, b));
                    let c = loop {
                        let c = rng.gen_range(0..s);
                        if c != a && c != b {
                            break c;
                        }
                    };
                    triples.push([a, b, c]);
                }
                let mut all = geo.enumerate_with_min(2, 0);
                all.extend(geo.enumerate_with_min(3, 0));
                (pairs, triples, all)
            }
        };

    let mut bad: Vec<Value> = pairs.par_iter().filter_map(|&(a, b)| pair(a, b)).collect();
    bad.extend(
        triples
            .par_iter()
            .filter_map(|&[a, b, c]| triple(a, b, c))
            .collect::<Vec<_>>(),
    );
    bad.extend(
        enumerated
            .par_iter()
            .filter_map(|x| check_sub(x, x.points()))
            .collect::<Vec<_>>(),
    );
    OracleReport {
        q: geo.q(),
        pairs: pairs.len(),
        triples: triples.len(),
        enumerated: enumerated.len(),
        mismatches: bad.len(),
        examples: bad.into_iter().take(10).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldTable;

    fn geo(q: u64) -> Geometry {
        Geometry::new(FieldTable::for_order(q, 5).unwrap())
    }

    #[test]
    fn all_pass_q2_exhaustive() {
        let report = run_property_suite(&geo(2), SuiteMode::Exhaustive);
        assert!(report.all_passed(), "{report}");
        assert_eq!(report.checks.len(), 13);
    }

    #[test]
    fn all_pass_q4_sampled() {
        let report = run_property_suite(&geo(4), SuiteMode::sampled());
        assert!(report.all_passed(), "{report}");
    }

    #[test]
    fn fault_breaks_incidence_check() {
        let mut g = geo(2);
        g.inject_span_fault(1, 2);
        let report = run_property_suite(&g, SuiteMode::Exhaustive);
        let c = report.check("incidence_profile").unwrap();
        assert!(!c.passed());
        assert!(c.witness.as_ref().unwrap().get("plane").is_some(), "{c}");
    }

    #[test]
    fn oracle_sweep_q2() {
        let r = oracle_sweep(&geo(2), SuiteMode::Exhaustive);
        assert_eq!(r.pairs, 31 * 30 / 2);
        assert_eq!(r.triples, 31 * 30 * 29 / 6);
        assert_eq!(r.enumerated, 310);
        assert!(r.passed(), "{:?}", r.examples);
    }

    #[test]
    fn oracle_sweep_sees_fault() {
        let mut g = geo(2);
        g.inject_span_fault(1, 2);
        assert!(!oracle_sweep(&g, SuiteMode::Exhaustive).passed());
    }

    #[test]
    fn rejects_wrong_dimension() {
        let g = Geometry::new(FieldTable::for_order(2, 3).unwrap());
        assert!(!run_property_suite(&g, SuiteMode::Exhaustive).all_passed());
    }
}
