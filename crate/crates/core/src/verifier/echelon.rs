//! Row-echelon oracle for point sets of PG(n-1, q).
//!
//! Rebuilds the vectors of `alpha^0, ..., alpha^(s-1)` by repeated
//! multiplication by `x` modulo the defining polynomial, using only
//! [`GfQ`]. Ranks and spans are then plain Gaussian elimination.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::arith::GfQ;
use crate::field::{find_primitive_polynomial, FieldTable};
use crate::geometry::Point;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("polynomial {0:?} is not monic of degree >= 2 with nonzero constant term")]
    BadPolynomial(Vec<u32>),
    #[error("coefficient {0} is outside GF({1})")]
    Coefficient(u32, u32),
    #[error("alpha^{0} and alpha^{1} span the same point")]
    ShortPeriod(u32, u32),
    #[error("base field GF({p}^{m}) is not available: {detail}")]
    BaseField { p: u32, m: u32, detail: String },
}

#[derive(Clone, Debug)]
pub struct EchelonOracle {
    field: GfQ,
    n: usize,
    s: u32,
    vectors: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, Point>,
}

impl EchelonOracle {
    /// Oracle for GF(q^n) = GF(q)[x] / `poly`, q = p^m, with the standard base field.
    pub fn new(p: u32, m: u32, poly: &[u32]) -> Result<Self, OracleError> {
        let base = if m == 1 {
            Vec::new()
        } else {
            find_primitive_polynomial(p, m).map_err(|e| OracleError::BaseField {
                p,
                m,
                detail: e.to_string(),
            })?
        };
        Self::with_field(GfQ::new(p, &base), poly)
    }

    pub fn from_table(table: &FieldTable) -> Self {
        let field = GfQ::new(table.p(), table.base().modulus());
        Self::with_field(field, table.modulus()).expect("field tables carry a primitive polynomial")
    }

    pub fn with_field(field: GfQ, poly: &[u32]) -> Result<Self, OracleError> {
        let q = field.order();
        let n = poly.len().saturating_sub(1);
        if n < 2 || poly[n] != 1 || poly[0] == 0 {
            return Err(OracleError::BadPolynomial(poly.to_vec()));
        }
        if let Some(&c) = poly.iter().find(|&&c| c >= q) {
            return Err(OracleError::Coefficient(c, q));
        }
        let s = ((q as u64).pow(n as u32) - 1) / (q as u64 - 1);
        let s = u32::try_from(s).map_err(|_| OracleError::BadPolynomial(poly.to_vec()))?;

        let mut vectors = Vec::with_capacity(s as usize);
        let mut index = HashMap::with_capacity(s as usize);
        let mut cur = vec![0; n];
        cur[0] = 1;
        for e in 0..s {
            let key = normalize(&field, &cur);
            if let Some(&prev) = index.get(&key) {
                return Err(OracleError::ShortPeriod(prev, e));
            }
            index.insert(key, e);
            vectors.push(cur.clone());
            cur = times_x(&field, &cur, poly);
        }
        Ok(Self {
            field,
            n,
            s,
            vectors,
            index,
        })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    /// Coordinates of `alpha^point` over GF(q), ascending.
    pub fn vector(&self, point: Point) -> &[u32] {
        &self.vectors[point as usize]
    }

    /// The residue of the projective point spanned by `v`, `None` for zero.
    pub fn point_of(&self, v: &[u32]) -> Option<Point> {
        if v.iter().all(|&c| c == 0) {
            return None;
        }
        self.index.get(&normalize(&self.field, v)).copied()
    }

    /// Reduced row-echelon basis of the span of `points`.
    pub fn echelon(&self, points: &[Point]) -> Vec<Vec<u32>> {
        let f = &self.field;
        let mut rows: Vec<Vec<u32>> = points
            .iter()
            .map(|&x| self.vectors[x as usize].clone())
            .collect();
        let mut rank = 0;
        for col in 0..self.n {
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let scale = f.inv(rows[rank][col]);
            for c in rows[rank].iter_mut() {
                *c = f.mul(*c, scale);
            }
            for r in 0..rows.len() {
                if r == rank || rows[r][col] == 0 {
                    continue;
                }
                let factor = rows[r][col];
                for c in 0..self.n {
                    let t = f.mul(factor, rows[rank][c]);
                    rows[r][c] = f.sub(rows[r][c], t);
                }
            }
            rank += 1;
        }
        rows.truncate(rank);
        rows
    }

    pub fn rank(&self, points: &[Point]) -> usize {
        self.echelon(points).len()
    }

    /// Every point of the span of `points`, ascending.
    pub fn span(&self, points: &[Point]) -> Vec<Point> {
        let basis = self.echelon(points);
        let q = self.q();
        let r = basis.len() as u32;
        let mut out = BTreeSet::new();
        for code in 1..q.pow(r) {
            let mut v = vec![0; self.n];
            let mut rest = code;
            for row in &basis {
                let c = rest % q;
                rest /= q;
                if c == 0 {
                    continue;
                }
                for (x, &b) in v.iter_mut().zip(row) {
                    *x = self.field.add(*x, self.field.mul(c, b));
                }
            }
            out.insert(
                self.point_of(&v)
                    .expect("nonzero combination of independent rows"),
            );
        }
        out.into_iter().collect()
    }

    /// Whether every point of `small` lies in the span of `big`.
    pub fn contains(&self, big: &[Point], small: &[Point]) -> bool {
        let r = self.rank(big);
        let mut all = big.to_vec();
        all.extend_from_slice(small);
        self.rank(&all) == r
    }
}

/// Scales `v` so its first nonzero coordinate is one.
fn normalize(f: &GfQ, v: &[u32]) -> Vec<u32> {
    match v.iter().find(|&&c| c != 0) {
        Some(&lead) => {
            let inv = f.inv(lead);
            v.iter().map(|&c| f.mul(c, inv)).collect()
        }
        None => v.to_vec(),
    }
}

/// `x * v` modulo the monic `poly`.
fn times_x(f: &GfQ, v: &[u32], poly: &[u32]) -> Vec<u32> {
    let n = v.len();
    let top = v[n - 1];
    let mut out = vec![0; n];
    for i in (1..n).rev() {
        out[i] = v[i - 1];
    }
    if top != 0 {
        for (i, o) in out.iter_mut().enumerate() {
            *o = f.sub(*o, f.mul(top, poly[i]));
        }
    }
    out
}
