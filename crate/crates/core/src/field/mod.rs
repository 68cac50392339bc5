//! Finite-field tower GF(p) -> GF(q) -> GF(q^n) in discrete-log form.
//!
//! Everything downstream works with exponents of a fixed primitive element
//! `alpha` of GF(q^n). Coefficient vectors over GF(q) only appear at the
//! table boundary: a vector `(c_0, ..., c_{n-1})` is encoded as the integer
//! `sum c_i q^i`, with each `c_i` in the [`SmallField`] encoding of GF(q).

mod poly;
mod small;

pub use poly::{
    find_primitive_polynomial, find_primitive_polynomial_over, is_primitive, order_of_x,
};
pub use small::{is_prime, prime_factors, prime_power, SmallField};

use thiserror::Error;

/// Largest `q^n` accepted by [`FieldTable::build`] unless a bound is given.
pub const DEFAULT_MAX_ELEMENTS: u64 = 1 << 20;

const NONE: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("polynomial {poly:?} is not primitive: x has order {order} (0 means x^(q^n-1) != 1)")]
    NotPrimitive { poly: Vec<u32>, order: u64 },
    #[error("malformed polynomial: {0}")]
    BadPolynomial(String),
    #[error("field with {elements} elements exceeds the table bound of {limit}")]
    TooLarge { elements: u64, limit: u64 },
}

/// Exp/log/Zech tables for GF(q^n) generated by a primitive element.
#[derive(Clone, Debug)]
pub struct FieldTable {
    base: SmallField,
    n: u32,
    modulus: Vec<u32>,
    /// `exp[i]` is the encoded vector of `alpha^i`.
    exp: Vec<u32>,
    /// Inverse of `exp`; `NONE` for the zero vector.
    log: Vec<u32>,
    /// `zech[k] = log(1 + alpha^k)`, `NONE` when the sum is zero.
    zech: Vec<u32>,
    order: u32,
    s: u32,
}

impl FieldTable {
    /// Builds GF(q^n), q = p^m, with the default size bound.
    pub fn build(
        p: u32,
        m: u32,
        n: u32,
        override_poly: Option<&[u32]>,
    ) -> Result<Self, FieldError> {
        Self::build_bounded(p, m, n, override_poly, DEFAULT_MAX_ELEMENTS)
    }

    /// Builds the field for a prime power `q`.
    pub fn for_order(q: u64, n: u32) -> Result<Self, FieldError> {
        let (p, m) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::build(p, m, n, None)
    }

    pub fn build_bounded(
        p: u32,
        m: u32,
        n: u32,
        override_poly: Option<&[u32]>,
        max_elements: u64,
    ) -> Result<Self, FieldError> {
        if m == 0 || n == 0 {
            return Err(FieldError::BadPolynomial(
                "extension degrees must be positive".into(),
            ));
        }
        let prime = SmallField::prime(p)?;
        let elements = (p as u64)
            .checked_pow(m * n)
            .filter(|&e| e <= max_elements && e < u32::MAX as u64)
            .ok_or(FieldError::TooLarge {
                elements: (p as f64).powi((m * n) as i32) as u64,
                limit: max_elements,
            })?;
        let base = if m == 1 {
            prime
        } else {
            let base_poly = find_primitive_polynomial_over(&prime, m);
            SmallField::extension(&prime, &base_poly)?
        };
        let q = base.order();

        let modulus = match override_poly {
            Some(poly) => {
                if poly.len() != n as usize + 1 || poly[n as usize] != 1 {
                    return Err(FieldError::BadPolynomial(format!(
                        "expected a monic polynomial of degree {n}, got {poly:?}"
                    )));
                }
                if let Some(&c) = poly.iter().find(|&&c| c >= q) {
                    return Err(FieldError::BadPolynomial(format!(
                        "coefficient {c} is not in GF({q})"
                    )));
                }
                if !is_primitive(&base, poly) {
                    let order = order_of_x(&base, poly).unwrap_or(0);
                    return Err(FieldError::NotPrimitive {
                        poly: poly.to_vec(),
                        order,
                    });
                }
                poly.to_vec()
            }
            None => find_primitive_polynomial_over(&base, n),
        };

        let order = (elements - 1) as u32;
        let s = order / (q - 1);
        let encode = |c: &[u32]| -> u32 { c.iter().rev().fold(0, |acc, &d| acc * q + d) };

        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![NONE; elements as usize];
        let mut cur = poly::one(n as usize);
        for i in 0..order {
            let code = encode(&cur);
            if log[code as usize] != NONE {
                return Err(FieldError::NotPrimitive {
                    poly: modulus,
                    order: i as u64,
                });
            }
            log[code as usize] = i;
            exp.push(code);
            cur = poly::mul_by_x(&base, &cur, &modulus);
        }
        debug_assert_eq!(encode(&cur), 1);

        // 1 + alpha^k only touches the constant coefficient
        let zech = exp
            .iter()
            .map(|&v| {
                let c0 = v % q;
                let sum = v - c0 + base.add(c0, 1);
                log[sum as usize]
            })
            .collect();

        Ok(Self {
            base,
            n,
            modulus,
            exp,
            log,
            zech,
            order,
            s,
        })
    }

    pub fn p(&self) -> u32 {
        self.base.p()
    }

    pub fn m(&self) -> u32 {
        self.base.m()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.base.order()
    }

    /// Number of projective points, `(q^n - 1) / (q - 1)`.
    pub fn s(&self) -> u32 {
        self.s
    }

    /// Multiplicative group order `q^n - 1`.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn base(&self) -> &SmallField {
        &self.base
    }

    /// The defining polynomial of GF(q^n) over GF(q), ascending.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Encoded vector of `alpha^e`; `e` is reduced modulo the group order.
    #[inline]
    pub fn exp(&self, e: u32) -> u32 {
        self.exp[(e % self.order) as usize]
    }

    /// Coefficients of `alpha^e` over GF(q), ascending.
    pub fn exp_vector(&self, e: u32) -> Vec<u32> {
        self.decode(self.exp(e))
    }

    pub fn decode(&self, mut code: u32) -> Vec<u32> {
        let q = self.q();
        (0..self.n)
            .map(|_| {
                let c = code % q;
                code /= q;
                c
            })
            .collect()
    }

    pub fn encode(&self, coeffs: &[u32]) -> u32 {
        let q = self.q();
        coeffs.iter().rev().fold(0, |acc, &d| acc * q + d)
    }

    /// Discrete log of an encoded vector; `None` for zero.
    #[inline]
    pub fn log(&self, code: u32) -> Option<u32> {
        match self.log[code as usize] {
            NONE => None,
            e => Some(e),
        }
    }

    /// `log(alpha^a + alpha^b)`, or `None` when the sum vanishes.
    #[inline]
    pub fn log_sum(&self, a: u32, b: u32) -> Option<u32> {
        let a = a % self.order;
        let b = b % self.order;
        let d = if b >= a { b - a } else { b + self.order - a };
        match self.zech[d as usize] {
            NONE => None,
            z => Some(((a as u64 + z as u64) % self.order as u64) as u32),
        }
    }

    /// Digit-wise vector addition of two encoded elements.
    pub fn add_vectors(&self, x: u32, y: u32) -> u32 {
        let q = self.q();
        let (mut x, mut y) = (x, y);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.n {
            out += self.base.add(x % q, y % q) * place;
            x /= q;
            y /= q;
            place *= q;
        }
        out
    }

    /// Exponent of the embedded base-field element `beta`, a multiple of `s`.
    pub fn base_exponent(&self, beta: u32) -> Option<u32> {
        if beta == 0 || beta >= self.q() {
            return None;
        }
        self.log(beta)
    }

    /// Replaces one Zech entry. Only meant for fault-injection tests.
    #[doc(hidden)]
    pub fn corrupt_zech(&mut self, k: u32, value: u32) {
        self.zech[k as usize] = value;
    }
}
