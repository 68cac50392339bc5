//! GF(q) arithmetic by polynomial multiplication over GF(p).
//!
//! Deliberately does not touch the log tables of [`crate::field`]; elements
//! use the same base-`p` digit encoding so vectors can be compared directly.

/// GF(p^m) with operation tables computed from schoolbook polynomial products.
#[derive(Clone, Debug)]
pub struct GfQ {
    p: u32,
    q: u32,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl GfQ {
    /// `modulus` is monic over GF(p), ascending; empty or degree one means the prime field.
    pub fn new(p: u32, modulus: &[u32]) -> Self {
        let m = modulus.len().saturating_sub(1).max(1) as u32;
        let q = p.pow(m);
        let digits = |mut v: u32| -> Vec<u32> {
            (0..m)
                .map(|_| {
                    let d = v % p;
                    v /= p;
                    d
                })
                .collect()
        };
        let mut mul = vec![0; (q * q) as usize];
        for a in 0..q {
            let da = digits(a);
            for b in a..q {
                let prod = poly_mulmod(p, &da, &digits(b), modulus);
                let code = prod.iter().rev().fold(0, |acc, &d| acc * p + d);
                mul[(a * q + b) as usize] = code;
                mul[(b * q + a) as usize] = code;
            }
        }
        let mut inv = vec![0; q as usize];
        for a in 1..q {
            inv[a as usize] = (1..q)
                .find(|&b| mul[(a * q + b) as usize] == 1)
                .expect("modulus is irreducible");
        }
        Self { p, q, mul, inv }
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.digitwise(a, b, |x, y| (x + y) % self.p)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.digitwise(a, b, |x, y| (x + self.p - y) % self.p)
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(&self, a: u32) -> u32 {
        assert_ne!(a, 0, "zero has no inverse");
        self.inv[a as usize]
    }

    fn digitwise(&self, mut a: u32, mut b: u32, op: impl Fn(u32, u32) -> u32) -> u32 {
        let mut out = 0;
        let mut place = 1;
        while place < self.q {
            out += op(a % self.p, b % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }
}

/// `a * b mod modulus` over GF(p); a prime-field modulus leaves the product as is.
fn poly_mulmod(p: u32, a: &[u32], b: &[u32], modulus: &[u32]) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let m = modulus.len().saturating_sub(1);
    if m <= 1 {
        return vec![prod.iter().sum::<u32>() % p];
    }
    for top in (m..prod.len()).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        for (k, &r) in modulus.iter().enumerate() {
            let idx = top - m + k;
            prod[idx] = (prod[idx] + p * p - c * r % p) % p;
        }
    }
    prod.truncate(m);
    prod.resize(m, 0);
    prod
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{find_primitive_polynomial, SmallField};

    #[test]
    fn agrees_with_table_field() {
        for (p, m) in [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2), (2, 4)] {
            let poly = find_primitive_polynomial(p, m).unwrap();
            let ours = GfQ::new(p, if m == 1 { &[] } else { &poly });
            let prime = SmallField::prime(p).unwrap();
            let theirs = if m == 1 {
                prime
            } else {
                SmallField::extension(&prime, &poly).unwrap()
            };
            let q = theirs.order();
            assert_eq!(ours.order(), q);
            for a in 0..q {
                for b in 0..q {
                    assert_eq!(ours.add(a, b), theirs.add(a, b));
                    assert_eq!(ours.sub(a, b), theirs.sub(a, b));
                    assert_eq!(ours.mul(a, b), theirs.mul(a, b));
                }
                if a != 0 {
                    assert_eq!(ours.mul(a, ours.inv(a)), 1);
                }
            }
        }
    }

    #[test]
    fn gf4_by_hand() {
        // x^2 + x + 1: x * x = x + 1
        let f = GfQ::new(2, &[1, 1, 1]);
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.mul(2, 3), 1);
        assert_eq!(f.inv(3), 2);
    }
}
