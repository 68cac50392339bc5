use super::poly;
use super::FieldError;

/// A small finite field GF(p^m) with full operation tables.
///
/// Elements are encoded as integers `0..q` whose base-`p` digits are the
/// coefficients of the element's polynomial representation over GF(p).
/// With this encoding addition is digit-wise addition mod `p`, which is also
/// what makes vector addition over the tower a plain digit operation.
#[derive(Clone, Debug)]
pub struct SmallField {
    p: u32,
    m: u32,
    q: u32,
    /// Defining polynomial over GF(p), ascending, monic; empty for prime fields.
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

impl SmallField {
    /// The prime field GF(p).
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        let q = p;
        let mut add = vec![0; (q * q) as usize];
        let mut mul = vec![0; (q * q) as usize];
        for a in 0..q {
            for b in 0..q {
                add[(a * q + b) as usize] = (a + b) % p;
                mul[(a * q + b) as usize] = ((a as u64 * b as u64) % p as u64) as u32;
            }
        }
        Ok(Self::from_tables(p, 1, Vec::new(), add, mul))
    }

    /// GF(p^m) defined by a monic primitive polynomial over GF(p).
    pub fn extension(prime: &SmallField, modulus: &[u32]) -> Result<Self, FieldError> {
        assert_eq!(prime.m, 1, "extension must be built over a prime field");
        let p = prime.p;
        let m = modulus.len().saturating_sub(1) as u32;
        if m == 0 || modulus.last() != Some(&1) {
            return Err(FieldError::BadPolynomial(
                "modulus must be monic of degree >= 1".into(),
            ));
        }
        if m == 1 {
            return Self::prime(p);
        }
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
        let encode = |c: &[u32]| -> u32 { c.iter().rev().fold(0, |acc, &d| acc * p + d) };

        let mut add = vec![0; (q * q) as usize];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = encode(&sum);
            }
        }

        // exp/log of x modulo the defining polynomial
        let order = q - 1;
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = poly::one(m as usize);
        for i in 0..order {
            let code = encode(&cur);
            if log[code as usize] != u32::MAX {
                return Err(FieldError::NotPrimitive {
                    poly: modulus.to_vec(),
                    order: i as u64,
                });
            }
            log[code as usize] = i;
            exp.push(code);
            cur = poly::mul_by_x(prime, &cur, modulus);
        }
        if encode(&cur) != 1 {
            return Err(FieldError::NotPrimitive {
                poly: modulus.to_vec(),
                order: 0,
            });
        }

        let mut mul = vec![0; (q * q) as usize];
        for a in 1..q {
            for b in 1..q {
                let e = (log[a as usize] + log[b as usize]) % order;
                mul[(a * q + b) as usize] = exp[e as usize];
            }
        }
        Ok(Self::from_tables(p, m, modulus.to_vec(), add, mul))
    }

    fn from_tables(p: u32, m: u32, modulus: Vec<u32>, add: Vec<u32>, mul: Vec<u32>) -> Self {
        let q = p.pow(m);
        let mut neg = vec![0; q as usize];
        let mut inv = vec![0; q as usize];
        for a in 0..q {
            for b in 0..q {
                if add[(a * q + b) as usize] == 0 {
                    neg[a as usize] = b;
                }
                if mul[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b;
                }
            }
        }
        Self {
            p,
            m,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Defining polynomial over GF(p); empty for a prime field.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `inv(0)` is 0.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: u32) -> u32 {
        assert_ne!(a, 0);
        let mut cur = a;
        let mut k = 1;
        while cur != 1 {
            cur = self.mul(cur, a);
            k += 1;
        }
        k
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, m)` with `q = p^m`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p as u32, m))
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
