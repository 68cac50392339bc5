//! Dense polynomial helpers over a [`SmallField`] and the primitive-polynomial search.
//!
//! Polynomials are ascending coefficient lists. A modulus of degree `d` is
//! monic with `d + 1` entries; residues modulo it have exactly `d` entries.

use super::small::{prime_factors, SmallField};
use super::FieldError;

pub(crate) fn one(len: usize) -> Vec<u32> {
    let mut v = vec![0; len];
    v[0] = 1;
    v
}

/// `x * cur mod modulus`.
pub(crate) fn mul_by_x(field: &SmallField, cur: &[u32], modulus: &[u32]) -> Vec<u32> {
    let d = cur.len();
    let top = cur[d - 1];
    let mut out = vec![0; d];
    for i in (1..d).rev() {
        out[i] = field.sub(cur[i - 1], field.mul(top, modulus[i]));
    }
    out[0] = field.neg(field.mul(top, modulus[0]));
    out
}

fn mulmod(field: &SmallField, a: &[u32], b: &[u32], modulus: &[u32]) -> Vec<u32> {
    let d = modulus.len() - 1;
    let mut prod = vec![0; 2 * d];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = field.add(prod[i + j], field.mul(x, y));
        }
    }
    for k in (d..2 * d).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        for (t, &f) in modulus.iter().enumerate() {
            let idx = k - d + t;
            prod[idx] = field.sub(prod[idx], field.mul(c, f));
        }
    }
    prod.truncate(d);
    prod
}

fn powmod(field: &SmallField, base: &[u32], mut e: u64, modulus: &[u32]) -> Vec<u32> {
    let d = modulus.len() - 1;
    let mut acc = one(d);
    let mut sq = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(field, &acc, &sq, modulus);
        }
        sq = mulmod(field, &sq, &sq, modulus);
        e >>= 1;
    }
    acc
}

/// Multiplicative order of `x` in `field[x] / modulus`, when `x^(q^d - 1) = 1`.
///
/// Returns `None` if `x` does not satisfy `x^(q^d-1) = 1`, which happens
/// exactly when the quotient ring is not a field (or `x` is not a unit).
pub fn order_of_x(field: &SmallField, modulus: &[u32]) -> Option<u64> {
    let d = modulus.len() - 1;
    let q = field.order() as u64;
    let full = q.pow(d as u32) - 1;
    let x = if d == 1 {
        vec![field.neg(modulus[0])]
    } else {
        let mut v = vec![0; d];
        v[1] = 1;
        v
    };
    if x.iter().all(|&c| c == 0) {
        return None;
    }
    if powmod(field, &x, full, modulus) != one(d) {
        return None;
    }
    let mut order = full;
    for r in prime_factors(full) {
        while order.is_multiple_of(r) && powmod(field, &x, order / r, modulus) == one(d) {
            order /= r;
        }
    }
    Some(order)
}

pub fn is_primitive(field: &SmallField, modulus: &[u32]) -> bool {
    let d = modulus.len() - 1;
    let q = field.order() as u64;
    order_of_x(field, modulus) == Some(q.pow(d as u32) - 1)
}

/// Lexicographically smallest monic primitive polynomial of `degree` over `field`.
///
/// Candidates are ordered by their lower coefficients read from degree
/// `degree - 1` down to the constant term, each compared by its integer
/// encoding in `field`.
pub fn find_primitive_polynomial_over(field: &SmallField, degree: u32) -> Vec<u32> {
    assert!(degree >= 1);
    let q = field.order() as u64;
    let total = q.pow(degree);
    for code in 1..total {
        let mut poly = Vec::with_capacity(degree as usize + 1);
        let mut v = code;
        for _ in 0..degree {
            poly.push((v % q) as u32);
            v /= q;
        }
        poly.push(1);
        if poly[0] == 0 {
            continue;
        }
        if is_primitive(field, &poly) {
            return poly;
        }
    }
    unreachable!("primitive polynomials exist for every degree")
}

/// Lexicographically smallest monic primitive polynomial of degree `m` over GF(p).
pub fn find_primitive_polynomial(p: u32, m: u32) -> Result<Vec<u32>, FieldError> {
    if m == 0 {
        return Err(FieldError::BadPolynomial(
            "degree must be at least 1".into(),
        ));
    }
    let prime = SmallField::prime(p)?;
    Ok(find_primitive_polynomial_over(&prime, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force order of x by repeated multiplication, independent of the
    /// factorisation shortcut.
    fn naive_order(field: &SmallField, modulus: &[u32]) -> Option<u64> {
        let d = modulus.len() - 1;
        let x = if d == 1 {
            vec![field.neg(modulus[0])]
        } else {
            let mut v = vec![0; d];
            v[1] = 1;
            v
        };
        let bound = (field.order() as u64).pow(d as u32);
        let mut cur = x.clone();
        let mut k = 1;
        while cur != one(d) {
            if cur.iter().all(|&c| c == 0) || k > bound {
                return None;
            }
            cur = mulmod(field, &cur, &x, modulus);
            k += 1;
        }
        Some(k)
    }

    fn all_candidates(q: u32, degree: u32) -> Vec<Vec<u32>> {
        // ordered by the same reading as the search
        (0..(q as u64).pow(degree))
            .map(|mut v| {
                let mut poly: Vec<u32> = (0..degree)
                    .map(|_| {
                        let c = (v % q as u64) as u32;
                        v /= q as u64;
                        c
                    })
                    .collect();
                poly.push(1);
                poly
            })
            .collect()
    }

    #[test]
    fn degree_one_over_gf2() {
        assert_eq!(find_primitive_polynomial(2, 1).unwrap(), vec![1, 1]);
    }

    #[test]
    fn frozen_values() {
        // Exhaustive order check (Python oracle, independent implementation).
        assert_eq!(
            find_primitive_polynomial(2, 5).unwrap(),
            vec![1, 0, 1, 0, 0, 1]
        );
        assert_eq!(
            find_primitive_polynomial(3, 5).unwrap(),
            vec![1, 2, 0, 0, 0, 1]
        );
        assert_eq!(find_primitive_polynomial(2, 2).unwrap(), vec![1, 1, 1]);
        assert_eq!(find_primitive_polynomial(3, 2).unwrap(), vec![2, 1, 1]);
        assert_eq!(
            find_primitive_polynomial(2, 4).unwrap(),
            vec![1, 1, 0, 0, 1]
        );
        assert_eq!(find_primitive_polynomial(5, 1).unwrap(), vec![2, 1]);
    }

    #[test]
    fn search_matches_exhaustive_oracle() {
        for (p, m) in [(2, 5), (3, 5), (2, 3), (3, 3), (5, 2), (7, 1)] {
            let field = SmallField::prime(p).unwrap();
            let expected = all_candidates(p, m)
                .into_iter()
                .find(|f| naive_order(&field, f) == Some((p as u64).pow(m) - 1))
                .unwrap();
            assert_eq!(
                find_primitive_polynomial(p, m).unwrap(),
                expected,
                "p={p} m={m}"
            );
        }
    }

    #[test]
    fn order_agrees_with_naive_over_gf4() {
        let f2 = SmallField::prime(2).unwrap();
        let gf4 = SmallField::extension(&f2, &[1, 1, 1]).unwrap();
        for poly in all_candidates(4, 3) {
            let naive = naive_order(&gf4, &poly) == Some(63);
            assert_eq!(is_primitive(&gf4, &poly), naive, "{poly:?}");
        }
    }

    #[test]
    fn zero_degree_rejected() {
        assert!(find_primitive_polynomial(2, 0).is_err());
    }
}
