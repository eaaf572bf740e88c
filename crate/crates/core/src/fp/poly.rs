//! Dense univariate polynomials over a [`FiniteField`], low degree first.
//!
//! Plain vectors with free functions; the zero polynomial is the empty vector.

use super::field::{FiniteField, Fq};

pub type Poly = Vec<Fq>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

pub fn degree(a: &[Fq]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

pub fn add(k: &FiniteField, a: &[Fq], b: &[Fq]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or_default();
            let y = b.get(i).copied().unwrap_or_default();
            k.add(x, y)
        })
        .collect();
    trim(out)
}

pub fn neg(k: &FiniteField, a: &[Fq]) -> Poly {
    a.iter().map(|&c| k.neg(c)).collect()
}

pub fn sub(k: &FiniteField, a: &[Fq], b: &[Fq]) -> Poly {
    add(k, a, &neg(k, b))
}

pub fn mul(k: &FiniteField, a: &[Fq], b: &[Fq]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Fq::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = k.add(out[i + j], k.mul(x, y));
        }
    }
    trim(out)
}

pub fn scale(k: &FiniteField, a: &[Fq], c: Fq) -> Poly {
    trim(a.iter().map(|&x| k.mul(x, c)).collect())
}

pub fn pow(k: &FiniteField, a: &[Fq], mut e: u64) -> Poly {
    let mut base = a.to_vec();
    let mut acc = vec![Fq::ONE];
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(k, &acc, &base);
        }
        base = mul(k, &base, &base);
        e >>= 1;
    }
    acc
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(k: &FiniteField, a: &[Fq], b: &[Fq]) -> (Poly, Poly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = k.inv(b[db]).unwrap();
    let mut r = trim(a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![Fq::ZERO; r.len() - db];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = k.mul(*r.last().unwrap(), lead_inv);
        q[shift] = c;
        for (i, &bc) in b[..=db].iter().enumerate() {
            r[shift + i] = k.sub(r[shift + i], k.mul(c, bc));
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn monic(k: &FiniteField, a: &[Fq]) -> Poly {
    match degree(a) {
        None => Vec::new(),
        Some(d) => scale(k, a, k.inv(a[d]).unwrap()),
    }
}

pub fn gcd(k: &FiniteField, a: &[Fq], b: &[Fq]) -> Poly {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let (_, r) = divrem(k, &x, &y);
        x = y;
        y = r;
    }
    monic(k, &x)
}

pub fn derivative(k: &FiniteField, a: &[Fq]) -> Poly {
    trim(a.iter().enumerate().skip(1).map(|(i, &c)| k.mul_int(c, i as i64)).collect())
}

pub fn eval(k: &FiniteField, a: &[Fq], x: Fq) -> Fq {
    a.iter().rev().fold(Fq::ZERO, |acc, &c| k.add(k.mul(acc, x), c))
}

/// The polynomial s -> a(s + c).
pub fn taylor_shift(k: &FiniteField, a: &[Fq], c: Fq) -> Poly {
    let lin = vec![c, Fq::ONE];
    let mut out: Poly = Vec::new();
    for &coef in a.iter().rev() {
        out = add(k, &mul(k, &out, &lin), &[coef]);
    }
    out
}

/// Coefficient reversal s^deg a(1/s).
pub fn reverse(a: &[Fq]) -> Poly {
    let mut r = trim(a.to_vec());
    r.reverse();
    trim(r)
}

pub fn map_coeffs(a: &[Fq], f: impl Fn(Fq) -> Fq) -> Poly {
    trim(a.iter().map(|&c| f(c)).collect())
}

/// Lowest exponent with nonzero coefficient.
pub fn valuation(a: &[Fq]) -> Option<usize> {
    a.iter().position(|c| !c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_reconstructs() {
        let k = FiniteField::new(5, 1).unwrap();
        let a: Poly = [1, 2, 3, 4, 1].iter().map(|&x| Fq(x)).collect();
        let b: Poly = [2, 0, 1].iter().map(|&x| Fq(x)).collect();
        let (q, r) = divrem(&k, &a, &b);
        assert!(r.len() < 3);
        assert_eq!(add(&k, &mul(&k, &q, &b), &r), a);
    }

    #[test]
    fn gcd_of_shared_factor() {
        let k = FiniteField::new(3, 1).unwrap();
        let f: Poly = vec![Fq(1), Fq(1)]; // 1 + t
        let g = mul(&k, &f, &[Fq(2), Fq(0), Fq(1)]);
        let h = mul(&k, &f, &[Fq(0), Fq(1)]);
        assert_eq!(gcd(&k, &g, &h), f);
    }

    #[test]
    fn shift_evaluates() {
        let k = FiniteField::new(7, 1).unwrap();
        let a: Poly = vec![Fq(3), Fq(1), Fq(4)];
        let s = taylor_shift(&k, &a, Fq(2));
        for x in k.elements() {
            assert_eq!(eval(&k, &s, x), eval(&k, &a, k.add(x, Fq(2))));
        }
    }
}
