//! The unramified level `W(F_q) / p^M`, as polynomials in one generator
//! modulo the integer lift of the residue field modulus.

use crate::error::{Error, Result};
use crate::fp::{FiniteField, Fq};

#[derive(Debug)]
pub struct WittLevel {
    p: u64,
    f: usize,
    m: u32,
    q: u64,
    /// Monic lifted modulus, low degree first, length f + 1.
    g: Vec<u64>,
    residue: FiniteField,
}

impl WittLevel {
    pub fn new(residue: &FiniteField, m: u32) -> Result<Self> {
        let p = residue.p() as u64;
        let q = (p as u128).checked_pow(m).filter(|&q| q < (1u128 << 62));
        let Some(q) = q else {
            return Err(Error::PrecisionExhausted(format!("p^{m} does not fit the 62-bit working modulus")));
        };
        let g = residue.modulus().iter().map(|&c| c as u64).collect();
        Ok(WittLevel { p, f: residue.degree() as usize, m, q: q as u64, g, residue: residue.clone() })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn f(&self) -> usize {
        self.f
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn residue_field(&self) -> &FiniteField {
        &self.residue
    }

    #[inline]
    pub fn reduce_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.q as i64) as u64
    }

    #[inline]
    pub fn add_to(&self, acc: &mut [u64], b: &[u64]) {
        for (x, &y) in acc.iter_mut().zip(b) {
            let s = *x + y;
            *x = if s >= self.q { s - self.q } else { s };
        }
    }

    #[inline]
    pub fn sub_from(&self, acc: &mut [u64], b: &[u64]) {
        for (x, &y) in acc.iter_mut().zip(b) {
            *x = if *x >= y { *x - y } else { *x + self.q - y };
        }
    }

    #[inline]
    pub fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.q as u128) as u64
    }

    /// `acc += k * b` for an integer `k` already reduced mod q.
    #[inline]
    pub fn axpy_int(&self, acc: &mut [u64], k: u64, b: &[u64]) {
        if k == 0 {
            return;
        }
        for (x, &y) in acc.iter_mut().zip(b) {
            let s = *x + self.mulmod(k, y);
            *x = if s >= self.q { s - self.q } else { s };
        }
    }

    /// `acc += a * b`.
    pub fn mul_acc(&self, acc: &mut [u64], a: &[u64], b: &[u64]) {
        if self.f == 1 {
            let s = acc[0] + self.mulmod(a[0], b[0]);
            acc[0] = if s >= self.q { s - self.q } else { s };
            return;
        }
        let prod = self.mul(a, b);
        self.add_to(acc, &prod);
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let f = self.f;
        if f == 1 {
            return vec![self.mulmod(a[0], b[0])];
        }
        let mut wide = vec![0u64; 2 * f - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                let s = wide[i + j] + self.mulmod(x, y);
                wide[i + j] = if s >= self.q { s - self.q } else { s };
            }
        }
        for k in (f..2 * f - 1).rev() {
            let c = wide[k];
            if c == 0 {
                continue;
            }
            // x^f = -sum g_i x^i
            for i in 0..f {
                let t = self.mulmod(c, self.g[i]);
                wide[k - f + i] = if wide[k - f + i] >= t { wide[k - f + i] - t } else { wide[k - f + i] + self.q - t };
            }
        }
        wide.truncate(f);
        wide
    }

    pub fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.f];
        v[0] = 1 % self.q;
        v
    }

    pub fn is_zero(a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    /// p-adic valuation, `None` for zero.
    pub fn vp(&self, a: &[u64]) -> Option<u32> {
        a.iter()
            .filter(|&&x| x != 0)
            .map(|&x| {
                let mut x = x;
                let mut v = 0;
                while x % self.p == 0 {
                    x /= self.p;
                    v += 1;
                }
                v
            })
            .min()
    }

    /// Reduce coefficients modulo `p^k`.
    pub fn truncate(&self, a: &mut [u64], k: u32) {
        if k >= self.m {
            return;
        }
        let pk = self.p.pow(k);
        for x in a.iter_mut() {
            *x %= pk;
        }
    }

    /// Exact division by p; the top p-adic digit becomes meaningless.
    pub fn div_p(&self, a: &mut [u64]) {
        for x in a.iter_mut() {
            debug_assert!(*x % self.p == 0);
            *x /= self.p;
        }
    }

    pub fn residue(&self, a: &[u64]) -> Fq {
        let digits: Vec<u32> = a.iter().map(|&x| (x % self.p) as u32).collect();
        self.residue.from_digits(&digits)
    }

    /// Digitwise lift, not Teichmuller.
    pub fn lift(&self, c: Fq) -> Vec<u64> {
        self.residue.digits(c).into_iter().map(|d| d as u64).collect()
    }

    pub fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut acc = self.one();
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a unit by Newton iteration from the residue inverse.
    pub fn inv(&self, a: &[u64]) -> Option<Vec<u64>> {
        let r = self.residue(a);
        let r_inv = self.residue.inv(r).ok()?;
        let mut y = self.lift(r_inv);
        let two = {
            let mut t = self.one();
            t[0] = 2 % self.q;
            t
        };
        let mut prec = 1;
        while prec < self.m {
            let ay = self.mul(a, &y);
            let mut d = two.clone();
            self.sub_from(&mut d, &ay);
            y = self.mul(&y, &d);
            prec *= 2;
        }
        Some(y)
    }

    /// Evaluate a polynomial with coefficients in this ring at `x`.
    pub fn eval(&self, poly: &[Vec<u64>], x: &[u64]) -> Vec<u64> {
        let mut acc = vec![0; self.f];
        for c in poly.iter().rev() {
            acc = self.mul(&acc, x);
            self.add_to(&mut acc, c);
        }
        acc
    }

    /// Hensel-lift a simple root `x0` (mod p) of `poly`.
    pub fn hensel_root(&self, poly: &[Vec<u64>], x0: Vec<u64>) -> Result<Vec<u64>> {
        let deriv: Vec<Vec<u64>> = poly
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.iter().map(|&v| self.mulmod(v, i as u64 % self.q)).collect())
            .collect();
        let mut x = x0;
        let mut prec = 1;
        while prec < self.m {
            let gx = self.eval(poly, &x);
            let dx = self.eval(&deriv, &x);
            let dinv = self.inv(&dx).ok_or_else(|| Error::BadParameters("Hensel root is not simple".into()))?;
            let step = self.mul(&gx, &dinv);
            self.sub_from(&mut x, &step);
            prec *= 2;
        }
        debug_assert!(Self::is_zero(&self.eval(poly, &x)));
        Ok(x)
    }

    /// The lifted modulus as a polynomial with coefficients in `self`
    /// (constants), for root finding.
    pub fn modulus_over(&self, other: &WittLevel) -> Vec<Vec<u64>> {
        other
            .g
            .iter()
            .map(|&c| {
                let mut v = vec![0; self.f];
                v[0] = c % self.q;
                v
            })
            .collect()
    }

    /// The generator `x` of this level.
    pub fn generator(&self) -> Vec<u64> {
        let mut v = vec![0; self.f];
        if self.f == 1 {
            // x is the root of the linear modulus x + g0
            v[0] = self.reduce_int(-(self.g[0] as i64));
        } else {
            v[1] = 1;
        }
        v
    }
}
