//! Finite fields F_{p^f} for desk-scale p and f.
//!
//! An element is stored as the integer `sum d_i p^i`, where `sum d_i x^i` is
//! its polynomial representative modulo the stored irreducible modulus.
//! Multiplication goes through discrete log tables built once per field.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order accepted by the constructors.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// An element of some [`FiniteField`]. Meaningless without its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fq(pub u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct FieldInner {
    p: u32,
    f: u32,
    q: u32,
    /// Monic modulus, low degree first, length f + 1.
    modulus: Vec<u32>,
    /// exp[k] = g^k for k in 0..2(q-1).
    exp: Vec<u32>,
    /// log[x] for x != 0.
    log: Vec<u32>,
}

/// The field F_{p^f} = F_p[x]/(modulus). Cheap to clone.
#[derive(Clone)]
pub struct FiniteField(Arc<FieldInner>);

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}
impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}[{:?}]", self.0.p, self.0.f, self.0.modulus)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn digits(mut x: u32, p: u32, f: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(f as usize);
    for _ in 0..f {
        out.push(x % p);
        x /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Multiplication of polynomial representatives, used only while building tables.
fn raw_mul(a: u32, b: u32, p: u32, f: u32, modulus: &[u32]) -> u32 {
    let da = digits(a, p, f);
    let db = digits(b, p, f);
    let f = f as usize;
    let mut prod = vec![0u64; 2 * f];
    for i in 0..f {
        for j in 0..f {
            prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p as u64;
        }
    }
    for k in (f..2 * f).rev() {
        let c = prod[k];
        if c != 0 {
            for i in 0..=f {
                let idx = k - f + i;
                prod[idx] = (prod[idx] + (p as u64 - c) * modulus[i] as u64) % p as u64;
            }
        }
    }
    let r: Vec<u32> = prod[..f].iter().map(|&c| c as u32).collect();
    undigits(&r, p)
}

/// Brute-force irreducibility over F_p: no monic factor of degree <= deg/2.
pub fn is_irreducible_mod_p(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g: Vec<u32> = digits(idx as u32, p, d as u32);
            g.push(1);
            if poly_mod_is_zero(modulus, &g, p) {
                return false;
            }
        }
    }
    true
}

fn poly_mod_is_zero(a: &[u32], g: &[u32], p: u32) -> bool {
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let dg = g.len() - 1;
    let p = p as u64;
    while r.len() > dg {
        let c = *r.last().unwrap() % p;
        let shift = r.len() - 1 - dg;
        if c != 0 {
            for (i, &gc) in g.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - c) * gc as u64) % p;
            }
        }
        r.pop();
    }
    r.iter().all(|&c| c % p == 0)
}

impl FiniteField {
    /// F_{p^f} with the lexicographically first monic irreducible modulus.
    pub fn new(p: u32, f: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::BadParameters(format!("{p} is not prime")));
        }
        if f == 0 {
            return Err(Error::BadParameters("extension degree must be >= 1".into()));
        }
        check_order(p, f)?;
        if f == 1 {
            return Self::with_modulus(p, vec![0, 1]);
        }
        let count = (p as u64).pow(f);
        for idx in 0..count {
            let mut m = digits(idx as u32, p, f);
            m.push(1);
            if m[0] != 0 && is_irreducible_mod_p(&m, p) {
                return Self::with_modulus(p, m);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    /// F_p[x]/(modulus); `modulus` is monic, low degree first.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::BadParameters(format!("{p} is not prime")));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::BadParameters("modulus must be monic with digits < p".into()));
        }
        let f = (modulus.len() - 1) as u32;
        check_order(p, f)?;
        if !is_irreducible_mod_p(&modulus, p) {
            return Err(Error::NotIrreducible { p });
        }
        let q = p.pow(f);
        let n = q - 1;
        let (mut exp, mut log) = (Vec::new(), Vec::new());
        if n == 1 {
            exp = vec![1, 1];
            log = vec![0, 0];
        } else {
            for g in 2..q.max(3) {
                let g = g % q;
                if g == 0 {
                    continue;
                }
                let mut table = Vec::with_capacity(2 * n as usize);
                let mut x = 1u32;
                let mut order = 0u32;
                loop {
                    table.push(x);
                    x = raw_mul(x, g, p, f, &modulus);
                    order += 1;
                    if x == 1 {
                        break;
                    }
                }
                if order == n {
                    let mut lg = vec![0u32; q as usize];
                    for (k, &v) in table.iter().enumerate() {
                        lg[v as usize] = k as u32;
                    }
                    let tail = table.clone();
                    table.extend(tail);
                    exp = table;
                    log = lg;
                    break;
                }
            }
            if exp.is_empty() {
                return Err(Error::NotIrreducible { p });
            }
        }
        Ok(FiniteField(Arc::new(FieldInner { p, f, q, modulus, exp, log })))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn degree(&self) -> u32 {
        self.0.f
    }
    pub fn order(&self) -> u32 {
        self.0.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.0.q).map(Fq)
    }

    /// The class of x in F_p[x]/(modulus).
    pub fn generator(&self) -> Fq {
        if self.0.f == 1 {
            Fq((self.0.p - self.0.modulus[0]) % self.0.p)
        } else {
            Fq(self.0.p)
        }
    }

    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// Element with polynomial digits `d` (low degree first).
    pub fn from_digits(&self, d: &[u32]) -> Fq {
        let mut v = vec![0u32; self.0.f as usize];
        for (i, &c) in d.iter().enumerate().take(self.0.f as usize) {
            v[i] = c % self.0.p;
        }
        Fq(undigits(&v, self.0.p))
    }

    pub fn digits(&self, a: Fq) -> Vec<u32> {
        digits(a.0, self.0.p, self.0.f)
    }

    /// Some(integer in 0..p) when `a` lies in the prime field.
    pub fn as_prime(&self, a: Fq) -> Option<u32> {
        (a.0 < self.0.p).then_some(a.0)
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let p = self.0.p;
        if self.0.f == 1 {
            return Fq((a.0 + b.0) % p);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place = place.wrapping_mul(p);
        }
        Fq(out)
    }

    pub fn neg(&self, a: Fq) -> Fq {
        let p = self.0.p;
        if self.0.f == 1 {
            return Fq((p - a.0) % p);
        }
        let (mut x, mut out, mut place) = (a.0, 0u32, 1u32);
        while x > 0 {
            out += ((p - x % p) % p) * place;
            x /= p;
            place = place.wrapping_mul(p);
        }
        Fq(out)
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.is_zero() || b.is_zero() {
            return Fq::ZERO;
        }
        let i = self.0.log[a.0 as usize] + self.0.log[b.0 as usize];
        Fq(self.0.exp[i as usize])
    }

    pub fn inv(&self, a: Fq) -> Result<Fq> {
        if a.is_zero() {
            return Err(Error::NotAUnit);
        }
        let n = self.0.q - 1;
        let l = self.0.log[a.0 as usize];
        Ok(Fq(self.0.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fq, e: i64) -> Result<Fq> {
        if a.is_zero() {
            return match e {
                0 => Ok(Fq::ONE),
                e if e > 0 => Ok(Fq::ZERO),
                _ => Err(Error::NotAUnit),
            };
        }
        let n = (self.0.q - 1) as i64;
        let l = self.0.log[a.0 as usize] as i64;
        let k = (l * e.rem_euclid(n)).rem_euclid(n);
        Ok(Fq(self.0.exp[k as usize]))
    }

    /// The integer `n` viewed in the field, times `a`.
    pub fn mul_int(&self, a: Fq, n: i64) -> Fq {
        self.mul(a, self.from_int(n))
    }

    /// Frobenius c -> c^(p^j); j may be any integer (reduced mod f).
    pub fn frobenius(&self, a: Fq, j: i64) -> Fq {
        let j = j.rem_euclid(self.0.f as i64) as u32;
        let mut x = a;
        for _ in 0..j {
            x = self.pow(x, self.0.p as i64).unwrap();
        }
        x
    }

    /// The unique p-th root c^(p^(f-1)).
    pub fn pth_root(&self, a: Fq) -> Fq {
        self.frobenius(a, self.0.f as i64 - 1)
    }

    /// Absolute trace to F_p.
    pub fn trace(&self, a: Fq) -> u32 {
        let mut acc = Fq::ZERO;
        let mut x = a;
        for _ in 0..self.0.f {
            acc = self.add(acc, x);
            x = self.frobenius(x, 1);
        }
        self.as_prime(acc).expect("trace lies in the prime field")
    }

    pub fn format(&self, a: Fq) -> String {
        if self.0.f == 1 {
            return a.0.to_string();
        }
        let d = self.digits(a);
        let mut parts = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "a1".to_string(),
                _ => format!("a1^{i}"),
            };
            parts.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn check_order(p: u32, f: u32) -> Result<()> {
    let q = (p as u64).checked_pow(f).unwrap_or(u64::MAX);
    if q > MAX_FIELD_ORDER {
        return Err(Error::BadParameters(format!("field of order {p}^{f} is too large")));
    }
    Ok(())
}

/// A field embedding F_{p^f} -> F_{p^f'} for f | f'.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    src: FiniteField,
    dst: FiniteField,
    table: Arc<Vec<Fq>>,
}

impl FieldEmbedding {
    /// Embeds `src` into `dst` by sending x to the smallest root of the
    /// source modulus in `dst`.
    pub fn new(src: &FiniteField, dst: &FiniteField) -> Result<Self> {
        if src.p() != dst.p() || dst.degree() % src.degree() != 0 {
            return Err(Error::FieldMismatch);
        }
        let m = src.modulus();
        let root = dst
            .elements()
            .find(|&b| {
                let mut acc = Fq::ZERO;
                for &c in m.iter().rev() {
                    acc = dst.add(dst.mul(acc, b), dst.from_int(c as i64));
                }
                acc.is_zero()
            })
            .ok_or(Error::FieldMismatch)?;
        let table = src
            .elements()
            .map(|a| {
                let mut acc = Fq::ZERO;
                for &c in src.digits(a).iter().rev() {
                    acc = dst.add(dst.mul(acc, root), dst.from_int(c as i64));
                }
                acc
            })
            .collect();
        Ok(FieldEmbedding { src: src.clone(), dst: dst.clone(), table: Arc::new(table) })
    }

    pub fn source(&self) -> &FiniteField {
        &self.src
    }
    pub fn target(&self) -> &FiniteField {
        &self.dst
    }
    pub fn image_of_generator(&self) -> Fq {
        self.map(self.src.generator())
    }
    pub fn map(&self, a: Fq) -> Fq {
        self.table[a.0 as usize]
    }
}
