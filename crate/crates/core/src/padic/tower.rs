//! The base ring `R = W(F_q)[pi]` with `pi` a root of `E(X^c)`,
//! `E(X) = ((1+X)^p - 1)/X`, so that `lambda = zeta_p - 1 = pi^c`.

use std::fmt;
use std::sync::Arc;

use super::witt::WittLevel;
use crate::error::{Error, Result};
use crate::fp::field::is_prime;
use crate::fp::series::div_ceil;
use crate::fp::{FieldEmbedding, FiniteField, Fq};

pub const DEFAULT_PRECISION: i64 = 32;

struct TowerInner {
    p: u32,
    f: u32,
    c: u32,
    e: usize,
    n: i64,
    witt: WittLevel,
    /// Non-leading coefficients of `E(X^c)` reduced mod `p^M`, length e.
    eis: Vec<u64>,
    /// Raw form of `p / pi`.
    p_over_pi: Vec<u64>,
    /// Images of `x^j` (j < f) under the Frobenius lift.
    frob: Vec<Vec<u64>>,
}

/// A complete DVR containing `zeta_p`, modelled modulo `pi^N`.
#[derive(Clone)]
pub struct LocalFieldTower(Arc<TowerInner>);

impl PartialEq for LocalFieldTower {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.f == other.0.f && self.0.c == other.0.c && self.0.n == other.0.n)
    }
}

impl Eq for LocalFieldTower {}

impl fmt::Debug for LocalFieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tower(p={}, f={}, c={}, e={}, N={})", self.0.p, self.0.f, self.0.c, self.0.e, self.0.n)
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

impl LocalFieldTower {
    /// Base tower: `pi = lambda`, `e = p - 1`.
    pub fn base(p: u32, f: u32, n: i64) -> Result<Self> {
        Self::new(p, f, 1, n)
    }

    /// Tower with `pi^c = lambda`, `e = c (p - 1)`, precision `pi^n`.
    pub fn new(p: u32, f: u32, c: u32, n: i64) -> Result<Self> {
        if !is_prime(p as u64) || f == 0 || c == 0 || n < 2 {
            return Err(Error::BadParameters(format!("tower needs p prime, f >= 1, c >= 1, N >= 2 (got p={p}, f={f}, c={c}, N={n})")));
        }
        let residue = FiniteField::new(p, f)?;
        let e = (c * (p - 1)) as usize;
        let m = div_ceil(n, e as i64) as u32 + 1;
        let witt = WittLevel::new(&residue, m)?;
        let mut eis = vec![0u64; e];
        for i in 0..(p as usize - 1) {
            eis[i * c as usize] = binomial(p as u64, i as u64 + 1) % witt.q();
        }
        let fw = witt.f();
        // p/pi = -(pi^(e-1) + E_(e-1) pi^(e-2) + ... + E_1) / (E_0 / p), and E_0 = p
        let mut p_over_pi = vec![0u64; e * fw];
        for i in 1..=e {
            let coeff = if i == e { 1 } else { eis[i] };
            p_over_pi[(i - 1) * fw] = witt.reduce_int(-(coeff as i64));
        }
        let frob = {
            let g = witt.modulus_over(&witt);
            let xp = witt.pow(&witt.generator(), p as u64);
            let root = witt.hensel_root(&g, xp)?;
            let mut pw = vec![witt.one()];
            for _ in 1..fw {
                let next = witt.mul(pw.last().unwrap(), &root);
                pw.push(next);
            }
            pw
        };
        let t = LocalFieldTower(Arc::new(TowerInner { p, f, c, e, n, witt, eis, p_over_pi, frob }));
        debug_assert_eq!(t.from_int(p as i64).valuation(), Some(e as i64));
        Ok(t)
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn f(&self) -> u32 {
        self.0.f
    }
    /// Ramification over the base tower.
    pub fn c(&self) -> u32 {
        self.0.c
    }
    pub fn e(&self) -> i64 {
        self.0.e as i64
    }
    pub fn precision(&self) -> i64 {
        self.0.n
    }
    pub fn v_p(&self) -> i64 {
        self.0.e as i64
    }
    pub fn v_lambda(&self) -> i64 {
        self.0.c as i64
    }
    pub fn residue_field(&self) -> &FiniteField {
        self.0.witt.residue_field()
    }
    pub fn witt(&self) -> &WittLevel {
        &self.0.witt
    }
    /// Width of a raw element.
    pub(crate) fn width(&self) -> usize {
        self.0.e * self.0.witt.f()
    }

    /// Integer coefficients of the Eisenstein polynomial, low degree first.
    pub fn eisenstein(&self) -> Vec<i64> {
        let mut v: Vec<i64> = (0..self.0.e)
            .map(|i| {
                let c = self.0.c as usize;
                if i % c == 0 {
                    binomial(self.0.p as u64, (i / c) as u64 + 1) as i64
                } else {
                    0
                }
            })
            .collect();
        v.push(1);
        v
    }

    pub fn zero(&self) -> TowerElement {
        TowerElement { tower: self.clone(), c: vec![0; self.width()], prec: self.0.n }
    }

    pub fn from_int(&self, k: i64) -> TowerElement {
        let mut x = self.zero();
        x.c[0] = self.0.witt.reduce_int(k);
        x.canon();
        x
    }

    pub fn one(&self) -> TowerElement {
        self.from_int(1)
    }

    pub fn pi(&self) -> TowerElement {
        self.pi_pow(1)
    }

    pub fn pi_pow(&self, k: i64) -> TowerElement {
        self.one().mul_pi_pow(k)
    }

    pub fn lambda(&self) -> TowerElement {
        self.pi_pow(self.0.c as i64)
    }

    /// Digitwise lift of a residue field element.
    pub fn lift(&self, a: Fq) -> TowerElement {
        let mut x = self.zero();
        let l = self.0.witt.lift(a);
        x.c[..l.len()].copy_from_slice(&l);
        x
    }

    /// The unramified generator `x` (written `a1`).
    pub fn unramified_generator(&self) -> TowerElement {
        let mut x = self.zero();
        let g = self.0.witt.generator();
        x.c[..g.len()].copy_from_slice(&g);
        x
    }

    pub(crate) fn from_raw(&self, c: Vec<u64>, prec: i64) -> TowerElement {
        let mut x = TowerElement { tower: self.clone(), c, prec: prec.min(self.0.n) };
        x.canon();
        x
    }

    // ---- raw arithmetic on slices of width e*f ----

    pub(crate) fn raw_add(&self, acc: &mut [u64], b: &[u64]) {
        self.0.witt.add_to(acc, b);
    }

    pub(crate) fn raw_sub(&self, acc: &mut [u64], b: &[u64]) {
        self.0.witt.sub_from(acc, b);
    }

    /// Unreduced product accumulated into a wide buffer of length (2e-1)*f.
    pub(crate) fn raw_mul_wide(&self, wide: &mut [u64], a: &[u64], b: &[u64]) {
        let fw = self.0.witt.f();
        let e = self.0.e;
        for i in 0..e {
            let ai = &a[i * fw..(i + 1) * fw];
            if ai.iter().all(|&x| x == 0) {
                continue;
            }
            for j in 0..e {
                let bj = &b[j * fw..(j + 1) * fw];
                if bj.iter().all(|&x| x == 0) {
                    continue;
                }
                self.0.witt.mul_acc(&mut wide[(i + j) * fw..(i + j + 1) * fw], ai, bj);
            }
        }
    }

    /// Fold a wide buffer back below degree e using `E(pi) = 0`.
    pub(crate) fn raw_reduce_wide(&self, wide: &mut [u64]) {
        let fw = self.0.witt.f();
        let e = self.0.e;
        let q = self.0.witt.q();
        for k in (e..2 * e - 1).rev() {
            let top: Vec<u64> = wide[k * fw..(k + 1) * fw].to_vec();
            if top.iter().all(|&x| x == 0) {
                continue;
            }
            for i in 0..e {
                let ei = self.0.eis[i];
                if ei == 0 {
                    continue;
                }
                let neg = (q - ei) % q;
                self.0.witt.axpy_int(&mut wide[(k - e + i) * fw..(k - e + i + 1) * fw], neg, &top);
            }
            wide[k * fw..(k + 1) * fw].fill(0);
        }
    }

    pub(crate) fn raw_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let fw = self.0.witt.f();
        let mut wide = vec![0u64; (2 * self.0.e - 1) * fw];
        self.raw_mul_wide(&mut wide, a, b);
        self.raw_reduce_wide(&mut wide);
        wide.truncate(self.width());
        wide
    }

    /// Multiply by pi.
    pub(crate) fn raw_mul_pi(&self, a: &[u64]) -> Vec<u64> {
        let fw = self.0.witt.f();
        let e = self.0.e;
        let mut wide = vec![0u64; (e + 1) * fw];
        wide[fw..].copy_from_slice(a);
        let top: Vec<u64> = wide[e * fw..].to_vec();
        for i in 0..e {
            let ei = self.0.eis[i];
            if ei != 0 {
                let q = self.0.witt.q();
                self.0.witt.axpy_int(&mut wide[i * fw..(i + 1) * fw], (q - ei) % q, &top);
            }
        }
        wide.truncate(e * fw);
        wide
    }

    /// Exact division by pi; caller guarantees valuation >= 1.
    pub(crate) fn raw_div_pi(&self, a: &[u64]) -> Vec<u64> {
        let fw = self.0.witt.f();
        let e = self.0.e;
        let mut c0 = a[..fw].to_vec();
        self.0.witt.div_p(&mut c0);
        let mut out = vec![0u64; e * fw];
        out[..(e - 1) * fw].copy_from_slice(&a[fw..]);
        // c0 * (p/pi)
        for i in 0..e {
            let k = self.0.p_over_pi[i * fw];
            self.0.witt.axpy_int(&mut out[i * fw..(i + 1) * fw], k, &c0);
        }
        out
    }

    /// Valuation of a raw element, capped at `prec` (None at or above it).
    pub(crate) fn raw_valuation(&self, a: &[u64], prec: i64) -> Option<i64> {
        let fw = self.0.witt.f();
        let e = self.0.e as i64;
        let mut best: Option<i64> = None;
        for i in 0..self.0.e {
            if let Some(v) = self.0.witt.vp(&a[i * fw..(i + 1) * fw]) {
                let val = e * v as i64 + i as i64;
                best = Some(best.map_or(val, |b: i64| b.min(val)));
            }
        }
        best.filter(|&v| v < prec)
    }

    /// Reduce a raw element to its canonical form modulo `pi^prec`.
    pub(crate) fn raw_canon(&self, a: &mut [u64], prec: i64) {
        let fw = self.0.witt.f();
        let e = self.0.e as i64;
        for i in 0..self.0.e {
            let k = div_ceil(prec - i as i64, e).max(0) as u32;
            self.0.witt.truncate(&mut a[i * fw..(i + 1) * fw], k);
        }
    }

    pub(crate) fn raw_frobenius(&self, a: &[u64], j: i64) -> Vec<u64> {
        let fw = self.0.witt.f();
        let steps = j.rem_euclid(self.0.f as i64);
        let mut cur = a.to_vec();
        for _ in 0..steps {
            let mut next = vec![0u64; cur.len()];
            for i in 0..self.0.e {
                let w = &cur[i * fw..(i + 1) * fw];
                let out = &mut next[i * fw..(i + 1) * fw];
                for (d, &coef) in w.iter().enumerate() {
                    self.0.witt.axpy_int(out, coef, &self.0.frob[d]);
                }
            }
            cur = next;
        }
        cur
    }

    pub(crate) fn raw_residue(&self, a: &[u64]) -> Fq {
        self.0.witt.residue(&a[..self.0.witt.f()])
    }

    /// Tower with Eisenstein polynomial `E(X^(c * c2))` and the embedding
    /// sending the old pi to `pi'^c2`.
    pub fn ramified_base_change(&self, c2: u32) -> Result<(LocalFieldTower, TowerEmbedding)> {
        if c2 == 0 {
            return Err(Error::BadParameters("extension degree must be positive".into()));
        }
        let n2 = self.0.n.checked_mul(c2 as i64).ok_or_else(|| Error::PrecisionExhausted("precision overflow".into()))?;
        let dst = LocalFieldTower::new(self.0.p, self.0.f, self.0.c * c2, n2)?;
        Ok((dst.clone(), TowerEmbedding { src: self.clone(), dst, kind: EmbeddingKind::Ramified(c2) }))
    }

    /// Tower with residue field `F_(p^f2)` and the embedding of unramified levels.
    pub fn unramified_base_change(&self, f2: u32) -> Result<(LocalFieldTower, TowerEmbedding)> {
        if f2 == 0 || f2 % self.0.f != 0 {
            return Err(Error::BadParameters(format!("{f2} is not a multiple of f = {}", self.0.f)));
        }
        let dst = LocalFieldTower::new(self.0.p, f2, self.0.c, self.0.n)?;
        let emb = FieldEmbedding::new(self.residue_field(), dst.residue_field())?;
        let dw = dst.witt();
        let poly = dw.modulus_over(self.witt());
        let approx = dw.lift(emb.image_of_generator());
        let root = if self.0.f == 1 { dw.lift(Fq::ZERO) } else { dw.hensel_root(&poly, approx)? };
        let mut powers = vec![dw.one()];
        for _ in 1..self.witt().f() {
            let next = dw.mul(powers.last().unwrap(), &root);
            powers.push(next);
        }
        Ok((dst.clone(), TowerEmbedding { src: self.clone(), dst, kind: EmbeddingKind::Unramified(powers) }))
    }
}

#[derive(Clone, Debug)]
enum EmbeddingKind {
    Ramified(u32),
    Unramified(Vec<Vec<u64>>),
}

/// Ring embedding between towers produced by a base change.
#[derive(Clone, Debug)]
pub struct TowerEmbedding {
    src: LocalFieldTower,
    dst: LocalFieldTower,
    kind: EmbeddingKind,
}

impl TowerEmbedding {
    pub fn source(&self) -> &LocalFieldTower {
        &self.src
    }
    pub fn target(&self) -> &LocalFieldTower {
        &self.dst
    }
    /// Factor by which valuations scale.
    pub fn scale(&self) -> i64 {
        match self.kind {
            EmbeddingKind::Ramified(c) => c as i64,
            EmbeddingKind::Unramified(_) => 1,
        }
    }

    pub(crate) fn map_raw(&self, a: &[u64]) -> Vec<u64> {
        let sf = self.src.witt().f();
        let df = self.dst.witt().f();
        let mut out = vec![0u64; self.dst.width()];
        match &self.kind {
            EmbeddingKind::Ramified(c) => {
                let c = *c as usize;
                for i in 0..self.src.0.e {
                    out[i * c * df..i * c * df + df].copy_from_slice(&a[i * sf..(i + 1) * sf]);
                }
            }
            EmbeddingKind::Unramified(powers) => {
                for i in 0..self.src.0.e {
                    for d in 0..sf {
                        self.dst.witt().axpy_int(&mut out[i * df..(i + 1) * df], a[i * sf + d], &powers[d]);
                    }
                }
            }
        }
        out
    }

    pub fn map(&self, x: &TowerElement) -> TowerElement {
        assert_eq!(x.tower, self.src, "element from a different tower");
        self.dst.from_raw(self.map_raw(&x.c), x.prec.saturating_mul(self.scale()))
    }
}

/// An element of the tower known modulo `pi^prec`.
#[derive(Clone)]
pub struct TowerElement {
    tower: LocalFieldTower,
    c: Vec<u64>,
    prec: i64,
}

impl PartialEq for TowerElement {
    fn eq(&self, other: &Self) -> bool {
        self.tower == other.tower && self.prec == other.prec && self.c == other.c
    }
}

impl Eq for TowerElement {}

impl fmt::Debug for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(pi^{})", self.render(), self.prec)
    }
}

impl TowerElement {
    fn canon(&mut self) {
        self.tower.raw_canon(&mut self.c, self.prec);
    }

    fn same(&self, other: &Self) -> Result<()> {
        if self.tower != other.tower {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn tower(&self) -> &LocalFieldTower {
        &self.tower
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub(crate) fn raw(&self) -> &[u64] {
        &self.c
    }

    pub fn with_prec(&self, prec: i64) -> Self {
        let mut x = self.clone();
        x.prec = prec.min(self.prec);
        x.canon();
        x
    }

    /// Normalized valuation, `None` when zero modulo `pi^prec`.
    pub fn valuation(&self) -> Option<i64> {
        self.tower.raw_valuation(&self.c, self.prec)
    }

    /// Like [`valuation`](Self::valuation) but failing on zero.
    pub fn valuation_checked(&self) -> Result<i64> {
        self.valuation()
            .ok_or_else(|| Error::PrecisionExhausted(format!("element vanishes modulo pi^{}", self.prec)))
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        let mut c = self.c.clone();
        self.tower.raw_add(&mut c, &other.c);
        Ok(self.tower.from_raw(c, self.prec.min(other.prec)))
    }

    pub fn neg(&self) -> Self {
        let mut c = vec![0; self.c.len()];
        self.tower.raw_sub(&mut c, &self.c);
        self.tower.from_raw(c, self.prec)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        let n = self.tower.precision();
        let va = self.valuation().unwrap_or(self.prec);
        let vb = other.valuation().unwrap_or(other.prec);
        let prec = (self.prec + vb).min(other.prec + va).min(n);
        Ok(self.tower.from_raw(self.tower.raw_mul(&self.c, &other.c), prec))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = self.tower.one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b).unwrap();
            }
            b = b.mul(&b).unwrap();
            e >>= 1;
        }
        acc
    }

    pub fn mul_pi_pow(&self, k: i64) -> Self {
        let mut c = self.c.clone();
        for _ in 0..k {
            c = self.tower.raw_mul_pi(&c);
        }
        self.tower.from_raw(c, self.prec.saturating_add(k))
    }

    /// Exact division by `pi^k`.
    pub fn div_pi_pow(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Ok(self.clone());
        }
        match self.valuation() {
            Some(v) if v < k => return Err(Error::NotAUnit),
            None if self.prec < k => {
                return Err(Error::PrecisionExhausted("quotient by pi^k has no known digits".into()))
            }
            _ => {}
        }
        let mut c = self.c.clone();
        for j in 1..=k {
            c = self.tower.raw_div_pi(&c);
            self.tower.raw_canon(&mut c, self.prec - j);
        }
        Ok(self.tower.from_raw(c, self.prec - k))
    }

    pub fn residue(&self) -> Fq {
        self.tower.raw_residue(&self.c)
    }

    /// Inverse of a unit by Newton iteration.
    pub fn inv(&self) -> Result<Self> {
        if self.valuation() != Some(0) {
            return Err(Error::NotAUnit);
        }
        let k = self.tower.residue_field();
        let mut y = self.tower.lift(k.inv(self.residue())?);
        let two = self.tower.from_int(2);
        let mut good = 1;
        while good < self.prec {
            y = y.mul(&two.sub(&self.mul(&y)?)?)?;
            good *= 2;
        }
        Ok(y.with_prec(self.prec))
    }

    pub fn frobenius(&self, j: i64) -> Self {
        self.tower.from_raw(self.tower.raw_frobenius(&self.c, j), self.prec)
    }

    /// Equal modulo the smaller of the two precisions.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let p = self.prec.min(other.prec);
        self.tower == other.tower && self.with_prec(p).c == other.with_prec(p).c
    }

    /// Digits as `sum c_i pi^i` with unramified coefficients in the generator `a1`.
    pub fn render(&self) -> String {
        let fw = self.tower.witt().f();
        let mut parts = Vec::new();
        for i in 0..self.tower.0.e {
            let w = &self.c[i * fw..(i + 1) * fw];
            if w.iter().all(|&x| x == 0) {
                continue;
            }
            let mut terms = Vec::new();
            for (d, &x) in w.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                terms.push(match d {
                    0 => format!("{x}"),
                    1 => format!("{x}*a1"),
                    _ => format!("{x}*a1^{d}"),
                });
            }
            let coef = if terms.len() == 1 { terms.pop().unwrap() } else { format!("({})", terms.join(" + ")) };
            parts.push(match i {
                0 => coef,
                1 => format!("{coef}*pi"),
                _ => format!("{coef}*pi^{i}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eisenstein_polynomials() {
        assert_eq!(LocalFieldTower::base(3, 1, 16).unwrap().eisenstein(), vec![3, 3, 1]);
        assert_eq!(LocalFieldTower::base(2, 1, 16).unwrap().eisenstein(), vec![2, 1]);
        assert_eq!(LocalFieldTower::base(5, 1, 16).unwrap().eisenstein(), vec![5, 10, 10, 5, 1]);
        assert_eq!(LocalFieldTower::new(3, 1, 2, 16).unwrap().eisenstein(), vec![3, 0, 3, 0, 1]);
    }

    #[test]
    fn lambda_is_zeta_minus_one() {
        for (p, c) in [(2, 1), (3, 1), (3, 2), (5, 1), (5, 2)] {
            let t = LocalFieldTower::new(p, 1, c, 24).unwrap();
            let l = t.lambda();
            assert_eq!(l.valuation(), Some(c as i64));
            assert_eq!(t.from_int(p as i64).valuation(), Some(t.v_p()));
            // (1 + lambda)^p = 1
            let z = t.one().add(&l).unwrap().pow(p as u64);
            assert!(z.sub(&t.one()).unwrap().is_zero());
        }
    }

    #[test]
    fn ultrametric_example() {
        let t = LocalFieldTower::base(3, 1, 16).unwrap();
        assert_eq!(t.from_int(3).add(&t.lambda()).unwrap().valuation(), Some(1));
    }

    #[test]
    fn inverse_and_division() {
        let t = LocalFieldTower::base(5, 2, 20).unwrap();
        let x = t.unramified_generator().add(&t.pi().mul(&t.from_int(7)).unwrap()).unwrap();
        assert_eq!(x.mul(&x.inv().unwrap()).unwrap(), t.one());
        let y = x.mul_pi_pow(3);
        assert_eq!(y.valuation(), Some(3));
        assert!(y.div_pi_pow(3).unwrap().agrees_with(&x));
        assert_eq!(t.from_int(5).div_pi_pow(4).unwrap().valuation(), Some(0));
    }

    #[test]
    fn ramified_embedding_scales() {
        let t = LocalFieldTower::base(3, 1, 16).unwrap();
        let (t2, emb) = t.ramified_base_change(2).unwrap();
        assert_eq!(t2.eisenstein(), vec![3, 0, 3, 0, 1]);
        assert_eq!((t2.v_p(), t2.v_lambda()), (4, 2));
        assert_eq!(emb.map(&t.lambda()), t2.lambda());
        let x = t.from_int(3).add(&t.lambda().pow(3)).unwrap();
        assert_eq!(emb.map(&x).valuation(), Some(2 * x.valuation().unwrap()));
        let y = t.lambda().add(&t.one()).unwrap();
        assert_eq!(emb.map(&x.mul(&y).unwrap()), emb.map(&x).mul(&emb.map(&y)).unwrap());
    }

    #[test]
    fn frobenius_and_unramified_change() {
        let t = LocalFieldTower::base(3, 2, 12).unwrap();
        let a = t.unramified_generator();
        let s = a.frobenius(1);
        assert_eq!(s.residue(), t.residue_field().frobenius(a.residue(), 1));
        assert_eq!(a.frobenius(2), a);
        assert_eq!(t.lambda().frobenius(1), t.lambda());
        let b = a.add(&t.pi()).unwrap();
        let c = b.mul(&a).unwrap();
        assert_eq!(c.frobenius(1), b.frobenius(1).mul(&a.frobenius(1)).unwrap());
        let base = LocalFieldTower::base(3, 1, 12).unwrap();
        let (t2, emb) = base.unramified_base_change(2).unwrap();
        assert_eq!(t2, t);
        assert_eq!(emb.map(&base.lambda()), t.lambda());
    }
}
