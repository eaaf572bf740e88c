//! Truncated Laurent series over F_{p^f}.
//!
//! A series is known modulo `t^prec`: every coefficient with exponent below
//! `prec` is exact and nothing above it is stored. Operations compute the
//! precision of their result exactly instead of padding with guesses.

use std::fmt;

use super::field::{FieldEmbedding, FiniteField, Fq};
use super::poly::{self, Poly};
use crate::error::{Error, Result};

/// Precision marker for series that are exact (finite Laurent polynomials).
pub const EXACT: i64 = i64::MAX / 4;

fn clamp(x: i64) -> i64 {
    x.min(EXACT)
}

pub(crate) fn sat_add(a: i64, b: i64) -> i64 {
    if a >= EXACT || b >= EXACT {
        EXACT
    } else {
        clamp(a + b)
    }
}

pub(crate) fn div_floor(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

pub(crate) fn div_ceil(a: i64, b: i64) -> i64 {
    -(-a).div_euclid(b)
}

/// Exponent range `lo..=hi` on which local expansions are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Self {
        Window { lo, hi }
    }
}

impl Default for Window {
    fn default() -> Self {
        Window { lo: -64, hi: 64 }
    }
}

#[derive(Clone)]
pub struct LaurentSeries {
    field: FiniteField,
    /// Exponent of `coeffs[0]`; `coeffs[0]` is nonzero unless empty.
    start: i64,
    coeffs: Vec<Fq>,
    prec: i64,
}

impl LaurentSeries {
    pub fn zero(field: &FiniteField, prec: i64) -> Self {
        LaurentSeries { field: field.clone(), start: 0, coeffs: Vec::new(), prec: clamp(prec) }
    }

    pub fn one(field: &FiniteField) -> Self {
        Self::monomial(field, Fq::ONE, 0)
    }

    /// The exact series `c t^e`.
    pub fn monomial(field: &FiniteField, c: Fq, e: i64) -> Self {
        Self::from_terms(field, [(e, c)], EXACT)
    }

    /// Builds `sum c t^e` known modulo `t^prec`; terms at or above `prec` are dropped.
    pub fn from_terms(field: &FiniteField, terms: impl IntoIterator<Item = (i64, Fq)>, prec: i64) -> Self {
        let prec = clamp(prec);
        let mut map = std::collections::BTreeMap::new();
        for (e, c) in terms {
            if e < prec {
                let slot = map.entry(e).or_insert(Fq::ZERO);
                *slot = field.add(*slot, c);
            }
        }
        map.retain(|_, c| !c.is_zero());
        let Some((&lo, _)) = map.iter().next() else {
            return Self::zero(field, prec);
        };
        let hi = *map.keys().next_back().unwrap();
        let mut coeffs = vec![Fq::ZERO; (hi - lo + 1) as usize];
        for (e, c) in map {
            coeffs[(e - lo) as usize] = c;
        }
        LaurentSeries { field: field.clone(), start: lo, coeffs, prec }
    }

    /// `t^shift * a(t)` for a polynomial `a`, known modulo `t^prec`.
    pub fn from_poly(field: &FiniteField, a: &[Fq], shift: i64, prec: i64) -> Self {
        Self::from_terms(field, a.iter().enumerate().map(|(i, &c)| (shift + i as i64, c)), prec)
    }

    fn normalize(mut self) -> Self {
        self.prec = clamp(self.prec);
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => {
                self.coeffs.clear();
                self.start = 0;
            }
            Some(i) => {
                self.coeffs.drain(..i);
                self.start += i as i64;
            }
        }
        // drop anything at or above prec, then trailing zeros
        if !self.coeffs.is_empty() {
            let keep = (self.prec - self.start).clamp(0, self.coeffs.len() as i64) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.start = 0;
        }
        self
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent of the leading term, `None` for zero to precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }

    /// Highest stored exponent.
    pub fn degree(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then(|| self.start + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, e: i64) -> Fq {
        if e < self.start || e >= self.start + self.coeffs.len() as i64 {
            Fq::ZERO
        } else {
            self.coeffs[(e - self.start) as usize]
        }
    }

    pub fn leading_coeff(&self) -> Option<Fq> {
        self.coeffs.first().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, Fq)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, &c)| (self.start + i as i64, c))
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// Lowers the precision to `prec` (never raises it).
    pub fn truncate(&self, prec: i64) -> Self {
        let mut s = self.clone();
        s.prec = s.prec.min(prec);
        s.normalize()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let prec = self.prec.min(other.prec);
        let k = &self.field;
        if self.is_zero() {
            return Ok(other.truncate(prec));
        }
        if other.is_zero() {
            return Ok(self.truncate(prec));
        }
        let lo = self.start.min(other.start);
        let hi = self.degree().unwrap().max(other.degree().unwrap()).min(prec - 1);
        if hi < lo {
            return Ok(Self::zero(k, prec));
        }
        let coeffs = (lo..=hi).map(|e| k.add(self.coeff(e), other.coeff(e))).collect();
        Ok(LaurentSeries { field: k.clone(), start: lo, coeffs, prec }.normalize())
    }

    pub fn neg(&self) -> Self {
        let k = &self.field;
        LaurentSeries {
            field: k.clone(),
            start: self.start,
            coeffs: self.coeffs.iter().map(|&c| k.neg(c)).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Fq) -> Self {
        let k = &self.field;
        LaurentSeries {
            field: k.clone(),
            start: self.start,
            coeffs: self.coeffs.iter().map(|&x| k.mul(x, c)).collect(),
            prec: self.prec,
        }
        .normalize()
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            field: self.field.clone(),
            start: self.start + k,
            coeffs: self.coeffs.clone(),
            prec: sat_add(self.prec, k),
        }
        .normalize()
    }

    fn val_or_prec(&self) -> i64 {
        self.valuation().unwrap_or(self.prec)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let k = &self.field;
        let prec = sat_add(self.prec, other.val_or_prec()).min(sat_add(other.prec, self.val_or_prec()));
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(k, prec));
        }
        let start = self.start + other.start;
        let len = ((self.coeffs.len() + other.coeffs.len() - 1) as i64).min((prec - start).max(0)) as usize;
        let mut coeffs = vec![Fq::ZERO; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !b.is_zero() {
                    coeffs[i + j] = k.add(coeffs[i + j], k.mul(a, b));
                }
            }
        }
        Ok(LaurentSeries { field: k.clone(), start, coeffs, prec }.normalize())
    }

    /// Multiplicative inverse. Needs a nonzero leading term and a finite precision.
    pub fn inv(&self) -> Result<Self> {
        let k = &self.field;
        let v = self.valuation().ok_or(Error::ZeroFunction)?;
        if self.is_exact() {
            if self.coeffs.len() == 1 {
                return Ok(Self::monomial(k, k.inv(self.coeffs[0])?, -v));
            }
            return Err(Error::WindowTooSmall("inverse of an exact series needs a finite window".into()));
        }
        // self = t^v * s0 with s0 known mod t^(prec - v)
        let len = self.prec - v;
        let out_prec = self.prec - 2 * v;
        let n = len.max(0) as usize;
        let c0inv = k.inv(self.coeffs[0])?;
        let mut out = vec![Fq::ZERO; n];
        for i in 0..n {
            let mut acc = if i == 0 { Fq::ONE } else { Fq::ZERO };
            for j in 1..=i.min(self.coeffs.len() - 1) {
                acc = k.sub(acc, k.mul(self.coeffs[j], out[i - j]));
            }
            out[i] = k.mul(acc, c0inv);
        }
        Ok(LaurentSeries { field: k.clone(), start: -v, coeffs: out, prec: out_prec }.normalize())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Termwise derivative d/dt.
    pub fn derivative(&self) -> Self {
        let k = &self.field;
        let terms: Vec<(i64, Fq)> = self.terms().map(|(e, c)| (e - 1, k.mul_int(c, e))).collect();
        Self::from_terms(k, terms, if self.is_exact() { EXACT } else { self.prec - 1 })
    }

    /// Applies c -> c^(p^j) to every coefficient.
    pub fn frobenius(&self, j: i64) -> Self {
        let k = &self.field;
        LaurentSeries {
            field: k.clone(),
            start: self.start,
            coeffs: self.coeffs.iter().map(|&c| k.frobenius(c, j)).collect(),
            prec: self.prec,
        }
    }

    /// The series `s(t)^p` computed by Frobenius on coefficients and exponents.
    pub fn pth_power(&self) -> Self {
        let k = &self.field;
        let p = k.p() as i64;
        let terms: Vec<(i64, Fq)> = self.terms().map(|(e, c)| (p * e, k.frobenius(c, 1))).collect();
        let prec = if self.is_exact() { EXACT } else { p * self.prec };
        Self::from_terms(k, terms, prec)
    }

    /// `Ok(root)` with `root^p = self` on the window when every exponent is
    /// divisible by p, otherwise `Err(e)` with the first offending exponent.
    pub fn pth_root(&self) -> std::result::Result<Self, i64> {
        let k = &self.field;
        let p = k.p() as i64;
        if let Some((e, _)) = self.terms().find(|(e, _)| e.rem_euclid(p) != 0) {
            return Err(e);
        }
        let terms: Vec<(i64, Fq)> = self.terms().map(|(e, c)| (e / p, k.pth_root(c))).collect();
        let prec = if self.is_exact() { EXACT } else { div_ceil(self.prec, p) };
        Ok(Self::from_terms(k, terms, prec))
    }

    /// Exact equality on the common window.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.field == other.field && self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }

    pub fn map_field(&self, emb: &FieldEmbedding) -> Self {
        LaurentSeries {
            field: emb.target().clone(),
            start: self.start,
            coeffs: self.coeffs.iter().map(|&c| emb.map(c)).collect(),
            prec: self.prec,
        }
    }

    /// Nonnegative part as a polynomial, for exact series only.
    pub fn as_poly(&self) -> Option<Poly> {
        if !self.is_exact() || self.start < 0 {
            return None;
        }
        let mut out = vec![Fq::ZERO; self.start as usize];
        out.extend_from_slice(&self.coeffs);
        Some(poly::trim(out))
    }

    /// Expression-grammar rendering in the variable `var`.
    pub fn render(&self, var: &str) -> String {
        let k = &self.field;
        let mut parts = Vec::new();
        for (e, c) in self.terms() {
            let cs = k.format(c);
            let needs_paren = cs.contains('+');
            let mono = match e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            parts.push(match (e, cs.as_str()) {
                (0, _) => cs.clone(),
                (_, "1") => mono,
                _ if needs_paren => format!("({cs})*{mono}"),
                _ => format!("{cs}*{mono}"),
            });
        }
        let body = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        if self.is_exact() {
            body
        } else {
            format!("{body} + O({var}^{})", self.prec)
        }
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("t"))
    }
}

impl PartialEq for LaurentSeries {
    /// Same coefficients and same precision.
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.prec == other.prec && self.start == other.start && self.coeffs == other.coeffs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FiniteField {
        FiniteField::prime(3).unwrap()
    }

    #[test]
    fn geometric_inverse() {
        let k = f3();
        let one_plus_t = LaurentSeries::from_terms(&k, [(0, Fq(1)), (1, Fq(1))], 8);
        let inv = one_plus_t.inv().unwrap();
        for e in 0..8 {
            let expect = if e % 2 == 0 { Fq(1) } else { Fq(2) };
            assert_eq!(inv.coeff(e), expect);
        }
        assert_eq!(inv.prec(), 8);
        let prod = inv.mul(&one_plus_t).unwrap();
        assert!(prod.agrees_with(&LaurentSeries::one(&k)));
    }

    #[test]
    fn inverse_shifts_precision() {
        let k = f3();
        let s = LaurentSeries::from_terms(&k, [(2, Fq(1)), (3, Fq(1))], 10);
        let inv = s.inv().unwrap();
        assert_eq!(inv.valuation(), Some(-2));
        assert_eq!(inv.prec(), 6);
    }

    #[test]
    fn derivative_kills_pth_powers() {
        let k = f3();
        let s = LaurentSeries::from_terms(&k, [(-1, Fq(1)), (3, Fq(1)), (4, Fq(1))], EXACT);
        let d = s.derivative();
        // -t^-2 + 4 t^3 = 2 t^-2 + t^3
        assert_eq!(d.coeff(-2), Fq(2));
        assert_eq!(d.coeff(2), Fq(0));
        assert_eq!(d.coeff(3), Fq(1));
    }

    #[test]
    fn pth_root_roundtrip() {
        let k = f3();
        let s = LaurentSeries::from_terms(&k, [(3, Fq(1)), (6, Fq(1))], 20);
        let r = s.pth_root().unwrap();
        assert!(r.agrees_with(&LaurentSeries::from_terms(&k, [(1, Fq(1)), (2, Fq(1))], 7)));
        assert!(r.pth_power().agrees_with(&s));
        assert_eq!(LaurentSeries::from_terms(&k, [(2, Fq(1))], 20).pth_root().unwrap_err(), 2);
    }

    #[test]
    fn zero_inverse_is_error() {
        let k = f3();
        assert_eq!(LaurentSeries::zero(&k, 5).inv().unwrap_err(), Error::ZeroFunction);
    }
}
