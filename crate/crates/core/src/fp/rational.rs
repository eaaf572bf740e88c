//! Rational functions on the projective line over F_{p^f}.

use std::fmt;

use super::field::{FieldEmbedding, FiniteField, Fq};
use super::point::P1Point;
use super::poly::{self, Poly};
use super::series::LaurentSeries;
use crate::error::{Error, Result};

/// `num / den` in lowest terms with `den` monic.
#[derive(Clone)]
pub struct RationalFunction {
    field: FiniteField,
    num: Poly,
    den: Poly,
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.num == other.num && self.den == other.den
    }
}
impl Eq for RationalFunction {}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("t"))
    }
}

impl RationalFunction {
    pub fn new(field: &FiniteField, num: Poly, den: Poly) -> Result<Self> {
        let k = field;
        let den = poly::trim(den);
        if den.is_empty() {
            return Err(Error::ZeroFunction);
        }
        let num = poly::trim(num);
        if num.is_empty() {
            return Ok(Self::zero(k));
        }
        let g = poly::gcd(k, &num, &den);
        let (mut n, _) = poly::divrem(k, &num, &g);
        let (mut d, _) = poly::divrem(k, &den, &g);
        let lead = k.inv(*d.last().unwrap())?;
        n = poly::scale(k, &n, lead);
        d = poly::scale(k, &d, lead);
        Ok(RationalFunction { field: k.clone(), num: n, den: d })
    }

    pub fn zero(field: &FiniteField) -> Self {
        RationalFunction { field: field.clone(), num: Vec::new(), den: vec![Fq::ONE] }
    }

    pub fn constant(field: &FiniteField, c: Fq) -> Self {
        RationalFunction { field: field.clone(), num: poly::trim(vec![c]), den: vec![Fq::ONE] }
    }

    pub fn one(field: &FiniteField) -> Self {
        Self::constant(field, Fq::ONE)
    }

    /// The coordinate function `t`.
    pub fn t(field: &FiniteField) -> Self {
        RationalFunction { field: field.clone(), num: vec![Fq::ZERO, Fq::ONE], den: vec![Fq::ONE] }
    }

    pub fn from_poly(field: &FiniteField, num: Poly) -> Self {
        Self::new(field, num, vec![Fq::ONE]).unwrap()
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }
    pub fn numerator(&self) -> &[Fq] {
        &self.num
    }
    pub fn denominator(&self) -> &[Fq] {
        &self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let k = &self.field;
        let n = poly::add(k, &poly::mul(k, &self.num, &other.den), &poly::mul(k, &other.num, &self.den));
        Self::new(k, n, poly::mul(k, &self.den, &other.den))
    }

    pub fn neg(&self) -> Self {
        RationalFunction { field: self.field.clone(), num: poly::neg(&self.field, &self.num), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let k = &self.field;
        Self::new(k, poly::mul(k, &self.num, &other.num), poly::mul(k, &self.den, &other.den))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        Self::new(&self.field, self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = &self.field;
        let e = e.unsigned_abs();
        Self::new(k, poly::pow(k, &base.num, e), poly::pow(k, &base.den, e))
    }

    pub fn scale(&self, c: Fq) -> Self {
        let k = &self.field;
        RationalFunction { field: k.clone(), num: poly::scale(k, &self.num, c), den: self.den.clone() }
    }

    /// d/dt by the quotient rule.
    pub fn derivative(&self) -> Self {
        let k = &self.field;
        let n = poly::sub(
            k,
            &poly::mul(k, &poly::derivative(k, &self.num), &self.den),
            &poly::mul(k, &self.num, &poly::derivative(k, &self.den)),
        );
        Self::new(k, n, poly::mul(k, &self.den, &self.den)).unwrap()
    }

    pub fn frobenius(&self, j: i64) -> Self {
        let k = &self.field;
        RationalFunction {
            field: k.clone(),
            num: poly::map_coeffs(&self.num, |c| k.frobenius(c, j)),
            den: poly::map_coeffs(&self.den, |c| k.frobenius(c, j)),
        }
    }

    pub fn map_field(&self, emb: &FieldEmbedding) -> Self {
        RationalFunction {
            field: emb.target().clone(),
            num: poly::map_coeffs(&self.num, |c| emb.map(c)),
            den: poly::map_coeffs(&self.den, |c| emb.map(c)),
        }
    }

    /// Scalar extension to `target` when this field embeds in it.
    pub fn extend_to(&self, target: &FiniteField) -> Result<Self> {
        if *target == self.field {
            return Ok(self.clone());
        }
        Ok(self.map_field(&FieldEmbedding::new(&self.field, target)?))
    }

    /// True when every exponent of numerator and denominator is divisible by p,
    /// i.e. the function is a p-th power in k(t).
    pub fn is_pth_power(&self) -> bool {
        let p = self.field.p() as usize;
        let ok = |a: &[Fq]| a.iter().enumerate().all(|(i, c)| c.is_zero() || i % p == 0);
        ok(&self.num) && ok(&self.den)
    }

    pub fn pth_root(&self) -> Option<Self> {
        if !self.is_pth_power() {
            return None;
        }
        let k = &self.field;
        let p = k.p() as usize;
        let root = |a: &[Fq]| -> Poly { a.iter().step_by(p).map(|&c| k.pth_root(c)).collect() };
        Some(Self::new(k, root(&self.num), root(&self.den)).unwrap())
    }

    /// Order of vanishing at a point (negative for poles); `None` for zero.
    pub fn order_at(&self, x: &P1Point) -> Result<Option<i64>> {
        if self.is_zero() {
            return Ok(None);
        }
        match x {
            P1Point::Infinity => {
                Ok(Some(poly::degree(&self.den).unwrap() as i64 - poly::degree(&self.num).unwrap() as i64))
            }
            P1Point::Finite { field, value } => {
                let r = self.extend_to(field)?;
                let k = field;
                let n = poly::taylor_shift(k, &r.num, *value);
                let d = poly::taylor_shift(k, &r.den, *value);
                Ok(Some(poly::valuation(&n).unwrap() as i64 - poly::valuation(&d).unwrap() as i64))
            }
        }
    }

    /// Expansion in the local parameter at `x` (`t - a`, or `1/t` at infinity),
    /// exact on the window `lo..=hi`.
    pub fn local_expand(&self, x: &P1Point, lo: i64, hi: i64) -> Result<LaurentSeries> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        let (k, n, d, shift) = match x {
            P1Point::Infinity => {
                let k = self.field.clone();
                let shift = poly::degree(&self.den).unwrap() as i64 - poly::degree(&self.num).unwrap() as i64;
                (k, poly::reverse(&self.num), poly::reverse(&self.den), shift)
            }
            P1Point::Finite { field, value } => {
                let r = self.extend_to(field)?;
                let n = poly::taylor_shift(field, &r.num, *value);
                let d = poly::taylor_shift(field, &r.den, *value);
                (field.clone(), n, d, 0)
            }
        };
        let s = series_quotient(&k, &n, &d, shift, hi + 1);
        let ord = s.valuation().unwrap_or(hi + 1);
        let lead = poly::valuation(&n).unwrap() as i64 - poly::valuation(&d).unwrap() as i64 + shift;
        if lead < lo {
            return Err(Error::WindowTooSmall(format!("leading exponent {lead} lies left of window start {lo}")));
        }
        debug_assert!(ord >= lead.min(hi + 1));
        Ok(s)
    }

    pub fn render(&self, var: &str) -> String {
        let num = render_poly(&self.field, &self.num, var);
        if self.den.len() == 1 {
            num
        } else {
            format!("({num})/({})", render_poly(&self.field, &self.den, var))
        }
    }
}

/// `t^shift * n / d` as a series known modulo `t^prec`.
fn series_quotient(k: &FiniteField, n: &[Fq], d: &[Fq], shift: i64, prec: i64) -> LaurentSeries {
    let vn = poly::valuation(n).unwrap();
    let vd = poly::valuation(d).unwrap();
    let n0 = &n[vn..];
    let d0 = &d[vd..];
    let lead = vn as i64 - vd as i64 + shift;
    let len = prec - lead;
    if len <= 0 {
        return LaurentSeries::zero(k, prec);
    }
    let len = len as usize;
    let d0inv = k.inv(d0[0]).unwrap();
    let mut q = vec![Fq::ZERO; len];
    for i in 0..len {
        let mut acc = n0.get(i).copied().unwrap_or_default();
        for j in 1..=i.min(d0.len() - 1) {
            acc = k.sub(acc, k.mul(d0[j], q[i - j]));
        }
        q[i] = k.mul(acc, d0inv);
    }
    LaurentSeries::from_poly(k, &q, lead, prec)
}

pub fn render_poly(k: &FiniteField, a: &[Fq], var: &str) -> String {
    let s = LaurentSeries::from_poly(k, a, 0, super::series::EXACT);
    s.render(var)
}

/// Cartier operator on a polynomial differential `h dt`.
pub(crate) fn cartier_poly(k: &FiniteField, h: &[Fq]) -> Poly {
    let p = k.p() as usize;
    let mut out = Vec::new();
    let mut i = p - 1;
    while i < h.len() {
        out.push(k.pth_root(h[i]));
        i += p;
    }
    poly::trim(out)
}
