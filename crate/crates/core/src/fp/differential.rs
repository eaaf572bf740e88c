//! Differential forms: local germs `g(s) ds` and global forms `g(t) dt` on P^1,
//! together with d, dlog, residues, orders and the Cartier operator.

use super::field::{FieldEmbedding, FiniteField, Fq};
use super::point::P1Point;
use super::poly;
use super::rational::{cartier_poly, RationalFunction};
use super::series::{div_floor, LaurentSeries, EXACT};
use crate::error::{Error, Result};

/// A germ `g(s) ds` in the local parameter of a chart.
#[derive(Clone, Debug, PartialEq)]
pub struct Differential {
    g: LaurentSeries,
}

impl Differential {
    pub fn new(g: LaurentSeries) -> Self {
        Differential { g }
    }

    pub fn zero(field: &FiniteField, prec: i64) -> Self {
        Differential { g: LaurentSeries::zero(field, prec) }
    }

    /// The coefficient function `g` in `g ds`.
    pub fn coefficient(&self) -> &LaurentSeries {
        &self.g
    }

    pub fn field(&self) -> &FiniteField {
        self.g.field()
    }

    pub fn is_zero(&self) -> bool {
        self.g.is_zero()
    }

    /// `du/u`.
    pub fn dlog(u: &LaurentSeries) -> Result<Self> {
        if u.is_zero() {
            return Err(Error::ZeroFunction);
        }
        Ok(Differential { g: u.derivative().mul(&u.inv()?)? })
    }

    /// `da`.
    pub fn d(a: &LaurentSeries) -> Self {
        Differential { g: a.derivative() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Differential { g: self.g.add(&other.g)? })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Differential { g: self.g.sub(&other.g)? })
    }

    /// `h * omega` for a function `h`.
    pub fn mul_function(&self, h: &LaurentSeries) -> Result<Self> {
        Ok(Differential { g: self.g.mul(h)? })
    }

    pub fn frobenius(&self, j: i64) -> Self {
        Differential { g: self.g.frobenius(j) }
    }

    /// Cartier operator: `sum a_i s^i ds -> sum a_{pj+p-1}^{1/p} s^j ds`.
    /// Output is known modulo `s^floor(prec/p)`.
    pub fn cartier(&self) -> Self {
        let k = self.g.field();
        let p = k.p() as i64;
        let prec = if self.g.is_exact() { EXACT } else { div_floor(self.g.prec(), p) };
        let terms: Vec<(i64, Fq)> = self
            .g
            .terms()
            .filter(|(e, _)| (e + 1).rem_euclid(p) == 0)
            .map(|(e, c)| (div_floor(e + 1, p) - 1, k.pth_root(c)))
            .collect();
        Differential { g: LaurentSeries::from_terms(k, terms, prec) }
    }

    /// Cartier operator, failing unless the output is known below `s^out_prec`.
    pub fn cartier_to(&self, out_prec: i64) -> Result<Self> {
        let c = self.cartier();
        if c.g.prec() < out_prec {
            return Err(Error::WindowTooSmall(format!(
                "Cartier output known only below exponent {}, {} requested",
                c.g.prec(),
                out_prec
            )));
        }
        Ok(c)
    }

    /// Coefficient of `s^-1 ds`.
    pub fn residue(&self) -> Result<Fq> {
        if self.g.prec() <= -1 {
            return Err(Error::WindowTooSmall("residue coefficient lies outside the window".into()));
        }
        Ok(self.g.coeff(-1))
    }

    /// Order of the form; fails when it vanishes on the whole window.
    pub fn order(&self) -> Result<i64> {
        self.g
            .valuation()
            .ok_or_else(|| Error::WindowTooSmall("form vanishes on the whole window".into()))
    }

    /// Exact equality on the common window.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.g.agrees_with(&other.g)
    }
}

/// A global rational form `g(t) dt` on the projective line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalDifferential {
    g: RationalFunction,
}

impl RationalDifferential {
    pub fn new(g: RationalFunction) -> Self {
        RationalDifferential { g }
    }

    /// `dt`.
    pub fn dt(field: &FiniteField) -> Self {
        Self::new(RationalFunction::one(field))
    }

    pub fn coefficient(&self) -> &RationalFunction {
        &self.g
    }

    pub fn is_zero(&self) -> bool {
        self.g.is_zero()
    }

    pub fn dlog(u: &RationalFunction) -> Result<Self> {
        if u.is_zero() {
            return Err(Error::ZeroFunction);
        }
        Ok(Self::new(u.derivative().div(u)?))
    }

    pub fn d(a: &RationalFunction) -> Self {
        Self::new(a.derivative())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self::new(self.g.add(&other.g)?))
    }

    pub fn mul_function(&self, h: &RationalFunction) -> Result<Self> {
        Ok(Self::new(self.g.mul(h)?))
    }

    pub fn frobenius(&self, j: i64) -> Self {
        Self::new(self.g.frobenius(j))
    }

    /// Exact Cartier operator: `C(N/D dt) = C(N D^(p-1) dt) / D`.
    pub fn cartier(&self) -> Self {
        let k = self.g.field();
        let p = k.p() as u64;
        let num = poly::mul(k, self.g.numerator(), &poly::pow(k, self.g.denominator(), p - 1));
        let c = cartier_poly(k, &num);
        Self::new(RationalFunction::new(k, c, self.g.denominator().to_vec()).expect("denominator is nonzero"))
    }

    /// The germ at `x` in its local parameter (`t - a`, or `1/t` at infinity),
    /// exact on `lo..=hi`.
    pub fn local_at(&self, x: &P1Point, lo: i64, hi: i64) -> Result<Differential> {
        if self.g.is_zero() {
            let k = match x {
                P1Point::Finite { field, .. } => field.clone(),
                P1Point::Infinity => self.g.field().clone(),
            };
            return Ok(Differential::zero(&k, hi + 1));
        }
        match x {
            P1Point::Finite { .. } => Ok(Differential::new(self.g.local_expand(x, lo, hi)?)),
            P1Point::Infinity => {
                // t = 1/s, dt = -s^-2 ds
                let g = self.g.local_expand(x, lo + 2, hi + 2)?;
                Ok(Differential::new(g.shift(-2).neg()))
            }
        }
    }

    /// Exact order at `x`.
    pub fn order(&self, x: &P1Point) -> Result<i64> {
        let o = self.g.order_at(x)?.ok_or(Error::ZeroFunction)?;
        Ok(if x.is_infinity() { o - 2 } else { o })
    }

    pub fn residue(&self, x: &P1Point) -> Result<Fq> {
        let o = self.order(x)?;
        if o >= 0 {
            return Ok(Fq::ZERO);
        }
        self.local_at(x, o, 0)?.residue()
    }

    /// Every geometric zero and pole of the form together with its order,
    /// including infinity when it is one.
    pub fn divisor(&self) -> Result<Vec<(P1Point, i64)>> {
        if self.g.is_zero() {
            return Err(Error::ZeroFunction);
        }
        let k = self.g.field();
        let mut out = Vec::new();
        for part in [self.g.numerator(), self.g.denominator()] {
            for pt in geometric_roots(k, part)? {
                let o = self.order(&pt)?;
                out.push((pt, o));
            }
        }
        let oinf = self.order(&P1Point::Infinity)?;
        if oinf != 0 {
            out.push((P1Point::Infinity, oinf));
        }
        Ok(out)
    }

    /// Sum of orders over all geometric points; equals -2 on P^1.
    pub fn sum_of_orders(&self) -> Result<i64> {
        Ok(self.divisor()?.iter().map(|(_, o)| o).sum())
    }
}

/// All distinct roots of `a` over the algebraic closure, each in the smallest
/// extension of `k` containing it.
pub fn geometric_roots(k: &FiniteField, a: &[Fq]) -> Result<Vec<P1Point>> {
    let Some(deg) = poly::degree(a) else {
        return Err(Error::ZeroFunction);
    };
    let mut found = Vec::new();
    let mut accounted = 0usize;
    let mut d = 1u32;
    while accounted < deg {
        let big = FiniteField::new(k.p(), k.degree() * d)?;
        let emb = FieldEmbedding::new(k, &big)?;
        let ext: Vec<Fq> = a.iter().map(|&c| emb.map(c)).collect();
        let q = k.order() as i64;
        for r in big.elements() {
            // exact degree d over k
            let mut x = r;
            let mut exact = true;
            for _ in 1..d {
                x = big.pow(x, q).unwrap();
                if x == r {
                    exact = false;
                    break;
                }
            }
            if !exact || !poly::eval(&big, &ext, r).is_zero() {
                continue;
            }
            let shifted = poly::taylor_shift(&big, &ext, r);
            accounted += poly::valuation(&shifted).unwrap();
            found.push(P1Point::finite(&big, r));
        }
        d += 1;
        if d as usize > deg + 1 {
            break;
        }
    }
    Ok(found)
}
