//! Elements of `A = R[[T]]{T^-1}`, truncated on two axes: every coefficient
//! is known modulo `pi^pi_prec`, and exponents at or above `t_prec` are
//! unknown. Exponents below the window start must vanish.

use std::fmt;

use super::tower::{LocalFieldTower, TowerElement, TowerEmbedding};
use crate::error::{Error, Result};
use crate::fp::series::sat_add;
use crate::fp::{LaurentSeries, Window, EXACT};

#[derive(Clone)]
pub struct AnnulusElement {
    tower: LocalFieldTower,
    /// Exponent of the first stored coefficient; first coefficient nonzero.
    start: i64,
    /// Raw tower coefficients, `width` words each.
    data: Vec<u64>,
    t_prec: i64,
    pi_prec: i64,
    window: Window,
}

impl PartialEq for AnnulusElement {
    fn eq(&self, other: &Self) -> bool {
        self.tower == other.tower
            && self.start == other.start
            && self.data == other.data
            && self.t_prec == other.t_prec
            && self.pi_prec == other.pi_prec
    }
}

impl fmt::Debug for AnnulusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(pi^{}, T^{})", self.render(), self.pi_prec, if self.t_prec >= EXACT { "inf".to_string() } else { self.t_prec.to_string() })
    }
}

impl AnnulusElement {
    fn width(&self) -> usize {
        self.tower.width()
    }

    fn count(&self) -> usize {
        self.data.len() / self.width()
    }

    fn slot(&self, i: usize) -> &[u64] {
        let w = self.width();
        &self.data[i * w..(i + 1) * w]
    }

    /// Canonical form: truncated to the window, coefficients reduced, zeros trimmed.
    fn normalized(mut self) -> Result<Self> {
        let w = self.width();
        self.pi_prec = self.pi_prec.min(self.tower.precision());
        for i in 0..self.count() {
            self.tower.raw_canon(&mut self.data[i * w..(i + 1) * w], self.pi_prec);
        }
        let first = (0..self.count()).find(|&i| self.slot(i).iter().any(|&x| x != 0));
        let Some(i) = first else {
            self.data.clear();
            self.start = 0;
            if self.t_prec < EXACT {
                self.t_prec = self.t_prec.min(self.window.hi + 1);
            }
            return Ok(self);
        };
        self.data.drain(..i * w);
        self.start += i as i64;
        while self.data.len() >= w && self.data[self.data.len() - w..].iter().all(|&x| x == 0) {
            self.data.truncate(self.data.len() - w);
        }
        // exact elements stay exact while they fit the window
        let last = self.start + self.count() as i64 - 1;
        if self.t_prec > self.window.hi + 1 && !(self.t_prec >= EXACT && last <= self.window.hi) {
            self.t_prec = self.window.hi + 1;
        }
        let keep = (self.t_prec - self.start).clamp(0, self.count() as i64) as usize;
        self.data.truncate(keep * w);
        if self.data.is_empty() {
            self.start = 0;
        } else if self.start < self.window.lo {
            return Err(Error::WindowTooSmall(format!(
                "nonzero coefficient at T^{} lies left of window start {}",
                self.start, self.window.lo
            )));
        }
        Ok(self)
    }

    pub fn zero(tower: &LocalFieldTower, window: Window) -> Self {
        AnnulusElement { tower: tower.clone(), start: 0, data: Vec::new(), t_prec: EXACT, pi_prec: tower.precision(), window }
    }

    pub fn monomial(c: &TowerElement, e: i64, window: Window) -> Result<Self> {
        let t = c.tower().clone();
        AnnulusElement { tower: t, start: e, data: c.raw().to_vec(), t_prec: EXACT, pi_prec: c.prec(), window }.normalized()
    }

    pub fn constant(c: &TowerElement, window: Window) -> Self {
        Self::monomial(c, 0, window).expect("constants fit every window containing 0")
    }

    pub fn one(tower: &LocalFieldTower, window: Window) -> Self {
        Self::constant(&tower.one(), window)
    }

    /// The parameter `T`.
    pub fn t(tower: &LocalFieldTower, window: Window) -> Result<Self> {
        Self::monomial(&tower.one(), 1, window)
    }

    pub fn from_terms(
        tower: &LocalFieldTower,
        terms: impl IntoIterator<Item = (i64, TowerElement)>,
        window: Window,
    ) -> Result<Self> {
        let mut acc = Self::zero(tower, window);
        for (e, c) in terms {
            acc = acc.add(&Self::monomial(&c, e, window)?)?;
        }
        Ok(acc)
    }

    /// Coefficientwise digit lift of a residue series.
    pub fn lift_series(tower: &LocalFieldTower, s: &LaurentSeries, window: Window) -> Result<Self> {
        if s.field() != tower.residue_field() {
            return Err(Error::FieldMismatch);
        }
        let w = tower.width();
        let Some(v) = s.valuation() else {
            return AnnulusElement { t_prec: s.prec(), ..Self::zero(tower, window) }.normalized();
        };
        let top = s.degree().unwrap();
        let mut data = vec![0u64; (top - v + 1) as usize * w];
        for (e, c) in s.terms() {
            let l = tower.lift(c);
            let i = (e - v) as usize;
            data[i * w..(i + 1) * w].copy_from_slice(l.raw());
        }
        AnnulusElement { tower: tower.clone(), start: v, data, t_prec: s.prec(), pi_prec: tower.precision(), window }
            .normalized()
    }

    pub fn tower(&self) -> &LocalFieldTower {
        &self.tower
    }
    pub fn window(&self) -> Window {
        self.window
    }
    pub fn t_prec(&self) -> i64 {
        self.t_prec
    }
    pub fn pi_prec(&self) -> i64 {
        self.pi_prec
    }
    pub fn is_zero(&self) -> bool {
        self.data.is_empty()
    }

    pub fn with_window(&self, window: Window) -> Result<Self> {
        AnnulusElement { window, ..self.clone() }.normalized()
    }

    pub fn with_pi_prec(&self, prec: i64) -> Self {
        AnnulusElement { pi_prec: prec.min(self.pi_prec), ..self.clone() }.normalized().expect("lowering precision keeps the window")
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn t_valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.start)
    }

    pub fn coeff(&self, e: i64) -> TowerElement {
        let i = e - self.start;
        if i < 0 || i >= self.count() as i64 {
            return self.tower.zero().with_prec(self.pi_prec);
        }
        self.tower.from_raw(self.slot(i as usize).to_vec(), self.pi_prec)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, TowerElement)> + '_ {
        (0..self.count())
            .filter(|&i| self.slot(i).iter().any(|&x| x != 0))
            .map(|i| (self.start + i as i64, self.tower.from_raw(self.slot(i).to_vec(), self.pi_prec)))
    }

    /// Minimal valuation of the coefficients, `None` when zero to precision.
    pub fn pi_content(&self) -> Option<i64> {
        (0..self.count()).filter_map(|i| self.tower.raw_valuation(self.slot(i), self.pi_prec)).min()
    }

    fn same(&self, other: &Self) -> Result<()> {
        if self.tower != other.tower {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    fn merged_window(&self, other: &Self) -> Window {
        Window { lo: self.window.lo.max(other.window.lo), hi: self.window.hi.min(other.window.hi) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        if other.is_zero() && other.t_prec >= self.t_prec && other.pi_prec >= self.pi_prec {
            return Ok(self.clone());
        }
        let w = self.width();
        let (lo, hi) = match (self.is_zero(), other.is_zero()) {
            (true, true) => (0, -1),
            (true, false) => (other.start, other.start + other.count() as i64 - 1),
            (false, true) => (self.start, self.start + self.count() as i64 - 1),
            (false, false) => (
                self.start.min(other.start),
                (self.start + self.count() as i64).max(other.start + other.count() as i64) - 1,
            ),
        };
        let n = (hi - lo + 1).max(0) as usize;
        let mut data = vec![0u64; n * w];
        for src in [self, other] {
            for i in 0..src.count() {
                let j = (src.start + i as i64 - lo) as usize;
                self.tower.raw_add(&mut data[j * w..(j + 1) * w], src.slot(i));
            }
        }
        AnnulusElement {
            tower: self.tower.clone(),
            start: lo,
            data,
            t_prec: self.t_prec.min(other.t_prec),
            pi_prec: self.pi_prec.min(other.pi_prec),
            window: self.merged_window(other),
        }
        .normalized()
    }

    pub fn neg(&self) -> Self {
        let w = self.width();
        let mut data = vec![0u64; self.data.len()];
        for i in 0..self.count() {
            self.tower.raw_sub(&mut data[i * w..(i + 1) * w], self.slot(i));
        }
        AnnulusElement { data, ..self.clone() }.normalized().unwrap()
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same(other)?;
        let window = self.merged_window(other);
        let va = self.t_valuation().unwrap_or(self.t_prec);
        let vb = other.t_valuation().unwrap_or(other.t_prec);
        let mut t_prec = sat_add(self.t_prec, vb).min(sat_add(other.t_prec, va));
        let ca = self.pi_content().unwrap_or(self.pi_prec);
        let cb = other.pi_content().unwrap_or(other.pi_prec);
        let pi_prec = (self.pi_prec + cb).min(other.pi_prec + ca).min(self.tower.precision());
        if self.is_zero() || other.is_zero() {
            return AnnulusElement { t_prec, pi_prec, window, ..Self::zero(&self.tower, window) }.normalized();
        }
        let start = self.start + other.start;
        let fw = self.tower.witt().f();
        let e = self.tower.e() as usize;
        let wide_w = (2 * e - 1) * fw;
        let full = self.count() + other.count() - 1;
        let n = ((t_prec.min(window.hi + 1) - start).max(0) as usize).min(full);
        if n < full {
            t_prec = t_prec.min(start + n as i64);
        }
        let mut wide = vec![0u64; n * wide_w];
        for i in 0..self.count() {
            let a = self.slot(i);
            if a.iter().all(|&x| x == 0) {
                continue;
            }
            let jmax = n.saturating_sub(i).min(other.count());
            for j in 0..jmax {
                let b = other.slot(j);
                let k = i + j;
                self.tower.raw_mul_wide(&mut wide[k * wide_w..(k + 1) * wide_w], a, b);
            }
        }
        let w = self.width();
        let mut data = vec![0u64; n * w];
        for k in 0..n {
            let slot = &mut wide[k * wide_w..(k + 1) * wide_w];
            self.tower.raw_reduce_wide(slot);
            data[k * w..(k + 1) * w].copy_from_slice(&slot[..w]);
        }
        AnnulusElement { tower: self.tower.clone(), start, data, t_prec, pi_prec, window }.normalized()
    }

    pub fn scale(&self, c: &TowerElement) -> Result<Self> {
        self.mul(&Self::constant(c, self.window))
    }

    pub fn pow(&self, mut e: u64) -> Result<Self> {
        let mut acc = Self::one(&self.tower, self.window);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b)?;
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b)?;
            }
        }
        Ok(acc)
    }

    /// Integer power; negative exponents go through [`inv`](Self::inv).
    pub fn pow_int(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            self.pow(e as u64)
        } else {
            self.inv()?.pow(e.unsigned_abs())
        }
    }

    /// Multiply by `T^k`.
    pub fn shift(&self, k: i64) -> Result<Self> {
        AnnulusElement { start: self.start + k, t_prec: sat_add(self.t_prec, k), ..self.clone() }.normalized()
    }

    pub fn mul_pi_pow(&self, k: i64) -> Self {
        let w = self.width();
        let mut data = self.data.clone();
        for i in 0..self.count() {
            let mut c = data[i * w..(i + 1) * w].to_vec();
            for _ in 0..k {
                c = self.tower.raw_mul_pi(&c);
            }
            data[i * w..(i + 1) * w].copy_from_slice(&c);
        }
        AnnulusElement { data, pi_prec: self.pi_prec + k, ..self.clone() }.normalized().unwrap()
    }

    /// Exact division by `pi^k`; fails unless the pi-content is at least k.
    pub fn div_pi_pow(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Ok(self.clone());
        }
        if self.pi_content().is_some_and(|c| c < k) {
            return Err(Error::NotAUnit);
        }
        if self.pi_prec <= k {
            return Err(Error::PrecisionExhausted(format!("dividing by pi^{k} leaves no known digits")));
        }
        let w = self.width();
        let mut data = self.data.clone();
        for i in 0..self.count() {
            let c = self.coeff(self.start + i as i64).div_pi_pow(k)?;
            data[i * w..(i + 1) * w].copy_from_slice(c.raw());
        }
        AnnulusElement { data, pi_prec: self.pi_prec - k, ..self.clone() }.normalized()
    }

    /// Coefficientwise residue; requires pi-content 0.
    pub fn reduce_mod_pi(&self) -> Result<LaurentSeries> {
        if self.pi_content() != Some(0) {
            return Err(Error::PositivePiContent);
        }
        let k = self.tower.residue_field();
        let terms: Vec<_> = (0..self.count())
            .map(|i| (self.start + i as i64, self.tower.raw_residue(self.slot(i))))
            .collect();
        Ok(LaurentSeries::from_terms(k, terms, self.t_prec))
    }

    /// Inverse of a unit: Newton iteration from the lifted residue inverse.
    pub fn inv(&self) -> Result<Self> {
        if self.pi_content() != Some(0) {
            return Err(Error::NotAUnit);
        }
        let mut r = self.reduce_mod_pi()?;
        if r.is_exact() && r.degree() != r.valuation() {
            r = r.truncate(self.window.hi + 1);
        }
        let r_inv = r.inv()?;
        let one = Self::one(&self.tower, self.window);
        let mut x = Self::lift_series(&self.tower, &r_inv, self.window)?;
        for _ in 0..64 {
            let err = one.sub(&self.mul(&x)?)?;
            match err.pi_content() {
                None => break,
                Some(c) if c >= self.pi_prec => break,
                _ => {}
            }
            x = x.add(&x.mul(&err)?)?;
        }
        Ok(x.with_pi_prec(self.pi_prec))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    /// Frobenius lift on unramified coefficients; fixes pi and T.
    pub fn frobenius(&self, j: i64) -> Self {
        let w = self.width();
        let mut data = self.data.clone();
        for i in 0..self.count() {
            let c = self.tower.raw_frobenius(self.slot(i), j);
            data[i * w..(i + 1) * w].copy_from_slice(&c);
        }
        AnnulusElement { data, ..self.clone() }.normalized().unwrap()
    }

    /// Image under a base-change embedding of towers.
    pub fn map(&self, emb: &TowerEmbedding) -> Result<Self> {
        if *emb.source() != self.tower {
            return Err(Error::FieldMismatch);
        }
        let dst = emb.target().clone();
        let w = dst.width();
        let mut data = vec![0u64; self.count() * w];
        for i in 0..self.count() {
            data[i * w..(i + 1) * w].copy_from_slice(&emb.map_raw(self.slot(i)));
        }
        AnnulusElement {
            tower: dst,
            start: self.start,
            data,
            t_prec: self.t_prec,
            pi_prec: self.pi_prec.saturating_mul(emb.scale()),
            window: self.window,
        }
        .normalized()
    }

    /// Equality on the common precision in both directions.
    pub fn agrees_with(&self, other: &Self) -> bool {
        if self.tower != other.tower {
            return false;
        }
        let pp = self.pi_prec.min(other.pi_prec);
        let tp = self.t_prec.min(other.t_prec);
        let cut = |x: &Self| -> Option<Self> {
            AnnulusElement { pi_prec: pp, t_prec: tp, window: Window::new(i64::MIN / 4, EXACT), ..x.clone() }
                .normalized()
                .ok()
        };
        match (cut(self), cut(other)) {
            (Some(a), Some(b)) => a.start == b.start && a.data == b.data,
            _ => false,
        }
    }

    /// Rendering in the expression grammar (`pi`, `a1`, `T`).
    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .terms()
            .map(|(e, c)| {
                let cs = c.render();
                let cs = if cs.contains(' ') { format!("({cs})") } else { cs };
                match e {
                    0 => cs,
                    1 => format!("{cs}*T"),
                    _ => format!("{cs}*T^{e}"),
                }
            })
            .collect();
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
    use crate::fp::Fq;

    fn base3() -> LocalFieldTower {
        LocalFieldTower::base(3, 1, 12).unwrap()
    }

    #[test]
    fn inverse_of_t() {
        let t = base3();
        let w = Window::default();
        let x = AnnulusElement::t(&t, w).unwrap();
        let y = x.inv().unwrap();
        assert_eq!(y.t_valuation(), Some(-1));
        assert_eq!(y.terms().count(), 1);
    }

    #[test]
    fn geometric_inverse() {
        // 1 / (1 + lambda T) = sum (-lambda T)^k
        let t = base3();
        let w = Window::new(-20, 20);
        let u = AnnulusElement::one(&t, w).add(&AnnulusElement::monomial(&t.lambda(), 1, w).unwrap()).unwrap();
        let v = u.inv().unwrap();
        for k in 0..12 {
            let expect = t.lambda().neg().pow(k as u64);
            assert!(v.coeff(k).agrees_with(&expect), "k = {k}");
        }
        assert!(u.mul(&v).unwrap().agrees_with(&AnnulusElement::one(&t, w)));
    }

    #[test]
    fn negative_tail_inverse() {
        // T + lambda T^-1 = T (1 + lambda T^-2)
        let t = base3();
        let w = Window::new(-40, 40);
        let u = AnnulusElement::t(&t, w).unwrap().add(&AnnulusElement::monomial(&t.lambda(), -1, w).unwrap()).unwrap();
        let v = u.inv().unwrap();
        let prod = u.mul(&v).unwrap();
        assert!(prod.agrees_with(&AnnulusElement::one(&t, w)));
        assert!(v.t_valuation().unwrap() < -1);
    }

    #[test]
    fn reduction_is_a_ring_map() {
        let t = base3();
        let w = Window::default();
        let x = AnnulusElement::t(&t, w).unwrap().add(&AnnulusElement::constant(&t.lambda(), w)).unwrap();
        let r = x.reduce_mod_pi().unwrap();
        assert_eq!(r, LaurentSeries::monomial(t.residue_field(), Fq::ONE, 1));
        let y = x.add(&AnnulusElement::one(&t, w)).unwrap();
        let xy = x.mul(&y).unwrap().reduce_mod_pi().unwrap();
        assert_eq!(xy, r.mul(&y.reduce_mod_pi().unwrap()).unwrap());
        let z = AnnulusElement::constant(&t.lambda(), w);
        assert_eq!(z.reduce_mod_pi(), Err(Error::PositivePiContent));
    }

    #[test]
    fn window_violation() {
        let t = base3();
        let w = Window::new(-4, 4);
        assert!(matches!(AnnulusElement::monomial(&t.one(), -5, w), Err(Error::WindowTooSmall(_))));
    }
}
