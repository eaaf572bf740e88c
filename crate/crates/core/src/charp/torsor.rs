use std::fmt;

use crate::error::{Error, Result};
use crate::fp::{Differential, FiniteField, Fq, LaurentSeries, P1Point, RationalDifferential, RationalFunction};

/// The three group schemes of rank p over a perfect field of characteristic p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupSchemeKind {
    EtaleZp,
    MuP,
    AlphaP,
}

impl GroupSchemeKind {
    pub const ALL: [GroupSchemeKind; 3] = [GroupSchemeKind::EtaleZp, GroupSchemeKind::MuP, GroupSchemeKind::AlphaP];

    pub fn name(self) -> &'static str {
        match self {
            GroupSchemeKind::EtaleZp => "etale",
            GroupSchemeKind::MuP => "mu_p",
            GroupSchemeKind::AlphaP => "alpha_p",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for GroupSchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A torsor datum: a global function on a P^1 chart, or a germ at the origin
/// of its own local parameter.
#[derive(Clone, Debug, PartialEq)]
pub enum TorsorDatum {
    Rational(RationalFunction),
    Germ(LaurentSeries),
}

impl TorsorDatum {
    pub fn field(&self) -> &FiniteField {
        match self {
            TorsorDatum::Rational(r) => r.field(),
            TorsorDatum::Germ(s) => s.field(),
        }
    }

    pub fn frobenius(&self, j: i64) -> Self {
        match self {
            TorsorDatum::Rational(r) => TorsorDatum::Rational(r.frobenius(j)),
            TorsorDatum::Germ(s) => TorsorDatum::Germ(s.frobenius(j)),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (TorsorDatum::Rational(a), TorsorDatum::Rational(b)) => Ok(TorsorDatum::Rational(a.add(b)?)),
            (TorsorDatum::Germ(a), TorsorDatum::Germ(b)) => Ok(TorsorDatum::Germ(a.add(b)?)),
            _ => Err(Error::SchemeMismatch),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (TorsorDatum::Rational(a), TorsorDatum::Rational(b)) => Ok(TorsorDatum::Rational(a.mul(b)?)),
            (TorsorDatum::Germ(a), TorsorDatum::Germ(b)) => Ok(TorsorDatum::Germ(a.mul(b)?)),
            _ => Err(Error::SchemeMismatch),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            TorsorDatum::Rational(r) => r.is_zero(),
            TorsorDatum::Germ(s) => s.is_zero(),
        }
    }

    pub fn render(&self, var: &str) -> String {
        match self {
            TorsorDatum::Rational(r) => r.render(var),
            TorsorDatum::Germ(s) => s.render(var),
        }
    }
}

/// A rank-p torsor: `z^p - z = a`, `z^p = u` or `z^p = a`.
#[derive(Clone, Debug, PartialEq)]
pub struct CharPTorsor {
    pub kind: GroupSchemeKind,
    pub datum: TorsorDatum,
}

/// Conductor, residue and the order of the defining quantity at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TorsorLocalData {
    pub m: i64,
    /// Residue as an element of F_p.
    pub h: u32,
    /// `ord(omega)` for mu_p / alpha_p, `ord(a)` of the reduced datum for etale;
    /// `None` when the torsor is trivial to the inspected depth.
    pub ord: Option<i64>,
    pub trivial_locally: bool,
}

impl TorsorLocalData {
    pub const TRIVIAL: TorsorLocalData = TorsorLocalData { m: 0, h: 0, ord: None, trivial_locally: true };
}

/// Differential attached to a mu_p / alpha_p datum.
#[derive(Clone, Debug, PartialEq)]
pub enum AttachedForm {
    Rational(RationalDifferential),
    Germ(Differential),
}

impl CharPTorsor {
    pub fn new(kind: GroupSchemeKind, datum: TorsorDatum) -> Result<Self> {
        if kind == GroupSchemeKind::MuP && datum.is_zero() {
            return Err(Error::ZeroFunction);
        }
        Ok(CharPTorsor { kind, datum })
    }

    pub fn etale(a: RationalFunction) -> Self {
        CharPTorsor { kind: GroupSchemeKind::EtaleZp, datum: TorsorDatum::Rational(a) }
    }

    pub fn mu_p(u: RationalFunction) -> Result<Self> {
        Self::new(GroupSchemeKind::MuP, TorsorDatum::Rational(u))
    }

    pub fn alpha_p(a: RationalFunction) -> Self {
        CharPTorsor { kind: GroupSchemeKind::AlphaP, datum: TorsorDatum::Rational(a) }
    }

    pub fn germ(kind: GroupSchemeKind, s: LaurentSeries) -> Result<Self> {
        Self::new(kind, TorsorDatum::Germ(s))
    }

    pub fn field(&self) -> &FiniteField {
        self.datum.field()
    }

    /// Coefficients mapped by `c -> c^(p^j)`.
    pub fn frobenius_act(&self, j: i64) -> Self {
        CharPTorsor { kind: self.kind, datum: self.datum.frobenius(j) }
    }

    /// `dlog u` or `da`; etale torsors have none.
    pub fn differential(&self) -> Result<Option<AttachedForm>> {
        Ok(match (self.kind, &self.datum) {
            (GroupSchemeKind::EtaleZp, _) => None,
            (GroupSchemeKind::MuP, TorsorDatum::Rational(u)) => Some(AttachedForm::Rational(RationalDifferential::dlog(u)?)),
            (GroupSchemeKind::AlphaP, TorsorDatum::Rational(a)) => Some(AttachedForm::Rational(RationalDifferential::d(a))),
            (GroupSchemeKind::MuP, TorsorDatum::Germ(u)) => Some(AttachedForm::Germ(Differential::dlog(&finite(u))?)),
            (GroupSchemeKind::AlphaP, TorsorDatum::Germ(a)) => Some(AttachedForm::Germ(Differential::d(a))),
        })
    }
}

/// Exact multi-term germs cannot be inverted; cut them at their last term.
fn finite(u: &LaurentSeries) -> LaurentSeries {
    if u.is_exact() {
        u.truncate(u.degree().map_or(1, |d| d + 1))
    } else {
        u.clone()
    }
}

/// Remove every negative exponent divisible by p by subtracting `b^p - b`.
/// Returns `(reduced, witness)` with `reduced = a - (witness^p - witness)`.
pub fn artin_schreier_reduce(a: &LaurentSeries) -> Result<(LaurentSeries, LaurentSeries)> {
    let k = a.field();
    let p = k.p() as i64;
    if a.prec() < 0 {
        return Err(Error::WindowTooSmall("Artin-Schreier reduction needs all negative coefficients".into()));
    }
    let mut cur = a.clone();
    let mut witness = LaurentSeries::zero(k, crate::fp::EXACT);
    loop {
        let next = cur.terms().find(|&(e, _)| e < 0 && e % p == 0);
        let Some((e, c)) = next else { break };
        let b = LaurentSeries::monomial(k, k.pth_root(c), e / p);
        cur = cur.sub(&b.pth_power())?.add(&b)?;
        witness = witness.add(&b)?;
    }
    Ok((cur, witness))
}

/// True when the etale class of a germ is trivial over k((t)): after
/// reduction no negative part remains and the constant term has trace 0.
pub fn etale_germ_is_trivial(a: &LaurentSeries) -> Result<bool> {
    if a.prec() < 1 {
        return Err(Error::WindowTooSmall("constant term of the datum is not known".into()));
    }
    let (r, _) = artin_schreier_reduce(a)?;
    let k = r.field();
    Ok(r.valuation().is_none_or(|v| v >= 0) && k.trace(r.coeff(0)) == 0)
}

fn check_germ_point(x: &P1Point) -> Result<()> {
    match x {
        P1Point::Finite { value, .. } if value.is_zero() => Ok(()),
        _ => Err(Error::BadParameters("a germ datum is only defined at its own origin".into())),
    }
}

fn prime_residue(k: &FiniteField, r: Fq) -> u32 {
    k.as_prime(r).expect("residues of dlog and d forms lie in the prime field")
}

/// Conductor and residue of `f` at `x`.
pub fn conductor_residue(f: &CharPTorsor, x: &P1Point) -> Result<TorsorLocalData> {
    match f.kind {
        GroupSchemeKind::EtaleZp => etale_local(f, x),
        GroupSchemeKind::MuP | GroupSchemeKind::AlphaP => form_local(f, x),
    }
}

fn etale_local(f: &CharPTorsor, x: &P1Point) -> Result<TorsorLocalData> {
    let germ = match &f.datum {
        TorsorDatum::Germ(s) => {
            check_germ_point(x)?;
            s.clone()
        }
        TorsorDatum::Rational(a) => {
            if a.is_zero() {
                return Ok(TorsorLocalData::TRIVIAL);
            }
            let lo = a.order_at(x)?.unwrap().min(0);
            a.local_expand(x, lo, 0)?
        }
    };
    if germ.prec() < 1 {
        return Err(Error::WindowTooSmall("constant term of the datum is not known".into()));
    }
    let (r, _) = artin_schreier_reduce(&germ)?;
    match r.valuation() {
        Some(v) if v < 0 => Ok(TorsorLocalData { m: -v, h: 0, ord: Some(v), trivial_locally: false }),
        _ => {
            let k = r.field();
            let trivial = k.trace(r.coeff(0)) == 0;
            Ok(TorsorLocalData { m: 0, h: 0, ord: r.valuation().filter(|&v| v <= 0), trivial_locally: trivial })
        }
    }
}

fn form_local(f: &CharPTorsor, x: &P1Point) -> Result<TorsorLocalData> {
    let (ord, res, k) = match f.differential()?.expect("mu_p and alpha_p carry a form") {
        AttachedForm::Rational(w) => {
            if w.is_zero() {
                return Ok(TorsorLocalData::TRIVIAL);
            }
            let k = match x {
                P1Point::Finite { field, .. } => field.clone(),
                P1Point::Infinity => f.field().clone(),
            };
            let ord = w.order(x)?;
            let res = if ord == -1 { w.residue(x)? } else { Fq::ZERO };
            (ord, res, k)
        }
        AttachedForm::Germ(w) => {
            check_germ_point(x)?;
            let Some(ord) = w.coefficient().valuation() else {
                return Ok(TorsorLocalData::TRIVIAL);
            };
            let res = if ord == -1 { w.residue()? } else { Fq::ZERO };
            (ord, res, w.field().clone())
        }
    };
    let m = -(ord + 1);
    let h = if m == 0 && f.kind == GroupSchemeKind::MuP { prime_residue(&k, res) } else { 0 };
    Ok(TorsorLocalData { m, h, ord: Some(ord), trivial_locally: false })
}

/// Outcome of testing `C(w) = w` (mu_p) or `C(w) = 0` (alpha_p).
#[derive(Clone, Debug, PartialEq)]
pub struct CartierVerdict {
    pub form: RationalDifferential,
    pub image: RationalDifferential,
    pub pass: bool,
}

pub fn cartier_class_check(f: &CharPTorsor) -> Result<CartierVerdict> {
    let Some(AttachedForm::Rational(form)) = f.differential()? else {
        return Err(Error::BadParameters("Cartier check needs a rational mu_p or alpha_p datum".into()));
    };
    let image = form.cartier();
    let pass = match f.kind {
        GroupSchemeKind::MuP => image == form,
        _ => image.is_zero(),
    };
    Ok(CartierVerdict { form, image, pass })
}
