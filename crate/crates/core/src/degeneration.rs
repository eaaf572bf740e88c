//! Degeneration of mu_p-torsors `Z^p = u` over the annulus: normalization of
//! Kummer units, the specialization report, and the filtration by level.

use std::collections::BTreeMap;

use crate::charp::{artin_schreier_reduce, conductor_residue, etale_germ_is_trivial, CharPTorsor, GroupSchemeKind};
use crate::error::{Error, Result};
use crate::fp::{Fq, LaurentSeries, P1Point, Window};
use crate::padic::{AnnulusElement, LocalFieldTower, TowerElement};

/// How to react when a unit only normalizes after a ramified extension.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExtensionPolicy {
    #[default]
    Off,
    Auto,
    Fixed(u32),
}

fn check_n(tower: &LocalFieldTower, n: i64) -> Result<()> {
    if n <= 0 || n > tower.v_lambda() {
        return Err(Error::BadN { n, v_lambda: tower.v_lambda() });
    }
    Ok(())
}

/// Coefficients of `phi_n(x) = ((pi^n x + 1)^p - 1) / pi^(pn)`, from `x^1` to `x^p`.
pub fn phi_coefficients(tower: &LocalFieldTower, n: i64) -> Result<Vec<TowerElement>> {
    check_n(tower, n)?;
    let p = tower.p() as i64;
    let mut binom = 1i64;
    let mut out = Vec::new();
    for k in 1..=p {
        binom = binom * (p - k + 1) / k;
        out.push(tower.from_int(binom).div_pi_pow(n * (p - k))?);
    }
    Ok(out)
}

pub fn phi_n(tower: &LocalFieldTower, n: i64, x: &TowerElement) -> Result<TowerElement> {
    let coeffs = phi_coefficients(tower, n)?;
    let mut acc = tower.zero();
    for c in coeffs.iter().rev() {
        acc = acc.add(c)?.mul(x)?;
    }
    Ok(acc)
}

/// Reduction of `phi_n` modulo pi, as a polynomial over the residue field
/// (low degree first, constant term included).
pub fn special_fibre_of_phi(tower: &LocalFieldTower, n: i64) -> Result<Vec<Fq>> {
    let mut poly = vec![Fq::ZERO];
    poly.extend(phi_coefficients(tower, n)?.iter().map(|c| c.residue()));
    Ok(poly)
}

/// Normal form of a Kummer unit after multiplying by p-th powers.
#[derive(Clone, Debug)]
pub enum NormalForm {
    /// Reduction is not a p-th power.
    MuP { ubar: LaurentSeries },
    /// `u = 1 + pi^(pn) a` with `a` not a p-th power mod pi (or `n = v(lambda)`).
    Hn { n: i64, a: AnnulusElement, abar: LaurentSeries },
    /// `u - 1` vanishes beyond `p v(lambda)`: a p-th power.
    Trivial,
}

/// Result of normalization: `u * multiplier^p = pi^(p alpha) T^(p beta) residual`.
#[derive(Clone, Debug)]
pub struct Normalization {
    pub form: NormalForm,
    pub alpha: i64,
    pub beta: i64,
    pub multiplier: AnnulusElement,
    pub residual: AnnulusElement,
    pub steps: usize,
}

fn finite_inv(s: &LaurentSeries, hi: i64) -> Result<LaurentSeries> {
    if s.is_exact() && s.degree() != s.valuation() {
        s.truncate(hi + 1).inv()
    } else {
        s.inv()
    }
}

fn residue_or_zero(a: &AnnulusElement) -> Result<LaurentSeries> {
    match a.reduce_mod_pi() {
        Err(Error::PositivePiContent) => Ok(LaurentSeries::zero(a.tower().residue_field(), a.t_prec())),
        r => r,
    }
}

/// Normalize `u` in its own tower; never extends.
pub fn normalize_kummer_unit(u: &AnnulusElement) -> Result<Normalization> {
    let tower = u.tower().clone();
    let window = u.window();
    let p = tower.p() as i64;
    let vl = tower.v_lambda();
    let content = u
        .pi_content()
        .ok_or_else(|| Error::PrecisionExhausted("unit vanishes modulo pi^N".into()))?;
    if content % p != 0 {
        return Err(Error::RamifiedInputContent { content });
    }
    let alpha = content / p;
    let mut cur = u.div_pi_pow(content)?;
    let ubar = cur.reduce_mod_pi()?;
    let d = ubar.valuation().expect("unit has nonzero reduction");
    let beta = d.div_euclid(p);
    cur = cur.shift(-p * beta)?;
    let ubar = ubar.shift(-p * beta);
    let one = AnnulusElement::one(&tower, window);
    let mut multiplier = one.clone();

    let root = match ubar.pth_root() {
        Err(_) => {
            return Ok(Normalization { form: NormalForm::MuP { ubar }, alpha, beta, multiplier, residual: cur, steps: 0 })
        }
        Ok(r) => r,
    };
    let m0 = AnnulusElement::lift_series(&tower, &finite_inv(&root, window.hi)?, window)?;
    cur = cur.mul(&m0.pow(p as u64)?)?;
    multiplier = m0;

    let max_steps = (p * vl + 2) as usize;
    for step in 1..=max_steps {
        let w = cur.sub(&one)?;
        let prec = cur.pi_prec();
        let Some(s) = w.pi_content() else {
            if prec > p * vl {
                return Ok(Normalization { form: NormalForm::Trivial, alpha, beta, multiplier, residual: cur, steps: step });
            }
            return Err(Error::PrecisionExhausted(format!(
                "unit is 1 modulo pi^{prec}, which does not reach p v(lambda) = {}",
                p * vl
            )));
        };
        if s >= p * vl {
            let a = w.div_pi_pow(p * vl)?;
            let abar = residue_or_zero(&a)?;
            return Ok(Normalization {
                form: NormalForm::Hn { n: vl, a, abar },
                alpha,
                beta,
                multiplier,
                residual: cur,
                steps: step,
            });
        }
        if s % p != 0 {
            return Err(Error::ExtensionRequired { c: (p / gcd(s, p)) as u32 });
        }
        let n = s / p;
        let a = w.div_pi_pow(s)?;
        let abar = a.reduce_mod_pi()?;
        match abar.pth_root() {
            Err(_) => {
                return Ok(Normalization {
                    form: NormalForm::Hn { n, a, abar },
                    alpha,
                    beta,
                    multiplier,
                    residual: cur,
                    steps: step,
                })
            }
            Ok(r) => {
                // (1 - pi^n r)^p = 1 - pi^(pn) r^p + (terms of valuation > pn)
                let lift = AnnulusElement::lift_series(&tower, &r, window)?;
                let factor = one.sub(&lift.mul_pi_pow(n))?;
                cur = cur.mul(&factor.pow(p as u64)?)?;
                multiplier = multiplier.mul(&factor)?;
            }
        }
    }
    Err(Error::PrecisionExhausted("normalization did not stabilize".into()))
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Specialization of the torsor `Z^p = u` to the special fibre.
#[derive(Clone, Debug)]
pub struct SpecializationReport {
    pub kind: GroupSchemeKind,
    pub n: i64,
    pub delta: i64,
    /// Germ on the boundary `k((t))`.
    pub special_fibre: CharPTorsor,
    pub m: i64,
    pub h: u32,
    /// Defining order at the boundary point.
    pub ord: Option<i64>,
    /// Exponent of the normal form; differs from `m` in sign for etale type.
    pub table_m: i64,
    pub trivial: bool,
    pub level: i64,
    /// Ramification factor applied to the input tower.
    pub extension: u32,
    pub v_p: i64,
    pub v_lambda: i64,
}

impl SpecializationReport {
    /// Level as a fraction of `v(lambda)`, comparable across extensions.
    pub fn normalized_level(&self) -> (i64, i64) {
        (self.level, self.v_lambda)
    }

    fn scalars(&self) -> (GroupSchemeKind, i64, i64, i64, u32, i64, bool, i64, i64, i64) {
        (self.kind, self.n, self.delta, self.m, self.h, self.table_m, self.trivial, self.level, self.v_p, self.v_lambda)
    }

    /// Equal scalar data and equal special-fibre classes.
    pub fn matches(&self, other: &Self) -> bool {
        self.scalars() == other.scalars() && same_special_class(&self.special_fibre, &other.special_fibre, self.trivial)
    }

    /// Same type data ignoring scaling by extensions.
    pub fn same_type(&self, other: &Self) -> bool {
        (self.kind, self.m, self.h, self.trivial) == (other.kind, other.m, other.h, other.trivial)
    }
}

fn germ(f: &CharPTorsor) -> &LaurentSeries {
    match &f.datum {
        crate::charp::TorsorDatum::Germ(s) => s,
        crate::charp::TorsorDatum::Rational(_) => unreachable!("special fibres are germs"),
    }
}

/// Class equality of two special-fibre germs of the same kind.
pub fn same_special_class(a: &CharPTorsor, b: &CharPTorsor, trivial: bool) -> bool {
    if a.kind != b.kind {
        return false;
    }
    if trivial {
        return true;
    }
    let (x, y) = (germ(a), germ(b));
    match a.kind {
        GroupSchemeKind::EtaleZp => x.sub(y).and_then(|d| etale_germ_is_trivial(&d)).unwrap_or(false),
        GroupSchemeKind::AlphaP => x.sub(y).map(|d| d.pth_root().is_ok()).unwrap_or(false),
        GroupSchemeKind::MuP => {
            let hi = x.prec().min(y.prec()).min(x.degree().unwrap_or(0).max(y.degree().unwrap_or(0)) + 1);
            finite_inv(y, hi - 1)
                .and_then(|yi| x.mul(&yi))
                .map(|r| r.pth_root().is_ok())
                .unwrap_or(false)
        }
    }
}

fn extend(u: &AnnulusElement, c: u32) -> Result<AnnulusElement> {
    if c == 1 {
        return Ok(u.clone());
    }
    let (_, emb) = u.tower().ramified_base_change(c)?;
    u.map(&emb)
}

/// Normalize, extending the tower as the policy allows. Returns the unit in
/// its final tower, the factor applied and the normalization.
pub fn normalize_with_policy(u: &AnnulusElement, policy: ExtensionPolicy) -> Result<(AnnulusElement, u32, Normalization)> {
    let mut factor = match policy {
        ExtensionPolicy::Fixed(c) if c == 0 => return Err(Error::BadParameters("extension factor must be positive".into())),
        ExtensionPolicy::Fixed(c) => c,
        _ => 1,
    };
    let mut cur = extend(u, factor)?;
    loop {
        match normalize_kummer_unit(&cur) {
            Err(Error::ExtensionRequired { c }) if policy == ExtensionPolicy::Auto && factor * c <= 64 => {
                cur = extend(&cur, c)?;
                factor *= c;
            }
            Err(e) => return Err(e),
            Ok(nz) => return Ok((cur, factor, nz)),
        }
    }
}

/// Extra working windows tried when the boundary datum loses its T-precision.
const WIDENINGS: u32 = 3;

/// Normalize and report, widening the working window on the right when
/// negative tails of the multipliers eat the known T-precision.
fn classify(u: &AnnulusElement, policy: ExtensionPolicy) -> Result<(AnnulusElement, u32, Normalization, SpecializationReport)> {
    let base = u.window();
    let width = base.hi - base.lo;
    let mut work = u.clone();
    for k in 0..=WIDENINGS {
        let attempt = normalize_with_policy(&work, policy)
            .and_then(|(cur, ext, nz)| report_from(&cur, ext, &nz).map(|r| (cur, ext, nz, r)));
        match attempt {
            Err(Error::WindowTooSmall(_)) if k < WIDENINGS && u.t_prec() > base.hi + 1 => {
                work = u.with_window(Window { lo: base.lo, hi: base.hi + (width << k) })?;
            }
            r => return r,
        }
    }
    unreachable!("the last widening returns")
}

pub fn specialize(u: &AnnulusElement, policy: ExtensionPolicy) -> Result<SpecializationReport> {
    classify(u, policy).map(|(_, _, _, r)| r)
}

fn report_from(u: &AnnulusElement, extension: u32, nz: &Normalization) -> Result<SpecializationReport> {
    let tower = u.tower();
    let k = tower.residue_field();
    let p = tower.p() as i64;
    let (v_p, vl) = (tower.v_p(), tower.v_lambda());
    let origin = P1Point::origin(k);
    let report = |kind, n: i64, germ_: LaurentSeries, trivial: bool| -> Result<SpecializationReport> {
        let special_fibre = CharPTorsor::germ(kind, germ_)?;
        let local = if trivial { crate::charp::TorsorLocalData::TRIVIAL } else { conductor_residue(&special_fibre, &origin)? };
        let table_m = if kind == GroupSchemeKind::EtaleZp { -local.m } else { local.m };
        Ok(SpecializationReport {
            kind,
            n,
            delta: v_p - n * (p - 1),
            special_fibre,
            m: local.m,
            h: local.h,
            ord: local.ord,
            table_m,
            trivial,
            level: if trivial { vl } else { n },
            extension,
            v_p,
            v_lambda: vl,
        })
    };
    match &nz.form {
        NormalForm::MuP { ubar } => report(GroupSchemeKind::MuP, 0, ubar.clone(), false),
        NormalForm::Trivial => report(GroupSchemeKind::EtaleZp, vl, LaurentSeries::zero(k, crate::fp::EXACT), true),
        NormalForm::Hn { n, abar, .. } if *n == vl => {
            let trivial = abar.is_zero() || etale_germ_is_trivial(abar)?;
            let germ_ = if trivial { abar.clone() } else { artin_schreier_reduce(abar)?.0 };
            report(GroupSchemeKind::EtaleZp, vl, germ_, trivial)
        }
        NormalForm::Hn { n, abar, .. } => report(GroupSchemeKind::AlphaP, *n, abar.clone(), false),
    }
}

/// Verdict of a property check together with the reports it compared.
#[derive(Clone, Debug)]
pub struct CheckVerdict {
    pub pass: bool,
    pub reports: Vec<SpecializationReport>,
}

/// Special fibre of `uv` against the product of the special fibres.
pub fn sp_homomorphism_check(u: &AnnulusElement, v: &AnnulusElement, policy: ExtensionPolicy) -> Result<CheckVerdict> {
    let ru = specialize(u, policy)?;
    let rv = specialize(v, policy)?;
    for r in [&ru, &rv] {
        if r.kind != GroupSchemeKind::MuP {
            return Err(Error::BadParameters("homomorphism check needs units of mu_p reduction".into()));
        }
    }
    let ruv = specialize(&u.mul(v)?, policy)?;
    let hi = u.window().hi;
    let prod = germ(&ru.special_fibre).mul(germ(&rv.special_fibre))?;
    let ratio = if ruv.kind == GroupSchemeKind::MuP { prod.mul(&finite_inv(germ(&ruv.special_fibre), hi)?)? } else { prod };
    let pass = ratio.pth_root().is_ok();
    Ok(CheckVerdict { pass, reports: vec![ru, rv, ruv] })
}

/// `Sp(u^sigma)` against `Sp(u)^sigma` for the Frobenius power `sigma^j`.
pub fn galois_equivariance_check(j: i64, u: &AnnulusElement, policy: ExtensionPolicy) -> Result<CheckVerdict> {
    let r0 = specialize(u, policy)?;
    let r1 = specialize(&u.frobenius(j), policy)?;
    let moved = r0.special_fibre.frobenius_act(j);
    let pass = r0.scalars() == r1.scalars() && same_special_class(&moved, &r1.special_fibre, r0.trivial);
    Ok(CheckVerdict { pass, reports: vec![r0, r1] })
}

pub fn filtration_level(u: &AnnulusElement, policy: ExtensionPolicy) -> Result<SpecializationReport> {
    specialize(u, policy)
}

/// Level `a/b >= c/d` for normalized levels.
pub fn level_at_least(x: (i64, i64), y: (i64, i64)) -> bool {
    x.0 * y.1 >= y.0 * x.1
}

/// Bucket `n` (for `n = 0..=v(lambda)` of the input tower) holds the indices
/// whose normalized level is at least `n / v(lambda)`.
pub fn filtration_buckets(reports: &[SpecializationReport], v_lambda: i64) -> BTreeMap<i64, Vec<usize>> {
    (0..=v_lambda)
        .map(|n| {
            let members =
                reports.iter().enumerate().filter(|(_, r)| level_at_least(r.normalized_level(), (n, v_lambda))).map(|(i, _)| i).collect();
            (n, members)
        })
        .collect()
}

/// Different degree recomputed from tower arithmetic after checking the
/// normalization identity `u M^p = pi^(p alpha) T^(p beta) residual`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleOutcome {
    pub delta: i64,
    pub identity_holds: bool,
}

pub fn different_degree_oracle(u: &AnnulusElement, policy: ExtensionPolicy) -> Result<OracleOutcome> {
    let (cur, _, nz, _) = classify(u, policy)?;
    let tower = cur.tower().clone();
    let p = tower.p() as i64;
    let lhs = cur.mul(&nz.multiplier.pow(p as u64)?)?;
    let rhs = nz.residual.mul_pi_pow(p * nz.alpha).shift(p * nz.beta)?;
    let mut identity_holds = lhs.agrees_with(&rhs);
    let n = match &nz.form {
        NormalForm::MuP { .. } => 0,
        NormalForm::Trivial => tower.v_lambda(),
        NormalForm::Hn { n, a, .. } => {
            let one = AnnulusElement::one(&tower, cur.window());
            let rebuilt = one.add(&a.mul_pi_pow(p * n))?;
            identity_holds &= rebuilt.agrees_with(&nz.residual);
            *n
        }
    };
    // derivative of the normalized equation in the new variable at a unit:
    // p Z^(p-1) for n = 0, otherwise the linear coefficient of phi_n
    let delta = if n == 0 {
        tower.from_int(p).valuation_checked()?
    } else {
        phi_coefficients(&tower, n)?[0].valuation_checked()?
    };
    Ok(OracleOutcome { delta, identity_holds })
}
