//! Lifting characteristic p torsors on the boundary to Kummer units over the
//! annulus. Lifts are coefficientwise and deliberately non-canonical.

use crate::charp::{CharPTorsor, GroupSchemeKind, TorsorDatum};
use crate::error::{Error, Result};
use crate::fp::{LaurentSeries, P1Point, Window};
use crate::padic::{AnnulusElement, LocalFieldTower};

/// `u = 1 + lambda^p a` for a lift `a` of the Artin-Schreier datum.
pub fn lift_etale(tower: &LocalFieldTower, abar: &LaurentSeries, window: Window) -> Result<AnnulusElement> {
    let a = AnnulusElement::lift_series(tower, abar, window)?;
    let p = tower.p() as i64;
    AnnulusElement::one(tower, window).add(&a.mul_pi_pow(p * tower.v_lambda()))
}

/// Any coefficientwise lift of a residue unit.
pub fn lift_mu_p(tower: &LocalFieldTower, ubar: &LaurentSeries, window: Window) -> Result<AnnulusElement> {
    if ubar.is_zero() {
        return Err(Error::NotAUnit);
    }
    AnnulusElement::lift_series(tower, ubar, window)
}

/// `u (1 + pi^(pn) u')`.
pub fn perturb_lift(u: &AnnulusElement, n: i64, u_prime: &AnnulusElement) -> Result<AnnulusElement> {
    let tower = u.tower();
    if n <= 0 || n > tower.v_lambda() {
        return Err(Error::BadN { n, v_lambda: tower.v_lambda() });
    }
    let p = tower.p() as i64;
    let factor = AnnulusElement::one(tower, u.window()).add(&u_prime.mul_pi_pow(p * n))?;
    u.mul(&factor)
}

/// `u = 1 + pi^(pn) a`, an `H_n`-torsor whose special fibre is `t^p = abar`.
pub fn lift_alpha_p(tower: &LocalFieldTower, abar: &LaurentSeries, n: i64, window: Window) -> Result<AnnulusElement> {
    let vl = tower.v_lambda();
    if n <= 0 || n >= vl {
        return Err(Error::NeedsRamifiedExtension { v_lambda: vl });
    }
    if abar.pth_root().is_ok() {
        return Err(Error::TrivialDatum);
    }
    let a = AnnulusElement::lift_series(tower, abar, window)?;
    let p = tower.p() as i64;
    AnnulusElement::one(tower, window).add(&a.mul_pi_pow(p * n))
}

/// A lift together with the ramified extension it needed.
#[derive(Clone, Debug)]
pub struct AdmissibleLift {
    pub kind: GroupSchemeKind,
    pub unit: AnnulusElement,
    pub extension: u32,
    pub n: i64,
}

/// The datum as a germ at the boundary point `t = 0`.
pub fn boundary_germ(f: &CharPTorsor, window: Window) -> Result<LaurentSeries> {
    match &f.datum {
        TorsorDatum::Germ(s) => Ok(s.clone()),
        TorsorDatum::Rational(r) if r.is_zero() => Ok(LaurentSeries::zero(r.field(), crate::fp::EXACT)),
        TorsorDatum::Rational(r) => r.local_expand(&P1Point::origin(r.field()), window.lo, window.hi),
    }
}

/// Lift `f`, extending the tower just enough for alpha_p data (`n < c v(lambda)`).
pub fn admissibility_report(tower: &LocalFieldTower, f: &CharPTorsor, n: i64, window: Window) -> Result<AdmissibleLift> {
    let germ = boundary_germ(f, window)?;
    if germ.field() != tower.residue_field() {
        return Err(Error::FieldMismatch);
    }
    match f.kind {
        GroupSchemeKind::EtaleZp => Ok(AdmissibleLift {
            kind: f.kind,
            unit: lift_etale(tower, &germ, window)?,
            extension: 1,
            n: tower.v_lambda(),
        }),
        GroupSchemeKind::MuP => Ok(AdmissibleLift { kind: f.kind, unit: lift_mu_p(tower, &germ, window)?, extension: 1, n: 0 }),
        GroupSchemeKind::AlphaP => {
            if n <= 0 {
                return Err(Error::BadN { n, v_lambda: tower.v_lambda() });
            }
            let vl = tower.v_lambda();
            let c = (n / vl + 1) as u32;
            let target = if c == 1 { tower.clone() } else { tower.ramified_base_change(c)?.0 };
            Ok(AdmissibleLift { kind: f.kind, unit: lift_alpha_p(&target, &germ, n, window)?, extension: c, n })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degeneration::{same_special_class, specialize, ExtensionPolicy};
    use crate::fp::{FiniteField, Fq, RationalFunction};

    fn w() -> Window {
        Window::default()
    }

    #[test]
    fn etale_round_trip() {
        let t = LocalFieldTower::base(3, 1, 32).unwrap();
        let k = t.residue_field();
        let a = LaurentSeries::monomial(k, Fq::ONE, -1);
        let u = lift_etale(&t, &a, w()).unwrap();
        let r = specialize(&u, ExtensionPolicy::Off).unwrap();
        assert_eq!((r.kind, r.m, r.h), (GroupSchemeKind::EtaleZp, 1, 0));
        let f = CharPTorsor::germ(GroupSchemeKind::EtaleZp, a).unwrap();
        assert!(same_special_class(&r.special_fibre, &f, false));
        assert_eq!(lift_etale(&t, &LaurentSeries::zero(k, crate::fp::EXACT), w()).unwrap(), AnnulusElement::one(&t, w()));
        // b^3 - b with b = t^-1 lifts to a trivial class
        let b = LaurentSeries::monomial(k, Fq::ONE, -1);
        let asb = b.pth_power().sub(&b).unwrap();
        assert!(specialize(&lift_etale(&t, &asb, w()).unwrap(), ExtensionPolicy::Off).unwrap().trivial);
    }

    #[test]
    fn mu_p_lift_and_perturbation() {
        let t = LocalFieldTower::base(3, 1, 32).unwrap();
        let k = t.residue_field();
        let u = lift_mu_p(&t, &LaurentSeries::monomial(k, Fq::ONE, 1), w()).unwrap();
        let r = specialize(&u, ExtensionPolicy::Off).unwrap();
        assert_eq!((r.kind, r.m, r.h), (GroupSchemeKind::MuP, 0, 1));
        let up = perturb_lift(&u, 1, &AnnulusElement::t(&t, w()).unwrap()).unwrap();
        assert!(specialize(&up, ExtensionPolicy::Off).unwrap().matches(&r));
    }

    #[test]
    fn alpha_p_needs_room() {
        let base = LocalFieldTower::base(3, 1, 32).unwrap();
        let k = base.residue_field().clone();
        let a = LaurentSeries::monomial(&k, Fq::ONE, 1);
        assert_eq!(lift_alpha_p(&base, &a, 1, w()).unwrap_err(), Error::NeedsRamifiedExtension { v_lambda: 1 });
        let t2 = LocalFieldTower::new(3, 1, 2, 32).unwrap();
        let u = lift_alpha_p(&t2, &a, 1, w()).unwrap();
        let r = specialize(&u, ExtensionPolicy::Off).unwrap();
        assert_eq!((r.kind, r.m, r.h, r.n), (GroupSchemeKind::AlphaP, -1, 0, 1));
        let cube = LaurentSeries::monomial(&k, Fq::ONE, 3);
        assert_eq!(lift_alpha_p(&t2, &cube, 1, w()).unwrap_err(), Error::TrivialDatum);
    }

    #[test]
    fn admissible_alpha_extends() {
        let base = LocalFieldTower::base(3, 1, 32).unwrap();
        let k = FiniteField::prime(3).unwrap();
        let f = CharPTorsor::alpha_p(RationalFunction::t(&k));
        let lift = admissibility_report(&base, &f, 1, w()).unwrap();
        assert_eq!(lift.extension, 2);
        let r = specialize(&lift.unit, ExtensionPolicy::Off).unwrap();
        assert_eq!((r.kind, r.m, r.h), (GroupSchemeKind::AlphaP, -1, 0));
    }
}
