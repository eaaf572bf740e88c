use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rankp_core::charp::{
    artin_schreier_reduce, cartier_class_check, conductor_residue, etale_germ_is_trivial, kummerian_check, CharPTorsor,
    GroupSchemeKind, TorsorDatum, TorsorLocalData,
};
use rankp_core::degeneration::{
    different_degree_oracle, filtration_buckets, galois_equivariance_check, same_special_class, specialize, ExtensionPolicy,
    SpecializationReport,
};
use rankp_core::fp::{FiniteField, Fq, LaurentSeries, P1Point, RationalDifferential, EXACT};
use rankp_core::lifting::{admissibility_report, boundary_germ, lift_etale, lift_mu_p};
use rankp_core::padic::{AnnulusElement, LocalFieldTower};
use rankp_core::{Error, Result};
use serde_json::{json, Map, Value};

use crate::ast::{Command, Mode};
use crate::eval::Context;

/// Outcome of one directive before it is wrapped in the output envelope.
pub enum Outcome {
    /// Informational result.
    Value(Value),
    /// Result carrying a pass/fail verdict.
    Verdict(bool, Value),
}

pub fn report_json(r: &SpecializationReport) -> Value {
    json!({
        "kind": r.kind.name(),
        "delta": r.delta,
        "n": r.n,
        "m": r.m,
        "h": r.h,
        "level": r.level,
        "ord": r.ord,
        "table_m": r.table_m,
        "trivial": r.trivial,
        "extension": r.extension,
        "v_p": r.v_p,
        "v_lambda": r.v_lambda,
        "special_fibre": r.special_fibre.datum.render("t"),
    })
}

fn local_json(point: &P1Point, kind: GroupSchemeKind, d: &TorsorLocalData) -> Value {
    json!({
        "point": render_point(point),
        "kind": kind.name(),
        "m": d.m,
        "h": d.h,
        "ord": d.ord,
        "trivial_locally": d.trivial_locally,
    })
}

fn render_point(x: &P1Point) -> String {
    match x {
        P1Point::Infinity => "inf".into(),
        P1Point::Finite { field, value } => field.format(*value),
    }
}

fn render_form(w: &RationalDifferential) -> String {
    let g = w.coefficient().render("t");
    if g.contains(' ') || g.contains('/') {
        format!("({g})*dt")
    } else {
        format!("{g}*dt")
    }
}

pub fn run_command(cmd: &Command, ctx: &Context, policy: ExtensionPolicy, seed: u64) -> Result<Outcome> {
    match cmd {
        Command::Classify(e) => Ok(Outcome::Value(report_json(&specialize(&ctx.unit(e)?, policy)?))),
        Command::Conductor(f, x) | Command::Residue(f, x) => {
            let f = ctx.torsor(f)?;
            let x = ctx.point(x)?;
            let d = conductor_residue(&f, &x)?;
            Ok(Outcome::Value(local_json(&x, f.kind, &d)))
        }
        Command::CartierCheck(f) => {
            let f = ctx.torsor(f)?;
            let v = cartier_class_check(&f)?;
            Ok(Outcome::Verdict(
                v.pass,
                json!({"pass": v.pass, "kind": f.kind.name(), "form": render_form(&v.form), "image": render_form(&v.image)}),
            ))
        }
        Command::AsReduce(a) => as_reduce(ctx, &ctx.charp(a)?),
        Command::Kummerian(name) => {
            let (cfg, torsors) = ctx.semistable(name)?;
            let r = kummerian_check(&cfg, &torsors)?;
            let nodes: Vec<Value> = r
                .nodes
                .iter()
                .map(|n| {
                    let ends: Vec<Value> = n
                        .ends
                        .iter()
                        .map(|d| json!({"m": d.m, "h": d.h, "ord": d.ord, "trivial_locally": d.trivial_locally}))
                        .collect();
                    json!({"node": n.node, "ends": ends, "conductor_sum": n.conductor_sum, "residue_sum": n.residue_sum, "ok": n.ok})
                })
                .collect();
            Ok(Outcome::Verdict(r.kummerian, json!({"pass": r.kummerian, "nodes": nodes})))
        }
        Command::Lift { kind, datum, n } => lift(ctx, *kind, &ctx.charp(datum)?, *n),
        Command::Filtration(us) => filtration(ctx, us, policy),
        Command::GaloisCheck { j, unit } => {
            let v = galois_equivariance_check(*j, &ctx.unit(unit)?, policy)?;
            Ok(Outcome::Verdict(
                v.pass,
                json!({"pass": v.pass, "j": j, "report": report_json(&v.reports[0]), "conjugate": report_json(&v.reports[1])}),
            ))
        }
        Command::Selftest(count) => selftest(ctx.tower()?, ctx, *count, seed),
    }
}

fn as_reduce(ctx: &Context, a: &rankp_core::fp::RationalFunction) -> Result<Outcome> {
    let w = ctx.window;
    let germ = if a.is_zero() {
        LaurentSeries::zero(&ctx.field, EXACT)
    } else {
        a.local_expand(&P1Point::origin(&ctx.field), w.lo, w.hi)?
    };
    let (reduced, witness) = artin_schreier_reduce(&germ)?;
    let trivial = etale_germ_is_trivial(&reduced)?;
    let conductor = match reduced.valuation() {
        Some(v) if v < 0 => -v,
        _ => 0,
    };
    Ok(Outcome::Value(json!({
        "germ": germ.render("t"),
        "reduced": reduced.render("t"),
        "witness": witness.render("t"),
        "conductor": conductor,
        "trivial": trivial,
    })))
}

fn lift(ctx: &Context, kind: GroupSchemeKind, datum: &rankp_core::fp::RationalFunction, n: Option<i64>) -> Result<Outcome> {
    let tower = ctx.tower()?;
    let f = CharPTorsor::new(kind, TorsorDatum::Rational(datum.clone()))?;
    let lifted = admissibility_report(tower, &f, n.unwrap_or(1), ctx.window)?;
    let unit = &lifted.unit;
    let rendered = unit.render();

    // reparse the rendered unit in the tower it lives in
    let reparsed = crate::parse_expression(&rendered, Mode::Mixed)
        .map_err(|e| Error::BadParameters(format!("rendered unit does not parse: {e}")))
        .and_then(|e| ctx.annulus(&e, unit.tower()))
        .map(|v| v.agrees_with(unit))
        .unwrap_or(false);

    let germ = CharPTorsor::germ(kind, boundary_germ(&f, ctx.window)?)?;
    let expected = conductor_residue(&germ, &P1Point::origin(&ctx.field))?;
    let r = specialize(unit, ExtensionPolicy::Off)?;
    let class = same_special_class(&r.special_fibre, &germ, r.trivial);
    let matches = if expected.trivial_locally {
        r.trivial
    } else {
        r.kind == kind && (r.m, r.h) == (expected.m, expected.h) && class
    };
    let pass = matches && reparsed;
    Ok(Outcome::Verdict(
        pass,
        json!({
            "pass": pass,
            "kind": kind.name(),
            "n": lifted.n,
            "extension": lifted.extension,
            "unit": rendered,
            "round_trip": {
                "reparsed": reparsed,
                "class_matches": class,
                "expected": {"m": expected.m, "h": expected.h, "trivial_locally": expected.trivial_locally},
                "report": report_json(&r),
            },
        }),
    ))
}

fn filtration(ctx: &Context, us: &[crate::ast::Expr], policy: ExtensionPolicy) -> Result<Outcome> {
    let vl = ctx.tower()?.v_lambda();
    let reports = us.iter().map(|e| specialize(&ctx.unit(e)?, policy)).collect::<Result<Vec<_>>>()?;
    let levels: Vec<Value> = reports
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let (num, den) = r.normalized_level();
            json!({"index": i, "kind": r.kind.name(), "n": r.n, "level": num, "v_lambda": den, "extension": r.extension})
        })
        .collect();
    let mut buckets = Map::new();
    for (n, members) in filtration_buckets(&reports, vl) {
        buckets.insert(n.to_string(), json!(members));
    }
    Ok(Outcome::Value(json!({"v_lambda": vl, "levels": levels, "buckets": buckets})))
}

fn rand_fq(rng: &mut ChaCha8Rng, k: &FiniteField, nonzero: bool) -> Fq {
    Fq(rng.gen_range(u32::from(nonzero)..k.order()))
}

fn rand_series(rng: &mut ChaCha8Rng, k: &FiniteField, lo: i64, hi: i64, non_pth: bool) -> LaurentSeries {
    loop {
        let mut terms = vec![(lo, rand_fq(rng, k, true))];
        terms.extend((lo + 1..=hi).map(|e| (e, rand_fq(rng, k, false))));
        let s = LaurentSeries::from_terms(k, terms, EXACT);
        if !non_pth || s.pth_root().is_err() {
            return s;
        }
    }
}

/// A random unit of mu_p, etale or (when v(lambda) > 1) alpha_p reduction type.
fn rand_unit(rng: &mut ChaCha8Rng, t: &LocalFieldTower, w: rankp_core::fp::Window) -> Result<AnnulusElement> {
    let k = t.residue_field().clone();
    let p = t.p() as i64;
    let vl = t.v_lambda();
    let lo = rng.gen_range(-4..=0);
    match rng.gen_range(0..if vl > 1 { 3 } else { 2 }) {
        0 => lift_mu_p(t, &rand_series(rng, &k, lo, 3, true), w),
        1 => lift_etale(t, &rand_series(rng, &k, lo - 1, 2, true), w),
        _ => {
            let n = rng.gen_range(1..vl);
            let a = AnnulusElement::lift_series(t, &rand_series(rng, &k, lo, 3, true), w)?;
            AnnulusElement::one(t, w).add(&a.mul_pi_pow(p * n))
        }
    }
}

/// Randomized invariance checks in the document's tower.
fn selftest(t: &LocalFieldTower, ctx: &Context, count: usize, seed: u64) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = ctx.window;
    let p = t.p() as u64;
    let policy = ExtensionPolicy::Auto;
    let mut checks = 0usize;
    let mut failures = Vec::new();
    for i in 0..count {
        let u = rand_unit(&mut rng, t, w)?;
        let lo = rng.gen_range(-2..=1);
        let wbar = rand_series(&mut rng, t.residue_field(), lo, 2, false);
        let wu = lift_mu_p(t, &wbar, w)?;
        let uw = u.mul(&wu.pow(p)?)?;
        checks += 1;
        match (specialize(&u, policy), specialize(&uw, policy)) {
            (Ok(a), Ok(b)) if a.matches(&b) => {}
            (Ok(_), Ok(_)) => failures.push(format!("sample {i}: class changed under u -> u w^p")),
            (Err(e), _) | (_, Err(e)) => failures.push(format!("sample {i}: {e}")),
        }
        checks += 1;
        match (different_degree_oracle(&u, policy), specialize(&u, policy)) {
            (Ok(o), Ok(r)) if o.identity_holds && o.delta == r.delta => {}
            (Ok(o), Ok(r)) => failures.push(format!("sample {i}: oracle delta {} vs {}", o.delta, r.delta)),
            (Err(e), _) | (_, Err(e)) => failures.push(format!("sample {i}: {e}")),
        }
        if t.f() > 1 {
            checks += 1;
            match galois_equivariance_check(1, &u, policy) {
                Ok(v) if v.pass => {}
                Ok(_) => failures.push(format!("sample {i}: Galois equivariance fails")),
                Err(e) => failures.push(format!("sample {i}: {e}")),
            }
        }
    }
    let pass = failures.is_empty();
    Ok(Outcome::Verdict(
        pass,
        json!({"pass": pass, "seed": seed, "samples": count, "checks": checks, "failures": failures.len(), "first_failure": failures.first()}),
    ))
}
