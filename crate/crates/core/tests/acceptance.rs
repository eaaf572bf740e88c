//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p rankp-core --test acceptance`.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rankp_core::charp::{conductor_residue, CharPTorsor, GroupSchemeKind};
use rankp_core::degeneration::{
    different_degree_oracle, filtration_buckets, galois_equivariance_check, level_at_least, same_special_class,
    sp_homomorphism_check, specialize, ExtensionPolicy, SpecializationReport,
};
use rankp_core::fp::{Differential, FiniteField, Fq, LaurentSeries, P1Point, RationalFunction, Window};
use rankp_core::lifting::{lift_alpha_p, lift_etale, lift_mu_p, perturb_lift};
use rankp_core::padic::{AnnulusElement, LocalFieldTower, TowerElement};
use rankp_core::Error;

/// Wall-clock budgets.
const NORMAL_FORM_BUDGET: Duration = Duration::from_secs(5);
const SINGLE_CLASSIFICATION_BUDGET: Duration = Duration::from_millis(100);
const SUITE_BUDGET: Duration = Duration::from_secs(60);

/// Sample sizes.
const CARTIER_SAMPLES: usize = 1000;
const GALOIS_TORSORS: usize = 500;
const PAIR_SAMPLES: usize = 200;

const N: i64 = 32;
const SEED: u64 = 0x5eed_0001;

struct Outcome {
    pass: bool,
    detail: String,
}

fn window() -> Window {
    Window::default()
}

fn rand_fq(rng: &mut ChaCha8Rng, k: &FiniteField) -> Fq {
    Fq(rng.gen_range(0..k.order()))
}

fn rand_nonzero(rng: &mut ChaCha8Rng, k: &FiniteField) -> Fq {
    Fq(rng.gen_range(1..k.order()))
}

/// Random exact Laurent polynomial with nonzero leading term at `lo`.
fn rand_laurent(rng: &mut ChaCha8Rng, k: &FiniteField, lo: i64, hi: i64) -> LaurentSeries {
    let mut terms = vec![(lo, rand_nonzero(rng, k))];
    for e in lo + 1..=hi {
        if rng.gen_bool(0.5) {
            terms.push((e, rand_fq(rng, k)));
        }
    }
    LaurentSeries::from_terms(k, terms, rankp_core::fp::EXACT)
}

/// Random exact Laurent polynomial that is not a p-th power.
fn rand_non_pth(rng: &mut ChaCha8Rng, k: &FiniteField, lo: i64, hi: i64) -> LaurentSeries {
    loop {
        let s = rand_laurent(rng, k, lo, hi);
        if s.pth_root().is_err() {
            return s;
        }
    }
}

fn rand_tower_elt(rng: &mut ChaCha8Rng, t: &LocalFieldTower) -> TowerElement {
    let mut x = t.zero();
    for i in 0..3 {
        let c = t.lift(rand_fq(rng, t.residue_field()));
        x = x.add(&c.mul_pi_pow(i)).unwrap();
    }
    x
}

fn rand_annulus(rng: &mut ChaCha8Rng, t: &LocalFieldTower, lo: i64, hi: i64) -> AnnulusElement {
    let terms: Vec<_> = (lo..=hi).map(|e| (e, rand_tower_elt(rng, t))).collect();
    AnnulusElement::from_terms(t, terms, window()).unwrap()
}

fn one(t: &LocalFieldTower) -> AnnulusElement {
    AnnulusElement::one(t, window())
}

fn mono(c: &TowerElement, e: i64) -> AnnulusElement {
    AnnulusElement::monomial(c, e, window()).unwrap()
}

/// A random unit of random degeneration type.
fn rand_unit(rng: &mut ChaCha8Rng, t: &LocalFieldTower) -> AnnulusElement {
    let k = t.residue_field().clone();
    let p = t.p() as i64;
    let vl = t.v_lambda();
    let base = match rng.gen_range(0..3) {
        0 => lift_mu_p(t, &{ let lo = rng.gen_range(-4..=2); rand_non_pth(rng, &k, lo, 4) }, window()).unwrap(),
        1 => {
            let a = { let lo = rng.gen_range(-5..=-1); rand_non_pth(rng, &k, lo, 2) };
            lift_etale(t, &a, window()).unwrap()
        }
        _ => {
            let n = if vl > 1 { rng.gen_range(1..vl) } else { vl };
            let a = { let lo = rng.gen_range(-4..=1); rand_non_pth(rng, &k, lo, 3) };
            one(t).add(&AnnulusElement::lift_series(t, &a, window()).unwrap().mul_pi_pow(p * n)).unwrap()
        }
    };
    // higher-order noise that does not change the class type
    let noise = rand_annulus(rng, t, -1, 2).mul_pi_pow(p * vl + 1);
    base.mul(&one(t).add(&noise).unwrap()).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    let mut failures = Vec::new();
    let mut table_failures = Vec::new();
    let mut check = |label: String, r: Result<SpecializationReport, Error>, want: (GroupSchemeKind, i64, u32, i64)| {
        cases += 1;
        match r {
            Ok(r) if (r.kind, r.m, r.h, r.delta) == want => {}
            Ok(r) => failures.push(format!("{label}: got ({}, {}, {}, delta {})", r.kind, r.m, r.h, r.delta)),
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    };
    for p in [2u32, 3, 5] {
        let pi = p as i64;
        let t = LocalFieldTower::base(p, 1, N).unwrap();
        let vp = t.v_p();
        let coprime = |m: i64| m % pi != 0;
        for m in (-25..=-1).filter(|&m| coprime(m)) {
            let u = one(&t).add(&mono(&t.lambda().pow(p as u64), m)).unwrap();
            let r = specialize(&u, ExtensionPolicy::Off);
            if let Ok(r) = &r {
                if r.table_m != m {
                    table_failures.push(format!("p={p} etale m={m}: table m {}", r.table_m));
                }
            }
            check(format!("p={p} etale m={m}"), r, (GroupSchemeKind::EtaleZp, -m, 0, 0));
        }
        for h in (-25..=25).filter(|&h| coprime(h)) {
            let u = mono(&t.one(), h);
            check(format!("p={p} T^{h}"), specialize(&u, ExtensionPolicy::Off), (GroupSchemeKind::MuP, 0, h.rem_euclid(pi) as u32, vp));
        }
        for m in (1..=25).filter(|&m| coprime(m)) {
            let u = one(&t).add(&mono(&t.one(), m)).unwrap();
            check(format!("p={p} 1+T^{m}"), specialize(&u, ExtensionPolicy::Off), (GroupSchemeKind::MuP, -m, 0, vp));
        }
        let t2 = LocalFieldTower::new(p, 1, 2, N).unwrap();
        let n = 1;
        for m in (-25..=25).filter(|&m| m != 0 && coprime(m)) {
            let u = one(&t2).add(&mono(&t2.pi_pow(pi * n), m)).unwrap();
            let want = (GroupSchemeKind::AlphaP, -m, 0, t2.v_p() - n * (pi - 1));
            check(format!("p={p} c=2 1+pi^{}T^{m}", pi * n), specialize(&u, ExtensionPolicy::Off), want);
        }
    }
    let elapsed = start.elapsed();
    failures.extend(table_failures);
    let pass = failures.is_empty() && elapsed < NORMAL_FORM_BUDGET;
    Outcome { pass, detail: format!("{cases} normal forms, {} mismatches, {:.2?} {}", failures.len(), elapsed, failures.first().cloned().unwrap_or_default()) }
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let fields = [FiniteField::new(3, 1).unwrap(), FiniteField::new(2, 2).unwrap(), FiniteField::new(5, 2).unwrap()];
    let mut checks = 0;
    let mut failures = 0;
    for i in 0..CARTIER_SAMPLES {
        let k = &fields[i % fields.len()];
        let prec = 60;
        let u = { let lo = rng.gen_range(-6..=6); rand_laurent(&mut rng, k, lo, 12) }.truncate(prec);
        let w = Differential::dlog(&u).unwrap();
        let ok1 = w.cartier().agrees_with(&w);
        let a = { let lo = rng.gen_range(-12..=0); rand_laurent(&mut rng, k, lo, 12) };
        let ok2 = Differential::d(&a).cartier().is_zero();
        let w1 = Differential::new(rand_laurent(&mut rng, k, -10, 20).truncate(prec));
        let w2 = Differential::new(rand_laurent(&mut rng, k, -10, 20).truncate(prec));
        let ok3 = w1.add(&w2).unwrap().cartier().agrees_with(&w1.cartier().add(&w2.cartier()).unwrap());
        let g = rand_laurent(&mut rng, k, -3, 6);
        let lhs = w1.mul_function(&g.pth_power()).unwrap().cartier();
        let rhs = w1.cartier().mul_function(&g).unwrap();
        let ok4 = lhs.agrees_with(&rhs);
        checks += 4;
        failures += [ok1, ok2, ok3, ok4].iter().filter(|b| !**b).count();
    }
    Outcome { pass: failures == 0, detail: format!("{checks} identities over F3, F4, F25, {failures} failures") }
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 3);
    let mut checks = 0;
    let mut failures = 0;
    for i in 0..GALOIS_TORSORS {
        let p = [2u32, 3, 5][i % 3];
        let k = FiniteField::new(p, 2).unwrap();
        let tt = RationalFunction::t(&k);
        let roots: Vec<Fq> = (0..3).map(|_| rand_fq(&mut rng, &k)).collect();
        let kind = GroupSchemeKind::ALL[rng.gen_range(0..3)];
        let mut datum = RationalFunction::constant(&k, rand_nonzero(&mut rng, &k));
        for &r in &roots {
            let lin = tt.sub(&RationalFunction::constant(&k, r)).unwrap();
            let e = rng.gen_range(-4..=4);
            datum = match kind {
                GroupSchemeKind::MuP => datum.mul(&lin.pow(e).unwrap()).unwrap(),
                _ => datum.add(&lin.pow(e).unwrap().scale(rand_fq(&mut rng, &k))).unwrap(),
            };
        }
        let f = CharPTorsor::new(kind, rankp_core::charp::TorsorDatum::Rational(datum)).unwrap();
        let mut points: Vec<P1Point> = roots.iter().map(|&r| P1Point::finite(&k, r)).collect();
        points.push(P1Point::Infinity);
        points.push(P1Point::finite(&k, rand_fq(&mut rng, &k)));
        for j in 1..=2 {
            let g = f.frobenius_act(j);
            for x in &points {
                checks += 1;
                let a = conductor_residue(&f, x);
                let b = conductor_residue(&g, &x.frobenius(j));
                if a != b || a.is_err() {
                    failures += 1;
                }
            }
        }
    }
    Outcome { pass: failures == 0, detail: format!("{GALOIS_TORSORS} torsors over F_(p^2), {checks} point checks, {failures} failures") }
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let mut failures = 0;
    let mut errors = 0;
    for i in 0..PAIR_SAMPLES {
        let p = [2u32, 3, 5][i % 3];
        let t = LocalFieldTower::base(p, 1 + (i % 2) as u32, N).unwrap();
        let k = t.residue_field().clone();
        let mk = |rng: &mut ChaCha8Rng| {
            let ub = { let lo = rng.gen_range(-3..=3); rand_non_pth(rng, &k, lo, 4) };
            let u = lift_mu_p(&t, &ub, window()).unwrap();
            u.mul(&one(&t).add(&rand_annulus(rng, &t, -2, 2).mul_pi_pow(1)).unwrap()).unwrap()
        };
        let (u, v) = (mk(&mut rng), mk(&mut rng));
        match sp_homomorphism_check(&u, &v, ExtensionPolicy::Auto) {
            Ok(v) if v.pass => {}
            Ok(_) => failures += 1,
            Err(_) => errors += 1,
        }
    }
    Outcome { pass: failures == 0 && errors == 0, detail: format!("{PAIR_SAMPLES} pairs, {failures} failures, {errors} errors") }
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let mut checks = 0;
    let mut failures = 0;
    let mut errors = 0;
    for i in 0..PAIR_SAMPLES {
        let p = [2u32, 3, 5][i % 3];
        let c = 1 + (i / 3 % 2) as u32;
        let t = LocalFieldTower::new(p, 2, c, N).unwrap();
        let u = rand_unit(&mut rng, &t);
        for j in 0..2 {
            checks += 1;
            match galois_equivariance_check(j, &u, ExtensionPolicy::Auto) {
                Ok(v) if v.pass => {}
                Ok(_) => failures += 1,
                Err(_) => errors += 1,
            }
        }
    }
    Outcome { pass: failures == 0 && errors == 0, detail: format!("{checks} (unit, Frobenius power) checks, {failures} failures, {errors} errors") }
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut failures = Vec::new();
    let mut cases = 0;
    for i in 0..PAIR_SAMPLES {
        let p = [2u32, 3, 5][i % 3];
        let f = 1 + (i % 2) as u32;
        let base = LocalFieldTower::base(p, f, N).unwrap();
        let t2 = LocalFieldTower::new(p, f, 2, N).unwrap();
        let k = base.residue_field().clone();
        let origin = P1Point::origin(&k);
        for kind in GroupSchemeKind::ALL {
            cases += 1;
            let (tower, datum) = match kind {
                GroupSchemeKind::EtaleZp => (&base, { let lo = rng.gen_range(-6..=-1); rand_non_pth(&mut rng, &k, lo, 3) }),
                GroupSchemeKind::MuP => (&base, { let lo = rng.gen_range(-4..=4); rand_non_pth(&mut rng, &k, lo, 5) }),
                GroupSchemeKind::AlphaP => (&t2, { let lo = rng.gen_range(-4..=4); rand_non_pth(&mut rng, &k, lo, 5) }),
            };
            let u = match kind {
                GroupSchemeKind::EtaleZp => lift_etale(tower, &datum, window()),
                GroupSchemeKind::MuP => lift_mu_p(tower, &datum, window()),
                GroupSchemeKind::AlphaP => lift_alpha_p(tower, &datum, 1, window()),
            }
            .unwrap();
            let f_k = CharPTorsor::germ(kind, datum).unwrap();
            let expect = conductor_residue(&f_k, &origin).unwrap();
            let r = match specialize(&u, ExtensionPolicy::Off) {
                Ok(r) => r,
                Err(e) => {
                    failures.push(format!("{kind}: {e}"));
                    continue;
                }
            };
            let trivial_expected = expect.trivial_locally;
            let ok = r.kind == kind
                && (r.m, r.h) == (expect.m, expect.h)
                && r.trivial == trivial_expected
                && same_special_class(&r.special_fibre, &f_k, r.trivial);
            if !ok {
                failures.push(format!("{kind}: got ({}, {}, {}) want ({}, {})", r.kind, r.m, r.h, expect.m, expect.h));
                continue;
            }
            let pert_n = match kind {
                GroupSchemeKind::EtaleZp => None,
                GroupSchemeKind::MuP => Some(rng.gen_range(1..=tower.v_lambda())),
                GroupSchemeKind::AlphaP => Some(tower.v_lambda()),
            };
            if let Some(n) = pert_n {
                let up = perturb_lift(&u, n, &rand_annulus(&mut rng, tower, -2, 2)).unwrap();
                match specialize(&up, ExtensionPolicy::Off) {
                    Ok(rp) if rp.matches(&r) => {}
                    Ok(_) => failures.push(format!("{kind}: perturbed report differs")),
                    Err(e) => failures.push(format!("{kind} perturbed: {e}")),
                }
            }
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!("{cases} lifts, {} failures {}", failures.len(), failures.first().cloned().unwrap_or_default()),
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let mut failures = Vec::new();
    let mut oracle_checks = 0;
    for i in 0..PAIR_SAMPLES {
        let p = [2u32, 3, 5][i % 3];
        let c = 1 + (i / 3 % 2) as u32;
        let t = LocalFieldTower::new(p, 1 + (i % 2) as u32, c, N).unwrap();
        let u = rand_unit(&mut rng, &t);
        let k = t.residue_field().clone();
        let lo = rng.gen_range(-2..=2);
        let wbar = rand_laurent(&mut rng, &k, lo, 3);
        let w = lift_mu_p(&t, &wbar, window())
            .unwrap()
            .mul(&one(&t).add(&rand_annulus(&mut rng, &t, -2, 2).mul_pi_pow(1)).unwrap())
            .unwrap();
        let uw = u.mul(&w.pow(p as u64).unwrap()).unwrap();
        let (r0, r1) = match (specialize(&u, ExtensionPolicy::Auto), specialize(&uw, ExtensionPolicy::Auto)) {
            (Ok(a), Ok(b)) => (a, b),
            (a, b) => {
                failures.push(format!("classification error: {:?} / {:?}", a.err(), b.err()));
                continue;
            }
        };
        if !r0.matches(&r1) {
            failures.push(format!("class invariance p={p} c={c}: {:?} vs {:?}", (r0.kind, r0.n, r0.m), (r1.kind, r1.n, r1.m)));
        }
        for (x, r) in [(&u, &r0), (&uw, &r1)] {
            oracle_checks += 1;
            match different_degree_oracle(x, ExtensionPolicy::Auto) {
                Ok(o) if o.identity_holds && o.delta == r.delta => {}
                Ok(o) => failures.push(format!("oracle delta {} vs {} (identity {})", o.delta, r.delta, o.identity_holds)),
                Err(e) => failures.push(format!("oracle: {e}")),
            }
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!("{PAIR_SAMPLES} (u, w) pairs, {oracle_checks} oracle checks, {} failures {}", failures.len(), failures.first().cloned().unwrap_or_default()),
    }
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let mut failures = Vec::new();
    let mut checks = 0;
    for set in 0..12 {
        let p = [2u32, 3, 5][set % 3];
        let t = LocalFieldTower::new(p, 1, 2, N).unwrap();
        let units: Vec<AnnulusElement> = (0..6).map(|_| rand_unit(&mut rng, &t)).collect();
        let reports: Vec<SpecializationReport> = match units.iter().map(|u| specialize(u, ExtensionPolicy::Auto)).collect() {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("classification: {e}"));
                continue;
            }
        };
        for i in 0..units.len() {
            for j in i..units.len() {
                checks += 1;
                match specialize(&units[i].mul(&units[j]).unwrap(), ExtensionPolicy::Auto) {
                    Ok(r) => {
                        let (a, b) = (reports[i].normalized_level(), reports[j].normalized_level());
                        let lo = if level_at_least(a, b) { b } else { a };
                        if !level_at_least(r.normalized_level(), lo) {
                            failures.push(format!("level(uv) {:?} below min {:?}", r.normalized_level(), lo));
                        }
                    }
                    Err(e) => failures.push(format!("product: {e}")),
                }
            }
            checks += 1;
            match units[i].inv().and_then(|v| specialize(&v, ExtensionPolicy::Auto)) {
                Ok(r) => {
                    let (a, b) = (r.normalized_level(), reports[i].normalized_level());
                    if !(level_at_least(a, b) && level_at_least(b, a)) {
                        failures.push(format!("level(1/u) {a:?} vs {b:?}"));
                    }
                }
                Err(e) => failures.push(format!("inverse: {e}")),
            }
        }
        let buckets = filtration_buckets(&reports, t.v_lambda());
        let sizes: Vec<usize> = buckets.values().map(|b| b.len()).collect();
        checks += 1;
        if !buckets.values().zip(buckets.values().skip(1)).all(|(a, b)| b.iter().all(|x| a.contains(x))) {
            failures.push(format!("buckets do not nest: {sizes:?}"));
        }
        // base-change scaling
        for (u, r) in units.iter().zip(&reports) {
            let c = [2u32, 3][rng.gen_range(0..2)];
            checks += 1;
            match specialize(u, ExtensionPolicy::Fixed(c * r.extension)) {
                Ok(s) => {
                    let c = c as i64;
                    if !(s.same_type(r) && s.n == c * r.n && s.delta == c * r.delta) {
                        failures.push(format!("scaling by {c}: n {} -> {}, delta {} -> {}", r.n, s.n, r.delta, s.delta));
                    }
                }
                Err(e) => failures.push(format!("scaling: {e}")),
            }
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!("{checks} filtration checks, {} failures {}", failures.len(), failures.first().cloned().unwrap_or_default()),
    }
}

fn criterion_9(suite_elapsed: Duration) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut worst = Duration::ZERO;
    let mut errors = 0;
    for p in [2u32, 3, 5] {
        for c in [1u32, 2] {
            let t = LocalFieldTower::new(p, 1, c, N).unwrap();
            let k = t.residue_field().clone();
            let vl = t.v_lambda();
            let dense = |rng: &mut ChaCha8Rng| rand_non_pth(rng, &k, -60, 60);
            let mut inputs = vec![
                lift_mu_p(&t, &dense(&mut rng), window()).unwrap(),
                lift_etale(&t, &dense(&mut rng), window()).unwrap(),
                // reduction a p-th power: exercises the root-stripping path
                lift_mu_p(&t, &rand_laurent(&mut rng, &k, -6, 6).pth_power(), window())
                    .unwrap()
                    .mul(&lift_etale(&t, &rand_non_pth(&mut rng, &k, -30, 30), window()).unwrap())
                    .unwrap(),
            ];
            if vl > 1 {
                inputs.push(lift_alpha_p(&t, &dense(&mut rng), 1, window()).unwrap());
            }
            for u in inputs {
                let start = Instant::now();
                let r = specialize(&u, ExtensionPolicy::Auto);
                worst = worst.max(start.elapsed());
                errors += r.is_err() as usize;
            }
        }
    }
    let total = suite_elapsed + worst;
    Outcome {
        pass: worst < SINGLE_CLASSIFICATION_BUDGET && total < SUITE_BUDGET && errors == 0,
        detail: format!("worst single classification {worst:.2?} (N={N}, window -64:64), suite {total:.2?}, {errors} errors"),
    }
}

fn main() {
    let suite_start = Instant::now();
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("normal forms", criterion_1),
        ("Cartier identities", criterion_2),
        ("Galois invariance of conductor and residue", criterion_3),
        ("specialization homomorphism", criterion_4),
        ("Galois equivariance of specialization", criterion_5),
        ("lift round trips", criterion_6),
        ("Kummer-class invariance and different-degree oracle", criterion_7),
        ("filtration", criterion_8),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        all &= o.pass;
        println!("[{}] criterion {} {}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, name, o.detail);
    }
    let o = criterion_9(suite_start.elapsed());
    all &= o.pass;
    println!("[{}] criterion 9 performance: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    if !all {
        std::process::exit(1);
    }
}
