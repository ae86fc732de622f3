//! The twelve end-to-end criteria, each a list of independent checks with a time budget.

use std::time::{Duration, Instant};

use habiro::glued::RelativePrecision;
use habiro::{ladder, nakayama_probe, resolution_window_check, EtaleAlgebraSpec, HabiroPrecision, Presentation};
use num_bigint::BigInt;
use qcomplex::{bockstein, build_complex, cohomology_mod, frobenius_transition, rational_qpartial, Base, Flavor, ToricAlgebraSpec};
use qcore::arith::divisors;
use qcore::qanalog::{cyclotomic, q_power_minus_one};
use qcore::ZqPoly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::oracle::two_term_cohomology;
use crate::report::{run_jobs, CheckRecord, Job};
use crate::suites::{decalage_jobs, delta_jobs, qpd_jobs, relative_checks, DeltaParams, QpdParams};

pub struct Criterion {
    pub number: u8,
    pub title: &'static str,
    pub budget: Duration,
    pub jobs: fn() -> Vec<Job>,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub number: u8,
    pub title: &'static str,
    pub checks: Vec<CheckRecord>,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl Outcome {
    pub fn checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn within_budget(&self) -> bool {
        self.elapsed < self.budget
    }

    pub fn pass(&self) -> bool {
        self.checks_pass() && self.within_budget()
    }

    pub fn failed_ids(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.id.as_str()).collect()
    }
}

pub fn criteria() -> Vec<Criterion> {
    let c = |number, title, secs, jobs| Criterion { number, title, budget: Duration::from_secs(secs), jobs };
    vec![
        c(1, "cyclotomic factorisation, m <= 200", 5, c1),
        c(2, "delta-ring identities, p in {2,3,5,7}", 30, c2),
        c(3, "decomposition witnesses", 60, c3),
        c(4, "lift certificates and the alpha = 1 obstruction", 60, c4),
        c(5, "Nygaard ideal and factorial unit ratio", 30, c5),
        c(6, "one-variable cohomology against the naive oracle", 120, c6),
        c(7, "decalage of q-Hodge is q-de Rham", 60, c7),
        c(8, "Bockstein and Frobenius transitions", 60, c8),
        c(9, "Habiro equaliser on random polynomials", 60, c9),
        c(10, "relative Habiro rings and q-Witt comparison", 120, c10),
        c(11, "ladder resolution and Nakayama probes", 30, c11),
        c(12, "rational q-derivative operator", 10, c12),
    ]
}

pub fn run(c: &Criterion) -> Outcome {
    let t = Instant::now();
    let checks = run_jobs((c.jobs)());
    Outcome { number: c.number, title: c.title, checks, elapsed: t.elapsed(), budget: c.budget }
}

fn c1() -> Vec<Job> {
    vec![Box::new(|| {
        let bad: Vec<u64> = (1..=200u64)
            .filter(|&m| {
                let prod = divisors(m).into_iter().fold(ZqPoly::one(), |acc, d| &acc * &cyclotomic(d));
                // q^m - 1 written out directly
                prod != &ZqPoly::monomial(1, m as i64) - &ZqPoly::one()
            })
            .collect();
        CheckRecord::new("cyclotomic_product/m<=200", bad.is_empty()).detail(if bad.is_empty() { json!({ "m_max": 200 }) } else { json!({ "failing_m": bad }) })
    })]
}

fn c2() -> Vec<Job> {
    delta_jobs(&DeltaParams {
        primes: vec![2, 3, 5, 7],
        trunc: 8,
        pairs: 100,
        pair_trunc: 4,
        seed: 2024,
        witness_depth: 0,
        witness_primes: vec![],
        witness_q_primes: vec![],
        budget: 40,
    })
}

fn c3() -> Vec<Job> {
    delta_jobs(&DeltaParams {
        primes: vec![],
        trunc: 8,
        pairs: 0,
        pair_trunc: 4,
        seed: 0,
        witness_depth: 2,
        witness_primes: vec![2, 3, 5],
        witness_q_primes: vec![2, 3],
        budget: 40,
    })
}

fn c4() -> Vec<Job> {
    qpd_jobs(&QpdParams {
        alphas: vec![2, 3],
        primes: vec![2, 3, 5],
        obstruction_primes: vec![2, 3, 5],
        nygaard_primes: vec![],
        nygaard_max_n: 0,
        unit_primes: vec![],
        unit_max_n: 0,
    })
}

fn c5() -> Vec<Job> {
    qpd_jobs(&QpdParams {
        alphas: vec![],
        primes: vec![],
        obstruction_primes: vec![],
        nygaard_primes: vec![2, 3],
        nygaard_max_n: 3,
        unit_primes: vec![2, 3, 5, 7],
        unit_max_n: 6,
    })
}

fn c6() -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    for flavor in [Flavor::QHodge, Flavor::QDeRham] {
        for kk in 1..=2u32 {
            for m in 1..=12u64 {
                jobs.push(Box::new(move || {
                    let id = format!("oracle/{flavor}/m={m}/k={kk}");
                    let table = ToricAlgebraSpec::new(vec![true], vec![(-12, 12)])
                        .and_then(|s| build_complex(&s, flavor, Base::Polynomial))
                        .and_then(|k| cohomology_mod(&k, m, kk));
                    let t = match table {
                        Ok(t) => t,
                        Err(e) => return CheckRecord::error(id, e),
                    };
                    for a in -12i64..=12 {
                        let s = qcomplex::complex::scalar(flavor, a);
                        let (h0, h1) = two_term_cohomology(&s, m as usize, kk as usize);
                        for (j, want) in [(0usize, h0), (1, h1)] {
                            let Some(e) = t.get(&[a], j) else {
                                return CheckRecord::new(id, false).detail(json!({ "missing": [a, j] }));
                            };
                            let mut got: Vec<BigInt> = e.torsion.clone();
                            got.sort();
                            let mut w = want.1.clone();
                            w.sort();
                            if e.free_rank != want.0 || got != w {
                                return CheckRecord::new(id, false).detail(json!({
                                    "a": a, "j": j,
                                    "table": { "free_rank": e.free_rank, "torsion": got.iter().map(|x| x.to_string()).collect::<Vec<_>>() },
                                    "oracle": { "free_rank": want.0, "torsion": w.iter().map(|x| x.to_string()).collect::<Vec<_>>() },
                                }));
                            }
                        }
                    }
                    CheckRecord::new(id, true).detail(json!({ "multidegrees": 25 }))
                }));
            }
        }
    }
    jobs
}

fn c7() -> Vec<Job> {
    let mut jobs = decalage_jobs(1, 6, 3);
    jobs.extend(decalage_jobs(2, 6, 3));
    jobs
}

fn c8() -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    for flavor in [Flavor::QHodge, Flavor::QDeRham] {
        for m in 1..=4u64 {
            jobs.push(Box::new(move || {
                let id = format!("beta_squared/{flavor}/m={m}");
                let r = ToricAlgebraSpec::symmetric(vec![true, true], 3)
                    .and_then(|s| build_complex(&s, flavor, Base::Polynomial))
                    .and_then(|k| bockstein(&k, m));
                match r {
                    Ok(t) => CheckRecord::new(id, t.beta_squared_zero == Some(true)),
                    Err(e) => CheckRecord::error(id, e),
                }
            }));
        }
    }
    jobs.push(Box::new(|| {
        let id = "beta_is_k_at_level_one";
        let r = ToricAlgebraSpec::new(vec![true], vec![(-12, 12)])
            .and_then(|s| build_complex(&s, Flavor::QHodge, Base::Polynomial))
            .and_then(|k| bockstein(&k, 1));
        let t = match r {
            Ok(t) => t,
            Err(e) => return CheckRecord::error(id, e),
        };
        for k in -12i64..=12 {
            let b = t.get(&[k], 0).and_then(|e| e.bockstein_matrix.clone());
            let ok = b.as_ref().is_some_and(|b| b.rows() == 1 && b.cols() == 1 && b[(0, 0)] == BigInt::from(k));
            if !ok {
                return CheckRecord::new(id, false).detail(json!({ "k": k, "matrix": b.map(|b| qcomplex::cohomology::matrix_strings(&b)) }));
            }
        }
        CheckRecord::new(id, t.beta_squared_zero == Some(true)).detail(json!({ "k_range": [-12, 12] }))
    }));
    for (m, d) in [(2u64, 1u64), (4, 2), (6, 3), (6, 2)] {
        for n in [1usize, 2] {
            jobs.push(Box::new(move || {
                let id = format!("intertwining/n={n}/m={m}/d={d}");
                let r = ToricAlgebraSpec::symmetric(vec![true; n], if n == 1 { 6 } else { 2 })
                    .and_then(|s| build_complex(&s, Flavor::QHodge, Base::Polynomial))
                    .and_then(|k| frobenius_transition(&k, m, d));
                match r {
                    Ok(t) => CheckRecord::new(id, t.intertwining_holds).detail(json!({ "maps": t.maps.len() })),
                    Err(e) => CheckRecord::error(id, e),
                }
            }));
        }
    }
    jobs
}

fn c9() -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    for i in 0..50u64 {
        jobs.push(Box::new(move || {
            let mut rng = ChaCha8Rng::seed_from_u64(900 + i);
            let deg = rng.gen_range(0..=20usize);
            let f = ZqPoly::from_coeffs((0..=deg).map(|_| rng.gen_range(-50i64..=50)).collect());
            let a = 1 + (i % 5) as u32;
            let top = [6u64, 8][i as usize % 2];
            let index: Vec<u64> = (1..=top).collect();
            let prec = HabiroPrecision { primes: vec![2, 3], a, n: 3 };
            let id = format!("equaliser/{i}");
            let e = match habiro::habiro_from_poly(&f, &index, &prec) {
                Ok(e) => e,
                Err(err) => return CheckRecord::error(id, err),
            };
            if !e.is_valid() {
                let bad: Vec<_> = e.ledger.iter().filter(|r| !r.pass).map(|r| json!({ "p": r.p, "m": r.m })).collect();
                return CheckRecord::new(id, false).detail(json!({ "f": f.to_string(), "failing": bad }));
            }
            // negative control: corrupt one coefficient of a component read by some check
            let m = [2u64, 3, 4, 6][rng.gen_range(0..4usize)];
            let k = rng.gen_range(0..3usize);
            let old = e.components[&m].coeffs()[k].rep().clone();
            let bad = match e.corrupt(m, k, &(&old + &ZqPoly::one())) {
                Ok(b) => b,
                Err(err) => return CheckRecord::error(id, err),
            };
            let touched: Vec<_> = bad.ledger.iter().filter(|r| r.m == m || r.m * r.p == m).collect();
            let located = !touched.is_empty()
                && touched.iter().all(|r| !r.pass)
                && touched.iter().filter(|r| r.m == m).all(|r| r.first_difference == Some(k));
            let caught = !bad.is_valid() && located;
            CheckRecord::new(id, caught).detail(json!({
                "degree": deg,
                "a": a,
                "index_max": top,
                "checks": e.ledger.len(),
                "corrupted": { "m": m, "k": k, "detected": !bad.is_valid(), "located": located },
            }))
        }));
    }
    jobs
}

fn c10() -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    for (name, spec) in [("Z", EtaleAlgebraSpec::integers()), ("Z[i][1/2]", EtaleAlgebraSpec::gaussian()), ("Z[x]/(x^2-x-1)[1/5]", EtaleAlgebraSpec::golden())] {
        for m in 1..=6u64 {
            for a in 1..=6u32 {
                let spec = spec.clone();
                jobs.push(Box::new(move || {
                    let id = format!("relative/{name}/m={m}/a={a}");
                    match relative_checks(&spec, m, RelativePrecision { n: 2, a }) {
                        Ok((checks, _)) => {
                            let failed: Vec<_> = checks.iter().filter(|c| !c.pass).map(|c| c.id.clone()).collect();
                            CheckRecord::new(id, failed.is_empty()).detail(if failed.is_empty() { json!({ "checks": checks.len() }) } else { json!({ "failed": failed }) })
                        }
                        Err(e) => CheckRecord::error(id, e),
                    }
                }));
            }
        }
    }
    jobs
}

fn c11() -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    for n in 1..=5u64 {
        jobs.push(Box::new(move || {
            let id = format!("resolution/n_max={n}");
            match resolution_window_check(n, 4) {
                Ok(r) => CheckRecord::new(id, r.pass).detail(json!({
                    "composite_zero": r.composite_zero,
                    "first_injective": r.first_injective,
                    "middle_exact": r.middle_exact,
                    "kernel_rank": r.kernel_rank,
                    "lifts_verified": r.lifts_verified,
                })),
                Err(e) => CheckRecord::error(id, e),
            }
        }));
    }
    jobs.push(Box::new(|| {
        let id = "nakayama/localisation_window";
        match nakayama_probe(&Presentation::localisation_window(8), &(1..=8).collect::<Vec<_>>()) {
            Ok(r) => CheckRecord::new(id, r.habiro_trivial).detail(json!({ "flagged": r.habiro_trivial })),
            Err(e) => CheckRecord::error(id, e),
        }
    }));
    jobs.push(Box::new(|| {
        let id = "nakayama/cyclotomic_quotients";
        let ms: Vec<u64> = (1..=8).collect();
        for m in 1..=12u64 {
            match nakayama_probe(&Presentation::cyclic(cyclotomic(m)), &ms) {
                Ok(r) if r.habiro_trivial => return CheckRecord::new(id, false).detail(json!({ "flagged_m": m })),
                Ok(_) => {}
                Err(e) => return CheckRecord::error(id, e),
            }
        }
        CheckRecord::new(id, true).detail(json!({ "m_max": 12, "flagged": 0 }))
    }));
    jobs.push(Box::new(|| {
        let id = "ladder/torsion_modules";
        for d in 1..=6u64 {
            for (label, module) in [
                ("Phi_d", Presentation::cyclic(cyclotomic(d))),
                ("Phi_d^2", Presentation::cyclic(cyclotomic(d).pow(2))),
                ("q^d-1", Presentation::cyclic(q_power_minus_one(d))),
            ] {
                match ladder(&module, 2 * d + 1) {
                    Ok(r) if r.stabilises => {}
                    Ok(_) => return CheckRecord::new(id, false).detail(json!({ "module": label, "d": d })),
                    Err(e) => return CheckRecord::error(id, e),
                }
            }
        }
        CheckRecord::new(id, true).detail(json!({ "d_max": 6 }))
    }));
    jobs
}

fn c12() -> Vec<Job> {
    (1..=8i64)
        .map(|k| -> Job {
            Box::new(move || {
                let r = rational_qpartial(8, k);
                CheckRecord::new(format!("qpartial/k={k}"), r.matches).detail(json!({ "stray_monomials": r.stray_monomials, "operator": r.operator }))
            })
        })
        .collect()
}
