//! Check suites shared by the subcommands and the acceptance run.

use std::collections::BTreeMap;

use deltaq::random::random_delta_poly;
use deltaq::{decompose_gamma_iterate, decompose_gammaq_iterate, gamma_split, verify_product_rules, verify_sum_rules, DeltaPoly};
use habiro::glued::RelativePrecision;
use habiro::{build_relative_habiro, compare_qwitt, EtaleAlgebraSpec, HabiroElement, HabiroPrecision};
use qcomplex::{build_complex, cohomology_mod, decalage, Base, CohomologyTable, Flavor, ToricAlgebraSpec};
use qcore::qanalog::{cyclotomic, q_factorial};
use qcore::ZqPoly;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::report::{CheckRecord, Job};

#[derive(Clone, Debug)]
pub struct DeltaParams {
    pub primes: Vec<u64>,
    pub trunc: u32,
    pub pairs: usize,
    pub pair_trunc: u32,
    pub seed: u64,
    pub witness_depth: u32,
    pub witness_primes: Vec<u64>,
    pub witness_q_primes: Vec<u64>,
    pub budget: u32,
}

fn dp_x(p: u64, n: u32) -> DeltaPoly {
    DeltaPoly::x(p, 1, Some(n))
}

pub fn delta_jobs(c: &DeltaParams) -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    for &p in &c.primes {
        let n = c.trunc;
        jobs.push(Box::new(move || {
            let x = dp_x(p, n);
            let dx = DeltaPoly::delta_x(p, 1, Some(n), 1, 1);
            let s = DeltaPoly::s(p, 1, n);
            let inputs = [("x", x.clone()), ("x^2", x.pow(2)), ("x+dx", x.add(&dx)), ("s*x", s.mul(&x))];
            let mut failed = Vec::new();
            for (name, f) in &inputs {
                match gamma_split(f) {
                    Ok(r) if r.holds => {}
                    Ok(r) => failed.push(json!({ "input": name, "discrepancy_terms": r.discrepancy_terms })),
                    Err(e) => return CheckRecord::error(format!("gamma_split/p={p}"), e),
                }
            }
            CheckRecord::new(format!("gamma_split/p={p}"), failed.is_empty())
                .detail(if failed.is_empty() { json!({ "inputs": inputs.len(), "residual": 0 }) } else { json!(failed) })
        }));
        jobs.push(Box::new(move || match qpd::gammaq_qminus1_closed_form(p, n) {
            Ok(r) => CheckRecord::new(format!("gammaq_closed_form/p={p}"), r.pass).detail(serde_json::to_value(&r).unwrap()),
            Err(e) => CheckRecord::error(format!("gammaq_closed_form/p={p}"), e),
        }));
        let (pairs, pt, seed) = (c.pairs, c.pair_trunc, c.seed);
        jobs.push(Box::new(move || {
            let id = format!("sum_product_rules/p={p}");
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p);
            for i in 0..pairs {
                let f = random_delta_poly(&mut rng, p, 2, Some(pt), 5);
                let g = random_delta_poly(&mut rng, p, 2, Some(pt), 5);
                let sum = verify_sum_rules(&f, &g);
                let prod = verify_product_rules(&f, &g);
                match (sum, prod) {
                    (Ok(a), Ok(b)) if a.pass && b.pass => {}
                    (Ok(a), Ok(b)) => {
                        let bad: Vec<_> = a.checks.iter().chain(&b.checks).filter(|c| !c.holds).map(|c| c.name.clone()).collect();
                        return CheckRecord::new(id, false).detail(json!({ "pair": i, "failed": bad, "f": f.to_json(), "g": g.to_json() }));
                    }
                    (Err(e), _) | (_, Err(e)) => return CheckRecord::error(id, e),
                }
            }
            CheckRecord::new(id, true).detail(json!({ "pairs": pairs, "seed": seed ^ p, "trunc": pt }))
        }));
    }
    for n in 1..=c.witness_depth {
        for &p in &c.witness_primes {
            let (t, b) = (c.trunc.max(p as u32 + 2), c.budget);
            jobs.push(Box::new(move || witness_check(format!("gamma_witness/n={n}/p={p}"), decompose_gamma_iterate(n, p, t, b))));
        }
        for &p in &c.witness_q_primes {
            let (t, b) = (c.trunc.max(p as u32 + 2), c.budget);
            jobs.push(Box::new(move || witness_check(format!("gammaq_witness/n={n}/p={p}"), decompose_gammaq_iterate(n, p, t, b, None))));
        }
    }
    jobs
}

fn witness_check(id: String, w: deltaq::Result<deltaq::Witness>) -> CheckRecord {
    match w.and_then(|w| Ok((w.verify()?, w.slots.len(), w.trunc))) {
        Ok((r, slots, trunc)) => CheckRecord::new(id, r.pass).detail(json!({
            "slots": slots,
            "trunc": trunc,
            "identity_holds": r.identity_holds,
            "residual_terms": r.residual_terms,
            "slots_integral": r.slots_integral,
            "certificate": r.certificate.err(),
        })),
        Err(e) => CheckRecord::error(id, e),
    }
}

#[derive(Clone, Debug)]
pub struct QpdParams {
    pub alphas: Vec<u32>,
    pub primes: Vec<u64>,
    pub obstruction_primes: Vec<u64>,
    pub nygaard_primes: Vec<u64>,
    pub nygaard_max_n: u64,
    pub unit_primes: Vec<u64>,
    pub unit_max_n: u64,
}

/// Generators `x^j Φ_p^(n-j)` of `(x, Φ_p)^n`, spelled as in the reports.
pub fn ideal_generators(n: u64, p: u64) -> Vec<String> {
    let pw = |base: String, e: u64| if e == 1 { base } else { format!("{base}^{e}") };
    (0..=n)
        .map(|j| {
            let k = n - j;
            match (j, k) {
                (0, 0) => "1".to_string(),
                (0, k) => pw(format!("Phi_{p}"), k),
                (j, 0) => pw("x".into(), j),
                (j, k) => format!("{} {}", pw("x".into(), j), pw(format!("Phi_{p}"), k)),
            }
        })
        .collect()
}

pub fn qpd_jobs(c: &QpdParams) -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    for &alpha in &c.alphas {
        for &p in &c.primes {
            jobs.push(Box::new(move || {
                let id = format!("gamma_q_tilde/alpha={alpha}/p={p}");
                match qpd::build_gamma_q_tilde(alpha, p, p as u32 + 3, 16) {
                    Ok(g) => CheckRecord::new(id, g.pass).detail(json!({ "certificates": g.certificates })),
                    Err(e) => CheckRecord::error(id, e),
                }
            }));
        }
    }
    for &p in &c.obstruction_primes {
        jobs.push(Box::new(move || {
            let id = format!("alpha_one_obstruction/p={p}");
            match qpd::alpha_one_obstruction(p, p as u32 + 2, 8, 2) {
                Ok(r) => CheckRecord::new(id, r.pass).detail(serde_json::to_value(&r).unwrap()),
                Err(e) => CheckRecord::error(id, e),
            }
        }));
    }
    for &p in &c.nygaard_primes {
        for n in 0..=c.nygaard_max_n {
            jobs.push(Box::new(move || {
                let id = format!("nygaard_image/n={n}/p={p}");
                match qpd::nygaard_rationalised_image(n, p, 8, n as u32 + 2, n + 2) {
                    Ok(r) => {
                        let want = ideal_generators(n, p);
                        let got = r.witness.as_ref().map(|w| w["ideal_generators"].clone());
                        let ok = r.pass && got == Some(json!(want));
                        CheckRecord::new(id, ok).detail(serde_json::to_value(&r).unwrap())
                    }
                    Err(e) => CheckRecord::error(id, e),
                }
            }));
        }
    }
    for &p in &c.unit_primes {
        for n in 1..=c.unit_max_n {
            jobs.push(Box::new(move || {
                let id = format!("unit_ratio/p={p}/n={n}");
                match qpd::q_factorial_unit_ratio(p, n) {
                    Ok(w) => {
                        // multiply back instead of dividing
                        let back = &(&w * &q_factorial(n).substitute_power(p as u32)) * &cyclotomic(p).pow(n as u32);
                        let exact = back == q_factorial(p * n);
                        let w1 = w.eval_one();
                        let prime_to_p = !(&w1 % num_bigint::BigInt::from(p)).eq(&num_bigint::BigInt::from(0));
                        CheckRecord::new(id, exact && prime_to_p).detail(json!({ "w": w.to_string(), "w_at_1": w1.to_string() }))
                    }
                    Err(e) => CheckRecord::error(id, e),
                }
            }));
        }
    }
    jobs
}

pub fn table_summary(t: &CohomologyTable) -> Vec<(Vec<i64>, usize, usize, Vec<String>)> {
    t.entries.iter().map(|e| (e.a.clone(), e.j, e.free_rank, e.torsion.iter().map(|x| x.to_string()).collect())).collect()
}

/// Décalage of the q-Hodge complex against the q-de Rham complex on the box `[-r, r]^n`.
pub fn decalage_jobs(n: usize, r: i64, kmax: u32) -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    jobs.push(Box::new(move || {
        let id = format!("decalage_ranks/n={n}");
        let run = || -> qcomplex::Result<bool> {
            let s = ToricAlgebraSpec::symmetric(vec![true; n], r)?;
            let eta = decalage(&build_complex(&s, Flavor::QHodge, Base::Polynomial)?)?;
            let dr = build_complex(&s, Flavor::QDeRham, Base::Polynomial)?;
            Ok(eta.pieces.iter().zip(&dr.pieces).all(|(a, b)| a.a == b.a && a.ranks == b.ranks) && eta.d_squared_zero())
        };
        match run() {
            Ok(ok) => CheckRecord::new(id, ok).detail(json!({ "window": r })),
            Err(e) => CheckRecord::error(id, e),
        }
    }));
    for k in 1..=kmax {
        jobs.push(Box::new(move || {
            let id = format!("decalage_cohomology/n={n}/k={k}");
            let run = || -> qcomplex::Result<Option<serde_json::Value>> {
                let s = ToricAlgebraSpec::symmetric(vec![true; n], r)?;
                let eta = decalage(&build_complex(&s, Flavor::QHodge, Base::Polynomial)?)?;
                let dr = build_complex(&s, Flavor::QDeRham, Base::Polynomial)?;
                let a = table_summary(&cohomology_mod(&eta, 1, k)?);
                let b = table_summary(&cohomology_mod(&dr, 1, k)?);
                Ok(a.iter().zip(&b).find(|(x, y)| x != y).map(|(x, y)| json!({ "decalage": format!("{x:?}"), "q_de_rham": format!("{y:?}") })))
            };
            match run() {
                Ok(None) => CheckRecord::new(id, true).detail(json!({ "pieces": (2 * r + 1).pow(n as u32) })),
                Ok(Some(diff)) => CheckRecord::new(id, false).detail(diff),
                Err(e) => CheckRecord::error(id, e),
            }
        }));
    }
    jobs
}

/// Checks recorded in a Habiro element's ledger.
pub fn element_checks(e: &HabiroElement) -> Vec<CheckRecord> {
    e.ledger
        .iter()
        .map(|r| {
            CheckRecord::new(format!("consistency/p={}/m={}", r.p, r.m), r.pass).detail(json!({
                "a": r.a,
                "n": r.n,
                "first_difference": r.first_difference,
            }))
        })
        .collect()
}

pub fn element_json(e: &HabiroElement) -> serde_json::Value {
    let comps: BTreeMap<String, Vec<String>> =
        e.components.iter().map(|(m, s)| (m.to_string(), s.coeffs().iter().map(|c| c.rep().to_string()).collect())).collect();
    json!({ "index": e.index, "components": comps })
}

pub fn habiro_element(f: &ZqPoly, index: &[u64], prec: &HabiroPrecision) -> habiro::Result<HabiroElement> {
    habiro::habiro_from_poly(f, index, prec)
}

/// Gluing, square, chain and comparison checks of one relative Habiro ring.
pub fn relative_checks(spec: &EtaleAlgebraSpec, m: u64, prec: RelativePrecision) -> habiro::Result<(Vec<CheckRecord>, serde_json::Value)> {
    let g = build_relative_habiro(spec, m, prec)?;
    let q = compare_qwitt(&g)?;
    let mut out = Vec::new();
    for (p, l) in &g.lifts {
        out.push(CheckRecord::new(format!("lift/p={p}"), l.is_root && l.lifts_frobenius && l.unique).detail(json!({
            "phi": l.phi.to_string(),
            "unique": l.unique,
            "rounds": l.rounds,
        })));
    }
    for gl in &g.gluings {
        out.push(CheckRecord::new(format!("gluing/p={}/{}->{}", gl.p, gl.from, gl.to), gl.frobenius_ok && gl.defined));
    }
    for s in &g.squares {
        out.push(CheckRecord::new(format!("square/d={}/p={}/l={}", s.d, s.p, s.l), s.commutes));
    }
    for c in &g.chains {
        out.push(CheckRecord::new(format!("chain/d={}/p={}", c.d, c.p), c.agrees));
    }
    for c in &q.components {
        out.push(
            CheckRecord::new(format!("qwitt/component/d={}", c.d), c.reduction_surjective && c.kernel_is_phi_multiples)
                .detail(json!({ "rank": c.rank })),
        );
    }
    for f in &q.frobenius {
        out.push(CheckRecord::new(format!("qwitt/frobenius/p={}", f.p), f.p_power_mod_p));
    }
    let result = json!({ "ring": serde_json::to_value(&g).unwrap(), "comparison": serde_json::to_value(&q).unwrap() });
    Ok((out, result))
}
