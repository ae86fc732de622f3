use std::collections::BTreeMap;

use habiro::etale::frobenius_power_lift;
use habiro::glued::untwisted_constant;
use habiro::*;
use num_bigint::BigInt;
use qcore::qanalog::{cyclotomic, q_pochhammer};
use qcore::ZqPoly;

fn prec(primes: &[u64], a: u32, n: usize) -> HabiroPrecision {
    HabiroPrecision { primes: primes.to_vec(), a, n }
}

fn reps(e: &HabiroElement, m: u64) -> Vec<ZqPoly> {
    e.components[&m].coeffs().iter().map(|c| c.rep().clone()).collect()
}

#[test]
fn elements_from_polynomials() {
    let one = habiro_from_poly(&ZqPoly::one(), &[1, 2, 3, 6], &prec(&[2, 3], 3, 3)).unwrap();
    for m in [1, 2, 3, 6] {
        let r = reps(&one, m);
        assert!(r[0].is_one() && r[1..].iter().all(|c| c.is_zero()));
    }
    assert!(one.is_valid());

    let q = habiro_from_poly(&ZqPoly::q(), &[1, 2], &prec(&[2], 3, 2)).unwrap();
    assert_eq!(reps(&q, 1)[..2], [ZqPoly::one(), ZqPoly::one()]);
    assert_eq!(reps(&q, 2)[..2], [ZqPoly::constant(-1), ZqPoly::one()]);
    assert_eq!(q.ledger.len(), 1);
    assert!(q.is_valid());

    let poch = habiro_from_poly(&q_pochhammer(3), &[1, 2, 3, 6], &prec(&[2, 3], 3, 4)).unwrap();
    assert_eq!(poch.ledger.len(), 4);
    assert!(poch.is_valid());
}

#[test]
fn consistency_examples() {
    let e = habiro_from_poly(&(&ZqPoly::monomial(1, 2) - &ZqPoly::one()), &[1, 3], &prec(&[3], 2, 3)).unwrap();
    assert!(consistency_check(&e, 3, 1, 2, 3).unwrap().pass);

    let e = habiro_from_poly(&q_pochhammer(4), &[1, 2, 4], &prec(&[2], 4, 4)).unwrap();
    let r = consistency_check(&e, 2, 2, 4, 4).unwrap();
    assert!(r.pass && r.first_difference.is_none());

    // a corrupted coefficient is located
    let bad = e.corrupt(2, 1, &ZqPoly::constant(12345)).unwrap();
    assert!(!bad.is_valid());
    let fails: Vec<_> = bad.ledger.iter().filter(|r| !r.pass).collect();
    // at m = 2 the coefficient itself is compared; at m = 1 it enters through the reexpansion
    let at2 = fails.iter().find(|r| r.m == 2).unwrap();
    assert_eq!(at2.first_difference, Some(1));
    let at1 = fails.iter().find(|r| r.m == 1).unwrap();
    assert!(at1.first_difference.is_some());

    assert!(matches!(consistency_check(&e, 2, 4, 4, 4), Err(Error::MissingIndex(8))));
    let short = habiro_from_poly(&q_pochhammer(4), &[1, 2], &prec(&[], 4, 2)).unwrap();
    assert!(matches!(consistency_check(&short, 2, 1, 4, 4), Err(Error::Core(qcore::Error::InsufficientInputPrecision { .. }))));
    assert!(matches!(habiro_from_poly(&ZqPoly::q(), &[1, 4], &prec(&[2], 2, 2)), Err(Error::NotDivisorClosed(_))));
}

#[test]
fn ladder_examples() {
    let m = Presentation::cyclic(&ZqPoly::q() - &ZqPoly::one());
    let s = ladder_stage(&m, 1).unwrap();
    assert_eq!((s.free_rank, s.vanishes), (1, false));

    // n = 0: (q;q)_0 = 1 kills everything
    assert!(ladder_stage(&m, 0).unwrap().vanishes);

    // Z[q]/Φ_3 is killed by nothing in the ladder; at n = 3 it is all of Z[q]/Φ_3 = Z^2
    let m3 = Presentation::cyclic(cyclotomic(3));
    let s = ladder_stage(&m3, 3).unwrap();
    assert_eq!((s.free_rank, s.torsion.len()), (2, 0));
    // n = 2: Z[q]/(Φ_3, (1-q)(1-q^2)); Res(Φ_3, 1-q) = 3 twice over
    let s = ladder_stage(&m3, 2).unwrap();
    assert_eq!(s.free_rank, 0);
    assert_eq!(s.torsion, vec!["3".to_string(), "3".to_string()]);

    // the localisation inverting (q;q)_w has vanishing stages for n <= w
    let loc = Presentation::localisation_window(6);
    assert!((1..=6).all(|n| ladder_stage(&loc, n).unwrap().vanishes));
    // inverting only q - 1 leaves M/(1+q) = Z[1/2] != 0 at n = 2
    let only = Presentation::localised(&ZqPoly::q() - &ZqPoly::one());
    assert!(ladder_stage(&only, 1).unwrap().vanishes);
    assert!(!ladder_stage(&only, 2).unwrap().vanishes);

    let huge = Presentation::cyclic(&ZqPoly::monomial(1, 5000) - &ZqPoly::one());
    assert!(matches!(ladder_stage(&huge, 2), Err(Error::UnboundedDegree { .. })));
}

#[test]
fn nakayama_examples() {
    let m5 = Presentation::cyclic(cyclotomic(5));
    let r = nakayama_probe(&m5, &[1, 2, 3, 4, 5]).unwrap();
    assert!(!r.quotients[4].1.vanishes && !r.habiro_trivial);

    let loc = Presentation::localisation_window(8);
    let r = nakayama_probe(&loc, &(1..=8).collect::<Vec<_>>()).unwrap();
    assert!(r.habiro_trivial);

    let m = Presentation::cyclic(&ZqPoly::monomial(1, 2) - &ZqPoly::one());
    let r = nakayama_probe(&m, &[1, 2]).unwrap();
    assert!(!r.quotients[0].1.vanishes && !r.habiro_trivial);

    let free = Presentation::free(1);
    assert!(!nakayama_probe(&free, &[1, 2, 3]).unwrap().habiro_trivial);
}

#[test]
fn resolution_examples() {
    let r = resolution_window_check(1, 4).unwrap();
    assert!(r.pass && r.composite_zero && r.first_injective);

    let r = resolution_window_check(3, 4).unwrap();
    assert!(r.pass);
    // images of degree < 4: deg a_2 <= 0, deg a_1 <= 1, deg a_0 <= 2, so 1 + 2 + 3
    assert_eq!(r.kernel_rank, 6);
    // 1/(q;q)_2 lifts to e_2
    assert_eq!(r.lifts[0], vec![ZqPoly::zero(), ZqPoly::zero(), ZqPoly::one(), ZqPoly::zero()]);

    assert!(resolution_window_check(5, 3).unwrap().pass);
    assert!(resolution_window_check(0, 3).is_err());
}

#[test]
fn etale_specs() {
    assert_eq!(discriminant(&ZqPoly::from_i64s(&[1, 0, 1])), BigInt::from(-4));
    assert_eq!(discriminant(&ZqPoly::from_i64s(&[-1, -1, 1])), BigInt::from(5));
    // x^3 - 2: -27 * 4
    assert_eq!(discriminant(&ZqPoly::from_i64s(&[-2, 0, 0, 1])), BigInt::from(-108));
    assert!(EtaleAlgebraSpec::new(ZqPoly::from_i64s(&[1, 0, 1]), BigInt::from(1)).is_err());
    assert!(EtaleAlgebraSpec::new(ZqPoly::from_i64s(&[1, 2, 1]), BigInt::from(2)).is_err());

    let j: EtaleSpecJson = serde_json::from_str(r#"{"g": ["1", "0", "1"], "delta": "2"}"#).unwrap();
    let s = EtaleAlgebraSpec::from_json(&j).unwrap();
    assert_eq!(s, EtaleAlgebraSpec::gaussian());
    assert_eq!(serde_json::to_value(s.to_json()).unwrap(), serde_json::json!({"g": ["1", "0", "1"], "delta": "2"}));
}

#[test]
fn frobenius_lift_examples() {
    let s = EtaleAlgebraSpec::gaussian();
    let l = frobenius_lift(&s, 5, 4).unwrap();
    assert_eq!(l.phi, ZqPoly::q());
    assert!(l.is_root && l.lifts_frobenius && l.unique);

    let l = frobenius_lift(&s, 3, 4).unwrap();
    assert_eq!(l.phi, ZqPoly::monomial(80, 1));
    assert!(l.is_root && l.lifts_frobenius && l.unique);

    assert_eq!(frobenius_lift(&s, 2, 3), Err(Error::NonEtaleAtP { p: 2 }));

    // golden ratio ring at 2: x^2 = x + 1 = 1 - x mod 2, and 1 - x is the conjugate root
    let g = EtaleAlgebraSpec::golden();
    let l = frobenius_lift(&g, 2, 5).unwrap();
    assert_eq!(l.phi, ZqPoly::from_i64s(&[1, 31]));
    assert_eq!(adams(&g, 2).unwrap(), ZqPoly::from_i64s(&[1, -1]));
    // at 3 the Frobenius swaps the roots: x^3 = 2x + 1 = 1 - x mod 3
    assert_eq!(adams(&g, 3).unwrap(), ZqPoly::from_i64s(&[1, -1]));
    assert_eq!(frobenius_power_lift(&g, 3, 2, 3).unwrap(), ZqPoly::q());
}

#[test]
fn relative_habiro_examples() {
    let p = RelativePrecision { n: 2, a: 3 };
    let z = build_relative_habiro(&EtaleAlgebraSpec::integers(), 6, p).unwrap();
    assert_eq!(z.components.iter().map(|c| c.d).collect::<Vec<_>>(), vec![1, 2, 3, 6]);
    assert!(z.pass);
    assert_eq!(z.squares.len(), 1);

    let gi = build_relative_habiro(&EtaleAlgebraSpec::gaussian(), 3, p).unwrap();
    assert_eq!(gi.components.iter().map(|c| c.d).collect::<Vec<_>>(), vec![1, 3]);
    assert_eq!(gi.lifts[&3].phi, ZqPoly::monomial(26, 1));
    assert!(gi.pass);

    let g5 = build_relative_habiro(&EtaleAlgebraSpec::gaussian(), 5, p).unwrap();
    assert_eq!(g5.lifts[&5].phi, ZqPoly::q());

    let g2 = build_relative_habiro(&EtaleAlgebraSpec::gaussian(), 2, p).unwrap();
    assert_eq!(g2.inverted_primes, vec![2]);
    assert!(g2.gluings.is_empty());
}

#[test]
fn compare_qwitt_examples() {
    let p = RelativePrecision { n: 2, a: 3 };
    for (spec, m) in [(EtaleAlgebraSpec::integers(), 2), (EtaleAlgebraSpec::gaussian(), 3), (EtaleAlgebraSpec::golden(), 2)] {
        let g = build_relative_habiro(&spec, m, p).unwrap();
        let r = compare_qwitt(&g).unwrap();
        assert!(r.pass, "{spec:?} {m}");
        assert_eq!(r.components.len(), 2);
    }
}

#[test]
fn ghost_examples() {
    let p = RelativePrecision { n: 2, a: 3 };
    let z = build_relative_habiro(&EtaleAlgebraSpec::integers(), 6, p).unwrap();
    let seven = glued_constant(&z, &ZqPoly::constant(7)).unwrap();
    for d in [1, 2, 3, 6] {
        assert_eq!(ghost(&seven, d).unwrap(), vec![ZqPoly::constant(7)]);
    }
    let q = glued_q(&z).unwrap();
    assert_eq!(ghost(&q, 3).unwrap(), vec![ZqPoly::q()]);
    assert_eq!(ghost(&q, 4), Err(Error::NotADivisor { d: 4, m: 6 }));

    // over Z[i], i is twisted by the Adams operation: -i in component 3
    let gi = build_relative_habiro(&EtaleAlgebraSpec::gaussian(), 3, p).unwrap();
    let i = glued_constant(&gi, &ZqPoly::q()).unwrap();
    assert_eq!(ghost(&i, 1).unwrap(), vec![ZqPoly::zero(), ZqPoly::one()]);
    assert_eq!(ghost(&i, 3).unwrap(), vec![ZqPoly::zero(), ZqPoly::constant(-1)]);
    assert_eq!(untwisted_constant(&gi, &ZqPoly::q()).unwrap_err(), Error::IncompatibleComponents { p: 3, d: 1 });

    // incompatible components
    let mut comps = BTreeMap::new();
    comps.insert(1, vec![ZqPoly::constant(1)]);
    comps.insert(2, vec![ZqPoly::constant(2)]);
    let z2 = build_relative_habiro(&EtaleAlgebraSpec::integers(), 2, p).unwrap();
    assert_eq!(glued_element(&z2, comps).unwrap_err(), Error::IncompatibleComponents { p: 2, d: 1 });
}
