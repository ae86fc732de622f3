use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use deltaq::poly::{Monomial, Sym};
use deltaq::rules::{gamma_q_integral_form, gamma_q_of_s};
use deltaq::series::{inv_q_integer, inv_q_integer_via_unit};
use deltaq::*;

fn r(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn x(p: u64, trunc: Option<u32>) -> DeltaPoly {
    DeltaPoly::x(p, 1, trunc)
}

fn dx(p: u64, trunc: Option<u32>) -> DeltaPoly {
    DeltaPoly::delta_x(p, 1, trunc, 1, 1)
}

fn s(p: u64, n: u32) -> DeltaPoly {
    DeltaPoly::s(p, 1, n)
}

/// Truncated rational power series, written out independently of the library.
fn series_mul(a: &[BigRational], b: &[BigRational], n: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j < n {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn series_inv(a: &[BigRational], n: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); n];
    out[0] = a[0].recip();
    for k in 1..n {
        let mut acc = BigRational::zero();
        for i in 1..=k.min(a.len() - 1) {
            acc += &a[i] * &out[k - i];
        }
        out[k] = -acc * &out[0];
    }
    out
}

/// `(1+s)^p` coefficients.
fn one_plus_s_pow(p: u64) -> Vec<BigRational> {
    let mut v = vec![r(1)];
    for _ in 0..p {
        let mut w = vec![BigRational::zero(); v.len() + 1];
        for (i, c) in v.iter().enumerate() {
            w[i] += c;
            w[i + 1] += c;
        }
        v = w;
    }
    v
}

#[test]
fn frobenius_of_generator() {
    for p in [2u64, 3, 5] {
        let want = x(p, None).pow(p as u32).add(&dx(p, None).scale_int(p as i64));
        assert_eq!(x(p, None).frobenius(), want);
    }
}

#[test]
fn frobenius_of_q_minus_one() {
    // q - 1 -> q^3 - 1 = 3 s + 3 s^2 + s^3
    let img = s(3, 6).frobenius();
    let want = DeltaPoly::s_series(3, 1, 6, &[r(0), r(3), r(3), r(1)]);
    assert_eq!(img, want);
}

#[test]
fn frobenius_of_square_p2() {
    // (x^2 + 2 δx)^2 = x^4 + 4 x^2 δx + 4 δx^2
    let x2 = x(2, None).pow(2);
    let m = |pairs: Vec<(Sym, u32)>, c: i64| x2.monomial(Monomial::from_pairs(pairs), r(c));
    let xs = Sym { r: 1, j: 0 };
    let ds = Sym { r: 1, j: 1 };
    let want = m(vec![(xs, 4)], 1).add(&m(vec![(xs, 2), (ds, 1)], 4)).add(&m(vec![(ds, 2)], 4));
    assert_eq!(x2.frobenius(), want);
}

#[test]
fn delta_examples() {
    assert_eq!(x(3, None).delta(), dx(3, None));
    for p in [2u64, 3, 5, 7] {
        let lhs = x(p, None).pow(2).delta();
        let want = x(p, None).pow(p as u32).mul(&dx(p, None)).scale_int(2).add(&dx(p, None).pow(2).scale_int(p as i64));
        assert_eq!(lhs, want, "p = {p}");
    }
}

#[test]
fn gamma_of_generator() {
    let g = x(3, None).gamma();
    assert_eq!(g, x(3, None).pow(3).scale(&frac(1, 3)));
    assert_eq!(g.min_valuation(), Some(-1));
    assert_eq!(g.check_budget(0), Err(Error::ValuationBudgetExceeded { needed: 1, budget: 0 }));
}

#[test]
fn gamma_q_of_q_minus_one() {
    let n = 4;
    let lhs = s(3, n).gamma_q().unwrap();
    assert_eq!(lhs, s(3, n).pow(2).neg());
    assert_eq!(gamma_q_of_s(3, n), lhs);

    // φ(s)/[3]_q - δ(s) with hand-rolled series arithmetic
    let nn = n as usize;
    let mut phi = one_plus_s_pow(3);
    phi[0] -= r(1);
    let qint: Vec<BigRational> = phi[1..].to_vec();
    let quotient = series_mul(&phi, &series_inv(&qint, nn), nn);
    let s_cubed = [r(0), r(0), r(0), r(1)];
    let delta: Vec<BigRational> = (0..nn).map(|k| (phi.get(k).cloned().unwrap_or_default() - s_cubed.get(k).cloned().unwrap_or_default()) / r(3)).collect();
    let direct: Vec<BigRational> = (0..nn).map(|k| &quotient[k] - &delta[k]).collect();
    assert_eq!(DeltaPoly::s_series(3, 1, n, &direct), lhs);

    for p in [2u64, 5, 7] {
        assert_eq!(s(p, 6).gamma_q().unwrap(), gamma_q_of_s(p, 6), "p = {p}");
    }
}

#[test]
fn gamma_q_product_rule() {
    for p in [2u64, 3] {
        let xx = DeltaPoly::x(p, 2, Some(4));
        let yy = DeltaPoly::delta_x(p, 2, Some(4), 2, 0);
        let lhs = xx.mul(&yy).gamma_q().unwrap();
        let rhs = yy.frobenius().mul(&xx.gamma_q().unwrap()).sub(&xx.pow(p as u32).mul(&yy.delta()));
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn sum_rule_examples() {
    let z = x(2, Some(4)).zero_like();
    assert!(verify_sum_rules(&x(2, Some(4)), &z).unwrap().pass);
    assert!(verify_sum_rules(&x(2, Some(4)), &dx(2, Some(4))).unwrap().pass);
    let rep = verify_sum_rules(&s(3, 5), &x(3, Some(5))).unwrap();
    assert!(rep.pass);
    assert!(rep.checks.iter().all(|c| c.max_discrepancy == "0"));
}

#[test]
fn sum_rule_detects_a_wrong_cross_term() {
    let a = x(3, Some(4));
    let b = dx(3, Some(4));
    let wrong = a.add(&b).delta().sub(&a.delta()).sub(&b.delta());
    assert!(!IdentityCheck::compare("naive additivity", &wrong, &a.zero_like()).holds);
}

#[test]
fn gamma_split_examples() {
    assert!(gamma_split(&x(2, Some(6))).unwrap().holds);
    assert!(gamma_split(&x(5, Some(4))).unwrap().holds);
    assert!(gamma_split(&x(3, Some(4)).pow(2)).unwrap().holds);
}

#[test]
fn inverse_of_q_integer_two_ways() {
    for p in [2u64, 3, 5, 7] {
        for n in [1u32, 3, 8] {
            assert_eq!(inv_q_integer(p, n), inv_q_integer_via_unit(p, n), "p = {p}, n = {n}");
        }
    }
    // 1/[2]_q = 1/(2 + s) = 1/2 - s/4 + s^2/8
    let want = DeltaPoly::s_series(2, 1, 3, &[frac(1, 2), frac(-1, 4), frac(1, 8)]);
    assert_eq!(inv_q_integer(2, 3), want);
}

#[test]
fn integral_form_tracks_budget() {
    let f = x(3, Some(4));
    assert_eq!(gamma_q_integral_form(&f, 8).unwrap(), f.gamma_q().unwrap());
    assert!(matches!(gamma_q_integral_form(&f, 0), Err(Error::ValuationBudgetExceeded { .. })));
}

#[test]
fn gamma_q_needs_truncation() {
    assert_eq!(x(3, None).gamma_q(), Err(Error::NeedsTruncation));
}

#[test]
fn json_shape_and_roundtrip() {
    let f = x(3, Some(4)).pow(3).scale(&frac(2, 9)).add(&s(3, 4).mul(&dx(3, Some(4))));
    let js = f.to_json();
    let back = DeltaPoly::from_json(3, 1, Some(4), &js).unwrap();
    assert_eq!(back, f);
    // graded order: degree 2 before degree 3
    assert_eq!(js, serde_json::json!([
        {"monomial": [[0, 0, 1], [1, 1, 1]], "coeff": {"val": "1", "pval": 0}},
        {"monomial": [[1, 0, 3]], "coeff": {"val": "2", "pval": -2}},
    ]));
}

#[test]
fn iterated_gamma_closed_form() {
    // γ^(n)(x) = x^(p^n) / p^((p^n - 1)/(p - 1))
    for (p, n) in [(2u64, 1u32), (2, 3), (3, 2), (5, 1)] {
        let w = decompose_gamma_iterate(n, p, p as u32 + 2, 40).unwrap();
        let pn = p.pow(n);
        let e = (pn - 1) / (p - 1);
        let want = x(p, Some(p as u32 + 2)).pow(pn as u32).scale(&BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(p), e as usize)));
        assert_eq!(w.direct_value().unwrap(), want);
    }
}

fn assert_witness(w: &Witness) {
    let rep = w.verify().unwrap();
    assert_eq!(rep.residual_terms, 0);
    assert!(rep.pass, "{rep:?}");
}

#[test]
fn forward_witnesses() {
    for (n, p, trunc, a) in [(1u32, 2u64, 6u32, 4u32), (1, 3, 6, 6), (2, 2, 8, 10), (3, 2, 10, 20), (2, 3, 8, 20), (1, 5, 6, 6)] {
        let w = decompose_gamma_iterate(n, p, trunc, a).unwrap();
        assert_eq!(w.slots.len(), n as usize);
        assert_witness(&w);
    }
}

#[test]
fn reverse_witnesses() {
    for (n, p, trunc) in [(1u32, 3u64, 5u32), (1, 2, 6), (2, 2, 6), (2, 3, 8), (1, 5, 6)] {
        let w = decompose_gammaq_iterate(n, p, trunc, 40, None).unwrap();
        assert_eq!(w.slots.len(), (trunc - (p as u32 - 2)) as usize);
        assert_witness(&w);
    }
}

#[test]
fn witness_budget_is_enforced() {
    assert!(matches!(decompose_gamma_iterate(2, 2, 8, 1), Err(Error::ValuationBudgetExceeded { .. })));
}

#[test]
fn witness_certificate_shape() {
    let w = decompose_gamma_iterate(1, 2, 6, 4).unwrap();
    let js = serde_json::to_value(&w).unwrap();
    assert_eq!(js["side"], "q");
    assert_eq!(js["arena"]["certs"][0], "generator");
    assert_eq!(js["arena"]["certs"][1], serde_json::json!({"gamma_q": 0}));
}

#[test]
fn witness_rejects_bad_arguments() {
    assert!(decompose_gamma_iterate(0, 2, 6, 4).is_err());
    assert!(decompose_gamma_iterate(1, 4, 6, 4).is_err());
    assert!(decompose_gammaq_iterate(1, 5, 3, 4, None).is_err());
}
