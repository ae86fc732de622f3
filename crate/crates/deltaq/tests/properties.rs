use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use deltaq::poly::{Monomial, Sym};
use deltaq::random::random_delta_poly;
use deltaq::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn product_laws(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_delta_poly(&mut rng, p, 2, Some(4), 5);
        let g = random_delta_poly(&mut rng, p, 2, Some(4), 5);
        let rep = verify_product_rules(&f, &g).unwrap();
        prop_assert!(rep.pass, "{:?}", rep);
    }

    #[test]
    fn sum_laws(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_delta_poly(&mut rng, p, 2, Some(4), 5);
        let g = random_delta_poly(&mut rng, p, 2, Some(4), 5);
        let rep = verify_sum_rules(&f, &g).unwrap();
        prop_assert!(rep.pass, "{:?}", rep);
    }

    #[test]
    fn gamma_split_any_element(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_delta_poly(&mut rng, p, 1, Some(5), 4);
        prop_assert!(gamma_split(&f).unwrap().holds);
    }

    #[test]
    fn delta_preserves_integrality(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_delta_poly(&mut rng, p, 2, None, 5);
        prop_assert!(f.delta().is_integral());
    }

    #[test]
    fn json_roundtrip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_delta_poly(&mut rng, 3, 3, Some(4), 5).gamma();
        let back = DeltaPoly::from_json(3, 3, Some(4), &f.to_json()).unwrap();
        prop_assert_eq!(back, f);
    }
}

/// Monomials in `x, δx, δ²x` of degree at most 2.
fn spanning_monomials() -> Vec<Monomial> {
    let syms: Vec<Sym> = (0..3).map(|j| Sym { r: 1, j }).collect();
    let mut out = vec![Monomial::one()];
    for (i, a) in syms.iter().enumerate() {
        out.push(Monomial::var(*a, 1));
        for b in &syms[i..] {
            out.push(Monomial::var(*a, 1).mul(&Monomial::var(*b, 1)));
        }
    }
    out
}

#[test]
fn q_minus_one_multiples_are_stable() {
    for p in [2u64, 3] {
        for n in 1..=4u32 {
            let trunc = n + 4;
            let sn = DeltaPoly::s(p, 1, trunc).pow(n);
            for m in spanning_monomials() {
                let e = sn.mul(&sn.monomial(m.clone(), num_rational::BigRational::from_integer(1.into())));
                let d = e.delta();
                let g = e.gamma_q().unwrap();
                prop_assert_ok(d.is_integral() && d.s_order() >= n, "delta", p, n, &m);
                prop_assert_ok(g.is_integral() && g.s_order() > n, "gamma_q", p, n, &m);
            }
        }
    }
}

fn prop_assert_ok(ok: bool, what: &str, p: u64, n: u32, m: &Monomial) {
    assert!(ok, "{what} of s^{n} {m} leaves the span (p = {p})");
}

#[test]
fn frobenius_of_zero_is_zero() {
    assert!(DeltaPoly::zero(3, 1, Some(3)).frobenius().is_zero());
}
