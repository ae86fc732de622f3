use proptest::prelude::*;
use qcore::qanalog::cyclotomic;
use qcore::ZqPoly;
use qpd::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn nygaard_levels_are_superadditive(p in prop::sample::select(vec![2u64, 3]), i in 0u64..5, j in 0u64..5, k in 0u32..3, l in 0u32..3, ui in 0i64..3, uj in 0i64..3) {
        let m = QDivModule::new(p, 1, 6, 3, 5).unwrap();
        // spanning elements q^u Φ_p^k x^(i/p)/[⌊i/p⌋]_q!
        let e = m.basis(i, &(&cyclotomic(p).pow(k) * &ZqPoly::monomial(1, ui))).unwrap();
        let f = m.basis(j, &(&cyclotomic(p).pow(l) * &ZqPoly::monomial(1, uj))).unwrap();
        let prod = e.mul(&f).unwrap();
        prop_assume!(!prod.is_zero() && !e.is_zero() && !f.is_zero());
        prop_assert!(prod.nygaard_level().unwrap() >= e.nygaard_level().unwrap() + f.nygaard_level().unwrap());
    }
}

#[test]
fn dichotomy_in_alpha() {
    for alpha in [2u32, 3] {
        for p in [2u64, 3, 5] {
            let g = build_gamma_q_tilde(alpha, p, p as u32 + 3, 16).unwrap();
            assert!(g.pass, "alpha {alpha} p {p}: {:?}", g.certificates);
        }
    }
    for p in [2u64, 3, 5] {
        assert!(alpha_one_obstruction(p, p as u32 + 2, 8, 2).unwrap().pass, "p = {p}");
    }
}
