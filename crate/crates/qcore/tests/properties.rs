use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use proptest::prelude::*;
use qcore::linalg::{self, IntMatrix};
use qcore::series::*;
use qcore::*;

fn poly_strategy(max_deg: usize) -> impl Strategy<Value = ZqPoly> {
    prop::collection::vec(-20i64..20, 1..=max_deg + 1).prop_map(|v| ZqPoly::from_i64s(&v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reexpansion_is_the_equaliser(f in poly_strategy(20), m in 1u64..=6, p in prop::sample::select(vec![2u64, 3]), a in 1u32..=5, n in 1usize..=4) {
        let k = reexpand_input_len(m, p, a, n).unwrap();
        let at_pm = taylor_at_root(&f, p * m, k).unwrap();
        let lhs = reexpand(&at_pm, p, a, n).unwrap();
        let at_m = taylor_at_root(&f, m, n).unwrap();
        let rhs = canonical_image(&at_m, p, a).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn invert_is_two_sided(v in prop::collection::vec(-50i64..50, 1..6), p in prop::sample::select(vec![2u64, 3, 5]), a in 1u32..4, m in 1u64..5, n in 1u32..4) {
        let prec = Precision::new(Some((p, a)), ModulusKind::Cyclotomic, m, n).unwrap();
        let e = LocalElement::new(&ZqPoly::from_i64s(&v), prec);
        if let Ok(r) = e.invert() {
            prop_assert!((&e * &r).is_one());
            prop_assert!((&r * &e).is_one());
        }
    }

    #[test]
    fn integral_inverse_when_no_prime(v in prop::collection::vec(-5i64..5, 1..5), n in 1u32..5) {
        let prec = Precision::q_minus_one(n);
        let mut v = v;
        v[0] = if v.iter().sum::<i64>() % 2 == 0 { 1 } else { -1 };
        let e = LocalElement::new(&ZqPoly::from_i64s(&v), prec);
        match e.invert() {
            Ok(r) => prop_assert!((&e * &r).is_one()),
            Err(err) => {
                let at_one: i64 = v.iter().sum();
                prop_assert!(at_one.abs() != 1, "{:?}", err);
            }
        }
    }

    #[test]
    fn smith_is_a_factorisation(rows in 1usize..5, cols in 1usize..5, seed in prop::collection::vec(-9i64..9, 25)) {
        let data: Vec<Vec<BigInt>> = (0..rows).map(|i| (0..cols).map(|j| BigInt::from(seed[i * 5 + j])).collect()).collect();
        let a = IntMatrix::from_rows(data);
        let s = linalg::smith(&a);
        let d = s.u.mul(&a).mul(&s.v);
        for i in 0..rows {
            for j in 0..cols {
                let want = if i == j && i < s.rank() { s.diag[i].clone() } else { BigInt::zero() };
                prop_assert_eq!(&d[(i, j)], &want);
            }
        }
        for w in s.diag.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        prop_assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(rows));
        prop_assert_eq!(s.v_inv.mul(&s.v), IntMatrix::identity(cols));
    }

    #[test]
    fn solve_integer_solutions_check(rows in 1usize..4, cols in 1usize..4, seed in prop::collection::vec(-9i64..9, 16), x in prop::collection::vec(-9i64..9, 4)) {
        let a = IntMatrix::from_rows((0..rows).map(|i| (0..cols).map(|j| BigInt::from(seed[i * 4 + j])).collect()).collect());
        let x: Vec<BigInt> = x[..cols].iter().map(|&v| BigInt::from(v)).collect();
        let b = a.mul_vec(&x);
        let sol = linalg::solve_integer(&a, &b).expect("b is in the image");
        prop_assert_eq!(a.mul_vec(&sol), b);
    }

    #[test]
    fn local_json_roundtrip(v in prop::collection::vec(-1000i64..1000, 0..6), off in -3i64..3) {
        let prec = Precision::new(Some((5, 3)), ModulusKind::QPowerMinusOne, 3, 2).unwrap();
        let e = LocalElement::new(&ZqPoly::from_i64s(&v).shift(off), prec);
        let back: LocalElement = serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
        prop_assert_eq!(back, e);
    }

    #[test]
    fn taylor_is_a_ring_map(f in poly_strategy(8), g in poly_strategy(8), m in 1u64..7) {
        let n = 5;
        let lhs = taylor_at_root(&(&f * &g), m, n).unwrap();
        let rhs = taylor_at_root(&f, m, n).unwrap().try_mul(&taylor_at_root(&g, m, n).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
