use num_bigint::BigInt;
use qcore::linalg::{self, IntMatrix};
use qcore::qanalog::*;
use qcore::series::*;
use qcore::*;

/// Naive dense polynomial division over i128, used as an oracle.
fn naive_div(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0; num.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd] / den[dd];
        q[k] = c;
        for (j, d) in den.iter().enumerate() {
            r[k + j] -= c * d;
        }
    }
    assert!(r.iter().all(|&x| x == 0));
    q
}

fn naive_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn to_i128(p: &ZqPoly) -> Vec<i128> {
    p.coeffs().iter().map(|c| c.try_into().unwrap()).collect()
}

fn naive_cyclotomic(m: usize) -> Vec<i128> {
    let mut num = vec![0i128; m + 1];
    num[0] = -1;
    num[m] = 1;
    let mut den = vec![1i128];
    for d in 1..m {
        if m % d == 0 {
            den = naive_mul(&den, &naive_cyclotomic(d));
        }
    }
    naive_div(&num, &den)
}

#[test]
fn cyclotomic_matches_recursive_division() {
    for m in 1..=40 {
        assert_eq!(to_i128(&cyclotomic(m as u64)), naive_cyclotomic(m), "m = {m}");
    }
    assert_eq!(cyclotomic(6).to_string(), "1-q+q^2");
}

#[test]
fn cyclotomic_product_is_q_power_minus_one() {
    for m in 1..=200u64 {
        let prod = arith::divisors(m).into_iter().fold(ZqPoly::one(), |acc, d| &acc * &cyclotomic(d));
        assert_eq!(prod, q_power_minus_one(m), "m = {m}");
    }
}

#[test]
fn q_factorials_and_binomials() {
    for n in 0..=30u64 {
        let prod = (1..=n as i64).fold(ZqPoly::one(), |acc, k| &acc * &q_integer(k));
        assert_eq!(q_factorial(n), prod);
        for k in 0..=n {
            let lhs = &(&q_binomial(n, k) * &q_factorial(k)) * &q_factorial(n - k);
            assert_eq!(lhs, q_factorial(n));
        }
    }
}

#[test]
fn unit_decompose_identity() {
    for p in [2u64, 3, 5, 7] {
        for n in 1..=16u32 {
            let u = unit_decompose(p, n).unwrap();
            let prec = *u.precision();
            let s = ZqPoly::from_i64s(&[-1, 1]);
            let lhs = LocalElement::new(&(&u.rep().scale(&BigInt::from(p)) + &s.pow(p as u32 - 1)), prec);
            assert_eq!(lhs, LocalElement::new(&q_integer(p as i64), prec));
            let residue = LocalElement::new(u.rep(), Precision::q_minus_one(1));
            assert!(residue.is_one());
        }
    }
}

#[test]
fn unit_decompose_five() {
    // [5]_q = 5 + 10 s + 10 s^2 + 5 s^3 + s^4, so u = 1 + 2 s + 2 s^2 + s^3
    let u = unit_decompose(5, 2).unwrap();
    let want = LocalElement::new(&ZqPoly::from_s(&[BigInt::from(1), BigInt::from(2)]), *u.precision());
    assert_eq!(u, want);
}

#[test]
fn invert_examples() {
    let one = LocalElement::one(Precision::q_minus_one(3));
    assert!(one.invert().unwrap().is_one());

    let prec = Precision::new(Some((3, 3)), ModulusKind::Cyclotomic, 1, 2).unwrap();
    let q = LocalElement::new(&ZqPoly::q(), prec);
    let r = q.invert().unwrap();
    assert!((&q * &r).is_one());
    // 1/(1+s) = 1 - s mod s^2, i.e. 2 - q, reduced mod 27
    assert_eq!(r.rep(), &ZqPoly::from_i64s(&[2, 26]));

    let s = LocalElement::new(&ZqPoly::from_i64s(&[-1, 1]), Precision::q_minus_one(3));
    assert_eq!(s.invert(), Err(Error::NotAUnit));
}

#[test]
fn taylor_examples() {
    let s = ZqPoly::from_i64s(&[-1, 1]);
    let t1 = taylor_at_root(&s, 1, 3).unwrap();
    let reps: Vec<ZqPoly> = t1.coeffs().iter().map(|c| c.rep().clone()).collect();
    assert_eq!(reps, vec![ZqPoly::zero(), ZqPoly::one(), ZqPoly::zero()]);

    // (q;q)_2 = 1 - q - q^2 + q^3: value and derivative at -1 by direct evaluation
    let f = q_pochhammer(2);
    let val: i64 = [1i64, -1, -1, 1].iter().enumerate().map(|(i, c)| c * (-1i64).pow(i as u32)).sum();
    let der: i64 = [1i64, -1, -1, 1].iter().enumerate().skip(1).map(|(i, c)| c * i as i64 * (-1i64).pow(i as u32 - 1)).sum();
    let t2 = taylor_at_root(&f, 2, 2).unwrap();
    assert_eq!(t2.coeffs()[0].rep(), &ZqPoly::constant(val));
    assert_eq!(t2.coeffs()[1].rep(), &ZqPoly::constant(der));
    assert_eq!((val, der), (0, 4));
}

#[test]
fn embed_examples() {
    let one = LocalElement::one(Precision::root_of_unity(1, None));
    assert!(embed_cyclotomic(&one, 7).unwrap().is_one());

    let z2 = LocalElement::new(&ZqPoly::q(), Precision::root_of_unity(2, None));
    assert_eq!(embed_cyclotomic(&z2, 4).unwrap().rep(), &LocalElement::new(&ZqPoly::monomial(1, 2), Precision::root_of_unity(4, None)).rep().clone());

    let z3 = LocalElement::new(&ZqPoly::q(), Precision::root_of_unity(3, None));
    let img = embed_cyclotomic(&z3, 6).unwrap();
    assert_eq!(img, LocalElement::new(&ZqPoly::monomial(1, 4), Precision::root_of_unity(6, None)));
    // minimal polynomial of zeta_3 vanishes on the image
    let phi3 = cyclotomic(3).substitute_power(4);
    assert!(LocalElement::new(&phi3, Precision::root_of_unity(6, None)).is_zero());

    assert!(matches!(embed_cyclotomic(&z3, 4), Err(Error::IndexMismatch(_))));
}

#[test]
fn reexpand_examples() {
    let lin = ZqPoly::from_i64s(&[1, 1]); // q - zeta_2
    let s = taylor_at_root(&lin, 2, 3).unwrap();
    let r = reexpand(&s, 2, 2, 2).unwrap();
    let reps: Vec<ZqPoly> = r.coeffs().iter().map(|c| c.rep().clone()).collect();
    assert_eq!(reps, vec![ZqPoly::constant(2), ZqPoly::one()]);

    let sq = lin.pow(2);
    let s = taylor_at_root(&sq, 2, 5).unwrap();
    let r = reexpand(&s, 2, 3, 3).unwrap();
    let reps: Vec<ZqPoly> = r.coeffs().iter().map(|c| c.rep().clone()).collect();
    assert_eq!(reps, vec![ZqPoly::constant(4), ZqPoly::constant(4), ZqPoly::one()]);

    let short = taylor_at_root(&sq, 2, 3).unwrap();
    assert_eq!(reexpand(&short, 2, 3, 3), Err(Error::InsufficientInputPrecision { needed: 5, got: 3 }));

    let constant = taylor_at_root(&ZqPoly::one(), 6, 4).unwrap();
    let r = reexpand(&constant, 3, 2, 1).unwrap();
    assert!(r.coeffs()[0].is_one());
}

#[test]
fn smith_on_known_matrix() {
    let a = IntMatrix::from_i64(&[&[4, 0], &[0, 6]]);
    let d = linalg::invariant_factors(&a);
    assert_eq!(d, vec![BigInt::from(2), BigInt::from(12)]);
    assert_eq!(linalg::cokernel(&a), (0, vec![BigInt::from(2), BigInt::from(12)]));
}

#[test]
fn json_shape() {
    let p = ZqPoly::from_laurent(-1, vec![BigInt::from(3), BigInt::from(-4)]);
    let js = serde_json::to_value(&p).unwrap();
    assert_eq!(js, serde_json::json!({"offset": -1, "coeffs": ["3", "-4"]}));
}
