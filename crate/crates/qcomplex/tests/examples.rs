use num_bigint::BigInt;
use qcomplex::complex::{decalage_piece, tensor_matches_koszul, tensor_total, Piece};
use qcomplex::*;
use qcore::qanalog::{q_integer, q_power_minus_one};
use qcore::ZqPoly;

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn one_var(laurent: bool, lo: i64, hi: i64) -> ToricAlgebraSpec {
    ToricAlgebraSpec::new(vec![laurent], vec![(lo, hi)]).unwrap()
}

#[test]
fn two_term_complexes() {
    let spec = one_var(true, -3, 3);
    let k = build_complex(&spec, Flavor::QHodge, Base::Polynomial).unwrap();
    let p = k.piece(&[3]).unwrap();
    assert_eq!(p.diffs[0].get(0, 0), &q_power_minus_one(3));
    let p = k.piece(&[-2]).unwrap();
    assert_eq!(p.diffs[0].get(0, 0), &(&ZqPoly::monomial(1, -2) - &ZqPoly::one()));
    let k = build_complex(&one_var(false, 0, 4), Flavor::QDeRham, Base::Polynomial).unwrap();
    assert_eq!(k.piece(&[4]).unwrap().diffs[0].get(0, 0), &q_integer(4));
    assert!(matches!(k.piece(&[5]), Err(Error::WindowTooSmall(_))));
}

#[test]
fn negative_q_integer_convention() {
    // [k]_q = -q^k [-k]_q, and (q - 1)[k]_q = q^k - 1
    let spec = one_var(true, -4, -1);
    let k = build_complex(&spec, Flavor::QDeRham, Base::Polynomial).unwrap();
    for a in -4..=-1i64 {
        let s = k.piece(&[a]).unwrap().diffs[0].get(0, 0).clone();
        let lhs = &s * &ZqPoly::from_i64s(&[-1, 1]);
        assert_eq!(lhs, &ZqPoly::monomial(1, a) - &ZqPoly::one());
    }
}

#[test]
fn window_errors() {
    assert!(matches!(ToricAlgebraSpec::new(vec![true], vec![(2, 1)]), Err(Error::WindowTooSmall(_))));
    assert!(ToricAlgebraSpec::new(vec![false], vec![(-1, 1)]).is_err());
    let spec = one_var(false, 0, 2);
    assert!(matches!(
        build_complex_at(&spec, Flavor::QHodge, Base::Polynomial, &[vec![3]]),
        Err(Error::WindowTooSmall(_))
    ));
}

#[test]
fn koszul_two_variables_squares_to_zero() {
    let spec = ToricAlgebraSpec::symmetric(vec![true, true], 3).unwrap();
    for flavor in [Flavor::QHodge, Flavor::QDeRham] {
        let k = build_complex(&spec, flavor, Base::Polynomial).unwrap();
        assert_eq!(k.pieces.len(), 49);
        assert!(k.d_squared_zero());
        let p = k.piece(&[2, -1]).unwrap();
        assert_eq!(p.ranks, vec![1, 2, 1]);
    }
}

#[test]
fn de_rham_mod_q_minus_one() {
    let k = build_complex(&one_var(true, -5, 5), Flavor::QDeRham, Base::Polynomial).unwrap();
    let t = cohomology_mod(&k, 1, 1).unwrap();
    for a in -5..=5i64 {
        let h0 = t.get(&[a], 0).unwrap();
        let h1 = t.get(&[a], 1).unwrap();
        if a == 0 {
            assert_eq!((h0.free_rank, h1.free_rank), (1, 1));
        } else {
            assert_eq!(h0.free_rank + h0.torsion.len(), 0);
            assert_eq!(h1.free_rank, 0);
            let expect: Vec<BigInt> = if a.abs() == 1 { vec![] } else { vec![big(a.abs())] };
            assert_eq!(h1.torsion, expect);
        }
    }
    assert!(t.euler_consistent);
}

#[test]
fn q_hodge_mod_q_squared_minus_one() {
    // oracle: multiplication by q - 1 on Z[q]/(q^2 - 1) in basis 1, q is [[-1, 1], [1, -1]];
    // its kernel is spanned by 1 + q and its cokernel is Z
    let k = build_complex(&one_var(false, 0, 1), Flavor::QHodge, Base::Quotient { m: 2, k: 1 }).unwrap();
    let t = cohomology_mod(&k, 2, 1).unwrap();
    let h0 = t.get(&[1], 0).unwrap();
    assert_eq!((h0.free_rank, h0.torsion.len()), (1, 0));
    // q acts trivially on q + 1 modulo q^2 - 1
    assert_eq!(h0.q_matrix.to_rows(), vec![vec![big(1)]]);
    let h1 = t.get(&[1], 1).unwrap();
    assert_eq!((h1.free_rank, h1.torsion.len()), (1, 0));
    assert_eq!(h1.q_matrix.to_rows(), vec![vec![big(1)]]);
    for m in 1..=4 {
        let t = cohomology_mod(&k, m, 1).unwrap();
        for j in 0..2 {
            let e = t.get(&[0], j).unwrap();
            assert_eq!((e.free_rank, e.torsion.len()), (m as usize, 0));
        }
    }
}

#[test]
fn bockstein_is_de_rham_differential_at_level_one() {
    let k = build_complex(&one_var(true, -6, 6), Flavor::QHodge, Base::Polynomial).unwrap();
    let t = bockstein(&k, 1).unwrap();
    assert_eq!(t.beta_squared_zero, Some(true));
    for a in -6..=6i64 {
        let b = t.get(&[a], 0).unwrap().bockstein_matrix.clone().unwrap();
        assert_eq!(b.to_rows(), vec![vec![big(a)]]);
    }
}

#[test]
fn bockstein_level_two() {
    let k = build_complex(&one_var(false, 0, 3), Flavor::QHodge, Base::Polynomial).unwrap();
    let t = bockstein(&k, 2).unwrap();
    assert_eq!(t.beta_squared_zero, Some(true));
    // generator q + 1 of H^0: lift, d = (q - 1)(q + 1) = q^2 - 1, divided by q^2 - 1 gives 1,
    // whose class in H^1 = Z[q]/(q - 1, q^2 - 1) = Z is the generator up to sign
    let b = t.get(&[1], 0).unwrap().bockstein_matrix.clone().unwrap();
    assert_eq!(b.rows(), 1);
    assert_eq!(b.cols(), 1);
    assert_eq!(b[(0, 0)].magnitude(), &num_bigint::BigUint::from(1u32));
    let b0 = t.get(&[0], 0).unwrap().bockstein_matrix.clone().unwrap();
    assert!(b0.is_zero());
    let two = build_complex(&ToricAlgebraSpec::symmetric(vec![true, true], 2).unwrap(), Flavor::QHodge, Base::Polynomial)
        .unwrap();
    assert_eq!(bockstein(&two, 2).unwrap().beta_squared_zero, Some(true));
}

#[test]
fn decalage_examples() {
    for a in [-3i64, 0, 1, 4] {
        let p = Piece::koszul(vec![a], vec![qcomplex::complex::scalar(Flavor::QHodge, a)]);
        let e = decalage_piece(&p).unwrap();
        assert_eq!(e.diffs[0].get(0, 0), &q_integer(a));
    }
    let p = Piece::koszul(vec![1, 1], vec![q_power_minus_one(1), q_power_minus_one(1)]);
    let e = decalage_piece(&p).unwrap();
    let ones = Piece::koszul(vec![1, 1], vec![ZqPoly::one(), ZqPoly::one()]);
    assert_eq!(e.diffs, ones.diffs);
    let k = build_complex_at(
        &ToricAlgebraSpec::symmetric(vec![true, true], 1).unwrap(),
        Flavor::QHodge,
        Base::Polynomial,
        &[vec![1, 1]],
    )
    .unwrap();
    let t = cohomology_mod(&decalage(&k).unwrap(), 1, 3).unwrap();
    assert!(t.entries.iter().all(|e| e.free_rank == 0 && e.torsion.is_empty()));
    let quotient = build_complex(&one_var(false, 0, 1), Flavor::QHodge, Base::Quotient { m: 1, k: 2 }).unwrap();
    assert!(matches!(decalage(&quotient), Err(Error::TorsionAmbient(_))));
}

#[test]
fn decalage_of_de_rham_piece_is_a_complex() {
    // d(1) = (2, 0) is not zero, so the basis changes
    let p = Piece::koszul(vec![2, 0], vec![q_integer(2), q_integer(0)]);
    let e = decalage_piece(&p).unwrap();
    assert!(e.d_squared_zero());
}

#[test]
fn filtration_examples() {
    let spec = one_var(true, -2, 2);
    let k = build_complex(&spec, Flavor::QDeRham, Base::Quotient { m: 1, k: 4 }).unwrap();
    let f0 = qhodge_filtration(&k, 0).unwrap();
    for p in &f0.pieces {
        assert_eq!(p.gr[0].free_rank, 1);
        assert!(p.gr[1].is_zero());
    }
    let f1 = qhodge_filtration(&k, 1).unwrap();
    assert!(f1.prediction_holds);
    for p in f1.pieces.iter().filter(|p| p.a != [0]) {
        assert!(p.conj[0].is_zero());
        assert_eq!(p.conj[1].free_rank, 1);
        // the honest graded piece has zero differentials, so H^0 survives there
        assert_eq!(p.gr[0].free_rank, 1);
    }
    assert_eq!(f1.exponents, vec![1, 0]);
    assert!(f1.shift_contained);
    assert!(matches!(qhodge_filtration(&k, 3), Err(Error::InsufficientTruncation { needed: 4, got: 4 })));

    let spec2 = ToricAlgebraSpec::new(vec![false, false], vec![(0, 1), (0, 1)]).unwrap();
    let k2 = build_complex(&spec2, Flavor::QDeRham, Base::Quotient { m: 1, k: 5 }).unwrap();
    let f = qhodge_filtration(&k2, 1).unwrap();
    assert!(f.prediction_holds);
    let p = f.pieces.iter().find(|p| p.a == [1, 0]).unwrap();
    assert_eq!(p.conj[1].free_rank, 2);
}

#[test]
fn rational_operator() {
    let r = rational_qpartial(6, 1);
    assert!(r.matches);
    assert_eq!(r.operator[0], "1");
    assert!(r.operator[1..].iter().all(|c| c == "0"));
    let r = rational_qpartial(6, 3);
    assert!(r.matches);
    // [3]_q = 3 + 3s + s^2
    assert_eq!(&r.expected[..4], &["3", "3", "1", "0"]);
    assert!(rational_qpartial(8, 5).matches);
    assert!(rational_qpartial(7, -2).matches);
}

#[test]
fn frobenius_transitions() {
    let k = build_complex(&one_var(false, 0, 3), Flavor::QHodge, Base::Polynomial).unwrap();
    let same = frobenius_transition(&k, 3, 3).unwrap();
    for e in &same.maps {
        let n = e.matrix.rows();
        assert_eq!(e.matrix, qcore::linalg::IntMatrix::identity(n));
    }
    let t = frobenius_transition(&k, 2, 1).unwrap();
    assert!(t.intertwining_holds);
    // q + 1 reduces to 2 in Z[q]/(q - 1)
    let e = t.maps.iter().find(|e| e.a == [1] && e.j == 0).unwrap();
    assert_eq!(e.matrix.to_rows(), vec![vec![big(2)]]);
    let t = frobenius_transition(&k, 4, 2).unwrap();
    assert!(t.intertwining_holds);
    assert!(matches!(frobenius_transition(&k, 4, 3), Err(Error::NotADivisor { d: 3, m: 4 })));
}

#[test]
fn tensor_examples() {
    let one = one_var(true, -2, 2);
    let k1 = build_complex(&one, Flavor::QHodge, Base::Polynomial).unwrap();
    let empty = build_complex(&ToricAlgebraSpec::new(vec![], vec![]).unwrap(), Flavor::QHodge, Base::Polynomial).unwrap();
    let t = tensor(&k1, &empty).unwrap();
    for (a, b) in t.pieces.iter().zip(&k1.pieces) {
        assert_eq!(a.diffs, b.diffs);
    }
    let t = tensor(&k1, &k1).unwrap();
    let direct = build_complex(&ToricAlgebraSpec::symmetric(vec![true, true], 2).unwrap(), Flavor::QHodge, Base::Polynomial)
        .unwrap();
    for p in &t.pieces {
        assert_eq!(p.diffs, direct.piece(&p.a).unwrap().diffs);
        let p1 = k1.piece(&p.a[..1]).unwrap();
        let p2 = k1.piece(&p.a[1..]).unwrap();
        assert!(tensor_matches_koszul(p1, p2, p));
    }
    let other = build_complex(&one, Flavor::QHodge, Base::Quotient { m: 2, k: 1 }).unwrap();
    assert!(matches!(tensor(&k1, &other), Err(Error::BaseMismatch(_))));
}

#[test]
fn kunneth_over_level_two() {
    // K2 = Koszul(s) makes the tensor a cone of s on K1, so
    // 0 -> H^(j-1)(K1)/s -> H^j(K1 ⊗ K2) -> H^j(K1)[s] -> 0 and free ranks add up
    use qcomplex::cohomology::{block_mult, piece_cohomology, quotient_ring};
    use qcore::linalg::Subquotient;
    let ring = quotient_ring(2, 1);
    for (a, b) in [(1i64, 1i64), (1, 2), (2, 3), (0, 1)] {
        let s1 = qcomplex::complex::scalar(Flavor::QHodge, a);
        let s2 = qcomplex::complex::scalar(Flavor::QHodge, b);
        let p1 = Piece::koszul(vec![a], vec![s1]);
        let p2 = Piece::koszul(vec![b], vec![s2.clone()]);
        let t = tensor_total(&p1, &p2);
        let ht = piece_cohomology(&t, &ring);
        let h1 = piece_cohomology(&p1, &ring);
        let smap = block_mult(&ring, &s2, 1);
        let mut coker = Vec::new();
        let mut ker = Vec::new();
        for g in &h1.groups {
            let act = g.induced(&smap, g);
            // relations of H/s: the image of s and the torsion orders
            let mut rel = act.clone();
            for (i, o) in g.orders.iter().enumerate() {
                if let Some(d) = o {
                    let mut c = qcore::linalg::IntMatrix::zeros(g.len(), 1);
                    c[(i, 0)] = d.clone();
                    rel = rel.hstack(&c);
                }
            }
            coker.push(Subquotient::new(&rel, &qcore::linalg::IntMatrix::zeros(0, g.len())).free_rank());
            ker.push(g.free_rank() - qcore::linalg::rank_rational(&act));
        }
        for j in 0..=2usize {
            let expect = if j >= 1 { coker[j - 1] } else { 0 } + if j < 2 { ker[j] } else { 0 };
            assert_eq!(ht.groups[j].free_rank(), expect, "a={a} b={b} j={j}");
        }
    }
}

#[test]
fn csv_and_json_shape() {
    let k = build_complex(&one_var(false, 0, 1), Flavor::QHodge, Base::Polynomial).unwrap();
    let t = bockstein(&k, 2).unwrap();
    let csv = t.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "a,j,free_rank,torsion,q_matrix,bockstein_matrix");
    assert_eq!(csv.lines().count(), 5);
    let j = t.to_json();
    assert_eq!(j["entries"][0]["a"], serde_json::json!([0]));
    assert_eq!(j["entries"][0]["q_matrix"], serde_json::json!([["0", "1"], ["1", "0"]]));
}
