use num_bigint::BigInt;
use proptest::prelude::*;
use qcomplex::cohomology::quotient_ring;
use qcomplex::complex::{scalar, tensor_matches_koszul, Piece};
use qcomplex::*;

fn spec(n: usize, r: i64) -> ToricAlgebraSpec {
    ToricAlgebraSpec::symmetric(vec![true; n], r).unwrap()
}

fn summary(t: &CohomologyTable) -> Vec<(Vec<i64>, usize, usize, Vec<BigInt>)> {
    t.entries.iter().map(|e| (e.a.clone(), e.j, e.free_rank, e.torsion.clone())).collect()
}

#[test]
fn d_squared_vanishes_on_every_base() {
    for n in 0..=3 {
        for flavor in [Flavor::QHodge, Flavor::QDeRham] {
            let k = build_complex(&spec(n, 2), flavor, Base::Polynomial).unwrap();
            assert!(k.d_squared_zero());
            for (m, kk) in [(1, 1), (2, 1), (3, 2), (1, 3)] {
                let ring = quotient_ring(m, kk);
                for p in &k.pieces {
                    for j in 0..p.diffs.len().saturating_sub(1) {
                        let dd = p.diffs[j + 1].flatten(&ring).mul(&p.diffs[j].flatten(&ring));
                        assert!(dd.is_zero());
                    }
                }
            }
        }
    }
}

#[test]
fn pieces_keep_their_multidegree() {
    let s = spec(2, 3);
    let k = build_complex(&s, Flavor::QHodge, Base::Polynomial).unwrap();
    let listed: Vec<Vec<i64>> = k.pieces.iter().map(|p| p.a.clone()).collect();
    assert_eq!(listed, s.multidegrees());
    for p in &k.pieces {
        let expect: Vec<_> = p.a.iter().map(|&ai| scalar(Flavor::QHodge, ai)).collect();
        assert_eq!(p.scalars.as_ref().unwrap(), &expect);
    }
}

#[test]
fn decalage_matches_q_de_rham() {
    for n in 1..=2 {
        let s = spec(n, 6);
        let hodge = build_complex(&s, Flavor::QHodge, Base::Polynomial).unwrap();
        let eta = decalage(&hodge).unwrap();
        let dr = build_complex(&s, Flavor::QDeRham, Base::Polynomial).unwrap();
        for kk in 1..=3 {
            let a = cohomology_mod(&eta, 1, kk).unwrap();
            let b = cohomology_mod(&dr, 1, kk).unwrap();
            assert_eq!(summary(&a), summary(&b), "n={n} k={kk}");
        }
    }
}

#[test]
fn q_hodge_mod_q_minus_one_is_free() {
    for n in 1..=3 {
        let k = build_complex(&spec(n, 3), Flavor::QHodge, Base::Polynomial).unwrap();
        let t = cohomology_mod(&k, 1, 1).unwrap();
        for e in &t.entries {
            assert_eq!(e.free_rank, qcomplex::complex::binom(n, e.j));
            assert!(e.torsion.is_empty());
        }
        let ring = quotient_ring(1, 1);
        assert!(k.pieces.iter().all(|p| p.diffs.iter().all(|d| d.flatten(&ring).is_zero())));
    }
}

#[test]
fn level_one_bockstein_is_integer_koszul() {
    let k = build_complex(&spec(2, 4), Flavor::QHodge, Base::Polynomial).unwrap();
    let t = bockstein(&k, 1).unwrap();
    assert_eq!(t.beta_squared_zero, Some(true));
    let dr = build_complex(&spec(2, 4), Flavor::QDeRham, Base::Polynomial).unwrap();
    for p in &dr.pieces {
        for j in 0..2 {
            let b = t.get(&p.a, j).unwrap().bockstein_matrix.clone().unwrap();
            assert_eq!(b, p.diffs[j].eval_one(), "a={:?} j={j}", p.a);
        }
    }
}

#[test]
fn bockstein_squares_to_zero() {
    for m in 1..=4 {
        let k = build_complex(&spec(2, 3), Flavor::QHodge, Base::Polynomial).unwrap();
        assert_eq!(bockstein(&k, m).unwrap().beta_squared_zero, Some(true));
        let k = build_complex(&spec(2, 3), Flavor::QDeRham, Base::Polynomial).unwrap();
        assert_eq!(bockstein(&k, m).unwrap().beta_squared_zero, Some(true));
    }
}

/// Fraction-free elimination on a small integer matrix: rank and, when the
/// matrix is square of full rank, the absolute determinant.
fn bareiss(mut a: Vec<Vec<i128>>) -> (usize, Option<i128>) {
    let n = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut prev = 1i128;
    let mut sign = 1i128;
    for c in 0..cols {
        let Some(p) = (rank..n).find(|&r| a[r][c] != 0) else { continue };
        if p != rank {
            a.swap(p, rank);
            sign = -sign;
        }
        for r in rank + 1..n {
            for cc in c + 1..cols {
                a[r][cc] = (a[r][cc] * a[rank][c] - a[r][c] * a[rank][cc]) / prev;
            }
            a[r][c] = 0;
        }
        prev = a[rank][c];
        rank += 1;
    }
    let det = (rank == n && n == cols).then(|| (sign * prev).abs());
    (rank, det)
}

/// Multiplication by `s` on `Z[q]/(q^m - 1)`, written out by hand.
fn naive_matrix(s: &qcore::ZqPoly, m: usize) -> Vec<Vec<i128>> {
    let mut a = vec![vec![0i128; m]; m];
    for t in 0..m {
        for (e, c) in s.coeffs().iter().enumerate() {
            let exp = (s.offset() + e as i64 + t as i64).rem_euclid(m as i64) as usize;
            a[exp][t] += i128::try_from(c.clone()).unwrap();
        }
    }
    a
}

#[test]
fn one_variable_against_naive_lattice_algebra() {
    let s = ToricAlgebraSpec::new(vec![true], vec![(-12, 12)]).unwrap();
    for flavor in [Flavor::QHodge, Flavor::QDeRham] {
        let k = build_complex(&s, flavor, Base::Polynomial).unwrap();
        for m in 1..=12u64 {
            let t = cohomology_mod(&k, m, 1).unwrap();
            for p in &k.pieces {
                let a = p.a[0];
                let (rank, det) = bareiss(naive_matrix(&scalar(flavor, a), m as usize));
                let h0 = t.get(&[a], 0).unwrap();
                let h1 = t.get(&[a], 1).unwrap();
                assert_eq!(h0.free_rank, m as usize - rank);
                assert!(h0.torsion.is_empty());
                assert_eq!(h1.free_rank, m as usize - rank);
                let order = qcomplex::cohomology::group_order(h1.free_rank, &h1.torsion);
                assert_eq!(order, det.map(BigInt::from), "{flavor} m={m} a={a}");
                if flavor == Flavor::QHodge && a != 0 {
                    // Z[q]/(q^m - 1, q^a - 1) = Z[q]/(q^g - 1)
                    let g = num_integer_gcd(m as i64, a.abs());
                    assert_eq!((h1.free_rank, h1.torsion.len()), (g as usize, 0));
                }
            }
        }
    }
}

fn num_integer_gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[test]
fn euler_characteristic_bookkeeping() {
    for (m, kk) in [(1, 1), (2, 1), (3, 1), (2, 2), (1, 3)] {
        for flavor in [Flavor::QHodge, Flavor::QDeRham] {
            let k = build_complex(&spec(2, 2), flavor, Base::Polynomial).unwrap();
            assert!(cohomology_mod(&k, m, kk).unwrap().euler_consistent);
        }
    }
}

#[test]
fn parallel_map_is_deterministic() {
    let k = build_complex(&spec(2, 3), Flavor::QDeRham, Base::Polynomial).unwrap();
    let a = cohomology_mod(&k, 3, 1).unwrap().to_json();
    let b = cohomology_mod(&k, 3, 1).unwrap().to_json();
    assert_eq!(a, b);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let c = pool.install(|| cohomology_mod(&k, 3, 1).unwrap().to_json());
    assert_eq!(a, c);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tensor_is_concatenation(a in -5i64..=5, b in -5i64..=5, c in -5i64..=5, hodge in any::<bool>()) {
        let flavor = if hodge { Flavor::QHodge } else { Flavor::QDeRham };
        let p1 = Piece::koszul(vec![a], vec![scalar(flavor, a)]);
        let p2 = Piece::koszul(vec![b, c], vec![scalar(flavor, b), scalar(flavor, c)]);
        let cat = Piece::koszul(vec![a, b, c], vec![scalar(flavor, a), scalar(flavor, b), scalar(flavor, c)]);
        prop_assert!(tensor_matches_koszul(&p1, &p2, &cat));
        prop_assert!(cat.d_squared_zero());
    }

    #[test]
    fn frobenius_intertwining(a in -4i64..=4, b in -4i64..=4, d in 1u64..=3, f in 1u64..=2) {
        let s = ToricAlgebraSpec::new(vec![true, true], vec![(a, a), (b, b)]).unwrap();
        let k = build_complex(&s, Flavor::QHodge, Base::Polynomial).unwrap();
        let t = frobenius_transition(&k, d * f, d).unwrap();
        prop_assert!(t.intertwining_holds);
    }

    #[test]
    fn filtration_prediction(a in 0i64..=3, b in 0i64..=3, i in 0u32..=2) {
        let s = ToricAlgebraSpec::new(vec![false, false], vec![(a, a), (b, b)]).unwrap();
        let k = build_complex(&s, Flavor::QDeRham, Base::Quotient { m: 1, k: i + 3 }).unwrap();
        let f = qhodge_filtration(&k, i).unwrap();
        prop_assert!(f.prediction_holds);
        prop_assert!(f.shift_contained);
    }
}

