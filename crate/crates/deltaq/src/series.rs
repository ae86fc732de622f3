//! Truncated power series in `s = q - 1` that recur in the δ-ring calculus.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use qcore::arith::binomial;
use qcore::qanalog::q_integer_in_s;

use crate::poly::DeltaPoly;

pub fn mul_int(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n.min((a.len() + b.len()).saturating_sub(1))];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j >= out.len() {
                break;
            }
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn pow_int(a: &[BigInt], e: u32, n: usize) -> Vec<BigInt> {
    (0..e).fold(vec![BigInt::one()], |acc, _| mul_int(&acc, a, n))
}

pub fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Inverse of an integer series with constant term `±1`.
pub fn inv_int(a: &[BigInt], n: usize) -> Vec<BigInt> {
    assert!(a.first().is_some_and(|c| c.abs().is_one()), "constant term must be a sign");
    let c0 = a[0].clone();
    let mut out = vec![BigInt::zero(); n];
    for k in 0..n {
        let mut acc = if k == 0 { BigInt::one() } else { BigInt::zero() };
        for i in 1..=k.min(a.len() - 1) {
            acc -= &a[i] * &out[k - i];
        }
        out[k] = acc * &c0;
    }
    trim(out)
}

/// Inverse of a rational series with nonzero constant term.
pub fn inv_rat(a: &[BigRational], n: usize) -> Vec<BigRational> {
    let c0 = a[0].recip();
    let mut out = vec![BigRational::zero(); n];
    for k in 0..n {
        let mut acc = if k == 0 { BigRational::one() } else { BigRational::zero() };
        for i in 1..=k.min(a.len() - 1) {
            acc -= &a[i] * &out[k - i];
        }
        out[k] = acc * &c0;
    }
    out
}

fn rat(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().cloned().map(BigRational::from_integer).collect()
}

/// `[p]_q` in powers of `s`.
pub fn q_integer_series(p: u64, n: u32) -> DeltaPoly {
    DeltaPoly::s_series(p, 1, n, &rat(&q_integer_in_s(p)))
}

/// `1/[p]_q` in powers of `s`, by direct series inversion.
pub fn inv_q_integer(p: u64, n: u32) -> DeltaPoly {
    let inv = inv_rat(&rat(&q_integer_in_s(p)), n as usize);
    DeltaPoly::s_series(p, 1, n, &inv)
}

/// `u` with `[p]_q = p u + s^(p-1)`, in powers of `s`.
pub fn unit_s(p: u64, n: u32) -> Vec<BigInt> {
    let u = qcore::unit_decompose(p, n).expect("p is prime");
    let mut v = u.rep().in_s();
    v.truncate(n as usize);
    trim(v)
}

/// `1/[p]_q = sum_i (-1)^i s^((p-1)i) / (p^(i+1) u^(i+1))`, from the unit decomposition.
pub fn inv_q_integer_via_unit(p: u64, n: u32) -> DeltaPoly {
    let n_us = n as usize;
    let uinv = inv_int(&unit_s(p, n), n_us);
    let mut total = vec![BigRational::zero(); n_us];
    let mut upow = uinv.clone();
    let mut i = 0usize;
    while (p as usize - 1) * i < n_us {
        let shift = (p as usize - 1) * i;
        let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        let denom = num_traits::pow(BigInt::from(p), i + 1);
        for (k, c) in upow.iter().enumerate() {
            if shift + k < n_us {
                total[shift + k] += BigRational::new(c * &sign, denom.clone());
            }
        }
        upow = mul_int(&upow, &uinv, n_us);
        i += 1;
    }
    DeltaPoly::s_series(p, 1, n, &total)
}

/// `g = φ(s)/s = ((1+s)^p - 1)/s`.
pub fn g_series(p: u64) -> Vec<BigInt> {
    q_integer_in_s(p)
}

/// `c` with `γ_q(s) = -s^2 c`: `sum_{i=2}^{p-1} (C(p,i)/p) s^(i-2)`.
pub fn c_series(p: u64) -> Vec<BigInt> {
    trim((2..p).map(|i| binomial(p, i) / BigInt::from(p)).collect())
}

/// `h_j = (g^j - s^((p-1) j)) / p`, so that `δ(s^j) = s^j h_j`.
pub fn h_series(p: u64, j: u32, n: usize) -> Vec<BigInt> {
    let mut gj = pow_int(&g_series(p), j, n);
    let idx = (p as usize - 1) * j as usize;
    if idx < n {
        if gj.len() <= idx {
            gj.resize(idx + 1, BigInt::zero());
        }
        gj[idx] -= BigInt::one();
    }
    let pb = BigInt::from(p);
    trim(
        gj.into_iter()
            .map(|c| {
                assert!((&c % &pb).is_zero(), "h_j has integral coefficients");
                c / &pb
            })
            .collect(),
    )
}
