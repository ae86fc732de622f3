//! The q-derivative through the usual derivative after rationalisation:
//! `q∂ = (log q/(q-1) + sum_{n>=2} log(q)^n/(n!(q-1)) (∂T)^(n-1)) ∂`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

type Series = Vec<BigRational>;

fn mul_trunc(a: &Series, b: &Series, n: usize) -> Series {
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j >= n {
                break;
            }
            out[i + j] += x * y;
        }
    }
    out
}

/// `log(1 + s) = sum_{j>=1} (-1)^(j+1) s^j / j` up to `s^(n-1)`.
pub fn log_series(n: usize) -> Series {
    (0..n)
        .map(|j| {
            if j == 0 {
                BigRational::zero()
            } else {
                let sign = if j % 2 == 1 { 1 } else { -1 };
                BigRational::new(BigInt::from(sign), BigInt::from(j))
            }
        })
        .collect()
}

/// `[k]_q = ((1+s)^k - 1)/s = sum_{j>=1} C(k, j) s^(j-1)` with the generalised binomial.
pub fn q_integer_series(k: i64, n: usize) -> Series {
    let mut out = Vec::with_capacity(n);
    let mut c = BigRational::one();
    for j in 1..=n as i64 {
        c = c * BigRational::new(BigInt::from(k - j + 1), BigInt::from(j));
        out.push(c.clone());
    }
    out
}

/// Polynomials in `x^(±1)` with series coefficients.
type XPoly = BTreeMap<i64, Series>;

fn d_op(f: &XPoly) -> XPoly {
    let mut out = XPoly::new();
    for (&e, c) in f {
        if e != 0 {
            let k = BigRational::from_integer(BigInt::from(e));
            out.insert(e - 1, c.iter().map(|x| x * &k).collect());
        }
    }
    out
}

fn t_op(f: &XPoly) -> XPoly {
    f.iter().map(|(&e, c)| (e + 1, c.clone())).collect()
}

fn add_scaled(acc: &mut XPoly, f: &XPoly, c: &Series, n: usize) {
    for (&e, v) in f {
        let term = mul_trunc(c, v, n);
        let slot = acc.entry(e).or_insert_with(|| vec![BigRational::zero(); n]);
        for (a, b) in slot.iter_mut().zip(term) {
            *a += b;
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QPartialReport {
    pub n: usize,
    pub k: i64,
    /// Coefficients of `x^(k-1)` in powers of `q - 1`.
    pub operator: Vec<String>,
    pub expected: Vec<String>,
    pub stray_monomials: usize,
    pub matches: bool,
}

/// Applies the operator to `x^k` over `Q[x]⟦q-1⟧/(q-1)^n`.
pub fn rational_qpartial(n: usize, k: i64) -> QPartialReport {
    let log = log_series(n + 1);
    let mut x: XPoly = XPoly::new();
    let mut one = vec![BigRational::zero(); n];
    if n > 0 {
        one[0] = BigRational::one();
    }
    x.insert(k, one);
    let dx = d_op(&x);
    let mut acc = XPoly::new();
    let mut logpow = log.clone();
    let mut fact = BigInt::one();
    let mut iterate = dx.clone();
    for m in 1..=n {
        if m > 1 {
            logpow = mul_trunc(&logpow, &log, n + 1);
            fact *= BigInt::from(m);
            iterate = d_op(&t_op(&iterate));
        }
        // log(q)^m / (m! (q - 1)): drop the leading zero coefficient
        let c: Series = logpow[1..].iter().map(|v| v / BigRational::from_integer(fact.clone())).collect();
        add_scaled(&mut acc, &iterate, &c, n);
    }
    acc.retain(|_, v| v.iter().any(|c| !c.is_zero()));
    let expected = q_integer_series(k, n);
    let got = acc.get(&(k - 1)).cloned().unwrap_or_else(|| vec![BigRational::zero(); n]);
    let stray = acc.keys().filter(|&&e| e != k - 1).count();
    let matches = stray == 0 && got == expected;
    QPartialReport {
        n,
        k,
        operator: got.iter().map(|c| c.to_string()).collect(),
        expected: expected.iter().map(|c| c.to_string()).collect(),
        stray_monomials: stray,
        matches,
    }
}
