//! Small number-theoretic helpers on machine-size indices.

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub fn divisors(m: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m % d == 0 {
            small.push(d);
            if d * d != m {
                large.push(m / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Prime factorisation as `(prime, exponent)` pairs, ascending.
pub fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

pub fn moebius(m: u64) -> i32 {
    let f = factorize(m);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).len() == 1 && factorize(n)[0].1 == 1
}

pub fn valuation(mut m: u64, p: u64) -> u32 {
    let mut v = 0;
    while m > 0 && m % p == 0 {
        m /= p;
        v += 1;
    }
    v
}

/// `p`-adic valuation of a nonzero big integer.
pub fn valuation_big(m: &BigInt, p: u64) -> u32 {
    let pb = BigInt::from(p);
    let mut m = m.clone();
    let mut v = 0;
    while !m.is_zero() && (&m % &pb).is_zero() {
        m /= &pb;
        v += 1;
    }
    v
}

pub fn euler_phi(m: u64) -> u64 {
    factorize(m).iter().fold(m, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn pow_u(p: u64, a: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), a as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisors_sorted() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
    }

    #[test]
    fn moebius_values() {
        assert_eq!((1..=10).map(moebius).collect::<Vec<_>>(), vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }
}
