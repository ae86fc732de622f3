//! Cyclotomic polynomials and the standard q-analogues.

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::{divisors, moebius};
use crate::poly::ZqPoly;

/// `q^m - 1`.
pub fn q_power_minus_one(m: u64) -> ZqPoly {
    if m == 0 {
        return ZqPoly::zero();
    }
    ZqPoly::from_laurent(0, {
        let mut v = vec![BigInt::from(0); m as usize + 1];
        v[0] = BigInt::from(-1);
        v[m as usize] = BigInt::one();
        v
    })
}

/// `Phi_m(q)` from the Moebius product of `q^d - 1`.
pub fn cyclotomic(m: u64) -> ZqPoly {
    assert!(m >= 1, "cyclotomic index must be positive");
    let mut num = ZqPoly::one();
    let mut den = ZqPoly::one();
    for d in divisors(m) {
        match moebius(m / d) {
            1 => num = &num * &q_power_minus_one(d),
            -1 => den = &den * &q_power_minus_one(d),
            _ => {}
        }
    }
    num.div_exact(&den).expect("Moebius quotient is exact")
}

/// `[k]_q`; for `k < 0` this is `-q^k [-k]_q`.
pub fn q_integer(k: i64) -> ZqPoly {
    if k >= 0 {
        ZqPoly::from_coeffs(vec![BigInt::one(); k as usize])
    } else {
        -&q_integer(-k).shift(k)
    }
}

/// `[n]_q! = [1]_q [2]_q ... [n]_q`.
pub fn q_factorial(n: u64) -> ZqPoly {
    (1..=n as i64).fold(ZqPoly::one(), |acc, k| &acc * &q_integer(k))
}

/// Gaussian binomial, by exact division of q-factorials.
pub fn q_binomial(n: u64, k: u64) -> ZqPoly {
    assert!(k <= n, "q_binomial needs k <= n");
    let den = &q_factorial(k) * &q_factorial(n - k);
    q_factorial(n).div_exact(&den).expect("q-binomial division is exact")
}

/// `(q;q)_n = (1-q)(1-q^2)...(1-q^n)`.
pub fn q_pochhammer(n: u64) -> ZqPoly {
    (1..=n as i64).fold(ZqPoly::one(), |acc, k| {
        let f = &ZqPoly::one() - &ZqPoly::monomial(1, k);
        &acc * &f
    })
}

/// `[p]_q` written as a polynomial in `s = q - 1`: coefficients `C(p, i+1)`.
pub fn q_integer_in_s(p: u64) -> Vec<BigInt> {
    (0..p).map(|i| crate::arith::binomial(p, i + 1)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), ZqPoly::from_i64s(&[-1, 1]));
        assert_eq!(cyclotomic(2), ZqPoly::from_i64s(&[1, 1]));
        assert_eq!(cyclotomic(6), ZqPoly::from_i64s(&[1, -1, 1]));
        assert_eq!(cyclotomic(105).coeff(7), BigInt::from(-2));
    }

    #[test]
    fn q_analogue_examples() {
        assert_eq!(q_integer(3).to_string(), "1+q+q^2");
        assert_eq!(q_factorial(3).to_string(), "1+2q+2q^2+q^3");
        assert_eq!(q_pochhammer(2).to_string(), "1-q-q^2+q^3");
        assert_eq!(q_integer(-2).to_string(), "-q^-2-q^-1");
        assert_eq!(q_binomial(4, 2).to_string(), "1+q+2q^2+q^3+q^4");
    }
}
