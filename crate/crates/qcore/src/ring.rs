//! `Z[q]/(p^a, F)` and `Z[q]/F` for a monic modulus `F`, with explicit reduction.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::poly::ZqPoly;

/// Quotient ring with canonical representatives of degree `< deg F`,
/// coefficients in `[0, p^a)` when a prime part is present.
///
/// `radical` is a monic `f` with `f^k` in the ideal for some `k`; units are
/// detected on `Z[q]/f` (or `F_p[q]/f`) and lifted by Newton iteration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientRing {
    modulus: ZqPoly,
    radical: ZqPoly,
    prime: Option<(u64, BigInt)>,
    qinv: Option<ZqPoly>,
}

impl QuotientRing {
    pub fn new(modulus: ZqPoly, radical: ZqPoly, prime: Option<(u64, u32)>) -> Self {
        assert!(modulus.is_polynomial() && modulus.leading_coeff().is_one(), "modulus must be monic");
        assert!(radical.is_polynomial() && radical.leading_coeff().is_one(), "radical must be monic");
        assert!(modulus.degree().unwrap() >= 1, "modulus must have positive degree");
        let prime = prime.map(|(p, a)| (p, crate::arith::pow_u(p, a)));
        let mut ring = QuotientRing { modulus, radical, prime, qinv: None };
        ring.qinv = ring.compute_qinv();
        ring
    }

    fn compute_qinv(&self) -> Option<ZqPoly> {
        // F = q h + c0, so q * (-h / c0) = 1
        let c0 = self.modulus.coeff(0);
        let c0_inv = if c0.abs().is_one() {
            c0.clone()
        } else {
            let (_, pa) = self.prime.as_ref()?;
            let g = c0.extended_gcd(pa);
            if !g.gcd.is_one() {
                return None;
            }
            g.x
        };
        let h = ZqPoly::from_coeffs(self.modulus.coeffs()[1..].to_vec()).shift(self.modulus.offset());
        Some(self.reduce_poly(&(-&h).scale(&c0_inv)))
    }

    pub fn modulus(&self) -> &ZqPoly {
        &self.modulus
    }

    pub fn radical(&self) -> &ZqPoly {
        &self.radical
    }

    pub fn prime(&self) -> Option<u64> {
        self.prime.as_ref().map(|(p, _)| *p)
    }

    /// `p^a`, if a prime part is present.
    pub fn coefficient_modulus(&self) -> Option<&BigInt> {
        self.prime.as_ref().map(|(_, pa)| pa)
    }

    /// Rank of the ring as a `Z`- or `Z/p^a`-module.
    pub fn dim(&self) -> usize {
        self.modulus.degree().unwrap() as usize
    }

    fn reduce_poly(&self, x: &ZqPoly) -> ZqPoly {
        let (_, r) = x.div_rem_monic(&self.modulus);
        match &self.prime {
            Some((_, pa)) => r.mod_coeffs(pa),
            None => r,
        }
    }

    /// Canonical representative. Negative powers of `q` need `q` to be a unit.
    pub fn reduce(&self, x: &ZqPoly) -> ZqPoly {
        if x.is_polynomial() {
            return self.reduce_poly(x);
        }
        let qinv = self.qinv.as_ref().expect("q is not a unit in this quotient");
        let k = -x.offset();
        let body = self.reduce_poly(&x.shift(k));
        let mut acc = body;
        for _ in 0..k {
            acc = self.mul(&acc, qinv);
        }
        acc
    }

    pub fn add(&self, a: &ZqPoly, b: &ZqPoly) -> ZqPoly {
        self.reduce_poly(&(a + b))
    }

    pub fn sub(&self, a: &ZqPoly, b: &ZqPoly) -> ZqPoly {
        self.reduce_poly(&(a - b))
    }

    pub fn neg(&self, a: &ZqPoly) -> ZqPoly {
        self.reduce_poly(&-a)
    }

    pub fn mul(&self, a: &ZqPoly, b: &ZqPoly) -> ZqPoly {
        self.reduce_poly(&(a * b))
    }

    pub fn pow(&self, a: &ZqPoly, mut e: u64) -> ZqPoly {
        let mut base = self.reduce(a);
        let mut acc = self.reduce(&ZqPoly::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn is_zero(&self, a: &ZqPoly) -> bool {
        self.reduce(a).is_zero()
    }

    /// Coordinates in the basis `1, q, ..., q^(D-1)` of a reduced element.
    pub fn coords(&self, a: &ZqPoly) -> Vec<BigInt> {
        self.reduce(a).dense(self.dim())
    }

    /// Multiplication-by-`a` matrix; column `j` is `a q^j`.
    pub fn mult_matrix(&self, a: &ZqPoly) -> IntMatrix {
        let d = self.dim();
        let a = self.reduce(a);
        let cols: Vec<Vec<BigInt>> = (0..d).map(|j| self.reduce(&a.shift(j as i64)).dense(d)).collect();
        IntMatrix::from_cols(d, &cols)
    }

    /// Inverse on the residue ring `Z[q]/f` or `F_p[q]/f`.
    fn residue_inverse(&self, a: &ZqPoly) -> Result<ZqPoly> {
        let f = &self.radical;
        let d = f.degree().unwrap() as usize;
        if d == 0 {
            return Ok(ZqPoly::zero());
        }
        let (_, a0) = a.div_rem_monic(f);
        let cols: Vec<Vec<BigInt>> = (0..d).map(|j| a0.shift(j as i64).div_rem_monic(f).1.dense(d)).collect();
        let m = IntMatrix::from_cols(d, &cols);
        let mut e0 = vec![BigInt::zero(); d];
        e0[0] = BigInt::one();
        match &self.prime {
            Some((p, _)) => {
                let y = linalg::solve_square_mod_p(&m, &e0, *p).ok_or(Error::NotAUnit)?;
                Ok(ZqPoly::from_coeffs(y.into_iter().map(BigInt::from).collect()))
            }
            None => {
                let y = linalg::solve_integer(&m, &e0).ok_or(Error::NotAUnit)?;
                Ok(ZqPoly::from_coeffs(y))
            }
        }
    }

    /// Two-sided inverse, by Newton lifting `r <- r (2 - a r)` from the residue ring.
    pub fn inverse(&self, a: &ZqPoly) -> Result<ZqPoly> {
        let a = self.reduce(a);
        let one = self.reduce(&ZqPoly::one());
        let two = ZqPoly::constant(2);
        let mut r = self.reduce(&self.residue_inverse(&a)?);
        for _ in 0..64 {
            let ar = self.mul(&a, &r);
            if ar == one {
                return Ok(r);
            }
            r = self.mul(&r, &self.sub(&two, &ar));
        }
        Err(Error::NotAUnit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qanalog::cyclotomic;

    #[test]
    fn laurent_reduction_uses_q_inverse() {
        let f = cyclotomic(3);
        let r = QuotientRing::new(f.clone(), f, None);
        let qinv = r.reduce(&ZqPoly::monomial(1, -1));
        assert!(r.mul(&qinv, &ZqPoly::q()).is_one());
    }

    #[test]
    fn inverse_mod_prime_power() {
        let f = cyclotomic(1);
        let r = QuotientRing::new(f.pow(2), f, Some((3, 3)));
        let x = ZqPoly::from_i64s(&[1, 1]);
        let y = r.inverse(&x).unwrap();
        assert!(r.mul(&x, &y).is_one());
    }
}
