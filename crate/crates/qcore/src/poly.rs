//! Laurent polynomials in `q` with arbitrary-precision integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision integer used throughout the library.
pub type Integer = BigInt;

/// `sum coeffs[k] q^(offset + k)`, kept trimmed at both ends.
///
/// The zero polynomial has offset 0 and no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ZqPoly {
    offset: i64,
    coeffs: Vec<BigInt>,
}

impl ZqPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn q() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_laurent(0, vec![c.into()])
    }

    pub fn monomial(c: impl Into<BigInt>, exp: i64) -> Self {
        Self::from_laurent(exp, vec![c.into()])
    }

    /// Coefficients of `q^0, q^1, ...`.
    pub fn from_coeffs<T: Into<BigInt>>(coeffs: Vec<T>) -> Self {
        Self::from_laurent(0, coeffs.into_iter().map(Into::into).collect())
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_laurent(0, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn from_laurent(offset: i64, coeffs: Vec<BigInt>) -> Self {
        let mut p = ZqPoly { offset, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.offset += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.offset = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.offset == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest exponent carrying a nonzero coefficient (0 for the zero polynomial).
    pub fn valuation(&self) -> i64 {
        self.offset
    }

    /// Highest exponent, `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.offset + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        let k = exp - self.offset;
        if k < 0 || k as usize >= self.coeffs.len() {
            BigInt::zero()
        } else {
            self.coeffs[k as usize].clone()
        }
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_polynomial(&self) -> bool {
        self.offset >= 0
    }

    /// Dense coefficient vector of `q^0..q^len-1`; requires no negative exponents.
    pub fn dense(&self, len: usize) -> Vec<BigInt> {
        debug_assert!(self.is_polynomial());
        (0..len as i64).map(|e| self.coeff(e)).collect()
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        ZqPoly { offset: self.offset + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_laurent(self.offset, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, x: &BigInt) -> Option<num_rational::BigRational> {
        use num_rational::BigRational;
        if x.is_zero() && self.offset < 0 {
            return None;
        }
        let mut acc = BigRational::zero();
        let xr = BigRational::from_integer(x.clone());
        for c in self.coeffs.iter().rev() {
            acc = acc * &xr + BigRational::from_integer(c.clone());
        }
        Some(acc * pow_rat(&xr, self.offset))
    }

    /// Value at `q = 1`.
    pub fn eval_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// `f(q) -> f(q^k)`; `k = 0` gives the constant `f(1)`.
    pub fn substitute_power(&self, k: u32) -> Self {
        if k == 0 {
            return Self::constant(self.eval_one());
        }
        let k = k as i64;
        let mut out = vec![BigInt::zero(); if self.is_zero() { 0 } else { (self.coeffs.len() - 1) * k as usize + 1 }];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * k as usize] = c.clone();
        }
        Self::from_laurent(self.offset * k, out)
    }

    /// `f(q) -> f(q + c)`; requires a polynomial.
    pub fn taylor_shift(&self, c: &BigInt) -> Self {
        assert!(self.is_polynomial(), "taylor_shift needs a polynomial");
        let dense = self.dense((self.degree().unwrap_or(-1) + 1) as usize);
        let mut a = dense;
        let n = a.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &a[j + 1] * c;
                a[j] += t;
            }
        }
        Self::from_coeffs(a)
    }

    /// Coefficients of `f(1 + s)` in powers of `s`.
    pub fn in_s(&self) -> Vec<BigInt> {
        let shifted = self.taylor_shift(&BigInt::one());
        shifted.dense((shifted.degree().unwrap_or(-1) + 1) as usize)
    }

    /// Polynomial in `q` from coefficients in powers of `s = q - 1`.
    pub fn from_s(coeffs: &[BigInt]) -> Self {
        Self::from_coeffs(coeffs.to_vec()).taylor_shift(&BigInt::from(-1))
    }

    /// Division with remainder by a monic polynomial; both must be polynomials.
    pub fn div_rem_monic(&self, m: &ZqPoly) -> (ZqPoly, ZqPoly) {
        assert!(self.is_polynomial() && m.is_polynomial());
        assert!(m.leading_coeff().is_one(), "divisor must be monic");
        let dm = m.degree().unwrap() as usize;
        let Some(df) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        let df = df as usize;
        if df < dm {
            return (Self::zero(), self.clone());
        }
        let mut r = self.dense(df + 1);
        let md = m.dense(dm + 1);
        let mut quo = vec![BigInt::zero(); df - dm + 1];
        for k in (0..=df - dm).rev() {
            let c = r[k + dm].clone();
            if c.is_zero() {
                continue;
            }
            for (j, mj) in md.iter().enumerate() {
                if !mj.is_zero() {
                    r[k + j] -= &c * mj;
                }
            }
            quo[k] = c;
        }
        r.truncate(dm);
        (Self::from_coeffs(quo), Self::from_coeffs(r))
    }

    /// Exact division in `Z[q, q^-1]`, failing when the quotient is not integral.
    pub fn div_exact(&self, d: &ZqPoly) -> Result<ZqPoly> {
        if d.is_zero() {
            return Err(Error::DivisionNotExact("division by zero polynomial".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let num = self.shift(-self.offset);
        let den = d.shift(-d.offset);
        let dn = num.degree().unwrap() as usize;
        let dd = den.degree().unwrap() as usize;
        if dn < dd {
            return Err(Error::DivisionNotExact(format!("{self} by {d}")));
        }
        let lc = den.leading_coeff();
        let mut r = num.dense(dn + 1);
        let dv = den.dense(dd + 1);
        let mut quo = vec![BigInt::zero(); dn - dd + 1];
        for k in (0..=dn - dd).rev() {
            let c = &r[k + dd];
            if c.is_zero() {
                continue;
            }
            let (qk, rem) = c.div_rem(&lc);
            if !rem.is_zero() {
                return Err(Error::DivisionNotExact(format!("{self} by {d}")));
            }
            for (j, dj) in dv.iter().enumerate() {
                if !dj.is_zero() {
                    r[k + j] -= &qk * dj;
                }
            }
            quo[k] = qk;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return Err(Error::DivisionNotExact(format!("{self} by {d}")));
        }
        Ok(Self::from_coeffs(quo).shift(self.offset - d.offset))
    }

    /// Coefficientwise reduction into `[0, n)`.
    pub fn mod_coeffs(&self, n: &BigInt) -> Self {
        Self::from_laurent(self.offset, self.coeffs.iter().map(|c| c.mod_floor(n)).collect())
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * BigInt::from(self.offset + i as i64))
            .collect::<Vec<_>>();
        Self::from_laurent(self.offset - 1, coeffs)
    }
}

fn pow_rat(x: &num_rational::BigRational, e: i64) -> num_rational::BigRational {
    use num_traits::Pow;
    if e >= 0 {
        x.clone().pow(e as u64)
    } else {
        x.recip().pow((-e) as u64)
    }
}

impl Add for &ZqPoly {
    type Output = ZqPoly;
    fn add(self, rhs: &ZqPoly) -> ZqPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.offset.min(rhs.offset);
        let hi = self.degree().unwrap().max(rhs.degree().unwrap());
        let coeffs = (lo..=hi).map(|e| self.coeff(e) + rhs.coeff(e)).collect();
        ZqPoly::from_laurent(lo, coeffs)
    }
}

impl Sub for &ZqPoly {
    type Output = ZqPoly;
    fn sub(self, rhs: &ZqPoly) -> ZqPoly {
        self + &(-rhs)
    }
}

impl Neg for &ZqPoly {
    type Output = ZqPoly;
    fn neg(self) -> ZqPoly {
        ZqPoly { offset: self.offset, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &ZqPoly {
    type Output = ZqPoly;
    fn mul(self, rhs: &ZqPoly) -> ZqPoly {
        if self.is_zero() || rhs.is_zero() {
            return ZqPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZqPoly::from_laurent(self.offset + rhs.offset, out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ZqPoly {
            type Output = ZqPoly;
            fn $m(self, rhs: ZqPoly) -> ZqPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&ZqPoly> for ZqPoly {
            type Output = ZqPoly;
            fn $m(self, rhs: &ZqPoly) -> ZqPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for ZqPoly {
    type Output = ZqPoly;
    fn neg(self) -> ZqPoly {
        -&self
    }
}

/// Lowest degree first, e.g. `1+2q+2q^2+q^3` or `-q^-2-q^-1`.
impl fmt::Display for ZqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.offset + i as i64;
            let neg = c.is_negative();
            let mag = c.abs();
            if neg {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let var = match e {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{e}"),
            };
            if var.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{mag}{var}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ZqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZqPoly({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    offset: i64,
    coeffs: Vec<String>,
}

impl Serialize for ZqPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyRepr { offset: self.offset, coeffs: self.coeffs.iter().map(|c| c.to_string()).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ZqPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PolyRepr::deserialize(d)?;
        let coeffs = r
            .coeffs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(ZqPoly::from_laurent(r.offset, coeffs))
    }
}

/// Serde helpers writing integers as decimal strings.
pub mod bigint_str {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use num_bigint::BigInt;
        use serde::{Deserialize, Deserializer, Serializer, ser::SerializeSeq};

        pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for x in v {
                seq.serialize_element(&x.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter().map(|s| s.parse().map_err(serde::de::Error::custom)).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_orders_low_to_high() {
        let p = ZqPoly::from_i64s(&[1, 2, 2, 1]);
        assert_eq!(p.to_string(), "1+2q+2q^2+q^3");
        let n = ZqPoly::from_laurent(-2, vec![(-1).into(), (-1).into()]);
        assert_eq!(n.to_string(), "-q^-2-q^-1");
    }

    #[test]
    fn exact_division_detects_remainder() {
        let a = ZqPoly::from_i64s(&[-1, 0, 1]);
        let b = ZqPoly::from_i64s(&[-1, 1]);
        assert_eq!(a.div_exact(&b).unwrap(), ZqPoly::from_i64s(&[1, 1]));
        assert!(ZqPoly::from_i64s(&[1, 0, 1]).div_exact(&b).is_err());
    }

    #[test]
    fn taylor_shift_roundtrip() {
        let p = ZqPoly::from_i64s(&[3, -1, 4, 1]);
        assert_eq!(ZqPoly::from_s(&p.in_s()), p);
    }
}
