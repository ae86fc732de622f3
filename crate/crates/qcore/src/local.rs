//! Elements of truncated completions `Z[q]/(p^a, f(q)^N)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::ZqPoly;
use crate::qanalog::{cyclotomic, q_integer, q_power_minus_one};
use crate::ring::QuotientRing;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulusKind {
    /// `Phi_m(q)`
    Cyclotomic,
    /// `q^m - 1`
    QPowerMinusOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePart {
    pub p: u64,
    pub a: u32,
}

/// Which completion an element lives in, at which precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Precision {
    pub prime: Option<PrimePart>,
    pub kind: ModulusKind,
    pub m: u64,
    pub n: u32,
}

impl Precision {
    pub fn new(prime: Option<(u64, u32)>, kind: ModulusKind, m: u64, n: u32) -> Result<Self> {
        if let Some((p, a)) = prime {
            if !crate::arith::is_prime(p) {
                return Err(Error::InvalidArgument(format!("{p} is not prime")));
            }
            if a == 0 {
                return Err(Error::InvalidArgument("p-adic exponent must be >= 1".into()));
            }
        }
        if m == 0 || n == 0 {
            return Err(Error::InvalidArgument("modulus index and length must be >= 1".into()));
        }
        Ok(Precision { prime: prime.map(|(p, a)| PrimePart { p, a }), kind, m, n })
    }

    /// `Z[q]/(q-1)^n`, i.e. truncation in `s = q - 1`.
    pub fn q_minus_one(n: u32) -> Self {
        Precision { prime: None, kind: ModulusKind::Cyclotomic, m: 1, n }
    }

    /// `Z[zeta_m]` or `(Z/p^a)[zeta_m]`.
    pub fn root_of_unity(m: u64, prime: Option<(u64, u32)>) -> Self {
        Precision { prime: prime.map(|(p, a)| PrimePart { p, a }), kind: ModulusKind::Cyclotomic, m, n: 1 }
    }

    /// The base polynomial `f` (not raised to `N`).
    pub fn base_poly(&self) -> ZqPoly {
        match self.kind {
            ModulusKind::Cyclotomic => cyclotomic(self.m),
            ModulusKind::QPowerMinusOne => q_power_minus_one(self.m),
        }
    }

    pub fn modulus(&self) -> ZqPoly {
        self.base_poly().pow(self.n)
    }

    pub fn ring(&self) -> QuotientRing {
        let f = self.base_poly();
        QuotientRing::new(f.pow(self.n), f, self.prime.map(|pp| (pp.p, pp.a)))
    }
}

/// Reduced representative together with its precision.
#[derive(Clone)]
pub struct LocalElement {
    rep: ZqPoly,
    precision: Precision,
    ring: Arc<QuotientRing>,
}

impl PartialEq for LocalElement {
    fn eq(&self, other: &Self) -> bool {
        self.precision == other.precision && self.rep == other.rep
    }
}

impl Eq for LocalElement {}

impl LocalElement {
    pub fn new(rep: &ZqPoly, precision: Precision) -> Self {
        Self::with_ring(rep, precision, Arc::new(precision.ring()))
    }

    /// Construct sharing an already built ring for `precision`.
    pub fn with_ring(rep: &ZqPoly, precision: Precision, ring: Arc<QuotientRing>) -> Self {
        let rep = ring.reduce(rep);
        LocalElement { rep, precision, ring }
    }

    fn same(&self, rep: ZqPoly) -> Self {
        LocalElement { rep, precision: self.precision, ring: self.ring.clone() }
    }

    pub fn zero(precision: Precision) -> Self {
        Self::new(&ZqPoly::zero(), precision)
    }

    pub fn one(precision: Precision) -> Self {
        Self::new(&ZqPoly::one(), precision)
    }

    /// Another element of the same ring.
    pub fn lift(&self, rep: &ZqPoly) -> Self {
        self.same(self.ring.reduce(rep))
    }

    pub fn rep(&self) -> &ZqPoly {
        &self.rep
    }

    pub fn precision(&self) -> &Precision {
        &self.precision
    }

    pub fn ring(&self) -> &Arc<QuotientRing> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rep.is_one()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.precision != other.precision {
            return Err(Error::PrecisionMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.same(self.ring.add(&self.rep, &other.rep)))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.same(self.ring.sub(&self.rep, &other.rep)))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.same(self.ring.mul(&self.rep, &other.rep)))
    }

    pub fn neg(&self) -> Self {
        self.same(self.ring.neg(&self.rep))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        self.same(self.ring.reduce(&self.rep.scale(c)))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.same(self.ring.pow(&self.rep, e))
    }

    pub fn invert(&self) -> Result<Self> {
        Ok(self.same(self.ring.inverse(&self.rep)?))
    }
}

macro_rules! local_op {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr for &LocalElement {
            type Output = LocalElement;
            /// Panics on precision mismatch; use the `try_` form to handle it.
            fn $m(self, rhs: &LocalElement) -> LocalElement {
                self.$f(rhs).expect("precision mismatch")
            }
        }
    };
}
local_op!(Add, add, try_add);
local_op!(Sub, sub, try_sub);
local_op!(Mul, mul, try_mul);

impl fmt::Debug for LocalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @ {:?}", self.rep, self.precision)
    }
}

impl fmt::Display for LocalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

#[derive(Serialize, Deserialize)]
struct LocalElementRepr {
    offset: i64,
    #[serde(with = "crate::poly::bigint_str::vec")]
    coeffs: Vec<BigInt>,
    precision: Precision,
}

impl Serialize for LocalElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LocalElementRepr { offset: self.rep.offset(), coeffs: self.rep.coeffs().to_vec(), precision: self.precision }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LocalElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = LocalElementRepr::deserialize(d)?;
        Ok(LocalElement::new(&ZqPoly::from_laurent(r.offset, r.coeffs), r.precision))
    }
}

/// `u = ([p]_q - (q-1)^(p-1)) / p` modulo `(q-1)^n`.
pub fn unit_decompose(p: u64, n: u32) -> Result<LocalElement> {
    if !crate::arith::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let s = ZqPoly::from_i64s(&[-1, 1]);
    let diff = &q_integer(p as i64) - &s.pow(p as u32 - 1);
    let u = diff.div_exact(&ZqPoly::constant(p))?;
    Ok(LocalElement::new(&u, Precision::new(None, ModulusKind::Cyclotomic, 1, n)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_decompose_small_cases() {
        assert!(unit_decompose(2, 4).unwrap().is_one());
        assert_eq!(unit_decompose(3, 4).unwrap().rep(), &ZqPoly::q());
    }

    #[test]
    fn json_roundtrip() {
        let e = LocalElement::new(&ZqPoly::from_i64s(&[5, 7]), Precision::new(Some((3, 2)), ModulusKind::Cyclotomic, 2, 2).unwrap());
        let js = serde_json::to_string(&e).unwrap();
        let back: LocalElement = serde_json::from_str(&js).unwrap();
        assert_eq!(back, e);
    }
}
