//! Truncated expansions in `t = q - zeta_m` with coefficients in cyclotomic rings.

use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, factorize, valuation};
use crate::error::{Error, Result};
use crate::local::{LocalElement, Precision};
use crate::poly::ZqPoly;
use crate::ring::QuotientRing;

/// `sum c_k (q - zeta_center)^k`, `k < len`, with `c_k` in `Z[zeta_c]` or `(Z/p^a)[zeta_c]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSeries {
    center: u64,
    coeffs: Vec<LocalElement>,
}

impl RootSeries {
    /// All coefficients must share one precision with `N = 1` and index a multiple of `center`.
    pub fn new(center: u64, coeffs: Vec<LocalElement>) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return Err(Error::InvalidArgument("series length must be >= 1".into()));
        };
        let prec = *first.precision();
        if prec.n != 1 || prec.kind != crate::local::ModulusKind::Cyclotomic || prec.m % center != 0 {
            return Err(Error::IndexMismatch(format!("coefficient ring {:?} for center {center}", prec)));
        }
        if coeffs.iter().any(|c| c.precision() != &prec) {
            return Err(Error::PrecisionMismatch);
        }
        Ok(RootSeries { center, coeffs })
    }

    pub fn center(&self) -> u64 {
        self.center
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[LocalElement] {
        &self.coeffs
    }

    pub fn coefficient_precision(&self) -> &Precision {
        self.coeffs[0].precision()
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.center != other.center || self.len() != other.len() {
            return Err(Error::IndexMismatch("series centers or lengths differ".into()));
        }
        if self.coefficient_precision() != other.coefficient_precision() {
            return Err(Error::PrecisionMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(RootSeries { center: self.center, coeffs })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let n = self.len();
        let ring = self.coeffs[0].ring();
        let mut out = vec![ZqPoly::zero(); n];
        for i in 0..n {
            for j in 0..n - i {
                out[i + j] = &out[i + j] + &(self.coeffs[i].rep() * other.coeffs[j].rep());
            }
        }
        let prec = *self.coefficient_precision();
        let coeffs = out.iter().map(|c| LocalElement::with_ring(c, prec, ring.clone())).collect();
        Ok(RootSeries { center: self.center, coeffs })
    }

    /// Replace coefficient `k` (for building negative controls).
    pub fn with_coeff(&self, k: usize, c: &ZqPoly) -> Self {
        let mut out = self.clone();
        out.coeffs[k] = self.coeffs[k].lift(c);
        out
    }
}

/// Dense truncated series arithmetic over a quotient ring.
fn series_mul(ring: &QuotientRing, a: &[ZqPoly], b: &[ZqPoly], n: usize) -> Vec<ZqPoly> {
    let mut out = vec![ZqPoly::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out.iter().map(|c| ring.reduce(c)).collect()
}

/// Coefficients of `f(zeta_m + t)` up to `t^(n-1)`, over `Z[zeta_c]` with `zeta_m = zeta_c^(c/m)`
/// and optionally reduced mod `p^a`.
fn expand_at(f: &ZqPoly, zeta: &ZqPoly, ring: &QuotientRing, n: usize) -> Result<Vec<ZqPoly>> {
    let mut acc = vec![ZqPoly::zero(); n];
    let Some(deg) = f.degree() else { return Ok(acc) };
    let lin = [ring.reduce(zeta), ZqPoly::one()];
    // Horner on the polynomial part, q^offset applied afterwards
    for e in (f.offset()..=deg).rev() {
        acc = series_mul(ring, &acc, &lin, n);
        acc[0] = ring.add(&acc[0], &ZqPoly::constant(f.coeff(e)));
    }
    if f.offset() != 0 {
        let base: Vec<ZqPoly> = if f.offset() > 0 {
            lin.to_vec()
        } else {
            // 1/(zeta + t) = zeta^-1 sum (-zeta^-1 t)^i
            let zi = ring.inverse(zeta)?;
            let mut v = Vec::with_capacity(n);
            let mut term = zi.clone();
            for _ in 0..n {
                v.push(term.clone());
                term = ring.neg(&ring.mul(&term, &zi));
            }
            v
        };
        let mut pw = vec![ZqPoly::zero(); n];
        pw[0] = ZqPoly::one();
        for _ in 0..f.offset().unsigned_abs() {
            pw = series_mul(ring, &pw, &base, n);
        }
        acc = series_mul(ring, &acc, &pw, n);
    }
    Ok(acc)
}

/// Taylor coefficients of `f` at `zeta_m`, over `Z[zeta_m]`.
pub fn taylor_at_root(f: &ZqPoly, m: u64, n: usize) -> Result<RootSeries> {
    taylor_at_root_in(f, m, Precision::root_of_unity(m, None), n)
}

/// Taylor coefficients of `f` at `zeta_m` inside the coefficient ring of `prec`,
/// using the embedding `zeta_m -> zeta_c^e` of [`embedding_exponent`].
pub fn taylor_at_root_in(f: &ZqPoly, m: u64, prec: Precision, n: usize) -> Result<RootSeries> {
    if n == 0 {
        return Err(Error::InvalidArgument("series length must be >= 1".into()));
    }
    let ring = Arc::new(prec.ring());
    let zeta = ZqPoly::monomial(1, embedding_exponent(m, prec.m)? as i64);
    let coeffs = expand_at(f, &zeta, &ring, n)?;
    let coeffs = coeffs.iter().map(|c| LocalElement::with_ring(c, prec, ring.clone())).collect();
    RootSeries::new(m, coeffs)
}

/// Exponent `e` with `zeta_m -> zeta_big^e`: for each prime `l | big`,
/// `e = l^(v_l(big) - v_l(m)) mod l^(v_l(big))`, glued by CRT.
pub fn embedding_exponent(m: u64, big: u64) -> Result<u64> {
    if m == 0 || big % m != 0 {
        return Err(Error::IndexMismatch(format!("{m} does not divide {big}")));
    }
    let mut e: u64 = 0;
    let mut modulus: u64 = 1;
    for (l, v) in factorize(big) {
        let lv = l.pow(v);
        let r = l.pow(v - valuation(m, l)) % lv;
        // solve x = e mod modulus, x = r mod lv
        let mut x = e;
        while x % lv != r {
            x += modulus;
        }
        e = x;
        modulus *= lv;
    }
    Ok(e % big.max(1))
}

/// Ring map `Z[zeta_m] -> Z[zeta_big]` (or its mod-`p^a` version) on an `N = 1` element.
pub fn embed_cyclotomic(c: &LocalElement, big: u64) -> Result<LocalElement> {
    let prec = *c.precision();
    if prec.n != 1 || prec.kind != crate::local::ModulusKind::Cyclotomic {
        return Err(Error::IndexMismatch("embedding needs a cyclotomic residue ring".into()));
    }
    let e = embedding_exponent(prec.m, big)?;
    let target = Precision { m: big, ..prec };
    let rep = c.rep().substitute_power(e as u32);
    Ok(LocalElement::new(&rep, target))
}

/// `c = zeta_m - zeta_pm` in `(Z/p^a)[zeta_pm]` and the least `k` with `c^k = 0`.
pub fn recentering_constant(m: u64, p: u64, a: u32) -> Result<(LocalElement, usize)> {
    let pm = p * m;
    let prec = Precision::root_of_unity(pm, Some((p, a)));
    let e = embedding_exponent(m, pm)?;
    let c = LocalElement::new(&(&ZqPoly::monomial(1, e as i64) - &ZqPoly::q()), prec);
    let mut pw = LocalElement::one(prec);
    for k in 0..=(a as usize * crate::arith::euler_phi(pm) as usize + 1) {
        if pw.is_zero() {
            return Ok((c, k));
        }
        pw = &pw * &c;
    }
    Err(Error::InvalidArgument("recentering constant is not nilpotent".into()))
}

/// Input length needed by [`reexpand`] for `n` output terms.
pub fn reexpand_input_len(m: u64, p: u64, a: u32, n: usize) -> Result<usize> {
    Ok(n + recentering_constant(m, p, a)?.1 - 1)
}

/// Rewrite a series at `zeta_pm` as a series at `zeta_m` over `(Z/p^a)[zeta_pm]`.
///
/// Coefficient `j` of the result is `sum_k s_k C(k, j) c^(k-j)`, which only
/// involves `k < j + k_max`; so `n` output terms need `n + k_max - 1` input terms.
pub fn reexpand(s: &RootSeries, p: u64, a: u32, n: usize) -> Result<RootSeries> {
    if s.center() % p != 0 {
        return Err(Error::IndexMismatch(format!("center {} is not divisible by {p}", s.center())));
    }
    let m = s.center() / p;
    let pm = s.center();
    if s.coefficient_precision().m != pm {
        return Err(Error::IndexMismatch("input coefficients must live over the center's own ring".into()));
    }
    let (c, kmax) = recentering_constant(m, p, a)?;
    let needed = n + kmax - 1;
    if s.len() < needed {
        return Err(Error::InsufficientInputPrecision { needed, got: s.len() });
    }
    let prec = *c.precision();
    let ring = c.ring().clone();
    let mut cpow = vec![LocalElement::one(prec)];
    for _ in 1..kmax {
        let next = cpow.last().unwrap() * &c;
        cpow.push(next);
    }
    let inputs: Vec<ZqPoly> = s.coeffs().iter().map(|x| ring.reduce(x.rep())).collect();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = ZqPoly::zero();
        for (d, cp) in cpow.iter().enumerate() {
            let k = j + d;
            let b: BigInt = binomial(k as u64, j as u64);
            acc = &acc + &(&inputs[k] * cp.rep()).scale(&b);
        }
        out.push(LocalElement::with_ring(&acc, prec, ring.clone()));
    }
    RootSeries::new(m, out)
}

/// Image of a series over `Z[zeta_m]` at `zeta_m` in `(Z/p^a)[zeta_pm]`, same center.
pub fn canonical_image(s: &RootSeries, p: u64, a: u32) -> Result<RootSeries> {
    let pm = p * s.center();
    let prec = Precision::root_of_unity(pm, Some((p, a)));
    let ring = Arc::new(prec.ring());
    let e = embedding_exponent(s.coefficient_precision().m, pm)?;
    let coeffs = s
        .coeffs()
        .iter()
        .map(|c| LocalElement::with_ring(&c.rep().substitute_power(e as u32), prec, ring.clone()))
        .collect();
    RootSeries::new(s.center(), coeffs)
}
