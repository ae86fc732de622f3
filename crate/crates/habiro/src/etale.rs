//! Etale algebras `Z[x]/g [1/Δ]` and their Frobenius lifts.

use num_bigint::BigInt;

use num_traits::{One, Signed, Zero};
use qcore::arith::factorize;
use qcore::linalg::{determinant, IntMatrix};
use qcore::{QuotientRing, ZqPoly};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaleAlgebraSpec {
    pub g: ZqPoly,
    pub delta: BigInt,
}

/// Input format: `{"g": [coefficient strings, constant term first], "delta": string}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EtaleSpecJson {
    pub g: Vec<String>,
    pub delta: String,
}

impl EtaleAlgebraSpec {
    pub fn new(g: ZqPoly, delta: BigInt) -> Result<Self> {
        if !g.is_polynomial() || g.degree().unwrap_or(0) < 1 || !g.leading_coeff().is_one() {
            return Err(Error::InvalidArgument(format!("g = {g} must be monic of positive degree")));
        }
        if !delta.is_positive() {
            return Err(Error::InvalidArgument("Δ must be positive".into()));
        }
        let disc = discriminant(&g);
        if disc.is_zero() {
            return Err(Error::InvalidArgument(format!("g = {g} has a repeated root")));
        }
        for p in prime_factors(&disc) {
            if !(&delta % &p).is_zero() {
                return Err(Error::InvalidArgument(format!("disc(g) = {disc} has prime factor {p} not inverted by Δ = {delta}")));
            }
        }
        Ok(EtaleAlgebraSpec { g, delta })
    }

    pub fn from_json(j: &EtaleSpecJson) -> Result<Self> {
        let parse = |s: &str| s.trim().parse::<BigInt>().map_err(|e| Error::InvalidArgument(format!("{s:?}: {e}")));
        let g = ZqPoly::from_coeffs(j.g.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>()?);
        Self::new(g, parse(&j.delta)?)
    }

    pub fn to_json(&self) -> EtaleSpecJson {
        let d = self.degree();
        EtaleSpecJson { g: (0..=d).map(|i| self.g.coeff(i as i64).to_string()).collect(), delta: self.delta.to_string() }
    }

    /// `Z`, `Z[i][1/2]` and `Z[x]/(x^2 - x - 1)[1/5]`.
    pub fn integers() -> Self {
        Self::new(ZqPoly::q(), BigInt::one()).unwrap()
    }

    pub fn gaussian() -> Self {
        Self::new(ZqPoly::from_i64s(&[1, 0, 1]), BigInt::from(2)).unwrap()
    }

    pub fn golden() -> Self {
        Self::new(ZqPoly::from_i64s(&[-1, -1, 1]), BigInt::from(5)).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.g.degree().unwrap() as usize
    }

    /// `R/p = 0` exactly when `p | Δ`.
    pub fn inverts(&self, p: u64) -> bool {
        (&self.delta % BigInt::from(p)).is_zero()
    }

    /// `(Z/p^a)[x]/g`.
    pub fn ring_mod(&self, p: u64, a: u32) -> QuotientRing {
        QuotientRing::new(self.g.clone(), self.g.clone(), Some((p, a)))
    }

    /// `Z[x]/g`.
    pub fn ring(&self) -> QuotientRing {
        QuotientRing::new(self.g.clone(), self.g.clone(), None)
    }
}

fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            while (&n % &d).is_zero() {
                n /= &d;
            }
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

/// Discriminant of a monic polynomial, `(-1)^(n(n-1)/2) Res(g, g')`.
pub fn discriminant(g: &ZqPoly) -> BigInt {
    let n = g.degree().unwrap() as usize;
    if n == 1 {
        return BigInt::one();
    }
    let dg = g.derivative();
    let m = n - 1;
    let size = n + m;
    let mut s = IntMatrix::zeros(size, size);
    for r in 0..m {
        for i in 0..=n {
            s[(r, r + i)] = g.coeff((n - i) as i64);
        }
    }
    for r in 0..n {
        for i in 0..=m {
            s[(m + r, r + i)] = dg.coeff((m - i) as i64);
        }
    }
    let res = determinant(&s);
    if (n * (n - 1) / 2) % 2 == 0 {
        res
    } else {
        -res
    }
}

/// `h(y)` in `ring`, for `h` with integer coefficients.
pub fn eval_in(ring: &QuotientRing, h: &ZqPoly, y: &ZqPoly) -> ZqPoly {
    let Some(deg) = h.degree() else { return ZqPoly::zero() };
    let mut acc = ZqPoly::zero();
    for e in (0..=deg).rev() {
        acc = ring.add(&ring.mul(&acc, y), &ZqPoly::constant(h.coeff(e)));
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusLift {
    pub p: u64,
    pub a: u32,
    /// `φ(x)` with coefficients in `[0, p^a)`.
    pub phi: ZqPoly,
    pub rounds: usize,
    /// `g(φ(x)) = 0` modulo `p^a`.
    pub is_root: bool,
    /// `φ(x) = x^p` modulo `p`.
    pub lifts_frobenius: bool,
    /// The iteration from the perturbed seed `x^p + p x` lands on the same `φ(x)`.
    pub unique: bool,
}

fn newton(spec: &EtaleAlgebraSpec, ring: &QuotientRing, seed: &ZqPoly) -> Result<(ZqPoly, usize)> {
    let dg = spec.g.derivative();
    let mut y = ring.reduce(seed);
    for round in 0..64 {
        let gy = eval_in(ring, &spec.g, &y);
        if gy.is_zero() {
            return Ok((y, round));
        }
        let p = ring.prime().unwrap();
        let inv = ring.inverse(&eval_in(ring, &dg, &y)).map_err(|_| Error::NonEtaleAtP { p })?;
        y = ring.sub(&y, &ring.mul(&gy, &inv));
    }
    Err(Error::InsufficientPrecision("Newton iteration did not converge".into()))
}

/// Newton-lifts `x^p` to a root of `g` modulo `p^a`.
pub fn frobenius_lift(spec: &EtaleAlgebraSpec, p: u64, a: u32) -> Result<FrobeniusLift> {
    if !qcore::arith::is_prime(p) || a == 0 {
        return Err(Error::InvalidArgument(format!("need a prime p and a >= 1, got p = {p}, a = {a}")));
    }
    let ring = spec.ring_mod(p, a);
    let dg = spec.g.derivative();
    let x = ZqPoly::q();
    // étale at p means g' is a unit modulo (p, g); checked before iterating
    spec.ring_mod(p, 1).inverse(&dg).map_err(|_| Error::NonEtaleAtP { p })?;
    let seed = ZqPoly::monomial(1, p as i64);
    let (phi, rounds) = newton(spec, &ring, &seed)?;
    let perturbed = &seed + &x.scale(&BigInt::from(p));
    let (phi2, _) = newton(spec, &ring, &perturbed)?;
    let r1 = spec.ring_mod(p, 1);
    let lifts_frobenius = r1.reduce(&phi) == r1.reduce(&seed);
    let is_root = eval_in(&ring, &spec.g, &phi).is_zero();
    Ok(FrobeniusLift { p, a, unique: phi == phi2, phi, rounds, is_root, lifts_frobenius })
}

/// Lift of the `p^k`-power Frobenius, seeded at `x^(p^k)`.
pub fn frobenius_power_lift(spec: &EtaleAlgebraSpec, p: u64, k: u32, a: u32) -> Result<ZqPoly> {
    let ring = spec.ring_mod(p, a);
    let seed = ZqPoly::monomial(1, p.pow(k) as i64);
    Ok(newton(spec, &ring, &seed)?.0)
}

/// Global Adams operation `ψ^l`: the root of `g` in `R` congruent to `x^l` modulo `l`.
/// Only degree at most 2 is supported, where the roots in `R` are `x` and `-g_1 - x`.
/// For `l | Δ` there is no condition at `l` and the identity is returned.
pub fn adams(spec: &EtaleAlgebraSpec, l: u64) -> Result<ZqPoly> {
    let x = ZqPoly::q();
    match spec.degree() {
        1 => Ok(x),
        2 => {
            let other = &ZqPoly::constant(-spec.g.coeff(1)) - &x;
            if spec.inverts(l) {
                return Ok(x);
            }
            let r = spec.ring_mod(l, 1);
            let target = r.reduce(&ZqPoly::monomial(1, l as i64));
            let hits: Vec<ZqPoly> = [x, other].into_iter().filter(|c| r.reduce(c) == target).collect();
            match hits.as_slice() {
                [one] => Ok(one.clone()),
                _ => Err(Error::NonEtaleAtP { p: l }),
            }
        }
        d => Err(Error::InvalidArgument(format!("global Adams operations need degree <= 2, got {d}"))),
    }
}

/// `ψ^d` for composite `d`, as the image of `x`.
pub fn adams_composite(spec: &EtaleAlgebraSpec, d: u64) -> Result<ZqPoly> {
    let ring = spec.ring();
    let mut img = ZqPoly::q();
    for (p, e) in factorize(d) {
        let psi = adams(spec, p)?;
        for _ in 0..e {
            img = eval_in(&ring, &img, &psi);
        }
    }
    Ok(ring.reduce(&img))
}


