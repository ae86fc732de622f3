//! Polynomials in the free δ-ring on `x_1..x_g`, optionally with `s = q - 1` truncated at `s^N`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `δ^j x_r` for `r >= 1`; `r = 0` (with `j = 0`) is the series variable `s = q - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Sym {
    pub r: u8,
    pub j: u8,
}

impl Sym {
    pub const S: Sym = Sym { r: 0, j: 0 };

    pub fn is_s(&self) -> bool {
        self.r == 0
    }
}

/// Sorted exponent list, no zero exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Sym, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(sym: Sym, e: u32) -> Self {
        if e == 0 {
            Self::one()
        } else {
            Monomial(vec![(sym, e)])
        }
    }

    pub fn from_pairs(mut v: Vec<(Sym, u32)>) -> Self {
        v.retain(|&(_, e)| e > 0);
        v.sort();
        let mut out: Vec<(Sym, u32)> = Vec::with_capacity(v.len());
        for (s, e) in v {
            match out.last_mut() {
                Some((t, f)) if *t == s => *f += e,
                _ => out.push((s, e)),
            }
        }
        Monomial(out)
    }

    pub fn pairs(&self) -> &[(Sym, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, sym: Sym) -> u32 {
        self.0.iter().find(|(s, _)| *s == sym).map_or(0, |&(_, e)| e)
    }

    pub fn s_exponent(&self) -> u32 {
        self.exponent(Sym::S)
    }

    /// The monomial with its `s`-part removed.
    pub fn without_s(&self) -> Monomial {
        Monomial(self.0.iter().filter(|(s, _)| !s.is_s()).cloned().collect())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded, then lexicographic on `(r, j, exponent)`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(s, e)| {
                let base = if s.is_s() {
                    "s".to_string()
                } else {
                    let x = format!("x{}", s.r);
                    match s.j {
                        0 => x,
                        1 => format!("d{x}"),
                        j => format!("d^{j}{x}"),
                    }
                };
                if e == 1 { base } else { format!("{base}^{e}") }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// `num * p^pval` with `p ∤ num`.
pub fn p_adic_parts(c: &BigRational, p: u64) -> (BigInt, i64) {
    if c.is_zero() {
        return (BigInt::zero(), 0);
    }
    let pb = BigInt::from(p);
    let mut num = c.numer().clone();
    let mut den = c.denom().clone();
    let mut v = 0i64;
    while num.is_multiple_of(&pb) {
        num /= &pb;
        v += 1;
    }
    while den.is_multiple_of(&pb) {
        den /= &pb;
        v -= 1;
    }
    assert!(den.is_one(), "coefficient denominator is not a power of p");
    (num, v)
}

pub fn p_valuation(c: &BigRational, p: u64) -> Option<i64> {
    if c.is_zero() { None } else { Some(p_adic_parts(c, p).1) }
}

/// Element of `Z[1/p][δ^j x_r][s]/(s^N)` (or without `s` when untruncated).
#[derive(Clone, PartialEq, Eq)]
pub struct DeltaPoly {
    p: u64,
    gens: u8,
    trunc: Option<u32>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl DeltaPoly {
    pub fn zero(p: u64, gens: u8, trunc: Option<u32>) -> Self {
        assert!((1..=4).contains(&gens), "generator count must be in 1..=4");
        DeltaPoly { p, gens, trunc, terms: BTreeMap::new() }
    }

    pub fn constant(p: u64, gens: u8, trunc: Option<u32>, c: BigRational) -> Self {
        Self::zero(p, gens, trunc).with_term(Monomial::one(), c)
    }

    pub fn one_like(&self) -> Self {
        Self::constant(self.p, self.gens, self.trunc, BigRational::one())
    }

    pub fn zero_like(&self) -> Self {
        Self::zero(self.p, self.gens, self.trunc)
    }

    /// `δ^j x_r`.
    pub fn delta_x(p: u64, gens: u8, trunc: Option<u32>, r: u8, j: u8) -> Self {
        assert!(r >= 1 && r <= gens, "generator index out of range");
        Self::zero(p, gens, trunc).with_term(Monomial::var(Sym { r, j }, 1), BigRational::one())
    }

    pub fn x(p: u64, gens: u8, trunc: Option<u32>) -> Self {
        Self::delta_x(p, gens, trunc, 1, 0)
    }

    /// `s = q - 1`; needs a truncation.
    pub fn s(p: u64, gens: u8, trunc: u32) -> Self {
        Self::zero(p, gens, Some(trunc)).with_term(Monomial::var(Sym::S, 1), BigRational::one())
    }

    /// Series in `s` from integer or rational coefficients.
    pub fn s_series(p: u64, gens: u8, trunc: u32, coeffs: &[BigRational]) -> Self {
        let mut out = Self::zero(p, gens, Some(trunc));
        for (k, c) in coeffs.iter().enumerate() {
            out = out.with_term(Monomial::var(Sym::S, k as u32), c.clone());
        }
        out
    }

    pub fn monomial(&self, m: Monomial, c: BigRational) -> Self {
        self.zero_like().with_term(m, c)
    }

    fn with_term(mut self, m: Monomial, c: BigRational) -> Self {
        self.add_term(m, c);
        self
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        if let Some(n) = self.trunc {
            if m.s_exponent() >= n {
                return;
            }
        } else {
            assert!(m.s_exponent() == 0, "s needs a truncated coefficient ring");
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn gens(&self) -> u8 {
        self.gens
    }

    pub fn trunc(&self) -> Option<u32> {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    fn compatible(&self, other: &Self) {
        assert!(self.p == other.p && self.gens == other.gens && self.trunc == other.trunc, "incompatible δ-polynomials");
    }

    /// Same element with a different (or no) truncation.
    pub fn retruncate(&self, trunc: Option<u32>) -> Self {
        let mut out = Self::zero(self.p, self.gens, trunc);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.compatible(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = self.zero_like();
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect();
        out
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(c)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.compatible(other);
        let mut acc: HashMap<Monomial, BigRational> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                if let Some(n) = self.trunc {
                    if m.s_exponent() >= n {
                        continue;
                    }
                }
                let v = ca * cb;
                match acc.get_mut(&m) {
                    Some(x) => *x += v,
                    None => {
                        acc.insert(m, v);
                    }
                }
            }
        }
        let mut out = self.zero_like();
        out.terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = self.one_like();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Largest `k` with `s^k` dividing every term (the truncation when zero).
    pub fn s_order(&self) -> u32 {
        self.terms.keys().map(|m| m.s_exponent()).min().unwrap_or(self.trunc.unwrap_or(u32::MAX))
    }

    /// Minimal p-adic valuation of the coefficients (`None` for zero).
    pub fn min_valuation(&self) -> Option<i64> {
        self.terms.values().filter_map(|c| p_valuation(c, self.p)).min()
    }

    pub fn is_integral(&self) -> bool {
        self.min_valuation().is_none_or(|v| v >= 0)
    }

    /// Largest coefficient in absolute value.
    pub fn max_abs_coeff(&self) -> BigRational {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(BigRational::zero)
    }

    /// Symbols that occur.
    pub fn symbols(&self) -> Vec<Sym> {
        let mut v: Vec<Sym> = self.terms.keys().flat_map(|m| m.pairs().iter().map(|&(s, _)| s)).collect();
        v.sort();
        v.dedup();
        v
    }

    fn sym_frobenius(&self, sym: Sym) -> DeltaPoly {
        let pr = BigRational::from_integer(BigInt::from(self.p));
        if sym.is_s() {
            // (1+s)^p - 1
            let coeffs: Vec<BigRational> = (0..=self.p)
                .map(|i| if i == 0 { BigRational::zero() } else { BigRational::from_integer(qcore::arith::binomial(self.p, i)) })
                .collect();
            return DeltaPoly::s_series(self.p, self.gens, self.trunc.expect("s without truncation"), &coeffs);
        }
        let base = self.monomial(Monomial::var(sym, self.p as u32), BigRational::one());
        let next = self.monomial(Monomial::var(Sym { r: sym.r, j: sym.j + 1 }, 1), pr);
        base.add(&next)
    }

    /// The Frobenius lift: `δ^j x -> (δ^j x)^p + p δ^(j+1) x`, `s -> (1+s)^p - 1`.
    pub fn frobenius(&self) -> Self {
        let mut cache: HashMap<(Sym, u32), DeltaPoly> = HashMap::new();
        let mut out = self.zero_like();
        for (m, c) in &self.terms {
            let mut img = self.one_like();
            for &(sym, e) in m.pairs() {
                let pw = cache.entry((sym, e)).or_insert_with(|| self.sym_frobenius(sym).pow(e)).clone();
                img = img.mul(&pw);
            }
            out = out.add(&img.scale(c));
        }
        out
    }

    /// `δ(f) = (φ(f) - f^p) / p`.
    pub fn delta(&self) -> Self {
        let pinv = BigRational::new(BigInt::one(), BigInt::from(self.p));
        self.frobenius().sub(&self.pow(self.p as u32)).scale(&pinv)
    }

    /// `γ(f) = f^p / p`.
    pub fn gamma(&self) -> Self {
        self.pow(self.p as u32).scale(&BigRational::new(BigInt::one(), BigInt::from(self.p)))
    }

    /// `γ_q(f) = φ(f)/[p]_q - δ(f)`; needs a truncated ring.
    pub fn gamma_q(&self) -> Result<Self> {
        let n = self.trunc.ok_or(Error::NeedsTruncation)?;
        let inv = crate::series::inv_q_integer(self.p, n).embed(self.gens);
        Ok(self.frobenius().mul(&inv).sub(&self.delta()))
    }

    /// Raise an error when some coefficient has valuation below `-budget`.
    pub fn check_budget(&self, budget: u32) -> Result<()> {
        match self.min_valuation() {
            Some(v) if v < -(budget as i64) => Err(Error::ValuationBudgetExceeded { needed: (-v) as u32, budget }),
            _ => Ok(()),
        }
    }

    /// Copy into a ring with more generators.
    pub fn embed(&self, gens: u8) -> Self {
        assert!(gens >= self.gens);
        DeltaPoly { gens, ..self.clone() }
    }
}

impl fmt::Display for DeltaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c})*{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for DeltaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DeltaPoly[p={}] {}", self.p, self)
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffRepr {
    val: String,
    pval: i64,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    monomial: Vec<[u32; 3]>,
    coeff: CoeffRepr,
}

impl DeltaPoly {
    /// JSON list of `{monomial: [[r,j,e],..], coeff: {val, pval}}`; `val` is the `p`-free part.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let (num, pval) = p_adic_parts(c, self.p);
                TermRepr {
                    monomial: m.pairs().iter().map(|&(s, e)| [s.r as u32, s.j as u32, e]).collect(),
                    coeff: CoeffRepr { val: num.to_string(), pval },
                }
            })
            .collect();
        serde_json::to_value(terms).expect("serialisable")
    }

    pub fn from_json(p: u64, gens: u8, trunc: Option<u32>, v: &serde_json::Value) -> Result<Self> {
        let terms: Vec<TermRepr> = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut out = Self::zero(p, gens, trunc);
        for t in terms {
            let num: BigInt = t.coeff.val.parse().map_err(|_| Error::Parse(format!("bad integer {}", t.coeff.val)))?;
            let pw = BigRational::from_integer(BigInt::from(p)).pow(t.coeff.pval as i32);
            let m = Monomial::from_pairs(t.monomial.iter().map(|&[r, j, e]| (Sym { r: r as u8, j: j as u8 }, e)).collect());
            out.add_term(m, BigRational::from_integer(num) * pw);
        }
        Ok(out)
    }
}

use num_traits::Pow;
