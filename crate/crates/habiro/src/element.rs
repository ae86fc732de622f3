//! Elements as compatible families of expansions at roots of unity.

use std::collections::BTreeMap;

use qcore::arith::is_prime;
use qcore::series::{canonical_image, reexpand, reexpand_input_len};
use qcore::{taylor_at_root, RootSeries, ZqPoly};
use serde::Serialize;

use crate::error::{Error, Result};

/// Precision for building elements: which primes to check, at `p^a`, with `n` output terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HabiroPrecision {
    pub primes: Vec<u64>,
    pub a: u32,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub p: u64,
    pub m: u64,
    pub a: u32,
    pub n: usize,
    pub pass: bool,
    /// First coefficient index where the two sides differ.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_difference: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HabiroElement {
    pub index: Vec<u64>,
    pub components: BTreeMap<u64, RootSeries>,
    pub ledger: Vec<CheckRecord>,
}

pub fn check_divisor_closed(index: &[u64]) -> Result<Vec<u64>> {
    let mut v = index.to_vec();
    v.sort_unstable();
    v.dedup();
    if v.is_empty() || v[0] == 0 {
        return Err(Error::NotDivisorClosed(format!("{index:?}")));
    }
    for &m in &v {
        for d in qcore::arith::divisors(m) {
            if v.binary_search(&d).is_err() {
                return Err(Error::NotDivisorClosed(format!("{d} divides {m} but is missing")));
            }
        }
    }
    Ok(v)
}

/// Pairs `(p, m)` with `p` in `primes` and `m, pm` both indexed.
fn check_pairs(index: &[u64], primes: &[u64]) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for &p in primes {
        for &m in index {
            if index.binary_search(&(p * m)).is_ok() {
                out.push((p, m));
            }
        }
    }
    out
}

fn truncate(s: &RootSeries, n: usize) -> Result<RootSeries> {
    if s.len() < n {
        return Err(qcore::Error::InsufficientInputPrecision { needed: n, got: s.len() }.into());
    }
    Ok(RootSeries::new(s.center(), s.coeffs()[..n].to_vec())?)
}

/// Compare the image of the `zeta_m`-expansion with the re-expanded `zeta_pm`-expansion
/// in `(Z/p^a)[zeta_pm][t]/t^n`.
pub fn consistency_check(e: &HabiroElement, p: u64, m: u64, a: u32, n: usize) -> Result<CheckRecord> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let low = e.components.get(&m).ok_or(Error::MissingIndex(m))?;
    let high = e.components.get(&(p * m)).ok_or(Error::MissingIndex(p * m))?;
    let lhs = canonical_image(&truncate(low, n)?, p, a)?;
    let rhs = reexpand(high, p, a, n)?;
    let first_difference = lhs.coeffs().iter().zip(rhs.coeffs()).position(|(x, y)| x != y);
    Ok(CheckRecord { p, m, a, n, pass: first_difference.is_none(), first_difference })
}

impl HabiroElement {
    /// Builds from explicit components and runs every check in `prec`.
    pub fn from_components(components: BTreeMap<u64, RootSeries>, prec: &HabiroPrecision) -> Result<Self> {
        let index = check_divisor_closed(&components.keys().copied().collect::<Vec<_>>())?;
        for (m, s) in &components {
            if s.center() != *m {
                return Err(Error::InvalidArgument(format!("component {m} is centred at {}", s.center())));
            }
        }
        let mut e = HabiroElement { index, components, ledger: Vec::new() };
        for (p, m) in check_pairs(&e.index, &prec.primes) {
            let rec = consistency_check(&e, p, m, prec.a, prec.n)?;
            e.ledger.push(rec);
        }
        Ok(e)
    }

    pub fn is_valid(&self) -> bool {
        self.ledger.iter().all(|r| r.pass)
    }

    /// Re-runs every recorded check.
    pub fn recheck(&self) -> Result<Self> {
        let ledger = self
            .ledger
            .iter()
            .map(|r| consistency_check(self, r.p, r.m, r.a, r.n))
            .collect::<Result<Vec<_>>>()?;
        Ok(HabiroElement { ledger, ..self.clone() })
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&RootSeries, &RootSeries) -> qcore::Result<RootSeries>) -> Result<Self> {
        if self.index != other.index {
            return Err(Error::InvalidArgument("index sets differ".into()));
        }
        let components = self
            .components
            .iter()
            .map(|(m, s)| Ok((*m, f(s, &other.components[m])?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        HabiroElement { index: self.index.clone(), components, ledger: self.ledger.clone() }.recheck()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.try_add(b))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.try_mul(b))
    }

    /// Replaces coefficient `k` of component `m`; ledger entries are re-run.
    pub fn corrupt(&self, m: u64, k: usize, c: &ZqPoly) -> Result<Self> {
        let s = self.components.get(&m).ok_or(Error::MissingIndex(m))?;
        let mut components = self.components.clone();
        components.insert(m, s.with_coeff(k, c));
        HabiroElement { components, ..self.clone() }.recheck()
    }
}

/// Component length at `m`: enough for every re-expansion that reads it.
fn component_len(m: u64, index: &[u64], prec: &HabiroPrecision) -> Result<usize> {
    let mut len = prec.n;
    for &p in &prec.primes {
        if m % p == 0 && index.binary_search(&(m / p)).is_ok() {
            len = len.max(reexpand_input_len(m / p, p, prec.a, prec.n)?);
        }
    }
    Ok(len)
}

/// Taylor expansions of a Laurent polynomial at every indexed root of unity.
pub fn habiro_from_poly(f: &ZqPoly, index: &[u64], prec: &HabiroPrecision) -> Result<HabiroElement> {
    let index = check_divisor_closed(index)?;
    let components = index
        .iter()
        .map(|&m| Ok((m, taylor_at_root(f, m, component_len(m, &index, prec)?)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    HabiroElement::from_components(components, prec)
}
