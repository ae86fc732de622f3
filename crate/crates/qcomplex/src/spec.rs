//! Toric inputs: variable count, Laurent flags and a multidegree box.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricAlgebraSpec {
    pub laurent: Vec<bool>,
    /// Inclusive bounds per variable.
    pub window: Vec<(i64, i64)>,
}

impl ToricAlgebraSpec {
    pub fn new(laurent: Vec<bool>, window: Vec<(i64, i64)>) -> Result<Self> {
        if laurent.len() != window.len() {
            return Err(Error::InvalidArgument(format!(
                "{} Laurent flags for {} window ranges",
                laurent.len(),
                window.len()
            )));
        }
        for (i, (&l, &(lo, hi))) in laurent.iter().zip(&window).enumerate() {
            if lo > hi {
                return Err(Error::WindowTooSmall(format!("empty range {lo}..={hi} for x{}", i + 1)));
            }
            if !l && lo < 0 {
                return Err(Error::InvalidArgument(format!("x{} is polynomial but the window starts at {lo}", i + 1)));
            }
        }
        Ok(ToricAlgebraSpec { laurent, window })
    }

    /// Same range `[-r, r]` (or `[0, r]` for polynomial variables) in every direction.
    pub fn symmetric(laurent: Vec<bool>, r: i64) -> Result<Self> {
        let window = laurent.iter().map(|&l| if l { (-r, r) } else { (0, r) }).collect();
        Self::new(laurent, window)
    }

    pub fn n(&self) -> usize {
        self.laurent.len()
    }

    pub fn contains(&self, a: &[i64]) -> bool {
        a.len() == self.n() && a.iter().zip(&self.window).all(|(x, (lo, hi))| lo <= x && x <= hi)
    }

    /// Multidegrees of the box in lexicographic order.
    pub fn multidegrees(&self) -> Vec<Vec<i64>> {
        let mut out = vec![Vec::new()];
        for &(lo, hi) in &self.window {
            out = out
                .into_iter()
                .flat_map(|a| {
                    (lo..=hi).map(move |x| {
                        let mut b = a.clone();
                        b.push(x);
                        b
                    })
                })
                .collect();
        }
        out
    }

    pub fn check_requested(&self, requested: &[Vec<i64>]) -> Result<()> {
        for a in requested {
            if !self.contains(a) {
                return Err(Error::WindowTooSmall(format!("multidegree {a:?} lies outside {:?}", self.window)));
            }
        }
        Ok(())
    }

    /// Variables of `self` followed by those of `other`.
    pub fn concat(&self, other: &Self) -> Self {
        ToricAlgebraSpec {
            laurent: self.laurent.iter().chain(&other.laurent).copied().collect(),
            window: self.window.iter().chain(&other.window).copied().collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    QDeRham,
    QHodge,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::QDeRham => "qdr",
            Flavor::QHodge => "qhodge",
        })
    }
}

/// `Z[q]` itself, or `Z[q]/(q^m - 1)^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Base {
    Polynomial,
    Quotient { m: u64, k: u32 },
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::Polynomial => f.write_str("Z[q]"),
            Base::Quotient { m, k } => write!(f, "Z[q]/(q^{m}-1)^{k}"),
        }
    }
}
