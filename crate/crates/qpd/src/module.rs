//! `⊕_{i ∈ N[1/p]} Z_p[[q-1]] · x^i/[⌊i⌋]_q!` at finite precision.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use qcore::linalg::{self, IntMatrix};
use qcore::qanalog::{cyclotomic, q_factorial};
use qcore::{LocalElement, ModulusKind, Precision, ZqPoly};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::factorial::q_factorial_at_power;
use crate::report::Report;

/// Index `i = k / p^depth`, stored as the numerator `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QDivModule {
    p: u64,
    depth: u32,
    i_max: u64,
    precision: Precision,
    coeffs: BTreeMap<u64, LocalElement>,
}

#[derive(Serialize)]
struct Entry {
    index: String,
    coeff: LocalElement,
}

impl Serialize for QDivModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Entry> = self.coeffs.iter().map(|(k, c)| Entry { index: self.index_string(*k), coeff: c.clone() }).collect();
        v.serialize(s)
    }
}

impl QDivModule {
    /// Coefficients in `(Z/p^a)[q]/(q-1)^n`; indices `i <= i_max` with `p^depth i` integral.
    pub fn new(p: u64, depth: u32, i_max: u64, a: u32, n: u32) -> Result<Self> {
        let precision = Precision::new(Some((p, a)), ModulusKind::Cyclotomic, 1, n)?;
        Ok(QDivModule { p, depth, i_max, precision, coeffs: BTreeMap::new() })
    }

    pub fn zero_like(&self) -> Self {
        QDivModule { coeffs: BTreeMap::new(), ..self.clone() }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> &Precision {
        &self.precision
    }

    fn denom(&self) -> u64 {
        self.p.pow(self.depth)
    }

    /// `⌊i⌋` for the index with numerator `k`.
    pub fn floor(&self, k: u64) -> u64 {
        k / self.denom()
    }

    pub fn index_string(&self, k: u64) -> String {
        if k % self.denom() == 0 { (k / self.denom()).to_string() } else { format!("{}/{}", k, self.denom()) }
    }

    /// Add `c · x^(k/p^depth)/[⌊i⌋]_q!`.
    pub fn add_term(&mut self, k: u64, c: &ZqPoly) -> Result<()> {
        if k > self.i_max * self.denom() {
            return Err(Error::InvalidArgument(format!("index {} exceeds bound {}", self.index_string(k), self.i_max)));
        }
        let e = LocalElement::new(c, self.precision);
        let sum = match self.coeffs.get(&k) {
            Some(old) => old.try_add(&e)?,
            None => e,
        };
        if sum.is_zero() {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, sum);
        }
        Ok(())
    }

    /// The basis element `x^(k/p^depth)/[⌊i⌋]_q!` scaled by `c`.
    pub fn basis(&self, k: u64, c: &ZqPoly) -> Result<Self> {
        let mut out = self.zero_like();
        out.add_term(k, c)?;
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u64, &LocalElement)> {
        self.coeffs.iter()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_term(*k, c.rep())?;
        }
        Ok(out)
    }

    /// Product; indices above `i_max` are dropped.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.p != other.p || self.depth != other.depth || self.precision != other.precision {
            return Err(Error::InvalidArgument("modules differ".into()));
        }
        let mut out = self.zero_like();
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                let k = i + j;
                if k > self.i_max * self.denom() {
                    continue;
                }
                // x^i/[⌊i⌋]! · x^j/[⌊j⌋]! = ([⌊i+j⌋]!/([⌊i⌋]! [⌊j⌋]!)) x^(i+j)/[⌊i+j⌋]!
                let (fi, fj, fk) = (self.floor(*i), self.floor(*j), self.floor(k));
                let c = q_factorial(fk).div_exact(&(&q_factorial(fi) * &q_factorial(fj)))?;
                debug_assert!(fk >= fi + fj);
                let prod = a.try_mul(b)?;
                out.add_term(k, &(prod.rep() * &c))?;
            }
        }
        Ok(out)
    }

    /// Whether `d` divides `c` in `(Z/p^a)[q]/(q-1)^N`.
    fn divides(&self, d: &ZqPoly, c: &LocalElement) -> bool {
        let ring = c.ring();
        let dim = ring.dim();
        let m = ring.mult_matrix(d);
        let pa = ring.coefficient_modulus().expect("prime part").clone();
        let aug = m.hstack(&IntMatrix::identity(dim).scale(&pa));
        linalg::solve_integer(&aug, &c.rep().dense(dim)).is_some()
    }

    /// Largest `n` with `Φ_p(q)^max(n-⌊i⌋, 0)` dividing every coefficient.
    pub fn nygaard_level(&self) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        let phi = cyclotomic(self.p);
        let pp = self.precision.prime.expect("prime part");
        let cap = self.i_max + (pp.a + self.precision.n) as u64 + 1;
        let mut level = 0;
        for n in 1..=cap {
            let ok = self.coeffs.iter().all(|(k, c)| {
                let e = n.saturating_sub(self.floor(*k));
                e == 0 || self.divides(&phi.pow(e as u32), c)
            });
            if !ok {
                break;
            }
            level = n;
        }
        Ok(level)
    }
}

/// `Q[q]/Φ_p(q)^N` as a rational vector space with basis `1, .., q^(D-1)`.
struct RationalQuotient {
    modulus: ZqPoly,
    dim: usize,
}

impl RationalQuotient {
    fn new(p: u64, n: u32) -> Self {
        let modulus = cyclotomic(p).pow(n);
        let dim = modulus.degree().unwrap() as usize;
        RationalQuotient { modulus, dim }
    }

    fn coords(&self, f: &ZqPoly) -> Vec<BigRational> {
        f.div_rem_monic(&self.modulus).1.dense(self.dim).into_iter().map(BigRational::from_integer).collect()
    }

    /// Rows of the matrix of multiplication by `f`.
    fn mult_rows(&self, f: &ZqPoly) -> Vec<Vec<BigRational>> {
        let cols: Vec<Vec<BigRational>> = (0..self.dim).map(|j| self.coords(&f.shift(j as i64))).collect();
        (0..self.dim).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
    }

    /// Some `y` with `f y = g`, if one exists.
    fn solve(&self, f: &ZqPoly, g: &ZqPoly) -> Option<Vec<BigRational>> {
        linalg::solve_rational(&self.mult_rows(f), &self.coords(g))
    }
}

fn max_p_denominator(v: &[BigRational], p: u64) -> u32 {
    v.iter()
        .filter(|c| !c.is_zero())
        .map(|c| qcore::arith::valuation_big(c.denom(), p))
        .max()
        .unwrap_or(0)
}

/// After inverting `p` and completing at `Φ_p(q)`, the Nygaard filtration on the
/// Frobenius-twisted module (basis `x^i/[⌊i⌋]_{q^p}!`) becomes `(x, Φ_p(q))^n`.
///
/// Both inclusions are checked degree by degree in `x` over `Q[q]/Φ_p(q)^N`;
/// `a` bounds the `p`-power denominators of the solutions.
pub fn nygaard_rationalised_image(n: u64, p: u64, a: u32, trunc: u32, i_max: u64) -> Result<Report> {
    if !qcore::arith::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if i_max < n {
        return Err(Error::InsufficientTruncation(format!("need i_max >= n = {n}")));
    }
    if (trunc as u64) <= n {
        return Err(Error::InsufficientTruncation(format!("need N > n = {n}")));
    }
    let params = json!({"n": n, "p": p, "a": a, "N": trunc, "i_max": i_max});
    let rq = RationalQuotient::new(p, trunc);
    let phi = cyclotomic(p);
    let mut failures = Vec::new();
    let mut worst = 0;
    // fil^n at integral index m: Φ^max(n-m,0) times the basis vector, i.e. Φ^max(n-m,0) x^m/[m]_{q^p}!
    // ideal at index m: x^m Φ^max(n-m,0) = [m]_{q^p}! Φ^max(n-m,0) times the basis vector
    for m in 0..=i_max {
        let e = n.saturating_sub(m) as u32;
        let fil = phi.pow(e);
        let ideal = &q_factorial_at_power(m, p as u32) * &phi.pow(e);
        match rq.solve(&ideal, &fil) {
            Some(y) => worst = worst.max(max_p_denominator(&y, p)),
            None => failures.push(format!("fil element at index {m} not in the ideal")),
        }
        match rq.solve(&fil, &ideal) {
            Some(y) => worst = worst.max(max_p_denominator(&y, p)),
            None => failures.push(format!("ideal element at index {m} not in fil")),
        }
    }
    let generators: Vec<String> = (0..=n)
        .map(|j| match (j, n - j) {
            (0, 0) => "1".to_string(),
            (0, k) => format!("Phi_{p}^{k}"),
            (j, 0) => format!("x^{j}"),
            (j, k) => format!("x^{j} Phi_{p}^{k}"),
        })
        .map(|s| s.replace("^1 ", " ").trim_end_matches("^1").to_string())
        .collect();
    let within_budget = worst <= a;
    if !within_budget {
        failures.push(format!("p-power denominators {worst} exceed budget {a}"));
    }
    let pass = failures.is_empty();
    Ok(Report::new("nygaard_rationalised_image", params, pass).with_witness(json!({
        "ideal_generators": generators,
        "max_p_denominator": worst,
        "failures": failures,
    })))
}
