//! Sum and product rules for `δ`, `γ_q`, and the splitting of `γ` through `γ_q`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use qcore::arith::binomial;
use serde::Serialize;

use crate::error::Result;
use crate::poly::DeltaPoly;
use crate::series::inv_q_integer_via_unit;

/// Outcome of comparing two independently computed sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub discrepancy_terms: usize,
    /// Largest `|coefficient|` of the difference, as a string.
    pub max_discrepancy: String,
    pub holds: bool,
}

impl IdentityCheck {
    pub fn compare(name: &str, lhs: &DeltaPoly, rhs: &DeltaPoly) -> Self {
        let d = lhs.sub(rhs);
        IdentityCheck {
            name: name.to_string(),
            discrepancy_terms: d.len(),
            max_discrepancy: d.max_abs_coeff().to_string(),
            holds: d.is_zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleReport {
    pub checks: Vec<IdentityCheck>,
    pub pass: bool,
}

impl RuleReport {
    fn new(checks: Vec<IdentityCheck>) -> Self {
        let pass = checks.iter().all(|c| c.holds);
        RuleReport { checks, pass }
    }
}

/// `sum_{i=1}^{p-1} (C(p,i)/p) a^i b^(p-i)`.
pub fn cross_sum(a: &DeltaPoly, b: &DeltaPoly) -> DeltaPoly {
    let p = a.p();
    let mut out = a.zero_like();
    for i in 1..p {
        let c = BigRational::new(binomial(p, i), BigInt::from(p));
        out = out.add(&a.pow(i as u32).mul(&b.pow((p - i) as u32)).scale(&c));
    }
    out
}

/// `γ_q(a+b) = γ_q(a) + γ_q(b) + Σ` and `δ(a+b) = δ(a) + δ(b) - Σ`.
pub fn verify_sum_rules(a: &DeltaPoly, b: &DeltaPoly) -> Result<RuleReport> {
    let sum = a.add(b);
    let cross = cross_sum(a, b);
    let gq = IdentityCheck::compare("gamma_q(a+b)", &sum.gamma_q()?, &a.gamma_q()?.add(&b.gamma_q()?).add(&cross));
    let d = IdentityCheck::compare("delta(a+b)", &sum.delta(), &a.delta().add(&b.delta()).sub(&cross));
    Ok(RuleReport::new(vec![gq, d]))
}

/// Product laws: `φ` multiplicative and additive, `δ(fg)`, `γ_q(fg) = φ(g)γ_q(f) - f^p δ(g)`,
/// and `φ(f) ≡ f^p mod p`.
pub fn verify_product_rules(f: &DeltaPoly, g: &DeltaPoly) -> Result<RuleReport> {
    let p = f.p();
    let prod = f.mul(g);
    let mut checks = vec![
        IdentityCheck::compare("phi(fg)", &prod.frobenius(), &f.frobenius().mul(&g.frobenius())),
        IdentityCheck::compare("phi(f+g)", &f.add(g).frobenius(), &f.frobenius().add(&g.frobenius())),
        IdentityCheck::compare(
            "delta(fg)",
            &prod.delta(),
            &f.pow(p as u32).mul(&g.delta()).add(&g.pow(p as u32).mul(&f.delta())).add(&f.delta().mul(&g.delta()).scale_int(p as i64)),
        ),
    ];
    if f.trunc().is_some() {
        checks.push(IdentityCheck::compare(
            "gamma_q(fg)",
            &prod.gamma_q()?,
            &g.frobenius().mul(&f.gamma_q()?).sub(&f.pow(p as u32).mul(&g.delta())),
        ));
    }
    if f.is_integral() {
        // φ(f) ≡ f^p mod p: the quotient δ(f) stays integral
        let d = f.delta();
        let bad = d.terms().filter(|(_, c)| !c.is_integer()).count();
        checks.push(IdentityCheck {
            name: "phi(f) = f^p mod p".into(),
            discrepancy_terms: bad,
            max_discrepancy: if bad == 0 { "0".into() } else { d.max_abs_coeff().to_string() },
            holds: bad == 0,
        });
    }
    Ok(RuleReport::new(checks))
}

/// `γ(f) - γ_q(f) - (([p]_q - p)/p)(γ_q(f) + δ(f))`.
pub fn gamma_split(f: &DeltaPoly) -> Result<IdentityCheck> {
    let p = f.p();
    let n = f.trunc().ok_or(crate::error::Error::NeedsTruncation)?;
    let qint = crate::series::q_integer_series(p, n).embed(f.gens());
    let factor = qint
        .sub(&f.one_like().scale_int(p as i64))
        .scale(&BigRational::new(BigInt::from(1), BigInt::from(p)));
    let gq = f.gamma_q()?;
    let rhs = gq.add(&factor.mul(&gq.add(&f.delta())));
    Ok(IdentityCheck::compare("gamma split", &f.gamma(), &rhs))
}

/// `γ_q` with `1/[p]_q` taken from `[p]_q = p u + s^(p-1)`; the result is
/// rejected if a coefficient has `p`-valuation below `-budget`.
pub fn gamma_q_integral_form(f: &DeltaPoly, budget: u32) -> Result<DeltaPoly> {
    let n = f.trunc().ok_or(crate::error::Error::NeedsTruncation)?;
    let inv = inv_q_integer_via_unit(f.p(), n).embed(f.gens());
    let out = f.frobenius().mul(&inv).sub(&f.delta());
    out.check_budget(budget)?;
    Ok(out)
}

/// `γ_q(s) = -s^2 sum_{i=2}^{p-1} (C(p,i)/p) s^(i-2)`.
pub fn gamma_q_of_s(p: u64, n: u32) -> DeltaPoly {
    let c = crate::series::c_series(p);
    let mut coeffs = vec![BigRational::zero(); 2];
    coeffs.extend(c.into_iter().map(|x| BigRational::from_integer(-x)));
    DeltaPoly::s_series(p, 1, n, &coeffs)
}
