//! Divisibility of q-factorials under Frobenius.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use qcore::qanalog::{cyclotomic, q_factorial};
use qcore::{LocalElement, ModulusKind, Precision, ZqPoly};
use serde_json::json;

use crate::error::{Error, Result};
use crate::report::Report;

/// `[n]_{q^p}!`.
pub fn q_factorial_at_power(n: u64, p: u32) -> ZqPoly {
    q_factorial(n).substitute_power(p)
}

/// `w = [pn]_q! / ([n]_{q^p}! Φ_p(q)^n)`, checked to be a polynomial with `w(1)` prime to `p`.
pub fn q_factorial_unit_ratio(p: u64, n: u64) -> Result<ZqPoly> {
    if !qcore::arith::is_prime(p) || n == 0 {
        return Err(Error::InvalidArgument("need p prime and n >= 1".into()));
    }
    let den = &q_factorial_at_power(n, p as u32) * &cyclotomic(p).pow(n as u32);
    let w = q_factorial(p * n).div_exact(&den).map_err(|_| Error::DivisionNotExact(format!("[{}]_q! by [{n}]_(q^{p})! Phi_{p}^{n}", p * n)))?;
    if w.eval_one().is_multiple_of(&BigInt::from(p)) {
        return Err(Error::DivisionNotExact(format!("w(1) = {} is divisible by {p}", w.eval_one())));
    }
    Ok(w)
}

/// `[pn]_q! = w [n]_{q^p}! Φ_p^n` with `w` a unit mod `(p^trunc, (q-1)^trunc)`, and
/// `[n]_{q^p}! ≡ n! mod Φ_p(q)`, which gives the congruence of the divided images.
pub fn phi_divided_power_divisibility(n: u64, p: u64, trunc: u32) -> Result<Report> {
    let params = json!({"n": n, "p": p, "N": trunc});
    let w = match q_factorial_unit_ratio(p, n) {
        Ok(w) => w,
        Err(Error::DivisionNotExact(msg)) => {
            return Ok(Report::new("phi_divided_power_divisibility", params, false).with_residue(json!(msg)));
        }
        Err(e) => return Err(e),
    };
    let prec = Precision::new(Some((p, trunc)), ModulusKind::Cyclotomic, 1, trunc)?;
    let unit = LocalElement::new(&w, prec).invert().is_ok();
    let diff = &q_factorial_at_power(n, p as u32) - &ZqPoly::constant(qcore::arith::factorial(n));
    let (_, rem) = diff.div_rem_monic(&cyclotomic(p));
    let congruence = rem.is_zero();
    let w_at_one = w.eval_one();
    let pass = unit && congruence && !w_at_one.is_zero();
    Ok(Report::new("phi_divided_power_divisibility", params, pass).with_witness(json!({
        "w": w.to_string(),
        "w_at_1": w_at_one.to_string(),
        "w_unit": unit,
        "congruence_mod_phi_p": congruence,
    })))
}
