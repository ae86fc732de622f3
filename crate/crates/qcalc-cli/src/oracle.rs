//! Naive lattice algebra for one-variable complexes, kept independent of the Smith
//! normal form used by the library.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use qcore::ZqPoly;

/// Dense `(q^m - 1)^k` with coefficients lowest first.
fn modulus(m: usize, k: usize) -> Vec<BigInt> {
    let mut acc = vec![BigInt::one()];
    for _ in 0..k {
        let mut next = vec![BigInt::zero(); acc.len() + m];
        for (i, c) in acc.iter().enumerate() {
            next[i + m] += c;
            next[i] -= c;
        }
        acc = next;
    }
    acc
}

/// Remainder of a dense polynomial by a monic one.
fn rem(mut f: Vec<BigInt>, g: &[BigInt]) -> Vec<BigInt> {
    let dg = g.len() - 1;
    while f.len() > dg {
        let top = f.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let shift = f.len() - dg;
        for (i, c) in g[..dg].iter().enumerate() {
            f[shift + i] -= &top * c;
        }
    }
    f.resize(dg, BigInt::zero());
    f
}

/// Multiplication by `s` on `Z[q]/(q^m - 1)^k`, basis `1, q, ..., q^(mk-1)`.
pub fn mult_matrix(s: &ZqPoly, m: usize, k: usize) -> Vec<Vec<BigInt>> {
    let g = modulus(m, k);
    let n = m * k;
    // q^-1 = q^(m-1) modulo q^m - 1 is not enough for k > 1, so shift the Laurent part up by a multiple of m
    let lift = if s.offset() < 0 { ((-s.offset()) as usize).div_ceil(m) * m } else { 0 };
    let mut cols = Vec::with_capacity(n);
    for t in 0..n {
        let mut f = vec![BigInt::zero(); (s.offset() + lift as i64) as usize + s.coeffs().len() + t + 1];
        for (e, c) in s.coeffs().iter().enumerate() {
            f[(s.offset() + lift as i64) as usize + e + t] += c;
        }
        let mut r = rem(f, &g);
        // divide by q^lift: multiply by the inverse of q^lift modulo g
        for _ in 0..lift {
            r = times_q_inverse(&r, &g);
        }
        cols.push(r);
    }
    (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
}

/// `r / q` modulo monic `g` with constant term `±1`.
fn times_q_inverse(r: &[BigInt], g: &[BigInt]) -> Vec<BigInt> {
    // r = r_0 + q r', and 1/q = -(g - g_0)/(q g_0)
    let c = r[0].clone() * &g[0];
    let mut out: Vec<BigInt> = r[1..].to_vec();
    out.push(BigInt::zero());
    for (i, gi) in g[1..].iter().enumerate() {
        out[i] -= &c * gi;
    }
    out.truncate(g.len() - 1);
    out
}

/// Invariant factors of an integer matrix by elementary row and column operations.
/// Returns `(rank, nontrivial invariant factors)`.
pub fn invariant_factors(a: &[Vec<BigInt>]) -> (usize, Vec<BigInt>) {
    let mut a: Vec<Vec<BigInt>> = a.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let qt = floor_div(&a[i][t], &a[t][t]);
            if !qt.is_zero() {
                for j in t..cols {
                    let v = &a[t][j] * &qt;
                    a[i][j] -= v;
                }
            }
            clean &= a[i][t].is_zero();
        }
        for j in t + 1..cols {
            let qt = floor_div(&a[t][j], &a[t][t]);
            if !qt.is_zero() {
                for i in t..rows {
                    let v = &a[i][t] * &qt;
                    a[i][j] -= v;
                }
            }
            clean &= a[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        // the pivot must divide the rest of the block
        let bad = (t + 1..rows).flat_map(|i| (t + 1..cols).map(move |j| (i, j))).find(|&(i, j)| !(&a[i][j] % &a[t][t]).is_zero());
        if let Some((i, _)) = bad {
            for j in t..cols {
                let v = a[i][j].clone();
                a[t][j] += v;
            }
            continue;
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    let rank = diag.len();
    (rank, diag.into_iter().filter(|d| !d.is_one()).collect())
}

fn floor_div(x: &BigInt, d: &BigInt) -> BigInt {
    num_integer::Integer::div_floor(x, d)
}

/// `(free rank, torsion)` of `H^0` and `H^1` of `Z[q]/(q^m-1)^k --s--> Z[q]/(q^m-1)^k`.
pub type Group = (usize, Vec<BigInt>);

pub fn two_term_cohomology(s: &ZqPoly, m: usize, k: usize) -> (Group, Group) {
    let n = m * k;
    let (rank, tors) = invariant_factors(&mult_matrix(s, m, k));
    ((n - rank, Vec::new()), (n - rank, tors))
}
