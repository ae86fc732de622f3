//! The coordinate q-Hodge filtration on the q-de Rham pieces over
//! `Z[q]/(q-1)^L`, its graded pieces and the conjugate graded pieces.

use num_bigint::BigInt;
use qcore::linalg::{IntMatrix, Subquotient};
use qcore::{QuotientRing, ZqPoly};
use rayon::prelude::*;
use serde::Serialize;

use crate::cohomology::quotient_ring;
use crate::complex::{Piece, QKoszul};
use crate::error::{Error, Result};
use crate::spec::{Base, Flavor};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupSummary {
    pub free_rank: usize,
    pub torsion: Vec<String>,
}

impl GroupSummary {
    fn of(g: &Subquotient) -> Self {
        GroupSummary { free_rank: g.free_rank(), torsion: g.torsion().iter().map(|t| t.to_string()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FilteredPiece {
    pub a: Vec<i64>,
    pub fil: Vec<GroupSummary>,
    pub gr: Vec<GroupSummary>,
    /// Cohomology of `cofib((q-1): gr^(i-1) -> gr^i)`.
    pub conj: Vec<GroupSummary>,
    pub conj_matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FilteredQComplex {
    pub i: u32,
    pub length: u32,
    /// Exponent of `(q-1)` in each cohomological degree.
    pub exponents: Vec<u32>,
    pub pieces: Vec<FilteredPiece>,
    /// `(q-1) fil^i ⊆ fil^(i+1)` degreewise.
    pub shift_contained: bool,
    /// Every conjugate graded piece is `Ω^i` placed in degree `i`.
    pub prediction_holds: bool,
}

pub fn exponent(i: u32, j: usize) -> u32 {
    (i as i64 - j as i64).max(0) as u32
}

/// Multiplication by `c` on `Z[q]/(q-1)^L` in the basis `1, s, ..., s^(L-1)`, `s = q - 1`.
fn s_coeffs(ring: &QuotientRing, c: &ZqPoly, len: usize) -> Vec<BigInt> {
    let mut v = ring.reduce(c).in_s();
    v.resize(len, BigInt::from(0));
    v
}

/// Band `[lo_j, hi_j)` of `s`-powers in each degree; differential induced by the piece.
fn band_complex(piece: &Piece, ring: &QuotientRing, lo: &[usize], hi: &[usize]) -> Vec<IntMatrix> {
    let len = ring.dim();
    let n = piece.ranks.len() - 1;
    (0..=n)
        .map(|j| {
            let w = hi[j].saturating_sub(lo[j]);
            if j == n {
                return IntMatrix::zeros(0, piece.ranks[j] * w);
            }
            let wt = hi[j + 1].saturating_sub(lo[j + 1]);
            let d = &piece.diffs[j];
            let mut out = IntMatrix::zeros(d.rows * wt, d.cols * w);
            for r in 0..d.rows {
                for c in 0..d.cols {
                    let e = d.get(r, c);
                    if e.is_zero() {
                        continue;
                    }
                    let ps = s_coeffs(ring, e, len);
                    for t in lo[j]..hi[j] {
                        for tt in lo[j + 1]..hi[j + 1] {
                            if tt >= t {
                                out[(r * wt + tt - lo[j + 1], c * w + t - lo[j])] = ps[tt - t].clone();
                            }
                        }
                    }
                }
            }
            out
        })
        .collect()
}

fn cohomology_of(diffs: &[IntMatrix], dims: &[usize]) -> Vec<GroupSummary> {
    (0..dims.len())
        .map(|j| {
            let prev = if j == 0 { IntMatrix::zeros(dims[0], 0) } else { diffs[j - 1].clone() };
            GroupSummary::of(&Subquotient::new(&prev, &diffs[j]))
        })
        .collect()
}

/// Mapping cone of a chain map `phi: A -> B`, indexed from degree `-1`:
/// entry `c` is `A^c ⊕ B^(c-1)`.
fn cone(da: &[IntMatrix], dima: &[usize], db: &[IntMatrix], dimb: &[usize], phi: &[IntMatrix]) -> (Vec<IntMatrix>, Vec<usize>) {
    let n = dimb.len() - 1;
    let a_at = |c: usize| if c <= n { dima[c] } else { 0 };
    let b_at = |c: usize| if c >= 1 { dimb[c - 1] } else { 0 };
    let dims: Vec<usize> = (0..=n + 1).map(|c| a_at(c) + b_at(c)).collect();
    let diffs = (0..=n + 1)
        .map(|c| {
            let tgt = if c <= n { dims[c + 1] } else { 0 };
            let mut out = IntMatrix::zeros(tgt, dims[c]);
            if c <= n {
                let (a0, a1) = (a_at(c), a_at(c + 1));
                if a0 > 0 && a1 > 0 {
                    out.set_block(0, 0, &da[c].scale(&BigInt::from(-1)));
                }
                if a0 > 0 && dimb[c] > 0 {
                    out.set_block(a1, 0, &phi[c]);
                }
                if c >= 1 && b_at(c) > 0 && dimb[c] > 0 {
                    out.set_block(a1, a0, &db[c - 1]);
                }
            }
            out
        })
        .collect();
    (diffs, dims)
}

fn filtered_piece(piece: &Piece, ring: &QuotientRing, i: u32) -> FilteredPiece {
    let len = ring.dim();
    let n = piece.ranks.len() - 1;
    let e = |lvl: u32| (0..=n).map(|j| (exponent(lvl, j) as usize).min(len)).collect::<Vec<_>>();
    let full = vec![len; n + 1];
    let dims = |lo: &[usize], hi: &[usize]| (0..=n).map(|j| piece.ranks[j] * hi[j].saturating_sub(lo[j])).collect::<Vec<_>>();

    let fil_lo = e(i);
    let fil = band_complex(piece, ring, &fil_lo, &full);
    let fil_h = cohomology_of(&fil, &dims(&fil_lo, &full));

    let gr_hi = e(i + 1);
    let gr = band_complex(piece, ring, &fil_lo, &gr_hi);
    let gr_dims = dims(&fil_lo, &gr_hi);
    let gr_h = cohomology_of(&gr, &gr_dims);

    let mut below_zero = true;
    let conj = if i == 0 {
        gr_h.clone()
    } else {
        let prev_lo = e(i - 1);
        let prev_hi = e(i);
        let prev = band_complex(piece, ring, &prev_lo, &prev_hi);
        let prev_dims = dims(&prev_lo, &prev_hi);
        // multiplication by s moves power t to t + 1 slotwise
        let phi: Vec<IntMatrix> = (0..=n)
            .map(|j| {
                let (w, wt) = (prev_hi[j] - prev_lo[j].min(prev_hi[j]), gr_hi[j].saturating_sub(fil_lo[j]));
                let mut m = IntMatrix::zeros(piece.ranks[j] * wt, piece.ranks[j] * w);
                for slot in 0..piece.ranks[j] {
                    for t in prev_lo[j]..prev_hi[j] {
                        let tt = t + 1;
                        if tt >= fil_lo[j] && tt < gr_hi[j] {
                            m[(slot * wt + tt - fil_lo[j], slot * w + t - prev_lo[j])] = BigInt::from(1);
                        }
                    }
                }
                m
            })
            .collect();
        let (cd, cdims) = cone(&prev, &prev_dims, &gr, &gr_dims, &phi);
        let h = cohomology_of(&cd, &cdims);
        below_zero = h[0].is_zero();
        h[1..].to_vec()
    };
    let conj_matches = below_zero && conj.iter().enumerate().all(|(j, g)| {
        if j == i as usize {
            g.free_rank == piece.ranks[j] && g.torsion.is_empty()
        } else {
            g.is_zero()
        }
    });
    FilteredPiece { a: piece.a.clone(), fil: fil_h, gr: gr_h, conj, conj_matches }
}

/// Level `i` of the q-Hodge filtration with its graded and conjugate graded pieces.
pub fn qhodge_filtration(k: &QKoszul, i: u32) -> Result<FilteredQComplex> {
    if k.flavor != Flavor::QDeRham || k.decalage != 0 {
        return Err(Error::InvalidArgument("the filtration lives on the q-de Rham pieces".into()));
    }
    let length = match k.base {
        Base::Quotient { m: 1, k } => k,
        other => return Err(Error::InvalidArgument(format!("need a (q-1)-truncated base, got {other}"))),
    };
    let n = k.n() as u32;
    if length <= i + n {
        return Err(Error::InsufficientTruncation { needed: i + n, got: length });
    }
    let ring = quotient_ring(1, length);
    let pieces: Vec<FilteredPiece> = k.pieces.par_iter().map(|p| filtered_piece(p, &ring, i)).collect();
    let exponents = (0..=k.n()).map(|j| exponent(i, j)).collect();
    let shift_contained = (0..=k.n()).all(|j| exponent(i, j) + 1 >= exponent(i + 1, j));
    let prediction_holds = pieces.iter().all(|p| p.conj_matches);
    Ok(FilteredQComplex { i, length, exponents, pieces, shift_contained, prediction_holds })
}
