//! Multidegree pieces of the coordinate complexes, as complexes of free
//! `Z[q, q^-1]`-modules with polynomial differentials.

use num_bigint::BigInt;
use num_traits::Zero;
use qcore::linalg::{smith, IntMatrix};
use qcore::qanalog::{q_integer, q_power_minus_one};
use qcore::{QuotientRing, ZqPoly};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spec::{Base, Flavor, ToricAlgebraSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<ZqPoly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, entries: vec![ZqPoly::zero(); rows * cols] }
    }

    pub fn get(&self, i: usize, j: usize) -> &ZqPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ZqPoly) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        let mut out = Self::zeros(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, ZqPoly::constant(m[(i, j)].clone()));
            }
        }
        out
    }

    pub fn mul(&self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Value at `q = 1`.
    pub fn eval_one(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self.get(i, j).eval_one();
            }
        }
        out
    }

    /// `Z`-flattening over a quotient ring: each entry becomes its
    /// multiplication matrix in the basis `1, q, ..., q^(D-1)`.
    pub fn flatten(&self, ring: &QuotientRing) -> IntMatrix {
        let d = ring.dim();
        let mut out = IntMatrix::zeros(self.rows * d, self.cols * d);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                if !e.is_zero() {
                    out.set_block(i * d, j * d, &ring.mult_matrix(e));
                }
            }
        }
        out
    }
}

/// Koszul sign `(-1)^{#{j in S : j < i}}`.
pub fn koszul_sign(mask: u32, i: usize) -> i64 {
    if (mask & ((1u32 << i) - 1)).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Subsets of `{0..n}` of size `j` as bitmasks, lexicographic in their sorted elements.
pub fn subsets(n: usize, j: usize) -> Vec<u32> {
    let mut out: Vec<u32> = (0..1u32 << n).filter(|m| m.count_ones() as usize == j).collect();
    out.sort_by_key(|&m| (0..n).filter(|&i| m >> i & 1 == 1).collect::<Vec<_>>());
    out
}

/// Koszul differentials `d^j : C^j -> C^(j+1)` on the given scalars.
pub fn koszul_diffs(scalars: &[ZqPoly]) -> Vec<PolyMatrix> {
    let n = scalars.len();
    let bases: Vec<Vec<u32>> = (0..=n).map(|j| subsets(n, j)).collect();
    (0..n)
        .map(|j| {
            let (src, dst) = (&bases[j], &bases[j + 1]);
            let mut d = PolyMatrix::zeros(dst.len(), src.len());
            for (c, &s) in src.iter().enumerate() {
                for (i, si) in scalars.iter().enumerate() {
                    if s >> i & 1 == 1 {
                        continue;
                    }
                    let t = s | 1 << i;
                    let r = dst.iter().position(|&x| x == t).expect("superset is listed");
                    d.set(r, c, si.scale(&BigInt::from(koszul_sign(s, i))));
                }
            }
            d
        })
        .collect()
}

pub fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// One multidegree: ranks `C^0..C^n` and differentials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Piece {
    pub a: Vec<i64>,
    pub ranks: Vec<usize>,
    pub diffs: Vec<PolyMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalars: Option<Vec<ZqPoly>>,
}

impl Piece {
    pub fn koszul(a: Vec<i64>, scalars: Vec<ZqPoly>) -> Self {
        let n = scalars.len();
        Piece { a, ranks: (0..=n).map(|j| binom(n, j)).collect(), diffs: koszul_diffs(&scalars), scalars: Some(scalars) }
    }

    pub fn diff(&self, j: usize) -> PolyMatrix {
        match self.diffs.get(j) {
            Some(d) => d.clone(),
            None => PolyMatrix::zeros(0, self.ranks[j]),
        }
    }

    pub fn d_squared_zero(&self) -> bool {
        self.diffs.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }
}

pub fn scalar(flavor: Flavor, ai: i64) -> ZqPoly {
    match flavor {
        Flavor::QDeRham => q_integer(ai),
        Flavor::QHodge => {
            if ai == 0 {
                ZqPoly::zero()
            } else if ai > 0 {
                q_power_minus_one(ai as u64)
            } else {
                &ZqPoly::monomial(1, ai) - &ZqPoly::one()
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QKoszul {
    pub spec: ToricAlgebraSpec,
    pub flavor: Flavor,
    pub base: Base,
    /// Number of times `η_(q-1)` has been applied.
    pub decalage: u32,
    pub pieces: Vec<Piece>,
}

impl QKoszul {
    pub fn n(&self) -> usize {
        self.spec.n()
    }

    pub fn piece(&self, a: &[i64]) -> Result<&Piece> {
        self.pieces
            .iter()
            .find(|p| p.a == a)
            .ok_or_else(|| Error::WindowTooSmall(format!("multidegree {a:?} lies outside {:?}", self.spec.window)))
    }

    /// Restrict to the requested multidegrees, all of which must lie in the window.
    pub fn restrict(&self, requested: &[Vec<i64>]) -> Result<QKoszul> {
        self.spec.check_requested(requested)?;
        let pieces = requested.iter().map(|a| self.piece(a).cloned()).collect::<Result<_>>()?;
        Ok(QKoszul { pieces, ..self.clone() })
    }

    pub fn d_squared_zero(&self) -> bool {
        self.pieces.iter().all(Piece::d_squared_zero)
    }
}

/// Koszul complex on `s_i(a)` for every `a` in the window.
pub fn build_complex(spec: &ToricAlgebraSpec, flavor: Flavor, base: Base) -> Result<QKoszul> {
    let spec = ToricAlgebraSpec::new(spec.laurent.clone(), spec.window.clone())?;
    if let Base::Quotient { m, k } = base {
        if m == 0 || k == 0 {
            return Err(Error::InvalidArgument(format!("base {base} is degenerate")));
        }
    }
    let pieces = spec
        .multidegrees()
        .into_par_iter()
        .map(|a| {
            let s = a.iter().map(|&ai| scalar(flavor, ai)).collect();
            Piece::koszul(a, s)
        })
        .collect();
    Ok(QKoszul { spec, flavor, base, decalage: 0, pieces })
}

/// Like [`build_complex`] but only at the requested multidegrees.
pub fn build_complex_at(
    spec: &ToricAlgebraSpec,
    flavor: Flavor,
    base: Base,
    requested: &[Vec<i64>],
) -> Result<QKoszul> {
    spec.check_requested(requested)?;
    let spec = ToricAlgebraSpec::new(spec.laurent.clone(), spec.window.clone())?;
    let pieces = requested
        .par_iter()
        .map(|a| Piece::koszul(a.clone(), a.iter().map(|&ai| scalar(flavor, ai)).collect()))
        .collect();
    Ok(QKoszul { spec, flavor, base, decalage: 0, pieces })
}

/// Total complex of `p1 ⊗ p2` with the sign `(-1)^deg1` on the second factor.
/// Basis of degree `j`: pairs `(j1, j2)` with `j1 + j2 = j`, `j1` increasing,
/// then row-major over the two bases.
pub fn tensor_total(p1: &Piece, p2: &Piece) -> Piece {
    let n1 = p1.ranks.len() - 1;
    let n2 = p2.ranks.len() - 1;
    let n = n1 + n2;
    let offsets = |j: usize| {
        let mut off = Vec::new();
        let mut acc = 0;
        for j1 in 0..=n1 {
            if j >= j1 && j - j1 <= n2 {
                off.push((j1, acc));
                acc += p1.ranks[j1] * p2.ranks[j - j1];
            }
        }
        (off, acc)
    };
    let layout: Vec<_> = (0..=n).map(offsets).collect();
    let ranks = layout.iter().map(|(_, r)| *r).collect();
    let mut diffs = Vec::new();
    for j in 0..n {
        let (src, sr) = &layout[j];
        let (dst, dr) = &layout[j + 1];
        let mut d = PolyMatrix::zeros(*dr, *sr);
        for &(j1, so) in src {
            let j2 = j - j1;
            let w2 = p2.ranks[j2];
            if j1 < n1 {
                let d1 = p1.diff(j1);
                let to = dst.iter().find(|(x, _)| *x == j1 + 1).unwrap().1;
                let w2t = p2.ranks[j2];
                for r in 0..d1.rows {
                    for c in 0..d1.cols {
                        let e = d1.get(r, c);
                        if e.is_zero() {
                            continue;
                        }
                        for b in 0..w2 {
                            d.set(to + r * w2t + b, so + c * w2 + b, e.clone());
                        }
                    }
                }
            }
            if j2 < n2 {
                let d2 = p2.diff(j2);
                let to = dst.iter().find(|(x, _)| *x == j1).unwrap().1;
                let w2t = p2.ranks[j2 + 1];
                let sign = BigInt::from(if j1 % 2 == 0 { 1 } else { -1 });
                for a in 0..p1.ranks[j1] {
                    for r in 0..d2.rows {
                        for c in 0..d2.cols {
                            let e = d2.get(r, c);
                            if !e.is_zero() {
                                d.set(to + a * w2t + r, so + a * w2 + c, e.scale(&sign));
                            }
                        }
                    }
                }
            }
        }
        diffs.push(d);
    }
    let a = p1.a.iter().chain(&p2.a).copied().collect();
    Piece { a, ranks, diffs, scalars: None }
}

/// Permutation taking the tensor layout of degree `j` to the Koszul basis on
/// `n1 + n2` variables: entry `t` is the Koszul index of tensor basis vector `t`.
pub fn tensor_to_koszul_perm(n1: usize, n2: usize, j: usize) -> Vec<usize> {
    let target = subsets(n1 + n2, j);
    let mut perm = Vec::new();
    for j1 in 0..=n1 {
        if j < j1 || j - j1 > n2 {
            continue;
        }
        for s1 in subsets(n1, j1) {
            for s2 in subsets(n2, j - j1) {
                let m = s1 | s2 << n1;
                perm.push(target.iter().position(|&x| x == m).unwrap());
            }
        }
    }
    perm
}

/// Checks that the total tensor complex equals the concatenated Koszul complex
/// after relabelling bases.
pub fn tensor_matches_koszul(p1: &Piece, p2: &Piece, concat: &Piece) -> bool {
    let n1 = p1.ranks.len() - 1;
    let n2 = p2.ranks.len() - 1;
    let t = tensor_total(p1, p2);
    if t.ranks != concat.ranks {
        return false;
    }
    (0..n1 + n2).all(|j| {
        let ps = tensor_to_koszul_perm(n1, n2, j);
        let pt = tensor_to_koszul_perm(n1, n2, j + 1);
        let d = &t.diffs[j];
        (0..d.rows).all(|r| (0..d.cols).all(|c| d.get(r, c) == concat.diffs[j].get(pt[r], ps[c])))
    })
}

/// Koszul complex on the concatenated scalar tuples, multidegrees concatenated.
pub fn tensor(k1: &QKoszul, k2: &QKoszul) -> Result<QKoszul> {
    if k1.base != k2.base {
        return Err(Error::BaseMismatch(format!("{} vs {}", k1.base, k2.base)));
    }
    if k1.flavor != k2.flavor || k1.decalage != k2.decalage {
        return Err(Error::BaseMismatch(format!("{} vs {}", k1.flavor, k2.flavor)));
    }
    let spec = k1.spec.concat(&k2.spec);
    let pairs: Vec<(&Piece, &Piece)> = k1.pieces.iter().flat_map(|a| k2.pieces.iter().map(move |b| (a, b))).collect();
    let pieces = pairs
        .par_iter()
        .map(|(p1, p2)| {
            let a: Vec<i64> = p1.a.iter().chain(&p2.a).copied().collect();
            match (&p1.scalars, &p2.scalars) {
                (Some(s1), Some(s2)) => Ok(Piece::koszul(a, s1.iter().chain(s2).cloned().collect())),
                _ => Err(Error::InvalidArgument("tensor needs Koszul pieces".into())),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QKoszul { spec, flavor: k1.flavor, base: k1.base, decalage: k1.decalage, pieces })
}

fn q_minus_one() -> ZqPoly {
    ZqPoly::from_i64s(&[-1, 1])
}

fn div_entries(m: &PolyMatrix, row_div: impl Fn(usize) -> ZqPoly) -> Result<PolyMatrix> {
    let mut out = m.clone();
    for r in 0..m.rows {
        let f = row_div(r);
        for c in 0..m.cols {
            let e = m.get(r, c);
            out.set(r, c, e.div_exact(&f)?);
        }
    }
    Ok(out)
}

/// `η_(q-1)` of one piece over `Z[q, q^-1]`.
///
/// `{y : dy ≡ 0 mod (q-1)}` is free on `(q-1) v_c` for the first `r` columns of
/// the Smith transform `V` of `d(1)` and `v_c` for the kernel columns; the new
/// differential is `y -> dy/(q-1)` in that basis.
pub fn decalage_piece(piece: &Piece) -> Result<Piece> {
    let f = q_minus_one();
    let n = piece.ranks.len() - 1;
    let mut v = Vec::new();
    let mut v_inv = Vec::new();
    let mut r = Vec::new();
    for j in 0..=n {
        let dbar = piece.diff(j).eval_one();
        if dbar.rows() == 0 || dbar.cols() == 0 {
            v.push(IntMatrix::identity(piece.ranks[j]));
            v_inv.push(IntMatrix::identity(piece.ranks[j]));
            r.push(0);
        } else {
            let s = smith(&dbar);
            r.push(s.rank());
            v.push(s.v);
            v_inv.push(s.v_inv);
        }
    }
    let mut diffs = Vec::new();
    for j in 0..n {
        let mut b = PolyMatrix::from_int(&v[j]);
        for c in 0..r[j] {
            for row in 0..b.rows {
                let e = b.get(row, c) * &f;
                b.set(row, c, e);
            }
        }
        let m = PolyMatrix::from_int(&v_inv[j + 1]).mul(&piece.diffs[j]).mul(&b);
        let f2 = &f * &f;
        let rj1 = r[j + 1];
        let d = div_entries(&m, |row| if row < rj1 { f2.clone() } else { f.clone() })?;
        diffs.push(d);
    }
    let scalars = match &piece.scalars {
        // all scalars divisible by q - 1 means d(1) = 0 and the basis is unchanged
        Some(s) if s.iter().all(|x| x.eval_one().is_zero()) => {
            Some(s.iter().map(|x| x.div_exact(&f)).collect::<std::result::Result<Vec<_>, _>>()?)
        }
        _ => None,
    };
    Ok(Piece { a: piece.a.clone(), ranks: piece.ranks.clone(), diffs, scalars })
}

/// `η_(q-1) K`, piece by piece; the ambient has to be `Z[q]`.
pub fn decalage(k: &QKoszul) -> Result<QKoszul> {
    if k.base != Base::Polynomial {
        return Err(Error::TorsionAmbient(k.base.to_string()));
    }
    let pieces = k.pieces.par_iter().map(decalage_piece).collect::<Result<Vec<_>>>()?;
    Ok(QKoszul { pieces, decalage: k.decalage + 1, ..k.clone() })
}

/// Integer vector helpers shared by the cohomology code.
pub(crate) fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(|x| x.is_zero())
}
