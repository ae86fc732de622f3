//! Cohomology of the pieces over `Z[q]/(q^m - 1)^k` by `Z`-flattening and
//! Smith normal form; Bocksteins and the reduction maps between levels.

use num_bigint::BigInt;
use qcore::linalg::{IntMatrix, Subquotient};
use qcore::qanalog::q_power_minus_one;
use qcore::{QuotientRing, ZqPoly};
use rayon::prelude::*;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::complex::{is_zero_vec, Piece, QKoszul};
use crate::error::{Error, Result};

/// `Z[q]/(q^m - 1)^k`.
pub fn quotient_ring(m: u64, k: u32) -> QuotientRing {
    QuotientRing::new(q_power_minus_one(m).pow(k), q_power_minus_one(m), None)
}

pub fn serialize_matrix<S: Serializer>(m: &IntMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(m.rows()))?;
    for r in m.to_rows() {
        seq.serialize_element(&r.iter().map(|x| x.to_string()).collect::<Vec<_>>())?;
    }
    seq.end()
}

fn serialize_opt_matrix<S: Serializer>(m: &Option<IntMatrix>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match m {
        Some(m) => serialize_matrix(m, s),
        None => s.serialize_none(),
    }
}

fn serialize_ints<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

pub fn matrix_strings(m: &IntMatrix) -> Vec<Vec<String>> {
    m.to_rows().into_iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyEntry {
    pub a: Vec<i64>,
    pub j: usize,
    pub free_rank: usize,
    #[serde(serialize_with = "serialize_ints")]
    pub torsion: Vec<BigInt>,
    /// Action of `q` on the chosen generators (columns are images).
    #[serde(serialize_with = "serialize_matrix")]
    pub q_matrix: IntMatrix,
    #[serde(serialize_with = "serialize_opt_matrix", skip_serializing_if = "Option::is_none")]
    pub bockstein_matrix: Option<IntMatrix>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyTable {
    pub n: usize,
    pub m: u64,
    pub k: u32,
    pub entries: Vec<CohomologyEntry>,
    /// Alternating sum of free ranks equals that of the chain ranks, per multidegree.
    pub euler_consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_squared_zero: Option<bool>,
}

impl CohomologyTable {
    pub fn get(&self, a: &[i64], j: usize) -> Option<&CohomologyEntry> {
        self.entries.iter().find(|e| e.a == a && e.j == j)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("table serialises")
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["a", "j", "free_rank", "torsion", "q_matrix", "bockstein_matrix"]).unwrap();
        for e in &self.entries {
            let a = e.a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
            let tors = e.torsion.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("|");
            let qm = serde_json::to_string(&matrix_strings(&e.q_matrix)).unwrap();
            let bm = e.bockstein_matrix.as_ref().map(|b| serde_json::to_string(&matrix_strings(b)).unwrap()).unwrap_or_default();
            w.write_record([a, e.j.to_string(), e.free_rank.to_string(), tors, qm, bm]).unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }
}

/// Flattened differentials and the cohomology groups of one piece.
#[derive(Clone, Debug)]
pub struct PieceCohomology {
    pub a: Vec<i64>,
    pub dim: usize,
    pub flat: Vec<IntMatrix>,
    pub groups: Vec<Subquotient>,
}

pub fn piece_cohomology(piece: &Piece, ring: &QuotientRing) -> PieceCohomology {
    let dim = ring.dim();
    let n = piece.ranks.len() - 1;
    let flat: Vec<IntMatrix> = (0..=n).map(|j| piece.diff(j).flatten(ring)).collect();
    let groups = (0..=n)
        .map(|j| {
            let prev = if j == 0 { IntMatrix::zeros(piece.ranks[0] * dim, 0) } else { flat[j - 1].clone() };
            Subquotient::new(&prev, &flat[j])
        })
        .collect();
    PieceCohomology { a: piece.a.clone(), dim, flat, groups }
}

/// Block-diagonal multiplication by `c` on `rank` copies of the ring.
pub fn block_mult(ring: &QuotientRing, c: &ZqPoly, rank: usize) -> IntMatrix {
    let d = ring.dim();
    let mut out = IntMatrix::zeros(rank * d, rank * d);
    let b = ring.mult_matrix(c);
    for i in 0..rank {
        out.set_block(i * d, i * d, &b);
    }
    out
}

fn entries_for(piece: &Piece, pc: &PieceCohomology, ring: &QuotientRing) -> Vec<CohomologyEntry> {
    pc.groups
        .iter()
        .enumerate()
        .map(|(j, g)| {
            let qmap = block_mult(ring, &ZqPoly::q(), piece.ranks[j]);
            CohomologyEntry {
                a: piece.a.clone(),
                j,
                free_rank: g.free_rank(),
                torsion: g.torsion(),
                q_matrix: g.induced(&qmap, g),
                bockstein_matrix: None,
            }
        })
        .collect()
}

fn euler_ok(piece: &Piece, pc: &PieceCohomology) -> bool {
    let mut chain = 0i64;
    let mut coh = 0i64;
    for (j, g) in pc.groups.iter().enumerate() {
        let sign = if j % 2 == 0 { 1 } else { -1 };
        chain += sign * (piece.ranks[j] * pc.dim) as i64;
        coh += sign * g.free_rank() as i64;
    }
    chain == coh
}

/// Cohomology of every piece over `Z[q]/(q^m - 1)^k`.
pub fn cohomology_mod(k: &QKoszul, m: u64, kk: u32) -> Result<CohomologyTable> {
    if m == 0 || kk == 0 {
        return Err(Error::InvalidArgument("need m >= 1 and k >= 1".into()));
    }
    let ring = quotient_ring(m, kk);
    let per: Vec<(Vec<CohomologyEntry>, bool)> = k
        .pieces
        .par_iter()
        .map(|p| {
            let pc = piece_cohomology(p, &ring);
            (entries_for(p, &pc, &ring), euler_ok(p, &pc))
        })
        .collect();
    let euler_consistent = per.iter().all(|(_, ok)| *ok);
    let entries = per.into_iter().flat_map(|(e, _)| e).collect();
    Ok(CohomologyTable { n: k.n(), m, k: kk, entries, euler_consistent, beta_squared_zero: None })
}

fn slots(v: &[BigInt], d: usize) -> Vec<ZqPoly> {
    v.chunks(d).map(|c| ZqPoly::from_coeffs(c.to_vec())).collect()
}

/// Connecting map of `C/f -> C/f^2 -> C/f` with `f = q^m - 1`, on a cycle `z`
/// of degree `j` (flattened over `Z[q]/f`): lift, apply `d` mod `f^2`, divide by `f`.
pub fn bockstein_rep(piece: &Piece, j: usize, z: &[BigInt], m: u64) -> Result<Vec<BigInt>> {
    let d = m as usize;
    let n = piece.ranks.len() - 1;
    if j >= n {
        return Ok(Vec::new());
    }
    let r2 = quotient_ring(m, 2);
    let f = q_power_minus_one(m);
    let zs = slots(z, d);
    let dm = &piece.diffs[j];
    let mut out = Vec::with_capacity(dm.rows * d);
    for r in 0..dm.rows {
        let mut acc = ZqPoly::zero();
        for (c, zc) in zs.iter().enumerate() {
            let e = dm.get(r, c);
            if !e.is_zero() && !zc.is_zero() {
                acc = r2.add(&acc, &r2.mul(&r2.reduce(e), zc));
            }
        }
        let w = r2.reduce(&acc).div_exact(&f)?;
        out.extend(w.dense(d));
    }
    Ok(out)
}

fn bockstein_matrix(piece: &Piece, pc: &PieceCohomology, j: usize, m: u64) -> Result<IntMatrix> {
    let n = pc.groups.len() - 1;
    if j >= n {
        return Ok(IntMatrix::zeros(0, pc.groups[j].len()));
    }
    let target = &pc.groups[j + 1];
    let cols = pc.groups[j]
        .gens
        .iter()
        .map(|g| Ok(target.coords(&bockstein_rep(piece, j, g, m)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(IntMatrix::from_cols(target.len(), &cols))
}

fn beta_squared(piece: &Piece, pc: &PieceCohomology, m: u64) -> Result<bool> {
    let n = pc.groups.len() - 1;
    for j in 0..n.saturating_sub(1) {
        for g in &pc.groups[j].gens {
            let w = bockstein_rep(piece, j, g, m)?;
            let w2 = bockstein_rep(piece, j + 1, &w, m)?;
            if !is_zero_vec(&pc.groups[j + 2].coords(&w2)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Cohomology mod `q^m - 1` with Bockstein matrices `H^j -> H^(j+1)`; checks `β² = 0`.
pub fn bockstein(k: &QKoszul, m: u64) -> Result<CohomologyTable> {
    if m == 0 {
        return Err(Error::InvalidArgument("need m >= 1".into()));
    }
    let ring = quotient_ring(m, 1);
    let per = k
        .pieces
        .par_iter()
        .map(|p| {
            let pc = piece_cohomology(p, &ring);
            let mut es = entries_for(p, &pc, &ring);
            for (j, e) in es.iter_mut().enumerate() {
                e.bockstein_matrix = Some(bockstein_matrix(p, &pc, j, m)?);
            }
            Ok((es, euler_ok(p, &pc), beta_squared(p, &pc, m)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let euler_consistent = per.iter().all(|x| x.1);
    let bsq = per.iter().all(|x| x.2);
    let entries = per.into_iter().flat_map(|x| x.0).collect();
    Ok(CohomologyTable { n: k.n(), m, k: 1, entries, euler_consistent, beta_squared_zero: Some(bsq) })
}

#[derive(Clone, Debug, Serialize)]
pub struct TransitionEntry {
    pub a: Vec<i64>,
    pub j: usize,
    #[serde(serialize_with = "serialize_matrix")]
    pub matrix: IntMatrix,
    pub intertwines: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FrobeniusTransition {
    pub m: u64,
    pub d: u64,
    pub source: CohomologyTable,
    pub target: CohomologyTable,
    pub maps: Vec<TransitionEntry>,
    /// `β_d ∘ F = (m/d) F ∘ β_m` on every generator.
    pub intertwining_holds: bool,
}

/// Reduction `Z[q]/(q^m - 1) -> Z[q]/(q^d - 1)` on `rank` copies.
fn reduction_matrix(m: u64, d: u64, rank: usize) -> IntMatrix {
    let rd = quotient_ring(d, 1);
    let (dm, dd) = (m as usize, d as usize);
    let mut block = IntMatrix::zeros(dd, dm);
    for t in 0..dm {
        let c = rd.coords(&ZqPoly::monomial(1, t as i64));
        for (i, x) in c.into_iter().enumerate() {
            block[(i, t)] = x;
        }
    }
    let mut out = IntMatrix::zeros(rank * dd, rank * dm);
    for i in 0..rank {
        out.set_block(i * dd, i * dm, &block);
    }
    out
}

/// Map of cohomology tables induced by reduction from level `m` to level `d`.
pub fn frobenius_transition(k: &QKoszul, m: u64, d: u64) -> Result<FrobeniusTransition> {
    if d == 0 || m == 0 || m % d != 0 {
        return Err(Error::NotADivisor { d, m });
    }
    let source = bockstein(k, m)?;
    let target = bockstein(k, d)?;
    let (rm, rd) = (quotient_ring(m, 1), quotient_ring(d, 1));
    let factor = BigInt::from(m / d);
    let per = k
        .pieces
        .par_iter()
        .map(|p| {
            let pm = piece_cohomology(p, &rm);
            let pd = piece_cohomology(p, &rd);
            let n = p.ranks.len() - 1;
            let mut out = Vec::new();
            for j in 0..=n {
                let fj = reduction_matrix(m, d, p.ranks[j]);
                let matrix = pm.groups[j].induced(&fj, &pd.groups[j]);
                let mut ok = true;
                if j < n {
                    let fj1 = reduction_matrix(m, d, p.ranks[j + 1]);
                    for g in &pm.groups[j].gens {
                        let lhs = pd.groups[j + 1].coords(&bockstein_rep(p, j, &fj.mul_vec(g), d)?);
                        let w: Vec<BigInt> =
                            fj1.mul_vec(&bockstein_rep(p, j, g, m)?).into_iter().map(|x| x * &factor).collect();
                        let rhs = pd.groups[j + 1].coords(&w);
                        if lhs != rhs {
                            ok = false;
                        }
                    }
                }
                out.push(TransitionEntry { a: p.a.clone(), j, matrix, intertwines: ok });
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let maps: Vec<TransitionEntry> = per.into_iter().flatten().collect();
    let intertwining_holds = maps.iter().all(|e| e.intertwines);
    Ok(FrobeniusTransition { m, d, source, target, maps, intertwining_holds })
}

/// Order of a finite abelian group given by invariant factors, `None` if infinite.
pub fn group_order(free_rank: usize, torsion: &[BigInt]) -> Option<BigInt> {
    if free_rank > 0 {
        return None;
    }
    Some(torsion.iter().fold(BigInt::from(1), |acc, t| acc * t))
}

