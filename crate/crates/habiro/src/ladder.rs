//! The `(q;q)_n` ladder, its two-term resolution, and Nakayama-style probes.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use qcore::linalg::{kernel_basis, rank_rational, IntMatrix, Subquotient};
use qcore::qanalog::{cyclotomic, q_pochhammer};
use qcore::{QuotientRing, ZqPoly};
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest q-degree span accepted in a presentation entry.
pub const DEGREE_CAP: i64 = 4096;

/// `coker(Z[q^±]^r -> Z[q^±]^g)`, optionally with one element inverted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub generators: usize,
    /// Each relation is a vector of length `generators`.
    pub relations: Vec<Vec<ZqPoly>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inverted: Option<ZqPoly>,
}

impl Presentation {
    pub fn new(generators: usize, relations: Vec<Vec<ZqPoly>>, inverted: Option<ZqPoly>) -> Result<Self> {
        if relations.iter().any(|r| r.len() != generators) {
            return Err(Error::InvalidArgument("relation length differs from the number of generators".into()));
        }
        if inverted.as_ref().is_some_and(|t| t.is_zero()) {
            return Err(Error::InvalidArgument("cannot invert 0".into()));
        }
        Ok(Presentation { generators, relations, inverted })
    }

    pub fn free(r: usize) -> Self {
        Presentation { generators: r, relations: Vec::new(), inverted: None }
    }

    /// `Z[q^±]/f`.
    pub fn cyclic(f: ZqPoly) -> Self {
        Presentation { generators: 1, relations: vec![vec![f]], inverted: None }
    }

    /// `Z[q^±][1/(q;q)_w]`: a finite window of the localisation inverting every `(q;q)_n`.
    pub fn localisation_window(w: u64) -> Self {
        Presentation { generators: 1, relations: Vec::new(), inverted: Some(q_pochhammer(w)) }
    }

    /// `Z[q^±][1/t]`.
    pub fn localised(t: ZqPoly) -> Self {
        Presentation { generators: 1, relations: Vec::new(), inverted: Some(t) }
    }

    fn check_degrees(&self) -> Result<()> {
        let entries = self.relations.iter().flatten().chain(self.inverted.iter());
        for e in entries {
            if let Some(d) = e.degree() {
                let span = d - e.valuation();
                if span > DEGREE_CAP {
                    return Err(Error::UnboundedDegree { span, cap: DEGREE_CAP });
                }
            }
        }
        Ok(())
    }
}

/// Invariants of a finitely generated abelian group, as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleInvariants {
    pub free_rank: usize,
    pub torsion: Vec<String>,
    pub vanishes: bool,
}

impl ModuleInvariants {
    fn zero() -> Self {
        ModuleInvariants { free_rank: 0, torsion: Vec::new(), vanishes: true }
    }
}

/// Monic, constant term at degree 0, sign normalised.
fn normalise(f: &ZqPoly) -> Result<ZqPoly> {
    let f = f.shift(-f.valuation());
    let lc = f.leading_coeff();
    if !lc.abs().is_one() || !f.coeff(0).abs().is_one() {
        return Err(Error::InvalidArgument(format!("{f} is not a unit-normalised polynomial")));
    }
    Ok(if lc.is_negative() { -f } else { f })
}

/// Map of multiplication by `t` on `N`, in the generator coordinates of `N`.
fn nilpotent_on(n: &Subquotient, ring: &QuotientRing, gens: usize, t: &ZqPoly) -> bool {
    if n.is_zero() {
        return true;
    }
    let block = ring.mult_matrix(t);
    let mut full = IntMatrix::zeros(gens * ring.dim(), gens * ring.dim());
    for g in 0..gens {
        full.set_block(g * ring.dim(), g * ring.dim(), &block);
    }
    let m = n.induced(&full, n);
    // T nilpotent on N kills N after at most rank + (bit length of the torsion) steps
    let bound: u64 = n.free_rank() as u64 + n.torsion().iter().map(|d| d.bits()).sum::<u64>();
    let mut power = m;
    let mut reach = 1u64;
    loop {
        if power.is_zero() {
            return true;
        }
        if reach >= bound.max(1) {
            return false;
        }
        power = n.reduce_cols(&power.mul(&power));
        reach *= 2;
    }
}

/// Invariants of `M/f M` (with the inverted element still inverted), `f` monic up to sign and units.
pub fn quotient_by(p: &Presentation, f: &ZqPoly) -> Result<ModuleInvariants> {
    p.check_degrees()?;
    let f = normalise(f)?;
    if f.degree() == Some(0) {
        return Ok(ModuleInvariants::zero());
    }
    let ring = QuotientRing::new(f.clone(), f, None);
    let dim = ring.dim();
    let ambient = p.generators * dim;
    let mut cols = Vec::new();
    for rel in &p.relations {
        for t in 0..dim {
            let mut v = Vec::with_capacity(ambient);
            for e in rel {
                v.extend(ring.coords(&(e * &ZqPoly::monomial(1, t as i64))));
            }
            cols.push(v);
        }
    }
    let a = IntMatrix::from_cols(ambient, &cols);
    let n = Subquotient::new(&a, &IntMatrix::zeros(0, ambient));
    let vanishes = match &p.inverted {
        None => n.is_zero(),
        Some(t) => nilpotent_on(&n, &ring, p.generators, t),
    };
    if vanishes {
        return Ok(ModuleInvariants::zero());
    }
    // with an inverted element, the underlying group before localising is reported
    Ok(ModuleInvariants {
        free_rank: n.free_rank(),
        torsion: n.torsion().iter().map(|d| d.to_string()).collect(),
        vanishes,
    })
}

/// `M/(q;q)_n`.
pub fn ladder_stage(p: &Presentation, n: u64) -> Result<ModuleInvariants> {
    quotient_by(p, &q_pochhammer(n))
}

/// Stages `1..=n_max` and whether the last two agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LadderReport {
    pub stages: Vec<(u64, ModuleInvariants)>,
    pub stabilises: bool,
}

pub fn ladder(p: &Presentation, n_max: u64) -> Result<LadderReport> {
    let stages = (1..=n_max).map(|n| Ok((n, ladder_stage(p, n)?))).collect::<Result<Vec<_>>>()?;
    let stabilises = stages.len() >= 2 && stages[stages.len() - 1].1 == stages[stages.len() - 2].1;
    Ok(LadderReport { stages, stabilises })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NakayamaReport {
    pub quotients: Vec<(u64, ModuleInvariants)>,
    pub ladder: Vec<(u64, ModuleInvariants)>,
    /// Every tested `M/Φ_m` and every ladder stage vanishes.
    pub habiro_trivial: bool,
}

/// Tests `M/Φ_m` for each `m`, and the ladder up to the largest `m`.
pub fn nakayama_probe(p: &Presentation, m_list: &[u64]) -> Result<NakayamaReport> {
    let quotients = m_list.iter().map(|&m| Ok((m, quotient_by(p, &cyclotomic(m))?))).collect::<Result<Vec<_>>>()?;
    let top = m_list.iter().copied().max().unwrap_or(0);
    let ladder = (1..=top).map(|n| Ok((n, ladder_stage(p, n)?))).collect::<Result<Vec<_>>>()?;
    let habiro_trivial = quotients.iter().chain(&ladder).all(|(_, inv)| inv.vanishes);
    Ok(NakayamaReport { quotients, ladder, habiro_trivial })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionReport {
    pub n_max: u64,
    pub degree_bound: usize,
    pub composite_zero: bool,
    pub first_injective: bool,
    /// Kernel of the second map on the window equals the image of the first.
    pub middle_exact: bool,
    pub kernel_rank: usize,
    /// Preimage of `1/(q;q)_(n_max-1)` and of `1/(q;q)_n_max`: coordinates `a_0..a_n_max`.
    pub lifts: Vec<Vec<ZqPoly>>,
    pub lifts_verified: bool,
    pub pass: bool,
}

fn one_minus_q_pow(i: u64) -> ZqPoly {
    &ZqPoly::one() - &ZqPoly::monomial(1, i as i64)
}

/// First map on the window: `(a_0..a_{N-1}) -> (a_i - (1 - q^i) a_{i-1})_{0..=N}`.
fn first_map(a: &[ZqPoly], n: usize) -> Vec<ZqPoly> {
    (0..=n)
        .map(|i| {
            let cur = a.get(i).cloned().unwrap_or_else(ZqPoly::zero);
            if i == 0 {
                cur
            } else {
                &cur - &(&one_minus_q_pow(i as u64) * &a[i - 1])
            }
        })
        .collect()
}

/// `(q;q)_N * sum b_i/(q;q)_i`.
fn second_map_cleared(b: &[ZqPoly], n: usize) -> ZqPoly {
    let full = q_pochhammer(n as u64);
    b.iter().enumerate().fold(ZqPoly::zero(), |acc, (i, bi)| {
        let cof = full.div_exact(&q_pochhammer(i as u64)).expect("(q;q)_i divides (q;q)_N");
        &acc + &(bi * &cof)
    })
}

fn flatten(polys: &[ZqPoly], len: usize) -> Vec<BigInt> {
    polys.iter().flat_map(|p| p.dense(len)).collect()
}

/// Exactness of `0 -> ⊕ Z[q^±] -> ⊕ Z[q^±] -> Z[q^±][1/(q;q)]` on the window `i <= n_max`,
/// with inputs of q-degree below `degree_bound`.
pub fn resolution_window_check(n_max: u64, degree_bound: usize) -> Result<ResolutionReport> {
    if n_max == 0 || degree_bound == 0 {
        return Err(Error::InvalidArgument("need n_max >= 1 and a positive degree bound".into()));
    }
    let n = n_max as usize;
    let d = degree_bound;
    let unit = |i: usize, len: usize| -> Vec<ZqPoly> {
        (0..len).map(|j| if j == i { ZqPoly::one() } else { ZqPoly::zero() }).collect()
    };

    let composite_zero = (0..n).all(|j| second_map_cleared(&first_map(&unit(j, n), n), n).is_zero());

    // first map flattened: inputs deg < d, outputs deg < d + n
    let out_len = d + n;
    let mut cols = Vec::new();
    for j in 0..n {
        for t in 0..d {
            let mut a = unit(j, n);
            a[j] = ZqPoly::monomial(1, t as i64);
            cols.push(flatten(&first_map(&a, n), out_len));
        }
    }
    let f = IntMatrix::from_cols((n + 1) * out_len, &cols);
    let first_injective = rank_rational(&f) == n * d;

    // second map flattened on inputs of degree < d
    let img_len = d + (n * (n + 1)) / 2 + 1;
    let mut cols = Vec::new();
    for i in 0..=n {
        for t in 0..d {
            let mut b = unit(i, n + 1);
            b[i] = ZqPoly::monomial(1, t as i64);
            cols.push(second_map_cleared(&b, n).dense(img_len));
        }
    }
    let g = IntMatrix::from_cols(img_len, &cols);
    let kernel = kernel_basis(&g);
    let kernel_rank = kernel.cols();
    let middle_exact = (0..kernel_rank).all(|c| {
        let col = kernel.col(c);
        let b: Vec<ZqPoly> = (0..=n).map(|i| ZqPoly::from_coeffs(col[i * d..(i + 1) * d].to_vec())).collect();
        back_substitute(&b, n).is_some_and(|a| first_map(&a, n) == b)
    });

    // 1/(q;q)_k is the image of e_k; the window's top denominator is (q;q)_N
    let targets = [n - 1, n];
    let lifts: Vec<Vec<ZqPoly>> = targets.iter().map(|&k| unit(k, n + 1)).collect();
    let lifts_verified = targets
        .iter()
        .zip(&lifts)
        .all(|(&k, l)| second_map_cleared(l, n) == q_pochhammer(n as u64).div_exact(&q_pochhammer(k as u64)).unwrap());

    let pass = composite_zero && first_injective && middle_exact && lifts_verified;
    Ok(ResolutionReport { n_max, degree_bound: d, composite_zero, first_injective, middle_exact, kernel_rank, lifts, lifts_verified, pass })
}

/// Solves `first_map(a) = b` by exact division from the top, if possible.
fn back_substitute(b: &[ZqPoly], n: usize) -> Option<Vec<ZqPoly>> {
    let mut a = vec![ZqPoly::zero(); n];
    // b_N = -(1 - q^N) a_{N-1}
    a[n - 1] = (-&b[n]).div_exact(&one_minus_q_pow(n as u64)).ok()?;
    for i in (1..n).rev() {
        a[i - 1] = (&a[i] - &b[i]).div_exact(&one_minus_q_pow(i as u64)).ok()?;
    }
    Some(a)
}

