//! Relative Habiro rings of etale algebras, glued from `Φ_d`-adic components.

use std::collections::BTreeMap;

use qcore::arith::{divisors, euler_phi, factorize};
use qcore::linalg::{IntMatrix, Subquotient};
use qcore::qanalog::cyclotomic;
use qcore::{QuotientRing, ZqPoly};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::etale::{adams, adams_composite, eval_in, frobenius_lift, frobenius_power_lift, EtaleAlgebraSpec, EtaleSpecJson, FrobeniusLift};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RelativePrecision {
    /// Power of `Φ_pd` in the targets of the gluing maps.
    pub n: u32,
    /// `p`-adic precision of the gluing maps.
    pub a: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub d: u64,
    /// `E_d = R[q]/Φ_d^length`.
    pub length: u32,
    /// Rank of `E_d` over `Z[1/Δ]`.
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gluing {
    pub p: u64,
    pub from: u64,
    pub to: u64,
    /// `φ_p(x) = x^p mod p` and `g(φ_p(x)) = 0 mod p^a`.
    pub frobenius_ok: bool,
    /// `Φ_from^length` vanishes modulo `(p^a, Φ_to^n)`, so the map is defined on `E_from`.
    pub defined: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareCheck {
    pub d: u64,
    pub p: u64,
    pub l: u64,
    /// `φ_p ψ^l = ψ^l φ_p` modulo `p^a` and `φ_l ψ^p = ψ^p φ_l` modulo `l^a`.
    pub commutes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainCheck {
    pub d: u64,
    pub p: u64,
    /// `φ_p φ_p` is the lift of the `p^2`-power Frobenius.
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GluedRing {
    pub spec: EtaleSpecJson,
    pub m: u64,
    pub precision: RelativePrecision,
    pub components: Vec<Component>,
    /// Primes dividing `m` that are inverted in `R`: no gluing data there.
    pub inverted_primes: Vec<u64>,
    pub lifts: BTreeMap<u64, FrobeniusLift>,
    pub gluings: Vec<Gluing>,
    pub squares: Vec<SquareCheck>,
    pub chains: Vec<ChainCheck>,
    pub pass: bool,
    #[serde(skip)]
    etale: EtaleAlgebraSpec,
}

fn prime_divisors(m: u64) -> Vec<u64> {
    factorize(m).into_iter().map(|(p, _)| p).collect()
}

/// `(Z/p^a)[q]/Φ_pd^n`.
fn target_ring(p: u64, d: u64, prec: RelativePrecision) -> QuotientRing {
    let phi = cyclotomic(p * d);
    QuotientRing::new(phi.pow(prec.n), phi, Some((p, prec.a)))
}

/// Least `e` with `Φ_d^e = 0` in the target ring.
fn nilpotency(p: u64, d: u64, prec: RelativePrecision) -> Result<u32> {
    let ring = target_ring(p, d, prec);
    let phi_d = ring.reduce(&cyclotomic(d));
    let mut acc = phi_d.clone();
    for e in 1..=4096u32 {
        if acc.is_zero() {
            return Ok(e);
        }
        acc = ring.mul(&acc, &phi_d);
    }
    Err(Error::InsufficientPrecision(format!("Φ_{d} is not nilpotent modulo ({p}^{}, Φ_{}^{})", prec.a, p * d, prec.n)))
}

impl GluedRing {
    pub fn etale(&self) -> &EtaleAlgebraSpec {
        &self.etale
    }

    pub fn component(&self, d: u64) -> Result<&Component> {
        self.components.iter().find(|c| c.d == d).ok_or(Error::NotADivisor { d, m: self.m })
    }

    fn component_ring(&self, d: u64) -> Result<QuotientRing> {
        let c = self.component(d)?;
        let phi = cyclotomic(d);
        Ok(QuotientRing::new(phi.pow(c.length), phi, None))
    }
}

pub fn build_relative_habiro(spec: &EtaleAlgebraSpec, m: u64, prec: RelativePrecision) -> Result<GluedRing> {
    if m == 0 || prec.n == 0 || prec.a == 0 {
        return Err(Error::InvalidArgument("need m, n, a >= 1".into()));
    }
    let divs = divisors(m);
    let primes = prime_divisors(m);
    let inverted_primes: Vec<u64> = primes.iter().copied().filter(|&p| spec.inverts(p)).collect();
    let live: Vec<u64> = primes.iter().copied().filter(|p| !inverted_primes.contains(p)).collect();
    let lifts = live.iter().map(|&p| Ok((p, frobenius_lift(spec, p, prec.a)?))).collect::<Result<BTreeMap<_, _>>>()?;

    let mut lengths: BTreeMap<u64, u32> = divs.iter().map(|&d| (d, prec.n)).collect();
    let mut edges = Vec::new();
    for &d in &divs {
        for &p in &live {
            if m % (p * d) == 0 {
                let e = nilpotency(p, d, prec)?;
                let l = lengths.get_mut(&d).unwrap();
                *l = (*l).max(e);
                edges.push((p, d));
            }
        }
    }
    let deg = spec.degree();
    let components = divs
        .iter()
        .map(|&d| Component { d, length: lengths[&d], rank: deg * euler_phi(d) as usize * lengths[&d] as usize })
        .collect();

    let gluings = edges
        .iter()
        .map(|&(p, d)| {
            let lift = &lifts[&p];
            let ring = target_ring(p, d, prec);
            let defined = ring.pow(&cyclotomic(d), lengths[&d] as u64).is_zero();
            Gluing { p, from: d, to: p * d, frobenius_ok: lift.is_root && lift.lifts_frobenius, defined }
        })
        .collect::<Vec<_>>();

    let mut squares = Vec::new();
    for &d in &divs {
        for (i, &p) in live.iter().enumerate() {
            for &l in &live[i + 1..] {
                if m % (p * l * d) == 0 {
                    let commutes = commutes_with_adams(spec, &lifts[&p], l)? && commutes_with_adams(spec, &lifts[&l], p)?;
                    squares.push(SquareCheck { d, p, l, commutes });
                }
            }
        }
    }

    let mut chains = Vec::new();
    for &d in &divs {
        for &p in &live {
            if m % (p * p * d) == 0 {
                let ring = spec.ring_mod(p, prec.a);
                let phi = &lifts[&p].phi;
                let twice = eval_in(&ring, phi, phi);
                let agrees = twice == frobenius_power_lift(spec, p, 2, prec.a)?;
                chains.push(ChainCheck { d, p, agrees });
            }
        }
    }

    let pass = lifts.values().all(|l| l.unique)
        && gluings.iter().all(|g| g.frobenius_ok && g.defined)
        && squares.iter().all(|s| s.commutes)
        && chains.iter().all(|c| c.agrees);
    Ok(GluedRing {
        spec: spec.to_json(),
        m,
        precision: prec,
        components,
        inverted_primes,
        lifts,
        gluings,
        squares,
        chains,
        pass,
        etale: spec.clone(),
    })
}

/// `φ_p ψ^l = ψ^l φ_p` in `(Z/p^a)[x]/g`.
fn commutes_with_adams(spec: &EtaleAlgebraSpec, lift: &FrobeniusLift, l: u64) -> Result<bool> {
    let ring = spec.ring_mod(lift.p, lift.a);
    let psi = adams(spec, l)?;
    Ok(eval_in(&ring, &psi, &lift.phi) == eval_in(&ring, &lift.phi, &psi))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentComparison {
    pub d: u64,
    /// Rank of `R[q]/Φ_d` over `Z[1/Δ]`.
    pub rank: usize,
    pub reduction_surjective: bool,
    /// The kernel of reduction is exactly `Φ_d E_d`.
    pub kernel_is_phi_multiples: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusComparison {
    pub p: u64,
    /// `φ_p(r) = r^p` modulo `p` on the basis `x^i` and on `1 + x`.
    pub p_power_mod_p: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QWittReport {
    pub m: u64,
    pub components: Vec<ComponentComparison>,
    pub frobenius: Vec<FrobeniusComparison>,
    pub pass: bool,
}

/// Reduction `Z[q]/Φ_d^len -> Z[q]/Φ_d` on the basis `q^j`.
fn reduction_matrix(d: u64, len: u32) -> IntMatrix {
    let phi = cyclotomic(d);
    let small = QuotientRing::new(phi.clone(), phi, None);
    let big = euler_phi(d) as usize * len as usize;
    let cols: Vec<_> = (0..big).map(|j| small.coords(&ZqPoly::monomial(1, j as i64))).collect();
    IntMatrix::from_cols(small.dim(), &cols)
}

/// Checks `E_d/Φ_d ≅ R[q]/Φ_d` per component and the mod-`p` Frobenius on every lift.
/// `R` is free over `Z[1/Δ]` on `x^i`, so reduction is the identity on `R` tensored with
/// the map checked here.
pub fn compare_qwitt(g: &GluedRing) -> Result<QWittReport> {
    let spec = g.etale();
    let mut components = Vec::new();
    for c in &g.components {
        let red = reduction_matrix(c.d, c.length);
        let coker = Subquotient::new(&red, &IntMatrix::zeros(0, red.rows()));
        let ring = g.component_ring(c.d)?;
        let phi = cyclotomic(c.d);
        let span_len = euler_phi(c.d) as usize * (c.length as usize - 1);
        let cols: Vec<_> = (0..span_len).map(|j| ring.coords(&(&phi * &ZqPoly::monomial(1, j as i64)))).collect();
        let span = IntMatrix::from_cols(ring.dim(), &cols);
        let ker_mod_span = Subquotient::new(&span, &red);
        components.push(ComponentComparison {
            d: c.d,
            rank: spec.degree() * euler_phi(c.d) as usize,
            reduction_surjective: coker.is_zero(),
            kernel_is_phi_multiples: ker_mod_span.is_zero() && red.mul(&span).is_zero(),
        });
    }
    let mut frobenius = Vec::new();
    for (p, lift) in &g.lifts {
        let r1 = spec.ring_mod(*p, 1);
        let mut tests: Vec<ZqPoly> = (0..spec.degree()).map(|i| ZqPoly::monomial(1, i as i64)).collect();
        tests.push(&ZqPoly::one() + &ZqPoly::q());
        let p_power_mod_p = tests.iter().all(|r| r1.reduce(&eval_in(&r1, r, &lift.phi)) == r1.pow(r, *p));
        frobenius.push(FrobeniusComparison { p: *p, p_power_mod_p });
    }
    let pass = components.iter().all(|c| c.reduction_surjective && c.kernel_is_phi_multiples)
        && frobenius.iter().all(|f| f.p_power_mod_p)
        && g.pass;
    Ok(QWittReport { m: g.m, components, frobenius, pass })
}

/// A family `d -> x_d ∈ E_d`, each `x_d` given by its coefficients on `x^0 .. x^(deg g - 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GluedElement {
    pub m: u64,
    pub components: BTreeMap<u64, Vec<ZqPoly>>,
}

/// `φ_p` applied to the `R`-coefficients of `x`, reduced into the target ring.
fn apply_gluing(g: &GluedRing, p: u64, d: u64, x: &[ZqPoly]) -> Vec<ZqPoly> {
    let spec = g.etale();
    let rp = spec.ring_mod(p, g.precision.a);
    let phi = &g.lifts[&p].phi;
    let target = target_ring(p, d, g.precision);
    let deg = spec.degree();
    let mut out = vec![ZqPoly::zero(); deg];
    for (i, ci) in x.iter().enumerate() {
        let img = rp.pow(phi, i as u64);
        for (k, o) in out.iter_mut().enumerate() {
            *o = &*o + &ci.scale(&img.coeff(k as i64));
        }
    }
    out.iter().map(|o| target.reduce(o)).collect()
}

/// Validates every gluing and returns the element.
pub fn glued_element(g: &GluedRing, components: BTreeMap<u64, Vec<ZqPoly>>) -> Result<GluedElement> {
    let deg = g.etale().degree();
    let mut reduced = BTreeMap::new();
    for c in &g.components {
        let x = components.get(&c.d).ok_or(Error::MissingIndex(c.d))?;
        if x.len() != deg {
            return Err(Error::InvalidArgument(format!("component {} needs {deg} coefficients", c.d)));
        }
        let ring = g.component_ring(c.d)?;
        reduced.insert(c.d, x.iter().map(|e| ring.reduce(e)).collect::<Vec<_>>());
    }
    if let Some(&d) = components.keys().find(|d| g.component(**d).is_err()) {
        return Err(Error::NotADivisor { d, m: g.m });
    }
    for gl in &g.gluings {
        let lhs = apply_gluing(g, gl.p, gl.from, &reduced[&gl.from]);
        let target = target_ring(gl.p, gl.from, g.precision);
        let rhs: Vec<ZqPoly> = reduced[&gl.to].iter().map(|e| target.reduce(e)).collect();
        if lhs != rhs {
            return Err(Error::IncompatibleComponents { p: gl.p, d: gl.from });
        }
    }
    Ok(GluedElement { m: g.m, components: reduced })
}

fn coefficients(spec: &EtaleAlgebraSpec, r: &ZqPoly) -> Vec<ZqPoly> {
    let r = spec.ring().reduce(r);
    (0..spec.degree()).map(|i| ZqPoly::constant(r.coeff(i as i64))).collect()
}

/// The image of `r ∈ R`: `ψ^d(r)` in component `d`. For `R = Z` this is `r` everywhere.
pub fn glued_constant(g: &GluedRing, r: &ZqPoly) -> Result<GluedElement> {
    let spec = g.etale();
    let ring = spec.ring();
    let comps = g
        .components
        .iter()
        .map(|c| Ok((c.d, coefficients(spec, &eval_in(&ring, r, &adams_composite(spec, c.d)?)))))
        .collect::<Result<BTreeMap<_, _>>>()?;
    glued_element(g, comps)
}

/// `r` placed untwisted in every component.
pub fn untwisted_constant(g: &GluedRing, r: &ZqPoly) -> Result<GluedElement> {
    let spec = g.etale();
    let comps = g.components.iter().map(|c| (c.d, coefficients(spec, r))).collect();
    glued_element(g, comps)
}

/// `q` in every component.
pub fn glued_q(g: &GluedRing) -> Result<GluedElement> {
    let deg = g.etale().degree();
    let comps = g
        .components
        .iter()
        .map(|c| {
            let mut v = vec![ZqPoly::zero(); deg];
            v[0] = ZqPoly::q();
            (c.d, v)
        })
        .collect();
    glued_element(g, comps)
}

/// Projection to the `Φ_d` component.
pub fn ghost(e: &GluedElement, d: u64) -> Result<Vec<ZqPoly>> {
    if d == 0 || e.m % d != 0 {
        return Err(Error::NotADivisor { d, m: e.m });
    }
    Ok(e.components[&d].clone())
}
