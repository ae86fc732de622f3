//! Decomposition witnesses for iterated divided powers.
//!
//! Elements are built from atoms (`x`, `δ(Y)`, `γ_q(y)` or `γ(y)` for certified `y`)
//! with coefficients in `Z[s]/s^N`; a scaled term `(e, k, Y)` stands for `p^-e s^k Y`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use qcore::arith::binomial;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::DeltaPoly;
use crate::series::{c_series, g_series, h_series, inv_int, mul_int, pow_int, trim, unit_s};

pub type AtomId = usize;
pub type CertId = usize;

/// Which divided-power structure the certificates refer to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// q-divided powers; atoms `γ_q(y)`.
    Q,
    /// classical divided powers; atoms `γ(y)`.
    Classical,
}

/// Polynomial in atoms with coefficients in `Z[s]/s^N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    n: u32,
    terms: BTreeMap<Vec<(AtomId, u32)>, Vec<BigInt>>,
}

fn mono_mul(a: &[(AtomId, u32)], b: &[(AtomId, u32)]) -> Vec<(AtomId, u32)> {
    let mut out: BTreeMap<AtomId, u32> = a.iter().cloned().collect();
    for &(id, e) in b {
        *out.entry(id).or_insert(0) += e;
    }
    out.into_iter().collect()
}

impl IntPoly {
    pub fn zero(n: u32) -> Self {
        IntPoly { n, terms: BTreeMap::new() }
    }

    pub fn series(n: u32, coeffs: &[BigInt]) -> Self {
        let mut out = Self::zero(n);
        out.add_term(Vec::new(), coeffs.to_vec());
        out
    }

    pub fn one(n: u32) -> Self {
        Self::series(n, &[BigInt::one()])
    }

    pub fn atom(n: u32, id: AtomId) -> Self {
        let mut out = Self::zero(n);
        out.add_term(vec![(id, 1)], vec![BigInt::one()]);
        out
    }

    fn add_term(&mut self, m: Vec<(AtomId, u32)>, mut c: Vec<BigInt>) {
        c.truncate(self.n as usize);
        let c = trim(c);
        if c.is_empty() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                if v.len() < c.len() {
                    v.resize(c.len(), BigInt::zero());
                }
                for (x, y) in v.iter_mut().zip(c) {
                    *x += y;
                }
                let t = trim(std::mem::take(v));
                if t.is_empty() {
                    self.terms.remove(&m);
                } else {
                    *v = t;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<(AtomId, u32)>, &Vec<BigInt>)> {
        self.terms.iter()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigInt::one())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self::zero(self.n);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.iter().map(|x| x * c).collect());
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.n.min(o.n));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(mono_mul(ma, mb), mul_int(ca, cb, out.n as usize));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.n), |acc, _| acc.mul(self))
    }

    pub fn mul_series(&self, s: &[BigInt]) -> Self {
        self.mul(&Self::series(self.n, s))
    }

    /// Multiply by `s^k`.
    pub fn shift_s(&self, k: u32) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let mut v = vec![BigInt::zero(); k as usize];
            v.extend(c.iter().cloned());
            out.add_term(m.clone(), v);
        }
        out
    }

    /// Reduce modulo `s^len`.
    pub fn truncate(&self, len: u32) -> Self {
        let mut out = Self::zero(len.min(self.n));
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        out.n = self.n;
        out
    }

    /// `(Y(s=0), (Y - Y(s=0))/s)`.
    pub fn split_constant(&self) -> (Self, Self) {
        let mut c0 = Self::zero(self.n);
        let mut rest = Self::zero(self.n);
        for (m, c) in &self.terms {
            c0.add_term(m.clone(), vec![c[0].clone()]);
            if c.len() > 1 {
                rest.add_term(m.clone(), c[1..].to_vec());
            }
        }
        (c0, rest)
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct T<'a> {
            atoms: &'a [(AtomId, u32)],
            s_coeffs: Vec<String>,
        }
        let v: Vec<T> = self.terms.iter().map(|(m, c)| T { atoms: m, s_coeffs: c.iter().map(|x| x.to_string()).collect() }).collect();
        v.serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Atom {
    X,
    Delta(IntPoly),
    GammaQ(CertId),
    Gamma(CertId),
}

/// Construction tree showing that an element admits (q-)divided powers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Cert {
    Generator,
    /// `s^k y` with `y` integral.
    QMinusOneMultiple { k: u32, y: IntPoly },
    GammaQ(CertId),
    Gamma(CertId),
    Sum(Vec<CertId>),
}

/// Atoms and certificates of one witness.
#[derive(Clone, Debug)]
pub struct Arena {
    p: u64,
    n: u32,
    side: Side,
    atoms: Vec<Atom>,
    index: HashMap<Atom, AtomId>,
    certs: Vec<Cert>,
}

impl Serialize for Arena {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Arena", 3)?;
        st.serialize_field("side", &self.side)?;
        st.serialize_field("atoms", &self.atoms)?;
        st.serialize_field("certs", &self.certs)?;
        st.end()
    }
}

impl Arena {
    fn new(p: u64, n: u32, side: Side) -> Self {
        let mut a = Arena { p, n, side, atoms: Vec::new(), index: HashMap::new(), certs: Vec::new() };
        a.intern(Atom::X);
        a
    }

    fn intern(&mut self, atom: Atom) -> AtomId {
        if let Some(&id) = self.index.get(&atom) {
            return id;
        }
        let id = self.atoms.len();
        self.atoms.push(atom.clone());
        self.index.insert(atom, id);
        id
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn certs(&self) -> &[Cert] {
        &self.certs
    }

    fn add_cert(&mut self, c: Cert) -> CertId {
        self.certs.push(c);
        self.certs.len() - 1
    }

    fn x(&mut self) -> IntPoly {
        IntPoly::atom(self.n, 0)
    }

    fn delta_of(&mut self, y: &IntPoly) -> IntPoly {
        if y.is_zero() {
            return IntPoly::zero(self.n);
        }
        let id = self.intern(Atom::Delta(y.truncate(self.n)));
        IntPoly::atom(self.n, id)
    }

    /// `φ(Y) = Y^p + p δ(Y)`.
    fn phi_of(&mut self, y: &IntPoly) -> IntPoly {
        let d = self.delta_of(y).scale(&BigInt::from(self.p));
        y.pow(self.p as u32).add(&d)
    }

    /// `γ_q(y)` or `γ(y)` of a certified element, as an atom.
    fn divided_power_atom(&mut self, c: CertId) -> IntPoly {
        let atom = match self.side {
            Side::Q => Atom::GammaQ(c),
            Side::Classical => Atom::Gamma(c),
        };
        let id = self.intern(atom);
        IntPoly::atom(self.n, id)
    }

    pub fn cert_value(&mut self, c: CertId) -> IntPoly {
        match self.certs[c].clone() {
            Cert::Generator => self.x(),
            Cert::QMinusOneMultiple { k, y } => y.shift_s(k),
            Cert::GammaQ(d) => {
                let id = self.intern(Atom::GammaQ(d));
                IntPoly::atom(self.n, id)
            }
            Cert::Gamma(d) => {
                let id = self.intern(Atom::Gamma(d));
                IntPoly::atom(self.n, id)
            }
            Cert::Sum(v) => v.iter().fold(IntPoly::zero(self.n), |acc, &d| acc.add(&self.cert_value(d))),
        }
    }

    /// Structural validity of a certificate for this side.
    pub fn validate_cert(&self, c: CertId) -> std::result::Result<(), String> {
        if c >= self.certs.len() {
            return Err(format!("dangling certificate {c}"));
        }
        match &self.certs[c] {
            Cert::Generator => Ok(()),
            Cert::QMinusOneMultiple { k, .. } => {
                if *k >= 1 { Ok(()) } else { Err("q-1 multiple leaf with k = 0".into()) }
            }
            Cert::GammaQ(d) => {
                if self.side != Side::Q {
                    return Err("γ_q node on the classical side".into());
                }
                if *d >= c {
                    return Err("certificate tree is not well-founded".into());
                }
                self.validate_cert(*d)
            }
            Cert::Gamma(d) => {
                if self.side != Side::Classical {
                    return Err("γ node on the q side".into());
                }
                if *d >= c {
                    return Err("certificate tree is not well-founded".into());
                }
                self.validate_cert(*d)
            }
            Cert::Sum(v) => v.iter().try_for_each(|&d| if d >= c { Err("certificate tree is not well-founded".into()) } else { self.validate_cert(d) }),
        }
    }

    /// Every divided-power atom refers to a valid certificate.
    pub fn validate_atoms(&self) -> std::result::Result<(), String> {
        for a in &self.atoms {
            match a {
                Atom::GammaQ(c) | Atom::Gamma(c) => self.validate_cert(*c)?,
                _ => {}
            }
        }
        Ok(())
    }
}

/// Value model: atoms evaluated in `Q[δ^j x][s]/s^N`.
struct Evaluator<'a> {
    arena: &'a Arena,
    memo: HashMap<AtomId, DeltaPoly>,
    cert_memo: HashMap<CertId, DeltaPoly>,
}

impl<'a> Evaluator<'a> {
    fn new(arena: &'a Arena) -> Self {
        Evaluator { arena, memo: HashMap::new(), cert_memo: HashMap::new() }
    }

    fn zero(&self) -> DeltaPoly {
        DeltaPoly::zero(self.arena.p, 1, Some(self.arena.n))
    }

    fn atom(&mut self, id: AtomId) -> Result<DeltaPoly> {
        if let Some(v) = self.memo.get(&id) {
            return Ok(v.clone());
        }
        let v = match self.arena.atoms[id].clone() {
            Atom::X => DeltaPoly::x(self.arena.p, 1, Some(self.arena.n)),
            Atom::Delta(y) => self.poly(&y)?.delta(),
            Atom::GammaQ(c) => self.cert(c)?.gamma_q()?,
            Atom::Gamma(c) => self.cert(c)?.gamma(),
        };
        self.memo.insert(id, v.clone());
        Ok(v)
    }

    fn cert(&mut self, c: CertId) -> Result<DeltaPoly> {
        if let Some(v) = self.cert_memo.get(&c) {
            return Ok(v.clone());
        }
        let v = match self.arena.certs[c].clone() {
            Cert::Generator => DeltaPoly::x(self.arena.p, 1, Some(self.arena.n)),
            Cert::QMinusOneMultiple { k, y } => self.poly(&y.shift_s(k))?,
            Cert::GammaQ(d) => self.cert(d)?.gamma_q()?,
            Cert::Gamma(d) => self.cert(d)?.gamma(),
            Cert::Sum(v) => {
                let mut acc = self.zero();
                for d in v {
                    acc = acc.add(&self.cert(d)?);
                }
                acc
            }
        };
        self.cert_memo.insert(c, v.clone());
        Ok(v)
    }

    fn poly(&mut self, y: &IntPoly) -> Result<DeltaPoly> {
        let (p, n) = (self.arena.p, self.arena.n);
        let mut acc = self.zero();
        for (m, c) in y.terms() {
            let coeffs: Vec<BigRational> = c.iter().cloned().map(BigRational::from_integer).collect();
            let mut t = DeltaPoly::s_series(p, 1, n, &coeffs);
            for &(id, e) in m {
                t = t.mul(&self.atom(id)?.pow(e));
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }
}

type Terms = BTreeMap<(u32, u32), IntPoly>;

struct Builder {
    arena: Arena,
    budget: u32,
    u_minus_one_over_s: Vec<BigInt>,
    uinv: Vec<BigInt>,
}

impl Builder {
    fn p(&self) -> u64 {
        self.arena.p
    }

    fn n(&self) -> u32 {
        self.arena.n
    }

    fn push(&self, t: &mut Terms, e: u32, k: u32, y: IntPoly) {
        if k >= self.n() || y.is_zero() {
            return;
        }
        let y = y.truncate(self.n() - k);
        let entry = t.entry((e, k)).or_insert_with(|| IntPoly::zero(self.arena.n));
        *entry = entry.add(&y);
        if entry.is_zero() {
            t.remove(&(e, k));
        }
    }

    fn add_terms(&self, a: &Terms, b: &Terms, sign: i64) -> Terms {
        let mut out = a.clone();
        for (&(e, k), y) in b {
            self.push(&mut out, e, k, y.scale(&BigInt::from(sign)));
        }
        out
    }

    fn mul_terms(&self, a: &Terms, b: &Terms) -> Terms {
        let mut out = Terms::new();
        for (&(e1, k1), y1) in a {
            for (&(e2, k2), y2) in b {
                if k1 + k2 < self.n() {
                    self.push(&mut out, e1 + e2, k1 + k2, y1.mul(y2));
                }
            }
        }
        out
    }

    fn pow_terms(&self, a: &Terms, e: u32) -> Terms {
        let mut one = Terms::new();
        self.push(&mut one, 0, 0, IntPoly::one(self.n()));
        (0..e).fold(one, |acc, _| self.mul_terms(&acc, a))
    }

    /// `((sum T)^p - sum T^p)/p`, by repeated use of the two-term rule.
    fn cross_terms(&self, list: &Terms) -> Terms {
        let p = self.p() as u32;
        let mut partial = Terms::new();
        let mut cross = Terms::new();
        for (&(e, k), y) in list {
            let mut t = Terms::new();
            self.push(&mut t, e, k, y.clone());
            if !partial.is_empty() {
                for i in 1..p {
                    let coef = binomial(p as u64, i as u64) / BigInt::from(p);
                    let prod = self.mul_terms(&self.pow_terms(&partial, i), &self.pow_terms(&t, p - i));
                    for (&(e2, k2), y2) in &prod {
                        self.push(&mut cross, e2, k2, y2.scale(&coef));
                    }
                }
            }
            partial = self.add_terms(&partial, &t, 1);
        }
        cross
    }

    /// `D_j(Y) = δ(s^j Y)/s^j = s^((p-1)j) δY + Y^p h_j + p h_j δY`.
    fn delta_shifted(&mut self, j: u32, y: &IntPoly) -> IntPoly {
        let p = self.p();
        let dy = self.delta_of(y);
        let h = h_series(p, j, self.n() as usize);
        let a = dy.shift_s((p as u32 - 1) * j);
        let b = y.pow(p as u32).mul_series(&h);
        let c = dy.mul_series(&h).scale(&BigInt::from(p));
        a.add(&b).add(&c)
    }

    fn delta_of(&mut self, y: &IntPoly) -> IntPoly {
        self.arena.delta_of(y)
    }

    /// `δ(p^-e s^k Y)` for `e >= 1`.
    fn delta_term(&mut self, e: u32, k: u32, y: &IntPoly, out: &mut Terms) {
        let p = self.p() as u32;
        let gk = pow_int(&g_series(self.p()), k, self.n() as usize);
        let phi = self.arena.phi_of(y);
        self.push(out, e + 1, k, phi.mul_series(&gk));
        self.push(out, e * p + 1, k * p, y.pow(p).neg());
    }

    /// `γ_q(p^-e s^k Y)` for `e >= 1`, `k >= 1`.
    fn gamma_q_term(&mut self, e: u32, k: u32, y: &IntPoly, out: &mut Terms) -> Result<()> {
        if k == 0 {
            return Err(Error::Construction(format!("term p^-{e} Y has no factor q-1")));
        }
        let p = self.p() as u32;
        let n = self.n() as usize;
        let phi = self.arena.phi_of(y);
        let gc = mul_int(&pow_int(&g_series(self.p()), k - 1, n), &c_series(self.p()), n);
        self.push(out, e, k + 1, phi.mul_series(&gc).neg());
        let ds = self.delta_shifted(k - 1, y);
        self.push(out, e, p + k - 1, ds.neg());
        let ypow = y.pow(p);
        self.push(out, e + 1, k * p, ypow.neg());
        self.push(out, e * p + 1, k * p, ypow);
        Ok(())
    }

    /// `γ(p^-e s^k Y) = p^-(ep+1) s^(kp) Y^p`.
    fn gamma_term(&mut self, e: u32, k: u32, y: &IntPoly, out: &mut Terms) {
        let p = self.p() as u32;
        self.push(out, e * p + 1, k * p, y.pow(p));
    }

    fn scale_u_minus_one(&self, t: &Terms) -> Terms {
        let mut out = Terms::new();
        for (&(e, k), y) in t {
            self.push(&mut out, e, k + 1, y.mul_series(&self.u_minus_one_over_s));
        }
        out
    }

    fn scale_p_inv_s(&self, t: &Terms) -> Terms {
        let mut out = Terms::new();
        for (&(e, k), y) in t {
            self.push(&mut out, e + 1, k + self.p() as u32 - 1, y.clone());
        }
        out
    }

    /// Multiply by `p/[p]_q = sum_i (-1)^i p^-i u^-(1+i) s^((p-1) i)`.
    fn scale_p_over_qint(&self, t: &Terms) -> Terms {
        let n = self.n() as usize;
        let step = self.p() as u32 - 1;
        let mut out = Terms::new();
        for (&(e, k), y) in t {
            let mut upow = self.uinv.clone();
            let mut i = 0u32;
            while k + step * i < self.n() {
                let sign = BigInt::from(if i % 2 == 0 { 1 } else { -1 });
                self.push(&mut out, e + i, k + step * i, y.mul_series(&upow).scale(&sign));
                upow = mul_int(&upow, &self.uinv, n);
                i += 1;
            }
        }
        out
    }

    fn check_budget(&self, t: &Terms) -> Result<()> {
        if let Some(&(e, _)) = t.keys().max_by_key(|(e, _)| *e) {
            if e > self.budget {
                return Err(Error::ValuationBudgetExceeded { needed: e, budget: self.budget });
            }
        }
        Ok(())
    }

    /// One step `G -> γ(G)` (q side) or `G -> γ_q(G)` (classical side).
    fn step(&mut self, st: &State) -> Result<Terms> {
        let y0val = self.arena.cert_value(st.y0);
        let mut list = st.rest.clone();
        self.push(&mut list, 0, 0, y0val.clone());
        let cross = self.cross_terms(&list);

        let mut delta = Terms::new();
        let d0 = self.arena.delta_of(&y0val);
        self.push(&mut delta, 0, 0, d0);
        for (&(e, k), y) in &st.rest {
            self.delta_term(e, k, y, &mut delta);
        }
        delta = self.add_terms(&delta, &cross, -1);

        let mut dp = Terms::new();
        let g0 = self.arena.divided_power_atom(st.y0);
        self.push(&mut dp, 0, 0, g0);
        for (&(e, k), y) in &st.rest {
            match self.arena.side {
                Side::Q => self.gamma_q_term(e, k, y, &mut dp)?,
                Side::Classical => self.gamma_term(e, k, y, &mut dp),
            }
        }
        dp = self.add_terms(&dp, &cross, 1);

        let out = match self.arena.side {
            Side::Q => {
                // γ(G) = γ_q(G) + (u-1)(γ_q(G)+δ(G)) + p^-1 s^(p-1)(γ_q(G)+δ(G))
                let w = self.add_terms(&dp, &delta, 1);
                let a = self.add_terms(&dp, &self.scale_u_minus_one(&w), 1);
                self.add_terms(&a, &self.scale_p_inv_s(&w), 1)
            }
            Side::Classical => {
                // γ_q(G) = (γ(G) - (u-1)δ(G) - p^-1 s^(p-1) δ(G)) p/[p]_q
                let a = self.add_terms(&dp, &self.scale_u_minus_one(&delta), -1);
                let a = self.add_terms(&a, &self.scale_p_inv_s(&delta), -1);
                self.scale_p_over_qint(&a)
            }
        };
        self.check_budget(&out)?;
        Ok(out)
    }

    /// Split terms into the certified part and the rest.
    fn certify(&mut self, prev: CertId, t: Terms) -> Result<State> {
        let expected = self.arena.divided_power_atom(prev);
        let dp_cert = self.arena.add_cert(match self.arena.side {
            Side::Q => Cert::GammaQ(prev),
            Side::Classical => Cert::Gamma(prev),
        });
        let mut parts = vec![dp_cert];
        let mut rest = Terms::new();
        for ((e, k), y) in t {
            if e > 0 {
                rest.insert((e, k), y);
            } else if k == 0 {
                let (c0, tail) = y.split_constant();
                if c0 != expected {
                    return Err(Error::Construction("uncertified constant part".into()));
                }
                if !tail.is_zero() {
                    parts.push(self.arena.add_cert(Cert::QMinusOneMultiple { k: 1, y: tail }));
                }
            } else {
                parts.push(self.arena.add_cert(Cert::QMinusOneMultiple { k, y }));
            }
        }
        let y0 = self.arena.add_cert(Cert::Sum(parts));
        Ok(State { y0, rest })
    }

    /// Collect `rest` into slots `y_i` with `p^-E_i s^((p-2)+i) y_i`.
    fn slots(&self, rest: &Terms, count: usize) -> Result<Vec<IntPoly>> {
        let p = self.p() as u32;
        let mut out = vec![IntPoly::zero(self.n()); count];
        for (&(e, k), y) in rest {
            let kk = k as i64 - (p as i64 - 2);
            if kk < 1 {
                return Err(Error::Construction(format!("term p^-{e} s^{k} has too little (q-1)-divisibility")));
            }
            let i = (kk as usize).min(count);
            if i == 0 {
                return Err(Error::Construction("no slots available".into()));
            }
            let ei = slot_exponent(self.p(), i as u32);
            if e > ei {
                return Err(Error::Construction(format!("term p^-{e} s^{k} exceeds slot {i} bound p^-{ei}")));
            }
            let scale = num_traits::pow(BigInt::from(self.p()), (ei - e) as usize);
            let extra = (kk as u32) - i as u32;
            out[i - 1] = out[i - 1].add(&y.shift_s(extra).scale(&scale));
        }
        Ok(out)
    }
}

struct State {
    y0: CertId,
    rest: Terms,
}

/// `E_i = 2(p^(i-1) + ... + p + 1)`.
pub fn slot_exponent(p: u64, i: u32) -> u32 {
    2 * (0..i).map(|j| p.pow(j) as u32).sum::<u32>()
}

/// `y_0 + sum_i p^-E_i s^((p-2)+i) y_i` with its certificates.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub p: u64,
    pub n: u32,
    pub trunc: u32,
    pub side: Side,
    pub y0: CertId,
    pub slots: Vec<IntPoly>,
    pub arena: Arena,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub identity_holds: bool,
    pub residual_terms: usize,
    pub slots_integral: bool,
    pub certificate: std::result::Result<(), String>,
    pub pass: bool,
}

fn builder(p: u64, trunc: u32, budget: u32, side: Side) -> Result<Builder> {
    if !qcore::arith::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if trunc < p as u32 {
        return Err(Error::InvalidArgument("truncation must be at least p".into()));
    }
    let u = unit_s(p, trunc);
    let u_minus_one_over_s = if u.len() > 1 { u[1..].to_vec() } else { Vec::new() };
    let uinv = inv_int(&u, trunc as usize);
    Ok(Builder { arena: Arena::new(p, trunc, side), budget, u_minus_one_over_s, uinv })
}

/// Witness for `γ^(n)(x)` in terms of q-divided powers.
pub fn decompose_gamma_iterate(n: u32, p: u64, trunc: u32, budget: u32) -> Result<Witness> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let mut b = builder(p, trunc, budget, Side::Q)?;
    let gen = b.arena.add_cert(Cert::Generator);
    let mut st = State { y0: gen, rest: Terms::new() };
    let mut slots = Vec::new();
    for level in 1..=n {
        let t = b.step(&st)?;
        st = b.certify(st.y0, t)?;
        slots = b.slots(&st.rest, level as usize)?;
    }
    Ok(Witness { p, n, trunc, side: Side::Q, y0: st.y0, slots, arena: b.arena })
}

/// Witness for `γ_q^(n)(x)` in terms of classical divided powers, with `k_slots` slots.
pub fn decompose_gammaq_iterate(n: u32, p: u64, trunc: u32, budget: u32, k_slots: Option<usize>) -> Result<Witness> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let mut b = builder(p, trunc, budget, Side::Classical)?;
    let count = k_slots.unwrap_or((trunc + 2 - p as u32) as usize);
    let gen = b.arena.add_cert(Cert::Generator);
    let mut st = State { y0: gen, rest: Terms::new() };
    let mut slots = Vec::new();
    for _ in 1..=n {
        let t = b.step(&st)?;
        st = b.certify(st.y0, t)?;
        slots = b.slots(&st.rest, count)?;
    }
    Ok(Witness { p, n, trunc, side: Side::Classical, y0: st.y0, slots, arena: b.arena })
}

impl Witness {
    /// `γ^(n)(x)` or `γ_q^(n)(x)` by iterating the operation on the δ-polynomial directly.
    pub fn direct_value(&self) -> Result<DeltaPoly> {
        let mut v = DeltaPoly::x(self.p, 1, Some(self.trunc));
        for _ in 0..self.n {
            v = match self.side {
                Side::Q => v.gamma(),
                Side::Classical => v.gamma_q()?,
            };
        }
        Ok(v)
    }

    /// Value of the decomposition in the rational model.
    pub fn value(&self) -> Result<DeltaPoly> {
        let mut ev = Evaluator::new(&self.arena);
        let mut acc = ev.cert(self.y0)?;
        for (idx, y) in self.slots.iter().enumerate() {
            let i = idx as u32 + 1;
            let k = self.p as u32 - 2 + i;
            if k >= self.trunc {
                continue;
            }
            let ei = slot_exponent(self.p, i);
            let scale = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(self.p), ei as usize));
            let s_k = DeltaPoly::s(self.p, 1, self.trunc).pow(k);
            acc = acc.add(&ev.poly(y)?.mul(&s_k).scale(&scale));
        }
        Ok(acc)
    }

    /// Slots are integer combinations of atoms, so they are integral once every
    /// atom is: `x`, `δ` of such a combination, or a divided power of a certified element.
    pub fn slots_integral(&self) -> bool {
        let ok_atom = |id: AtomId| id < self.arena.atoms.len();
        self.arena.validate_atoms().is_ok()
            && self.slots.iter().all(|y| y.terms().all(|(m, _)| m.iter().all(|&(id, _)| ok_atom(id))))
    }

    pub fn verify(&self) -> Result<WitnessReport> {
        let residual = self.value()?.sub(&self.direct_value()?);
        let certificate = self.arena.validate_cert(self.y0).and_then(|_| self.arena.validate_atoms());
        let slots_integral = self.slots_integral();
        let identity_holds = residual.is_zero();
        Ok(WitnessReport {
            identity_holds,
            residual_terms: residual.len(),
            slots_integral,
            pass: identity_holds && slots_integral && certificate.is_ok(),
            certificate,
        })
    }
}
