//! Dense exact linear algebra over Z, Q and F_p.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_cols(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (k, x) in v.iter().enumerate() {
                    let a = &self[(i, k)];
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &IntMatrix) -> IntMatrix {
        self.add(&rhs.scale(&BigInt::from(-1)))
    }

    pub fn hstack(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, rhs.rows);
        let mut out = Self::zeros(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..rhs.cols {
                out[(i, self.cols + j)] = rhs[(i, j)].clone();
            }
        }
        out
    }

    pub fn vstack(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.cols);
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        IntMatrix { rows: self.rows + rhs.rows, cols: self.cols, data }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, rhs: &IntMatrix) -> IntMatrix {
        let mut out = Self::zeros(self.rows + rhs.rows, self.cols + rhs.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, rhs);
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &IntMatrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)].clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> IntMatrix {
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        out
    }

    pub fn select_rows(&self, idx: impl IntoIterator<Item = usize>) -> IntMatrix {
        let rows: Vec<Vec<BigInt>> = idx.into_iter().map(|i| self.row(i)).collect();
        let n = rows.len();
        let mut m = Self::from_rows(rows);
        if n == 0 {
            m.cols = self.cols;
        }
        m
    }

    pub fn select_cols(&self, idx: impl IntoIterator<Item = usize>) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = idx.into_iter().map(|j| self.col(j)).collect();
        Self::from_cols(self.rows, &cols)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += c * row[src]`.
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = &self.data[src * self.cols + j] * c;
            self.data[dst * self.cols + j] += t;
        }
    }

    /// `col[dst] += c * col[src]`.
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = &self.data[i * self.cols + src] * c;
            self.data[i * self.cols + dst] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", r.join(", "))?;
        }
        Ok(())
    }
}

/// `u * a * v = diag(d_0, ..., d_{r-1}, 0, ...)` with `d_i | d_{i+1}`, all positive.
#[derive(Clone, Debug)]
pub struct Smith {
    pub diag: Vec<BigInt>,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }
}

/// Remainder of least absolute value.
fn balanced_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    let twice: BigInt = &r * 2;
    // r has the sign of b, so moving to q + 1 replaces r by r - b
    if twice.abs() > b.abs() {
        q + 1
    } else {
        q
    }
}

struct SmithCalc {
    a: IntMatrix,
    track: bool,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SmithCalc {
    fn row_add(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_row(dst, src, c);
        if self.track {
            self.u.add_row(dst, src, c);
            self.u_inv.add_col(src, dst, &-c);
        }
    }

    fn col_add(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_col(dst, src, c);
        if self.track {
            self.v.add_col(dst, src, c);
            self.v_inv.add_row(src, dst, &-c);
        }
    }

    fn row_swap(&mut self, x: usize, y: usize) {
        self.a.swap_rows(x, y);
        if self.track {
            self.u.swap_rows(x, y);
            self.u_inv.swap_cols(x, y);
        }
    }

    fn col_swap(&mut self, x: usize, y: usize) {
        self.a.swap_cols(x, y);
        if self.track {
            self.v.swap_cols(x, y);
            self.v_inv.swap_rows(x, y);
        }
    }

    fn row_negate(&mut self, i: usize) {
        self.a.negate_row(i);
        if self.track {
            self.u.negate_row(i);
            self.u_inv.negate_col(i);
        }
    }

    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows {
            for j in t..self.a.cols {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.a[(bi, bj)].abs()) {
                    best = Some((i, j));
                    if x.abs().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn run(&mut self) -> Vec<BigInt> {
        let (m, n) = (self.a.rows, self.a.cols);
        let mut diag = Vec::new();
        for t in 0..m.min(n) {
            let Some((pi, pj)) = self.min_entry(t) else { break };
            self.row_swap(t, pi);
            self.col_swap(t, pj);
            loop {
                let mut clean = true;
                for i in t + 1..m {
                    if !self.a[(i, t)].is_zero() {
                        let q = balanced_div(&self.a[(i, t)], &self.a[(t, t)]);
                        self.row_add(i, t, &-q);
                        if !self.a[(i, t)].is_zero() {
                            clean = false;
                        }
                    }
                }
                for j in t + 1..n {
                    if !self.a[(t, j)].is_zero() {
                        let q = balanced_div(&self.a[(t, j)], &self.a[(t, t)]);
                        self.col_add(j, t, &-q);
                        if !self.a[(t, j)].is_zero() {
                            clean = false;
                        }
                    }
                }
                if !clean {
                    // move the smallest entry of row/column t into the pivot
                    let mut best = (t, t);
                    for i in t + 1..m {
                        let x = &self.a[(i, t)];
                        if !x.is_zero() && x.abs() < self.a[best].abs() {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..n {
                        let x = &self.a[(t, j)];
                        if !x.is_zero() && x.abs() < self.a[best].abs() {
                            best = (t, j);
                        }
                    }
                    self.row_swap(t, best.0);
                    self.col_swap(t, best.1);
                    continue;
                }
                // divisibility of the remaining block
                let piv = self.a[(t, t)].clone();
                let mut bad = None;
                'scan: for i in t + 1..m {
                    for j in t + 1..n {
                        if !self.a[(i, j)].is_multiple_of(&piv) {
                            bad = Some(i);
                            break 'scan;
                        }
                    }
                }
                match bad {
                    Some(i) => self.row_add(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[(t, t)].is_negative() {
                self.row_negate(t);
            }
            diag.push(self.a[(t, t)].clone());
        }
        diag
    }
}

fn smith_impl(a: &IntMatrix, track: bool) -> Smith {
    let (m, n) = (a.rows, a.cols);
    let (u, v) = if track { (IntMatrix::identity(m), IntMatrix::identity(n)) } else { (IntMatrix::zeros(0, 0), IntMatrix::zeros(0, 0)) };
    let mut calc = SmithCalc { a: a.clone(), track, u_inv: u.clone(), u, v_inv: v.clone(), v };
    let diag = calc.run();
    Smith { diag, u: calc.u, u_inv: calc.u_inv, v: calc.v, v_inv: calc.v_inv }
}

/// Smith normal form with unimodular transforms and their inverses.
pub fn smith(a: &IntMatrix) -> Smith {
    smith_impl(a, true)
}

/// Invariant factors only.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    smith_impl(a, false).diag
}

/// Integer basis of `{x : a x = 0}`, as columns.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let s = smith(a);
    s.v.select_cols(s.rank()..a.cols)
}

/// Some integer `x` with `a x = b`, if one exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows, b.len());
    let s = smith(a);
    let ub = s.u.mul_vec(b);
    let r = s.rank();
    if ub[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut y = vec![BigInt::zero(); a.cols];
    for i in 0..r {
        let (q, rem) = ub[i].div_rem(&s.diag[i]);
        if !rem.is_zero() {
            return None;
        }
        y[i] = q;
    }
    Some(s.v.mul_vec(&y))
}

/// Free rank and nontrivial invariant factors of `Z^rows / a Z^cols`.
pub fn cokernel(a: &IntMatrix) -> (usize, Vec<BigInt>) {
    let d = invariant_factors(a);
    let free = a.rows - d.len();
    (free, d.into_iter().filter(|x| !x.is_one()).collect())
}

/// `ker(b) / im(a)` for composable `a`, `b` with `b a = 0`.
///
/// Generators are ambient vectors; `orders[i]` is `Some(d)` for a `Z/d` summand
/// and `None` for a free summand.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub ambient: usize,
    pub gens: Vec<Vec<BigInt>>,
    pub orders: Vec<Option<BigInt>>,
    proj: IntMatrix,
}

impl Subquotient {
    /// `a`: `ambient x n_prev`, `b`: `n_next x ambient`.
    pub fn new(a: &IntMatrix, b: &IntMatrix) -> Self {
        let ambient = a.rows;
        assert_eq!(b.cols, ambient);
        let sb = smith(b);
        let r = sb.rank();
        let kdim = ambient - r;
        let kbasis = sb.v.select_cols(r..ambient);
        let kcoord = sb.v_inv.select_rows(r..ambient);
        let x = kcoord.mul(a);
        let sx = smith(&x);
        let gens_all = if kdim == 0 { IntMatrix::zeros(ambient, 0) } else { kbasis.mul(&sx.u_inv) };
        let proj_all = if kdim == 0 { IntMatrix::zeros(0, ambient) } else { sx.u.mul(&kcoord) };
        let mut keep = Vec::new();
        let mut orders = Vec::new();
        for i in 0..kdim {
            if i < sx.rank() {
                if !sx.diag[i].is_one() {
                    keep.push(i);
                    orders.push(Some(sx.diag[i].clone()));
                }
            } else {
                keep.push(i);
                orders.push(None);
            }
        }
        let gens = keep.iter().map(|&i| gens_all.col(i)).collect();
        let proj = proj_all.select_rows(keep.iter().copied());
        Subquotient { ambient, gens, orders, proj }
    }

    pub fn free_rank(&self) -> usize {
        self.orders.iter().filter(|o| o.is_none()).count()
    }

    pub fn torsion(&self) -> Vec<BigInt> {
        self.orders.iter().flatten().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Coordinates of a cycle, torsion coordinates reduced into `[0, d)`.
    pub fn coords(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut c = if self.proj.rows() == 0 { Vec::new() } else { self.proj.mul_vec(v) };
        for (x, o) in c.iter_mut().zip(&self.orders) {
            if let Some(d) = o {
                *x = x.mod_floor(d);
            }
        }
        c
    }

    /// Matrix (columns = images of generators) of an ambient map into `target`.
    pub fn induced(&self, map: &IntMatrix, target: &Subquotient) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = self.gens.iter().map(|g| target.coords(&map.mul_vec(g))).collect();
        IntMatrix::from_cols(target.len(), &cols)
    }

    /// Reduce a coordinate matrix (columns in this group) modulo the orders.
    pub fn reduce_cols(&self, m: &IntMatrix) -> IntMatrix {
        let mut out = m.clone();
        for (i, o) in self.orders.iter().enumerate() {
            if let Some(d) = o {
                for j in 0..m.cols() {
                    out[(i, j)] = m[(i, j)].mod_floor(d);
                }
            }
        }
        out
    }
}

/// Rank over Q by fraction-free elimination.
pub fn rank_rational(a: &IntMatrix) -> usize {
    let rows: Vec<Vec<BigRational>> =
        a.to_rows().into_iter().map(|r| r.into_iter().map(BigRational::from_integer).collect()).collect();
    row_echelon_q(rows, a.cols).1.len()
}

/// Reduced row echelon form over Q; returns (rows, pivot columns).
pub fn row_echelon_q(mut rows: Vec<Vec<BigRational>>, ncols: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let t = &rows[r][j] * &f;
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Some `x` over Q with `a x = b` (`a` given by rows).
pub fn solve_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let (ech, piv) = row_echelon_q(aug, ncols + 1);
    if piv.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (row, &c) in ech.iter().zip(&piv) {
        x[c] = row[ncols].clone();
    }
    Some(x)
}

fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128, p as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(p as i128) as u64)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Solve `a x = b` over F_p for square `a`; `None` if singular.
pub fn solve_square_mod_p(a: &IntMatrix, b: &[BigInt], p: u64) -> Option<Vec<u64>> {
    let n = a.rows;
    assert_eq!(a.cols, n);
    let pb = BigInt::from(p);
    let red = |x: &BigInt| -> u64 { x.mod_floor(&pb).try_into().unwrap() };
    let mut m: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut r: Vec<u64> = (0..n).map(|j| red(&a[(i, j)])).collect();
            r.push(red(&b[i]));
            r
        })
        .collect();
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    for c in 0..n {
        let piv = (c..n).find(|&i| m[i][c] != 0)?;
        m.swap(c, piv);
        let inv = inv_mod(m[c][c], p)?;
        for x in m[c].iter_mut() {
            *x = mulm(*x, inv);
        }
        for i in 0..n {
            if i != c && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..=n {
                    let t = mulm(m[c][j], f);
                    m[i][j] = (m[i][j] + p - t) % p;
                }
            }
        }
    }
    Some(m.iter().map(|r| r[n]).collect())
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &IntMatrix) -> BigInt {
    let n = a.rows;
    assert_eq!(n, a.cols);
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else { return BigInt::zero() };
            m.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                m[(i, j)] = v;
            }
        }
        prev = m[(k, k)].clone();
    }
    sign * &m[(n - 1, n - 1)]
}
