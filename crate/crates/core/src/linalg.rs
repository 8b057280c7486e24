//! Dense linear algebra over prime fields `F_p`.
//!
//! Vectors are column matrices and a linear map `F_p^n -> F_p^m` is an
//! `m x n` matrix. Every basis and pivot choice is deterministic: row
//! reduction uses the leftmost available pivot, particular solutions set the
//! free variables to zero, and quotients use the non-pivot coordinates as
//! complement.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted by the engine.
pub const MAX_MODULUS: u32 = 97;

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

pub fn check_modulus(p: u32) -> Result<()> {
    if p > MAX_MODULUS || !is_prime(p) {
        return Err(Error::Malformed(format!(
            "modulus {p} is not a prime in [2, {MAX_MODULUS}]"
        )));
    }
    Ok(())
}

/// Multiplicative inverse of a nonzero residue.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    let mut result = 1u64;
    let mut base = (a % p) as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// An element of `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    value: u32,
    p: u32,
}

impl Scalar {
    pub fn new(value: i64, p: u32) -> Result<Self> {
        check_modulus(p)?;
        Ok(Scalar {
            value: value.rem_euclid(p as i64) as u32,
            p,
        })
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.p
    }

    pub fn inverse(self) -> Option<Self> {
        (self.value != 0).then(|| Scalar {
            value: inv_mod(self.value, self.p),
            p: self.p,
        })
    }
}

impl std::ops::Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        Scalar {
            value: (self.value + rhs.value) % self.p,
            p: self.p,
        }
    }
}

impl std::ops::Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        Scalar {
            value: self.value * rhs.value % self.p,
            p: self.p,
        }
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            value: (self.p - self.value) % self.p,
            p: self.p,
        }
    }
}

#[derive(Deserialize)]
struct RawMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl TryFrom<RawMatrix> for Matrix {
    type Error = Error;
    fn try_from(raw: RawMatrix) -> Result<Matrix> {
        check_modulus(raw.p)?;
        if raw.entries.len() != raw.rows * raw.cols {
            return Err(Error::Malformed(format!(
                "matrix has {} entries, expected {} x {}",
                raw.entries.len(),
                raw.rows,
                raw.cols
            )));
        }
        if let Some(bad) = raw.entries.iter().find(|&&e| e < 0 || e >= raw.p as i64) {
            return Err(Error::Malformed(format!(
                "entry {bad} is not a residue modulo {}",
                raw.p
            )));
        }
        Ok(Matrix {
            p: raw.p,
            rows: raw.rows,
            cols: raw.cols,
            entries: raw.entries.into_iter().map(|e| e as u32).collect(),
        })
    }
}

/// Dense row-major matrix over `F_p`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix")]
pub struct Matrix {
    p: u32,
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<F_{}>{}x{}[", self.p, self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

/// Output of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Matrix,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
}

/// A particular solution of `aX = b` together with the kernel of `a`.
#[derive(Clone, Debug)]
pub struct Solution {
    pub particular: Matrix,
    pub kernel: Subspace,
}

impl Matrix {
    /// Builds a matrix from signed integers, reducing them modulo `p`.
    pub fn new(p: u32, rows: usize, cols: usize, entries: Vec<i64>) -> Result<Self> {
        check_modulus(p)?;
        if entries.len() != rows * cols {
            return Err(Error::Malformed(format!(
                "matrix has {} entries, expected {rows} x {cols}",
                entries.len()
            )));
        }
        Ok(Matrix {
            p,
            rows,
            cols,
            entries: entries
                .into_iter()
                .map(|e| e.rem_euclid(p as i64) as u32)
                .collect(),
        })
    }

    /// Builds a matrix from residues that are already reduced.
    pub fn from_residues(p: u32, rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self> {
        check_modulus(p)?;
        if entries.len() != rows * cols {
            return Err(Error::Malformed(format!(
                "matrix has {} entries, expected {rows} x {cols}",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|&&e| e >= p) {
            return Err(Error::Malformed(format!(
                "entry {bad} is not a residue modulo {p}"
            )));
        }
        Ok(Matrix {
            p,
            rows,
            cols,
            entries,
        })
    }

    /// Builds from scalars; fails if the scalars do not share one modulus.
    pub fn from_scalars(rows: usize, cols: usize, entries: &[Scalar]) -> Result<Self> {
        let p = entries.first().map(|s| s.p).ok_or_else(|| {
            Error::Malformed("cannot infer the modulus of an empty scalar grid".into())
        })?;
        if entries.iter().any(|s| s.p != p) {
            return Err(Error::Malformed("modulus mismatch within entries".into()));
        }
        Matrix::from_residues(p, rows, cols, entries.iter().map(|s| s.value).collect())
    }

    pub fn from_rows(p: u32, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Malformed("ragged rows".into()));
        }
        Matrix::new(p, rows.len(), cols, rows.iter().flatten().copied().collect())
    }

    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        Matrix {
            p,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Matrix::zeros(p, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    pub fn from_fn(p: u32, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c) % p);
            }
        }
        Matrix {
            p,
            rows,
            cols,
            entries,
        }
    }

    /// A column vector.
    pub fn column_vector(p: u32, values: &[u32]) -> Self {
        Matrix::from_fn(p, values.len(), 1, |r, _| values[r])
    }

    pub fn unit_vector(p: u32, n: usize, i: usize) -> Self {
        Matrix::from_fn(p, n, 1, |r, _| u32::from(r == i))
    }

    pub fn random(p: u32, rows: usize, cols: usize, rng: &mut impl Rng) -> Self {
        Matrix::from_fn(p, rows, cols, |_, _| rng.gen_range(0..p))
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.entries[r * self.cols + c] = v % self.p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|r| (0..self.cols).all(|c| self.get(r, c) == u32::from(r == c)))
    }

    fn same_field(&self, other: &Matrix) -> Result<()> {
        if self.p != other.p {
            return Err(Error::Malformed(format!(
                "modulus mismatch: {} vs {}",
                self.p, other.p
            )));
        }
        Ok(())
    }

    pub fn try_mul(&self, rhs: &Matrix) -> Result<Matrix> {
        self.same_field(rhs)?;
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let p = self.p as u64;
        let mut out = vec![0u32; self.rows * rhs.cols];
        let mut acc = vec![0u64; rhs.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.entries[r * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let row = &rhs.entries[k * rhs.cols..(k + 1) * rhs.cols];
                for (slot, &b) in acc.iter_mut().zip(row) {
                    *slot += a * b as u64;
                }
            }
            for (c, a) in acc.iter().enumerate() {
                out[r * rhs.cols + c] = (a % p) as u32;
            }
        }
        Ok(Matrix {
            p: self.p,
            rows: self.rows,
            cols: rhs.cols,
            entries: out,
        })
    }

    /// Matrix product; panics on shape or modulus mismatch.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        self.try_mul(rhs).expect("matrix product")
    }

    fn zip_with(&self, rhs: &Matrix, f: impl Fn(u32, u32) -> u32) -> Matrix {
        assert_eq!(self.p, rhs.p, "modulus mismatch");
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch");
        Matrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        let p = self.p;
        self.zip_with(rhs, |a, b| (a + b) % p)
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        let p = self.p;
        self.zip_with(rhs, |a, b| (a + p - b) % p)
    }

    pub fn neg(&self) -> Matrix {
        self.scale(self.p - 1)
    }

    pub fn scale(&self, s: u32) -> Matrix {
        let p = self.p;
        let s = s % p;
        Matrix {
            p,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&e| e * s % p).collect(),
        }
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, other: &Matrix, s: u32) -> Matrix {
        let p = self.p;
        let s = s % p;
        self.zip_with(other, |a, b| (a + s * b) % p)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.p, self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Row-major flattening as a column vector.
    pub fn vectorize(&self) -> Matrix {
        Matrix {
            p: self.p,
            rows: self.rows * self.cols,
            cols: 1,
            entries: self.entries.clone(),
        }
    }

    /// Inverse of [`Matrix::vectorize`].
    pub fn unvectorize(v: &Matrix, rows: usize, cols: usize) -> Matrix {
        assert_eq!(v.rows * v.cols, rows * cols);
        Matrix {
            p: v.p,
            rows,
            cols,
            entries: v.entries.clone(),
        }
    }

    pub fn column(&self, c: usize) -> Matrix {
        Matrix::from_fn(self.p, self.rows, 1, |r, _| self.get(r, c))
    }

    pub fn row(&self, r: usize) -> Matrix {
        Matrix::from_fn(self.p, 1, self.cols, |_, c| self.get(r, c))
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.p, self.rows, cols.len(), |r, c| self.get(r, cols[c]))
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        Matrix::from_fn(self.p, rows.len(), self.cols, |r, c| self.get(rows[r], c))
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(self.p, rows, cols, |r, c| self.get(r0 + r, c0 + c))
    }

    pub fn hstack(parts: &[&Matrix]) -> Matrix {
        let p = parts[0].p;
        let rows = parts[0].rows;
        assert!(parts.iter().all(|m| m.rows == rows && m.p == p));
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(p, rows, cols);
        let mut off = 0;
        for m in parts {
            for r in 0..rows {
                for c in 0..m.cols {
                    out.entries[r * cols + off + c] = m.get(r, c);
                }
            }
            off += m.cols;
        }
        out
    }

    pub fn vstack(parts: &[&Matrix]) -> Matrix {
        let p = parts[0].p;
        let cols = parts[0].cols;
        assert!(parts.iter().all(|m| m.cols == cols && m.p == p));
        let mut entries = Vec::new();
        let mut rows = 0;
        for m in parts {
            entries.extend_from_slice(&m.entries);
            rows += m.rows;
        }
        Matrix {
            p,
            rows,
            cols,
            entries,
        }
    }

    pub fn block_diag(parts: &[&Matrix]) -> Matrix {
        let p = parts[0].p;
        let rows = parts.iter().map(|m| m.rows).sum();
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(p, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for m in parts {
            out.paste(r0, c0, m);
            r0 += m.rows;
            c0 += m.cols;
        }
        out
    }

    /// Overwrites the block starting at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.entries[(r0 + r) * self.cols + c0 + c] = block.get(r, c);
            }
        }
    }

    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        Matrix::from_fn(
            self.p,
            self.rows * rhs.rows,
            self.cols * rhs.cols,
            |r, c| self.get(r / rhs.rows, c / rhs.cols) * rhs.get(r % rhs.rows, c % rhs.cols),
        )
    }

    /// Reduced row-echelon form with the leftmost-pivot rule.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivot_cols = m.rref_in_place();
        Rref {
            rank: pivot_cols.len(),
            reduced: m,
            pivot_cols,
        }
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.p;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..cols {
            if prow == rows {
                break;
            }
            let Some(found) = (prow..rows).find(|&r| self.entries[r * cols + col] != 0) else {
                continue;
            };
            if found != prow {
                for c in 0..cols {
                    self.entries.swap(found * cols + c, prow * cols + c);
                }
            }
            let inv = inv_mod(self.entries[prow * cols + col], p);
            if inv != 1 {
                for c in col..cols {
                    let e = &mut self.entries[prow * cols + c];
                    *e = *e * inv % p;
                }
            }
            let (before, rest) = self.entries.split_at_mut(prow * cols);
            let (pivot_row, after) = rest.split_at_mut(cols);
            for row in before
                .chunks_exact_mut(cols)
                .chain(after.chunks_exact_mut(cols))
            {
                let f = row[col];
                if f == 0 {
                    continue;
                }
                let nf = p - f;
                for c in col..cols {
                    row[c] = (row[c] + nf * pivot_row[c]) % p;
                }
            }
            pivots.push(col);
            prow += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        // Reduce whichever orientation has fewer columns to shorten rows.
        if self.rows < self.cols {
            self.transpose().rref_clone_rank()
        } else {
            self.rref_clone_rank()
        }
    }

    fn rref_clone_rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = Matrix::hstack(&[self, &Matrix::identity(self.p, n)]);
        let r = aug.rref();
        if r.pivot_cols.iter().take(n).copied().ne(0..n) || r.rank < n {
            return None;
        }
        Some(r.reduced.submatrix(0, n, n, n))
    }

    /// Null space as a subspace of the domain.
    pub fn kernel(&self) -> Subspace {
        let r = self.rref();
        kernel_from_rref(&r, self.cols, self.p)
    }

    /// Column space as a subspace of the codomain.
    pub fn image(&self) -> Subspace {
        Subspace::from_columns(self)
    }

    /// Solves `self * X = b`.
    pub fn solve(&self, b: &Matrix) -> Result<Option<Solution>> {
        solve(self, b)
    }
}

fn kernel_from_rref(r: &Rref, cols: usize, p: u32) -> Subspace {
    let mut is_pivot = vec![false; cols];
    for &c in &r.pivot_cols {
        is_pivot[c] = true;
    }
    let mut vectors = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u32; cols];
        v[free] = 1;
        for (row, &pc) in r.pivot_cols.iter().enumerate() {
            let e = r.reduced.get(row, free);
            v[pc] = (p - e) % p;
        }
        vectors.push(v);
    }
    let basis = Matrix::from_fn(p, vectors.len(), cols, |r, c| vectors[r][c]);
    Subspace::from_rows(&basis)
}

/// Row reduction of a matrix; see [`Matrix::rref`].
pub fn rref(m: &Matrix) -> Rref {
    m.rref()
}

/// One solution of `aX = b` (free variables zero) plus the kernel of `a`,
/// or `None` when the system is inconsistent.
pub fn solve(a: &Matrix, b: &Matrix) -> Result<Option<Solution>> {
    a.same_field(b)?;
    if a.rows != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "solve: a has {} rows but b has {}",
            a.rows, b.rows
        )));
    }
    let n = a.cols;
    let aug = Matrix::hstack(&[a, b]);
    let r = aug.rref();
    if r.pivot_cols.iter().any(|&c| c >= n) {
        return Ok(None);
    }
    let mut particular = Matrix::zeros(a.p, n, b.cols);
    for (row, &pc) in r.pivot_cols.iter().enumerate() {
        for c in 0..b.cols {
            particular.set(pc, c, r.reduced.get(row, n + c));
        }
    }
    let coeff = Rref {
        reduced: r.reduced.submatrix(0, 0, r.reduced.rows, n),
        rank: r.rank,
        pivot_cols: r.pivot_cols.clone(),
    };
    let kernel = kernel_from_rref(&coeff, n, a.p);
    Ok(Some(Solution { particular, kernel }))
}

/// A subspace of `F_p^n`, stored by its canonical RREF basis (rows).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(p: u32, ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::zeros(p, 0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(p: u32, ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(p, ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Span of the rows of `rows`.
    pub fn from_rows(rows: &Matrix) -> Self {
        let r = rows.rref();
        Subspace {
            ambient_dim: rows.cols,
            basis: r.reduced.submatrix(0, 0, r.rank, rows.cols),
            pivots: r.pivot_cols,
        }
    }

    /// Span of the columns of `cols`.
    pub fn from_columns(cols: &Matrix) -> Self {
        Subspace::from_rows(&cols.transpose())
    }

    pub fn modulus(&self) -> u32 {
        self.basis.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    /// Basis vectors as rows, in reduced echelon form.
    pub fn basis_rows(&self) -> &Matrix {
        &self.basis
    }

    /// Basis vectors as the columns of an `ambient_dim x dim` matrix.
    pub fn basis_columns(&self) -> Matrix {
        self.basis.transpose()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, v: &Matrix) -> bool {
        assert_eq!(v.cols, 1);
        self.contains_all(v)
    }

    /// Whether every column of `vs` lies in the subspace.
    pub fn contains_all(&self, vs: &Matrix) -> bool {
        assert_eq!(vs.rows, self.ambient_dim);
        let p = self.basis.p;
        (0..vs.cols).all(|c| {
            let mut v: Vec<u32> = (0..vs.rows).map(|r| vs.get(r, c)).collect();
            for (row, &pc) in self.pivots.iter().enumerate() {
                let f = v[pc];
                if f != 0 {
                    for (j, slot) in v.iter_mut().enumerate() {
                        *slot = (*slot + (p - f) * self.basis.get(row, j)) % p;
                    }
                }
            }
            v.iter().all(|&e| e == 0)
        })
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        other.contains_all(&self.basis_columns())
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::from_rows(&Matrix::vstack(&[&self.basis, &other.basis]))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // x = U a = V b  <=>  [U | -V] (a; b) = 0
        let u = self.basis_columns();
        let v = other.basis_columns();
        let k = Matrix::hstack(&[&u, &v.neg()]).kernel();
        let coeffs = k.basis_columns().submatrix(0, 0, u.cols, k.dim());
        Subspace::from_columns(&u.mul(&coeffs))
    }
}

/// Quotient `F_p^n / sub` realized on the non-pivot coordinates.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub dim: usize,
    /// `dim x n`, kernel exactly `sub`.
    pub projection: Matrix,
    /// `n x dim`, `projection * section = I`.
    pub section: Matrix,
}

pub fn quotient(ambient_dim: usize, sub: &Subspace) -> Result<Quotient> {
    if sub.ambient_dim != ambient_dim {
        return Err(Error::DimensionMismatch(format!(
            "quotient: subspace lives in dimension {}, not {ambient_dim}",
            sub.ambient_dim
        )));
    }
    let p = sub.modulus();
    let mut is_pivot = vec![false; ambient_dim];
    for &c in &sub.pivots {
        is_pivot[c] = true;
    }
    let free: Vec<usize> = (0..ambient_dim).filter(|&c| !is_pivot[c]).collect();
    // coordinate `free[j]` of v - R^T v_P
    let mut projection = Matrix::zeros(p, free.len(), ambient_dim);
    for (j, &fc) in free.iter().enumerate() {
        projection.set(j, fc, 1);
        for (row, &pc) in sub.pivots.iter().enumerate() {
            let e = sub.basis.get(row, fc);
            projection.set(j, pc, (p - e) % p);
        }
    }
    let section = Matrix::from_fn(p, ambient_dim, free.len(), |r, c| u32::from(free[c] == r));
    Ok(Quotient {
        dim: free.len(),
        projection,
        section,
    })
}

/// Coordinates with respect to a fixed family of linearly independent
/// columns, via a precomputed left inverse.
#[derive(Clone, Debug)]
pub struct ColumnBasis {
    columns: Matrix,
    rows_used: Vec<usize>,
    left_inverse: Matrix,
}

impl ColumnBasis {
    /// Fails when the columns are linearly dependent.
    pub fn new(columns: Matrix) -> Result<Self> {
        let t = columns.transpose().rref();
        if t.rank != columns.cols {
            return Err(Error::Malformed("basis columns are linearly dependent".into()));
        }
        let rows_used = t.pivot_cols.clone();
        let square = columns.select_rows(&rows_used);
        let left_inverse = square
            .inverse()
            .expect("pivot rows of an independent family are invertible");
        Ok(ColumnBasis {
            columns,
            rows_used,
            left_inverse,
        })
    }

    pub fn len(&self) -> usize {
        self.columns.cols
    }

    pub fn is_empty(&self) -> bool {
        self.columns.cols == 0
    }

    pub fn columns(&self) -> &Matrix {
        &self.columns
    }

    /// Coordinates of each column of `v`, or `None` if some column is
    /// outside the span.
    pub fn coords(&self, v: &Matrix) -> Option<Matrix> {
        let x = self.coords_unchecked(v);
        (self.columns.mul(&x) == *v).then_some(x)
    }

    /// Coordinates assuming `v` lies in the span.
    pub fn coords_unchecked(&self, v: &Matrix) -> Matrix {
        self.left_inverse.mul(&v.select_rows(&self.rows_used))
    }
}

/// Iterates over all vectors of `F_p^n` in lexicographic order.
pub fn all_vectors(p: u32, n: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = (p as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    (0..total).map(move |mut k| {
        let mut v = vec![0u32; n];
        for slot in v.iter_mut().rev() {
            *slot = (k % p as u64) as u32;
            k /= p as u64;
        }
        v
    })
}

/// `p^n`, saturating.
pub fn field_power(p: u32, n: usize) -> u64 {
    (p as u64).checked_pow(n as u32).unwrap_or(u64::MAX)
}

/// Linear combination `sum coeffs[i] * mats[i]`.
pub fn combine(p: u32, rows: usize, cols: usize, mats: &[Matrix], coeffs: &[u32]) -> Matrix {
    let mut out = Matrix::zeros(p, rows, cols);
    for (m, &c) in mats.iter().zip(coeffs) {
        if c != 0 {
            out = out.add_scaled(m, c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u32, rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_rows(p, rows).unwrap()
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = Matrix::identity(2, 2);
        let r = id.rref();
        assert_eq!(r.reduced, id);
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivot_cols, vec![0, 1]);

        let z = Matrix::zeros(2, 2, 3);
        let r = z.rref();
        assert_eq!(r.reduced, z);
        assert_eq!(r.rank, 0);
        assert!(r.pivot_cols.is_empty());
    }

    #[test]
    fn rref_hand_reduction() {
        let a = m(2, &[vec![1, 1, 0], vec![1, 1, 1]]);
        let r = a.rref();
        assert_eq!(r.reduced, m(2, &[vec![1, 1, 0], vec![0, 0, 1]]));
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivot_cols, vec![0, 2]);
    }

    #[test]
    fn modulus_mismatch_is_malformed() {
        let a = Scalar::new(1, 2).unwrap();
        let b = Scalar::new(1, 3).unwrap();
        assert!(matches!(
            Matrix::from_scalars(1, 2, &[a, b]),
            Err(Error::Malformed(_))
        ));
        assert!(Matrix::from_residues(3, 1, 1, vec![3]).is_err());
        assert!(Matrix::new(4, 1, 1, vec![1]).is_err());
        let json = r#"{"p":2,"rows":1,"cols":2,"entries":[1,2]}"#;
        assert!(serde_json::from_str::<Matrix>(json).is_err());
    }

    #[test]
    fn solve_examples() {
        let v = Matrix::column_vector(2, &[1, 0]);
        let s = solve(&Matrix::identity(2, 2), &v).unwrap().unwrap();
        assert_eq!(s.particular, v);
        assert_eq!(s.kernel.dim(), 0);

        let s = solve(&Matrix::zeros(2, 2, 2), &Matrix::zeros(2, 2, 1))
            .unwrap()
            .unwrap();
        assert!(s.particular.is_zero());
        assert_eq!(s.kernel.dim(), 2);

        let s = solve(&m(2, &[vec![1, 1]]), &m(2, &[vec![1]])).unwrap().unwrap();
        assert_eq!(s.particular, Matrix::column_vector(2, &[1, 0]));
        assert_eq!(s.kernel.basis_rows(), &m(2, &[vec![1, 1]]));

        // enumeration oracle over F_2^2
        let sols: Vec<_> = all_vectors(2, 2).filter(|v| (v[0] + v[1]) % 2 == 1).collect();
        assert_eq!(sols, vec![vec![0, 1], vec![1, 0]]);
        let kern: Vec<_> = all_vectors(2, 2).filter(|v| (v[0] + v[1]) % 2 == 0).collect();
        assert_eq!(kern, vec![vec![0, 0], vec![1, 1]]);
    }

    #[test]
    fn solve_inconsistent_and_mismatch() {
        let a = m(3, &[vec![1, 0], vec![1, 0]]);
        let b = Matrix::column_vector(3, &[1, 2]);
        assert!(solve(&a, &b).unwrap().is_none());
        assert!(matches!(
            solve(&a, &Matrix::zeros(3, 3, 1)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn quotient_examples() {
        let q = quotient(2, &Subspace::zero(2, 2)).unwrap();
        assert_eq!(q.dim, 2);
        assert_eq!(q.projection, Matrix::identity(2, 2));

        let q = quotient(2, &Subspace::full(2, 2)).unwrap();
        assert_eq!(q.dim, 0);

        let sub = Subspace::from_columns(&Matrix::column_vector(2, &[1, 1]));
        let q = quotient(2, &sub).unwrap();
        assert_eq!(q.dim, 1);
        let kernel: Vec<_> = all_vectors(2, 2)
            .filter(|v| q.projection.mul(&Matrix::column_vector(2, v)).is_zero())
            .collect();
        assert_eq!(kernel, vec![vec![0, 0], vec![1, 1]]);
        assert!(q.projection.mul(&q.section).is_identity());
    }

    #[test]
    fn column_basis_coordinates() {
        let cols = m(5, &[vec![1, 0], vec![2, 1], vec![0, 3]]);
        let b = ColumnBasis::new(cols.clone()).unwrap();
        let x = Matrix::column_vector(5, &[3, 4]);
        assert_eq!(b.coords(&cols.mul(&x)).unwrap(), x);
        assert!(b.coords(&Matrix::column_vector(5, &[0, 0, 1])).is_none());
    }

    #[test]
    fn intersection_of_planes() {
        let u = Subspace::from_columns(&m(2, &[vec![1, 0], vec![0, 1], vec![0, 0]]));
        let v = Subspace::from_columns(&m(2, &[vec![0, 0], vec![1, 0], vec![0, 1]]));
        let w = u.intersection(&v);
        assert_eq!(w.dim(), 1);
        assert!(w.contains(&Matrix::column_vector(2, &[0, 1, 0])));
    }
}
