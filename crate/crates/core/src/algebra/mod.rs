//! Finite-dimensional associative unital algebras given by structure
//! constants, and their left modules.

mod extensions;
mod homological;
mod iso;
mod module;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_modulus, Matrix, Subspace};

pub use extensions::{
    extensions, indecomposable_injectives, indecomposable_projectives, indecomposable_summands, Extensions,
};
pub use homological::{
    ext_dim, ext_dims, free_cover, full_free_cover, generator_cover, injective_embedding, is_injective, is_projective, syzygy,
    Cover,
};
pub use iso::{enumerate_endomorphisms, enumerate_summands, is_isomorphic, IsoVerdict};
pub use module::{hom_space, kernel_cokernel, HomSpace, KerCoker, Module, ModuleHom, ShortExactSeq};

/// Shared handle to an algebra.
pub type AlgebraRef = Arc<Algebra>;

/// Algebra with basis `e_0..e_{d-1}` and `e_i e_j = sum_k c[i][j][k] e_k`.
pub struct Algebra {
    p: u32,
    dim: usize,
    mul: Vec<u32>,
    unit: Vec<u32>,
    left_regular: OnceLock<Vec<Matrix>>,
    generators: OnceLock<Vec<Vec<u32>>>,
    opposite: OnceLock<AlgebraRef>,
}

impl Clone for Algebra {
    fn clone(&self) -> Self {
        Algebra::from_parts(self.p, self.dim, self.mul.clone(), self.unit.clone())
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.dim == other.dim && self.mul == other.mul && self.unit == other.unit
    }
}

impl Eq for Algebra {}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra<F_{}; dim {}>", self.p, self.dim)
    }
}

/// First violation found by [`Algebra::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "kebab-case")]
pub enum AxiomFailure {
    Associativity { i: usize, j: usize, k: usize },
    LeftUnit { i: usize },
    RightUnit { i: usize },
}

impl fmt::Display for AxiomFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomFailure::Associativity { i, j, k } => {
                write!(f, "associativity fails on basis triple ({i}, {j}, {k})")
            }
            AxiomFailure::LeftUnit { i } => write!(f, "unit fails on the left of basis element {i}"),
            AxiomFailure::RightUnit { i } => {
                write!(f, "unit fails on the right of basis element {i}")
            }
        }
    }
}

/// Structure constants as written in manifests: `mul[i][j][k]` is the
/// coefficient of `e_k` in `e_i e_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    pub p: u32,
    pub dim: usize,
    pub mul: Vec<Vec<Vec<i64>>>,
    pub unit: Vec<i64>,
}

impl Algebra {
    fn from_parts(p: u32, dim: usize, mul: Vec<u32>, unit: Vec<u32>) -> Self {
        Algebra {
            p,
            dim,
            mul,
            unit,
            left_regular: OnceLock::new(),
            generators: OnceLock::new(),
            opposite: OnceLock::new(),
        }
    }

    /// Builds an algebra without checking the axioms; see [`Algebra::validate`].
    pub fn from_structure_constants(
        p: u32,
        dim: usize,
        mul: Vec<u32>,
        unit: Vec<u32>,
    ) -> Result<Self> {
        check_modulus(p)?;
        if mul.len() != dim * dim * dim || unit.len() != dim {
            return Err(Error::Malformed(format!(
                "structure constants must have {} entries and the unit {dim}",
                dim * dim * dim
            )));
        }
        if mul.iter().chain(&unit).any(|&c| c >= p) {
            return Err(Error::Malformed(format!("constant out of range modulo {p}")));
        }
        Ok(Algebra::from_parts(p, dim, mul, unit))
    }

    /// Builds and validates.
    pub fn new(p: u32, dim: usize, mul: Vec<u32>, unit: Vec<u32>) -> Result<AlgebraRef> {
        let a = Algebra::from_structure_constants(p, dim, mul, unit)?;
        if let Some(fail) = a.validate() {
            return Err(Error::Invalid(fail.to_string()));
        }
        Ok(Arc::new(a))
    }

    pub fn from_json(raw: &AlgebraJson) -> Result<Self> {
        check_modulus(raw.p)?;
        let d = raw.dim;
        if raw.mul.len() != d || raw.mul.iter().any(|r| r.len() != d || r.iter().any(|c| c.len() != d))
        {
            return Err(Error::Malformed(format!("mul must be a {d}x{d}x{d} tensor")));
        }
        let reduce = |c: i64| c.rem_euclid(raw.p as i64) as u32;
        let mul = raw.mul.iter().flatten().flatten().map(|&c| reduce(c)).collect();
        let unit = raw.unit.iter().map(|&c| reduce(c)).collect();
        Algebra::from_structure_constants(raw.p, d, mul, unit)
    }

    pub fn to_json(&self) -> AlgebraJson {
        let d = self.dim;
        AlgebraJson {
            p: self.p,
            dim: d,
            mul: (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| (0..d).map(|k| self.c(i, j, k) as i64).collect())
                        .collect()
                })
                .collect(),
            unit: self.unit.iter().map(|&u| u as i64).collect(),
        }
    }

    /// The ground field viewed as a one-dimensional algebra.
    pub fn field(p: u32) -> Result<AlgebraRef> {
        Algebra::new(p, 1, vec![1], vec![1])
    }

    /// Truncated polynomial ring `F_p[x]/(x^n)` with basis `1, x, ..., x^{n-1}`.
    pub fn truncated_polynomial(p: u32, n: usize) -> Result<AlgebraRef> {
        let mut mul = vec![0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                if i + j < n {
                    mul[(i * n + j) * n + i + j] = 1;
                }
            }
        }
        let mut unit = vec![0; n];
        unit[0] = 1;
        Algebra::new(p, n, mul, unit)
    }

    /// Upper triangular `n x n` matrices with basis `E_{ij}`, `i <= j`, in
    /// row-major order.
    pub fn upper_triangular(p: u32, n: usize) -> Result<AlgebraRef> {
        let idx: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let d = idx.len();
        let pos = |i: usize, j: usize| idx.iter().position(|&e| e == (i, j)).unwrap();
        let mut mul = vec![0; d * d * d];
        for (a, &(i, j)) in idx.iter().enumerate() {
            for (b, &(k, l)) in idx.iter().enumerate() {
                if j == k {
                    mul[(a * d + b) * d + pos(i, l)] = 1;
                }
            }
        }
        let mut unit = vec![0; d];
        for i in 0..n {
            unit[pos(i, i)] = 1;
        }
        Algebra::new(p, d, mul, unit)
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> u32 {
        self.mul[(i * self.dim + j) * self.dim + k]
    }

    pub fn unit(&self) -> &[u32] {
        &self.unit
    }

    /// Product of two coordinate vectors.
    pub fn multiply(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let (d, p) = (self.dim, self.p as u64);
        let mut out = vec![0u64; d];
        for i in 0..d {
            if x[i] == 0 {
                continue;
            }
            for j in 0..d {
                if y[j] == 0 {
                    continue;
                }
                let s = x[i] as u64 * y[j] as u64 % p;
                for (k, slot) in out.iter_mut().enumerate() {
                    *slot += s * self.c(i, j, k) as u64;
                }
            }
        }
        out.into_iter().map(|v| (v % p) as u32).collect()
    }

    fn basis_vector(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim];
        v[i] = 1;
        v
    }

    /// Associativity on all basis triples and the two unit laws, in that order.
    pub fn validate(&self) -> Option<AxiomFailure> {
        let d = self.dim;
        for i in 0..d {
            let ei = self.basis_vector(i);
            if self.multiply(&self.unit, &ei) != ei {
                return Some(AxiomFailure::LeftUnit { i });
            }
            if self.multiply(&ei, &self.unit) != ei {
                return Some(AxiomFailure::RightUnit { i });
            }
        }
        for i in 0..d {
            for j in 0..d {
                let ij: Vec<u32> = (0..d).map(|k| self.c(i, j, k)).collect();
                for k in 0..d {
                    let ek = self.basis_vector(k);
                    let jk: Vec<u32> = (0..d).map(|l| self.c(j, k, l)).collect();
                    if self.multiply(&ij, &ek) != self.multiply(&self.basis_vector(i), &jk) {
                        return Some(AxiomFailure::Associativity { i, j, k });
                    }
                }
            }
        }
        None
    }

    /// `L_i[k][j] = c_ijk`: left multiplication by `e_i` on coordinates.
    pub fn left_regular(&self) -> &[Matrix] {
        self.left_regular.get_or_init(|| {
            let d = self.dim;
            (0..d)
                .map(|i| Matrix::from_fn(self.p, d, d, |k, j| self.c(i, j, k)))
                .collect()
        })
    }

    /// `R_i[k][j] = c_jik`: right multiplication by `e_i`.
    pub fn right_regular(&self, i: usize) -> Matrix {
        let d = self.dim;
        Matrix::from_fn(self.p, d, d, |k, j| self.c(j, i, k))
    }

    /// The opposite algebra, with `c^op_ijk = c_jik`.
    pub fn opposite(&self) -> AlgebraRef {
        self.opposite
            .get_or_init(|| {
                let d = self.dim;
                let mut mul = vec![0; d * d * d];
                for i in 0..d {
                    for j in 0..d {
                        for k in 0..d {
                            mul[(i * d + j) * d + k] = self.c(j, i, k);
                        }
                    }
                }
                Arc::new(Algebra::from_parts(self.p, d, mul, self.unit.clone()))
            })
            .clone()
    }

    /// A generating set chosen greedily among basis elements: a module map
    /// commutes with the whole algebra once it commutes with these.
    pub fn generators(&self) -> &[Vec<u32>] {
        self.generators.get_or_init(|| {
            let mut gens: Vec<Vec<u32>> = Vec::new();
            let mut span = self.subalgebra_generated(&gens);
            for i in 0..self.dim {
                let ei = Matrix::unit_vector(self.p, self.dim, i);
                if !span.contains(&ei) {
                    gens.push(self.basis_vector(i));
                    span = self.subalgebra_generated(&gens);
                }
            }
            gens
        })
    }

    fn subalgebra_generated(&self, gens: &[Vec<u32>]) -> Subspace {
        let d = self.dim;
        let mut vectors: Vec<Vec<u32>> = vec![self.unit.clone()];
        vectors.extend(gens.iter().cloned());
        let to_space = |vs: &[Vec<u32>]| {
            Subspace::from_rows(&Matrix::from_fn(self.p, vs.len(), d, |r, c| vs[r][c]))
        };
        let mut span = to_space(&vectors);
        loop {
            let basis = span.basis_rows().clone();
            let mut next: Vec<Vec<u32>> = (0..basis.rows()).map(|r| basis.row(r).entries().to_vec()).collect();
            for r in 0..basis.rows() {
                let x = basis.row(r).entries().to_vec();
                for g in gens {
                    next.push(self.multiply(&x, g));
                }
            }
            let grown = to_space(&next);
            if grown.dim() == span.dim() {
                return span;
            }
            span = grown;
        }
    }

    /// Action of an arbitrary element given the action of the basis.
    pub fn element_action(&self, action: &[Matrix], element: &[u32], n: usize) -> Matrix {
        crate::linalg::combine(self.p, n, n, action, element)
    }

    /// Direct product `self x other`, with the basis of `self` first.
    pub fn product(&self, other: &Algebra) -> Result<AlgebraRef> {
        if self.p != other.p {
            return Err(Error::AlgebraMismatch("product of algebras over different fields".into()));
        }
        let (d1, d2) = (self.dim, other.dim);
        let d = d1 + d2;
        let mut mul = vec![0; d * d * d];
        for i in 0..d1 {
            for j in 0..d1 {
                for k in 0..d1 {
                    mul[(i * d + j) * d + k] = self.c(i, j, k);
                }
            }
        }
        for i in 0..d2 {
            for j in 0..d2 {
                for k in 0..d2 {
                    mul[((d1 + i) * d + d1 + j) * d + d1 + k] = other.c(i, j, k);
                }
            }
        }
        let unit = self.unit.iter().chain(&other.unit).copied().collect();
        Algebra::new(self.p, d, mul, unit)
    }
}

/// Whether two handles denote the same algebra.
pub fn same_algebra(a: &AlgebraRef, b: &AlgebraRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ground_field_and_dual_numbers_are_valid() {
        assert!(Algebra::field(2).is_ok());
        let d2 = Algebra::truncated_polynomial(2, 2).unwrap();
        assert_eq!(d2.dim(), 2);
        assert!(d2.validate().is_none());
    }

    #[test]
    fn dual_numbers_hand_check() {
        // x * x = 0, 1 is the unit
        let d2 = Algebra::truncated_polynomial(2, 2).unwrap();
        let table = [[[1, 0], [0, 1]], [[0, 1], [0, 0]]];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    assert_eq!(d2.c(i, j, k), table[i][j][k]);
                }
            }
        }
    }

    #[test]
    fn bad_unit_is_reported() {
        let a = Algebra::from_structure_constants(2, 2, vec![1, 0, 0, 1, 0, 1, 1, 0], vec![0, 1])
            .unwrap();
        // basis {1, x} with x*x = 1 but unit declared as x
        let fail = a.validate().unwrap();
        assert!(matches!(fail, AxiomFailure::LeftUnit { .. } | AxiomFailure::RightUnit { .. }));
        assert!(Algebra::new(2, 2, vec![1, 0, 0, 1, 0, 1, 1, 0], vec![0, 1]).is_err());
    }

    #[test]
    fn generators_of_small_algebras() {
        assert!(Algebra::field(3).unwrap().generators().is_empty());
        let d2 = Algebra::truncated_polynomial(2, 2).unwrap();
        assert_eq!(d2.generators(), &[vec![0, 1]]);
        let ut = Algebra::upper_triangular(2, 2).unwrap();
        assert!(ut.validate().is_none());
        assert_eq!(ut.dim(), 3);
    }

    #[test]
    fn opposite_is_involutive() {
        let ut = Algebra::upper_triangular(3, 2).unwrap();
        assert!(ut.opposite().validate().is_none());
        assert_eq!(*ut.opposite().opposite(), *ut);
    }
}
