use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::linalg::{combine, quotient, ColumnBasis, Matrix, Subspace};

use super::{same_algebra, AlgebraRef};

/// A finite-dimensional left module: one `n x n` action matrix per basis
/// element of the algebra. Cloning is cheap.
#[derive(Clone)]
pub struct Module {
    algebra: AlgebraRef,
    dim: usize,
    action: Arc<Vec<Matrix>>,
}

impl PartialEq for Module {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra)
            && self.dim == other.dim
            && self.action == other.action
    }
}

impl Eq for Module {}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Module(dim {}; {:?})", self.dim, self.action)
    }
}

impl Module {
    /// Validating constructor.
    pub fn new(algebra: &AlgebraRef, dim: usize, action: Vec<Matrix>) -> Result<Self> {
        let m = Module {
            algebra: algebra.clone(),
            dim,
            action: Arc::new(action),
        };
        m.validate()?;
        Ok(m)
    }

    /// Constructor for modules produced by internal constructions; the
    /// axioms are rechecked in debug builds.
    pub(crate) fn new_internal(algebra: &AlgebraRef, dim: usize, action: Vec<Matrix>) -> Self {
        let m = Module {
            algebra: algebra.clone(),
            dim,
            action: Arc::new(action),
        };
        debug_assert!(m.validate().is_ok(), "constructed module violates the axioms");
        m
    }

    pub fn validate(&self) -> Result<()> {
        let a = &self.algebra;
        let (d, n, p) = (a.dim(), self.dim, a.modulus());
        if self.action.len() != d {
            return Err(Error::Malformed(format!(
                "module has {} action matrices, algebra has dimension {d}",
                self.action.len()
            )));
        }
        for (i, m) in self.action.iter().enumerate() {
            if m.shape() != (n, n) || m.modulus() != p {
                return Err(Error::Malformed(format!(
                    "action matrix {i} is not {n}x{n} over F_{p}"
                )));
            }
        }
        if !self.act(a.unit()).is_identity() {
            return Err(Error::Invalid("the unit does not act as the identity".into()));
        }
        for i in 0..d {
            for j in 0..d {
                let lhs = self.action[i].mul(&self.action[j]);
                let coeffs: Vec<u32> = (0..d).map(|k| a.c(i, j, k)).collect();
                if lhs != combine(p, n, n, &self.action, &coeffs) {
                    return Err(Error::Invalid(format!(
                        "action of e_{i} e_{j} is not the product of the actions"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn zero(algebra: &AlgebraRef) -> Self {
        let p = algebra.modulus();
        Module::new_internal(algebra, 0, vec![Matrix::zeros(p, 0, 0); algebra.dim()])
    }

    /// The algebra as a left module over itself.
    pub fn regular(algebra: &AlgebraRef) -> Self {
        Module::new_internal(algebra, algebra.dim(), algebra.left_regular().to_vec())
    }

    /// `A^n`, copy-major: coordinate `i * dim A + j` is `e_j` in copy `i`.
    pub fn free(algebra: &AlgebraRef, n: usize) -> Self {
        Module::direct_sum_all(algebra, &vec![Module::regular(algebra); n])
    }

    pub fn algebra(&self) -> &AlgebraRef {
        &self.algebra
    }

    pub fn modulus(&self) -> u32 {
        self.algebra.modulus()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    /// Action of an algebra element given in coordinates.
    pub fn act(&self, element: &[u32]) -> Matrix {
        combine(self.modulus(), self.dim, self.dim, &self.action, element)
    }

    /// Actions of the algebra generators.
    pub fn generator_actions(&self) -> Vec<Matrix> {
        self.algebra.generators().iter().map(|g| self.act(g)).collect()
    }

    pub fn direct_sum(&self, other: &Module) -> Module {
        assert!(same_algebra(&self.algebra, &other.algebra), "algebra mismatch");
        let action = self
            .action
            .iter()
            .zip(other.action.iter())
            .map(|(a, b)| Matrix::block_diag(&[a, b]))
            .collect();
        Module::new_internal(&self.algebra, self.dim + other.dim, action)
    }

    pub fn direct_sum_all(algebra: &AlgebraRef, parts: &[Module]) -> Module {
        let p = algebra.modulus();
        let dim = parts.iter().map(|m| m.dim).sum();
        let action = (0..algebra.dim())
            .map(|i| {
                let mut out = Matrix::zeros(p, dim, dim);
                let mut off = 0;
                for m in parts {
                    out.paste(off, off, &m.action[i]);
                    off += m.dim;
                }
                out
            })
            .collect();
        Module::new_internal(algebra, dim, action)
    }

    /// The dual `Hom(x, F_p)` as a left module over the opposite algebra,
    /// acting by transposes.
    pub fn dual(&self) -> Module {
        let op = self.algebra.opposite();
        let action = self.action.iter().map(Matrix::transpose).collect();
        Module::new_internal(&op, self.dim, action)
    }

    /// The same module over a structurally equal algebra handle.
    pub fn rebase(&self, algebra: &AlgebraRef) -> Result<Module> {
        if !same_algebra(&self.algebra, algebra) {
            return Err(Error::AlgebraMismatch("rebase onto a different algebra".into()));
        }
        Ok(Module {
            algebra: algebra.clone(),
            dim: self.dim,
            action: self.action.clone(),
        })
    }

    /// Smallest submodule containing the given columns.
    pub fn submodule_generated(&self, vectors: &Matrix) -> Subspace {
        let gens = self.generator_actions();
        let mut span = Subspace::from_columns(vectors);
        loop {
            let basis = span.basis_columns();
            let mut parts = vec![basis.clone()];
            parts.extend(gens.iter().map(|g| g.mul(&basis)));
            let refs: Vec<&Matrix> = parts.iter().collect();
            let grown = Subspace::from_columns(&Matrix::hstack(&refs));
            if grown.dim() == span.dim() {
                return span;
            }
            span = grown;
        }
    }

    pub fn is_submodule(&self, sub: &Subspace) -> bool {
        let basis = sub.basis_columns();
        self.generator_actions()
            .iter()
            .all(|g| sub.contains_all(&g.mul(&basis)))
    }

    /// Submodule on an invariant subspace, with its inclusion.
    pub fn submodule(&self, sub: &Subspace) -> Result<ModuleHom> {
        if !self.is_submodule(sub) {
            return Err(Error::Invalid("subspace is not invariant".into()));
        }
        let basis = ColumnBasis::new(sub.basis_columns())?;
        let action = self
            .action
            .iter()
            .map(|a| basis.coords_unchecked(&a.mul(basis.columns())))
            .collect();
        let s = Module::new_internal(&self.algebra, sub.dim(), action);
        Ok(ModuleHom::new_internal(&s, self, basis.columns().clone()))
    }

    /// Quotient by an invariant subspace, with its projection.
    pub fn quotient_by(&self, sub: &Subspace) -> Result<ModuleHom> {
        if !self.is_submodule(sub) {
            return Err(Error::Invalid("subspace is not invariant".into()));
        }
        let q = quotient(self.dim, sub)?;
        let action = self
            .action
            .iter()
            .map(|a| q.projection.mul(a).mul(&q.section))
            .collect();
        let m = Module::new_internal(&self.algebra, q.dim, action);
        Ok(ModuleHom::new_internal(self, &m, q.projection))
    }

    /// Transports the structure along an invertible change of basis:
    /// the result has action `c^-1 rho c`.
    pub fn conjugate(&self, c: &Matrix) -> Result<Module> {
        let inv = c
            .inverse()
            .ok_or_else(|| Error::Invalid("change of basis is not invertible".into()))?;
        let action = self.action.iter().map(|a| inv.mul(a).mul(c)).collect();
        Ok(Module::new_internal(&self.algebra, self.dim, action))
    }

    /// Cheap isomorphism invariants: ranks of the basis actions and their
    /// pairwise products.
    pub fn rank_profile(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.action.iter().map(Matrix::rank).collect();
        for a in self.action.iter() {
            for b in self.action.iter() {
                out.push(a.mul(b).rank());
            }
        }
        out
    }

    pub fn identity(&self) -> ModuleHom {
        ModuleHom::new_internal(self, self, Matrix::identity(self.modulus(), self.dim))
    }

    pub fn zero_map_to(&self, target: &Module) -> ModuleHom {
        ModuleHom::new_internal(self, target, Matrix::zeros(self.modulus(), target.dim, self.dim))
    }
}

/// A module homomorphism; `matrix` is `target.dim x source.dim`.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleHom {
    pub source: Module,
    pub target: Module,
    pub matrix: Matrix,
}

impl fmt::Debug for ModuleHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ModuleHom({} -> {}: {:?})",
            self.source.dim, self.target.dim, self.matrix
        )
    }
}

impl ModuleHom {
    pub fn new(source: &Module, target: &Module, matrix: Matrix) -> Result<Self> {
        let h = ModuleHom {
            source: source.clone(),
            target: target.clone(),
            matrix,
        };
        h.validate()?;
        Ok(h)
    }

    pub(crate) fn new_internal(source: &Module, target: &Module, matrix: Matrix) -> Self {
        let h = ModuleHom {
            source: source.clone(),
            target: target.clone(),
            matrix,
        };
        debug_assert!(h.validate().is_ok(), "constructed map is not a module map");
        h
    }

    pub fn validate(&self) -> Result<()> {
        if !same_algebra(self.source.algebra(), self.target.algebra()) {
            return Err(Error::AlgebraMismatch("map between modules over different algebras".into()));
        }
        if self.matrix.shape() != (self.target.dim, self.source.dim) {
            return Err(Error::DimensionMismatch(format!(
                "map matrix is {:?}, expected {}x{}",
                self.matrix.shape(),
                self.target.dim,
                self.source.dim
            )));
        }
        if !self.commutes() {
            return Err(Error::Invalid("matrix does not intertwine the actions".into()));
        }
        Ok(())
    }

    fn commutes(&self) -> bool {
        self.source
            .action
            .iter()
            .zip(self.target.action.iter())
            .all(|(s, t)| self.matrix.mul(s) == t.mul(&self.matrix))
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &ModuleHom) -> Result<ModuleHom> {
        if first.target != self.source {
            return Err(Error::DimensionMismatch("composing maps with mismatched ends".into()));
        }
        Ok(ModuleHom::new_internal(
            &first.source,
            &self.target,
            self.matrix.mul(&first.matrix),
        ))
    }

    pub fn add(&self, other: &ModuleHom) -> ModuleHom {
        ModuleHom::new_internal(&self.source, &self.target, self.matrix.add(&other.matrix))
    }

    pub fn scale(&self, s: u32) -> ModuleHom {
        ModuleHom::new_internal(&self.source, &self.target, self.matrix.scale(s))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn is_injective(&self) -> bool {
        self.matrix.is_injective()
    }

    pub fn is_surjective(&self) -> bool {
        self.matrix.is_surjective()
    }

    pub fn is_iso(&self) -> bool {
        self.matrix.is_invertible()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn inverse(&self) -> Option<ModuleHom> {
        let inv = self.matrix.inverse()?;
        Some(ModuleHom::new_internal(&self.target, &self.source, inv))
    }

    /// The dual map between duals, over the opposite algebra.
    pub fn dual(&self) -> ModuleHom {
        ModuleHom::new_internal(&self.target.dual(), &self.source.dual(), self.matrix.transpose())
    }

    /// Block-diagonal sum of two maps.
    pub fn direct_sum(&self, other: &ModuleHom) -> ModuleHom {
        ModuleHom::new_internal(
            &self.source.direct_sum(&other.source),
            &self.target.direct_sum(&other.target),
            Matrix::block_diag(&[&self.matrix, &other.matrix]),
        )
    }
}

/// Basis of `Hom(source, target)` in canonical order.
#[derive(Clone)]
pub struct HomSpace {
    pub source: Module,
    pub target: Module,
    basis: Vec<Matrix>,
    coords: OnceLock<Option<ColumnBasis>>,
}

impl fmt::Debug for HomSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "HomSpace({} -> {}, dim {})",
            self.source.dim,
            self.target.dim,
            self.basis.len()
        )
    }
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn hom(&self, i: usize) -> ModuleHom {
        ModuleHom::new_internal(&self.source, &self.target, self.basis[i].clone())
    }

    pub fn homs(&self) -> Vec<ModuleHom> {
        (0..self.dim()).map(|i| self.hom(i)).collect()
    }

    pub fn combine(&self, coeffs: &[u32]) -> Matrix {
        combine(
            self.source.modulus(),
            self.target.dim,
            self.source.dim,
            &self.basis,
            coeffs,
        )
    }

    /// Basis vectors flattened into the columns of one matrix.
    pub fn vectorized(&self) -> Matrix {
        let p = self.source.modulus();
        let n = self.source.dim * self.target.dim;
        if self.basis.is_empty() {
            return Matrix::zeros(p, n, 0);
        }
        let cols: Vec<Matrix> = self.basis.iter().map(Matrix::vectorize).collect();
        let refs: Vec<&Matrix> = cols.iter().collect();
        Matrix::hstack(&refs)
    }

    /// Some `h` in the space with `image(h) = target`, for a linear `image`.
    pub fn solve_linear(&self, image: impl Fn(&Matrix) -> Matrix, target: &Matrix) -> Option<Matrix> {
        if self.basis.is_empty() {
            let zero = Matrix::zeros(self.source.modulus(), self.target.dim, self.source.dim);
            return target.is_zero().then_some(zero);
        }
        let cols: Vec<Matrix> = self.basis.iter().map(|b| image(b).vectorize()).collect();
        let refs: Vec<&Matrix> = cols.iter().collect();
        let system = Matrix::hstack(&refs);
        let s = crate::linalg::solve(&system, &target.vectorize()).ok()??;
        Some(self.combine(s.particular.entries()))
    }

    /// Coordinates of a map in the basis, or `None` if it is not a module map.
    pub fn coords(&self, m: &Matrix) -> Option<Vec<u32>> {
        let basis = self
            .coords
            .get_or_init(|| ColumnBasis::new(self.vectorized()).ok());
        let basis = basis.as_ref()?;
        basis
            .coords(&m.vectorize())
            .map(|c| c.entries().to_vec())
    }
}

/// Solves the intertwining equations `F rho_x(g) = rho_y(g) F` over the
/// algebra generators.
pub fn hom_space(x: &Module, y: &Module) -> Result<HomSpace> {
    if !same_algebra(x.algebra(), y.algebra()) {
        return Err(Error::AlgebraMismatch("hom space between modules over different algebras".into()));
    }
    let p = x.modulus();
    let (nx, ny) = (x.dim, y.dim);
    let unknowns = nx * ny;
    let make = |basis| HomSpace {
        source: x.clone(),
        target: y.clone(),
        basis,
        coords: OnceLock::new(),
    };
    if unknowns == 0 {
        return Ok(make(Vec::new()));
    }
    let gx = x.generator_actions();
    let gy = y.generator_actions();
    let mut eq = Matrix::zeros(p, gx.len() * unknowns, unknowns);
    for (g, (ax, ay)) in gx.iter().zip(&gy).enumerate() {
        for r in 0..ny {
            for c in 0..nx {
                let row = g * unknowns + r * nx + c;
                for k in 0..nx {
                    let v = ax.get(k, c);
                    if v != 0 {
                        let col = r * nx + k;
                        eq.set(row, col, (eq.get(row, col) + v) % p);
                    }
                }
                for k in 0..ny {
                    let v = ay.get(r, k);
                    if v != 0 {
                        let col = k * nx + c;
                        eq.set(row, col, (eq.get(row, col) + p - v) % p);
                    }
                }
            }
        }
    }
    let kernel = eq.kernel();
    let rows = kernel.basis_rows();
    let basis = (0..rows.rows())
        .map(|r| Matrix::unvectorize(&rows.row(r), ny, nx))
        .collect();
    Ok(make(basis))
}

/// Kernel and cokernel of a map with their canonical mono and epi.
#[derive(Clone, Debug)]
pub struct KerCoker {
    pub inclusion: ModuleHom,
    pub projection: ModuleHom,
}

impl KerCoker {
    pub fn kernel(&self) -> &Module {
        &self.inclusion.source
    }

    pub fn cokernel(&self) -> &Module {
        &self.projection.target
    }
}

pub fn kernel_cokernel(f: &ModuleHom) -> Result<KerCoker> {
    let inclusion = f.source.submodule(&f.matrix.kernel())?;
    let projection = f.target.quotient_by(&f.matrix.image())?;
    Ok(KerCoker {
        inclusion,
        projection,
    })
}

/// `0 -> f.source -> f.target = g.source -> g.target -> 0`, exact.
#[derive(Clone, Debug)]
pub struct ShortExactSeq {
    pub f: ModuleHom,
    pub g: ModuleHom,
}

impl ShortExactSeq {
    pub fn new(f: ModuleHom, g: ModuleHom) -> Result<Self> {
        let s = ShortExactSeq { f, g };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.f.target != self.g.source {
            return Err(Error::DimensionMismatch("middle terms differ".into()));
        }
        if !self.f.is_injective() {
            return Err(Error::Invalid("first map is not injective".into()));
        }
        if !self.g.is_surjective() {
            return Err(Error::Invalid("second map is not surjective".into()));
        }
        if !self.g.matrix.mul(&self.f.matrix).is_zero()
            || self.f.rank() + self.g.rank() != self.f.target.dim
        {
            return Err(Error::Invalid("image of the first map is not the kernel of the second".into()));
        }
        Ok(())
    }

    pub fn left(&self) -> &Module {
        &self.f.source
    }

    pub fn middle(&self) -> &Module {
        &self.f.target
    }

    pub fn right(&self) -> &Module {
        &self.g.target
    }

    /// The split sequence `0 -> x -> x + z -> z -> 0`.
    pub fn split(x: &Module, z: &Module) -> ShortExactSeq {
        let p = x.modulus();
        let mid = x.direct_sum(z);
        let (nx, nz) = (x.dim(), z.dim());
        let f = Matrix::from_fn(p, nx + nz, nx, |r, c| u32::from(r == c));
        let g = Matrix::from_fn(p, nz, nx + nz, |r, c| u32::from(c == nx + r));
        ShortExactSeq {
            f: ModuleHom::new_internal(x, &mid, f),
            g: ModuleHom::new_internal(&mid, z, g),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::Algebra;
    use super::*;

    fn d2() -> AlgebraRef {
        Algebra::truncated_polynomial(2, 2).unwrap()
    }

    fn simple(a: &AlgebraRef) -> Module {
        let p = a.modulus();
        Module::new(a, 1, vec![Matrix::identity(p, 1), Matrix::zeros(p, 1, 1)]).unwrap()
    }

    #[test]
    fn hom_space_examples() {
        let f2 = Algebra::field(2).unwrap();
        let k = Module::regular(&f2);
        assert_eq!(hom_space(&k, &k).unwrap().dim(), 1);
        let a = d2();
        let s = simple(&a);
        assert_eq!(hom_space(&s, &s).unwrap().dim(), 1);
        let h = hom_space(&s, &Module::regular(&a)).unwrap();
        assert_eq!(h.dim(), 1);
        // the image is the socle, spanned by x
        assert_eq!(h.basis()[0], Matrix::column_vector(2, &[0, 1]));
    }

    #[test]
    fn kernel_cokernel_of_multiplication_by_x() {
        let a = d2();
        let reg = Module::regular(&a);
        let x = ModuleHom::new(&reg, &reg, a.left_regular()[1].clone()).unwrap();
        let kc = kernel_cokernel(&x).unwrap();
        assert_eq!(kc.kernel(), &simple(&a));
        assert_eq!(kc.cokernel(), &simple(&a));

        let id = kernel_cokernel(&reg.identity()).unwrap();
        assert!(id.kernel().is_zero() && id.cokernel().is_zero());
        let zero = kernel_cokernel(&reg.zero_map_to(&reg)).unwrap();
        assert_eq!(zero.kernel(), &reg);
        assert_eq!(zero.cokernel(), &reg);
    }

    #[test]
    fn rejects_non_module_data() {
        let a = d2();
        let bad = Module::new(&a, 1, vec![Matrix::identity(2, 1), Matrix::identity(2, 1)]);
        assert!(bad.is_err());
        let reg = Module::regular(&a);
        assert!(ModuleHom::new(&reg, &reg, Matrix::from_rows(2, &[vec![1, 0], vec![0, 0]]).unwrap())
            .is_err());
    }

    #[test]
    fn double_dual_is_identical() {
        let a = Algebra::upper_triangular(3, 2).unwrap();
        let reg = Module::regular(&a);
        assert_eq!(reg.dual().dual(), reg);
    }
}
