//! Bimodules and the functors `M (x)_B -` and `Hom_A(M, -)`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    ext_dims, generator_cover, hom_space, same_algebra, AlgebraRef, HomSpace, Module, ModuleHom,
};
use crate::error::{Error, Result};
use crate::linalg::{combine, quotient, ColumnBasis, Matrix, Subspace};

/// An `(A, B)`-bimodule. The right action of `b_k` is the matrix `R_k`
/// with `m . b_k = R_k m` in coordinates.
#[derive(Clone)]
pub struct Bimodule {
    left: AlgebraRef,
    right: AlgebraRef,
    dim: usize,
    left_action: Vec<Matrix>,
    right_action: Vec<Matrix>,
}

impl fmt::Debug for Bimodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bimodule(dim {})", self.dim)
    }
}

impl Bimodule {
    pub fn new(
        left: &AlgebraRef,
        right: &AlgebraRef,
        dim: usize,
        left_action: Vec<Matrix>,
        right_action: Vec<Matrix>,
    ) -> Result<Self> {
        if left.modulus() != right.modulus() {
            return Err(Error::AlgebraMismatch("bimodule over two different fields".into()));
        }
        let b = Bimodule {
            left: left.clone(),
            right: right.clone(),
            dim,
            left_action,
            right_action,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        Module::new(&self.left, self.dim, self.left_action.clone())
            .map_err(|e| Error::Invalid(format!("left action: {e}")))?;
        let (db, p, n) = (self.right.dim(), self.right.modulus(), self.dim);
        if self.right_action.len() != db
            || self.right_action.iter().any(|r| r.shape() != (n, n) || r.modulus() != p)
        {
            return Err(Error::Malformed(format!(
                "right action needs {db} matrices of size {n}x{n}"
            )));
        }
        if !combine(p, n, n, &self.right_action, self.right.unit()).is_identity() {
            return Err(Error::Invalid("right unit does not act as the identity".into()));
        }
        for i in 0..db {
            for j in 0..db {
                let coeffs: Vec<u32> = (0..db).map(|k| self.right.c(i, j, k)).collect();
                let lhs = self.right_action[j].mul(&self.right_action[i]);
                if lhs != combine(p, n, n, &self.right_action, &coeffs) {
                    return Err(Error::Invalid(format!(
                        "right action of b_{i} b_{j} is not the composite of the actions"
                    )));
                }
            }
        }
        for (i, l) in self.left_action.iter().enumerate() {
            for (k, r) in self.right_action.iter().enumerate() {
                if l.mul(r) != r.mul(l) {
                    return Err(Error::Invalid(format!(
                        "left action of a_{i} does not commute with right action of b_{k}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `A` as an `(A, A)`-bimodule.
    pub fn regular(a: &AlgebraRef) -> Self {
        Bimodule {
            left: a.clone(),
            right: a.clone(),
            dim: a.dim(),
            left_action: a.left_regular().to_vec(),
            right_action: (0..a.dim()).map(|k| a.right_regular(k)).collect(),
        }
    }

    pub fn zero(a: &AlgebraRef, b: &AlgebraRef) -> Self {
        let p = a.modulus();
        Bimodule {
            left: a.clone(),
            right: b.clone(),
            dim: 0,
            left_action: vec![Matrix::zeros(p, 0, 0); a.dim()],
            right_action: vec![Matrix::zeros(p, 0, 0); b.dim()],
        }
    }

    pub fn left_algebra(&self) -> &AlgebraRef {
        &self.left
    }

    pub fn right_algebra(&self) -> &AlgebraRef {
        &self.right
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modulus(&self) -> u32 {
        self.left.modulus()
    }

    pub fn left_action(&self) -> &[Matrix] {
        &self.left_action
    }

    pub fn right_action(&self) -> &[Matrix] {
        &self.right_action
    }

    /// Right action of an element of `B` given in coordinates.
    pub fn right_act(&self, element: &[u32]) -> Matrix {
        combine(self.modulus(), self.dim, self.dim, &self.right_action, element)
    }

    /// `M` as a left `A`-module.
    pub fn left_module(&self) -> Module {
        Module::new(&self.left, self.dim, self.left_action.clone())
            .expect("validated bimodule has a valid left action")
    }

    /// `M` as a left module over `B^op`.
    pub fn right_module(&self) -> Module {
        Module::new(&self.right.opposite(), self.dim, self.right_action.clone())
            .expect("validated bimodule has a valid right action")
    }

    fn check_right(&self, y: &Module) -> Result<()> {
        if !same_algebra(y.algebra(), &self.right) {
            return Err(Error::AlgebraMismatch("module is not over the right algebra".into()));
        }
        Ok(())
    }

    fn check_left(&self, x: &Module) -> Result<()> {
        if !same_algebra(x.algebra(), &self.left) {
            return Err(Error::AlgebraMismatch("module is not over the left algebra".into()));
        }
        Ok(())
    }

    /// `M (x)_B Y` as the quotient of `F_p^{m * dim Y}` (coordinate
    /// `j * dim Y + l` for `m_j (x) y_l`) by the balancing relations.
    pub fn tensor(&self, y: &Module) -> Result<Tensor> {
        self.check_right(y)?;
        let p = self.modulus();
        let (m, ny) = (self.dim, y.dim());
        let n = m * ny;
        let id_m = Matrix::identity(p, m);
        let id_y = Matrix::identity(p, ny);
        let relations: Vec<Matrix> = self
            .right
            .generators()
            .iter()
            .map(|g| self.right_act(g).kron(&id_y).sub(&id_m.kron(&y.act(g))))
            .collect();
        let span = if relations.is_empty() || n == 0 {
            Subspace::zero(p, n)
        } else {
            let refs: Vec<&Matrix> = relations.iter().collect();
            Subspace::from_columns(&Matrix::hstack(&refs))
        };
        let q = quotient(n, &span)?;
        let action = self
            .left_action
            .iter()
            .map(|l| q.projection.mul(&l.kron(&id_y)).mul(&q.section))
            .collect();
        let module = Module::new(&self.left, q.dim, action)?;
        Ok(Tensor {
            module,
            ny,
            projection: q.projection,
            section: q.section,
        })
    }

    /// `1_M (x) g` for `g: Y -> Y'`.
    pub fn tensor_map(&self, g: &ModuleHom, source: &Tensor, target: &Tensor) -> ModuleHom {
        let id_m = Matrix::identity(self.modulus(), self.dim);
        let m = target
            .projection
            .mul(&id_m.kron(&g.matrix))
            .mul(&source.section);
        ModuleHom::new(&source.module, &target.module, m).expect("tensor of a module map")
    }

    /// `Hom_A(M, X)` with `(b . f)(m) = f(m . b)`.
    pub fn hom_mx(&self, x: &Module) -> Result<HomMX> {
        self.check_left(x)?;
        let space = hom_space(&self.left_module(), x)?;
        let p = self.modulus();
        let h = space.dim();
        let action = if h == 0 {
            vec![Matrix::zeros(p, 0, 0); self.right.dim()]
        } else {
            let basis = ColumnBasis::new(space.vectorized())?;
            self.right_action
                .iter()
                .map(|r| {
                    let cols: Vec<Matrix> = space
                        .basis()
                        .iter()
                        .map(|f| f.mul(r).vectorize())
                        .collect();
                    let refs: Vec<&Matrix> = cols.iter().collect();
                    basis.coords_unchecked(&Matrix::hstack(&refs))
                })
                .collect()
        };
        let module = Module::new(&self.right, h, action)?;
        Ok(HomMX { module, space })
    }

    /// `Hom_A(M, f)` for `f: X -> X'`.
    pub fn hom_map(&self, f: &ModuleHom, source: &HomMX, target: &HomMX) -> ModuleHom {
        let p = self.modulus();
        let mut m = Matrix::zeros(p, target.module.dim(), source.module.dim());
        for (s, b) in source.space.basis().iter().enumerate() {
            let c = target
                .space
                .coords(&f.matrix.mul(b))
                .expect("composite with a module map is a module map");
            for (r, v) in c.into_iter().enumerate() {
                m.set(r, s, v);
            }
        }
        ModuleHom::new(&source.module, &target.module, m).expect("hom functor on a module map")
    }

    /// Inverse of [`Bimodule::curry`].
    pub fn uncurry(&self, psi: &ModuleHom, tensor: &Tensor, hom: &HomMX) -> Result<ModuleHom> {
        let p = self.modulus();
        let (m, ny) = (self.dim, tensor.ny);
        let x = hom.space.target.clone();
        let nx = x.dim();
        let mut full = Matrix::zeros(p, nx, m * ny);
        for l in 0..ny {
            let coeffs: Vec<u32> = (0..hom.module.dim()).map(|s| psi.matrix.get(s, l)).collect();
            let f = hom.space.combine(&coeffs);
            for j in 0..m {
                for r in 0..nx {
                    full.set(r, j * ny + l, f.get(r, j));
                }
            }
        }
        ModuleHom::new(&tensor.module, &x, full.mul(&tensor.section))
    }

    /// The matrix of `tau: Hom_A(M (x) Y, X) -> Hom_B(Y, Hom_A(M, X))` in the
    /// canonical bases of both hom spaces.
    pub fn tau(&self, x: &Module, y: &Module) -> Result<Tau> {
        let tensor = self.tensor(y)?;
        let hom = self.hom_mx(x)?;
        let source = hom_space(&tensor.module, x)?;
        let target = hom_space(y, &hom.module)?;
        let p = self.modulus();
        let mut matrix = Matrix::zeros(p, target.dim(), source.dim());
        for (s, phi) in source.homs().iter().enumerate() {
            let curried = self.curry(phi, &tensor, &hom, y)?;
            let c = target
                .coords(&curried.matrix)
                .ok_or_else(|| Error::Invalid("curried map is not B-linear".into()))?;
            for (r, v) in c.into_iter().enumerate() {
                matrix.set(r, s, v);
            }
        }
        Ok(Tau {
            tensor,
            hom,
            source,
            target,
            matrix,
        })
    }

    /// `phi~ = tau(phi)`: `y_l` goes to the map `m_j -> phi(m_j (x) y_l)`.
    pub fn curry(
        &self,
        phi: &ModuleHom,
        tensor: &Tensor,
        hom: &HomMX,
        y: &Module,
    ) -> Result<ModuleHom> {
        let p = self.modulus();
        let (m, ny) = (self.dim, tensor.ny);
        let full = phi.matrix.mul(&tensor.projection);
        let nx = phi.target.dim();
        let mut out = Matrix::zeros(p, hom.module.dim(), ny);
        for l in 0..ny {
            let f = Matrix::from_fn(p, nx, m, |r, j| full.get(r, j * ny + l));
            let c = hom
                .space
                .coords(&f)
                .ok_or_else(|| Error::Invalid("structure map is not A-linear".into()))?;
            for (r, v) in c.into_iter().enumerate() {
                out.set(r, l, v);
            }
        }
        ModuleHom::new(y, &hom.module, out)
    }

    /// `[dim Tor_0, ..., dim Tor_imax]` of `(M, y)`.
    pub fn tor_dims(&self, y: &Module, imax: usize) -> Result<Vec<usize>> {
        let mut out = vec![self.tensor(y)?.module.dim()];
        let mut current = y.clone();
        let mut tensor_prev = out[0];
        for _ in 1..=imax {
            let cover = generator_cover(&current);
            let g = cover.rank();
            let seq = cover.into_sequence()?;
            let omega = seq.left().clone();
            let tensor_omega = self.tensor(&omega)?.module.dim();
            out.push(tensor_omega + tensor_prev - g * self.dim);
            tensor_prev = tensor_omega;
            current = omega;
        }
        Ok(out)
    }

    pub fn tor_dim(&self, y: &Module, i: usize) -> Result<usize> {
        Ok(self.tor_dims(y, i)?[i])
    }

    /// `[dim Ext^0_A(M, x), ..., dim Ext^imax_A(M, x)]`.
    pub fn ext_dims(&self, x: &Module, imax: usize) -> Result<Vec<usize>> {
        self.check_left(x)?;
        ext_dims(&self.left_module(), x, imax)
    }

    /// Default vanishing depth for a pool over `algebra`.
    pub fn default_imax(algebra: &AlgebraRef) -> usize {
        algebra.dim() + 2
    }

    /// Filters `pool` by `Ext^i_A(M, -) = 0` or `Tor_i^B(M, -) = 0` for
    /// `1 <= i <= imax`.
    pub fn perp_inventory(&self, pool: &[Module], kind: PerpKind, imax: usize) -> Result<PerpInventory> {
        let results: Vec<Result<Option<usize>>> = pool
            .par_iter()
            .map(|x| {
                let dims = match kind {
                    PerpKind::X => self.ext_dims(x, imax)?,
                    PerpKind::Y => {
                        self.check_right(x)?;
                        self.tor_dims(x, imax)?
                    }
                };
                Ok((1..=imax).find(|&i| dims[i] != 0))
            })
            .collect();
        let mut members = Vec::new();
        let mut rejected = Vec::new();
        for (idx, r) in results.into_iter().enumerate() {
            match r? {
                None => members.push(idx),
                Some(degree) => rejected.push(Rejection { index: idx, degree }),
            }
        }
        Ok(PerpInventory {
            kind,
            members,
            rejected,
            imax,
        })
    }
}

/// `M (x)_B Y` together with its presentation data.
#[derive(Clone, Debug)]
pub struct Tensor {
    pub module: Module,
    pub ny: usize,
    /// From the coordinate space `F_p^{m * ny}` onto the tensor product.
    pub projection: Matrix,
    pub section: Matrix,
}

impl Tensor {
    /// Class of `m_j (x) y_l`.
    pub fn pure(&self, j: usize, l: usize) -> Matrix {
        self.projection.column(j * self.ny + l)
    }
}

/// `Hom_A(M, X)` as a `B`-module; `space` holds the basis maps `M -> X`.
#[derive(Clone, Debug)]
pub struct HomMX {
    pub module: Module,
    pub space: HomSpace,
}

/// The adjunction isomorphism on a pair `(X, Y)`.
#[derive(Clone, Debug)]
pub struct Tau {
    pub tensor: Tensor,
    pub hom: HomMX,
    pub source: HomSpace,
    pub target: HomSpace,
    pub matrix: Matrix,
}

impl Tau {
    pub fn is_invertible(&self) -> bool {
        self.matrix.is_invertible()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PerpKind {
    /// `Ext^i_A(M, X) = 0` for `i >= 1`.
    X,
    /// `Tor_i^B(M, Y) = 0` for `i >= 1`.
    Y,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub index: usize,
    pub degree: usize,
}

/// Pool members (by index) passing the vanishing test up to `imax`.
#[derive(Clone, Debug, Serialize)]
pub struct PerpInventory {
    pub kind: PerpKind,
    pub members: Vec<usize>,
    pub rejected: Vec<Rejection>,
    pub imax: usize,
}
