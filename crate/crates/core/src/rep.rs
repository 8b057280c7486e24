//! Triples `[X;Y]_phi` and `(X,Y)_phi`, the triangular matrix ring, and the
//! criteria for projective and injective triples.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{
    is_injective, is_projective, kernel_cokernel, same_algebra, Algebra, AlgebraRef, Module,
    ModuleHom,
};
use crate::bimodule::{Bimodule, HomMX, Tensor};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};

/// `Lambda = [[A, M], [0, B]]` with basis order: `A`, then `M`, then `B`.
pub fn build_lambda(m: &Bimodule) -> Result<AlgebraRef> {
    let (a, b) = (m.left_algebra(), m.right_algebra());
    let (da, dm, db) = (a.dim(), m.dim(), b.dim());
    let d = da + dm + db;
    let p = a.modulus();
    let mut mul = vec![0u32; d * d * d];
    let mut put = |i: usize, j: usize, k: usize, v: u32| mul[(i * d + j) * d + k] = v;
    for i in 0..da {
        for j in 0..da {
            for k in 0..da {
                put(i, j, k, a.c(i, j, k));
            }
        }
        for j in 0..dm {
            for k in 0..dm {
                put(i, da + j, da + k, m.left_action()[i].get(k, j));
            }
        }
    }
    for j in 0..dm {
        for k in 0..db {
            for jj in 0..dm {
                put(da + j, da + dm + k, da + jj, m.right_action()[k].get(jj, j));
            }
        }
    }
    for i in 0..db {
        for j in 0..db {
            for k in 0..db {
                put(da + dm + i, da + dm + j, da + dm + k, b.c(i, j, k));
            }
        }
    }
    let mut unit = vec![0u32; d];
    unit[..da].copy_from_slice(a.unit());
    unit[da + dm..].copy_from_slice(b.unit());
    Algebra::new(p, d, mul, unit)
}

/// An object `[X;Y]_phi` of the triple category, `phi: M (x)_B Y -> X`.
#[derive(Clone)]
pub struct Triple {
    pub x: Module,
    pub y: Module,
    pub tensor: Tensor,
    pub phi: ModuleHom,
}

/// An object `(X,Y)_phi` of the hom-form triple category, `phi: Y -> Hom_A(M, X)`.
#[derive(Clone)]
pub struct TripleH {
    pub x: Module,
    pub y: Module,
    pub hom: HomMX,
    pub phi: ModuleHom,
}

impl fmt::Debug for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{};{}]_{:?}", self.x.dim(), self.y.dim(), self.phi.matrix)
    }
}

impl fmt::Debug for TripleH {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})_{:?}", self.x.dim(), self.y.dim(), self.phi.matrix)
    }
}

/// A morphism of triples of either form: a pair of module maps making the
/// defining square commute.
#[derive(Clone, Debug)]
pub struct TripleHom {
    pub f: ModuleHom,
    pub g: ModuleHom,
}

/// Criteria for a projective triple, each reported separately.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectiveCriteria {
    pub y_projective: bool,
    pub phi_injective: bool,
    pub coker_projective: bool,
}

impl ProjectiveCriteria {
    pub fn holds(&self) -> bool {
        self.y_projective && self.phi_injective && self.coker_projective
    }
}

/// Criteria for an injective hom-form triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InjectiveCriteria {
    pub x_injective: bool,
    pub ker_injective: bool,
    pub phi_surjective: bool,
}

impl InjectiveCriteria {
    pub fn holds(&self) -> bool {
        self.x_injective && self.ker_injective && self.phi_surjective
    }
}

/// The data `(A, M, B, Lambda)` with conversions between triples and
/// `Lambda`-modules.
#[derive(Clone, Debug)]
pub struct Triangular {
    m: Bimodule,
    lambda: AlgebraRef,
}

impl Triangular {
    pub fn new(m: &Bimodule) -> Result<Self> {
        Ok(Triangular {
            m: m.clone(),
            lambda: build_lambda(m)?,
        })
    }

    pub fn bimodule(&self) -> &Bimodule {
        &self.m
    }

    pub fn a(&self) -> &AlgebraRef {
        self.m.left_algebra()
    }

    pub fn b(&self) -> &AlgebraRef {
        self.m.right_algebra()
    }

    pub fn lambda(&self) -> &AlgebraRef {
        &self.lambda
    }

    pub fn modulus(&self) -> u32 {
        self.m.modulus()
    }

    fn offsets(&self) -> (usize, usize, usize) {
        (self.a().dim(), self.m.dim(), self.b().dim())
    }

    /// Idempotent `(1_A, 0, 0)` of `Lambda`.
    pub fn e_a(&self) -> Vec<u32> {
        let (da, dm, db) = self.offsets();
        let mut v = vec![0; da + dm + db];
        v[..da].copy_from_slice(self.a().unit());
        v
    }

    /// Idempotent `(0, 0, 1_B)` of `Lambda`.
    pub fn e_b(&self) -> Vec<u32> {
        let (da, dm, db) = self.offsets();
        let mut v = vec![0; da + dm + db];
        v[da + dm..].copy_from_slice(self.b().unit());
        v
    }

    pub fn triple(&self, x: &Module, y: &Module, phi: Matrix) -> Result<Triple> {
        let tensor = self.m.tensor(y)?;
        if !same_algebra(x.algebra(), self.a()) {
            return Err(Error::AlgebraMismatch("X is not an A-module".into()));
        }
        let phi = ModuleHom::new(&tensor.module, x, phi)?;
        Ok(Triple {
            x: x.clone(),
            y: y.clone(),
            tensor,
            phi,
        })
    }

    pub fn triple_h(&self, x: &Module, y: &Module, phi: Matrix) -> Result<TripleH> {
        let hom = self.m.hom_mx(x)?;
        if !same_algebra(y.algebra(), self.b()) {
            return Err(Error::AlgebraMismatch("Y is not a B-module".into()));
        }
        let phi = ModuleHom::new(y, &hom.module, phi)?;
        Ok(TripleH {
            x: x.clone(),
            y: y.clone(),
            hom,
            phi,
        })
    }

    pub fn zero_triple(&self) -> Triple {
        let (x, y) = (Module::zero(self.a()), Module::zero(self.b()));
        self.triple(&x, &y, Matrix::zeros(self.modulus(), 0, 0))
            .expect("zero triple")
    }

    /// Applies the adjunction isomorphism to the structure map.
    pub fn to_h(&self, t: &Triple) -> Result<TripleH> {
        let hom = self.m.hom_mx(&t.x)?;
        let phi = self.m.curry(&t.phi, &t.tensor, &hom, &t.y)?;
        Ok(TripleH {
            x: t.x.clone(),
            y: t.y.clone(),
            hom,
            phi,
        })
    }

    pub fn from_h(&self, t: &TripleH) -> Result<Triple> {
        let tensor = self.m.tensor(&t.y)?;
        let phi = self.m.uncurry(&t.phi, &tensor, &t.hom)?;
        Ok(Triple {
            x: t.x.clone(),
            y: t.y.clone(),
            tensor,
            phi,
        })
    }

    /// `X + Y` with `a` acting on `X`, `b` on `Y`, and `m_j` by
    /// `y -> phi(m_j (x) y)`.
    pub fn to_module(&self, t: &Triple) -> Module {
        let (da, dm, db) = self.offsets();
        let p = self.modulus();
        let (nx, ny) = (t.x.dim(), t.y.dim());
        let n = nx + ny;
        let zx = Matrix::zeros(p, nx, nx);
        let zy = Matrix::zeros(p, ny, ny);
        let full = t.phi.matrix.mul(&t.tensor.projection);
        let mut action = Vec::with_capacity(da + dm + db);
        for i in 0..da {
            action.push(Matrix::block_diag(&[&t.x.action()[i], &zy]));
        }
        for j in 0..dm {
            let mut m = Matrix::zeros(p, n, n);
            for l in 0..ny {
                for r in 0..nx {
                    m.set(r, nx + l, full.get(r, j * ny + l));
                }
            }
            action.push(m);
        }
        for k in 0..db {
            action.push(Matrix::block_diag(&[&zx, &t.y.action()[k]]));
        }
        Module::new(&self.lambda, n, action).expect("triple gives a Lambda-module")
    }

    pub fn h_to_module(&self, t: &TripleH) -> Result<Module> {
        Ok(self.to_module(&self.from_h(t)?))
    }

    /// Reads a triple off a `Lambda`-module in block form (the first `nx`
    /// coordinates spanning `e_A U`).
    pub fn block_triple(&self, u: &Module, nx: usize) -> Result<Triple> {
        let (da, dm, db) = self.offsets();
        let p = self.modulus();
        let ny = u.dim() - nx;
        let xa = (0..da)
            .map(|i| u.action()[i].submatrix(0, 0, nx, nx))
            .collect();
        let ya = (0..db)
            .map(|k| u.action()[da + dm + k].submatrix(nx, nx, ny, ny))
            .collect();
        let x = Module::new(self.a(), nx, xa)?;
        let y = Module::new(self.b(), ny, ya)?;
        let tensor = self.m.tensor(&y)?;
        let mut full = Matrix::zeros(p, nx, dm * ny);
        for j in 0..dm {
            let block = u.action()[da + j].submatrix(0, nx, nx, ny);
            for l in 0..ny {
                for r in 0..nx {
                    full.set(r, j * ny + l, block.get(r, l));
                }
            }
        }
        let phi = ModuleHom::new(&tensor.module, &x, full.mul(&tensor.section))?;
        Ok(Triple { x, y, tensor, phi })
    }

    /// Inverse of [`Triangular::to_module`] up to the returned isomorphism
    /// `to_module(triple) -> u`.
    pub fn from_module(&self, u: &Module) -> Result<(Triple, ModuleHom)> {
        if !same_algebra(u.algebra(), &self.lambda) {
            return Err(Error::AlgebraMismatch("not a Lambda-module".into()));
        }
        let xs = Subspace::from_columns(&u.act(&self.e_a()));
        let ys = Subspace::from_columns(&u.act(&self.e_b()));
        let c = Matrix::hstack(&[&xs.basis_columns(), &ys.basis_columns()]);
        let block = u.conjugate(&c)?;
        let t = self.block_triple(&block, xs.dim())?;
        let standard = self.to_module(&t);
        debug_assert_eq!(standard, block);
        Ok((t, ModuleHom::new(&standard, u, c)?))
    }

    /// `(f, g)` as a map of `Lambda`-modules between standard modules.
    pub fn hom_to_module(&self, h: &TripleHom, source: &Module, target: &Module) -> Result<ModuleHom> {
        ModuleHom::new(source, target, Matrix::block_diag(&[&h.f.matrix, &h.g.matrix]))
    }

    /// Splits a map between standard modules into its two components.
    pub fn module_to_hom(&self, h: &ModuleHom, source: &Triple, target: &Triple) -> Result<TripleHom> {
        let (nx, ny) = (source.x.dim(), source.y.dim());
        let (mx, my) = (target.x.dim(), target.y.dim());
        let m = &h.matrix;
        if !m.submatrix(0, nx, mx, ny).is_zero() || !m.submatrix(mx, 0, my, nx).is_zero() {
            return Err(Error::Invalid("map is not block diagonal".into()));
        }
        Ok(TripleHom {
            f: ModuleHom::new(&source.x, &target.x, m.submatrix(0, 0, mx, nx))?,
            g: ModuleHom::new(&source.y, &target.y, m.submatrix(mx, nx, my, ny))?,
        })
    }

    /// `f phi = phi' (1 (x) g)`.
    pub fn is_rep_hom(&self, h: &TripleHom, s: &Triple, t: &Triple) -> bool {
        let tg = self.m.tensor_map(&h.g, &s.tensor, &t.tensor);
        h.f.matrix.mul(&s.phi.matrix) == t.phi.matrix.mul(&tg.matrix)
    }

    /// `Hom(M, f) phi = phi' g`.
    pub fn is_reph_hom(&self, h: &TripleHom, s: &TripleH, t: &TripleH) -> bool {
        let hf = self.m.hom_map(&h.f, &s.hom, &t.hom);
        hf.matrix.mul(&s.phi.matrix) == t.phi.matrix.mul(&h.g.matrix)
    }

    pub fn rep_hom(&self, f: ModuleHom, g: ModuleHom, s: &Triple, t: &Triple) -> Result<TripleHom> {
        let h = TripleHom { f, g };
        if !self.is_rep_hom(&h, s, t) {
            return Err(Error::Invalid("square of triples does not commute".into()));
        }
        Ok(h)
    }

    pub fn reph_hom(&self, f: ModuleHom, g: ModuleHom, s: &TripleH, t: &TripleH) -> Result<TripleHom> {
        let h = TripleHom { f, g };
        if !self.is_reph_hom(&h, s, t) {
            return Err(Error::Invalid("square of triples does not commute".into()));
        }
        Ok(h)
    }

    /// `Y` projective, `phi` injective, `Coker phi` projective.
    pub fn classify_projective_rep(&self, t: &Triple) -> Result<ProjectiveCriteria> {
        let kc = kernel_cokernel(&t.phi)?;
        Ok(ProjectiveCriteria {
            y_projective: is_projective(&t.y)?.is_some(),
            phi_injective: t.phi.is_injective(),
            coker_projective: is_projective(kc.cokernel())?.is_some(),
        })
    }

    /// `X` injective, `Ker phi` injective, `phi` surjective.
    pub fn classify_injective_reph(&self, t: &TripleH) -> Result<InjectiveCriteria> {
        let kc = kernel_cokernel(&t.phi)?;
        Ok(InjectiveCriteria {
            x_injective: is_injective(&t.x)?,
            ker_injective: is_injective(kc.kernel())?,
            phi_surjective: t.phi.is_surjective(),
        })
    }

    /// Componentwise kernel and cokernel of a map of triples, with their
    /// mono and epi.
    pub fn triple_kernel_cokernel(
        &self,
        h: &TripleHom,
        s: &Triple,
        t: &Triple,
    ) -> Result<TripleKerCoker> {
        let su = self.to_module(s);
        let tu = self.to_module(t);
        let hu = self.hom_to_module(h, &su, &tu)?;
        let kc = kernel_cokernel(&hu)?;
        let (kt, kiso) = self.from_module(kc.kernel())?;
        let (ct, ciso) = self.from_module(kc.cokernel())?;
        let incl = kc.inclusion.compose(&kiso)?;
        let proj = ciso.inverse().expect("iso").compose(&kc.projection)?;
        let inclusion = self.module_to_hom(&incl, &kt, s)?;
        let projection = self.module_to_hom(&proj, t, &ct)?;
        Ok(TripleKerCoker {
            kernel: kt,
            inclusion,
            cokernel: ct,
            projection,
        })
    }
}

/// Output of [`Triangular::triple_kernel_cokernel`].
#[derive(Clone, Debug)]
pub struct TripleKerCoker {
    pub kernel: Triple,
    pub inclusion: TripleHom,
    pub cokernel: Triple,
    pub projection: TripleHom,
}

impl TripleH {
    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

/// Shared handle used by inventories.
pub type TriangularRef = Arc<Triangular>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::is_projective;

    fn ut2() -> Triangular {
        let f2 = Algebra::field(2).unwrap();
        Triangular::new(&Bimodule::regular(&f2)).unwrap()
    }

    #[test]
    fn lambda_of_fields_is_upper_triangular() {
        let t = ut2();
        assert_eq!(t.lambda().dim(), 3);
        assert!(t.lambda().validate().is_none());
        let f2 = Algebra::field(2).unwrap();
        let prod = Triangular::new(&Bimodule::zero(&f2, &f2)).unwrap();
        assert_eq!(prod.lambda().dim(), 2);
    }

    #[test]
    fn identity_triple_is_projective() {
        let t = ut2();
        let k = Module::regular(t.a());
        let tr = t.triple(&k, &k, Matrix::identity(2, 1)).unwrap();
        let u = t.to_module(&tr);
        assert_eq!(u.dim(), 2);
        assert!(is_projective(&u).unwrap().is_some());
        assert!(t.classify_projective_rep(&tr).unwrap().holds());
        let zero = t.triple(&k, &k, Matrix::zeros(2, 1, 1)).unwrap();
        let c = t.classify_projective_rep(&zero).unwrap();
        assert!(!c.phi_injective && !c.holds());
    }

    #[test]
    fn round_trip_through_lambda() {
        let t = ut2();
        let k = Module::regular(t.a());
        let tr = t.triple(&k, &k, Matrix::identity(2, 1)).unwrap();
        let (back, iso) = t.from_module(&t.to_module(&tr)).unwrap();
        assert!(iso.matrix.is_identity());
        assert_eq!(back.phi.matrix, tr.phi.matrix);
        let h = t.to_h(&tr).unwrap();
        assert!(h.phi.is_iso());
        assert_eq!(t.from_h(&h).unwrap().phi.matrix, tr.phi.matrix);
    }

    #[test]
    fn kernel_of_projection_onto_first_component() {
        let t = ut2();
        let k = Module::regular(t.a());
        let z = Module::zero(t.b());
        let s = t.triple(&k, &k, Matrix::zeros(2, 1, 1)).unwrap();
        let tt = t.triple(&k, &z, Matrix::zeros(2, 1, 0)).unwrap();
        let h = t
            .rep_hom(k.identity(), k.zero_map_to(&z), &s, &tt)
            .unwrap();
        let kc = t.triple_kernel_cokernel(&h, &s, &tt).unwrap();
        assert_eq!(kc.kernel.x.dim(), 0);
        assert_eq!(kc.kernel.y.dim(), 1);
        assert!(kc.cokernel.x.is_zero() && kc.cokernel.y.is_zero());
    }
}
