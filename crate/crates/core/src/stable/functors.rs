use std::fmt;

use serde::{Serialize, Serializer};

use crate::algebra::{hom_space, kernel_cokernel, KerCoker, Module, ModuleHom};
use crate::bimodule::{HomMX, Tensor};
use crate::diagram::{induced_on_cokernels, induced_on_kernels};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rep::{Triangular, TriangularRef, Triple};

/// Where a functor's arguments live.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Domain {
    /// `A`-modules.
    A,
    /// `B`-modules.
    B,
    /// Standard `Lambda`-modules (triples).
    Lambda,
}

/// The functors between triples and their components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FunctorName {
    /// `X -> (X, Hom_A(M, X))_1`.
    P,
    /// `Y -> (0, Y)_0`.
    Q,
    /// First component.
    BigP,
    /// Second component.
    BigQ,
    /// `(X, Y)_phi -> Ker(phi)`.
    Kernel,
    /// `X -> [X; 0]_0`.
    PM,
    /// `Y -> [M (x) Y; Y]_1`.
    QM,
    BigPM,
    BigQM,
    /// `[X; Y]_phi -> Coker(phi)`.
    Cokernel,
}

impl FunctorName {
    pub const ALL: [FunctorName; 10] = [
        FunctorName::P,
        FunctorName::Q,
        FunctorName::BigP,
        FunctorName::BigQ,
        FunctorName::Kernel,
        FunctorName::PM,
        FunctorName::QM,
        FunctorName::BigPM,
        FunctorName::BigQM,
        FunctorName::Cokernel,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            FunctorName::P => "p",
            FunctorName::Q => "q",
            FunctorName::BigP => "P",
            FunctorName::BigQ => "Q",
            FunctorName::Kernel => "ℚ",
            FunctorName::PM => "p_M",
            FunctorName::QM => "q_M",
            FunctorName::BigPM => "P_M",
            FunctorName::BigQM => "Q_M",
            FunctorName::Cokernel => "ℙ_M",
        }
    }

    /// Accepts the symbol or an ASCII spelling (`QQ` for `ℚ`, `PP_M` for `ℙ_M`).
    pub fn parse(s: &str) -> Option<FunctorName> {
        let s = match s {
            "QQ" => "ℚ",
            "PP_M" => "ℙ_M",
            other => other,
        };
        FunctorName::ALL.into_iter().find(|f| f.symbol() == s)
    }

    pub fn source(self) -> Domain {
        match self {
            FunctorName::P | FunctorName::PM => Domain::A,
            FunctorName::Q | FunctorName::QM => Domain::B,
            _ => Domain::Lambda,
        }
    }

    pub fn target(self) -> Domain {
        match self {
            FunctorName::P | FunctorName::Q | FunctorName::PM | FunctorName::QM => Domain::Lambda,
            FunctorName::BigP | FunctorName::BigPM | FunctorName::Cokernel => Domain::A,
            FunctorName::BigQ | FunctorName::BigQM | FunctorName::Kernel => Domain::B,
        }
    }
}

impl fmt::Display for FunctorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl Serialize for FunctorName {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.symbol())
    }
}

/// Reads the triple off a standard `Lambda`-module: `e_A` must act as the
/// projection onto the leading coordinates.
pub fn split(tri: &Triangular, u: &Module) -> Result<Triple> {
    let e = u.act(&tri.e_a());
    let nx = e.rank();
    let p = tri.modulus();
    let expected = Matrix::block_diag(&[&Matrix::identity(p, nx), &Matrix::zeros(p, u.dim() - nx, u.dim() - nx)]);
    if e != expected {
        return Err(Error::Invalid("not a standard Lambda-module".into()));
    }
    tri.block_triple(u, nx)
}

/// An object image together with what the morphism map reuses.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub image: Module,
    data: Data,
}

#[derive(Clone, Debug)]
enum Data {
    Plain,
    Hom(HomMX),
    Tensor(Tensor),
    Split(Standard, Option<KerCoker>),
}

/// A `Lambda`-module's triple, with the change of basis to its standard
/// module when it is not already standard.
#[derive(Clone, Debug)]
struct Standard {
    triple: Triple,
    module: Module,
    /// `(to standard, from standard)`.
    basis: Option<(Matrix, Matrix)>,
}

impl Standard {
    fn of(tri: &Triangular, u: &Module) -> Result<Self> {
        if let Ok(triple) = split(tri, u) {
            return Ok(Standard {
                triple,
                module: u.clone(),
                basis: None,
            });
        }
        let (triple, iso) = tri.from_module(u)?;
        let inv = iso.inverse().expect("isomorphism").matrix;
        Ok(Standard {
            triple,
            module: iso.source.clone(),
            basis: Some((inv, iso.matrix)),
        })
    }

    fn to_standard(&self, m: &Matrix) -> Matrix {
        match &self.basis {
            Some((to, _)) => to.mul(m),
            None => m.clone(),
        }
    }

    fn from_standard(&self, m: &Matrix) -> Matrix {
        match &self.basis {
            Some((_, from)) => m.mul(from),
            None => m.clone(),
        }
    }
}

/// One of the ten functors, acting on objects and morphisms.
#[derive(Clone, Debug)]
pub struct FunctorTable {
    pub name: FunctorName,
    tri: TriangularRef,
    /// Sends every non-invertible map to zero; a negative control.
    corrupt: bool,
}

impl FunctorTable {
    pub fn new(tri: &TriangularRef, name: FunctorName) -> Self {
        FunctorTable {
            name,
            tri: tri.clone(),
            corrupt: false,
        }
    }

    /// The same object map with a broken morphism map.
    pub fn corrupted(&self) -> Self {
        FunctorTable {
            corrupt: true,
            ..self.clone()
        }
    }

    pub fn triangular(&self) -> &TriangularRef {
        &self.tri
    }

    pub fn object(&self, u: &Module) -> Result<Module> {
        Ok(self.prepare(u)?.image)
    }

    /// The image of `u` with the data the morphism map needs.
    pub fn prepare(&self, u: &Module) -> Result<Prepared> {
        let tri = &*self.tri;
        let m = tri.bimodule();
        let p = tri.modulus();
        Ok(match self.name {
            FunctorName::P => {
                let h = m.hom_mx(u)?;
                let image = tri.h_to_module(&tri.triple_h(u, &h.module, Matrix::identity(p, h.module.dim()))?)?;
                Prepared { image, data: Data::Hom(h) }
            }
            FunctorName::Q => {
                let t = m.tensor(u)?;
                let image = tri.to_module(&tri.triple(&Module::zero(tri.a()), u, Matrix::zeros(p, 0, t.module.dim()))?);
                Prepared { image, data: Data::Plain }
            }
            FunctorName::PM => Prepared {
                image: tri.to_module(&tri.triple(u, &Module::zero(tri.b()), Matrix::zeros(p, u.dim(), 0))?),
                data: Data::Plain,
            },
            FunctorName::QM => {
                let t = m.tensor(u)?;
                let image = tri.to_module(&tri.triple(&t.module, u, Matrix::identity(p, t.module.dim()))?);
                Prepared { image, data: Data::Tensor(t) }
            }
            FunctorName::BigP | FunctorName::BigPM => {
                let s = Standard::of(tri, u)?;
                Prepared { image: s.triple.x.clone(), data: Data::Split(s, None) }
            }
            FunctorName::BigQ | FunctorName::BigQM => {
                let s = Standard::of(tri, u)?;
                Prepared { image: s.triple.y.clone(), data: Data::Split(s, None) }
            }
            FunctorName::Kernel => {
                let s = Standard::of(tri, u)?;
                let kc = kernel_cokernel(&tri.to_h(&s.triple)?.phi)?;
                Prepared { image: kc.kernel().clone(), data: Data::Split(s, Some(kc)) }
            }
            FunctorName::Cokernel => {
                let s = Standard::of(tri, u)?;
                let kc = kernel_cokernel(&s.triple.phi)?;
                Prepared { image: kc.cokernel().clone(), data: Data::Split(s, Some(kc)) }
            }
        })
    }

    pub fn morphism(&self, f: &ModuleHom) -> Result<ModuleHom> {
        self.morphism_prepared(f, &self.prepare(&f.source)?, &self.prepare(&f.target)?)
    }

    /// The morphism map with both ends already prepared.
    pub fn morphism_prepared(&self, f: &ModuleHom, s: &Prepared, t: &Prepared) -> Result<ModuleHom> {
        if self.corrupt && !f.is_iso() {
            return Ok(s.image.zero_map_to(&t.image));
        }
        let tri = &*self.tri;
        let m = tri.bimodule();
        let matrix = match (&s.data, &t.data) {
            (Data::Plain, Data::Plain) => f.matrix.clone(),
            (Data::Hom(hs), Data::Hom(ht)) => Matrix::block_diag(&[&f.matrix, &m.hom_map(f, hs, ht).matrix]),
            (Data::Tensor(ts), Data::Tensor(tt)) => {
                Matrix::block_diag(&[&m.tensor_map(f, ts, tt).matrix, &f.matrix])
            }
            (Data::Split(st, ks), Data::Split(tt, kt)) => {
                let std = tt.to_standard(&st.from_standard(&f.matrix));
                let std = ModuleHom::new(&st.module, &tt.module, std)?;
                let h = tri.module_to_hom(&std, &st.triple, &tt.triple)?;
                match (self.name, ks, kt) {
                    (FunctorName::BigP | FunctorName::BigPM, _, _) => h.f.matrix,
                    (FunctorName::BigQ | FunctorName::BigQM, _, _) => h.g.matrix,
                    (FunctorName::Kernel, Some(ks), Some(kt)) => induced_on_kernels(ks, kt, &h.g)?.matrix,
                    (FunctorName::Cokernel, Some(ks), Some(kt)) => induced_on_cokernels(ks, kt, &h.f)?.matrix,
                    _ => unreachable!("prepared by this functor"),
                }
            }
            _ => return Err(Error::Invalid("objects prepared by a different functor".into())),
        };
        ModuleHom::new(&s.image, &t.image, matrix)
    }

    /// Identities go to identities and basis composites to composites,
    /// over every ordered triple of objects; returns the first failure.
    pub fn check_functorial(&self, objects: &[Module]) -> Result<Option<String>> {
        use rayon::prelude::*;
        let prepared: Vec<Prepared> = objects.par_iter().map(|u| self.prepare(u)).collect::<Result<_>>()?;
        for (i, u) in objects.iter().enumerate() {
            let id = self.morphism_prepared(&u.identity(), &prepared[i], &prepared[i])?;
            if !id.matrix.is_identity() {
                return Ok(Some(format!("{} does not preserve the identity of object {i}", self.name)));
            }
        }
        let homs: Vec<Vec<Vec<ModuleHom>>> = objects
            .par_iter()
            .map(|u| objects.iter().map(|v| Ok(hom_space(u, v)?.homs())).collect())
            .collect::<Result<_>>()?;
        let n = objects.len();
        let failures: Vec<Option<String>> = (0..n)
            .into_par_iter()
            .map(|i| {
                for j in 0..n {
                    for k in 0..n {
                        let fb: Vec<ModuleHom> = homs[j][k]
                            .iter()
                            .map(|b| self.morphism_prepared(b, &prepared[j], &prepared[k]))
                            .collect::<Result<_>>()?;
                        for a in &homs[i][j] {
                            let fa = self.morphism_prepared(a, &prepared[i], &prepared[j])?;
                            for (b, fb) in homs[j][k].iter().zip(&fb) {
                                let lhs = self.morphism_prepared(&b.compose(a)?, &prepared[i], &prepared[k])?;
                                if lhs.matrix != fb.matrix.mul(&fa.matrix) {
                                    return Ok(Some(format!(
                                        "{} does not preserve a composite {i} -> {j} -> {k}",
                                        self.name
                                    )));
                                }
                            }
                        }
                    }
                }
                Ok(None)
            })
            .collect::<Result<_>>()?;
        Ok(failures.into_iter().flatten().next())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fix_frob;
    use crate::subcat::Side;

    #[test]
    fn definitions_on_small_objects() {
        let fx = fix_frob();
        let tri = fx.tri.clone();
        let f = |n| FunctorTable::new(&tri, n);
        let zero_b = Module::zero(tri.b());
        assert!(f(FunctorName::Q).object(&zero_b).unwrap().is_zero());
        for x in fx.x.members() {
            let px = f(FunctorName::P).object(x).unwrap();
            assert!(f(FunctorName::Kernel).object(&px).unwrap().is_zero());
            assert_eq!(&f(FunctorName::BigP).object(&px).unwrap(), x);
            assert!(f(FunctorName::Cokernel).object(&f(FunctorName::QM).object(x).unwrap()).unwrap().is_zero());
        }
        for y in fx.y.members() {
            let qy = f(FunctorName::Q).object(y).unwrap();
            assert!(f(FunctorName::BigP).object(&qy).unwrap().is_zero());
            assert_eq!(&f(FunctorName::Kernel).object(&qy).unwrap(), y);
        }
    }

    #[test]
    fn functorial_on_frob_triples() {
        let fx = fix_frob();
        let cat = fx.category(Side::E).unwrap();
        let objects: Vec<Module> = cat.entries().iter().take(12).map(|e| e.module.clone()).collect();
        for name in [FunctorName::BigP, FunctorName::BigQ, FunctorName::Kernel, FunctorName::Cokernel] {
            assert_eq!(FunctorTable::new(&fx.tri, name).check_functorial(&objects).unwrap(), None);
        }
        for name in [FunctorName::P, FunctorName::PM] {
            assert_eq!(FunctorTable::new(&fx.tri, name).check_functorial(fx.x.members()).unwrap(), None);
        }
        for name in [FunctorName::Q, FunctorName::QM] {
            assert_eq!(FunctorTable::new(&fx.tri, name).check_functorial(fx.y.members()).unwrap(), None);
        }
    }
}
