use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{extensions, kernel_cokernel, same_algebra, AlgebraRef, Module};
use crate::error::{Error, Result};
use crate::rep::{Triangular, TriangularRef, Triple, TripleH};

use super::inventory::{ExactInventory, IsoIndex, Lookup, Membership, SubcategorySpec};
use super::Budgets;

/// Which triple category: `E(X,M,Y)` (hom form, `phi` onto `Hom_A(M,X)`,
/// kernel in `Y`) or `M(X,M,Y)` (tensor form, `phi` injective, cokernel in `X`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    E,
    M,
}

/// A triple together with its `Lambda`-module and the kernel (side `E`)
/// or cokernel (side `M`) of its structure map.
#[derive(Clone)]
pub struct TripleObject {
    pub triple: Triple,
    pub triple_h: TripleH,
    pub module: Module,
    pub defect: Module,
}

pub type EObject = TripleObject;
pub type MObject = TripleObject;

impl fmt::Debug for TripleObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.triple_h)
    }
}

impl TripleObject {
    pub fn from_triple(tri: &Triangular, side: Side, triple: Triple) -> Result<Self> {
        let triple_h = tri.to_h(&triple)?;
        Self::assemble(tri, side, triple, triple_h)
    }

    pub fn from_triple_h(tri: &Triangular, side: Side, triple_h: TripleH) -> Result<Self> {
        let triple = tri.from_h(&triple_h)?;
        Self::assemble(tri, side, triple, triple_h)
    }

    fn assemble(tri: &Triangular, side: Side, triple: Triple, triple_h: TripleH) -> Result<Self> {
        let module = tri.to_module(&triple);
        let defect = match side {
            Side::E => kernel_cokernel(&triple_h.phi)?.kernel().clone(),
            Side::M => kernel_cokernel(&triple.phi)?.cokernel().clone(),
        };
        Ok(TripleObject {
            triple,
            triple_h,
            module,
            defect,
        })
    }

    pub fn x(&self) -> &Module {
        &self.triple.x
    }

    pub fn y(&self) -> &Module {
        &self.triple.y
    }
}

/// The defining clauses of membership, reported separately.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleMembership {
    pub side: Side,
    /// `X` in `X` (side `E`) or `Y` in `Y` (side `M`).
    pub component: Membership,
    /// `phi` surjective (side `E`) or injective (side `M`).
    pub structure_map: bool,
    /// `Ker phi` in `Y` (side `E`) or `Coker phi` in `X` (side `M`).
    pub defect: Membership,
}

impl TripleMembership {
    pub fn is_member(&self) -> bool {
        self.component.is_member() && self.structure_map && self.defect.is_member()
    }

    /// Collapses the clauses; the index of a member is left unresolved (0).
    fn summary(&self) -> Membership {
        let parts = [&self.component, &self.defect];
        if !self.structure_map {
            return Membership::non_member(match self.side {
                Side::E => "structure map is not surjective",
                Side::M => "structure map is not injective",
            });
        }
        for (part, what) in parts.iter().zip(["component", "defect"]) {
            if let Membership::NonMember { reason } = part {
                return Membership::non_member(format!("{what}: {reason}"));
            }
        }
        if parts.iter().any(|m| **m == Membership::OutOfCap) {
            return Membership::OutOfCap;
        }
        if parts.iter().any(|m| **m == Membership::Undecided) {
            return Membership::Undecided;
        }
        Membership::Member { index: 0 }
    }
}

/// `X in X`, `Ker(phi) in Y` and `phi` surjective.
pub fn e_membership(t: &TripleH, x: &SubcategorySpec, y: &SubcategorySpec) -> Result<TripleMembership> {
    let kc = kernel_cokernel(&t.phi)?;
    Ok(TripleMembership {
        side: Side::E,
        component: x.lookup(&t.x)?,
        structure_map: t.phi.is_surjective(),
        defect: y.lookup(kc.kernel())?,
    })
}

/// `Y in Y`, `Coker(phi) in X` and `phi` injective.
pub fn m_membership(t: &Triple, x: &SubcategorySpec, y: &SubcategorySpec) -> Result<TripleMembership> {
    let kc = kernel_cokernel(&t.phi)?;
    Ok(TripleMembership {
        side: Side::M,
        component: y.lookup(&t.y)?,
        structure_map: t.phi.is_injective(),
        defect: x.lookup(kc.cokernel())?,
    })
}

/// A finite inventory of `E(X,M,Y)` or `M(X,M,Y)`: every triple with
/// `dim X <= x_cap` and `dim Y <= y_cap`, up to isomorphism.
pub struct TripleCategory {
    side: Side,
    tri: TriangularRef,
    x: SubcategorySpec,
    y: SubcategorySpec,
    x_cap: usize,
    y_cap: usize,
    objects: Vec<TripleObject>,
    modules: Vec<Module>,
    labels: Vec<String>,
    index: IsoIndex,
    budgets: Budgets,
}

impl fmt::Debug for TripleCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TripleCategory({:?}, {} objects)", self.side, self.objects.len())
    }
}

struct Candidate {
    object: TripleObject,
    label: String,
}

impl TripleCategory {
    pub fn new(
        side: Side,
        tri: &TriangularRef,
        x: &SubcategorySpec,
        y: &SubcategorySpec,
        x_cap: usize,
        y_cap: usize,
        budgets: Budgets,
    ) -> Result<Self> {
        if !same_algebra(x.algebra(), tri.a()) || !same_algebra(y.algebra(), tri.b()) {
            return Err(Error::AlgebraMismatch("subcategories over the wrong algebras".into()));
        }
        let mut cat = TripleCategory {
            side,
            tri: tri.clone(),
            x: x.clone(),
            y: y.clone(),
            x_cap,
            y_cap,
            objects: Vec::new(),
            modules: Vec::new(),
            labels: Vec::new(),
            index: IsoIndex::default(),
            budgets,
        };
        let candidates = match side {
            Side::E => cat.e_candidates()?,
            Side::M => cat.m_candidates()?,
        };
        for c in candidates {
            if let Lookup::Absent = cat.index.find(&cat.modules, &c.object.module, budgets.iso)? {
                cat.index.push(&c.object.module);
                cat.modules.push(c.object.module.clone());
                cat.objects.push(c.object);
                cat.labels.push(c.label);
            }
        }
        Ok(cat)
    }

    /// Extensions `0 -> K -> Y -> Hom_A(M, X) -> 0` with `phi` the epi.
    fn e_candidates(&self) -> Result<Vec<Candidate>> {
        let tri = &*self.tri;
        let m = tri.bimodule();
        let mut jobs = Vec::new();
        for (i, xm) in self.x.members().iter().enumerate() {
            if xm.dim() > self.x_cap {
                continue;
            }
            let hom = m.hom_mx(xm)?;
            for (k, km) in self.y.members().iter().enumerate() {
                if hom.module.dim() + km.dim() <= self.y_cap {
                    jobs.push((i, k, hom.clone()));
                }
            }
        }
        let parts: Vec<Result<Vec<Candidate>>> = jobs
            .into_par_iter()
            .map(|(i, k, hom)| {
                let xm = &self.x.members()[i];
                let ext = extensions(&hom.module, &self.y.members()[k])?;
                let mut out = Vec::new();
                for (c, seq) in ext.all(self.budgets.ses)?.into_iter().enumerate() {
                    let t = tri.triple_h(xm, seq.middle(), seq.g.matrix.clone())?;
                    out.push(Candidate {
                        object: TripleObject::from_triple_h(tri, Side::E, t)?,
                        label: format!("({}, {}.{c})", self.x.labels()[i], self.y.labels()[k]),
                    });
                }
                Ok(out)
            })
            .collect();
        flatten(parts)
    }

    /// Extensions `0 -> M (x) Y -> X -> C -> 0` with `phi` the mono.
    fn m_candidates(&self) -> Result<Vec<Candidate>> {
        let tri = &*self.tri;
        let m = tri.bimodule();
        let mut jobs = Vec::new();
        for (j, ym) in self.y.members().iter().enumerate() {
            if ym.dim() > self.y_cap {
                continue;
            }
            let tensor = m.tensor(ym)?;
            for (c, cm) in self.x.members().iter().enumerate() {
                if tensor.module.dim() + cm.dim() <= self.x_cap {
                    jobs.push((j, c, tensor.module.clone()));
                }
            }
        }
        let parts: Vec<Result<Vec<Candidate>>> = jobs
            .into_par_iter()
            .map(|(j, c, t)| {
                let ym = &self.y.members()[j];
                let ext = extensions(&self.x.members()[c], &t)?;
                let mut out = Vec::new();
                for (k, seq) in ext.all(self.budgets.ses)?.into_iter().enumerate() {
                    let t = tri.triple(seq.middle(), ym, seq.f.matrix.clone())?;
                    out.push(Candidate {
                        object: TripleObject::from_triple(tri, Side::M, t)?,
                        label: format!("[{}.{k}; {}]", self.x.labels()[c], self.y.labels()[j]),
                    });
                }
                Ok(out)
            })
            .collect();
        flatten(parts)
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn triangular(&self) -> &TriangularRef {
        &self.tri
    }

    pub fn x(&self) -> &SubcategorySpec {
        &self.x
    }

    pub fn y(&self) -> &SubcategorySpec {
        &self.y
    }

    pub fn caps(&self) -> (usize, usize) {
        (self.x_cap, self.y_cap)
    }

    pub fn entries(&self) -> &[TripleObject] {
        &self.objects
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// The defining clauses for a `Lambda`-module read as a triple.
    pub fn clauses(&self, u: &Module) -> Result<(TripleObject, TripleMembership)> {
        let (t, _) = self.tri.from_module(u)?;
        let obj = TripleObject::from_triple(&self.tri, self.side, t)?;
        let clauses = match self.side {
            Side::E => e_membership(&obj.triple_h, &self.x, &self.y)?,
            Side::M => m_membership(&obj.triple, &self.x, &self.y)?,
        };
        Ok((obj, clauses))
    }

    /// Index of an object known to lie in the category within the caps.
    pub fn find(&self, u: &Module) -> Result<Option<usize>> {
        Ok(match self.index.find(&self.modules, u, self.budgets.iso)? {
            Lookup::Found(i) => Some(i),
            _ => None,
        })
    }

}

fn flatten(parts: Vec<Result<Vec<Candidate>>>) -> Result<Vec<Candidate>> {
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

impl ExactInventory for TripleCategory {
    fn ambient(&self) -> &AlgebraRef {
        self.tri.lambda()
    }

    fn objects(&self) -> &[Module] {
        &self.modules
    }

    fn membership(&self, u: &Module) -> Result<Membership> {
        let (obj, clauses) = self.clauses(u)?;
        if obj.x().dim() > self.x_cap || obj.y().dim() > self.y_cap {
            let s = clauses.summary();
            return Ok(match s {
                Membership::NonMember { .. } => s,
                _ => Membership::OutOfCap,
            });
        }
        match clauses.summary() {
            Membership::Member { .. } => match self.find(u)? {
                Some(index) => Ok(Membership::Member { index }),
                None => Err(Error::Invalid(format!(
                    "triple {:?} satisfies the defining clauses but is missing from the inventory",
                    obj
                ))),
            },
            other => Ok(other),
        }
    }

    fn sum_fits(&self, i: usize, j: usize) -> bool {
        let (a, b) = (&self.objects[i], &self.objects[j]);
        a.x().dim() + b.x().dim() <= self.x_cap && a.y().dim() + b.y().dim() <= self.y_cap
    }

    fn dim_bound(&self) -> usize {
        self.x_cap + self.y_cap
    }

    fn label(&self, i: usize) -> String {
        self.labels[i].clone()
    }

    fn budgets(&self) -> &Budgets {
        &self.budgets
    }
}

#[cfg(test)]
mod tests {
    use std::time::Instant;

    use super::*;
    use crate::algebra::Algebra;
    use crate::bimodule::Bimodule;
    use crate::linalg::Matrix;

    fn simple(a: &AlgebraRef) -> Module {
        let p = a.modulus();
        Module::new(a, 1, vec![Matrix::identity(p, 1), Matrix::zeros(p, 1, 1)]).unwrap()
    }

    fn frob() -> (TriangularRef, SubcategorySpec) {
        let a = Algebra::truncated_polynomial(2, 2).unwrap();
        let tri = std::sync::Arc::new(Triangular::new(&Bimodule::regular(&a)).unwrap());
        let all = SubcategorySpec::all_up_to_cap(&a, vec![simple(&a), Module::regular(&a)], 4).unwrap();
        (tri, all)
    }

    #[test]
    fn dual_numbers_inventories() {
        let (tri, all) = frob();
        let t = Instant::now();
        let e = TripleCategory::new(Side::E, &tri, &all, &all, 4, 4, Budgets::default()).unwrap();
        assert_eq!(e.len(), 39);
        let m = TripleCategory::new(Side::M, &tri, &all, &all, 4, 4, Budgets::default()).unwrap();
        assert_eq!(m.len(), 39);
        eprintln!("inventories built in {:?}", t.elapsed());
        for u in e.objects() {
            assert!(e.membership(u).unwrap().is_member());
        }
    }
}
