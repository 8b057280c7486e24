use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{hom_space, kernel_cokernel, HomSpace, Module, ModuleHom};
use crate::error::{Error, Result};
use crate::linalg::{all_vectors, field_power, Matrix, Subspace};
use crate::subcat::{ExactInventory, ExactStructure};

/// `Hom(u, v)` with the subspace `P(u, v)` of maps factoring through a
/// projective object, in coordinates of the hom basis.
#[derive(Clone, Debug)]
pub struct StableHom {
    pub hom: HomSpace,
    pub projective: Subspace,
}

impl StableHom {
    pub fn dim(&self) -> usize {
        self.hom.dim() - self.projective.dim()
    }

    /// Coordinates of `f`, which must lie in the hom space.
    pub fn coords(&self, f: &Matrix) -> Result<Matrix> {
        let c = self
            .hom
            .coords(f)
            .ok_or_else(|| Error::Invalid("map is not a module map between these objects".into()))?;
        Ok(Matrix::column_vector(f.modulus(), &c))
    }

    pub fn is_stably_zero(&self, f: &Matrix) -> Result<bool> {
        Ok(self.projective.contains(&self.coords(f)?))
    }

    /// Hom basis indices completing `P(u, v)`: representatives of a basis
    /// of the stable hom space.
    pub fn complement(&self) -> Vec<usize> {
        let pivots = self.projective.pivots();
        (0..self.hom.dim()).filter(|i| !pivots.contains(i)).collect()
    }
}

/// The cokernel of an injective hull, together with a second embedding
/// used to confirm the stable class does not depend on the choice.
#[derive(Clone, Debug)]
pub struct Suspension {
    pub object: usize,
    pub injective: usize,
    pub embedding: ModuleHom,
    pub projection: ModuleHom,
    /// `Some(true)` when a second embedding gives a stably isomorphic
    /// cokernel, `None` when no second embedding fits in the inventory.
    pub second_agrees: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RouteCheck {
    pub pairs: usize,
    pub compared: usize,
    pub disagreements: Vec<(usize, usize)>,
}

/// The stable category of a Frobenius inventory.
pub struct StableCategory<'a, I: ExactInventory + ?Sized> {
    pub inv: &'a I,
    pub es: &'a ExactStructure,
    projectives: Vec<usize>,
    /// `Hom(object i, projective k)` and `Hom(projective k, object j)`.
    cache: OnceLock<(Vec<Vec<HomSpace>>, Vec<Vec<HomSpace>>)>,
}

impl<'a, I: ExactInventory + ?Sized> StableCategory<'a, I> {
    /// Refuses inventories whose projectives and injectives differ.
    pub fn new(inv: &'a I, es: &'a ExactStructure) -> Result<Self> {
        if es.projective != es.injective {
            return Err(Error::Refused("projective and injective objects differ".into()));
        }
        let projectives = es
            .projectives()
            .into_iter()
            .filter(|&i| !inv.objects()[i].is_zero())
            .collect();
        Ok(StableCategory {
            inv,
            es,
            projectives,
            cache: OnceLock::new(),
        })
    }

    pub fn objects(&self) -> &[Module] {
        self.inv.objects()
    }

    pub fn projective_objects(&self) -> &[usize] {
        &self.projectives
    }

    pub fn is_projective(&self, i: usize) -> bool {
        self.es.projective[i]
    }

    /// `P(u, v)` as the span of composites through every projective object.
    pub fn stable_hom(&self, u: &Module, v: &Module) -> Result<StableHom> {
        let mut parts = Vec::new();
        for &q in &self.projectives {
            let obj = &self.objects()[q];
            let into = hom_space(u, obj)?;
            if into.dim() == 0 {
                continue;
            }
            parts.push((into, hom_space(obj, v)?));
        }
        Self::assemble(u, v, parts.iter().map(|(a, b)| (a, b)))
    }

    fn assemble<'h>(
        u: &Module,
        v: &Module,
        parts: impl Iterator<Item = (&'h HomSpace, &'h HomSpace)>,
    ) -> Result<StableHom> {
        let hom = hom_space(u, v)?;
        let p = u.modulus();
        let mut cols = Vec::new();
        for (into, out) in parts {
            for b in out.basis() {
                for a in into.basis() {
                    let c = hom.coords(&b.mul(a)).expect("composite of module maps");
                    cols.push(Matrix::column_vector(p, &c));
                }
            }
        }
        let projective = if cols.is_empty() {
            Subspace::zero(p, hom.dim())
        } else {
            let refs: Vec<&Matrix> = cols.iter().collect();
            Subspace::from_columns(&Matrix::hstack(&refs))
        };
        Ok(StableHom { hom, projective })
    }

    /// [`StableCategory::stable_hom`] between inventory objects, reusing
    /// hom spaces to and from the projectives.
    pub fn stable_hom_idx(&self, i: usize, j: usize) -> Result<StableHom> {
        let (into, out) = self.cache()?;
        let parts = (0..self.projectives.len()).map(|k| (&into[i][k], &out[k][j]));
        Self::assemble(&self.objects()[i], &self.objects()[j], parts)
    }

    fn cache(&self) -> Result<&(Vec<Vec<HomSpace>>, Vec<Vec<HomSpace>>)> {
        if let Some(c) = self.cache.get() {
            return Ok(c);
        }
        let objs = self.objects();
        let into = objs
            .par_iter()
            .map(|u| self.projectives.iter().map(|&k| hom_space(u, &objs[k])).collect())
            .collect::<Result<Vec<Vec<HomSpace>>>>()?;
        let out = self
            .projectives
            .par_iter()
            .map(|&k| objs.iter().map(|v| hom_space(&objs[k], v)).collect())
            .collect::<Result<Vec<Vec<HomSpace>>>>()?;
        Ok(self.cache.get_or_init(|| (into, out)))
    }

    /// `P(u, v)` as the image of `Hom(u, P) -> Hom(u, v)` along the chosen
    /// projective cover `P -> v`; `None` when the cover exceeds the caps.
    pub fn via_cover(&self, u: &Module, j: usize) -> Result<Option<Subspace>> {
        let Some(cover) = self.es.projective_cover(self.inv, j)? else {
            return Ok(None);
        };
        let hom = hom_space(u, &self.objects()[j])?;
        let into = hom_space(u, &cover.map.source)?;
        let p = u.modulus();
        let cols: Vec<Matrix> = into
            .basis()
            .iter()
            .map(|a| Matrix::column_vector(p, &hom.coords(&cover.map.matrix.mul(a)).expect("module map")))
            .collect();
        if cols.is_empty() {
            return Ok(Some(Subspace::zero(p, hom.dim())));
        }
        let refs: Vec<&Matrix> = cols.iter().collect();
        Ok(Some(Subspace::from_columns(&Matrix::hstack(&refs))))
    }

    /// Compares the two computations of `P(u, v)` on every pair of objects
    /// whose target has a cover inside the inventory.
    pub fn check_routes(&self) -> Result<RouteCheck> {
        let n = self.objects().len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        let results: Vec<Option<bool>> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let Some(route1) = self.via_cover(&self.objects()[i], j)? else {
                    return Ok(None);
                };
                Ok(Some(route1 == self.stable_hom_idx(i, j)?.projective))
            })
            .collect::<Result<_>>()?;
        Ok(RouteCheck {
            pairs: pairs.len(),
            compared: results.iter().filter(|r| r.is_some()).count(),
            disagreements: pairs
                .iter()
                .zip(&results)
                .filter(|(_, r)| **r == Some(false))
                .map(|(p, _)| *p)
                .collect(),
        })
    }

    /// `g f` for `f: u -> v`, `g: v -> w` is well defined on cosets: a
    /// stably zero factor gives a stably zero composite.
    pub fn compose_is_stably_zero(&self, f: &ModuleHom, g: &ModuleHom) -> Result<bool> {
        let sh = self.stable_hom(&f.source, &g.target)?;
        sh.is_stably_zero(&g.matrix.mul(&f.matrix))
    }

    /// Stable isomorphism by search over stable maps `u -> v`, solving for
    /// a left inverse and testing it on the other side.
    pub fn stable_iso(&self, u: &Module, v: &Module, budget: u64) -> Result<Option<(ModuleHom, ModuleHom)>> {
        let uv = self.stable_hom(u, v)?;
        let vu = self.stable_hom(v, u)?;
        let uu = self.stable_hom(u, u)?;
        let vv = self.stable_hom(v, v)?;
        if uv.dim() != vu.dim() || uu.dim() != vv.dim() {
            return Ok(None);
        }
        let p = u.modulus();
        if uu.dim() == 0 {
            // Both objects are stably zero.
            return Ok(Some((zero_map(u, v), zero_map(v, u))));
        }
        let reps = uv.complement();
        if field_power(p, reps.len()) > budget {
            return Err(Error::BudgetExceeded(format!(
                "stable isomorphism search over {}^{} maps",
                p,
                reps.len()
            )));
        }
        let id_u = Matrix::identity(p, u.dim());
        let id_v = Matrix::identity(p, v.dim());
        for coeffs in all_vectors(p, reps.len()) {
            let mut full = vec![0; uv.hom.dim()];
            for (k, &r) in reps.iter().enumerate() {
                full[r] = coeffs[k];
            }
            let f = uv.hom.combine(&full);
            // g f = 1 + (element of P(u, u)): linear in g and the correction.
            let Some(g) = solve_inverse(&vu, &uu, &f, &id_u)? else {
                continue;
            };
            if vv.is_stably_zero(&f.mul(&g).sub(&id_v))? {
                return Ok(Some((
                    ModuleHom::new(u, v, f)?,
                    ModuleHom::new(v, u, g)?,
                )));
            }
        }
        Ok(None)
    }

    /// A stable inverse of `f` when `f` is a stable isomorphism.
    pub fn stable_inverse(&self, f: &ModuleHom) -> Result<Option<ModuleHom>> {
        let (u, v) = (&f.source, &f.target);
        let vu = self.stable_hom(v, u)?;
        let uu = self.stable_hom(u, u)?;
        let vv = self.stable_hom(v, v)?;
        let id_u = Matrix::identity(u.modulus(), u.dim());
        let id_v = Matrix::identity(u.modulus(), v.dim());
        let Some(g) = solve_inverse(&vu, &uu, &f.matrix, &id_u)? else {
            return Ok(None);
        };
        if !vv.is_stably_zero(&f.matrix.mul(&g).sub(&id_v))? {
            return Ok(None);
        }
        Ok(Some(ModuleHom::new(v, u, g)?))
    }

    /// Cokernel of the injective hull of object `i`, with a second hull
    /// (through the next injective that admits one) compared stably.
    pub fn suspension(&self, i: usize, budget: u64) -> Result<Suspension> {
        let hulls = self.es.injective_hulls(self.inv, i, 2)?;
        let first = hulls
            .first()
            .ok_or_else(|| Error::OutOfCap(format!("no injective hull of {} inside the inventory", self.inv.label(i))))?;
        let projection = kernel_cokernel(&first.map)?.projection;
        let second_agrees = match hulls.get(1) {
            Some(second) => Some(
                self.stable_iso(&self.objects()[first.kernel], &self.objects()[second.kernel], budget)?
                    .is_some(),
            ),
            None => None,
        };
        Ok(Suspension {
            object: first.kernel,
            injective: first.object,
            embedding: first.map.clone(),
            projection,
            second_agrees,
        })
    }
}

fn zero_map(u: &Module, v: &Module) -> ModuleHom {
    u.zero_map_to(v)
}

/// Some `g` in `Hom(v, u)` with `g f - 1` in `P(u, u)`.
fn solve_inverse(vu: &StableHom, uu: &StableHom, f: &Matrix, id: &Matrix) -> Result<Option<Matrix>> {
    let p = f.modulus();
    let mut cols: Vec<Matrix> = vu.hom.basis().iter().map(|g| g.mul(f).vectorize()).collect();
    let proj = uu.projective.basis_columns();
    for k in 0..proj.cols() {
        let c: Vec<u32> = proj.column(k).entries().to_vec();
        cols.push(uu.hom.combine(&c).vectorize());
    }
    if cols.is_empty() {
        return Ok(id.is_zero().then(|| Matrix::zeros(p, f.cols(), f.rows())));
    }
    let refs: Vec<&Matrix> = cols.iter().collect();
    let system = Matrix::hstack(&refs);
    Ok(crate::linalg::solve(&system, &id.vectorize())?.map(|s| {
        let coeffs = &s.particular.entries()[..vu.hom.dim()];
        vu.hom.combine(coeffs)
    }))
}
