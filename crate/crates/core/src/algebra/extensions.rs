use crate::error::{Error, Result};
use crate::linalg::{all_vectors, field_power, solve, Matrix, Subspace};

use super::homological::syzygy;
use super::iso::enumerate_summands;
use super::module::{hom_space, kernel_cokernel, HomSpace, Module, ModuleHom, ShortExactSeq};
use super::AlgebraRef;

/// `Ext^1(z, x)` presented as `Hom(Om z, x)` modulo maps extending to the
/// cover, with one explicit extension per class.
#[derive(Clone, Debug)]
pub struct Extensions {
    cover: ShortExactSeq,
    target: Module,
    cocycles: HomSpace,
    complement: Vec<usize>,
}

/// Extensions `0 -> x -> E -> z -> 0`.
pub fn extensions(z: &Module, x: &Module) -> Result<Extensions> {
    let cover = syzygy(z)?;
    let cocycles = hom_space(cover.left(), x)?;
    let ambient = hom_space(cover.middle(), x)?;
    let p = x.modulus();
    let mut restricted = Vec::new();
    for h in ambient.basis() {
        let c = cocycles
            .coords(&h.mul(&cover.f.matrix))
            .ok_or_else(|| Error::Invalid("restriction is not a module map".into()))?;
        restricted.push(c);
    }
    let h = cocycles.dim();
    let rows = Matrix::from_fn(p, restricted.len(), h, |r, c| restricted[r][c]);
    let coboundaries = Subspace::from_rows(&rows);
    let complement = (0..h)
        .filter(|i| !coboundaries.pivots().contains(i))
        .collect();
    Ok(Extensions {
        cover,
        target: x.clone(),
        cocycles,
        complement,
    })
}

impl Extensions {
    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn class_count(&self) -> u64 {
        field_power(self.target.modulus(), self.dim())
    }

    /// The cocycle `Om z -> x` representing the class with these coordinates.
    pub fn cocycle(&self, coeffs: &[u32]) -> ModuleHom {
        let mut full = vec![0; self.cocycles.dim()];
        for (&i, &c) in self.complement.iter().zip(coeffs) {
            full[i] = c;
        }
        ModuleHom::new_internal(self.cover.left(), &self.target, self.cocycles.combine(&full))
    }

    /// Pushout of the syzygy sequence along the cocycle.
    pub fn realize(&self, coeffs: &[u32]) -> Result<ShortExactSeq> {
        let c = self.cocycle(coeffs);
        let x = &self.target;
        let nx = x.dim();
        let sum = x.direct_sum(self.cover.middle());
        let rel = Matrix::vstack(&[&c.matrix, &self.cover.f.matrix.neg()]);
        let rel = ModuleHom::new_internal(self.cover.left(), &sum, rel);
        let proj = kernel_cokernel(&rel)?.projection;
        let e = proj.target.clone();
        let incl = ModuleHom::new_internal(x, &e, proj.matrix.submatrix(0, 0, e.dim(), nx));
        let z = self.cover.right();
        let rhs = Matrix::hstack(&[&Matrix::zeros(x.modulus(), z.dim(), nx), &self.cover.g.matrix]);
        let epi = solve(&proj.matrix.transpose(), &rhs.transpose())?
            .ok_or_else(|| Error::Invalid("no induced map from the pushout".into()))?
            .particular
            .transpose();
        debug_assert_eq!(epi.mul(&proj.matrix), rhs);
        ShortExactSeq::new(incl, ModuleHom::new_internal(&e, z, epi))
    }

    /// One realized extension per class, the split class first.
    pub fn all(&self, budget: u64) -> Result<Vec<ShortExactSeq>> {
        if self.class_count() > budget {
            return Err(Error::BudgetExceeded(format!(
                "{} extension classes exceed the budget {budget}",
                self.class_count()
            )));
        }
        all_vectors(self.target.modulus(), self.dim())
            .map(|c| self.realize(&c))
            .collect()
    }
}

/// Nonzero summands of `x` without proper nonzero summands, up to
/// isomorphism.
pub fn indecomposable_summands(x: &Module, budget: u64) -> Result<Vec<Module>> {
    let mut out = Vec::new();
    for s in enumerate_summands(x, budget)? {
        if !s.is_zero() && enumerate_summands(&s, budget)?.len() == 2 {
            out.push(s);
        }
    }
    Ok(out)
}

pub fn indecomposable_projectives(a: &AlgebraRef, budget: u64) -> Result<Vec<Module>> {
    indecomposable_summands(&Module::regular(a), budget)
}

/// Duals of the indecomposable projectives of the opposite algebra.
pub fn indecomposable_injectives(a: &AlgebraRef, budget: u64) -> Result<Vec<Module>> {
    indecomposable_projectives(&a.opposite(), budget)?
        .iter()
        .map(|p| p.dual().rebase(a))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::{ext_dim, is_injective, is_isomorphic, Algebra};
    use super::*;

    fn simple(a: &AlgebraRef) -> Module {
        let p = a.modulus();
        let zero = Matrix::zeros(p, 1, 1);
        let mut action = vec![Matrix::identity(p, 1)];
        action.extend((1..a.dim()).map(|_| zero.clone()));
        Module::new(a, 1, action).unwrap()
    }

    #[test]
    fn simple_by_simple_over_dual_numbers() {
        let a = Algebra::truncated_polynomial(2, 2).unwrap();
        let s = simple(&a);
        let ext = extensions(&s, &s).unwrap();
        assert_eq!(ext.dim(), ext_dim(&s, &s, 1).unwrap());
        let seqs = ext.all(16).unwrap();
        assert_eq!(seqs.len(), 2);
        assert!(is_isomorphic(seqs[0].middle(), &s.direct_sum(&s), 1 << 10).unwrap().is_iso());
        assert!(is_isomorphic(seqs[1].middle(), &Module::regular(&a), 1 << 10).unwrap().is_iso());
    }

    #[test]
    fn field_has_no_extensions() {
        let f = Algebra::field(3).unwrap();
        let k = Module::regular(&f);
        assert_eq!(extensions(&k, &k.direct_sum(&k)).unwrap().dim(), 0);
    }

    #[test]
    fn indecomposables_of_upper_triangular() {
        let a = Algebra::upper_triangular(2, 2).unwrap();
        let ps = indecomposable_projectives(&a, 1 << 12).unwrap();
        assert_eq!(ps.iter().map(Module::dim).collect::<Vec<_>>(), vec![1, 2]);
        let is = indecomposable_injectives(&a, 1 << 12).unwrap();
        assert_eq!(is.len(), 2);
        assert!(is.iter().all(|i| is_injective(i).unwrap()));
    }
}
