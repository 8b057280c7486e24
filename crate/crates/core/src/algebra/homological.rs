use crate::error::Result;
use crate::linalg::{solve, Matrix};

use super::module::{hom_space, kernel_cokernel, Module, ModuleHom, ShortExactSeq};
use super::AlgebraRef;

/// An epimorphism from a free module `A^g` whose `i`-th copy of `1` maps
/// to the `i`-th column of `generators`.
#[derive(Clone, Debug)]
pub struct Cover {
    pub generators: Matrix,
    pub epi: ModuleHom,
}

impl Cover {
    pub fn rank(&self) -> usize {
        self.generators.cols()
    }

    pub fn into_sequence(self) -> Result<ShortExactSeq> {
        let kc = kernel_cokernel(&self.epi)?;
        ShortExactSeq::new(kc.inclusion, self.epi)
    }
}

fn cover_from_generators(x: &Module, generators: Matrix) -> Cover {
    let a: &AlgebraRef = x.algebra();
    let (d, n, g) = (a.dim(), x.dim(), generators.cols());
    let free = Module::free(a, g);
    let mut epi = Matrix::zeros(x.modulus(), n, g * d);
    for i in 0..g {
        let v = generators.column(i);
        for j in 0..d {
            epi.paste(0, i * d + j, &x.action()[j].mul(&v));
        }
    }
    Cover {
        generators,
        epi: ModuleHom::new_internal(&free, x, epi),
    }
}

/// The cover `A^n -> x` on all basis vectors of `x`, `n = dim x`.
pub fn full_free_cover(x: &Module) -> Cover {
    cover_from_generators(x, Matrix::identity(x.modulus(), x.dim()))
}

/// [`generator_cover`] as a short exact sequence with its kernel.
pub fn free_cover(x: &Module) -> Result<ShortExactSeq> {
    generator_cover(x).into_sequence()
}

/// Cover by a free module on greedily chosen basis vectors generating `x`:
/// a basis vector is kept when it enlarges the submodule generated so far.
pub fn generator_cover(x: &Module) -> Cover {
    let p = x.modulus();
    let n = x.dim();
    let mut chosen: Vec<usize> = Vec::new();
    let mut span_dim = 0;
    for i in 0..n {
        let mut trial = chosen.clone();
        trial.push(i);
        let cols = Matrix::identity(p, n).select_columns(&trial);
        let sub = x.submodule_generated(&cols);
        if sub.dim() > span_dim {
            span_dim = sub.dim();
            chosen = trial;
        }
        if span_dim == n {
            break;
        }
    }
    cover_from_generators(x, Matrix::identity(p, n).select_columns(&chosen))
}

/// First syzygy along [`generator_cover`].
pub fn syzygy(x: &Module) -> Result<ShortExactSeq> {
    generator_cover(x).into_sequence()
}

/// A section of the generator cover when `x` is projective.
pub fn is_projective(x: &Module) -> Result<Option<ModuleHom>> {
    if x.is_zero() {
        return Ok(Some(x.identity()));
    }
    let cover = generator_cover(x);
    let hs = hom_space(x, &cover.epi.source)?;
    let p = x.modulus();
    let n = x.dim();
    if hs.dim() == 0 {
        return Ok(None);
    }
    let cols: Vec<Matrix> = hs
        .basis()
        .iter()
        .map(|h| cover.epi.matrix.mul(h).vectorize())
        .collect();
    let refs: Vec<&Matrix> = cols.iter().collect();
    let system = Matrix::hstack(&refs);
    let target = Matrix::identity(p, n).vectorize();
    Ok(solve(&system, &target)?.map(|s| {
        let section = hs.combine(s.particular.entries());
        ModuleHom::new_internal(x, &cover.epi.source, section)
    }))
}

/// Injectivity through duality: `x` is injective iff its dual is projective
/// over the opposite algebra.
pub fn is_injective(x: &Module) -> Result<bool> {
    Ok(is_projective(&x.dual())?.is_some())
}

/// A monomorphism from `x` into an injective module: the dual of the
/// generator cover of the dual.
pub fn injective_embedding(x: &Module) -> ModuleHom {
    let epi = generator_cover(&x.dual()).epi;
    let action = epi.source.action().iter().map(Matrix::transpose).collect();
    let target = Module::new_internal(x.algebra(), epi.source.dim(), action);
    ModuleHom::new_internal(x, &target, epi.matrix.transpose())
}

/// `dim Ext^i(x, y)`; `Ext^0` is the hom dimension.
pub fn ext_dim(x: &Module, y: &Module, i: usize) -> Result<usize> {
    Ok(ext_dims(x, y, i)?[i])
}

/// `[dim Ext^0, ..., dim Ext^imax]`, by dimension shifting along syzygies:
/// `dim Ext^i = dim Hom(Om^i, y) - g dim y + dim Hom(Om^{i-1}, y)`.
pub fn ext_dims(x: &Module, y: &Module, imax: usize) -> Result<Vec<usize>> {
    let mut out = vec![hom_space(x, y)?.dim()];
    let mut current = x.clone();
    let mut hom_prev = out[0];
    for _ in 1..=imax {
        let cover = generator_cover(&current);
        let g = cover.rank();
        let seq = cover.into_sequence()?;
        let omega = seq.left().clone();
        let hom_omega = hom_space(&omega, y)?.dim();
        out.push(hom_omega + hom_prev - g * y.dim());
        hom_prev = hom_omega;
        current = omega;
    }
    Ok(out)
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
    fn free_cover_examples() {
        let a = d2();
        let zero = free_cover(&Module::zero(&a)).unwrap();
        assert!(zero.middle().is_zero());
        let reg = free_cover(&Module::regular(&a)).unwrap();
        assert_eq!(reg.middle().dim(), 2);
        assert!(reg.left().is_zero());
        assert!(reg.g.is_iso());
        let s = free_cover(&simple(&a)).unwrap();
        assert_eq!(s.middle().dim(), 2);
        assert_eq!(s.left(), &simple(&a));
        assert_eq!(full_free_cover(&Module::regular(&a)).rank(), 2);
    }

    #[test]
    fn projectivity_examples() {
        let a = d2();
        assert!(is_projective(&Module::regular(&a)).unwrap().is_some());
        assert!(is_projective(&simple(&a)).unwrap().is_none());
        let f2 = Algebra::field(2).unwrap();
        assert!(is_projective(&Module::regular(&f2)).unwrap().is_some());
    }

    #[test]
    fn injectivity_examples() {
        let f2 = Algebra::field(2).unwrap();
        assert!(is_injective(&Module::regular(&f2)).unwrap());
        let a = d2();
        assert!(is_injective(&Module::regular(&a)).unwrap());
        assert!(!is_injective(&simple(&a)).unwrap());
        let emb = injective_embedding(&simple(&a));
        assert!(emb.is_injective());
        assert!(is_injective(&emb.target).unwrap());
    }

    #[test]
    fn ext_examples() {
        let a = d2();
        let s = simple(&a);
        assert_eq!(ext_dims(&s, &s, 3).unwrap(), vec![1, 1, 1, 1]);
        let f2 = Algebra::field(2).unwrap();
        let k = Module::regular(&f2);
        assert_eq!(ext_dim(&k, &k, 1).unwrap(), 0);
    }
}
