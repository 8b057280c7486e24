use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{all_vectors, field_power, Matrix};

use super::module::{hom_space, Module, ModuleHom};
use super::same_algebra;

/// Outcome of an isomorphism search. `Unknown` is returned only when the
/// hom space is too large to rule isomorphism out exhaustively.
#[derive(Clone, Debug)]
pub enum IsoVerdict {
    Isomorphic(ModuleHom),
    NotIsomorphic,
    Unknown,
}

impl IsoVerdict {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic(_))
    }

    pub fn witness(&self) -> Option<&ModuleHom> {
        match self {
            IsoVerdict::Isomorphic(h) => Some(h),
            _ => None,
        }
    }
}

const RANDOM_TRIALS: usize = 200;

/// Invariant buckets first, then random elements of `Hom(x, y)`, then
/// exhaustive enumeration when `p^{dim Hom} <= budget`.
pub fn is_isomorphic(x: &Module, y: &Module, budget: u64) -> Result<IsoVerdict> {
    if !same_algebra(x.algebra(), y.algebra()) {
        return Err(Error::AlgebraMismatch("isomorphism test across algebras".into()));
    }
    if x.dim() != y.dim() {
        return Ok(IsoVerdict::NotIsomorphic);
    }
    if x == y {
        return Ok(IsoVerdict::Isomorphic(x.identity()));
    }
    if x.rank_profile() != y.rank_profile() {
        return Ok(IsoVerdict::NotIsomorphic);
    }
    let hxy = hom_space(x, y)?;
    let end_x = hom_space(x, x)?;
    if hxy.dim() != end_x.dim() || hom_space(y, y)?.dim() != end_x.dim() {
        return Ok(IsoVerdict::NotIsomorphic);
    }
    let found = |m: Matrix| {
        m.is_invertible()
            .then(|| IsoVerdict::Isomorphic(ModuleHom::new_internal(x, y, m)))
    };
    for b in hxy.basis() {
        if let Some(v) = found(b.clone()) {
            return Ok(v);
        }
    }
    let p = x.modulus();
    let h = hxy.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7269_736f);
    for _ in 0..RANDOM_TRIALS {
        let coeffs: Vec<u32> = (0..h).map(|_| rng.gen_range(0..p)).collect();
        if let Some(v) = found(hxy.combine(&coeffs)) {
            return Ok(v);
        }
    }
    if field_power(p, h) > budget {
        return Ok(IsoVerdict::Unknown);
    }
    for coeffs in all_vectors(p, h) {
        if let Some(v) = found(hxy.combine(&coeffs)) {
            return Ok(v);
        }
    }
    Ok(IsoVerdict::NotIsomorphic)
}

/// Every endomorphism of `x`, in lexicographic coefficient order.
pub fn enumerate_endomorphisms(x: &Module, budget: u64) -> Result<Vec<Matrix>> {
    let end = hom_space(x, x)?;
    let total = field_power(x.modulus(), end.dim());
    if total > budget {
        return Err(Error::BudgetExceeded(format!(
            "{} endomorphisms exceed the enumeration budget {budget}",
            total
        )));
    }
    Ok(all_vectors(x.modulus(), end.dim())
        .map(|c| end.combine(&c))
        .collect())
}

/// Images of all idempotent endomorphisms, one per isomorphism class,
/// ordered by dimension.
pub fn enumerate_summands(x: &Module, budget: u64) -> Result<Vec<Module>> {
    let mut out: Vec<Module> = Vec::new();
    for e in enumerate_endomorphisms(x, budget)? {
        if e.mul(&e) != e {
            continue;
        }
        let image = x.submodule(&e.image())?.source;
        let mut fresh = true;
        for known in &out {
            if is_isomorphic(known, &image, budget)?.is_iso() {
                fresh = false;
                break;
            }
        }
        if fresh {
            out.push(image);
        }
    }
    out.sort_by_key(Module::dim);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::Algebra;
    use super::*;

    #[test]
    fn summands_of_simple_and_its_square() {
        let f2 = Algebra::field(2).unwrap();
        let s = Module::regular(&f2);
        let dims: Vec<usize> = enumerate_summands(&s, 1 << 16)
            .unwrap()
            .iter()
            .map(Module::dim)
            .collect();
        assert_eq!(dims, vec![0, 1]);
        let ss = s.direct_sum(&s);
        assert_eq!(enumerate_endomorphisms(&ss, 1 << 16).unwrap().len(), 16);
        let dims: Vec<usize> = enumerate_summands(&ss, 1 << 16)
            .unwrap()
            .iter()
            .map(Module::dim)
            .collect();
        assert_eq!(dims, vec![0, 1, 2]);
    }

    #[test]
    fn summand_budget_guard() {
        // End(F_2^5) has dimension 25
        let f2 = Algebra::field(2).unwrap();
        let big = Module::free(&f2, 5);
        assert!(matches!(
            enumerate_summands(&big, 1 << 16),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn permuted_presentation_is_isomorphic() {
        let d2 = Algebra::truncated_polynomial(2, 2).unwrap();
        let reg = Module::regular(&d2);
        let s = Module::new(&d2, 1, vec![Matrix::identity(2, 1), Matrix::zeros(2, 1, 1)]).unwrap();
        assert!(is_isomorphic(&reg, &reg, 1 << 16).unwrap().is_iso());
        assert!(matches!(
            is_isomorphic(&s, &reg, 1 << 16).unwrap(),
            IsoVerdict::NotIsomorphic
        ));
        let ss = s.direct_sum(&s);
        let swap = Matrix::from_rows(2, &[vec![0, 1], vec![1, 0]]).unwrap();
        let permuted = ss.conjugate(&swap).unwrap();
        let v = is_isomorphic(&ss, &permuted, 1 << 16).unwrap();
        assert!(v.witness().unwrap().validate().is_ok());
        let sd = s.direct_sum(&reg);
        let ds = reg.direct_sum(&s);
        assert!(is_isomorphic(&sd, &ds, 1 << 16).unwrap().is_iso());
    }
}
