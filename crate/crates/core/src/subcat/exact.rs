use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{extensions, hom_space, kernel_cokernel, Module, ModuleHom, ShortExactSeq};
use crate::error::Result;
use crate::linalg::Subspace;

use super::closure::for_each_map;
use super::inventory::{ExactInventory, Membership};
use super::Verdict;

/// A non-split short exact sequence whose three terms are inventory objects.
#[derive(Clone, Debug)]
pub struct SesEntry {
    pub left: usize,
    pub right: usize,
    pub class: usize,
    pub middle: usize,
    pub seq: ShortExactSeq,
}

/// An epi from a projective (or mono into an injective) member.
#[derive(Clone, Debug)]
pub struct CoverWitness {
    pub object: usize,
    pub kernel: usize,
    pub map: ModuleHom,
}

/// The exact structure an inventory inherits from its ambient module
/// category, read off from its enumerated short exact sequences.
#[derive(Clone, Debug)]
pub struct ExactStructure {
    /// `hom_dims[i][j] = dim Hom(object i, object j)`.
    pub hom_dims: Vec<Vec<usize>>,
    pub sequences: Vec<SesEntry>,
    /// Extension classes whose middle term is not a member: `(left, right, class)`.
    pub escaping: Vec<(usize, usize, usize)>,
    pub out_of_cap: usize,
    pub notes: Vec<String>,
    /// `Hom(P, -)` is exact on every enumerated sequence.
    pub projective: Vec<bool>,
    /// `Hom(-, I)` is exact on every enumerated sequence.
    pub injective: Vec<bool>,
}

impl ExactStructure {
    pub fn build<I: ExactInventory + ?Sized>(inv: &I) -> Result<Self> {
        let objs = inv.objects();
        let n = objs.len();
        let hom_dims: Vec<Vec<usize>> = (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .map(|j| Ok(hom_space(&objs[i], &objs[j])?.dim()))
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<_>>()?;
        let budget = inv.budgets().ses;
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if !objs[i].is_zero() && !objs[j].is_zero() {
                    pairs.push((i, j));
                }
            }
        }
        type Part = (Vec<SesEntry>, Vec<(usize, usize, usize)>, usize, Vec<String>);
        let parts: Vec<Result<Part>> = pairs
            .into_par_iter()
            .map(|(i, j)| {
                let mut part: Part = (Vec::new(), Vec::new(), 0, Vec::new());
                if !inv.sum_fits(i, j) {
                    part.2 += 1;
                    return Ok(part);
                }
                let ext = extensions(&objs[j], &objs[i])?;
                if ext.dim() == 0 {
                    return Ok(part);
                }
                if ext.class_count() > budget {
                    part.3.push(format!(
                        "{} extension classes of {} by {} exceed the budget",
                        ext.class_count(),
                        inv.label(j),
                        inv.label(i)
                    ));
                    return Ok(part);
                }
                for (class, seq) in ext.all(budget)?.into_iter().enumerate().skip(1) {
                    match inv.membership(seq.middle())? {
                        Membership::Member { index } => part.0.push(SesEntry {
                            left: i,
                            right: j,
                            class,
                            middle: index,
                            seq,
                        }),
                        Membership::NonMember { .. } => part.1.push((i, j, class)),
                        Membership::OutOfCap => part.2 += 1,
                        Membership::Undecided => part.3.push(format!(
                            "membership of extension class {class} of {} by {} undecided",
                            inv.label(j),
                            inv.label(i)
                        )),
                    }
                }
                Ok(part)
            })
            .collect();
        let mut es = ExactStructure {
            hom_dims,
            sequences: Vec::new(),
            escaping: Vec::new(),
            out_of_cap: 0,
            notes: Vec::new(),
            projective: Vec::new(),
            injective: Vec::new(),
        };
        for part in parts {
            let (s, e, o, notes) = part?;
            es.sequences.extend(s);
            es.escaping.extend(e);
            es.out_of_cap += o;
            es.notes.extend(notes);
        }
        es.projective = (0..n)
            .map(|p| es.first_unlifted(|k| es.hom_dims[p][k]).is_none())
            .collect();
        es.injective = (0..n)
            .map(|q| es.first_uncolifted(|k| es.hom_dims[k][q]).is_none())
            .collect();
        Ok(es)
    }

    /// First sequence on which `Hom(P, -)` is not exact, given
    /// `dim Hom(P, object k)`.
    pub fn first_unlifted(&self, dims: impl Fn(usize) -> usize) -> Option<usize> {
        self.sequences
            .iter()
            .position(|s| dims(s.middle) != dims(s.left) + dims(s.right))
    }

    /// First sequence on which `Hom(-, I)` is not exact, given
    /// `dim Hom(object k, I)`.
    pub fn first_uncolifted(&self, dims: impl Fn(usize) -> usize) -> Option<usize> {
        self.first_unlifted(dims)
    }

    pub fn projectives(&self) -> Vec<usize> {
        indices(&self.projective)
    }

    pub fn injectives(&self) -> Vec<usize> {
        indices(&self.injective)
    }

    pub fn is_extension_closed(&self) -> bool {
        self.escaping.is_empty()
    }

    /// Whether `Hom(q, -)` is exact on every enumerated sequence; `q` need
    /// not be an inventory object. Returns the first failing sequence.
    pub fn relative_projective<I: ExactInventory + ?Sized>(&self, inv: &I, q: &Module) -> Result<Option<usize>> {
        let dims = inv
            .objects()
            .iter()
            .map(|o| Ok(hom_space(q, o)?.dim()))
            .collect::<Result<Vec<usize>>>()?;
        Ok(self.first_unlifted(|k| dims[k]))
    }

    /// Whether `Hom(-, v)` is exact on every enumerated sequence.
    pub fn relative_injective<I: ExactInventory + ?Sized>(&self, inv: &I, v: &Module) -> Result<Option<usize>> {
        let dims = inv
            .objects()
            .iter()
            .map(|o| Ok(hom_space(o, v)?.dim()))
            .collect::<Result<Vec<usize>>>()?;
        Ok(self.first_uncolifted(|k| dims[k]))
    }

    /// An epi onto object `i` from a projective member with member kernel:
    /// the identity when `i` is projective, otherwise the first found over
    /// projectives ordered by dimension then index. `None` when no such
    /// epi exists within the inventory.
    pub fn projective_cover<I: ExactInventory + ?Sized>(&self, inv: &I, i: usize) -> Result<Option<CoverWitness>> {
        self.search(inv, i, true)
    }

    /// Dual of [`ExactStructure::projective_cover`].
    pub fn injective_hull<I: ExactInventory + ?Sized>(&self, inv: &I, i: usize) -> Result<Option<CoverWitness>> {
        self.search(inv, i, false)
    }

    /// Up to `limit` injective hulls of object `i` through distinct
    /// injective objects, in the search order of
    /// [`ExactStructure::injective_hull`].
    pub fn injective_hulls<I: ExactInventory + ?Sized>(
        &self,
        inv: &I,
        i: usize,
        limit: usize,
    ) -> Result<Vec<CoverWitness>> {
        self.search_n(inv, i, false, limit)
    }

    fn search<I: ExactInventory + ?Sized>(&self, inv: &I, i: usize, cover: bool) -> Result<Option<CoverWitness>> {
        Ok(self.search_n(inv, i, cover, 1)?.pop())
    }

    fn search_n<I: ExactInventory + ?Sized>(
        &self,
        inv: &I,
        i: usize,
        cover: bool,
        limit: usize,
    ) -> Result<Vec<CoverWitness>> {
        let objs = inv.objects();
        let x = &objs[i];
        let flags = if cover { &self.projective } else { &self.injective };
        let mut out = Vec::new();
        if flags[i] {
            let zero = objs.iter().position(Module::is_zero).unwrap_or(0);
            out.push(CoverWitness {
                object: i,
                kernel: zero,
                map: x.identity(),
            });
            if out.len() >= limit {
                return Ok(out);
            }
        }
        let mut candidates: Vec<usize> = indices(flags)
            .into_iter()
            .filter(|&c| objs[c].dim() > x.dim())
            .collect();
        candidates.sort_by_key(|&c| (objs[c].dim(), c));
        for c in candidates {
            let (src, tgt) = if cover { (&objs[c], x) } else { (x, &objs[c]) };
            let hs = hom_space(src, tgt)?;
            let mut seen: HashSet<Subspace> = HashSet::new();
            let mut found = None;
            for_each_map(&hs, inv.budgets().maps, ((c as u64) << 32) | i as u64, |m| {
                let ok = if cover { m.is_surjective() } else { m.is_injective() };
                if !ok || !seen.insert(if cover { m.kernel() } else { m.image() }) {
                    return Ok(false);
                }
                let h = ModuleHom::new_internal(src, tgt, m);
                let kc = kernel_cokernel(&h)?;
                let rest = if cover { kc.kernel() } else { kc.cokernel() };
                if let Membership::Member { index } = inv.membership(rest)? {
                    found = Some(CoverWitness {
                        object: c,
                        kernel: index,
                        map: h,
                    });
                    return Ok(true);
                }
                Ok(false)
            })?;
            out.extend(found);
            if out.len() >= limit {
                return Ok(out);
            }
        }
        Ok(out)
    }

    /// Covers (or hulls) for every object; objects without one inside the
    /// inventory are listed as beyond the caps.
    pub fn coverage<I: ExactInventory + ?Sized>(&self, inv: &I, cover: bool) -> Result<Coverage> {
        let found: Vec<Option<CoverWitness>> = (0..inv.objects().len())
            .into_par_iter()
            .map(|i| self.search(inv, i, cover))
            .collect::<Result<_>>()?;
        Ok(Coverage {
            covered: found.iter().filter(|f| f.is_some()).count(),
            beyond_cap: found
                .iter()
                .enumerate()
                .filter(|(_, f)| f.is_none())
                .map(|(i, _)| i)
                .collect(),
        })
    }

    /// Projectives and injectives coincide, plus coverage of both kinds.
    pub fn frobenius<I: ExactInventory + ?Sized>(&self, inv: &I) -> Result<FrobeniusSummary> {
        let projectives = self.projectives();
        let injectives = self.injectives();
        let coincide = projectives == injectives;
        let covers = self.coverage(inv, true)?;
        let hulls = self.coverage(inv, false)?;
        let mut verdict = Verdict::from_bool(coincide && self.is_extension_closed());
        if verdict == Verdict::Pass && !self.notes.is_empty() {
            verdict = Verdict::Partial;
        }
        Ok(FrobeniusSummary {
            projectives,
            injectives,
            coincide,
            extension_closed: self.is_extension_closed(),
            covers,
            hulls,
            verdict,
        })
    }
}

fn indices(flags: &[bool]) -> Vec<usize> {
    flags
        .iter()
        .enumerate()
        .filter(|(_, &f)| f)
        .map(|(i, _)| i)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coverage {
    pub covered: usize,
    /// Objects with no cover (hull) inside the inventory; their covers
    /// exceed the caps.
    pub beyond_cap: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrobeniusSummary {
    pub projectives: Vec<usize>,
    pub injectives: Vec<usize>,
    pub coincide: bool,
    pub extension_closed: bool,
    pub covers: Coverage,
    pub hulls: Coverage,
    pub verdict: Verdict,
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;
    use std::time::Instant;

    use super::*;
    use crate::algebra::{indecomposable_injectives, indecomposable_projectives, Algebra, AlgebraRef};
    use crate::bimodule::Bimodule;
    use crate::linalg::Matrix;
    use crate::rep::Triangular;
    use crate::subcat::{Budgets, Side, SubcategorySpec, TripleCategory};

    fn simple(a: &AlgebraRef) -> Module {
        let p = a.modulus();
        Module::new(a, 1, vec![Matrix::identity(p, 1), Matrix::zeros(p, 1, 1)]).unwrap()
    }

    #[test]
    fn dual_numbers_are_frobenius() {
        let a = Algebra::truncated_polynomial(2, 2).unwrap();
        let x = SubcategorySpec::all_up_to_cap(&a, vec![simple(&a), Module::regular(&a)], 4).unwrap();
        let es = ExactStructure::build(&x).unwrap();
        let proj: Vec<String> = es.projectives().iter().map(|&i| x.label(i)).collect();
        assert_eq!(proj, vec!["0", "M1", "M1^2"]);
        let f = es.frobenius(&x).unwrap();
        assert_eq!(f.verdict, Verdict::Pass);
        assert!(f.covers.beyond_cap.len() < x.len());
    }

    #[test]
    fn upper_triangular_is_not_frobenius() {
        let a = Algebra::upper_triangular(2, 2).unwrap();
        let mut gens = indecomposable_projectives(&a, 1 << 12).unwrap();
        gens.extend(indecomposable_injectives(&a, 1 << 12).unwrap());
        let x = SubcategorySpec::all_up_to_cap(&a, gens, 3).unwrap();
        let es = ExactStructure::build(&x).unwrap();
        let f = es.frobenius(&x).unwrap();
        assert!(!f.coincide);
        assert_eq!(f.verdict, Verdict::Fail);
    }

    #[test]
    fn triple_category_exact_structure() {
        let a = Algebra::truncated_polynomial(2, 2).unwrap();
        let tri = Arc::new(Triangular::new(&Bimodule::regular(&a)).unwrap());
        let all = SubcategorySpec::all_up_to_cap(&a, vec![simple(&a), Module::regular(&a)], 4).unwrap();
        let e = TripleCategory::new(Side::E, &tri, &all, &all, 4, 4, Budgets::default()).unwrap();
        let t = Instant::now();
        let es = ExactStructure::build(&e).unwrap();
        eprintln!("E exact structure in {:?}: {} sequences", t.elapsed(), es.sequences.len());
        assert!(es.is_extension_closed());
        let f = es.frobenius(&e).unwrap();
        eprintln!("{:?} in {:?}", f, t.elapsed());
        assert!(f.coincide);
    }
}
