use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    enumerate_summands, extensions, hom_space, indecomposable_injectives, indecomposable_projectives,
    kernel_cokernel, HomSpace, Module, ModuleHom,
};
use crate::error::{Error, Result};
use crate::linalg::{all_vectors, field_power, Matrix, Subspace};

use super::inventory::{multiplicities, ExactInventory, Membership};
use super::Verdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosureKind {
    Extensions,
    Summands,
    CokerOfMono,
    KerOfEpi,
    ContainsInjectives,
    ContainsProjectives,
}

impl ClosureKind {
    pub const ALL: [ClosureKind; 6] = [
        ClosureKind::Extensions,
        ClosureKind::Summands,
        ClosureKind::CokerOfMono,
        ClosureKind::KerOfEpi,
        ClosureKind::ContainsInjectives,
        ClosureKind::ContainsProjectives,
    ];
}

/// A counterexample: a description plus the inventory objects involved.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub description: String,
    pub objects: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub kind: ClosureKind,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// Constructed objects checked against the inventory.
    pub checked: usize,
    /// Constructed objects beyond the caps, left unjudged.
    pub out_of_cap: usize,
    pub notes: Vec<String>,
}

#[derive(Default)]
struct Tally {
    witness: Option<Witness>,
    checked: usize,
    out_of_cap: usize,
    partial: bool,
    notes: Vec<String>,
}

impl Tally {
    fn record(&mut self, m: Membership, witness: impl FnOnce() -> Witness) {
        self.checked += 1;
        match m {
            Membership::Member { .. } => {}
            Membership::NonMember { .. } => {
                if self.witness.is_none() {
                    self.witness = Some(witness());
                }
            }
            Membership::OutOfCap => self.out_of_cap += 1,
            Membership::Undecided => self.partial = true,
        }
    }

    fn note(&mut self, s: String) {
        self.partial = true;
        self.notes.push(s);
    }

    fn merge(mut self, other: Tally) -> Tally {
        if self.witness.is_none() {
            self.witness = other.witness;
        }
        self.checked += other.checked;
        self.out_of_cap += other.out_of_cap;
        self.partial |= other.partial;
        self.notes.extend(other.notes);
        self
    }

    fn into_report(self, kind: ClosureKind) -> ClosureReport {
        let verdict = if self.witness.is_some() {
            Verdict::Fail
        } else if self.partial {
            Verdict::Partial
        } else {
            Verdict::Pass
        };
        ClosureReport {
            kind,
            verdict,
            witness: self.witness,
            checked: self.checked,
            out_of_cap: self.out_of_cap,
            notes: self.notes,
        }
    }
}

pub fn check_closure<I: ExactInventory + ?Sized>(inv: &I, kind: ClosureKind) -> Result<ClosureReport> {
    let tally = match kind {
        ClosureKind::Extensions => extension_closure(inv)?,
        ClosureKind::Summands => summand_closure(inv)?,
        ClosureKind::CokerOfMono => map_closure(inv, MapKind::Mono)?,
        ClosureKind::KerOfEpi => map_closure(inv, MapKind::Epi)?,
        ClosureKind::ContainsInjectives => containment(inv, true)?,
        ClosureKind::ContainsProjectives => containment(inv, false)?,
    };
    Ok(tally.into_report(kind))
}

fn pairs<I: ExactInventory + ?Sized>(inv: &I, keep: impl Fn(&Module, &Module) -> bool) -> Vec<(usize, usize)> {
    let objs = inv.objects();
    let mut out = Vec::new();
    for i in 0..objs.len() {
        for j in 0..objs.len() {
            if keep(&objs[i], &objs[j]) {
                out.push((i, j));
            }
        }
    }
    out
}

fn merge_all(parts: Vec<Result<Tally>>) -> Result<Tally> {
    let mut acc = Tally::default();
    for p in parts {
        acc = acc.merge(p?);
    }
    Ok(acc)
}

fn extension_closure<I: ExactInventory + ?Sized>(inv: &I) -> Result<Tally> {
    let budget = inv.budgets().ses;
    let parts = pairs(inv, |a, b| !a.is_zero() && !b.is_zero())
        .into_par_iter()
        .map(|(i, j)| -> Result<Tally> {
            let mut t = Tally::default();
            if !inv.sum_fits(i, j) {
                t.out_of_cap += 1;
                return Ok(t);
            }
            let objs = inv.objects();
            let ext = extensions(&objs[j], &objs[i])?;
            if ext.class_count() > budget {
                t.note(format!(
                    "{} extension classes of {} by {} exceed the budget",
                    ext.class_count(),
                    inv.label(j),
                    inv.label(i)
                ));
                return Ok(t);
            }
            for (k, seq) in ext.all(budget)?.into_iter().enumerate() {
                let m = inv.membership(seq.middle())?;
                t.record(m, || Witness {
                    description: format!(
                        "extension class {k} of {} by {} has its middle term (dim {}) outside",
                        inv.label(j),
                        inv.label(i),
                        seq.middle().dim()
                    ),
                    objects: vec![i, j],
                });
            }
            Ok(t)
        })
        .collect();
    merge_all(parts)
}

fn summand_closure<I: ExactInventory + ?Sized>(inv: &I) -> Result<Tally> {
    let budget = inv.budgets().summands;
    let parts = (0..inv.objects().len())
        .into_par_iter()
        .map(|i| -> Result<Tally> {
            let mut t = Tally::default();
            let summands = match enumerate_summands(&inv.objects()[i], budget) {
                Ok(s) => s,
                Err(Error::BudgetExceeded(msg)) => {
                    t.note(format!("summands of {}: {msg}", inv.label(i)));
                    return Ok(t);
                }
                Err(e) => return Err(e),
            };
            for s in summands {
                let m = inv.membership(&s)?;
                t.record(m, || Witness {
                    description: format!("{} has a summand of dim {} outside", inv.label(i), s.dim()),
                    objects: vec![i],
                });
            }
            Ok(t)
        })
        .collect();
    merge_all(parts)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum MapKind {
    Mono,
    Epi,
}

/// Calls `visit` on every map in `hs`, or on `budget` seeded random maps
/// when the space is larger, until `visit` returns `true`. Returns whether
/// it sampled.
pub(crate) fn for_each_map(
    hs: &HomSpace,
    budget: u64,
    seed: u64,
    mut visit: impl FnMut(Matrix) -> Result<bool>,
) -> Result<bool> {
    let p = hs.source.modulus();
    let h = hs.dim();
    if field_power(p, h) <= budget {
        for c in all_vectors(p, h) {
            if visit(hs.combine(&c))? {
                break;
            }
        }
        return Ok(false);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let c: Vec<u32> = (0..h).map(|_| rng.gen_range(0..p)).collect();
        if visit(hs.combine(&c))? {
            break;
        }
    }
    Ok(true)
}

fn map_closure<I: ExactInventory + ?Sized>(inv: &I, kind: MapKind) -> Result<Tally> {
    let budget = inv.budgets().maps;
    let keep = |a: &Module, b: &Module| match kind {
        MapKind::Mono => !a.is_zero() && a.dim() < b.dim(),
        MapKind::Epi => !b.is_zero() && a.dim() > b.dim(),
    };
    let parts = pairs(inv, keep)
        .into_par_iter()
        .map(|(i, j)| -> Result<Tally> {
            let mut t = Tally::default();
            let objs = inv.objects();
            let (x, y) = (&objs[i], &objs[j]);
            let hs = hom_space(x, y)?;
            let mut seen: HashSet<Subspace> = HashSet::new();
            let seed = ((i as u64) << 32) | j as u64;
            let sampled = for_each_map(&hs, budget, seed, |m| {
                let ok = match kind {
                    MapKind::Mono => m.is_injective(),
                    MapKind::Epi => m.is_surjective(),
                };
                if !ok {
                    return Ok(false);
                }
                let key = match kind {
                    MapKind::Mono => m.image(),
                    MapKind::Epi => m.kernel(),
                };
                if !seen.insert(key) {
                    return Ok(false);
                }
                let kc = kernel_cokernel(&ModuleHom::new_internal(x, y, m))?;
                let (obj, what) = match kind {
                    MapKind::Mono => (kc.cokernel(), "cokernel"),
                    MapKind::Epi => (kc.kernel(), "kernel"),
                };
                let mem = inv.membership(obj)?;
                t.record(mem, || Witness {
                    description: format!(
                        "{what} (dim {}) of a map {} -> {} lies outside",
                        obj.dim(),
                        inv.label(i),
                        inv.label(j)
                    ),
                    objects: vec![i, j],
                });
                Ok(false)
            })?;
            if sampled {
                t.note(format!(
                    "maps {} -> {} sampled ({} of {}^{})",
                    inv.label(i),
                    inv.label(j),
                    budget,
                    x.modulus(),
                    hs.dim()
                ));
            }
            Ok(t)
        })
        .collect();
    merge_all(parts)
}

/// Every direct sum of indecomposable injectives (or projectives) of the
/// ambient algebra, up to the inventory's dimension bound, is a member.
fn containment<I: ExactInventory + ?Sized>(inv: &I, injective: bool) -> Result<Tally> {
    let a = inv.ambient();
    let budget = inv.budgets().summands;
    let indec = if injective {
        indecomposable_injectives(a, budget)?
    } else {
        indecomposable_projectives(a, budget)?
    };
    let bound = inv.dim_bound();
    let dims: Vec<usize> = indec.iter().map(Module::dim).collect();
    let what = if injective { "injective" } else { "projective" };
    let mut t = Tally::default();
    for mult in multiplicities(&dims, bound) {
        if mult.iter().all(|&k| k == 0) {
            continue;
        }
        let mut parts = Vec::new();
        for (k, m) in mult.iter().zip(&indec) {
            parts.extend(std::iter::repeat(m.clone()).take(*k));
        }
        let sum = Module::direct_sum_all(a, &parts);
        let mem = inv.membership(&sum)?;
        t.record(mem, || Witness {
            description: format!("{what} module of dim {} with multiplicities {mult:?} is missing", sum.dim()),
            objects: Vec::new(),
        });
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Algebra, AlgebraRef};
    use crate::subcat::SubcategorySpec;

    fn simple(a: &AlgebraRef) -> Module {
        let p = a.modulus();
        Module::new(a, 1, vec![Matrix::identity(p, 1), Matrix::zeros(p, 1, 1)]).unwrap()
    }

    #[test]
    fn semisimple_inventory_is_closed() {
        let f = Algebra::field(2).unwrap();
        let y = SubcategorySpec::all_up_to_cap(&f, vec![Module::regular(&f)], 3).unwrap();
        assert_eq!(y.len(), 4);
        for kind in ClosureKind::ALL {
            let r = check_closure(&y, kind).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{kind:?}");
        }
    }

    #[test]
    fn simple_alone_is_not_extension_closed() {
        let a = Algebra::truncated_polynomial(2, 2).unwrap();
        let x = SubcategorySpec::explicit(&a, vec![simple(&a)], 2).unwrap();
        let r = check_closure(&x, ClosureKind::Extensions).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.witness.unwrap().objects, vec![1, 1]);
        let r = check_closure(&x, ClosureKind::ContainsInjectives).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn cokernel_of_simple_into_sum() {
        let a = Algebra::truncated_polynomial(2, 2).unwrap();
        let s = simple(&a);
        let d2 = Module::regular(&a);
        let x = SubcategorySpec::explicit(&a, vec![s.clone(), s.direct_sum(&s), d2.direct_sum(&s)], 3).unwrap();
        let r = check_closure(&x, ClosureKind::CokerOfMono).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        let all = SubcategorySpec::all_up_to_cap(&a, vec![s, d2], 4).unwrap();
        assert_eq!(all.len(), 9);
        for kind in ClosureKind::ALL {
            assert_eq!(check_closure(&all, kind).unwrap().verdict, Verdict::Pass, "{kind:?}");
        }
    }
}
