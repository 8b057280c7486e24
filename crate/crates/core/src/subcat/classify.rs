use serde::Serialize;

use crate::algebra::{kernel_cokernel, ShortExactSeq};
use crate::diagram::{pullback, pushout};
use crate::error::{Error, Result};

use super::exact::{CoverWitness, ExactStructure};
use super::hypotheses::{enough_clause, ext_clause, hom_clause, tensor_clause, tor_clause, Hypothesis};
use super::inventory::{ExactInventory, Membership};
use super::triples::{Side, TripleCategory, TripleMembership, TripleObject};
use super::Verdict;

/// A triple category with the exact structures of it and of its two
/// component inventories, plus the hypotheses under which projectives
/// (side `E`) or injectives (side `M`) are classified and constructed.
pub struct TripleAnalysis {
    pub cat: TripleCategory,
    pub es: ExactStructure,
    pub x_es: ExactStructure,
    pub y_es: ExactStructure,
    /// Hypotheses of the classification criterion.
    pub classify_hypotheses: Vec<Hypothesis>,
    /// Hypotheses of the cover (hull) construction.
    pub cover_hypotheses: Vec<Hypothesis>,
}

fn all_verdict(hs: &[Hypothesis]) -> Verdict {
    hs.iter().fold(Verdict::Pass, |v, h| v.and(h.verdict))
}

fn extension_closed(es: &ExactStructure, name: &str) -> Hypothesis {
    let verdict = if !es.is_extension_closed() {
        Verdict::Fail
    } else if es.notes.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Partial
    };
    Hypothesis {
        name: format!("{name} is closed under extensions"),
        verdict,
        witness: es.escaping.first().map(|(l, r, c)| format!("class {c} of object {r} by object {l} escapes")),
    }
}

impl TripleAnalysis {
    pub fn new(cat: TripleCategory) -> Result<Self> {
        let (es, (x_es, y_es)) = rayon::join(
            || ExactStructure::build(&cat),
            || rayon::join(|| ExactStructure::build(cat.x()), || ExactStructure::build(cat.y())),
        );
        let (es, x_es, y_es) = (es?, x_es?, y_es?);
        let m = cat.triangular().bimodule();
        let (classify_hypotheses, cover_hypotheses) = match cat.side() {
            Side::E => {
                let ext = ext_clause(m, cat.x())?;
                let closed = extension_closed(&es, "E(X, M, Y)");
                let hom = hom_clause(m, cat.x(), cat.y())?;
                let enough = enough_clause(cat.y(), &y_es, "Y has enough injectives", true)?;
                (
                    vec![ext.clone(), closed.clone(), Hypothesis::either(enough, hom.clone())],
                    vec![ext, closed, hom],
                )
            }
            Side::M => {
                let tor = tor_clause(m, cat.y())?;
                let closed = extension_closed(&es, "M(X, M, Y)");
                let tensor = tensor_clause(m, cat.x(), cat.y())?;
                let enough = enough_clause(cat.x(), &x_es, "X has enough projectives", false)?;
                (
                    vec![tor.clone(), closed.clone(), Hypothesis::either(enough, tensor.clone())],
                    vec![tor, closed, tensor],
                )
            }
        };
        Ok(TripleAnalysis {
            cat,
            es,
            x_es,
            y_es,
            classify_hypotheses,
            cover_hypotheses,
        })
    }

    /// Pass or Partial when the criterion applies.
    pub fn criterion_applies(&self) -> Verdict {
        all_verdict(&self.classify_hypotheses)
    }

    pub fn construction_applies(&self) -> Verdict {
        all_verdict(&self.cover_hypotheses)
    }

    /// Projectives (side `E`) or injectives (side `M`) by the lifting oracle.
    pub fn oracle(&self, i: usize) -> bool {
        match self.cat.side() {
            Side::E => self.es.projective[i],
            Side::M => self.es.injective[i],
        }
    }

    fn applies(v: Verdict) -> bool {
        matches!(v, Verdict::Pass | Verdict::Partial)
    }
}

/// The criterion's two clauses for one object, the lifting oracle, and
/// their agreement. Side `E`: `P` projective in `X` and `Q` `Y`-projective.
/// Side `M`: `V` injective in `Y` and `U` `X`-injective.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub object: usize,
    pub label: String,
    pub hypotheses: Verdict,
    /// The component lying in its subcategory is projective (injective) there.
    pub component: bool,
    /// First sequence on which the other component fails relative
    /// projectivity (injectivity).
    pub relative_failure: Option<usize>,
    /// `None` when the hypotheses fail and the criterion is refused.
    pub criterion: Option<bool>,
    pub oracle: bool,
    pub agree: Option<bool>,
    /// The criterion's answer when it applies, otherwise the oracle's.
    pub result: bool,
}

/// Projectivity of object `i` of `E(X, M, Y)`.
pub fn e_classify_projective(an: &TripleAnalysis, i: usize) -> Result<Classification> {
    if an.cat.side() != Side::E {
        return Err(Error::Invalid("projective classification needs side E".into()));
    }
    classify(an, i)
}

/// Injectivity of object `i` of `M(X, M, Y)`.
pub fn m_classify_injective(an: &TripleAnalysis, i: usize) -> Result<Classification> {
    if an.cat.side() != Side::M {
        return Err(Error::Invalid("injective classification needs side M".into()));
    }
    classify(an, i)
}

/// [`e_classify_projective`] or [`m_classify_injective`] on every object.
pub fn classify_all(an: &TripleAnalysis) -> Result<Vec<Classification>> {
    (0..an.cat.len()).map(|i| classify(an, i)).collect()
}

fn classify(an: &TripleAnalysis, i: usize) -> Result<Classification> {
    let obj = &an.cat.entries()[i];
    let (x, y) = (an.cat.x(), an.cat.y());
    let (component, relative_failure) = match an.cat.side() {
        Side::E => {
            let p = match x.lookup(obj.x())? {
                Membership::Member { index } => an.x_es.projective[index],
                _ => false,
            };
            (p, an.y_es.relative_projective(y, obj.y())?)
        }
        Side::M => {
            let v = match y.lookup(obj.y())? {
                Membership::Member { index } => an.y_es.injective[index],
                _ => false,
            };
            (v, an.x_es.relative_injective(x, obj.x())?)
        }
    };
    let hypotheses = an.criterion_applies();
    let criterion = TripleAnalysis::applies(hypotheses).then_some(component && relative_failure.is_none());
    let oracle = an.oracle(i);
    Ok(Classification {
        object: i,
        label: an.cat.label(i),
        hypotheses,
        component,
        relative_failure,
        criterion,
        oracle,
        agree: criterion.map(|c| c == oracle),
        result: criterion.unwrap_or(oracle),
    })
}

/// A short exact sequence of triples ending (side `E`) or starting
/// (side `M`) at an inventory object, with projective (injective) middle.
#[derive(Clone, Debug)]
pub struct Construction {
    pub object: usize,
    pub seq: ShortExactSeq,
    pub middle: TripleObject,
    pub x_step: CoverWitness,
    pub y_step: CoverWitness,
    /// Criterion verdict on the middle term.
    pub middle_criterion: bool,
    /// Lifting-oracle verdict when the middle lies within the caps.
    pub middle_oracle: Option<bool>,
    /// Membership clauses of the kernel (side `E`) or cokernel (side `M`).
    pub end_clauses: TripleMembership,
}

impl Construction {
    /// Exactness is checked on construction; this adds the middle and end.
    pub fn verified(&self) -> bool {
        self.middle_criterion && self.middle_oracle.unwrap_or(true) && self.end_clauses.is_member()
    }
}

fn refuse_unless(an: &TripleAnalysis) -> Result<()> {
    if TripleAnalysis::applies(an.construction_applies()) {
        return Ok(());
    }
    let failed: Vec<String> = an
        .cover_hypotheses
        .iter()
        .filter(|h| !TripleAnalysis::applies(h.verdict))
        .map(|h| h.name.clone())
        .collect();
    Err(Error::Refused(failed.join("; ")))
}

fn beyond(what: &str) -> Error {
    Error::OutOfCap(format!("no {what} inside the inventory"))
}

/// For `(X, Y)_f`: an `X`-cover `alpha: P -> X`, the pullback `T` of
/// `Hom_A(M, alpha)` and `f`, and a `Y`-cover `e: Q -> T` give
/// `0 -> K -> (P, Q)_{g e} -> (X, Y)_f -> 0`.
pub fn enough_projectives_cover(an: &TripleAnalysis, i: usize) -> Result<Construction> {
    if an.cat.side() != Side::E {
        return Err(Error::Invalid("projective covers are built on side E".into()));
    }
    refuse_unless(an)?;
    let tri = an.cat.triangular();
    let m = tri.bimodule();
    let (x, y) = (an.cat.x(), an.cat.y());
    let target = &an.cat.entries()[i];
    let t = &target.triple_h;

    let (xi, x_iso) = x.lookup_iso(&t.x)?.ok_or_else(|| beyond("X component"))?;
    let x_step = an.x_es.projective_cover(x, xi)?.ok_or_else(|| beyond("X-cover"))?;
    let alpha = x_iso.compose(&x_step.map)?;
    let p = alpha.source.clone();
    let hom_alpha = m.hom_map(&alpha, &m.hom_mx(&p)?, &t.hom);
    let sq = pullback(&hom_alpha, &t.phi)?;
    let (beta, g) = (sq.a, sq.f);

    let (ti, t_iso) = y.lookup_iso(&beta.source)?.ok_or_else(|| beyond("pullback in Y"))?;
    let y_step = an.y_es.projective_cover(y, ti)?.ok_or_else(|| beyond("Y-cover"))?;
    let e = t_iso.compose(&y_step.map)?;
    let q = e.source.clone();

    let mid = tri.triple_h(&p, &q, g.compose(&e)?.matrix)?;
    let h = tri.reph_hom(alpha, beta.compose(&e)?, &mid, t)?;
    let middle = TripleObject::from_triple_h(tri, Side::E, mid)?;
    let epi = tri.hom_to_module(&h, &middle.module, &target.module)?;
    let seq = ShortExactSeq::new(kernel_cokernel(&epi)?.inclusion, epi)?;

    let middle_criterion = an.x_es.projective[x_step.object] && an.y_es.relative_projective(y, &q)?.is_none();
    let middle_oracle = an.cat.find(&middle.module)?.map(|k| an.es.projective[k]);
    let end_clauses = an.cat.clauses(seq.left())?.1;
    Ok(Construction {
        object: i,
        seq,
        middle,
        x_step,
        y_step,
        middle_criterion,
        middle_oracle,
        end_clauses,
    })
}

/// Dual of [`enough_projectives_cover`]: a `Y`-hull `beta: Y -> J`, the
/// pushout `T` of `f` and `M (x) beta`, and an `X`-hull `e: T -> I` give
/// `0 -> (X, Y)_f -> (I, J)_{e g} -> C -> 0`.
pub fn enough_injectives_hull(an: &TripleAnalysis, i: usize) -> Result<Construction> {
    if an.cat.side() != Side::M {
        return Err(Error::Invalid("injective hulls are built on side M".into()));
    }
    refuse_unless(an)?;
    let tri = an.cat.triangular();
    let m = tri.bimodule();
    let (x, y) = (an.cat.x(), an.cat.y());
    let source = &an.cat.entries()[i];
    let t = &source.triple;
    let inverse = |h: crate::algebra::ModuleHom| h.inverse().ok_or_else(|| Error::Invalid("isomorphism is not invertible".into()));

    let (yi, y_iso) = y.lookup_iso(&t.y)?.ok_or_else(|| beyond("Y component"))?;
    let y_step = an.y_es.injective_hull(y, yi)?.ok_or_else(|| beyond("Y-hull"))?;
    let beta = y_step.map.compose(&inverse(y_iso)?)?;
    let j = beta.target.clone();
    let tensor_j = m.tensor(&j)?;
    let m_beta = m.tensor_map(&beta, &t.tensor, &tensor_j);
    let sq = pushout(&t.phi, &m_beta)?;
    let (a, g) = (sq.g, sq.b);

    let (ti, t_iso) = x.lookup_iso(&a.target)?.ok_or_else(|| beyond("pushout in X"))?;
    let x_step = an.x_es.injective_hull(x, ti)?.ok_or_else(|| beyond("X-hull"))?;
    let e = x_step.map.compose(&inverse(t_iso)?)?;
    let im = e.target.clone();

    let mid = tri.triple(&im, &j, e.compose(&g)?.matrix)?;
    let h = tri.rep_hom(e.compose(&a)?, beta, t, &mid)?;
    let middle = TripleObject::from_triple(tri, Side::M, mid)?;
    let mono = tri.hom_to_module(&h, &source.module, &middle.module)?;
    let seq = ShortExactSeq::new(mono.clone(), kernel_cokernel(&mono)?.projection)?;

    let middle_criterion = an.y_es.injective[y_step.object] && an.x_es.relative_injective(x, &im)?.is_none();
    let middle_oracle = an.cat.find(&middle.module)?.map(|k| an.es.injective[k]);
    let end_clauses = an.cat.clauses(seq.right())?.1;
    Ok(Construction {
        object: i,
        seq,
        middle,
        x_step,
        y_step,
        middle_criterion,
        middle_oracle,
        end_clauses,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::{Algebra, AlgebraRef, Module};
    use crate::bimodule::Bimodule;
    use crate::linalg::Matrix;
    use crate::rep::Triangular;
    use crate::subcat::{Budgets, SubcategorySpec};

    fn simple(a: &AlgebraRef) -> Module {
        let p = a.modulus();
        Module::new(a, 1, vec![Matrix::identity(p, 1), Matrix::zeros(p, 1, 1)]).unwrap()
    }

    fn dual_numbers(side: Side) -> TripleAnalysis {
        let a = Algebra::truncated_polynomial(2, 2).unwrap();
        let tri = Arc::new(Triangular::new(&Bimodule::regular(&a)).unwrap());
        let all = SubcategorySpec::all_up_to_cap(&a, vec![simple(&a), Module::regular(&a)], 4).unwrap();
        let cat = TripleCategory::new(side, &tri, &all, &all, 4, 4, Budgets::default()).unwrap();
        TripleAnalysis::new(cat).unwrap()
    }

    #[test]
    fn criterion_matches_oracle_on_dual_numbers() {
        for side in [Side::E, Side::M] {
            let an = dual_numbers(side);
            assert!(an.criterion_applies().passed(), "{:?}", an.classify_hypotheses);
            let all = classify_all(&an).unwrap();
            assert!(all.iter().all(|c| c.agree == Some(true)), "{side:?}");
            assert_eq!(all.iter().filter(|c| c.result).count(), 6);
        }
    }

    #[test]
    fn covers_and_hulls_on_dual_numbers() {
        let an = dual_numbers(Side::E);
        let mut built = 0;
        for i in 0..an.cat.len() {
            match enough_projectives_cover(&an, i) {
                Ok(c) => {
                    assert!(c.verified(), "object {i}: {c:?}");
                    assert_eq!(c.seq.right(), &an.cat.entries()[i].module);
                    built += 1;
                }
                Err(Error::OutOfCap(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
        assert!(built > 0);
        let an = dual_numbers(Side::M);
        for i in 0..an.cat.len() {
            match enough_injectives_hull(&an, i) {
                Ok(c) => assert!(c.verified(), "object {i}: {c:?}"),
                Err(Error::OutOfCap(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn wrong_side_is_rejected() {
        let an = dual_numbers(Side::M);
        assert!(e_classify_projective(&an, 0).is_err());
        assert!(enough_projectives_cover(&an, 0).is_err());
    }
}
