use serde::Serialize;

use crate::error::Result;

use super::classify::TripleAnalysis;
use super::exact::{ExactStructure, FrobeniusSummary};
use super::hypotheses::{direct_report, is_coresolving, is_resolving, Hypothesis, ResolvingReport};
use super::inventory::{ExactInventory, Membership, SubcategorySpec};
use super::triples::Side;
use super::Verdict;

/// `E(X, M, Y)` co-resolving (side `E`) or `M(X, M, Y)` resolving
/// (side `M`), decided from the components and directly on the triples.
#[derive(Clone, Debug, Serialize)]
pub struct TripleResolving {
    pub x: ResolvingReport,
    pub y: ResolvingReport,
    /// Both components (co-)resolving plus the Ext (Tor) vanishing clause.
    pub criterion: Verdict,
    pub direct: ResolvingReport,
    /// `None` when either side is only partially decided.
    pub agree: Option<bool>,
}

fn decided(v: Verdict) -> Option<bool> {
    match v {
        Verdict::Pass => Some(true),
        Verdict::Fail => Some(false),
        _ => None,
    }
}

pub fn triple_resolving(an: &TripleAnalysis) -> Result<TripleResolving> {
    let m = an.cat.triangular().bimodule();
    let (x, y, direct) = match an.cat.side() {
        Side::E => (
            is_coresolving(an.cat.x(), Some(m))?,
            is_coresolving(an.cat.y(), None)?,
            direct_report(&an.cat, "E(X, M, Y)", true)?,
        ),
        Side::M => (
            is_resolving(an.cat.x(), None)?,
            is_resolving(an.cat.y(), Some(m))?,
            direct_report(&an.cat, "M(X, M, Y)", false)?,
        ),
    };
    let criterion = x.verdict.and(y.verdict);
    let agree = decided(criterion).zip(decided(direct.verdict)).map(|(a, b)| a == b);
    Ok(TripleResolving {
        x,
        y,
        criterion,
        direct,
        agree,
    })
}

/// The three equivalent statements: the triple category is Frobenius;
/// both components are Frobenius and the comparison functor carries
/// injectives (statement 2) or projectives (statement 3) of one component
/// into those of the other.
#[derive(Clone, Debug, Serialize)]
pub struct FrobeniusReport {
    pub side: Side,
    pub inclusion: Hypothesis,
    pub resolving: TripleResolving,
    pub hypotheses: Verdict,
    pub triple: FrobeniusSummary,
    pub x: FrobeniusSummary,
    pub y: FrobeniusSummary,
    pub injectives_carried: Hypothesis,
    pub projectives_carried: Hypothesis,
    pub statements: [Verdict; 3],
    /// The three verdicts coincide; `None` when the hypotheses fail.
    pub consistent: Option<bool>,
    /// Statement (1) when the hypotheses hold, `Refused` otherwise.
    pub verdict: Verdict,
}

/// Images of the selected source members under `Hom_A(M, -)` (side `E`)
/// or `M (x)_B -` (side `M`) are among the selected target members.
fn carried(
    an: &TripleAnalysis,
    source: (&SubcategorySpec, &[usize]),
    target: (&SubcategorySpec, &ExactStructure),
    injective: bool,
    name: &str,
) -> Result<Hypothesis> {
    let m = an.cat.triangular().bimodule();
    let mut verdict = Verdict::Pass;
    let mut witness = None;
    for &i in source.1 {
        let member = &source.0.members()[i];
        let image = match an.cat.side() {
            Side::E => m.hom_mx(member)?.module,
            Side::M => m.tensor(member)?.module,
        };
        let flags = if injective { &target.1.injective } else { &target.1.projective };
        let v = match target.0.lookup(&image)? {
            Membership::Member { index } => Verdict::from_bool(flags[index]),
            Membership::NonMember { .. } => Verdict::Fail,
            _ => Verdict::Partial,
        };
        if v != Verdict::Pass && witness.is_none() {
            witness = Some(format!("image of {} (dim {}) fails", source.0.label(i), image.dim()));
        }
        verdict = verdict.and(v);
    }
    Ok(Hypothesis {
        name: name.into(),
        verdict,
        witness,
    })
}

pub fn frobenius_check(an: &TripleAnalysis) -> Result<FrobeniusReport> {
    let side = an.cat.side();
    let (x, y) = (an.cat.x(), an.cat.y());
    // Hom_A(M, X) in Y, or M (x) Y in X.
    let inclusion = an.cover_hypotheses[2].clone();
    let resolving = triple_resolving(an)?;
    let hypotheses = inclusion.verdict.and(resolving.criterion);

    let triple = an.es.frobenius(&an.cat)?;
    let xs = an.x_es.frobenius(x)?;
    let ys = an.y_es.frobenius(y)?;
    let (injectives_carried, projectives_carried) = match side {
        Side::E => (
            carried(an, (x, &xs.injectives), (y, &an.y_es), true, "Hom_A(M, I(X)) lies in I(Y)")?,
            carried(an, (x, &xs.projectives), (y, &an.y_es), false, "Hom_A(M, P(X)) lies in P(Y)")?,
        ),
        Side::M => (
            carried(an, (y, &ys.injectives), (x, &an.x_es), true, "M (x) I(Y) lies in I(X)")?,
            carried(an, (y, &ys.projectives), (x, &an.x_es), false, "M (x) P(Y) lies in P(X)")?,
        ),
    };
    let both = xs.verdict.and(ys.verdict);
    let statements = [
        triple.verdict,
        both.and(injectives_carried.verdict),
        both.and(projectives_carried.verdict),
    ];
    let holds = matches!(hypotheses, Verdict::Pass | Verdict::Partial);
    let consistent = holds.then(|| statements.iter().all(|s| s.passed() == statements[0].passed()));
    Ok(FrobeniusReport {
        side,
        inclusion,
        resolving,
        hypotheses,
        triple,
        x: xs,
        y: ys,
        injectives_carried,
        projectives_carried,
        statements,
        consistent,
        verdict: if holds { statements[0] } else { Verdict::Refused },
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
    use crate::subcat::{Budgets, TripleCategory};

    fn simple(a: &AlgebraRef) -> Module {
        let p = a.modulus();
        Module::new(a, 1, vec![Matrix::identity(p, 1), Matrix::zeros(p, 1, 1)]).unwrap()
    }

    #[test]
    fn dual_numbers_statements_agree() {
        let a = Algebra::truncated_polynomial(2, 2).unwrap();
        let tri = Arc::new(Triangular::new(&Bimodule::regular(&a)).unwrap());
        let all = SubcategorySpec::all_up_to_cap(&a, vec![simple(&a), Module::regular(&a)], 4).unwrap();
        for side in [Side::E, Side::M] {
            let cat = TripleCategory::new(side, &tri, &all, &all, 4, 4, Budgets::default()).unwrap();
            let an = TripleAnalysis::new(cat).unwrap();
            let r = frobenius_check(&an).unwrap();
            assert_eq!(r.hypotheses, Verdict::Pass, "{side:?}: {:?}", r.resolving);
            assert_eq!(r.statements, [Verdict::Pass; 3]);
            assert_eq!(r.consistent, Some(true));
            assert_eq!(r.resolving.agree, Some(true));
        }
    }
}
