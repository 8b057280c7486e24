use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{ext_dim, ShortExactSeq};
use crate::bimodule::{Bimodule, PerpKind};
use crate::error::Result;
use crate::rep::Triangular;

use super::closure::{check_closure, ClosureKind, ClosureReport};
use super::exact::ExactStructure;
use super::inventory::{ExactInventory, Membership, SubcategorySpec};
use super::Verdict;

/// A named hypothesis with its verdict and, on failure, a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub name: String,
    pub verdict: Verdict,
    pub witness: Option<String>,
}

impl Hypothesis {
    fn new(name: &str, verdict: Verdict, witness: Option<String>) -> Self {
        Hypothesis {
            name: name.into(),
            verdict,
            witness,
        }
    }

    /// Either hypothesis; the name joins both.
    pub fn either(a: Hypothesis, b: Hypothesis) -> Hypothesis {
        let verdict = a.verdict.or(b.verdict);
        let witness = (!verdict.passed()).then(|| {
            [a.witness, b.witness]
                .into_iter()
                .flatten()
                .collect::<Vec<_>>()
                .join("; ")
        });
        Hypothesis::new(&format!("{} or {}", a.name, b.name), verdict, witness)
    }
}

/// Folds verdicts of a per-member scan: the first failure becomes the witness.
fn scan(name: &str, items: Vec<(Verdict, String)>) -> Hypothesis {
    let mut verdict = Verdict::Pass;
    let mut witness = None;
    for (v, w) in items {
        if v != Verdict::Pass && witness.is_none() || v == Verdict::Fail && verdict != Verdict::Fail {
            witness = Some(w);
        }
        verdict = verdict.and(v);
    }
    Hypothesis::new(name, verdict, witness)
}

fn member_verdict(m: &Membership) -> Verdict {
    match m {
        Membership::Member { .. } => Verdict::Pass,
        Membership::NonMember { .. } => Verdict::Fail,
        _ => Verdict::Partial,
    }
}

pub const EXT_CLAUSE: &str = "Ext^1_A(M, X) = 0 for X in X";
pub const TOR_CLAUSE: &str = "Tor_1^B(M, Y) = 0 for Y in Y";
pub const HOM_CLAUSE: &str = "Hom_A(M, X) lies in Y for X in X";
pub const TENSOR_CLAUSE: &str = "M (x)_B Y lies in X for Y in Y";

pub fn ext_clause(m: &Bimodule, x: &SubcategorySpec) -> Result<Hypothesis> {
    let lm = m.left_module();
    let items = x
        .members()
        .par_iter()
        .enumerate()
        .map(|(i, xm)| {
            let d = ext_dim(&lm, xm, 1)?;
            Ok((Verdict::from_bool(d == 0), format!("dim Ext^1(M, {}) = {d}", x.labels()[i])))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(scan(EXT_CLAUSE, items))
}

pub fn tor_clause(m: &Bimodule, y: &SubcategorySpec) -> Result<Hypothesis> {
    let items = y
        .members()
        .par_iter()
        .enumerate()
        .map(|(i, ym)| {
            let d = m.tor_dim(ym, 1)?;
            Ok((Verdict::from_bool(d == 0), format!("dim Tor_1(M, {}) = {d}", y.labels()[i])))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(scan(TOR_CLAUSE, items))
}

pub fn hom_clause(m: &Bimodule, x: &SubcategorySpec, y: &SubcategorySpec) -> Result<Hypothesis> {
    let mut items = Vec::new();
    for (i, xm) in x.members().iter().enumerate() {
        let h = m.hom_mx(xm)?.module;
        let mem = y.lookup(&h)?;
        items.push((member_verdict(&mem), format!("Hom_A(M, {}) (dim {}): {mem:?}", x.labels()[i], h.dim())));
    }
    Ok(scan(HOM_CLAUSE, items))
}

pub fn tensor_clause(m: &Bimodule, x: &SubcategorySpec, y: &SubcategorySpec) -> Result<Hypothesis> {
    let mut items = Vec::new();
    for (i, ym) in y.members().iter().enumerate() {
        let t = m.tensor(ym)?.module;
        let mem = x.lookup(&t)?;
        items.push((member_verdict(&mem), format!("M (x) {} (dim {}): {mem:?}", y.labels()[i], t.dim())));
    }
    Ok(scan(TENSOR_CLAUSE, items))
}

/// Every member has an injective hull (projective cover) inside the
/// inventory; members whose hull lies beyond the cap make it partial.
pub fn enough_clause<I: ExactInventory + ?Sized>(inv: &I, es: &ExactStructure, name: &str, injective: bool) -> Result<Hypothesis> {
    let cov = es.coverage(inv, !injective)?;
    let verdict = if cov.beyond_cap.is_empty() { Verdict::Pass } else { Verdict::Partial };
    let witness = cov
        .beyond_cap
        .first()
        .map(|&i| format!("no {} for {} within the caps", if injective { "hull" } else { "cover" }, inv.label(i)));
    Ok(Hypothesis::new(name, verdict, witness))
}

/// Closure clauses of a (co-)resolving subcategory plus an optional
/// vanishing clause.
#[derive(Clone, Debug, Serialize)]
pub struct ResolvingReport {
    pub subject: String,
    pub coresolving: bool,
    pub closures: Vec<ClosureReport>,
    pub vanishing: Option<Hypothesis>,
    pub verdict: Verdict,
}

impl ResolvingReport {
    /// The first failing clause, by name.
    pub fn failing_clause(&self) -> Option<String> {
        for c in &self.closures {
            if c.verdict == Verdict::Fail {
                return Some(format!("{:?}", c.kind));
            }
        }
        self.vanishing
            .as_ref()
            .filter(|h| h.verdict == Verdict::Fail)
            .map(|h| h.name.clone())
    }
}

fn closure_set<I: ExactInventory + ?Sized>(inv: &I, coresolving: bool) -> Result<Vec<ClosureReport>> {
    let kinds = if coresolving {
        [ClosureKind::ContainsInjectives, ClosureKind::Summands, ClosureKind::Extensions, ClosureKind::CokerOfMono]
    } else {
        [ClosureKind::ContainsProjectives, ClosureKind::Summands, ClosureKind::Extensions, ClosureKind::KerOfEpi]
    };
    kinds.into_iter().map(|k| check_closure(inv, k)).collect()
}

fn assemble(subject: &str, coresolving: bool, closures: Vec<ClosureReport>, vanishing: Option<Hypothesis>) -> ResolvingReport {
    let mut verdict = Verdict::Pass;
    for c in &closures {
        verdict = verdict.and(c.verdict);
    }
    if let Some(h) = &vanishing {
        verdict = verdict.and(h.verdict);
    }
    ResolvingReport {
        subject: subject.into(),
        coresolving,
        closures,
        vanishing,
        verdict,
    }
}

/// Co-resolving closure clauses; with `m`, also `Ext^1_A(M, X) = 0`.
pub fn is_coresolving(s: &SubcategorySpec, m: Option<&Bimodule>) -> Result<ResolvingReport> {
    let vanishing = m.map(|m| ext_clause(m, s)).transpose()?;
    Ok(assemble("subcategory", true, closure_set(s, true)?, vanishing))
}

/// Resolving closure clauses; with `m`, also `Tor_1^B(M, Y) = 0`.
pub fn is_resolving(s: &SubcategorySpec, m: Option<&Bimodule>) -> Result<ResolvingReport> {
    let vanishing = m.map(|m| tor_clause(m, s)).transpose()?;
    Ok(assemble("subcategory", false, closure_set(s, false)?, vanishing))
}

/// The closure clauses checked directly on an inventory of triples.
pub fn direct_report<I: ExactInventory + ?Sized>(inv: &I, subject: &str, coresolving: bool) -> Result<ResolvingReport> {
    Ok(assemble(subject, coresolving, closure_set(inv, coresolving)?, None))
}

/// Whether every short exact sequence of `X` lifts to one of triples in
/// `E(X, M, Y)`. A sequence lifts iff `Hom_A(M, -)` keeps it right exact;
/// lifts are built with `p` and verified as sequences of `Lambda`-modules.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionStar {
    pub automatic: bool,
    pub checked: usize,
    pub verdict: Verdict,
    pub witness: Option<String>,
}

pub fn check_condition_star(tri: &Triangular, x: &SubcategorySpec, x_es: &ExactStructure) -> Result<ConditionStar> {
    let m = tri.bimodule();
    let automatic = ext_clause(m, x)?.verdict == Verdict::Pass;
    let mut witness = None;
    let mut checked = 0;
    for s in &x_es.sequences {
        checked += 1;
        let lifted = lift_with_p(tri, &s.seq)?;
        if !lifted && witness.is_none() {
            witness = Some(format!(
                "Hom_A(M, -) is not right exact on the sequence {} -> {} -> {} (class {})",
                x.labels()[s.left],
                x.labels()[s.middle],
                x.labels()[s.right],
                s.class
            ));
        }
    }
    let mut verdict = Verdict::from_bool(witness.is_none());
    if verdict == Verdict::Pass && !x_es.notes.is_empty() {
        verdict = Verdict::Partial;
    }
    Ok(ConditionStar {
        automatic,
        checked,
        verdict,
        witness,
    })
}

/// Applies `p` to the sequence and checks exactness over `Lambda`.
fn lift_with_p(tri: &Triangular, seq: &ShortExactSeq) -> Result<bool> {
    let m = tri.bimodule();
    let objs = [seq.left(), seq.middle(), seq.right()]
        .into_iter()
        .map(|x| {
            let hom = m.hom_mx(x)?;
            let id = crate::linalg::Matrix::identity(x.modulus(), hom.module.dim());
            let t = tri.triple_h(x, &hom.module.clone(), id)?;
            Ok((tri.h_to_module(&t)?, t))
        })
        .collect::<Result<Vec<_>>>()?;
    let maps = [&seq.f, &seq.g]
        .into_iter()
        .enumerate()
        .map(|(k, f)| {
            let (s, t) = (&objs[k].1, &objs[k + 1].1);
            let g = m.hom_map(f, &s.hom, &t.hom);
            let h = tri.reph_hom(f.clone(), g, s, t)?;
            tri.hom_to_module(&h, &objs[k].0, &objs[k + 1].0)
        })
        .collect::<Result<Vec<_>>>()?;
    let [f, g]: [_; 2] = maps.try_into().expect("two maps");
    Ok(ShortExactSeq::new(f, g).is_ok())
}

/// Every member of `s` lies in the largest `Ext^i_A(M, -)`-vanishing
/// (`PerpKind::X`) or `Tor_i^B(M, -)`-vanishing (`PerpKind::Y`)
/// subcategory, tested up to degree `imax`.
pub fn perp_inclusion(m: &Bimodule, s: &SubcategorySpec, kind: PerpKind) -> Result<Hypothesis> {
    let imax = s.budgets().imax.unwrap_or_else(|| Bimodule::default_imax(s.algebra()));
    let perp = m.perp_inventory(s.members(), kind, imax)?;
    let witness = perp.rejected.first().map(|r| {
        let what = if kind == PerpKind::X { "Ext" } else { "Tor" };
        format!("{what}^{} with M is nonzero on {}", r.degree, s.labels()[r.index])
    });
    let name = match kind {
        PerpKind::X => format!("X lies in the Ext-orthogonal of M (degrees 1..={imax})"),
        PerpKind::Y => format!("Y lies in the Tor-orthogonal of M (degrees 1..={imax})"),
    };
    Ok(Hypothesis::new(&name, Verdict::from_bool(witness.is_none()), witness))
}
