use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{is_injective, is_projective, AlgebraRef};
use crate::diagram::{pullback, pushout, random, snake, square_conclusions, verify_pushout_pullback, SquareVerdict};
use crate::error::{Error, Result};
use crate::stable::{adjoint_pairs, verify_recollement};
use crate::subcat::{
    check_closure, check_condition_star, classify_all, frobenius_check, is_coresolving, is_resolving, perp_inclusion,
    Hypothesis, Side, TripleAnalysis, Verdict,
};

use super::manifest::{Check, CheckDecl, DiagramProperty, FixtureManifest, ResolvedTriple};
use super::report::{CheckReport, Outcome, Report};

impl Check {
    pub fn kind(&self) -> &'static str {
        match self {
            Check::Classify { .. } => "classify",
            Check::ClassifyTriple { .. } => "classify_triple",
            Check::Closure { .. } => "closure",
            Check::Coresolving { .. } => "coresolving",
            Check::Resolving { .. } => "resolving",
            Check::Frobenius { .. } => "frobenius",
            Check::ConditionStar { .. } => "condition_star",
            Check::Adjoint { .. } => "adjoint",
            Check::Recollement { .. } => "recollement",
            Check::DiagramProperty { .. } => "diagram_property",
            Check::Perp { .. } => "perp",
        }
    }

    /// The triple analysis the check runs on, if any.
    fn analysis_key(&self) -> Option<(String, Side)> {
        match self {
            Check::Classify { category, side }
            | Check::Frobenius { category, side }
            | Check::Adjoint { category, side }
            | Check::Recollement { category, side } => Some((category.clone(), *side)),
            Check::ConditionStar { category } => Some((category.clone(), Side::E)),
            _ => None,
        }
    }
}

type Analyses = BTreeMap<(String, Side), TripleAnalysis>;

/// Runs the checks of `suite` in declaration order. Checks run
/// concurrently; randomized checks draw from an RNG seeded by `seed` and
/// the check's position, so the report depends only on the manifest and
/// the seed.
pub fn run_suite(m: &FixtureManifest, suite: &str, seed: u64) -> Result<Report> {
    let decl = m.suites.get(suite).ok_or_else(|| Error::UnknownSuite(suite.to_string()))?;
    run_checks(m, suite, &decl.checks, seed)
}

pub fn run_checks(m: &FixtureManifest, suite: &str, checks: &[CheckDecl], seed: u64) -> Result<Report> {
    let mut keys: Vec<(String, Side)> = checks.iter().filter_map(|c| c.check.analysis_key()).collect();
    keys.sort();
    keys.dedup();
    let analyses: Analyses = keys
        .into_par_iter()
        .map(|(name, side)| {
            let f = m
                .categories
                .get(&name)
                .ok_or_else(|| Error::Dangling(format!("no category named {name:?}")))?;
            let an = f.analysis(side).map_err(|e| e.context(&format!("category {name}")))?;
            Ok(((name, side), an))
        })
        .collect::<Result<_>>()?;
    let results: Vec<CheckReport> = checks
        .par_iter()
        .enumerate()
        .map(|(k, c)| {
            let rng_seed = seed.wrapping_add((k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            run_check(m, &analyses, c, rng_seed).map_err(|e| e.context(&format!("check {}", c.name)))
        })
        .collect::<Result<_>>()?;
    let mut report = Report::new(suite, seed, m.budgets);
    report.checks = results;
    Ok(report)
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn first_unmet(hs: &[Hypothesis]) -> Option<&Hypothesis> {
    hs.iter().find(|h| h.verdict != Verdict::Pass)
}

struct Evaluation {
    verdict: Verdict,
    witness: Option<String>,
    missing: Option<String>,
    notes: Vec<String>,
    details: Value,
}

impl Evaluation {
    fn new(verdict: Verdict, details: Value) -> Self {
        Evaluation {
            verdict,
            witness: None,
            missing: None,
            notes: vec![],
            details,
        }
    }

    fn witness(mut self, w: Option<String>) -> Self {
        if self.verdict != Verdict::Pass {
            self.witness = w;
        }
        self
    }
}

fn run_check(m: &FixtureManifest, analyses: &Analyses, c: &CheckDecl, seed: u64) -> Result<CheckReport> {
    let analysis = |key: Option<(String, Side)>| analyses.get(&key.expect("analysed check")).expect("analysed above");
    let out = match evaluate(m, || analysis(c.check.analysis_key()), &c.check, seed) {
        Ok(o) => o,
        Err(Error::BudgetExceeded(msg)) | Err(Error::OutOfCap(msg)) => Evaluation {
            verdict: Verdict::Partial,
            witness: None,
            missing: None,
            notes: vec![msg],
            details: Value::Null,
        },
        Err(Error::Refused(msg)) => Evaluation {
            verdict: Verdict::Refused,
            witness: None,
            missing: Some(msg),
            notes: vec![],
            details: Value::Null,
        },
        Err(e) => return Err(e),
    };
    Ok(CheckReport {
        name: c.name.clone(),
        check: c.check.kind().to_string(),
        verdict: Outcome::from(out.verdict),
        witness: out.witness,
        missing_hypothesis: out.missing,
        notes: out.notes,
        details: out.details,
    })
}

fn evaluate<'a>(
    m: &FixtureManifest,
    analysis: impl Fn() -> &'a TripleAnalysis,
    check: &Check,
    seed: u64,
) -> Result<Evaluation> {
    Ok(match check {
        Check::Classify { .. } => {
            let an = analysis();
            let rows = classify_all(an)?;
            let disagree = rows.iter().find(|r| r.agree == Some(false));
            let refused = rows.iter().any(|r| r.criterion.is_none());
            let verdict = if disagree.is_some() {
                Verdict::Fail
            } else if refused {
                Verdict::Refused
            } else {
                Verdict::Pass
            };
            let mut o = Evaluation::new(verdict, json!({ "objects": rows.len(), "rows": to_value(&rows) }))
                .witness(disagree.map(|r| format!("criterion and lifting oracle disagree on {}", r.label)));
            let unmet = first_unmet(&an.classify_hypotheses);
            if verdict == Verdict::Refused {
                o.missing = unmet.map(|h| h.name.clone());
            } else if let Some(h) = unmet {
                o.notes.push(format!("hypothesis only partly decided within the caps: {}", h.name));
            }
            o
        }
        Check::ClassifyTriple { triple } => {
            let t = &m.triples[triple];
            match t {
                ResolvedTriple::Rep(tri, t) => {
                    let crit = tri.classify_projective_rep(t)?;
                    let oracle = is_projective(&tri.to_module(t))?.is_some();
                    Evaluation::new(
                        Verdict::from_bool(crit.holds() == oracle),
                        json!({ "kind": "rep", "criteria": to_value(&crit), "projective": crit.holds(), "oracle": oracle }),
                    )
                    .witness(Some(format!("criterion says {} but the Lambda-module says {oracle}", crit.holds())))
                }
                ResolvedTriple::Reph(tri, t) => {
                    let crit = tri.classify_injective_reph(t)?;
                    let oracle = is_injective(&tri.h_to_module(t)?)?;
                    Evaluation::new(
                        Verdict::from_bool(crit.holds() == oracle),
                        json!({ "kind": "reph", "criteria": to_value(&crit), "injective": crit.holds(), "oracle": oracle }),
                    )
                    .witness(Some(format!("criterion says {} but the Lambda-module says {oracle}", crit.holds())))
                }
            }
        }
        Check::Closure { subcategory, kind } => {
            let r = check_closure(&m.subcategories[subcategory], *kind)?;
            let w = r.witness.as_ref().map(|w| w.description.clone());
            let mut o = Evaluation::new(r.verdict, to_value(&r)).witness(w);
            o.notes = r.notes.clone();
            o
        }
        Check::Coresolving { subcategory, bimodule } | Check::Resolving { subcategory, bimodule } => {
            let s = &m.subcategories[subcategory];
            let b = bimodule.as_ref().map(|b| &m.bimodules[b]);
            let r = if matches!(check, Check::Coresolving { .. }) {
                is_coresolving(s, b)?
            } else {
                is_resolving(s, b)?
            };
            Evaluation::new(r.verdict, to_value(&r)).witness(r.failing_clause())
        }
        Check::Frobenius { .. } => {
            let an = analysis();
            let r = frobenius_check(an)?;
            let mut o = Evaluation::new(r.verdict, to_value(&r));
            if r.verdict == Verdict::Refused {
                o.missing = if r.inclusion.verdict != Verdict::Pass {
                    Some(r.inclusion.name.clone())
                } else {
                    Some(
                        r.resolving
                            .x
                            .failing_clause()
                            .or_else(|| r.resolving.y.failing_clause())
                            .unwrap_or_else(|| "the triple category is not (co-)resolving".into()),
                    )
                };
            } else if r.verdict == Verdict::Fail {
                o.witness = r
                    .injectives_carried
                    .witness
                    .clone()
                    .or_else(|| r.projectives_carried.witness.clone())
                    .or_else(|| Some("projectives and injectives differ".into()));
            }
            o
        }
        Check::ConditionStar { .. } => {
            let an = analysis();
            let r = check_condition_star(an.cat.triangular(), an.cat.x(), &an.x_es)?;
            Evaluation::new(r.verdict, to_value(&r)).witness(r.witness.clone())
        }
        Check::Adjoint { .. } => {
            let an = analysis();
            let rs = adjoint_pairs(an, false)?;
            let verdict = rs.iter().fold(Verdict::Pass, |v, r| v.and(r.verdict));
            let w = rs.iter().find_map(|r| r.witnesses.first().cloned());
            Evaluation::new(verdict, to_value(&rs)).witness(w)
        }
        Check::Recollement { .. } => {
            let an = analysis();
            let r = verify_recollement(an)?;
            let mut o = Evaluation::new(r.verdict, to_value(&r));
            o.missing = r.refusal.clone();
            o.witness = recollement_witness(&r);
            o
        }
        Check::DiagramProperty {
            algebra,
            property,
            trials,
            max_dim,
        } => diagram_property(&m.algebras[algebra], *property, *trials, *max_dim, seed)?,
        Check::Perp {
            bimodule,
            subcategory,
            kind,
        } => {
            let h = perp_inclusion(&m.bimodules[bimodule], &m.subcategories[subcategory], *kind)?;
            Evaluation::new(h.verdict, to_value(&h)).witness(h.witness.clone())
        }
    })
}

fn recollement_witness(r: &crate::stable::RecollementReport) -> Option<String> {
    if r.verdict != Verdict::Fail {
        return None;
    }
    if let Some(c) = r.fully_faithful.iter().find(|c| c.verdict == Verdict::Fail) {
        return Some(format!("clause (a): {} is not fully faithful", c.functor));
    }
    if let Some(c) = r.image.as_ref().filter(|c| c.verdict == Verdict::Fail) {
        let row = c.rows.iter().find(|row| row.in_kernel != row.in_image);
        return Some(match row {
            Some(row) => format!("clause (b): object {} breaks the image/kernel match", row.object),
            None => "clause (b) fails".into(),
        });
    }
    if let Some(c) = r.torsion.iter().find(|c| c.verdict == Verdict::Fail) {
        return Some(format!("clause (c): torsion pair {} fails", c.pair));
    }
    r.audit.as_ref().filter(|a| a.verdict == Verdict::Fail).map(|a| {
        let first = a.rows.iter().find(|row| row.quotient != row.modulo_image);
        match first {
            Some(row) => format!(
                "clause (d): {} of {} pairs differ, first (u, v) = ({}, {}) with {} against {}",
                a.mismatches,
                a.rows.len(),
                row.u,
                row.v,
                row.modulo_image,
                row.quotient
            ),
            None => format!("clause (d): {} pairs differ", a.mismatches),
        }
    })
}

fn diagram_property(a: &AlgebraRef, property: DiagramProperty, trials: usize, max_dim: usize, seed: u64) -> Result<Evaluation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0usize;
    let mut conclusions = 0usize;
    let mut witness = None;
    for t in 0..trials {
        let failed: Option<String> = match property {
            DiagramProperty::Squares => {
                let span_a = random::module(a, max_dim, &mut rng);
                let (b, c) = (random::module(a, max_dim, &mut rng), random::module(a, max_dim, &mut rng));
                let (f, g) = (random::hom(&span_a, &b, &mut rng), random::hom(&span_a, &c, &mut rng));
                let po = pushout(&g, &f)?;
                let (d, e) = (random::module(a, max_dim, &mut rng), random::module(a, max_dim, &mut rng));
                let corner = random::module(a, max_dim, &mut rng);
                let (u, v) = (random::hom(&d, &corner, &mut rng), random::hom(&e, &corner, &mut rng));
                let pb = pullback(&u, &v)?;
                let sq = random::square(a, max_dim, &mut rng);
                let mut bad = None;
                for (what, s) in [("pushout", &po), ("pullback", &pb)] {
                    let cs = square_conclusions(s)?;
                    conclusions += cs.len();
                    if let Some(c) = cs.iter().find(|c| !c.holds) {
                        bad.get_or_insert(format!("{what}: {}", c.name));
                    }
                }
                let r = verify_pushout_pullback(&sq)?;
                conclusions += r.conclusions.len();
                if r.verdict == SquareVerdict::Fail {
                    bad.get_or_insert("random square fails verify_pushout_pullback".into());
                }
                bad
            }
            DiagramProperty::Snake => {
                let input = random::snake_input(a, max_dim, &mut rng);
                let r = snake(&input)?;
                conclusions += 6;
                (!r.exact()).then(|| format!("snake sequence not exact at nodes {:?}", r.exact_at))
            }
        };
        if let Some(w) = failed {
            failures += 1;
            witness.get_or_insert(format!("trial {t}: {w}"));
        }
    }
    let details = json!({ "trials": trials, "failures": failures, "conclusions_checked": conclusions });
    Ok(Evaluation::new(Verdict::from_bool(failures == 0), details).witness(witness))
}
