use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::{Module, ModuleHom, ShortExactSeq};
use crate::diagram::{snake, verify_pushout_pullback, CommSquare, SnakeInput, SquareVerdict};
use crate::error::{Error, Result};
use crate::subcat::Budgets;

use super::manifest::{matrix, parse_json, resolve, AlgebraDecl, ManifestFile, ModuleDecl, Rows};
use super::report::{CheckReport, Outcome, Report};

/// Explicit squares and snake diagrams over declared modules.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramBundle {
    pub version: u32,
    #[serde(default)]
    pub algebras: BTreeMap<String, AlgebraDecl>,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleDecl>,
    #[serde(default)]
    pub squares: Vec<SquareDecl>,
    #[serde(default)]
    pub snakes: Vec<SnakeDecl>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDecl {
    pub source: String,
    pub target: String,
    pub matrix: Rows,
}

/// `a: A -> C`, `f: A -> B`, `b: B -> D`, `g: C -> D`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SquareDecl {
    pub name: String,
    pub a: MapDecl,
    pub f: MapDecl,
    pub b: MapDecl,
    pub g: MapDecl,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnakeDecl {
    pub name: String,
    pub top: [MapDecl; 2],
    pub bottom: [MapDecl; 2],
    pub alpha: MapDecl,
    pub beta: MapDecl,
    pub gamma: MapDecl,
}

pub fn parse_bundle(text: &str) -> Result<DiagramBundle> {
    parse_json(text)
}

fn map(modules: &BTreeMap<String, Module>, d: &MapDecl) -> Result<ModuleHom> {
    let get = |n: &str| modules.get(n).ok_or_else(|| Error::Dangling(format!("no module named {n:?}")));
    let (s, t) = (get(&d.source)?, get(&d.target)?);
    let what = format!("map {} -> {}", d.source, d.target);
    let m = matrix(s.modulus(), &d.matrix, (t.dim(), s.dim()), &what)?;
    ModuleHom::new(s, t, m).map_err(|e| e.context(&what))
}

/// Verifies every square with [`verify_pushout_pullback`] and every snake
/// diagram for exactness; one check per diagram.
pub fn verify_bundle(bundle: &DiagramBundle) -> Result<Report> {
    let file = ManifestFile {
        version: bundle.version,
        budgets: Budgets::default(),
        algebras: bundle.algebras.clone(),
        modules: bundle.modules.clone(),
        bimodules: BTreeMap::new(),
        subcategories: BTreeMap::new(),
        triples: BTreeMap::new(),
        categories: BTreeMap::new(),
        suites: BTreeMap::new(),
    };
    let resolved = resolve(&file)?;
    let modules = &resolved.modules;
    let mut report = Report::new("diagram-bundle", 0, Budgets::default());
    for s in &bundle.squares {
        let ctx = |e: Error| e.context(&format!("square {}", s.name));
        let sq = CommSquare::new(map(modules, &s.a)?, map(modules, &s.f)?, map(modules, &s.b)?, map(modules, &s.g)?)
            .map_err(ctx)?;
        let r = verify_pushout_pullback(&sq).map_err(ctx)?;
        let failed = r.conclusions.iter().find(|c| !c.holds).map(|c| c.name.clone());
        let (verdict, notes) = match r.verdict {
            SquareVerdict::Pass => (Outcome::Pass, vec![]),
            SquareVerdict::Fail => (Outcome::Fail, vec![]),
            SquareVerdict::NoConclusion => (Outcome::Pass, vec!["no conclusion applies to this square".into()]),
        };
        let witness = (verdict == Outcome::Fail)
            .then(|| failed.unwrap_or_else(|| "rows have a common end term but the square is not bicartesian".into()));
        report.checks.push(CheckReport {
            name: s.name.clone(),
            check: "square".into(),
            verdict,
            witness,
            missing_hypothesis: None,
            notes,
            details: serde_json::to_value(&r).expect("reports serialize"),
        });
    }
    for s in &bundle.snakes {
        let ctx = |e: Error| e.context(&format!("snake {}", s.name));
        let top = ShortExactSeq::new(map(modules, &s.top[0])?, map(modules, &s.top[1])?).map_err(ctx)?;
        let bottom = ShortExactSeq::new(map(modules, &s.bottom[0])?, map(modules, &s.bottom[1])?).map_err(ctx)?;
        let input = SnakeInput {
            top,
            bottom,
            alpha: map(modules, &s.alpha)?,
            beta: map(modules, &s.beta)?,
            gamma: map(modules, &s.gamma)?,
        };
        let r = snake(&input).map_err(ctx)?;
        let verdict = if r.exact() { Outcome::Pass } else { Outcome::Fail };
        report.checks.push(CheckReport {
            name: s.name.clone(),
            check: "snake".into(),
            verdict,
            witness: (!r.exact()).then(|| format!("not exact at nodes {:?}", r.exact_at)),
            missing_hypothesis: None,
            notes: vec![],
            details: json!({ "exact_at": r.exact_at, "delta_rank": r.delta.matrix.rank() }),
        });
    }
    Ok(report)
}
