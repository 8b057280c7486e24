use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{indecomposable_injectives, indecomposable_projectives, Algebra, AlgebraJson, AlgebraRef, Module};
use crate::bimodule::{Bimodule, PerpKind};
use crate::error::{Error, Result};
use crate::fixtures::{left_over_field, right_over_field, Fixture};
use crate::linalg::Matrix;
use crate::rep::{build_lambda, Triangular, TriangularRef, Triple, TripleH};
use crate::subcat::{Budgets, ClosureKind, Mode, Side, SubcategorySpec};

pub const MANIFEST_VERSION: u32 = 1;

/// Rows of a matrix over the field of the enclosing object.
pub type Rows = Vec<Vec<i64>>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebraDecl {
    Field { p: u32 },
    TruncatedPolynomial { p: u32, n: usize },
    UpperTriangular { p: u32, n: usize },
    StructureConstants(AlgebraJson),
    /// The triangular matrix algebra of a declared bimodule.
    Triangular { bimodule: String },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleDecl {
    Regular { algebra: String },
    /// The simple module of a local algebra whose basis starts with `1`.
    Simple { algebra: String },
    Free { algebra: String, rank: usize },
    Explicit { algebra: String, dim: usize, action: Vec<Rows> },
    DirectSum { summands: Vec<String> },
    Dual { module: String },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BimoduleDecl {
    Regular {
        algebra: String,
    },
    LeftOverField {
        module: String,
    },
    RightOverField {
        module: String,
    },
    Explicit {
        left: String,
        right: String,
        dim: usize,
        left_action: Vec<Rows>,
        right_action: Vec<Rows>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubcategoryDecl {
    pub algebra: String,
    pub mode: Mode,
    #[serde(default)]
    pub members: Vec<String>,
    /// Adds the indecomposable projective modules to the members.
    #[serde(default)]
    pub projectives: bool,
    #[serde(default)]
    pub injectives: bool,
    pub dim_cap: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TripleKind {
    Rep,
    Reph,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleDecl {
    pub bimodule: String,
    pub kind: TripleKind,
    pub x: String,
    pub y: String,
    pub map: Rows,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDecl {
    pub bimodule: String,
    pub x: String,
    pub y: String,
    /// Component caps `[x_cap, y_cap]` of the triple inventories.
    pub caps: [usize; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagramProperty {
    /// Pushouts and pullbacks of random spans and cospans, plus random
    /// commuting squares, against the kernel/cokernel conclusions.
    Squares,
    Snake,
}

/// One named check invocation.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Check {
    Classify { category: String, side: Side },
    ClassifyTriple { triple: String },
    Closure { subcategory: String, kind: ClosureKind },
    Coresolving { subcategory: String, bimodule: Option<String> },
    Resolving { subcategory: String, bimodule: Option<String> },
    Frobenius { category: String, side: Side },
    ConditionStar { category: String },
    Adjoint { category: String, side: Side },
    Recollement { category: String, side: Side },
    DiagramProperty { algebra: String, property: DiagramProperty, trials: usize, max_dim: usize },
    Perp { bimodule: String, subcategory: String, kind: PerpKind },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckDecl {
    pub name: String,
    #[serde(flatten)]
    pub check: Check,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteDecl {
    #[serde(default)]
    pub description: String,
    pub checks: Vec<CheckDecl>,
}

/// The manifest as written on disk.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestFile {
    pub version: u32,
    #[serde(default)]
    pub budgets: Budgets,
    #[serde(default)]
    pub algebras: BTreeMap<String, AlgebraDecl>,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleDecl>,
    #[serde(default)]
    pub bimodules: BTreeMap<String, BimoduleDecl>,
    #[serde(default)]
    pub subcategories: BTreeMap<String, SubcategoryDecl>,
    #[serde(default)]
    pub triples: BTreeMap<String, TripleDecl>,
    #[serde(default)]
    pub categories: BTreeMap<String, CategoryDecl>,
    #[serde(default)]
    pub suites: BTreeMap<String, SuiteDecl>,
}

/// A validated triple of either form.
#[derive(Clone, Debug)]
pub enum ResolvedTriple {
    Rep(TriangularRef, Triple),
    Reph(TriangularRef, TripleH),
}

/// A manifest whose references all resolve and whose objects all pass
/// their validators.
#[derive(Clone, Debug)]
pub struct FixtureManifest {
    pub budgets: Budgets,
    pub algebras: BTreeMap<String, AlgebraRef>,
    pub modules: BTreeMap<String, Module>,
    pub bimodules: BTreeMap<String, Bimodule>,
    pub subcategories: BTreeMap<String, SubcategorySpec>,
    pub triples: BTreeMap<String, ResolvedTriple>,
    pub categories: BTreeMap<String, Fixture>,
    pub suites: BTreeMap<String, SuiteDecl>,
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<FixtureManifest> {
    let path = path.as_ref();
    resolve(&read_manifest(path)?).map_err(|e| e.context(&path.display().to_string()))
}

/// Reads a manifest without resolving it.
pub fn read_manifest(path: impl AsRef<Path>) -> Result<ManifestFile> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_json(&text).map_err(|e| e.context(&path.display().to_string()))
}

pub fn parse_manifest(text: &str) -> Result<FixtureManifest> {
    resolve(&parse_json(text)?)
}

pub(crate) fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn resolve(file: &ManifestFile) -> Result<FixtureManifest> {
    if file.version != MANIFEST_VERSION {
        return Err(Error::Malformed(format!(
            "manifest version {} is not supported (expected {MANIFEST_VERSION})",
            file.version
        )));
    }
    let mut r = Resolver {
        file,
        visiting: BTreeSet::new(),
        out: FixtureManifest {
            budgets: file.budgets,
            algebras: BTreeMap::new(),
            modules: BTreeMap::new(),
            bimodules: BTreeMap::new(),
            subcategories: BTreeMap::new(),
            triples: BTreeMap::new(),
            categories: BTreeMap::new(),
            suites: file.suites.clone(),
        },
    };
    for name in file.algebras.keys() {
        r.algebra(name)?;
    }
    for name in file.modules.keys() {
        r.module(name)?;
    }
    for name in file.bimodules.keys() {
        r.bimodule(name)?;
    }
    for name in file.subcategories.keys() {
        r.subcategory(name)?;
    }
    for name in file.triples.keys() {
        r.triple(name)?;
    }
    for name in file.categories.keys() {
        r.category(name)?;
    }
    for (suite, decl) in &file.suites {
        for c in &decl.checks {
            check_references(&r.out, &c.check).map_err(|e| e.context(&format!("suite {suite}, check {}", c.name)))?;
        }
    }
    Ok(r.out)
}

fn dangling(kind: &str, name: &str) -> Error {
    Error::Dangling(format!("no {kind} named {name:?}"))
}

fn present<T>(map: &BTreeMap<String, T>, kind: &str, name: &str) -> Result<()> {
    if map.contains_key(name) {
        Ok(())
    } else {
        Err(dangling(kind, name))
    }
}

fn check_references(m: &FixtureManifest, c: &Check) -> Result<()> {
    match c {
        Check::Classify { category, .. }
        | Check::Frobenius { category, .. }
        | Check::ConditionStar { category }
        | Check::Adjoint { category, .. }
        | Check::Recollement { category, .. } => present(&m.categories, "category", category),
        Check::ClassifyTriple { triple } => present(&m.triples, "triple", triple),
        Check::Closure { subcategory, .. } => present(&m.subcategories, "subcategory", subcategory),
        Check::Coresolving { subcategory, bimodule } | Check::Resolving { subcategory, bimodule } => {
            present(&m.subcategories, "subcategory", subcategory)?;
            bimodule.as_ref().map_or(Ok(()), |b| present(&m.bimodules, "bimodule", b))
        }
        Check::DiagramProperty { algebra, .. } => present(&m.algebras, "algebra", algebra),
        Check::Perp { bimodule, subcategory, .. } => {
            present(&m.bimodules, "bimodule", bimodule)?;
            present(&m.subcategories, "subcategory", subcategory)
        }
    }
}

/// Checks the shape of `rows` and reduces it modulo `p`.
pub(crate) fn matrix(p: u32, rows: &Rows, shape: (usize, usize), what: &str) -> Result<Matrix> {
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return Err(Error::DimensionMismatch(format!(
            "{what} must be a {} x {} matrix",
            shape.0, shape.1
        )));
    }
    Matrix::new(p, shape.0, shape.1, rows.iter().flatten().copied().collect())
}

fn action(p: u32, mats: &[Rows], count: usize, dim: usize, what: &str) -> Result<Vec<Matrix>> {
    if mats.len() != count {
        return Err(Error::DimensionMismatch(format!(
            "{what} has {} matrices, expected one per basis element ({count})",
            mats.len()
        )));
    }
    mats.iter()
        .enumerate()
        .map(|(i, m)| matrix(p, m, (dim, dim), &format!("{what} matrix {i}")))
        .collect()
}

struct Resolver<'a> {
    file: &'a ManifestFile,
    visiting: BTreeSet<(&'static str, String)>,
    out: FixtureManifest,
}

impl Resolver<'_> {
    /// Marks `(kind, name)` as under construction, failing on a cycle.
    fn enter(&mut self, kind: &'static str, name: &str) -> Result<()> {
        if !self.visiting.insert((kind, name.to_string())) {
            return Err(Error::Invalid(format!("reference cycle through {kind} {name:?}")));
        }
        Ok(())
    }

    fn leave(&mut self, kind: &'static str, name: &str) {
        self.visiting.remove(&(kind, name.to_string()));
    }

    fn algebra(&mut self, name: &str) -> Result<AlgebraRef> {
        if let Some(a) = self.out.algebras.get(name) {
            return Ok(a.clone());
        }
        let decl = self.file.algebras.get(name).ok_or_else(|| dangling("algebra", name))?;
        self.enter("algebra", name)?;
        let built = match decl {
            AlgebraDecl::Field { p } => Algebra::field(*p),
            AlgebraDecl::TruncatedPolynomial { p, n } => Algebra::truncated_polynomial(*p, *n),
            AlgebraDecl::UpperTriangular { p, n } => Algebra::upper_triangular(*p, *n),
            AlgebraDecl::StructureConstants(raw) => Algebra::from_json(raw).and_then(|a| match a.validate() {
                Some(fail) => Err(Error::Invalid(fail.to_string())),
                None => Ok(Arc::new(a)),
            }),
            AlgebraDecl::Triangular { bimodule } => self.bimodule(bimodule).and_then(|m| build_lambda(&m)),
        }
        .map_err(|e| e.context(&format!("algebra {name}")));
        self.leave("algebra", name);
        let a = built?;
        self.out.algebras.insert(name.to_string(), a.clone());
        Ok(a)
    }

    fn module(&mut self, name: &str) -> Result<Module> {
        if let Some(m) = self.out.modules.get(name) {
            return Ok(m.clone());
        }
        let decl = self.file.modules.get(name).ok_or_else(|| dangling("module", name))?;
        self.enter("module", name)?;
        let built = self.build_module(decl).map_err(|e| e.context(&format!("module {name}")));
        self.leave("module", name);
        let m = built?;
        self.out.modules.insert(name.to_string(), m.clone());
        Ok(m)
    }

    fn build_module(&mut self, decl: &ModuleDecl) -> Result<Module> {
        match decl {
            ModuleDecl::Regular { algebra } => Ok(Module::regular(&self.algebra(algebra)?)),
            ModuleDecl::Simple { algebra } => {
                let a = self.algebra(algebra)?;
                let mut act = vec![Matrix::zeros(a.modulus(), 1, 1); a.dim()];
                act[0] = Matrix::identity(a.modulus(), 1);
                Module::new(&a, 1, act)
            }
            ModuleDecl::Free { algebra, rank } => Ok(Module::free(&self.algebra(algebra)?, *rank)),
            ModuleDecl::Explicit { algebra, dim, action: mats } => {
                let a = self.algebra(algebra)?;
                let act = action(a.modulus(), mats, a.dim(), *dim, "action")?;
                Module::new(&a, *dim, act)
            }
            ModuleDecl::DirectSum { summands } => {
                let parts: Vec<Module> = summands.iter().map(|s| self.module(s)).collect::<Result<_>>()?;
                let first = parts
                    .first()
                    .ok_or_else(|| Error::Malformed("a direct sum needs at least one summand".into()))?;
                let a = first.algebra().clone();
                let parts: Vec<Module> = parts.iter().map(|m| m.rebase(&a)).collect::<Result<_>>()?;
                Ok(Module::direct_sum_all(&a, &parts))
            }
            ModuleDecl::Dual { module } => Ok(self.module(module)?.dual()),
        }
    }

    fn bimodule(&mut self, name: &str) -> Result<Bimodule> {
        if let Some(m) = self.out.bimodules.get(name) {
            return Ok(m.clone());
        }
        let decl = self.file.bimodules.get(name).ok_or_else(|| dangling("bimodule", name))?;
        self.enter("bimodule", name)?;
        let built = self.build_bimodule(decl).map_err(|e| e.context(&format!("bimodule {name}")));
        self.leave("bimodule", name);
        let m = built?;
        self.out.bimodules.insert(name.to_string(), m.clone());
        Ok(m)
    }

    fn build_bimodule(&mut self, decl: &BimoduleDecl) -> Result<Bimodule> {
        match decl {
            BimoduleDecl::Regular { algebra } => Ok(Bimodule::regular(&self.algebra(algebra)?)),
            BimoduleDecl::LeftOverField { module } => left_over_field(&self.module(module)?),
            BimoduleDecl::RightOverField { module } => right_over_field(&self.module(module)?),
            BimoduleDecl::Explicit {
                left,
                right,
                dim,
                left_action,
                right_action,
            } => {
                let (a, b) = (self.algebra(left)?, self.algebra(right)?);
                let p = a.modulus();
                let la = action(p, left_action, a.dim(), *dim, "left action")?;
                let ra = action(p, right_action, b.dim(), *dim, "right action")?;
                Bimodule::new(&a, &b, *dim, la, ra)
            }
        }
    }

    fn subcategory(&mut self, name: &str) -> Result<SubcategorySpec> {
        if let Some(s) = self.out.subcategories.get(name) {
            return Ok(s.clone());
        }
        let decl = self.file.subcategories.get(name).ok_or_else(|| dangling("subcategory", name))?;
        let built = self.build_subcategory(decl).map_err(|e| e.context(&format!("subcategory {name}")));
        let s = built?;
        self.out.subcategories.insert(name.to_string(), s.clone());
        Ok(s)
    }

    fn build_subcategory(&mut self, decl: &SubcategoryDecl) -> Result<SubcategorySpec> {
        let a = self.algebra(&decl.algebra)?;
        let budget = self.file.budgets.summands;
        let mut listed = Vec::new();
        let mut names = Vec::new();
        for m in &decl.members {
            listed.push(self.module(m)?);
            names.push(m.clone());
        }
        if decl.projectives {
            for (i, m) in indecomposable_projectives(&a, budget)?.into_iter().enumerate() {
                listed.push(m);
                names.push(format!("P{i}"));
            }
        }
        if decl.injectives {
            for (i, m) in indecomposable_injectives(&a, budget)?.into_iter().enumerate() {
                listed.push(m);
                names.push(format!("I{i}"));
            }
        }
        SubcategorySpec::build(&a, decl.mode, listed, names, decl.dim_cap, self.file.budgets)
    }

    fn triangular(&mut self, bimodule: &str) -> Result<TriangularRef> {
        Ok(Arc::new(Triangular::new(&self.bimodule(bimodule)?)?))
    }

    fn triple(&mut self, name: &str) -> Result<ResolvedTriple> {
        if let Some(t) = self.out.triples.get(name) {
            return Ok(t.clone());
        }
        let decl = self.file.triples.get(name).ok_or_else(|| dangling("triple", name))?;
        let built = self.build_triple(decl).map_err(|e| e.context(&format!("triple {name}")));
        let t = built?;
        self.out.triples.insert(name.to_string(), t.clone());
        Ok(t)
    }

    fn build_triple(&mut self, decl: &TripleDecl) -> Result<ResolvedTriple> {
        let tri = self.triangular(&decl.bimodule)?;
        let x = self.module(&decl.x)?.rebase(tri.a()).map_err(|e| e.context("X"))?;
        let y = self.module(&decl.y)?.rebase(tri.b()).map_err(|e| e.context("Y"))?;
        let p = tri.modulus();
        Ok(match decl.kind {
            TripleKind::Rep => {
                let source = tri.bimodule().tensor(&y)?.module.dim();
                let phi = matrix(p, &decl.map, (x.dim(), source), "map M (x) Y -> X")?;
                let t = tri.triple(&x, &y, phi)?;
                ResolvedTriple::Rep(tri, t)
            }
            TripleKind::Reph => {
                let target = tri.bimodule().hom_mx(&x)?.module.dim();
                let phi = matrix(p, &decl.map, (target, y.dim()), "map Y -> Hom(M, X)")?;
                let t = tri.triple_h(&x, &y, phi)?;
                ResolvedTriple::Reph(tri, t)
            }
        })
    }

    fn category(&mut self, name: &str) -> Result<Fixture> {
        if let Some(f) = self.out.categories.get(name) {
            return Ok(f.clone());
        }
        let decl = self.file.categories.get(name).ok_or_else(|| dangling("category", name))?;
        let built = self.build_category(name, decl).map_err(|e| e.context(&format!("category {name}")));
        let f = built?;
        self.out.categories.insert(name.to_string(), f.clone());
        Ok(f)
    }

    fn build_category(&mut self, name: &str, decl: &CategoryDecl) -> Result<Fixture> {
        let m = self.bimodule(&decl.bimodule)?;
        let (x, y) = (self.subcategory(&decl.x)?, self.subcategory(&decl.y)?);
        if !crate::algebra::same_algebra(x.algebra(), m.left_algebra()) {
            return Err(Error::AlgebraMismatch(format!("{} is not a subcategory of A-modules", decl.x)));
        }
        if !crate::algebra::same_algebra(y.algebra(), m.right_algebra()) {
            return Err(Error::AlgebraMismatch(format!("{} is not a subcategory of B-modules", decl.y)));
        }
        let mut f = Fixture::new(name, &m, x, y, (decl.caps[0], decl.caps[1]))?;
        f.budgets = self.file.budgets;
        Ok(f)
    }
}
