use serde::{Deserialize, Serialize};

use crate::algebra::{is_isomorphic, same_algebra, AlgebraRef, IsoVerdict, Module, ModuleHom};
use crate::error::{Error, Result};

use super::Budgets;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Exactly the listed modules (up to isomorphism).
    Explicit,
    /// All direct sums of the listed modules of dimension at most the cap.
    AllUpToCap,
}

/// Where a module sits relative to an inventory.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Membership {
    Member { index: usize },
    NonMember { reason: String },
    OutOfCap,
    Undecided,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }

    pub fn index(&self) -> Option<usize> {
        match self {
            Membership::Member { index } => Some(*index),
            _ => None,
        }
    }

    pub(crate) fn non_member(reason: impl Into<String>) -> Self {
        Membership::NonMember { reason: reason.into() }
    }
}

/// An inventory of objects of an abelian category, realized as modules
/// over `ambient()`, with a membership test for arbitrary modules.
pub trait ExactInventory: Sync {
    fn ambient(&self) -> &AlgebraRef;
    fn objects(&self) -> &[Module];
    fn membership(&self, m: &Module) -> Result<Membership>;
    /// Whether an extension of object `j` by object `i` can lie within the caps.
    fn sum_fits(&self, i: usize, j: usize) -> bool;
    /// No member has larger total dimension.
    fn dim_bound(&self) -> usize;
    fn label(&self, i: usize) -> String {
        format!("#{i}")
    }
    fn budgets(&self) -> &Budgets;
}

/// Isomorphism-class lookup bucketed by dimension and rank profile.
#[derive(Clone, Debug, Default)]
pub(crate) struct IsoIndex {
    keys: Vec<(usize, Vec<usize>)>,
}

pub(crate) enum Lookup {
    Found(usize),
    Absent,
    Undecided,
}

impl IsoIndex {
    pub(crate) fn push(&mut self, m: &Module) {
        self.keys.push(key(m));
    }

    pub(crate) fn find(&self, objects: &[Module], m: &Module, budget: u64) -> Result<Lookup> {
        let k = key(m);
        let mut undecided = false;
        for (i, other) in self.keys.iter().enumerate() {
            if *other != k {
                continue;
            }
            match is_isomorphic(&objects[i], m, budget)? {
                IsoVerdict::Isomorphic(_) => return Ok(Lookup::Found(i)),
                IsoVerdict::Unknown => undecided = true,
                IsoVerdict::NotIsomorphic => {}
            }
        }
        Ok(if undecided { Lookup::Undecided } else { Lookup::Absent })
    }
}

impl IsoIndex {
    /// Like [`IsoIndex::find`], also returning an isomorphism member -> `m`.
    pub(crate) fn find_iso(&self, objects: &[Module], m: &Module, budget: u64) -> Result<Option<(usize, ModuleHom)>> {
        let k = key(m);
        for (i, other) in self.keys.iter().enumerate() {
            if *other != k {
                continue;
            }
            if let IsoVerdict::Isomorphic(h) = is_isomorphic(&objects[i], m, budget)? {
                return Ok(Some((i, h)));
            }
        }
        Ok(None)
    }
}

fn key(m: &Module) -> (usize, Vec<usize>) {
    (m.dim(), m.rank_profile())
}

/// A finite subcategory: iso-class representatives up to a dimension cap.
#[derive(Clone, Debug)]
pub struct SubcategorySpec {
    algebra: AlgebraRef,
    mode: Mode,
    dim_cap: usize,
    listed: Vec<Module>,
    names: Vec<String>,
    members: Vec<Module>,
    labels: Vec<String>,
    index: IsoIndex,
    budgets: Budgets,
}

impl SubcategorySpec {
    pub fn explicit(algebra: &AlgebraRef, listed: Vec<Module>, dim_cap: usize) -> Result<Self> {
        Self::build(algebra, Mode::Explicit, listed, Vec::new(), dim_cap, Budgets::default())
    }

    pub fn all_up_to_cap(algebra: &AlgebraRef, listed: Vec<Module>, dim_cap: usize) -> Result<Self> {
        Self::build(algebra, Mode::AllUpToCap, listed, Vec::new(), dim_cap, Budgets::default())
    }

    /// General constructor; `names` label the listed modules in reports.
    pub fn build(
        algebra: &AlgebraRef,
        mode: Mode,
        listed: Vec<Module>,
        names: Vec<String>,
        dim_cap: usize,
        budgets: Budgets,
    ) -> Result<Self> {
        let mut names = names;
        for i in names.len()..listed.len() {
            names.push(format!("M{i}"));
        }
        let listed: Vec<Module> = listed
            .iter()
            .map(|m| {
                if !same_algebra(m.algebra(), algebra) {
                    return Err(Error::AlgebraMismatch("member over another algebra".into()));
                }
                m.rebase(algebra)
            })
            .collect::<Result<_>>()?;
        let mut spec = SubcategorySpec {
            algebra: algebra.clone(),
            mode,
            dim_cap,
            listed,
            names,
            members: Vec::new(),
            labels: Vec::new(),
            index: IsoIndex::default(),
            budgets,
        };
        match mode {
            Mode::Explicit => spec.fill_explicit()?,
            Mode::AllUpToCap => spec.fill_sums()?,
        }
        Ok(spec)
    }

    fn add(&mut self, m: Module, label: String) -> Result<bool> {
        match self.index.find(&self.members, &m, self.budgets.iso)? {
            Lookup::Found(_) => Ok(false),
            Lookup::Absent => {
                self.index.push(&m);
                self.members.push(m);
                self.labels.push(label);
                Ok(true)
            }
            Lookup::Undecided => Err(Error::BudgetExceeded(
                "isomorphism undecided while deduplicating members".into(),
            )),
        }
    }

    fn fill_explicit(&mut self) -> Result<()> {
        self.add(Module::zero(&self.algebra), "0".into())?;
        for (m, name) in self.listed.clone().into_iter().zip(self.names.clone()) {
            if m.dim() > self.dim_cap {
                return Err(Error::Invalid(format!(
                    "member {name} has dimension {} above the cap {}",
                    m.dim(),
                    self.dim_cap
                )));
            }
            self.add(m, name)?;
        }
        Ok(())
    }

    fn fill_sums(&mut self) -> Result<()> {
        let mut gens: Vec<(Module, String)> = Vec::new();
        let mut seen = IsoIndex::default();
        let mut seen_mods = Vec::new();
        for (m, name) in self.listed.iter().zip(&self.names) {
            if m.is_zero() {
                continue;
            }
            if let Lookup::Absent = seen.find(&seen_mods, m, self.budgets.iso)? {
                seen.push(m);
                seen_mods.push(m.clone());
                gens.push((m.clone(), name.clone()));
            }
        }
        let dims: Vec<usize> = gens.iter().map(|g| g.0.dim()).collect();
        let sums = multiplicities(&dims, self.dim_cap);
        for m in sums {
            let mut parts = Vec::new();
            let mut label = Vec::new();
            for (k, (g, name)) in m.iter().zip(&gens) {
                for _ in 0..*k {
                    parts.push(g.clone());
                }
                match k {
                    0 => {}
                    1 => label.push(name.clone()),
                    _ => label.push(format!("{name}^{k}")),
                }
            }
            let module = Module::direct_sum_all(&self.algebra, &parts);
            let label = if label.is_empty() { "0".into() } else { label.join("+") };
            self.add(module, label)?;
        }
        Ok(())
    }

    pub fn algebra(&self) -> &AlgebraRef {
        &self.algebra
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn dim_cap(&self) -> usize {
        self.dim_cap
    }

    /// The modules as listed at construction.
    pub fn listed(&self) -> &[Module] {
        &self.listed
    }

    pub fn members(&self) -> &[Module] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn with_budgets(mut self, budgets: Budgets) -> Self {
        self.budgets = budgets;
        self
    }

    /// The member isomorphic to `m` with an isomorphism member -> `m`.
    pub fn lookup_iso(&self, m: &Module) -> Result<Option<(usize, ModuleHom)>> {
        if m.dim() > self.dim_cap {
            return Ok(None);
        }
        self.index.find_iso(&self.members, m, self.budgets.iso)
    }

    pub fn lookup(&self, m: &Module) -> Result<Membership> {
        if !same_algebra(m.algebra(), &self.algebra) {
            return Err(Error::AlgebraMismatch("membership test across algebras".into()));
        }
        if m.dim() > self.dim_cap {
            return Ok(Membership::OutOfCap);
        }
        Ok(match self.index.find(&self.members, m, self.budgets.iso)? {
            Lookup::Found(index) => Membership::Member { index },
            Lookup::Absent => Membership::non_member("not isomorphic to any member"),
            Lookup::Undecided => Membership::Undecided,
        })
    }
}

/// All multiplicity vectors `k` with `sum k_i dims_i <= cap`, ordered by
/// total dimension.
pub(crate) fn multiplicities(dims: &[usize], cap: usize) -> Vec<Vec<usize>> {
    fn go(dims: &[usize], cap: usize, at: usize, used: usize, mult: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if at == dims.len() {
            out.push(mult.clone());
            return;
        }
        let mut k = 0;
        while used + k * dims[at] <= cap {
            mult[at] = k;
            go(dims, cap, at + 1, used + k * dims[at], mult, out);
            if dims[at] == 0 {
                break;
            }
            k += 1;
        }
        mult[at] = 0;
    }
    let mut out = Vec::new();
    go(dims, cap, 0, 0, &mut vec![0; dims.len()], &mut out);
    out.sort_by_key(|m| {
        let d: usize = m.iter().zip(dims).map(|(k, d)| k * d).sum();
        (d, m.iter().map(|k| usize::MAX - k).collect::<Vec<_>>())
    });
    out
}

impl ExactInventory for SubcategorySpec {
    fn ambient(&self) -> &AlgebraRef {
        &self.algebra
    }

    fn objects(&self) -> &[Module] {
        &self.members
    }

    fn membership(&self, m: &Module) -> Result<Membership> {
        self.lookup(m)
    }

    fn sum_fits(&self, i: usize, j: usize) -> bool {
        self.members[i].dim() + self.members[j].dim() <= self.dim_cap
    }

    fn dim_bound(&self) -> usize {
        self.dim_cap
    }

    fn label(&self, i: usize) -> String {
        self.labels[i].clone()
    }

    fn budgets(&self) -> &Budgets {
        &self.budgets
    }
}
