//! The fixtures used by the test suites and shipped manifests.
//!
//! | name | `A` | `B` | `M` |
//! |------|-----|-----|-----|
//! | `ut2` | `F_2` | `F_2` | `F_2` (so `Lambda = UT_2(F_2)`) |
//! | `dual` | `D2` | `F_2` | `D2` |
//! | `frob` | `D2` | `D2` | `D2` |
//! | `ut2-negative` | `UT_2(F_2)` | `F_2` | `UT_2(F_2)` |
//! | `ext-obstruction` | `D2` | `F_2` | `S` |
//! | `tor-obstruction` | `F_2` | `D2` | `S` |
//! | `missing-injective` | `D2` | `F_2` | `D2`, with `Y = {0}` |
//!
//! `D2 = F_2[x]/(x^2)` and `S` is its simple module.

use std::sync::Arc;

use crate::algebra::{indecomposable_injectives, indecomposable_projectives, Algebra, AlgebraRef, Module};
use crate::bimodule::Bimodule;
use crate::error::Result;
use crate::linalg::Matrix;
use crate::rep::{Triangular, TriangularRef};
use crate::subcat::{Budgets, Side, SubcategorySpec, TripleAnalysis, TripleCategory};

/// A bimodule with two inventories and caps for the triple inventories.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub tri: TriangularRef,
    pub x: SubcategorySpec,
    pub y: SubcategorySpec,
    /// `(x_cap, y_cap)` for the triple inventories.
    pub caps: (usize, usize),
    pub budgets: Budgets,
}

impl Fixture {
    pub fn new(name: &str, m: &Bimodule, x: SubcategorySpec, y: SubcategorySpec, caps: (usize, usize)) -> Result<Self> {
        Ok(Fixture {
            name: name.into(),
            tri: Arc::new(Triangular::new(m)?),
            x,
            y,
            caps,
            budgets: Budgets::default(),
        })
    }

    pub fn bimodule(&self) -> &Bimodule {
        self.tri.bimodule()
    }

    pub fn category(&self, side: Side) -> Result<TripleCategory> {
        TripleCategory::new(side, &self.tri, &self.x, &self.y, self.caps.0, self.caps.1, self.budgets)
    }

    pub fn analysis(&self, side: Side) -> Result<TripleAnalysis> {
        TripleAnalysis::new(self.category(side)?)
    }
}

pub fn f2() -> AlgebraRef {
    Algebra::field(2).expect("F_2")
}

/// `F_2[x]/(x^2)` with basis `1, x`.
pub fn d2() -> AlgebraRef {
    Algebra::truncated_polynomial(2, 2).expect("dual numbers")
}

pub fn ut2() -> AlgebraRef {
    Algebra::upper_triangular(2, 2).expect("upper triangular matrices")
}

/// The simple module of a local algebra whose basis starts with `1`
/// followed by radical elements.
pub fn simple_local(a: &AlgebraRef) -> Module {
    let p = a.modulus();
    let mut action = vec![Matrix::zeros(p, 1, 1); a.dim()];
    action[0] = Matrix::identity(p, 1);
    Module::new(a, 1, action).expect("simple module")
}

/// All modules over `a` up to `cap` built from `gens`.
pub fn all_modules(a: &AlgebraRef, gens: Vec<Module>, cap: usize) -> SubcategorySpec {
    SubcategorySpec::all_up_to_cap(a, gens, cap).expect("inventory")
}

/// Every finite-dimensional `F_p`-module up to `cap`.
pub fn vector_spaces(k: &AlgebraRef, cap: usize) -> SubcategorySpec {
    all_modules(k, vec![Module::regular(k)], cap)
}

/// Every `D2`-module up to `cap`: sums of `S` and `D2`.
pub fn d2_modules(a: &AlgebraRef, cap: usize) -> SubcategorySpec {
    all_modules(a, vec![simple_local(a), Module::regular(a)], cap)
}

/// Every `UT_2(F_2)`-module up to `cap`: sums of the three indecomposables.
pub fn ut2_modules(a: &AlgebraRef, cap: usize) -> SubcategorySpec {
    let mut gens = indecomposable_projectives(a, 1 << 12).expect("projectives");
    gens.extend(indecomposable_injectives(a, 1 << 12).expect("injectives"));
    all_modules(a, gens, cap)
}

/// A left `A`-module as an `(A, F_p)`-bimodule.
pub fn left_over_field(x: &Module) -> Result<Bimodule> {
    let k = Algebra::field(x.modulus())?;
    Bimodule::new(x.algebra(), &k, x.dim(), x.action().to_vec(), vec![Matrix::identity(x.modulus(), x.dim())])
}

/// A module over a commutative algebra `B` as an `(F_p, B)`-bimodule.
pub fn right_over_field(y: &Module) -> Result<Bimodule> {
    let k = Algebra::field(y.modulus())?;
    Bimodule::new(&k, y.algebra(), y.dim(), vec![Matrix::identity(y.modulus(), y.dim())], y.action().to_vec())
}

/// `A = B = M = F_2`; every triple with component dimensions at most 1.
pub fn fix_ut2() -> Fixture {
    let k = f2();
    Fixture::new("ut2", &Bimodule::regular(&k), vector_spaces(&k, 1), vector_spaces(&k, 1), (1, 1)).expect("ut2")
}

/// `A = D2`, `B = F_2`, `M = D2`; triples with component dimensions at most 2.
pub fn fix_dual() -> Fixture {
    let a = d2();
    let m = left_over_field(&Module::regular(&a)).expect("bimodule");
    let k = m.right_algebra().clone();
    Fixture::new("dual", &m, d2_modules(&a, 4), vector_spaces(&k, 4), (2, 2)).expect("dual")
}

/// `A = B = M = D2`, every module up to dimension 4 on both sides.
pub fn fix_frob() -> Fixture {
    let a = d2();
    Fixture::new("frob", &Bimodule::regular(&a), d2_modules(&a, 4), d2_modules(&a, 4), (4, 4)).expect("frob")
}

/// `A = UT_2(F_2)` (not self-injective), `M = A` over `F_2`.
pub fn ut2_negative() -> Fixture {
    let a = ut2();
    let m = left_over_field(&Module::regular(&a)).expect("bimodule");
    let k = m.right_algebra().clone();
    Fixture::new("ut2-negative", &m, ut2_modules(&a, 3), vector_spaces(&k, 3), (3, 3)).expect("ut2-negative")
}

/// `M = S` over `(D2, F_2)`: `Ext^1_A(M, S) != 0`.
pub fn ext_obstruction() -> Fixture {
    let a = d2();
    let m = left_over_field(&simple_local(&a)).expect("bimodule");
    let k = m.right_algebra().clone();
    Fixture::new("ext-obstruction", &m, d2_modules(&a, 4), vector_spaces(&k, 4), (2, 2)).expect("ext-obstruction")
}

/// `M = S` over `(F_2, D2)`: `Tor_1^B(M, S) != 0`.
pub fn tor_obstruction() -> Fixture {
    let b = d2();
    let m = right_over_field(&simple_local(&b)).expect("bimodule");
    let k = m.left_algebra().clone();
    Fixture::new("tor-obstruction", &m, vector_spaces(&k, 4), d2_modules(&b, 4), (2, 2)).expect("tor-obstruction")
}

/// [`fix_dual`] with `Y = {0}`, which misses the injective `F_2`.
pub fn missing_injective() -> Fixture {
    let mut f = fix_dual();
    let k = f.bimodule().right_algebra().clone();
    f.name = "missing-injective".into();
    f.y = SubcategorySpec::explicit(&k, vec![], 4).expect("zero inventory");
    f
}
