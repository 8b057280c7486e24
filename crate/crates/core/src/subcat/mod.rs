//! Finite subcategory inventories, closure checks, and the exact
//! categories of triples `E(X, M, Y)` and `M(X, M, Y)` they cut out.

mod classify;
mod closure;
mod exact;
mod frobenius;
mod hypotheses;
mod inventory;
mod triples;

use serde::{Deserialize, Serialize};

pub use classify::{
    classify_all, e_classify_projective, enough_injectives_hull, enough_projectives_cover, m_classify_injective,
    Classification, Construction, TripleAnalysis,
};
pub use closure::{check_closure, ClosureKind, ClosureReport, Witness};
pub use exact::{Coverage, CoverWitness, ExactStructure, FrobeniusSummary, SesEntry};
pub use frobenius::{frobenius_check, triple_resolving, FrobeniusReport, TripleResolving};
pub use hypotheses::{
    check_condition_star, direct_report, enough_clause, ext_clause, hom_clause, is_coresolving, is_resolving, perp_inclusion,
    tensor_clause,
    tor_clause, ConditionStar, Hypothesis, ResolvingReport, EXT_CLAUSE, HOM_CLAUSE, TENSOR_CLAUSE, TOR_CLAUSE,
};
pub use inventory::{ExactInventory, Membership, Mode, SubcategorySpec};
pub use triples::{e_membership, m_membership, EObject, MObject, Side, TripleCategory, TripleMembership, TripleObject};

/// Enumeration limits shared by the checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Budgets {
    /// Endomorphisms enumerated when splitting off summands.
    pub summands: u64,
    /// Exhaustive isomorphism search.
    pub iso: u64,
    /// Extension classes realized per pair of objects.
    pub ses: u64,
    /// Module maps enumerated per pair of objects.
    pub maps: u64,
    /// Highest degree in `Ext`/`Tor` vanishing checks; `None` means `dim + 2`.
    pub imax: Option<usize>,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            summands: 1 << 16,
            iso: 1 << 16,
            ses: 1 << 12,
            maps: 1 << 16,
            imax: None,
        }
    }
}

/// Outcome of a check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// No failure found, but some enumeration was cut short.
    Partial,
    /// A hypothesis of the check does not hold.
    Refused,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Pass dominates, then Partial, then Refused.
    pub fn or(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Pass, _) | (_, Pass) => Pass,
            (Partial, _) | (_, Partial) => Partial,
            (Refused, _) | (_, Refused) => Refused,
            _ => Fail,
        }
    }

    /// Fail dominates, then Refused, then Partial.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Refused, _) | (_, Refused) => Refused,
            (Partial, _) | (_, Partial) => Partial,
            _ => Pass,
        }
    }
}
