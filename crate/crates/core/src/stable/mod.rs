//! Stable categories of Frobenius inventories and the functors between them.

mod adjoint;
mod category;
mod functors;
mod recollement;
mod triangulated;

pub use adjoint::{adjoint_pairs, counit, unit, verify_adjoint_pair, AdjointPair, AdjointReport, PairDims};
pub use category::{RouteCheck, StableCategory, StableHom, Suspension};
pub use functors::{split, Domain, FunctorName, FunctorTable, Prepared};
pub use recollement::{
    verify_recollement, AuditClause, AuditRow, FaithfulClause, FaithfulRow, ImageClause, ImageRow, RecollementReport,
    TorsionClause, TorsionRow,
};
pub use triangulated::{verify_triangulated_functor, TriangulatedReport};
