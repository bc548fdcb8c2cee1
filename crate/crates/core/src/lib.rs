//! Decision-focused data selection for linear programs under set-based cost
//! uncertainty.
//!
//! Given a bounded feasible polyhedron `X = {x ≥ 0 : Ax = b}` and a
//! polyhedral uncertainty set `C` for the cost vector, this crate computes
//! the subspace of cost directions that can change the optimal decision,
//! decides whether a set of linear queries suffices to always recover an
//! optimal decision, constructs minimal sufficient query sets under several
//! query-constraint families, and recovers decisions from (possibly noisy)
//! observations.

pub mod apps;
pub mod decide;
pub mod geometry;
pub mod sufficiency;
pub mod uncertainty;
pub mod lp;
pub mod numlin;
pub mod oracle;
pub mod selection;

pub use numlin::ToleranceConfig;
