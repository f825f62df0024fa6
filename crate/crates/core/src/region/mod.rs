//! Region boundaries, closures, comparisons and exports.

pub mod bifurcation;
pub mod boundary;
pub mod closure;
pub mod compare;
pub mod export;
pub mod figures;
