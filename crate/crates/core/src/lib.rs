//! Finite tree models of dendrites and exact tools for tree-valued cocycles of
//! finite groups: the median cocycle `ω_X` on the branch-point bundle,
//! elementarity by two independent oracles, minimal equivariant families, and
//! the invariant-vector to elementarity-certificate pipeline on Bochner spaces.

pub mod bochner;
pub mod bundle;
pub mod cocycle;
pub mod corpus;
pub mod dendrite;
pub mod io;
pub mod lp;
pub mod median_cocycle;
pub mod rational;
