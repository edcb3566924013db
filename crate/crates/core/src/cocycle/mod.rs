//! Finite probability Γ-spaces, tree-valued cocycles over them, cohomology,
//! elementarity (by exhaustive search and by exact linear feasibility), and
//! minimal equivariant families.

mod families;
mod group;
mod morphism;
mod space;

use thiserror::Error;

use crate::dendrite::DendriteError;

pub use families::{
    invariant_measure_lp, is_elementary_search, minimal_families, orbit_average_measure,
    retraction_point_family, EquivariantFamily, FamilyKind, MeasureFamily, MinimalFamilies,
};
pub use group::{FiniteGroup, GroupElement};
pub use morphism::{
    first_identity_violation, first_skew_action_violation, VirtualDendroMorphism,
    DEFAULT_COHOMOLOGY_BOUND,
};
pub use space::{is_ergodic, Atom, ProbSpace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CocycleError {
    #[error(transparent)]
    Dendrite(#[from] DendriteError),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid probability space: {0}")]
    InvalidSpace(String),
    #[error("unknown group element {0:?}")]
    UnknownElement(String),
    #[error("unknown atom {0:?}")]
    UnknownAtom(String),
    #[error("incomplete table: {0}")]
    IncompleteTable(String),
    #[error("cocycle identity fails at ({g1}, {g2}, {atom})")]
    CocycleIdentityViolated {
        g1: String,
        g2: String,
        atom: String,
    },
    #[error("element subset is not a subgroup")]
    NotASubgroup,
    #[error("search space |Aut(X)|^|Ω| = {size} exceeds the bound {bound}")]
    SearchSpaceTooLarge { size: u128, bound: u128 },
    #[error("cocycles live on different groups, spaces or trees")]
    Mismatched,
    #[error("fibers at atom {0:?} intersect")]
    NotDisjoint(String),
    #[error("input family is not equivariant: {0}")]
    NotEquivariantInput(String),
    #[error("the fiber at atom {0:?} retracts to more than one point")]
    AmbiguousRetraction(String),
    #[error("malformed family: {0}")]
    MalformedFamily(String),
}
