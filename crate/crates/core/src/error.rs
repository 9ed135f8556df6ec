use thiserror::Error;

use crate::formula::ParseError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("order relation has a cycle through elements {0} and {1}")]
    Cycle(usize, usize),

    #[error("index {index} out of range for carrier of size {size}")]
    IndexRange { index: usize, size: usize },

    #[error("set is not rooted")]
    NotRooted,

    #[error(
        "map is not order-preserving: {0} <= {1} but images are incomparable in that direction"
    )]
    NotMonotone(usize, usize),

    #[error("lattice is not distributive")]
    NotDistributive,

    #[error("relation is not a bounded lattice: {0}")]
    NotLattice(String),

    #[error("element {0} is not join-irreducible")]
    NotJoinIrreducible(usize),

    #[error("map is not a bounded lattice homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("map is not a nucleus: {0}")]
    NotNucleus(String),

    #[error("size bound exceeded for {what}: needs {requested}, cap is {cap}")]
    SizeBound {
        what: String,
        requested: u128,
        cap: u128,
    },

    #[error("layer {layer} is not available (tower has layers 0..={built})")]
    LayerRange { layer: usize, built: usize },

    #[error("formula has implication rank {rank}, cannot be evaluated at layer {layer}")]
    RankTooDeep { rank: usize, layer: usize },

    #[error("variable {var} is not bound (only {bound} available)")]
    UnboundVariable { var: usize, bound: usize },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn size_bound(what: impl Into<String>, requested: u128, cap: u128) -> Self {
        Error::SizeBound {
            what: what.into(),
            requested,
            cap,
        }
    }
}
