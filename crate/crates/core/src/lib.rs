//! Finite Birkhoff duality and layered dual towers for the free weak
//! Heyting, pre-Heyting and Heyting algebras on finitely many generators.
//!
//! Lattice elements are downsets of a finite dual poset. A tower is a
//! sequence of dual posets `X0, X1, ...`; an element of rank `k` lives at
//! layer `k`, and `a -> b` of two elements at layer `k` lives at layer
//! `k+1`. Deciding an equation amounts to comparing two downsets at the
//! layer given by the larger implication depth.
//!
//! ```
//! use freeha_core::{Decider, Formula, Variety};
//!
//! let mut d = Decider::default();
//! let phi = Formula::parse("~~(x | ~x)").unwrap();
//! assert!(d.decide_valid(Variety::Ha, &phi).unwrap().holds);
//! ```

pub mod axioms;
pub mod birkhoff;
pub mod decide;
pub mod elemset;
pub mod error;
pub mod export;
pub mod formula;
pub mod heyting;
pub mod kripke;
pub mod poset;
pub mod powerset;
pub mod rooted;
pub mod tower;

pub use decide::{decide_equal, decide_valid, AnyTower, Decider, Verdict};
pub use elemset::ElemSet;
pub use error::{Error, Result};
pub use formula::{parse, Formula, ParseError, VarTable};
pub use heyting::{build_heyting_tower, g_condition, HeytingOptions, HeytingTower};
pub use kripke::{countermodel_search, Countermodel, KripkeModel};
pub use poset::{MonotoneMap, Poset};
pub use tower::{build_tower, GradedTower, PointDecode, Rank1Tower, TowerLayer, Variety};
