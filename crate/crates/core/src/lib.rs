//! Regular indexed monoidal structures over finite spans.
//!
//! The crate works at finite scale: contexts are finite sets, predicates
//! live in finite monoidal posets, and every law is checked by exhaustive
//! enumeration. The layers, bottom-up:
//!
//! * [`finset`]: finite sets, functions, pullbacks, pushouts, products, and
//!   adequate triples `(C, L, R)`.
//! * [`spancat`]: the double category of `(L, R)`-spans, its cells,
//!   companions and conjoints.
//! * [`poskit`]: finite posets, monotone maps and the two predicate
//!   algebras (subsets under intersection, truncated min-plus costs).
//! * [`doctrine`]: indexed monoidal structures with existential quantifiers
//!   and checkers for Beck-Chevalley, Frobenius and friends.
//! * [`doubling`]: the extension of a doctrine to spans, landing in
//!   quintets of posets, with its coherence suite.
//! * [`extraction`]: the converse, recovering a doctrine from the doubled
//!   functor, and the round trip.
//! * [`uwd`]: undirected wiring diagrams and their compositional evaluation.

pub mod doctrine;
pub mod doubling;
pub mod error;
pub mod extraction;
pub mod finset;
pub mod poskit;
pub mod report;
pub mod spancat;
pub mod uwd;

pub use error::{Error, Result};
pub use report::{Clause, Report};
