//! Unary synchronous relations on the natural numbers.
//!
//! Relations on `N^n` are recognized by [`SyncAutomaton`]s reading support
//! vectors. Binary relations decompose into a diagonal lasso with left and
//! right distance sets ([`structured`]), on which the order procedures run:
//! strict order and linearity checks, infinite chains and antichains,
//! extremal elements ([`orderdecide`]), and the reduced poor-sum order type
//! of linear orders together with order equivalence ([`ordertype`]).
//! [`logic`] compiles modular-logic formulas to automata and back, and
//! [`oracle`] evaluates everything by brute force on finite prefixes.

pub mod algebra;
pub mod error;
pub mod fixtures;
pub mod logic;
pub mod oracle;
pub mod orderdecide;
pub mod ordertype;
pub mod par;
pub mod structured;
pub mod syncauto;
#[doc(hidden)]
pub mod testing;
pub mod upset;

pub use algebra::{Direction, Relation};
pub use error::{Error, Result};
pub use ordertype::{PoorSum, Term};
pub use structured::{NormalForm, StructuredBinary};
pub use syncauto::{Letter, SyncAutomaton};
pub use upset::UpSet;
