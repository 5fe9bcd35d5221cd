//! Small named relations used throughout the tests, the benches and the CLI
//! examples.

use crate::syncauto::{Letter, SyncAutomaton};

const DIAG: Letter = Letter(0b11);
const LEFT: Letter = Letter(0b01);
const RIGHT: Letter = Letter(0b10);

/// `... < 2 < 1 < 0`: the pairs `(k, l)` with `k > l`.
pub fn w_star() -> SyncAutomaton {
    SyncAutomaton::new(2, 2, 0, &[1], &[(0, DIAG, 0), (0, LEFT, 1), (1, LEFT, 1)])
        .expect("valid fixture")
}

/// `0 < 1 < 2 < ...`: the pairs `(k, l)` with `k < l`.
pub fn w() -> SyncAutomaton {
    SyncAutomaton::new(2, 2, 0, &[1], &[(0, DIAG, 0), (0, RIGHT, 1), (1, RIGHT, 1)])
        .expect("valid fixture")
}

/// The three-element order `2 < 1 < 0`.
pub fn three() -> SyncAutomaton {
    SyncAutomaton::new(
        2,
        4,
        0,
        &[2, 3],
        &[(0, DIAG, 1), (0, LEFT, 3), (3, LEFT, 2), (1, LEFT, 2)],
    )
    .expect("valid fixture")
}

/// `{(2m, 2m + 1)}`: disjoint two-element chains.
pub fn even_odd() -> SyncAutomaton {
    SyncAutomaton::new(2, 3, 0, &[2], &[(0, DIAG, 1), (1, DIAG, 0), (0, RIGHT, 2)])
        .expect("valid fixture")
}

/// All of `N x N`.
pub fn full_relation() -> SyncAutomaton {
    SyncAutomaton::full(2)
}

pub fn empty_relation() -> SyncAutomaton {
    SyncAutomaton::empty(2)
}
