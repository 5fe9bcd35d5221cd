//! Generators shared by the unit, integration and acceptance tests. They take
//! a caller-supplied source of random `u64`s so the library itself carries no
//! RNG dependency.

use crate::algebra::{Direction, Relation};
use crate::ordertype::{PoorSum, Term};
use crate::syncauto::{Letter, SyncAutomaton};
use crate::upset::UpSet;

/// A random support-monotone deterministic automaton with `states` states.
///
/// Each non-initial state is given an incoming support; a transition on `L`
/// may only enter states whose support is `L`, and leaves only on subsets of
/// the source support, so every path is monotone by construction.
pub fn random_automaton(
    next: &mut dyn FnMut() -> u64,
    arity: usize,
    states: usize,
) -> SyncAutomaton {
    assert!(states >= 1);
    let full = (1u8 << arity) - 1;
    let mut tags = vec![full];
    for _ in 1..states {
        tags.push(1 + (next() % u64::from(full)) as u8);
    }
    let mut transitions = Vec::new();
    for q in 0..states {
        for mask in 1..=full {
            if mask & !tags[q] != 0 {
                continue;
            }
            // roughly one letter in three is left undefined
            if next().is_multiple_of(3) {
                continue;
            }
            let targets: Vec<usize> = (0..states)
                .filter(|&r| tags[r] == mask && (r != 0 || mask == full))
                .collect();
            if targets.is_empty() {
                continue;
            }
            let to = targets[(next() % targets.len() as u64) as usize];
            transitions.push((q, Letter(mask), to));
        }
    }
    let finals: Vec<usize> = (0..states).filter(|_| next().is_multiple_of(3)).collect();
    SyncAutomaton::new(arity, states, 0, &finals, &transitions)
        .expect("generator respects monotonicity")
}

/// Deterministic splitmix64 stream for tests that want reproducible input
/// without pulling in an RNG crate.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}

/// A random linear order together with its order type, built as a sum of
/// natural-order traces on pairwise disjoint ultimately periodic sets.
/// With `complete` every natural number lies in some piece.
pub fn random_linear_order(next: &mut dyn FnMut() -> u64, complete: bool) -> (Relation, PoorSum) {
    let (pieces, _) = random_pieces(next, complete);
    let mut rel = Relation::empty();
    let mut terms = Vec::new();
    for (piece, term) in pieces {
        rel = rel.sum_disjoint(&piece).expect("pieces are disjoint");
        terms.extend(term);
    }
    (rel, PoorSum::new(terms).reduce())
}

/// A random strict order: pieces as in [`random_linear_order`], each
/// joined to the previous ones either by a sum or by a disjoint union
/// (which leaves the two sides incomparable).
pub fn random_order(next: &mut dyn FnMut() -> u64, complete: bool) -> Relation {
    let (pieces, joins) = random_pieces(next, complete);
    let mut rel = Relation::empty();
    for ((piece, _), sum) in pieces.into_iter().zip(joins) {
        rel = if sum {
            rel.sum_disjoint(&piece).expect("pieces are disjoint")
        } else {
            rel.union(&piece)
        };
    }
    rel
}

type Piece = (Relation, Option<Term>);

fn random_pieces(next: &mut dyn FnMut() -> u64, complete: bool) -> (Vec<Piece>, Vec<bool>) {
    let count = 1 + next() % 3;
    let modulus = 1 + next() % 3;
    let transient = next() % 5;
    let mut owner = |_| {
        let v = next() % (count + u64::from(!complete));
        (v < count).then_some(v)
    };
    let heads: Vec<Option<u64>> = (0..transient).map(&mut owner).collect();
    let classes: Vec<Option<u64>> = (0..modulus).map(&mut owner).collect();
    let mut pieces = Vec::new();
    let mut joins = Vec::new();
    for j in 0..count {
        let set = UpSet::from_fn(transient, modulus, |x| {
            if x < transient {
                heads[x as usize] == Some(j)
            } else {
                classes[(x % modulus) as usize] == Some(j)
            }
        });
        let direction = if next().is_multiple_of(2) {
            Direction::Asc
        } else {
            Direction::Desc
        };
        // a single point has no partner and drops out of the support
        let term = if set.is_finite() {
            let n = set.iter().count() as u64;
            (n >= 2).then_some(Term::Fin(n))
        } else {
            Some(match direction {
                Direction::Asc => Term::Omega,
                Direction::Desc => Term::OmegaStar,
            })
        };
        pieces.push((Relation::natural_order_on(&set, direction), term));
        joins.push(next().is_multiple_of(2));
    }
    (pieces, joins)
}
