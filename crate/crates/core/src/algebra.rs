//! Binary synchronous relations and the constructions on them: inverse,
//! support, disjoint sums, scaling, traces of the natural order,
//! completions, collapsing of a finite gap and relational composition.

use std::fmt;

use crate::error::{Error, Result};
use crate::structured::{support_of, NormalForm, StructuredBinary};
use crate::syncauto::SyncAutomaton;
use crate::upset::UpSet;

/// Direction of a natural-order trace or of a completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Ascending, order type omega.
    Asc,
    /// Descending, order type omega*.
    Desc,
}

/// A binary relation on the naturals, held as a canonical automaton.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    automaton: SyncAutomaton,
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.automaton.fmt(f)
    }
}

impl TryFrom<SyncAutomaton> for Relation {
    type Error = Error;

    fn try_from(a: SyncAutomaton) -> Result<Self> {
        Relation::new(&a)
    }
}

impl Relation {
    pub fn new(a: &SyncAutomaton) -> Result<Self> {
        if a.arity() != 2 {
            return Err(Error::ArityMismatch {
                expected: 2,
                found: a.arity(),
            });
        }
        Ok(Relation {
            automaton: a.canonical(),
        })
    }

    fn wrap(automaton: SyncAutomaton) -> Self {
        debug_assert_eq!(automaton.arity(), 2);
        Relation { automaton }
    }

    pub fn empty() -> Self {
        Relation::wrap(SyncAutomaton::empty(2))
    }

    pub fn full() -> Self {
        Relation::wrap(SyncAutomaton::full(2))
    }

    /// The diagonal `{(k, k)}`.
    pub fn identity() -> Self {
        let s = StructuredBinary::new(0, vec![UpSet::empty()], vec![UpSet::empty()], vec![true])
            .expect("valid decomposition");
        Relation::wrap(s.to_automaton())
    }

    pub fn from_structured(s: &StructuredBinary) -> Self {
        Relation::wrap(s.to_automaton())
    }

    /// `a x b`.
    pub fn product_of_sets(a: &UpSet, b: &UpSet) -> Self {
        let left = SyncAutomaton::from_upset(a)
            .embed(2, &[0])
            .expect("unary into binary");
        let right = SyncAutomaton::from_upset(b)
            .embed(2, &[1])
            .expect("unary into binary");
        Relation::wrap(left.intersection(&right).expect("same arity"))
    }

    pub fn automaton(&self) -> &SyncAutomaton {
        &self.automaton
    }

    pub fn into_automaton(self) -> SyncAutomaton {
        self.automaton
    }

    pub fn contains(&self, k: u64, l: u64) -> bool {
        self.automaton.accepts(&[k, l])
    }

    pub fn structured(&self) -> StructuredBinary {
        StructuredBinary::from_automaton(&self.automaton).expect("binary automaton")
    }

    pub fn normal_form(&self) -> NormalForm {
        self.structured().normalize()
    }

    pub fn is_empty(&self) -> bool {
        self.automaton.is_empty()
    }

    pub fn union(&self, other: &Relation) -> Relation {
        Relation::wrap(self.automaton.union(&other.automaton).expect("binary"))
    }

    pub fn intersection(&self, other: &Relation) -> Relation {
        Relation::wrap(
            self.automaton
                .intersection(&other.automaton)
                .expect("binary"),
        )
    }

    pub fn difference(&self, other: &Relation) -> Relation {
        Relation::wrap(self.automaton.difference(&other.automaton).expect("binary"))
    }

    pub fn complement(&self) -> Relation {
        Relation::wrap(self.automaton.complement())
    }

    /// Whether `other` is a subset of `self`.
    pub fn includes(&self, other: &Relation) -> bool {
        other.difference(self).is_empty()
    }

    pub fn equivalent(&self, other: &Relation) -> bool {
        self.automaton == other.automaton
    }

    pub fn inverse(&self) -> Relation {
        Relation::wrap(self.automaton.permute(&[1, 0]).expect("binary"))
    }

    pub fn support(&self) -> UpSet {
        support_of(&self.automaton)
    }

    /// `{x : exists y, (x, y) in R}`.
    pub fn domain(&self) -> UpSet {
        self.automaton
            .project(2)
            .expect("binary")
            .to_upset()
            .expect("unary")
    }

    /// `{y : exists x, (x, y) in R}`.
    pub fn range(&self) -> UpSet {
        self.automaton
            .project(1)
            .expect("binary")
            .to_upset()
            .expect("unary")
    }

    /// `R ∪ S ∪ supp(R) x supp(S)` for relations with disjoint supports.
    pub fn sum_disjoint(&self, other: &Relation) -> Result<Relation> {
        let (a, b) = (self.support(), other.support());
        let overlap = SyncAutomaton::from_upset(&a)
            .intersection(&SyncAutomaton::from_upset(&b))
            .expect("unary");
        if !overlap.is_empty() {
            return Err(Error::OverlappingSupports);
        }
        Ok(self.union(other).union(&Relation::product_of_sets(&a, &b)))
    }

    /// `{(m x + r, m y + r) : (x, y) in R}`.
    pub fn scale(&self, m: u64, r: u64) -> Result<Relation> {
        Ok(Relation::wrap(self.automaton.scale(m, r)?))
    }

    /// The natural order restricted to `set`, ascending or descending.
    pub fn natural_order_on(set: &UpSet, direction: Direction) -> Relation {
        let less = StructuredBinary::new(
            0,
            vec![UpSet::empty()],
            vec![UpSet::positive()],
            vec![false],
        )
        .expect("valid decomposition");
        let asc =
            Relation::from_structured(&less).intersection(&Relation::product_of_sets(set, set));
        match direction {
            Direction::Asc => asc,
            Direction::Desc => asc.inverse(),
        }
    }

    /// Adds the complement of the support after the order, ordered by the
    /// natural order in `direction`.
    pub fn complete_with(&self, direction: Direction) -> Result<Relation> {
        let rest = self.support().complement();
        if rest.is_finite() {
            return Err(Error::ComplementNotInfinite);
        }
        self.sum_disjoint(&Relation::natural_order_on(&rest, direction))
    }

    /// Closes the finitely many gaps in the support by shifting later
    /// elements down, one gap at a time.
    pub fn collapse_finite_complement(&self) -> Result<Relation> {
        let gaps = self.support().complement();
        if !gaps.is_finite() {
            return Err(Error::ComplementNotFinite);
        }
        let mut current = self.clone();
        for _ in 0..gaps.iter().count() {
            let gap = current
                .support()
                .complement()
                .min_element()
                .expect("gap count is invariant under the shift");
            let shift = Relation::skip(gap);
            current = shift.inverse().compose(&current).compose(&shift);
        }
        Ok(current)
    }

    /// The graph of `k -> k` for `k < a` and `k -> k - 1` for `k > a`.
    fn skip(a: u64) -> Relation {
        let n = a as usize + 1;
        let mut left = vec![UpSet::empty(); n];
        left[a as usize] = UpSet::singleton(1);
        let eq = (0..n).map(|i| i < a as usize).collect();
        let s = StructuredBinary::new(a as usize, left, vec![UpSet::empty(); n], eq)
            .expect("valid decomposition");
        Relation::from_structured(&s)
    }

    /// `{(x, z) : exists y, (x, y) in R and (y, z) in S}`.
    pub fn compose(&self, other: &Relation) -> Relation {
        let r = self.automaton.cylindrify(3).expect("binary");
        let s = other.automaton.cylindrify(1).expect("binary");
        let both = r.intersection(&s).expect("ternary");
        Relation::wrap(both.project(2).expect("ternary"))
    }
}
