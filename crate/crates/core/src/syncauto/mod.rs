//! Synchronous automata over `N^n`.
//!
//! A vector of naturals is read as the word `e_{I_1} ... e_{I_m}` where the
//! `j`-th letter is the 0/1 vector of coordinates still larger than `j`
//! ([`encode`]). Letters along a word therefore have non-increasing
//! support. Automata are deterministic and may be partial; every operation
//! here returns a trimmed, minimal automaton whose states each carry a
//! single incoming support, so two automata for the same relation are equal
//! as values.

mod build;
mod format;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::upset::UpSet;

pub(crate) use build::build;
pub use format::{AutomatonJson, TransitionJson};

/// Largest arity accepted by the engine.
pub const MAX_ARITY: usize = 4;

/// A nonempty support vector. Bit `i` is coordinate `i + 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub(crate) u8);

impl Letter {
    pub fn from_mask(mask: u8) -> Option<Letter> {
        (mask != 0).then_some(Letter(mask))
    }

    /// Builds a letter from its 0/1 components.
    pub fn from_bits(bits: &[u8]) -> Result<Letter> {
        if bits.len() > MAX_ARITY {
            return Err(Error::ArityExceeded(bits.len()));
        }
        let mut mask = 0u8;
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => mask |= 1 << i,
                _ => {
                    return Err(Error::InvalidAutomaton(format!(
                        "letter component {b} is not 0 or 1"
                    )))
                }
            }
        }
        Letter::from_mask(mask)
            .ok_or_else(|| Error::InvalidAutomaton("letter with empty support".into()))
    }

    /// The letter with every coordinate of `arity` set.
    pub fn full(arity: usize) -> Letter {
        Letter(((1u16 << arity) - 1) as u8)
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn has(self, coordinate: usize) -> bool {
        self.0 & (1 << coordinate) != 0
    }

    pub fn is_subset_of(self, other: Letter) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn bits(self, arity: usize) -> Vec<u8> {
        (0..arity).map(|i| u8::from(self.has(i))).collect()
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{:#06b}", self.0)
    }
}

/// The unique word `e_{I_1}^{a_1} ... e_{I_r}^{a_r}` with strictly
/// decreasing supports that sums to `x`.
pub fn encode(x: &[u64]) -> Vec<Letter> {
    let len = x.iter().copied().max().unwrap_or(0);
    let mut word = Vec::with_capacity(len as usize);
    let mut sorted: Vec<u64> = x.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut pos = 0u64;
    for &level in &sorted {
        if level == 0 {
            continue;
        }
        let mut mask = 0u8;
        for (i, &v) in x.iter().enumerate() {
            if v >= level {
                mask |= 1 << i;
            }
        }
        while pos < level {
            word.push(Letter(mask));
            pos += 1;
        }
    }
    word
}

/// Boolean combination for [`SyncAutomaton::product`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductOp {
    Union,
    Intersection,
    /// Pairs accepted by the first automaton and not by the second.
    Difference,
}

/// Questions answered by [`decide`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Query {
    IsEmpty,
    Includes,
    Equivalent,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SyncAutomaton {
    pub(crate) arity: usize,
    pub(crate) initial: usize,
    pub(crate) finals: Vec<bool>,
    pub(crate) delta: Vec<Option<usize>>,
}

impl SyncAutomaton {
    /// Builds an automaton from explicit parts, rejecting nondeterminism and
    /// support-monotonicity violations. The result is kept as given; use
    /// [`SyncAutomaton::canonical`] for the minimal form.
    pub fn new(
        arity: usize,
        states: usize,
        initial: usize,
        finals: &[usize],
        transitions: &[(usize, Letter, usize)],
    ) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidAutomaton("arity must be at least 1".into()));
        }
        if arity > MAX_ARITY {
            return Err(Error::ArityExceeded(arity));
        }
        if states == 0 || initial >= states {
            return Err(Error::InvalidAutomaton(format!(
                "initial state {initial} out of range for {states} states"
            )));
        }
        let stride = 1usize << arity;
        let mut fin = vec![false; states];
        for &f in finals {
            if f >= states {
                return Err(Error::InvalidAutomaton(format!(
                    "final state {f} out of range"
                )));
            }
            fin[f] = true;
        }
        let mut delta = vec![None; states * stride];
        for &(from, letter, to) in transitions {
            if from >= states || to >= states {
                return Err(Error::InvalidAutomaton(format!(
                    "transition {from} -> {to} refers to a missing state"
                )));
            }
            if letter.0 as usize >= stride {
                return Err(Error::InvalidAutomaton(format!(
                    "letter {:?} does not fit arity {arity}",
                    letter
                )));
            }
            let slot = &mut delta[from * stride + letter.0 as usize];
            match *slot {
                Some(prev) if prev != to => {
                    return Err(Error::InvalidAutomaton(format!(
                        "nondeterministic transitions from state {from} on {:?}",
                        letter.bits(arity)
                    )))
                }
                _ => *slot = Some(to),
            }
        }
        let a = SyncAutomaton {
            arity,
            initial,
            finals: fin,
            delta,
        };
        a.check_monotone()?;
        Ok(a)
    }

    /// The automaton recognizing nothing.
    pub fn empty(arity: usize) -> Self {
        SyncAutomaton {
            arity,
            initial: 0,
            finals: vec![false],
            delta: vec![None; 1 << arity],
        }
    }

    /// The automaton recognizing all of `N^arity`.
    pub fn full(arity: usize) -> Self {
        build(arity, (), |_, _| Some(()), |_| true)
    }

    /// Unary automaton (arity 1) recognizing `set`.
    pub fn from_upset(set: &UpSet) -> Self {
        let t = set.transient();
        let p = set.period();
        build(
            1,
            0u64,
            |&n, _| {
                Some(if n + 1 < t + p {
                    n + 1
                } else {
                    t + (n + 1 - t) % p
                })
            },
            |&n| set.contains(n),
        )
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn num_states(&self) -> usize {
        self.finals.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals[q]
    }

    fn stride(&self) -> usize {
        1 << self.arity
    }

    pub fn step(&self, q: usize, letter: Letter) -> Option<usize> {
        self.delta
            .get(q * self.stride() + letter.0 as usize)
            .copied()
            .flatten()
    }

    /// All transitions ordered by source state, then letter mask.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, Letter, usize)> + '_ {
        let stride = self.stride();
        self.delta.iter().enumerate().filter_map(move |(i, t)| {
            let (q, m) = (i / stride, i % stride);
            t.map(|to| (q, Letter(m as u8), to))
        })
    }

    pub fn finals(&self) -> impl Iterator<Item = usize> + '_ {
        self.finals
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(q, _)| q)
    }

    fn check_monotone(&self) -> Result<()> {
        for (_, inc, mid) in self.transitions() {
            for m in 1..self.stride() {
                let out = Letter(m as u8);
                if self.step(mid, out).is_some() && !out.is_subset_of(inc) {
                    return Err(Error::InvalidAutomaton(format!(
                        "state {mid} is entered on {:?} but leaves on {:?}",
                        inc.bits(self.arity),
                        out.bits(self.arity)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Structural check that every path has non-increasing supports.
    pub fn is_support_monotone(&self) -> bool {
        self.check_monotone().is_ok()
    }

    /// Runs the automaton on a word; `None` if the run dies.
    pub fn run(&self, word: &[Letter]) -> Option<usize> {
        word.iter().try_fold(self.initial, |q, &l| self.step(q, l))
    }

    /// Whether `x` belongs to the relation.
    ///
    /// Panics if `x.len()` differs from the arity.
    pub fn accepts(&self, x: &[u64]) -> bool {
        assert_eq!(x.len(), self.arity, "vector length must match the arity");
        self.run(&encode(x)).is_some_and(|q| self.finals[q])
    }

    /// Minimal, trimmed, breadth-first numbered form.
    pub fn canonical(&self) -> SyncAutomaton {
        build(
            self.arity,
            self.initial,
            |&q, l| self.step(q, l),
            |&q| self.finals[q],
        )
    }

    pub fn product(&self, other: &SyncAutomaton, op: ProductOp) -> Result<SyncAutomaton> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        Ok(build(
            self.arity,
            (Some(self.initial), Some(other.initial)),
            |&(a, b), l| {
                let next = (
                    a.and_then(|q| self.step(q, l)),
                    b.and_then(|q| other.step(q, l)),
                );
                match (op, next) {
                    (_, (None, None)) => None,
                    (ProductOp::Intersection | ProductOp::Difference, (None, _)) => None,
                    (ProductOp::Intersection, (_, None)) => None,
                    _ => Some(next),
                }
            },
            |&(a, b)| {
                let fa = a.is_some_and(|q| self.finals[q]);
                let fb = b.is_some_and(|q| other.finals[q]);
                match op {
                    ProductOp::Union => fa || fb,
                    ProductOp::Intersection => fa && fb,
                    ProductOp::Difference => fa && !fb,
                }
            },
        ))
    }

    pub fn union(&self, other: &SyncAutomaton) -> Result<SyncAutomaton> {
        self.product(other, ProductOp::Union)
    }

    pub fn intersection(&self, other: &SyncAutomaton) -> Result<SyncAutomaton> {
        self.product(other, ProductOp::Intersection)
    }

    pub fn difference(&self, other: &SyncAutomaton) -> Result<SyncAutomaton> {
        self.product(other, ProductOp::Difference)
    }

    /// Complement relative to `N^n`: only encodings of vectors are counted.
    pub fn complement(&self) -> SyncAutomaton {
        build(
            self.arity,
            Some(self.initial),
            |&q, l| Some(q.and_then(|q| self.step(q, l))),
            |&q| !q.is_some_and(|q| self.finals[q]),
        )
    }

    /// Existential projection along `coordinate` (1-based).
    pub fn project(&self, coordinate: usize) -> Result<SyncAutomaton> {
        if self.arity < 2 {
            return Err(Error::BadParameters(
                "projection needs arity at least 2".into(),
            ));
        }
        if coordinate == 0 || coordinate > self.arity {
            return Err(Error::BadParameters(format!(
                "coordinate {coordinate} out of range for arity {}",
                self.arity
            )));
        }
        let src = self.canonical();
        let gone = coordinate - 1;
        let only_gone = Letter(1 << gone);
        let closure = |set: BTreeSet<usize>| -> BTreeSet<usize> {
            let mut out = set.clone();
            let mut stack: Vec<usize> = set.into_iter().collect();
            while let Some(q) = stack.pop() {
                if let Some(r) = src.step(q, only_gone) {
                    if out.insert(r) {
                        stack.push(r);
                    }
                }
            }
            out
        };
        let expand = |l: Letter, bit: bool| -> Letter {
            let m = l.0 as u16;
            let low = m & ((1 << gone) - 1);
            let high = (m >> gone) << (gone + 1);
            Letter((low | high | (u16::from(bit) << gone)) as u8)
        };
        let init = closure(BTreeSet::from([src.initial]));
        Ok(build(
            self.arity - 1,
            init,
            |set, l| {
                let mut next = BTreeSet::new();
                for &q in set {
                    for bit in [false, true] {
                        if let Some(r) = src.step(q, expand(l, bit)) {
                            next.insert(r);
                        }
                    }
                }
                (!next.is_empty()).then(|| closure(next))
            },
            |set| set.iter().any(|&q| src.finals[q]),
        ))
    }

    /// Reinterprets the automaton inside `N^target_arity`: coordinate `j`
    /// (0-based) of `self` becomes coordinate `positions[j]` of the result
    /// and the remaining coordinates are unconstrained.
    pub fn embed(&self, target_arity: usize, positions: &[usize]) -> Result<SyncAutomaton> {
        if target_arity > MAX_ARITY {
            return Err(Error::ArityExceeded(target_arity));
        }
        if positions.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: positions.len(),
            });
        }
        let mut seen = 0u8;
        for &p in positions {
            if p >= target_arity || seen & (1 << p) != 0 {
                return Err(Error::BadParameters(format!(
                    "bad embedding positions {positions:?}"
                )));
            }
            seen |= 1 << p;
        }
        let restrict = |l: Letter| -> u8 {
            positions
                .iter()
                .enumerate()
                .fold(0u8, |m, (j, &p)| if l.has(p) { m | (1 << j) } else { m })
        };
        Ok(build(
            target_arity,
            (self.initial, false),
            |&(q, trailing), l| match restrict(l) {
                0 => Some((q, true)),
                _ if trailing => None,
                m => self.step(q, Letter(m)).map(|r| (r, false)),
            },
            |&(q, _)| self.finals[q],
        ))
    }

    /// Inserts an unconstrained coordinate at `position` (1-based, up to
    /// `arity + 1`).
    pub fn cylindrify(&self, position: usize) -> Result<SyncAutomaton> {
        if position == 0 || position > self.arity + 1 {
            return Err(Error::BadParameters(format!(
                "position {position} out of range for arity {}",
                self.arity
            )));
        }
        let positions: Vec<usize> = (0..self.arity)
            .map(|j| if j + 1 < position { j } else { j + 1 })
            .collect();
        self.embed(self.arity + 1, &positions)
    }

    /// Reorders coordinates: coordinate `j` of `self` becomes `perm[j]`.
    pub fn permute(&self, perm: &[usize]) -> Result<SyncAutomaton> {
        self.embed(self.arity, perm)
    }

    /// The relation `{(m x_1 + r, ..., m x_n + r) : x in R}`.
    pub fn scale(&self, m: u64, r: u64) -> Result<SyncAutomaton> {
        if m == 0 || r >= m {
            return Err(Error::BadParameters(format!(
                "scale needs m > r >= 0, got m={m}, r={r}"
            )));
        }
        #[derive(Clone, PartialEq, Eq, Hash)]
        enum St {
            Offset(u64),
            At(usize),
            Repeat(usize, Letter, u64),
        }
        let full = Letter::full(self.arity);
        let start = if r == 0 {
            St::At(self.initial)
        } else {
            St::Offset(0)
        };
        Ok(build(
            self.arity,
            start,
            |s, l| match *s {
                St::Offset(j) => (l == full).then(|| {
                    if j + 1 == r {
                        St::At(self.initial)
                    } else {
                        St::Offset(j + 1)
                    }
                }),
                St::At(q) => self.step(q, l).map(|to| {
                    if m == 1 {
                        St::At(to)
                    } else {
                        St::Repeat(to, l, 1)
                    }
                }),
                St::Repeat(to, prev, c) => (l == prev).then(|| {
                    if c + 1 == m {
                        St::At(to)
                    } else {
                        St::Repeat(to, prev, c + 1)
                    }
                }),
            },
            |s| matches!(*s, St::At(q) if self.finals[q]),
        ))
    }

    /// Set of `k >= 0` such that reading `letter^k` from `from` ends in a
    /// state satisfying `hit` (`None` stands for the dead state).
    pub fn unary_lengths(
        &self,
        from: Option<usize>,
        letter: Letter,
        hit: impl Fn(Option<usize>) -> bool,
    ) -> UpSet {
        let mut first: HashMap<Option<usize>, u64> = HashMap::new();
        let mut seq = Vec::new();
        let mut cur = from;
        loop {
            if let Some(&j) = first.get(&cur) {
                let k = seq.len() as u64;
                let period = k - j;
                return UpSet::from_fn(j, period, |a| {
                    let idx = if a < k { a } else { j + (a - j) % period };
                    hit(seq[idx as usize])
                });
            }
            first.insert(cur, seq.len() as u64);
            seq.push(cur);
            cur = cur.and_then(|q| self.step(q, letter));
        }
    }

    /// The set recognized by a unary automaton.
    pub fn to_upset(&self) -> Result<UpSet> {
        if self.arity != 1 {
            return Err(Error::ArityMismatch {
                expected: 1,
                found: self.arity,
            });
        }
        let src = self.canonical();
        Ok(src.unary_lengths(Some(src.initial), Letter(1), |q| {
            q.is_some_and(|q| src.finals[q])
        }))
    }

    /// Whether some final state is reachable.
    pub fn is_empty(&self) -> bool {
        let mut seen = vec![false; self.num_states()];
        let mut stack = vec![self.initial];
        seen[self.initial] = true;
        while let Some(q) = stack.pop() {
            if self.finals[q] {
                return false;
            }
            for m in 1..self.stride() {
                if let Some(r) = self.step(q, Letter(m as u8)) {
                    if !seen[r] {
                        seen[r] = true;
                        stack.push(r);
                    }
                }
            }
        }
        true
    }

    pub fn includes(&self, other: &SyncAutomaton) -> Result<bool> {
        Ok(other.difference(self)?.is_empty())
    }

    /// Language equality, decided by comparing canonical forms.
    pub fn equivalent(&self, other: &SyncAutomaton) -> Result<bool> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        Ok(self.canonical() == other.canonical())
    }

    pub fn to_json(&self) -> AutomatonJson {
        AutomatonJson::from(self)
    }

    /// Graphviz rendering, one node per state and edges labelled `(b1,b2,...)`.
    pub fn to_dot(&self) -> String {
        format::to_dot(self)
    }
}

impl fmt::Debug for SyncAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SyncAutomaton")
            .field("arity", &self.arity)
            .field("states", &self.num_states())
            .field("initial", &self.initial)
            .field("finals", &self.finals().collect::<Vec<_>>())
            .field(
                "transitions",
                &self
                    .transitions()
                    .map(|(a, l, b)| (a, l.bits(self.arity), b))
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

/// Answers an emptiness, inclusion or equivalence question. For
/// [`Query::IsEmpty`] the second automaton is ignored. `Includes` asks
/// whether `b` is contained in `a`.
pub fn decide(a: &SyncAutomaton, b: Option<&SyncAutomaton>, query: Query) -> Result<bool> {
    let need = || b.ok_or_else(|| Error::BadParameters("query needs two automata".into()));
    match query {
        Query::IsEmpty => Ok(a.is_empty()),
        Query::Includes => a.includes(need()?),
        Query::Equivalent => a.equivalent(need()?),
    }
}

#[cfg(test)]
mod tests;
