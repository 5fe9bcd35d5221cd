//! Binary relations as a diagonal lasso with per-state distance sets.
//!
//! Reading `(k, l)` a binary synchronous automaton first follows the
//! diagonal letter `(1,1)` for `min(k, l)` steps and then a single axis
//! letter for `|k - l|` steps. The diagonal run is a lasso `q_0, ..., q_{n-1}`
//! looping back to `q_tau`; for each diagonal state we keep the set of
//! accepted distances on the left axis (`k > l`), on the right axis
//! (`k < l`) and whether the diagonal pair itself is accepted. The relation is
//! then
//!
//! ```text
//! (k, l) in R  <=>  k < l and l - k in right[index(k)]
//!               or  k > l and k - l in left[index(l)]
//!               or  k = l and eq[index(k)]
//! ```
//!
//! A [`NormalForm`] additionally fixes one transient `t` and one period `p`
//! for the diagonal, every distance set and the support of the relation.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::syncauto::{build, Letter, SyncAutomaton};
use crate::upset::{lcm, UpSet};

const DIAG: Letter = Letter(0b11);
const LEFT: Letter = Letter(0b01);
const RIGHT: Letter = Letter(0b10);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredBinary {
    loop_target: usize,
    left: Vec<UpSet>,
    right: Vec<UpSet>,
    eq: Vec<bool>,
}

impl StructuredBinary {
    pub fn new(
        loop_target: usize,
        left: Vec<UpSet>,
        right: Vec<UpSet>,
        eq: Vec<bool>,
    ) -> Result<Self> {
        let n = eq.len();
        if n == 0 || left.len() != n || right.len() != n {
            return Err(Error::BadParameters(
                "diagonal needs at least one state and matching tail arrays".into(),
            ));
        }
        if loop_target >= n {
            return Err(Error::BadParameters(format!(
                "loop target {loop_target} out of range for {n} diagonal states"
            )));
        }
        if left.iter().chain(&right).any(|s| s.contains(0)) {
            return Err(Error::BadParameters(
                "distance sets must not contain 0".into(),
            ));
        }
        Ok(StructuredBinary {
            loop_target,
            left,
            right,
            eq,
        })
    }

    /// The empty relation.
    pub fn empty() -> Self {
        StructuredBinary {
            loop_target: 0,
            left: vec![UpSet::empty()],
            right: vec![UpSet::empty()],
            eq: vec![false],
        }
    }

    /// Decomposes a binary automaton.
    pub fn from_automaton(a: &SyncAutomaton) -> Result<Self> {
        if a.arity() != 2 {
            return Err(Error::ArityMismatch {
                expected: 2,
                found: a.arity(),
            });
        }
        let a = a.canonical();
        let mut diag: Vec<Option<usize>> = Vec::new();
        let mut cur = Some(a.initial());
        let loop_target = loop {
            if let Some(j) = diag.iter().position(|&s| s == cur) {
                break j;
            }
            diag.push(cur);
            cur = cur.and_then(|q| a.step(q, DIAG));
        };
        let accepted = |q: Option<usize>| q.is_some_and(|q| a.is_final(q));
        let zero = UpSet::singleton(0);
        let tail = |s: Option<usize>, l: Letter| a.unary_lengths(s, l, accepted).difference(&zero);
        Ok(StructuredBinary {
            loop_target,
            left: diag.iter().map(|&s| tail(s, LEFT)).collect(),
            right: diag.iter().map(|&s| tail(s, RIGHT)).collect(),
            eq: diag.iter().map(|&s| accepted(s)).collect(),
        })
    }

    pub fn n_diag(&self) -> usize {
        self.eq.len()
    }

    pub fn loop_target(&self) -> usize {
        self.loop_target
    }

    /// Length of the diagonal cycle.
    pub fn diag_period(&self) -> usize {
        self.n_diag() - self.loop_target
    }

    pub fn left(&self, i: usize) -> &UpSet {
        &self.left[i]
    }

    pub fn right(&self, i: usize) -> &UpSet {
        &self.right[i]
    }

    pub fn eq(&self, i: usize) -> bool {
        self.eq[i]
    }

    /// Diagonal state reached after `k` diagonal letters.
    pub fn index(&self, k: u64) -> usize {
        let tau = self.loop_target as u64;
        if k < tau {
            k as usize
        } else {
            (tau + (k - tau) % self.diag_period() as u64) as usize
        }
    }

    pub fn member(&self, k: u64, l: u64) -> bool {
        use std::cmp::Ordering::*;
        match k.cmp(&l) {
            Less => self.right[self.index(k)].contains(l - k),
            Greater => self.left[self.index(l)].contains(k - l),
            Equal => self.eq[self.index(k)],
        }
    }

    /// The inverse relation: left and right tails swap.
    pub fn inverse(&self) -> Self {
        StructuredBinary {
            loop_target: self.loop_target,
            left: self.right.clone(),
            right: self.left.clone(),
            eq: self.eq.clone(),
        }
    }

    pub fn to_automaton(&self) -> SyncAutomaton {
        #[derive(Clone, Copy, PartialEq, Eq, Hash)]
        enum St {
            Diag(usize),
            Left(usize, u64),
            Right(usize, u64),
        }
        let n = self.n_diag();
        let next_diag = |i: usize| if i + 1 < n { i + 1 } else { self.loop_target };
        let bump = |set: &UpSet, d: u64| {
            let (t, p) = (set.transient(), set.period());
            let d = d + 1;
            if d < t + p {
                d
            } else {
                t + (d - t) % p
            }
        };
        build(
            2,
            St::Diag(0),
            |s, l| match (*s, l) {
                (St::Diag(i), DIAG) => Some(St::Diag(next_diag(i))),
                (St::Diag(i), LEFT) => Some(St::Left(i, bump(&self.left[i], 0))),
                (St::Diag(i), RIGHT) => Some(St::Right(i, bump(&self.right[i], 0))),
                (St::Left(i, d), LEFT) => Some(St::Left(i, bump(&self.left[i], d))),
                (St::Right(i, d), RIGHT) => Some(St::Right(i, bump(&self.right[i], d))),
                _ => None,
            },
            |s| match *s {
                St::Diag(i) => self.eq[i],
                St::Left(i, d) => self.left[i].contains(d),
                St::Right(i, d) => self.right[i].contains(d),
            },
        )
    }

    /// Text dump: a `diag t=.. p=..` header and one line per diagonal state.
    pub fn dump(&self) -> String {
        let mut out = format!("diag t={} p={}\n", self.loop_target, self.diag_period());
        for i in 0..self.n_diag() {
            let _ = writeln!(
                out,
                "{i}: DL={} DR={} EQ={}",
                self.left[i],
                self.right[i],
                u8::from(self.eq[i])
            );
        }
        out
    }

    /// Brings the decomposition to a common transient and period, aligned
    /// with the support of the relation.
    pub fn normalize(&self) -> NormalForm {
        let a = self.to_automaton();
        let support = support_of(&a);
        let tau = self.loop_target as u64;
        let mut period = self.diag_period() as u64;
        let mut tail_transient = 0;
        period = lcm(period, support.period());
        for set in self.left.iter().chain(&self.right) {
            period = lcm(period, set.period());
            tail_transient = tail_transient.max(set.transient());
        }
        let t = tau.max(support.transient());
        let floor = t.max(tail_transient);
        let p = (floor / period + 1) * period;
        let n = (t + p) as usize;
        let idx: Vec<usize> = (0..n as u64).map(|j| self.index(j)).collect();
        let structured = StructuredBinary {
            loop_target: t as usize,
            left: idx.iter().map(|&i| self.left[i].clone()).collect(),
            right: idx.iter().map(|&i| self.right[i].clone()).collect(),
            eq: idx.iter().map(|&i| self.eq[i]).collect(),
        };
        NormalForm {
            structured,
            transient: t,
            period: p,
            support,
        }
    }
}

/// `{x : exists y, (x, y) in R or (y, x) in R}` for a binary automaton.
pub(crate) fn support_of(a: &SyncAutomaton) -> UpSet {
    let firsts = a.project(2).expect("binary").to_upset().expect("unary");
    let seconds = a.project(1).expect("binary").to_upset().expect("unary");
    firsts.union(&seconds)
}

/// A [`StructuredBinary`] whose diagonal, distance sets and support share
/// one transient `t` and period `p`, with `p` above every transient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    structured: StructuredBinary,
    transient: u64,
    period: u64,
    support: UpSet,
}

impl NormalForm {
    pub fn structured(&self) -> &StructuredBinary {
        &self.structured
    }

    pub fn transient(&self) -> u64 {
        self.transient
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    /// Number of diagonal states, `t + p`.
    pub fn n_diag(&self) -> usize {
        self.structured.n_diag()
    }

    pub fn support(&self) -> &UpSet {
        &self.support
    }

    pub fn index(&self, k: u64) -> usize {
        self.structured.index(k)
    }

    pub fn member(&self, k: u64, l: u64) -> bool {
        self.structured.member(k, l)
    }

    pub fn left(&self, i: usize) -> &UpSet {
        self.structured.left(i)
    }

    pub fn right(&self, i: usize) -> &UpSet {
        self.structured.right(i)
    }

    /// Periodic diagonal indices `t..t+p`.
    pub fn periodic_indices(&self) -> std::ops::Range<u64> {
        self.transient..self.transient + self.period
    }

    /// Whether the residue class of the periodic index `i` lies in the
    /// support (it is then entirely inside it).
    pub fn class_in_support(&self, i: u64) -> bool {
        self.support.contains(i)
    }

    pub fn inverse(&self) -> NormalForm {
        NormalForm {
            structured: self.structured.inverse(),
            transient: self.transient,
            period: self.period,
            support: self.support.clone(),
        }
    }

    pub fn dump(&self) -> String {
        self.structured.dump()
    }

    /// Checks the normal-form conditions, the last one by membership
    /// queries on `R` and its inverse. Returns the first violation found.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let (t, p) = (self.transient, self.period);
        let s = &self.structured;
        if s.loop_target as u64 != t || s.n_diag() as u64 != t + p {
            return Err(format!("diagonal is not a lasso with t={t}, p={p}"));
        }
        if p <= t {
            return Err(format!("period {p} does not exceed transient {t}"));
        }
        for (i, set) in s.left.iter().chain(&s.right).enumerate() {
            if set.transient() >= p {
                return Err(format!("tail {i} has transient {} >= p", set.transient()));
            }
            if p % set.period() != 0 {
                return Err(format!(
                    "tail {i} has period {} not dividing p",
                    set.period()
                ));
            }
        }
        if t < self.support.transient() || p % self.support.period() != 0 {
            return Err("support is not aligned with the periodic classes".into());
        }
        for inverse in [false, true] {
            let r = |x: u64, y: u64| {
                if inverse {
                    s.member(y, x)
                } else {
                    s.member(x, y)
                }
            };
            for a in t..t + p {
                for b in a + 1..t + p {
                    let base = r(a + 2 * p, b);
                    for k in 2..=6 {
                        if r(a + k * p, b) != base {
                            return Err(format!("({a}+{k}p, {b}) breaks the left stabilization"));
                        }
                    }
                    let base = r(a, b + p);
                    for k in 1..=6 {
                        if r(a, b + k * p) != base {
                            return Err(format!("({a}, {b}+{k}p) breaks the right stabilization"));
                        }
                    }
                    for l in 1..=4u64 {
                        for k in 0..l {
                            if r(a + k * p, b + l * p) && !r(a, b + (l - k) * p) {
                                return Err(format!("({a}+{k}p, {b}+{l}p) does not deflate"));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
