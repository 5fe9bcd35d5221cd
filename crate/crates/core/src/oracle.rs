//! Brute-force semantics of binary automata on the prefix `{0..=n}`.
//!
//! Everything here runs the raw automaton transition by transition and
//! never looks at structured or normal forms, so it can be used to check
//! them. Verdicts on a prefix are advisory: they can confirm a violation
//! but never certify a property of the whole relation.

use serde::Serialize;

use crate::algebra::{Direction, Relation};
use crate::error::{Error, Result};
use crate::orderdecide::{Order, Side};
use crate::par::{self, Mode};
use crate::syncauto::{Letter, SyncAutomaton};

/// Membership table of a binary relation on `{0..=n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prefix {
    n: u64,
    rows: Vec<Vec<u64>>,
    support: Vec<bool>,
}

impl Prefix {
    /// Runs `a` on every pair `(k, l)` with `k, l <= n`: the diagonal
    /// prefix once, then each off-diagonal tail letter by letter.
    pub fn new(a: &SyncAutomaton, n: u64, mode: Mode) -> Self {
        assert_eq!(a.arity(), 2, "prefix tables need a binary automaton");
        let size = n as usize + 1;
        let words = size.div_ceil(64);
        let mut diag = Vec::with_capacity(size);
        let mut q = Some(a.initial());
        for _ in 0..size {
            diag.push(q);
            q = q.and_then(|s| a.step(s, Letter::full(2)));
        }
        let final_at = |q: Option<usize>| q.is_some_and(|s| a.is_final(s));
        // row m: pairs whose smaller coordinate is m
        // a unary run cycles within `states` steps, so a partner of `m`
        // beyond the prefix shows up by then
        let states = a.num_states();
        let tails = par::map_range(mode, size, |m| {
            let mut right = vec![false; size];
            let mut left = vec![false; size];
            right[m] = final_at(diag[m]);
            left[m] = right[m];
            let mut partner = right[m];
            for (mask, out) in [(0b10, &mut right), (0b01, &mut left)] {
                let letter = Letter::from_mask(mask).expect("nonzero mask");
                let mut s = diag[m];
                for j in m + 1..size.max(m + 1 + states) {
                    s = s.and_then(|q| a.step(q, letter));
                    if s.is_none() {
                        break;
                    }
                    let hit = final_at(s);
                    partner |= hit;
                    if j < size {
                        out[j] = hit;
                    } else if partner {
                        break;
                    }
                }
            }
            (right, left, partner)
        });
        let mut rows = vec![vec![0u64; words]; size];
        let mut support = vec![false; size];
        for (m, (right, left, partner)) in tails.iter().enumerate() {
            support[m] |= partner;
            for l in m..size {
                if right[l] {
                    rows[m][l / 64] |= 1 << (l % 64);
                    support[l] = true;
                }
                if left[l] {
                    rows[l][m / 64] |= 1 << (m % 64);
                    support[l] = true;
                }
            }
        }
        Prefix { n, rows, support }
    }

    pub fn bound(&self) -> u64 {
        self.n
    }

    pub fn contains(&self, k: u64, l: u64) -> bool {
        k <= self.n && l <= self.n && self.rows[k as usize][(l / 64) as usize] >> (l % 64) & 1 == 1
    }

    pub fn pairs(&self) -> Vec<(u64, u64)> {
        let r = 0..=self.n;
        r.clone()
            .flat_map(|k| r.clone().map(move |l| (k, l)))
            .filter(|&(k, l)| self.contains(k, l))
            .collect()
    }

    /// Support elements inside the prefix; their partners may lie beyond.
    pub fn support(&self) -> Vec<u64> {
        (0..=self.n).filter(|&x| self.support[x as usize]).collect()
    }

    /// First violation of irreflexivity, asymmetry or transitivity among
    /// pairs inside the prefix.
    pub fn order_violation(&self) -> Option<String> {
        for x in 0..=self.n {
            if self.contains(x, x) {
                return Some(format!("({x},{x}) is in the relation"));
            }
        }
        for x in 0..=self.n {
            for y in x + 1..=self.n {
                if self.contains(x, y) && self.contains(y, x) {
                    return Some(format!("both ({x},{y}) and ({y},{x}) are in the relation"));
                }
            }
        }
        for x in 0..=self.n as usize {
            for y in 0..=self.n as usize {
                if !self.contains(x as u64, y as u64) {
                    continue;
                }
                // row(y) must be contained in row(x)
                let missing = self.rows[y]
                    .iter()
                    .zip(&self.rows[x])
                    .position(|(ry, rx)| ry & !rx != 0);
                if let Some(word) = missing {
                    let bits = self.rows[y][word] & !self.rows[x][word];
                    let z = word * 64 + bits.trailing_zeros() as usize;
                    return Some(format!("({x},{y}) and ({y},{z}) but not ({x},{z})"));
                }
            }
        }
        None
    }

    /// First pair of distinct support elements that is incomparable.
    pub fn incomparable_pair(&self) -> Option<(u64, u64)> {
        let supp = self.support();
        for (i, &x) in supp.iter().enumerate() {
            for &y in &supp[i + 1..] {
                if !self.contains(x, y) && !self.contains(y, x) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// Number of vertices on a longest path; zero for an empty support.
    pub fn longest_chain(&self) -> Result<u64> {
        let supp = self.support();
        let size = self.n as usize + 1;
        let mut indegree = vec![0usize; size];
        for &x in &supp {
            for &y in &supp {
                if self.contains(x, y) {
                    indegree[y as usize] += 1;
                }
            }
        }
        let mut ready: Vec<u64> = supp
            .iter()
            .copied()
            .filter(|&x| indegree[x as usize] == 0)
            .collect();
        let mut length = vec![1u64; size];
        let mut done = 0;
        while let Some(x) = ready.pop() {
            done += 1;
            for &y in &supp {
                if self.contains(x, y) {
                    length[y as usize] = length[y as usize].max(length[x as usize] + 1);
                    indegree[y as usize] -= 1;
                    if indegree[y as usize] == 0 {
                        ready.push(y);
                    }
                }
            }
        }
        if done < supp.len() {
            return Err(Error::NotAnOrder);
        }
        Ok(supp.iter().map(|&x| length[x as usize]).max().unwrap_or(0))
    }

    /// Longest chain that also increases numerically: `x_1 < x_2 < ...` with
    /// `x_1 ≺ x_2 ≺ ...` for `Asc`, or `x_1 ≻ x_2 ≻ ...` for `Desc`. An
    /// infinite chain in that direction exists exactly when these lengths
    /// are unbounded.
    pub fn longest_monotone_chain(&self, direction: Direction) -> u64 {
        let supp = self.support();
        let mut length = vec![1u64; supp.len()];
        for j in 0..supp.len() {
            for i in 0..j {
                let linked = match direction {
                    Direction::Asc => self.contains(supp[i], supp[j]),
                    Direction::Desc => self.contains(supp[j], supp[i]),
                };
                if linked {
                    length[j] = length[j].max(length[i] + 1);
                }
            }
        }
        length.into_iter().max().unwrap_or(0)
    }

    /// Size of a largest antichain of the prefix support: the support size
    /// minus a maximum matching of the comparability bipartite graph.
    pub fn max_antichain(&self) -> Result<u64> {
        if self.order_violation().is_some() {
            return Err(Error::NotAnOrder);
        }
        let supp = self.support();
        let succ: Vec<Vec<usize>> = supp
            .iter()
            .map(|&x| {
                (0..supp.len())
                    .filter(|&j| self.contains(x, supp[j]))
                    .collect()
            })
            .collect();
        let mut matched_to: Vec<Option<usize>> = vec![None; supp.len()];
        let mut matching = 0;
        for u in 0..supp.len() {
            let mut seen = vec![false; supp.len()];
            if augment(u, &succ, &mut matched_to, &mut seen) {
                matching += 1;
            }
        }
        Ok((supp.len() - matching) as u64)
    }
}

fn augment(
    u: usize,
    succ: &[Vec<usize>],
    matched_to: &mut [Option<usize>],
    seen: &mut [bool],
) -> bool {
    for &v in &succ[u] {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        if matched_to[v].is_none_or(|w| augment(w, succ, matched_to, seen)) {
            matched_to[v] = Some(u);
            return true;
        }
    }
    false
}

/// All pairs `(k, l)` of the relation with `k, l <= n`, sorted.
pub fn enumerate_pairs(a: &SyncAutomaton, n: u64) -> Vec<(u64, u64)> {
    Prefix::new(a, n, Mode::default()).pairs()
}

pub fn longest_chain_prefix(a: &SyncAutomaton, n: u64) -> Result<u64> {
    Prefix::new(a, n, Mode::default()).longest_chain()
}

pub fn max_antichain_prefix(a: &SyncAutomaton, n: u64) -> Result<u64> {
    Prefix::new(a, n, Mode::default()).max_antichain()
}

/// One disagreement between a decision procedure and the prefix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Divergence {
    pub check: String,
    pub input: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub max: u64,
    pub strict_order: bool,
    pub prefix_order_violation: Option<String>,
    pub linear: Option<bool>,
    pub prefix_incomparable: Option<(u64, u64)>,
    pub divergences: Vec<Divergence>,
}

impl Report {
    pub fn is_clean(&self) -> bool {
        self.divergences.is_empty()
    }
}

/// Recomputes what the prefix `{0..=n}` can check and records every
/// disagreement with the decision procedures.
pub fn verify_against_brute_force(a: &SyncAutomaton, n: u64) -> Result<Report> {
    let r = Relation::new(a)?;
    let prefix = Prefix::new(a, n, Mode::default());
    let mut divergences = Vec::new();
    let mut diverge = |check: &str, input: String, expected: String, got: String| {
        divergences.push(Divergence {
            check: check.into(),
            input,
            expected,
            got,
        });
    };

    let structured = r.structured();
    for k in 0..=n {
        for l in 0..=n {
            let want = prefix.contains(k, l);
            if a.accepts(&[k, l]) != want {
                diverge(
                    "accepts",
                    format!("({k},{l})"),
                    want.to_string(),
                    (!want).to_string(),
                );
            }
            if structured.member(k, l) != want {
                diverge(
                    "structured",
                    format!("({k},{l})"),
                    want.to_string(),
                    (!want).to_string(),
                );
            }
        }
    }

    let violation = prefix.order_violation();
    let order = Order::new(&r).ok();
    if order.is_some() {
        if let Some(v) = &violation {
            diverge("strict_order", v.clone(), "false".into(), "true".into());
        }
    }
    let incomparable = prefix.incomparable_pair();
    let linear = order.as_ref().map(|o| o.is_linear());
    if let (Some(true), Some((x, y))) = (linear, incomparable) {
        diverge(
            "linear",
            format!("({x},{y})"),
            "false".into(),
            "true".into(),
        );
    }

    if let Some(o) = &order {
        for dir in [Direction::Asc, Direction::Desc] {
            if let Some((k, d)) = o.infinite_chain(dir).witness {
                let mut j = 0;
                while d > 0 && k + (j + 1) * d <= n {
                    let (x, y) = (k + j * d, k + (j + 1) * d);
                    let ok = match dir {
                        Direction::Asc => prefix.contains(x, y),
                        Direction::Desc => prefix.contains(y, x),
                    };
                    if !ok {
                        diverge(
                            "chain_witness",
                            format!("{dir:?} ({k},{d}) at j={j}"),
                            "chain".into(),
                            "broken".into(),
                        );
                        break;
                    }
                    j += 1;
                }
            }
        }
        for side in [Side::Max, Side::Min] {
            if let Some(m) = o.extremal(side).filter(|&m| m <= n) {
                let beaten = (0..=n).find(|&y| match side {
                    Side::Max => prefix.contains(m, y),
                    Side::Min => prefix.contains(y, m),
                });
                if let Some(y) = beaten {
                    diverge(
                        "extremal",
                        format!("{side:?} {m}"),
                        "extremal".into(),
                        format!("beaten by {y}"),
                    );
                }
            }
        }
        if !o.has_infinite_antichain() {
            let bound = o.antichain_bound()?;
            if let Ok(size) = prefix.max_antichain() {
                if size > bound {
                    diverge(
                        "antichain_bound",
                        format!("prefix {n}"),
                        format!("<= {bound}"),
                        size.to_string(),
                    );
                }
            }
        }
    }
    Ok(Report {
        max: n,
        strict_order: order.is_some(),
        prefix_order_violation: violation,
        linear,
        prefix_incomparable: incomparable,
        divergences,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{even_odd, full_relation, three, w, w_star};
    use crate::upset::UpSet;

    #[test]
    fn pair_enumeration() {
        assert_eq!(
            enumerate_pairs(&w(), 3),
            vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
        );
        assert_eq!(enumerate_pairs(&three(), 5), vec![(1, 0), (2, 0), (2, 1)]);
        assert!(enumerate_pairs(&SyncAutomaton::empty(2), 10).is_empty());
        let seq = Prefix::new(&even_odd(), 70, Mode::Sequential);
        let par = Prefix::new(&even_odd(), 70, Mode::Parallel);
        assert_eq!(seq, par);
        for k in 0..=70 {
            for l in 0..=70 {
                assert_eq!(seq.contains(k, l), even_odd().accepts(&[k, l]));
            }
        }
    }

    #[test]
    fn chains_and_antichains() {
        assert_eq!(longest_chain_prefix(&even_odd(), 100).unwrap(), 2);
        assert_eq!(longest_chain_prefix(&w(), 10).unwrap(), 11);
        assert_eq!(
            longest_chain_prefix(&SyncAutomaton::empty(2), 10).unwrap(),
            0
        );
        assert_eq!(
            longest_chain_prefix(&full_relation(), 5),
            Err(Error::NotAnOrder)
        );
        assert_eq!(max_antichain_prefix(&even_odd(), 10).unwrap(), 6);
        assert_eq!(max_antichain_prefix(&w(), 50).unwrap(), 1);
        let evens = Relation::natural_order_on(&UpSet::residue_class(2, 0), Direction::Asc);
        assert_eq!(max_antichain_prefix(evens.automaton(), 9).unwrap(), 1);
        assert_eq!(
            max_antichain_prefix(&full_relation(), 5),
            Err(Error::NotAnOrder)
        );
    }

    #[test]
    fn verification_reports() {
        for a in [w(), w_star(), three(), even_odd()] {
            let report = verify_against_brute_force(&a, 60).unwrap();
            assert!(report.is_clean(), "{:?}", report.divergences);
            assert!(report.strict_order);
        }
        let full = verify_against_brute_force(&full_relation(), 20).unwrap();
        assert!(!full.strict_order);
        assert!(full.prefix_order_violation.is_some());
        assert!(full.is_clean());
        let json = serde_json::to_string(&verify_against_brute_force(&w(), 10).unwrap()).unwrap();
        assert!(json.contains("\"divergences\":[]"));
    }
}
