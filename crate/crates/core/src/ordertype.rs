//! Order types of linear synchronous orders. Every such order has a type
//! that is a finite sum of `ω`, `ω*` and finite blocks; the reduced form
//! of that sum is unique, so equivalence reduces to comparing types.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::algebra::{Direction, Relation};
use crate::error::{Error, Result};
use crate::orderdecide::Order;
use crate::par::{self, Mode};
use crate::structured::NormalForm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Term {
    Omega,
    OmegaStar,
    /// A finite block of `n >= 1` points.
    Fin(u64),
}

impl Term {
    /// The term of the inverse order.
    pub fn dual(self) -> Term {
        match self {
            Term::Omega => Term::OmegaStar,
            Term::OmegaStar => Term::Omega,
            fin => fin,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Omega => f.write_str("w"),
            Term::OmegaStar => f.write_str("w*"),
            Term::Fin(n) => write!(f, "{n}"),
        }
    }
}

/// A finite sum of terms; the empty sum is the empty order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PoorSum {
    terms: Vec<Term>,
}

/// One rewriting step at position `i` (terms `i` and `i + 1`), if a rule
/// applies there.
pub fn rewrite_at(a: Term, b: Term) -> Option<Term> {
    match (a, b) {
        (Term::Fin(n), Term::Fin(m)) => Some(Term::Fin(n + m)),
        (Term::Fin(_), Term::Omega) => Some(Term::Omega),
        (Term::OmegaStar, Term::Fin(_)) => Some(Term::OmegaStar),
        _ => None,
    }
}

impl PoorSum {
    /// Builds a sum; `Fin(0)` terms are dropped.
    pub fn new(terms: impl IntoIterator<Item = Term>) -> Self {
        PoorSum {
            terms: terms.into_iter().filter(|t| *t != Term::Fin(0)).collect(),
        }
    }

    pub fn zero() -> Self {
        PoorSum::default()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn concat(&self, other: &PoorSum) -> PoorSum {
        PoorSum::new(self.terms.iter().chain(&other.terms).copied())
    }

    /// Applies the three rewriting rules until none applies.
    pub fn reduce(&self) -> PoorSum {
        let mut out: Vec<Term> = Vec::with_capacity(self.terms.len());
        for &t in &self.terms {
            out.push(t);
            while out.len() >= 2 {
                let n = out.len();
                match rewrite_at(out[n - 2], out[n - 1]) {
                    Some(merged) => {
                        out.truncate(n - 2);
                        out.push(merged);
                    }
                    None => break,
                }
            }
        }
        PoorSum { terms: out }
    }

    pub fn is_reduced(&self) -> bool {
        self.terms
            .windows(2)
            .all(|w| rewrite_at(w[0], w[1]).is_none())
    }

    /// Type of the inverse order, reduced.
    pub fn dual(&self) -> PoorSum {
        PoorSum::new(self.terms.iter().rev().map(|t| t.dual())).reduce()
    }
}

impl fmt::Display for PoorSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for PoorSum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "0" {
            return Ok(PoorSum::zero());
        }
        let mut terms = Vec::new();
        let mut pos = 0;
        for piece in s.split('+') {
            let at = pos + (piece.len() - piece.trim_start().len());
            let term = match piece.trim() {
                "w" => Term::Omega,
                "w*" => Term::OmegaStar,
                digits if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) => {
                    match digits.parse() {
                        Ok(n) if n >= 1 => Term::Fin(n),
                        _ => return Err(Error::parse(at, "expected a positive integer")),
                    }
                }
                _ => return Err(Error::parse(at, "expected `w`, `w*` or a positive integer")),
            };
            terms.push(term);
            pos += piece.len() + 1;
        }
        Ok(PoorSum { terms })
    }
}

/// The residue class `α + pN` of a periodic index, followed from `α + 2p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainHandle {
    pub residue: u64,
    pub period: u64,
    pub direction: Direction,
}

impl ChainHandle {
    /// The `k`-th element `α + kp` of the residue class.
    pub fn element(&self, k: u64) -> u64 {
        self.residue + k * self.period
    }
}

/// Relative position of two chain tails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TailOrder {
    Before,
    After,
    Interleaved,
}

impl TailOrder {
    fn flip(self) -> TailOrder {
        match self {
            TailOrder::Before => TailOrder::After,
            TailOrder::After => TailOrder::Before,
            TailOrder::Interleaved => TailOrder::Interleaved,
        }
    }
}

/// Position of a point relative to a chain tail or a class of chains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointPlacement {
    Before,
    After,
    Inside,
}

/// `x ≺ y`, failing when two distinct points are incomparable.
fn less(nf: &NormalForm, x: u64, y: u64) -> Result<bool> {
    if nf.member(x, y) {
        return Ok(true);
    }
    if x != y && !nf.member(y, x) {
        return Err(Error::NotLinear);
    }
    Ok(false)
}

/// Compares two tails with `a.residue < b.residue` using a constant number
/// of membership queries.
pub fn compare_tails(nf: &NormalForm, a: &ChainHandle, b: &ChainHandle) -> Result<TailOrder> {
    debug_assert!(a.residue < b.residue);
    let (alpha, beta, p) = (a.residue, b.residue, a.period);
    use Direction::{Asc, Desc};
    use TailOrder::{After, Before, Interleaved};
    Ok(match (a.direction, b.direction) {
        (Asc, Asc) => {
            if less(nf, beta + p, alpha)? {
                After
            } else if less(nf, alpha + 2 * p, beta)? {
                Before
            } else {
                Interleaved
            }
        }
        (Desc, Desc) => {
            if less(nf, alpha, beta + p)? {
                Before
            } else if less(nf, beta, alpha + 2 * p)? {
                After
            } else {
                Interleaved
            }
        }
        (Asc, Desc) => {
            if less(nf, beta, alpha + 2 * p)? {
                After
            } else if less(nf, alpha, beta + p)? {
                Before
            } else {
                After
            }
        }
        (Desc, Asc) => {
            if less(nf, alpha + 2 * p, beta)? || less(nf, alpha, beta + p)? {
                Before
            } else {
                After
            }
        }
    })
}

fn compare_any(nf: &NormalForm, a: &ChainHandle, b: &ChainHandle) -> Result<TailOrder> {
    match a.residue.cmp(&b.residue) {
        Ordering::Less => compare_tails(nf, a, b),
        Ordering::Greater => compare_tails(nf, b, a).map(TailOrder::flip),
        Ordering::Equal => Ok(TailOrder::Interleaved),
    }
}

/// Places a support point outside the tail of `a`. Beyond the first tail
/// element above `gamma` the comparison no longer changes, so finitely
/// many queries suffice.
pub fn locate_point(nf: &NormalForm, gamma: u64, a: &ChainHandle) -> Result<PointPlacement> {
    let k = if a.residue > gamma {
        0
    } else {
        (gamma - a.residue) / a.period + 1
    };
    let (mut below, mut above) = (false, false);
    for j in 2..=(k + 1).max(2) {
        if less(nf, gamma, a.element(j))? {
            below = true;
        } else {
            above = true;
        }
    }
    Ok(match (below, above) {
        (true, false) => PointPlacement::Before,
        (false, true) => PointPlacement::After,
        _ => PointPlacement::Inside,
    })
}

/// Disjoint-set forest over chain indices.
struct Classes {
    parent: Vec<usize>,
}

impl Classes {
    fn new(n: usize) -> Self {
        Classes {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// The reduced order type of a linear strict order.
pub fn order_type(r: &Relation) -> Result<PoorSum> {
    order_type_with(r, Mode::default())
}

/// [`order_type`] with an explicit strategy for the pairwise comparisons.
pub fn order_type_with(r: &Relation, mode: Mode) -> Result<PoorSum> {
    let order = Order::new(r)?;
    if !order.is_linear() {
        return Err(Error::NotLinear);
    }
    type_of_order(&order, mode)
}

pub(crate) fn type_of_order(order: &Order, mode: Mode) -> Result<PoorSum> {
    let nf = order.normal_form();
    let (t, p) = (nf.transient(), nf.period());

    let mut chains = Vec::new();
    for alpha in nf.periodic_indices().filter(|&i| nf.class_in_support(i)) {
        let direction = order.class_direction(alpha).ok_or(Error::NotLinear)?;
        chains.push(ChainHandle {
            residue: alpha,
            period: p,
            direction,
        });
    }
    let points: Vec<u64> = (0..t + 2 * p)
        .filter(|&x| nf.support().contains(x))
        .collect();

    let n = chains.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let verdicts = par::map_slice(mode, &pairs, |&(i, j)| {
        compare_any(nf, &chains[i], &chains[j])
    });
    let mut table = vec![vec![TailOrder::Interleaved; n]; n];
    for (&(i, j), v) in pairs.iter().zip(verdicts) {
        let v = v?;
        table[i][j] = v;
        table[j][i] = v.flip();
    }

    let mut forest = Classes::new(n);
    for &(i, j) in &pairs {
        if table[i][j] == TailOrder::Interleaved {
            forest.union(i, j);
        }
    }
    let mut roots: Vec<usize> = (0..n).map(|i| forest.find(i)).collect();
    let mut reps: Vec<usize> = roots.clone();
    reps.sort_unstable();
    reps.dedup();
    for r in roots.iter_mut() {
        *r = reps.binary_search(r).expect("root is a representative");
    }
    let class_of = roots;
    let classes = reps.len();
    let members: Vec<Vec<usize>> = (0..classes)
        .map(|c| (0..n).filter(|&i| class_of[i] == c).collect())
        .collect();

    // every cross pair must agree with the representatives
    for &(i, j) in &pairs {
        let (ci, cj) = (class_of[i], class_of[j]);
        let expect = if ci == cj {
            TailOrder::Interleaved
        } else {
            table[members[ci][0]][members[cj][0]]
        };
        if table[i][j] != expect || (ci == cj && chains[i].direction != chains[j].direction) {
            return Err(Error::InconsistentOrder(format!(
                "chains {} and {} disagree with their classes",
                chains[i].residue, chains[j].residue
            )));
        }
    }

    let mut rank = vec![0usize; classes];
    for (c, slot) in rank.iter_mut().enumerate() {
        *slot = (0..classes)
            .filter(|&d| d != c && table[members[d][0]][members[c][0]] == TailOrder::Before)
            .count();
    }
    let mut by_rank = vec![usize::MAX; classes];
    for (c, &r) in rank.iter().enumerate() {
        if by_rank[r] != usize::MAX {
            return Err(Error::InconsistentOrder(
                "classes are not totally ordered".into(),
            ));
        }
        by_rank[r] = c;
    }

    let placements = par::map_slice(mode, &points, |&gamma| -> Result<Option<usize>> {
        let mut gap = 0;
        let mut after = vec![false; classes];
        for c in 0..classes {
            let mut seen = (false, false);
            for &i in &members[c] {
                match locate_point(nf, gamma, &chains[i])? {
                    PointPlacement::Before => seen.0 = true,
                    PointPlacement::After => seen.1 = true,
                    PointPlacement::Inside => return Ok(None),
                }
            }
            match seen {
                (true, true) => return Ok(None),
                (false, true) => {
                    after[c] = true;
                    gap += 1;
                }
                _ => {}
            }
        }
        if (0..classes).any(|c| after[c] != (rank[c] < gap)) {
            return Err(Error::InconsistentOrder(format!(
                "point {gamma} does not fit between classes"
            )));
        }
        Ok(Some(gap))
    });

    let mut gaps: Vec<Vec<u64>> = vec![Vec::new(); classes + 1];
    for (&gamma, placed) in points.iter().zip(placements) {
        if let Some(g) = placed? {
            gaps[g].push(gamma);
        }
    }
    let mut terms = Vec::new();
    for (g, block) in gaps.iter().enumerate() {
        for w in 0..block.len() {
            for v in w + 1..block.len() {
                less(nf, block[w], block[v])?;
            }
        }
        terms.push(Term::Fin(block.len() as u64));
        if g < classes {
            terms.push(match chains[members[by_rank[g]][0]].direction {
                Direction::Asc => Term::Omega,
                Direction::Desc => Term::OmegaStar,
            });
        }
    }
    Ok(PoorSum::new(terms).reduce())
}

/// Whether two linear orders have the same order type.
pub fn equivalent_orders(r: &Relation, s: &Relation) -> Result<bool> {
    Ok(order_type(r)? == order_type(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{even_odd, three, w, w_star};
    use crate::syncauto::SyncAutomaton;
    use crate::upset::UpSet;

    fn rel(a: SyncAutomaton) -> Relation {
        Relation::new(&a).unwrap()
    }

    fn sum(s: &str) -> PoorSum {
        s.parse().unwrap()
    }

    fn omega_omega_star() -> Relation {
        let a = rel(w()).scale(2, 0).unwrap();
        let b = rel(w_star()).scale(2, 1).unwrap();
        a.sum_disjoint(&b).unwrap()
    }

    #[test]
    fn reductions() {
        assert_eq!(sum("3 + w").reduce(), sum("w"));
        assert_eq!(sum("w* + 5").reduce(), sum("w*"));
        assert_eq!(sum("2 + 3 + w*").reduce(), sum("5 + w*"));
        assert_eq!(sum("w* + 2 + w").reduce(), sum("w* + w"));
        assert_eq!(sum("w + 1 + w*").reduce(), sum("w + 1 + w*"));
        assert!(sum("5 + w*").is_reduced());
        assert!(!sum("1 + w").is_reduced());
    }

    #[test]
    fn text_form() {
        for s in ["0", "w", "w*", "3", "w + w*", "5 + w*", "w + 2 + w*"] {
            assert_eq!(sum(s).to_string(), s);
        }
        assert_eq!(PoorSum::zero().to_string(), "0");
        assert!("w + ".parse::<PoorSum>().is_err());
        assert!("0 + w".parse::<PoorSum>().is_err());
        assert!("x".parse::<PoorSum>().is_err());
        assert_eq!(sum("w + 3 + w*").dual(), sum("w + 3 + w*"));
        assert_eq!(sum("2 + w").dual(), sum("w*"));
    }

    #[test]
    fn tail_comparisons() {
        let nf = rel(w()).normal_form();
        assert_eq!(nf.period(), 2);
        let c = |residue, direction| ChainHandle {
            residue,
            period: 2,
            direction,
        };
        let asc = Direction::Asc;
        assert_eq!(
            compare_tails(&nf, &c(0, asc), &c(1, asc)).unwrap(),
            TailOrder::Interleaved
        );
        assert_eq!(
            locate_point(&nf, 0, &c(0, asc)).unwrap(),
            PointPlacement::Before
        );
        assert_eq!(
            locate_point(&nf, 5, &c(0, asc)).unwrap(),
            PointPlacement::Inside
        );

        let star = rel(w_star()).normal_form();
        let desc = Direction::Desc;
        assert_eq!(star.period(), 2);
        assert_eq!(
            compare_tails(&star, &c(0, desc), &c(1, desc)).unwrap(),
            TailOrder::Interleaved
        );
        assert_eq!(
            locate_point(&star, 0, &c(0, desc)).unwrap(),
            PointPlacement::After
        );

        let mixed = omega_omega_star().normal_form();
        let p = mixed.period();
        let classes: Vec<ChainHandle> = mixed
            .periodic_indices()
            .map(|i| ChainHandle {
                residue: i,
                period: p,
                direction: if i % 2 == 0 { asc } else { desc },
            })
            .collect();
        for a in &classes {
            for b in &classes {
                if a.residue < b.residue && a.direction != b.direction {
                    let expect = if a.direction == asc {
                        TailOrder::Before
                    } else {
                        TailOrder::After
                    };
                    assert_eq!(compare_tails(&mixed, a, b).unwrap(), expect);
                }
            }
        }
    }

    #[test]
    fn figure_types() {
        assert_eq!(order_type(&rel(w_star())).unwrap().to_string(), "w*");
        assert_eq!(order_type(&rel(w())).unwrap().to_string(), "w");
        assert_eq!(order_type(&rel(three())).unwrap().to_string(), "3");
        assert_eq!(order_type(&Relation::empty()).unwrap().to_string(), "0");
    }

    #[test]
    fn constructed_types() {
        let three_w = rel(three())
            .scale(2, 0)
            .unwrap()
            .sum_disjoint(&rel(w()).scale(2, 1).unwrap())
            .unwrap();
        assert_eq!(order_type(&three_w).unwrap().to_string(), "w");
        assert_eq!(
            order_type(&omega_omega_star()).unwrap().to_string(),
            "w + w*"
        );
        assert_eq!(
            order_type(&omega_omega_star().inverse())
                .unwrap()
                .to_string(),
            "w + w*"
        );
        let evens = Relation::natural_order_on(&UpSet::residue_class(2, 0), Direction::Asc);
        let ww = evens.complete_with(Direction::Asc).unwrap();
        assert_eq!(order_type(&ww).unwrap().to_string(), "w + w");
        let star_then_three = rel(w_star())
            .scale(2, 1)
            .unwrap()
            .sum_disjoint(&rel(three()).scale(2, 0).unwrap())
            .unwrap();
        assert_eq!(order_type(&star_then_three).unwrap().to_string(), "w*");
        let three_star = rel(three())
            .scale(2, 0)
            .unwrap()
            .sum_disjoint(&rel(w_star()).scale(2, 1).unwrap())
            .unwrap();
        assert_eq!(order_type(&three_star).unwrap().to_string(), "3 + w*");
    }

    #[test]
    fn equivalence() {
        let evens = Relation::natural_order_on(&UpSet::residue_class(2, 0), Direction::Asc);
        assert!(equivalent_orders(&evens, &rel(w())).unwrap());
        assert!(!equivalent_orders(&rel(w()), &rel(w_star())).unwrap());
        assert!(equivalent_orders(&rel(three()), &rel(three())).unwrap());
        assert_eq!(order_type(&rel(even_odd())), Err(Error::NotLinear));
    }

    #[test]
    fn modes_agree() {
        let r = omega_omega_star();
        assert_eq!(
            order_type_with(&r, Mode::Sequential).unwrap(),
            order_type_with(&r, Mode::Parallel).unwrap()
        );
    }
}
