//! Decision procedures on binary relations viewed as strict orders: the
//! order axioms, linearity, completeness, infinite chains and antichains,
//! and extremal elements.

use serde::Serialize;

use crate::algebra::{Direction, Relation};
use crate::error::{Error, Result};
use crate::structured::NormalForm;
use crate::upset::UpSet;

/// Which extremal element to look for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Max,
    Min,
}

/// Verdict of [`has_infinite_chain`]. A witness `(k, d)` means the
/// progression `k, k + d, k + 2d, ...` is a chain in the requested
/// direction: ascending means `k + jd < k + (j+1)d` in the order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChainVerdict {
    pub exists: bool,
    pub witness: Option<(u64, u64)>,
}

/// A relation checked to be a strict order, with its normal form cached.
#[derive(Debug, Clone)]
pub struct Order {
    relation: Relation,
    normal: NormalForm,
}

/// Transitive and irreflexive-asymmetric: `R∘R ⊆ R` and `R ∩ R⁻¹ = ∅`.
pub fn is_strict_order(r: &Relation) -> bool {
    r.intersection(&r.inverse()).is_empty() && r.includes(&r.compose(r))
}

pub fn is_linear(r: &Relation) -> Result<bool> {
    Ok(Order::new(r)?.is_linear())
}

pub fn is_complete(r: &Relation) -> bool {
    r.support().is_naturals()
}

pub fn has_infinite_chain(r: &Relation, direction: Direction) -> Result<ChainVerdict> {
    Ok(Order::new(r)?.infinite_chain(direction))
}

pub fn has_infinite_antichain(r: &Relation) -> Result<bool> {
    Ok(Order::new(r)?.has_infinite_antichain())
}

pub fn antichain_bound(r: &Relation) -> Result<u64> {
    Order::new(r)?.antichain_bound()
}

/// The least maximal (resp. minimal) element of the support, if any.
pub fn extremal_element(r: &Relation, side: Side) -> Result<Option<u64>> {
    Ok(Order::new(r)?.extremal(side))
}

impl Order {
    pub fn new(r: &Relation) -> Result<Self> {
        if !is_strict_order(r) {
            return Err(Error::NotAnOrder);
        }
        Ok(Order {
            relation: r.clone(),
            normal: r.normal_form(),
        })
    }

    pub fn relation(&self) -> &Relation {
        &self.relation
    }

    pub fn normal_form(&self) -> &NormalForm {
        &self.normal
    }

    pub fn is_linear(&self) -> bool {
        let supp = self.normal.support();
        let pairs = Relation::product_of_sets(supp, supp).difference(&Relation::identity());
        self.relation
            .union(&self.relation.inverse())
            .includes(&pairs)
    }

    pub fn is_complete(&self) -> bool {
        self.normal.support().is_naturals()
    }

    /// Direction of the residue class of the periodic index `i`: every
    /// class is an ascending chain, a descending chain or an antichain.
    pub(crate) fn class_direction(&self, i: u64) -> Option<Direction> {
        let p = self.normal.period();
        if self.normal.right(i as usize).contains(p) {
            Some(Direction::Asc)
        } else if self.normal.left(i as usize).contains(p) {
            Some(Direction::Desc)
        } else {
            None
        }
    }

    pub fn infinite_chain(&self, direction: Direction) -> ChainVerdict {
        let p = self.normal.period();
        let found = self
            .normal
            .periodic_indices()
            .find(|&i| self.class_direction(i) == Some(direction));
        ChainVerdict {
            exists: found.is_some(),
            witness: found.map(|i| (i, p)),
        }
    }

    pub fn has_infinite_antichain(&self) -> bool {
        self.normal
            .periodic_indices()
            .any(|i| self.normal.class_in_support(i) && self.class_direction(i).is_none())
    }

    /// `2n + 2` for the `n = t + p` diagonal states of the normal form.
    pub fn antichain_bound(&self) -> Result<u64> {
        if self.has_infinite_antichain() {
            return Err(Error::InfiniteAntichain);
        }
        Ok(2 * self.normal.n_diag() as u64 + 2)
    }

    pub fn extremal(&self, side: Side) -> Option<u64> {
        let below = match side {
            Side::Max => self.relation.domain(),
            Side::Min => self.relation.range(),
        };
        let candidates: UpSet = self.normal.support().difference(&below);
        candidates.min_element()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{even_odd, full_relation, three, w, w_star};
    use crate::syncauto::SyncAutomaton;

    fn rel(a: SyncAutomaton) -> Relation {
        Relation::new(&a).unwrap()
    }

    fn evens() -> Relation {
        Relation::natural_order_on(&UpSet::residue_class(2, 0), Direction::Asc)
    }

    #[test]
    fn strict_orders() {
        assert!(is_strict_order(&rel(w())));
        assert!(is_strict_order(&rel(w_star())));
        assert!(is_strict_order(&rel(three())));
        assert!(is_strict_order(&rel(even_odd())));
        assert!(is_strict_order(&Relation::empty()));
        assert!(!is_strict_order(&rel(full_relation())));
        assert!(!is_strict_order(&Relation::identity()));
        // not transitive
        let succ = Relation::from_structured(
            &crate::structured::StructuredBinary::new(
                0,
                vec![UpSet::empty()],
                vec![UpSet::singleton(1)],
                vec![false],
            )
            .unwrap(),
        );
        assert!(!is_strict_order(&succ));
    }

    #[test]
    fn linearity_and_completeness() {
        assert!(is_linear(&rel(w())).unwrap());
        assert!(!is_linear(&rel(even_odd())).unwrap());
        assert!(is_linear(&evens()).unwrap());
        assert!(is_linear(&rel(three())).unwrap());
        assert_eq!(is_linear(&rel(full_relation())), Err(Error::NotAnOrder));
        assert!(is_complete(&rel(w())));
        assert!(!is_complete(&evens()));
        assert!(!is_complete(&rel(three())));
    }

    #[test]
    fn chains() {
        let asc = |r: &Relation| has_infinite_chain(r, Direction::Asc).unwrap();
        let desc = |r: &Relation| has_infinite_chain(r, Direction::Desc).unwrap();
        assert!(asc(&rel(w())).exists);
        assert!(!desc(&rel(w())).exists);
        assert!(!asc(&rel(w_star())).exists);
        assert!(desc(&rel(w_star())).exists);
        assert!(!asc(&rel(even_odd())).exists);
        assert!(!desc(&rel(even_odd())).exists);
        for r in [rel(w()), evens(), rel(w_star())] {
            for dir in [Direction::Asc, Direction::Desc] {
                let v = has_infinite_chain(&r, dir).unwrap();
                let Some((k, d)) = v.witness else { continue };
                for j in 0..=10 {
                    let (a, b) = (k + j * d, k + (j + 1) * d);
                    let ok = match dir {
                        Direction::Asc => r.contains(a, b),
                        Direction::Desc => r.contains(b, a),
                    };
                    assert!(ok, "{dir:?} witness ({k},{d}) fails at j={j}");
                }
            }
        }
        assert_eq!(
            has_infinite_chain(&rel(full_relation()), Direction::Asc),
            Err(Error::NotAnOrder)
        );
    }

    #[test]
    fn antichains() {
        assert!(has_infinite_antichain(&rel(even_odd())).unwrap());
        assert!(!has_infinite_antichain(&rel(w())).unwrap());
        assert!(!has_infinite_antichain(&evens()).unwrap());
        assert_eq!(
            antichain_bound(&rel(even_odd())),
            Err(Error::InfiniteAntichain)
        );
        // W normalizes with (t, p) = (0, 2)
        assert_eq!(antichain_bound(&rel(w())).unwrap(), 6);
        assert!(!has_infinite_antichain(&Relation::empty()).unwrap());
    }

    #[test]
    fn extremal_elements() {
        assert_eq!(
            extremal_element(&rel(w_star()), Side::Max).unwrap(),
            Some(0)
        );
        assert_eq!(extremal_element(&rel(w_star()), Side::Min).unwrap(), None);
        assert_eq!(extremal_element(&rel(w()), Side::Max).unwrap(), None);
        assert_eq!(extremal_element(&rel(w()), Side::Min).unwrap(), Some(0));
        assert_eq!(extremal_element(&rel(three()), Side::Max).unwrap(), Some(0));
        assert_eq!(extremal_element(&rel(three()), Side::Min).unwrap(), Some(2));
        assert_eq!(
            extremal_element(&rel(even_odd()), Side::Max).unwrap(),
            Some(1)
        );
    }
}
