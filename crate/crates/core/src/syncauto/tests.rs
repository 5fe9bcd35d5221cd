use super::*;
use crate::fixtures::{three, w, w_star};
use crate::testing::{random_automaton, SplitMix};

fn pairs(n: u64) -> impl Iterator<Item = (u64, u64)> {
    (0..=n).flat_map(move |k| (0..=n).map(move |l| (k, l)))
}

#[test]
fn encode_examples() {
    let l = |m| Letter(m);
    assert_eq!(encode(&[3, 1]), vec![l(0b11), l(0b01), l(0b01)]);
    assert_eq!(encode(&[0, 0]), vec![]);
    assert_eq!(encode(&[2, 2]), vec![l(0b11), l(0b11)]);
    assert_eq!(encode(&[0, 2, 1]), vec![l(0b110), l(0b010)]);
}

#[test]
fn encode_is_monotone_and_sums_back() {
    for x in [[0u64, 0, 0], [5, 2, 7], [1, 1, 0], [4, 0, 4]] {
        let word = encode(&x);
        for pair in word.windows(2) {
            assert!(pair[1].is_subset_of(pair[0]));
        }
        let mut sum = [0u64; 3];
        for letter in &word {
            for (i, s) in sum.iter_mut().enumerate() {
                *s += u64::from(letter.has(i));
            }
        }
        assert_eq!(sum, x);
    }
}

#[test]
fn figure_one_membership() {
    assert!(w_star().accepts(&[3, 1]));
    assert!(!w_star().accepts(&[1, 3]));
    assert!(!w_star().accepts(&[2, 2]));
    assert!(w().accepts(&[0, 1]));
}

#[test]
fn figure_two_relation() {
    let got: Vec<(u64, u64)> = pairs(10)
        .filter(|&(k, l)| three().accepts(&[k, l]))
        .collect();
    assert_eq!(got, vec![(1, 0), (2, 0), (2, 1)]);
}

#[test]
fn products() {
    let both = w().intersection(&w_star()).unwrap();
    assert!(both.is_empty());
    let either = w().union(&w_star()).unwrap();
    for (k, l) in pairs(30) {
        assert_eq!(either.accepts(&[k, l]), k != l);
    }
    assert!(w().union(&w()).unwrap().equivalent(&w()).unwrap());
    assert!(decide(&either, Some(&w()), Query::Includes).unwrap());
    assert!(!decide(&w(), Some(&either), Query::Includes).unwrap());
    assert!(decide(&both, None, Query::IsEmpty).unwrap());
    assert!(decide(&w(), Some(&w()), Query::Equivalent).unwrap());
}

#[test]
fn arity_mismatch_is_an_error() {
    let unary = SyncAutomaton::full(1);
    assert!(matches!(
        w().union(&unary),
        Err(Error::ArityMismatch { .. })
    ));
}

#[test]
fn complement_examples() {
    let c = w().complement();
    assert!(c.accepts(&[2, 2]));
    assert!(!c.accepts(&[1, 2]));
    assert!(c.accepts(&[2, 1]));
    assert!(c.accepts(&[0, 0]));
    assert_eq!(c.complement(), w().canonical());
    assert!(c.is_support_monotone());
}

#[test]
fn projections() {
    let first = w().project(1).unwrap();
    let second = w().project(2).unwrap();
    for n in 0..=30 {
        assert_eq!(first.accepts(&[n]), (0..n).any(|k| k < n));
        assert!(second.accepts(&[n]));
    }
    assert_eq!(first.to_upset().unwrap(), UpSet::positive());
    assert_eq!(second.to_upset().unwrap(), UpSet::naturals());
    assert!(SyncAutomaton::empty(2).project(1).unwrap().is_empty());
    assert!(SyncAutomaton::full(1).project(1).is_err());
}

#[test]
fn cylinders() {
    let c = w().cylindrify(3).unwrap();
    assert!(c.accepts(&[1, 2, 7]));
    assert!(c.accepts(&[1, 2, 0]));
    assert!(!c.accepts(&[2, 1, 0]));
    let c1 = w().cylindrify(1).unwrap();
    assert!(c1.accepts(&[9, 1, 2]));
    assert!(!c1.accepts(&[0, 2, 1]));
    for i in 1..=3 {
        let back = w().cylindrify(i).unwrap().project(i).unwrap();
        assert_eq!(back, w().canonical(), "position {i}");
    }
}

#[test]
fn permutation_swaps_coordinates() {
    assert_eq!(w().permute(&[1, 0]).unwrap(), w_star().canonical());
}

#[test]
fn scaling() {
    let s = w().scale(2, 0).unwrap();
    assert!(s.accepts(&[0, 2]));
    assert!(!s.accepts(&[1, 3]));
    assert!(!s.accepts(&[0, 1]));
    let s1 = w().scale(3, 1).unwrap();
    for (k, l) in pairs(40) {
        let expect = k % 3 == 1 && l % 3 == 1 && k < l;
        assert_eq!(s1.accepts(&[k, l]), expect, "({k},{l})");
    }
    assert_eq!(three().scale(1, 0).unwrap(), three().canonical());
    assert!(w().scale(2, 2).is_err());
    assert!(w().scale(0, 0).is_err());
}

#[test]
fn unary_round_trip() {
    for set in [
        UpSet::empty(),
        UpSet::naturals(),
        UpSet::positive(),
        UpSet::new(3, 2, [1], [0]).unwrap(),
        UpSet::new(5, 6, [0, 4], [1, 5]).unwrap(),
        UpSet::finite([0, 3, 9]),
    ] {
        let a = SyncAutomaton::from_upset(&set);
        for n in 0..50 {
            assert_eq!(a.accepts(&[n]), set.contains(n));
        }
        assert_eq!(a.to_upset().unwrap(), set);
    }
}

#[test]
fn loader_rejects_monotonicity_violation() {
    let bad = SyncAutomaton::new(2, 2, 0, &[1], &[(0, Letter(0b01), 1), (1, Letter(0b11), 1)]);
    assert!(matches!(bad, Err(Error::InvalidAutomaton(_))));
}

#[test]
fn json_round_trip_and_rejections() {
    let text = w_star().to_json_string();
    assert_eq!(
        text,
        r#"{"arity":2,"states":2,"initial":0,"finals":[1],"transitions":[{"from":0,"letter":[1,0],"to":1},{"from":0,"letter":[1,1],"to":0},{"from":1,"letter":[1,0],"to":1}]}"#
    );
    assert_eq!(SyncAutomaton::from_json_str(&text).unwrap(), w_star());
    let nondet = r#"{"arity":1,"states":2,"initial":0,"finals":[1],"transitions":[{"from":0,"letter":[1],"to":1},{"from":0,"letter":[1],"to":0}]}"#;
    assert!(SyncAutomaton::from_json_str(nondet).is_err());
    let zero = r#"{"arity":1,"states":1,"initial":0,"finals":[],"transitions":[{"from":0,"letter":[0],"to":0}]}"#;
    assert!(SyncAutomaton::from_json_str(zero).is_err());
}

#[test]
fn dot_has_one_node_per_state() {
    let dot = three().to_dot();
    assert_eq!(
        dot.matches("shape=circle").count() + dot.matches("shape=doublecircle").count(),
        4
    );
    assert!(dot.contains("label=\"(1,1)\""));
}

#[test]
fn random_operations_match_pointwise_semantics() {
    let mut rng = SplitMix(7);
    let mut next = || rng.next_u64();
    for _ in 0..40 {
        let a = random_automaton(&mut next, 2, 5);
        let b = random_automaton(&mut next, 2, 4);
        let u = a.union(&b).unwrap();
        let i = a.intersection(&b).unwrap();
        let d = a.difference(&b).unwrap();
        let c = a.complement();
        let ca = a.canonical();
        for out in [&u, &i, &d, &c, &ca] {
            assert!(out.is_support_monotone());
        }
        for (k, l) in pairs(20) {
            let (x, y) = (a.accepts(&[k, l]), b.accepts(&[k, l]));
            assert_eq!(u.accepts(&[k, l]), x || y);
            assert_eq!(i.accepts(&[k, l]), x && y);
            assert_eq!(d.accepts(&[k, l]), x && !y);
            assert_eq!(c.accepts(&[k, l]), !x);
            assert_eq!(ca.accepts(&[k, l]), x);
        }
        let p = a.project(2).unwrap();
        for k in 0..=20 {
            let expect = (0..=60).any(|l| a.accepts(&[k, l]));
            assert_eq!(p.accepts(&[k]), expect, "k = {k}");
        }
        // structural equivalence agrees with the emptiness route
        let by_product =
            a.difference(&b).unwrap().is_empty() && b.difference(&a).unwrap().is_empty();
        assert_eq!(a.equivalent(&b).unwrap(), by_product);
        assert_eq!(c.complement(), ca);
    }
}

#[test]
fn ternary_random_projection() {
    let mut rng = SplitMix(99);
    let mut next = || rng.next_u64();
    for _ in 0..10 {
        let a = random_automaton(&mut next, 3, 5);
        for coord in 1..=3 {
            let p = a.project(coord).unwrap();
            for y0 in 0..=8 {
                for y1 in 0..=8 {
                    let expect = (0..=30).any(|v| {
                        let mut x = vec![y0, y1];
                        x.insert(coord - 1, v);
                        a.accepts(&x)
                    });
                    assert_eq!(p.accepts(&[y0, y1]), expect);
                }
            }
        }
    }
}
