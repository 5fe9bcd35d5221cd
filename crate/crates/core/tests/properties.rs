use proptest::prelude::*;
use syncord::logic::{compile_formula, parse_formula, Formula, Operand};
use syncord::ordertype::{rewrite_at, PoorSum, Term};
use syncord::upset::SetOp;
use syncord::{SyncAutomaton, UpSet};

fn upset() -> impl Strategy<Value = UpSet> {
    (0u64..6, 1u64..6).prop_flat_map(|(t, p)| {
        (
            prop::collection::vec(any::<bool>(), t as usize),
            prop::collection::vec(any::<bool>(), p as usize),
        )
            .prop_map(move |(head, res)| {
                UpSet::from_fn(t, p, |x| {
                    if x < t {
                        head[x as usize]
                    } else {
                        res[(x % p) as usize]
                    }
                })
            })
    })
}

fn term() -> impl Strategy<Value = Term> {
    prop_oneof![
        Just(Term::Omega),
        Just(Term::OmegaStar),
        (1u64..10).prop_map(Term::Fin)
    ]
}

fn var() -> impl Strategy<Value = String> {
    prop_oneof![Just("x".to_string()), Just("y".to_string())]
}

fn formula() -> impl Strategy<Value = Formula> {
    let operand = prop_oneof![3 => var().prop_map(Operand::Var), 1 => Just(Operand::Zero)];
    let atom = prop_oneof![
        6 => (operand.clone(), operand, upset()).prop_map(|(a, b, s)| Formula::Diff(a, b, s)),
        1 => (var(), var()).prop_map(|(a, b)| Formula::Eq(a, b)),
        1 => Just(Formula::True),
        1 => Just(Formula::False),
    ];
    atom.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::or(a, b)),
        ]
    })
}

fn eval(f: &Formula, x: u64, y: u64) -> bool {
    let value = |o: &Operand| match o {
        Operand::Zero => 0,
        Operand::Var(v) if v == "x" => x,
        Operand::Var(_) => y,
    };
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Diff(a, b, s) => value(a) >= value(b) && s.contains(value(a) - value(b)),
        Formula::Eq(a, b) => value(&Operand::Var(a.clone())) == value(&Operand::Var(b.clone())),
        Formula::Not(g) => !eval(g, x, y),
        Formula::And(g, h) => eval(g, x, y) && eval(h, x, y),
        Formula::Or(g, h) => eval(g, x, y) || eval(h, x, y),
        Formula::Exists(..) | Formula::Forall(..) => unreachable!("quantifier-free"),
    }
}

/// Rewrites at randomly chosen positions until no rule applies.
fn reduce_randomly(terms: &[Term], picks: &[usize]) -> Vec<Term> {
    let mut t = terms.to_vec();
    let mut step = 0;
    loop {
        let spots: Vec<usize> = (0..t.len().saturating_sub(1))
            .filter(|&i| rewrite_at(t[i], t[i + 1]).is_some())
            .collect();
        if spots.is_empty() {
            return t;
        }
        let i = spots[picks.get(step).copied().unwrap_or(0) % spots.len()];
        let merged = rewrite_at(t[i], t[i + 1]).unwrap();
        t.splice(i..i + 2, [merged]);
        step += 1;
    }
}

proptest! {
    #[test]
    fn set_operations_are_pointwise(a in upset(), b in upset()) {
        for n in 0..80 {
            let (x, y) = (a.contains(n), b.contains(n));
            prop_assert_eq!(a.combine(&b, SetOp::Union).contains(n), x || y);
            prop_assert_eq!(a.combine(&b, SetOp::Intersection).contains(n), x && y);
            prop_assert_eq!(a.combine(&b, SetOp::Difference).contains(n), x && !y);
            prop_assert_eq!(a.complement().contains(n), !x);
        }
    }

    #[test]
    fn set_literals_round_trip(a in upset()) {
        prop_assert_eq!(a.to_string().parse::<UpSet>().unwrap(), a.clone());
        prop_assert_eq!(SyncAutomaton::from_upset(&a).to_upset().unwrap(), a);
    }

    #[test]
    fn reduction_is_confluent(terms in prop::collection::vec(term(), 0..9), picks in prop::collection::vec(any::<usize>(), 16)) {
        let sum = PoorSum::new(terms.clone());
        let reduced = sum.reduce();
        prop_assert!(reduced.is_reduced());
        prop_assert_eq!(reduced.reduce(), reduced.clone());
        prop_assert_eq!(PoorSum::new(reduce_randomly(&terms, &picks)), reduced.clone());
        prop_assert_eq!(reduced.to_string().parse::<PoorSum>().unwrap(), reduced);
    }

    #[test]
    fn compilation_matches_direct_evaluation(f in formula()) {
        let vars = vec!["x".to_string(), "y".to_string()];
        let (a, _) = compile_formula(&f, Some(&vars)).unwrap();
        for x in 0..20 {
            for y in 0..20 {
                prop_assert_eq!(a.accepts(&[x, y]), eval(&f, x, y), "{} at ({}, {})", f, x, y);
            }
        }
        prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }
}
