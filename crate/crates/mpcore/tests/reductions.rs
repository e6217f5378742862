use mpcore::decisions::{core_nonempty, dominated, exists_beneficial_deviation, verify_core_payoff, Witness};
use mpcore::rational::ints;
use mpcore::reductions::*;
use mpcore::Budget;

fn l(b: Block, k: usize, pos: bool) -> Lit {
    Lit::new(b, k, pos)
}

fn phi() -> Qbf2 {
    use Block::*;
    Qbf2 {
        p: 2,
        q: 2,
        clauses: vec![
            [l(X, 1, true), l(X, 2, true), l(Y, 1, true)],
            [l(X, 1, true), l(X, 2, false), l(Y, 2, false)],
            [l(X, 1, true), l(X, 2, true), l(Y, 1, false)],
        ],
    }
}

fn psi() -> Qbf3 {
    use Block::*;
    Qbf3 {
        p: 2,
        q: 1,
        t: 1,
        clauses: vec![
            [l(X, 1, true), l(X, 2, true), l(Y, 1, true)],
            [l(X, 1, false), l(Y, 1, true), l(Z, 1, true)],
            [l(X, 2, false), l(Y, 1, false), l(Z, 1, false)],
        ],
    }
}

#[test]
fn illustrations() {
    let b = Budget::default();
    let f = phi();
    assert!(qbf2_eval(&f).unwrap());
    let (g, s, x) = gen_qsat2_dominated(&f).unwrap();
    assert!(dominated(&g, s, &x, &b).unwrap().answer);

    let f = psi();
    assert!(qbf3_eval(&f).unwrap());
    let g = gen_qsat3_nonemptiness(&f).unwrap();
    assert!(core_nonempty(&g, &b).unwrap().answer);
    assert!(!core_nonempty(&sink_gadget(), &b).unwrap().answer);
}

#[test]
fn complementary_literals_rejected() {
    use Block::*;
    let f = Qbf3 {
        p: 1,
        q: 2,
        t: 1,
        clauses: vec![[l(Y, 2, false), l(Y, 2, false), l(Y, 2, true)]],
    };
    assert!(gen_qsat3_nonemptiness(&f).is_err());
    let f = Qbf2 {
        p: 1,
        q: 1,
        clauses: vec![[l(X, 1, true), l(X, 1, false), l(Y, 1, true)]],
    };
    assert!(gen_qsat2_dominated(&f).is_err());
}

// x-literal states absorb the run with payoff 0, so A cannot falsify a clause
// through them and this false formula still yields a dominated instance.
#[test]
fn qsat2_false_but_dominated() {
    use Block::*;
    let f = Qbf2 {
        p: 2,
        q: 2,
        clauses: vec![
            [l(Y, 1, true), l(X, 1, false), l(X, 2, true)],
            [l(Y, 2, true), l(Y, 1, false), l(Y, 1, false)],
            [l(Y, 2, false), l(X, 1, false), l(X, 2, false)],
        ],
    };
    assert!(!qbf2_eval(&f).unwrap());
    let (g, s, x) = gen_qsat2_dominated(&f).unwrap();
    assert!(dominated(&g, s, &x, &Budget::default()).unwrap().answer);
}

// A gets 1 inside the sink gadget and 0 elsewhere, so a run through a
// y-literal into the gadget's U state cannot be improved on: E, A and P are
// at their maximum, and whoever could route the play into the gadget for Q
// and R can be kept out of it by A and E parking the run on a z-literal.
#[test]
fn qsat3_false_but_core_nonempty() {
    use Block::*;
    let f = Qbf3 {
        p: 1,
        q: 2,
        t: 1,
        clauses: vec![
            [l(Z, 1, false), l(Z, 1, false), l(Z, 1, false)],
            [l(Y, 2, true), l(Z, 1, true), l(Y, 2, true)],
        ],
    };
    assert!(!qbf3_eval(&f).unwrap());
    let g = gen_qsat3_nonemptiness(&f).unwrap();
    let b = Budget::default();
    let v = core_nonempty(&g, &b).unwrap();
    assert!(v.answer);
    let Some(Witness::Payoff(x)) = v.witness else { panic!("{v:?}") };
    assert_eq!(x, ints(&[1, 1, 1, 1, 0, 1, 2, 1, 0]));
    assert!(verify_core_payoff(&g, &x, &b).unwrap());
}

#[test]
fn unary_automata() {
    let count_to = |k: usize| Dfa {
        states: (0..=k).map(|i| format!("q{i}")).collect(),
        alphabet: vec!["s0".into()],
        delta: (0..=k).map(|i| vec![(i + 1).min(k)]).collect(),
        init: 0,
        accept: k,
    };
    let b = Budget::default();
    for k in [1, 2, 3] {
        let automata = vec![count_to(k), count_to(k + 1)];
        assert!(dfa_intersection_nonempty(&automata).unwrap());
        let (g, p) = gen_dfa_bendev(&automata).unwrap();
        assert!(!exists_beneficial_deviation(&g, &p, &b).unwrap().answer);
    }
    // Both automata accept only on an even or an odd count: no common word.
    let parity = |accept: usize| Dfa {
        states: vec!["e".into(), "o".into()],
        alphabet: vec!["s0".into()],
        delta: vec![vec![1], vec![0]],
        init: 0,
        accept,
    };
    let automata = vec![parity(0), parity(1)];
    assert!(!dfa_intersection_nonempty(&automata).unwrap());
    let (g, p) = gen_dfa_bendev(&automata).unwrap();
    assert!(exists_beneficial_deviation(&g, &p, &b).unwrap().answer);
}
