use std::collections::BTreeSet;
use std::path::PathBuf;

use mpcore::game::{Game, GameSpec, StrategyProfile};
use mpcore::reductions::{Block, Dfa, Lit, Qbf2, Qbf3};
use mpgame::format::{parse_game, parse_profile, write_game, write_profile};
use mpgame::instances::{automata_to_json, parse_automata, parse_qbf2, parse_qbf3};
use proptest::prelude::*;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    std::fs::read_to_string(p).unwrap()
}

fn err(text: &str) -> String {
    parse_game(text).unwrap_err().to_string()
}

#[test]
fn example1_shape() {
    let g = parse_game(&fixture("example1.game")).unwrap();
    assert_eq!(g.num_states(), 3);
    assert_eq!(g.num_profiles(), 4);
    let m = g.state_index("m").unwrap();
    let l = g.state_index("l").unwrap();
    assert_eq!(g.step(m, &[0, 0]), l);
    assert_eq!(g.step(m, &[0, 1]), m);
}

#[test]
fn fixtures_round_trip() {
    for name in ["example1.game", "example2.game", "example2-modified.game", "prop1.game", "single.game"] {
        let g = parse_game(&fixture(name)).unwrap();
        let text = write_game(&g);
        assert_eq!(parse_game(&text).unwrap(), g, "{name}");
        assert_eq!(write_game(&parse_game(&text).unwrap()), text);
    }
    let g = parse_game(&fixture("example1.game")).unwrap();
    for name in ["alternating.profile", "bad-ne.profile"] {
        let p = parse_profile(&g, &fixture(name)).unwrap();
        assert_eq!(parse_profile(&g, &write_profile(&g, &p)).unwrap(), p);
    }
}

#[test]
fn minimal_game() {
    let g = parse_game(&fixture("single.game")).unwrap();
    assert_eq!(g.step(0, &[0]), 0);
}

#[test]
fn rejections() {
    let base: serde_json::Value = serde_json::from_str(&fixture("example1.game")).unwrap();

    let mut v = base.clone();
    v["transitions"]["l"].as_object_mut().unwrap().remove("R,L");
    assert!(err(&v.to_string()).contains("partial transition function"));

    let mut v = base.clone();
    v["transitions"]["l"]["R,X"] = "m".into();
    assert!(err(&v.to_string()).contains("unknown action"));

    let mut v = base.clone();
    v["transitions"]["l"]["R,L"] = "nowhere".into();
    assert!(err(&v.to_string()).contains("unknown state"));

    let mut v = base.clone();
    v["weights"]["l"]["1"] = serde_json::json!(0.5);
    assert!(err(&v.to_string()).contains("not an integer"));

    let mut v = base.clone();
    v["weights"]["l"]["3"] = serde_json::json!(1);
    assert!(err(&v.to_string()).contains("unknown player"));

    let mut v = base.clone();
    v["init"] = "x".into();
    assert!(err(&v.to_string()).contains("unknown state"));

    // Same profile spelled twice, once with a space.
    let text = fixture("example1.game").replacen("\"L,L\": \"l\"", "\"L,L\": \"l\", \"L, L\": \"l\"", 1);
    assert!(err(&text).contains("duplicate transition entry"));
    let text = fixture("example1.game").replacen("\"L,L\": \"l\"", "\"L,L\": \"l\", \"L,L\": \"m\"", 1);
    assert!(err(&text).contains("duplicate key"));

    assert!(err("{ \"players\": [").contains("syntax error"));

    let mut v = base.clone();
    v["propositions"] = serde_json::json!(["l"]);
    assert!(err(&v.to_string()).contains("not a declared proposition"));
}

#[test]
fn profile_rejections() {
    let g = parse_game(&fixture("example1.game")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&fixture("bad-ne.profile")).unwrap();
    v["machines"]["1"]["act"]["q"] = "X".into();
    assert!(parse_profile(&g, &v.to_string()).is_err());
    let mut v: serde_json::Value = serde_json::from_str(&fixture("bad-ne.profile")).unwrap();
    v["machines"].as_object_mut().unwrap().remove("2");
    assert!(parse_profile(&g, &v.to_string()).unwrap_err().to_string().contains("no machine"));
}

#[test]
fn formulas_round_trip() {
    let f = parse_qbf2(&fixture("phi.qbf")).unwrap();
    assert_eq!((f.p, f.q, f.clauses.len()), (2, 2, 3));
    assert_eq!(parse_qbf2(&f.to_string()).unwrap(), f);
    let f = parse_qbf3(&fixture("psi.qbf")).unwrap();
    assert_eq!((f.p, f.q, f.t), (2, 1, 1));
    assert_eq!(parse_qbf3(&f.to_string()).unwrap(), f);
    assert!(parse_qbf2("exists 1 forall 1 : (x1 & y1)").is_err());
    assert!(parse_qbf2("exists 1 forall 1 : (x1 & x2 & y1)").is_err());
    assert!(parse_qbf3("exists 1 forall 1 exists 1 : (x1 | !x1 | y1)").is_err());
}

#[test]
fn automata_round_trip() {
    let a = parse_automata(&fixture("unary.dfa")).unwrap();
    assert_eq!(a.len(), 2);
    let again = parse_automata(&automata_to_json(&a).to_string()).unwrap();
    assert_eq!(again, a);
}

fn arb_game() -> impl Strategy<Value = Game> {
    (1usize..=3, 1usize..=4)
        .prop_flat_map(|(np, ns)| {
            let sizes = proptest::collection::vec(1usize..=2, np);
            (Just(np), Just(ns), sizes)
        })
        .prop_flat_map(|(np, ns, sizes)| {
            let nprof: usize = sizes.iter().product();
            (
                Just(np),
                Just(ns),
                Just(sizes),
                proptest::collection::vec(proptest::collection::vec(-3i64..=3, np), ns),
                proptest::collection::vec(proptest::collection::vec(0..ns, nprof), ns),
                0..ns,
                proptest::collection::vec(proptest::bool::ANY, ns),
            )
        })
        .prop_map(|(np, ns, sizes, weights, trans, init, lab)| {
            let spec = GameSpec {
                players: (1..=np).map(|i| i.to_string()).collect(),
                actions: sizes.iter().map(|&k| (0..k).map(|a| format!("a{a}")).collect()).collect(),
                states: (0..ns).map(|s| format!("s{s}")).collect(),
                init,
                labels: lab
                    .iter()
                    .map(|&b| if b { BTreeSet::from(["p".to_string()]) } else { BTreeSet::new() })
                    .collect(),
                weights,
            };
            Game::new(spec, trans).unwrap()
        })
}

proptest! {
    #[test]
    fn games_round_trip(g in arb_game()) {
        prop_assert_eq!(parse_game(&write_game(&g)).unwrap(), g);
    }

    #[test]
    fn memoryless_profiles_round_trip(g in arb_game(), seed in 0usize..1000) {
        let choices: Vec<Vec<usize>> = (0..g.num_players())
            .map(|i| {
                let k = g.actions(i).len();
                (0..g.num_states()).map(|s| (seed + 7 * s + i) % k).collect()
            })
            .collect();
        let p = StrategyProfile::memoryless(&g, &choices).unwrap();
        prop_assert_eq!(parse_profile(&g, &write_profile(&g, &p)).unwrap(), p);
    }

    #[test]
    fn qbf_text_round_trip(p in 1usize..=2, q in 1usize..=2, t in 1usize..=2, picks in proptest::collection::vec((0usize..3, 1usize..=2, proptest::bool::ANY), 3..=9)) {
        let lits: Vec<Lit> = picks
            .iter()
            .map(|&(b, k, pos)| {
                let (block, max) = [(Block::X, p), (Block::Y, q), (Block::Z, t)][b];
                Lit::new(block, 1 + (k - 1) % max, pos)
            })
            .collect();
        let clauses: Vec<[Lit; 3]> = lits.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
        let f3 = Qbf3 { p, q, t, clauses: clauses.clone() };
        if f3.validate().is_ok() {
            prop_assert_eq!(parse_qbf3(&f3.to_string()).unwrap(), f3);
        }
        let two: Vec<[Lit; 3]> = clauses
            .iter()
            .map(|c| c.map(|l| if l.block == Block::Z { Lit::new(Block::Y, 1, l.positive) } else { l }))
            .collect();
        let f2 = Qbf2 { p, q, clauses: two };
        if f2.validate().is_ok() {
            prop_assert_eq!(parse_qbf2(&f2.to_string()).unwrap(), f2);
        }
    }
}

#[test]
fn dfa_json_is_total() {
    let d = Dfa {
        states: vec!["a".into()],
        alphabet: vec!["s0".into()],
        delta: vec![vec![0]],
        init: 0,
        accept: 0,
    };
    let mut v = automata_to_json(&[d]);
    v["automata"][0]["delta"]["a"].as_object_mut().unwrap().clear();
    assert!(parse_automata(&v.to_string()).is_err());
}
