#![allow(dead_code)]

use std::collections::BTreeSet;

use mpcore::game::{Game, GameSpec};

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn label_each(states: &[&str]) -> Vec<BTreeSet<String>> {
    states.iter().map(|s| [s.to_string()].into()).collect()
}

/// Two players steering towards `l` (pays player 1) or `r` (pays player 2).
pub fn lanes() -> Game {
    let states = ["m", "l", "r"];
    let spec = GameSpec {
        players: names(&["1", "2"]),
        actions: vec![names(&["L", "R"]), names(&["L", "R"])],
        states: names(&states),
        init: 0,
        labels: label_each(&states),
        weights: vec![vec![0, 0], vec![1, 0], vec![0, 1]],
    };
    Game::from_fn(spec, |s, p| match (s, p[0], p[1]) {
        (0, 0, 0) => 1,
        (0, 1, 1) => 2,
        (0, _, _) => 0,
        (1, _, 1) => 0,
        (1, _, _) => 1,
        (2, 0, _) => 0,
        (2, _, _) => 2,
        _ => unreachable!(),
    })
    .unwrap()
}

/// Three players choosing between three absorbing states from `s`.
pub fn three_sinks(s_weight: i64) -> Game {
    let states = ["s", "t", "m", "b"];
    let spec = GameSpec {
        players: names(&["1", "2", "3"]),
        actions: vec![names(&["H", "T"]); 3],
        states: names(&states),
        init: 0,
        labels: states.iter().map(|s| [format!("at_{s}")].into()).collect(),
        weights: vec![
            vec![s_weight; 3],
            vec![2, 1, 0],
            vec![0, 2, 1],
            vec![1, 0, 2],
        ],
    };
    Game::from_fn(spec, |s, p| {
        if s != 0 {
            return s;
        }
        match (p[0], p[1], p[2]) {
            (0, 0, _) => 1,
            (0, 1, 0) | (1, 1, 0) => 2,
            (1, 0, 1) | (1, 1, 1) => 3,
            _ => 0,
        }
    })
    .unwrap()
}

/// One player, one state with a self-loop.
pub fn single(weight: i64) -> Game {
    let spec = GameSpec {
        players: names(&["1"]),
        actions: vec![names(&["a"])],
        states: names(&["p"]),
        init: 0,
        labels: vec![["p".to_string()].into()],
        weights: vec![vec![weight]],
    };
    Game::from_fn(spec, |_, _| 0).unwrap()
}
