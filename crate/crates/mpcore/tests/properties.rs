mod common;

use std::collections::BTreeSet;

use mpcore::game::{Game, GameSpec, StrategyMachine, StrategyProfile};
use mpcore::geometry::{down_conv_membership, hrep_down_conv};
use mpcore::lp::{Lp, LpResult, Sense};
use mpcore::oracle::{brute_enforce, BruteAnswer, BruteForceBudget};
use mpcore::payoff::compute_payoff;
use mpcore::rational::{frac, int, Rat, RatVec};
use mpcore::values::can_enforce;
use mpcore::{Budget, Coalition};
use proptest::prelude::*;

/// Maximum of `c · x` over the vertices of `{x >= 0, rows}` in the plane,
/// found by intersecting every pair of boundary lines.
fn vertex_max(rows: &[([i64; 2], i64)], c: [i64; 2]) -> Rat {
    let mut lines: Vec<([i64; 2], i64)> = rows.to_vec();
    lines.push(([-1, 0], 0));
    lines.push(([0, -1], 0));
    let feasible = |x: &[Rat; 2]| {
        lines
            .iter()
            .all(|(a, b)| int(a[0]) * &x[0] + int(a[1]) * &x[1] <= int(*b))
    };
    let mut best: Option<Rat> = None;
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let ([a, b], e) = lines[i];
            let ([p, q], f) = lines[j];
            let det = a * q - b * p;
            if det == 0 {
                continue;
            }
            let x = [frac(e * q - b * f, det), frac(a * f - e * p, det)];
            if feasible(&x) {
                let v = int(c[0]) * &x[0] + int(c[1]) * &x[1];
                if best.as_ref().is_none_or(|b| &v > b) {
                    best = Some(v);
                }
            }
        }
    }
    best.expect("the origin is a vertex")
}

fn random_game(players: usize, states: usize, weights: Vec<i64>, succ: Vec<usize>) -> Game {
    let names = |p: &str, n: usize| (0..n).map(|k| format!("{p}{k}")).collect::<Vec<_>>();
    let spec = GameSpec {
        players: (1..=players).map(|k| k.to_string()).collect(),
        actions: vec![vec!["a".into(), "b".into()]; players],
        states: names("s", states),
        init: 0,
        labels: vec![BTreeSet::new(); states],
        weights: (0..states)
            .map(|s| (0..players).map(|i| weights[s * players + i]).collect())
            .collect(),
    };
    Game::from_fn(spec, |s, p| {
        let k = p.iter().fold(0, |acc, &a| acc * 2 + a);
        succ[(s << players | k) % succ.len()] % states
    })
    .unwrap()
}

fn game_strategy() -> impl Strategy<Value = Game> {
    (2usize..=3, 1usize..=4).prop_flat_map(|(n, m)| {
        (
            prop::collection::vec(-2i64..=3, n * m),
            prop::collection::vec(0usize..m, m << n),
        )
            .prop_map(move |(w, t)| random_game(n, m, w, t))
    })
}

/// Mean payoff of the memoryless run, by walking until a state repeats.
fn simulate(g: &Game, choice: &[Vec<usize>]) -> RatVec {
    let mut seen = vec![usize::MAX; g.num_states()];
    let mut path = Vec::new();
    let mut s = g.init();
    while seen[s] == usize::MAX {
        seen[s] = path.len();
        path.push(s);
        let profile: Vec<usize> = choice.iter().map(|c| c[s]).collect();
        s = g.step(s, &profile);
    }
    let cycle = &path[seen[s]..];
    (0..g.num_players())
        .map(|i| {
            let sum: i64 = cycle.iter().map(|&v| g.weight(i, v)).sum();
            frac(sum, cycle.len() as i64)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lp_optimum_is_the_best_vertex(
        rows in prop::collection::vec(((-3i64..=3, -3i64..=3), 0i64..=6), 0..4),
        c in (-3i64..=3, -3i64..=3),
    ) {
        let mut rows: Vec<([i64; 2], i64)> = rows.into_iter().map(|((a, b), r)| ([a, b], r)).collect();
        rows.push(([1, 0], 5));
        rows.push(([0, 1], 5));
        let mut lp = Lp::new(2);
        lp.nonneg = vec![true, true];
        for (a, b) in &rows {
            lp.push(vec![int(a[0]), int(a[1])], Sense::Le, int(*b));
        }
        lp.maximize(vec![int(c.0), int(c.1)]);
        match lp.solve() {
            LpResult::Optimal { value, point } => {
                prop_assert!(lp.is_satisfied_by(&point));
                prop_assert_eq!(value, vertex_max(&rows, [c.0, c.1]));
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn down_closure_facets_agree_with_membership(
        dim in 1usize..=3,
        raw in prop::collection::vec(-3i64..=3, 3..=12),
        probe in prop::collection::vec(-8i64..=8, 3),
    ) {
        let points: Vec<RatVec> = raw.chunks_exact(dim).map(|c| c.iter().map(|&v| int(v)).collect()).collect();
        prop_assume!(!points.is_empty());
        let poly = hrep_down_conv(&points).unwrap();
        for p in &points {
            prop_assert!(poly.contains(p));
            let lower: RatVec = p.iter().map(|v| v - int(1)).collect();
            prop_assert!(poly.contains(&lower));
        }
        let x: RatVec = probe[..dim].iter().map(|&v| frac(v, 2)).collect();
        prop_assert_eq!(poly.contains(&x), down_conv_membership(&points, &x).unwrap());
    }

    #[test]
    fn memoryless_payoff_matches_simulation(g in game_strategy(), seed in prop::collection::vec(0usize..2, 12)) {
        let choice: Vec<Vec<usize>> = (0..g.num_players())
            .map(|i| (0..g.num_states()).map(|s| seed[(i * 4 + s) % seed.len()]).collect())
            .collect();
        let profile = StrategyProfile::memoryless(&g, &choice).unwrap();
        prop_assert_eq!(compute_payoff(&g, &profile).unwrap(), simulate(&g, &choice));
    }

    /// For one player the brute-force oracle is exact: a single cycle
    /// realises the best average.
    #[test]
    fn single_player_values_match_oracle(g in game_strategy(), player in 0usize..3, x in -5i64..=7) {
        let player = player % g.num_players();
        let c = Coalition::new(g.num_players(), &[player]).unwrap();
        let x = [frac(x, 2)];
        let got = can_enforce(&g, &c, g.init(), &x, &Budget::default()).unwrap();
        let want = brute_enforce(&g, &c, g.init(), &x, &BruteForceBudget::default()).unwrap();
        prop_assert_ne!(want, BruteAnswer::Inconclusive);
        prop_assert_eq!(got, want == BruteAnswer::Yes);
    }
}

#[test]
fn grand_coalition_enforces_every_profile_payoff() {
    let g = common::lanes();
    let all = Coalition::grand(2);
    for a in 0..2 {
        for b in 0..2 {
            let machines = vec![StrategyMachine::constant(3, a), StrategyMachine::constant(3, b)];
            let p = StrategyProfile::new(&g, machines).unwrap();
            let x = compute_payoff(&g, &p).unwrap();
            assert!(can_enforce(&g, &all, 0, &x, &Budget::default()).unwrap());
        }
    }
}
