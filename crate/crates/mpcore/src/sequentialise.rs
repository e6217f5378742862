//! Turn-based two-player sequentialisation `G^C` of a concurrent game.
//!
//! Player 1 is the coalition, player 2 the rest of the players. Vertices
//! `0..|St|` are the player-1 vertices (arena states); vertex `|St| + k` is
//! the `k`-th player-2 vertex `(s, ac_C)`.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::game::{Coalition, Game};
use crate::graph::Digraph;

/// The sequentialised game for one coalition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mmpg {
    /// Coalition members in player order; the weight dimensions.
    pub dims: Vec<usize>,
    pub num_states: usize,
    /// Player-2 vertices as `(state, coalition action indices)`.
    pub v2: Vec<(usize, Vec<usize>)>,
    /// Successors of each player-2 vertex, sorted, no duplicates.
    pub v2_succ: Vec<Vec<usize>>,
    /// Player-2 vertices of each state, as indices into `v2`.
    pub v1_succ: Vec<Vec<usize>>,
    /// Weight vector of every vertex, player-1 vertices first.
    pub weights: Vec<Vec<i64>>,
}

impl Mmpg {
    pub fn num_vertices(&self) -> usize {
        self.num_states + self.v2.len()
    }

    /// Vertex id of the `k`-th player-2 vertex.
    pub fn v2_vertex(&self, k: usize) -> usize {
        self.num_states + k
    }

    /// Number of memoryless player-2 strategies, saturating.
    pub fn p2_strategy_count(&self) -> usize {
        self.v2_succ
            .iter()
            .fold(1usize, |acc, s| acc.saturating_mul(s.len()))
    }

    /// The full game graph.
    pub fn graph(&self) -> Digraph {
        let mut edges = Vec::new();
        for (s, row) in self.v1_succ.iter().enumerate() {
            edges.extend(row.iter().map(|&k| (s, self.v2_vertex(k))));
        }
        for (k, row) in self.v2_succ.iter().enumerate() {
            edges.extend(row.iter().map(|&t| (self.v2_vertex(k), t)));
        }
        Digraph::from_edges(self.num_vertices(), edges)
    }
}

/// A memoryless player-2 strategy: `choice[k]` is the successor picked at
/// player-2 vertex `k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MemorylessP2 {
    pub choice: Vec<usize>,
}

/// Iterates over the profiles of `players` in lexicographic order, calling
/// `f` with the action index of every player (others left at zero).
pub(crate) fn for_each_partial_profile(
    g: &Game,
    players: &[usize],
    base: &[usize],
    mut f: impl FnMut(&[usize]),
) {
    let mut prof = base.to_vec();
    for &i in players {
        prof[i] = 0;
    }
    loop {
        f(&prof);
        let mut k = players.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            let i = players[k];
            prof[i] += 1;
            if prof[i] < g.actions(i).len() {
                break;
            }
            prof[i] = 0;
        }
    }
}

pub fn sequentialise(g: &Game, c: &Coalition) -> Result<Mmpg> {
    if c.is_empty() {
        return invalid("cannot sequentialise for the empty coalition");
    }
    if c.members().iter().any(|&i| i >= g.num_players()) {
        return invalid("coalition member out of range");
    }
    let n = g.num_states();
    let members = c.members().to_vec();
    let others = c.complement(g.num_players());
    let mut v2 = Vec::new();
    let mut v2_succ = Vec::new();
    let mut v1_succ = vec![Vec::new(); n];
    let zero = vec![0usize; g.num_players()];
    for s in 0..n {
        for_each_partial_profile(g, &members, &zero, |ac_c| {
            let mut succ = BTreeSet::new();
            for_each_partial_profile(g, &others, ac_c, |full| {
                succ.insert(g.step(s, full));
            });
            v1_succ[s].push(v2.len());
            v2.push((s, members.iter().map(|&i| ac_c[i]).collect()));
            v2_succ.push(succ.into_iter().collect());
        });
    }
    let project = |s: usize| -> Vec<i64> { members.iter().map(|&i| g.weight(i, s)).collect() };
    let mut weights: Vec<Vec<i64>> = (0..n).map(project).collect();
    weights.extend(v2.iter().map(|(s, _)| project(*s)));
    Ok(Mmpg {
        dims: members,
        num_states: n,
        v2,
        v2_succ,
        v1_succ,
        weights,
    })
}

/// `G^C[σ₂]`: every player-1 edge plus the chosen player-2 edges.
pub fn induced_subgame(m: &Mmpg, s2: &MemorylessP2) -> Result<Digraph> {
    if s2.choice.len() != m.v2.len() {
        return invalid("player-2 strategy must choose at every player-2 vertex");
    }
    let mut edges = Vec::new();
    for (s, row) in m.v1_succ.iter().enumerate() {
        edges.extend(row.iter().map(|&k| (s, m.v2_vertex(k))));
    }
    for (k, &t) in s2.choice.iter().enumerate() {
        if m.v2_succ[k].binary_search(&t).is_err() {
            return invalid("player-2 strategy picks a non-edge");
        }
        edges.push((m.v2_vertex(k), t));
    }
    Ok(Digraph::from_edges(m.num_vertices(), edges))
}

/// Every memoryless player-2 strategy exactly once, in mixed-radix order
/// with the last player-2 vertex varying fastest.
pub fn enumerate_p2(m: &Mmpg) -> P2Strategies<'_> {
    P2Strategies {
        m,
        next: Some(vec![0; m.v2.len()]),
    }
}

pub struct P2Strategies<'a> {
    m: &'a Mmpg,
    next: Option<Vec<usize>>,
}

impl Iterator for P2Strategies<'_> {
    type Item = MemorylessP2;

    fn next(&mut self) -> Option<MemorylessP2> {
        let pos = self.next.take()?;
        let choice = pos
            .iter()
            .enumerate()
            .map(|(k, &j)| self.m.v2_succ[k][j])
            .collect();
        let mut succ = pos;
        let mut k = succ.len();
        let mut done = true;
        while k > 0 {
            k -= 1;
            succ[k] += 1;
            if succ[k] < self.m.v2_succ[k].len() {
                done = false;
                break;
            }
            succ[k] = 0;
        }
        if !done {
            self.next = Some(succ);
        }
        Some(MemorylessP2 { choice })
    }
}

/// Player 2's relevant choices after dropping dominated player-2 vertices:
/// for each state, the inclusion-minimal distinct successor sets over all
/// coalition actions.
///
/// Player 2 never gains from an extra edge, and a vertex whose successors
/// include those of another vertex of the same state offers player 1 nothing
/// new, so the enforceable values are unchanged. Only players whose action
/// can change the successor are enumerated, which keeps this cheap for large
/// coalitions.
pub fn minimal_choice_sets(g: &Game, c: &Coalition) -> Vec<Vec<Vec<usize>>> {
    let zero = vec![0usize; g.num_players()];
    (0..g.num_states())
        .map(|s| {
            let rel = g.relevant_players(s);
            let mine: Vec<usize> = rel.iter().copied().filter(|&i| c.contains(i)).collect();
            let theirs: Vec<usize> = rel.iter().copied().filter(|&i| !c.contains(i)).collect();
            let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
            for_each_partial_profile(g, &mine, &zero, |ac_c| {
                let mut succ = BTreeSet::new();
                for_each_partial_profile(g, &theirs, ac_c, |full| {
                    succ.insert(g.step(s, full));
                });
                sets.insert(succ.into_iter().collect());
            });
            let all: Vec<Vec<usize>> = sets.into_iter().collect();
            all.iter()
                .filter(|a| {
                    !all.iter()
                        .any(|b| b != *a && b.iter().all(|t| a.binary_search(t).is_ok()))
                })
                .cloned()
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameSpec;
    use alloc::string::ToString;

    fn two_choice() -> Game {
        // One player-2 vertex with three successors.
        let spec = GameSpec {
            players: vec!["a".to_string(), "b".to_string()],
            actions: vec![vec!["x".to_string()], vec!["0".into(), "1".into(), "2".into()]],
            states: vec!["s".into(), "t".into(), "u".into()],
            init: 0,
            labels: vec![BTreeSet::new(); 3],
            weights: vec![vec![0, 0]; 3],
        };
        Game::from_fn(spec, |s, p| if s == 0 { p[1] } else { s }).unwrap()
    }

    #[test]
    fn out_degree_three_gives_three_strategies() {
        let g = two_choice();
        let c = Coalition::new(2, &[0]).unwrap();
        let m = sequentialise(&g, &c).unwrap();
        assert_eq!(m.v2.len(), 3);
        assert_eq!(enumerate_p2(&m).count(), 3);
        assert_eq!(m.p2_strategy_count(), 3);
        let grand = sequentialise(&g, &Coalition::grand(2)).unwrap();
        assert_eq!(enumerate_p2(&grand).count(), 1);
        assert_eq!(minimal_choice_sets(&g, &c)[0], vec![vec![0, 1, 2]]);
    }
}
