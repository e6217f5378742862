//! Search over player-2 choices in the sequentialised game.
//!
//! Player 1 wins when every memoryless player-2 strategy leaves a reachable
//! strongly connected component that is "good" for a caller-supplied,
//! monotone predicate (a component contained in a good one cannot be good
//! unless the larger one is). Player 2's choices are explored by branch and
//! prune over partial strategies: unassigned vertices keep all their edges,
//! so the partial graph over-approximates every completion and the graph of
//! assigned edges under-approximates it.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::game::{Coalition, Game};
use crate::graph::{reachable_sccs, Digraph};
use crate::sequentialise::minimal_choice_sets;

/// Edges of a strongly connected component of a state graph, sorted.
pub type SccEdges = Vec<(usize, usize)>;

/// The coalition's arena after merging equivalent player-2 vertices.
#[derive(Debug, Clone)]
pub struct CoalitionArena {
    pub coalition: Coalition,
    pub num_states: usize,
    /// Player-2 decision points: `(state, successor set)`.
    pub nodes: Vec<(usize, Vec<usize>)>,
}

impl CoalitionArena {
    pub fn new(g: &Game, c: &Coalition) -> Self {
        let nodes = minimal_choice_sets(g, c)
            .into_iter()
            .enumerate()
            .flat_map(|(s, sets)| sets.into_iter().map(move |set| (s, set)))
            .collect();
        CoalitionArena {
            coalition: c.clone(),
            num_states: g.num_states(),
            nodes,
        }
    }

    /// State graph under a partial player-2 assignment. With `forced_only`,
    /// unassigned vertices contribute no edges; otherwise all of them.
    pub fn graph(&self, assign: &[Option<usize>], forced_only: bool) -> Digraph {
        let mut edges = Vec::new();
        for (k, (s, set)) in self.nodes.iter().enumerate() {
            match assign[k] {
                Some(t) => edges.push((*s, t)),
                None if !forced_only => edges.extend(set.iter().map(|&t| (*s, t))),
                None => {}
            }
        }
        Digraph::from_edges(self.num_states, edges)
    }

    /// Number of memoryless player-2 strategies over the merged vertices.
    pub fn strategy_count(&self) -> usize {
        self.nodes
            .iter()
            .fold(1usize, |acc, (_, set)| acc.saturating_mul(set.len()))
    }

    /// Every full assignment, in mixed-radix order.
    pub fn strategies(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let mut pos = Some(vec![0usize; self.nodes.len()]);
        core::iter::from_fn(move || {
            let cur = pos.take()?;
            let out: Vec<usize> = cur
                .iter()
                .enumerate()
                .map(|(k, &j)| self.nodes[k].1[j])
                .collect();
            let mut next = cur;
            let mut k = next.len();
            while k > 0 {
                k -= 1;
                next[k] += 1;
                if next[k] < self.nodes[k].1.len() {
                    pos = Some(next);
                    break;
                }
                next[k] = 0;
            }
            Some(out)
        })
    }
}

/// Edges of `g` inside the vertex set `comp`.
pub fn scc_edges(g: &Digraph, comp: &[usize]) -> SccEdges {
    let mut out = Vec::new();
    for &u in comp {
        for &v in g.succ(u) {
            if comp.binary_search(&v).is_ok() {
                out.push((u, v));
            }
        }
    }
    out
}

/// Result of the search.
#[derive(Debug, Clone)]
pub enum Outcome<T> {
    /// Player 1 wins; one good component with its certificate per leaf of
    /// the search tree. Every player-2 strategy contains one of them.
    Player1(Vec<(SccEdges, T)>),
    /// Player 2 avoids every good component with this assignment.
    Player2(Vec<usize>),
}

pub struct Search<'a, T> {
    arena: &'a CoalitionArena,
    start: usize,
    good: &'a mut dyn FnMut(&SccEdges) -> Result<Option<T>>,
    memo: BTreeMap<SccEdges, Option<T>>,
    leaves: Vec<(SccEdges, T)>,
    nodes: usize,
    max_nodes: usize,
    /// Goodness queries that were not answered from the memo.
    pub evaluations: usize,
}

impl<'a, T: Clone> Search<'a, T> {
    pub fn new(
        arena: &'a CoalitionArena,
        start: usize,
        max_nodes: usize,
        good: &'a mut dyn FnMut(&SccEdges) -> Result<Option<T>>,
    ) -> Self {
        Search {
            arena,
            start,
            good,
            memo: BTreeMap::new(),
            leaves: Vec::new(),
            nodes: 0,
            max_nodes,
            evaluations: 0,
        }
    }

    fn is_good(&mut self, key: &SccEdges) -> Result<Option<T>> {
        if let Some(v) = self.memo.get(key) {
            return Ok(v.clone());
        }
        self.evaluations += 1;
        let v = (self.good)(key)?;
        self.memo.insert(key.clone(), v.clone());
        Ok(v)
    }

    pub fn run(mut self) -> Result<(Outcome<T>, usize)> {
        let mut assign = vec![None; self.arena.nodes.len()];
        let out = if self.rec(&mut assign)? {
            Outcome::Player1(core::mem::take(&mut self.leaves))
        } else {
            let full = assign
                .iter()
                .enumerate()
                .map(|(k, a)| a.unwrap_or(self.arena.nodes[k].1[0]))
                .collect();
            Outcome::Player2(full)
        };
        Ok((out, self.evaluations))
    }

    /// True when player 1 wins below this partial assignment. On a loss the
    /// assignment is left as player 2's witness.
    fn rec(&mut self, assign: &mut Vec<Option<usize>>) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::Budget(format!(
                "player-2 search exceeded {} nodes",
                self.max_nodes
            )));
        }
        let partial = self.arena.graph(assign, false);
        let mut good_comp: Option<Vec<usize>> = None;
        for comp in reachable_sccs(&partial, self.start) {
            let key = scc_edges(&partial, &comp);
            if self.is_good(&key)?.is_some() {
                good_comp = Some(comp);
                break;
            }
        }
        let Some(good_comp) = good_comp else {
            return Ok(false);
        };

        let forced = self.arena.graph(assign, true);
        for comp in reachable_sccs(&forced, self.start) {
            let key = scc_edges(&forced, &comp);
            if let Some(cert) = self.is_good(&key)? {
                self.leaves.push((key, cert));
                return Ok(true);
            }
        }

        let reach = partial.reachable(self.start);
        let in_good = |s: usize| good_comp.binary_search(&s).is_ok();
        let pick = (0..self.arena.nodes.len())
            .filter(|&k| assign[k].is_none() && reach[self.arena.nodes[k].0])
            .min_by_key(|&k| {
                let (s, set) = &self.arena.nodes[k];
                let inside = in_good(*s) && set.iter().any(|&t| in_good(t));
                (!inside, set.len(), k)
            })
            .expect("an unassigned reachable vertex exists when the partial and forced graphs differ");
        let mut order = self.arena.nodes[pick].1.clone();
        order.sort_by_key(|&t| in_good(t));
        for t in order {
            assign[pick] = Some(t);
            if !self.rec(assign)? {
                return Ok(false);
            }
        }
        assign[pick] = None;
        Ok(true)
    }
}
