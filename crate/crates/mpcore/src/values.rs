//! Values a coalition can enforce in its sequentialised game.
//!
//! Against a fixed memoryless counter-strategy the coalition can reach any
//! strongly connected component and then realise any circulation inside it,
//! so it enforces exactly the downward closure of the component's cycle
//! averages. The enforceable set is the intersection of these unions over all
//! counter-strategies.
//!
//! Cycle averages in the sequentialised game equal averages over the
//! underlying state cycle because player-2 vertices copy the weight of their
//! state. Everything here therefore works on state graphs.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::budget::Budget;
use crate::error::{invalid, Error, Result};
use crate::game::{Coalition, Game};
use crate::geometry::{hrep_down_conv_capped, distribute, Polyhedron, PolyUnion};
use crate::graph::Digraph;
use crate::lp::{Lp, LpResult, Sense};
use crate::rational::{int, Rat, RatVec};
use crate::search::{scc_edges, CoalitionArena, Outcome, Search, SccEdges};

pub use crate::graph::{canonical_rotation, reachable_sccs, simple_cycles};

/// Mean of the vertex weights along a cycle.
pub fn cycle_average(cycle: &[usize], weights: &[Vec<i64>]) -> Result<RatVec> {
    let Some(&first) = cycle.first() else {
        return invalid("cycle average of an empty cycle");
    };
    let d = weights[first].len();
    let len = BigInt::from(cycle.len());
    Ok((0..d)
        .map(|i| {
            let sum: i64 = cycle.iter().map(|&v| weights[v][i]).sum();
            Rat::new(BigInt::from(sum), len.clone())
        })
        .collect())
}

/// Weight vectors of every state restricted to the coalition.
pub fn coalition_weights(g: &Game, c: &Coalition) -> Vec<Vec<i64>> {
    (0..g.num_states())
        .map(|s| c.members().iter().map(|&i| g.weight(i, s)).collect())
        .collect()
}

/// Circulation LP over `edges`: variables `z_e >= 0` (one per edge) followed
/// by free payoff variables `y_i = Σ w_i(src e) z_e`, with flow conservation
/// and `Σ z_e = 1`. Returns the LP and the index of `y_0`.
pub fn circulation_lp(edges: &[(usize, usize)], weights: &[Vec<i64>], dim: usize) -> (Lp, usize) {
    let m = edges.len();
    let mut lp = Lp::new(m + dim);
    for j in 0..m {
        lp.nonneg[j] = true;
    }
    let mut verts: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    verts.sort_unstable();
    verts.dedup();
    for &v in &verts {
        let terms: Vec<(usize, Rat)> = edges
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| (a == v) != (b == v))
            .map(|(j, &(a, _))| (j, if a == v { Rat::one() } else { -Rat::one() }))
            .collect();
        if !terms.is_empty() {
            lp.push_sparse(&terms, Sense::Eq, Rat::zero());
        }
    }
    let all: Vec<(usize, Rat)> = (0..m).map(|j| (j, Rat::one())).collect();
    lp.push_sparse(&all, Sense::Eq, Rat::one());
    for i in 0..dim {
        let mut terms: Vec<(usize, Rat)> = edges
            .iter()
            .enumerate()
            .filter(|(_, &(a, _))| weights[a][i] != 0)
            .map(|(j, &(a, _))| (j, int(weights[a][i])))
            .collect();
        terms.push((m + i, -Rat::one()));
        lp.push_sparse(&terms, Sense::Eq, Rat::zero());
    }
    (lp, m)
}

/// Is `x` below the payoff of some circulation on `edges`?
pub fn circulation_dominates(edges: &[(usize, usize)], weights: &[Vec<i64>], x: &[Rat]) -> bool {
    let (mut lp, y0) = circulation_lp(edges, weights, x.len());
    for (i, xi) in x.iter().enumerate() {
        lp.push_sparse(&[(y0 + i, Rat::one())], Sense::Ge, xi.clone());
    }
    lp.solve().is_feasible()
}

/// Largest `t` with `y >= x + t` for the payoff `y` of some circulation on
/// `edges`, and that payoff.
pub fn circulation_margin(
    edges: &[(usize, usize)],
    weights: &[Vec<i64>],
    x: &[Rat],
) -> Option<(Rat, RatVec)> {
    let d = x.len();
    if let [(u, v)] = edges {
        if u == v {
            let y: RatVec = weights[*u].iter().map(|&w| int(w)).collect();
            let t = y.iter().zip(x).map(|(a, b)| a - b).min()?;
            return Some((t, y));
        }
    }
    let (mut lp, y0) = circulation_lp(edges, weights, d);
    let t = lp.add_var(false);
    for (i, xi) in x.iter().enumerate() {
        lp.push_sparse(&[(y0 + i, Rat::one()), (t, -Rat::one())], Sense::Ge, xi.clone());
    }
    let mut obj = vec![Rat::zero(); lp.nvars];
    obj[t] = Rat::one();
    lp.maximize(obj);
    match lp.solve() {
        LpResult::Optimal { value, point } => Some((value, point[y0..y0 + d].to_vec())),
        _ => None,
    }
}

/// True when some 0/1 combination of the members' weights shifted by `x`
/// has no positive cycle in `edges`, which certifies that no circulation
/// beats `x` in every coordinate. Cheap stand-in for the margin LP.
pub fn margin_ruled_out(edges: &[(usize, usize)], weights: &[Vec<i64>], x: &[Rat]) -> bool {
    let d = x.len();
    if d == 0 || edges.is_empty() {
        return false;
    }
    let l = crate::rational::common_denominator(x);
    let xs: Vec<BigInt> = x.iter().map(|r| r.numer() * (&l / r.denom())).collect();
    let mut verts: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    verts.sort_unstable();
    verts.dedup();
    let local = |v: usize| verts.binary_search(&v).unwrap_or(0);
    let local_edges: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (local(u), local(v))).collect();
    let mut combos: Vec<Vec<usize>> = (0..d).map(|i| vec![i]).collect();
    for i in 0..d {
        for j in i + 1..d {
            combos.push(vec![i, j]);
        }
    }
    if d > 2 {
        combos.push((0..d).collect());
    }
    combos.iter().any(|members| {
        let w: Vec<BigInt> = verts
            .iter()
            .map(|&v| members.iter().map(|&i| BigInt::from(weights[v][i]) * &l - &xs[i]).sum())
            .collect();
        !has_positive_cycle(verts.len(), &local_edges, &w)
    })
}

/// Bellman-Ford on longest paths; edge `(u, v)` gains the weight of `u`.
fn has_positive_cycle(n: usize, edges: &[(usize, usize)], w: &[BigInt]) -> bool {
    let mut dist = vec![BigInt::zero(); n];
    for _ in 0..=n {
        let mut changed = false;
        for &(u, v) in edges {
            let cand = &dist[u] + &w[u];
            if cand > dist[v] {
                dist[v] = cand;
                changed = true;
            }
        }
        if !changed {
            return false;
        }
    }
    true
}

/// Averages of all simple cycles formed by `edges`.
pub fn cycle_points(edges: &[(usize, usize)], weights: &[Vec<i64>], cap: usize) -> Result<Vec<RatVec>> {
    let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    let g = Digraph::from_edges(n, edges.iter().copied());
    let mut verts: Vec<usize> = edges.iter().map(|&(u, _)| u).collect();
    verts.sort_unstable();
    verts.dedup();
    let cycles = simple_cycles(&g, &verts, cap)?;
    let mut pts: Vec<RatVec> = cycles
        .iter()
        .map(|c| cycle_average(c, weights))
        .collect::<Result<_>>()?;
    pts.sort();
    pts.dedup();
    Ok(pts)
}

/// Facets of `↓conv` of the cycle averages of `edges`.
pub fn component_hrep(edges: &[(usize, usize)], weights: &[Vec<i64>], budget: &Budget) -> Result<Polyhedron> {
    let pts = cycle_points(edges, weights, budget.max_cycles)?;
    hrep_down_conv_capped(&pts, budget.max_facet_dim)
}

/// `val(G^C, s)` as a union of polyhedra in dimension `|C|`.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueSet {
    pub coalition: Coalition,
    pub start: usize,
    pub union: PolyUnion,
}

impl ValueSet {
    pub fn contains(&self, x: &[Rat]) -> bool {
        self.union.contains(x)
    }
}

fn check_dim(c: &Coalition, x: &[Rat]) -> Result<()> {
    if x.len() != c.len() {
        return invalid(format!(
            "vector has {} entries but the coalition has {} members",
            x.len(),
            c.len()
        ));
    }
    Ok(())
}

fn check_state(g: &Game, s: usize) -> Result<()> {
    if s >= g.num_states() {
        return invalid("state index out of range");
    }
    Ok(())
}

/// Explicit value set: enumerates the counter-strategies over merged
/// player-2 vertices and distributes the intersection.
pub fn value_set(g: &Game, c: &Coalition, s: usize, budget: &Budget) -> Result<ValueSet> {
    check_state(g, s)?;
    let arena = CoalitionArena::new(g, c);
    let count = arena.strategy_count();
    if count > budget.max_p2_strategies {
        return Err(Error::Budget(format!(
            "{count} counter-strategies exceed the cap of {}",
            budget.max_p2_strategies
        )));
    }
    let weights = coalition_weights(g, c);
    let dim = c.len();
    let mut memo: BTreeMap<SccEdges, Polyhedron> = BTreeMap::new();
    let mut unions: Vec<PolyUnion> = Vec::new();
    let mut seen_graphs = alloc::collections::BTreeSet::new();
    for choice in arena.strategies() {
        let assign: Vec<Option<usize>> = choice.into_iter().map(Some).collect();
        let graph = arena.graph(&assign, true);
        let comps = reachable_sccs(&graph, s);
        let keys: Vec<SccEdges> = comps.iter().map(|k| scc_edges(&graph, k)).collect();
        if !seen_graphs.insert(keys.clone()) {
            continue;
        }
        let mut parts = Vec::new();
        for key in keys {
            if !memo.contains_key(&key) {
                let p = component_hrep(&key, &weights, budget)?;
                memo.insert(key.clone(), p);
            }
            parts.push(memo[&key].clone());
        }
        unions.push(PolyUnion { dim, parts });
    }
    let union = distribute(&unions, budget.max_parts)?;
    Ok(ValueSet {
        coalition: c.clone(),
        start: s,
        union,
    })
}

/// Is `x` enforceable by `c` from `s`?
pub fn can_enforce(g: &Game, c: &Coalition, s: usize, x: &[Rat], budget: &Budget) -> Result<bool> {
    check_state(g, s)?;
    check_dim(c, x)?;
    let arena = CoalitionArena::new(g, c);
    let weights = coalition_weights(g, c);
    let mut good = |key: &SccEdges| -> Result<Option<()>> {
        Ok(circulation_dominates(key, &weights, x).then_some(()))
    };
    let (out, _) = Search::new(&arena, s, budget.max_search_nodes, &mut good).run()?;
    Ok(matches!(out, Outcome::Player1(_)))
}

/// A strict improvement for a coalition: an enforceable `z > x_C`, plus the
/// components whose downward closures jointly certify it.
#[derive(Debug, Clone, PartialEq)]
pub struct Improvement {
    pub z: RatVec,
    /// Components reached at the leaves of the counter-strategy search. Every
    /// counter-strategy leaves one of them reachable, so the intersection of
    /// their downward closures is enforceable.
    pub components: Vec<SccEdges>,
}

/// An enforceable `z` with `z_i > x_i` for every member, if one exists.
pub fn strictly_improvable(
    g: &Game,
    c: &Coalition,
    s: usize,
    x: &[Rat],
    budget: &Budget,
) -> Result<Option<Improvement>> {
    check_state(g, s)?;
    check_dim(c, x)?;
    let arena = CoalitionArena::new(g, c);
    let weights = coalition_weights(g, c);
    improve_in(&arena, &weights, s, x, budget.max_search_nodes)
}

/// [`strictly_improvable`] on a prepared arena and coalition weights.
pub fn improve_in(
    arena: &CoalitionArena,
    weights: &[Vec<i64>],
    s: usize,
    x: &[Rat],
    max_nodes: usize,
) -> Result<Option<Improvement>> {
    let mut good = |key: &SccEdges| -> Result<Option<RatVec>> {
        if margin_ruled_out(key, weights, x) {
            return Ok(None);
        }
        let r = circulation_margin(key, weights, x);
        Ok(r
            .filter(|(t, _)| t.is_positive())
            .map(|(_, y)| y))
    };
    let (out, _) = Search::new(arena, s, max_nodes, &mut good).run()?;
    match out {
        Outcome::Player2(_) => Ok(None),
        Outcome::Player1(leaves) => {
            // Every leaf point is enforceable against the strategies below
            // that leaf, so their componentwise minimum is enforceable
            // against all of them and stays strictly above x.
            let mut z = leaves[0].1.clone();
            for (_, y) in &leaves[1..] {
                for (zi, yi) in z.iter_mut().zip(y) {
                    if yi < zi {
                        *zi = yi.clone();
                    }
                }
            }
            let mut components: Vec<SccEdges> = leaves.into_iter().map(|(k, _)| k).collect();
            components.sort();
            components.dedup();
            Ok(Some(Improvement { z, components }))
        }
    }
}

/// `∩ ↓conv(cycles(K))` over the certifying components, minimised.
pub fn improvement_polyhedron(
    weights: &[Vec<i64>],
    dim: usize,
    imp: &Improvement,
    budget: &Budget,
) -> Result<Polyhedron> {
    let mut acc = Polyhedron::universe(dim);
    for key in &imp.components {
        acc = acc.intersect(&component_hrep(key, weights, budget)?);
    }
    Ok(acc.minimized())
}
