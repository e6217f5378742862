//! Decision procedures: domination, beneficial deviations, core membership,
//! core non-emptiness and the GR(1) core queries.
//!
//! A payoff `x` is dominated at `s` when some coalition can enforce a vector
//! strictly above `x` on all its members. The non-dominated points form an
//! upward closed union of polyhedra. Rather than building that union
//! explicitly, the searches here pick a candidate `x`, ask for a dominating
//! coalition, and on success branch over the facets of the coalition's
//! certificate: `x` escapes the certificate only by sitting on or above one
//! of its facets. Each branch adds a constraint the current candidate
//! violates, so a path never repeats a constraint and the search ends.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::budget::Budget;
use crate::error::{invalid, Error, Result};
use crate::game::{Coalition, Game, Lasso, StrategyProfile};
use crate::geometry::{distribute, inclusion_map, HalfSpace, Polyhedron, PolyUnion};
use crate::gr1::{negate_gr1, sat_states, BoolCombo, Gr1Spec};
use crate::graph::{reachable_sccs, Digraph};
use crate::lp::{solved_count, LpResult, Sense};
use crate::payoff::{compute_payoff, cycle_payoff};
use crate::rational::{Rat, RatVec};
use crate::search::{scc_edges, CoalitionArena, SccEdges};
use crate::values::{
    can_enforce, circulation_lp, coalition_weights, improve_in, improvement_polyhedron, value_set,
    Improvement,
};

/// Work counters. The LP count is process-wide, so it includes LPs solved by
/// concurrent callers.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stats {
    pub coalitions_checked: usize,
    pub lps_solved: usize,
}

/// A lasso built from a circulation, with the data needed to re-check it.
#[derive(Debug, Clone, PartialEq)]
pub struct PathWitness {
    /// States the run may use; the payoff is undominated at each of them.
    pub subset: Vec<usize>,
    /// The component of the subset's graph that carries the circulation.
    pub component: Vec<usize>,
    /// Positive edge weights summing to one.
    pub circulation: Vec<((usize, usize), Rat)>,
    pub payoff: RatVec,
    pub lasso: Lasso,
    /// True when the lasso cycle traverses the circulation exactly, so its
    /// mean payoff equals `payoff`. Disconnected supports are joined by
    /// connecting paths, which shifts the mean.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// `coalition` enforces `z`, strictly above the query on every member.
    Domination { coalition: Coalition, z: RatVec },
    /// An undominated, enforceable payoff.
    Payoff(RatVec),
    Path(Box<PathWitness>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub answer: bool,
    pub witness: Option<Witness>,
    pub stats: Stats,
}

/// What a circulation must do: put weight on a source in every `visit` set
/// and none on a source in `avoid`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Requirement {
    visit: Vec<Vec<bool>>,
    avoid: Vec<bool>,
}

fn state_mask(g: &Game, b: &BoolCombo) -> Result<Vec<bool>> {
    let set = sat_states(g, b)?;
    Ok((0..g.num_states()).map(|s| set.contains(&s)).collect())
}

struct Engine<'a> {
    g: &'a Game,
    budget: &'a Budget,
    full: Digraph,
    weights: Vec<Vec<i64>>,
    coalitions: Vec<Coalition>,
    arenas: BTreeMap<usize, (CoalitionArena, Vec<Vec<i64>>)>,
    /// Per start state: per reachable component, each player's best mean.
    best: BTreeMap<usize, Vec<RatVec>>,
    verdicts: BTreeMap<(usize, RatVec), Option<(usize, Improvement)>>,
    facets: BTreeMap<(usize, Vec<SccEdges>), Vec<HalfSpace>>,
    checked: usize,
    lp_start: usize,
}

impl<'a> Engine<'a> {
    fn new(g: &'a Game, budget: &'a Budget) -> Self {
        let full = Digraph::from_edges(
            g.num_states(),
            (0..g.num_states()).flat_map(|s| g.successors(s).into_iter().map(move |t| (s, t))),
        );
        Engine {
            g,
            budget,
            full,
            weights: (0..g.num_states()).map(|s| g.weights_of(s).to_vec()).collect(),
            coalitions: Coalition::all(g.num_players()),
            arenas: BTreeMap::new(),
            best: BTreeMap::new(),
            verdicts: BTreeMap::new(),
            facets: BTreeMap::new(),
            checked: 0,
            lp_start: solved_count(),
        }
    }

    fn stats(&self) -> Stats {
        Stats {
            coalitions_checked: self.checked,
            lps_solved: solved_count().saturating_sub(self.lp_start),
        }
    }

    fn best_means(&mut self, s: usize) -> &[RatVec] {
        if !self.best.contains_key(&s) {
            let n = self.g.num_players();
            let mut rows = Vec::new();
            for comp in reachable_sccs(&self.full, s) {
                let edges = scc_edges(&self.full, &comp);
                let row = (0..n)
                    .map(|i| {
                        let (mut lp, y0) = circulation_lp(&edges, &self.weights, n);
                        let mut obj = vec![Rat::zero(); lp.nvars];
                        obj[y0 + i] = Rat::one();
                        lp.maximize(obj);
                        match lp.solve() {
                            LpResult::Optimal { value, .. } => value,
                            _ => unreachable!("a circulation LP over a component is bounded and feasible"),
                        }
                    })
                    .collect();
                rows.push(row);
            }
            self.best.insert(s, rows);
        }
        &self.best[&s]
    }

    fn arena(&mut self, ci: usize) -> &(CoalitionArena, Vec<Vec<i64>>) {
        let g = self.g;
        let c = &self.coalitions[ci];
        self.arenas
            .entry(ci)
            .or_insert_with(|| (CoalitionArena::new(g, c), coalition_weights(g, c)))
    }

    /// First coalition (by size, then lexicographically) that strictly
    /// improves on `x` from `s`.
    fn dominated(&mut self, s: usize, x: &[Rat]) -> Result<Option<(usize, Improvement)>> {
        let key = (s, x.to_vec());
        if let Some(v) = self.verdicts.get(&key) {
            return Ok(v.clone());
        }
        // A member can only gain if some reachable component offers it more
        // than x_i, and all members must gain in the same component.
        let good: Vec<Vec<bool>> = self
            .best_means(s)
            .iter()
            .map(|row| row.iter().zip(x).map(|(m, xi)| xi < m).collect())
            .collect();
        let max_nodes = self.budget.max_search_nodes;
        let mut found = None;
        for ci in 0..self.coalitions.len() {
            let members = self.coalitions[ci].members().to_vec();
            if !good.iter().any(|row| members.iter().all(|&i| row[i])) {
                continue;
            }
            self.checked += 1;
            let xc: RatVec = members.iter().map(|&i| x[i].clone()).collect();
            let (arena, w) = self.arena(ci);
            if let Some(imp) = improve_in(arena, w, s, &xc, max_nodes)? {
                found = Some((ci, imp));
                break;
            }
        }
        self.verdicts.insert(key, found.clone());
        Ok(found)
    }

    /// Facets of the certificate of `imp`, lifted to all players.
    fn certificate_facets(&mut self, ci: usize, imp: &Improvement) -> Result<Vec<HalfSpace>> {
        let key = (ci, imp.components.clone());
        if let Some(f) = self.facets.get(&key) {
            return Ok(f.clone());
        }
        let n = self.g.num_players();
        let members = self.coalitions[ci].members().to_vec();
        let budget = self.budget;
        let (_, w) = self.arena(ci);
        let poly = improvement_polyhedron(w, members.len(), imp, budget)?;
        let lifted = inclusion_map(&poly, &members, n)?;
        let out: Vec<HalfSpace> = lifted.constraints.iter().map(HalfSpace::normalized).collect();
        self.facets.insert(key, out.clone());
        Ok(out)
    }

    /// A circulation on `edges` meeting `req` whose payoff satisfies every
    /// `normal · x >= bound` in `cons`. Returns the payoff and edge weights.
    fn candidate(
        &self,
        edges: &[(usize, usize)],
        req: &Requirement,
        cons: &[HalfSpace],
    ) -> Option<(RatVec, RatVec)> {
        let n = self.g.num_players();
        let m = edges.len();
        let (mut lp, y0) = circulation_lp(edges, &self.weights, n);
        for h in cons {
            let terms: Vec<(usize, Rat)> = h
                .normal
                .iter()
                .enumerate()
                .filter(|(_, a)| !a.is_zero())
                .map(|(i, a)| (y0 + i, a.clone()))
                .collect();
            lp.push_sparse(&terms, Sense::Ge, h.bound.clone());
        }
        if !req.visit.is_empty() {
            let t = lp.add_var(false);
            for set in &req.visit {
                let mut terms: Vec<(usize, Rat)> = (0..m)
                    .filter(|&j| set[edges[j].0])
                    .map(|j| (j, Rat::one()))
                    .collect();
                if terms.is_empty() {
                    return None;
                }
                terms.push((t, -Rat::one()));
                lp.push_sparse(&terms, Sense::Ge, Rat::zero());
            }
            let mut obj = vec![Rat::zero(); lp.nvars];
            obj[t] = Rat::one();
            lp.maximize(obj);
            let best = match lp.solve() {
                LpResult::Optimal { value, .. } if value.is_positive() => value,
                _ => return None,
            };
            lp.push_sparse(&[(t, Rat::one())], Sense::Ge, best / Rat::from_integer(2.into()));
        }
        let mut obj = vec![Rat::zero(); lp.nvars];
        for o in &mut obj[y0..y0 + n] {
            *o = Rat::one();
        }
        lp.maximize(obj);
        match lp.solve() {
            LpResult::Optimal { point, .. } => Some((point[y0..y0 + n].to_vec(), point[..m].to_vec())),
            _ => None,
        }
    }

    /// Lazy search for a circulation on `edges` meeting `req` whose payoff is
    /// undominated at every state of `states`.
    fn undominated_circulation(
        &mut self,
        states: &[usize],
        edges: &[(usize, usize)],
        req: &Requirement,
    ) -> Result<Option<(RatVec, RatVec)>> {
        let mut stack: Vec<Vec<HalfSpace>> = vec![Vec::new()];
        let mut nodes = 0usize;
        while let Some(cons) = stack.pop() {
            nodes += 1;
            if nodes > self.budget.max_search_nodes {
                return Err(Error::Budget(format!(
                    "non-domination search exceeded {} nodes",
                    self.budget.max_search_nodes
                )));
            }
            let Some((x, z)) = self.candidate(edges, req, &cons) else {
                continue;
            };
            let mut hit = None;
            for &s in states {
                if let Some(d) = self.dominated(s, &x)? {
                    hit = Some(d);
                    break;
                }
            }
            let Some((ci, imp)) = hit else {
                return Ok(Some((x, z)));
            };
            for h in self.certificate_facets(ci, &imp)?.into_iter().rev() {
                // Stay on or above the facet: normal · x >= bound. The
                // current x lies strictly below it.
                let mut next = cons.clone();
                next.push(h);
                stack.push(next);
            }
        }
        Ok(None)
    }
}

fn check_vector(g: &Game, x: &[Rat]) -> Result<()> {
    if x.len() != g.num_players() {
        return invalid(format!(
            "vector has {} entries but the game has {} players",
            x.len(),
            g.num_players()
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

/// Can some coalition strictly improve on `x` from `s`? Coalitions are tried
/// by size and then lexicographically; the first witness is returned.
pub fn dominated(g: &Game, s: usize, x: &[Rat], budget: &Budget) -> Result<Verdict> {
    check_state(g, s)?;
    check_vector(g, x)?;
    let mut e = Engine::new(g, budget);
    let hit = e.dominated(s, x)?;
    let witness = hit.map(|(ci, imp)| Witness::Domination {
        coalition: e.coalitions[ci].clone(),
        z: imp.z,
    });
    Ok(Verdict {
        answer: witness.is_some(),
        witness,
        stats: e.stats(),
    })
}

/// Does the profile admit a beneficial deviation?
pub fn exists_beneficial_deviation(g: &Game, p: &StrategyProfile, budget: &Budget) -> Result<Verdict> {
    let x = compute_payoff(g, p)?;
    dominated(g, g.init(), &x, budget)
}

/// Is the profile in the core? On a no, the witness is the deviation.
pub fn membership(g: &Game, p: &StrategyProfile, budget: &Budget) -> Result<Verdict> {
    let mut v = exists_beneficial_deviation(g, p, budget)?;
    v.answer = !v.answer;
    if v.answer {
        v.witness = Some(Witness::Payoff(compute_payoff(g, p)?));
    }
    Ok(v)
}

/// The payoffs no coalition can strictly improve on from `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct NotDominatedRegion {
    pub state: usize,
    pub region: PolyUnion,
}

impl NotDominatedRegion {
    pub fn contains(&self, x: &[Rat]) -> bool {
        self.region.contains(x)
    }
}

/// Explicit non-dominated region: for every coalition and every part of its
/// value set, the point must lie on or above one of the part's facets.
pub fn not_dominated_region(g: &Game, s: usize, budget: &Budget) -> Result<NotDominatedRegion> {
    check_state(g, s)?;
    let n = g.num_players();
    let mut unions = Vec::new();
    for c in Coalition::all(n) {
        let vs = value_set(g, &c, s, budget)?;
        for part in &vs.union.parts {
            let mut parts = Vec::new();
            for h in &part.minimized().constraints {
                let above = Polyhedron::new(c.len(), vec![h.complement()])?;
                parts.push(inclusion_map(&above, c.members(), n)?);
            }
            unions.push(PolyUnion { dim: n, parts });
        }
    }
    let region = distribute(&unions, budget.max_parts)?;
    Ok(NotDominatedRegion { state: s, region })
}

/// Is the core non-empty? On a yes, the witness is an undominated payoff the
/// grand coalition can enforce.
pub fn core_nonempty(g: &Game, budget: &Budget) -> Result<Verdict> {
    let mut e = Engine::new(g, budget);
    let init = g.init();
    let req = Requirement {
        visit: Vec::new(),
        avoid: vec![false; g.num_states()],
    };
    let comps = reachable_sccs(&e.full, init);
    for comp in comps {
        let edges = scc_edges(&e.full, &comp);
        if let Some((x, _)) = e.undominated_circulation(&[init], &edges, &req)? {
            return Ok(Verdict {
                answer: true,
                witness: Some(Witness::Payoff(x)),
                stats: e.stats(),
            });
        }
    }
    Ok(Verdict {
        answer: false,
        witness: None,
        stats: e.stats(),
    })
}

/// Subsets of states containing `init` whose every state is reachable from
/// `init` inside the subset; largest first, then by bitmask.
fn reachable_subsets(e: &Engine, budget: &Budget) -> Result<Vec<Vec<usize>>> {
    let n = e.g.num_states();
    if n > 24 {
        return Err(Error::Budget(format!("{n} states are too many for subset enumeration")));
    }
    let init = e.g.init();
    let mut masks: Vec<u32> = (0..1u32 << n).filter(|m| m & (1 << init) != 0).collect();
    masks.sort_by_key(|m| (core::cmp::Reverse(m.count_ones()), *m));
    let mut out = Vec::new();
    for m in masks {
        let inside = |v: usize| m & (1 << v) != 0;
        let sub = Digraph::from_edges(n, e.full.edges().filter(|&(u, v)| inside(u) && inside(v)));
        let reach = sub.reachable(init);
        if (0..n).all(|v| !inside(v) || reach[v]) {
            if out.len() >= budget.max_subsets {
                return Err(Error::Budget(format!(
                    "more than {} candidate state subsets",
                    budget.max_subsets
                )));
            }
            out.push((0..n).filter(|&v| inside(v)).collect());
        }
    }
    Ok(out)
}

fn path_search(e: &mut Engine, reqs: &[Requirement]) -> Result<Option<PathWitness>> {
    let g = e.g;
    let n = g.num_states();
    let init = g.init();
    for subset in reachable_subsets(e, e.budget)? {
        let inside: Vec<bool> = (0..n).map(|v| subset.binary_search(&v).is_ok()).collect();
        let sub = Digraph::from_edges(n, e.full.edges().filter(|&(u, v)| inside[u] && inside[v]));
        for comp in reachable_sccs(&sub, init) {
            let all_edges = scc_edges(&sub, &comp);
            for req in reqs {
                let edges: Vec<(usize, usize)> =
                    all_edges.iter().copied().filter(|&(u, _)| !req.avoid[u]).collect();
                if edges.is_empty() {
                    continue;
                }
                if let Some((x, z)) = e.undominated_circulation(&subset, &edges, req)? {
                    return build_path_witness(g, &sub, &subset, &comp, &edges, x, &z).map(Some);
                }
            }
        }
    }
    Ok(None)
}

/// Euler circuit of a connected balanced multigraph, as the vertex sequence
/// of the walk (closing edge implicit).
fn euler_circuit(start: usize, mult: &BTreeMap<(usize, usize), u64>) -> Vec<usize> {
    let mut out_edges: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (&(u, v), &k) in mult.iter().rev() {
        for _ in 0..k {
            out_edges.entry(u).or_default().push(v);
        }
    }
    let mut stack = vec![start];
    let mut circuit = Vec::new();
    while let Some(&u) = stack.last() {
        match out_edges.get_mut(&u).and_then(Vec::pop) {
            Some(v) => stack.push(v),
            None => circuit.push(stack.pop().unwrap()),
        }
    }
    circuit.reverse();
    circuit.pop();
    circuit
}

const MAX_WITNESS_CYCLE: u64 = 1_000_000;

fn build_path_witness(
    g: &Game,
    sub: &Digraph,
    subset: &[usize],
    comp: &[usize],
    edges: &[(usize, usize)],
    x: RatVec,
    z: &[Rat],
) -> Result<PathWitness> {
    let circulation: Vec<((usize, usize), Rat)> = edges
        .iter()
        .zip(z)
        .filter(|(_, w)| w.is_positive())
        .map(|(&e, w)| (e, w.clone()))
        .collect();
    let den = circulation
        .iter()
        .fold(BigInt::one(), |acc, (_, w)| acc.lcm(w.denom()));
    let mut counts: Vec<BigInt> = circulation
        .iter()
        .map(|(_, w)| (w * Rat::from_integer(den.clone())).to_integer())
        .collect();
    let gcd = counts.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    for c in &mut counts {
        *c = &*c / &gcd;
    }
    let total: BigInt = counts.iter().sum();
    if total > BigInt::from(MAX_WITNESS_CYCLE) {
        return Err(Error::Budget(format!(
            "witness cycle would have {total} steps"
        )));
    }
    let mult: BTreeMap<(usize, usize), u64> = circulation
        .iter()
        .zip(&counts)
        .map(|((e, _), c)| (*e, c.to_u64().unwrap()))
        .collect();

    // Weakly connected pieces of the support; each is strongly connected
    // because the flow is balanced.
    let mut verts: Vec<usize> = mult.keys().flat_map(|&(u, v)| [u, v]).collect();
    verts.sort_unstable();
    verts.dedup();
    let mut piece: BTreeMap<usize, usize> = BTreeMap::new();
    let mut pieces: Vec<Vec<usize>> = Vec::new();
    for &v in &verts {
        if piece.contains_key(&v) {
            continue;
        }
        let id = pieces.len();
        let mut members = vec![v];
        piece.insert(v, id);
        let mut k = 0;
        while k < members.len() {
            let u = members[k];
            k += 1;
            for (&(a, b), _) in mult.iter() {
                let other = if a == u { b } else if b == u { a } else { continue };
                if let alloc::collections::btree_map::Entry::Vacant(slot) = piece.entry(other) {
                    slot.insert(id);
                    members.push(other);
                }
            }
        }
        members.sort_unstable();
        pieces.push(members);
    }

    let in_comp = |v: usize| comp.binary_search(&v).is_ok();
    let mut cycle = Vec::new();
    for (id, members) in pieces.iter().enumerate() {
        let start = members[0];
        let local: BTreeMap<(usize, usize), u64> = mult
            .iter()
            .filter(|((u, _), _)| piece[u] == id)
            .map(|(e, k)| (*e, *k))
            .collect();
        cycle.extend(euler_circuit(start, &local));
        if pieces.len() > 1 {
            let next = pieces[(id + 1) % pieces.len()][0];
            let path = sub
                .shortest_path(start, in_comp, |v| v == next)
                .expect("the component is strongly connected");
            cycle.extend(&path[..path.len() - 1]);
        }
    }
    let exact = pieces.len() == 1;
    let inside = |v: usize| subset.binary_search(&v).is_ok();
    let head = cycle[0];
    let stem_path = sub
        .shortest_path(g.init(), inside, |v| v == head)
        .expect("the component is reachable inside the subset");
    let stem = stem_path[..stem_path.len() - 1].to_vec();
    let lasso = Lasso::new(g, stem, cycle)?;
    Ok(PathWitness {
        subset: subset.to_vec(),
        component: comp.to_vec(),
        circulation,
        payoff: x,
        lasso,
        exact,
    })
}

fn e_core_requirements(g: &Game, spec: &Gr1Spec) -> Result<Vec<Requirement>> {
    let none = vec![false; g.num_states()];
    let mut reqs = vec![Requirement {
        visit: spec
            .guarantees
            .iter()
            .map(|b| state_mask(g, b))
            .collect::<Result<_>>()?,
        avoid: none,
    }];
    for psi in &spec.premises {
        reqs.push(Requirement {
            visit: Vec::new(),
            avoid: state_mask(g, psi)?,
        });
    }
    Ok(reqs)
}

fn a_core_requirements(g: &Game, spec: &Gr1Spec) -> Result<Vec<Requirement>> {
    negate_gr1(spec)
        .iter()
        .map(|b| {
            Ok(Requirement {
                visit: b.visit.iter().map(|v| state_mask(g, v)).collect::<Result<_>>()?,
                avoid: state_mask(g, &b.avoid)?,
            })
        })
        .collect()
}

/// Is some core profile's run a model of `spec`? On a yes, the witness is a
/// lasso with an undominated payoff.
pub fn e_core_gr1(g: &Game, spec: &Gr1Spec, budget: &Budget) -> Result<Verdict> {
    spec.check_against(g)?;
    let reqs = e_core_requirements(g, spec)?;
    let mut e = Engine::new(g, budget);
    let found = path_search(&mut e, &reqs)?;
    Ok(Verdict {
        answer: found.is_some(),
        witness: found.map(|w| Witness::Path(Box::new(w))),
        stats: e.stats(),
    })
}

/// Is every core profile's run a model of `spec`? On a no, the witness is a
/// counterexample lasso.
pub fn a_core_gr1(g: &Game, spec: &Gr1Spec, budget: &Budget) -> Result<Verdict> {
    spec.check_against(g)?;
    let reqs = a_core_requirements(g, spec)?;
    let mut e = Engine::new(g, budget);
    let found = if reqs.is_empty() {
        None
    } else {
        path_search(&mut e, &reqs)?
    };
    Ok(Verdict {
        answer: found.is_none(),
        witness: found.map(|w| Witness::Path(Box::new(w))),
        stats: e.stats(),
    })
}

/// Re-checks a domination witness: `z` is strictly above `x` on the
/// coalition and enforceable from `s`.
pub fn verify_domination(
    g: &Game,
    s: usize,
    x: &[Rat],
    coalition: &Coalition,
    z: &[Rat],
    budget: &Budget,
) -> Result<bool> {
    check_vector(g, x)?;
    if z.len() != coalition.len() {
        return Ok(false);
    }
    let above = coalition.members().iter().zip(z).all(|(&i, zi)| zi > &x[i]);
    Ok(above && can_enforce(g, coalition, s, z, budget)?)
}

/// Re-checks a non-emptiness witness: undominated at the initial state and
/// enforceable by the grand coalition.
pub fn verify_core_payoff(g: &Game, x: &[Rat], budget: &Budget) -> Result<bool> {
    check_vector(g, x)?;
    let n = g.num_players();
    if dominated(g, g.init(), x, budget)?.answer {
        return Ok(false);
    }
    can_enforce(g, &Coalition::grand(n), g.init(), x, budget)
}

/// Algebraic check of a circulation witness, independent of how it was
/// found: the flow is a normalised circulation inside one component of the
/// subset's graph, its payoff is `payoff`, that payoff is undominated at
/// every state of the subset, and the lasso stays inside the subset.
pub fn verify_path_witness(g: &Game, w: &PathWitness, budget: &Budget) -> Result<bool> {
    let n = g.num_states();
    let inside = |v: usize| w.subset.binary_search(&v).is_ok();
    if !inside(g.init()) || w.circulation.is_empty() {
        return Ok(false);
    }
    let full_succ: Vec<_> = (0..n).map(|s| g.successors(s)).collect();
    let sub = Digraph::from_edges(
        n,
        (0..n).filter(|&u| inside(u)).flat_map(|u| {
            full_succ[u]
                .iter()
                .copied()
                .filter(|&v| inside(v))
                .map(move |v| (u, v))
                .collect::<Vec<_>>()
        }),
    );
    let comp_ok = reachable_sccs(&sub, g.init()).contains(&w.component);
    if !comp_ok {
        return Ok(false);
    }
    let in_comp = |v: usize| w.component.binary_search(&v).is_ok();
    let mut balance: BTreeMap<usize, Rat> = BTreeMap::new();
    let mut total = Rat::zero();
    let mut pay = vec![Rat::zero(); g.num_players()];
    for ((u, v), z) in &w.circulation {
        if !z.is_positive() || !sub.has_edge(*u, *v) || !in_comp(*u) || !in_comp(*v) {
            return Ok(false);
        }
        *balance.entry(*u).or_insert_with(Rat::zero) += z;
        *balance.entry(*v).or_insert_with(Rat::zero) -= z;
        total += z;
        for (i, p) in pay.iter_mut().enumerate() {
            *p += z * Rat::from_integer(g.weight(i, *u).into());
        }
    }
    if !total.is_one() || balance.values().any(|b| !b.is_zero()) || pay != w.payoff {
        return Ok(false);
    }
    let lasso = &w.lasso;
    if !lasso.is_consistent(g) || !lasso.stem.iter().chain(&lasso.cycle).all(|&v| inside(v)) {
        return Ok(false);
    }
    if w.exact && cycle_payoff(g, &lasso.cycle) != w.payoff {
        return Ok(false);
    }
    let mut e = Engine::new(g, budget);
    for &s in &w.subset {
        if e.dominated(s, &w.payoff)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// States carrying positive flow in a circulation witness.
pub fn support_states(w: &PathWitness) -> Vec<usize> {
    let mut out: Vec<usize> = w.circulation.iter().map(|((u, _), _)| *u).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Does the circulation support satisfy `spec` (visit every guarantee, or
/// avoid some premise)?
pub fn support_satisfies(g: &Game, spec: &Gr1Spec, w: &PathWitness) -> bool {
    let support = support_states(w);
    let visits = |b: &BoolCombo| support.iter().any(|&s| b.eval(g.labels(s)));
    !spec.premises.iter().all(visits) || spec.guarantees.iter().all(visits)
}
