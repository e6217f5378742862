//! Hard instances built from quantified Boolean formulas and finite
//! automata, with brute-force evaluators for ground truth.
//!
//! In the generated arenas every non-terminal state has one controlling
//! player whose action index selects the successor. Surplus action indices
//! wrap around (`action mod out-degree`), so completing the transition
//! function never adds an edge.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{invalid, Error, Result};
use crate::game::{Game, GameSpec, StrategyMachine, StrategyProfile};
use crate::rational::{int, RatVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Block {
    X,
    Y,
    Z,
}

/// A literal over variable `index` (1-based) of a quantifier block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    pub block: Block,
    pub index: usize,
    pub positive: bool,
}

impl Lit {
    pub fn new(block: Block, index: usize, positive: bool) -> Self {
        Lit {
            block,
            index,
            positive,
        }
    }

    fn clashes(&self, other: &Lit) -> bool {
        self.block == other.block && self.index == other.index && self.positive != other.positive
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = match self.block {
            Block::X => 'x',
            Block::Y => 'y',
            Block::Z => 'z',
        };
        if !self.positive {
            f.write_str("!")?;
        }
        write!(f, "{b}{}", self.index)
    }
}

pub type Clause = [Lit; 3];

/// `∃x_1..x_p ∀y_1..y_q  C_1 ∨ … ∨ C_r`, each clause a conjunction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Qbf2 {
    pub p: usize,
    pub q: usize,
    pub clauses: Vec<Clause>,
}

/// `∃x_1..x_p ∀y_1..y_q ∃z_1..z_t  C_1 ∧ … ∧ C_r`, each clause a disjunction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Qbf3 {
    pub p: usize,
    pub q: usize,
    pub t: usize,
    pub clauses: Vec<Clause>,
}

fn check_clauses(clauses: &[Clause], sizes: [usize; 3]) -> Result<()> {
    if clauses.is_empty() {
        return invalid("a formula needs at least one clause");
    }
    for c in clauses {
        for l in c {
            let max = match l.block {
                Block::X => sizes[0],
                Block::Y => sizes[1],
                Block::Z => sizes[2],
            };
            if l.index == 0 || l.index > max {
                return invalid(format!("literal {l} refers to an undeclared variable"));
            }
        }
        if c.iter().any(|a| c.iter().any(|b| a.clashes(b))) {
            return invalid(format!(
                "clause ({}, {}, {}) contains complementary literals",
                c[0], c[1], c[2]
            ));
        }
    }
    Ok(())
}

impl Qbf2 {
    pub fn validate(&self) -> Result<()> {
        check_clauses(&self.clauses, [self.p, self.q, 0])
    }
}

impl Qbf3 {
    pub fn validate(&self) -> Result<()> {
        check_clauses(&self.clauses, [self.p, self.q, self.t])
    }
}

fn clause_fmt(f: &mut fmt::Formatter<'_>, c: &Clause, op: &str) -> fmt::Result {
    write!(f, "({} {op} {} {op} {})", c[0], c[1], c[2])
}

impl fmt::Display for Qbf2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exists {} forall {} :", self.p, self.q)?;
        for (k, c) in self.clauses.iter().enumerate() {
            f.write_str(if k == 0 { " " } else { " | " })?;
            clause_fmt(f, c, "&")?;
        }
        Ok(())
    }
}

impl fmt::Display for Qbf3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exists {} forall {} exists {} :", self.p, self.q, self.t)?;
        for (k, c) in self.clauses.iter().enumerate() {
            f.write_str(if k == 0 { " " } else { " & " })?;
            clause_fmt(f, c, "|")?;
        }
        Ok(())
    }
}

/// Largest number of variables the evaluators accept.
pub const MAX_QBF_VARS: usize = 16;

fn lit_value(l: &Lit, x: u32, y: u32, z: u32) -> bool {
    let bits = match l.block {
        Block::X => x,
        Block::Y => y,
        Block::Z => z,
    };
    ((bits >> (l.index - 1)) & 1 == 1) == l.positive
}

pub fn qbf2_eval(f: &Qbf2) -> Result<bool> {
    f.validate()?;
    if f.p + f.q > MAX_QBF_VARS {
        return Err(Error::Budget(format!("more than {MAX_QBF_VARS} variables")));
    }
    Ok((0..1u32 << f.p).any(|x| {
        (0..1u32 << f.q).all(|y| {
            f.clauses
                .iter()
                .any(|c| c.iter().all(|l| lit_value(l, x, y, 0)))
        })
    }))
}

pub fn qbf3_eval(f: &Qbf3) -> Result<bool> {
    f.validate()?;
    if f.p + f.q + f.t > MAX_QBF_VARS {
        return Err(Error::Budget(format!("more than {MAX_QBF_VARS} variables")));
    }
    Ok((0..1u32 << f.p).any(|x| {
        (0..1u32 << f.q).all(|y| {
            (0..1u32 << f.t).any(|z| {
                f.clauses
                    .iter()
                    .all(|c| c.iter().any(|l| lit_value(l, x, y, z)))
            })
        })
    }))
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("{prefix}{k}")).collect()
}

/// Builds a game where `ctrl[s]` picks among `succ[s]`, extra players being
/// `extra(s, profile)` aware (used for vetoes and the gadget).
struct Arena {
    states: Vec<String>,
    succ: Vec<Vec<usize>>,
    ctrl: Vec<usize>,
    weights: Vec<Vec<i64>>,
}

impl Arena {
    fn degrees(&self, players: usize) -> Vec<usize> {
        let mut deg = vec![1usize; players];
        for (s, row) in self.succ.iter().enumerate() {
            deg[self.ctrl[s]] = deg[self.ctrl[s]].max(row.len());
        }
        deg
    }
}

fn action_names(k: usize) -> Vec<String> {
    (0..k).map(|a| format!("a{a}")).collect()
}

fn own_labels(states: &[String]) -> Vec<BTreeSet<String>> {
    states.iter().map(|s| [s.clone()].into()).collect()
}

/// The instance `(game, s_init, (-1, …, -1, 0))` of the domination problem
/// for a QBF with two quantifier blocks in disjunctive normal form. Players
/// are `1..2q`, `E`, `A`; the query asks whether everyone but `A` can stay
/// strictly above `-1`.
pub fn gen_qsat2_dominated(f: &Qbf2) -> Result<(Game, usize, RatVec)> {
    f.validate()?;
    if f.clauses.iter().flatten().any(|l| l.block == Block::Z) {
        return invalid("a two-block formula has no z variables");
    }
    let q = f.q;
    let r = f.clauses.len();
    let n = 2 * q + 2;
    let (e, a) = (2 * q, 2 * q + 1);
    let clause_state = |i: usize| 1 + i;
    let lit_state = |i: usize, j: usize| 1 + r + 3 * i + j;
    let sink = 1 + 4 * r;
    let mut states = vec!["s_init".to_string()];
    states.extend(names("C", r));
    for (i, c) in f.clauses.iter().enumerate() {
        for (j, l) in c.iter().enumerate() {
            states.push(format!("l{}_{}:{l}", i + 1, j + 1));
        }
    }
    states.push("sink".to_string());
    let ns = states.len();
    let mut succ = vec![Vec::new(); ns];
    let mut ctrl = vec![e; ns];
    let mut weights = vec![vec![0i64; n]; ns];
    succ[0] = (0..r).map(clause_state).collect();
    for (i, c) in f.clauses.iter().enumerate() {
        succ[clause_state(i)] = (0..3).map(|j| lit_state(i, j)).collect();
        ctrl[clause_state(i)] = a;
        for (j, l) in c.iter().enumerate() {
            let s = lit_state(i, j);
            succ[s].push(s);
            if l.block == Block::X {
                continue;
            }
            // y_k belongs to player 2k, !y_k to player 2k-1 (1-based).
            let k = l.index;
            ctrl[s] = if l.positive { 2 * k - 1 } else { 2 * k - 2 };
            for (h, other) in f.clauses.iter().enumerate() {
                let mentions = other
                    .iter()
                    .any(|m| m.block == Block::Y && m.index == k);
                let clashing = c.iter().any(|u| {
                    u.block == Block::X && other.iter().any(|v| u.clashes(v))
                });
                if h != i && mentions && !clashing {
                    succ[s].push(clause_state(h));
                }
            }
            succ[s].push(sink);
            let sign = if l.positive { 1 } else { -1 };
            weights[s][2 * k - 2] = sign * 2 * q as i64;
            weights[s][2 * k - 1] = -sign * 2 * q as i64;
        }
    }
    succ[sink] = vec![sink];
    weights[sink] = vec![-1; n];
    weights[sink][a] = 0;
    let arena = Arena {
        states,
        succ,
        ctrl,
        weights,
    };
    let mut players = names("", 2 * q);
    players.push("E".to_string());
    players.push("A".to_string());
    let deg = arena.degrees(n);
    let spec = GameSpec {
        players,
        actions: deg.iter().map(|&k| action_names(k)).collect(),
        labels: own_labels(&arena.states),
        states: arena.states.clone(),
        init: 0,
        weights: arena.weights.clone(),
    };
    let g = Game::from_fn(spec, |s, p| {
        let row = &arena.succ[s];
        row[p[arena.ctrl[s]] % row.len()]
    })?;
    let mut x = vec![int(-1); n];
    x[a] = int(0);
    Ok((g, 0, x))
}

/// Gadget states `I, U, M, B` and weights for `P, Q, R`; `I` moves on the
/// joint action of the three players and the others are absorbing.
const GADGET_WEIGHTS: [[i64; 3]; 4] = [[-1, -1, -1], [2, 1, 0], [0, 2, 1], [1, 0, 2]];

/// Successor of `I` (index 0) for actions `H = 0`, `T = 1`.
fn gadget_step(p: usize, q: usize, r: usize) -> usize {
    match (p, q, r) {
        (0, 0, _) => 1,
        (0, 1, 0) | (1, 1, 0) => 2,
        (1, 0, 1) | (1, 1, 1) => 3,
        _ => 0,
    }
}

/// The three-player gadget on its own: every profile admits a beneficial
/// deviation.
pub fn sink_gadget() -> Game {
    let states: Vec<String> = ["I", "U", "M", "B"].iter().map(|s| s.to_string()).collect();
    let spec = GameSpec {
        players: ["P", "Q", "R"].iter().map(|s| s.to_string()).collect(),
        actions: vec![vec!["H".to_string(), "T".to_string()]; 3],
        labels: own_labels(&states),
        states,
        init: 0,
        weights: GADGET_WEIGHTS.iter().map(|w| w.to_vec()).collect(),
    };
    Game::from_fn(spec, |s, p| if s == 0 { gadget_step(p[0], p[1], p[2]) } else { s })
        .expect("the gadget is well formed")
}

/// A game whose core is non-empty exactly when the three-block CNF formula
/// is true. Players are `1..2p` (x literals), `2p+1..2p+2t` (z literals),
/// `E`, `A`, `P`, `Q`, `R`; the sink is the gadget entered at `I`.
pub fn gen_qsat3_nonemptiness(f: &Qbf3) -> Result<Game> {
    f.validate()?;
    let (p, t) = (f.p, f.t);
    let r = f.clauses.len();
    let n = 2 * p + 2 * t + 5;
    let (e, a) = (2 * p + 2 * t, 2 * p + 2 * t + 1);
    let pqr = [a + 1, a + 2, a + 3];
    let clause_state = |i: usize| 1 + i;
    let lit_state = |i: usize, j: usize| 1 + r + 3 * i + j;
    let gadget = 1 + 4 * r;
    let mut states = vec!["s_init".to_string()];
    states.extend(names("C", r));
    for (i, c) in f.clauses.iter().enumerate() {
        for (j, l) in c.iter().enumerate() {
            states.push(format!("l{}_{}:{l}", i + 1, j + 1));
        }
    }
    states.extend(["I", "U", "M", "B"].iter().map(|s| s.to_string()));
    let ns = states.len();
    let mut succ = vec![Vec::new(); ns];
    let mut ctrl = vec![a; ns];
    // Owner of a z literal, who may veto into the gadget.
    let mut veto: BTreeMap<usize, usize> = BTreeMap::new();
    let mut weights = vec![vec![0i64; n]; ns];
    let big = 3 * r as i64;
    let y_clash = |c: &Clause, d: &Clause| {
        c.iter()
            .any(|u| u.block == Block::Y && d.iter().any(|v| u.clashes(v)))
    };
    succ[0] = (0..r).map(clause_state).collect();
    for (i, c) in f.clauses.iter().enumerate() {
        succ[clause_state(i)] = (0..3).map(|j| lit_state(i, j)).collect();
        ctrl[clause_state(i)] = e;
        for (j, l) in c.iter().enumerate() {
            let s = lit_state(i, j);
            let k = l.index;
            let (pos, neg) = match l.block {
                Block::X => (2 * k - 2, 2 * k - 1),
                Block::Z => (2 * p + 2 * k - 2, 2 * p + 2 * k - 1),
                Block::Y => {
                    succ[s] = vec![gadget];
                    continue;
                }
            };
            let (owner, other) = if l.positive { (pos, neg) } else { (neg, pos) };
            weights[s][owner] = big;
            weights[s][other] = -big;
            if l.block == Block::X {
                succ[s] = vec![0, gadget];
                ctrl[s] = owner;
            } else {
                succ[s] = core::iter::once(s)
                    .chain(
                        (0..r)
                            .filter(|&h| !y_clash(c, &f.clauses[h]))
                            .map(clause_state),
                    )
                    .collect();
                veto.insert(s, owner);
            }
        }
    }
    for (k, w) in GADGET_WEIGHTS.iter().enumerate() {
        let s = gadget + k;
        weights[s] = vec![1; n];
        weights[s][e] = 0;
        for (m, &pl) in pqr.iter().enumerate() {
            weights[s][pl] = w[m];
        }
        succ[s] = vec![s];
    }
    let arena = Arena {
        states,
        succ,
        ctrl,
        weights,
    };
    let mut deg = arena.degrees(n);
    for &owner in veto.values() {
        deg[owner] = deg[owner].max(2);
    }
    for &pl in &pqr {
        deg[pl] = 2;
    }
    let mut players = names("", 2 * p + 2 * t);
    players.extend(["E", "A", "P", "Q", "R"].iter().map(|s| s.to_string()));
    let mut actions: Vec<Vec<String>> = deg.iter().map(|&k| action_names(k)).collect();
    for &pl in &pqr {
        actions[pl] = vec!["H".to_string(), "T".to_string()];
    }
    let spec = GameSpec {
        players,
        actions,
        labels: own_labels(&arena.states),
        states: arena.states.clone(),
        init: 0,
        weights: arena.weights.clone(),
    };
    Game::from_fn(spec, |s, pr| {
        if s == gadget {
            return gadget + gadget_step(pr[pqr[0]], pr[pqr[1]], pr[pqr[2]]);
        }
        if let Some(&owner) = veto.get(&s) {
            // Action 0 follows A; any other action vetoes.
            if pr[owner] % 2 == 1 {
                return gadget;
            }
        }
        let row = &arena.succ[s];
        row[pr[arena.ctrl[s]] % row.len()]
    })
}

/// A complete deterministic automaton with a single accepting state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    pub states: Vec<String>,
    pub alphabet: Vec<String>,
    /// `delta[q][a]`: successor of state `q` on symbol `a`.
    pub delta: Vec<Vec<usize>>,
    pub init: usize,
    pub accept: usize,
}

impl Dfa {
    pub fn validate(&self) -> Result<()> {
        let n = self.states.len();
        if n == 0 || self.init >= n || self.accept >= n {
            return invalid("automaton states, initial or accepting state out of range");
        }
        let distinct: BTreeSet<&String> = self.alphabet.iter().collect();
        if distinct.len() != self.alphabet.len() {
            return invalid("automaton alphabet has repeated symbols");
        }
        if self.delta.len() != n
            || self
                .delta
                .iter()
                .any(|row| row.len() != self.alphabet.len() || row.iter().any(|&q| q >= n))
        {
            return invalid("automaton transition function must be total and deterministic");
        }
        Ok(())
    }

    fn symbol(&self, name: &str) -> Option<usize> {
        self.alphabet.iter().position(|a| a == name)
    }
}

/// Does some word lead every automaton to its accepting state?
pub fn dfa_intersection_nonempty(automata: &[Dfa]) -> Result<bool> {
    let Some(first) = automata.first() else {
        return invalid("need at least one automaton");
    };
    for d in automata {
        d.validate()?;
    }
    let sigma: BTreeSet<&String> = first.alphabet.iter().collect();
    if automata
        .iter()
        .any(|d| d.alphabet.iter().collect::<BTreeSet<_>>() != sigma)
    {
        return invalid("automata must share one alphabet");
    }
    let symbols: Vec<&String> = sigma.into_iter().collect();
    let cols: Vec<Vec<usize>> = automata
        .iter()
        .map(|d| symbols.iter().map(|s| d.symbol(s).unwrap()).collect())
        .collect();
    let start: Vec<usize> = automata.iter().map(|d| d.init).collect();
    let goal: Vec<usize> = automata.iter().map(|d| d.accept).collect();
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(cur) = queue.pop_front() {
        if cur == goal {
            return Ok(true);
        }
        for a in 0..symbols.len() {
            let next: Vec<usize> = automata
                .iter()
                .zip(&cur)
                .zip(&cols)
                .map(|((d, &q), col)| d.delta[q][col[a]])
                .collect();
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(false)
}

/// The arena `s0, s1, s2` and a profile whose machines are the automata.
/// Machines read arena state names as input symbols; a state name missing
/// from an automaton's alphabet leaves the machine where it is. While the
/// run stays in `s0` every machine reads `s0`, so the profile has no
/// beneficial deviation exactly when some word in `s0*` is accepted by all
/// automata.
pub fn gen_dfa_bendev(automata: &[Dfa]) -> Result<(Game, StrategyProfile)> {
    if automata.is_empty() {
        return invalid("need at least one automaton");
    }
    let arena_states = ["s0", "s1", "s2"];
    for d in automata {
        d.validate()?;
        if let Some(a) = d.alphabet.iter().find(|a| !arena_states.contains(&a.as_str())) {
            return invalid(format!(
                "automaton symbol {a:?} is not an arena state (s0, s1, s2)"
            ));
        }
    }
    let n = automata.len();
    let actions: Vec<Vec<String>> = automata
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let mut acts = d.states.clone();
            let mut fresh = format!("d{}", i + 1);
            while acts.contains(&fresh) {
                fresh.push('\'');
            }
            acts.push(fresh);
            acts
        })
        .collect();
    let states: Vec<String> = arena_states.iter().map(|s| s.to_string()).collect();
    let spec = GameSpec {
        players: names("", n),
        actions,
        labels: own_labels(&states),
        states,
        init: 0,
        weights: vec![vec![0; n], vec![1; n], vec![1; n]],
    };
    let accept: Vec<usize> = automata.iter().map(|d| d.accept).collect();
    let defer: Vec<usize> = automata.iter().map(|d| d.states.len()).collect();
    let g = Game::from_fn(spec, |s, p| {
        if s != 0 {
            s
        } else if p.iter().zip(&accept).all(|(a, q)| a == q) {
            2
        } else if p.iter().zip(&defer).all(|(a, d)| a == d) {
            1
        } else {
            0
        }
    })?;
    let machines = automata
        .iter()
        .map(|d| StrategyMachine {
            states: d.states.clone(),
            init: d.init,
            delta: (0..d.states.len())
                .map(|q| {
                    arena_states
                        .iter()
                        .map(|s| d.symbol(s).map_or(q, |a| d.delta[q][a]))
                        .collect()
                })
                .collect(),
            act: (0..d.states.len()).collect(),
        })
        .collect();
    let profile = StrategyProfile::new(&g, machines)?;
    Ok((g, profile))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(k: usize) -> Lit {
        Lit::new(Block::X, k, true)
    }
    fn nx(k: usize) -> Lit {
        Lit::new(Block::X, k, false)
    }
    fn y(k: usize) -> Lit {
        Lit::new(Block::Y, k, true)
    }

    #[test]
    fn evaluators() {
        let f = Qbf2 {
            p: 1,
            q: 1,
            clauses: vec![[x(1), y(1), y(1)]],
        };
        assert!(!qbf2_eval(&f).unwrap());
        let g = Qbf2 {
            p: 1,
            q: 1,
            clauses: vec![[x(1), x(1), x(1)]],
        };
        assert!(qbf2_eval(&g).unwrap());
        let h = Qbf3 {
            p: 1,
            q: 0,
            t: 0,
            clauses: vec![[x(1), x(1), x(1)], [nx(1), nx(1), nx(1)]],
        };
        assert!(!qbf3_eval(&h).unwrap());
    }

    #[test]
    fn automata_intersection() {
        let unary = |accept_from: usize| Dfa {
            states: vec!["q0".into(), "q1".into(), "q2".into()],
            alphabet: vec!["a".into()],
            delta: vec![vec![1], vec![2], vec![2]],
            init: 0,
            accept: accept_from,
        };
        assert!(dfa_intersection_nonempty(&[unary(1), unary(2)]).is_ok());
        let only_a = Dfa {
            states: vec!["i".into(), "f".into(), "dead".into()],
            alphabet: vec!["a".into(), "b".into()],
            delta: vec![vec![1, 2], vec![2, 2], vec![2, 2]],
            init: 0,
            accept: 1,
        };
        let mut only_b = only_a.clone();
        only_b.delta = vec![vec![2, 1], vec![2, 2], vec![2, 2]];
        assert!(!dfa_intersection_nonempty(&[only_a.clone(), only_b]).unwrap());
        assert!(dfa_intersection_nonempty(&[only_a]).unwrap());
    }
}
