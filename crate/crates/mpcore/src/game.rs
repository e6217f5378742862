//! Concurrent arenas with weights and labels, coalitions, finite-state
//! strategies and the runs they induce.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Result};

/// A concurrent multi-player mean-payoff game.
///
/// Players, actions and states are referred to by index; names are kept for
/// file formats and display. Action profiles are encoded as a mixed-radix
/// index with the first player most significant, so iterating indices visits
/// profiles in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    players: Vec<String>,
    actions: Vec<Vec<String>>,
    states: Vec<String>,
    init: usize,
    labels: Vec<BTreeSet<String>>,
    /// `weights[s][i]` is player `i`'s weight in state `s`.
    weights: Vec<Vec<i64>>,
    /// `trans[s][profile]` is the successor of `s`.
    trans: Vec<Vec<usize>>,
    strides: Vec<usize>,
    /// Players whose action can change the successor of each state.
    relevant: Vec<Vec<usize>>,
}

/// Everything needed to build a [`Game`], with the transition function given
/// as a closure over state and action-index profile.
pub struct GameSpec {
    pub players: Vec<String>,
    pub actions: Vec<Vec<String>>,
    pub states: Vec<String>,
    pub init: usize,
    pub labels: Vec<BTreeSet<String>>,
    pub weights: Vec<Vec<i64>>,
}

fn check_unique(what: &str, names: &[String]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return invalid(format!("duplicate {what} {n:?}"));
        }
    }
    Ok(())
}

impl Game {
    /// Builds and validates a game. `trans[s][p]` is the successor of state
    /// `s` under the profile with index `p`.
    pub fn new(spec: GameSpec, trans: Vec<Vec<usize>>) -> Result<Game> {
        let GameSpec {
            players,
            actions,
            states,
            init,
            labels,
            weights,
        } = spec;
        if players.is_empty() {
            return invalid("a game needs at least one player");
        }
        if states.is_empty() {
            return invalid("a game needs at least one state");
        }
        check_unique("player", &players)?;
        check_unique("state", &states)?;
        if actions.len() != players.len() {
            return invalid("one action set per player is required");
        }
        for (i, a) in actions.iter().enumerate() {
            if a.is_empty() {
                return invalid(format!("player {:?} has no actions", players[i]));
            }
            check_unique("action", a)?;
        }
        if init >= states.len() {
            return invalid("initial state out of range");
        }
        if labels.len() != states.len() || weights.len() != states.len() {
            return invalid("labels and weights must cover every state");
        }
        if weights.iter().any(|w| w.len() != players.len()) {
            return invalid("every state needs one weight per player");
        }
        let mut strides = vec![1usize; players.len()];
        for i in (0..players.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1]
                .checked_mul(actions[i + 1].len())
                .ok_or_else(|| crate::Error::Invalid("too many action profiles".into()))?;
        }
        let nprof = strides[0]
            .checked_mul(actions[0].len())
            .ok_or_else(|| crate::Error::Invalid("too many action profiles".into()))?;
        if trans.len() != states.len() {
            return invalid("partial transition function: missing states");
        }
        for (s, row) in trans.iter().enumerate() {
            if row.len() != nprof {
                return invalid(format!(
                    "partial transition function: state {:?} has {} of {} profiles",
                    states[s],
                    row.len(),
                    nprof
                ));
            }
            if let Some(&t) = row.iter().find(|&&t| t >= states.len()) {
                return invalid(format!("successor index {t} out of range"));
            }
        }
        let mut g = Game {
            players,
            actions,
            states,
            init,
            labels,
            weights,
            trans,
            strides,
            relevant: Vec::new(),
        };
        g.relevant = (0..g.states.len()).map(|s| g.compute_relevant(s)).collect();
        Ok(g)
    }

    /// Builds a game from a transition closure.
    pub fn from_fn(spec: GameSpec, mut tr: impl FnMut(usize, &[usize]) -> usize) -> Result<Game> {
        let sizes: Vec<usize> = spec.actions.iter().map(Vec::len).collect();
        let nprof: usize = sizes.iter().product();
        let mut trans = Vec::with_capacity(spec.states.len());
        for s in 0..spec.states.len() {
            let mut row = Vec::with_capacity(nprof);
            let mut prof = vec![0usize; sizes.len()];
            for _ in 0..nprof {
                row.push(tr(s, &prof));
                for i in (0..prof.len()).rev() {
                    prof[i] += 1;
                    if prof[i] < sizes[i] {
                        break;
                    }
                    prof[i] = 0;
                }
            }
            trans.push(row);
        }
        Game::new(spec, trans)
    }

    fn compute_relevant(&self, s: usize) -> Vec<usize> {
        let row = &self.trans[s];
        (0..self.players.len())
            .filter(|&i| {
                let stride = self.strides[i];
                let k = self.actions[i].len();
                (0..row.len()).any(|p| {
                    let a = (p / stride) % k;
                    a == 0 && (1..k).any(|b| row[p + b * stride] != row[p])
                })
            })
            .collect()
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_profiles(&self) -> usize {
        self.trans[0].len()
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn actions(&self, player: usize) -> &[String] {
        &self.actions[player]
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn init(&self) -> usize {
        self.init
    }

    pub fn labels(&self, s: usize) -> &BTreeSet<String> {
        &self.labels[s]
    }

    /// Every proposition used by some label.
    pub fn propositions(&self) -> BTreeSet<String> {
        self.labels.iter().flatten().cloned().collect()
    }

    pub fn weight(&self, player: usize, s: usize) -> i64 {
        self.weights[s][player]
    }

    pub fn weights_of(&self, s: usize) -> &[i64] {
        &self.weights[s]
    }

    /// Largest absolute weight, `W` in the payoff bounds.
    pub fn max_abs_weight(&self) -> i64 {
        self.weights.iter().flatten().map(|w| w.abs()).max().unwrap_or(0)
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn player_index(&self, name: &str) -> Option<usize> {
        self.players.iter().position(|p| p == name)
    }

    pub fn action_index(&self, player: usize, name: &str) -> Option<usize> {
        self.actions[player].iter().position(|a| a == name)
    }

    pub fn profile_index(&self, profile: &[usize]) -> usize {
        profile.iter().zip(&self.strides).map(|(a, s)| a * s).sum()
    }

    pub fn profile_of(&self, index: usize) -> Vec<usize> {
        (0..self.players.len())
            .map(|i| (index / self.strides[i]) % self.actions[i].len())
            .collect()
    }

    /// Comma-joined action names in player order.
    pub fn profile_key(&self, profile: &[usize]) -> String {
        let names: Vec<&str> = profile
            .iter()
            .enumerate()
            .map(|(i, &a)| self.actions[i][a].as_str())
            .collect();
        names.join(",")
    }

    /// Parses a profile key back to action indices.
    pub fn parse_profile_key(&self, key: &str) -> Result<Vec<usize>> {
        let parts: Vec<&str> = key.split(',').map(str::trim).collect();
        if parts.len() != self.players.len() {
            return invalid(format!("profile {key:?} does not name one action per player"));
        }
        parts
            .iter()
            .enumerate()
            .map(|(i, a)| {
                self.action_index(i, a).ok_or_else(|| {
                    crate::Error::Invalid(format!(
                        "unknown action {a:?} for player {:?}",
                        self.players[i]
                    ))
                })
            })
            .collect()
    }

    /// `tr(s, profile)`.
    pub fn step(&self, s: usize, profile: &[usize]) -> usize {
        self.trans[s][self.profile_index(profile)]
    }

    pub fn step_index(&self, s: usize, profile_index: usize) -> usize {
        self.trans[s][profile_index]
    }

    /// Players whose action can change the successor of `s`.
    pub fn relevant_players(&self, s: usize) -> &[usize] {
        &self.relevant[s]
    }

    /// Distinct successors of `s`.
    pub fn successors(&self, s: usize) -> BTreeSet<usize> {
        self.trans[s].iter().copied().collect()
    }

    /// The first profile (in index order) moving `s` to `t`, if any.
    pub fn profile_between(&self, s: usize, t: usize) -> Option<usize> {
        self.trans[s].iter().position(|&u| u == t)
    }

    /// Same arena and labels with different weights.
    pub fn with_weights(&self, weights: Vec<Vec<i64>>) -> Result<Game> {
        if weights.len() != self.states.len()
            || weights.iter().any(|w| w.len() != self.players.len())
        {
            return invalid("weight table does not match the game");
        }
        let mut g = self.clone();
        g.weights = weights;
        Ok(g)
    }

    /// Transition table as `state -> profile key -> state` names.
    pub fn transition_table(&self) -> BTreeMap<String, BTreeMap<String, String>> {
        let mut out = BTreeMap::new();
        for s in 0..self.states.len() {
            let mut row = BTreeMap::new();
            for p in 0..self.num_profiles() {
                let key = self.profile_key(&self.profile_of(p));
                row.insert(key, self.states[self.trans[s][p]].clone());
            }
            out.insert(self.states[s].clone(), row);
        }
        out
    }
}

/// A non-empty set of players, stored sorted by player index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coalition {
    members: Vec<usize>,
}

impl Coalition {
    pub fn new(num_players: usize, members: &[usize]) -> Result<Coalition> {
        let set: BTreeSet<usize> = members.iter().copied().collect();
        if set.is_empty() {
            return invalid("coalitions must be non-empty");
        }
        if set.iter().any(|&i| i >= num_players) {
            return invalid("coalition member out of range");
        }
        Ok(Coalition {
            members: set.into_iter().collect(),
        })
    }

    pub fn grand(num_players: usize) -> Coalition {
        Coalition {
            members: (0..num_players).collect(),
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn complement(&self, num_players: usize) -> Vec<usize> {
        (0..num_players).filter(|&i| !self.contains(i)).collect()
    }

    /// Every non-empty coalition, by size and then lexicographically.
    pub fn all(num_players: usize) -> Vec<Coalition> {
        let mut out = Vec::new();
        for size in 1..=num_players {
            let mut idx: Vec<usize> = (0..size).collect();
            loop {
                out.push(Coalition {
                    members: idx.clone(),
                });
                let mut k = size;
                while k > 0 && idx[k - 1] == num_players - size + k - 1 {
                    k -= 1;
                }
                if k == 0 {
                    break;
                }
                idx[k - 1] += 1;
                for j in k..size {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
        out
    }
}

/// A deterministic finite-state strategy. `delta[q][s]` is the next internal
/// state after observing arena state `s` in internal state `q`; `act[q]` is
/// the action index played in `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyMachine {
    pub states: Vec<String>,
    pub init: usize,
    pub delta: Vec<Vec<usize>>,
    pub act: Vec<usize>,
}

impl StrategyMachine {
    /// One internal state playing `action` forever.
    pub fn constant(num_arena_states: usize, action: usize) -> Self {
        StrategyMachine {
            states: vec![String::from("q")],
            init: 0,
            delta: vec![vec![0; num_arena_states]],
            act: vec![action],
        }
    }

    fn validate(&self, g: &Game, player: usize) -> Result<()> {
        let q = self.states.len();
        if q == 0 {
            return invalid("strategy machine needs an internal state");
        }
        if self.init >= q || self.delta.len() != q || self.act.len() != q {
            return invalid("strategy machine tables do not match its state count");
        }
        for row in &self.delta {
            if row.len() != g.num_states() {
                return invalid("strategy transition must be total over arena states");
            }
            if row.iter().any(|&t| t >= q) {
                return invalid("strategy transition leaves the machine");
            }
        }
        if self.act.iter().any(|&a| a >= g.actions(player).len()) {
            return invalid(format!(
                "strategy plays an action outside player {:?}'s action set",
                g.players()[player]
            ));
        }
        Ok(())
    }
}

/// One machine per player, in player order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyProfile {
    pub machines: Vec<StrategyMachine>,
}

impl StrategyProfile {
    /// The profile where player `i` plays `choices[i][s]` in state `s`.
    ///
    /// Actions depend on the internal state only, so each machine keeps the
    /// current arena state by simulating the whole profile one step ahead.
    pub fn memoryless(g: &Game, choices: &[Vec<usize>]) -> Result<Self> {
        let n = g.num_states();
        if choices.len() != g.num_players() || choices.iter().any(|c| c.len() != n) {
            return invalid("a memoryless profile needs one choice per player and state");
        }
        let next: Vec<usize> = (0..n)
            .map(|s| {
                let profile: Vec<usize> = choices.iter().map(|c| c[s]).collect();
                g.step(s, &profile)
            })
            .collect();
        let machines = choices
            .iter()
            .map(|c| StrategyMachine {
                states: (0..n).map(|s| format!("m{s}")).collect(),
                init: g.init(),
                delta: vec![next.clone(); n],
                act: c.clone(),
            })
            .collect();
        StrategyProfile::new(g, machines)
    }

    pub fn new(g: &Game, machines: Vec<StrategyMachine>) -> Result<Self> {
        if machines.len() != g.num_players() {
            return invalid("a profile needs exactly one machine per player");
        }
        for (i, m) in machines.iter().enumerate() {
            m.validate(g, i)?;
        }
        Ok(StrategyProfile { machines })
    }

    /// Number of configurations `|St| · Π |Q_i|`, saturating.
    pub fn configuration_space(&self, g: &Game) -> usize {
        self.machines
            .iter()
            .fold(g.num_states(), |acc, m| acc.saturating_mul(m.states.len()))
    }

    pub fn initial(&self, g: &Game) -> Configuration {
        Configuration {
            state: g.init(),
            internal: self.machines.iter().map(|m| m.init).collect(),
        }
    }

    /// The action profile played in a configuration.
    pub fn actions(&self, c: &Configuration) -> Vec<usize> {
        self.machines
            .iter()
            .zip(&c.internal)
            .map(|(m, &q)| m.act[q])
            .collect()
    }
}

/// Arena state plus one internal state per player.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub state: usize,
    pub internal: Vec<usize>,
}

/// One synchronous step of the profile.
pub fn run_step(g: &Game, p: &StrategyProfile, c: &Configuration) -> Configuration {
    let profile = p.actions(c);
    Configuration {
        state: g.step(c.state, &profile),
        internal: p
            .machines
            .iter()
            .zip(&c.internal)
            .map(|(m, &q)| m.delta[q][c.state])
            .collect(),
    }
}

/// `tr(s, profile)`.
pub fn step(g: &Game, s: usize, profile: &[usize]) -> usize {
    g.step(s, profile)
}

/// An ultimately periodic run `stem · cycle^ω`. The run starts with the
/// first stem state, or with the first cycle state when the stem is empty.
/// `steps[k]` is the index of an action profile realising the `k`-th
/// transition (stem transitions, the join, then cycle transitions including
/// the wrap-around).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso {
    pub stem: Vec<usize>,
    pub cycle: Vec<usize>,
    pub steps: Vec<usize>,
}

impl Lasso {
    /// Builds a lasso, finding a witnessing profile for every transition.
    pub fn new(g: &Game, stem: Vec<usize>, cycle: Vec<usize>) -> Result<Lasso> {
        if cycle.is_empty() {
            return invalid("a lasso needs a non-empty cycle");
        }
        let start = stem.first().copied().unwrap_or(cycle[0]);
        if start != g.init() {
            return invalid("a lasso must start in the initial state");
        }
        let seq: Vec<usize> = stem.iter().chain(cycle.iter()).copied().collect();
        let mut steps = Vec::with_capacity(seq.len());
        for k in 0..seq.len() {
            let (s, t) = if k + 1 < seq.len() {
                (seq[k], seq[k + 1])
            } else {
                (seq[k], cycle[0])
            };
            match g.profile_between(s, t) {
                Some(p) => steps.push(p),
                None => {
                    return invalid(format!(
                        "no action profile moves {:?} to {:?}",
                        g.states()[s],
                        g.states()[t]
                    ))
                }
            }
        }
        Ok(Lasso { stem, cycle, steps })
    }

    /// Checks that every recorded step is a real transition.
    pub fn is_consistent(&self, g: &Game) -> bool {
        let seq: Vec<usize> = self.stem.iter().chain(self.cycle.iter()).copied().collect();
        self.steps.len() == seq.len()
            && !self.cycle.is_empty()
            && seq.first() == Some(&g.init())
            && (0..seq.len()).all(|k| {
                let t = if k + 1 < seq.len() { seq[k + 1] } else { self.cycle[0] };
                self.steps[k] < g.num_profiles() && g.step_index(seq[k], self.steps[k]) == t
            })
    }

    /// States visited infinitely often.
    pub fn recurrent(&self) -> BTreeSet<usize> {
        self.cycle.iter().copied().collect()
    }

    /// The first `n` states of the run.
    pub fn unroll(&self, n: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.stem.iter().copied().take(n).collect();
        let mut k = 0;
        while out.len() < n {
            out.push(self.cycle[k % self.cycle.len()]);
            k += 1;
        }
        out
    }
}

/// `G[S]`: the arena restricted to `keep`, with transitions leaving `keep`
/// removed. The result may be partial and is only meant for path and
/// circulation search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubArena {
    /// Kept states, ascending.
    pub states: Vec<usize>,
    pub init: usize,
    /// `(profile index, successor)` pairs per kept state, in `states` order.
    pub transitions: Vec<Vec<(usize, usize)>>,
    /// True when some transition was removed.
    pub partial: bool,
}

impl SubArena {
    pub fn contains(&self, s: usize) -> bool {
        self.states.binary_search(&s).is_ok()
    }

    /// Distinct `(s, t)` edges, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut set = BTreeSet::new();
        for (k, row) in self.transitions.iter().enumerate() {
            for &(_, t) in row {
                set.insert((self.states[k], t));
            }
        }
        set.into_iter().collect()
    }
}

pub fn restrict_arena(g: &Game, keep: &BTreeSet<usize>) -> Result<SubArena> {
    if !keep.contains(&g.init()) {
        return invalid("the restricted arena must contain the initial state");
    }
    if keep.iter().any(|&s| s >= g.num_states()) {
        return invalid("state index out of range");
    }
    let states: Vec<usize> = keep.iter().copied().collect();
    let mut partial = false;
    let transitions = states
        .iter()
        .map(|&s| {
            let row: Vec<(usize, usize)> = (0..g.num_profiles())
                .map(|p| (p, g.step_index(s, p)))
                .filter(|(_, t)| keep.contains(t))
                .collect();
            if row.len() < g.num_profiles() {
                partial = true;
            }
            row
        })
        .collect();
    Ok(SubArena {
        states,
        init: g.init(),
        transitions,
        partial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coalition_order_is_size_then_lexicographic() {
        let all: Vec<Vec<usize>> = Coalition::all(3)
            .into_iter()
            .map(|c| c.members().to_vec())
            .collect();
        assert_eq!(
            all,
            vec![
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 1, 2]
            ]
        );
        assert!(Coalition::new(3, &[]).is_err());
        assert!(Coalition::new(3, &[3]).is_err());
    }
}
