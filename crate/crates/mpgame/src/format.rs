//! JSON game and strategy-profile files.
//!
//! Maps keep their source order while parsing so that duplicate keys can be
//! reported; everything written back out uses sorted keys.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::marker::PhantomData;

use mpcore::game::{Game, GameSpec, StrategyMachine, StrategyProfile};
use mpcore::rational::Rat;
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::CliError;

/// A JSON object read entry by entry, rejecting repeated keys.
#[derive(Debug, Clone)]
pub struct Entries<V>(pub Vec<(String, V)>);

impl<V> Default for Entries<V> {
    fn default() -> Self {
        Entries(Vec::new())
    }
}

impl<'de, V: Deserialize<'de>> Deserialize<'de> for Entries<V> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct Vis<V>(PhantomData<V>);
        impl<'de, V: Deserialize<'de>> Visitor<'de> for Vis<V> {
            type Value = Entries<V>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut m: A) -> Result<Self::Value, A::Error> {
                let mut seen = BTreeSet::new();
                let mut out = Vec::new();
                while let Some((k, v)) = m.next_entry::<String, V>()? {
                    if !seen.insert(k.clone()) {
                        return Err(de::Error::custom(format!("duplicate key {k:?}")));
                    }
                    out.push((k, v));
                }
                Ok(Entries(out))
            }
        }
        d.deserialize_map(Vis(PhantomData))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GameFile {
    players: Vec<String>,
    actions: Entries<Vec<String>>,
    states: Vec<String>,
    init: String,
    /// Optional proposition universe; labels must stay inside it.
    #[serde(default)]
    propositions: Option<Vec<String>>,
    #[serde(default)]
    labels: Entries<Vec<String>>,
    weights: Entries<Entries<Value>>,
    transitions: Entries<Entries<String>>,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Core(mpcore::Error::Invalid(msg.into()))
}

fn index_of(names: &[String], name: &str, what: &str) -> Result<usize, CliError> {
    names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| bad(format!("unknown {what} {name:?}")))
}

pub fn parse_game(text: &str) -> Result<Game, CliError> {
    let f: GameFile = serde_json::from_str(text)?;
    let np = f.players.len();
    let ns = f.states.len();

    let mut actions: Vec<Option<Vec<String>>> = vec![None; np];
    for (p, acts) in f.actions.0 {
        let i = index_of(&f.players, &p, "player")?;
        actions[i] = Some(acts);
    }
    let actions: Vec<Vec<String>> = actions
        .into_iter()
        .enumerate()
        .map(|(i, a)| a.ok_or_else(|| bad(format!("no actions for player {:?}", f.players[i]))))
        .collect::<Result<_, _>>()?;

    let init = index_of(&f.states, &f.init, "state")?;

    let universe: Option<BTreeSet<&String>> = f.propositions.as_ref().map(|u| u.iter().collect());
    let mut labels = vec![BTreeSet::new(); ns];
    for (s, props) in f.labels.0 {
        let k = index_of(&f.states, &s, "state")?;
        for a in props {
            if let Some(u) = &universe {
                if !u.contains(&a) {
                    return Err(bad(format!("label {a:?} of state {s:?} is not a declared proposition")));
                }
            }
            labels[k].insert(a);
        }
    }

    let mut weights: Vec<Vec<Option<i64>>> = vec![vec![None; np]; ns];
    for (s, row) in f.weights.0 {
        let k = index_of(&f.states, &s, "state")?;
        for (p, v) in row.0 {
            let i = index_of(&f.players, &p, "player")?;
            let w = v
                .as_i64()
                .ok_or_else(|| bad(format!("weight of player {p:?} in state {s:?} is not an integer: {v}")))?;
            weights[k][i] = Some(w);
        }
    }
    let weights: Vec<Vec<i64>> = weights
        .into_iter()
        .enumerate()
        .map(|(k, row)| {
            row.into_iter()
                .enumerate()
                .map(|(i, w)| {
                    w.ok_or_else(|| {
                        bad(format!("missing weight of player {:?} in state {:?}", f.players[i], f.states[k]))
                    })
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;

    let sizes: Vec<usize> = actions.iter().map(Vec::len).collect();
    let nprof = sizes.iter().try_fold(1usize, |a, &b| a.checked_mul(b));
    let nprof = nprof.ok_or_else(|| bad("too many action profiles"))?;
    let mut trans: Vec<Vec<Option<usize>>> = vec![vec![None; nprof]; ns];
    for (s, row) in f.transitions.0 {
        let k = index_of(&f.states, &s, "state")?;
        for (key, t) in row.0 {
            let parts: Vec<&str> = key.split(',').map(str::trim).collect();
            if parts.len() != np {
                return Err(bad(format!("profile {key:?} in state {s:?} does not name one action per player")));
            }
            let mut idx = 0usize;
            for (i, a) in parts.iter().enumerate() {
                let ai = actions[i]
                    .iter()
                    .position(|x| x == a)
                    .ok_or_else(|| bad(format!("unknown action {a:?} for player {:?}", f.players[i])))?;
                idx = idx * sizes[i] + ai;
            }
            let succ = index_of(&f.states, &t, "state")?;
            if trans[k][idx].replace(succ).is_some() {
                return Err(bad(format!("duplicate transition entry for profile {key:?} in state {s:?}")));
            }
        }
    }
    let mut table = Vec::with_capacity(ns);
    for (k, row) in trans.into_iter().enumerate() {
        let mut full = Vec::with_capacity(nprof);
        for (p, t) in row.into_iter().enumerate() {
            match t {
                Some(t) => full.push(t),
                None => {
                    let mut prof = vec![0; np];
                    let mut r = p;
                    for i in (0..np).rev() {
                        prof[i] = r % sizes[i];
                        r /= sizes[i];
                    }
                    let key: Vec<&str> = prof.iter().enumerate().map(|(i, &a)| actions[i][a].as_str()).collect();
                    return Err(bad(format!(
                        "partial transition function: state {:?} has no successor for profile {:?}",
                        f.states[k],
                        key.join(",")
                    )));
                }
            }
        }
        table.push(full);
    }
    let spec = GameSpec {
        players: f.players,
        actions,
        states: f.states,
        init,
        labels,
        weights,
    };
    Ok(Game::new(spec, table)?)
}

/// Canonical `num/den` form, denominators always written.
pub fn rat_json(r: &Rat) -> Value {
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

pub fn vec_json(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat_json).collect())
}

pub fn game_to_json(g: &Game) -> Value {
    let mut actions = Map::new();
    for (i, p) in g.players().iter().enumerate() {
        actions.insert(p.clone(), json!(g.actions(i)));
    }
    let mut labels = Map::new();
    let mut weights = Map::new();
    for (s, name) in g.states().iter().enumerate() {
        labels.insert(name.clone(), json!(g.labels(s)));
        let mut row = Map::new();
        for (i, p) in g.players().iter().enumerate() {
            row.insert(p.clone(), json!(g.weight(i, s)));
        }
        weights.insert(name.clone(), Value::Object(row));
    }
    json!({
        "players": g.players(),
        "actions": actions,
        "states": g.states(),
        "init": g.states()[g.init()],
        "labels": labels,
        "weights": weights,
        "transitions": g.transition_table(),
    })
}

pub fn write_game(g: &Game) -> String {
    let mut s = serde_json::to_string_pretty(&game_to_json(g)).expect("game serialises");
    s.push('\n');
    s
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileFile {
    machines: Entries<MachineFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MachineFile {
    states: Vec<String>,
    init: String,
    /// `"*"` in a row covers every arena state not listed.
    delta: Entries<Entries<String>>,
    act: Entries<String>,
}

pub fn parse_profile(g: &Game, text: &str) -> Result<StrategyProfile, CliError> {
    let f: ProfileFile = serde_json::from_str(text)?;
    let mut machines: Vec<Option<StrategyMachine>> = vec![None; g.num_players()];
    for (p, m) in f.machines.0 {
        let i = index_of(g.players(), &p, "player")?;
        let q = m.states.len();
        let init = index_of(&m.states, &m.init, "internal state")?;
        let mut delta: Vec<Option<Vec<usize>>> = vec![None; q];
        for (from, row) in m.delta.0 {
            let k = index_of(&m.states, &from, "internal state")?;
            let mut out: Vec<Option<usize>> = vec![None; g.num_states()];
            let mut default = None;
            for (s, to) in row.0 {
                let t = index_of(&m.states, &to, "internal state")?;
                if s == "*" {
                    default = Some(t);
                } else {
                    out[index_of(g.states(), &s, "state")?] = Some(t);
                }
            }
            let out: Vec<usize> = out
                .into_iter()
                .enumerate()
                .map(|(s, t)| {
                    t.or(default).ok_or_else(|| {
                        bad(format!(
                            "machine of player {p:?}: no transition from {from:?} on state {:?}",
                            g.states()[s]
                        ))
                    })
                })
                .collect::<Result<_, _>>()?;
            delta[k] = Some(out);
        }
        let mut act: Vec<Option<usize>> = vec![None; q];
        for (from, a) in m.act.0 {
            let k = index_of(&m.states, &from, "internal state")?;
            act[k] = Some(index_of(g.actions(i), &a, "action")?);
        }
        let delta = delta
            .into_iter()
            .enumerate()
            .map(|(k, d)| d.ok_or_else(|| bad(format!("machine of player {p:?}: no transitions for {:?}", m.states[k]))))
            .collect::<Result<_, _>>()?;
        let act = act
            .into_iter()
            .enumerate()
            .map(|(k, a)| a.ok_or_else(|| bad(format!("machine of player {p:?}: no action for {:?}", m.states[k]))))
            .collect::<Result<_, _>>()?;
        machines[i] = Some(StrategyMachine {
            states: m.states,
            init,
            delta,
            act,
        });
    }
    let machines = machines
        .into_iter()
        .enumerate()
        .map(|(i, m)| m.ok_or_else(|| bad(format!("no machine for player {:?}", g.players()[i]))))
        .collect::<Result<_, _>>()?;
    Ok(StrategyProfile::new(g, machines)?)
}

pub fn profile_to_json(g: &Game, p: &StrategyProfile) -> Value {
    let mut machines = Map::new();
    for (i, m) in p.machines.iter().enumerate() {
        let mut delta = Map::new();
        let mut act = Map::new();
        for (k, q) in m.states.iter().enumerate() {
            let row: BTreeMap<&String, &String> = g
                .states()
                .iter()
                .zip(&m.delta[k])
                .map(|(s, &t)| (s, &m.states[t]))
                .collect();
            delta.insert(q.clone(), json!(row));
            act.insert(q.clone(), json!(g.actions(i)[m.act[k]]));
        }
        machines.insert(
            g.players()[i].clone(),
            json!({
                "states": m.states,
                "init": m.states[m.init],
                "delta": delta,
                "act": act,
            }),
        );
    }
    json!({ "machines": machines })
}

pub fn write_profile(g: &Game, p: &StrategyProfile) -> String {
    let mut s = serde_json::to_string_pretty(&profile_to_json(g, p)).expect("profile serialises");
    s.push('\n');
    s
}
