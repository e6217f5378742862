//! Query results: structured JSON and one-line human summaries.

use mpcore::decisions::{PathWitness, Stats, Witness};
use mpcore::game::{Coalition, Game, Lasso};
use mpcore::geometry::{HalfSpace, PolyUnion};
use mpcore::rational::{fmt_vec, parse_rat, Rat, RatVec};
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::format::{rat_json, vec_json};

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn stats_json(stats: &Stats, millis: Option<u128>) -> Value {
    let mut m = Map::new();
    m.insert("coalitions_checked".into(), json!(stats.coalitions_checked));
    m.insert("lps_solved".into(), json!(stats.lps_solved));
    if let Some(ms) = millis {
        m.insert("millis".into(), json!(ms));
    }
    Value::Object(m)
}

/// The full result object; keys come out sorted.
pub fn query_result(command: &str, answer: bool, query: Value, witness: Value, stats: Value) -> Value {
    json!({
        "command": command,
        "answer": yes_no(answer),
        "query": query,
        "witness": witness,
        "stats": stats,
        "version": env!("CARGO_PKG_VERSION"),
    })
}

fn state_names(g: &Game, v: &[usize]) -> Value {
    json!(v.iter().map(|&s| g.states()[s].as_str()).collect::<Vec<_>>())
}

pub fn coalition_names(g: &Game, c: &Coalition) -> Vec<String> {
    c.members().iter().map(|&i| g.players()[i].clone()).collect()
}

pub fn lasso_json(g: &Game, l: &Lasso) -> Value {
    json!({ "stem": state_names(g, &l.stem), "cycle": state_names(g, &l.cycle) })
}

pub fn witness_json(g: &Game, w: &Witness) -> Value {
    match w {
        Witness::Domination { coalition, z } => json!({
            "kind": "domination",
            "coalition": coalition_names(g, coalition),
            "z": vec_json(z),
        }),
        Witness::Payoff(x) => json!({ "kind": "payoff", "payoff": vec_json(x) }),
        Witness::Path(p) => {
            let circ: Vec<Value> = p
                .circulation
                .iter()
                .map(|((u, v), z)| {
                    json!({ "from": g.states()[*u], "to": g.states()[*v], "weight": rat_json(z) })
                })
                .collect();
            json!({
                "kind": "path",
                "subset": state_names(g, &p.subset),
                "component": state_names(g, &p.component),
                "circulation": circ,
                "payoff": vec_json(&p.payoff),
                "lasso": lasso_json(g, &p.lasso),
                "exact": p.exact,
            })
        }
    }
}

fn set_str(names: &[String]) -> String {
    format!("{{{}}}", names.join(","))
}

fn states_str(g: &Game, v: &[usize]) -> String {
    if v.is_empty() {
        return "-".into();
    }
    v.iter().map(|&s| g.states()[s].as_str()).collect::<Vec<_>>().join(",")
}

/// Witness as `key=value` fields for the one-line output.
pub fn witness_line(g: &Game, w: &Witness) -> String {
    match w {
        Witness::Domination { coalition, z } => {
            format!("C={} z={}", set_str(&coalition_names(g, coalition)), fmt_vec(z))
        }
        Witness::Payoff(x) => format!("payoff={}", fmt_vec(x)),
        Witness::Path(p) => {
            let mut s = format!(
                "payoff={} stem={} cycle={}",
                fmt_vec(&p.payoff),
                states_str(g, &p.lasso.stem),
                states_str(g, &p.lasso.cycle)
            );
            if !p.exact {
                s.push_str(" cycle_exact=false");
            }
            s
        }
    }
}

pub fn var_name(player: &str) -> String {
    if !player.is_empty() && player.chars().all(|c| c.is_ascii_digit()) {
        format!("x{player}")
    } else {
        format!("x[{player}]")
    }
}

pub fn halfspace_str(h: &HalfSpace, vars: &[String]) -> String {
    let mut terms = String::new();
    for (a, v) in h.normal.iter().zip(vars) {
        if a == &Rat::from_integer(0.into()) {
            continue;
        }
        let neg = a < &Rat::from_integer(0.into());
        let mag = if neg { -a.clone() } else { a.clone() };
        if terms.is_empty() {
            if neg {
                terms.push('-');
            }
        } else {
            terms.push_str(if neg { " - " } else { " + " });
        }
        if mag != Rat::from_integer(1.into()) {
            terms.push_str(&format!("{mag}*"));
        }
        terms.push_str(v);
    }
    format!("{terms} <= {}", h.bound)
}

pub fn union_json(u: &PolyUnion) -> Value {
    let parts: Vec<Value> = u
        .parts
        .iter()
        .map(|p| {
            Value::Array(
                p.constraints
                    .iter()
                    .map(|h| json!({ "normal": vec_json(&h.normal), "bound": rat_json(&h.bound) }))
                    .collect(),
            )
        })
        .collect();
    json!({ "dim": u.dim, "parts": parts })
}

pub fn union_str(u: &PolyUnion, vars: &[String]) -> String {
    if u.parts.is_empty() {
        return "empty".into();
    }
    let parts: Vec<String> = u
        .parts
        .iter()
        .map(|p| {
            if p.constraints.is_empty() {
                "true".into()
            } else {
                p.constraints
                    .iter()
                    .map(|h| halfspace_str(h, vars))
                    .collect::<Vec<_>>()
                    .join(" & ")
            }
        })
        .collect();
    parts.join(" | ")
}

fn malformed(what: &str) -> CliError {
    CliError::Core(mpcore::Error::Parse(format!("malformed result file: {what}")))
}

pub fn rat_from_json(v: &Value) -> Result<Rat, CliError> {
    let s = v.as_str().ok_or_else(|| malformed("rational is not a string"))?;
    Ok(parse_rat(s)?)
}

pub fn vec_from_json(v: &Value) -> Result<RatVec, CliError> {
    v.as_array()
        .ok_or_else(|| malformed("vector is not an array"))?
        .iter()
        .map(rat_from_json)
        .collect()
}

fn names_from_json(v: &Value) -> Result<Vec<String>, CliError> {
    v.as_array()
        .ok_or_else(|| malformed("name list is not an array"))?
        .iter()
        .map(|x| x.as_str().map(str::to_string).ok_or_else(|| malformed("name is not a string")))
        .collect()
}

pub fn state_from_name(g: &Game, name: &str) -> Result<usize, CliError> {
    g.state_index(name)
        .ok_or_else(|| CliError::Core(mpcore::Error::Invalid(format!("unknown state {name:?}"))))
}

fn states_from_json(g: &Game, v: &Value) -> Result<Vec<usize>, CliError> {
    names_from_json(v)?.iter().map(|n| state_from_name(g, n)).collect()
}

pub fn coalition_from_names(g: &Game, names: &[String]) -> Result<Coalition, CliError> {
    let mut idx = Vec::with_capacity(names.len());
    for n in names {
        idx.push(
            g.player_index(n)
                .ok_or_else(|| CliError::Core(mpcore::Error::Invalid(format!("unknown player {n:?}"))))?,
        );
    }
    idx.sort_unstable();
    Ok(Coalition::new(g.num_players(), &idx)?)
}

/// Reads a witness back from its JSON form.
pub fn witness_from_json(g: &Game, v: &Value) -> Result<Witness, CliError> {
    match v["kind"].as_str() {
        Some("domination") => Ok(Witness::Domination {
            coalition: coalition_from_names(g, &names_from_json(&v["coalition"])?)?,
            z: vec_from_json(&v["z"])?,
        }),
        Some("payoff") => Ok(Witness::Payoff(vec_from_json(&v["payoff"])?)),
        Some("path") => {
            let circulation = v["circulation"]
                .as_array()
                .ok_or_else(|| malformed("circulation is not an array"))?
                .iter()
                .map(|e| {
                    let from = state_from_name(g, e["from"].as_str().ok_or_else(|| malformed("edge source"))?)?;
                    let to = state_from_name(g, e["to"].as_str().ok_or_else(|| malformed("edge target"))?)?;
                    Ok(((from, to), rat_from_json(&e["weight"])?))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let stem = states_from_json(g, &v["lasso"]["stem"])?;
            let cycle = states_from_json(g, &v["lasso"]["cycle"])?;
            Ok(Witness::Path(Box::new(PathWitness {
                subset: states_from_json(g, &v["subset"])?,
                component: states_from_json(g, &v["component"])?,
                circulation,
                payoff: vec_from_json(&v["payoff"])?,
                lasso: Lasso::new(g, stem, cycle)?,
                exact: v["exact"].as_bool().ok_or_else(|| malformed("exact flag"))?,
            })))
        }
        _ => Err(malformed("unknown witness kind")),
    }
}
