//! Input formats for the instance generators.
//!
//! Formulas use the same text the core crate prints:
//!
//! ```text
//! exists 2 forall 2 : (x1 & x2 & y1) | (x1 & !x2 & !y2)
//! exists 2 forall 1 exists 1 : (x1 | x2 | y1) & (!x1 | y1 | z1)
//! ```
//!
//! Lines starting with `#` are ignored. Automata are JSON.

use mpcore::reductions::{Block, Clause, Dfa, Lit, Qbf2, Qbf3};
use serde::Deserialize;

use crate::error::CliError;
use crate::format::Entries;

fn syntax(msg: impl Into<String>) -> CliError {
    CliError::Core(mpcore::Error::Parse(msg.into()))
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Num(usize),
    Lit(Lit),
    Open,
    Close,
    And,
    Or,
    Colon,
}

fn lex(text: &str) -> Result<Vec<Tok>, CliError> {
    let body: String = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect::<Vec<_>>()
        .join(" ");
    let cs: Vec<char> = body.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        match c {
            ' ' | '\t' | '\r' => i += 1,
            '(' => {
                out.push(Tok::Open);
                i += 1
            }
            ')' => {
                out.push(Tok::Close);
                i += 1
            }
            '&' => {
                out.push(Tok::And);
                i += 1
            }
            '|' => {
                out.push(Tok::Or);
                i += 1
            }
            ':' => {
                out.push(Tok::Colon);
                i += 1
            }
            '!' | 'x' | 'y' | 'z' | 'e' | 'f' | '0'..='9' => {
                let start = i;
                while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '!') {
                    i += 1;
                }
                let w: String = cs[start..i].iter().collect();
                out.push(word(&w)?);
            }
            _ => return Err(syntax(format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}

fn word(w: &str) -> Result<Tok, CliError> {
    if let Ok(n) = w.parse::<usize>() {
        return Ok(Tok::Num(n));
    }
    if w == "exists" || w == "forall" {
        return Ok(Tok::Word(w.to_string()));
    }
    let (positive, rest) = match w.strip_prefix('!') {
        Some(r) => (false, r),
        None => (true, w),
    };
    let mut chars = rest.chars();
    let block = match chars.next() {
        Some('x') => Block::X,
        Some('y') => Block::Y,
        Some('z') => Block::Z,
        _ => return Err(syntax(format!("not a literal: {w:?}"))),
    };
    let index: usize = chars
        .as_str()
        .parse()
        .map_err(|_| syntax(format!("not a literal: {w:?}")))?;
    Ok(Tok::Lit(Lit::new(block, index, positive)))
}

struct P {
    toks: Vec<Tok>,
    pos: usize,
}

impl P {
    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<(), CliError> {
        match self.next() {
            Some(u) if u == t => Ok(()),
            other => Err(syntax(format!("expected {t:?}, found {other:?}"))),
        }
    }

    fn block(&mut self, q: &str) -> Result<usize, CliError> {
        self.expect(Tok::Word(q.to_string()))?;
        match self.next() {
            Some(Tok::Num(n)) => Ok(n),
            other => Err(syntax(format!("expected a variable count after {q:?}, found {other:?}"))),
        }
    }

    fn clause(&mut self, op: &Tok) -> Result<Clause, CliError> {
        self.expect(Tok::Open)?;
        let mut lits = Vec::new();
        loop {
            match self.next() {
                Some(Tok::Lit(l)) => lits.push(l),
                other => return Err(syntax(format!("expected a literal, found {other:?}"))),
            }
            match self.next() {
                Some(Tok::Close) => break,
                Some(t) if &t == op => {}
                other => return Err(syntax(format!("expected {op:?} or ')', found {other:?}"))),
            }
        }
        if lits.len() != 3 {
            return Err(syntax(format!("clauses have exactly three literals, found {}", lits.len())));
        }
        Ok([lits[0], lits[1], lits[2]])
    }

    fn clauses(&mut self, inner: Tok, outer: Tok) -> Result<Vec<Clause>, CliError> {
        self.expect(Tok::Colon)?;
        let mut out = vec![self.clause(&inner)?];
        while self.pos < self.toks.len() {
            self.expect(outer.clone())?;
            out.push(self.clause(&inner)?);
        }
        Ok(out)
    }
}

/// `exists p forall q : (l & l & l) | …`
pub fn parse_qbf2(text: &str) -> Result<Qbf2, CliError> {
    let mut p = P { toks: lex(text)?, pos: 0 };
    let ex = p.block("exists")?;
    let fa = p.block("forall")?;
    let clauses = p.clauses(Tok::And, Tok::Or)?;
    let f = Qbf2 { p: ex, q: fa, clauses };
    f.validate()?;
    Ok(f)
}

/// `exists p forall q exists t : (l | l | l) & …`
pub fn parse_qbf3(text: &str) -> Result<Qbf3, CliError> {
    let mut p = P { toks: lex(text)?, pos: 0 };
    let ex = p.block("exists")?;
    let fa = p.block("forall")?;
    let ex2 = p.block("exists")?;
    let clauses = p.clauses(Tok::Or, Tok::And)?;
    let f = Qbf3 {
        p: ex,
        q: fa,
        t: ex2,
        clauses,
    };
    f.validate()?;
    Ok(f)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AutomataFile {
    automata: Vec<DfaFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DfaFile {
    states: Vec<String>,
    alphabet: Vec<String>,
    init: String,
    accept: String,
    delta: Entries<Entries<String>>,
}

fn find(names: &[String], n: &str) -> Result<usize, CliError> {
    names
        .iter()
        .position(|x| x == n)
        .ok_or_else(|| CliError::Core(mpcore::Error::Invalid(format!("unknown automaton state or symbol {n:?}"))))
}

/// `{"automata": [{"states", "alphabet", "init", "accept", "delta": {q: {a: q'}}}]}`
pub fn parse_automata(text: &str) -> Result<Vec<Dfa>, CliError> {
    let f: AutomataFile = serde_json::from_str(text)?;
    f.automata
        .into_iter()
        .map(|d| {
            let n = d.states.len();
            let mut delta = vec![vec![usize::MAX; d.alphabet.len()]; n];
            for (q, row) in d.delta.0 {
                let k = find(&d.states, &q)?;
                for (a, t) in row.0 {
                    delta[k][find(&d.alphabet, &a)?] = find(&d.states, &t)?;
                }
            }
            if delta.iter().flatten().any(|&t| t == usize::MAX) {
                return Err(CliError::Core(mpcore::Error::Invalid(
                    "automaton transition function must be total".into(),
                )));
            }
            let dfa = Dfa {
                init: find(&d.states, &d.init)?,
                accept: find(&d.states, &d.accept)?,
                states: d.states,
                alphabet: d.alphabet,
                delta,
            };
            dfa.validate()?;
            Ok(dfa)
        })
        .collect()
}

pub fn automata_to_json(automata: &[Dfa]) -> serde_json::Value {
    let list: Vec<serde_json::Value> = automata
        .iter()
        .map(|d| {
            let mut delta = serde_json::Map::new();
            for (k, q) in d.states.iter().enumerate() {
                let row: serde_json::Map<String, serde_json::Value> = d
                    .alphabet
                    .iter()
                    .zip(&d.delta[k])
                    .map(|(a, &t)| (a.clone(), d.states[t].clone().into()))
                    .collect();
                delta.insert(q.clone(), row.into());
            }
            serde_json::json!({
                "states": d.states,
                "alphabet": d.alphabet,
                "init": d.states[d.init],
                "accept": d.states[d.accept],
                "delta": delta,
            })
        })
        .collect();
    serde_json::json!({ "automata": list })
}
