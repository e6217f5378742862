//! GR(1) specifications `GF ψ_1 & … & GF ψ_m -> GF θ_1 & … & GF θ_n` over
//! state labels.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::game::{Game, Lasso};

/// A Boolean combination of atomic propositions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoolCombo {
    Const(bool),
    Atom(String),
    Not(Box<BoolCombo>),
    And(Box<BoolCombo>, Box<BoolCombo>),
    Or(Box<BoolCombo>, Box<BoolCombo>),
}

impl BoolCombo {
    pub fn eval(&self, label: &BTreeSet<String>) -> bool {
        match self {
            BoolCombo::Const(b) => *b,
            BoolCombo::Atom(a) => label.contains(a),
            BoolCombo::Not(b) => !b.eval(label),
            BoolCombo::And(a, b) => a.eval(label) && b.eval(label),
            BoolCombo::Or(a, b) => a.eval(label) || b.eval(label),
        }
    }

    pub fn atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            BoolCombo::Const(_) => {}
            BoolCombo::Atom(a) => {
                out.insert(a.clone());
            }
            BoolCombo::Not(b) => b.atoms(out),
            BoolCombo::And(a, b) | BoolCombo::Or(a, b) => {
                a.atoms(out);
                b.atoms(out);
            }
        }
    }
}

impl fmt::Display for BoolCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoolCombo::Const(b) => write!(f, "{b}"),
            BoolCombo::Atom(a) => write!(f, "{a}"),
            BoolCombo::Not(b) => write!(f, "!{b}"),
            BoolCombo::And(a, b) => write!(f, "({a} & {b})"),
            BoolCombo::Or(a, b) => write!(f, "({a} | {b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gr1Spec {
    pub premises: Vec<BoolCombo>,
    pub guarantees: Vec<BoolCombo>,
}

impl fmt::Display for Gr1Spec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |xs: &[BoolCombo]| -> String {
            if xs.is_empty() {
                return "true".to_string();
            }
            let parts: Vec<String> = xs.iter().map(|b| format!("GF {b}")).collect();
            parts.join(" & ")
        };
        write!(f, "{} -> {}", side(&self.premises), side(&self.guarantees))
    }
}

impl Gr1Spec {
    /// `true -> true`.
    pub fn trivial() -> Self {
        Gr1Spec {
            premises: Vec::new(),
            guarantees: Vec::new(),
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for b in self.premises.iter().chain(&self.guarantees) {
            b.atoms(&mut out);
        }
        out
    }

    /// Fails when the spec mentions a proposition the game never uses.
    pub fn check_against(&self, g: &Game) -> Result<()> {
        let known = g.propositions();
        if let Some(a) = self.atoms().iter().find(|a| !known.contains(*a)) {
            return Err(Error::Invalid(format!("unknown proposition {a:?}")));
        }
        Ok(())
    }

    /// Does the lasso satisfy the spec? Only the cycle matters.
    pub fn holds_on(&self, g: &Game, lasso: &Lasso) -> bool {
        let visits = |b: &BoolCombo| lasso.cycle.iter().any(|&s| b.eval(g.labels(s)));
        !self.premises.iter().all(visits) || self.guarantees.iter().all(visits)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Gf,
    True,
    False,
    Atom(String),
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
}

fn syntax(pos: usize, msg: &str) -> Error {
    Error::Parse(format!("GR(1) syntax error at position {pos}: {msg}"))
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'!' => {
                out.push((i, Tok::Not));
                i += 1;
            }
            b'&' => {
                out.push((i, Tok::And));
                i += if bytes.get(i + 1) == Some(&b'&') { 2 } else { 1 };
            }
            b'|' => {
                out.push((i, Tok::Or));
                i += if bytes.get(i + 1) == Some(&b'|') { 2 } else { 1 };
            }
            b'(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push((i, Tok::Arrow));
                i += 2;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &text[start..i];
                let tok = match word {
                    "GF" => Tok::Gf,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "G" | "F" | "X" | "U" | "R" | "W" | "FG" => {
                        return Err(syntax(
                            start,
                            "only GR(1) formulas are supported; general LTL operators are out of scope",
                        ))
                    }
                    _ => Tok::Atom(word.to_string()),
                };
                out.push((start, tok));
            }
            _ => return Err(syntax(i, &format!("unexpected character {:?}", c as char))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(syntax(self.here(), &format!("expected {what}")))
        }
    }

    /// `true` or `GF b (& GF b)*`.
    fn side(&mut self) -> Result<Vec<BoolCombo>> {
        if self.peek() == Some(&Tok::True) && self.peek_at(1) != Some(&Tok::And) {
            self.pos += 1;
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        loop {
            self.expect(Tok::Gf, "GF")?;
            out.push(self.or_expr()?);
            if self.peek() == Some(&Tok::And) && self.peek_at(1) == Some(&Tok::Gf) {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(out)
    }

    fn or_expr(&mut self) -> Result<BoolCombo> {
        let mut lhs = self.and_expr()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            let rhs = self.and_expr()?;
            lhs = BoolCombo::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<BoolCombo> {
        let mut lhs = self.unary()?;
        // `& GF` separates conjuncts of a side rather than continuing `b`.
        while self.peek() == Some(&Tok::And) && self.peek_at(1) != Some(&Tok::Gf) {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = BoolCombo::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<BoolCombo> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(BoolCombo::Not(Box::new(self.unary()?)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.or_expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Some(Tok::True) => {
                self.pos += 1;
                Ok(BoolCombo::Const(true))
            }
            Some(Tok::False) => {
                self.pos += 1;
                Ok(BoolCombo::Const(false))
            }
            Some(Tok::Atom(a)) => {
                self.pos += 1;
                Ok(BoolCombo::Atom(a))
            }
            Some(Tok::Gf) => Err(syntax(at, "nested GF is not GR(1)")),
            _ => Err(syntax(at, "expected a proposition, '!', '(' or a constant")),
        }
    }
}

pub fn parse_gr1(text: &str) -> Result<Gr1Spec> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        end: text.len(),
    };
    let premises = p.side()?;
    p.expect(Tok::Arrow, "'->'")?;
    let guarantees = p.side()?;
    if p.pos != p.toks.len() {
        return Err(syntax(p.here(), "trailing input"));
    }
    Ok(Gr1Spec {
        premises,
        guarantees,
    })
}

/// States whose label satisfies `b`.
pub fn sat_states(g: &Game, b: &BoolCombo) -> Result<BTreeSet<usize>> {
    let known = g.propositions();
    let mut atoms = BTreeSet::new();
    b.atoms(&mut atoms);
    if let Some(a) = atoms.iter().find(|a| !known.contains(*a)) {
        return Err(Error::Invalid(format!("unknown proposition {a:?}")));
    }
    Ok((0..g.num_states()).filter(|&s| b.eval(g.labels(s))).collect())
}

/// One way of violating a GR(1) spec: the cycle visits every `visit` set
/// and avoids `avoid`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bundle {
    pub visit: Vec<BoolCombo>,
    pub avoid: BoolCombo,
}

/// The negation as a disjunction of bundles, one per guarantee.
pub fn negate_gr1(spec: &Gr1Spec) -> Vec<Bundle> {
    spec.guarantees
        .iter()
        .map(|theta| Bundle {
            visit: spec.premises.clone(),
            avoid: theta.clone(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sides_and_constants() {
        let s = parse_gr1("GF l & GF r -> GF l").unwrap();
        assert_eq!((s.premises.len(), s.guarantees.len()), (2, 1));
        let s = parse_gr1("true -> GF l & GF r").unwrap();
        assert_eq!((s.premises.len(), s.guarantees.len()), (0, 2));
        let s = parse_gr1("GF (a & !b) -> true").unwrap();
        assert_eq!((s.premises.len(), s.guarantees.len()), (1, 0));
        assert_eq!(s.to_string(), "GF (a & !b) -> true");
        let s = parse_gr1("GF a & b -> GF a | b & c").unwrap();
        assert_eq!(s.premises.len(), 1);
        assert_eq!(s.guarantees[0].to_string(), "(a | (b & c))");
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_gr1("GF l -> ").unwrap_err().to_string();
        assert!(e.contains("position 8"), "{e}");
        let e = parse_gr1("G l -> true").unwrap_err().to_string();
        assert!(e.contains("position 0") && e.contains("LTL"), "{e}");
        assert!(parse_gr1("GF l -> GF r )").is_err());
        assert!(parse_gr1("GF GF l -> true").is_err());
    }

    #[test]
    fn negation_has_one_bundle_per_guarantee() {
        let s = parse_gr1("true -> GF a & GF b").unwrap();
        assert_eq!(negate_gr1(&s).len(), 2);
        let s = parse_gr1("GF p -> GF q").unwrap();
        let n = negate_gr1(&s);
        assert_eq!(n.len(), 1);
        assert_eq!(n[0].visit.len(), 1);
        assert!(negate_gr1(&parse_gr1("GF p -> true").unwrap()).is_empty());
    }
}
