//! Parser for the tree-definition text format.
//!
//! ```text
//! file      := header decl+ rootdecl
//! header    := "alphabet" ("alp"|"ang"|"angp") "i=" INT "k=" INT
//! decl      := "let" NAME "=" expr ";"
//! expr      := "pri" INT "(" expr ")" | "p1(" expr "," expr ")" | "p2(" expr "," expr ")"
//!            | "neg(" expr ")" | "p1x(" e "," e "," e ")" | "p2x(" e "," e "," e ")" | NAME
//! rootdecl  := "root" NAME [";"]
//! ```
//!
//! Each named equation becomes a node; anonymous subexpressions of `NAME` are
//! numbered `NAME.1`, `NAME.2`, ... in source order. Definitions unreachable
//! from the root are dropped with a warning rather than an error.

use super::{Alphabet, IndexPair, Letter, NodeId, RegularTree};
use crate::games::Player;
use crate::{Error, Result};
use std::collections::HashMap;

/// Result of parsing: the tree plus any warnings (unreachable definitions).
#[derive(Debug)]
pub struct ParseOutcome {
    pub tree: RegularTree,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u32),
    LParen,
    RParen,
    Comma,
    Semi,
    Eq,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

type Spanned = (Tok, usize, usize);

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Lexer<'a> {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.line, col: self.col, msg: msg.into() }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn tokens(mut self) -> Result<Vec<Spanned>> {
        let mut out = Vec::new();
        loop {
            while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
                self.bump();
            }
            // Line comments, handy in fixture files.
            if self.peek() == Some(b'#') {
                while !matches!(self.peek(), None | Some(b'\n')) {
                    self.bump();
                }
                continue;
            }
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek() else { break };
            let tok = match c {
                b'(' => {
                    self.bump();
                    Tok::LParen
                }
                b')' => {
                    self.bump();
                    Tok::RParen
                }
                b',' => {
                    self.bump();
                    Tok::Comma
                }
                b';' => {
                    self.bump();
                    Tok::Semi
                }
                b'=' => {
                    self.bump();
                    Tok::Eq
                }
                b'0'..=b'9' => {
                    let mut n: u64 = 0;
                    while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                        n = n * 10 + u64::from(self.bump().unwrap() - b'0');
                        if n > u64::from(u32::MAX) {
                            return Err(self.error("integer literal too large"));
                        }
                    }
                    Tok::Int(n as u32)
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    let mut s = String::new();
                    while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_' || c == b'.')
                    {
                        s.push(self.bump().unwrap() as char);
                    }
                    Tok::Ident(s)
                }
                other => return Err(self.error(format!("unexpected character `{}`", other as char))),
            };
            out.push((tok, line, col));
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<Spanned>,
    at: usize,
    alphabet: Alphabet,
    index: IndexPair,
    /// name -> node id (nodes created on first sight, filled in by decls)
    ids: HashMap<String, NodeId>,
    nodes: Vec<Option<(String, Letter, Vec<NodeId>)>>,
    /// where each name was first referenced, for error reporting
    first_ref: HashMap<String, (usize, usize)>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.at)
            .or_else(|| self.toks.last())
            .map(|&(_, l, c)| (l, c))
            .unwrap_or((1, 1))
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.here();
        Error::Parse { line, col, msg: msg.into() }
    }

    fn next(&mut self) -> Result<Tok> {
        let t = self.peek().cloned().ok_or_else(|| self.error("unexpected end of input"))?;
        self.at += 1;
        Ok(t)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        let got = self.next()?;
        if got == tok {
            Ok(())
        } else {
            self.at -= 1;
            Err(self.error(format!("expected {what}")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.next()? {
            Tok::Ident(s) => Ok(s),
            _ => {
                self.at -= 1;
                Err(self.error(format!("expected {what}")))
            }
        }
    }

    fn node_of(&mut self, name: &str) -> NodeId {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(None);
        self.ids.insert(name.to_string(), id);
        self.first_ref.entry(name.to_string()).or_insert_with(|| self.here());
        id
    }

    fn define(&mut self, name: &str, letter: Letter, kids: Vec<NodeId>) -> Result<NodeId> {
        let id = self.node_of(name);
        if self.nodes[id].is_some() {
            return Err(self.error(format!("duplicate definition of `{name}`")));
        }
        self.nodes[id] = Some((name.to_string(), letter, kids));
        Ok(id)
    }

    /// Parses an expression, creating anonymous nodes under `scope`.
    fn expr(&mut self, scope: &str, counter: &mut usize) -> Result<NodeId> {
        let word = self.ident("an expression or name")?;
        // A letter form only when directly applied to arguments.
        let applied = self.peek() == Some(&Tok::LParen);
        let letter = if applied { letter_of_word(&word) } else { None };
        let Some(letter) = letter else {
            return Ok(self.node_of(&word));
        };
        if !letter.legal_over(self.alphabet) {
            return Err(self.error(format!(
                "letter `{letter}` is not legal over alphabet {}",
                self.alphabet
            )));
        }
        if let Letter::Pri(j) = letter {
            if !self.index.contains(j) {
                return Err(self.error(format!(
                    "priority {} out of range [{},{}]",
                    j, self.index.i, self.index.k
                )));
            }
        }
        self.expect(Tok::LParen, "`(`")?;
        let mut kids = Vec::with_capacity(letter.arity());
        for a in 0..letter.arity() {
            if a > 0 {
                self.expect(Tok::Comma, "`,`")?;
            }
            kids.push(self.expr(scope, counter)?);
        }
        self.expect(Tok::RParen, "`)`")?;
        *counter += 1;
        let name = format!("{scope}.{counter}");
        self.define(&name, letter, kids)
    }
}

fn letter_of_word(word: &str) -> Option<Letter> {
    match word {
        "p1" => Some(Letter::Choice(Player::One)),
        "p2" => Some(Letter::Choice(Player::Two)),
        "neg" => Some(Letter::Neg),
        "p1x" => Some(Letter::ChoicePlus(Player::One)),
        "p2x" => Some(Letter::ChoicePlus(Player::Two)),
        _ => {
            let rest = word.strip_prefix("pri")?;
            if rest.is_empty() || !rest.bytes().all(|c| c.is_ascii_digit()) {
                return None;
            }
            rest.parse().ok().map(Letter::Pri)
        }
    }
}

/// Parses tree-definition source into a [`RegularTree`].
pub fn parse_tree_spec(text: &str) -> Result<ParseOutcome> {
    let toks = Lexer::new(text).tokens()?;
    let mut p = Parser {
        toks,
        at: 0,
        alphabet: Alphabet::Ang,
        index: IndexPair { i: 0, k: 1 },
        ids: HashMap::new(),
        nodes: Vec::new(),
        first_ref: HashMap::new(),
    };

    // header
    let kw = p.ident("`alphabet` header")?;
    if kw != "alphabet" {
        p.at -= 1;
        return Err(p.error("expected `alphabet` header"));
    }
    p.alphabet = match p.ident("alphabet name (alp|ang|angp)")?.as_str() {
        "alp" => Alphabet::Alp,
        "ang" => Alphabet::Ang,
        "angp" => Alphabet::AngPlus,
        _ => {
            p.at -= 1;
            return Err(p.error("alphabet must be one of alp, ang, angp"));
        }
    };
    let i = header_bound(&mut p, "i")?;
    let k = header_bound(&mut p, "k")?;
    p.index = IndexPair::new(i, k)?;

    // declarations
    let mut root: Option<NodeId> = None;
    loop {
        match p.peek() {
            Some(Tok::Ident(w)) if w == "let" => {
                p.at += 1;
                let name = p.ident("a name after `let`")?;
                if letter_of_word(&name).is_some() {
                    p.at -= 1;
                    return Err(p.error(format!("`{name}` is a letter, not a valid name")));
                }
                p.expect(Tok::Eq, "`=`")?;
                let mut counter = 0usize;
                // Parse the right-hand side, then bind `name` to it. A bare
                // alias (`let a = b;`) is rejected: nodes carry letters.
                let word_pos = p.at;
                let rhs_word = p.ident("an expression")?;
                let applied = p.peek() == Some(&Tok::LParen);
                if !applied || letter_of_word(&rhs_word).is_none() {
                    p.at = word_pos;
                    return Err(p.error("the right-hand side of `let` must be a letter application"));
                }
                p.at = word_pos;
                // Re-parse as the named node: temporarily parse expr pieces.
                let word = p.ident("a letter")?;
                let letter = letter_of_word(&word).unwrap();
                if !letter.legal_over(p.alphabet) {
                    return Err(p.error(format!(
                        "letter `{letter}` is not legal over alphabet {}",
                        p.alphabet
                    )));
                }
                if let Letter::Pri(j) = letter {
                    if !p.index.contains(j) {
                        return Err(p.error(format!(
                            "priority {} out of range [{},{}]",
                            j, p.index.i, p.index.k
                        )));
                    }
                }
                p.expect(Tok::LParen, "`(`")?;
                let mut kids = Vec::with_capacity(letter.arity());
                for a in 0..letter.arity() {
                    if a > 0 {
                        p.expect(Tok::Comma, "`,`")?;
                    }
                    let kid = p.expr(&name, &mut counter)?;
                    kids.push(kid);
                }
                p.expect(Tok::RParen, "`)`")?;
                p.expect(Tok::Semi, "`;`")?;
                p.define(&name, letter, kids)?;
            }
            Some(Tok::Ident(w)) if w == "root" => {
                p.at += 1;
                let name = p.ident("the root name")?;
                if !p.ids.contains_key(&name) {
                    return Err(Error::UndefinedName(name));
                }
                root = Some(p.ids[&name]);
                if p.peek() == Some(&Tok::Semi) {
                    p.at += 1;
                }
                if p.peek().is_some() {
                    return Err(p.error("trailing input after `root` declaration"));
                }
                break;
            }
            Some(_) => return Err(p.error("expected `let` or `root`")),
            None => return Err(p.error("missing `root` declaration")),
        }
    }
    let root = root.expect("loop exits only after root");

    // Resolve: every referenced name must be defined.
    let mut nodes = Vec::with_capacity(p.nodes.len());
    for (id, slot) in p.nodes.iter().enumerate() {
        match slot {
            Some(n) => nodes.push(n.clone()),
            None => {
                let name = p
                    .ids
                    .iter()
                    .find(|(_, &v)| v == id)
                    .map(|(k, _)| k.clone())
                    .unwrap_or_default();
                return Err(Error::UndefinedName(name));
            }
        }
    }

    let (tree, dropped) = RegularTree::trimmed(p.alphabet, p.index, root, nodes)?;
    let warnings = dropped
        .into_iter()
        .map(|n| format!("definition `{n}` is unreachable from the root and was dropped"))
        .collect();
    Ok(ParseOutcome { tree, warnings })
}

fn header_bound(p: &mut Parser, which: &str) -> Result<u32> {
    let name = p.ident(&format!("`{which}=`"))?;
    if name != which {
        p.at -= 1;
        return Err(p.error(format!("expected `{which}=`")));
    }
    p.expect(Tok::Eq, "`=`")?;
    match p.next()? {
        Tok::Int(n) => Ok(n),
        _ => {
            p.at -= 1;
            Err(p.error("expected an integer"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_equation_system() {
        let out = parse_tree_spec("alphabet ang i=0 k=2 let a = pri0(a); root a").unwrap();
        let t = out.tree;
        assert_eq!(t.len(), 1);
        assert_eq!(t.label(t.root()), Letter::Pri(0));
        assert_eq!(t.children(t.root()), &[t.root()]);
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn priority_out_of_range_rejected() {
        let err = parse_tree_spec("alphabet ang i=0 k=5 let a = pri9(a); root a").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "got {err:?}");
        assert!(err.to_string().contains("out of range"));
    }

    #[test]
    fn undefined_name_reported() {
        let err = parse_tree_spec("alphabet ang i=0 k=2 let a = pri0(b); root a").unwrap_err();
        assert!(matches!(err, Error::UndefinedName(n) if n == "b"));
    }

    #[test]
    fn unreachable_definitions_warn() {
        let out = parse_tree_spec(
            "alphabet ang i=0 k=2 let a = pri0(a); let b = pri1(b); root a",
        )
        .unwrap();
        assert_eq!(out.tree.len(), 1);
        assert_eq!(out.warnings.len(), 1);
        assert!(out.warnings[0].contains("`b`"));
    }

    #[test]
    fn anonymous_nodes_are_numbered() {
        let out =
            parse_tree_spec("alphabet ang i=0 k=2 let a = p1(pri0(a), neg(a)); root a").unwrap();
        let t = out.tree;
        assert_eq!(t.len(), 3);
        let names: Vec<&str> = t.nodes().map(|n| t.name(n)).collect();
        assert!(names.contains(&"a"));
        assert!(names.contains(&"a.1"));
        assert!(names.contains(&"a.2"));
    }

    #[test]
    fn ternary_letters_need_angp() {
        let err =
            parse_tree_spec("alphabet ang i=0 k=2 let a = p1x(a, a, a); root a").unwrap_err();
        assert!(err.to_string().contains("not legal"));
        assert!(parse_tree_spec("alphabet angp i=0 k=2 let a = p1x(a, a, a); root a").is_ok());
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = parse_tree_spec("alphabet ang i=0 k=2\nlet a = pri0(a)\nroot a").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
