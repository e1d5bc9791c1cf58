//! Canonical text syntax for terms, stacks and processes.
//!
//! ```text
//! term    := atom+                      -- left-associative application
//! atom    := B | C | I | K | W | cc | A | p | q<i> | #<n> | @<name> | ( term )
//! stack   := pi0 | term . stack
//! process := term * stack
//! ```
//!
//! Numerals print as `#n`; oracles print as `@name` when a registry is at
//! hand and as `@h<index>` otherwise.

use std::fmt::{self, Write};

use crate::lexer::{q_index, tokenize, Pos, SyntaxError, Tok};
use crate::process::{Process, Stack};
use crate::registry::SeqRegistry;
use crate::term::{decode_numeral, mk_numeral, Node, Term, DEFAULT_N};

#[derive(Clone, Copy, Default)]
pub struct Printer<'a> {
    pub registry: Option<&'a SeqRegistry>,
    pub show_tags: bool,
}

impl<'a> Printer<'a> {
    pub fn with_registry(registry: &'a SeqRegistry) -> Printer<'a> {
        Printer { registry: Some(registry), show_tags: false }
    }

    pub fn term(&self, t: &Term) -> String {
        let mut out = String::new();
        self.write_term(&mut out, t, false);
        out
    }

    pub fn stack(&self, s: &Stack) -> String {
        let mut out = String::new();
        for item in s.items() {
            self.write_term(&mut out, item, false);
            out.push_str(" . ");
        }
        out.push_str("pi0");
        out
    }

    pub fn process(&self, p: &Process) -> String {
        format!("{} * {}", self.term(&p.head), self.stack(&p.stack))
    }

    fn write_term(&self, out: &mut String, t: &Term, as_arg: bool) {
        if let Some(n) = decode_numeral(t) {
            let _ = write!(out, "#{n}");
            return;
        }
        match t.node() {
            Node::Const(c) => out.push_str(c.name()),
            Node::P(tag) => {
                out.push('p');
                if let (true, Some(tag)) = (self.show_tags, tag) {
                    let _ = write!(out, "{{{}}}", tag.0);
                }
            }
            Node::Q(i) => {
                let _ = write!(out, "q{i}");
            }
            Node::Oracle(h) => {
                let name = self.registry.and_then(|r| r.name(*h)).unwrap_or_else(|| format!("h{}", h.index()));
                let _ = write!(out, "@{name}");
            }
            Node::App(f, a) => {
                if as_arg {
                    out.push('(');
                }
                self.write_term(out, f, false);
                out.push(' ');
                self.write_term(out, a, true);
                if as_arg {
                    out.push(')');
                }
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Printer::default().term(self))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Printer { registry: None, show_tags: true }.term(self))
    }
}

impl fmt::Display for Stack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Printer::default().stack(self))
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Printer::default().process(self))
    }
}

/// Parser for the term syntax. `n` bounds the q-variable indices.
pub struct TermParser<'a> {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    registry: Option<&'a SeqRegistry>,
    n: usize,
}

impl<'a> TermParser<'a> {
    pub fn new(src: &str, registry: Option<&'a SeqRegistry>, n: usize) -> Result<TermParser<'a>, SyntaxError> {
        Ok(TermParser { toks: tokenize(src)?, at: 0, registry, n })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let tok = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        tok
    }

    fn expect(&mut self, want: Tok) -> Result<(), SyntaxError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(SyntaxError::new(self.pos(), format!("expected {want}, found {}", self.peek())))
        }
    }

    fn finish(&mut self) -> Result<(), SyntaxError> {
        self.expect(Tok::Eof)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::LParen | Tok::Const(_) | Tok::Numeral(_) | Tok::Oracle(_) => true,
            Tok::Ident(w) => w != "pi0",
            _ => false,
        }
    }

    fn atom(&mut self) -> Result<Term, SyntaxError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::LParen => {
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Const(c) => Ok(Term::constant(c)),
            Tok::Numeral(n) => Ok(mk_numeral(n)),
            Tok::Oracle(name) => {
                let handle = self
                    .registry
                    .and_then(|r| r.lookup(&name))
                    .ok_or_else(|| SyntaxError::new(pos, format!("unknown oracle @{name}")))?;
                Ok(Term::oracle(handle))
            }
            Tok::Ident(w) if w == "p" => Ok(Term::p()),
            Tok::Ident(w) => match q_index(&w) {
                Some(i) if i <= self.n => Ok(Term::q(i)),
                Some(i) => Err(SyntaxError::new(pos, format!("q{i} exceeds the configured bound q{}", self.n))),
                None => Err(SyntaxError::new(pos, format!("unknown name '{w}'"))),
            },
            other => Err(SyntaxError::new(pos, format!("expected a term, found {other}"))),
        }
    }

    /// Juxtaposition is left-nested. A chain whose head is parenthesized
    /// reads as `(t)u₁…uₙ`: once a parenthesized argument follows, the rest
    /// of the chain is that single argument, so `(k)(x)t` is `k (x t)`.
    fn term(&mut self) -> Result<Term, SyntaxError> {
        let grouped = *self.peek() == Tok::LParen;
        let mut t = self.atom()?;
        while self.starts_atom() {
            if grouped && *self.peek() == Tok::LParen {
                let rest = self.term()?;
                return Ok(Term::app(t, rest));
            }
            let arg = self.atom()?;
            t = Term::app(t, arg);
        }
        Ok(t)
    }

    fn stack(&mut self) -> Result<Stack, SyntaxError> {
        let mut items = Vec::new();
        loop {
            if let Tok::Ident(w) = self.peek() {
                if w == "pi0" {
                    self.bump();
                    return Ok(Stack::from_items(items));
                }
            }
            items.push(self.term()?);
            self.expect(Tok::Dot)?;
        }
    }

    pub fn parse_term(mut self) -> Result<Term, SyntaxError> {
        let t = self.term()?;
        self.finish()?;
        Ok(t)
    }

    pub fn parse_stack(mut self) -> Result<Stack, SyntaxError> {
        let s = self.stack()?;
        self.finish()?;
        Ok(s)
    }

    pub fn parse_process(mut self) -> Result<Process, SyntaxError> {
        let head = self.term()?;
        self.expect(Tok::Star)?;
        let stack = self.stack()?;
        self.finish()?;
        Ok(Process::new(head, stack))
    }
}

pub fn parse_term(src: &str, registry: Option<&SeqRegistry>) -> Result<Term, SyntaxError> {
    TermParser::new(src, registry, DEFAULT_N)?.parse_term()
}

pub fn parse_stack(src: &str, registry: Option<&SeqRegistry>) -> Result<Stack, SyntaxError> {
    TermParser::new(src, registry, DEFAULT_N)?.parse_stack()
}

pub fn parse_process(src: &str, registry: Option<&SeqRegistry>) -> Result<Process, SyntaxError> {
    TermParser::new(src, registry, DEFAULT_N)?.parse_process()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::sequence;
    use crate::term::{Const, OccTag, SIGMA};

    #[test]
    fn paper_style_parses() {
        let sigma = parse_term("(BW)(C(BBB))", None).unwrap();
        assert_eq!(sigma, *SIGMA);
        assert_eq!(parse_term("(K)I", None).unwrap(), mk_numeral(0));
    }

    #[test]
    fn prints_canonically() {
        assert_eq!(SIGMA.to_string(), "B W (C (B B B))");
        assert_eq!(mk_numeral(3).to_string(), "#3");
        assert_eq!(Term::app(Term::constant(Const::K), mk_numeral(0)).to_string(), "K #0");
        let p = parse_process("C * q0 . q1 . q2 . pi0", None).unwrap();
        assert_eq!(p.to_string(), "C * q0 . q1 . q2 . pi0");
        assert_eq!(parse_process("I * pi0", None).unwrap().stack.len(), 0);
    }

    #[test]
    fn oracle_names() {
        let reg = SeqRegistry::new();
        reg.register_named("xs", sequence(|_| Term::constant(Const::K))).unwrap();
        let t = parse_term("@xs #2", Some(&reg)).unwrap();
        assert_eq!(Printer::with_registry(&reg).term(&t), "@xs #2");
        assert_eq!(t.to_string(), "@h0 #2");
        assert_eq!(parse_term("@h0 #2", Some(&reg)).unwrap(), t);
        assert!(parse_term("@ys", Some(&reg)).is_err());
    }

    #[test]
    fn tags_hidden_unless_requested() {
        let t = Term::app(Term::tagged_p(OccTag(2)), Term::p());
        assert_eq!(t.to_string(), "p p");
        assert_eq!(format!("{t:?}"), "p{2} p");
    }

    #[test]
    fn syntax_errors() {
        assert!(parse_term("K (I", None).is_err());
        assert!(parse_term("q9", None).is_err());
        assert!(parse_process("K * q0", None).is_err());
        let err = parse_term("K foo", None).unwrap_err();
        assert_eq!(err.pos.col, 3);
    }
}
