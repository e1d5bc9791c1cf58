//! Text fixtures bundling named terms, sequences and a predicate.
//!
//! ```text
//! -- comment
//! term U = \f. f #2 p
//! seq xs {
//!   default: I
//!   5: p; 6: q0
//! }
//! f { support: [3, 7] }
//! ```
//!
//! A statement starts at a line beginning with `term`, `seq` or `f {`; term
//! bodies may continue on the following lines. Bodies and sequence values are
//! λ-syntax resolved against the builtins and every earlier `term`. A
//! sequence whose values are all closed is also registered as the oracle
//! `@name` for later statements.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use thiserror::Error;

use crate::compiler::{builtin_env, compile_str, Env};
use crate::oracle_lab::Predicate;
use crate::registry::{sequence, SeqRegistry, Sequence};
use crate::term::Term;

/// A sequence given by finitely many entries and a default.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqTable {
    pub entries: BTreeMap<usize, Term>,
    pub default: Term,
}

impl SeqTable {
    pub fn constant(default: Term) -> SeqTable {
        SeqTable { entries: BTreeMap::new(), default }
    }

    pub fn get(&self, i: usize) -> Term {
        self.entries.get(&i).unwrap_or(&self.default).clone()
    }

    pub fn sequence(&self) -> Sequence {
        let table = self.clone();
        sequence(move |i| table.get(i))
    }

    fn is_closed(&self) -> bool {
        self.default.is_closed() && self.entries.values().all(Term::is_closed)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Fixture {
    pub terms: Vec<(String, Term)>,
    pub seqs: Vec<(String, SeqTable)>,
    pub predicate: Option<Predicate>,
}

impl Fixture {
    pub fn term(&self, name: &str) -> Option<&Term> {
        self.terms.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn seq(&self, name: &str) -> Option<&SeqTable> {
        self.seqs.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct FixtureError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> FixtureError {
    FixtureError { line, message: message.into() }
}

struct Stmt {
    line: usize,
    text: String,
}

fn starts_statement(line: &str) -> bool {
    line.starts_with("term ") || line.starts_with("seq ") || line.strip_prefix('f').is_some_and(|r| r.trim_start().starts_with('{'))
}

fn statements(src: &str) -> Result<Vec<Stmt>, FixtureError> {
    let mut out: Vec<Stmt> = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = raw.split("--").next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        if starts_statement(line.trim_start()) {
            out.push(Stmt { line: i + 1, text: line.trim().to_string() });
        } else if let Some(last) = out.last_mut() {
            last.text.push('\n');
            last.text.push_str(line.trim());
        } else {
            return Err(err(i + 1, "expected 'term', 'seq' or 'f'"));
        }
    }
    Ok(out)
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Content between the first `{` and the last `}`, and the text before it.
fn braced(stmt: &Stmt) -> Result<(&str, &str), FixtureError> {
    let open = stmt.text.find('{').ok_or_else(|| err(stmt.line, "expected '{'"))?;
    let close = stmt.text.rfind('}').filter(|c| *c > open).ok_or_else(|| err(stmt.line, "expected '}'"))?;
    if !stmt.text[close + 1..].trim().is_empty() {
        return Err(err(stmt.line, "text after '}'"));
    }
    Ok((&stmt.text[..open], &stmt.text[open + 1..close]))
}

fn entries(body: &str) -> impl Iterator<Item = &str> {
    body.split([';', '\n']).map(str::trim).filter(|e| !e.is_empty())
}

fn compile(src: &str, env: &Env<'_>, line: usize) -> Result<Term, FixtureError> {
    compile_str(src, env).map_err(|e| err(line, e.to_string()))
}

fn parse_support(stmt: &Stmt, body: &str) -> Result<Predicate, FixtureError> {
    let mut support = None;
    for entry in entries(body) {
        let (key, value) = entry.split_once(':').ok_or_else(|| err(stmt.line, format!("expected 'key: value', found '{entry}'")))?;
        if key.trim() != "support" {
            return Err(err(stmt.line, format!("unknown key '{}' in f block", key.trim())));
        }
        let list = value.trim().strip_prefix('[').and_then(|v| v.strip_suffix(']')).ok_or_else(|| err(stmt.line, "support must be a list [n, ...]"))?;
        let set: Result<BTreeSet<usize>, _> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::parse).collect();
        support = Some(set.map_err(|_| err(stmt.line, "support entries must be naturals"))?);
    }
    support.map(Predicate::Support).ok_or_else(|| err(stmt.line, "f block needs 'support'"))
}

/// Parses a fixture, compiling with q-variables `q0..qn`.
pub fn parse_fixture(src: &str, registry: &SeqRegistry, n: usize) -> Result<Fixture, FixtureError> {
    let mut env = builtin_env().with_registry(registry).with_n(n);
    let mut fx = Fixture::default();
    for stmt in statements(src)? {
        if let Some(rest) = stmt.text.strip_prefix("term ") {
            let (name, body) = rest.split_once('=').ok_or_else(|| err(stmt.line, "expected 'term NAME = BODY'"))?;
            let name = name.trim();
            if !is_ident(name) {
                return Err(err(stmt.line, format!("bad term name '{name}'")));
            }
            if fx.term(name).is_some() {
                return Err(err(stmt.line, format!("term '{name}' defined twice")));
            }
            let t = compile(body, &env, stmt.line)?;
            env = env.define(name, t.clone());
            fx.terms.push((name.to_string(), t));
        } else if let Some(rest) = stmt.text.strip_prefix("seq ") {
            let inner = Stmt { line: stmt.line, text: rest.to_string() };
            let (head, body) = braced(&inner)?;
            let name = head.trim();
            if !is_ident(name) {
                return Err(err(stmt.line, format!("bad sequence name '{name}'")));
            }
            let mut table = BTreeMap::new();
            let mut default = None;
            for entry in entries(body) {
                let (key, value) = entry.split_once(':').ok_or_else(|| err(stmt.line, format!("expected 'index: term', found '{entry}'")))?;
                let value = compile(value, &env, stmt.line)?;
                match key.trim() {
                    "default" => default = Some(value),
                    k => {
                        let i: usize = k.parse().map_err(|_| err(stmt.line, format!("bad index '{k}'")))?;
                        table.insert(i, value);
                    }
                }
            }
            let default = default.ok_or_else(|| err(stmt.line, format!("sequence '{name}' has no default")))?;
            let seq = SeqTable { entries: table, default };
            if seq.is_closed() {
                registry.register_named(name, seq.sequence()).map_err(|e| err(stmt.line, e.to_string()))?;
            }
            fx.seqs.push((name.to_string(), seq));
        } else {
            let (_, body) = braced(&stmt)?;
            if fx.predicate.is_some() {
                return Err(err(stmt.line, "f defined twice"));
            }
            fx.predicate = Some(parse_support(&stmt, body)?);
        }
    }
    Ok(fx)
}

pub fn load_fixture(path: &Path, registry: &SeqRegistry, n: usize) -> Result<Fixture, FixtureError> {
    let src = std::fs::read_to_string(path).map_err(|e| err(0, format!("{}: {e}", path.display())))?;
    parse_fixture(&src, registry, n)
}

/// Fixtures shipped with the crate, by name.
pub mod bundled {
    pub const THEOREM5: [(&str, &str); 6] = [
        ("single-call", include_str!("../fixtures/theorem5/single_call.fix")),
        ("no-call", include_str!("../fixtures/theorem5/no_call.fix")),
        ("nested-calls", include_str!("../fixtures/theorem5/nested_calls.fix")),
        ("iterated-call", include_str!("../fixtures/theorem5/iterated_call.fix")),
        ("cc-call", include_str!("../fixtures/theorem5/cc_call.fix")),
        ("late-p", include_str!("../fixtures/theorem5/late_p.fix")),
    ];

    pub const WITNESS: [(&str, &str); 2] = [
        ("indicator3", include_str!("../fixtures/witness/indicator3.fix")),
        ("indicator3-cc", include_str!("../fixtures/witness/indicator3_cc.fix")),
    ];

    /// One closed term per line.
    pub const PL_CORPUS: &str = include_str!("../fixtures/pl_corpus.txt");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{mk_numeral, Const, DEFAULT_N};

    fn parse(src: &str) -> Result<Fixture, FixtureError> {
        parse_fixture(src, &SeqRegistry::new(), DEFAULT_N)
    }

    #[test]
    fn full_fixture() {
        let src = "-- demo\nterm id = \\x. x\nterm U = \\f.\n  f #2 p\nseq xs {\n  default: id\n  5: p; 6: #3\n}\nf { support: [3, 7] }\n";
        let fx = parse(src).unwrap();
        assert_eq!(fx.term("id"), Some(&Term::constant(Const::I)));
        assert!(fx.term("U").is_some());
        let xs = fx.seq("xs").unwrap();
        assert_eq!(xs.get(0), Term::constant(Const::I));
        assert_eq!(xs.get(5), Term::p());
        assert_eq!(xs.get(6), mk_numeral(3));
        let f = fx.predicate.unwrap();
        assert!(f.holds(3) && f.holds(7) && !f.holds(4));
    }

    #[test]
    fn closed_sequences_become_oracles() {
        let reg = SeqRegistry::new();
        let fx = parse_fixture("seq ys { default: K }\nterm t = \\x. @ys x", &reg, DEFAULT_N).unwrap();
        assert!(reg.lookup("ys").is_some());
        assert!(fx.term("t").unwrap().oracles().next().is_some());
        parse_fixture("seq zs { default: p }", &reg, DEFAULT_N).unwrap();
        assert!(reg.lookup("zs").is_none());
    }

    #[test]
    fn errors_carry_lines() {
        assert_eq!(parse("term x = \\y. y\n\nseq s { 1: I }").unwrap_err().line, 3);
        assert_eq!(parse("term x = nope").unwrap_err().line, 1);
        assert_eq!(parse("\\x. x").unwrap_err().line, 1);
        assert_eq!(parse("f { support: [a] }").unwrap_err().line, 1);
        assert_eq!(parse("term a = I\nterm a = K").unwrap_err().line, 2);
    }

    #[test]
    fn bundled_fixtures_parse() {
        for (name, src) in bundled::THEOREM5 {
            let fx = parse(src).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(fx.term("U").is_some() && fx.seq("xs").is_some(), "{name}");
        }
        for (name, src) in bundled::WITNESS {
            let fx = parse(src).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(fx.term("theta").is_some() && fx.predicate.is_some(), "{name}");
        }
    }
}
