//! Bracket abstraction into the `B, C, I, K, W` basis.
//!
//! ```text
//! T[x, x]     = I
//! T[x, M]     = K M                 x ∉ M
//! T[x, M x]   = M                   x ∉ M, η enabled
//! T[x, M N]   = B M T[x, N]         x ∉ M, x ∈ N
//! T[x, M N]   = C T[x, M] N         x ∈ M, x ∉ N
//! T[x, M N]   = S* T[x, M] T[x, N]  x ∈ M, x ∈ N
//! ```
//!
//! with `S* = B(B(BW)C)(BB)`, so that `S* a b c ≻ a c (b c)`.

use std::collections::HashMap;
use std::sync::LazyLock;

use thiserror::Error;

use crate::lexer::{q_index, Pos};
use crate::registry::SeqRegistry;
use crate::term::{Const, Term, DEFAULT_N};

use super::lambda::LambdaTerm;

pub static S_STAR: LazyLock<Term> = LazyLock::new(|| {
    use Const::*;
    let c = Term::constant;
    let bbw_c = Term::apps(c(B), [Term::app(c(B), c(W)), c(C)]);
    Term::apps(c(B), [bbw_c, Term::app(c(B), c(B))])
});

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CompileError {
    #[error("{pos}: unbound identifier '{name}'")]
    Unbound { name: String, pos: Pos },
    #[error("{pos}: unknown oracle '@{name}'")]
    UnknownOracle { name: String, pos: Pos },
    #[error("unknown builtin '{0}'")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Syntax(#[from] crate::lexer::SyntaxError),
}

/// Free-name resolution for compilation. Names not bound by a λ resolve, in
/// order, to a definition in `defs`, to the machine variable `p`, or to `qᵢ`
/// with `i ≤ n`.
#[derive(Clone, Debug)]
pub struct Env<'a> {
    pub defs: HashMap<String, Term>,
    pub registry: Option<&'a SeqRegistry>,
    pub n: usize,
    pub eta: bool,
}

impl Default for Env<'_> {
    fn default() -> Self {
        Env { defs: HashMap::new(), registry: None, n: DEFAULT_N, eta: false }
    }
}

impl<'a> Env<'a> {
    pub fn new() -> Env<'a> {
        Env::default()
    }

    pub fn with_registry(mut self, registry: &'a SeqRegistry) -> Env<'a> {
        self.registry = Some(registry);
        self
    }

    pub fn with_eta(mut self, eta: bool) -> Env<'a> {
        self.eta = eta;
        self
    }

    pub fn with_n(mut self, n: usize) -> Env<'a> {
        self.n = n;
        self
    }

    pub fn define(mut self, name: &str, t: Term) -> Env<'a> {
        self.defs.insert(name.to_string(), t);
        self
    }

    fn resolve(&self, name: &str, pos: Pos) -> Result<Term, CompileError> {
        if let Some(t) = self.defs.get(name) {
            return Ok(t.clone());
        }
        if name == "p" {
            return Ok(Term::p());
        }
        match q_index(name) {
            Some(i) if i <= self.n => Ok(Term::q(i)),
            _ => Err(CompileError::Unbound { name: name.to_string(), pos }),
        }
    }
}

/// Combinator expression with named holes for bound variables.
#[derive(Clone, Debug, PartialEq)]
enum Cx {
    Name(String),
    Atom(Term),
    App(Box<Cx>, Box<Cx>),
}

impl Cx {
    fn app(f: Cx, a: Cx) -> Cx {
        Cx::App(Box::new(f), Box::new(a))
    }

    fn c(k: Const) -> Cx {
        Cx::Atom(Term::constant(k))
    }

    fn mentions(&self, x: &str) -> bool {
        match self {
            Cx::Name(y) => x == y,
            Cx::Atom(_) => false,
            Cx::App(f, a) => f.mentions(x) || a.mentions(x),
        }
    }

    fn into_term(self) -> Term {
        match self {
            Cx::Atom(t) => t,
            Cx::App(f, a) => Term::app(f.into_term(), a.into_term()),
            Cx::Name(x) => unreachable!("bound name {x} survived abstraction"),
        }
    }
}

fn abstract_name(x: &str, m: Cx, eta: bool) -> Cx {
    if !m.mentions(x) {
        return Cx::app(Cx::c(Const::K), m);
    }
    match m {
        Cx::Name(_) => Cx::c(Const::I),
        Cx::App(f, a) => match (f.mentions(x), a.mentions(x)) {
            (false, _) if eta && *a == Cx::Name(x.to_string()) => *f,
            (false, true) => Cx::app(Cx::app(Cx::c(Const::B), *f), abstract_name(x, *a, eta)),
            (true, false) => Cx::app(Cx::app(Cx::c(Const::C), abstract_name(x, *f, eta)), *a),
            (true, true) => {
                let (tf, ta) = (abstract_name(x, *f, eta), abstract_name(x, *a, eta));
                Cx::app(Cx::app(Cx::Atom(S_STAR.clone()), tf), ta)
            }
            (false, false) => unreachable!(),
        },
        Cx::Atom(_) => unreachable!(),
    }
}

fn translate(t: &LambdaTerm, bound: &mut Vec<String>, env: &Env<'_>) -> Result<Cx, CompileError> {
    Ok(match t {
        LambdaTerm::Var { name, pos } => {
            if bound.iter().any(|b| b == name) {
                Cx::Name(name.clone())
            } else {
                Cx::Atom(env.resolve(name, *pos)?)
            }
        }
        LambdaTerm::Const(c) => Cx::Atom(c.clone()),
        LambdaTerm::Oracle { name, pos } => {
            let handle = env
                .registry
                .and_then(|r| r.lookup(name))
                .ok_or_else(|| CompileError::UnknownOracle { name: name.clone(), pos: *pos })?;
            Cx::Atom(Term::oracle(handle))
        }
        LambdaTerm::App(f, a) => Cx::app(translate(f, bound, env)?, translate(a, bound, env)?),
        LambdaTerm::Lam { binder, body, .. } => {
            bound.push(binder.clone());
            let body = translate(body, bound, env);
            bound.pop();
            abstract_name(binder, body?, env.eta)
        }
    })
}

/// Eliminates every λ of `t`.
pub fn bracket_abstract(t: &LambdaTerm, env: &Env<'_>) -> Result<Term, CompileError> {
    Ok(translate(t, &mut Vec::new(), env)?.into_term())
}

/// Parses and compiles λ-syntax.
pub fn compile_str(src: &str, env: &Env<'_>) -> Result<Term, CompileError> {
    bracket_abstract(&super::lambda::parse(src)?, env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{Machine, Status, Stuck, TraceMode};
    use crate::process::Process;
    use crate::syntax::parse_term;

    fn compile(src: &str) -> Term {
        compile_str(src, &Env::new()).unwrap()
    }

    #[test]
    fn identity_and_constant() {
        assert_eq!(compile(r"\x.x"), Term::constant(Const::I));
        assert_eq!(compile(r"\x.q0"), parse_term("K q0", None).unwrap());
        assert_eq!(compile(r"\x.\y.y"), parse_term("K I", None).unwrap());
    }

    #[test]
    fn s_star_duplicates() {
        let reg = SeqRegistry::new();
        let m = Machine::new(&reg);
        let p = Process::with_args(S_STAR.clone(), [Term::q(0), Term::q(1), Term::q(2)]);
        let out = m.run(&p, 100, TraceMode::Off).unwrap();
        let expected = Process::with_args(Term::q(0), [Term::q(2), Term::app(Term::q(1), Term::q(2))]);
        assert_eq!(out.final_process, expected);
        assert_eq!(out.status, Status::Halted(Stuck::HeadIsQ(0)));
    }

    #[test]
    fn eta_rule_is_optional() {
        assert_eq!(compile(r"\x. q1 x"), parse_term("B q1 I", None).unwrap());
        let env = Env::new().with_eta(true);
        assert_eq!(compile_str(r"\x. q1 x", &env).unwrap(), Term::q(1));
    }

    #[test]
    fn machine_variables_can_be_bound() {
        let t = compile(r"\p q0. q0 p");
        assert!(t.is_closed());
        assert_eq!(t.classify(), crate::term::Class::Pl0);
    }

    #[test]
    fn shadowing_uses_innermost_binder() {
        assert_eq!(compile(r"\x.\x.x"), compile(r"\y.\x.x"));
    }

    #[test]
    fn unbound_names_report_position() {
        let err = compile_str("\\x.\n x foo", &Env::new()).unwrap_err();
        assert_eq!(err, CompileError::Unbound { name: "foo".into(), pos: Pos { line: 2, col: 4 } });
        assert!(matches!(compile_str(r"\x. q9", &Env::new()), Err(CompileError::Unbound { .. })));
        assert!(matches!(compile_str("@xs", &Env::new()), Err(CompileError::UnknownOracle { .. })));
    }

    #[test]
    fn oracles_resolve_through_registry() {
        let reg = SeqRegistry::new();
        let h = reg.register_named("xs", crate::registry::sequence(|_| Term::constant(Const::I))).unwrap();
        let env = Env::new().with_registry(&reg);
        assert_eq!(compile_str(r"\x. @xs x", &env).unwrap(), Term::apps(Term::constant(Const::B), [Term::oracle(h), Term::constant(Const::I)]));
    }
}
