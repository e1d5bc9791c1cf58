//! λ-terms and their parser.
//!
//! ```text
//! expr  := \x y ... . expr | app
//! app   := atom+ [ \x . expr ]
//! atom  := ident | B | C | I | K | W | cc | A | #n | @name | ( expr )
//! ```
//!
//! `^` and `λ` are accepted in place of `\`; `--` starts a comment.
//! Application is left-nested, except that a chain with a parenthesized head
//! follows the `(t)u` convention: a parenthesized argument after it takes the
//! rest of the chain, so `\k.\x.(k)(x)t` is `λkλx k (x t)`.

use crate::lexer::{tokenize, Pos, SyntaxError, Tok};
use crate::term::{mk_numeral, Node, Term};

#[derive(Clone, Debug)]
pub enum LambdaTerm {
    Lam { binder: String, body: Box<LambdaTerm>, pos: Pos },
    Var { name: String, pos: Pos },
    /// Closed machine term: constant, numeral literal or oracle constant.
    Const(Term),
    /// `@name`, resolved against the registry at compile time.
    Oracle { name: String, pos: Pos },
    App(Box<LambdaTerm>, Box<LambdaTerm>),
}

// positions are metadata
impl PartialEq for LambdaTerm {
    fn eq(&self, other: &LambdaTerm) -> bool {
        use LambdaTerm::*;
        match (self, other) {
            (Lam { binder: x, body: b, .. }, Lam { binder: y, body: c, .. }) => x == y && b == c,
            (Var { name: x, .. }, Var { name: y, .. }) => x == y,
            (Const(s), Const(t)) => s == t,
            (Oracle { name: x, .. }, Oracle { name: y, .. }) => x == y,
            (App(f, a), App(g, b)) => f == g && a == b,
            _ => false,
        }
    }
}

impl LambdaTerm {
    pub fn lam(binder: &str, body: LambdaTerm) -> LambdaTerm {
        LambdaTerm::Lam { binder: binder.to_string(), body: Box::new(body), pos: Pos::default() }
    }

    pub fn var(name: &str) -> LambdaTerm {
        LambdaTerm::Var { name: name.to_string(), pos: Pos::default() }
    }

    pub fn app(f: LambdaTerm, a: LambdaTerm) -> LambdaTerm {
        LambdaTerm::App(Box::new(f), Box::new(a))
    }

    pub fn apps<I: IntoIterator<Item = LambdaTerm>>(head: LambdaTerm, args: I) -> LambdaTerm {
        args.into_iter().fold(head, LambdaTerm::app)
    }

    /// `λ b1 λ b2 ... body`.
    pub fn lams(binders: &[&str], body: LambdaTerm) -> LambdaTerm {
        binders.iter().rev().fold(body, |acc, b| LambdaTerm::lam(b, acc))
    }

    /// Lifts a machine term, turning `p` and `qᵢ` into variables named `p`
    /// and `qi` so that they can be abstracted.
    pub fn from_term(t: &Term) -> LambdaTerm {
        match t.node() {
            Node::App(f, a) => LambdaTerm::app(LambdaTerm::from_term(f), LambdaTerm::from_term(a)),
            Node::P(_) => LambdaTerm::var("p"),
            Node::Q(i) => LambdaTerm::var(&format!("q{i}")),
            _ => LambdaTerm::Const(t.clone()),
        }
    }

    pub fn contains_lambda(&self) -> bool {
        match self {
            LambdaTerm::Lam { .. } => true,
            LambdaTerm::App(f, a) => f.contains_lambda() || a.contains_lambda(),
            _ => false,
        }
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
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

    fn error<T>(&self, what: &str) -> Result<T, SyntaxError> {
        Err(SyntaxError::new(self.pos(), format!("expected {what}, found {}", self.peek())))
    }

    fn expr(&mut self) -> Result<LambdaTerm, SyntaxError> {
        if *self.peek() == Tok::Lambda {
            return self.lambda();
        }
        let grouped = *self.peek() == Tok::LParen;
        let mut t = self.atom()?;
        loop {
            match self.peek() {
                Tok::Lambda => {
                    let body = self.lambda()?;
                    return Ok(LambdaTerm::app(t, body));
                }
                Tok::LParen if grouped => {
                    let rest = self.expr()?;
                    return Ok(LambdaTerm::app(t, rest));
                }
                Tok::LParen | Tok::Const(_) | Tok::Numeral(_) | Tok::Oracle(_) | Tok::Ident(_) => {
                    let a = self.atom()?;
                    t = LambdaTerm::app(t, a);
                }
                _ => return Ok(t),
            }
        }
    }

    fn lambda(&mut self) -> Result<LambdaTerm, SyntaxError> {
        self.bump();
        let mut binders = Vec::new();
        while let (Tok::Ident(name), pos) = (self.peek().clone(), self.pos()) {
            self.bump();
            binders.push((name, pos));
        }
        if binders.is_empty() {
            return self.error("a binder name");
        }
        if *self.peek() != Tok::Dot {
            return self.error("'.'");
        }
        self.bump();
        let body = self.expr()?;
        Ok(binders
            .into_iter()
            .rev()
            .fold(body, |acc, (binder, pos)| LambdaTerm::Lam { binder, body: Box::new(acc), pos }))
    }

    fn atom(&mut self) -> Result<LambdaTerm, SyntaxError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::LParen => {
                let t = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.error("')'");
                }
                self.bump();
                Ok(t)
            }
            Tok::Const(c) => Ok(LambdaTerm::Const(Term::constant(c))),
            Tok::Numeral(n) => Ok(LambdaTerm::Const(mk_numeral(n))),
            Tok::Oracle(name) => Ok(LambdaTerm::Oracle { name, pos }),
            Tok::Ident(name) => Ok(LambdaTerm::Var { name, pos }),
            other => Err(SyntaxError::new(pos, format!("expected a term, found {other}"))),
        }
    }
}

pub fn parse(src: &str) -> Result<LambdaTerm, SyntaxError> {
    let mut p = Parser { toks: tokenize(src)?, at: 0 };
    let t = p.expr()?;
    if *p.peek() != Tok::Eof {
        return p.error("end of input");
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Const;

    fn v(name: &str) -> LambdaTerm {
        LambdaTerm::var(name)
    }

    fn k(c: Const) -> LambdaTerm {
        LambdaTerm::Const(Term::constant(c))
    }

    #[test]
    fn church_zero() {
        assert_eq!(parse(r"\x.\y.y").unwrap(), LambdaTerm::lams(&["x", "y"], v("y")));
        assert_eq!(parse(r"^x y. y").unwrap(), LambdaTerm::lams(&["x", "y"], v("y")));
        assert_eq!(parse("λx.x").unwrap(), LambdaTerm::lam("x", v("x")));
    }

    #[test]
    fn application_is_left_nested() {
        assert_eq!(parse("(B W) C").unwrap(), LambdaTerm::apps(k(Const::B), [k(Const::W), k(Const::C)]));
    }

    #[test]
    fn ell_form() {
        let expected = LambdaTerm::lams(&["k", "x"], LambdaTerm::app(v("k"), LambdaTerm::app(v("x"), v("t"))));
        assert_eq!(parse(r"\k.\x.(k)(x)t").unwrap(), expected);
    }

    #[test]
    fn trailing_lambda_argument() {
        let t = parse(r"\u. cc \k. u #3 k").unwrap();
        let body = LambdaTerm::apps(v("u"), [LambdaTerm::Const(mk_numeral(3)), v("k")]);
        let expected = LambdaTerm::lam("u", LambdaTerm::app(k(Const::Cc), LambdaTerm::lam("k", body)));
        assert_eq!(t, expected);
    }

    #[test]
    fn positions_and_errors() {
        match parse("\\x.\n  foo").unwrap() {
            LambdaTerm::Lam { body, .. } => match *body {
                LambdaTerm::Var { pos, .. } => assert_eq!(pos, Pos { line: 2, col: 3 }),
                other => panic!("{other:?}"),
            },
            other => panic!("{other:?}"),
        }
        assert_eq!(parse(r"\.x").unwrap_err().pos.col, 2);
        assert!(parse("(K").is_err());
        assert!(parse("K )").is_err());
    }
}
