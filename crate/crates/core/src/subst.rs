//! Structural substitutions on processes.
//!
//! [`substitute`] performs, simultaneously, the three kinds of replacement
//! under which pole membership is stable: chosen `A` occurrences become
//! `(ℓ_u)A`, q-variables become arbitrary terms, and a term is appended at
//! the bottom of the stack.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::process::{Process, Stack};
use crate::term::{mk_ell, Const, Node, OccTag, OracleHandle, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    Fun,
    Arg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Loc {
    Head,
    /// Stack item, 0 is the top.
    Stack(usize),
}

/// Address of a subterm inside a process.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub loc: Loc,
    pub dirs: Vec<Dir>,
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.loc {
            Loc::Head => f.write_str("head")?,
            Loc::Stack(i) => write!(f, "stack[{i}]")?,
        }
        for d in &self.dirs {
            f.write_str(match d {
                Dir::Fun => ".fun",
                Dir::Arg => ".arg",
            })?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SubstError {
    #[error("path {0} does not address a subterm")]
    InvalidPath(Path),
    #[error("path {0} does not address an occurrence of A")]
    NotAbort(Path),
}

#[derive(Clone, Debug, Default)]
pub struct SubstSpec {
    /// Each addressed `A` becomes `(ℓ_u)A` for the paired `u`.
    pub aborts: Vec<(Path, Term)>,
    /// `q_i ↦ t_i` for every `i` present.
    pub vars: HashMap<usize, Term>,
    /// Term inserted just above `π₀`.
    pub append: Option<Term>,
}

impl SubstSpec {
    pub fn is_empty(&self) -> bool {
        self.aborts.is_empty() && self.vars.is_empty() && self.append.is_none()
    }
}

/// All occurrences of `A` in the process, head first, pre-order.
pub fn abort_occurrences(process: &Process) -> Vec<Path> {
    let mut out = Vec::new();
    let locs = std::iter::once(Loc::Head).chain((0..process.stack.len()).map(Loc::Stack));
    for (loc, term) in locs.zip(process.terms()) {
        let mut pending = vec![(term, Vec::new())];
        while let Some((t, dirs)) = pending.pop() {
            match t.node() {
                Node::App(f, a) => {
                    let mut da = dirs.clone();
                    da.push(Dir::Arg);
                    pending.push((a, da));
                    let mut df = dirs;
                    df.push(Dir::Fun);
                    pending.push((f, df));
                }
                Node::Const(Const::A) => out.push(Path { loc, dirs }),
                _ => {}
            }
        }
    }
    out
}

pub fn subterm_at<'a>(process: &'a Process, path: &Path) -> Option<&'a Term> {
    let mut t = match path.loc {
        Loc::Head => &process.head,
        Loc::Stack(i) => process.stack.items().get(i)?,
    };
    for d in &path.dirs {
        t = match (t.node(), d) {
            (Node::App(f, _), Dir::Fun) => f,
            (Node::App(_, a), Dir::Arg) => a,
            _ => return None,
        };
    }
    Some(t)
}

fn rebuild(t: &Term, dirs: &mut Vec<Dir>, aborts: &HashMap<Vec<Dir>, Term>, vars: &HashMap<usize, Term>) -> Term {
    match t.node() {
        Node::App(f, a) => {
            dirs.push(Dir::Fun);
            let nf = rebuild(f, dirs, aborts, vars);
            dirs.pop();
            dirs.push(Dir::Arg);
            let na = rebuild(a, dirs, aborts, vars);
            dirs.pop();
            if nf.ptr_eq(f) && na.ptr_eq(a) {
                t.clone()
            } else {
                Term::app(nf, na)
            }
        }
        Node::Const(Const::A) => match aborts.get(dirs.as_slice()) {
            Some(u) => Term::app(mk_ell(u.clone()), t.clone()),
            None => t.clone(),
        },
        Node::Q(i) => vars.get(i).cloned().unwrap_or_else(|| t.clone()),
        _ => t.clone(),
    }
}

pub fn substitute(process: &Process, spec: &SubstSpec) -> Result<Process, SubstError> {
    let mut by_loc: HashMap<Loc, HashMap<Vec<Dir>, Term>> = HashMap::new();
    for (path, u) in &spec.aborts {
        match subterm_at(process, path) {
            None => return Err(SubstError::InvalidPath(path.clone())),
            Some(t) if t.as_const() != Some(Const::A) => return Err(SubstError::NotAbort(path.clone())),
            Some(_) => {
                by_loc.entry(path.loc).or_default().insert(path.dirs.clone(), u.clone());
            }
        }
    }
    let empty = HashMap::new();
    let go = |loc: Loc, t: &Term| rebuild(t, &mut Vec::new(), by_loc.get(&loc).unwrap_or(&empty), &spec.vars);
    let head = go(Loc::Head, &process.head);
    let items: Vec<Term> = process.stack.items().iter().enumerate().map(|(i, t)| go(Loc::Stack(i), t)).collect();
    let mut stack = Stack::from_items(items);
    if let Some(t) = &spec.append {
        stack = stack.append(t.clone());
    }
    Ok(Process::new(head, stack))
}

/// Replaces `p` occurrences according to their tag; `None` keeps the occurrence.
pub fn replace_p(process: &Process, mut f: impl FnMut(Option<OccTag>) -> Option<Term>) -> Process {
    let mut go = |t: &Term| {
        t.map_leaves(&mut |leaf| match leaf.node() {
            Node::P(tag) => f(*tag),
            _ => None,
        })
    };
    let head = go(&process.head);
    let items: Vec<Term> = process.stack.items().iter().map(&mut go).collect();
    Process::new(head, Stack::from_items(items))
}

/// Replaces every occurrence of the oracle constant `handle` by `replacement`.
pub fn replace_oracle(t: &Term, handle: OracleHandle, replacement: &Term) -> Term {
    t.map_leaves(&mut |leaf| match leaf.node() {
        Node::Oracle(h) if *h == handle => Some(replacement.clone()),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::mk_numeral;

    fn c(k: Const) -> Term {
        Term::constant(k)
    }

    #[test]
    fn variable_replacement() {
        let p = Process::with_args(Term::q(0), []);
        let spec = SubstSpec { vars: HashMap::from([(0, c(Const::I))]), ..Default::default() };
        assert_eq!(substitute(&p, &spec).unwrap(), Process::with_args(c(Const::I), []));
    }

    #[test]
    fn abort_replacement() {
        let p = Process::with_args(c(Const::A), [c(Const::I)]);
        let paths = abort_occurrences(&p);
        assert_eq!(paths, vec![Path { loc: Loc::Head, dirs: vec![] }]);
        let u = Term::q(2);
        let spec = SubstSpec { aborts: vec![(paths[0].clone(), u.clone())], ..Default::default() };
        let expected = Process::with_args(Term::app(mk_ell(u.clone()), c(Const::A)), [c(Const::I)]);
        let got = substitute(&p, &spec).unwrap();
        assert_eq!(got, expected);
        // (ℓ_u)A is k_{u·π₀}
        assert_eq!(got.head, Stack::from_items([u]).continuation());
    }

    #[test]
    fn append_only() {
        let p = Process::with_args(c(Const::Cc), [Term::q(0)]);
        let t = mk_numeral(1);
        let spec = SubstSpec { append: Some(t.clone()), ..Default::default() };
        assert_eq!(substitute(&p, &spec).unwrap(), Process::with_args(c(Const::Cc), [Term::q(0), t]));
    }

    #[test]
    fn empty_spec_is_identity() {
        let p = Process::with_args(Term::apps(c(Const::A), [Term::q(1), c(Const::A)]), [Term::p(), c(Const::A)]);
        assert_eq!(substitute(&p, &SubstSpec::default()).unwrap(), p);
    }

    #[test]
    fn nested_paths_and_errors() {
        let p = Process::with_args(c(Const::K), [Term::apps(c(Const::A), [c(Const::A)])]);
        let paths = abort_occurrences(&p);
        assert_eq!(paths.len(), 2);
        assert_eq!(paths[1].to_string(), "stack[0].arg");
        let bad = Path { loc: Loc::Stack(3), dirs: vec![] };
        let spec = SubstSpec { aborts: vec![(bad.clone(), c(Const::I))], ..Default::default() };
        assert_eq!(substitute(&p, &spec).unwrap_err(), SubstError::InvalidPath(bad));
        let not_a = Path { loc: Loc::Head, dirs: vec![] };
        let spec = SubstSpec { aborts: vec![(not_a.clone(), c(Const::I))], ..Default::default() };
        assert_eq!(substitute(&p, &spec).unwrap_err(), SubstError::NotAbort(not_a));
    }

    #[test]
    fn replace_by_tag() {
        let p = crate::machine::label_p(&Process::with_args(Term::p(), [Term::p()]));
        let out = replace_p(&p, |tag| (tag == Some(OccTag(2))).then(|| Term::q(0)));
        assert_eq!(out, Process::with_args(Term::p(), [Term::q(0)]));
    }
}
