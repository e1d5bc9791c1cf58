//! Stacks, processes and continuations.

use crate::term::{mk_ell, Const, Term};

/// A finite sequence of terms, top first, implicitly terminated by `π₀`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stack {
    items: Vec<Term>,
}

impl Stack {
    /// The empty stack `π₀`.
    pub fn empty() -> Stack {
        Stack::default()
    }

    pub fn from_items<I: IntoIterator<Item = Term>>(items: I) -> Stack {
        Stack { items: items.into_iter().collect() }
    }

    pub fn items(&self) -> &[Term] {
        &self.items
    }

    pub fn into_items(self) -> Vec<Term> {
        self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn top(&self) -> Option<&Term> {
        self.items.first()
    }

    /// `t·π`.
    pub fn push(&self, t: Term) -> Stack {
        let mut items = Vec::with_capacity(self.items.len() + 1);
        items.push(t);
        items.extend(self.items.iter().cloned());
        Stack { items }
    }

    /// `π·t`: inserts `t` just above the terminator.
    pub fn append(&self, t: Term) -> Stack {
        let mut items = self.items.clone();
        items.push(t);
        Stack { items }
    }

    /// The continuation `k_π = (ℓ_t0)…(ℓ_t(n-1))A`.
    pub fn continuation(&self) -> Term {
        continuation_of(self.items.iter().rev())
    }
}

/// Builds `k_π` from the items of `π` listed bottom first.
pub(crate) fn continuation_of<'a, I: Iterator<Item = &'a Term>>(bottom_first: I) -> Term {
    bottom_first.fold(Term::constant(Const::A), |k, t| Term::app(mk_ell(t.clone()), k))
}

pub fn mk_continuation(stack: &Stack) -> Term {
    stack.continuation()
}

pub fn append_stack(stack: &Stack, t: Term) -> Stack {
    stack.append(t)
}

/// A machine state `ξ ★ π`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Process {
    pub head: Term,
    pub stack: Stack,
}

impl Process {
    pub fn new(head: Term, stack: Stack) -> Process {
        Process { head, stack }
    }

    /// `head ★ args·π₀`.
    pub fn with_args<I: IntoIterator<Item = Term>>(head: Term, args: I) -> Process {
        Process { head, stack: Stack::from_items(args) }
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        std::iter::once(&self.head).chain(self.stack.items())
    }

    pub fn contains_p(&self) -> bool {
        self.terms().any(Term::contains_p)
    }

    /// Repeatedly applies the push rule so that the head is not an application.
    pub fn unwind(&self) -> Process {
        let mut head = self.head.clone();
        let mut pushed = Vec::new();
        while let crate::term::Node::App(f, a) = head.node() {
            pushed.push(a.clone());
            let next = f.clone();
            head = next;
        }
        pushed.reverse();
        pushed.extend(self.stack.items().iter().cloned());
        Process { head, stack: Stack { items: pushed } }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{ELL, Node};

    fn c(k: Const) -> Term {
        Term::constant(k)
    }

    #[test]
    fn continuation_of_empty_is_abort() {
        assert_eq!(Stack::empty().continuation(), c(Const::A));
    }

    #[test]
    fn continuation_unfolds() {
        let t = Term::q(1);
        let u = Term::q(2);
        assert_eq!(Stack::from_items([t.clone()]).continuation(), Term::app(mk_ell(t.clone()), c(Const::A)));
        let k = Stack::from_items([t.clone(), u.clone()]).continuation();
        let expected = Term::app(mk_ell(t), Term::app(mk_ell(u), c(Const::A)));
        assert_eq!(k, expected);
    }

    #[test]
    fn append_inserts_above_terminator() {
        let (t, u, v) = (Term::q(0), Term::q(1), Term::q(2));
        assert_eq!(Stack::empty().append(t.clone()).items(), std::slice::from_ref(&t));
        assert_eq!(Stack::from_items([u.clone()]).append(t.clone()).items(), &[u.clone(), t.clone()]);
        assert_eq!(
            Stack::from_items([u.clone(), v.clone()]).append(t.clone()).items(),
            &[u, v, t]
        );
    }

    // Replaces the innermost A of a continuation by (ℓ_t)A.
    fn replace_last_abort(k: &Term, t: &Term) -> Term {
        match k.node() {
            Node::App(f, rest) if matches!(f.node(), Node::App(e, _) if *e == *ELL) => {
                Term::app(f.clone(), replace_last_abort(rest, t))
            }
            Node::Const(Const::A) => Term::app(mk_ell(t.clone()), c(Const::A)),
            _ => panic!("not a continuation"),
        }
    }

    #[test]
    fn appended_continuation_replaces_last_abort() {
        let items = [Term::q(0), c(Const::A), Term::app(c(Const::K), c(Const::A))];
        for n in 0..=items.len() {
            let pi = Stack::from_items(items[..n].iter().cloned());
            let t = Term::q(3);
            assert_eq!(pi.append(t.clone()).continuation(), replace_last_abort(&pi.continuation(), &t));
        }
    }

    #[test]
    fn unwind_pushes_arguments() {
        let p = Process::with_args(Term::apps(c(Const::K), [Term::q(0), Term::q(1)]), [Term::q(2)]);
        let u = p.unwind();
        assert_eq!(u.head, c(Const::K));
        assert_eq!(u.stack.items(), &[Term::q(0), Term::q(1), Term::q(2)]);
    }
}
