//! Terms of the machine.
//!
//! A term is an immutable tree built from the combinators `B C I K W`, the
//! control constants `cc` and `A`, the variables `p` and `q0..qN`, binary
//! application, and oracle constants that point into a [`SeqRegistry`].
//!
//! Subterms are shared through `Arc`, so cloning is cheap and duplication by
//! the machine (rule 6, rule 7) never copies trees. Equality is structural and
//! ignores occurrence tags carried by `p`.
//!
//! [`SeqRegistry`]: crate::registry::SeqRegistry

use std::sync::{Arc, LazyLock};

use serde::Serialize;

/// Number of q-variables minus one used when nothing else is configured.
pub const DEFAULT_N: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Const {
    B,
    C,
    I,
    K,
    W,
    Cc,
    A,
}

impl Const {
    pub const ALL: [Const; 7] = [Const::B, Const::C, Const::I, Const::K, Const::W, Const::Cc, Const::A];

    pub fn name(self) -> &'static str {
        match self {
            Const::B => "B",
            Const::C => "C",
            Const::I => "I",
            Const::K => "K",
            Const::W => "W",
            Const::Cc => "cc",
            Const::A => "A",
        }
    }
}

/// Opaque identifier of a registered oracle sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OracleHandle(pub(crate) u32);

impl OracleHandle {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Provenance tag of a single `p` occurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OccTag(pub u32);

#[derive(Debug)]
pub enum Node {
    Const(Const),
    P(Option<OccTag>),
    Q(usize),
    App(Term, Term),
    Oracle(OracleHandle),
}

#[derive(Clone)]
pub struct Term(Arc<Node>);

/// Proof-likeness of a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Class {
    /// Built from `B C I K W cc` and application only.
    Pl0,
    /// Closed: no `p`, no `qi`; may contain `A` and oracle constants.
    Pl,
    Open,
}

impl Term {
    fn from_node(node: Node) -> Term {
        Term(Arc::new(node))
    }

    pub fn constant(c: Const) -> Term {
        Term::from_node(Node::Const(c))
    }

    pub fn p() -> Term {
        Term::from_node(Node::P(None))
    }

    pub fn tagged_p(tag: OccTag) -> Term {
        Term::from_node(Node::P(Some(tag)))
    }

    pub fn q(index: usize) -> Term {
        Term::from_node(Node::Q(index))
    }

    pub fn oracle(handle: OracleHandle) -> Term {
        Term::from_node(Node::Oracle(handle))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::from_node(Node::App(fun, arg))
    }

    /// Left-nested application `(head)a1 a2 ... an`.
    pub fn apps<I: IntoIterator<Item = Term>>(head: Term, args: I) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn as_const(&self) -> Option<Const> {
        match self.node() {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_p(&self) -> bool {
        matches!(self.node(), Node::P(_))
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Pre-order, left-to-right traversal of every node. Iterative, so it is
    /// safe on the deep terms that long runs produce.
    pub fn nodes(&self) -> Nodes<'_> {
        Nodes { pending: vec![self] }
    }

    pub fn contains_p(&self) -> bool {
        self.nodes().any(|t| t.is_p())
    }

    pub fn is_closed(&self) -> bool {
        !self.nodes().any(|t| matches!(t.node(), Node::P(_) | Node::Q(_)))
    }

    pub fn oracles(&self) -> impl Iterator<Item = OracleHandle> + '_ {
        self.nodes().filter_map(|t| match t.node() {
            Node::Oracle(h) => Some(*h),
            _ => None,
        })
    }

    pub fn size(&self) -> usize {
        self.nodes().count()
    }

    pub fn classify(&self) -> Class {
        let mut class = Class::Pl0;
        for t in self.nodes() {
            match t.node() {
                Node::P(_) | Node::Q(_) => return Class::Open,
                Node::Const(Const::A) | Node::Oracle(_) => class = Class::Pl,
                _ => {}
            }
        }
        class
    }

    pub fn is_proof_like(&self) -> bool {
        self.classify() != Class::Open
    }

    /// Rebuilds the term bottom-up, letting `f` replace any leaf. Shared
    /// subterms that `f` leaves untouched keep their allocation.
    pub fn map_leaves(&self, f: &mut dyn FnMut(&Term) -> Option<Term>) -> Term {
        match self.node() {
            Node::App(fun, arg) => {
                let nf = fun.map_leaves(f);
                let na = arg.map_leaves(f);
                if nf.ptr_eq(fun) && na.ptr_eq(arg) {
                    self.clone()
                } else {
                    Term::app(nf, na)
                }
            }
            _ => f(self).unwrap_or_else(|| self.clone()),
        }
    }
}

pub struct Nodes<'a> {
    pending: Vec<&'a Term>,
}

impl<'a> Iterator for Nodes<'a> {
    type Item = &'a Term;

    fn next(&mut self) -> Option<&'a Term> {
        let t = self.pending.pop()?;
        if let Node::App(fun, arg) = t.node() {
            self.pending.push(arg);
            self.pending.push(fun);
        }
        Some(t)
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        let mut pending = vec![(self, other)];
        while let Some((a, b)) = pending.pop() {
            if a.ptr_eq(b) {
                continue;
            }
            match (a.node(), b.node()) {
                (Node::App(f1, a1), Node::App(f2, a2)) => {
                    pending.push((a1, a2));
                    pending.push((f1, f2));
                }
                (Node::Const(x), Node::Const(y)) if x == y => {}
                (Node::P(_), Node::P(_)) => {}
                (Node::Q(x), Node::Q(y)) if x == y => {}
                (Node::Oracle(x), Node::Oracle(y)) if x == y => {}
                _ => return false,
            }
        }
        true
    }
}

impl Eq for Term {}

// Long runs build terms thousands of levels deep; the default recursive drop
// would overflow the stack on them.
impl Drop for Term {
    fn drop(&mut self) {
        let Some(node) = Arc::get_mut(&mut self.0) else { return };
        if !matches!(node, Node::App(..)) {
            return;
        }
        let mut pending = Vec::new();
        if let Node::App(f, a) = std::mem::replace(node, Node::Const(Const::I)) {
            pending.push(f);
            pending.push(a);
        }
        while let Some(mut t) = pending.pop() {
            if let Some(node) = Arc::get_mut(&mut t.0) {
                if let Node::App(..) = node {
                    if let Node::App(f, a) = std::mem::replace(node, Node::Const(Const::I)) {
                        pending.push(f);
                        pending.push(a);
                    }
                }
            }
        }
    }
}

/// `σ = (BW)(C)(B)BB`, i.e. `B W (C (B B B))` in left-associative notation.
pub static SIGMA: LazyLock<Term> = LazyLock::new(|| {
    use Const::*;
    let c = Term::constant;
    let bbb = Term::apps(c(B), [c(B), c(B)]);
    Term::apps(c(B), [c(W), Term::app(c(C), bbb)])
});

/// `0 = (K)I`.
pub static ZERO: LazyLock<Term> = LazyLock::new(|| Term::app(Term::constant(Const::K), Term::constant(Const::I)));

/// `(C)(B)CB`, the combinator with `ℓ_t = ((C)(B)CB)t`.
pub static ELL: LazyLock<Term> = LazyLock::new(|| {
    use Const::*;
    let c = Term::constant;
    Term::app(c(C), Term::apps(c(B), [c(C), c(B)]))
});

/// The canonical numeral `σⁿ(K)I`.
pub fn mk_numeral(n: usize) -> Term {
    (0..n).fold(ZERO.clone(), |t, _| Term::app(SIGMA.clone(), t))
}

/// Inverse of [`mk_numeral`]: `Some(n)` iff `t` is syntactically `σⁿ(K)I`.
pub fn decode_numeral(t: &Term) -> Option<usize> {
    let mut n = 0;
    let mut cur = t;
    loop {
        if *cur == *ZERO {
            return Some(n);
        }
        match cur.node() {
            Node::App(f, a) if *f == *SIGMA => {
                n += 1;
                cur = a;
            }
            _ => return None,
        }
    }
}

/// `ℓ_t = ((C)(B)CB)t`; `ℓ_t ★ k·x·π ≻ k ★ (x)t·π`.
pub fn mk_ell(t: Term) -> Term {
    Term::app(ELL.clone(), t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Const::*;

    fn c(k: Const) -> Term {
        Term::constant(k)
    }

    #[test]
    fn numeral_shapes() {
        assert_eq!(mk_numeral(0), Term::app(c(K), c(I)));
        assert_eq!(mk_numeral(1), Term::app(SIGMA.clone(), Term::app(c(K), c(I))));
        assert_eq!(mk_numeral(2), Term::app(SIGMA.clone(), mk_numeral(1)));
        assert_eq!(mk_numeral(3).classify(), Class::Pl0);
    }

    #[test]
    fn decode_rejects_non_numerals() {
        assert_eq!(decode_numeral(&Term::app(c(K), c(I))), Some(0));
        assert_eq!(decode_numeral(&mk_numeral(2)), Some(2));
        assert_eq!(decode_numeral(&Term::apps(c(K), [Term::app(c(K), c(I))])), None);
        assert_eq!(decode_numeral(&SIGMA), None);
        assert_eq!(decode_numeral(&Term::app(SIGMA.clone(), c(I))), None);
    }

    #[test]
    fn numerals_round_trip_to_ten_thousand() {
        let mut t = ZERO.clone();
        for n in 0..=10_000 {
            assert_eq!(decode_numeral(&t), Some(n));
            t = Term::app(SIGMA.clone(), t);
        }
        // deep numerals compare and drop without recursion
        assert_eq!(t, mk_numeral(10_001));
    }

    #[test]
    fn ell_shape() {
        let expected = Term::app(Term::app(c(C), Term::apps(c(B), [c(C), c(B)])), c(I));
        assert_eq!(mk_ell(c(I)), expected);
        assert_eq!(mk_ell(Term::q(0)), Term::app(ELL.clone(), Term::q(0)));
    }

    #[test]
    fn classification() {
        assert_eq!(Term::apps(c(W), [Term::app(c(B), c(Cc))]).classify(), Class::Pl0);
        assert_eq!(Term::oracle(OracleHandle(0)).classify(), Class::Pl);
        assert_eq!(c(A).classify(), Class::Pl);
        assert_eq!(Term::p().classify(), Class::Open);
        assert_eq!(Term::app(c(K), Term::q(2)).classify(), Class::Open);
        assert!(!Term::p().is_proof_like());
    }

    #[test]
    fn equality_ignores_tags() {
        assert_eq!(Term::tagged_p(OccTag(3)), Term::p());
        assert_ne!(Term::q(0), Term::q(1));
        assert_ne!(Term::p(), Term::q(0));
    }

    #[test]
    fn map_leaves_keeps_untouched_sharing() {
        let t = Term::apps(c(K), [Term::q(0), c(I)]);
        let same = t.map_leaves(&mut |_| None);
        assert!(same.ptr_eq(&t));
        let swapped = t.map_leaves(&mut |l| (*l == Term::q(0)).then(|| c(W)));
        assert_eq!(swapped, Term::apps(c(K), [c(W), c(I)]));
    }
}
