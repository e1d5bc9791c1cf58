//! Seeded generators for terms, stacks and processes.
//!
//! Every sample is drawn from its own ChaCha stream `(seed, index)`, so a
//! sample can be regenerated from its index alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::machine::{Machine, MachineError, PoleResult};
use crate::process::{Process, Stack};
use crate::term::{mk_numeral, Const, Term};

/// The RNG for sample `index` under `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Leaf weights and shape bounds. A weight of 0 disables a leaf kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermGen {
    /// Application nesting bound.
    pub max_depth: usize,
    pub max_stack: usize,
    /// Each of `B C I K W`.
    pub combinator: u32,
    pub cc: u32,
    pub abort: u32,
    pub p: u32,
    /// Spread over `q0..q_{q_count-1}`.
    pub q: u32,
    pub q_count: usize,
    /// Numerals `#0..=#numeral_max`.
    pub numeral: u32,
    pub numeral_max: usize,
    /// Percent chance that a node below `max_depth` is an application.
    pub app_percent: u32,
}

impl TermGen {
    /// Closed terms: combinators, `cc`, `A` and numerals.
    pub fn proof_like() -> TermGen {
        TermGen { max_depth: 5, max_stack: 0, combinator: 4, cc: 2, abort: 1, p: 0, q: 0, q_count: 0, numeral: 1, numeral_max: 3, app_percent: 55 }
    }

    /// Terms over every leaf kind except oracles.
    pub fn open() -> TermGen {
        TermGen { max_depth: 4, max_stack: 6, combinator: 4, cc: 2, abort: 2, p: 3, q: 3, q_count: 3, numeral: 1, numeral_max: 3, app_percent: 45 }
    }

    /// Like [`TermGen::open`] with more `p` and `A`, to hit the pole often.
    pub fn pole_biased() -> TermGen {
        TermGen { p: 6, abort: 3, ..TermGen::open() }
    }

    fn leaf(&self, rng: &mut ChaCha8Rng) -> Term {
        let kinds = [self.combinator * 5, self.cc, self.abort, self.p, if self.q_count > 0 { self.q } else { 0 }, self.numeral];
        let total: u32 = kinds.iter().sum();
        assert!(total > 0, "generator has no leaves");
        let mut roll = rng.gen_range(0..total);
        let mut kind = 0;
        while roll >= kinds[kind] {
            roll -= kinds[kind];
            kind += 1;
        }
        match kind {
            0 => Term::constant([Const::B, Const::C, Const::I, Const::K, Const::W][(roll / self.combinator) as usize]),
            1 => Term::constant(Const::Cc),
            2 => Term::constant(Const::A),
            3 => Term::p(),
            4 => Term::q(rng.gen_range(0..self.q_count)),
            _ => mk_numeral(rng.gen_range(0..=self.numeral_max)),
        }
    }

    fn term_at(&self, rng: &mut ChaCha8Rng, depth: usize) -> Term {
        if depth < self.max_depth && rng.gen_range(0..100) < self.app_percent {
            let f = self.term_at(rng, depth + 1);
            let a = self.term_at(rng, depth + 1);
            Term::app(f, a)
        } else {
            self.leaf(rng)
        }
    }

    pub fn term(&self, rng: &mut ChaCha8Rng) -> Term {
        self.term_at(rng, 0)
    }

    /// A stack of `0..=max_stack` items.
    pub fn stack(&self, rng: &mut ChaCha8Rng) -> Stack {
        let len = rng.gen_range(0..=self.max_stack);
        Stack::from_items((0..len).map(|_| self.term(rng)))
    }

    pub fn process(&self, rng: &mut ChaCha8Rng) -> Process {
        let head = self.term(rng);
        Process::new(head, self.stack(rng))
    }
}

/// Draws processes until one reaches `p` within `fuel` steps; gives up after
/// `tries` draws. Returns the member and its step count.
pub fn pole_member(
    machine: &Machine<'_>,
    gen: &TermGen,
    rng: &mut ChaCha8Rng,
    fuel: usize,
    tries: usize,
) -> Result<Option<(Process, usize)>, MachineError> {
    for _ in 0..tries {
        let candidate = gen.process(rng);
        if let PoleResult::InPole(steps) = machine.in_pole(&candidate, fuel)? {
            return Ok(Some((candidate, steps)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::SeqRegistry;
    use crate::term::Class;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let g = TermGen::open();
        let a = g.process(&mut sample_rng(7, 3));
        assert_eq!(a, g.process(&mut sample_rng(7, 3)));
        let distinct = (0..20).map(|i| g.process(&mut sample_rng(7, i))).filter(|p| *p != a).count();
        assert!(distinct >= 15);
    }

    #[test]
    fn shapes_respect_bounds() {
        let g = TermGen::open();
        for i in 0..200 {
            let p = g.process(&mut sample_rng(1, i));
            assert!(p.stack.len() <= g.max_stack);
        }
        let pl = TermGen::proof_like();
        for i in 0..200 {
            assert_ne!(pl.term(&mut sample_rng(2, i)).classify(), Class::Open);
        }
    }

    #[test]
    fn pole_members_are_found() {
        let reg = SeqRegistry::new();
        let m = Machine::new(&reg);
        let g = TermGen::pole_biased();
        let found = (0..50).filter(|i| pole_member(&m, &g, &mut sample_rng(3, *i), 1_000, 20).unwrap().is_some()).count();
        assert!(found >= 45, "{found}");
    }
}
