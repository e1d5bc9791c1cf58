//! Σ⁰₁ witness extraction.
//!
//! A realizer `θ` of `∃n f(n)=1`, run against the bare variable `p`, stops
//! as `p ★ n̄·ϖ` with `f(n) = 1`. The check runs it against
//! `τ = λx (⋀ᵢξᵢ) x p q₀`, where `ξₙ` selects `p` when `f(n) = 1` and `q₀`
//! otherwise, and expects the pole.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::compiler::{compile_str, Env};
use crate::machine::{Machine, MachineError, PoleResult, Status, Stuck, TraceMode};
use crate::process::Process;
use crate::registry::{sequence, SeqRegistry};
use crate::term::{decode_numeral, Const, Term, ZERO};

/// A predicate on naturals.
#[derive(Clone)]
pub enum Predicate {
    /// `f(n) = 1` exactly on the listed support.
    Support(BTreeSet<usize>),
    Computable(Arc<dyn Fn(usize) -> bool + Send + Sync>),
}

impl Predicate {
    pub fn indicator(n: usize) -> Predicate {
        Predicate::Support(BTreeSet::from([n]))
    }

    pub fn computable<F: Fn(usize) -> bool + Send + Sync + 'static>(f: F) -> Predicate {
        Predicate::Computable(Arc::new(f))
    }

    pub fn holds(&self, n: usize) -> bool {
        match self {
            Predicate::Support(s) => s.contains(&n),
            Predicate::Computable(f) => f(n),
        }
    }
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Support(s) => f.debug_tuple("Support").field(s).finish(),
            Predicate::Computable(_) => f.write_str("Computable(..)"),
        }
    }
}

/// Registers `ξₙ = K` if `f(n)=1` else `K I`, and returns
/// `τ = λx (⋀ᵢξᵢ) x p q₀`.
pub fn build_tau(registry: &SeqRegistry, f: &Predicate) -> Term {
    let f = f.clone();
    let h = registry.register_sequence(sequence(move |n| if f.holds(n) { Term::constant(Const::K) } else { ZERO.clone() }));
    let env = Env::new().with_eta(true).define("xi", Term::oracle(h));
    compile_str(r"\x. xi x p q0", &env).expect("τ template compiles")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub n: usize,
    /// `θ ★ p·π₀` at its halt.
    pub halted: Process,
    pub steps: usize,
    /// `f(n) = 1` and `θ ★ τ·π₀` reached `p`.
    pub cross_checked: bool,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum WitnessError {
    #[error("θ ★ p·π₀ did not halt within {fuel} steps")]
    FuelExhausted { fuel: usize },
    #[error("θ ★ p·π₀ halted without p in head position ({stuck}): {halted}")]
    NotOnP { stuck: Stuck, halted: Process },
    #[error("the stack top at p is not a numeral: {halted}")]
    NotNumeral { halted: Process },
    #[error("θ produced n = {n} but f({n}) = 0")]
    FalseWitness { n: usize, halted: Process },
    #[error(transparent)]
    Machine(#[from] MachineError),
}

/// Runs `θ ★ p·π₀` and decodes the witness from the stack top at `p`.
pub fn extract_witness(machine: &Machine<'_>, theta: &Term, f: &Predicate, fuel: usize) -> Result<WitnessReport, WitnessError> {
    let out = machine.run(&Process::with_args(theta.clone(), [Term::p()]), fuel, TraceMode::Off)?;
    let halted = out.final_process;
    match out.status {
        Status::Halted(Stuck::HeadIsP) => {}
        Status::Halted(stuck) => return Err(WitnessError::NotOnP { stuck, halted }),
        Status::FuelExhausted => return Err(WitnessError::FuelExhausted { fuel }),
    }
    let Some(n) = halted.stack.top().and_then(decode_numeral) else {
        return Err(WitnessError::NotNumeral { halted });
    };
    if !f.holds(n) {
        return Err(WitnessError::FalseWitness { n, halted });
    }
    let tau = build_tau(machine.registry(), f);
    let via_tau = machine.in_pole(&Process::with_args(theta.clone(), [tau]), fuel)?;
    Ok(WitnessReport { n, halted, steps: out.steps, cross_checked: matches!(via_tau, PoleResult::InPole(_)) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::mk_numeral;

    fn lam(src: &str) -> Term {
        compile_str(src, &Env::new()).unwrap()
    }

    #[test]
    fn tau_selects_p_or_q0() {
        let reg = SeqRegistry::new();
        let m = Machine::new(&reg);
        let head = |tau: &Term, n: usize| m.run(&Process::with_args(Term::app(tau.clone(), mk_numeral(n)), []), 10_000, TraceMode::Off).unwrap().final_process.head;
        let all = build_tau(&reg, &Predicate::computable(|_| true));
        assert_eq!(head(&all, 0), Term::p());
        let none = build_tau(&reg, &Predicate::computable(|_| false));
        assert_eq!(head(&none, 5), Term::q(0));
        let three = build_tau(&reg, &Predicate::indicator(3));
        assert_eq!(head(&three, 3), Term::p());
        assert_eq!(head(&three, 2), Term::q(0));
    }

    #[test]
    fn direct_and_backtracking_realizers() {
        let reg = SeqRegistry::new();
        let m = Machine::new(&reg);
        for n0 in [0, 1, 3, 7] {
            let f = Predicate::indicator(n0);
            for src in [format!(r"\u. u #{n0} I"), format!(r"\u. cc (\k. u #{n0} k)")] {
                let r = extract_witness(&m, &lam(&src), &f, 10_000).unwrap();
                assert_eq!(r.n, n0);
                assert!(r.cross_checked);
                assert!(r.steps < 10_000);
            }
        }
    }

    #[test]
    fn distinct_diagnostics() {
        let reg = SeqRegistry::new();
        let m = Machine::new(&reg);
        let f = Predicate::indicator(3);
        assert!(matches!(extract_witness(&m, &lam(r"\u. q0"), &f, 1000), Err(WitnessError::NotOnP { .. })));
        assert!(matches!(extract_witness(&m, &lam(r"\u. u I"), &f, 1000), Err(WitnessError::NotNumeral { .. })));
        assert!(matches!(extract_witness(&m, &lam(r"\u. u #2 I"), &f, 1000), Err(WitnessError::FalseWitness { n: 2, .. })));
        assert!(matches!(extract_witness(&m, &lam(r"\u. W I (W I)"), &f, 1000), Err(WitnessError::FuelExhausted { .. })));
    }
}
