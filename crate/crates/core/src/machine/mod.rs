//! The nine-rule executor.
//!
//! ```text
//! 1  (ξ)η ★ π        ≻ ξ ★ η·π
//! 2  B ★ ξ·η·ζ·π     ≻ ξ ★ (η)ζ·π
//! 3  C ★ ξ·η·ζ·π     ≻ ξ ★ ζ·η·π
//! 4  I ★ ξ·π         ≻ ξ ★ π
//! 5  K ★ ξ·η·π       ≻ ξ ★ π
//! 6  W ★ ξ·η·π       ≻ ξ ★ η·η·π
//! 7  cc ★ ξ·π        ≻ ξ ★ k_π·π
//! 8  A ★ ξ·π         ≻ ξ ★ π₀
//! 9  ⋀ᵢξᵢ ★ n̄·π      ≻ ξₙ ★ π
//! ```
//!
//! The head shape selects the rule, so at most one applies. Execution stops
//! when the stack is too short, when an oracle meets a non-numeral, or when
//! the head is a variable.

mod occurrence;
mod trace;

pub use occurrence::{efficient_occurrence, label_p, p_tags};
pub use trace::{OracleCall, TraceEvent, TraceMode};

use serde::Serialize;
use thiserror::Error;

use crate::process::{continuation_of, Process, Stack};
use crate::registry::{RegistryError, SeqRegistry};
use crate::term::{decode_numeral, Const, Node, OccTag, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Stuck {
    /// The rule selected by the head needs more stack items than there are.
    StackUnderflow(u8),
    NonNumeralForOracle,
    HeadIsP,
    HeadIsQ(usize),
}

impl std::fmt::Display for Stuck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Stuck::StackUnderflow(rule) => write!(f, "stack-underflow(rule {rule})"),
            Stuck::NonNumeralForOracle => f.write_str("non-numeral-for-oracle"),
            Stuck::HeadIsP => f.write_str("head-is-p"),
            Stuck::HeadIsQ(i) => write!(f, "head-is-q({i})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepResult {
    Reduced { next: Process, rule: u8 },
    Stuck(Stuck),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum MachineError {
    #[error(transparent)]
    Registry(#[from] RegistryError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Halted(Stuck),
    FuelExhausted,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub final_process: Process,
    pub status: Status,
    pub steps: usize,
    pub trace: Vec<TraceEvent>,
    pub oracle_calls: Vec<OracleCall>,
    /// Tag of the `p` in head position when the run halts on `p`.
    pub efficient_tag: Option<OccTag>,
}

impl RunOutcome {
    pub fn halted(&self) -> bool {
        matches!(self.status, Status::Halted(_))
    }

    pub fn halted_on_p(&self) -> bool {
        self.status == Status::Halted(Stuck::HeadIsP)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PoleResult {
    InPole(usize),
    NotInPole(Stuck),
    Unknown,
}

impl PoleResult {
    pub fn is_in_pole(self) -> bool {
        matches!(self, PoleResult::InPole(_))
    }
}

enum Fired {
    Rule(u8, Option<OracleCall>),
    Stuck(Stuck),
}

/// Executor bound to a registry snapshot. Cheap to copy; runs share nothing
/// mutable beyond the registry's memo tables.
#[derive(Clone, Copy, Debug)]
pub struct Machine<'r> {
    registry: &'r SeqRegistry,
}

impl<'r> Machine<'r> {
    pub fn new(registry: &'r SeqRegistry) -> Machine<'r> {
        Machine { registry }
    }

    pub fn registry(&self) -> &'r SeqRegistry {
        self.registry
    }

    /// Stack is stored bottom first so the top is `stack.last()`.
    fn fire(&self, head: &mut Term, stack: &mut Vec<Term>) -> Result<Fired, MachineError> {
        let need = |n: usize, rule: u8, stack: &Vec<Term>| {
            if stack.len() < n {
                Err(Fired::Stuck(Stuck::StackUnderflow(rule)))
            } else {
                Ok(())
            }
        };
        macro_rules! need {
            ($n:expr, $rule:expr) => {
                if let Err(stuck) = need($n, $rule, stack) {
                    return Ok(stuck);
                }
            };
        }
        let next = match head.node() {
            Node::App(f, a) => {
                stack.push(a.clone());
                let f = f.clone();
                *head = f;
                return Ok(Fired::Rule(1, None));
            }
            Node::P(_) => return Ok(Fired::Stuck(Stuck::HeadIsP)),
            Node::Q(i) => return Ok(Fired::Stuck(Stuck::HeadIsQ(*i))),
            Node::Oracle(h) => {
                let h = *h;
                need!(1, 9);
                let Some(n) = decode_numeral(stack.last().unwrap()) else {
                    return Ok(Fired::Stuck(Stuck::NonNumeralForOracle));
                };
                let value = self.registry.fetch(h, n)?;
                stack.pop();
                *head = value;
                return Ok(Fired::Rule(9, Some(OracleCall { handle: h, arg: n })));
            }
            Node::Const(c) => *c,
        };
        let rule = match next {
            Const::B => {
                need!(3, 2);
                let (xi, eta, zeta) = (stack.pop().unwrap(), stack.pop().unwrap(), stack.pop().unwrap());
                stack.push(Term::app(eta, zeta));
                *head = xi;
                2
            }
            Const::C => {
                need!(3, 3);
                let (xi, eta, zeta) = (stack.pop().unwrap(), stack.pop().unwrap(), stack.pop().unwrap());
                stack.push(eta);
                stack.push(zeta);
                *head = xi;
                3
            }
            Const::I => {
                need!(1, 4);
                *head = stack.pop().unwrap();
                4
            }
            Const::K => {
                need!(2, 5);
                let xi = stack.pop().unwrap();
                stack.pop();
                *head = xi;
                5
            }
            Const::W => {
                need!(2, 6);
                let xi = stack.pop().unwrap();
                let eta = stack.last().unwrap().clone();
                stack.push(eta);
                *head = xi;
                6
            }
            Const::Cc => {
                need!(1, 7);
                let xi = stack.pop().unwrap();
                let k = continuation_of(stack.iter());
                stack.push(k);
                *head = xi;
                7
            }
            Const::A => {
                need!(1, 8);
                let xi = stack.pop().unwrap();
                stack.clear();
                *head = xi;
                8
            }
        };
        Ok(Fired::Rule(rule, None))
    }

    pub fn step(&self, process: &Process) -> Result<StepResult, MachineError> {
        let mut head = process.head.clone();
        let mut stack: Vec<Term> = process.stack.items().iter().rev().cloned().collect();
        Ok(match self.fire(&mut head, &mut stack)? {
            Fired::Rule(rule, _) => {
                stack.reverse();
                StepResult::Reduced { next: Process::new(head, Stack::from_items(stack)), rule }
            }
            Fired::Stuck(s) => StepResult::Stuck(s),
        })
    }

    /// Runs for at most `fuel` steps, accumulating the trace unless `mode` is
    /// [`TraceMode::Off`].
    pub fn run(&self, process: &Process, fuel: usize, mode: TraceMode) -> Result<RunOutcome, MachineError> {
        let mut trace = Vec::new();
        let mut outcome = self.run_streaming(process, fuel, mode, &mut |ev| trace.push(ev.clone()))?;
        outcome.trace = trace;
        Ok(outcome)
    }

    /// Like [`Machine::run`] but hands each event to `sink` instead of storing it.
    pub fn run_streaming(
        &self,
        process: &Process,
        fuel: usize,
        mode: TraceMode,
        sink: &mut dyn FnMut(&TraceEvent),
    ) -> Result<RunOutcome, MachineError> {
        let mut head = process.head.clone();
        let mut stack: Vec<Term> = process.stack.items().iter().rev().cloned().collect();
        let mut steps = 0;
        let mut oracle_calls = Vec::new();
        let status = loop {
            if steps >= fuel {
                // distinguish a process that is already stuck from one that ran out
                let probe = self.peek_stuck(&head, &stack);
                break probe.map(Status::Halted).unwrap_or(Status::FuelExhausted);
            }
            let before = (mode == TraceMode::Verbose).then(|| snapshot(&head, &stack));
            let head_name = trace::head_name(&head);
            let depth = stack.len();
            match self.fire(&mut head, &mut stack)? {
                Fired::Rule(rule, call) => {
                    steps += 1;
                    if let Some(call) = call {
                        oracle_calls.push(call);
                    }
                    if mode != TraceMode::Off {
                        sink(&TraceEvent { step: steps, rule, head: head_name, depth, oracle: call, process: before });
                    }
                }
                Fired::Stuck(s) => break Status::Halted(s),
            }
        };
        let efficient_tag = match (status, head.node()) {
            (Status::Halted(Stuck::HeadIsP), Node::P(tag)) => *tag,
            _ => None,
        };
        Ok(RunOutcome {
            final_process: snapshot(&head, &stack),
            status,
            steps,
            trace: Vec::new(),
            oracle_calls,
            efficient_tag,
        })
    }

    fn peek_stuck(&self, head: &Term, stack: &[Term]) -> Option<Stuck> {
        let arity = match head.node() {
            Node::App(..) => return None,
            Node::P(_) => return Some(Stuck::HeadIsP),
            Node::Q(i) => return Some(Stuck::HeadIsQ(*i)),
            Node::Oracle(_) => {
                return match stack.last() {
                    None => Some(Stuck::StackUnderflow(9)),
                    Some(top) if decode_numeral(top).is_none() => Some(Stuck::NonNumeralForOracle),
                    Some(_) => None,
                }
            }
            Node::Const(c) => match c {
                Const::B => (3, 2),
                Const::C => (3, 3),
                Const::I => (1, 4),
                Const::K => (2, 5),
                Const::W => (2, 6),
                Const::Cc => (1, 7),
                Const::A => (1, 8),
            },
        };
        (stack.len() < arity.0).then_some(Stuck::StackUnderflow(arity.1))
    }

    /// Semi-decides membership in the pole: does the run reach head `p`?
    pub fn in_pole(&self, process: &Process, fuel: usize) -> Result<PoleResult, MachineError> {
        let out = self.run(process, fuel, TraceMode::Off)?;
        Ok(match out.status {
            Status::Halted(Stuck::HeadIsP) => PoleResult::InPole(out.steps),
            Status::Halted(s) => PoleResult::NotInPole(s),
            Status::FuelExhausted => PoleResult::Unknown,
        })
    }
}

fn snapshot(head: &Term, stack: &[Term]) -> Process {
    Process::new(head.clone(), Stack::from_items(stack.iter().rev().cloned()))
}
