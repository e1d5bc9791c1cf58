//! Finite use of an oracle by a term that lands in the pole.
//!
//! `φ = λx (η) x p q⃗` reads the sequence `ξ` through the oracle constant
//! `η = ⋀ᵢ λpλq⃗ ξᵢ`. If `U ★ φ·π₀` reaches `p`, `η` fired at finitely many
//! arguments; with `k` above all of them, every `ψ` with `ψ ī ≻ ξᵢ` for
//! `i < k` also puts `U ★ ψ·π₀` in the pole.

use std::fmt;

use thiserror::Error;

use crate::compiler::{bracket_abstract, compare_processes, EquivConfig, Env, LambdaTerm, Verdict};
use crate::machine::{Machine, MachineError, PoleResult, Status, Stuck, TraceMode};
use crate::process::{Process, Stack};
use crate::registry::{sequence, SeqRegistry, Sequence};
use crate::subst::replace_oracle;
use crate::term::{mk_numeral, Node, OracleHandle, Term};

fn q_names(n: usize) -> Vec<String> {
    (0..=n).map(|i| format!("q{i}")).collect()
}

/// `λ p q0 … qn. body`
fn close_over_vars(body: LambdaTerm, n: usize) -> LambdaTerm {
    let names = q_names(n);
    let mut binders: Vec<&str> = vec!["p"];
    binders.extend(names.iter().map(String::as_str));
    LambdaTerm::lams(&binders, body)
}

/// `x p q0 … qn` applied to the head `head`.
fn vars_spine(head: LambdaTerm, n: usize) -> LambdaTerm {
    let args = std::iter::once(LambdaTerm::var("p")).chain(q_names(n).into_iter().map(|q| LambdaTerm::var(&q)));
    LambdaTerm::apps(head, args)
}

/// `ηᵢ = λp λq0 … λqn. xs(i)`; closed whatever variables `xs(i)` mentions.
pub fn eta_component(x: &Term, n: usize) -> Term {
    let lam = close_over_vars(LambdaTerm::from_term(x), n);
    bracket_abstract(&lam, &Env::new().with_n(n)).expect("only p and q-variables are free")
}

/// Registers `η = ⋀ᵢ ηᵢ` and returns `φ = λx (η) x p q0 … qn` with the
/// handle of `η`.
pub fn build_phi(registry: &SeqRegistry, xs: Sequence, n: usize) -> (Term, OracleHandle) {
    let handle = registry.register_sequence(sequence(move |i| eta_component(&xs(i), n)));
    let body = vars_spine(LambdaTerm::app(LambdaTerm::Const(Term::oracle(handle)), LambdaTerm::var("x")), n);
    // η on keeps x in argument position, so rule 9 sees the numeral itself
    let phi = bracket_abstract(&LambdaTerm::lam("x", body), &Env::new().with_n(n).with_eta(true)).expect("φ template compiles");
    (phi, handle)
}

/// `τ = λx λp λq0 … λqn. ψ x`, the term substituted for `η` in the proof.
pub fn build_tau_for(psi: &Term, n: usize) -> Term {
    let body = close_over_vars(LambdaTerm::app(LambdaTerm::Const(psi.clone()), LambdaTerm::var("x")), n);
    let env = Env::new().with_n(n).with_eta(true).define("psi", psi.clone());
    bracket_abstract(&LambdaTerm::lam("x", body), &env).expect("τ template compiles")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem5Report {
    pub phi: Term,
    pub eta_handle: OracleHandle,
    /// One more than the largest argument `η` was called on; 0 if never.
    pub bound_k: usize,
    /// Arguments of every rule-9 firing at `η`, in execution order.
    pub oracle_args: Vec<usize>,
    pub pole_steps: usize,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Theorem5Error {
    #[error("U ★ φ·π₀ is not in the pole: halted {stuck} at {process}")]
    NotInPole { stuck: Stuck, process: Process },
    #[error("U ★ φ·π₀ did not halt within {fuel} steps")]
    Unknown { fuel: usize },
    #[error(transparent)]
    Machine(#[from] MachineError),
}

/// Runs `U ★ φ·π₀` and records the arguments `η` is called on.
pub fn theorem5_bound(machine: &Machine<'_>, u: &Term, phi: &Term, handle: OracleHandle, fuel: usize) -> Result<Theorem5Report, Theorem5Error> {
    let out = machine.run(&Process::with_args(u.clone(), [phi.clone()]), fuel, TraceMode::Off)?;
    match out.status {
        Status::Halted(Stuck::HeadIsP) => {}
        Status::Halted(stuck) => return Err(Theorem5Error::NotInPole { stuck, process: out.final_process }),
        Status::FuelExhausted => return Err(Theorem5Error::Unknown { fuel }),
    }
    let oracle_args: Vec<usize> = out.oracle_calls.iter().filter(|c| c.handle == handle).map(|c| c.arg).collect();
    let bound_k = oracle_args.iter().max().map_or(0, |m| m + 1);
    Ok(Theorem5Report { phi: phi.clone(), eta_handle: handle, bound_k, oracle_args, pole_steps: out.steps })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Theorem5Verdict {
    /// `U ★ ψ·π₀` reached `p`.
    Pass { steps: usize },
    /// The hypothesis held but the run left the pole. `diverged_at` is the
    /// first step whose rule and head differ from the φ run.
    Failed { result: PoleResult, diverged_at: Option<usize> },
    /// `ψ` does not agree with `φ` at index `i < bound_k`, so the theorem
    /// says nothing.
    Unconstrained { index: usize },
}

impl fmt::Display for Theorem5Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theorem5Verdict::Pass { steps } => write!(f, "pass (in pole after {steps} steps)"),
            Theorem5Verdict::Failed { result, diverged_at } => write!(f, "FAILED: {result:?}, diverged at step {diverged_at:?}"),
            Theorem5Verdict::Unconstrained { index } => write!(f, "unconstrained (disagrees at index {index})"),
        }
    }
}

/// Probe stack for agreement checks: one argument beyond `p, q⃗`.
fn agreement_stack(n: usize) -> Stack {
    Stack::from_items([Term::app(Term::q(n), mk_numeral(1_000))])
}

/// Does `ψ ī` run as `φ ī` (hence as `ξᵢ`) for every `i < k`?
pub fn agrees_below(machine: &Machine<'_>, psi: &Term, phi: &Term, k: usize, n: usize, fuel: usize) -> Result<Option<usize>, MachineError> {
    let cfg = EquivConfig { fuel, n, ..EquivConfig::default() };
    for i in 0..k {
        let a = Process::new(Term::app(psi.clone(), mk_numeral(i)), agreement_stack(n));
        let b = Process::new(Term::app(phi.clone(), mk_numeral(i)), agreement_stack(n));
        if compare_processes(machine, &a, &b, cfg)? != Verdict::Equal {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Checks `U ★ ψ·π₀ ∈ ⊥⊥` for a `ψ` agreeing with `φ` below `bound_k`.
pub fn theorem5_check(
    machine: &Machine<'_>,
    u: &Term,
    psi: &Term,
    report: &Theorem5Report,
    n: usize,
    fuel: usize,
) -> Result<Theorem5Verdict, MachineError> {
    if let Some(index) = agrees_below(machine, psi, &report.phi, report.bound_k, n, fuel)? {
        return Ok(Theorem5Verdict::Unconstrained { index });
    }
    let run = Process::with_args(u.clone(), [psi.clone()]);
    match machine.in_pole(&run, fuel)? {
        PoleResult::InPole(steps) => Ok(Theorem5Verdict::Pass { steps }),
        result => {
            let a = machine.run(&Process::with_args(u.clone(), [report.phi.clone()]), fuel, TraceMode::Summary)?;
            let b = machine.run(&run, fuel, TraceMode::Summary)?;
            let diverged_at = a.trace.iter().zip(&b.trace).position(|(x, y)| (x.rule, &x.head) != (y.rule, &y.head));
            Ok(Theorem5Verdict::Failed { result, diverged_at })
        }
    }
}

/// Outcome of comparing the φ run with the run where `η` is replaced by `τ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Alignment {
    /// Outside the `τ`-evaluation segments both runs perform the same rules
    /// on the same processes (after replacing `η` by `τ`).
    Aligned { outer_steps: usize, segments: usize, phi_steps: usize, tau_steps: usize },
    Misaligned { phi_step: usize, tau_step: usize, expected: Process, actual: Option<Process> },
    Unknown,
}

impl Alignment {
    pub fn is_aligned(&self) -> bool {
        matches!(self, Alignment::Aligned { .. })
    }
}

fn replace_in_process(p: &Process, handle: OracleHandle, by: &Term) -> Process {
    let head = replace_oracle(&p.head, handle, by);
    Process::new(head, Stack::from_items(p.stack.items().iter().map(|t| replace_oracle(t, handle, by))))
}

/// Every process a run passes through, with the rule fired from it; the last
/// entry is the halted process with rule 0.
fn states(machine: &Machine<'_>, p: &Process, fuel: usize) -> Result<Option<Vec<(Process, u8)>>, MachineError> {
    let mut out = Vec::new();
    let outcome = machine.run_streaming(p, fuel, TraceMode::Verbose, &mut |ev| {
        out.push((ev.process.clone().expect("verbose events carry the process"), ev.rule));
    })?;
    if outcome.status == Status::FuelExhausted {
        return Ok(None);
    }
    out.push((outcome.final_process, 0));
    Ok(Some(out))
}

/// Replays `U ★ φ·π₀` against `U ★ φ[η:=τ]·π₀` with `τ = λxλpλq⃗ ψ x`.
///
/// Each rule-9 firing `η ★ ī·ρ ≻ ηᵢ ★ ρ` of the φ run corresponds to a
/// segment of the τ run that starts at `τ ★ ī·ρ'` and ends at the first
/// process equal to `ηᵢ ★ ρ'`; all other steps must coincide one for one.
pub fn tau_alignment(machine: &Machine<'_>, u: &Term, report: &Theorem5Report, psi: &Term, n: usize, fuel: usize) -> Result<Alignment, MachineError> {
    let tau = build_tau_for(psi, n);
    let h = report.eta_handle;
    let phi_tau = replace_oracle(&report.phi, h, &tau);
    let Some(a) = states(machine, &Process::with_args(u.clone(), [report.phi.clone()]), fuel)? else {
        return Ok(Alignment::Unknown);
    };
    let Some(b) = states(machine, &Process::with_args(u.clone(), [phi_tau]), fuel)? else {
        return Ok(Alignment::Unknown);
    };
    let (mut ia, mut ib, mut outer, mut segments) = (0, 0, 0, 0);
    while ia < a.len() {
        let (pa, ra) = &a[ia];
        let expected = replace_in_process(pa, h, &tau);
        let Some((pb, rb)) = b.get(ib) else {
            return Ok(Alignment::Misaligned { phi_step: ia, tau_step: ib, expected, actual: None });
        };
        if *pb != expected {
            return Ok(Alignment::Misaligned { phi_step: ia, tau_step: ib, expected, actual: Some(pb.clone()) });
        }
        let fires_eta = matches!(pa.head.node(), Node::Oracle(x) if *x == h) && *ra == 9;
        if fires_eta {
            let target = replace_in_process(&a[ia + 1].0, h, &tau);
            match b[ib..].iter().position(|(p, _)| *p == target) {
                Some(offset) => ib += offset,
                None => return Ok(Alignment::Misaligned { phi_step: ia + 1, tau_step: b.len(), expected: target, actual: None }),
            }
            segments += 1;
            ia += 1;
            continue;
        }
        if ra != rb {
            return Ok(Alignment::Misaligned { phi_step: ia, tau_step: ib, expected, actual: Some(pb.clone()) });
        }
        outer += 1;
        ia += 1;
        ib += 1;
    }
    if ib != b.len() {
        return Ok(Alignment::Misaligned { phi_step: a.len(), tau_step: ib, expected: a[a.len() - 1].0.clone(), actual: b.get(ib).map(|s| s.0.clone()) });
    }
    Ok(Alignment::Aligned { outer_steps: outer, segments, phi_steps: a.len() - 1, tau_steps: b.len() - 1 })
}
