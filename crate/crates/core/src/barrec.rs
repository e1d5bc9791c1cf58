//! The sequence-override combinator χ and the bar recursion operator Ψ,
//! with executable forms of their reduction contracts.
//!
//! ```text
//! χ k̄ f z ī   ≻ f ī          i < k
//! χ k̄ f z ī   ≻ z            i ≥ k
//! Ψ g u k̄ f   ≻ (u)(χ k̄ f)(g) λz (Ψ g u k̄⁺)(χ) k̄ f z
//! ```
//!
//! The second line's `u` receives the single argument `χ k̄ f (g η)` where
//! `η = λz Ψ g u k̄⁺ (χ k̄ f z)`.

use std::fmt;

use crate::compiler::{builtin, compare_processes, compile_str, EquivConfig, Env, Verdict};
use crate::machine::{Machine, MachineError, Status, TraceMode};
use crate::process::{Process, Stack};
use crate::term::{mk_numeral, Term};

pub fn chi() -> Term {
    builtin("chi").expect("chi is a builtin")
}

pub fn psi() -> Term {
    builtin("psi").expect("psi is a builtin")
}

/// Outcome of a contract check over a family of cases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Pass { cases: usize },
    Fail { case: String, expected: Option<Process>, actual: Process },
    Unknown { case: String },
}

impl Check {
    pub fn is_pass(&self) -> bool {
        matches!(self, Check::Pass { .. })
    }

    fn and(self, other: Check) -> Check {
        match (self, other) {
            (Check::Pass { cases: a }, Check::Pass { cases: b }) => Check::Pass { cases: a + b },
            (Check::Pass { .. }, other) => other,
            (first, _) => first,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::Pass { cases } => write!(f, "pass ({cases} cases)"),
            Check::Fail { case, expected: Some(e), actual } => write!(f, "fail at {case}: expected {e}, got {actual}"),
            Check::Fail { case, expected: None, actual } => write!(f, "fail at {case}: got {actual}"),
            Check::Unknown { case } => write!(f, "unknown at {case} (fuel exhausted)"),
        }
    }
}

fn final_of(machine: &Machine<'_>, p: &Process, fuel: usize) -> Result<Option<Process>, MachineError> {
    let out = machine.run(p, fuel, TraceMode::Off)?;
    Ok(match out.status {
        Status::Halted(_) => Some(out.final_process),
        Status::FuelExhausted => None,
    })
}

/// Runs `actual` and `expected` and requires identical halts.
fn same_halt(machine: &Machine<'_>, case: String, actual: &Process, expected: &Process, fuel: usize) -> Result<Check, MachineError> {
    let (Some(a), Some(e)) = (final_of(machine, actual, fuel)?, final_of(machine, expected, fuel)?) else {
        return Ok(Check::Unknown { case });
    };
    Ok(if a == e { Check::Pass { cases: 1 } } else { Check::Fail { case, expected: Some(e), actual: a } })
}

/// For every `i ≤ k+3`: `χ k̄ f z ī ★ π` halts as `f ī ★ π` when `i < k`
/// and as `z ★ π` otherwise.
pub fn check_chi_contract(machine: &Machine<'_>, k: usize, f: &Term, z: &Term, pi: &Stack, fuel: usize) -> Result<Check, MachineError> {
    let mut verdict = Check::Pass { cases: 0 };
    for i in 0..=k + 3 {
        let lhs = Process::new(Term::apps(chi(), [mk_numeral(k), f.clone(), z.clone(), mk_numeral(i)]), pi.clone());
        let rhs = if i < k { Process::new(Term::app(f.clone(), mk_numeral(i)), pi.clone()) } else { Process::new(z.clone(), pi.clone()) };
        verdict = verdict.and(same_halt(machine, format!("k={k} i={i}"), &lhs, &rhs, fuel)?);
    }
    Ok(verdict)
}

/// `χ k̄ f z ī` ignores `z` when `i < k` and `f` when `i ≥ k`: each ignored
/// position is varied over `alternatives` and the halts must not change.
pub fn check_left_prefix_stability(
    machine: &Machine<'_>,
    k: usize,
    f: &Term,
    z: &Term,
    alternatives: &[Term],
    pi: &Stack,
    fuel: usize,
) -> Result<Check, MachineError> {
    let mut verdict = Check::Pass { cases: 0 };
    for i in 0..=k + 3 {
        let base = Process::new(Term::apps(chi(), [mk_numeral(k), f.clone(), z.clone(), mk_numeral(i)]), pi.clone());
        for alt in alternatives {
            let (f2, z2) = if i < k { (f.clone(), alt.clone()) } else { (alt.clone(), z.clone()) };
            let varied = Process::new(Term::apps(chi(), [mk_numeral(k), f2, z2, mk_numeral(i)]), pi.clone());
            verdict = verdict.and(same_halt(machine, format!("k={k} i={i} alt={alt}"), &varied, &base, fuel)?);
        }
    }
    Ok(verdict)
}

/// A stage of the sequence construction `φ_{k+1} = χ k̄ φ_k ζ_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarState {
    pub k: usize,
    pub phi: Term,
    pub zetas: Vec<Term>,
}

impl BarState {
    pub fn new(phi: Term) -> BarState {
        BarState { k: 0, phi, zetas: Vec::new() }
    }
}

/// `η_{k,φ} = λz (H k̄⁺)(χ) k̄ φ z` with `H = Ψ G U`.
pub fn eta_term(g: &Term, u: &Term, k: usize, phi: &Term) -> Term {
    let env = Env::new()
        .with_eta(true)
        .define("H", Term::apps(psi(), [g.clone(), u.clone()]))
        .define("chi", chi())
        .define("k", mk_numeral(k))
        .define("kp", mk_numeral(k + 1))
        .define("phi", phi.clone());
    compile_str(r"\z. H kp (chi k phi z)", &env).expect("η template compiles")
}

/// One step of the construction. Returns the successor state and the term
/// `η_{k,φ}` of the current stage.
pub fn h_step(g: &Term, u: &Term, state: &BarState, zeta: &Term) -> (BarState, Term) {
    let eta = eta_term(g, u, state.k, &state.phi);
    let phi = Term::apps(chi(), [mk_numeral(state.k), state.phi.clone(), zeta.clone()]);
    let mut zetas = state.zetas.clone();
    zetas.push(zeta.clone());
    (BarState { k: state.k + 1, phi, zetas }, eta)
}

/// Sequence-extension law over a chain of states `s₀, s₁, …`: for every stage
/// `k` and `i < k`, `φ_k ī ★ π` halts as `φ_{i+1} ī ★ π` and as `ζ_i ★ π`.
pub fn check_sequence_extension(machine: &Machine<'_>, states: &[BarState], pi: &Stack, fuel: usize) -> Result<Check, MachineError> {
    let mut verdict = Check::Pass { cases: 0 };
    for s in states {
        for i in 0..s.k {
            let Some(si) = states.iter().find(|t| t.k == i + 1) else { continue };
            let lhs = Process::new(Term::app(s.phi.clone(), mk_numeral(i)), pi.clone());
            let mid = Process::new(Term::app(si.phi.clone(), mk_numeral(i)), pi.clone());
            let rhs = Process::new(s.zetas[i].clone(), pi.clone());
            verdict = verdict.and(same_halt(machine, format!("k={} i={i} vs stage {}", s.k, i + 1), &lhs, &mid, fuel)?);
            verdict = verdict.and(same_halt(machine, format!("k={} i={i} vs zeta", s.k), &lhs, &rhs, fuel)?);
        }
    }
    Ok(verdict)
}

/// H-unfolding: `H k̄ φ ★ π` and `(U)(χ k̄ φ)(G) η_{k,φ} ★ π` behave the
/// same. The Y-unfolded residual differs syntactically from the written form,
/// so the comparison is behavioral.
pub fn check_h_unfolding(
    machine: &Machine<'_>,
    g: &Term,
    u: &Term,
    k: usize,
    phi: &Term,
    pi: &Stack,
    cfg: EquivConfig,
) -> Result<Verdict, MachineError> {
    let h = Term::apps(psi(), [g.clone(), u.clone()]);
    let lhs = Process::new(Term::apps(h, [mk_numeral(k), phi.clone()]), pi.clone());
    let eta = eta_term(g, u, k, phi);
    let inner = Term::apps(chi(), [mk_numeral(k), phi.clone(), Term::app(g.clone(), eta)]);
    let rhs = Process::new(Term::app(u.clone(), inner), pi.clone());
    compare_processes(machine, &lhs, &rhs, cfg)
}

const U: usize = 0;
const G: usize = 1;
const F: usize = 2;
const Z: usize = 3;

/// The `u`-argument of a bar-recursion frame: halts as `q₀ ★ s·π₀`.
fn frame_argument(machine: &Machine<'_>, p: &Process, case: &str, fuel: usize) -> Result<Result<Term, Check>, MachineError> {
    let Some(fin) = final_of(machine, p, fuel)? else {
        return Ok(Err(Check::Unknown { case: case.to_string() }));
    };
    if fin.head == Term::q(U) && fin.stack.len() == 1 {
        Ok(Ok(fin.stack.items()[0].clone()))
    } else {
        Ok(Err(Check::Fail { case: format!("{case}: expected head q0 with one argument"), expected: None, actual: fin }))
    }
}

/// Probes a frame argument `s` that should behave as `χ k̄ f (g η)`:
/// `s ī ★ π₀` must halt as `below(i)` for `i < k`, and as `q₁ ★ T·π₀` for
/// `i ≥ k` (the `z` branch consumes `ī`). Returns the thunk `T` seen at
/// `i = k`.
fn probe_frame(
    machine: &Machine<'_>,
    s: &Term,
    k: usize,
    below: &dyn Fn(usize) -> Process,
    label: &str,
    fuel: usize,
) -> Result<Result<(Term, usize), Check>, MachineError> {
    let mut thunk = None;
    let mut cases = 0;
    for i in 0..=k + 2 {
        let case = format!("{label} i={i}");
        let Some(fin) = final_of(machine, &Process::with_args(s.clone(), [mk_numeral(i)]), fuel)? else {
            return Ok(Err(Check::Unknown { case }));
        };
        if i < k {
            let expected = below(i);
            if fin != expected {
                return Ok(Err(Check::Fail { case, expected: Some(expected), actual: fin }));
            }
        } else {
            let items = fin.stack.items();
            if fin.head != Term::q(G) || items.len() != 1 {
                return Ok(Err(Check::Fail { case: format!("{case}: expected q1 ★ T·π₀"), expected: None, actual: fin }));
            }
            if i == k {
                thunk = Some(items[0].clone());
            }
        }
        cases += 1;
    }
    Ok(Ok((thunk.expect("i = k is probed"), cases)))
}

/// Runs `Ψ·g·u·k̄·f ★ π₀` with `u = q₀`, `g = q₁`, `f = q₂` and checks the
/// unfolding shape:
///
/// * it halts as `q₀ ★ s·π₀` with `s` behaving as `χ k̄ q₂ (q₁ T)`;
/// * `T·q₃ ★ π₀` halts as `q₀ ★ s'·π₀` with `s'` behaving as
///   `χ k̄⁺ (χ k̄ q₂ q₃) (q₁ T')`, the recursive call at `k⁺`.
pub fn check_psi_unfolding(machine: &Machine<'_>, k: usize, fuel: usize) -> Result<Check, MachineError> {
    let start = Process::with_args(psi(), [Term::q(G), Term::q(U), mk_numeral(k), Term::q(F)]);
    let s = match frame_argument(machine, &start, "Ψ g u k f", fuel)? {
        Ok(s) => s,
        Err(c) => return Ok(c),
    };
    let below = |i: usize| Process::with_args(Term::q(F), [mk_numeral(i)]);
    let (thunk, c1) = match probe_frame(machine, &s, k, &below, "s", fuel)? {
        Ok(r) => r,
        Err(c) => return Ok(c),
    };
    let next = Process::with_args(thunk, [Term::q(Z)]);
    let s2 = match frame_argument(machine, &next, "T z", fuel)? {
        Ok(s) => s,
        Err(c) => return Ok(c),
    };
    let below2 = |i: usize| if i < k { below(i) } else { Process::with_args(Term::q(Z), []) };
    let (_, c2) = match probe_frame(machine, &s2, k + 1, &below2, "s'", fuel)? {
        Ok(r) => r,
        Err(c) => return Ok(c),
    };
    Ok(Check::Pass { cases: c1 + c2 + 2 })
}
