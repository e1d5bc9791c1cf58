//! Seeded property suites.
//!
//! Each suite draws its samples from [`sample_rng`] streams indexed by sample
//! number, so a failure is reproduced by its seed and index. A failing sample
//! is shrunk greedily before it is reported.

use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::barrec::{check_chi_contract, check_h_unfolding, check_left_prefix_stability, check_psi_unfolding, check_sequence_extension, h_step, BarState, Check};
use crate::compiler::{behavioral_equiv, CompileError, behavioral_equiv_with, builtin, compile_lambda_form, compile_str, EquivConfig, Env, Probe, Verdict};
use crate::fixture::{bundled, parse_fixture, FixtureError, SeqTable};
use crate::gen::{pole_member, sample_rng, TermGen};
use crate::machine::{label_p, Machine, MachineError, PoleResult, RunOutcome, Status, StepResult, Stuck, TraceMode};
use crate::oracle_lab::{build_phi, extract_witness, tau_alignment, theorem5_bound, theorem5_check, Alignment, Predicate, Theorem5Verdict};
use crate::process::{Process, Stack};
use crate::registry::{sequence, SeqRegistry};
use crate::subst::{abort_occurrences, replace_p, substitute, SubstSpec};
use crate::syntax::{parse_process, parse_term, Printer};
use crate::term::{mk_numeral, Class, Const, Term, DEFAULT_N};

pub const SUITE_NAMES: [&str; 11] = ["rules", "continuations", "lemma2", "lemma3", "lemma4", "coherence", "equiv", "chi", "psi", "theorem5", "witness"];

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Overrides the suite's default sample count.
    pub samples: Option<usize>,
    /// Per-run step budget for random samples.
    pub fuel: usize,
    /// Largest q-variable index available to fixtures.
    pub n: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 0x5eed, samples: None, fuel: 10_000, n: DEFAULT_N }
    }
}

impl SuiteConfig {
    fn samples_or(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    /// Samples with no verdict within fuel; counted neither way.
    pub unknown: usize,
    pub notes: Vec<String>,
    /// Shrunk description of the first failing sample.
    pub first_failure: Option<String>,
}

impl SuiteReport {
    fn new(name: &str) -> SuiteReport {
        SuiteReport { name: name.to_string(), ..SuiteReport::default() }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0 && self.passed > 0
    }

    pub fn total(&self) -> usize {
        self.passed + self.failed + self.unknown
    }

    fn pass(&mut self) {
        self.passed += 1;
    }

    fn fail(&mut self, describe: impl FnOnce() -> String) {
        self.failed += 1;
        if self.first_failure.is_none() {
            self.first_failure = Some(describe());
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            self.pass()
        } else {
            self.fail(describe)
        }
    }

    fn check(&mut self, label: &str, c: Check) {
        match c {
            Check::Pass { .. } => self.pass(),
            Check::Unknown { .. } => self.unknown += 1,
            fail => self.fail(|| format!("{label}: {fail}")),
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}/{} passed", self.name, self.passed, self.total())?;
        if self.failed > 0 {
            write!(f, ", {} failed", self.failed)?;
        }
        if self.unknown > 0 {
            write!(f, ", {} unknown", self.unknown)?;
        }
        for note in &self.notes {
            write!(f, "\n  {note}")?;
        }
        if let Some(fail) = &self.first_failure {
            write!(f, "\n  first failure: {fail}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SuiteError {
    #[error("unknown suite '{0}' (expected one of {list})", list = SUITE_NAMES.join(", "))]
    UnknownSuite(String),
    #[error(transparent)]
    Machine(#[from] MachineError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error("fixture {name}: {error}")]
    Fixture { name: String, error: FixtureError },
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    match name {
        "rules" => rules(),
        "continuations" => continuations(cfg),
        "lemma2" => lemma2(cfg),
        "lemma3" => lemma3(cfg),
        "lemma4" => lemma4(cfg),
        "coherence" => coherence(cfg),
        "equiv" => equiv(),
        "chi" => chi_suite(),
        "psi" => psi_suite(),
        "theorem5" => theorem5(cfg),
        "witness" => witness(),
        other => Err(SuiteError::UnknownSuite(other.to_string())),
    }
}

fn weight(p: &Process) -> usize {
    p.terms().map(Term::size).sum::<usize>() + p.stack.len()
}

/// One-step simplifications of a process: drop a stack item, or replace the
/// head or an item by one of its immediate subterms or by `I`.
fn simplifications(p: &Process) -> Vec<Process> {
    let mut out = Vec::new();
    let items = p.stack.items();
    for i in 0..items.len() {
        let mut fewer = items.to_vec();
        fewer.remove(i);
        out.push(Process::new(p.head.clone(), Stack::from_items(fewer)));
    }
    let smaller = |t: &Term| -> Vec<Term> {
        let mut v = Vec::new();
        if let crate::term::Node::App(f, a) = t.node() {
            v.push(f.clone());
            v.push(a.clone());
        }
        if t.size() > 1 {
            v.push(Term::constant(Const::I));
        }
        v
    };
    for h in smaller(&p.head) {
        out.push(Process::new(h, p.stack.clone()));
    }
    for (i, item) in items.iter().enumerate() {
        for t in smaller(item) {
            let mut v = items.to_vec();
            v[i] = t;
            out.push(Process::new(p.head.clone(), Stack::from_items(v)));
        }
    }
    out
}

/// Greedy shrinking: keeps taking the first simplification that still fails.
pub fn shrink(p: &Process, fails: &mut dyn FnMut(&Process) -> bool) -> Process {
    let mut current = p.clone();
    'outer: for _ in 0..500 {
        for cand in simplifications(&current) {
            if weight(&cand) < weight(&current) && fails(&cand) {
                current = cand;
                continue 'outer;
            }
        }
        break;
    }
    current
}

fn show(p: &Process) -> String {
    Printer::default().process(p)
}

fn rule_cases(registry: &SeqRegistry) -> Vec<(u8, &'static str, Process, Option<Process>)> {
    let h = registry.register_sequence(sequence(|n| mk_numeral(n + 10)));
    let pp = |s: &str| parse_process(s, Some(registry)).expect("rule fixture parses");
    let oracle = Term::oracle(h);
    let k_pi = Stack::from_items([Term::q(1), Term::q(2)]).continuation();
    vec![
        (1, "(ξ)η ★ π ≻ ξ ★ η·π", pp("q0 q1 * q2 . pi0"), Some(pp("q0 * q1 . q2 . pi0"))),
        (2, "B ★ ξ·η·ζ·π ≻ ξ ★ (η)ζ·π", pp("B * q0 . q1 . q2 . q3 . pi0"), Some(pp("q0 * q1 q2 . q3 . pi0"))),
        (3, "C ★ ξ·η·ζ·π ≻ ξ ★ ζ·η·π", pp("C * q0 . q1 . q2 . q3 . pi0"), Some(pp("q0 * q2 . q1 . q3 . pi0"))),
        (4, "I ★ ξ·π ≻ ξ ★ π", pp("I * q0 . q1 . pi0"), Some(pp("q0 * q1 . pi0"))),
        (5, "K ★ ξ·η·π ≻ ξ ★ π", pp("K * q0 . q1 . q2 . pi0"), Some(pp("q0 * q2 . pi0"))),
        (6, "W ★ ξ·η·π ≻ ξ ★ η·η·π", pp("W * q0 . q1 . q2 . pi0"), Some(pp("q0 * q1 . q1 . q2 . pi0"))),
        (7, "cc ★ ξ·π ≻ ξ ★ k_π·π", pp("cc * q0 . q1 . q2 . pi0"), Some(Process::with_args(Term::q(0), [k_pi, Term::q(1), Term::q(2)]))),
        (8, "A ★ ξ·π ≻ ξ ★ π₀", pp("A * q0 . q1 . q2 . pi0"), Some(pp("q0 * pi0"))),
        (9, "⋀ᵢξᵢ ★ n̄·π ≻ ξₙ ★ π", Process::with_args(oracle.clone(), [mk_numeral(2), Term::q(1)]), Some(Process::with_args(mk_numeral(12), [Term::q(1)]))),
    ]
}

/// The matching stuck shape for each rule: one stack item short, and for
/// rule 9 a non-numeral on top.
fn rule_stuck_cases(registry: &SeqRegistry) -> Vec<(u8, Process, Stuck)> {
    let h = registry.register_sequence(sequence(mk_numeral));
    let pp = |s: &str| parse_process(s, None).expect("rule fixture parses");
    vec![
        (2, pp("B * q0 . q1 . pi0"), Stuck::StackUnderflow(2)),
        (3, pp("C * q0 . q1 . pi0"), Stuck::StackUnderflow(3)),
        (4, pp("I * pi0"), Stuck::StackUnderflow(4)),
        (5, pp("K * q0 . pi0"), Stuck::StackUnderflow(5)),
        (6, pp("W * q0 . pi0"), Stuck::StackUnderflow(6)),
        (7, pp("cc * pi0"), Stuck::StackUnderflow(7)),
        (8, pp("A * pi0"), Stuck::StackUnderflow(8)),
        (9, Process::with_args(Term::oracle(h), [Term::q(0)]), Stuck::NonNumeralForOracle),
    ]
}

fn rules() -> Result<SuiteReport, SuiteError> {
    let reg = SeqRegistry::new();
    let m = Machine::new(&reg);
    let mut r = SuiteReport::new("rules");
    let stuck = rule_stuck_cases(&reg);
    for (rule, label, before, after) in rule_cases(&reg) {
        let fired = m.step(&before)?;
        let mut ok = matches!(&fired, StepResult::Reduced { next, rule: got } if Some(next) == after.as_ref() && *got == rule);
        if let Some((_, p, want)) = stuck.iter().find(|(n, ..)| *n == rule) {
            ok &= m.step(p)? == StepResult::Stuck(*want);
        }
        r.record(ok, || format!("rule {rule} ({label}): {} gave {fired:?}", show(&before)));
    }
    Ok(r)
}

fn final_if_halted(out: &RunOutcome) -> Option<&Process> {
    out.halted().then_some(&out.final_process)
}

fn continuations(cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let reg = SeqRegistry::new();
    let m = Machine::new(&reg);
    let mut r = SuiteReport::new("continuations");
    let gen = TermGen::open();
    let fuel = cfg.fuel;
    // k_π ★ ξ·ϖ needs a bounded number of steps per item of π to reach ξ ★ π
    let slack = |pi: &Stack| 16 * (pi.len() + 1);
    let counterexample = |xi: &Term, pi: &Stack, varpi: &Stack| -> Result<Option<(RunOutcome, RunOutcome)>, MachineError> {
        let direct = m.run(&Process::new(xi.clone(), pi.clone()), fuel + slack(pi), TraceMode::Off)?;
        let via_k = m.run(&Process::new(pi.continuation(), varpi.push(xi.clone())), fuel + 2 * slack(pi), TraceMode::Off)?;
        let (a, b) = (final_if_halted(&direct), final_if_halted(&via_k));
        Ok(((a.is_some() || b.is_some()) && a != b).then_some((direct, via_k)))
    };
    let (mut halted, mut diverged) = (0, 0);
    for i in 0..cfg.samples_or(1_000) {
        let mut rng = sample_rng(cfg.seed, i as u64);
        let (xi, pi, varpi) = (gen.term(&mut rng), gen.stack(&mut rng), gen.stack(&mut rng));
        match counterexample(&xi, &pi, &varpi)? {
            None => {
                let out = m.run(&Process::new(xi.clone(), pi.clone()), fuel, TraceMode::Off)?;
                if out.halted() {
                    halted += 1;
                } else {
                    diverged += 1;
                }
                r.pass();
            }
            Some((direct, via_k)) => {
                let packed = Process::new(xi.clone(), pi.clone());
                let small = shrink(&packed, &mut |p| counterexample(&p.head, &p.stack, &varpi).ok().flatten().is_some());
                r.fail(|| {
                    format!(
                        "sample {i}: ξ ★ π = {} (shrunk from {}), ϖ = {}; direct halt {:?}, via k_π {:?}",
                        show(&small),
                        show(&packed),
                        Printer::default().stack(&varpi),
                        final_if_halted(&direct).map(show),
                        final_if_halted(&via_k).map(show)
                    )
                });
            }
        }
    }
    r.notes.push(format!("{halted} samples halted, {diverged} ran out of fuel on both sides"));
    Ok(r)
}

fn lemma2(cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let reg = SeqRegistry::new();
    let m = Machine::new(&reg);
    let mut r = SuiteReport::new("lemma2");
    let gen = TermGen::pole_biased();
    let fuel = cfg.fuel;
    // (ξ)η ★ π is one rule-1 step away from ξ ★ η·π
    let outcomes = |p: &Process| -> Result<(PoleResult, PoleResult), MachineError> {
        let (xi, eta) = match p.head.node() {
            crate::term::Node::App(f, a) => (f.clone(), a.clone()),
            _ => unreachable!("samples have an application head"),
        };
        let applied = m.in_pole(p, fuel + 1)?;
        let pushed = m.in_pole(&Process::new(xi, p.stack.push(eta)), fuel)?;
        Ok((applied, pushed))
    };
    let agree = |a: PoleResult, b: PoleResult| match (a, b) {
        (PoleResult::InPole(x), PoleResult::InPole(y)) => x == y + 1,
        (a, b) => a == b,
    };
    let mut in_pole = 0;
    for i in 0..cfg.samples_or(1_000) {
        let mut rng = sample_rng(cfg.seed, i as u64);
        let head = Term::app(gen.term(&mut rng), gen.term(&mut rng));
        let p = Process::new(head, gen.stack(&mut rng));
        let (a, b) = outcomes(&p)?;
        if a.is_in_pole() {
            in_pole += 1;
        }
        r.record(agree(a, b), || format!("sample {i}: {}: (ξ)η ★ π gave {a:?}, ξ ★ η·π gave {b:?}", show(&p)));
    }
    r.notes.push(format!("{in_pole} samples in the pole"));
    Ok(r)
}

/// A random substitution of A-occurrences, q-variables and the stack bottom, never empty.
fn lemma3_spec(p: &Process, gen: &TermGen, rng: &mut ChaCha8Rng) -> SubstSpec {
    let mut spec = SubstSpec::default();
    for path in abort_occurrences(p) {
        if rng.gen_bool(0.5) {
            spec.aborts.push((path, gen.term(rng)));
        }
    }
    for i in 0..gen.q_count {
        if rng.gen_bool(0.5) {
            spec.vars.insert(i, gen.term(rng));
        }
    }
    if spec.is_empty() || rng.gen_bool(0.5) {
        spec.append = Some(gen.term(rng));
    }
    spec
}

fn members(cfg: &SuiteConfig, m: &Machine<'_>, default: usize) -> Result<Vec<(usize, Process, usize, ChaCha8Rng)>, MachineError> {
    let gen = TermGen::pole_biased();
    let mut out = Vec::new();
    let mut index = 0u64;
    while out.len() < cfg.samples_or(default) {
        let mut rng = sample_rng(cfg.seed, index);
        if let Some((p, steps)) = pole_member(m, &gen, &mut rng, cfg.fuel, 50)? {
            out.push((index as usize, p, steps, rng));
        }
        index += 1;
    }
    Ok(out)
}

/// Fuel for a run that may take several extra steps per step of a known
/// pole run.
fn scaled(steps: usize) -> usize {
    20 * steps + 1_000
}

fn lemma3(cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let reg = SeqRegistry::new();
    let m = Machine::new(&reg);
    let mut r = SuiteReport::new("lemma3");
    let gen = TermGen::open();
    let (mut aborts, mut vars, mut appends) = (0, 0, 0);
    for (index, p, steps, rng) in members(cfg, &m, 500)? {
        let mut spec_rng = rng.clone();
        let spec = lemma3_spec(&p, &gen, &mut spec_rng);
        aborts += spec.aborts.len();
        vars += spec.vars.len();
        appends += usize::from(spec.append.is_some());
        let q = substitute(&p, &spec).expect("paths come from the process itself");
        let result = m.in_pole(&q, scaled(steps))?;
        if result.is_in_pole() {
            r.pass();
            continue;
        }
        let mut fails = |cand: &Process| -> bool {
            let Ok(PoleResult::InPole(s)) = m.in_pole(cand, cfg.fuel) else { return false };
            let spec = lemma3_spec(cand, &gen, &mut rng.clone());
            let sub = substitute(cand, &spec).expect("paths come from the process itself");
            !matches!(m.in_pole(&sub, scaled(s)), Ok(PoleResult::InPole(_)))
        };
        let small = shrink(&p, &mut fails);
        r.fail(|| format!("sample {index}: member {} became {} with {result:?}; shrunk member {}", show(&p), show(&q), show(&small)));
    }
    r.notes.push(format!("substituted {aborts} A-occurrences, {vars} q-variables, {appends} stack appends"));
    Ok(r)
}

/// Checks both halves of Lemma 4 on one pole member; `Err` describes the
/// violation.
fn lemma4_sample(m: &Machine<'_>, p: &Process, steps: usize, gen: &TermGen, rng: &mut ChaCha8Rng) -> Result<Result<usize, String>, MachineError> {
    let labeled = label_p(p);
    let out = m.run(&labeled, steps + 1, TraceMode::Off)?;
    let Some(eff) = out.efficient_tag else {
        return Ok(Err(format!("{} reached p without an efficient tag", show(p))));
    };
    let occurrences = crate::machine::p_tags(&labeled).len();
    let others: Vec<Term> = (0..occurrences).map(|_| gen.term(rng)).collect();
    let fill = |keep: Option<Term>| {
        let mut next = others.iter();
        replace_p(&labeled, |tag| {
            let other = next.next().cloned();
            if tag == Some(eff) {
                keep.clone()
            } else {
                other
            }
        })
    };
    let kept = fill(None);
    let a = m.run(&kept, steps + 1, TraceMode::Off)?;
    if !(a.halted_on_p() && a.efficient_tag == Some(eff) && a.steps == steps) {
        return Ok(Err(format!("non-efficient p's replaced: {} gave {:?} after {} steps", show(&kept), a.status, a.steps)));
    }
    let swapped = fill(Some(Term::q(0)));
    let b = m.run(&swapped, steps + 1, TraceMode::Off)?;
    if !(b.status == Status::Halted(Stuck::HeadIsQ(0)) && b.steps == steps) {
        return Ok(Err(format!("efficient p set to q0: {} gave {:?} after {} steps", show(&swapped), b.status, b.steps)));
    }
    Ok(Ok(occurrences))
}

fn lemma4(cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let reg = SeqRegistry::new();
    let m = Machine::new(&reg);
    let mut r = SuiteReport::new("lemma4");
    let gen = TermGen::open();
    let mut several = 0;
    for (index, p, steps, rng) in members(cfg, &m, 500)? {
        match lemma4_sample(&m, &p, steps, &gen, &mut rng.clone())? {
            Ok(occ) => {
                several += usize::from(occ > 1);
                r.pass();
            }
            Err(why) => {
                let mut fails = |cand: &Process| match m.in_pole(cand, cfg.fuel) {
                    Ok(PoleResult::InPole(s)) => matches!(lemma4_sample(&m, cand, s, &gen, &mut rng.clone()), Ok(Err(_))),
                    _ => false,
                };
                let small = shrink(&p, &mut fails);
                r.fail(|| format!("sample {index}: {why}; shrunk member {}", show(&small)));
            }
        }
    }
    r.notes.push(format!("{several} members had more than one occurrence of p"));
    r.notes.push("both halves also require the step count to be unchanged".to_string());
    Ok(r)
}

/// The bundled corpus of closed terms.
pub fn pl_corpus() -> Vec<Term> {
    bundled::PL_CORPUS
        .lines()
        .map(|l| l.split("--").next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| parse_term(l, None).expect("corpus lines parse"))
        .collect()
}

fn coherence(cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let reg = SeqRegistry::new();
    let m = Machine::new(&reg);
    let mut r = SuiteReport::new("coherence");
    let fuel = cfg.fuel.max(100_000);
    let (mut halted, mut exhausted) = (0, 0);
    for (i, theta) in pl_corpus().iter().enumerate() {
        if theta.classify() == Class::Open {
            r.fail(|| format!("corpus entry {i} is not closed: {theta}"));
            continue;
        }
        let out = m.run(&Process::with_args(theta.clone(), []), fuel, TraceMode::Off)?;
        match out.status {
            Status::Halted(Stuck::HeadIsP) => r.fail(|| format!("corpus entry {i}: {theta} ★ π₀ reached p")),
            Status::Halted(_) => {
                halted += 1;
                r.pass()
            }
            Status::FuelExhausted => {
                exhausted += 1;
                r.pass()
            }
        }
    }
    r.notes.push(format!("{halted} halted off the pole, {exhausted} still running after {fuel} steps"));
    Ok(r)
}

fn equiv() -> Result<SuiteReport, SuiteError> {
    let reg = SeqRegistry::new();
    let m = Machine::new(&reg);
    let mut r = SuiteReport::new("equiv");
    let b = |n: &str| builtin(n).expect("builtin");
    let l = |n: &str| compile_lambda_form(n).expect("λ-form compiles");
    let mut verdict = |label: String, v: Verdict| r.record(v.is_equal(), || format!("{label}: {v:?}"));
    for (name, arity) in [("sigma", 3), ("zero", 2), ("one", 2), ("flip", 2), ("X", 2)] {
        verdict(format!("{name} ~ λ-form"), behavioral_equiv(&m, &b(name), &l(name), arity, 10_000)?);
    }
    let t = Term::q(3);
    let ell_t = Term::app(b("ell"), t.clone());
    let ell_lam = compile_str(r"\k x. k (x q3)", &Env::new())?;
    verdict("ℓ_t ~ λkλx (k)(x)t".to_string(), behavioral_equiv(&m, &ell_t, &ell_lam, 2, 10_000)?);
    let probes = [Probe::Numeric(8), Probe::Var, Probe::Var, Probe::Numeric(11)];
    verdict("chi ~ λ-form".to_string(), behavioral_equiv_with(&m, &b("chi"), &l("chi"), &probes, EquivConfig::default())?);
    for i in 0..=8 {
        for k in 0..=8 {
            let expected = if i < k { b("one") } else { b("zero") };
            let args = [mk_numeral(i), mk_numeral(k)];
            let canon = Term::apps(b("lt"), args.clone());
            let lam = Term::apps(l("lt"), args);
            let v = behavioral_equiv(&m, &canon, &expected, 2, 10_000)?;
            let w = behavioral_equiv(&m, &lam, &expected, 2, 10_000)?;
            verdict(format!("({i} ≺ {k})"), if v.is_equal() { w } else { v });
        }
    }
    Ok(r)
}

fn chi_suite() -> Result<SuiteReport, SuiteError> {
    let reg = SeqRegistry::new();
    let h = reg.register_sequence(sequence(|i| mk_numeral(2 * i)));
    let m = Machine::new(&reg);
    let mut r = SuiteReport::new("chi");
    let pi = Stack::from_items([Term::q(4)]);
    for k in 0..=6 {
        r.check(&format!("contract k={k}"), check_chi_contract(&m, k, &Term::q(0), &Term::q(1), &pi, 10_000)?);
    }
    r.check("contract over an oracle", check_chi_contract(&m, 4, &Term::oracle(h), &Term::q(1), &pi, 10_000)?);
    let alts = [Term::q(3), crate::term::ZERO.clone(), mk_numeral(5), Term::p()];
    for k in 0..=4 {
        r.check(&format!("left-prefix stability k={k}"), check_left_prefix_stability(&m, k, &Term::q(0), &Term::q(1), &alts, &pi, 10_000)?);
    }
    Ok(r)
}

fn psi_suite() -> Result<SuiteReport, SuiteError> {
    let reg = SeqRegistry::new();
    let m = Machine::new(&reg);
    let mut r = SuiteReport::new("psi");
    for k in 0..=3 {
        r.check(&format!("Ψ unfolding k={k}"), check_psi_unfolding(&m, k, 100_000)?);
    }
    for k in 0..=2 {
        let v = check_h_unfolding(&m, &Term::q(1), &Term::q(0), k, &Term::q(2), &Stack::empty(), EquivConfig::default())?;
        r.record(v.is_equal(), || format!("H-unfolding k={k}: {v:?}"));
    }
    let mut states = vec![BarState::new(crate::term::ZERO.clone())];
    for zeta in [Term::q(2), Term::q(3), Term::p(), mk_numeral(1)] {
        let (next, _) = h_step(&Term::q(1), &Term::q(0), states.last().expect("non-empty"), &zeta);
        states.push(next);
    }
    r.check("sequence extension", check_sequence_extension(&m, &states, &Stack::from_items([Term::q(4)]), 10_000)?);
    Ok(r)
}

/// Candidates `ψ` agreeing with `xs` below `k`: `χ k' φ z` for random `z`,
/// and `φ'` read from a sequence equal to `xs` below `k'` and random above,
/// with `k' ≥ k`.
pub fn theorem5_candidates(registry: &SeqRegistry, phi: &Term, xs: &SeqTable, k: usize, n: usize, seed: u64, count: usize) -> Vec<Term> {
    let gen = TermGen::open();
    let mut out = vec![phi.clone()];
    for j in 0..count {
        let mut rng = sample_rng(seed, j as u64);
        let k2 = k + rng.gen_range(0..3);
        if j % 2 == 0 {
            let z = gen.term(&mut rng);
            out.push(Term::apps(crate::barrec::chi(), [mk_numeral(k2), phi.clone(), z]));
        } else {
            let above: Vec<Term> = (0..8).map(|_| gen.term(&mut rng)).collect();
            let tail = gen.term(&mut rng);
            let xs = xs.clone();
            let seq = sequence(move |i| if i < k2 { xs.get(i) } else { above.get(i - k2).unwrap_or(&tail).clone() });
            out.push(build_phi(registry, seq, n).0);
        }
    }
    out
}

fn theorem5(cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    theorem5_fixtures(bundled::THEOREM5.iter().map(|(n, s)| (n.to_string(), s.to_string())), cfg)
}

/// Runs the oracle-bound reproduction on `(name, source)` fixtures that
/// define a term `U` and a sequence `xs`: the bound, the candidates of
/// [`theorem5_candidates`], and the τ-run alignment of each.
pub fn theorem5_fixtures(fixtures: impl IntoIterator<Item = (String, String)>, cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let mut r = SuiteReport::new("theorem5");
    let n = cfg.n;
    let fuel = cfg.fuel.max(100_000);
    for (name, src) in fixtures {
        let (name, src) = (name.as_str(), src.as_str());
        let reg = SeqRegistry::new();
        let m = Machine::new(&reg);
        let fx = parse_fixture(src, &reg, n).map_err(|error| SuiteError::Fixture { name: name.to_string(), error })?;
        let (Some(u), Some(xs)) = (fx.term("U"), fx.seq("xs")) else {
            let error = FixtureError { line: 0, message: "needs 'term U' and 'seq xs'".to_string() };
            return Err(SuiteError::Fixture { name: name.to_string(), error });
        };
        let (phi, handle) = build_phi(&reg, xs.sequence(), n);
        let report = match theorem5_bound(&m, u, &phi, handle, fuel) {
            Ok(rep) => rep,
            Err(e) => {
                r.fail(|| format!("{name}: theorem5_bound: {e}"));
                continue;
            }
        };
        let candidates = theorem5_candidates(&reg, &phi, xs, report.bound_k, n, cfg.seed, cfg.samples_or(20));
        let (mut passed, mut aligned) = (0, 0);
        for (j, psi) in candidates.iter().enumerate() {
            let verdict = theorem5_check(&m, u, psi, &report, n, fuel)?;
            let alignment = tau_alignment(&m, u, &report, psi, n, fuel)?;
            let ok = matches!(verdict, Theorem5Verdict::Pass { .. }) && alignment.is_aligned();
            passed += usize::from(matches!(verdict, Theorem5Verdict::Pass { .. }));
            aligned += usize::from(alignment.is_aligned());
            r.record(ok, || match &alignment {
                Alignment::Aligned { .. } => format!("{name} candidate {j}: {verdict}"),
                other => format!("{name} candidate {j}: {verdict}; τ-run {other:?}"),
            });
        }
        r.notes.push(format!(
            "{name}: η called at {:?}, bound_k = {}, {passed}/{} candidates in the pole, {aligned} τ-runs aligned",
            report.oracle_args,
            report.bound_k,
            candidates.len()
        ));
    }
    Ok(r)
}

fn witness() -> Result<SuiteReport, SuiteError> {
    let mut r = SuiteReport::new("witness");
    let reg = SeqRegistry::new();
    let m = Machine::new(&reg);
    for n0 in [0, 1, 3, 7] {
        let f = Predicate::indicator(n0);
        for src in [format!(r"\u. u #{n0} I"), format!(r"\u. cc (\k. u #{n0} k)")] {
            let theta = compile_str(&src, &Env::new())?;
            match extract_witness(&m, &theta, &f, 10_000) {
                Ok(w) => r.record(w.n == n0 && w.cross_checked && w.steps < 10_000, || format!("{src}: {w:?}")),
                Err(e) => r.fail(|| format!("{src}: {e}")),
            }
        }
    }
    for (name, src) in bundled::WITNESS {
        let reg = SeqRegistry::new();
        let m = Machine::new(&reg);
        let fx = parse_fixture(src, &reg, DEFAULT_N).map_err(|error| SuiteError::Fixture { name: name.to_string(), error })?;
        let (theta, f) = (fx.term("theta").expect("fixture defines theta"), fx.predicate.as_ref().expect("fixture defines f"));
        match extract_witness(&m, theta, f, 10_000) {
            Ok(w) => r.record(w.cross_checked && f.holds(w.n), || format!("{name}: {w:?}")),
            Err(e) => r.fail(|| format!("{name}: {e}")),
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig { samples: Some(40), ..SuiteConfig::default() }
    }

    #[test]
    fn rules_nine_of_nine() {
        let r = run_suite("rules", &SuiteConfig::default()).unwrap();
        assert_eq!((r.passed, r.failed), (9, 0), "{r}");
    }

    #[test]
    fn random_suites_pass_on_small_samples() {
        for name in ["continuations", "lemma2", "lemma3", "lemma4"] {
            let r = run_suite(name, &small()).unwrap();
            assert!(r.ok(), "{r}");
            assert_eq!(r.total(), 40, "{r}");
        }
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(matches!(run_suite("nope", &SuiteConfig::default()), Err(SuiteError::UnknownSuite(_))));
    }

    #[test]
    fn shrinking_reaches_a_local_minimum() {
        let p = parse_process("K (W I) q1 * q0 . (B C) . pi0", None).unwrap();
        // fails whenever the head still mentions W
        let small = shrink(&p, &mut |c| c.head.nodes().any(|t| t.as_const() == Some(Const::W)));
        assert_eq!(small, Process::with_args(Term::constant(Const::W), []));
    }
}
