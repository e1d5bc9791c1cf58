//! Observational comparison of two terms on the machine.
//!
//! Both terms are applied to the same probes and run. Halted processes that
//! are syntactically identical are `Equal`. When both halt with the same head
//! and stack shape but some stack items differ, those items are closures the
//! run never forced; each is compared again in isolation, up to `depth`
//! levels. A run stuck on stack underflow is fed one more fresh probe at the
//! bottom, which is the same as having started with one more argument.

use crate::machine::{Machine, MachineError, Status, Stuck, TraceMode};
use crate::process::Process;
use crate::term::{mk_numeral, Node, Term, DEFAULT_N};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Probe {
    /// A fresh variable.
    Var,
    /// Every numeral `0̄ ..= max` in turn.
    Numeric(usize),
}

#[derive(Clone, Copy, Debug)]
pub struct EquivConfig {
    pub fuel: usize,
    /// Nesting levels of closure re-probing.
    pub depth: usize,
    /// Extra probes fed to a run stuck on underflow, per level.
    pub extensions: usize,
    /// Largest q-variable index; probes beyond `q_{n-1}` are `(q_n) #j`.
    pub n: usize,
}

impl Default for EquivConfig {
    fn default() -> Self {
        EquivConfig { fuel: 10_000, depth: 4, extensions: 4, n: DEFAULT_N }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    /// Halts agree except inside the listed stack items (0 is the top),
    /// which re-probing could not settle.
    Residual { positions: Vec<usize>, left: Process, right: Process },
    NotEqual { left: Process, right: Process },
    Unknown,
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        *self == Verdict::Equal
    }

    fn rank(&self) -> u8 {
        match self {
            Verdict::Equal => 0,
            Verdict::Residual { .. } => 1,
            Verdict::Unknown => 2,
            Verdict::NotEqual { .. } => 3,
        }
    }

    /// The more severe of two verdicts.
    fn worst(self, other: Verdict) -> Verdict {
        if other.rank() > self.rank() {
            other
        } else {
            self
        }
    }
}

struct Session<'m, 'r> {
    machine: &'m Machine<'r>,
    cfg: EquivConfig,
    next: usize,
}

impl Session<'_, '_> {
    fn fresh(&mut self) -> Term {
        let j = self.next;
        self.next += 1;
        if j < self.cfg.n {
            Term::q(j)
        } else {
            Term::app(Term::q(self.cfg.n), mk_numeral(j))
        }
    }

    fn compare(&mut self, left: Process, right: Process, depth: usize) -> Result<Verdict, MachineError> {
        let mut left = left;
        let mut right = right;
        for round in 0..=self.cfg.extensions {
            let a = self.machine.run(&left, self.cfg.fuel, TraceMode::Off)?;
            let b = self.machine.run(&right, self.cfg.fuel, TraceMode::Off)?;
            let (Status::Halted(sa), Status::Halted(sb)) = (a.status, b.status) else {
                return Ok(Verdict::Unknown);
            };
            let (fa, fb) = (a.final_process, b.final_process);
            if fa == fb {
                return Ok(Verdict::Equal);
            }
            let underflow = matches!(sa, Stuck::StackUnderflow(_)) || matches!(sb, Stuck::StackUnderflow(_));
            if underflow && round < self.cfg.extensions {
                let x = self.fresh();
                left = Process::new(fa.head, fa.stack.append(x.clone()));
                right = Process::new(fb.head, fb.stack.append(x));
                continue;
            }
            if fa.head != fb.head || fa.stack.len() != fb.stack.len() {
                return Ok(Verdict::NotEqual { left: fa, right: fb });
            }
            let positions: Vec<usize> = (0..fa.stack.len()).filter(|&i| fa.stack.items()[i] != fb.stack.items()[i]).collect();
            if depth == 0 {
                return Ok(Verdict::Residual { positions, left: fa, right: fb });
            }
            let mut unresolved = Vec::new();
            let mut verdict = Verdict::Equal;
            for &i in &positions {
                let (x, y) = (&fa.stack.items()[i], &fb.stack.items()[i]);
                let sub = self.compare(Process::with_args(x.clone(), []), Process::with_args(y.clone(), []), depth - 1)?;
                match sub {
                    Verdict::Equal => {}
                    Verdict::Residual { .. } => unresolved.push(i),
                    Verdict::NotEqual { .. } => return Ok(Verdict::NotEqual { left: fa, right: fb }),
                    Verdict::Unknown => verdict = Verdict::Unknown,
                }
            }
            if !unresolved.is_empty() {
                verdict = verdict.worst(Verdict::Residual { positions: unresolved, left: fa, right: fb });
            }
            return Ok(verdict);
        }
        unreachable!("the last round never extends")
    }
}

fn first_free_probe(terms: &[&Term]) -> usize {
    terms
        .iter()
        .flat_map(|t| t.nodes())
        .filter_map(|t| match t.node() {
            Node::Q(i) => Some(*i + 1),
            _ => None,
        })
        .max()
        .unwrap_or(0)
}

/// Compares `t1` and `t2` applied to one argument per entry of `probes`.
/// Numeric positions range over all their numerals; the verdict is the most
/// severe one over all combinations.
pub fn behavioral_equiv_with(
    machine: &Machine<'_>,
    t1: &Term,
    t2: &Term,
    probes: &[Probe],
    cfg: EquivConfig,
) -> Result<Verdict, MachineError> {
    let start = first_free_probe(&[t1, t2]);
    let ranges: Vec<usize> = probes.iter().map(|p| if let Probe::Numeric(max) = p { max + 1 } else { 1 }).collect();
    let mut counter = vec![0usize; probes.len()];
    let mut verdict = Verdict::Equal;
    loop {
        let mut session = Session { machine, cfg, next: start };
        let args: Vec<Term> = probes
            .iter()
            .zip(&counter)
            .map(|(p, &c)| match p {
                Probe::Var => session.fresh(),
                Probe::Numeric(_) => mk_numeral(c),
            })
            .collect();
        let v = session.compare(Process::with_args(t1.clone(), args.clone()), Process::with_args(t2.clone(), args), cfg.depth)?;
        verdict = verdict.worst(v);
        if verdict.rank() == 3 {
            return Ok(verdict);
        }
        // odometer over the numeric positions
        let mut i = 0;
        loop {
            if i == counter.len() {
                return Ok(verdict);
            }
            counter[i] += 1;
            if counter[i] < ranges[i] {
                break;
            }
            counter[i] = 0;
            i += 1;
        }
    }
}

/// Compares two processes directly. Fresh probes avoid every q-variable
/// already present in either.
pub fn compare_processes(machine: &Machine<'_>, left: &Process, right: &Process, cfg: EquivConfig) -> Result<Verdict, MachineError> {
    let terms: Vec<&Term> = left.terms().chain(right.terms()).collect();
    let mut session = Session { machine, cfg, next: first_free_probe(&terms) };
    session.compare(left.clone(), right.clone(), cfg.depth)
}

/// [`behavioral_equiv_with`] at `arity` variable positions.
pub fn behavioral_equiv(machine: &Machine<'_>, t1: &Term, t2: &Term, arity: usize, fuel: usize) -> Result<Verdict, MachineError> {
    let cfg = EquivConfig { fuel, ..EquivConfig::default() };
    behavioral_equiv_with(machine, t1, t2, &vec![Probe::Var; arity], cfg)
}
