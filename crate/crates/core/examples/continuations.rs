//! `cc` saves the stack as `k_π`; applying `k_π` restores it.

use bbc::compiler::{compile_str, Env};
use bbc::{Machine, Process, SeqRegistry, Stack, Term, TraceMode};

fn main() {
    let registry = SeqRegistry::new();
    let machine = Machine::new(&registry);

    let pi = Stack::from_items([Term::q(1), Term::q(2)]);
    let k = pi.continuation();
    println!("k_π for π = {pi}:  {k}");

    // k_π ★ ξ·ϖ behaves as ξ ★ π, whatever ϖ is
    let varpi = Stack::from_items([Term::q(3), Term::q(3)]);
    let via_k = machine.run(&Process::new(k, varpi.push(Term::q(0))), 1_000, TraceMode::Off).expect("no oracles");
    let direct = machine.run(&Process::new(Term::q(0), pi.clone()), 1_000, TraceMode::Off).expect("no oracles");
    println!("k_π ★ q0·ϖ  ≻ {}  in {} steps", via_k.final_process, via_k.steps);
    println!("q0 ★ π      ≻ {}", direct.final_process);
    assert_eq!(via_k.final_process, direct.final_process);

    // Peirce's law: cc (λk. k q0 q3) ★ π returns q0 to the saved stack
    let escape = compile_str(r"\k. k q0 q3", &Env::new()).expect("closed term");
    let out = machine.run(&Process::new(Term::app(Term::constant(bbc::Const::Cc), escape), pi), 1_000, TraceMode::Off).expect("no oracles");
    println!("cc (λk. k q0 q3) ★ π ≻ {}", out.final_process);
    assert_eq!(out.final_process, Process::with_args(Term::q(0), [Term::q(1), Term::q(2)]));
}
