//! Parse a process, run it with a summary trace, and read the halt reason.

use bbc::syntax::parse_process;
use bbc::{Machine, SeqRegistry, Status, Stuck, TraceMode};

fn main() {
    let registry = SeqRegistry::new();
    let machine = Machine::new(&registry);

    // the numeral #3 iterates its first argument three times
    let process = parse_process("#3 * q0 . q1 . pi0", Some(&registry)).expect("valid process");
    let out = machine.run(&process, 10_000, TraceMode::Summary).expect("registry is empty");
    for event in &out.trace {
        println!("{}", event.line());
    }
    println!("final:  {}", out.final_process);
    println!("status: {:?} after {} steps", out.status, out.steps);
    assert_eq!(out.status, Status::Halted(Stuck::HeadIsQ(0)));

    // one step of each shape
    for src in ["C * q0 . q1 . q2 . pi0", "W * q0 . q1 . pi0", "cc * q0 . q1 . pi0", "I * pi0"] {
        let p = parse_process(src, None).expect("valid process");
        let out = machine.run(&p, 100, TraceMode::Off).expect("no oracles");
        println!("{src:<26} ≻ {}   [{:?}]", out.final_process, out.status);
    }
}
