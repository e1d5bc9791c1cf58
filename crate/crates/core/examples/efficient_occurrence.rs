//! Find the occurrence of `p` that reaches head position, then swap it and
//! the others out.

use bbc::machine::{efficient_occurrence, label_p};
use bbc::subst::replace_p;
use bbc::syntax::{parse_process, Printer};
use bbc::{Machine, SeqRegistry, Term, TraceMode};

fn main() {
    let registry = SeqRegistry::new();
    let machine = Machine::new(&registry);
    let shown = Printer { registry: None, show_tags: true };

    // K discards its second argument, C swaps; only one p gets to the head
    let process = parse_process("C K p * p . p . pi0", None).expect("valid process");
    let labeled = label_p(&process);
    println!("labeled:   {}", shown.process(&labeled));
    let tag = efficient_occurrence(&machine, &labeled, 1_000).expect("no oracles").expect("in the pole");
    println!("efficient: p{{{}}}", tag.0);

    // other occurrences can be anything
    let others = replace_p(&labeled, |t| (t != Some(tag)).then(|| Term::q(3)));
    let out = machine.run(&others, 1_000, TraceMode::Off).expect("no oracles");
    println!("others := q3       ≻ {}", shown.process(&out.final_process));
    assert!(out.halted_on_p());

    // the efficient one decides
    let swapped = replace_p(&labeled, |t| Some(if t == Some(tag) { Term::q(0) } else { Term::q(3) }));
    let out = machine.run(&swapped, 1_000, TraceMode::Off).expect("no oracles");
    println!("efficient := q0    ≻ {}", shown.process(&out.final_process));
    assert_eq!(out.final_process.head, Term::q(0));
}
