//! Read an integer witness off a realizer of ∃n f(n)=1.

use bbc::compiler::{compile_str, Env};
use bbc::oracle_lab::{extract_witness, Predicate};
use bbc::{Machine, SeqRegistry};

fn main() {
    let registry = SeqRegistry::new();
    let machine = Machine::new(&registry);
    let f = Predicate::indicator(3);
    for src in [r"\u. u #3 I", r"\u. cc (\k. u #3 k)"] {
        let theta = compile_str(src, &Env::new()).expect("closed term");
        let report = extract_witness(&machine, &theta, &f, 10_000).expect("θ realizes ∃n f(n)=1");
        println!("{src:<22} witness n={} cross-checked={} in {} steps", report.n, report.cross_checked, report.steps);
        println!("{:<22} halted at {}", "", report.halted);
        assert_eq!(report.n, 3);
    }
    let wrong = compile_str(r"\u. u #2 I", &Env::new()).expect("closed term");
    println!("{:<22} {}", r"\u. u #2 I", extract_witness(&machine, &wrong, &f, 10_000).unwrap_err());
}
