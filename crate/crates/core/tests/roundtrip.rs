//! Printer/parser round trips and run determinism on generated terms.

use bbc::syntax::{parse_process, parse_stack, parse_term, Printer};
use bbc::term::{mk_numeral, DEFAULT_N};
use bbc::{sequence, Const, Machine, Process, SeqRegistry, Stack, Term, TraceMode};
use proptest::prelude::*;

fn registry() -> SeqRegistry {
    let reg = SeqRegistry::new();
    reg.register_named("xs", sequence(mk_numeral)).unwrap();
    reg.register_sequence(sequence(|_| Term::constant(Const::K)));
    reg
}

fn leaf() -> impl Strategy<Value = Term> {
    prop_oneof![
        proptest::sample::select(Const::ALL.to_vec()).prop_map(Term::constant),
        Just(Term::p()),
        (0..=DEFAULT_N).prop_map(Term::q),
        (0usize..6).prop_map(mk_numeral),
        (0u32..2).prop_map(|i| Term::oracle(registry().lookup(&format!("h{i}")).unwrap())),
    ]
}

fn term() -> impl Strategy<Value = Term> {
    leaf().prop_recursive(6, 64, 2, |inner| (inner.clone(), inner).prop_map(|(f, a)| Term::app(f, a)))
}

fn stack() -> impl Strategy<Value = Stack> {
    proptest::collection::vec(term(), 0..6).prop_map(Stack::from_items)
}

proptest! {
    #[test]
    fn terms_round_trip(t in term()) {
        let reg = registry();
        let text = Printer::with_registry(&reg).term(&t);
        prop_assert_eq!(parse_term(&text, Some(&reg)).unwrap(), t);
    }

    #[test]
    fn stacks_round_trip(s in stack()) {
        let reg = registry();
        let text = Printer::with_registry(&reg).stack(&s);
        prop_assert_eq!(parse_stack(&text, Some(&reg)).unwrap(), s);
    }

    #[test]
    fn processes_round_trip(h in term(), s in stack()) {
        let reg = registry();
        let p = Process::new(h, s);
        let text = Printer::with_registry(&reg).process(&p);
        prop_assert_eq!(parse_process(&text, Some(&reg)).unwrap(), p);
    }

    #[test]
    fn runs_are_deterministic(h in term(), s in stack()) {
        let reg = registry();
        let m = Machine::new(&reg);
        let p = Process::new(h, s);
        let a = m.run(&p, 2_000, TraceMode::Summary).unwrap();
        let b = m.run(&p, 2_000, TraceMode::Summary).unwrap();
        prop_assert_eq!(&a.final_process, &b.final_process);
        prop_assert_eq!(a.status, b.status);
        prop_assert_eq!(a.steps, b.steps);
        prop_assert_eq!(a.trace.iter().map(|e| e.line()).collect::<Vec<_>>(), b.trace.iter().map(|e| e.line()).collect::<Vec<_>>());
    }

    #[test]
    fn stepping_agrees_with_running(h in term(), s in stack()) {
        let reg = registry();
        let m = Machine::new(&reg);
        let mut p = Process::new(h, s);
        let whole = m.run(&p, 200, TraceMode::Off).unwrap();
        for _ in 0..whole.steps {
            match m.step(&p).unwrap() {
                bbc::StepResult::Reduced { next, .. } => p = next,
                bbc::StepResult::Stuck(s) => panic!("stuck early: {s}"),
            }
        }
        prop_assert_eq!(p, whole.final_process);
    }
}

#[test]
fn runs_agree_across_threads() {
    let reg = registry();
    let p = parse_process("#4 (C I) q0 * q1 . pi0", Some(&reg)).unwrap();
    let here = Machine::new(&reg).run(&p, 10_000, TraceMode::Off).unwrap();
    let there = std::thread::scope(|s| s.spawn(|| Machine::new(&reg).run(&p, 10_000, TraceMode::Off).unwrap()).join().unwrap());
    assert_eq!((here.final_process, here.steps), (there.final_process, there.steps));
}
