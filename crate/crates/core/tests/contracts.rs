//! Cross-module contracts through the public API.

use bbc::barrec::chi;
use bbc::compiler::{behavioral_equiv_with, builtin, builtin_env, compile_str, EquivConfig, Env, Probe};
use bbc::fixture::{bundled, parse_fixture};
use bbc::oracle_lab::{build_phi, extract_witness, theorem5_bound, theorem5_check, Predicate, Theorem5Verdict, WitnessError};
use bbc::term::{mk_numeral, Node, DEFAULT_N};
use bbc::{sequence, Const, Machine, PoleResult, Process, SeqRegistry, Stack, Term, TraceMode};

fn lam(src: &str) -> Term {
    compile_str(src, &Env::new()).unwrap()
}

#[test]
fn compiled_chi_file_matches_builtin() {
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/lam/chi.lam")).unwrap();
    let compiled = compile_str(&src, &builtin_env()).unwrap();
    let reg = SeqRegistry::new();
    let m = Machine::new(&reg);
    let probes = [Probe::Numeric(6), Probe::Var, Probe::Var, Probe::Numeric(9)];
    let v = behavioral_equiv_with(&m, &compiled, &builtin("chi").unwrap(), &probes, EquivConfig::default()).unwrap();
    assert!(v.is_equal(), "{v:?}");
}

/// Erases `I t` redexes; φ reaches the sequence value with its q-arguments
/// η-expanded, so the law holds up to these.
fn strip_i(t: &Term) -> Term {
    match t.node() {
        Node::App(f, a) if f.as_const() == Some(Const::I) => strip_i(a),
        Node::App(f, a) => Term::app(strip_i(f), strip_i(a)),
        _ => t.clone(),
    }
}

#[test]
fn phi_runs_as_the_sequence_up_to_twenty() {
    let reg = SeqRegistry::new();
    let m = Machine::new(&reg);
    let xs = |i: usize| match i % 3 {
        0 => mk_numeral(i),
        1 => Term::apps(Term::q(1), [Term::p(), Term::q(0)]),
        _ => Term::constant(Const::K),
    };
    let (phi, _) = build_phi(&reg, sequence(xs), DEFAULT_N);
    let pi = Stack::from_items([Term::q(3), Term::q(2)]);
    for i in 0..=20 {
        let a = m.run(&Process::new(Term::app(phi.clone(), mk_numeral(i)), pi.clone()), 10_000, TraceMode::Off).unwrap();
        let b = m.run(&Process::new(xs(i), pi.clone()), 10_000, TraceMode::Off).unwrap();
        let erase = |p: &Process| Process::new(strip_i(&p.head), Stack::from_items(p.stack.items().iter().map(strip_i)));
        assert_eq!((erase(&a.final_process), a.status), (erase(&b.final_process), b.status), "i={i}");
    }
}

#[test]
fn bound_with_a_discarded_call() {
    let reg = SeqRegistry::new();
    let m = Machine::new(&reg);
    let (phi, h) = build_phi(&reg, sequence(|_| Term::constant(Const::I)), DEFAULT_N);
    // (K p)((f)#2) never evaluates the call; (f #2) (K p) does
    let lazy = theorem5_bound(&m, &lam(r"\f. K p (f #2)"), &phi, h, 10_000).unwrap();
    assert_eq!(lazy.bound_k, 0);
    let eager = theorem5_bound(&m, &lam(r"\f. f #2 (K p) q0"), &phi, h, 10_000).unwrap();
    assert_eq!((eager.oracle_args, eager.bound_k), (vec![2], 3));
}

#[test]
fn theorem5_candidates_above_the_bound_are_free() {
    let reg = SeqRegistry::new();
    let m = Machine::new(&reg);
    let fx = parse_fixture(bundled::THEOREM5[0].1, &reg, DEFAULT_N).unwrap();
    let (u, xs) = (fx.term("U").unwrap(), fx.seq("xs").unwrap());
    let (phi, h) = build_phi(&reg, xs.sequence(), DEFAULT_N);
    let report = theorem5_bound(&m, u, &phi, h, 10_000).unwrap();
    for z in [Term::q(1), Term::q(0), Term::p(), Term::apps(Term::constant(Const::W), [Term::constant(Const::I)])] {
        let psi = Term::apps(chi(), [mk_numeral(report.bound_k), phi.clone(), z]);
        assert!(matches!(theorem5_check(&m, u, &psi, &report, DEFAULT_N, 10_000).unwrap(), Theorem5Verdict::Pass { .. }));
    }
    // a ψ that answers q1 everywhere is not covered, and indeed leaves the pole
    let psi = lam(r"\x. q1");
    assert!(matches!(theorem5_check(&m, u, &psi, &report, DEFAULT_N, 10_000).unwrap(), Theorem5Verdict::Unconstrained { index: 0 }));
    assert!(!m.in_pole(&Process::with_args(u.clone(), [psi]), 10_000).unwrap().is_in_pole());
}

#[test]
fn witnesses_are_never_fabricated() {
    let reg = SeqRegistry::new();
    let m = Machine::new(&reg);
    let f = Predicate::computable(|n| n % 4 == 1);
    for n in 0..12 {
        let theta = lam(&format!(r"\u. u #{n} I"));
        match extract_witness(&m, &theta, &f, 10_000) {
            Ok(w) => assert!(w.cross_checked && f.holds(w.n) && w.n == n),
            Err(WitnessError::FalseWitness { n: got, .. }) => assert!(!f.holds(got) && got == n),
            Err(e) => panic!("{e}"),
        }
    }
    // p reached with a non-numeral on top
    assert!(matches!(extract_witness(&m, &lam(r"\u. u q0"), &f, 100), Err(WitnessError::NotNumeral { .. })));
}

#[test]
fn realizers_of_absurdity_reach_p_only_with_p() {
    // the efficient p decides: θ ★ p·p·π₀ in the pole, either p replaced by q0
    let reg = SeqRegistry::new();
    let m = Machine::new(&reg);
    let xi = lam(r"\x y. x (y x)");
    let both = Process::with_args(xi.clone(), [Term::p(), Term::p()]);
    assert!(m.in_pole(&both, 100).unwrap().is_in_pole());
    let first = Process::with_args(xi.clone(), [Term::q(0), Term::p()]);
    let second = Process::with_args(xi, [Term::p(), Term::q(0)]);
    assert_eq!(m.in_pole(&first, 100).unwrap(), PoleResult::NotInPole(bbc::Stuck::HeadIsQ(0)));
    assert!(m.in_pole(&second, 100).unwrap().is_in_pole());
}
