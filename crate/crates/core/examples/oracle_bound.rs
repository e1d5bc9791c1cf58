//! A term in the pole reads an oracle at finitely many places; any other
//! sequence agreeing there keeps it in the pole.

use bbc::barrec::chi;
use bbc::compiler::{compile_str, Env};
use bbc::oracle_lab::{build_phi, tau_alignment, theorem5_bound, theorem5_check, Theorem5Verdict};
use bbc::term::{mk_numeral, DEFAULT_N};
use bbc::{sequence, Const, Machine, SeqRegistry, Term};

fn main() {
    let registry = SeqRegistry::new();
    let machine = Machine::new(&registry);
    let n = DEFAULT_N;

    let (phi, eta) = build_phi(&registry, sequence(|_| Term::constant(Const::I)), n);
    let u = compile_str(r"\f. f #0 (f #4 p)", &Env::new()).expect("closed term");
    let report = theorem5_bound(&machine, &u, &phi, eta, 100_000).expect("U φ reaches p");
    println!("η called at {:?}; bound k = {}", report.oracle_args, report.bound_k);

    // agree below k, anything from k on
    let psi = Term::apps(chi(), [mk_numeral(report.bound_k), phi.clone(), Term::q(1)]);
    let verdict = theorem5_check(&machine, &u, &psi, &report, n, 100_000).expect("no registry errors");
    println!("U ψ with ψ = χ k φ q1: {verdict}");
    assert!(matches!(verdict, Theorem5Verdict::Pass { .. }));

    // disagreeing below k is outside the hypothesis
    let early = Term::apps(chi(), [mk_numeral(1), phi.clone(), Term::q(1)]);
    println!("U ψ with ψ = χ 1 φ q1: {}", theorem5_check(&machine, &u, &early, &report, n, 100_000).expect("no registry errors"));

    let alignment = tau_alignment(&machine, &u, &report, &psi, n, 100_000).expect("no registry errors");
    println!("η replaced by τ = λxλpλq⃗ ψx: {alignment:?}");
    assert!(alignment.is_aligned());
}
