//! χ overrides a sequence from index k on; Ψ extends a finite sequence one
//! element per step.

use bbc::barrec::{check_chi_contract, check_psi_unfolding, chi, h_step, BarState};
use bbc::term::{mk_numeral, ZERO};
use bbc::{Machine, Process, SeqRegistry, Stack, Term, TraceMode};

fn main() {
    let registry = SeqRegistry::new();
    let machine = Machine::new(&registry);

    // χ 3 q0 q1 i: q0 i for i < 3, else q1
    for i in 0..5 {
        let t = Term::apps(chi(), [mk_numeral(3), Term::q(0), Term::q(1), mk_numeral(i)]);
        let out = machine.run(&Process::with_args(t, []), 10_000, TraceMode::Off).expect("no oracles");
        println!("χ #3 q0 q1 #{i} ≻ {}", out.final_process);
    }
    let pi = Stack::from_items([Term::q(4)]);
    for k in 0..=6 {
        let verdict = check_chi_contract(&machine, k, &Term::q(0), &Term::q(1), &pi, 10_000).expect("no oracles");
        assert!(verdict.is_pass(), "{verdict}");
    }
    println!("χ contract holds for k ≤ 6");

    // φ₀ = 0, φ_{k+1} = χ k φ_k ζ_k
    let mut state = BarState::new(ZERO.clone());
    for zeta in [Term::q(2), Term::q(3), Term::q(4)] {
        state = h_step(&Term::q(1), &Term::q(0), &state, &zeta).0;
    }
    print!("after {} steps the sequence reads:", state.k);
    for i in 0..4 {
        let out = machine.run(&Process::with_args(Term::app(state.phi.clone(), mk_numeral(i)), []), 10_000, TraceMode::Off).expect("no oracles");
        print!("  {}", out.final_process.head);
    }
    println!();

    for k in 0..=3 {
        let verdict = check_psi_unfolding(&machine, k, 100_000).expect("no oracles");
        println!("Ψ unfolding at k={k}: {verdict}");
        assert!(verdict.is_pass());
    }
}
