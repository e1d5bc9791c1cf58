//! Compile λ-terms to combinators and compare them with the builtins.

use bbc::compiler::{behavioral_equiv, behavioral_equiv_with, builtin, builtin_env, compile_str, EquivConfig, Env, Probe};
use bbc::{Machine, SeqRegistry};

fn main() {
    let env = Env::new();
    for src in [r"\x. x", r"\x y. x", r"\x y. y x", r"\f x. f (f x)", r"\t k x. (k)(x)t"] {
        println!("{src:<20} => {}", compile_str(src, &env).expect("closed term"));
    }

    let eta = Env::new().with_eta(true);
    println!("with η: \\x. q1 x => {}", compile_str(r"\x. q1 x", &eta).expect("closed term"));

    let registry = SeqRegistry::new();
    let machine = Machine::new(&registry);

    let sigma = compile_str(r"\n f x. f (n f x)", &env).expect("closed term");
    let verdict = behavioral_equiv(&machine, &sigma, &builtin("sigma").expect("builtin"), 3, 10_000).expect("no oracles");
    println!("compiled successor vs (BW)(C)(B)BB: {verdict:?}");
    assert!(verdict.is_equal());

    // builtin names are in scope through builtin_env
    let chi = compile_str(r"\k f z i. lt i k (f i) z", &builtin_env()).expect("closed term");
    let probes = [Probe::Numeric(5), Probe::Var, Probe::Var, Probe::Numeric(7)];
    let verdict = behavioral_equiv_with(&machine, &chi, &builtin("chi").expect("builtin"), &probes, EquivConfig::default()).expect("no oracles");
    println!("compiled χ vs builtin χ: {verdict:?}");
    assert!(verdict.is_equal());
}
