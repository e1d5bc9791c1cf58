//! Load a fixture file and use its terms and sequences.

use bbc::fixture::parse_fixture;
use bbc::term::DEFAULT_N;
use bbc::SeqRegistry;

const SRC: &str = r"
-- named terms see the builtins and earlier terms
term twice = \f x. f (f x)
term U = \f. f #1 (twice (f #0) p)
seq xs {
  default: I
  3: K
}
f { support: [2, 5] }
";

fn main() {
    let registry = SeqRegistry::new();
    let fx = parse_fixture(SRC, &registry, DEFAULT_N).expect("fixture parses");
    for (name, term) in &fx.terms {
        println!("term {name} = {term}");
    }
    let xs = fx.seq("xs").expect("defined above");
    println!("xs: {:?}", (0..5).map(|i| xs.get(i).to_string()).collect::<Vec<_>>());
    println!("closed sequences are oracles too: @xs = {:?}", registry.lookup("xs"));
    let f = fx.predicate.expect("defined above");
    println!("f holds at {:?}", (0..8).filter(|n| f.holds(*n)).collect::<Vec<_>>());
}
