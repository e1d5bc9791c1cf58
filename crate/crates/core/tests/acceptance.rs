//! Acceptance criteria, one PASS/FAIL line each. Thresholds are pinned here.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bbc::fixture::bundled;
use bbc::suites::{run_suite, SuiteConfig, SuiteReport};

const SEED: u64 = 0x5eed;
const RANDOM_FUEL: usize = 10_000;
const COHERENCE_FUEL: usize = 100_000;
const CONTINUATION_SAMPLES: usize = 1_000;
const LEMMA2_SAMPLES: usize = 1_000;
const LEMMA34_SAMPLES: usize = 500;
const COHERENCE_TERMS: usize = 100;
const RULES: usize = 9;
const EQUIV_BUDGET: Duration = Duration::from_secs(60);
const THEOREM5_FIXTURES: usize = 5;
const THEOREM5_CANDIDATES: usize = 20;
const WITNESS_CASES: usize = 8 + 2;

struct Criterion {
    name: &'static str,
    ok: bool,
    detail: String,
}

fn suite(name: &str, samples: Option<usize>, fuel: usize) -> Result<SuiteReport, String> {
    let cfg = SuiteConfig { seed: SEED, samples, fuel, ..SuiteConfig::default() };
    run_suite(name, &cfg).map_err(|e| format!("{name}: {e}"))
}

/// Passes when the suite has no failures and at least `min` passes.
fn at_least(name: &'static str, report: Result<SuiteReport, String>, min: usize) -> Criterion {
    match report {
        Ok(r) => Criterion { name, ok: r.failed == 0 && r.passed >= min, detail: format!("{r} (need {min})") },
        Err(e) => Criterion { name, ok: false, detail: e },
    }
}

fn main() -> ExitCode {
    let mut results = vec![
        at_least("machine rules 1-9", suite("rules", None, RANDOM_FUEL), RULES),
        at_least("continuation law", suite("continuations", Some(CONTINUATION_SAMPLES), RANDOM_FUEL), CONTINUATION_SAMPLES),
        at_least("pole composition", suite("lemma2", Some(LEMMA2_SAMPLES), RANDOM_FUEL), LEMMA2_SAMPLES),
        at_least("substitution stability", suite("lemma3", Some(LEMMA34_SAMPLES), RANDOM_FUEL), LEMMA34_SAMPLES),
        at_least("efficient occurrence", suite("lemma4", Some(LEMMA34_SAMPLES), RANDOM_FUEL), LEMMA34_SAMPLES),
        at_least("proof-like coherence", suite("coherence", None, COHERENCE_FUEL), COHERENCE_TERMS),
    ];

    let start = Instant::now();
    let parts: Result<Vec<SuiteReport>, String> = ["equiv", "chi", "psi"].iter().map(|n| suite(n, None, RANDOM_FUEL)).collect();
    let elapsed = start.elapsed();
    results.push(match parts {
        Ok(rs) => Criterion {
            name: "compiler equivalences, chi k<=6, psi k<=3",
            ok: rs.iter().all(SuiteReport::ok) && elapsed < EQUIV_BUDGET,
            detail: format!("{} in {elapsed:.2?} (budget {EQUIV_BUDGET:?})", rs.iter().map(|r| format!("{}: {}/{}", r.name, r.passed, r.total())).collect::<Vec<_>>().join(", ")),
        },
        Err(e) => Criterion { name: "compiler equivalences, chi k<=6, psi k<=3", ok: false, detail: e },
    });

    let fixtures = bundled::THEOREM5.len();
    let mut t5 = at_least("oracle bound", suite("theorem5", Some(THEOREM5_CANDIDATES), COHERENCE_FUEL), fixtures * (THEOREM5_CANDIDATES + 1));
    t5.ok &= fixtures >= THEOREM5_FIXTURES;
    results.push(t5);

    results.push(at_least("witness extraction", suite("witness", None, RANDOM_FUEL), WITNESS_CASES));

    let mut failed = 0;
    for c in &results {
        println!("{} {}: {}", if c.ok { "PASS" } else { "FAIL" }, c.name, c.detail.replace('\n', "; "));
        failed += usize::from(!c.ok);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
