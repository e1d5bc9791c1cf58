//! Run the seeded property suites with a small sample count.

use bbc::suites::{run_suite, SuiteConfig, SUITE_NAMES};

fn main() {
    let cfg = SuiteConfig { samples: Some(100), ..SuiteConfig::default() };
    for name in SUITE_NAMES {
        let report = run_suite(name, &cfg).expect("suite runs");
        println!("{} {report}", if report.ok() { "PASS" } else { "FAIL" });
    }
}
