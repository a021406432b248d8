//! One line per acceptance criterion, full problem sizes.
//!
//! Some criteria cannot hold as stated. Their checks still run and still
//! print FAIL; the target only exits nonzero when a check fails that is not
//! in `EXPECTED_FAILURES`, or when an expected failure unexpectedly passes.

use std::process::ExitCode;

use farey_core::verify::{run_criterion, Profile, VerifyOptions, CRITERIA};

/// `(criterion, check id)` pairs known to fail, with the reason.
const EXPECTED_FAILURES: &[(u8, &str, &str)] = &[
    (7, "q+-spectral-norm-q0.5", "||Q e_n|| / ||e_n|| grows like 2^n, so truncated norms diverge"),
    (7, "q--spectral-norm-q0.5", "same"),
    (7, "q+-spectral-norm-q1", "same"),
    (7, "q--spectral-norm-q1", "same"),
    (7, "q+-spectral-norm-q2", "same"),
    (7, "q--spectral-norm-q2", "same"),
    (8, "p+-confined-q0.5", "Rayleigh quotient of P+ exceeds 1 already on span(e_0, e_1)"),
    (13, "power-ratio-varies-q0.5", "the ratio is invariant under x -> 1/x, so x = 1/2 and x = 2 agree"),
    (13, "power-ratio-varies-q2", "same"),
];

fn main() -> ExitCode {
    let opts = VerifyOptions::new(Profile::Full);
    let mut unexpected = Vec::new();
    for &(id, _, _) in CRITERIA.iter() {
        let r = run_criterion(id, &opts);
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!(
            "acceptance criterion {:>2} {:<26} {status}  ({} checks, {:.2} s)",
            r.id,
            r.name,
            r.checks.len(),
            r.seconds
        );
        for c in &r.checks {
            let expected = EXPECTED_FAILURES.iter().find(|e| e.0 == id && e.1 == c.id);
            match (c.passed, expected) {
                (false, Some(e)) => println!("    expected failure {}: {} [{}]", c.id, c.detail, e.2),
                (false, None) => {
                    println!("    UNEXPECTED failure {}: {}", c.id, c.detail);
                    unexpected.push(c.id.clone());
                }
                (true, Some(_)) => {
                    println!("    expected failure {} now passes: {}", c.id, c.detail);
                    unexpected.push(c.id.clone());
                }
                (true, None) => {}
            }
        }
        for e in EXPECTED_FAILURES.iter().filter(|e| e.0 == id) {
            if !r.checks.iter().any(|c| c.id == e.1) {
                println!("    expected check {} was not produced", e.1);
                unexpected.push(e.1.to_string());
            }
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: all checks outside the documented failures pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected outcomes {unexpected:?}");
        ExitCode::FAILURE
    }
}
