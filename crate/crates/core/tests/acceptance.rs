//! One PASS/FAIL line per acceptance criterion. A criterion passes when every
//! exact check in its suite passes within the time budget.
//! Built without the libtest harness so the lines always reach the output.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use quiver_shuffle::verify::{self, Suite, VerifyOptions};

const CRITERIA: [(u32, Suite, u64); 10] = [
    (1, Suite::CubicVanishing, 60),
    (2, Suite::WheelPairing, 30),
    (3, Suite::WheelPairingSpecialized, 30),
    (4, Suite::DeltaIdentity, 10),
    (5, Suite::Qserre, 60),
    (6, Suite::QuadPairing, 60),
    (7, Suite::LeadingWord, 10),
    (8, Suite::StraightenRoundtrip, 120),
    (9, Suite::GenusG, 120),
    (10, Suite::ShuffleStructure, 60),
];

fn main() -> ExitCode {
    let opts = VerifyOptions::default();
    let mut failed = Vec::new();
    for (n, suite, budget) in CRITERIA {
        let start = Instant::now();
        let checks = verify::run_default(suite, &opts);
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget);
        let ok = verify::all_passed(&checks) && in_time;
        println!(
            "{} criterion {n} {} ({} checks, {:.1}s of {budget}s)",
            if ok { "PASS" } else { "FAIL" },
            suite.name(),
            checks.len(),
            elapsed.as_secs_f64()
        );
        for c in checks.iter().filter(|c| !c.passed) {
            println!("    {c}");
        }
        if !in_time {
            println!("    over the time budget");
        }
        if !ok {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
