//! One pass/fail line per acceptance criterion. Run with `--nocapture` to
//! see the matrix.

use std::time::Instant;

use k3corr::selftest::{self, Outcome};

/// Sweep sizes and time budgets (seconds); all comparisons are exact.
const SPECIAL_SAMPLES: usize = 200;
const SPECIAL_SEED: u64 = 0x5eed;
const X_RS_MAX: i64 = 4;
const X_D_MAX: i64 = 500;
const X_Y_BOUND: i64 = 200;
const X_Q_BOUND: u64 = 200;
const DSET_RS_MAX: i64 = 4;
const DSET_Q_MAX: u64 = 6;
const DSET_D_MAX: i64 = 2000;
const DSET_MEMBERS: usize = 10;
const DIV_RS_MAX: i64 = 20;
const Y_AB_MAX: i64 = 3;
const Y_C_MAX: i64 = 3;
const Y_D_MAX: i64 = 500;
const Y_DIFF_Q: u64 = 50;
const PELL_D_MAX: u64 = 1000;
const PELL_SCAN_CAP: u64 = 1_000_000;
const PELL_BITS: u64 = 512;
const PELL_STEPS: usize = 50;

struct Line {
    number: u32,
    passed: bool,
    text: String,
}

fn line(number: u32, budget: f64, parts: &[&Outcome]) -> Line {
    let seconds: f64 = parts.iter().map(|o| o.seconds).fold(0.0, f64::max);
    let passed = parts.iter().all(|o| o.passed) && seconds <= budget;
    let detail: Vec<String> = parts
        .iter()
        .map(|o| format!("{} [{} checked, {}: {}]", o.name, o.checked, if o.passed { "ok" } else { "FAIL" }, o.detail))
        .collect();
    Line {
        number,
        passed,
        text: format!("{:.1}s of {budget:.0}s budget; {}", seconds, detail.join("; ")),
    }
}

#[test]
fn acceptance() {
    let started = Instant::now();
    let mut lines = Vec::new();

    let special = selftest::special_case(SPECIAL_SAMPLES, SPECIAL_SEED);
    lines.push(line(1, 5.0, &[&special]));

    let xs = selftest::x_sweep(X_RS_MAX, X_D_MAX, X_Y_BOUND, X_Q_BOUND);
    lines.push(line(2, 120.0, &[&xs.equivalence, &xs.round_trip]));
    lines.push(line(3, 120.0, &[&xs.alpha_rigidity]));

    let ds = selftest::dset_sweep(DSET_RS_MAX, DSET_Q_MAX, DSET_D_MAX, DSET_MEMBERS);
    lines.push(line(4, 120.0, &[&ds.agreement]));
    lines.push(line(5, 30.0, &[&ds.infinitude]));

    let div = selftest::universal_nonemptiness(DIV_RS_MAX);
    lines.push(line(6, 60.0, &[&div]));

    let ys = selftest::y_sweep(Y_AB_MAX, Y_C_MAX, Y_D_MAX, X_Y_BOUND, X_Q_BOUND, Y_DIFF_Q);
    lines.push(line(7, 120.0, &[&ys.equivalence, &ys.asymmetry]));
    lines.push(line(8, 240.0, &[&xs.h1_round_trip, &ys.h1_round_trip]));

    // Minimality by exhaustive scan is only possible up to the cap: several
    // units for d <= 1000 have v beyond 10^20. The line reports FAIL whenever
    // any unit lies past the cap, even though those are matched by the
    // independent cyclic method.
    let pell = selftest::pell_soundness(PELL_D_MAX, PELL_SCAN_CAP, PELL_BITS, PELL_STEPS);
    let mut nine = line(9, 30.0, &[&pell.units, &pell.orbits]);
    if pell.beyond_cap > 0 {
        nine.passed = false;
        nine.text = format!("exhaustive scan infeasible past v={PELL_SCAN_CAP}; {}", nine.text);
    }
    lines.push(nine);

    for l in &lines {
        println!("criterion {}: {} {}", l.number, if l.passed { "PASS" } else { "FAIL" }, l.text);
    }
    println!("total {:.1}s", started.elapsed().as_secs_f64());

    // Criterion 9 cannot pass as stated; its verifiable parts still must.
    let unattainable = [9];
    for l in &lines {
        if !unattainable.contains(&l.number) {
            assert!(l.passed, "criterion {} failed: {}", l.number, l.text);
        }
    }
    assert!(pell.units.passed && pell.orbits.passed, "pell checks failed");
}
