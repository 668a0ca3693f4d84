//! Acceptance gate: every reproduction criterion must pass at its pinned
//! tolerance. Runs the criteria sequentially with a wall-clock budget and
//! prints one pass/fail line per criterion (visible with --nocapture).

use std::time::{Duration, Instant};

use ergolab::suite::{render_summary, science_criterion_fns, CriterionOutcome};

const MASTER_SEED: u64 = 42;

#[test]
fn acceptance_criteria() {
    let t_total = Instant::now();
    let mut rows: Vec<CriterionOutcome> = Vec::new();
    let mut failures: Vec<String> = Vec::new();

    for f in science_criterion_fns() {
        let t = Instant::now();
        let row = f(MASTER_SEED).expect("criterion ran to completion");
        let elapsed = t.elapsed();
        let status = if row.passed { "PASS" } else { "FAIL" };
        println!(
            "{status} {:2} {:34} ({:7.2?}) {}",
            row.id,
            row.name,
            elapsed,
            row.details
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(" ")
        );
        if !row.passed {
            failures.push(format!("criterion {} {}: {:?}", row.id, row.name, row.details));
        }
        // Stated per-criterion wall-clock budgets.
        match row.id {
            1 => assert!(
                elapsed < Duration::from_secs(1),
                "criterion 1 exceeded its 1 s budget: {elapsed:?}"
            ),
            2 => assert!(
                elapsed < Duration::from_secs(60),
                "criterion 2 exceeded its 60 s budget: {elapsed:?}"
            ),
            _ => {}
        }
        rows.push(row);
    }

    // Criterion 11: a fresh rerun with the same master seed must render a
    // byte-identical summary.
    let t = Instant::now();
    let again: Vec<CriterionOutcome> = science_criterion_fns()
        .into_iter()
        .map(|f| f(MASTER_SEED).expect("criterion ran to completion"))
        .collect();
    let first = render_summary(MASTER_SEED, &rows);
    let second = render_summary(MASTER_SEED, &again);
    let identical = first == second;
    println!(
        "{} 11 {:34} ({:7.2?}) byte_identical_rerun={identical}",
        if identical { "PASS" } else { "FAIL" },
        "determinism",
        t.elapsed()
    );
    if !identical {
        failures.push("criterion 11 determinism: summaries differ between reruns".into());
    }

    let elapsed = t_total.elapsed();
    println!("total wall clock: {elapsed:?}");
    assert!(
        elapsed < Duration::from_secs(600),
        "suite exceeded its 10 minute budget: {elapsed:?}"
    );
    assert!(failures.is_empty(), "failed criteria:\n{}", failures.join("\n"));
}
