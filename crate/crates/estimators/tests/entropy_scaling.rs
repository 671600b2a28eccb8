//! Large-sample behavior of the plug-in entropy rate.

use estimators::{plugin_entropy_rate, sample_coded_window};
use process_core::{sample_iid, ProbVector};

const SEED: u64 = 20260817;

#[test]
fn uniform_source_rate_at_order_two() {
    let p = ProbVector::uniform(10).unwrap();
    let x = sample_iid(&p, 10_000_000, 0, SEED).unwrap();
    let est = plugin_entropy_rate(&x, 2).unwrap();
    assert!(
        (est.bits_per_symbol - 10f64.log2()).abs() <= 0.01,
        "order-2 rate of the uniform source: {}",
        est.bits_per_symbol
    );
}

#[test]
fn doubling_the_order_never_raises_the_rate_much() {
    // Block entropy over block length is nonincreasing, so the plug-in
    // rate at order 2k sits below the order-k rate up to sampling noise.
    let p = ProbVector::uniform(10).unwrap();
    let x = sample_iid(&p, 10_000_000, 0, SEED + 1).unwrap();
    let mut previous = f64::INFINITY;
    for k in [1, 2, 4] {
        let est = plugin_entropy_rate(&x, k).unwrap();
        assert!(
            est.bits_per_symbol <= previous + 0.05,
            "order {k} estimate {} above order {}'s {previous}",
            est.bits_per_symbol,
            k / 2
        );
        previous = est.bits_per_symbol;
    }
}

#[test]
fn coded_process_rate_stays_above_the_certified_floor() {
    // The coded process provably carries more than 2.8529 bits/symbol;
    // the order-3 plug-in estimate on a million-symbol sample keeps a
    // comfortable margin above the 2.5-bit check threshold even with its
    // finite-sample bias.
    let x = sample_coded_window(1_000_000, SEED).unwrap();
    let est = plugin_entropy_rate(&x, 3).unwrap();
    assert!(
        est.bits_per_symbol >= 2.5,
        "order-3 coded rate estimate {} fell below 2.5 bits",
        est.bits_per_symbol
    );
    assert!(
        est.bits_per_symbol <= 100f64.log2(),
        "estimate exceeds the pair-alphabet cap"
    );
}
