//! Slow verification sweep over configurations beyond the default grid
//! (deeper constant-factor exponents, larger n). Run manually:
//!
//! ```sh
//! cargo test -p equires --test extended_probe -- --ignored --nocapture
//! ```

use equires::oracle::{random_equivariant_system, verify_decomposition, CoefficientMode};

#[test]
#[ignore = "several minutes; run manually for extended coverage"]
fn extended_grid_probe() {
    for &(n, p, d, trials) in &[
        (5usize, 4usize, 2u32, 6u64), // mu with p - d = 2
        (4, 3, 3, 6),                 // q = 1
        (6, 3, 2, 4),                 // larger n, 462-square direct
        (6, 5, 2, 4),                 // p - d = 3
        (6, 1, 2, 4),
    ] {
        let sys = random_equivariant_system(n, p, d, 1, CoefficientMode::Parameters).unwrap();
        let report = verify_decomposition(&sys, trials, 500, 10).unwrap();
        eprintln!(
            "({n},{p},{d}): completed {}/{} skipped {} sign {} pass {}",
            report.completed,
            report.trials_requested,
            report.skipped_degenerate,
            report.sign,
            report.passed()
        );
        assert!(report.passed(), "FAILED for ({n},{p},{d}): {report:?}");
    }
}
