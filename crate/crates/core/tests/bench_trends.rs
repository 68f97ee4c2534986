use swap_planarity::bench::{hull_statistics, summarize_thresholds, threshold_sweep, HullConfig, SeedSchedule};

/// Mean attempts per success against the restart threshold fall and then
/// rise again: tiny thresholds restart before a tight set can finish and
/// huge ones keep extending dead ends.
#[test]
fn attempts_against_threshold_dip_in_the_middle() {
    let rows = threshold_sweep(&[11], 2500, &[50, 500, 20_000], 60, 100_000, SeedSchedule::default());
    let summary = summarize_thresholds(&rows);
    let mean = |t: u64| summary.iter().find(|s| s.threshold == t).unwrap().mean_attempts;
    let (low, mid, high) = (mean(50), mean(500), mean(20_000));
    assert!(mid < low && mid < high, "means {low} {mid} {high}");
}

/// With almost no separation the interior grows with n, like uniform samples.
#[test]
fn interior_grows_with_n_when_delta_is_tiny() {
    let rows = hull_statistics(&[10, 20, 40], &[1], 100, &HullConfig::default());
    let means: Vec<f64> = rows.iter().map(|r| r.mean_interior).collect();
    assert!(means.windows(2).all(|w| w[0] < w[1]), "{means:?}");
    assert!(rows.iter().all(|r| r.failures == 0));
}
