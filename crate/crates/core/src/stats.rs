//! Frequency statistics for the Monte Carlo reports: Wilson score intervals
//! and a chi-square survival function for the sampler equivalence tests.

use crate::math::regularized_gamma_q;

/// z for a two-sided 95% interval; the experiments report is pinned to 95%.
pub const Z_95: f64 = 1.959963984540054;

/// Wilson score interval for `successes` out of `trials` at 95% confidence.
///
/// Stays inside [0,1] and behaves sensibly at frequencies 0 and 1, which is
/// where these experiments operate.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    assert!(trials >= 1, "wilson_interval requires at least one trial");
    assert!(successes <= trials);
    let t = trials as f64;
    let p_hat = successes as f64 / t;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / t;
    let center = p_hat + z2 / (2.0 * t);
    let spread = Z_95 * (p_hat * (1.0 - p_hat) / t + z2 / (4.0 * t * t)).sqrt();
    // Exact endpoints: the score interval is [0, hi] at 0 successes and
    // [lo, 1] at full successes; rounding otherwise leaves ~1e-18 residue.
    let lo = if successes == 0 { 0.0 } else { ((center - spread) / denom).max(0.0) };
    let hi = if successes == trials { 1.0 } else { ((center + spread) / denom).min(1.0) };
    (lo, hi)
}

/// Survival function of the chi-square distribution with `dof` degrees of
/// freedom: P(X > x).
pub fn chi_square_sf(x: f64, dof: u64) -> f64 {
    assert!(dof >= 1);
    if x <= 0.0 {
        return 1.0;
    }
    regularized_gamma_q(dof as f64 / 2.0, x / 2.0)
}
