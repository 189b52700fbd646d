//! The analytic quantities and inequalities behind the phase-transition
//! argument, evaluated in log-space.
//!
//! The component-count bound P(#C1 = r) <= binom(n, r-1) p^{r-1}
//! (1-p)^{r(n-r)} r^{r-2} underflows double precision for n >= 1000 at
//! moderate r, so every bound is computed and stored as a natural log via
//! ln-gamma. All operations are pure and reentrant.

use crate::error::{Error, Result};
use crate::math::{ln_binomial, xlogy};

/// theta = 1/2 + 10^-3, the giant-fraction threshold.
pub const DEFAULT_THETA: f64 = 0.5 + 1e-3;

/// Exponent in the n^{-target} tail requirement that sizes M.
pub const DEFAULT_TARGET_EXPONENT: f64 = 10.0;

/// e^3, the supercritical threshold constant.
pub const E_CUBED: f64 = 20.085536923187668;

/// e^{-1}, the subcritical threshold constant.
pub const E_INV: f64 = 0.36787944117144233;

/// log of the tree-counting bound on P(#C1 = r):
/// ln[ binom(n, r-1) p^{r-1} (1-p)^{r(n-r)} r^{r-2} ].
///
/// For r = 1 this is the exact isolated-vertex identity ln[(1-p)^{n-1}].
/// p in {0, 1} is handled as a limit: vanished factors give -inf unless
/// their exponent is zero.
pub fn tree_bound_log(n: u64, p: f64, r: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::param("n must be positive"));
    }
    if r < 1 || r > n {
        return Err(Error::param(format!("r = {r} outside 1..={n}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!("p must lie in [0,1], got {p}")));
    }
    if r == 1 {
        return Ok(xlogy(n - 1, 1.0 - p));
    }
    Ok(ln_binomial(n, r - 1)
        + xlogy(r - 1, p)
        + xlogy(r * (n - r), 1.0 - p)
        + (r - 2) as f64 * (r as f64).ln())
}

/// log of the simplified chain bound for r >= 2:
/// ln(1/(Cr)) - r (C - 1 - ln C - Cr/n).
///
/// The chain is valid only from r = 2 up (it uses (1 - 1/r)^{-(r-1)} <= e).
pub fn simplified_bound_log(n: u64, c: f64, r: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::param("n must be positive"));
    }
    if r < 2 {
        return Err(Error::param(format!("r = {r} below 2; the chain bound needs r >= 2")));
    }
    if !(c > 0.0) {
        return Err(Error::param(format!("C must be positive, got {c}")));
    }
    let rf = r as f64;
    let nf = n as f64;
    Ok(-(c * rf).ln() - rf * (c - 1.0 - c.ln() - c * rf / nf))
}

/// delta = C(1 - theta) - 1 - ln C, the small-component decay rate.
pub fn delta(c: f64, theta: f64) -> f64 {
    assert!(c > 0.0, "delta requires C > 0");
    c * (1.0 - theta) - 1.0 - c.ln()
}

/// gamma = 1/(C (e^delta - 1)), the expected small-component mass per vertex.
pub fn gamma(c: f64, delta_val: f64) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::param(format!("C must be positive, got {c}")));
    }
    if !(delta_val > 0.0) {
        return Err(Error::param(format!(
            "gamma requires delta > 0, got {delta_val}"
        )));
    }
    Ok(1.0 / (c * delta_val.exp_m1()))
}

/// delta_1 = ln(1/(eC)) = -1 - ln C, defined iff eC < 1.
pub fn delta1(c: f64) -> Result<f64> {
    if !(c >= 0.0) {
        return Err(Error::param(format!("C must be nonnegative, got {c}")));
    }
    if c >= E_INV {
        return Err(Error::param(format!(
            "delta1 undefined: requires C < 1/e = {E_INV}, got {c}"
        )));
    }
    Ok(-1.0 - c.ln())
}

/// Smallest positive integer M with e^{-rate M log n} <= n^{-target},
/// i.e. ceil(target / rate), clamped to at least 1.
pub fn min_m(rate: f64, n: u64, target_exponent: f64) -> Result<u64> {
    if !(rate > 0.0) {
        return Err(Error::param(format!("rate must be positive, got {rate}")));
    }
    if n < 2 {
        return Err(Error::param("min_m requires n >= 2"));
    }
    if !(target_exponent > 0.0) {
        return Err(Error::param(format!(
            "target exponent must be positive, got {target_exponent}"
        )));
    }
    let m = (target_exponent / rate).ceil();
    Ok((m as u64).max(1))
}

/// Markov threshold and failure bound:
/// P(sum X_i > gamma (1+alpha) n) <= 1/(1+alpha), needing gamma (1+alpha) < 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkovBound {
    pub threshold: f64,
    pub prob_bound: f64,
}

pub fn markov_bound(gamma_val: f64, alpha: f64, n: u64) -> Result<MarkovBound> {
    if !(gamma_val > 0.0 && gamma_val < 1.0) {
        return Err(Error::param(format!(
            "gamma must lie in (0,1), got {gamma_val}"
        )));
    }
    if !(alpha > 0.0) {
        return Err(Error::param(format!("alpha must be positive, got {alpha}")));
    }
    let load = gamma_val * (1.0 + alpha);
    if !(load < 1.0) {
        return Err(Error::param(format!(
            "gamma (1+alpha) = {load} must be < 1"
        )));
    }
    Ok(MarkovBound {
        threshold: load * n as f64,
        prob_bound: 1.0 / (1.0 + alpha),
    })
}

/// The giant-size and probability constants of the large-C estimate.
///
/// `prob_lower` is the stated 1 - e^{-C/100}; `prob_lower_proof` is the
/// 1 - 2 e^{-C/8} the underlying derivation reaches. Both are reported.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem2Constants {
    pub giant_lower: f64,
    pub prob_lower: f64,
    pub prob_lower_proof: f64,
    pub small_sum_upper: f64,
}

/// Probe for "C large enough": the only property the construction needs is
/// delta(C, theta) >= C/4 at the default theta.
pub fn theorem2_c_passes(c: f64) -> bool {
    c > 0.0 && delta(c, DEFAULT_THETA) >= c / 4.0
}

pub fn theorem2_constants(c: f64, n: u64) -> Result<Theorem2Constants> {
    if !(c > 0.0) {
        return Err(Error::param(format!("C must be positive, got {c}")));
    }
    if !theorem2_c_passes(c) {
        return Err(Error::param(format!(
            "C = {c} fails the large-C probe delta(C, {DEFAULT_THETA}) >= C/4"
        )));
    }
    let nf = n as f64;
    let tail = (-c / 8.0).exp();
    Ok(Theorem2Constants {
        giant_lower: nf - nf * tail,
        prob_lower: 1.0 - (-c / 100.0).exp(),
        prob_lower_proof: 1.0 - 2.0 * tail,
        small_sum_upper: nf * tail,
    })
}

/// Smallest C in the grid where the delta >= C/4 probe first holds.
pub fn theorem2_onset(grid: impl IntoIterator<Item = f64>) -> Option<f64> {
    grid.into_iter().find(|&c| theorem2_c_passes(c))
}

/// Policy for choosing the log-size cutoff multiplier M.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MPolicy {
    /// M = min_m(rate, n, target) with the regime's rate (delta or delta_1).
    #[default]
    Auto,
    Explicit(u64),
}

impl MPolicy {
    pub fn resolve(self, rate: f64, n: u64, target_exponent: f64) -> Result<u64> {
        match self {
            MPolicy::Auto => min_m(rate, n, target_exponent),
            MPolicy::Explicit(m) => {
                if m == 0 {
                    Err(Error::param("explicit M must be a positive integer"))
                } else {
                    Ok(m)
                }
            }
        }
    }
}

/// The phase constants for a given C: theta, delta, gamma, delta_1 (when
/// defined), the Markov slack alpha and the cutoff multiplier M.
///
/// Invariants: theta in (1/2, 1); delta = C(1-theta) - 1 - ln C; gamma is
/// present iff delta > 0 and then equals 1/(C(e^delta - 1)); delta_1 is
/// present iff eC < 1 and then equals -1 - ln C; alpha is present when the
/// owning regime defines a valid Markov slack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseParams {
    pub c: f64,
    pub theta: f64,
    pub delta: f64,
    pub gamma: Option<f64>,
    pub alpha: Option<f64>,
    pub delta1: Option<f64>,
    pub m: u64,
}

impl PhaseParams {
    fn base(c: f64, theta: f64) -> Result<(f64, Option<f64>, Option<f64>)> {
        if !(c >= 0.0) {
            return Err(Error::param(format!("C must be nonnegative, got {c}")));
        }
        if !(theta > 0.5 && theta < 1.0) {
            return Err(Error::param(format!(
                "theta must lie in (1/2, 1), got {theta}"
            )));
        }
        let d = c * (1.0 - theta) - 1.0 - c.ln();
        let g = if d > 0.0 && c > 0.0 { Some(1.0 / (c * d.exp_m1())) } else { None };
        let d1 = if c < E_INV { Some(-1.0 - c.ln()) } else { None };
        Ok((d, g, d1))
    }

    /// Constants for the supercritical regime (giant threshold n/2).
    ///
    /// alpha is the midpoint of the admissible range: alpha = (1-gamma)/(2 gamma),
    /// so gamma (1+alpha) = (1+gamma)/2 < 1; any alpha > 0 with
    /// gamma (1+alpha) < 1 is admissible.
    pub fn theorem1_supercritical(
        c: f64,
        theta: f64,
        n: u64,
        m_policy: MPolicy,
        target_exponent: f64,
    ) -> Result<Self> {
        let (d, g, d1) = Self::base(c, theta)?;
        let g = g.ok_or_else(|| {
            Error::param(format!(
                "supercritical constants need delta > 0; delta({c}, {theta}) = {d}"
            ))
        })?;
        if g >= 1.0 {
            return Err(Error::param(format!(
                "supercritical constants need gamma < 1, got gamma = {g}"
            )));
        }
        let alpha = (1.0 - g) / (2.0 * g);
        let m = m_policy.resolve(d, n, target_exponent)?;
        Ok(PhaseParams { c, theta, delta: d, gamma: Some(g), alpha: Some(alpha), delta1: d1, m })
    }

    /// Constants for the subcritical all-components-small regime; M is sized
    /// from delta_1 and no Markov slack is defined.
    pub fn theorem1_subcritical(
        c: f64,
        theta: f64,
        n: u64,
        m_policy: MPolicy,
        target_exponent: f64,
    ) -> Result<Self> {
        let (d, g, d1) = Self::base(c, theta)?;
        let rate = d1.ok_or_else(|| {
            Error::param(format!("subcritical constants need C < 1/e, got C = {c}"))
        })?;
        let m = m_policy.resolve(rate, n, target_exponent)?;
        Ok(PhaseParams { c, theta, delta: d, gamma: g, alpha: None, delta1: d1, m })
    }

    /// Constants for the large-C estimate: alpha = e^{C/8} - 1, gated on the
    /// delta >= C/4 probe.
    pub fn theorem2(
        c: f64,
        theta: f64,
        n: u64,
        m_policy: MPolicy,
        target_exponent: f64,
    ) -> Result<Self> {
        let (d, g, d1) = Self::base(c, theta)?;
        if !theorem2_c_passes(c) {
            return Err(Error::param(format!(
                "C = {c} fails the large-C probe delta(C, {DEFAULT_THETA}) >= C/4"
            )));
        }
        let alpha = (c / 8.0).exp_m1();
        let m = m_policy.resolve(d, n, target_exponent)?;
        Ok(PhaseParams { c, theta, delta: d, gamma: g, alpha: Some(alpha), delta1: d1, m })
    }
}

/// One row of a bound table: the log bounds at a given r and, when the exact
/// oracle applies, the exact log probability they must dominate.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundRow {
    pub n: u64,
    pub p: f64,
    pub r: u64,
    pub log_tree_bound: f64,
    pub log_simplified_bound: Option<f64>,
    pub exact_log_prob: Option<f64>,
    pub dominance_ok: bool,
}

/// A table of bound rows plus the rows that violated a dominance check.
/// Every `dominance_ok` flag is the literal comparison result.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundReport {
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    pub fn violations(&self) -> impl Iterator<Item = &BoundRow> {
        self.rows.iter().filter(|r| !r.dominance_ok)
    }

    pub fn violation_count(&self) -> usize {
        self.violations().count()
    }
}

/// Per-r bound table at p = C/n for r = 1..=r_max, with exact probabilities
/// attached when n is within the oracle range.
///
/// Dominance per row: simplified >= tree (r >= 2) and tree >= exact (when
/// present). The r = 1 tree bound is an exact identity, so that comparison
/// allows float rounding of one part in 10^12.
pub fn bound_table(n: u64, c: f64, r_max: u64) -> Result<BoundReport> {
    if !(c >= 0.0) {
        return Err(Error::param(format!("C must be nonnegative, got {c}")));
    }
    if n == 0 {
        return Err(Error::param("n must be positive"));
    }
    if r_max < 1 || r_max > n {
        return Err(Error::param(format!("r_max = {r_max} outside 1..={n}")));
    }
    let p = c / n as f64;
    if p > 1.0 {
        return Err(Error::param(format!("C = {c} exceeds n = {n}, so p = C/n > 1")));
    }
    let exact = if (2..=crate::oracle::FLOAT_ORACLE_MAX_N).contains(&n) {
        Some(crate::oracle::exact_component_distribution(n, &p)?)
    } else {
        None
    };
    let mut rows = Vec::with_capacity(r_max as usize);
    for r in 1..=r_max {
        let tree = tree_bound_log(n, p, r)?;
        let simplified = if r >= 2 && c > 0.0 {
            Some(simplified_bound_log(n, c, r)?)
        } else {
            None
        };
        let exact_log = exact.as_ref().map(|d| d.probs()[(r - 1) as usize].ln());
        let mut ok = true;
        if let Some(s) = simplified {
            ok &= s >= tree;
        }
        if let Some(e) = exact_log {
            ok &= dominates(tree, e, r);
        }
        rows.push(BoundRow {
            n,
            p,
            r,
            log_tree_bound: tree,
            log_simplified_bound: simplified,
            exact_log_prob: exact_log,
            dominance_ok: ok,
        });
    }
    Ok(BoundReport { rows })
}

/// Strict dominance of log-bound over exact log-probability for r >= 2,
/// where the bound carries a real margin. r = 1 is the isolated-vertex
/// identity (equality), so recognize it up to 1e-12 relative rounding.
pub(crate) fn dominates(log_bound: f64, exact_log: f64, r: u64) -> bool {
    if r == 1 {
        log_bound >= exact_log - 1e-12
    } else {
        log_bound >= exact_log
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LN2: f64 = std::f64::consts::LN_2;

    #[test]
    fn tree_bound_hand_computed() {
        // binom(4,1) * 0.5 * 0.5^4 * 2^0 = 0.125.
        let v = tree_bound_log(4, 0.5, 2).unwrap();
        assert!((v - 0.125f64.ln()).abs() < 1e-12, "{v}");
        // r = 1: (1-p)^(n-1) = 0.5^3 = 0.125.
        let v = tree_bound_log(4, 0.5, 1).unwrap();
        assert!((v - 0.125f64.ln()).abs() < 1e-12, "{v}");
    }

    #[test]
    fn tree_bound_limits_at_degenerate_p() {
        assert_eq!(tree_bound_log(5, 0.0, 1).unwrap(), 0.0); // prob 1
        assert_eq!(tree_bound_log(5, 0.0, 3).unwrap(), f64::NEG_INFINITY);
        assert_eq!(tree_bound_log(5, 1.0, 1).unwrap(), f64::NEG_INFINITY);
        assert_eq!(tree_bound_log(5, 1.0, 3).unwrap(), f64::NEG_INFINITY);
        // r = n at p = 1: every vanished factor has exponent 0.
        let v = tree_bound_log(5, 1.0, 5).unwrap();
        let expect = ln_binomial(5, 4) + 3.0 * 5.0f64.ln();
        assert!((v - expect).abs() < 1e-12);
        assert_eq!(tree_bound_log(1, 0.7, 1).unwrap(), 0.0);
    }

    #[test]
    fn tree_bound_rejects_bad_inputs() {
        assert!(tree_bound_log(4, 0.5, 0).is_err());
        assert!(tree_bound_log(4, 0.5, 5).is_err());
        assert!(tree_bound_log(4, -0.1, 2).is_err());
        assert!(tree_bound_log(4, 1.5, 2).is_err());
        assert!(tree_bound_log(0, 0.5, 1).is_err());
    }

    #[test]
    fn simplified_bound_matches_algebraic_identity() {
        // log(1/(Cr)) - r(C-1-log C) + C r^2/n, exactly the returned shape.
        let (n, c, r) = (1000u64, E_CUBED, 10u64);
        let v = simplified_bound_log(n, c, r).unwrap();
        let expect = -(c * 10.0).ln() - 10.0 * (c - 1.0 - c.ln()) + c * 100.0 / 1000.0;
        assert!((v - expect).abs() < 1e-12);
    }

    #[test]
    fn simplified_bound_dominates_tree_bound_at_e3() {
        let n = 1000u64;
        let tree = tree_bound_log(n, E_CUBED / n as f64, 2).unwrap();
        let simp = simplified_bound_log(n, E_CUBED, 2).unwrap();
        assert!(simp >= tree, "simplified {simp} < tree {tree}");
    }

    #[test]
    fn simplified_bound_large_n_limit() {
        // As n -> inf at r = 2: log(1/(2C)) - 2(C - 1 - 3) for C = e^3.
        let v = simplified_bound_log(1_000_000_000, E_CUBED, 2).unwrap();
        let limit = -35.86422102693528;
        assert!((v - limit).abs() < 1e-6, "{v} vs {limit}");
    }

    #[test]
    fn simplified_bound_rejects_small_r() {
        assert!(simplified_bound_log(100, 2.0, 1).is_err());
        assert!(simplified_bound_log(100, 0.0, 2).is_err());
    }

    #[test]
    fn delta_at_e3_exceeds_log2() {
        let d = delta(E_CUBED, DEFAULT_THETA);
        assert!((d - 6.022682924670646).abs() < 1e-12, "{d}");
        assert!(d > LN2);
    }

    #[test]
    fn delta_minus_log2_increasing_beyond_knee() {
        // g(C) = delta(C, theta) - log 2 is increasing for C > 1/(1-theta).
        let knee = 1.0 / (1.0 - DEFAULT_THETA);
        let mut prev = f64::NEG_INFINITY;
        let mut c = knee + 0.01;
        while c < 1000.0 {
            let g = delta(c, DEFAULT_THETA) - LN2;
            assert!(g > prev, "g not increasing at C = {c}");
            prev = g;
            c *= 1.05;
        }
    }

    #[test]
    fn gamma_values() {
        let g = gamma(E_CUBED, 6.022682924670646).unwrap();
        assert!((g - 1.2093506318031037e-4).abs() < 1e-15, "{g}");
        assert!(g < 1.0);
        // Unit case: C = 1, delta = ln 2 gives 1/(e^{ln 2} - 1) = 1.
        let g = gamma(1.0, LN2).unwrap();
        assert!((g - 1.0).abs() < 1e-12);
        assert!(gamma(1.0, 0.0).is_err());
        assert!(gamma(1.0, -0.5).is_err());
    }

    #[test]
    fn gamma_below_one_on_supercritical_grid() {
        let mut c = E_CUBED * 1.0000001;
        while c <= 1000.0 {
            let d = delta(c, DEFAULT_THETA);
            assert!(d > LN2, "delta <= log 2 at C = {c}");
            assert!(gamma(c, d).unwrap() < 1.0, "gamma >= 1 at C = {c}");
            c *= 1.02;
        }
    }

    #[test]
    fn delta1_values() {
        let v = delta1(0.3).unwrap();
        assert!((v - 0.20397280432593612).abs() < 1e-12, "{v}");
        let v = delta1((-2.0f64).exp()).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        // Just below the threshold: small positive.
        let v = delta1(E_INV - 1e-6).unwrap();
        assert!(v > 0.0 && v < 1e-5, "{v}");
        assert!(delta1(E_INV).is_err());
        assert!(delta1(0.5).is_err());
    }

    #[test]
    fn min_m_values() {
        assert_eq!(min_m(0.20397280432593612, 100, 10.0).unwrap(), 50);
        assert_eq!(min_m(10.0, 100, 10.0).unwrap(), 1);
        assert_eq!(min_m(6.022682924670646, 100, 10.0).unwrap(), 2);
        assert_eq!(min_m(f64::INFINITY, 100, 10.0).unwrap(), 1);
        assert!(min_m(0.0, 100, 10.0).is_err());
        assert!(min_m(-1.0, 100, 10.0).is_err());
        assert!(min_m(1.0, 1, 10.0).is_err());
    }

    #[test]
    fn markov_bound_values() {
        let mb = markov_bound(0.1, 1.0, 100).unwrap();
        assert!((mb.threshold - 20.0).abs() < 1e-12);
        assert!((mb.prob_bound - 0.5).abs() < 1e-12);

        // Large-C construction at C = 25: gamma = e^{-C/4}, alpha = e^{C/8} - 1.
        let c = 25.0f64;
        let mb = markov_bound((-c / 4.0).exp(), (c / 8.0).exp_m1(), 100_000).unwrap();
        assert!((mb.prob_bound - 0.04393693362340742).abs() < 1e-15);
        assert!((mb.threshold - 1e5 * 0.04393693362340742).abs() < 1e-9);

        assert!(markov_bound(0.6, 1.0, 100).is_err()); // gamma(1+alpha) >= 1
        assert!(markov_bound(1.2, 0.5, 100).is_err());
        assert!(markov_bound(0.1, 0.0, 100).is_err());
    }

    #[test]
    fn theorem2_constants_values() {
        let t = theorem2_constants(100.0, 1_000_000).unwrap();
        assert!((t.giant_lower - 999996.273346828).abs() < 1e-6, "{}", t.giant_lower);
        assert!((t.prob_lower - 0.6321205588285577).abs() < 1e-15);
        let t = theorem2_constants(25.0, 100_000).unwrap();
        assert!((t.prob_lower - 0.22119921692859512).abs() < 1e-15);
        assert!((t.small_sum_upper - 1e5 * 0.04393693362340742).abs() < 1e-9);
        assert!((t.prob_lower_proof - (1.0 - 2.0 * 0.04393693362340742)).abs() < 1e-15);
        // delta(100) = 44.29 >= 25: probe passes; small C fails.
        assert!(theorem2_c_passes(100.0));
        assert!(!theorem2_c_passes(5.0));
        assert!(theorem2_constants(5.0, 100).is_err());
    }

    #[test]
    fn theorem2_probe_onset_and_tail() {
        let grid: Vec<f64> = (8..=2000).map(|k| k as f64 / 2.0).collect();
        let onset = theorem2_onset(grid.iter().copied()).unwrap();
        assert!(onset < 16.0, "onset {onset}");
        // Holds for every grid point C >= 40.
        for &c in grid.iter().filter(|&&c| c >= 40.0) {
            assert!(theorem2_c_passes(c), "probe fails at C = {c}");
        }
    }

    #[test]
    fn phase_params_supercritical() {
        let p =
            PhaseParams::theorem1_supercritical(E_CUBED * 1.05, DEFAULT_THETA, 100_000, MPolicy::Auto, 10.0)
                .unwrap();
        assert!(p.delta > LN2);
        let g = p.gamma.unwrap();
        let a = p.alpha.unwrap();
        assert!(g < 1.0);
        assert!(g * (1.0 + a) < 1.0);
        assert_eq!(p.m, 2);
        assert!(p.delta1.is_none());
        // Below the knee: gamma undefined, constructor refuses.
        assert!(PhaseParams::theorem1_supercritical(1.0, DEFAULT_THETA, 100, MPolicy::Auto, 10.0).is_err());
    }

    #[test]
    fn phase_params_subcritical() {
        let p = PhaseParams::theorem1_subcritical(0.3, DEFAULT_THETA, 10_000, MPolicy::Auto, 10.0)
            .unwrap();
        assert_eq!(p.m, 50);
        assert!(p.alpha.is_none());
        assert!((p.delta1.unwrap() - 0.20397280432593612).abs() < 1e-12);
        assert!(PhaseParams::theorem1_subcritical(0.5, DEFAULT_THETA, 100, MPolicy::Auto, 10.0).is_err());
        // Explicit M overrides auto.
        let p = PhaseParams::theorem1_subcritical(0.3, DEFAULT_THETA, 10_000, MPolicy::Explicit(7), 10.0)
            .unwrap();
        assert_eq!(p.m, 7);
    }

    #[test]
    fn phase_params_theorem2() {
        let p = PhaseParams::theorem2(25.0, DEFAULT_THETA, 100_000, MPolicy::Auto, 10.0).unwrap();
        let a = p.alpha.unwrap();
        assert!((a - ((25.0f64 / 8.0).exp() - 1.0)).abs() < 1e-12);
        assert_eq!(p.m, 2);
        assert!(PhaseParams::theorem2(5.0, DEFAULT_THETA, 100, MPolicy::Auto, 10.0).is_err());
    }

    #[test]
    fn phase_params_validates_theta() {
        assert!(PhaseParams::theorem1_subcritical(0.3, 0.5, 100, MPolicy::Auto, 10.0).is_err());
        assert!(PhaseParams::theorem1_subcritical(0.3, 1.0, 100, MPolicy::Auto, 10.0).is_err());
    }

    // Direct (non-log) evaluation of the product, safe only at small n.
    fn direct_tree_bound(n: u64, p: f64, r: u64) -> f64 {
        if r == 1 {
            return (1.0 - p).powi(n as i32 - 1);
        }
        let mut binom = 1.0f64;
        for i in 0..(r - 1) {
            binom = binom * (n - i) as f64 / (i + 1) as f64;
        }
        binom
            * p.powi(r as i32 - 1)
            * (1.0 - p).powi((r * (n - r)) as i32)
            * (r as f64).powi(r as i32 - 2)
    }

    #[test]
    fn log_space_matches_direct_product_for_small_n() {
        let mut checked = 0u64;
        for n in 2..=30u64 {
            for &p in &[0.1, 0.3, 0.5, 0.7, 0.9] {
                for r in 1..=n {
                    let direct = direct_tree_bound(n, p, r);
                    if !direct.is_finite() || direct < 1e-290 {
                        continue; // outside the safe direct-evaluation range
                    }
                    let via_log = tree_bound_log(n, p, r).unwrap().exp();
                    let rel = ((via_log - direct) / direct).abs();
                    assert!(rel <= 1e-10, "n={n} p={p} r={r}: rel error {rel}");
                    checked += 1;
                }
            }
        }
        assert!(checked > 1500, "only {checked} combinations were checkable");
    }

    #[test]
    fn bound_table_shape() {
        let t = bound_table(12, 2.4, 12).unwrap();
        assert_eq!(t.rows.len(), 12);
        assert!(t.rows[0].log_simplified_bound.is_none());
        assert!(t.rows[0].exact_log_prob.is_some());
        assert_eq!(t.violation_count(), 0);
        // Beyond the oracle range the exact column is empty.
        let t = bound_table(100, 2.0, 10).unwrap();
        assert!(t.rows.iter().all(|r| r.exact_log_prob.is_none()));
        assert_eq!(t.violation_count(), 0);
    }
}
