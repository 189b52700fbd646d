//! Monte Carlo experiments over (n, C, M, trials, seed) configurations:
//! sample graphs on per-trial RNG substreams, profile components, evaluate
//! the theorem events and compare empirical frequencies against the claimed
//! probability bounds.
//!
//! Trials are independent work units executed in parallel with rayon; each
//! owns its RNG substream and the aggregation is a commutative fold over the
//! index-ordered outcomes, so reports are bit-identical across runs and
//! thread counts.

use rayon::prelude::*;
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundReport, BoundRow, MPolicy, PhaseParams};
use crate::components::{evaluate_events, profile_from_edges, EventFlags};
use crate::error::{Error, Result};
use crate::oracle;
use crate::sampler::{edge_stream, trial_rng, EdgeMethod};
use crate::stats::wilson_interval;

/// Which theorem's construction drives the thresholds and bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// C > e^3: giant at n/2, bound P(E(M)) >= epsilon_1.
    #[serde(rename = "supercritical-T1")]
    SupercriticalT1,
    /// C < 1/e: all components below M log n, bound P(F(M)) >= 1 - 1/n^2.
    #[serde(rename = "subcritical-T1")]
    SubcriticalT1,
    /// C large: giant at n - n e^{-C/8}, bound P(E(M)) >= 1 - e^{-C/100}.
    #[serde(rename = "theorem2")]
    Theorem2,
}

fn default_theta() -> f64 {
    bounds::DEFAULT_THETA
}

fn default_target_exponent() -> f64 {
    bounds::DEFAULT_TARGET_EXPONENT
}

/// One experiment: all fields are config-file visible (snake_case JSON).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: u64,
    pub c: f64,
    pub trials: u64,
    pub master_seed: u64,
    #[serde(default = "default_theta")]
    pub theta: f64,
    #[serde(default, with = "m_policy_serde")]
    pub m_policy: MPolicy,
    pub regime: Regime,
    #[serde(default = "default_target_exponent")]
    pub target_exponent: f64,
}

/// MPolicy appears in JSON as the string "auto" or a bare integer.
mod m_policy_serde {
    use super::*;

    pub fn serialize<S: Serializer>(v: &MPolicy, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            MPolicy::Auto => s.serialize_str("auto"),
            MPolicy::Explicit(m) => s.serialize_u64(*m),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<MPolicy, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = MPolicy;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("\"auto\" or a positive integer")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<MPolicy, E> {
                if s == "auto" {
                    Ok(MPolicy::Auto)
                } else {
                    Err(E::custom(format!("unknown M policy {s:?}")))
                }
            }
            fn visit_u64<E: de::Error>(self, m: u64) -> std::result::Result<MPolicy, E> {
                Ok(MPolicy::Explicit(m))
            }
            fn visit_i64<E: de::Error>(self, m: i64) -> std::result::Result<MPolicy, E> {
                u64::try_from(m)
                    .map(MPolicy::Explicit)
                    .map_err(|_| E::custom("M must be nonnegative"))
            }
        }
        d.deserialize_any(V)
    }
}

impl ExperimentConfig {
    pub fn from_json(json: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(json)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::config("n must be at least 2"));
        }
        if self.trials < 1 {
            return Err(Error::config("trials must be at least 1"));
        }
        if !(self.c >= 0.0) {
            return Err(Error::config(format!("C must be nonnegative, got {}", self.c)));
        }
        if self.c > self.n as f64 {
            return Err(Error::config(format!(
                "C = {} exceeds n = {}, so p = C/n > 1",
                self.c, self.n
            )));
        }
        if !(self.theta > 0.5 && self.theta < 1.0) {
            return Err(Error::config(format!(
                "theta must lie in (1/2, 1), got {}",
                self.theta
            )));
        }
        if !(self.target_exponent > 0.0) {
            return Err(Error::config("target_exponent must be positive"));
        }
        self.plan().map(|_| ())
    }

    /// Edge probability p = C/n.
    pub fn p(&self) -> f64 {
        self.c / self.n as f64
    }

    /// Derive the regime's constants and thresholds.
    pub(crate) fn plan(&self) -> Result<Plan> {
        let params = match self.regime {
            Regime::SupercriticalT1 => PhaseParams::theorem1_supercritical(
                self.c,
                self.theta,
                self.n,
                self.m_policy,
                self.target_exponent,
            )?,
            Regime::SubcriticalT1 => PhaseParams::theorem1_subcritical(
                self.c,
                self.theta,
                self.n,
                self.m_policy,
                self.target_exponent,
            )?,
            Regime::Theorem2 => PhaseParams::theorem2(
                self.c,
                self.theta,
                self.n,
                self.m_policy,
                self.target_exponent,
            )?,
        };
        let nf = self.n as f64;
        let (giant_threshold, markov_threshold) = match self.regime {
            Regime::SupercriticalT1 => {
                let mb = bounds::markov_bound(
                    params.gamma.expect("supercritical gamma"),
                    params.alpha.expect("supercritical alpha"),
                    self.n,
                )?;
                (nf / 2.0, Some(mb.threshold))
            }
            // The subcritical argument never invokes Markov (gamma > 1 there);
            // E_M is still evaluated against the n/2 criterion, bound-less.
            Regime::SubcriticalT1 => (nf / 2.0, None),
            Regime::Theorem2 => {
                let t2 = bounds::theorem2_constants(self.c, self.n)?;
                (t2.giant_lower, Some(t2.small_sum_upper))
            }
        };
        Ok(Plan { params, giant_threshold, markov_threshold })
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Plan {
    pub params: PhaseParams,
    pub giant_threshold: f64,
    pub markov_threshold: Option<f64>,
}

/// Scalar outcome of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub trial_index: u64,
    pub giant_size: u64,
    pub second_size: u64,
    pub small_sum: u64,
    pub flags: EventFlags,
}

/// Run a single trial on substream (master_seed, trial_index).
pub fn run_trial(config: &ExperimentConfig, trial_index: u64) -> Result<TrialOutcome> {
    config.validate()?;
    let plan = config.plan()?;
    run_trial_with_plan(config, &plan, trial_index)
}

fn run_trial_with_plan(
    config: &ExperimentConfig,
    plan: &Plan,
    trial_index: u64,
) -> Result<TrialOutcome> {
    let mut rng = trial_rng(config.master_seed, trial_index);
    let profile = profile_from_edges(
        config.n,
        edge_stream(config.n, config.p(), &mut rng, EdgeMethod::Auto),
    );
    let flags = evaluate_events(&profile, &plan.params, plan.giant_threshold)?;
    let giant = profile.giant_size();
    let second = profile.second_size();

    // Uniqueness logic of the supercritical argument, checked per trial: when
    // a >= theta*n component exists, no component sits in [M log n, theta*n]
    // and theta*n >= n/2 + 10, the giant is unique and everything else is
    // below M log n.
    let nf = config.n as f64;
    let theta_n = plan.params.theta * nf;
    if flags.a_theta && !flags.b_theta && theta_n >= nf / 2.0 + 10.0 {
        let m_log_n = plan.params.m as f64 * nf.ln();
        let giants = profile.sizes().iter().filter(|&&s| s as f64 >= theta_n.ceil()).count();
        debug_assert_eq!(giants, 1, "trial {trial_index}: giant not unique");
        assert!(
            (second as f64) < m_log_n,
            "trial {trial_index}: A and not-B held but the second component \
             has {second} >= M log n = {m_log_n} vertices"
        );
    }

    Ok(TrialOutcome {
        trial_index,
        giant_size: giant,
        second_size: second,
        small_sum: flags.small_sum,
        flags,
    })
}

/// Events tabulated by the report, in emission order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    EM,
    /// The theorem2 E(M) row re-checked against the stronger 1 - 2e^{-C/8}.
    EMProofBound,
    FM,
    ATheta,
    BTheta,
    HTheta,
    /// {small_sum > gamma (1+alpha) n} from the Markov step.
    MarkovSmallSum,
}

impl EventKind {
    pub fn name(&self) -> &'static str {
        match self {
            EventKind::EM => "e_m",
            EventKind::EMProofBound => "e_m_proof_bound",
            EventKind::FM => "f_m",
            EventKind::ATheta => "a_theta",
            EventKind::BTheta => "b_theta",
            EventKind::HTheta => "h_theta",
            EventKind::MarkovSmallSum => "markov_small_sum",
        }
    }
}

/// Direction of the analytic bound for an event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundDirection {
    /// The analytic claim is P(event) >= bound; pass iff wilson_lo >= bound.
    Lower,
    /// The analytic claim is P(event) <= bound; pass iff wilson_hi <= bound.
    Upper,
}

impl BoundDirection {
    pub fn name(&self) -> &'static str {
        match self {
            BoundDirection::Lower => "lower",
            BoundDirection::Upper => "upper",
        }
    }
}

/// Frequency row for one event: Wilson 95% interval plus the analytic bound
/// it is compared against. `pass` is the literal comparison of the interval
/// endpoint with the bound, present only when a bound applies in the regime.
#[derive(Debug, Clone, PartialEq)]
pub struct EventStats {
    pub event: EventKind,
    pub successes: u64,
    pub empirical_freq: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub paper_bound: Option<f64>,
    pub direction: Option<BoundDirection>,
    pub pass: Option<bool>,
}

/// Aggregated experiment output. CSV renderings exclude the runtime, so
/// reports are byte-identical across reruns of the same config.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub params: PhaseParams,
    pub giant_threshold: f64,
    pub markov_threshold: Option<f64>,
    /// epsilon_1 = alpha/(2(1+alpha)) for the configured alpha, when defined.
    pub epsilon1: Option<f64>,
    pub events: Vec<EventStats>,
    pub mean_small_frac: f64,
    pub max_small_frac: f64,
    pub trials: Vec<TrialOutcome>,
    pub runtime_secs: f64,
}

impl ExperimentReport {
    pub fn event(&self, kind: EventKind) -> Option<&EventStats> {
        self.events.iter().find(|e| e.event == kind)
    }

    pub fn any_failed(&self) -> bool {
        self.events.iter().any(|e| e.pass == Some(false))
    }
}

/// Run all trials in parallel and aggregate.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let plan = config.plan()?;
    let started = std::time::Instant::now();

    let trials: Vec<TrialOutcome> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial_with_plan(config, &plan, t))
        .collect::<Result<Vec<_>>>()?;

    let runtime_secs = started.elapsed().as_secs_f64();
    Ok(aggregate(config, &plan, trials, runtime_secs))
}

fn aggregate(
    config: &ExperimentConfig,
    plan: &Plan,
    trials: Vec<TrialOutcome>,
    runtime_secs: f64,
) -> ExperimentReport {
    let t = config.trials;
    let nf = config.n as f64;
    let count = |f: &dyn Fn(&TrialOutcome) -> bool| trials.iter().filter(|o| f(o)).count() as u64;

    let e_m = count(&|o| o.flags.e_m);
    let f_m = count(&|o| o.flags.f_m);
    let a_theta = count(&|o| o.flags.a_theta);
    let b_theta = count(&|o| o.flags.b_theta);
    let h_theta = count(&|o| o.flags.h_theta);
    let markov = plan
        .markov_threshold
        .map(|thr| count(&|o| o.small_sum as f64 > thr));

    let epsilon1 = plan.params.alpha.map(|a| a / (2.0 * (1.0 + a)));
    let n_pow = |k: i32| nf.powi(k);

    // Analytic bounds per regime; None where the regime makes no claim.
    let t2 = match config.regime {
        Regime::Theorem2 => Some(
            bounds::theorem2_constants(config.c, config.n).expect("validated in plan"),
        ),
        _ => None,
    };
    let claims = match config.regime {
        Regime::SupercriticalT1 => {
            let alpha = plan.params.alpha.expect("supercritical alpha");
            PaperClaims {
                e_m: epsilon1,
                a_theta: Some(alpha / (1.0 + alpha)),
                b_theta: Some(n_pow(-9)),
                markov: Some(1.0 / (1.0 + alpha)),
                ..PaperClaims::default()
            }
        }
        Regime::SubcriticalT1 => PaperClaims {
            f_m: Some(1.0 - n_pow(-2)),
            h_theta: Some(n_pow(-8)),
            ..PaperClaims::default()
        },
        Regime::Theorem2 => {
            let t2 = t2.as_ref().expect("theorem2 constants");
            let alpha = plan.params.alpha.expect("theorem2 alpha");
            PaperClaims {
                e_m: Some(t2.prob_lower),
                a_theta: Some(1.0 - (-config.c / 8.0).exp()),
                b_theta: Some(n_pow(-9)),
                markov: Some(1.0 / (1.0 + alpha)),
                ..PaperClaims::default()
            }
        }
    };

    let mut events = vec![
        stat(EventKind::EM, e_m, t, claims.e_m, BoundDirection::Lower),
    ];
    if let Some(t2) = &t2 {
        events.push(stat(
            EventKind::EMProofBound,
            e_m,
            t,
            Some(t2.prob_lower_proof),
            BoundDirection::Lower,
        ));
    }
    events.push(stat(EventKind::FM, f_m, t, claims.f_m, BoundDirection::Lower));
    events.push(stat(EventKind::ATheta, a_theta, t, claims.a_theta, BoundDirection::Lower));
    events.push(stat(EventKind::BTheta, b_theta, t, claims.b_theta, BoundDirection::Upper));
    events.push(stat(EventKind::HTheta, h_theta, t, claims.h_theta, BoundDirection::Upper));
    if let Some(m) = markov {
        events.push(stat(EventKind::MarkovSmallSum, m, t, claims.markov, BoundDirection::Upper));
    }

    let small_fracs: Vec<f64> = trials.iter().map(|o| o.small_sum as f64 / nf).collect();
    let mean_small_frac = small_fracs.iter().sum::<f64>() / small_fracs.len() as f64;
    let max_small_frac = small_fracs.iter().fold(0.0f64, |a, &b| a.max(b));

    ExperimentReport {
        config: config.clone(),
        params: plan.params,
        giant_threshold: plan.giant_threshold,
        markov_threshold: plan.markov_threshold,
        epsilon1,
        events,
        mean_small_frac,
        max_small_frac,
        trials,
        runtime_secs,
    }
}

/// The probability bounds a regime asserts, per event.
#[derive(Default)]
struct PaperClaims {
    e_m: Option<f64>,
    f_m: Option<f64>,
    a_theta: Option<f64>,
    b_theta: Option<f64>,
    h_theta: Option<f64>,
    markov: Option<f64>,
}

fn stat(
    event: EventKind,
    successes: u64,
    trials: u64,
    bound: Option<f64>,
    direction: BoundDirection,
) -> EventStats {
    let (lo, hi) = wilson_interval(successes, trials);
    let freq = successes as f64 / trials as f64;
    let pass = bound.map(|b| match direction {
        BoundDirection::Lower => lo >= b,
        BoundDirection::Upper => hi <= b,
    });
    EventStats {
        event,
        successes,
        empirical_freq: freq,
        wilson_lo: lo,
        wilson_hi: hi,
        paper_bound: bound,
        direction: bound.map(|_| direction),
        pass,
    }
}

/// Check the tree-counting bound against the exact oracle over a grid:
/// exp(tree_bound_log(n, p, r)) >= P(#C1 = r) for every n <= n_max, p in the
/// grid and 1 <= r <= n. Violations are report content, not errors.
pub fn verify_bound_dominance(n_max: u64, p_grid: &[f64]) -> Result<BoundReport> {
    if !(2..=12).contains(&n_max) {
        return Err(Error::param("n_max must lie in 2..=12"));
    }
    let mut rows = Vec::new();
    for n in 2..=n_max {
        for &p in p_grid {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::param(format!("grid p = {p} outside [0,1]")));
            }
            let exact = oracle::exact_component_distribution(n, &p)?;
            for r in 1..=n {
                let tree = bounds::tree_bound_log(n, p, r)?;
                let exact_log = exact.probs()[(r - 1) as usize].ln();
                let ok = bounds::dominates(tree, exact_log, r);
                rows.push(BoundRow {
                    n,
                    p,
                    r,
                    log_tree_bound: tree,
                    log_simplified_bound: None,
                    exact_log_prob: Some(exact_log),
                    dominance_ok: ok,
                });
            }
        }
    }
    Ok(BoundReport { rows })
}

/// Report CSV: one row per event.
pub fn render_report_csv(report: &ExperimentReport) -> String {
    let mut out = String::from("event,empirical_freq,wilson_lo,wilson_hi,paper_bound,bound_direction,pass\n");
    for e in &report.events {
        let bound = e.paper_bound.map(|b| b.to_string()).unwrap_or_default();
        let dir = e.direction.map(|d| d.name().to_string()).unwrap_or_default();
        let pass = e
            .pass
            .map(|p| if p { "pass" } else { "fail" }.to_string())
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            e.event.name(),
            e.empirical_freq,
            e.wilson_lo,
            e.wilson_hi,
            bound,
            dir,
            pass
        ));
    }
    out
}

/// Per-trial CSV for plotting, rows ordered by trial index.
pub fn render_trials_csv(report: &ExperimentReport) -> String {
    let mut out = String::from("trial_index,giant_size,second_size,small_sum\n");
    for o in &report.trials {
        out.push_str(&format!(
            "{},{},{},{}\n",
            o.trial_index, o.giant_size, o.second_size, o.small_sum
        ));
    }
    out
}
