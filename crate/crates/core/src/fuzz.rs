//! Seeded randomized verification of the bound inequalities.
//!
//! Every trial draws a state (pure with probability 1/2, otherwise a
//! full-rank Ginibre state), a fixed number of Gaussian Hermitian
//! observables, and evaluates every check that applies at that observable
//! count. Trial t runs on the stream `derive(seed, t)`, so the whole run
//! is replayable from the summary and any worst case can be reproduced in
//! isolation from its recorded replay seed.
//!
//! Each check tracks a signed statistic where smaller is worse; a trial
//! violates the check when the statistic drops below minus its threshold.
//! Agreement checks use the negated relative deviation, so their worst
//! value is minus the largest deviation seen.

use crate::bounds::{
    gram_det_bound, schrodinger_pair_bound, schrodinger_triple_bound, sum_amgm_bound,
    theorem1_bound, theorem1_bound_commutator_form, theorem2_bound_cycles,
};
use crate::observables::{moment_table, sample_hermitian, Observable};
use crate::rng::{derive, SplitMix64};
use crate::states::{sample_mixed, sample_pure};
use serde::Serialize;

/// Relative tolerance for the cycle expansion against the determinant.
pub const CYCLES_DET_TOL: f64 = 1e-9;
/// Tolerance for the triple closed forms against the determinant.
pub const TRIPLE_FORM_TOL: f64 = 1e-11;
/// Tolerance for the pair bound against the 2x2 determinant.
pub const PAIR_FORM_TOL: f64 = 1e-12;
/// Slack allowed on the dominance and sum-corollary inequalities.
pub const DOMINANCE_TOL: f64 = 1e-11;
/// Largest observable count the cycle expansion is cross-checked at.
pub const CYCLES_CHECK_MAX_N: usize = 6;

#[derive(Debug, Clone)]
pub struct FuzzConfig {
    pub trials: u64,
    pub dims: Vec<usize>,
    pub n_obs: usize,
    pub seed: u64,
    /// Nonnegativity and Gram-PSD tolerance; the identity and dominance
    /// checks keep their fixed thresholds above.
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub threshold: f64,
    pub applicable_trials: u64,
    pub violations: u64,
    /// Smallest statistic seen; the check passes iff this is
    /// >= -threshold for every applicable trial.
    pub worst_value: f64,
    pub worst_trial: Option<u64>,
    pub worst_replay_seed: Option<u64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FuzzSummary {
    pub seed: u64,
    pub trials: u64,
    pub dims: Vec<usize>,
    pub n_obs: usize,
    pub tolerance: f64,
    pub checks: Vec<CheckSummary>,
    pub pass: bool,
}

struct CheckAcc {
    name: &'static str,
    threshold: f64,
    applicable: u64,
    violations: u64,
    worst: f64,
    worst_trial: Option<u64>,
    worst_seed: Option<u64>,
}

impl CheckAcc {
    fn new(name: &'static str, threshold: f64) -> Self {
        Self {
            name,
            threshold,
            applicable: 0,
            violations: 0,
            worst: f64::INFINITY,
            worst_trial: None,
            worst_seed: None,
        }
    }

    fn record(&mut self, trial: u64, replay_seed: u64, value: f64) {
        self.applicable += 1;
        if value < self.worst {
            self.worst = value;
            self.worst_trial = Some(trial);
            self.worst_seed = Some(replay_seed);
        }
        if value < -self.threshold {
            self.violations += 1;
        }
    }

    fn summarize(self) -> CheckSummary {
        let pass = self.violations == 0;
        CheckSummary {
            name: self.name.to_string(),
            threshold: self.threshold,
            applicable_trials: self.applicable,
            violations: self.violations,
            worst_value: if self.applicable == 0 {
                0.0
            } else {
                self.worst
            },
            worst_trial: self.worst_trial,
            worst_replay_seed: self.worst_seed,
            pass,
        }
    }
}

/// Run the configured number of trials and summarize every applicable
/// check. Deterministic in the config.
pub fn run_fuzz(cfg: &FuzzConfig) -> FuzzSummary {
    assert!(cfg.trials >= 1, "trials must be at least 1");
    assert!(!cfg.dims.is_empty(), "need at least one dimension");
    assert!(cfg.dims.iter().all(|&d| d >= 2), "dims must be >= 2");
    assert!(cfg.n_obs >= 1, "need at least one observable");
    assert!(cfg.tolerance > 0.0, "tolerance must be positive");

    let n = cfg.n_obs;
    let mut nonneg_det = CheckAcc::new("theorem2_nonnegativity", cfg.tolerance);
    let mut gram_psd = CheckAcc::new("gram_psd", cfg.tolerance);
    let mut nonneg_t1 = CheckAcc::new("theorem1_nonnegativity", cfg.tolerance);
    let mut cycles_det = CheckAcc::new("cycles_det_agreement", CYCLES_DET_TOL);
    let mut t1_det = CheckAcc::new("theorem1_det_agreement", TRIPLE_FORM_TOL);
    let mut t1_form = CheckAcc::new("commutator_form_agreement", TRIPLE_FORM_TOL);
    let mut pair_det = CheckAcc::new("schrodinger_pair_det_agreement", PAIR_FORM_TOL);
    let mut dominance = CheckAcc::new("dominance_schrodinger_triple", DOMINANCE_TOL);
    let mut sum_amgm = CheckAcc::new("sum_amgm", DOMINANCE_TOL);

    for trial in 0..cfg.trials {
        let replay_seed = derive(cfg.seed, trial);
        let mut rng = SplitMix64::new(replay_seed);
        let dim = cfg.dims[(rng.next_u64() % cfg.dims.len() as u64) as usize];
        let rho = if rng.next_u64() & 1 == 0 {
            sample_pure(&mut rng, dim)
        } else {
            sample_mixed(&mut rng, dim, dim)
        };
        let obs: Vec<Observable> = (0..n)
            .map(|k| sample_hermitian(&mut rng, dim, format!("H{k}")))
            .collect();
        let table = moment_table(&rho, &obs).expect("sampled moments are well formed");

        let product = table.variance_product();
        let product_scale = product.abs().max(1.0);
        let det_bound = gram_det_bound(&table).expect("bookkeeping is real");
        let det_scale = det_bound.abs().max(1.0);

        nonneg_det.record(trial, replay_seed, (product - det_bound) / product_scale);

        let min_gram_eig = table
            .gram()
            .hermitian_eigenvalues(1e-8)
            .expect("Gram matrices are Hermitian up to rounding")[0];
        gram_psd.record(trial, replay_seed, min_gram_eig);

        if n >= 2 {
            let sum = table.variance_sum();
            let sum_bound = sum_amgm_bound(&table).expect("n >= 2");
            sum_amgm.record(trial, replay_seed, sum - sum_bound);
        }
        if (2..=CYCLES_CHECK_MAX_N).contains(&n) {
            let cycles = theorem2_bound_cycles(&table).expect("n within cap");
            cycles_det.record(trial, replay_seed, -(cycles - det_bound).abs() / det_scale);
        }
        if n == 2 {
            let pair = schrodinger_pair_bound(&table, 0, 1).expect("two observables");
            pair_det.record(trial, replay_seed, -(pair - det_bound).abs() / det_scale);
        }
        if n == 3 {
            let t1 = theorem1_bound(&table).expect("three observables");
            let t1_scale = t1.abs().max(1.0);
            nonneg_t1.record(trial, replay_seed, (product - t1) / product_scale);
            t1_det.record(trial, replay_seed, -(t1 - det_bound).abs() / det_scale);
            let form = theorem1_bound_commutator_form(&table).expect("three observables");
            t1_form.record(trial, replay_seed, -(form - t1).abs() / t1_scale);
            let st = schrodinger_triple_bound(&table).expect("three observables");
            dominance.record(trial, replay_seed, t1 - st);
        }
    }

    let checks: Vec<CheckSummary> = [
        nonneg_det, nonneg_t1, gram_psd, cycles_det, t1_det, t1_form, pair_det, dominance, sum_amgm,
    ]
    .into_iter()
    .map(CheckAcc::summarize)
    .collect();
    let pass = checks.iter().all(|c| c.pass);

    FuzzSummary {
        seed: cfg.seed,
        trials: cfg.trials,
        dims: cfg.dims.clone(),
        n_obs: cfg.n_obs,
        tolerance: cfg.tolerance,
        checks,
        pass,
    }
}

impl FuzzSummary {
    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fuzz_is_deterministic_and_passes() {
        let cfg = FuzzConfig {
            trials: 300,
            dims: vec![2, 3],
            n_obs: 3,
            seed: 4242,
            tolerance: 1e-10,
        };
        let a = run_fuzz(&cfg);
        let b = run_fuzz(&cfg);
        assert_eq!(a.to_json(), b.to_json());
        assert!(a.pass, "summary: {}", a.to_json());
        assert_eq!(
            a.check("theorem1_nonnegativity").unwrap().applicable_trials,
            300
        );
        assert_eq!(
            a.check("schrodinger_pair_det_agreement")
                .unwrap()
                .applicable_trials,
            0
        );
    }

    #[test]
    fn pair_checks_apply_at_n2() {
        let cfg = FuzzConfig {
            trials: 200,
            dims: vec![2, 3, 4],
            n_obs: 2,
            seed: 7,
            tolerance: 1e-10,
        };
        let summary = run_fuzz(&cfg);
        assert!(summary.pass, "summary: {}", summary.to_json());
        let pair = summary.check("schrodinger_pair_det_agreement").unwrap();
        assert_eq!(pair.applicable_trials, 200);
        assert!(pair.worst_value >= -PAIR_FORM_TOL);
    }

    #[test]
    fn large_n_skips_cycles_check() {
        let cfg = FuzzConfig {
            trials: 20,
            dims: vec![2],
            n_obs: 7,
            seed: 9,
            tolerance: 1e-10,
        };
        let summary = run_fuzz(&cfg);
        assert_eq!(
            summary
                .check("cycles_det_agreement")
                .unwrap()
                .applicable_trials,
            0
        );
        assert!(summary.pass);
    }
}
