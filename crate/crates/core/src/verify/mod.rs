//! Seeded randomized suites checking the identities of the calculus and the
//! classifiers on random combos.
//!
//! Every trial draws from its own ChaCha stream keyed by `(seed, suite,
//! trial)`, trials run in parallel, and results are collected in trial
//! order, so a report depends only on the configuration and never on the
//! thread count.

mod gen;
mod suites;

use std::fmt;

use rayon::prelude::*;

use crate::error::Result;
use crate::field::{Backend, FieldParams};

pub use gen::Sampler;

/// Deliberate defects used to check that the suites catch real errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mutation {
    #[default]
    None,
    /// Flips the sign of the ancestor sum when lowering a coefficient table.
    LowerBasisSign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub params: FieldParams,
    pub trials: usize,
    pub seed: u64,
    /// Largest level drawn (further capped at `p - 1` for `F_p[[t]]`).
    pub max_level: usize,
    /// Largest combo depth drawn.
    pub max_depth: usize,
    /// Evaluation points per reconstruction trial.
    pub points: usize,
    pub mutation: Mutation,
}

impl VerifyConfig {
    pub fn new(params: FieldParams) -> Self {
        VerifyConfig {
            params,
            trials: 100,
            seed: 0,
            max_level: 3,
            max_depth: 2,
            points: 50,
            mutation: Mutation::None,
        }
    }

    pub(crate) fn level_cap(&self) -> usize {
        match self.params.backend() {
            Backend::Zp => self.max_level.max(1),
            Backend::FpT => self.max_level.clamp(1, self.params.p() as usize - 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub trials: usize,
    pub passed: usize,
    /// `(trial index, description)` of the first failing trial.
    pub counterexample: Option<(usize, String)>,
    /// Set when the suite does not apply to the configured field.
    pub skipped: Option<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub params: FieldParams,
    pub seed: u64,
    pub trials: usize,
    pub suites: Vec<SuiteReport>,
    pub warnings: Vec<String>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::ok)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.name == name)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "verify {} seed={} trials={}",
            self.params, self.seed, self.trials
        )?;
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        for s in &self.suites {
            write!(
                f,
                "suite {} trials={} passed={}",
                s.name, s.trials, s.passed
            )?;
            match (&s.skipped, &s.counterexample) {
                (Some(why), _) => writeln!(f, " skipped ({why})")?,
                (None, None) => writeln!(f, " ok")?,
                (None, Some((i, why))) => writeln!(f, " FAIL trial={i} {why}")?,
            }
        }
        let failed = self.suites.iter().filter(|s| !s.ok()).count();
        writeln!(
            f,
            "summary suites={} failed={failed} {}",
            self.suites.len(),
            if failed == 0 { "ok" } else { "FAIL" }
        )
    }
}

type Check = fn(&mut Sampler, &VerifyConfig) -> Result<Option<String>>;

pub(crate) struct Suite {
    pub name: &'static str,
    pub check: Check,
    /// `Some(reason)` when the suite cannot run for these parameters.
    pub applicable: fn(&VerifyConfig) -> Option<String>,
}

/// Names of all suites in execution order.
pub fn suite_names() -> Vec<&'static str> {
    suites::ALL.iter().map(|s| s.name).collect()
}

/// Runs every suite.
pub fn run(cfg: &VerifyConfig) -> VerifyReport {
    run_selected(cfg, &suite_names())
}

/// Runs the named suites (unknown names are reported as warnings).
pub fn run_selected(cfg: &VerifyConfig, names: &[&str]) -> VerifyReport {
    let mut warnings = Vec::new();
    if cfg.trials == 0 {
        warnings.push("no trials: every suite passes vacuously".to_string());
    }
    let mut out = Vec::new();
    for name in names {
        match suites::ALL.iter().position(|s| s.name == *name) {
            Some(i) => out.push(run_suite(cfg, i)),
            None => warnings.push(format!("unknown suite `{name}`")),
        }
    }
    VerifyReport {
        params: cfg.params,
        seed: cfg.seed,
        trials: cfg.trials,
        suites: out,
        warnings,
    }
}

fn run_suite(cfg: &VerifyConfig, index: usize) -> SuiteReport {
    let suite = &suites::ALL[index];
    if let Some(why) = (suite.applicable)(cfg) {
        return SuiteReport {
            name: suite.name,
            trials: 0,
            passed: 0,
            counterexample: None,
            skipped: Some(why),
        };
    }
    let results: Vec<Option<String>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut g = Sampler::new(cfg.params, cfg.seed, ((index as u64) << 32) | trial as u64);
            match (suite.check)(&mut g, cfg) {
                Ok(v) => v,
                Err(e) => Some(format!("error: {e}")),
            }
        })
        .collect();
    let passed = results.iter().filter(|r| r.is_none()).count();
    let counterexample = results
        .into_iter()
        .enumerate()
        .find_map(|(i, r)| r.map(|why| (i, why)));
    SuiteReport {
        name: suite.name,
        trials: cfg.trials,
        passed,
        counterexample,
        skipped: None,
    }
}
