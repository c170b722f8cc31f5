use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::harness::config::{Suite, SuiteConfig};
use crate::harness::report::{CheckRecord, Report, Status};
use crate::harness::suites;

/// Result of one check body.
pub(crate) enum Outcome {
    Pass { cases: u64, detail: Option<String> },
    Fail { cases: u64, witness: String, detail: Option<String> },
    Skipped { reason: String },
}

impl Outcome {
    pub fn pass(cases: u64) -> Self {
        Outcome::Pass { cases, detail: None }
    }

    pub fn with_detail(self, d: impl Into<String>) -> Self {
        match self {
            Outcome::Pass { cases, .. } => Outcome::Pass { cases, detail: Some(d.into()) },
            Outcome::Fail { cases, witness, .. } => Outcome::Fail { cases, witness, detail: Some(d.into()) },
            s => s,
        }
    }

    /// Run `f` over every case, stopping at the first failure. `f` returns
    /// `Err(witness)` when the identity fails on its input.
    pub fn over<I, T, F>(cases: I, mut f: F) -> Self
    where
        I: IntoIterator<Item = T>,
        F: FnMut(T) -> std::result::Result<(), String>,
    {
        let mut n = 0;
        for c in cases {
            n += 1;
            if let Err(w) = f(c) {
                return Outcome::Fail { cases: n, witness: w, detail: None };
            }
        }
        Outcome::pass(n)
    }
}

/// Collects the records of one suite and owns its random stream.
pub(crate) struct Recorder<'a> {
    pub cfg: &'a SuiteConfig,
    pub rng: ChaCha8Rng,
    prefix: &'static str,
    records: Vec<CheckRecord>,
}

impl<'a> Recorder<'a> {
    fn new(cfg: &'a SuiteConfig, suite: Suite) -> Self {
        // each suite gets its own stream so suites can run in any order
        let salt = suite.name().bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
        Recorder { cfg, rng: ChaCha8Rng::seed_from_u64(cfg.seed ^ salt), prefix: suite.prefix(), records: Vec::new() }
    }

    fn record(&mut self, id: &str, anchor: &str, gating: bool, f: impl FnOnce(&mut ChaCha8Rng) -> Outcome) {
        let start = Instant::now();
        let outcome = f(&mut self.rng);
        let wall_ms = self.cfg.timings.then(|| start.elapsed().as_millis() as u64);
        let (status, cases, detail, witness) = match outcome {
            Outcome::Pass { cases, detail } => (Status::Pass, cases, detail, None),
            Outcome::Fail { cases, witness, detail } => (Status::Fail, cases, detail, Some(witness)),
            Outcome::Skipped { reason } => (Status::Skipped, 0, Some(reason), None),
        };
        self.records.push(CheckRecord {
            id: format!("{}.{id}", self.prefix),
            anchor: anchor.to_string(),
            status,
            gating,
            cases,
            detail,
            witness,
            wall_ms,
        });
    }

    /// A check whose failure fails the run.
    pub fn check(&mut self, id: &str, anchor: &str, f: impl FnOnce(&mut ChaCha8Rng) -> Outcome) {
        self.record(id, anchor, true, f)
    }

    /// A conditional or informational check.
    pub fn report(&mut self, id: &str, anchor: &str, f: impl FnOnce(&mut ChaCha8Rng) -> Outcome) {
        self.record(id, anchor, false, f)
    }
}

/// Run every selected suite. Suites run in parallel; the report is sorted
/// by check id, so its bytes do not depend on scheduling.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let mut records: Vec<CheckRecord> = cfg
        .suites
        .par_iter()
        .map(|&suite| {
            let mut rec = Recorder::new(cfg, suite);
            match suite {
                Suite::GradedCore => suites::graded::run(&mut rec),
                Suite::OddSymmetricAlgebra => suites::odd::run(&mut rec),
                Suite::Hochschild => suites::hochschild::run(&mut rec),
                Suite::AtiyahFormal => suites::atiyah::run(&mut rec),
                Suite::LieDictionary => suites::lie::run(&mut rec),
                Suite::RiemannRoch => suites::rr::run(&mut rec),
            }
            rec.records
        })
        .flatten()
        .collect();
    if cfg.inject_failure {
        records.push(CheckRecord {
            id: "injected.failure".into(),
            anchor: "plumbing".into(),
            status: Status::Fail,
            gating: true,
            cases: 1,
            detail: Some("deliberately failing check".into()),
            witness: Some("none".into()),
            wall_ms: None,
        });
    }
    Ok(Report::new(cfg.clone(), records))
}
