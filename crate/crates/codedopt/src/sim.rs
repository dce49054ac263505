//! Worker runtime simulation: distributions, arrival schedules, and
//! stopping rules.
//!
//! The simulator is single-threaded and fully deterministic given an RNG:
//! it draws one runtime per worker, sorts arrivals, and feeds them to a
//! stopping rule that decides when the master stops waiting. Decoding
//! itself is charged zero simulated time (see
//! [`crate::optimizer::RunOptions::decode_cost`] for the sensitivity knob).

use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::code::CodeConfig;
use crate::codec::{check_decodability, ErasedOutputs};
use crate::{Error, Result};

/// How long a worker takes to return its output, in seconds.
#[derive(Debug, Clone, PartialEq)]
pub enum RuntimeDistribution {
    /// `shift + Exp(rate)`: a fixed startup cost plus an exponential tail.
    ShiftedExponential { shift: f64, rate: f64 },
    /// Uniform draws (with replacement) from recorded runtimes.
    Empirical { samples: Vec<f64> },
}

impl RuntimeDistribution {
    /// Shifted exponential with mean `shift + 1/rate`; `shift >= 0`,
    /// `rate > 0`.
    pub fn shifted_exponential(shift: f64, rate: f64) -> Result<Self> {
        if !shift.is_finite() || shift < 0.0 {
            return Err(Error::BadRuntimeDistribution(format!(
                "shift {shift} must be finite and >= 0"
            )));
        }
        if !rate.is_finite() || rate <= 0.0 {
            return Err(Error::BadRuntimeDistribution(format!(
                "rate {rate} must be finite and > 0"
            )));
        }
        Ok(Self::ShiftedExponential { shift, rate })
    }

    /// Empirical distribution over recorded runtimes; needs at least one
    /// sample and every sample finite and strictly positive.
    pub fn empirical(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::BadRuntimeDistribution("no runtime samples".into()));
        }
        for (i, &s) in samples.iter().enumerate() {
            if !s.is_finite() || s <= 0.0 {
                return Err(Error::BadRuntimeDistribution(format!(
                    "sample {i} is {s}, expected a finite positive runtime"
                )));
            }
        }
        Ok(Self::Empirical { samples })
    }

    /// Loads an empirical distribution from a plain text file with one
    /// positive decimal runtime (seconds) per line; blank lines and lines
    /// starting with `#` are ignored.
    pub fn from_sample_file(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let text = std::fs::read_to_string(&path)?;
        let mut samples = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v: f64 = line.parse().map_err(|_| {
                Error::Parse(format!(
                    "runtime file line {}: bad float {line:?}",
                    lineno + 1
                ))
            })?;
            samples.push(v);
        }
        Self::empirical(samples)
    }

    /// Draws one runtime; always strictly positive.
    pub fn sample(&self, rng: &mut impl Rng) -> f64 {
        match self {
            Self::ShiftedExponential { shift, rate } => {
                shift
                    + Exp::new(*rate)
                        .expect("rate validated at construction")
                        .sample(rng)
            }
            Self::Empirical { samples } => samples[rng.gen_range(0..samples.len())],
        }
    }
}

/// Per-worker runtimes plus the induced arrival order (ties broken by
/// worker index).
#[derive(Debug, Clone, PartialEq)]
pub struct ArrivalSchedule {
    /// `times[i]` is worker `i`'s runtime.
    pub times: Vec<f64>,
    /// Worker indices sorted by arrival time.
    pub order: Vec<usize>,
}

impl ArrivalSchedule {
    /// Draws `n` independent runtimes from `dist`.
    pub fn sample(dist: &RuntimeDistribution, n: usize, rng: &mut impl Rng) -> Self {
        assert!(n >= 1, "need at least one worker");
        Self::from_times((0..n).map(|_| dist.sample(rng)).collect())
    }

    /// Builds the schedule for explicitly given runtimes.
    pub fn from_times(times: Vec<f64>) -> Self {
        let mut order: Vec<usize> = (0..times.len()).collect();
        order.sort_by(|&a, &b| times[a].total_cmp(&times[b]).then(a.cmp(&b)));
        Self { times, order }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// When the master stops waiting for worker outputs.
#[derive(Debug, Clone, PartialEq)]
pub enum StoppingRule {
    /// Wait for every worker.
    All,
    /// Stop after the first `k` arrivals.
    FirstK(usize),
    /// Stop at the first arrival that makes the outputs decodable under the
    /// given code.
    FirstDecodable(CodeConfig),
}

impl StoppingRule {
    /// Checks the rule can fire for a block of `n` workers.
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            Self::All => Ok(()),
            Self::FirstK(k) => {
                if *k == 0 || *k > n {
                    Err(Error::BadStoppingRule(format!(
                        "first_k with k = {k} cannot fire for {n} workers"
                    )))
                } else {
                    Ok(())
                }
            }
            Self::FirstDecodable(cfg) => {
                if cfg.n_total != n {
                    Err(Error::BadStoppingRule(format!(
                        "first_decodable code has block length {}, got {n} workers",
                        cfg.n_total
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Stable name used in traces and configs.
    pub fn name(&self) -> &'static str {
        match self {
            Self::All => "all",
            Self::FirstK(_) => "first_k",
            Self::FirstDecodable(_) => "first_decodable",
        }
    }
}

/// Replays one iteration's arrivals against a stopping rule: workers are
/// admitted in schedule order until the rule fires. Returns the admitted
/// outputs and the simulated stop time (the last admitted arrival).
pub fn run_iteration(
    schedule: &ArrivalSchedule,
    rule: &StoppingRule,
    outputs: &[f64],
) -> Result<(ErasedOutputs, f64)> {
    let n = outputs.len();
    if schedule.len() != n {
        return Err(Error::BlockLength {
            expected: n,
            got: schedule.len(),
        });
    }
    rule.validate(n)?;
    let mut available = vec![false; n];
    let mut admitted = 0usize;
    for &worker in &schedule.order {
        available[worker] = true;
        admitted += 1;
        let fired = match rule {
            StoppingRule::All => admitted == n,
            StoppingRule::FirstK(k) => admitted == *k,
            StoppingRule::FirstDecodable(cfg) => check_decodability(cfg, &available),
        };
        if fired {
            let stop_time = schedule.times[worker];
            return Ok((ErasedOutputs::new(outputs.to_vec(), available)?, stop_time));
        }
    }
    Err(Error::BadStoppingRule(format!(
        "rule {} never fired with all {n} workers admitted",
        rule.name()
    )))
}
