//! The master's optimization loop: build perturbation directions, collect
//! worker outputs under a simulated straggler pattern, form a gradient
//! estimate, and update the iterate with gradient descent or ADAM.
//!
//! Everything is deterministic given the experiment seed: iteration `t`
//! draws direction signs from one counter-mode RNG stream and worker
//! runtimes from another, so two methods run with the same seed see the
//! same arrival times.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::code::CodeConfig;
use crate::codec::DirectionSet;
use crate::estimators::{
    coded_gradient, es_gradient, finite_difference_from_outputs, symmetric_directional_derivative,
    EstimatorKind, GradientEstimate,
};
use crate::objectives::Objective;
use crate::sim::{run_iteration, ArrivalSchedule, RuntimeDistribution, StoppingRule};
use crate::{Error, Result};

/// Gradient estimation strategy for a whole experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// One coordinate per worker; missing coordinates update as zero.
    Fd,
    /// Average of received outputs times their directions.
    Es,
    /// Decode the directional derivatives back to the gradient.
    Coded,
    /// Compute both the decoded and the averaged candidate step each
    /// iteration, evaluate the objective at both, and keep the cheaper one.
    Hybrid,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Self::Fd => "fd",
            Self::Es => "es",
            Self::Coded => "coded",
            Self::Hybrid => "hybrid",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "fd" => Some(Self::Fd),
            "es" => Some(Self::Es),
            "coded" => Some(Self::Coded),
            "hybrid" => Some(Self::Hybrid),
            _ => None,
        }
    }
}

/// Parameter update rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateRule {
    Gd,
    Adam,
}

impl UpdateRule {
    pub fn name(self) -> &'static str {
        match self {
            Self::Gd => "gd",
            Self::Adam => "adam",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "gd" => Some(Self::Gd),
            "adam" => Some(Self::Adam),
            _ => None,
        }
    }
}

/// ADAM hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamParams {
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamParams {
    fn default() -> Self {
        Self {
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// Iterate plus update-rule state (ADAM moments are zero until used).
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerState {
    pub theta: Vec<f64>,
    pub step_size: f64,
    pub rule: UpdateRule,
    pub adam: AdamParams,
    pub method: Method,
    /// First-moment estimate.
    pub m: Vec<f64>,
    /// Second-moment estimate.
    pub v: Vec<f64>,
    /// Number of updates applied so far.
    pub t: u64,
}

/// Core ADAM update shared by [`OptimizerState::step`] and
/// [`OptimizerState::preview`] so a previewed iterate is bitwise equal to
/// the committed one.
fn adam_next(
    theta: &[f64],
    m: &[f64],
    v: &[f64],
    t_next: u64,
    gradient: &[f64],
    step_size: f64,
    p: AdamParams,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let bias1 = 1.0 - p.beta1.powi(t_next as i32);
    let bias2 = 1.0 - p.beta2.powi(t_next as i32);
    let mut theta_next = Vec::with_capacity(theta.len());
    let mut m_next = Vec::with_capacity(theta.len());
    let mut v_next = Vec::with_capacity(theta.len());
    for i in 0..theta.len() {
        let g = gradient[i];
        let mi = p.beta1 * m[i] + (1.0 - p.beta1) * g;
        let vi = p.beta2 * v[i] + (1.0 - p.beta2) * g * g;
        let m_hat = mi / bias1;
        let v_hat = vi / bias2;
        theta_next.push(theta[i] - step_size * m_hat / (v_hat.sqrt() + p.epsilon));
        m_next.push(mi);
        v_next.push(vi);
    }
    (theta_next, m_next, v_next)
}

impl OptimizerState {
    pub fn new(theta0: Vec<f64>, step_size: f64, rule: UpdateRule, method: Method) -> Self {
        let dim = theta0.len();
        Self {
            theta: theta0,
            step_size,
            rule,
            adam: AdamParams::default(),
            method,
            m: vec![0.0; dim],
            v: vec![0.0; dim],
            t: 0,
        }
    }

    pub fn with_adam_params(mut self, adam: AdamParams) -> Self {
        self.adam = adam;
        self
    }

    /// The iterate that [`step`](Self::step) would produce, without
    /// committing it.
    pub fn preview(&self, gradient: &[f64]) -> Vec<f64> {
        assert_eq!(gradient.len(), self.theta.len(), "gradient length mismatch");
        match self.rule {
            UpdateRule::Gd => self
                .theta
                .iter()
                .zip(gradient)
                .map(|(&x, &g)| x - self.step_size * g)
                .collect(),
            UpdateRule::Adam => {
                adam_next(
                    &self.theta,
                    &self.m,
                    &self.v,
                    self.t + 1,
                    gradient,
                    self.step_size,
                    self.adam,
                )
                .0
            }
        }
    }

    /// Applies one update in place.
    pub fn step(&mut self, gradient: &[f64]) {
        assert_eq!(gradient.len(), self.theta.len(), "gradient length mismatch");
        match self.rule {
            UpdateRule::Gd => {
                for (x, &g) in self.theta.iter_mut().zip(gradient) {
                    *x -= self.step_size * g;
                }
                self.t += 1;
            }
            UpdateRule::Adam => {
                let (theta, m, v) = adam_next(
                    &self.theta,
                    &self.m,
                    &self.v,
                    self.t + 1,
                    gradient,
                    self.step_size,
                    self.adam,
                );
                self.theta = theta;
                self.m = m;
                self.v = v;
                self.t += 1;
            }
        }
    }
}

/// One row of an experiment trace; the field order matches the CSV schema.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    /// 1-based iteration index.
    pub iteration: usize,
    /// Objective value at the iterate produced by this iteration.
    pub cost: f64,
    /// Cumulative simulated wall-clock time, in seconds.
    pub elapsed_time: f64,
    /// Worker outputs that entered the gradient estimate.
    pub n_outputs_used: usize,
    /// Whether this iteration ran the decoder successfully.
    pub decoded: bool,
    /// Estimator that produced the applied update (the winning branch for
    /// the hybrid method).
    pub method: EstimatorKind,
    /// Perturbation step used by the workers.
    pub delta: f64,
    /// Experiment seed (constant across rows; recorded for provenance).
    pub seed: u64,
}

/// Full specification of one experiment run.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub method: Method,
    pub code: CodeConfig,
    pub theta0: Vec<f64>,
    pub update_rule: UpdateRule,
    pub adam: AdamParams,
    pub step_size: f64,
    pub delta: f64,
    pub n_iterations: usize,
    pub seed: u64,
    pub runtime_dist: RuntimeDistribution,
    pub stopping_rule: StoppingRule,
    /// Simulated seconds charged per decode attempt (coded and hybrid).
    pub decode_cost: f64,
    /// Redraw direction signs each iteration; when false the first
    /// iteration's signs are reused for the whole run.
    pub resample_directions: bool,
}

/// Traces plus the final iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    pub traces: Vec<IterationTrace>,
    pub theta: Vec<f64>,
}

/// Runs a full experiment; see [`run_experiment_observed`] for a variant
/// that exposes each iterate as it is produced.
pub fn run_experiment(objective: &dyn Objective, opts: &RunOptions) -> Result<ExperimentOutcome> {
    run_experiment_observed(objective, opts, |_, _| {})
}

/// RNG stream carrying direction signs for iteration `t` (stream 0 when
/// signs are frozen), disjoint from the runtime stream by parity.
fn sign_stream(t: usize, resample: bool) -> u64 {
    if resample {
        2 * t as u64
    } else {
        0
    }
}

fn runtime_stream(t: usize) -> u64 {
    2 * t as u64 + 1
}

fn draw_signs(seed: u64, stream: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    (0..n)
        .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
        .collect()
}

/// Runs a full experiment, calling `observer(trace, theta)` after every
/// iteration with the row just produced and the updated iterate.
pub fn run_experiment_observed(
    objective: &dyn Objective,
    opts: &RunOptions,
    mut observer: impl FnMut(&IterationTrace, &[f64]),
) -> Result<ExperimentOutcome> {
    let code = &opts.code;
    let n = code.n_total;
    let d = code.n_params;
    if objective.dim() != d {
        return Err(Error::DimensionMismatch {
            n_params: d,
            n_total: objective.dim(),
        });
    }
    if opts.theta0.len() != d {
        return Err(Error::DimensionMismatch {
            n_params: d,
            n_total: opts.theta0.len(),
        });
    }
    if opts.n_iterations == 0 {
        return Err(Error::Config("n_iterations must be at least 1".into()));
    }
    if !opts.delta.is_finite() || opts.delta <= 0.0 {
        return Err(Error::NonPositiveDelta(opts.delta));
    }
    if opts.method == Method::Fd && n != d {
        return Err(Error::Config(format!(
            "fd assigns one coordinate per worker and needs n_workers = n_params, \
             got {n} workers for {d} parameters"
        )));
    }
    opts.stopping_rule.validate(n)?;

    let mut state = OptimizerState::new(
        opts.theta0.clone(),
        opts.step_size,
        opts.update_rule,
        opts.method,
    )
    .with_adam_params(opts.adam);
    let mut traces = Vec::with_capacity(opts.n_iterations);
    let mut elapsed = 0.0_f64;

    // Identity directions for fd are iteration-independent.
    let fd_directions: Option<Vec<Vec<f64>>> = (opts.method == Method::Fd).then(|| {
        (0..n)
            .map(|i| {
                let mut e = vec![0.0; d];
                e[i] = 1.0;
                e
            })
            .collect()
    });

    for t in 1..=opts.n_iterations {
        let directions: Vec<Vec<f64>>;
        let direction_set: Option<DirectionSet>;
        match opts.method {
            Method::Fd => {
                directions = fd_directions.clone().expect("built above");
                direction_set = None;
            }
            _ => {
                let signs = draw_signs(opts.seed, sign_stream(t, opts.resample_directions), d);
                let set = DirectionSet::new(code, &signs)?;
                directions = set.directions.clone();
                direction_set = Some(set);
            }
        }

        // Every worker finishes eventually; the stopping rule only decides
        // how long the master waits, so all 2N evaluations are charged.
        let outputs: Vec<f64> = directions
            .iter()
            .map(|dir| symmetric_directional_derivative(objective, &state.theta, dir, opts.delta))
            .collect();

        let mut time_rng = ChaCha8Rng::seed_from_u64(opts.seed);
        time_rng.set_stream(runtime_stream(t));
        let schedule = ArrivalSchedule::sample(&opts.runtime_dist, n, &mut time_rng);
        let (erased, stop_time) = run_iteration(&schedule, &opts.stopping_rule, &outputs)?;

        let (estimate, decoded, cost): (GradientEstimate, bool, f64);
        match opts.method {
            Method::Fd => {
                let g = finite_difference_from_outputs(&erased)?;
                state.step(&g.values);
                cost = objective.value(&state.theta);
                decoded = false;
                estimate = g;
            }
            Method::Es => {
                let g = es_gradient(&outputs, &directions, &erased.received_indices())?;
                state.step(&g.values);
                cost = objective.value(&state.theta);
                decoded = false;
                estimate = g;
            }
            Method::Coded => {
                let set = direction_set
                    .as_ref()
                    .expect("coded directions built above");
                let g = coded_gradient(set, &erased)?;
                state.step(&g.values);
                cost = objective.value(&state.theta);
                decoded = true;
                estimate = g;
            }
            Method::Hybrid => {
                let set = direction_set
                    .as_ref()
                    .expect("coded directions built above");
                let g_coded = coded_gradient(set, &erased)?;
                let g_es = es_gradient(&outputs, &directions, &erased.received_indices())?;
                let cand_coded = state.preview(&g_coded.values);
                let cand_es = state.preview(&g_es.values);
                // Two extra charged evaluations per iteration; their values
                // double as this row's cost, so no further evaluation is
                // spent on the trace.
                let cost_coded = objective.eval(&cand_coded);
                let cost_es = objective.eval(&cand_es);
                decoded = true;
                if cost_coded <= cost_es {
                    state.step(&g_coded.values);
                    cost = cost_coded;
                    estimate = g_coded;
                } else {
                    state.step(&g_es.values);
                    cost = cost_es;
                    estimate = g_es;
                }
            }
        }

        let decode_charge = if decoded { opts.decode_cost } else { 0.0 };
        elapsed += stop_time + decode_charge;
        let trace = IterationTrace {
            iteration: t,
            cost,
            elapsed_time: elapsed,
            n_outputs_used: estimate.n_outputs_used,
            decoded,
            method: estimate.method,
            delta: opts.delta,
            seed: opts.seed,
        };
        observer(&trace, &state.theta);
        traces.push(trace);
    }

    Ok(ExperimentOutcome {
        traces,
        theta: state.theta,
    })
}
