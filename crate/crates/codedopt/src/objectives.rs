//! Black-box objectives with exact evaluation counting.
//!
//! Optimizers in this crate only ever see an [`Objective`] through
//! [`Objective::eval`], which bumps an atomic counter on every call; tests
//! and budget accounting rely on the count being exact. [`Objective::value`]
//! computes the same number without counting and exists for monitoring
//! (per-iteration trace costs) and test oracles only.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::matrix::Matrix;
use crate::{Error, Result};

/// Thread-safe evaluation counter.
#[derive(Debug, Default)]
pub struct EvalCounter(AtomicU64);

impl EvalCounter {
    pub fn new() -> Self {
        Self(AtomicU64::new(0))
    }

    pub fn bump(&self) {
        self.0.fetch_add(1, Ordering::Relaxed);
    }

    pub fn count(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }
}

/// A black-box objective `f: R^d -> R`.
pub trait Objective: Sync {
    /// Dimension `d` of the parameter vector.
    fn dim(&self) -> usize;

    /// Raw function value; does *not* count as a black-box query.
    fn value(&self, theta: &[f64]) -> f64;

    /// The query counter backing [`Objective::eval_count`].
    fn counter(&self) -> &EvalCounter;

    /// Counted black-box query: every call increments the counter by one.
    fn eval(&self, theta: &[f64]) -> f64 {
        self.counter().bump();
        self.value(theta)
    }

    /// Total number of counted queries so far.
    fn eval_count(&self) -> u64 {
        self.counter().count()
    }

    /// Analytic gradient where one exists (bundled test objectives only).
    fn oracle_gradient(&self, _theta: &[f64]) -> Option<Vec<f64>> {
        None
    }
}

/// Least absolute deviations: `f(theta) = sum_i |(A theta - b)_i|`.
pub struct L1Objective {
    a: Matrix,
    b: Vec<f64>,
    counter: EvalCounter,
}

impl L1Objective {
    pub fn new(a: Matrix, b: Vec<f64>) -> Result<Self> {
        if a.rows() != b.len() {
            return Err(Error::Shape(format!(
                "{}x{} matrix against length-{} target",
                a.rows(),
                a.cols(),
                b.len()
            )));
        }
        Ok(Self {
            a,
            b,
            counter: EvalCounter::new(),
        })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn target(&self) -> &[f64] {
        &self.b
    }

    fn residual(&self, theta: &[f64]) -> Vec<f64> {
        let mut r = self
            .a
            .matvec(theta)
            .expect("dimension checked at construction");
        for (ri, bi) in r.iter_mut().zip(&self.b) {
            *ri -= bi;
        }
        r
    }
}

impl Objective for L1Objective {
    fn dim(&self) -> usize {
        self.a.cols()
    }

    fn value(&self, theta: &[f64]) -> f64 {
        self.residual(theta).iter().map(|r| r.abs()).sum()
    }

    fn counter(&self) -> &EvalCounter {
        &self.counter
    }

    /// Subgradient `A^T sign(A theta - b)`; only a true gradient away from
    /// the kinks (no zero residual entries).
    fn oracle_gradient(&self, theta: &[f64]) -> Option<Vec<f64>> {
        let signs: Vec<f64> = self.residual(theta).iter().map(|r| r.signum()).collect();
        Some(
            self.a
                .t_matvec(&signs)
                .expect("dimension checked at construction"),
        )
    }
}

/// Least squares: `f(theta) = 0.5 * ||A theta - b||^2`.
pub struct L2SqObjective {
    a: Matrix,
    b: Vec<f64>,
    counter: EvalCounter,
}

impl L2SqObjective {
    pub fn new(a: Matrix, b: Vec<f64>) -> Result<Self> {
        if a.rows() != b.len() {
            return Err(Error::Shape(format!(
                "{}x{} matrix against length-{} target",
                a.rows(),
                a.cols(),
                b.len()
            )));
        }
        Ok(Self {
            a,
            b,
            counter: EvalCounter::new(),
        })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn target(&self) -> &[f64] {
        &self.b
    }

    fn residual(&self, theta: &[f64]) -> Vec<f64> {
        let mut r = self
            .a
            .matvec(theta)
            .expect("dimension checked at construction");
        for (ri, bi) in r.iter_mut().zip(&self.b) {
            *ri -= bi;
        }
        r
    }
}

impl Objective for L2SqObjective {
    fn dim(&self) -> usize {
        self.a.cols()
    }

    fn value(&self, theta: &[f64]) -> f64 {
        0.5 * self.residual(theta).iter().map(|r| r * r).sum::<f64>()
    }

    fn counter(&self) -> &EvalCounter {
        &self.counter
    }

    /// Exact gradient `A^T (A theta - b)`.
    fn oracle_gradient(&self, theta: &[f64]) -> Option<Vec<f64>> {
        Some(
            self.a
                .t_matvec(&self.residual(theta))
                .expect("dimension checked at construction"),
        )
    }
}

/// A small fixed two-layer softmax classifier used as the attack target:
/// `F(x) = softmax(W2 * tanh(W1 * x + c1) + c2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticClassifier {
    w1: Matrix,
    c1: Vec<f64>,
    w2: Matrix,
    c2: Vec<f64>,
}

impl SyntheticClassifier {
    pub fn new(w1: Matrix, c1: Vec<f64>, w2: Matrix, c2: Vec<f64>) -> Result<Self> {
        if w1.rows() != c1.len() || w2.cols() != w1.rows() || w2.rows() != c2.len() {
            return Err(Error::Shape(format!(
                "inconsistent layer shapes: W1 {}x{}, c1 {}, W2 {}x{}, c2 {}",
                w1.rows(),
                w1.cols(),
                c1.len(),
                w2.rows(),
                w2.cols(),
                c2.len()
            )));
        }
        Ok(Self { w1, c1, w2, c2 })
    }

    pub fn input_dim(&self) -> usize {
        self.w1.cols()
    }

    pub fn n_classes(&self) -> usize {
        self.w2.rows()
    }

    pub fn layer1(&self) -> (&Matrix, &[f64]) {
        (&self.w1, &self.c1)
    }

    pub fn layer2(&self) -> (&Matrix, &[f64]) {
        (&self.w2, &self.c2)
    }

    /// Pre-softmax class scores.
    pub fn logits(&self, x: &[f64]) -> Vec<f64> {
        let mut hidden = self.w1.matvec(x).expect("input dimension mismatch");
        for (h, c) in hidden.iter_mut().zip(&self.c1) {
            *h = (*h + c).tanh();
        }
        let mut out = self
            .w2
            .matvec(&hidden)
            .expect("shapes checked at construction");
        for (o, c) in out.iter_mut().zip(&self.c2) {
            *o += c;
        }
        out
    }

    /// Numerically stable `log softmax(logits)`.
    pub fn log_probabilities(&self, x: &[f64]) -> Vec<f64> {
        let logits = self.logits(x);
        let m = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lse = m + logits.iter().map(|l| (l - m).exp()).sum::<f64>().ln();
        logits.into_iter().map(|l| l - lse).collect()
    }

    /// Class probabilities (positive, summing to one).
    pub fn probabilities(&self, x: &[f64]) -> Vec<f64> {
        self.log_probabilities(x)
            .into_iter()
            .map(f64::exp)
            .collect()
    }

    /// Most likely class (lowest index wins ties).
    pub fn classify(&self, x: &[f64]) -> usize {
        let logits = self.logits(x);
        let mut best = 0;
        for (i, &l) in logits.iter().enumerate() {
            if l > logits[best] {
                best = i;
            }
        }
        best
    }
}

/// What the adversarial search is trying to achieve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttackGoal {
    /// Make the classifier output `target`.
    Targeted { target: usize },
    /// Make the classifier output anything but `original`.
    Untargeted { original: usize },
}

/// Adversarial-input search objective
/// `f(theta) = ||theta - theta0||^2 + c * max(margin(theta), -kappa)`,
/// where the margin is negative once the attack goal is met by at least
/// `kappa` in log-probability.
///
/// Targeted margin: `max_{i != t} log F_i - log F_t` by default; with
/// `mixed_hinge` the competitors enter as raw probabilities
/// (`max_{i != t} F_i - log F_t`). Untargeted margin:
/// `log F_orig - max_{i != orig} log F_i`.
pub struct AttackObjective {
    model: SyntheticClassifier,
    theta0: Vec<f64>,
    goal: AttackGoal,
    c: f64,
    kappa: f64,
    mixed_hinge: bool,
    counter: EvalCounter,
}

impl AttackObjective {
    pub fn targeted(
        model: SyntheticClassifier,
        theta0: Vec<f64>,
        target: usize,
        c: f64,
        kappa: f64,
    ) -> Result<Self> {
        Self::new(model, theta0, AttackGoal::Targeted { target }, c, kappa)
    }

    pub fn untargeted(
        model: SyntheticClassifier,
        theta0: Vec<f64>,
        original: usize,
        c: f64,
        kappa: f64,
    ) -> Result<Self> {
        Self::new(model, theta0, AttackGoal::Untargeted { original }, c, kappa)
    }

    fn new(
        model: SyntheticClassifier,
        theta0: Vec<f64>,
        goal: AttackGoal,
        c: f64,
        kappa: f64,
    ) -> Result<Self> {
        let class = match goal {
            AttackGoal::Targeted { target } => target,
            AttackGoal::Untargeted { original } => original,
        };
        if class >= model.n_classes() {
            return Err(Error::ClassOutOfRange {
                index: class,
                n_classes: model.n_classes(),
            });
        }
        if theta0.len() != model.input_dim() {
            return Err(Error::Shape(format!(
                "attack start point has length {}, model expects {}",
                theta0.len(),
                model.input_dim()
            )));
        }
        Ok(Self {
            model,
            theta0,
            goal,
            c,
            kappa,
            mixed_hinge: false,
            counter: EvalCounter::new(),
        })
    }

    /// Switch the targeted hinge to the mixed probability/log form.
    pub fn with_mixed_hinge(mut self, on: bool) -> Self {
        self.mixed_hinge = on;
        self
    }

    pub fn model(&self) -> &SyntheticClassifier {
        &self.model
    }

    pub fn start_point(&self) -> &[f64] {
        &self.theta0
    }

    pub fn goal(&self) -> AttackGoal {
        self.goal
    }

    /// The (unclamped) attack margin; negative means the goal is met.
    pub fn margin(&self, theta: &[f64]) -> f64 {
        let log_probs = self.model.log_probabilities(theta);
        match self.goal {
            AttackGoal::Targeted { target } => {
                let best_other = log_probs
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != target)
                    .map(|(_, &lp)| if self.mixed_hinge { lp.exp() } else { lp })
                    .fold(f64::NEG_INFINITY, f64::max);
                best_other - log_probs[target]
            }
            AttackGoal::Untargeted { original } => {
                let best_other = log_probs
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != original)
                    .map(|(_, &lp)| lp)
                    .fold(f64::NEG_INFINITY, f64::max);
                log_probs[original] - best_other
            }
        }
    }
}

impl Objective for AttackObjective {
    fn dim(&self) -> usize {
        self.model.input_dim()
    }

    fn value(&self, theta: &[f64]) -> f64 {
        let dist_sq: f64 = theta
            .iter()
            .zip(&self.theta0)
            .map(|(t, t0)| (t - t0) * (t - t0))
            .sum();
        dist_sq + self.c * self.margin(theta).max(-self.kappa)
    }

    fn counter(&self) -> &EvalCounter {
        &self.counter
    }
}

type ValueFn = Box<dyn Fn(&[f64]) -> f64 + Sync + Send>;
type GradientFn = Box<dyn Fn(&[f64]) -> Vec<f64> + Sync + Send>;

/// Wraps a closure (plus an optional analytic gradient) as an [`Objective`];
/// the extension point for user-defined black boxes.
pub struct FnObjective {
    dim: usize,
    f: ValueFn,
    grad: Option<GradientFn>,
    counter: EvalCounter,
}

impl FnObjective {
    pub fn new(dim: usize, f: impl Fn(&[f64]) -> f64 + Sync + Send + 'static) -> Self {
        Self {
            dim,
            f: Box::new(f),
            grad: None,
            counter: EvalCounter::new(),
        }
    }

    pub fn with_gradient(
        mut self,
        grad: impl Fn(&[f64]) -> Vec<f64> + Sync + Send + 'static,
    ) -> Self {
        self.grad = Some(Box::new(grad));
        self
    }
}

impl Objective for FnObjective {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, theta: &[f64]) -> f64 {
        (self.f)(theta)
    }

    fn counter(&self) -> &EvalCounter {
        &self.counter
    }

    fn oracle_gradient(&self, theta: &[f64]) -> Option<Vec<f64>> {
        self.grad.as_ref().map(|g| g(theta))
    }
}
