//! Seeded benchmark instances shared by the examples, the CLI, the
//! checked-in fixtures, and the acceptance tests.
//!
//! Every instance is generated from a fixed internal seed, so it is
//! identical across runs and platforms (the RNG and samplers are pinned by
//! the lockfile). The CSV fixtures under `fixtures/` are snapshots of these
//! generators; a regression test keeps them in sync.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::matrix::Matrix;
use crate::objectives::{AttackObjective, L1Objective, SyntheticClassifier};
use crate::sim::RuntimeDistribution;
use crate::Result;

/// Rows of the regression benchmark's design matrix.
pub const L1_ROWS: usize = 200;
/// Parameter dimension of the regression benchmark.
pub const L1_DIM: usize = 32;

const L1_SEED: u64 = 7001;
const L1_A_SCALE: f64 = 0.005;
const L1_THETA_SCALE: f64 = 80.0;
const L1_NOISE_SCALE: f64 = 0.05;

/// Input dimension of the synthetic classifier under attack.
pub const ATTACK_DIM: usize = 48;
/// Hidden width of the synthetic classifier.
pub const ATTACK_HIDDEN: usize = 32;
/// Number of classes of the synthetic classifier.
pub const ATTACK_CLASSES: usize = 10;

const CLASSIFIER_SEED: u64 = 7002;
const START_SEED: u64 = 7003;
/// Largest acceptable log-probability gap between the two most likely
/// classes at the attack start point.
const START_MARGIN_LIMIT: f64 = 0.2;

const RUNTIME_SAMPLE_SEED: u64 = 7004;
/// Length of the bundled synthetic runtime-sample fixture.
pub const RUNTIME_SAMPLE_COUNT: usize = 256;

fn gaussian_vec(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let x: f64 = StandardNormal.sample(rng);
            scale * x
        })
        .collect()
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> Matrix {
    let data = gaussian_vec(rng, rows * cols, scale);
    Matrix::from_rows(rows, cols, data).expect("generated data has matching length")
}

/// A least-absolute-deviations regression instance: minimize
/// `‖Aθ − b‖₁` where `b` is a noisy linear measurement of a hidden
/// parameter vector.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Benchmark {
    pub a: Matrix,
    pub b: Vec<f64>,
    /// Hidden parameter vector used to synthesize `b`; kept for tests.
    pub theta_true: Vec<f64>,
}

/// Generates the benchmark instance (always the same one).
pub fn l1_benchmark() -> L1Benchmark {
    let mut rng = ChaCha8Rng::seed_from_u64(L1_SEED);
    let a = gaussian_matrix(&mut rng, L1_ROWS, L1_DIM, L1_A_SCALE);
    let theta_true = gaussian_vec(&mut rng, L1_DIM, L1_THETA_SCALE);
    let noise = gaussian_vec(&mut rng, L1_ROWS, L1_NOISE_SCALE);
    let mut b = a.matvec(&theta_true).expect("dimensions match");
    for (bi, ni) in b.iter_mut().zip(&noise) {
        *bi += ni;
    }
    L1Benchmark { a, b, theta_true }
}

/// The benchmark wrapped as an objective.
pub fn l1_objective() -> L1Objective {
    let inst = l1_benchmark();
    L1Objective::new(inst.a, inst.b).expect("benchmark dimensions are consistent")
}

/// Generates the fixed two-layer tanh classifier attacked in the examples.
pub fn synthetic_classifier() -> SyntheticClassifier {
    let mut rng = ChaCha8Rng::seed_from_u64(CLASSIFIER_SEED);
    let w1_scale = 2.0 / (ATTACK_DIM as f64).sqrt();
    let w2_scale = 6.0 / (ATTACK_HIDDEN as f64).sqrt();
    let w1 = gaussian_matrix(&mut rng, ATTACK_HIDDEN, ATTACK_DIM, w1_scale);
    let c1 = gaussian_vec(&mut rng, ATTACK_HIDDEN, 0.5);
    let w2 = gaussian_matrix(&mut rng, ATTACK_CLASSES, ATTACK_HIDDEN, w2_scale);
    let c2 = vec![0.0; ATTACK_CLASSES];
    SyntheticClassifier::new(w1, c1, w2, c2).expect("generated shapes are consistent")
}

/// A classifier input chosen near a decision boundary, together with the
/// classes on either side of it.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackInstance {
    pub model: SyntheticClassifier,
    pub theta0: Vec<f64>,
    /// Class the model assigns to `theta0`.
    pub original_class: usize,
    /// Second most likely class at `theta0`; the targeted attack aims here.
    pub target_class: usize,
}

impl AttackInstance {
    /// Targeted attack objective toward [`target_class`](Self::target_class).
    pub fn targeted_objective(&self, c: f64, kappa: f64) -> Result<AttackObjective> {
        AttackObjective::targeted(
            self.model.clone(),
            self.theta0.clone(),
            self.target_class,
            c,
            kappa,
        )
    }

    /// Untargeted attack objective away from
    /// [`original_class`](Self::original_class).
    pub fn untargeted_objective(&self, c: f64, kappa: f64) -> Result<AttackObjective> {
        AttackObjective::untargeted(
            self.model.clone(),
            self.theta0.clone(),
            self.original_class,
            c,
            kappa,
        )
    }
}

/// Draws standard-normal candidate inputs from a fixed stream and returns
/// the first one whose top-two log-probability gap is below
/// `START_MARGIN_LIMIT`, so the attack starts near a decision boundary.
pub fn attack_instance() -> AttackInstance {
    let model = synthetic_classifier();
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    loop {
        let candidate = gaussian_vec(&mut rng, ATTACK_DIM, 1.0);
        let logp = model.log_probabilities(&candidate);
        let mut order: Vec<usize> = (0..logp.len()).collect();
        order.sort_by(|&a, &b| logp[b].total_cmp(&logp[a]).then(a.cmp(&b)));
        let (best, second) = (order[0], order[1]);
        if logp[best] - logp[second] <= START_MARGIN_LIMIT {
            return AttackInstance {
                model,
                theta0: candidate,
                original_class: best,
                target_class: second,
            };
        }
    }
}

/// Synthetic "recorded" worker runtimes bundled as a fixture: draws from a
/// shifted exponential standing in for real cluster measurements.
pub fn runtime_samples() -> Vec<f64> {
    let dist = RuntimeDistribution::shifted_exponential(1.0, 0.5).expect("constants are valid");
    let mut rng = ChaCha8Rng::seed_from_u64(RUNTIME_SAMPLE_SEED);
    (0..RUNTIME_SAMPLE_COUNT)
        .map(|_| dist.sample(&mut rng))
        .collect()
}
