//! Runs a targeted black-box attack against the bundled synthetic
//! classifier: starting from an input near a decision boundary, the coded
//! method with ADAM perturbs the input until the classifier's top class
//! flips to the runner-up, while a squared-distance penalty keeps the
//! perturbed input close to the original.
//!
//! Usage: `cargo run --example adversarial_attack [n_seeds] [n_iterations]`
//! (defaults: 1 seed, 3000 iterations; the acceptance check uses 5 seeds).

use codedopt::code::CodeConfig;
use codedopt::optimizer::{run_experiment_observed, AdamParams, Method, RunOptions, UpdateRule};
use codedopt::problems::{attack_instance, ATTACK_DIM};
use codedopt::sim::{RuntimeDistribution, StoppingRule};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let n_seeds: u64 = args
        .get(1)
        .map(|s| s.parse().expect("n_seeds must be an integer"))
        .unwrap_or(1);
    let iterations: usize = args
        .get(2)
        .map(|s| s.parse().expect("n_iterations must be an integer"))
        .unwrap_or(3000);

    let instance = attack_instance();
    let code = CodeConfig::new(ATTACK_DIM, 64, 0.5).expect("valid code");
    let dist = RuntimeDistribution::shifted_exponential(1.0, 0.5).expect("valid parameters");

    println!(
        "targeted attack: class {} -> {} (input dimension {}, {} workers, rate {:.2})",
        instance.original_class,
        instance.target_class,
        ATTACK_DIM,
        code.n_total,
        code.rate()
    );
    println!();

    let mut successes = 0;
    for seed in 1..=n_seeds {
        let objective = instance
            .targeted_objective(0.1, 0.0)
            .expect("valid attack setup");
        let opts = RunOptions {
            method: Method::Coded,
            code: code.clone(),
            theta0: instance.theta0.clone(),
            update_rule: UpdateRule::Adam,
            adam: AdamParams::default(),
            step_size: 0.01,
            delta: 1e-3,
            n_iterations: iterations,
            seed,
            runtime_dist: dist.clone(),
            stopping_rule: StoppingRule::FirstDecodable(code.clone()),
            decode_cost: 0.0,
            resample_directions: true,
        };

        let mut first_flip: Option<usize> = None;
        let mut best_cost = f64::INFINITY;
        let mut distance_at_flip = 0.0;
        let outcome = run_experiment_observed(&objective, &opts, |trace, theta| {
            best_cost = best_cost.min(trace.cost);
            if first_flip.is_none() && instance.model.classify(theta) == instance.target_class {
                first_flip = Some(trace.iteration);
                distance_at_flip = theta
                    .iter()
                    .zip(&instance.theta0)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
            }
        })
        .expect("run succeeds");

        match first_flip {
            Some(iter) => {
                successes += 1;
                println!(
                    "seed {seed}: flipped at iteration {iter} (perturbation norm {:.4}, best cost {:.6})",
                    distance_at_flip, best_cost
                );
            }
            None => {
                let final_margin = objective.margin(&outcome.theta);
                println!(
                    "seed {seed}: no flip within {iterations} iterations (final margin {final_margin:.4}, best cost {best_cost:.6})"
                );
            }
        }
    }
    println!();
    println!("{successes}/{n_seeds} seeds flipped the classifier to the target class");
}
