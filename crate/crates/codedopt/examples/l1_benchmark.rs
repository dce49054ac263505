//! Compares the three gradient estimation methods on the bundled
//! least-absolute-deviations benchmark, reproducing the qualitative result
//! that the coded method reaches a lower cost than straggler-affected
//! finite differences and evolution strategies at the same iteration count.
//!
//! Usage: `cargo run --example l1_benchmark [n_seeds] [n_iterations] [start_seed]`
//! (defaults: 1 seed, 2000 iterations, start seed 1; the acceptance check
//! uses 5 seeds).

use codedopt::code::CodeConfig;
use codedopt::objectives::Objective;
use codedopt::optimizer::{run_experiment, AdamParams, Method, RunOptions, UpdateRule};
use codedopt::problems::{l1_objective, L1_DIM};
use codedopt::sim::{RuntimeDistribution, StoppingRule};

fn median(mut values: Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    values[values.len() / 2]
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let n_seeds: u64 = args
        .get(1)
        .map(|s| s.parse().expect("n_seeds must be an integer"))
        .unwrap_or(1);
    let iterations: usize = args
        .get(2)
        .map(|s| s.parse().expect("n_iterations must be an integer"))
        .unwrap_or(2000);
    let start_seed: u64 = args
        .get(3)
        .map(|s| s.parse().expect("start_seed must be an integer"))
        .unwrap_or(1);

    let dist = RuntimeDistribution::shifted_exponential(1.0, 0.5).expect("valid parameters");
    let half = L1_DIM / 2; // wait for 16 of the 32 rate-1 workers

    // (label, method, workers, stopping rule)
    let coded_code = CodeConfig::new(L1_DIM, 2 * L1_DIM, 0.5).expect("valid code");
    let rate1_code = CodeConfig::new(L1_DIM, L1_DIM, 0.5).expect("valid code");
    let setups: Vec<(&str, Method, CodeConfig, StoppingRule)> = vec![
        (
            "fd   (first 16 of 32)",
            Method::Fd,
            rate1_code.clone(),
            StoppingRule::FirstK(half),
        ),
        (
            "es   (first 16 of 32)",
            Method::Es,
            rate1_code,
            StoppingRule::FirstK(half),
        ),
        (
            "coded (rate 1/2, N=64)",
            Method::Coded,
            coded_code.clone(),
            StoppingRule::FirstDecodable(coded_code),
        ),
    ];

    println!(
        "least-absolute-deviations benchmark: {iterations} iterations, {n_seeds} seed(s), step 0.5"
    );
    println!();
    println!(
        "{:<24} {:>14} {:>14} {:>12}",
        "method", "median cost", "median time", "evals/run"
    );
    for (label, method, code, rule) in setups {
        let mut final_costs = Vec::new();
        let mut final_times = Vec::new();
        let mut evals = 0;
        for seed in start_seed..start_seed + n_seeds {
            let objective = l1_objective();
            let opts = RunOptions {
                method,
                code: code.clone(),
                theta0: vec![0.0; L1_DIM],
                update_rule: UpdateRule::Gd,
                adam: AdamParams::default(),
                step_size: 0.5,
                delta: 1e-3,
                n_iterations: iterations,
                seed,
                runtime_dist: dist.clone(),
                stopping_rule: rule.clone(),
                decode_cost: 0.0,
                resample_directions: true,
            };
            let outcome = run_experiment(&objective, &opts).expect("run succeeds");
            let last = outcome.traces.last().expect("at least one iteration");
            final_costs.push(last.cost);
            final_times.push(last.elapsed_time);
            evals = objective.eval_count();
        }
        println!(
            "{:<24} {:>14.6} {:>14.2} {:>12}",
            label,
            median(final_costs),
            median(final_times),
            evals
        );
    }
    println!();
    println!("(cost = l1 residual norm; time = simulated seconds the master spent waiting)");
}
