//! Measures how long the master waits under different stopping rules:
//! waiting for every worker pays the straggler tail, while stopping at the
//! first decodable set (or a fixed count) cuts the wait substantially.
//!
//! Usage: `cargo run --example straggler_timing`

use codedopt::code::CodeConfig;
use codedopt::sim::{run_iteration, ArrivalSchedule, RuntimeDistribution, StoppingRule};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn mean_stop(
    dist: &RuntimeDistribution,
    n: usize,
    rule: &StoppingRule,
    schedules: usize,
) -> (f64, f64) {
    let outputs = vec![0.0; n];
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut total_time = 0.0;
    let mut total_admitted = 0usize;
    for _ in 0..schedules {
        let schedule = ArrivalSchedule::sample(dist, n, &mut rng);
        let (erased, stop) = run_iteration(&schedule, rule, &outputs).unwrap();
        total_time += stop;
        total_admitted += erased.n_available();
    }
    (
        total_time / schedules as f64,
        total_admitted as f64 / schedules as f64,
    )
}

fn report(label: &str, dist: &RuntimeDistribution, n: usize, schedules: usize) {
    println!("{label}, N = {n}, {schedules} schedules:");
    println!(
        "  {:<28} {:>12} {:>16}",
        "stopping rule", "mean stop", "mean admitted"
    );
    let mut baseline = 0.0;
    for (name, rule) in [
        ("all".to_string(), StoppingRule::All),
        (
            format!("first_k:{}", 3 * n / 4),
            StoppingRule::FirstK(3 * n / 4),
        ),
        (
            "first_decodable (rate 1/2)".to_string(),
            StoppingRule::FirstDecodable(CodeConfig::new(n / 2, n, 0.5).unwrap()),
        ),
    ] {
        let (stop, admitted) = mean_stop(dist, n, &rule, schedules);
        if matches!(rule, StoppingRule::All) {
            baseline = stop;
            println!("  {name:<28} {stop:>12.3} {admitted:>16.1}");
        } else {
            println!(
                "  {name:<28} {stop:>12.3} {admitted:>16.1}   ({:.1}% of waiting for all)",
                100.0 * stop / baseline
            );
        }
    }
    println!();
}

fn main() {
    let n = 64;
    let schedules = 1000;

    let parametric = RuntimeDistribution::shifted_exponential(1.0, 0.5).unwrap();
    report("shifted-exponential runtimes", &parametric, n, schedules);

    let sample_file =
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/runtime_samples.txt");
    let empirical = RuntimeDistribution::from_sample_file(&sample_file).unwrap();
    report("resampled recorded runtimes", &empirical, n, schedules);

    println!("the decodable-set rule admits barely more than half the outputs yet");
    println!("recovers the exact gradient estimate every iteration");
}
