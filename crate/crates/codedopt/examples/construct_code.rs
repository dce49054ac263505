//! Shows how perturbation-direction codes are constructed: the erasure
//! recursion that scores each channel, the frozen/information split, and
//! how the design erasure probability shapes the frozen set.
//!
//! Usage: `cargo run --example construct_code`

use codedopt::code::{bec_channel_reliabilities, CodeConfig};

fn describe(code: &CodeConfig) {
    println!(
        "d = {}, N = {}, rate = {}, design erasure = {}",
        code.n_params,
        code.n_total,
        code.rate(),
        code.design_erasure
    );
    println!("  channel  erasure-parameter  role");
    for (ch, z) in code.z_values.iter().enumerate() {
        let role = if code.is_frozen(ch) {
            "frozen (zero direction)"
        } else {
            "information"
        };
        println!("  {ch:>7}  {z:>17.8}  {role}");
    }
    println!();
}

fn main() {
    println!("One split: a channel with erasure probability e polarizes into a");
    println!("degraded copy (2e - e^2) and an upgraded copy (e^2):");
    let z2 = bec_channel_reliabilities(2, 0.5).unwrap();
    println!("  e = 0.5  ->  {}, {}", z2[0], z2[1]);
    println!();

    println!("Reference constructions (the worst channels are frozen):");
    describe(&CodeConfig::new(3, 4, 0.5).unwrap());
    describe(&CodeConfig::new(3, 8, 0.5).unwrap());

    println!("The design erasure probability reorders the middle channels;");
    println!("frozen sets for d = 8, N = 16:");
    for eps in [0.2, 0.5, 0.8] {
        let code = CodeConfig::new(8, 16, eps).unwrap();
        let frozen: Vec<String> = code.frozen_set.iter().map(|c| c.to_string()).collect();
        println!("  eps = {eps}: frozen = {{{}}}", frozen.join(", "));
    }
    println!();

    println!("Larger block used by the regression benchmark:");
    let code = CodeConfig::new(32, 64, 0.5).unwrap();
    println!(
        "d = {}, N = {}: a rate-{} code; any straggler pattern that leaves a",
        code.n_params,
        code.n_total,
        code.rate()
    );
    println!("decodable set lets the master recover the exact gradient estimate.");
    let frozen: Vec<String> = code.frozen_set.iter().map(|c| c.to_string()).collect();
    println!("frozen channels: {{{}}}", frozen.join(", "));
}
