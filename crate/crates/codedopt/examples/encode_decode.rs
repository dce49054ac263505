//! Walks one full round of the coding pipeline on a toy problem: build
//! signed perturbation directions, let each "worker" measure a directional
//! derivative, lose a straggler's output, verify the rest is decodable,
//! and recover the per-coordinate derivatives exactly.
//!
//! Usage: `cargo run --example encode_decode`

use codedopt::code::CodeConfig;
use codedopt::codec::{check_decodability, decode, DirectionSet, ErasedOutputs};

fn main() {
    // Three parameters, four workers: one redundant direction.
    let code = CodeConfig::new(3, 4, 0.5).unwrap();
    let signs = [1.0, -1.0, 1.0];
    let set = DirectionSet::new(&code, &signs).unwrap();

    println!("directions handed to the workers (rows of the signed code):");
    for (i, dir) in set.directions.iter().enumerate() {
        println!("  worker {i}: {dir:?}");
    }

    // A gradient to recover: f(theta) = g . theta, so the directional
    // derivative along v is exactly g . v.
    let gradient = [2.0, -1.0, 0.5];
    let outputs: Vec<f64> = set
        .directions
        .iter()
        .map(|v| v.iter().zip(&gradient).map(|(vi, gi)| vi * gi).sum())
        .collect();
    println!("\nworker outputs (directional derivatives): {outputs:?}");

    // Worker 0 straggles.
    let available = vec![false, true, true, true];
    println!(
        "worker 0 never arrives; decodable from the rest: {}",
        check_decodability(&code, &available)
    );
    let erased = ErasedOutputs::new(outputs.clone(), available).unwrap();

    let decoded = decode(&code, &erased).unwrap();
    println!("decoded information values (still carrying signs): {decoded:?}");
    let recovered: Vec<f64> = decoded.iter().zip(&signs).map(|(v, s)| v / s).collect();
    println!("after removing the signs: {recovered:?}");
    assert_eq!(recovered, gradient);
    println!("recovered the exact gradient from 3 of 4 outputs");

    // Losing one more output leaves too little information.
    let available = vec![false, true, false, true];
    println!(
        "\nwith workers 0 and 2 both missing, decodable: {}",
        check_decodability(&code, &available)
    );
    let erased = ErasedOutputs::new(outputs, available).unwrap();
    match decode(&code, &erased) {
        Err(e) => println!("decode reports: {e}"),
        Ok(_) => unreachable!("this pattern is not decodable"),
    }
}
