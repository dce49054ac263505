//! Butterfly encoder, decodability check, and successive-cancellation
//! decoder over real-valued blocks.
//!
//! The circuit has `log2(n) + 1` levels of `n` nodes. Level 0 holds the
//! decoded inputs `u` (frozen channels pinned to zero, information channels
//! carrying coordinates); level `log2(n)` holds the worker outputs. Stage
//! `j` couples positions `i` and `i ^ (1 << j)` with the 2x2 kernel
//! `(p, q) = (a + b, a - b)`, strides ascending from the input side. The
//! resulting encode map is the +-1 Sylvester–Hadamard matrix, and decoding
//! channel `i` before channel `i + 1` realizes exactly the channel ordering
//! assumed by [`crate::code::bec_channel_reliabilities`].
//!
//! Decoding walks channels in index order. An upper node (bit `j` clear)
//! needs both its children; a lower node needs its already-decoded sibling
//! plus either child. After every odd channel the freshly decoded prefix is
//! re-encoded forward so later channels can lean on it.

use crate::code::CodeConfig;
use crate::{Error, Result};

/// Applies the butterfly to a block of `n` scalars in place. `n` must be a
/// power of two. Equivalent to multiplying by the `n x n` +-1 Hadamard
/// matrix with entries `(-1)^popcount(i & k)`.
pub fn encode_scalar_block(block: &mut [f64]) {
    let n = block.len();
    assert!(
        n.is_power_of_two(),
        "block length {n} is not a power of two"
    );
    let mut stride = 1;
    while stride < n {
        for u in 0..n {
            if u & stride == 0 {
                let l = u | stride;
                let a = block[u];
                let b = block[l];
                block[u] = a + b;
                block[l] = a - b;
            }
        }
        stride <<= 1;
    }
}

/// Encodes a block of `n_total` vectors (all of one dimension) through the
/// butterfly. Output `i` is the signed sum `sum_k H[i][k] * inputs[k]`
/// computed in `n log n` vector operations.
pub fn encode(config: &CodeConfig, inputs: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = config.n_total;
    if inputs.len() != n {
        return Err(Error::BlockLength {
            expected: n,
            got: inputs.len(),
        });
    }
    let dim = inputs.first().map(Vec::len).unwrap_or(0);
    for v in inputs {
        if v.len() != dim {
            return Err(Error::RaggedBlock(dim, v.len()));
        }
    }
    let mut block = inputs.to_vec();
    for j in 0..config.levels() {
        let stride = 1usize << j;
        for u in 0..n {
            if u & stride != 0 {
                continue;
            }
            let l = u | stride;
            let (head, tail) = block.split_at_mut(l);
            for (a, b) in head[u].iter_mut().zip(tail[0].iter_mut()) {
                let (sum, diff) = (*a + *b, *a - *b);
                *a = sum;
                *b = diff;
            }
        }
    }
    Ok(block)
}

/// The length-`d` +-1 perturbation directions handed to the `n` workers:
/// row `i` is the encode of the input block whose information channel `j`
/// holds `diag_signs[j] * e_j` and whose frozen channels hold zero vectors.
/// Every entry of every direction is +1 or -1.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    /// The code the directions were built for.
    pub config: CodeConfig,
    /// `n_total` rows of dimension `n_params`.
    pub directions: Vec<Vec<f64>>,
    /// The +-1 sign applied to coordinate `j` before encoding; decoded
    /// values are divided by it on the way out.
    pub diag_signs: Vec<f64>,
}

impl DirectionSet {
    /// Builds the direction set for `config` under the given +-1 diagonal.
    pub fn new(config: &CodeConfig, diag_signs: &[f64]) -> Result<Self> {
        let d = config.n_params;
        if diag_signs.len() != d {
            return Err(Error::BlockLength {
                expected: d,
                got: diag_signs.len(),
            });
        }
        for (j, &s) in diag_signs.iter().enumerate() {
            if s != 1.0 && s != -1.0 {
                return Err(Error::BadDiagonalSign(j, s));
            }
        }
        let mut block = vec![vec![0.0; d]; config.n_total];
        for (j, &ch) in config.info_channels.iter().enumerate() {
            block[ch][j] = diag_signs[j];
        }
        let directions = encode(config, &block)?;
        Ok(Self {
            config: config.clone(),
            directions,
            diag_signs: diag_signs.to_vec(),
        })
    }

    /// Identity diagonal (all +1).
    pub fn unsigned(config: &CodeConfig) -> Self {
        Self::new(config, &vec![1.0; config.n_params]).expect("identity diagonal is valid")
    }
}

/// Worker outputs with an availability mask: `values[i]` is meaningful only
/// where `available[i]` is true.
#[derive(Debug, Clone, PartialEq)]
pub struct ErasedOutputs {
    values: Vec<f64>,
    available: Vec<bool>,
}

impl ErasedOutputs {
    /// Pairs output values with their availability mask (equal lengths).
    pub fn new(values: Vec<f64>, available: Vec<bool>) -> Result<Self> {
        if values.len() != available.len() {
            return Err(Error::BlockLength {
                expected: values.len(),
                got: available.len(),
            });
        }
        Ok(Self { values, available })
    }

    /// All outputs present.
    pub fn complete(values: Vec<f64>) -> Self {
        let available = vec![true; values.len()];
        Self { values, available }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_available(&self, i: usize) -> bool {
        self.available[i]
    }

    /// `values[i]` if present.
    pub fn value(&self, i: usize) -> Option<f64> {
        self.available[i].then(|| self.values[i])
    }

    pub fn available_mask(&self) -> &[bool] {
        &self.available
    }

    /// Number of available outputs.
    pub fn n_available(&self) -> usize {
        self.available.iter().filter(|&&a| a).count()
    }

    /// Indices of available outputs, ascending.
    pub fn received_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.available[i]).collect()
    }
}

/// Indicator-only run of the successive-cancellation decoder: `true` iff
/// every information channel is resolvable from the available outputs. No
/// value arithmetic is performed.
///
/// Decodability is monotone in availability, and the full [`decode`]
/// succeeds exactly when this returns `true`.
pub fn check_decodability(config: &CodeConfig, available: &[bool]) -> bool {
    let n = config.n_total;
    assert_eq!(available.len(), n, "availability mask length mismatch");
    let levels = config.levels() as usize;
    let mut known = vec![vec![false; n]; levels + 1];
    known[levels].copy_from_slice(available);
    for &ch in &config.frozen_set {
        known[0][ch] = true;
    }
    for i in 0..n {
        if !check_recursive(&mut known, levels, i, 0) {
            return false;
        }
        if i % 2 == 1 {
            // Forward-propagate indicators through kernels that lie fully
            // inside the decoded prefix.
            for j in 0..levels {
                let stride = 1usize << j;
                for u in 0..=i {
                    if u & stride != 0 {
                        continue;
                    }
                    let l = u | stride;
                    if l <= i && known[j][u] && known[j][l] {
                        known[j + 1][u] = true;
                        known[j + 1][l] = true;
                    }
                }
            }
        }
    }
    true
}

fn check_recursive(known: &mut [Vec<bool>], levels: usize, i: usize, j: usize) -> bool {
    if known[j][i] {
        return true;
    }
    if j == levels {
        return false;
    }
    let stride = 1usize << j;
    let pair = i ^ stride;
    let ok_self = check_recursive(known, levels, i, j + 1);
    let ok_pair = check_recursive(known, levels, pair, j + 1);
    let ok = if i & stride == 0 {
        ok_self && ok_pair
    } else {
        known[j][pair] && (ok_self || ok_pair)
    };
    if ok {
        known[j][i] = true;
    }
    ok
}

/// Recovers the `n_params` information-channel values from the available
/// worker outputs by successive cancellation, or reports the channels that
/// cannot be resolved.
///
/// Output `j` is the value of information channel `config.info_channels[j]`;
/// any diagonal signs applied at encode time are *not* removed here (see
/// [`crate::estimators::coded_gradient`]).
pub fn decode(config: &CodeConfig, outputs: &ErasedOutputs) -> Result<Vec<f64>> {
    let n = config.n_total;
    if outputs.len() != n {
        return Err(Error::BlockLength {
            expected: n,
            got: outputs.len(),
        });
    }
    let levels = config.levels() as usize;
    let mut dec = Decoder {
        known: vec![vec![false; n]; levels + 1],
        value: vec![vec![0.0; n]; levels + 1],
        levels,
    };
    for i in 0..n {
        if outputs.is_available(i) {
            dec.known[levels][i] = true;
            dec.value[levels][i] = outputs.value(i).unwrap();
        }
    }
    for &ch in &config.frozen_set {
        dec.known[0][ch] = true;
    }
    let mut failed = Vec::new();
    for i in 0..n {
        if !dec.decode_recursive(i, 0) {
            failed.push(i);
        }
        if i % 2 == 1 {
            dec.forward_propagate(i);
        }
    }
    if !failed.is_empty() {
        return Err(Error::NotDecodable(failed));
    }
    Ok(config
        .info_channels
        .iter()
        .map(|&ch| dec.value[0][ch])
        .collect())
}

struct Decoder {
    known: Vec<Vec<bool>>,
    value: Vec<Vec<f64>>,
    levels: usize,
}

impl Decoder {
    fn decode_recursive(&mut self, i: usize, j: usize) -> bool {
        if self.known[j][i] {
            return true;
        }
        if j == self.levels {
            return false;
        }
        let stride = 1usize << j;
        let pair = i ^ stride;
        let ok_self = self.decode_recursive(i, j + 1);
        let ok_pair = self.decode_recursive(pair, j + 1);
        if i & stride == 0 {
            // Upper node: average of the kernel outputs, needs both.
            if !(ok_self && ok_pair) {
                return false;
            }
            self.value[j][i] = (self.value[j + 1][i] + self.value[j + 1][pair]) / 2.0;
        } else {
            // Lower node: cancel the already-decoded sibling out of either
            // kernel output. The sibling is always known here unless an
            // earlier channel already failed.
            if !self.known[j][pair] {
                return false;
            }
            let a = self.value[j][pair];
            if ok_pair {
                self.value[j][i] = self.value[j + 1][pair] - a;
            } else if ok_self {
                self.value[j][i] = a - self.value[j + 1][i];
            } else {
                return false;
            }
        }
        self.known[j][i] = true;
        true
    }

    /// Re-encodes the decoded prefix `0..=i` so later channels can reuse it;
    /// only fills entries that are still unknown.
    fn forward_propagate(&mut self, i: usize) {
        for j in 0..self.levels {
            let stride = 1usize << j;
            for u in 0..=i {
                if u & stride != 0 {
                    continue;
                }
                let l = u | stride;
                if l > i || !self.known[j][u] || !self.known[j][l] {
                    continue;
                }
                let a = self.value[j][u];
                let b = self.value[j][l];
                if !self.known[j + 1][u] {
                    self.value[j + 1][u] = a + b;
                    self.known[j + 1][u] = true;
                }
                if !self.known[j + 1][l] {
                    self.value[j + 1][l] = a - b;
                    self.known[j + 1][l] = true;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    /// Dense oracle for the encode map.
    fn hadamard(i: usize, k: usize) -> f64 {
        if (i & k).count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    fn dense_encode(inputs: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let n = inputs.len();
        let dim = inputs[0].len();
        (0..n)
            .map(|i| {
                (0..dim)
                    .map(|k| (0..n).map(|m| hadamard(i, m) * inputs[m][k]).sum())
                    .collect()
            })
            .collect()
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn two_point_kernel() {
        let cfg = CodeConfig::new(2, 2, 0.5).unwrap();
        let out = encode(&cfg, &[vec![0.0], vec![1.0]]).unwrap();
        assert_eq!(out, vec![vec![1.0], vec![-1.0]]);
    }

    #[test]
    fn zero_block_encodes_to_zero() {
        let cfg = CodeConfig::new(3, 4, 0.5).unwrap();
        let out = encode(&cfg, &vec![vec![0.0; 3]; 4]).unwrap();
        assert_eq!(out, vec![vec![0.0; 3]; 4]);
    }

    #[test]
    fn unit_block_matches_dense_hadamard() {
        // Frozen zero row plus the three unit vectors; first output is the
        // all-ones direction.
        let cfg = CodeConfig::new(3, 4, 0.5).unwrap();
        let inputs = vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        let out = encode(&cfg, &inputs).unwrap();
        assert_eq!(out[0], vec![1.0, 1.0, 1.0]);
        assert_eq!(out, dense_encode(&inputs));
    }

    #[test]
    fn random_blocks_match_dense_hadamard() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for levels in 1..=4u32 {
            let n = 1usize << levels;
            let cfg = CodeConfig::new(n, n, 0.5).unwrap();
            let dim = rng.gen_range(1..=4);
            let inputs: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect())
                .collect();
            let out = encode(&cfg, &inputs).unwrap();
            let want = dense_encode(&inputs);
            for (o, w) in out.iter().zip(&want) {
                assert_close(o, w, 1e-12);
            }
        }
    }

    #[test]
    fn scalar_block_agrees_with_vector_encode() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cfg = CodeConfig::new(8, 8, 0.5).unwrap();
        let xs: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut scalars = xs.clone();
        encode_scalar_block(&mut scalars);
        let vectors = encode(&cfg, &xs.iter().map(|&x| vec![x]).collect::<Vec<_>>()).unwrap();
        for (s, v) in scalars.iter().zip(&vectors) {
            assert_eq!(*s, v[0]);
        }
    }

    #[test]
    fn encode_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cfg = CodeConfig::new(4, 8, 0.3).unwrap();
        let block = |rng: &mut ChaCha8Rng| -> Vec<Vec<f64>> {
            (0..8)
                .map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect()
        };
        let xs = block(&mut rng);
        let ys = block(&mut rng);
        let combined: Vec<Vec<f64>> = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| x.iter().zip(y).map(|(a, b)| 2.0 * a - 3.0 * b).collect())
            .collect();
        let ex = encode(&cfg, &xs).unwrap();
        let ey = encode(&cfg, &ys).unwrap();
        let ec = encode(&cfg, &combined).unwrap();
        for i in 0..8 {
            for k in 0..3 {
                assert!((ec[i][k] - (2.0 * ex[i][k] - 3.0 * ey[i][k])).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn encode_rejects_bad_blocks() {
        let cfg = CodeConfig::new(3, 4, 0.5).unwrap();
        assert!(matches!(
            encode(&cfg, &[vec![0.0]]),
            Err(Error::BlockLength {
                expected: 4,
                got: 1
            })
        ));
        assert!(matches!(
            encode(&cfg, &[vec![0.0], vec![0.0], vec![0.0, 1.0], vec![0.0]]),
            Err(Error::RaggedBlock(1, 2))
        ));
    }

    #[test]
    fn directions_are_signed_hadamard_columns() {
        let cfg = CodeConfig::new(3, 4, 0.5).unwrap();
        let signs = vec![-1.0, 1.0, 1.0];
        let set = DirectionSet::new(&cfg, &signs).unwrap();
        for i in 0..4 {
            for (j, &ch) in cfg.info_channels.iter().enumerate() {
                assert_eq!(
                    set.directions[i][j],
                    hadamard(i, ch) * signs[j],
                    "row {i} coord {j}"
                );
            }
        }
    }

    #[test]
    fn direction_entries_are_unit_signs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &(d, n) in &[(2usize, 2usize), (3, 8), (5, 16), (12, 16)] {
            let cfg = CodeConfig::new(d, n, 0.5).unwrap();
            let signs: Vec<f64> = (0..d)
                .map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
                .collect();
            let set = DirectionSet::new(&cfg, &signs).unwrap();
            for row in &set.directions {
                assert_eq!(row.len(), d);
                for &x in row {
                    assert!(x == 1.0 || x == -1.0);
                }
            }
        }
    }

    #[test]
    fn full_rate_directions_are_orthogonal() {
        let cfg = CodeConfig::new(8, 8, 0.5).unwrap();
        let set = DirectionSet::unsigned(&cfg);
        for i in 0..8 {
            for k in 0..8 {
                let dot: f64 = set.directions[i]
                    .iter()
                    .zip(&set.directions[k])
                    .map(|(a, b)| a * b)
                    .sum();
                assert_eq!(dot, if i == k { 8.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn direction_set_rejects_bad_diagonals() {
        let cfg = CodeConfig::new(3, 4, 0.5).unwrap();
        assert!(matches!(
            DirectionSet::new(&cfg, &[1.0, -1.0]),
            Err(Error::BlockLength { .. })
        ));
        assert!(matches!(
            DirectionSet::new(&cfg, &[1.0, 0.5, -1.0]),
            Err(Error::BadDiagonalSign(1, _))
        ));
    }

    #[test]
    fn decode_full_rate_pair() {
        // d = n = 2: outputs (u0+u1, u0-u1) = (3, 1) decode to (2, 1).
        let cfg = CodeConfig::new(2, 2, 0.5).unwrap();
        let got = decode(&cfg, &ErasedOutputs::complete(vec![3.0, 1.0])).unwrap();
        assert_eq!(got, vec![2.0, 1.0]);
    }

    #[test]
    fn decode_from_lower_output_alone() {
        // d = 1, n = 2, channel 0 frozen: x1 = u0 - u1 = -u1, so seeing only
        // x1 = -5 yields u1 = 5.
        let cfg = CodeConfig::new(1, 2, 0.5).unwrap();
        assert_eq!(cfg.frozen_set, vec![0]);
        let outputs = ErasedOutputs::new(vec![0.0, -5.0], vec![false, true]).unwrap();
        assert_eq!(decode(&cfg, &outputs).unwrap(), vec![5.0]);
    }

    #[test]
    fn three_of_four_with_last_output_erased() {
        let cfg = CodeConfig::new(3, 4, 0.5).unwrap();
        assert!(check_decodability(&cfg, &[true, true, true, false]));
        // Linear data: outputs of encoding u = (0, 4, -1, 2.5).
        let u = [0.0, 4.0, -1.0, 2.5];
        let mut x = u;
        encode_scalar_block(&mut x);
        let outputs = ErasedOutputs::new(x.to_vec(), vec![true, true, true, false]).unwrap();
        let got = decode(&cfg, &outputs).unwrap();
        assert_close(&got, &u[1..], 1e-12);
    }

    #[test]
    fn two_outputs_cannot_carry_three_coordinates() {
        let cfg = CodeConfig::new(3, 4, 0.5).unwrap();
        assert!(!check_decodability(&cfg, &[true, true, false, false]));
        let outputs = ErasedOutputs::new(vec![1.0; 4], vec![true, true, false, false]).unwrap();
        match decode(&cfg, &outputs) {
            Err(Error::NotDecodable(failed)) => assert_eq!(failed, vec![1, 2, 3]),
            other => panic!("expected NotDecodable, got {other:?}"),
        }
    }

    #[test]
    fn decodability_needs_no_arithmetic_on_values() {
        // check_decodability sees only the mask; decode agrees on a pattern
        // whose resolution leans on forward propagation (erased output 0).
        let cfg = CodeConfig::new(3, 4, 0.5).unwrap();
        assert!(check_decodability(&cfg, &[false, true, true, true]));
        let u = [0.0, -2.0, 0.5, 3.0];
        let mut x = u;
        encode_scalar_block(&mut x);
        let outputs = ErasedOutputs::new(x.to_vec(), vec![false, true, true, true]).unwrap();
        assert_close(&decode(&cfg, &outputs).unwrap(), &u[1..], 1e-12);
    }

    #[test]
    fn round_trip_at_full_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for levels in 1..=8u32 {
            let n = 1usize << levels;
            let cfg = CodeConfig::new(n, n, 0.5).unwrap();
            let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
            let mut x = u.clone();
            encode_scalar_block(&mut x);
            let got = decode(&cfg, &ErasedOutputs::complete(x)).unwrap();
            let scale = u.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for (g, w) in got.iter().zip(&u) {
                assert!((g - w).abs() <= 1e-12 * scale, "n={n}");
            }
        }
    }

    #[test]
    fn exhaustive_patterns_decode_linear_data_when_accepted() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for &(d, n) in &[(3usize, 4usize), (3, 8), (4, 8)] {
            let cfg = CodeConfig::new(d, n, 0.5).unwrap();
            let u: Vec<f64> = (0..n)
                .map(|ch| {
                    if cfg.is_frozen(ch) {
                        0.0
                    } else {
                        rng.gen_range(-5.0..5.0)
                    }
                })
                .collect();
            let want: Vec<f64> = cfg.info_channels.iter().map(|&ch| u[ch]).collect();
            let mut x = u.clone();
            encode_scalar_block(&mut x);
            let mut accepted = 0usize;
            for mask_bits in 0..(1u32 << n) {
                let mask: Vec<bool> = (0..n).map(|i| mask_bits >> i & 1 == 1).collect();
                let ok = check_decodability(&cfg, &mask);
                let outputs = ErasedOutputs::new(x.clone(), mask.clone()).unwrap();
                match decode(&cfg, &outputs) {
                    Ok(got) => {
                        assert!(ok, "decode succeeded on rejected mask {mask:?}");
                        assert_close(&got, &want, 1e-9);
                        accepted += 1;
                        assert!(mask.iter().filter(|&&m| m).count() >= d);
                    }
                    Err(Error::NotDecodable(_)) => assert!(!ok),
                    Err(other) => panic!("unexpected error {other:?}"),
                }
            }
            // Sanity: the all-available pattern is always accepted.
            assert!(accepted >= 1, "d={d} n={n}");
        }
    }

    #[test]
    fn decodability_is_monotone_in_availability() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let cfg = CodeConfig::new(8, 16, 0.5).unwrap();
        for _ in 0..500 {
            let base: Vec<bool> = (0..16).map(|_| rng.gen_bool(0.6)).collect();
            let mut bigger = base.clone();
            for b in bigger.iter_mut() {
                if !*b && rng.gen_bool(0.5) {
                    *b = true;
                }
            }
            if check_decodability(&cfg, &base) {
                assert!(check_decodability(&cfg, &bigger), "{base:?} -> {bigger:?}");
            }
        }
    }

    #[test]
    fn erased_outputs_accessors() {
        let out = ErasedOutputs::new(vec![1.0, 2.0, 3.0], vec![true, false, true]).unwrap();
        assert_eq!(out.len(), 3);
        assert_eq!(out.n_available(), 2);
        assert_eq!(out.received_indices(), vec![0, 2]);
        assert_eq!(out.value(0), Some(1.0));
        assert_eq!(out.value(1), None);
        assert!(ErasedOutputs::new(vec![1.0], vec![true, false]).is_err());
    }
}
