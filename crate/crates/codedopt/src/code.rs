//! Erasure-code construction: channel reliabilities and frozen-set selection.
//!
//! Combining worker outputs pairwise through the butterfly circuit (see
//! [`crate::codec`]) polarizes an erasure channel with loss probability
//! `eps` into `n` synthetic channels of very unequal reliability. The `d`
//! most reliable channels carry the `d` coordinates of the quantity being
//! estimated; the remaining `n - d` are frozen to zero so the decoder can
//! cancel them out without seeing them.

use crate::{Error, Result};

/// Per-channel erasure probabilities after polarizing a block of `n_total`
/// independent erasure channels that each drop an output with probability
/// `design_erasure`.
///
/// Starting from the single-channel vector `[eps]`, each doubling step maps
/// every channel with erasure probability `z` to a degraded child `2z - z^2`
/// (decoded first, sees both erasures) and an upgraded child `z^2` (decoded
/// second, already knows its sibling), in that order. Entry `i` of the
/// result is the erasure probability of the channel decoded at step `i` by
/// the successive-cancellation decoder; smaller is better.
pub fn bec_channel_reliabilities(n_total: usize, design_erasure: f64) -> Result<Vec<f64>> {
    if !n_total.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n_total));
    }
    if !(design_erasure > 0.0 && design_erasure < 1.0) {
        return Err(Error::ErasureOutOfRange(design_erasure));
    }
    let mut z = vec![design_erasure];
    while z.len() < n_total {
        let mut next = Vec::with_capacity(z.len() * 2);
        for &zi in &z {
            next.push(2.0 * zi - zi * zi);
            next.push(zi * zi);
        }
        z = next;
    }
    Ok(z)
}

/// Indices of the `n_frozen` least reliable channels (largest erasure
/// probability). Ties freeze the lower channel index first, so the
/// selection is deterministic.
pub fn select_frozen_channels(z_values: &[f64], n_frozen: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..z_values.len()).collect();
    order.sort_by(|&a, &b| z_values[b].total_cmp(&z_values[a]).then(a.cmp(&b)));
    let mut frozen: Vec<usize> = order[..n_frozen].to_vec();
    frozen.sort_unstable();
    frozen
}

/// A fully determined code: which channels are frozen and which carry
/// coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeConfig {
    /// Block length `n` (number of workers), a power of two.
    pub n_total: usize,
    /// Dimension `d` of the estimated vector, `1 <= d <= n`.
    pub n_params: usize,
    /// Erasure probability the construction was optimized for.
    pub design_erasure: f64,
    /// Per-channel erasure probabilities, length `n_total`.
    pub z_values: Vec<f64>,
    /// Frozen channel indices, ascending, length `n_total - n_params`.
    pub frozen_set: Vec<usize>,
    /// Information channel indices, ascending, length `n_params`; entry `j`
    /// is the channel that carries coordinate `j`.
    pub info_channels: Vec<usize>,
}

impl CodeConfig {
    /// Builds the code for an estimate of dimension `n_params` spread over
    /// `n_total` workers, freezing the `n_total - n_params` least reliable
    /// channels at the given design erasure probability.
    pub fn new(n_params: usize, n_total: usize, design_erasure: f64) -> Result<Self> {
        if n_params == 0 || n_params > n_total {
            return Err(Error::DimensionMismatch { n_params, n_total });
        }
        let z_values = bec_channel_reliabilities(n_total, design_erasure)?;
        let frozen_set = select_frozen_channels(&z_values, n_total - n_params);
        let mut is_frozen = vec![false; n_total];
        for &ch in &frozen_set {
            is_frozen[ch] = true;
        }
        let info_channels = (0..n_total).filter(|&ch| !is_frozen[ch]).collect();
        Ok(Self {
            n_total,
            n_params,
            design_erasure,
            z_values,
            frozen_set,
            info_channels,
        })
    }

    /// Code rate `d / n`.
    pub fn rate(&self) -> f64 {
        self.n_params as f64 / self.n_total as f64
    }

    /// Number of butterfly stages, `log2(n_total)`.
    pub fn levels(&self) -> u32 {
        self.n_total.trailing_zeros()
    }

    /// Whether channel `ch` is frozen.
    pub fn is_frozen(&self, ch: usize) -> bool {
        self.frozen_set.binary_search(&ch).is_ok()
    }

    /// Boolean frozen mask, indexed by channel.
    pub fn frozen_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n_total];
        for &ch in &self.frozen_set {
            mask[ch] = true;
        }
        mask
    }
}
