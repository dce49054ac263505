//! Gradient estimators assembled from scalar worker outputs.
//!
//! Every worker output is a symmetric directional-derivative probe
//! `g_i = (f(theta + delta v_i) - f(theta - delta v_i)) / (2 delta)`, which
//! equals `grad f(theta) . v_i` exactly for quadratics and up to an
//! `O(delta^2)` error otherwise. The three estimators differ only in how
//! they map outputs back to coordinates:
//!
//! * finite differences — unit directions, coordinate `i` comes from
//!   worker `i` alone (missing workers leave zeros);
//! * averaged random directions — `(1/|received|) * sum g_i v_i`;
//! * coded — erasure-decode the information channels and strip the signs.

use crate::codec::{self, DirectionSet, ErasedOutputs};
use crate::objectives::Objective;
use crate::{Error, Result};

/// Which assembly produced a [`GradientEstimate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorKind {
    FiniteDifferences,
    EvolutionStrategies,
    Coded,
}

impl EstimatorKind {
    /// Stable name used in traces and configs.
    pub fn name(self) -> &'static str {
        match self {
            EstimatorKind::FiniteDifferences => "fd",
            EstimatorKind::EvolutionStrategies => "es",
            EstimatorKind::Coded => "coded",
        }
    }
}

/// A gradient estimate plus bookkeeping about how it was formed.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientEstimate {
    /// The length-`d` estimate.
    pub values: Vec<f64>,
    /// Which estimator assembled it.
    pub method: EstimatorKind,
    /// How many worker outputs entered the estimate.
    pub n_outputs_used: usize,
    /// True only for estimates that went through the erasure decoder.
    pub decoded: bool,
}

/// One unit of worker work: probe the objective along `direction` with step
/// `delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkerTask {
    pub direction: Vec<f64>,
    pub delta: f64,
}

impl WorkerTask {
    pub fn new(direction: Vec<f64>, delta: f64) -> Result<Self> {
        if !delta.is_finite() || delta <= 0.0 {
            return Err(Error::NonPositiveDelta(delta));
        }
        Ok(Self { direction, delta })
    }

    /// Runs the probe: two counted objective evaluations.
    pub fn evaluate(&self, objective: &dyn Objective, theta: &[f64]) -> f64 {
        symmetric_directional_derivative(objective, theta, &self.direction, self.delta)
    }
}

/// Two-sided directional-derivative probe
/// `(f(theta + delta v) - f(theta - delta v)) / (2 delta)`; two counted
/// evaluations, second-order accurate in `delta`.
pub fn symmetric_directional_derivative(
    objective: &dyn Objective,
    theta: &[f64],
    direction: &[f64],
    delta: f64,
) -> f64 {
    assert!(delta > 0.0, "perturbation step must be positive");
    let plus: Vec<f64> = theta
        .iter()
        .zip(direction)
        .map(|(t, v)| t + delta * v)
        .collect();
    let minus: Vec<f64> = theta
        .iter()
        .zip(direction)
        .map(|(t, v)| t - delta * v)
        .collect();
    (objective.eval(&plus) - objective.eval(&minus)) / (2.0 * delta)
}

/// Central-difference partial derivatives along the listed coordinates
/// (2 evaluations each); unlisted coordinates are left at zero.
pub fn finite_difference_gradient(
    objective: &dyn Objective,
    theta: &[f64],
    delta: f64,
    coordinates: &[usize],
) -> Result<GradientEstimate> {
    if coordinates.is_empty() {
        return Err(Error::EmptyCoordinates);
    }
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::NonPositiveDelta(delta));
    }
    let d = theta.len();
    let mut values = vec![0.0; d];
    let mut probed = vec![false; d];
    let mut direction = vec![0.0; d];
    let mut n_outputs_used = 0;
    for &j in coordinates {
        if j >= d {
            return Err(Error::CoordinateOutOfRange { index: j, dim: d });
        }
        if probed[j] {
            continue;
        }
        probed[j] = true;
        direction[j] = 1.0;
        values[j] = symmetric_directional_derivative(objective, theta, &direction, delta);
        direction[j] = 0.0;
        n_outputs_used += 1;
    }
    Ok(GradientEstimate {
        values,
        method: EstimatorKind::FiniteDifferences,
        n_outputs_used,
        decoded: false,
    })
}

/// Assembles the finite-difference estimate from already-computed worker
/// outputs under the identity worker-to-coordinate assignment: coordinate
/// `i` is output `i` where available and zero otherwise.
pub fn finite_difference_from_outputs(outputs: &ErasedOutputs) -> Result<GradientEstimate> {
    let n_outputs_used = outputs.n_available();
    if n_outputs_used == 0 {
        return Err(Error::EmptyReceived);
    }
    let values = (0..outputs.len())
        .map(|i| outputs.value(i).unwrap_or(0.0))
        .collect();
    Ok(GradientEstimate {
        values,
        method: EstimatorKind::FiniteDifferences,
        n_outputs_used,
        decoded: false,
    })
}

/// Averaged random-direction estimator `(1/|received|) * sum g_i v_i` over
/// the received subset.
pub fn es_gradient(
    outputs: &[f64],
    directions: &[Vec<f64>],
    received: &[usize],
) -> Result<GradientEstimate> {
    if received.is_empty() {
        return Err(Error::EmptyReceived);
    }
    if outputs.len() != directions.len() {
        return Err(Error::BlockLength {
            expected: directions.len(),
            got: outputs.len(),
        });
    }
    let d = directions.first().map(Vec::len).unwrap_or(0);
    let mut values = vec![0.0; d];
    for &i in received {
        if i >= outputs.len() {
            return Err(Error::CoordinateOutOfRange {
                index: i,
                dim: outputs.len(),
            });
        }
        if directions[i].len() != d {
            return Err(Error::RaggedBlock(d, directions[i].len()));
        }
        for (v, dir) in values.iter_mut().zip(&directions[i]) {
            *v += outputs[i] * dir;
        }
    }
    let scale = 1.0 / received.len() as f64;
    for v in values.iter_mut() {
        *v *= scale;
    }
    Ok(GradientEstimate {
        values,
        method: EstimatorKind::EvolutionStrategies,
        n_outputs_used: received.len(),
        decoded: false,
    })
}

/// Erasure-decodes the information channels from the available outputs and
/// divides out the encode-time diagonal signs, yielding the full
/// finite-difference gradient estimate.
pub fn coded_gradient(set: &DirectionSet, outputs: &ErasedOutputs) -> Result<GradientEstimate> {
    let decoded = codec::decode(&set.config, outputs)?;
    let values = decoded
        .iter()
        .zip(&set.diag_signs)
        .map(|(v, s)| v / s)
        .collect();
    Ok(GradientEstimate {
        values,
        method: EstimatorKind::Coded,
        n_outputs_used: outputs.n_available(),
        decoded: true,
    })
}
