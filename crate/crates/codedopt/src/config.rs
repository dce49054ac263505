//! Experiment configuration: a flat `key = value` text format, equivalent
//! CLI flags (flags override the file), defaulting, validation, and an
//! echo of the fully resolved configuration that is embedded in every
//! trace header so no default is silent.
//!
//! The echo round-trips: parsing the echoed text yields the same resolved
//! configuration.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::code::CodeConfig;
use crate::matrix::{vector_from_csv_path, Matrix};
use crate::objectives::{
    AttackObjective, L1Objective, L2SqObjective, Objective, SyntheticClassifier,
};
use crate::optimizer::{AdamParams, Method, RunOptions, UpdateRule};
use crate::problems;
use crate::sim::{RuntimeDistribution, StoppingRule};
use crate::{Error, Result};

/// Version tag for the direction-encoding layout (butterfly stage order and
/// channel indexing); recorded in traces so decoders of archived traces can
/// detect incompatible layouts.
pub const CODEC_VERSION: u32 = 1;
/// The averaging estimator divides by the number of received outputs, not
/// by the total worker count; recorded in traces for auditability.
pub const ES_NORMALIZATION: &str = "received";
/// The hybrid method's two extra objective evaluations are charged to the
/// master at zero simulated time; recorded in traces for auditability.
pub const HYBRID_EVAL_CHARGE: &str = "master_zero_time";

/// Which objective an experiment optimizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveKind {
    /// `‖Aθ − b‖₁` (bundled benchmark or CSV-backed).
    L1,
    /// `0.5‖Aθ − b‖²` (bundled benchmark or CSV-backed).
    L2Sq,
    /// Push a classifier input toward a chosen class.
    AttackTargeted,
    /// Push a classifier input away from its current class.
    AttackUntargeted,
}

impl ObjectiveKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::L1 => "l1",
            Self::L2Sq => "l2sq",
            Self::AttackTargeted => "attack_targeted",
            Self::AttackUntargeted => "attack_untargeted",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "l1" => Some(Self::L1),
            "l2sq" => Some(Self::L2Sq),
            "attack_targeted" => Some(Self::AttackTargeted),
            "attack_untargeted" => Some(Self::AttackUntargeted),
            _ => None,
        }
    }

    pub fn is_attack(self) -> bool {
        matches!(self, Self::AttackTargeted | Self::AttackUntargeted)
    }
}

/// Stopping rule as written in config files (`all`, `first_k:16`,
/// `first_decodable`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StoppingSpec {
    All,
    FirstK(usize),
    FirstDecodable,
}

impl StoppingSpec {
    pub fn parse(text: &str) -> Result<Self> {
        match text.split_once(':') {
            None => match text {
                "all" => Ok(Self::All),
                "first_decodable" => Ok(Self::FirstDecodable),
                "first_k" => Err(Error::Config(
                    "stopping rule first_k needs a count, e.g. first_k:16".into(),
                )),
                other => Err(Error::Config(format!(
                    "unknown stopping rule `{other}` (expected all, first_k:K, first_decodable)"
                ))),
            },
            Some(("first_k", k)) => {
                let k = k.parse().map_err(|_| {
                    Error::Config(format!("stopping rule first_k: invalid count `{k}`"))
                })?;
                Ok(Self::FirstK(k))
            }
            Some((other, _)) => Err(Error::Config(format!(
                "stopping rule `{other}` takes no parameter"
            ))),
        }
    }

    pub fn render(&self) -> String {
        match self {
            Self::All => "all".into(),
            Self::FirstK(k) => format!("first_k:{k}"),
            Self::FirstDecodable => "first_decodable".into(),
        }
    }

    /// Instantiates the rule against a concrete code.
    pub fn build(&self, code: &CodeConfig) -> StoppingRule {
        match self {
            Self::All => StoppingRule::All,
            Self::FirstK(k) => StoppingRule::FirstK(*k),
            Self::FirstDecodable => StoppingRule::FirstDecodable(code.clone()),
        }
    }
}

/// Runtime distribution as written in config files
/// (`shifted_exp:SHIFT:RATE` or `empirical:PATH`).
#[derive(Debug, Clone, PartialEq)]
pub enum RuntimeSpec {
    ShiftedExp { shift: f64, rate: f64 },
    Empirical { path: PathBuf },
}

impl RuntimeSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
        match kind {
            "shifted_exp" => {
                let (shift, rate) = rest.split_once(':').ok_or_else(|| {
                    Error::Config(format!(
                        "runtime distribution shifted_exp needs two parameters, got `{text}` \
                         (expected shifted_exp:SHIFT:RATE)"
                    ))
                })?;
                let parse = |name: &str, v: &str| -> Result<f64> {
                    v.parse().map_err(|_| {
                        Error::Config(format!("runtime distribution {name}: invalid float `{v}`"))
                    })
                };
                Ok(Self::ShiftedExp {
                    shift: parse("shift", shift)?,
                    rate: parse("rate", rate)?,
                })
            }
            "empirical" => {
                if rest.is_empty() {
                    return Err(Error::Config(
                        "runtime distribution empirical needs a sample file, e.g. \
                         empirical:runtimes.txt"
                            .into(),
                    ));
                }
                Ok(Self::Empirical {
                    path: PathBuf::from(rest),
                })
            }
            other => Err(Error::Config(format!(
                "unknown runtime distribution `{other}` (expected shifted_exp:SHIFT:RATE or \
                 empirical:PATH)"
            ))),
        }
    }

    pub fn render(&self) -> String {
        match self {
            Self::ShiftedExp { shift, rate } => format!("shifted_exp:{shift}:{rate}"),
            Self::Empirical { path } => format!("empirical:{}", path.display()),
        }
    }

    pub fn build(&self) -> Result<RuntimeDistribution> {
        match self {
            Self::ShiftedExp { shift, rate } => {
                RuntimeDistribution::shifted_exponential(*shift, *rate)
            }
            Self::Empirical { path } => RuntimeDistribution::from_sample_file(path),
        }
    }
}

/// Unresolved configuration: every field optional, filled from a config
/// file and/or CLI flags before [`resolve`](RawConfig::resolve).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    pub objective: Option<ObjectiveKind>,
    pub a_csv: Option<PathBuf>,
    pub b_csv: Option<PathBuf>,
    pub classifier_w1_csv: Option<PathBuf>,
    pub classifier_c1_csv: Option<PathBuf>,
    pub classifier_w2_csv: Option<PathBuf>,
    pub classifier_c2_csv: Option<PathBuf>,
    pub theta0_csv: Option<PathBuf>,
    pub attack_c: Option<f64>,
    pub attack_kappa: Option<f64>,
    pub attack_target: Option<usize>,
    pub attack_original: Option<usize>,
    pub attack_mixed_hinge: Option<bool>,
    pub method: Option<Method>,
    pub d: Option<usize>,
    pub n: Option<usize>,
    pub design_erasure: Option<f64>,
    pub delta: Option<f64>,
    pub optimizer: Option<UpdateRule>,
    pub step_size: Option<f64>,
    pub adam_beta1: Option<f64>,
    pub adam_beta2: Option<f64>,
    pub adam_epsilon: Option<f64>,
    pub stopping_rule: Option<StoppingSpec>,
    pub runtime_dist: Option<RuntimeSpec>,
    pub decode_cost: Option<f64>,
    pub resample_directions: Option<bool>,
    pub iterations: Option<usize>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
}

fn parse_typed<T: std::str::FromStr>(key: &str, value: &str, what: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("key `{key}`: invalid {what} `{value}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::Config(format!(
            "key `{key}`: invalid boolean `{value}` (expected true or false)"
        ))),
    }
}

impl RawConfig {
    /// Parses flat `key = value` text. Blank lines and `#` comments are
    /// ignored; unknown and duplicate keys are errors.
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut raw = Self::default();
        let mut seen: HashSet<String> = HashSet::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "line {}: expected `key = value`, got `{line}`",
                    lineno + 1
                ))
            })?;
            let key = key.trim();
            let value = value.trim();
            if !seen.insert(key.to_string()) {
                return Err(Error::Config(format!(
                    "line {}: duplicate key `{key}`",
                    lineno + 1
                )));
            }
            raw.set(key, value)?;
        }
        Ok(raw)
    }

    /// Reads and parses a config file.
    pub fn parse_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse_str(&std::fs::read_to_string(path)?)
    }

    /// Sets one key from its textual value; rejects unknown keys.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "objective" => {
                self.objective = Some(ObjectiveKind::from_name(value).ok_or_else(|| {
                    Error::Config(format!(
                        "key `objective`: unknown objective `{value}` (expected l1, l2sq, \
                         attack_targeted, attack_untargeted)"
                    ))
                })?)
            }
            "a_csv" => self.a_csv = Some(PathBuf::from(value)),
            "b_csv" => self.b_csv = Some(PathBuf::from(value)),
            "classifier_w1_csv" => self.classifier_w1_csv = Some(PathBuf::from(value)),
            "classifier_c1_csv" => self.classifier_c1_csv = Some(PathBuf::from(value)),
            "classifier_w2_csv" => self.classifier_w2_csv = Some(PathBuf::from(value)),
            "classifier_c2_csv" => self.classifier_c2_csv = Some(PathBuf::from(value)),
            "theta0_csv" => self.theta0_csv = Some(PathBuf::from(value)),
            "attack_c" => self.attack_c = Some(parse_typed(key, value, "float")?),
            "attack_kappa" => self.attack_kappa = Some(parse_typed(key, value, "float")?),
            "attack_target" => self.attack_target = Some(parse_typed(key, value, "integer")?),
            "attack_original" => self.attack_original = Some(parse_typed(key, value, "integer")?),
            "attack_mixed_hinge" => self.attack_mixed_hinge = Some(parse_bool(key, value)?),
            "method" => {
                self.method = Some(Method::from_name(value).ok_or_else(|| {
                    Error::Config(format!(
                        "key `method`: unknown method `{value}` (expected fd, es, coded, hybrid)"
                    ))
                })?)
            }
            "d" => self.d = Some(parse_typed(key, value, "integer")?),
            "n" => self.n = Some(parse_typed(key, value, "integer")?),
            "design_erasure" => self.design_erasure = Some(parse_typed(key, value, "float")?),
            "delta" => self.delta = Some(parse_typed(key, value, "float")?),
            "optimizer" => {
                self.optimizer = Some(UpdateRule::from_name(value).ok_or_else(|| {
                    Error::Config(format!(
                        "key `optimizer`: unknown optimizer `{value}` (expected gd or adam)"
                    ))
                })?)
            }
            "step_size" => self.step_size = Some(parse_typed(key, value, "float")?),
            "adam_beta1" => self.adam_beta1 = Some(parse_typed(key, value, "float")?),
            "adam_beta2" => self.adam_beta2 = Some(parse_typed(key, value, "float")?),
            "adam_epsilon" => self.adam_epsilon = Some(parse_typed(key, value, "float")?),
            "stopping_rule" => self.stopping_rule = Some(StoppingSpec::parse(value)?),
            "runtime_dist" => self.runtime_dist = Some(RuntimeSpec::parse(value)?),
            "decode_cost" => self.decode_cost = Some(parse_typed(key, value, "float")?),
            "resample_directions" => self.resample_directions = Some(parse_bool(key, value)?),
            "iterations" => self.iterations = Some(parse_typed(key, value, "integer")?),
            "seed" => self.seed = Some(parse_typed(key, value, "integer")?),
            "output" => self.output = Some(PathBuf::from(value)),
            // Informational constants; accepted back so the header echo
            // round-trips, but they must match this build.
            "codec_version" => {
                let v: u32 = parse_typed(key, value, "integer")?;
                if v != CODEC_VERSION {
                    return Err(Error::Config(format!(
                        "key `codec_version`: this build encodes layout {CODEC_VERSION}, \
                         the config asks for {v}"
                    )));
                }
            }
            "es_normalization" => {
                if value != ES_NORMALIZATION {
                    return Err(Error::Config(format!(
                        "key `es_normalization`: this build normalizes by `{ES_NORMALIZATION}`, \
                         the config asks for `{value}`"
                    )));
                }
            }
            "hybrid_eval_charge" => {
                if value != HYBRID_EVAL_CHARGE {
                    return Err(Error::Config(format!(
                        "key `hybrid_eval_charge`: this build charges `{HYBRID_EVAL_CHARGE}`, \
                         the config asks for `{value}`"
                    )));
                }
            }
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Overlays `other` on top of `self`: set fields in `other` win. Used
    /// to apply CLI flags over a config file.
    pub fn merged_with(mut self, other: &RawConfig) -> RawConfig {
        macro_rules! overlay {
            ($($field:ident),* $(,)?) => {
                $(if other.$field.is_some() {
                    self.$field = other.$field.clone();
                })*
            };
        }
        overlay!(
            objective,
            a_csv,
            b_csv,
            classifier_w1_csv,
            classifier_c1_csv,
            classifier_w2_csv,
            classifier_c2_csv,
            theta0_csv,
            attack_c,
            attack_kappa,
            attack_target,
            attack_original,
            attack_mixed_hinge,
            method,
            d,
            n,
            design_erasure,
            delta,
            optimizer,
            step_size,
            adam_beta1,
            adam_beta2,
            adam_epsilon,
            stopping_rule,
            runtime_dist,
            decode_cost,
            resample_directions,
            iterations,
            seed,
            output,
        );
        self
    }

    /// Applies defaults, loads whatever is needed to fix the remaining
    /// free parameters, and validates cross-field constraints.
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let objective = self.objective.ok_or_else(|| {
            Error::Config(
                "key `objective` is required (l1, l2sq, attack_targeted, attack_untargeted)".into(),
            )
        })?;
        let method = self.method.ok_or_else(|| {
            Error::Config("key `method` is required (fd, es, coded, hybrid)".into())
        })?;

        // Objective-specific keys must match the chosen objective.
        if !objective.is_attack() {
            for (set, key) in [
                (self.classifier_w1_csv.is_some(), "classifier_w1_csv"),
                (self.classifier_c1_csv.is_some(), "classifier_c1_csv"),
                (self.classifier_w2_csv.is_some(), "classifier_w2_csv"),
                (self.classifier_c2_csv.is_some(), "classifier_c2_csv"),
                (self.attack_c.is_some(), "attack_c"),
                (self.attack_kappa.is_some(), "attack_kappa"),
                (self.attack_target.is_some(), "attack_target"),
                (self.attack_original.is_some(), "attack_original"),
                (self.attack_mixed_hinge.is_some(), "attack_mixed_hinge"),
            ] {
                if set {
                    return Err(Error::Config(format!(
                        "key `{key}` requires an attack objective, but objective = {}",
                        objective.name()
                    )));
                }
            }
        } else {
            for (set, key) in [
                (self.a_csv.is_some(), "a_csv"),
                (self.b_csv.is_some(), "b_csv"),
            ] {
                if set {
                    return Err(Error::Config(format!(
                        "key `{key}` requires objective = l1 or l2sq, but objective = {}",
                        objective.name()
                    )));
                }
            }
            if objective == ObjectiveKind::AttackTargeted && self.attack_original.is_some() {
                return Err(Error::Config(
                    "key `attack_original` requires objective = attack_untargeted".into(),
                ));
            }
            if objective == ObjectiveKind::AttackUntargeted && self.attack_target.is_some() {
                return Err(Error::Config(
                    "key `attack_target` requires objective = attack_targeted".into(),
                ));
            }
        }
        if self.a_csv.is_some() != self.b_csv.is_some() {
            return Err(Error::Config(
                "keys `a_csv` and `b_csv` must be set together".into(),
            ));
        }
        let classifier_keys = [
            &self.classifier_w1_csv,
            &self.classifier_c1_csv,
            &self.classifier_w2_csv,
            &self.classifier_c2_csv,
        ];
        let n_classifier_set = classifier_keys.iter().filter(|p| p.is_some()).count();
        if n_classifier_set != 0 && n_classifier_set != 4 {
            return Err(Error::Config(
                "keys `classifier_w1_csv`, `classifier_c1_csv`, `classifier_w2_csv`, \
                 `classifier_c2_csv` must be set together"
                    .into(),
            ));
        }
        if n_classifier_set == 4 && self.theta0_csv.is_none() {
            return Err(Error::Config(
                "a custom classifier needs `theta0_csv` for the attack start point".into(),
            ));
        }

        // Paths must exist before anything is loaded or run.
        for path in [
            &self.a_csv,
            &self.b_csv,
            &self.classifier_w1_csv,
            &self.classifier_c1_csv,
            &self.classifier_w2_csv,
            &self.classifier_c2_csv,
            &self.theta0_csv,
        ]
        .into_iter()
        .flatten()
        {
            if !path.exists() {
                return Err(Error::Config(format!("file not found: {}", path.display())));
            }
        }
        if let Some(RuntimeSpec::Empirical { path }) = &self.runtime_dist {
            if !path.exists() {
                return Err(Error::Config(format!("file not found: {}", path.display())));
            }
        }

        // Fix the parameter dimension from the objective's data.
        let data_dim = match objective {
            ObjectiveKind::L1 | ObjectiveKind::L2Sq => match &self.a_csv {
                Some(path) => Matrix::from_csv_path(path)?.cols(),
                None => problems::L1_DIM,
            },
            _ => match &self.classifier_w1_csv {
                Some(path) => Matrix::from_csv_path(path)?.cols(),
                None => problems::ATTACK_DIM,
            },
        };
        let d = self.d.unwrap_or(data_dim);
        if d != data_dim {
            return Err(Error::Config(format!(
                "key `d`: the {} objective has dimension {data_dim}, got d = {d}",
                objective.name()
            )));
        }
        let n = self.n.unwrap_or_else(|| {
            let mut n = 1usize;
            while n <= d {
                n *= 2;
            }
            n
        });
        if !n.is_power_of_two() {
            return Err(Error::Config(format!(
                "key `n`: N must be a power of two, got {n}"
            )));
        }
        if n < d {
            return Err(Error::Config(format!(
                "key `n`: need at least as many workers as parameters, got n = {n} < d = {d}"
            )));
        }
        if method == Method::Fd && n != d {
            return Err(Error::Config(format!(
                "method = fd assigns one coordinate per worker and needs n = d, \
                 got n = {n}, d = {d}"
            )));
        }

        let design_erasure = self.design_erasure.unwrap_or(0.5);
        if !(design_erasure > 0.0 && design_erasure < 1.0) {
            return Err(Error::Config(format!(
                "key `design_erasure`: must lie strictly between 0 and 1, got {design_erasure}"
            )));
        }
        let delta = self.delta.unwrap_or(1e-3);
        if !delta.is_finite() || delta <= 0.0 {
            return Err(Error::Config(format!(
                "key `delta`: must be strictly positive, got {delta}"
            )));
        }
        let optimizer = self.optimizer.unwrap_or(UpdateRule::Gd);
        let step_size = self.step_size.unwrap_or(match optimizer {
            UpdateRule::Gd => 0.5,
            UpdateRule::Adam => 0.01,
        });
        if !step_size.is_finite() || step_size <= 0.0 {
            return Err(Error::Config(format!(
                "key `step_size`: must be strictly positive, got {step_size}"
            )));
        }
        let defaults = AdamParams::default();
        let adam = AdamParams {
            beta1: self.adam_beta1.unwrap_or(defaults.beta1),
            beta2: self.adam_beta2.unwrap_or(defaults.beta2),
            epsilon: self.adam_epsilon.unwrap_or(defaults.epsilon),
        };
        let stopping_rule = self
            .stopping_rule
            .clone()
            .unwrap_or(StoppingSpec::FirstDecodable);
        if let StoppingSpec::FirstK(k) = stopping_rule {
            if k == 0 || k > n {
                return Err(Error::Config(format!(
                    "key `stopping_rule`: first_k:{k} cannot fire with n = {n} workers"
                )));
            }
        }
        let runtime_dist = self
            .runtime_dist
            .clone()
            .unwrap_or(RuntimeSpec::ShiftedExp {
                shift: 1.0,
                rate: 0.5,
            });
        let decode_cost = self.decode_cost.unwrap_or(0.0);
        if decode_cost < 0.0 {
            return Err(Error::Config(format!(
                "key `decode_cost`: must be nonnegative, got {decode_cost}"
            )));
        }
        let iterations = self.iterations.unwrap_or(1000);
        if iterations == 0 {
            return Err(Error::Config("key `iterations`: must be at least 1".into()));
        }

        // Attack bookkeeping: the target/original classes default to the
        // runner-up/winner at the start point.
        let (attack_target, attack_original) = if objective.is_attack() {
            let model = load_classifier(self)?;
            let theta0 = load_theta0(self, objective, d)?;
            if theta0.len() != model.input_dim() {
                return Err(Error::Config(format!(
                    "key `theta0_csv`: start point has length {}, classifier input is {}",
                    theta0.len(),
                    model.input_dim()
                )));
            }
            let logp = model.log_probabilities(&theta0);
            let mut order: Vec<usize> = (0..logp.len()).collect();
            order.sort_by(|&a, &b| logp[b].total_cmp(&logp[a]).then(a.cmp(&b)));
            match objective {
                ObjectiveKind::AttackTargeted => {
                    let target = self.attack_target.unwrap_or(order[1]);
                    if target >= model.n_classes() {
                        return Err(Error::Config(format!(
                            "key `attack_target`: class {target} out of range for {} classes",
                            model.n_classes()
                        )));
                    }
                    (Some(target), None)
                }
                _ => {
                    let original = self.attack_original.unwrap_or(order[0]);
                    if original >= model.n_classes() {
                        return Err(Error::Config(format!(
                            "key `attack_original`: class {original} out of range for {} classes",
                            model.n_classes()
                        )));
                    }
                    (None, Some(original))
                }
            }
        } else {
            (None, None)
        };

        Ok(ExperimentConfig {
            objective,
            a_csv: self.a_csv.clone(),
            b_csv: self.b_csv.clone(),
            classifier_w1_csv: self.classifier_w1_csv.clone(),
            classifier_c1_csv: self.classifier_c1_csv.clone(),
            classifier_w2_csv: self.classifier_w2_csv.clone(),
            classifier_c2_csv: self.classifier_c2_csv.clone(),
            theta0_csv: self.theta0_csv.clone(),
            attack_c: if objective.is_attack() {
                self.attack_c.unwrap_or(0.1)
            } else {
                0.1
            },
            attack_kappa: if objective.is_attack() {
                self.attack_kappa.unwrap_or(0.0)
            } else {
                0.0
            },
            attack_target,
            attack_original,
            attack_mixed_hinge: self.attack_mixed_hinge.unwrap_or(false),
            method,
            d,
            n,
            design_erasure,
            delta,
            optimizer,
            step_size,
            adam,
            stopping_rule,
            runtime_dist,
            decode_cost,
            resample_directions: self.resample_directions.unwrap_or(true),
            iterations,
            seed: self.seed.unwrap_or(1),
            output: self
                .output
                .clone()
                .unwrap_or_else(|| PathBuf::from("trace.csv")),
        })
    }
}

fn load_classifier(raw: &RawConfig) -> Result<SyntheticClassifier> {
    match (
        &raw.classifier_w1_csv,
        &raw.classifier_c1_csv,
        &raw.classifier_w2_csv,
        &raw.classifier_c2_csv,
    ) {
        (Some(w1), Some(c1), Some(w2), Some(c2)) => SyntheticClassifier::new(
            Matrix::from_csv_path(w1)?,
            vector_from_csv_path(c1)?,
            Matrix::from_csv_path(w2)?,
            vector_from_csv_path(c2)?,
        ),
        _ => Ok(problems::synthetic_classifier()),
    }
}

fn load_theta0(raw: &RawConfig, objective: ObjectiveKind, d: usize) -> Result<Vec<f64>> {
    if let Some(path) = &raw.theta0_csv {
        return vector_from_csv_path(path);
    }
    Ok(match objective {
        ObjectiveKind::L1 | ObjectiveKind::L2Sq => vec![0.0; d],
        _ => problems::attack_instance().theta0,
    })
}

/// Fully resolved experiment configuration: every parameter pinned, ready
/// to build the objective and the run options.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub objective: ObjectiveKind,
    pub a_csv: Option<PathBuf>,
    pub b_csv: Option<PathBuf>,
    pub classifier_w1_csv: Option<PathBuf>,
    pub classifier_c1_csv: Option<PathBuf>,
    pub classifier_w2_csv: Option<PathBuf>,
    pub classifier_c2_csv: Option<PathBuf>,
    pub theta0_csv: Option<PathBuf>,
    pub attack_c: f64,
    pub attack_kappa: f64,
    pub attack_target: Option<usize>,
    pub attack_original: Option<usize>,
    pub attack_mixed_hinge: bool,
    pub method: Method,
    pub d: usize,
    pub n: usize,
    pub design_erasure: f64,
    pub delta: f64,
    pub optimizer: UpdateRule,
    pub step_size: f64,
    pub adam: AdamParams,
    pub stopping_rule: StoppingSpec,
    pub runtime_dist: RuntimeSpec,
    pub decode_cost: f64,
    pub resample_directions: bool,
    pub iterations: usize,
    pub seed: u64,
    pub output: PathBuf,
}

impl ExperimentConfig {
    /// `key = value` lines for every resolved parameter, in a fixed order;
    /// parsing this text reproduces the configuration.
    pub fn echo(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        line("objective", self.objective.name().into());
        let mut path_line = |k: &str, v: &Option<PathBuf>| {
            if let Some(p) = v {
                let _ = writeln!(out, "{k} = {}", p.display());
            }
        };
        path_line("a_csv", &self.a_csv);
        path_line("b_csv", &self.b_csv);
        path_line("classifier_w1_csv", &self.classifier_w1_csv);
        path_line("classifier_c1_csv", &self.classifier_c1_csv);
        path_line("classifier_w2_csv", &self.classifier_w2_csv);
        path_line("classifier_c2_csv", &self.classifier_c2_csv);
        path_line("theta0_csv", &self.theta0_csv);
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        if self.objective.is_attack() {
            line("attack_c", format!("{}", self.attack_c));
            line("attack_kappa", format!("{}", self.attack_kappa));
            if let Some(t) = self.attack_target {
                line("attack_target", format!("{t}"));
            }
            if let Some(o) = self.attack_original {
                line("attack_original", format!("{o}"));
            }
            line("attack_mixed_hinge", format!("{}", self.attack_mixed_hinge));
        }
        line("method", self.method.name().into());
        line("d", format!("{}", self.d));
        line("n", format!("{}", self.n));
        line("design_erasure", format!("{}", self.design_erasure));
        line("delta", format!("{}", self.delta));
        line("optimizer", self.optimizer.name().into());
        line("step_size", format!("{}", self.step_size));
        line("adam_beta1", format!("{}", self.adam.beta1));
        line("adam_beta2", format!("{}", self.adam.beta2));
        line("adam_epsilon", format!("{}", self.adam.epsilon));
        line("stopping_rule", self.stopping_rule.render());
        line("runtime_dist", self.runtime_dist.render());
        line("decode_cost", format!("{}", self.decode_cost));
        line(
            "resample_directions",
            format!("{}", self.resample_directions),
        );
        line("iterations", format!("{}", self.iterations));
        line("seed", format!("{}", self.seed));
        line("output", format!("{}", self.output.display()));
        line("codec_version", format!("{CODEC_VERSION}"));
        line("es_normalization", ES_NORMALIZATION.into());
        line("hybrid_eval_charge", HYBRID_EVAL_CHARGE.into());
        out
    }

    /// Builds the code construction for this experiment.
    pub fn build_code(&self) -> Result<CodeConfig> {
        CodeConfig::new(self.d, self.n, self.design_erasure)
    }

    /// Builds the objective function.
    pub fn build_objective(&self) -> Result<Box<dyn Objective>> {
        match self.objective {
            ObjectiveKind::L1 | ObjectiveKind::L2Sq => {
                let (a, b) = match (&self.a_csv, &self.b_csv) {
                    (Some(ap), Some(bp)) => (Matrix::from_csv_path(ap)?, vector_from_csv_path(bp)?),
                    _ => {
                        let inst = problems::l1_benchmark();
                        (inst.a, inst.b)
                    }
                };
                Ok(match self.objective {
                    ObjectiveKind::L1 => Box::new(L1Objective::new(a, b)?),
                    _ => Box::new(L2SqObjective::new(a, b)?),
                })
            }
            ObjectiveKind::AttackTargeted | ObjectiveKind::AttackUntargeted => {
                let raw = self.as_raw();
                let model = load_classifier(&raw)?;
                let theta0 = load_theta0(&raw, self.objective, self.d)?;
                let objective = match self.objective {
                    ObjectiveKind::AttackTargeted => AttackObjective::targeted(
                        model,
                        theta0,
                        self.attack_target.expect("resolved for targeted attacks"),
                        self.attack_c,
                        self.attack_kappa,
                    )?,
                    _ => AttackObjective::untargeted(
                        model,
                        theta0,
                        self.attack_original
                            .expect("resolved for untargeted attacks"),
                        self.attack_c,
                        self.attack_kappa,
                    )?,
                };
                Ok(Box::new(
                    objective.with_mixed_hinge(self.attack_mixed_hinge),
                ))
            }
        }
    }

    /// The start point for the optimization.
    pub fn build_theta0(&self) -> Result<Vec<f64>> {
        load_theta0(&self.as_raw(), self.objective, self.d)
    }

    /// Assembles the optimizer run options (code, rule, distribution, and
    /// start point included).
    pub fn build_run_options(&self) -> Result<RunOptions> {
        let code = self.build_code()?;
        let stopping_rule = self.stopping_rule.build(&code);
        Ok(RunOptions {
            method: self.method,
            code,
            theta0: self.build_theta0()?,
            update_rule: self.optimizer,
            adam: self.adam,
            step_size: self.step_size,
            delta: self.delta,
            n_iterations: self.iterations,
            seed: self.seed,
            runtime_dist: self.runtime_dist.build()?,
            stopping_rule,
            decode_cost: self.decode_cost,
            resample_directions: self.resample_directions,
        })
    }

    fn as_raw(&self) -> RawConfig {
        RawConfig {
            objective: Some(self.objective),
            a_csv: self.a_csv.clone(),
            b_csv: self.b_csv.clone(),
            classifier_w1_csv: self.classifier_w1_csv.clone(),
            classifier_c1_csv: self.classifier_c1_csv.clone(),
            classifier_w2_csv: self.classifier_w2_csv.clone(),
            classifier_c2_csv: self.classifier_c2_csv.clone(),
            theta0_csv: self.theta0_csv.clone(),
            ..RawConfig::default()
        }
    }
}
