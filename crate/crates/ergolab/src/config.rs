//! Experiment configuration files.
//!
//! Configs are JSON with strict parsing: unknown keys anywhere are hard
//! errors, and so are unknown system parameters. Every knob has a
//! documented default; the resolved (defaulted) config is echoed into the
//! report directory so a run is reproducible from its artifacts alone.
//!
//! One experiment = one config file = one output directory. The only
//! environment override is `ERGOLAB_OUTPUT_ROOT`, which re-roots relative
//! output directories.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::diagnostics::{DistanceChannel, ReferenceMeasure};
use crate::error::{Error, Result};
use crate::measure::{conditional_on_circle, dirac, uniform_cloud, PointCloudMeasure, Resolution};
use crate::phase::{Phase, Point};
use crate::zoo::{Family, SystemSpec};

/// Experiment kinds: the three pipelines plus the named probes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Orbit,
    Cesaro,
    Ulam,
    Ensemble,
    TypicalSetFraction,
    WeakErgodicityFraction,
    NaturalityCheck,
    InvarianceResidual,
    WanderingCheck,
    TraceMatch,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Orbit => "orbit",
            ExperimentKind::Cesaro => "cesaro",
            ExperimentKind::Ulam => "ulam",
            ExperimentKind::Ensemble => "ensemble",
            ExperimentKind::TypicalSetFraction => "typical_set_fraction",
            ExperimentKind::WeakErgodicityFraction => "weak_ergodicity_fraction",
            ExperimentKind::NaturalityCheck => "naturality_check",
            ExperimentKind::InvarianceResidual => "invariance_residual",
            ExperimentKind::WanderingCheck => "wandering_check",
            ExperimentKind::TraceMatch => "trace_match",
        }
    }
}

/// System block: family name plus a flat parameter map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl SystemConfig {
    pub fn resolve(&self) -> Result<SystemSpec> {
        let family = Family::parse(&self.family)?;
        SystemSpec::from_params(family, &self.params)
    }

    pub fn from_spec(spec: &SystemSpec) -> Self {
        SystemConfig {
            family: spec.family().name().to_string(),
            params: spec
                .param_list()
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        }
    }
}

/// Measure blocks: how targets, probe inputs and seed measures are built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasureConfig {
    /// Dirac at x on the interval.
    DiracX { x: f64 },
    /// Dirac at (phi, radius) on the disc.
    DiracDisc { phi: f64, radius: f64 },
    /// Sampled reference measure (Lebesgue / area), `atoms` atoms.
    Uniform {
        #[serde(skip_serializing_if = "Option::is_none")]
        atoms: Option<usize>,
    },
    /// Uniform measure on the circle {radius = r}, equispaced atoms.
    Circle {
        radius: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        atoms: Option<usize>,
    },
    /// (δ_a + δ_b)/2 on the interval.
    TwoPoint { a: f64, b: f64 },
    /// A measure CSV written by this crate (atom rows with header).
    CloudCsv { path: PathBuf },
}

impl MeasureConfig {
    pub fn resolve(&self, phase: Phase, default_atoms: usize, seed: u64) -> Result<PointCloudMeasure> {
        match self {
            MeasureConfig::DiracX { x } => dirac(Phase::Interval01, Point::X(*x)),
            MeasureConfig::DiracDisc { phi, radius } => dirac(
                Phase::Disc,
                Point::Polar {
                    phi: *phi,
                    radius: *radius,
                },
            ),
            MeasureConfig::Uniform { atoms } => {
                uniform_cloud(phase, atoms.unwrap_or(default_atoms), seed)
            }
            MeasureConfig::Circle { radius, atoms } => {
                conditional_on_circle(*radius, atoms.unwrap_or(default_atoms))
            }
            MeasureConfig::TwoPoint { a, b } => PointCloudMeasure::from_atoms(
                Phase::Interval01,
                vec![(Point::X(*a), 0.5), (Point::X(*b), 0.5)],
            ),
            MeasureConfig::CloudCsv { path } => {
                let text = std::fs::read_to_string(path)?;
                PointCloudMeasure::from_csv(&text)
            }
        }
    }

    /// Reference-measure view, for probes that sample initial points.
    pub fn resolve_reference(&self, phase: Phase, default_atoms: usize, seed: u64) -> Result<ReferenceMeasure> {
        Ok(match self {
            MeasureConfig::Uniform { .. } => match phase {
                Phase::Interval01 => ReferenceMeasure::LebesgueInterval,
                Phase::Disc => ReferenceMeasure::AreaDisc,
            },
            MeasureConfig::Circle { radius, .. } => {
                ReferenceMeasure::CircleConditional { r: *radius }
            }
            other => ReferenceMeasure::Custom(other.resolve(phase, default_atoms, seed)?),
        })
    }
}

/// Numeric knobs. Absent fields take the documented defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Knobs {
    /// Steps / horizon (orbits, Cesaro averages, ensembles). Default 10000.
    pub n: usize,
    /// Sampled initial points for fraction probes. Default 100.
    pub points: usize,
    /// Atom count for sampled measures. Default 10000.
    pub atoms: usize,
    /// Proximity tolerance of the probe. Default 0.05.
    pub tol: f64,
    /// Interval cells (histograms, Ulam). Default 200.
    pub resolution: usize,
    /// Disc angular cells. Default 64.
    pub resolution_phi: usize,
    /// Disc radial cells. Default 64.
    pub resolution_r: usize,
    /// Radial refinement ladder for wandering checks. Default \[32,64,128\].
    pub resolutions_r: Vec<usize>,
    /// Pushforward depth for wandering checks. Default 6.
    pub k_max: usize,
    /// Ulam row samples per cell. Default 100.
    pub samples_per_cell: usize,
    /// Ulam Cesaro iteration cap. Default 2000.
    pub n_max: usize,
    /// Ulam Cesaro stop tolerance (L1 between successive averages).
    /// Default 1e-6.
    pub ulam_tol: f64,
    /// Wandering overlap threshold. Default 0.05.
    pub threshold: f64,
    /// Distance channel override: "w1" or "dict". Default: w1 on the
    /// interval, dict on the disc.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel: Option<String>,
}

impl Default for Knobs {
    fn default() -> Self {
        Knobs {
            n: 10_000,
            points: 100,
            atoms: 10_000,
            tol: 0.05,
            resolution: 200,
            resolution_phi: 64,
            resolution_r: 64,
            resolutions_r: vec![32, 64, 128],
            k_max: 6,
            samples_per_cell: 100,
            n_max: 2000,
            ulam_tol: 1e-6,
            threshold: 0.05,
            channel: None,
        }
    }
}

impl Knobs {
    pub fn grid_resolution(&self, phase: Phase) -> Resolution {
        match phase {
            Phase::Interval01 => Resolution::Interval(self.resolution),
            Phase::Disc => Resolution::Disc {
                n_phi: self.resolution_phi,
                n_r: self.resolution_r,
            },
        }
    }

    pub fn channel(&self) -> Result<Option<DistanceChannel>> {
        self.channel
            .as_deref()
            .map(DistanceChannel::parse)
            .transpose()
    }
}

/// A declared expectation, evaluated in `--check` mode against a named
/// report verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equals: Option<String>,
}

/// Measure blocks of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct MeasuresConfig {
    /// Target / candidate measure of the probe.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<MeasureConfig>,
    /// Where probe initial points are sampled (defaults to the reference
    /// measure of the phase).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<MeasureConfig>,
    /// Seed measures for naturality checks (defaults to the built-in
    /// family: reference + three smooth perturbations + conditional).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<MeasureConfig>>,
    /// Initial measure for orbit-free pipelines (cesaro, ensemble).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial: Option<MeasureConfig>,
    /// Initial point for orbit experiments / trace matches.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<MeasureConfig>,
}

/// A full experiment: kind, system, measures, knobs, seed, output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub system: SystemConfig,
    #[serde(default)]
    pub measures: MeasuresConfig,
    #[serde(default)]
    pub knobs: Knobs,
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub output_dir: PathBuf,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expect: Vec<Expectation>,
}

fn default_seed() -> u64 {
    42
}

impl ExperimentConfig {
    /// Strict parse: unknown keys are errors carrying line/column info.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization cannot fail")
    }

    /// The output directory with the `ERGOLAB_OUTPUT_ROOT` override
    /// applied to relative paths.
    pub fn resolved_output_dir(&self) -> PathBuf {
        if self.output_dir.is_absolute() {
            return self.output_dir.clone();
        }
        match std::env::var_os("ERGOLAB_OUTPUT_ROOT") {
            Some(root) => PathBuf::from(root).join(&self.output_dir),
            None => self.output_dir.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "kind": "typical_set_fraction",
        "system": { "family": "Halving" },
        "measures": { "target": { "kind": "dirac_x", "x": 0.0 } },
        "knobs": { "n": 1000, "tol": 0.01 },
        "seed": 7,
        "output_dir": "out"
    }"#;

    #[test]
    fn minimal_config_parses_with_defaults() {
        let cfg = ExperimentConfig::from_json(MINIMAL).unwrap();
        assert_eq!(cfg.kind, ExperimentKind::TypicalSetFraction);
        assert_eq!(cfg.knobs.n, 1000);
        assert_eq!(cfg.knobs.points, 100, "unset knob takes its default");
        assert_eq!(cfg.seed, 7);
        let spec = cfg.system.resolve().unwrap();
        assert_eq!(spec.family(), Family::Halving);
    }

    #[test]
    fn unknown_keys_are_rejected_by_name() {
        let bad = MINIMAL.replace("\"n\": 1000", "\"n\": 1000, \"alpha_\": 1");
        match ExperimentConfig::from_json(&bad) {
            Err(Error::Config(msg)) => assert!(msg.contains("alpha_"), "message: {msg}"),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_system_param_is_rejected() {
        let bad = MINIMAL.replace(
            "{ \"family\": \"Halving\" }",
            "{ \"family\": \"Halving\", \"params\": { \"zeta\": 0.5 } }",
        );
        let cfg = ExperimentConfig::from_json(&bad).unwrap();
        assert!(cfg.system.resolve().is_err());
    }

    #[test]
    fn config_round_trips_through_echo() {
        let cfg = ExperimentConfig::from_json(MINIMAL).unwrap();
        let echoed = cfg.to_json();
        let back = ExperimentConfig::from_json(&echoed).unwrap();
        assert_eq!(cfg, back);
        assert_eq!(back.to_json(), echoed);
    }

    #[test]
    fn measure_configs_resolve() {
        let m = MeasureConfig::TwoPoint { a: 0.0, b: 1.0 };
        let cloud = m.resolve(Phase::Interval01, 100, 1).unwrap();
        assert_eq!(cloud.atoms().len(), 2);

        let m = MeasureConfig::Circle {
            radius: 0.5,
            atoms: Some(16),
        };
        let cloud = m.resolve(Phase::Disc, 100, 1).unwrap();
        assert_eq!(cloud.atoms().len(), 16);

        let m = MeasureConfig::Uniform { atoms: None };
        let cloud = m.resolve(Phase::Interval01, 321, 9).unwrap();
        assert_eq!(cloud.atoms().len(), 321);
    }
}
