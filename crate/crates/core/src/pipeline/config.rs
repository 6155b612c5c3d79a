use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::ObservationCodec;
use crate::gbt::{GbtConfig, Growth};
use crate::hmm::TrainConfig;
use crate::momentum::{EmaConfig, MomentumSettings, DEFAULT_BASELINE_SIGMA, DEFAULT_HYSTERESIS};
use crate::sim::SimConfig;

/// Sub-seed streams derived from the single run seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedStream {
    Hmm = 0,
    Baseline = 1,
    Gbt = 2,
    Sampling = 3,
    Sobol = 4,
    Simulation = 5,
    Permutation = 6,
}

/// `seed + 1_000_000·stream + index`, wrapping.
pub fn sub_seed(seed: u64, stream: SeedStream, index: u64) -> u64 {
    seed.wrapping_add(1_000_000 * stream as u64).wrapping_add(index)
}

/// Flat key/value settings. The same shape is read from a TOML config file
/// and built from command-line flags; flags are layered on top.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    pub input: Option<Vec<PathBuf>>,
    pub out: Option<PathBuf>,
    pub schema: Option<PathBuf>,
    pub seed: Option<u64>,
    pub beta: Option<f64>,
    pub states: Option<usize>,
    pub codec: Option<String>,
    pub split: Option<f64>,
    pub rounds: Option<usize>,
    pub growth: Option<String>,
    pub hysteresis: Option<f64>,
    pub restarts: Option<usize>,
    pub max_iterations: Option<usize>,
    pub learning_rate: Option<f64>,
    pub max_depth: Option<usize>,
    pub max_leaves: Option<usize>,
    pub sigma: Option<f64>,
    pub instances: Option<usize>,
    pub background: Option<usize>,
    pub features: Option<Vec<String>>,
    pub dependence: Option<Vec<String>>,
    pub n_base: Option<usize>,
    pub matches: Option<usize>,
    pub p_serve_1: Option<f64>,
    pub p_serve_2: Option<f64>,
    pub best_of: Option<u8>,
    pub coupling: Option<f64>,
    pub extended_flags: Option<bool>,
}

impl Settings {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// Values set in `over` replace those in `self`.
    pub fn layered(self, over: Settings) -> Settings {
        macro_rules! pick {
            ($($f:ident),*) => { Settings { $($f: over.$f.or(self.$f)),* } };
        }
        pick!(
            input, out, schema, seed, beta, states, codec, split, rounds, growth, hysteresis, restarts,
            max_iterations, learning_rate, max_depth, max_leaves, sigma, instances, background, features,
            dependence, n_base, matches, p_serve_1, p_serve_2, best_of, coupling, extended_flags
        )
    }
}

/// Default explained feature set; at most 16 features keeps exact
/// enumeration tractable.
pub const DEFAULT_EXPLAIN_FEATURES: [&str; 10] = [
    "elapsed_seconds",
    "p1_points_won",
    "p2_points_won",
    "p1_sets",
    "p2_sets",
    "p1_ace",
    "p1_net_pt",
    "p1_net_pt_won",
    "p1_break_pt",
    "p2_break_pt",
];

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    pub out: PathBuf,
    pub schema: Option<PathBuf>,
    pub seed: u64,
    pub states: usize,
    pub codec_name: String,
    pub codec: ObservationCodec,
    pub ema: EmaConfig,
    pub train: TrainConfig,
    pub gbt: GbtConfig,
    /// Chronological training fraction.
    pub split: f64,
    pub hysteresis: f64,
    pub baseline_sigma: f64,
    pub explain_instances: usize,
    pub explain_background: usize,
    pub explain_features: Vec<String>,
    pub dependence: Option<(String, String)>,
    pub sobol_n_base: usize,
    pub sim: SimConfig,
    pub sim_matches: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            inputs: Vec::new(),
            out: PathBuf::from("out"),
            schema: None,
            seed: 0,
            states: 2,
            codec_name: "winner_server".into(),
            codec: ObservationCodec::WinnerServer,
            ema: EmaConfig::default(),
            train: TrainConfig::default(),
            gbt: GbtConfig::default(),
            split: 0.8,
            hysteresis: DEFAULT_HYSTERESIS,
            baseline_sigma: DEFAULT_BASELINE_SIGMA,
            explain_instances: 200,
            explain_background: 128,
            explain_features: DEFAULT_EXPLAIN_FEATURES.iter().map(|s| s.to_string()).collect(),
            dependence: None,
            sobol_n_base: 4096,
            sim: SimConfig::default(),
            sim_matches: 50,
        }
    }
}

impl RunConfig {
    pub fn from_settings(s: &Settings) -> Result<Self> {
        let mut c = RunConfig::default();
        if let Some(v) = &s.input {
            c.inputs = v.clone();
        }
        if let Some(v) = &s.out {
            c.out = v.clone();
        }
        c.schema = s.schema.clone();
        if let Some(v) = s.seed {
            c.seed = v;
        }
        if let Some(v) = s.beta {
            c.ema.beta = v;
        }
        if let Some(v) = s.states {
            c.states = v;
        }
        if let Some(v) = &s.codec {
            c.codec = ObservationCodec::from_name(v).map_err(|e| Error::Config(e.to_string()))?;
            c.codec_name = v.clone();
        }
        if let Some(v) = s.split {
            c.split = v;
        }
        if let Some(v) = s.rounds {
            c.gbt.rounds = v;
        }
        if let Some(v) = &s.growth {
            c.gbt.growth = match v.as_str() {
                "level" | "level_wise" => Growth::LevelWise,
                "leaf" | "leaf_wise" => Growth::LeafWise,
                other => return Err(Error::Config(format!("unknown growth `{other}`; use level or leaf"))),
            };
        }
        if let Some(v) = s.hysteresis {
            c.hysteresis = v;
        }
        if let Some(v) = s.restarts {
            c.train.restarts = v;
        }
        if let Some(v) = s.max_iterations {
            c.train.max_iterations = v;
        }
        if let Some(v) = s.learning_rate {
            c.gbt.learning_rate = v;
        }
        if let Some(v) = s.max_depth {
            c.gbt.max_depth = v;
        }
        if let Some(v) = s.max_leaves {
            c.gbt.max_leaves = v;
        }
        if let Some(v) = s.sigma {
            c.baseline_sigma = v;
        }
        if let Some(v) = s.instances {
            c.explain_instances = v;
        }
        if let Some(v) = s.background {
            c.explain_background = v;
        }
        if let Some(v) = &s.features {
            c.explain_features = v.clone();
        }
        if let Some(v) = &s.dependence {
            match v.as_slice() {
                [a, b] => c.dependence = Some((a.clone(), b.clone())),
                _ => return Err(Error::Config("dependence takes exactly two feature names".into())),
            }
        }
        if let Some(v) = s.n_base {
            c.sobol_n_base = v;
        }
        if let Some(v) = s.matches {
            c.sim_matches = v;
        }
        if let Some(v) = s.p_serve_1 {
            c.sim.p_serve_1 = v;
        }
        if let Some(v) = s.p_serve_2 {
            c.sim.p_serve_2 = v;
        }
        if let Some(v) = s.best_of {
            c.sim.best_of = v;
        }
        if let Some(v) = s.coupling {
            c.sim.momentum_coupling = v;
        }
        if let Some(v) = s.extended_flags {
            c.sim.extended_flags = v;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        self.ema.validate().map_err(|e| Error::Config(e.to_string()))?;
        self.train.validate()?;
        self.gbt.validate().map_err(|e| Error::Config(e.to_string()))?;
        self.sim.validate().map_err(|e| Error::Config(e.to_string()))?;
        if self.states < 1 {
            return Err(Error::Config("states must be >= 1".into()));
        }
        if !(self.split > 0.0 && self.split < 1.0) {
            return Err(Error::Config(format!("split {} must lie in (0, 1)", self.split)));
        }
        if !(self.hysteresis >= 0.0) {
            return Err(Error::Config("hysteresis must be non-negative".into()));
        }
        if !(self.baseline_sigma > 0.0) {
            return Err(Error::Config("sigma must be positive".into()));
        }
        if self.explain_background == 0 || self.explain_instances == 0 {
            return Err(Error::Config("instances and background must be positive".into()));
        }
        for (i, a) in self.inputs.iter().enumerate() {
            if self.inputs[..i].contains(a) || *a == self.out {
                return Err(Error::Config(format!("path {} is referenced twice", a.display())));
            }
        }
        Ok(())
    }

    /// Momentum settings for the `index`-th match.
    pub fn momentum_settings(&self, index: usize) -> MomentumSettings {
        let mut train = self.train.clone();
        // restarts use seed + r, so matches are spaced apart
        train.seed = sub_seed(self.seed, SeedStream::Hmm, 1000 * index as u64);
        MomentumSettings {
            states: self.states,
            codec: self.codec.clone(),
            train,
            ema: self.ema.clone(),
            hysteresis: self.hysteresis,
        }
    }

    pub fn gbt_config(&self) -> GbtConfig {
        GbtConfig { seed: sub_seed(self.seed, SeedStream::Gbt, 0), ..self.gbt.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file = Settings::from_toml_str("seed = 3\nbeta = 0.7\ngrowth = \"leaf\"\n").unwrap();
        let flags = Settings { seed: Some(9), ..Default::default() };
        let c = RunConfig::from_settings(&file.layered(flags)).unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.ema.beta, 0.7);
        assert_eq!(c.gbt.growth, Growth::LeafWise);
    }

    #[test]
    fn unknown_keys_and_bad_values_rejected() {
        assert!(matches!(Settings::from_toml_str("colour = 1"), Err(Error::Config(_))));
        let bad = Settings { split: Some(1.5), ..Default::default() };
        assert!(matches!(RunConfig::from_settings(&bad), Err(Error::Config(_))));
        let bad = Settings { growth: Some("diagonal".into()), ..Default::default() };
        assert!(RunConfig::from_settings(&bad).is_err());
    }

    #[test]
    fn duplicate_paths_rejected() {
        let s = Settings { input: Some(vec!["a.csv".into(), "a.csv".into()]), ..Default::default() };
        assert!(RunConfig::from_settings(&s).is_err());
    }

    #[test]
    fn sub_seeds_are_distinct() {
        assert_ne!(sub_seed(1, SeedStream::Hmm, 0), sub_seed(1, SeedStream::Baseline, 0));
        assert_eq!(sub_seed(1, SeedStream::Gbt, 5), 2_000_006);
    }
}
