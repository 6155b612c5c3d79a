//! Signed momentum from smoothed HMM state posteriors.
//!
//! Positive values mean the flow favours player 1, negative values player 2,
//! and 0 is neutral. With a two-state model oriented so that one state stands
//! for each player, the raw signal at point `t` is
//! `2·(γ_t(player 1 state) − γ_t(player 2 state))`, which lies in `[-2, 2]`;
//! an exponential moving average then smooths it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{encode_observations, ObservationCodec, ObservationSequence};
use crate::hmm::{baum_welch, posteriors, HmmModel, PosteriorSet, TrainConfig};
use crate::ingest::{MatchPointLog, Player};

pub const DEFAULT_HYSTERESIS: f64 = 0.05;
pub const DEFAULT_BASELINE_SIGMA: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmaConfig {
    /// Weight on the previous smoothed value; `0` disables smoothing.
    pub beta: f64,
    pub v0: f64,
}

impl Default for EmaConfig {
    fn default() -> Self {
        EmaConfig { beta: 0.9, v0: 0.0 }
    }
}

impl EmaConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.beta) {
            return Err(Error::Config(format!("EMA beta {} outside [0, 1)", self.beta)));
        }
        if !self.v0.is_finite() {
            return Err(Error::Config("EMA v0 must be finite".into()));
        }
        Ok(())
    }
}

/// `v_t = β·v_{t−1} + (1−β)·θ_t`, starting from `v0`.
pub fn ema(raw: &[f64], config: &EmaConfig) -> Vec<f64> {
    let mut v = config.v0;
    raw.iter()
        .map(|&theta| {
            v = config.beta * v + (1.0 - config.beta) * theta;
            v
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentumSource {
    HmmPosterior,
    GaussianBaseline,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentumSeries {
    /// One value per point in `[-2, 2]`; positive favours player 1.
    pub values: Vec<f64>,
    /// EMA weight used, absent for the Gaussian baseline.
    pub beta: Option<f64>,
    pub source: MomentumSource,
}

impl MomentumSeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn negated(&self) -> MomentumSeries {
        MomentumSeries { values: self.values.iter().map(|v| -v).collect(), ..self.clone() }
    }
}

/// Which player each hidden state stands for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateOrientation {
    players: Vec<Player>,
}

impl StateOrientation {
    pub fn new(players: Vec<Player>) -> Result<Self> {
        if players.len() == 2 && players[0] == players[1] {
            return Err(Error::domain("both states mapped to the same player"));
        }
        Ok(StateOrientation { players })
    }

    pub fn players(&self) -> &[Player] {
        &self.players
    }

    pub fn player_of(&self, state: usize) -> Option<Player> {
        self.players.get(state).copied()
    }

    pub fn state_of(&self, player: Player) -> Option<usize> {
        self.players.iter().position(|p| *p == player)
    }

    pub fn swapped(&self) -> StateOrientation {
        StateOrientation { players: self.players.iter().map(|p| p.other()).collect() }
    }
}

pub fn momentum_from_posteriors(
    post: &PosteriorSet,
    orientation: &StateOrientation,
    config: &EmaConfig,
) -> Result<MomentumSeries> {
    config.validate()?;
    let n = post.gamma.first().map_or(0, Vec::len);
    if n != 2 {
        return Err(Error::domain(format!("momentum needs a two-state model, got {n} states")));
    }
    if orientation.players.len() != n {
        return Err(Error::domain(format!(
            "orientation covers {} states, model has {n}",
            orientation.players.len()
        )));
    }
    let (s1, s2) = match (orientation.state_of(Player::One), orientation.state_of(Player::Two)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::domain("orientation must assign one state to each player")),
    };
    let raw: Vec<f64> = post.gamma.iter().map(|g| 2.0 * (g[s1] - g[s2])).collect();
    Ok(MomentumSeries { values: ema(&raw, config), beta: Some(config.beta), source: MomentumSource::HmmPosterior })
}

/// Maps the state whose emissions put more mass on player-1 wins to player 1.
/// Player-1-winning symbols are those observed on points player 1 won.
/// Exact ties map state 0 to player 1.
pub fn orient_states(model: &HmmModel, log: &MatchPointLog, obs: &ObservationSequence) -> Result<StateOrientation> {
    if model.n != 2 {
        return Err(Error::domain(format!("orientation needs a two-state model, got {}", model.n)));
    }
    if obs.len() != log.points.len() {
        return Err(Error::domain("observation sequence length differs from the log"));
    }
    let mut p1_symbol = vec![false; model.m];
    for (p, &s) in log.points.iter().zip(obs.symbols()) {
        if p.point_victor == Player::One {
            p1_symbol[s] = true;
        }
    }
    let mass = |state: usize| -> f64 {
        model.b[state].iter().zip(&p1_symbol).filter(|(_, &w)| w).map(|(b, _)| b).sum()
    };
    let players = if mass(1) > mass(0) { vec![Player::Two, Player::One] } else { vec![Player::One, Player::Two] };
    StateOrientation::new(players)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SwingDirection {
    TowardP1,
    TowardP2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwingEvent {
    /// 0-based point index at which the new side is reached.
    pub index: usize,
    pub direction: SwingDirection,
    pub pre: f64,
    pub post: f64,
}

/// Zero crossings that leave the `±hysteresis` band. The first excursion out of
/// the band fixes the starting side without emitting an event; afterwards an
/// event fires each time a value beyond the band lands on the opposite side.
pub fn detect_swings(series: &MomentumSeries, hysteresis: f64) -> Vec<SwingEvent> {
    let values = &series.values;
    let mut side: Option<bool> = None;
    let mut events = Vec::new();
    for (t, &v) in values.iter().enumerate() {
        if v.abs() <= hysteresis || v == 0.0 {
            continue;
        }
        let positive = v > 0.0;
        match side {
            None => side = Some(positive),
            Some(s) if s != positive => {
                events.push(SwingEvent {
                    index: t,
                    direction: if positive { SwingDirection::TowardP1 } else { SwingDirection::TowardP2 },
                    pre: if t > 0 { values[t - 1] } else { v },
                    post: v,
                });
                side = Some(positive);
            }
            _ => {}
        }
    }
    events
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlayerPerformance {
    pub max_abs_momentum: f64,
    /// Fraction of points with momentum strictly on this player's side.
    pub mean_signed_share: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerformanceRecord {
    pub player1: PlayerPerformance,
    pub player2: PlayerPerformance,
}

impl PerformanceRecord {
    pub fn of(&self, player: Player) -> &PlayerPerformance {
        match player {
            Player::One => &self.player1,
            Player::Two => &self.player2,
        }
    }
}

pub fn performance_metric(series: &MomentumSeries) -> PerformanceRecord {
    let v = &series.values;
    let n = v.len().max(1) as f64;
    let side = |sign: f64| PlayerPerformance {
        max_abs_momentum: v.iter().map(|x| x * sign).filter(|x| *x > 0.0).fold(0.0, f64::max),
        mean_signed_share: v.iter().filter(|x| **x * sign > 0.0).count() as f64 / n,
    };
    PerformanceRecord { player1: side(1.0), player2: side(-1.0) }
}

/// Independent `N(0, σ²)` draws clamped to `[-2, 2]`.
pub fn gaussian_baseline(length: usize, seed: u64, sigma: f64) -> Result<MomentumSeries> {
    if length == 0 {
        return Err(Error::domain("baseline length must be positive"));
    }
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::domain(format!("baseline sigma must be positive, got {sigma}")));
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::domain(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..length).map(|_| normal.sample(&mut rng).clamp(-2.0, 2.0)).collect();
    Ok(MomentumSeries { values, beta: None, source: MomentumSource::GaussianBaseline })
}

/// Settings for [`analyze_match`].
#[derive(Debug, Clone)]
pub struct MomentumSettings {
    /// Hidden states; the momentum mapping itself only supports two.
    pub states: usize,
    pub codec: ObservationCodec,
    pub train: TrainConfig,
    pub ema: EmaConfig,
    pub hysteresis: f64,
}

impl Default for MomentumSettings {
    fn default() -> Self {
        MomentumSettings {
            states: 2,
            codec: ObservationCodec::WinnerServer,
            train: TrainConfig::default(),
            ema: EmaConfig::default(),
            hysteresis: DEFAULT_HYSTERESIS,
        }
    }
}

/// Everything derived from one match's momentum analysis.
#[derive(Debug, Clone)]
pub struct MatchMomentum {
    pub model: HmmModel,
    pub likelihood_trace: Vec<f64>,
    pub orientation: StateOrientation,
    pub posteriors: PosteriorSet,
    pub series: MomentumSeries,
    pub swings: Vec<SwingEvent>,
    pub performance: PerformanceRecord,
}

/// Fits a hidden Markov model to one match, orients it and derives momentum.
pub fn analyze_match(log: &MatchPointLog, settings: &MomentumSettings) -> Result<MatchMomentum> {
    let obs = encode_observations(log, &settings.codec)?;
    let fit = baum_welch(std::slice::from_ref(&obs), settings.states, obs.symbol_count(), &settings.train)?;
    let orientation = orient_states(&fit.model, log, &obs)?;
    let post = posteriors(&fit.model, &obs)?;
    let series = momentum_from_posteriors(&post, &orientation, &settings.ema)?;
    let swings = detect_swings(&series, settings.hysteresis);
    let performance = performance_metric(&series);
    Ok(MatchMomentum {
        model: fit.model,
        likelihood_trace: fit.trace,
        orientation,
        posteriors: post,
        series,
        swings,
        performance,
    })
}
