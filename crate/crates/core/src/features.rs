//! Running match indicators and observation encoding.
//!
//! Row `t` of a [`FeatureTable`] describes the match right after point `t`:
//! cumulative counters include point `t`, while the scoring and break rates
//! cover points `1..t-1` only. A model that uses row `t` to predict point
//! `t + 1` therefore never sees the outcome it predicts.

use std::collections::HashMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{MatchPointLog, Player, PointRecord};
use crate::momentum::{MomentumSeries, SwingEvent};

/// Canonical feature column order of [`FeatureRow::values`].
pub const FEATURE_NAMES: [&str; 21] = [
    "elapsed_seconds",
    "p1_points_won",
    "p2_points_won",
    "p1_sets",
    "p2_sets",
    "p1_games",
    "p2_games",
    "p1_ace",
    "p2_ace",
    "p1_net_pt",
    "p2_net_pt",
    "p1_net_pt_won",
    "p2_net_pt_won",
    "p1_break_pt",
    "p2_break_pt",
    "p1_scoring_rate",
    "p2_scoring_rate",
    "p1_break_rate",
    "p2_break_rate",
    "serve_pct_p1",
    "is_server_p1",
];

pub const MOMENTUM_FEATURE: &str = "momentum";

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PlayerTotals {
    pub points_won: u32,
    /// Share of points won over points `1..t-1`.
    pub scoring_rate: f64,
    /// Break points converted over break-point chances held, points `1..t-1`;
    /// 0 when no chance has been held yet.
    pub break_rate: f64,
    pub sets: u32,
    pub games: u32,
    pub aces: u32,
    pub net_pt: u32,
    pub net_pt_won: u32,
    pub break_pt: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRow {
    /// 1-based point index within the match.
    pub point_index: usize,
    pub elapsed_seconds: u64,
    pub p1: PlayerTotals,
    pub p2: PlayerTotals,
    pub is_server_p1: bool,
    /// Fraction of points `1..t` served by player 1.
    pub serve_pct_p1: f64,
}

impl FeatureRow {
    pub fn values(&self) -> Vec<f64> {
        let (a, b) = (&self.p1, &self.p2);
        vec![
            self.elapsed_seconds as f64,
            a.points_won as f64,
            b.points_won as f64,
            a.sets as f64,
            b.sets as f64,
            a.games as f64,
            b.games as f64,
            a.aces as f64,
            b.aces as f64,
            a.net_pt as f64,
            b.net_pt as f64,
            a.net_pt_won as f64,
            b.net_pt_won as f64,
            a.break_pt as f64,
            b.break_pt as f64,
            a.scoring_rate,
            b.scoring_rate,
            a.break_rate,
            b.break_rate,
            self.serve_pct_p1,
            if self.is_server_p1 { 1.0 } else { 0.0 },
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureTable {
    pub match_id: String,
    pub names: Vec<String>,
    pub rows: Vec<FeatureRow>,
    /// Victor of each point, aligned with `rows`; the source of point labels.
    pub victors: Vec<Player>,
    /// `(set_no, game_no, point_no)` of each point for exports.
    pub positions: Vec<(u32, u32, u32)>,
}

impl FeatureTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// CSV with `point_index` followed by the canonical feature columns.
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        let mut header = vec!["point_index".to_string()];
        header.extend(self.names.iter().cloned());
        w.write_record(&header).map_err(std::io::Error::other)?;
        for row in &self.rows {
            let mut rec = vec![row.point_index.to_string()];
            rec.extend(row.values().iter().map(|v| v.to_string()));
            w.write_record(&rec).map_err(std::io::Error::other)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn accumulate_features(log: &MatchPointLog) -> Result<FeatureTable> {
    if log.points.is_empty() {
        return Err(Error::domain(format!("match {} has no points", log.match_id)));
    }
    let mut won = [0u32; 2];
    let mut aces = [0u32; 2];
    let mut net = [0u32; 2];
    let mut net_won = [0u32; 2];
    let mut bp = [0u32; 2];
    let mut bp_won = [0u32; 2];
    let mut served_p1 = 0u32;

    let mut rows = Vec::with_capacity(log.points.len());
    for (i, p) in log.points.iter().enumerate() {
        let played_before = i as f64;
        let rate = |num: u32, den: f64| if den > 0.0 { num as f64 / den } else { 0.0 };
        // rates are taken before this point is counted
        let scoring = [rate(won[0], played_before), rate(won[1], played_before)];
        let breaking = [rate(bp_won[0], bp[0] as f64), rate(bp_won[1], bp[1] as f64)];

        won[p.point_victor.index()] += 1;
        if p.server == Player::One {
            served_p1 += 1;
        }
        for (k, f) in [&p.p1, &p.p2].into_iter().enumerate() {
            aces[k] += f.ace as u32;
            net[k] += f.net_pt as u32;
            net_won[k] += f.net_pt_won as u32;
            bp[k] += f.break_pt as u32;
            bp_won[k] += f.break_pt_won as u32;
        }

        let totals = |k: usize, sets: u32, games: u32| PlayerTotals {
            points_won: won[k],
            scoring_rate: scoring[k],
            break_rate: breaking[k],
            sets,
            games,
            aces: aces[k],
            net_pt: net[k],
            net_pt_won: net_won[k],
            break_pt: bp[k],
        };
        rows.push(FeatureRow {
            point_index: i + 1,
            elapsed_seconds: p.elapsed_seconds,
            p1: totals(0, p.p1_sets, p.p1_games),
            p2: totals(1, p.p2_sets, p.p2_games),
            is_server_p1: p.server == Player::One,
            serve_pct_p1: served_p1 as f64 / (i + 1) as f64,
        });
    }
    Ok(FeatureTable {
        match_id: log.match_id.clone(),
        names: FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
        rows,
        victors: log.points.iter().map(|p| p.point_victor).collect(),
        positions: log.points.iter().map(|p| (p.set_no, p.game_no, p.point_no)).collect(),
    })
}

/// Fields a codec may look at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CodecKey {
    pub victor: Player,
    pub server: Player,
    pub break_point: bool,
}

impl CodecKey {
    pub fn of(p: &PointRecord) -> Self {
        CodecKey { victor: p.point_victor, server: p.server, break_point: p.is_break_point() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObservationCodec {
    /// `2·(victor−1) + (server−1)`, M = 4.
    WinnerServer,
    /// `4·break + 2·(victor−1) + (server−1)`, M = 8.
    WinnerServerBreak,
    Custom { table: HashMap<CodecKey, usize>, m: usize },
}

impl ObservationCodec {
    /// Custom table that keeps only the point victor (M = 2).
    pub fn winner_only() -> Self {
        let mut table = HashMap::new();
        for victor in [Player::One, Player::Two] {
            for server in [Player::One, Player::Two] {
                for break_point in [false, true] {
                    table.insert(CodecKey { victor, server, break_point }, victor.index());
                }
            }
        }
        ObservationCodec::Custom { table, m: 2 }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "winner_server" => Ok(ObservationCodec::WinnerServer),
            "winner_server_break" => Ok(ObservationCodec::WinnerServerBreak),
            "winner" => Ok(ObservationCodec::winner_only()),
            other => Err(Error::Config(format!(
                "unknown codec `{other}` (expected winner_server, winner_server_break or winner)"
            ))),
        }
    }

    pub fn symbol_count(&self) -> usize {
        match self {
            ObservationCodec::WinnerServer => 4,
            ObservationCodec::WinnerServerBreak => 8,
            ObservationCodec::Custom { m, .. } => *m,
        }
    }

    pub fn encode(&self, key: CodecKey) -> Result<usize> {
        let base = key.victor.index() * 2 + key.server.index();
        match self {
            ObservationCodec::WinnerServer => Ok(base),
            ObservationCodec::WinnerServerBreak => Ok(base + if key.break_point { 4 } else { 0 }),
            ObservationCodec::Custom { table, m } => match table.get(&key) {
                Some(&s) if s < *m => Ok(s),
                Some(&s) => Err(Error::Codec(format!("{key:?} maps to {s}, outside [0, {m})"))),
                None => Err(Error::Codec(format!(
                    "victor={}, server={}, break_point={}",
                    key.victor.number(),
                    key.server.number(),
                    key.break_point
                ))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservationSequence {
    symbols: Vec<usize>,
    m: usize,
}

impl ObservationSequence {
    pub fn new(symbols: Vec<usize>, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::domain("observation alphabet needs at least 2 symbols"));
        }
        if symbols.is_empty() {
            return Err(Error::domain("observation sequence is empty"));
        }
        if let Some(bad) = symbols.iter().find(|&&s| s >= m) {
            return Err(Error::domain(format!("symbol {bad} outside alphabet of size {m}")));
        }
        Ok(ObservationSequence { symbols, m })
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub fn symbol_count(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Single-column integer CSV.
    pub fn write_csv<W: Write>(&self, mut sink: W) -> Result<()> {
        writeln!(sink, "symbol")?;
        for s in &self.symbols {
            writeln!(sink, "{s}")?;
        }
        Ok(())
    }
}

pub fn encode_observations(log: &MatchPointLog, codec: &ObservationCodec) -> Result<ObservationSequence> {
    let symbols = log
        .points
        .iter()
        .map(|p| codec.encode(CodecKey::of(p)))
        .collect::<Result<Vec<_>>>()?;
    ObservationSequence::new(symbols, codec.symbol_count())
}

/// What the label vector of a training matrix holds.
#[derive(Debug, Clone, Copy)]
pub enum Target<'a> {
    /// 1 when player 1 wins point `t + 1`; the final row is dropped.
    NextPointVictor,
    /// Momentum at point `t`.
    MomentumValue(&'a MomentumSeries),
    /// 1 when a swing event occurs at point `t`.
    SwingFlag { events: &'a [SwingEvent] },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    pub names: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
    pub labels: Vec<f64>,
}

/// Assembles the model matrix. `momentum`, when given, is appended as the
/// last feature column (named [`MOMENTUM_FEATURE`]).
pub fn build_training_matrix(
    table: &FeatureTable,
    momentum: Option<&MomentumSeries>,
    target: Target<'_>,
) -> Result<TrainingSet> {
    let len = table.len();
    if let Some(m) = momentum {
        if m.values.len() != len {
            return Err(Error::domain(format!(
                "momentum length {} does not match table length {len}",
                m.values.len()
            )));
        }
    }
    let mut names = table.names.clone();
    if momentum.is_some() {
        names.push(MOMENTUM_FEATURE.to_string());
    }

    let (rows, labels): (usize, Vec<f64>) = match target {
        Target::NextPointVictor => {
            let labels = table.victors[1..]
                .iter()
                .map(|v| if *v == Player::One { 1.0 } else { 0.0 })
                .collect();
            (len - 1, labels)
        }
        Target::MomentumValue(series) => {
            if series.values.len() != len {
                return Err(Error::domain("momentum target length does not match table length"));
            }
            (len, series.values.clone())
        }
        Target::SwingFlag { events } => {
            let mut labels = vec![0.0; len];
            for e in events {
                if e.index >= len {
                    return Err(Error::domain(format!("swing event at {} beyond table length {len}", e.index)));
                }
                labels[e.index] = 1.0;
            }
            (len, labels)
        }
    };

    let matrix = table.rows[..rows]
        .iter()
        .enumerate()
        .map(|(t, row)| {
            let mut v = row.values();
            if let Some(m) = momentum {
                v.push(m.values[t]);
            }
            v
        })
        .collect();
    Ok(TrainingSet { names, matrix, labels })
}
