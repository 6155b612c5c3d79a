//! Point-by-point tennis match simulator with constant serve-win probabilities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{MatchPointLog, Player, PlayerFlags, PointRecord};

pub const SECONDS_PER_POINT: u64 = 40;
pub const SECONDS_PER_CHANGEOVER: u64 = 90;
const COUPLED_MIN: f64 = 0.01;
const COUPLED_MAX: f64 = 0.99;
/// Degenerate probabilities (e.g. both servers certain to hold) never finish
/// a tiebreak; simulation gives up past this many points.
pub const MAX_POINTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub p_serve_1: f64,
    pub p_serve_2: f64,
    pub best_of: u8,
    pub tiebreak: bool,
    pub seed: u64,
    /// Relative serve-probability boost for the winner of the previous point.
    pub momentum_coupling: f64,
    /// Sample ace/winner/error/net flags instead of leaving them false.
    pub extended_flags: bool,
    pub first_server: Player,
    pub match_id: String,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            p_serve_1: 0.64,
            p_serve_2: 0.64,
            best_of: 5,
            tiebreak: true,
            seed: 0,
            momentum_coupling: 0.0,
            extended_flags: false,
            first_server: Player::One,
            match_id: "sim-0".into(),
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p_serve_1", self.p_serve_1), ("p_serve_2", self.p_serve_2)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::domain(format!("{name} = {p} is not a probability")));
            }
        }
        if self.best_of != 3 && self.best_of != 5 {
            return Err(Error::domain(format!("best_of must be 3 or 5, got {}", self.best_of)));
        }
        if !(self.momentum_coupling >= 0.0 && self.momentum_coupling.is_finite()) {
            return Err(Error::domain("momentum_coupling must be a finite non-negative number"));
        }
        Ok(())
    }

    fn serve_probability(&self, server: Player, previous: Option<Player>) -> f64 {
        let p = match server {
            Player::One => self.p_serve_1,
            Player::Two => self.p_serve_2,
        };
        let c = self.momentum_coupling;
        match previous {
            Some(prev) if c > 0.0 => {
                let boosted = if prev == server { p * (1.0 + c) } else { 1.0 - (1.0 - p) * (1.0 + c) };
                boosted.clamp(COUPLED_MIN, COUPLED_MAX)
            }
            _ => p,
        }
    }
}

fn regular_token(points: u32, other: u32) -> &'static str {
    match points {
        0 => "0",
        1 => "15",
        2 => "30",
        _ if points > other && other >= 3 => "AD",
        _ => "40",
    }
}

struct FlagSampler {
    rng: ChaCha8Rng,
}

impl FlagSampler {
    fn sample(&mut self, server: Player, victor: Player) -> (PlayerFlags, PlayerFlags) {
        let mut flags = [PlayerFlags::default(), PlayerFlags::default()];
        let (s, r) = (server.index(), server.other().index());
        let v = victor.index();
        if victor == server && self.rng.random::<f64>() < 0.12 {
            flags[s].ace = true;
            return (flags[0], flags[1]);
        }
        if victor != server && self.rng.random::<f64>() < 0.06 {
            flags[s].double_fault = true;
            return (flags[0], flags[1]);
        }
        for who in [s, r] {
            if self.rng.random::<f64>() < 0.15 {
                flags[who].net_pt = true;
                flags[who].net_pt_won = who == v;
            }
        }
        let roll: f64 = self.rng.random();
        if roll < 0.3 {
            flags[v].winner = true;
        } else if roll < 0.55 {
            flags[1 - v].unforced_error = true;
        }
        (flags[0], flags[1])
    }
}

struct MatchState<'a> {
    config: &'a SimConfig,
    rng: ChaCha8Rng,
    flags: Option<FlagSampler>,
    points: Vec<PointRecord>,
    elapsed: u64,
    sets: [u32; 2],
    games: [u32; 2],
    set_no: u32,
    previous: Option<Player>,
}

impl MatchState<'_> {
    fn play_point(&mut self, server: Player, game_no: u32, score: [String; 2], break_pt: Option<Player>) -> Result<Player> {
        if self.points.len() >= MAX_POINTS {
            return Err(Error::domain(format!("match unfinished after {MAX_POINTS} points")));
        }
        let p = self.config.serve_probability(server, self.previous);
        let victor = if self.rng.random::<f64>() < p { server } else { server.other() };
        let (mut p1, mut p2) = match self.flags.as_mut() {
            Some(s) => s.sample(server, victor),
            None => Default::default(),
        };
        if let Some(holder) = break_pt {
            let f = if holder == Player::One { &mut p1 } else { &mut p2 };
            f.break_pt = true;
            f.break_pt_won = victor == holder;
            f.break_pt_missed = victor != holder;
        }
        let [s1, s2] = score;
        self.points.push(PointRecord {
            match_id: self.config.match_id.clone(),
            elapsed_seconds: self.elapsed,
            set_no: self.set_no,
            game_no,
            point_no: self.points.len() as u32 + 1,
            server,
            point_victor: victor,
            p1_sets: self.sets[0],
            p2_sets: self.sets[1],
            p1_games: self.games[0],
            p2_games: self.games[1],
            p1_score: s1,
            p2_score: s2,
            p1,
            p2,
        });
        self.elapsed += SECONDS_PER_POINT;
        self.previous = Some(victor);
        Ok(victor)
    }

    fn play_regular_game(&mut self, server: Player, game_no: u32) -> Result<Player> {
        let mut won = [0u32; 2];
        loop {
            let (s, r) = (server.index(), server.other().index());
            let score = [regular_token(won[0], won[1]).to_string(), regular_token(won[1], won[0]).to_string()];
            let break_pt = (won[r] >= 3 && won[r] > won[s]).then(|| server.other());
            let victor = self.play_point(server, game_no, score, break_pt)?;
            won[victor.index()] += 1;
            let (a, b) = (won[victor.index()], won[victor.other().index()]);
            if a >= 4 && a >= b + 2 {
                return Ok(victor);
            }
        }
    }

    fn play_tiebreak(&mut self, first: Player, game_no: u32) -> Result<Player> {
        let mut won = [0u32; 2];
        let mut k = 0u32;
        loop {
            // one point, then alternating pairs
            let server = if (k + 1) / 2 % 2 == 0 { first } else { first.other() };
            let victor = self.play_point(server, game_no, [won[0].to_string(), won[1].to_string()], None)?;
            won[victor.index()] += 1;
            k += 1;
            let (a, b) = (won[victor.index()], won[victor.other().index()]);
            if a >= 7 && a >= b + 2 {
                return Ok(victor);
            }
        }
    }

    /// Plays one set; returns the set winner and the server of the next game.
    fn play_set(&mut self, mut server: Player) -> Result<(Player, Player)> {
        self.games = [0, 0];
        loop {
            let game_no = self.games[0] + self.games[1] + 1;
            let tiebreak = self.config.tiebreak && self.games == [6, 6];
            let winner =
                if tiebreak { self.play_tiebreak(server, game_no)? } else { self.play_regular_game(server, game_no)? };
            self.games[winner.index()] += 1;
            server = server.other();
            let (a, b) = (self.games[winner.index()], self.games[winner.other().index()]);
            let set_over = tiebreak || (a >= 6 && a >= b + 2);
            if set_over || (self.games[0] + self.games[1]) % 2 == 1 {
                self.elapsed += SECONDS_PER_CHANGEOVER;
            }
            if set_over {
                return Ok((winner, server));
            }
        }
    }
}

pub fn simulate_match(config: &SimConfig) -> Result<MatchPointLog> {
    config.validate()?;
    let mut state = MatchState {
        config,
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        flags: config
            .extended_flags
            .then(|| FlagSampler { rng: ChaCha8Rng::seed_from_u64(config.seed ^ 0x5eed_f1a9) }),
        points: Vec::new(),
        elapsed: 0,
        sets: [0, 0],
        games: [0, 0],
        set_no: 1,
        previous: None,
    };
    let needed = u32::from(config.best_of / 2 + 1);
    let mut server = config.first_server;
    loop {
        let (winner, next) = state.play_set(server)?;
        server = next;
        state.sets[winner.index()] += 1;
        if state.sets[winner.index()] == needed {
            break;
        }
        state.set_no += 1;
    }
    Ok(MatchPointLog {
        match_id: config.match_id.clone(),
        player1_name: "Player 1".into(),
        player2_name: "Player 2".into(),
        points: state.points,
    })
}

/// Plays one game from love; true when the server holds.
pub fn play_game<R: Rng>(p: f64, rng: &mut R) -> bool {
    let (mut s, mut r) = (0u32, 0u32);
    loop {
        if rng.random::<f64>() < p {
            s += 1;
        } else {
            r += 1;
        }
        if s >= 4 && s >= r + 2 {
            return true;
        }
        if r >= 4 && r >= s + 2 {
            return false;
        }
    }
}

/// Closed-form probability that a server winning each point with
/// probability `p` holds a game from love.
pub fn game_win_probability(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("p = {p} must lie in (0, 1)")));
    }
    let q = 1.0 - p;
    Ok(p.powi(4) * (1.0 + 4.0 * q + 10.0 * q * q) + 20.0 * p.powi(3) * q.powi(3) * p * p / (1.0 - 2.0 * p * q))
}
