//! Discrete hidden Markov models.
//!
//! Forward and backward passes use per-step normalisation (scaled
//! variables) rather than log-space arithmetic: with `c_t` the forward scale
//! at step `t`, `log P(O | λ) = Σ_t ln c_t` and `Σ_i α̂_t(i) β̂_t(i) = 1`.
//! Viterbi decoding works in log space.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::ObservationSequence;

const SIMPLEX_TOL: f64 = 1e-9;

/// λ = (π, A, B) over `n` hidden states and `m` observation symbols.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HmmModel {
    pub n: usize,
    pub m: usize,
    pub pi: Vec<f64>,
    /// Row-major transition matrix, `a[i][j] = P(state j at t+1 | state i at t)`.
    pub a: Vec<Vec<f64>>,
    /// Row-major emission matrix, `b[j][k] = P(symbol k | state j)`.
    pub b: Vec<Vec<f64>>,
}

fn check_simplex(row: &[f64], what: &str) -> Result<()> {
    if row.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::domain(format!("{what} has a negative or non-finite entry")));
    }
    let sum: f64 = row.iter().sum();
    if (sum - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::domain(format!("{what} sums to {sum}, not 1")));
    }
    Ok(())
}

impl HmmModel {
    pub fn new(pi: Vec<f64>, a: Vec<Vec<f64>>, b: Vec<Vec<f64>>) -> Result<Self> {
        let model = HmmModel { n: pi.len(), m: b.first().map_or(0, Vec::len), pi, a, b };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.m < 1 {
            return Err(Error::domain("model needs at least one state and one symbol"));
        }
        if self.pi.len() != self.n || self.a.len() != self.n || self.b.len() != self.n {
            return Err(Error::domain("pi, A and B must all have n rows"));
        }
        check_simplex(&self.pi, "pi")?;
        for (i, row) in self.a.iter().enumerate() {
            if row.len() != self.n {
                return Err(Error::domain(format!("A row {i} has {} entries, expected {}", row.len(), self.n)));
            }
            check_simplex(row, &format!("A row {i}"))?;
        }
        for (j, row) in self.b.iter().enumerate() {
            if row.len() != self.m {
                return Err(Error::domain(format!("B row {j} has {} entries, expected {}", row.len(), self.m)));
            }
            check_simplex(row, &format!("B row {j}"))?;
        }
        Ok(())
    }

    pub fn uniform(n: usize, m: usize) -> Self {
        HmmModel {
            n,
            m,
            pi: vec![1.0 / n as f64; n],
            a: vec![vec![1.0 / n as f64; n]; n],
            b: vec![vec![1.0 / m as f64; m]; n],
        }
    }

    /// Relabels states: new state `k` is old state `perm[k]`.
    pub fn permute_states(&self, perm: &[usize]) -> HmmModel {
        HmmModel {
            n: self.n,
            m: self.m,
            pi: perm.iter().map(|&i| self.pi[i]).collect(),
            a: perm.iter().map(|&i| perm.iter().map(|&j| self.a[i][j]).collect()).collect(),
            b: perm.iter().map(|&i| self.b[i].clone()).collect(),
        }
    }

    /// Draws a state path and observation sequence of length `len`.
    pub fn sample<R: Rng>(&self, len: usize, rng: &mut R) -> (Vec<usize>, Vec<usize>) {
        fn draw<R: Rng>(p: &[f64], rng: &mut R) -> usize {
            let u: f64 = rng.random();
            let mut acc = 0.0;
            for (k, &pk) in p.iter().enumerate() {
                acc += pk;
                if u < acc {
                    return k;
                }
            }
            p.len() - 1
        }
        let mut states = Vec::with_capacity(len);
        let mut obs = Vec::with_capacity(len);
        let mut s = draw(&self.pi, rng);
        for t in 0..len {
            if t > 0 {
                s = draw(&self.a[s], rng);
            }
            states.push(s);
            obs.push(draw(&self.b[s], rng));
        }
        (states, obs)
    }

    /// Joint log-probability of a state path and observations.
    pub fn path_log_probability(&self, states: &[usize], obs: &[usize]) -> f64 {
        let mut lp = self.pi[states[0]].ln() + self.b[states[0]][obs[0]].ln();
        for t in 1..states.len() {
            lp += self.a[states[t - 1]][states[t]].ln() + self.b[states[t]][obs[t]].ln();
        }
        lp
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: HmmModel = serde_json::from_str(text)?;
        model.validate()?;
        Ok(model)
    }

    fn check_obs(&self, obs: &ObservationSequence) -> Result<()> {
        self.validate()?;
        if let Some(bad) = obs.symbols().iter().find(|&&s| s >= self.m) {
            return Err(Error::domain(format!("symbol {bad} outside model alphabet of size {}", self.m)));
        }
        Ok(())
    }
}

/// Scaled forward variables: `alpha[t][i] = P(i_t = q_i | o_1..o_t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardPass {
    pub alpha: Vec<Vec<f64>>,
    pub scales: Vec<f64>,
    pub log_likelihood: f64,
}

pub fn forward(model: &HmmModel, obs: &ObservationSequence) -> Result<ForwardPass> {
    model.check_obs(obs)?;
    let o = obs.symbols();
    let n = model.n;
    let mut alpha = Vec::with_capacity(o.len());
    let mut scales = Vec::with_capacity(o.len());
    let mut prev: Vec<f64> = (0..n).map(|i| model.pi[i] * model.b[i][o[0]]).collect();
    for t in 0..o.len() {
        if t > 0 {
            let last: &Vec<f64> = alpha.last().unwrap();
            prev = (0..n)
                .map(|j| {
                    let s: f64 = (0..n).map(|i| last[i] * model.a[i][j]).sum();
                    s * model.b[j][o[t]]
                })
                .collect();
        }
        let c: f64 = prev.iter().sum();
        if !(c > 0.0) {
            return Err(Error::DegenerateLikelihood { step: t });
        }
        prev.iter_mut().for_each(|v| *v /= c);
        scales.push(c);
        alpha.push(prev.clone());
    }
    let log_likelihood = scales.iter().map(|c| c.ln()).sum();
    Ok(ForwardPass { alpha, scales, log_likelihood })
}

fn backward_scaled(model: &HmmModel, o: &[usize], scales: &[f64]) -> Vec<Vec<f64>> {
    let n = model.n;
    let len = o.len();
    let mut beta = vec![vec![1.0; n]; len];
    for t in (0..len.saturating_sub(1)).rev() {
        let next = &beta[t + 1];
        let row: Vec<f64> = (0..n)
            .map(|i| {
                (0..n).map(|j| model.a[i][j] * model.b[j][o[t + 1]] * next[j]).sum::<f64>() / scales[t + 1]
            })
            .collect();
        beta[t] = row;
    }
    beta
}

/// Scaled backward variables, normalised with the forward scales so that
/// `Σ_i alpha[t][i]·beta[t][i] = 1` for every `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct BackwardPass {
    pub beta: Vec<Vec<f64>>,
    pub forward: ForwardPass,
}

pub fn backward(model: &HmmModel, obs: &ObservationSequence) -> Result<BackwardPass> {
    let fwd = forward(model, obs)?;
    let beta = backward_scaled(model, obs.symbols(), &fwd.scales);
    Ok(BackwardPass { beta, forward: fwd })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorSet {
    /// `gamma[t][i] = P(i_t = q_i | O, λ)`.
    pub gamma: Vec<Vec<f64>>,
    /// `xi[t][i][j] = P(i_t = q_i, i_{t+1} = q_j | O, λ)`, length `T − 1`.
    pub xi: Vec<Vec<Vec<f64>>>,
    pub log_likelihood: f64,
}

pub fn posteriors(model: &HmmModel, obs: &ObservationSequence) -> Result<PosteriorSet> {
    let BackwardPass { beta, forward: fwd } = backward(model, obs)?;
    Ok(posteriors_from(model, obs.symbols(), &fwd, &beta))
}

fn posteriors_from(model: &HmmModel, o: &[usize], fwd: &ForwardPass, beta: &[Vec<f64>]) -> PosteriorSet {
    let n = model.n;
    let gamma = fwd
        .alpha
        .iter()
        .zip(beta)
        .map(|(a, b)| {
            let mut g: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
            let s: f64 = g.iter().sum();
            g.iter_mut().for_each(|v| *v /= s);
            g
        })
        .collect();
    let xi = (0..o.len().saturating_sub(1))
        .map(|t| {
            let mut slice: Vec<Vec<f64>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            fwd.alpha[t][i] * model.a[i][j] * model.b[j][o[t + 1]] * beta[t + 1][j]
                                / fwd.scales[t + 1]
                        })
                        .collect()
                })
                .collect();
            let s: f64 = slice.iter().flatten().sum();
            slice.iter_mut().flatten().for_each(|v| *v /= s);
            slice
        })
        .collect();
    PosteriorSet { gamma, xi, log_likelihood: fwd.log_likelihood }
}

/// Most probable state path and its joint log-probability. Ties go to the
/// lower state index.
pub fn viterbi(model: &HmmModel, obs: &ObservationSequence) -> Result<(Vec<usize>, f64)> {
    model.check_obs(obs)?;
    let o = obs.symbols();
    let n = model.n;
    let ln = |p: f64| p.ln();
    let mut delta: Vec<f64> = (0..n).map(|i| ln(model.pi[i]) + ln(model.b[i][o[0]])).collect();
    if delta.iter().all(|d| *d == f64::NEG_INFINITY) {
        return Err(Error::DegenerateLikelihood { step: 0 });
    }
    let mut back: Vec<Vec<usize>> = Vec::with_capacity(o.len());
    for (t, &sym) in o.iter().enumerate().skip(1) {
        let mut next = vec![f64::NEG_INFINITY; n];
        let mut ptr = vec![0usize; n];
        for j in 0..n {
            let mut best = f64::NEG_INFINITY;
            let mut arg = 0;
            for (i, d) in delta.iter().enumerate() {
                let v = d + ln(model.a[i][j]);
                if v > best {
                    best = v;
                    arg = i;
                }
            }
            next[j] = best + ln(model.b[j][sym]);
            ptr[j] = arg;
        }
        if next.iter().all(|d| *d == f64::NEG_INFINITY) {
            return Err(Error::DegenerateLikelihood { step: t });
        }
        back.push(ptr);
        delta = next;
    }
    let mut last = 0;
    for i in 1..n {
        if delta[i] > delta[last] {
            last = i;
        }
    }
    let log_p = delta[last];
    let mut path = vec![last; o.len()];
    for t in (1..o.len()).rev() {
        path[t - 1] = back[t - 1][path[t]];
    }
    Ok((path, log_p))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub max_iterations: usize,
    /// Stop once the log-likelihood improves by less than this.
    pub tolerance: f64,
    pub seed: u64,
    pub restarts: usize,
    /// Minimum probability kept in every parameter entry.
    pub floor: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig { max_iterations: 500, tolerance: 1e-6, seed: 0, restarts: 5, floor: 1e-6 }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::Config("tolerance must be > 0".into()));
        }
        if !(0.0..=1e-3).contains(&self.floor) {
            return Err(Error::Config("floor must lie in [0, 1e-3]".into()));
        }
        if self.restarts == 0 {
            return Err(Error::Config("restarts must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedHmm {
    pub model: HmmModel,
    /// Total log-likelihood of the returned restart, one entry per parameter
    /// set visited; the last entry belongs to `model`.
    pub trace: Vec<f64>,
    /// Index of the winning restart (its seed is `config.seed + index`).
    pub restart: usize,
}

/// Maximises `Σ_k c_k ln θ_k` over the simplex subject to `θ_k ≥ floor`.
/// The solution is `θ_k = max(floor, c_k / μ)`: entries pinned at the floor
/// are fixed and the remaining mass is shared in proportion to the counts.
fn floored_normalize(counts: &[f64], floor: f64) -> Vec<f64> {
    let k = counts.len();
    let total: f64 = counts.iter().sum();
    if !(total > 0.0) {
        return vec![1.0 / k as f64; k];
    }
    let mut pinned = vec![false; k];
    loop {
        let free_mass = 1.0 - floor * pinned.iter().filter(|p| **p).count() as f64;
        let free_counts: f64 = counts.iter().zip(&pinned).filter(|(_, p)| !**p).map(|(c, _)| c).sum();
        let theta: Vec<f64> = counts
            .iter()
            .zip(&pinned)
            .map(|(c, p)| if *p { floor } else { c * free_mass / free_counts })
            .collect();
        let mut changed = false;
        for i in 0..k {
            if !pinned[i] && theta[i] < floor {
                pinned[i] = true;
                changed = true;
            }
        }
        if !changed {
            return theta;
        }
    }
}

fn perturbed_row<R: Rng>(k: usize, rng: &mut R) -> Vec<f64> {
    let mut row: Vec<f64> = (0..k).map(|_| 1.0 / k as f64 + 0.05 * rng.random_range(-1.0..1.0)).collect();
    let s: f64 = row.iter().sum();
    row.iter_mut().for_each(|v| *v /= s);
    row
}

fn initial_model(n: usize, m: usize, seed: u64, floor: f64) -> HmmModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pi = floored_normalize(&perturbed_row(n, &mut rng), floor);
    let a = (0..n).map(|_| floored_normalize(&perturbed_row(n, &mut rng), floor)).collect();
    let b = (0..n).map(|_| floored_normalize(&perturbed_row(m, &mut rng), floor)).collect();
    HmmModel { n, m, pi, a, b }
}

struct Expectations {
    pi: Vec<f64>,
    trans: Vec<Vec<f64>>,
    emit: Vec<Vec<f64>>,
    log_likelihood: f64,
}

fn expectations(model: &HmmModel, sequences: &[ObservationSequence]) -> Result<Expectations> {
    let (n, m) = (model.n, model.m);
    let mut e = Expectations {
        pi: vec![0.0; n],
        trans: vec![vec![0.0; n]; n],
        emit: vec![vec![0.0; m]; n],
        log_likelihood: 0.0,
    };
    for seq in sequences {
        let fwd = forward(model, seq)?;
        let beta = backward_scaled(model, seq.symbols(), &fwd.scales);
        let post = posteriors_from(model, seq.symbols(), &fwd, &beta);
        e.log_likelihood += post.log_likelihood;
        for i in 0..n {
            e.pi[i] += post.gamma[0][i];
        }
        for slice in &post.xi {
            for i in 0..n {
                for j in 0..n {
                    e.trans[i][j] += slice[i][j];
                }
            }
        }
        for (g, &sym) in post.gamma.iter().zip(seq.symbols()) {
            for i in 0..n {
                e.emit[i][sym] += g[i];
            }
        }
    }
    Ok(e)
}

fn maximize(e: &Expectations, floor: f64) -> HmmModel {
    HmmModel {
        n: e.pi.len(),
        m: e.emit[0].len(),
        pi: floored_normalize(&e.pi, floor),
        a: e.trans.iter().map(|r| floored_normalize(r, floor)).collect(),
        b: e.emit.iter().map(|r| floored_normalize(r, floor)).collect(),
    }
}

/// Baum-Welch EM over one or more sequences; returns the best of
/// `config.restarts` seeded initialisations.
pub fn baum_welch(
    sequences: &[ObservationSequence],
    n: usize,
    m: usize,
    config: &TrainConfig,
) -> Result<TrainedHmm> {
    config.validate()?;
    if sequences.is_empty() {
        return Err(Error::domain("no observation sequences to train on"));
    }
    if n < 1 || m < 2 {
        return Err(Error::domain("need n >= 1 states and m >= 2 symbols"));
    }
    if let Some(seq) = sequences.iter().find(|s| s.symbol_count() != m) {
        return Err(Error::domain(format!(
            "sequence alphabet size {} differs from requested m = {m}",
            seq.symbol_count()
        )));
    }

    let mut best: Option<TrainedHmm> = None;
    for restart in 0..config.restarts {
        let mut model = initial_model(n, m, config.seed.wrapping_add(restart as u64), config.floor);
        let mut stats = expectations(&model, sequences)?;
        let mut trace = vec![stats.log_likelihood];
        for _ in 0..config.max_iterations {
            let next = maximize(&stats, config.floor);
            let next_stats = expectations(&next, sequences)?;
            let gain = next_stats.log_likelihood - stats.log_likelihood;
            trace.push(next_stats.log_likelihood);
            model = next;
            stats = next_stats;
            if gain < config.tolerance {
                break;
            }
        }
        let candidate = TrainedHmm { model, trace, restart };
        let better = match &best {
            None => true,
            Some(b) => candidate.trace.last() > b.trace.last(),
        };
        if better {
            best = Some(candidate);
        }
    }
    Ok(best.expect("restarts >= 1"))
}
