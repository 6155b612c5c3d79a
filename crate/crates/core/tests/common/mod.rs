// Independent reference implementations used by the integration tests and
// the acceptance suite. Nothing here calls the code it checks.
#![allow(dead_code)]

use rand::Rng;
use tennis_momentum::hmm::HmmModel;

pub fn random_stochastic_row<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..len).map(|_| rng.random_range(0.05..1.0)).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}

pub fn random_model<R: Rng>(rng: &mut R, n: usize, m: usize) -> HmmModel {
    let pi = random_stochastic_row(rng, n);
    let a = (0..n).map(|_| random_stochastic_row(rng, n)).collect();
    let b = (0..n).map(|_| random_stochastic_row(rng, m)).collect();
    HmmModel::new(pi, a, b).expect("random model is valid")
}

pub struct Enumerated {
    pub likelihood: f64,
    pub gamma: Vec<Vec<f64>>,
    pub xi: Vec<Vec<Vec<f64>>>,
    pub best_path: Vec<usize>,
    pub best_prob: f64,
    /// Probability of the runner-up path, to detect near-ties.
    pub second_prob: f64,
}

/// Brute force over all `N^T` hidden paths.
pub fn enumerate_paths(model: &HmmModel, obs: &[usize]) -> Enumerated {
    let (n, t_len) = (model.n, obs.len());
    let total = n.pow(t_len as u32);
    let mut e = Enumerated {
        likelihood: 0.0,
        gamma: vec![vec![0.0; n]; t_len],
        xi: vec![vec![vec![0.0; n]; n]; t_len.saturating_sub(1)],
        best_path: vec![],
        best_prob: -1.0,
        second_prob: -1.0,
    };
    let mut path = vec![0usize; t_len];
    for code in 0..total {
        let mut c = code;
        for slot in path.iter_mut() {
            *slot = c % n;
            c /= n;
        }
        let mut p = model.pi[path[0]] * model.b[path[0]][obs[0]];
        for t in 1..t_len {
            p *= model.a[path[t - 1]][path[t]] * model.b[path[t]][obs[t]];
        }
        e.likelihood += p;
        for t in 0..t_len {
            e.gamma[t][path[t]] += p;
            if t + 1 < t_len {
                e.xi[t][path[t]][path[t + 1]] += p;
            }
        }
        if p > e.best_prob {
            e.second_prob = e.best_prob;
            e.best_prob = p;
            e.best_path = path.clone();
        } else if p > e.second_prob {
            e.second_prob = p;
        }
    }
    for row in e.gamma.iter_mut() {
        row.iter_mut().for_each(|v| *v /= e.likelihood);
    }
    for slice in e.xi.iter_mut() {
        slice.iter_mut().flatten().for_each(|v| *v /= e.likelihood);
    }
    e
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Shapley values from the textbook subset formula, with a fresh
/// interventional value evaluation for every subset.
pub fn shapley_oracle(f: &dyn Fn(&[f64]) -> f64, background: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    let p = x.len();
    let value = |subset: &[bool]| -> f64 {
        background
            .iter()
            .map(|b| {
                let row: Vec<f64> = (0..p).map(|j| if subset[j] { x[j] } else { b[j] }).collect();
                f(&row)
            })
            .sum::<f64>()
            / background.len() as f64
    };
    (0..p)
        .map(|j| {
            let others: Vec<usize> = (0..p).filter(|&k| k != j).collect();
            let mut phi = 0.0;
            for bits in 0..(1u32 << others.len()) {
                let mut subset = vec![false; p];
                let mut size = 0;
                for (pos, &k) in others.iter().enumerate() {
                    if bits >> pos & 1 == 1 {
                        subset[k] = true;
                        size += 1;
                    }
                }
                let without = value(&subset);
                subset[j] = true;
                let with = value(&subset);
                phi += factorial(size) * factorial(p - size - 1) / factorial(p) * (with - without);
            }
            phi
        })
        .collect()
}

/// AUC by counting every positive/negative pair; ties count one half.
pub fn pairwise_auc(labels: &[bool], scores: &[f64]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for (i, &li) in labels.iter().enumerate() {
        if !li {
            continue;
        }
        for (j, &lj) in labels.iter().enumerate() {
            if lj {
                continue;
            }
            pairs += 1.0;
            if scores[i] > scores[j] {
                wins += 1.0;
            } else if scores[i] == scores[j] {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}

/// Best exact split of one node over every distinct-value midpoint:
/// `(feature, threshold, gain)`, ties to the lowest feature then threshold.
pub fn exact_best_split(x: &[Vec<f64>], g: &[f64], h: &[f64], lambda: f64, gamma: f64) -> Option<(usize, f64, f64)> {
    let gt: f64 = g.iter().sum();
    let ht: f64 = h.iter().sum();
    let score = |g: f64, h: f64| g * g / (h + lambda);
    let mut best: Option<(usize, f64, f64)> = None;
    for f in 0..x[0].len() {
        let mut values: Vec<f64> = x.iter().map(|r| r[f]).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        for w in values.windows(2) {
            let t = (w[0] + w[1]) / 2.0;
            let (mut gl, mut hl) = (0.0, 0.0);
            for (i, r) in x.iter().enumerate() {
                if r[f] < t {
                    gl += g[i];
                    hl += h[i];
                }
            }
            let gain = 0.5 * (score(gl, hl) + score(gt - gl, ht - hl) - score(gt, ht)) - gamma;
            if gain > 0.0 && best.is_none_or(|(_, _, b)| gain > b + 1e-12) {
                best = Some((f, t, gain));
            }
        }
    }
    best
}

/// Analytic Ishigami indices for `a = 7`, `b = 0.1` on `[-π, π]^3`.
pub fn ishigami_indices() -> ([f64; 3], [f64; 3]) {
    let (a, b) = (7.0f64, 0.1f64);
    let pi4 = std::f64::consts::PI.powi(4);
    let pi8 = pi4 * pi4;
    let v1 = 0.5 * (1.0 + b * pi4 / 5.0).powi(2);
    let v2 = a * a / 8.0;
    let v13 = b * b * pi8 * (1.0 / 18.0 - 1.0 / 50.0);
    let v = v1 + v2 + v13;
    ([v1 / v, v2 / v, 0.0], [(v1 + v13) / v, v2 / v, v13 / v])
}

/// Probability of holding serve by solving the game's Markov chain on the
/// score grid (deuce handled as a two-state absorbing chain).
pub fn game_hold_by_recursion(p: f64) -> f64 {
    let q = 1.0 - p;
    // from deuce: win two in a row before losing two in a row
    let deuce = p * p / (p * p + q * q);
    let mut memo = [[0.0f64; 4]; 4];
    for s in (0..4).rev() {
        for r in (0..4).rev() {
            let win = if s == 3 { 1.0 } else { memo[s + 1][r] };
            let lose = if r == 3 { 0.0 } else { memo[s][r + 1] };
            memo[s][r] = if s == 3 && r == 3 { deuce } else { p * win + q * lose };
        }
    }
    memo[0][0]
}

/// One PASS/FAIL line per acceptance criterion.
pub fn report(id: &str, name: &str, pass: bool, detail: &str) {
    println!("criterion {id:<4} {} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
}
