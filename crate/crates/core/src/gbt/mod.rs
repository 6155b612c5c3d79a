//! Second-order gradient-boosted regression trees over histogram bins.

pub mod binning;
pub mod tree;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::MetricReport;
pub use binning::BinMapper;
pub use tree::{Node, Tree};
use tree::{grow_tree, GrowParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Growth {
    LevelWise,
    LeafWise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    SquaredError,
    Logistic,
}

const HESSIAN_FLOOR: f64 = 1e-16;

impl Objective {
    fn transform(self, margin: f64) -> f64 {
        match self {
            Objective::SquaredError => margin,
            Objective::Logistic => sigmoid(margin),
        }
    }

    fn grad_hess(self, margin: f64, y: f64) -> (f64, f64) {
        match self {
            Objective::SquaredError => (margin - y, 1.0),
            Objective::Logistic => {
                let p = sigmoid(margin);
                (p - y, (p * (1.0 - p)).max(HESSIAN_FLOOR))
            }
        }
    }

    fn loss(self, margin: f64, y: f64) -> f64 {
        match self {
            Objective::SquaredError => 0.5 * (margin - y).powi(2),
            // log(1 + e^m) − y·m, written to avoid overflow
            Objective::Logistic => margin.max(0.0) + (-margin.abs()).exp().ln_1p() - y * margin,
        }
    }

    fn default_base(self, labels: &[f64]) -> f64 {
        let mean = labels.iter().sum::<f64>() / labels.len() as f64;
        match self {
            Objective::SquaredError => mean,
            Objective::Logistic => {
                let p = mean.clamp(1e-6, 1.0 - 1e-6);
                (p / (1.0 - p)).ln()
            }
        }
    }
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GbtConfig {
    pub rounds: usize,
    pub learning_rate: f64,
    pub max_depth: usize,
    pub max_leaves: usize,
    pub lambda: f64,
    pub gamma: f64,
    pub growth: Growth,
    pub bins: usize,
    pub objective: Objective,
    /// Initial margin; `None` uses the label mean (log-odds for logistic).
    pub base_score: Option<f64>,
    pub subsample: f64,
    pub seed: u64,
}

impl Default for GbtConfig {
    fn default() -> Self {
        GbtConfig {
            rounds: 200,
            learning_rate: 0.1,
            max_depth: 6,
            max_leaves: 31,
            lambda: 1.0,
            gamma: 0.0,
            growth: Growth::LevelWise,
            bins: 64,
            objective: Objective::SquaredError,
            base_score: None,
            subsample: 1.0,
            seed: 0,
        }
    }
}

impl GbtConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::domain("learning_rate must be positive"));
        }
        if self.max_depth == 0 || self.max_leaves < 2 {
            return Err(Error::domain("max_depth must be ≥ 1 and max_leaves ≥ 2"));
        }
        if !(self.lambda >= 0.0 && self.gamma >= 0.0) {
            return Err(Error::domain("lambda and gamma must be non-negative"));
        }
        if !(2..=65536).contains(&self.bins) {
            return Err(Error::domain("bins must lie in 2..=65536"));
        }
        if !(self.subsample > 0.0 && self.subsample <= 1.0) {
            return Err(Error::domain("subsample must lie in (0, 1]"));
        }
        if self.base_score.is_some_and(|b| !b.is_finite()) {
            return Err(Error::domain("base_score must be finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GbtModel {
    pub base_score: f64,
    pub learning_rate: f64,
    pub objective: Objective,
    pub feature_names: Vec<String>,
    pub trees: Vec<Tree>,
}

impl GbtModel {
    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn with_feature_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.feature_names.len() {
            return Err(Error::domain(format!(
                "expected {} feature names, got {}",
                self.feature_names.len(),
                names.len()
            )));
        }
        self.feature_names = names;
        Ok(self)
    }

    pub fn margin_row(&self, row: &[f64]) -> f64 {
        self.base_score + self.learning_rate * self.trees.iter().map(|t| t.predict_row(row)).sum::<f64>()
    }

    /// Prediction in response space (probability for logistic).
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        self.objective.transform(self.margin_row(row))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: GbtModel = serde_json::from_str(text)?;
        for tree in &model.trees {
            for node in &tree.nodes {
                let children = [node.left, node.right];
                if children.iter().flatten().any(|&c| c >= tree.nodes.len())
                    || node.feature.is_some_and(|f| f >= model.n_features())
                {
                    return Err(Error::Codec("tree node references out of range".into()));
                }
            }
        }
        Ok(model)
    }
}

fn check_matrix(matrix: &[Vec<f64>], width: Option<usize>) -> Result<usize> {
    let cols = width.unwrap_or_else(|| matrix.first().map_or(0, Vec::len));
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::domain(format!("row {i} has {} columns, expected {cols}", row.len())));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain(format!("row {i} contains a non-finite value")));
        }
    }
    Ok(cols)
}

/// Fits `config.rounds` trees. Returns the model and the training loss after
/// each round.
pub fn train_gbt(matrix: &[Vec<f64>], labels: &[f64], config: &GbtConfig) -> Result<(GbtModel, Vec<f64>)> {
    config.validate()?;
    if matrix.is_empty() {
        return Err(Error::domain("training matrix has no rows"));
    }
    if labels.len() != matrix.len() {
        return Err(Error::domain(format!("{} labels for {} rows", labels.len(), matrix.len())));
    }
    let cols = check_matrix(matrix, None)?;
    if labels.iter().any(|y| !y.is_finite()) {
        return Err(Error::domain("labels must be finite"));
    }
    if config.objective == Objective::Logistic && labels.iter().any(|&y| y != 0.0 && y != 1.0) {
        return Err(Error::domain("logistic labels must be 0 or 1"));
    }

    let mapper = BinMapper::fit(matrix, config.bins);
    let binned = mapper.transform(matrix);
    let params = GrowParams {
        lambda: config.lambda,
        gamma: config.gamma,
        max_depth: config.max_depth,
        max_leaves: config.max_leaves,
        growth: config.growth,
    };
    let base = config.base_score.unwrap_or_else(|| config.objective.default_base(labels));
    let mut margin = vec![base; matrix.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut trees = Vec::with_capacity(config.rounds);
    let mut trace = Vec::with_capacity(config.rounds);
    let n = matrix.len();

    for _ in 0..config.rounds {
        let (grad, hess): (Vec<f64>, Vec<f64>) =
            margin.iter().zip(labels).map(|(m, y)| config.objective.grad_hess(*m, *y)).unzip();
        let rows: Vec<usize> = if config.subsample < 1.0 {
            let picked: Vec<usize> = (0..n).filter(|_| rng.random::<f64>() < config.subsample).collect();
            if picked.is_empty() {
                vec![rng.random_range(0..n)]
            } else {
                picked
            }
        } else {
            (0..n).collect()
        };
        let tree = grow_tree(&binned, &mapper, &grad, &hess, rows, &params);
        for (m, row) in margin.iter_mut().zip(matrix) {
            *m += config.learning_rate * tree.predict_row(row);
        }
        trees.push(tree);
        trace.push(margin.iter().zip(labels).map(|(m, y)| config.objective.loss(*m, *y)).sum::<f64>() / n as f64);
    }

    let model = GbtModel {
        base_score: base,
        learning_rate: config.learning_rate,
        objective: config.objective,
        feature_names: (0..cols).map(|i| format!("f{i}")).collect(),
        trees,
    };
    Ok((model, trace))
}

pub fn predict(model: &GbtModel, matrix: &[Vec<f64>]) -> Result<Vec<f64>> {
    check_matrix(matrix, Some(model.n_features()))?;
    Ok(matrix.iter().map(|r| model.predict_row(r)).collect())
}

pub fn predict_margin(model: &GbtModel, matrix: &[Vec<f64>]) -> Result<Vec<f64>> {
    check_matrix(matrix, Some(model.n_features()))?;
    Ok(matrix.iter().map(|r| model.margin_row(r)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImportanceKind {
    /// Number of splits on the feature.
    Weight,
    /// Total split gain.
    Gain,
    /// Total hessian cover of the splitting nodes.
    Cover,
}

/// Per-feature importance, one entry per feature in index order.
pub fn feature_importance(model: &GbtModel, kind: ImportanceKind) -> Vec<f64> {
    let mut out = vec![0.0; model.n_features()];
    for node in model.trees.iter().flat_map(|t| &t.nodes) {
        if let Some(f) = node.feature {
            out[f] += match kind {
                ImportanceKind::Weight => 1.0,
                ImportanceKind::Gain => node.gain,
                ImportanceKind::Cover => node.cover,
            };
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub train_rows: usize,
    pub test_rows: usize,
    pub rmse: f64,
    /// `None` when the test labels are constant.
    pub r2: Option<f64>,
    /// Present for the logistic objective.
    pub classification: Option<MetricReport>,
    pub config: GbtConfig,
}

/// Chronological split: the first `fraction` of rows train, the rest test.
pub fn evaluate_split_train_test(
    matrix: &[Vec<f64>],
    labels: &[f64],
    fraction: f64,
    config: &GbtConfig,
) -> Result<(GbtModel, TestReport)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::domain("split fraction must lie in (0, 1)"));
    }
    if labels.len() != matrix.len() {
        return Err(Error::domain(format!("{} labels for {} rows", labels.len(), matrix.len())));
    }
    let cut = (matrix.len() as f64 * fraction).floor() as usize;
    if cut == 0 || cut == matrix.len() {
        return Err(Error::domain("split leaves an empty train or test set"));
    }
    let (model, _) = train_gbt(&matrix[..cut], &labels[..cut], config)?;
    let test_x = &matrix[cut..];
    let test_y = &labels[cut..];
    let pred = predict(&model, test_x)?;
    let sse: f64 = pred.iter().zip(test_y).map(|(p, y)| (p - y).powi(2)).sum();
    let m = test_y.len() as f64;
    let mean = test_y.iter().sum::<f64>() / m;
    let sst: f64 = test_y.iter().map(|y| (y - mean).powi(2)).sum();
    let classification = match config.objective {
        Objective::Logistic => {
            let truth: Vec<bool> = test_y.iter().map(|y| *y > 0.5).collect();
            Some(MetricReport::from_scores(&truth, &pred, 0.5)?)
        }
        Objective::SquaredError => None,
    };
    let report = TestReport {
        train_rows: cut,
        test_rows: test_y.len(),
        rmse: (sse / m).sqrt(),
        r2: (sst > 0.0).then(|| 1.0 - sse / sst),
        classification,
        config: config.clone(),
    };
    Ok((model, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step_data() -> (Vec<Vec<f64>>, Vec<f64>) {
        let x: Vec<Vec<f64>> = (0..40).map(|i| vec![i as f64, (i % 3) as f64]).collect();
        let y = x.iter().map(|r| if r[0] < 20.0 { -1.0 } else { 2.0 }).collect();
        (x, y)
    }

    #[test]
    fn single_stump_finds_step() {
        let (x, y) = step_data();
        let cfg = GbtConfig { rounds: 1, learning_rate: 1.0, max_depth: 1, lambda: 0.0, ..Default::default() };
        let (model, _) = train_gbt(&x, &y, &cfg).unwrap();
        let root = &model.trees[0].nodes[0];
        assert_eq!(root.feature, Some(0));
        assert_eq!(root.threshold, Some(19.5));
        let pred = predict(&model, &x).unwrap();
        for (p, t) in pred.iter().zip(&y) {
            assert!((p - t).abs() < 1e-12);
        }
    }

    #[test]
    fn loss_trace_decreases() {
        let (x, y) = step_data();
        let (_, trace) = train_gbt(&x, &y, &GbtConfig { rounds: 20, ..Default::default() }).unwrap();
        assert!(trace.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }

    #[test]
    fn logistic_base_is_log_odds() {
        let x = vec![vec![0.0]; 4];
        let y = vec![1.0, 1.0, 1.0, 0.0];
        let cfg = GbtConfig { rounds: 0, objective: Objective::Logistic, ..Default::default() };
        let (model, _) = train_gbt(&x, &y, &cfg).unwrap();
        assert!((model.base_score - 3f64.ln()).abs() < 1e-12);
        assert!((model.predict_row(&[0.0]) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let (x, y) = step_data();
        let (model, _) = train_gbt(&x, &y, &GbtConfig { rounds: 3, ..Default::default() }).unwrap();
        let back = GbtModel::from_json(&model.to_json().unwrap()).unwrap();
        assert_eq!(back, model);
    }

    #[test]
    fn rejects_non_finite_and_empty() {
        let cfg = GbtConfig::default();
        assert!(matches!(train_gbt(&[], &[], &cfg), Err(Error::Domain(_))));
        assert!(matches!(train_gbt(&[vec![f64::NAN]], &[0.0], &cfg), Err(Error::Domain(_))));
    }

    #[test]
    fn leaf_limit_respected() {
        let x: Vec<Vec<f64>> = (0..200).map(|i| vec![(i * 7 % 200) as f64, (i % 13) as f64]).collect();
        let y: Vec<f64> = x.iter().map(|r| (r[0] / 20.0).sin() + r[1]).collect();
        for growth in [Growth::LevelWise, Growth::LeafWise] {
            let cfg = GbtConfig { rounds: 2, max_leaves: 5, max_depth: 10, growth, ..Default::default() };
            let (model, _) = train_gbt(&x, &y, &cfg).unwrap();
            assert!(model.trees.iter().all(|t| t.leaf_count() <= 5));
        }
    }
}
