use std::fs;
use std::path::{Path, PathBuf};
use std::thread;

use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::config::{sub_seed, RunConfig, SeedStream};
use crate::error::{Error, Result};
use crate::explain::{
    bounds_from_rows, dependence_pairs, exact_shapley, shap_summary, sobol_indices, write_attributions_csv,
    write_dependence_csv, FeatureRank, ShapleyAttribution, MAX_SHAPLEY_FEATURES,
};
use crate::features::{accumulate_features, build_training_matrix, Target, MOMENTUM_FEATURE};
use crate::gbt::{
    evaluate_split_train_test, feature_importance, predict, train_gbt, GbtConfig, GbtModel, Growth, ImportanceKind,
    Objective,
};
use crate::hmm::HmmModel;
use crate::ingest::{parse_match_file, validate_log, write_match_csv, ColumnSchema, MatchPointLog, Player};
use crate::metrics::{pearson, MetricReport};
use crate::momentum::{
    analyze_match, detect_swings, gaussian_baseline, MatchMomentum, MomentumSeries, MomentumSource,
    PerformanceRecord, SwingDirection, SwingEvent,
};
use crate::sim::{simulate_match, SimConfig};

/// Files written by a command plus non-fatal findings.
#[derive(Debug, Clone, Default)]
pub struct CommandReport {
    pub written: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, bytes)?;
    Ok(path)
}

fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text.into_bytes())
}

/// Parses and validates every input file; match logs keep input order.
pub fn load_logs(config: &RunConfig) -> Result<(Vec<MatchPointLog>, Vec<String>)> {
    if config.inputs.is_empty() {
        return Err(Error::Config("no input files given".into()));
    }
    let schema = match &config.schema {
        Some(p) => ColumnSchema::from_file(p)?,
        None => ColumnSchema::default(),
    };
    let mut logs = Vec::new();
    let mut warnings = Vec::new();
    for path in &config.inputs {
        let parsed = parse_match_file(path, &schema).map_err(|e| match e {
            Error::Io(io) => Error::Io(std::io::Error::new(io.kind(), format!("{}: {io}", path.display()))),
            other => other,
        })?;
        if let Some(first) = parsed.row_errors.first() {
            return Err(Error::Parse {
                // header is line 1
                line: first.row as u64 + 2,
                message: format!(
                    "{}: {} ({} malformed rows)",
                    path.display(),
                    first.message,
                    parsed.row_errors.len()
                ),
            });
        }
        warnings.extend(parsed.warnings.iter().map(|w| format!("{}: {}", path.display(), w.message)));
        for log in parsed.logs {
            let report = validate_log(&log);
            if let Some(e) = report.errors.first() {
                return Err(Error::Schema(format!(
                    "{}: match {} point {}: {} [{}] ({} errors)",
                    path.display(),
                    log.match_id,
                    e.row,
                    e.message,
                    e.rule,
                    report.errors.len()
                )));
            }
            warnings.extend(report.warnings.iter().map(|w| format!("match {}: {}", log.match_id, w.message)));
            logs.push(log);
        }
    }
    if logs.is_empty() {
        return Err(Error::Schema("inputs contain no points".into()));
    }
    Ok((logs, warnings))
}

/// Momentum analysis of every match, parallel across matches.
pub fn analyze_all(logs: &[MatchPointLog], config: &RunConfig) -> Result<Vec<MatchMomentum>> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(logs.len()).max(1);
    let mut results: Vec<Option<Result<MatchMomentum>>> = (0..logs.len()).map(|_| None).collect();
    thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || {
                    (w..logs.len())
                        .step_by(workers)
                        .map(|i| (i, analyze_match(&logs[i], &config.momentum_settings(i))))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("momentum worker panicked") {
                results[i] = Some(r);
            }
        }
    });
    results.into_iter().map(|r| r.expect("every match analysed")).collect()
}

#[derive(Serialize)]
struct MatchSwings<'a> {
    match_id: &'a str,
    events: &'a [SwingEvent],
}

#[derive(Serialize)]
struct MatchPerformance<'a> {
    match_id: &'a str,
    player1: &'a str,
    player2: &'a str,
    winner: Player,
    performance: PerformanceRecord,
}

#[derive(Serialize)]
struct MatchModel<'a> {
    match_id: &'a str,
    /// Player each hidden state is mapped to.
    orientation: &'a [Player],
    log_likelihood: f64,
    iterations: usize,
    model: &'a HmmModel,
}

pub fn cmd_momentum(config: &RunConfig) -> Result<CommandReport> {
    let (logs, warnings) = load_logs(config)?;
    let results = analyze_all(&logs, config)?;

    let mut csv = csv::Writer::from_writer(Vec::new());
    let codec = |e: csv::Error| Error::Codec(e.to_string());
    csv.write_record(["match_id", "point_no", "set_no", "game_no", "momentum"]).map_err(codec)?;
    for (log, r) in logs.iter().zip(&results) {
        for (p, v) in log.points.iter().zip(&r.series.values) {
            csv.write_record([
                log.match_id.clone(),
                p.point_no.to_string(),
                p.set_no.to_string(),
                p.game_no.to_string(),
                v.to_string(),
            ])
            .map_err(codec)?;
        }
    }
    let momentum_csv = csv.into_inner().map_err(|e| Error::Codec(e.to_string()))?;

    let swings: Vec<MatchSwings> =
        logs.iter().zip(&results).map(|(l, r)| MatchSwings { match_id: &l.match_id, events: &r.swings }).collect();
    let performance: Vec<MatchPerformance> = logs
        .iter()
        .zip(&results)
        .filter_map(|(l, r)| {
            Some(MatchPerformance {
                match_id: &l.match_id,
                player1: &l.player1_name,
                player2: &l.player2_name,
                winner: l.match_winner()?,
                performance: r.performance,
            })
        })
        .collect();
    let models: Vec<MatchModel> = logs
        .iter()
        .zip(&results)
        .map(|(l, r)| MatchModel {
            match_id: &l.match_id,
            orientation: r.orientation.players(),
            log_likelihood: r.posteriors.log_likelihood,
            iterations: r.likelihood_trace.len(),
            model: &r.model,
        })
        .collect();

    let out = &config.out;
    Ok(CommandReport {
        written: vec![
            write_file(out, "momentum.csv", &momentum_csv)?,
            write_file(out, "swings.json", &to_json(&swings)?)?,
            write_file(out, "performance.json", &to_json(&performance)?)?,
            write_file(out, "model_hmm.json", &to_json(&models)?)?,
        ],
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedFeature {
    pub feature: String,
    pub gain: f64,
}

/// Features by total split gain, descending; ties keep column order.
pub fn gain_ranking(model: &GbtModel) -> Vec<RankedFeature> {
    let gains = feature_importance(model, ImportanceKind::Gain);
    let mut ranking: Vec<RankedFeature> = model
        .feature_names
        .iter()
        .zip(gains)
        .map(|(f, gain)| RankedFeature { feature: f.clone(), gain })
        .collect();
    ranking.sort_by(|a, b| b.gain.total_cmp(&a.gain));
    ranking
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelOutcome {
    pub source: MomentumSource,
    pub metrics: MetricReport,
    pub ranking: Vec<RankedFeature>,
    /// 1-based position of the momentum column in `ranking`.
    pub momentum_rank: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct MetricDelta {
    pub accuracy: f64,
    pub auc: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SignificanceReport {
    pub matches: usize,
    pub train_rows: usize,
    pub test_rows: usize,
    pub real: ModelOutcome,
    pub baseline: ModelOutcome,
    /// real − baseline.
    pub delta: MetricDelta,
    pub gbt: GbtConfig,
    pub beta: f64,
    pub codec: String,
    pub baseline_sigma: f64,
    pub seed: u64,
}

fn stack(parts: Vec<(Vec<Vec<f64>>, Vec<f64>)>) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (m, l) in parts {
        x.extend(m);
        y.extend(l);
    }
    (x, y)
}

/// Next-point-victor models with the fitted momentum column versus a
/// Gaussian-noise column, on the same chronological split.
pub fn significance_study(logs: &[MatchPointLog], config: &RunConfig) -> Result<SignificanceReport> {
    let results = analyze_all(logs, config)?;
    let mut names = Vec::new();
    let mut real_parts = Vec::new();
    let mut base_parts = Vec::new();
    for (i, (log, r)) in logs.iter().zip(&results).enumerate() {
        let table = accumulate_features(log)?;
        let baseline = gaussian_baseline(log.len(), sub_seed(config.seed, SeedStream::Baseline, i as u64), config.baseline_sigma)?;
        let real = build_training_matrix(&table, Some(&r.series), Target::NextPointVictor)?;
        let base = build_training_matrix(&table, Some(&baseline), Target::NextPointVictor)?;
        names = real.names.clone();
        real_parts.push((real.matrix, real.labels));
        base_parts.push((base.matrix, base.labels));
    }
    let (real_x, real_y) = stack(real_parts);
    let (base_x, base_y) = stack(base_parts);
    let gbt = GbtConfig { objective: Objective::Logistic, ..config.gbt_config() };

    let outcome = |x: &[Vec<f64>], y: &[f64], source: MomentumSource| -> Result<(ModelOutcome, usize, usize)> {
        let (model, report) = evaluate_split_train_test(x, y, config.split, &gbt)?;
        let model = model.with_feature_names(names.clone())?;
        let ranking = gain_ranking(&model);
        let momentum_rank = ranking.iter().position(|r| r.feature == MOMENTUM_FEATURE).map_or(0, |p| p + 1);
        let metrics = report.classification.ok_or_else(|| Error::domain("logistic model produced no metrics"))?;
        Ok((ModelOutcome { source, metrics, ranking, momentum_rank }, report.train_rows, report.test_rows))
    };
    let (real, train_rows, test_rows) = outcome(&real_x, &real_y, MomentumSource::HmmPosterior)?;
    let (baseline, _, _) = outcome(&base_x, &base_y, MomentumSource::GaussianBaseline)?;
    let delta = MetricDelta {
        accuracy: real.metrics.accuracy - baseline.metrics.accuracy,
        auc: real.metrics.auc - baseline.metrics.auc,
        precision: real.metrics.precision - baseline.metrics.precision,
        recall: real.metrics.recall - baseline.metrics.recall,
        f1: real.metrics.f1 - baseline.metrics.f1,
    };
    Ok(SignificanceReport {
        matches: logs.len(),
        train_rows,
        test_rows,
        real,
        baseline,
        delta,
        gbt,
        beta: config.ema.beta,
        codec: config.codec_name.clone(),
        baseline_sigma: config.baseline_sigma,
        seed: config.seed,
    })
}

pub fn cmd_significance(config: &RunConfig) -> Result<CommandReport> {
    let (logs, warnings) = load_logs(config)?;
    let report = significance_study(&logs, config)?;
    Ok(CommandReport { written: vec![write_file(&config.out, "significance.json", &to_json(&report)?)?], warnings })
}

/// Actual swings matched by a predicted swing of the same direction within
/// `tolerance` points.
pub fn align_swings(actual: &[SwingEvent], predicted: &[SwingEvent], tolerance: usize) -> usize {
    actual
        .iter()
        .filter(|a| predicted.iter().any(|p| p.direction == a.direction && p.index.abs_diff(a.index) <= tolerance))
        .count()
}

pub const SWING_TOLERANCE: usize = 2;
const SHUFFLE_ROUNDS: u64 = 20;

/// Momentum-regression rows of every match, with `(match, point)` origins.
struct MomentumRows {
    names: Vec<String>,
    matrix: Vec<Vec<f64>>,
    labels: Vec<f64>,
    origin: Vec<(usize, usize)>,
}

fn momentum_rows(logs: &[MatchPointLog], results: &[MatchMomentum]) -> Result<MomentumRows> {
    let mut rows = MomentumRows { names: Vec::new(), matrix: Vec::new(), labels: Vec::new(), origin: Vec::new() };
    for (i, (log, r)) in logs.iter().zip(results).enumerate() {
        let table = accumulate_features(log)?;
        let set = build_training_matrix(&table, None, Target::MomentumValue(&r.series))?;
        rows.names = set.names;
        rows.origin.extend((0..set.matrix.len()).map(|t| (i, t)));
        rows.matrix.extend(set.matrix);
        rows.labels.extend(set.labels);
    }
    Ok(rows)
}

fn series(values: Vec<f64>) -> MomentumSeries {
    MomentumSeries { values, beta: None, source: MomentumSource::HmmPosterior }
}

#[derive(Debug, Clone, Serialize)]
pub struct SwingSummary {
    pub actual: usize,
    pub predicted: usize,
    pub hits: usize,
    pub hit_rate: f64,
    /// Mean hit rate after shuffling each predicted segment.
    pub shuffled_hit_rate: f64,
    pub tolerance: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SwingPredictionReport {
    pub train_rows: usize,
    pub test_rows: usize,
    pub rmse: f64,
    pub r2: Option<f64>,
    pub pearson: Option<f64>,
    pub swings: SwingSummary,
    pub gbt: GbtConfig,
    pub hysteresis: f64,
    pub seed: u64,
}

pub fn cmd_predict_swings(config: &RunConfig) -> Result<CommandReport> {
    let (logs, warnings) = load_logs(config)?;
    let results = analyze_all(&logs, config)?;
    let rows = momentum_rows(&logs, &results)?;
    let gbt = GbtConfig { growth: Growth::LeafWise, objective: Objective::SquaredError, ..config.gbt_config() };
    let (model, test) = evaluate_split_train_test(&rows.matrix, &rows.labels, config.split, &gbt)?;
    let cut = test.train_rows;
    let predicted = predict(&model, &rows.matrix[cut..])?;

    // contiguous per-match segments of the test rows
    let mut segments: Vec<(usize, std::ops::Range<usize>)> = Vec::new();
    for (k, &(m, _)) in rows.origin[cut..].iter().enumerate() {
        match segments.last_mut() {
            Some((last, range)) if *last == m => range.end = k + 1,
            _ => segments.push((m, k..k + 1)),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(config.seed, SeedStream::Permutation, 0));
    let (mut n_actual, mut n_pred, mut hits) = (0, 0, 0);
    let mut shuffled_hits = 0usize;
    let mut csv = csv::Writer::from_writer(Vec::new());
    let codec = |e: csv::Error| Error::Codec(e.to_string());
    csv.write_record(["match_id", "point_no", "actual", "predicted", "actual_swing", "predicted_swing"]).map_err(codec)?;
    let label = |events: &[SwingEvent], t: usize| {
        events.iter().find(|e| e.index == t).map_or("", |e| match e.direction {
            SwingDirection::TowardP1 => "toward_p1",
            SwingDirection::TowardP2 => "toward_p2",
        })
    };
    for (m, range) in &segments {
        let actual_vals = rows.labels[cut + range.start..cut + range.end].to_vec();
        let pred_vals = predicted[range.clone()].to_vec();
        let actual = detect_swings(&series(actual_vals.clone()), config.hysteresis);
        let pred = detect_swings(&series(pred_vals.clone()), config.hysteresis);
        n_actual += actual.len();
        n_pred += pred.len();
        hits += align_swings(&actual, &pred, SWING_TOLERANCE);
        for _ in 0..SHUFFLE_ROUNDS {
            let mut shuffled = pred_vals.clone();
            shuffled.shuffle(&mut rng);
            shuffled_hits += align_swings(&actual, &detect_swings(&series(shuffled), config.hysteresis), SWING_TOLERANCE);
        }
        let log = &logs[*m];
        for (k, (a, p)) in actual_vals.iter().zip(&pred_vals).enumerate() {
            let (_, t) = rows.origin[cut + range.start + k];
            csv.write_record([
                log.match_id.clone(),
                log.points[t].point_no.to_string(),
                a.to_string(),
                p.to_string(),
                label(&actual, k).to_string(),
                label(&pred, k).to_string(),
            ])
            .map_err(codec)?;
        }
    }
    let rate = |h: f64| if n_actual == 0 { 0.0 } else { h / n_actual as f64 };
    let report = SwingPredictionReport {
        train_rows: test.train_rows,
        test_rows: test.test_rows,
        rmse: test.rmse,
        r2: test.r2,
        pearson: pearson(&rows.labels[cut..], &predicted).ok(),
        swings: SwingSummary {
            actual: n_actual,
            predicted: n_pred,
            hits,
            hit_rate: rate(hits as f64),
            shuffled_hit_rate: rate(shuffled_hits as f64 / SHUFFLE_ROUNDS as f64),
            tolerance: SWING_TOLERANCE,
        },
        gbt,
        hysteresis: config.hysteresis,
        seed: config.seed,
    };
    let csv_bytes = csv.into_inner().map_err(|e| Error::Codec(e.to_string()))?;
    Ok(CommandReport {
        written: vec![
            write_file(&config.out, "swing_pred.csv", &csv_bytes)?,
            write_file(&config.out, "report.json", &to_json(&report)?)?,
        ],
        warnings,
    })
}

/// Momentum regression on the configured feature subset.
struct ExplainModel {
    names: Vec<String>,
    matrix: Vec<Vec<f64>>,
    train_rows: usize,
    model: GbtModel,
}

fn explain_model(config: &RunConfig, logs: &[MatchPointLog], max_features: Option<usize>) -> Result<ExplainModel> {
    if let Some(cap) = max_features {
        if config.explain_features.len() > cap {
            return Err(Error::Capacity(format!(
                "{} features selected; exact attribution supports at most {cap}",
                config.explain_features.len()
            )));
        }
    }
    let results = analyze_all(logs, config)?;
    let rows = momentum_rows(logs, &results)?;
    let columns: Vec<usize> = config
        .explain_features
        .iter()
        .map(|f| {
            rows.names.iter().position(|n| n == f).ok_or_else(|| Error::Config(format!("unknown feature `{f}`")))
        })
        .collect::<Result<_>>()?;
    let matrix: Vec<Vec<f64>> = rows.matrix.iter().map(|r| columns.iter().map(|&c| r[c]).collect()).collect();
    let train_rows = ((matrix.len() as f64) * config.split).floor() as usize;
    if train_rows == 0 {
        return Err(Error::domain("split leaves no training rows"));
    }
    let gbt = GbtConfig { objective: Objective::SquaredError, ..config.gbt_config() };
    let (model, _) = train_gbt(&matrix[..train_rows], &rows.labels[..train_rows], &gbt)?;
    let model = model.with_feature_names(config.explain_features.clone())?;
    Ok(ExplainModel { names: config.explain_features.clone(), matrix, train_rows, model })
}

fn sample_sorted(rng: &mut ChaCha8Rng, len: usize, amount: usize) -> Vec<usize> {
    let mut picked = index::sample(rng, len, amount.min(len)).into_vec();
    picked.sort_unstable();
    picked
}

#[derive(Serialize)]
struct RankingFile<'a> {
    ranking: &'a [FeatureRank],
    instances: usize,
    background_size: usize,
    dependence: (&'a str, &'a str),
    seed: u64,
}

pub struct ExplainOutput {
    pub names: Vec<String>,
    pub attributions: Vec<ShapleyAttribution>,
    pub ranking: Vec<FeatureRank>,
}

pub fn explain_study(logs: &[MatchPointLog], config: &RunConfig) -> Result<ExplainOutput> {
    let em = explain_model(config, logs, Some(MAX_SHAPLEY_FEATURES))?;
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(config.seed, SeedStream::Sampling, 0));
    let background: Vec<Vec<f64>> =
        sample_sorted(&mut rng, em.train_rows, config.explain_background).into_iter().map(|i| em.matrix[i].clone()).collect();
    let instances = sample_sorted(&mut rng, em.matrix.len(), config.explain_instances);
    let model = &em.model;
    let predict = |row: &[f64]| model.predict_row(row);
    let attributions = instances
        .iter()
        .map(|&i| exact_shapley(&predict, &background, &em.matrix[i], i))
        .collect::<Result<Vec<_>>>()?;
    let ranking = shap_summary(&attributions, &em.names)?;
    Ok(ExplainOutput { names: em.names, attributions, ranking })
}

pub fn cmd_explain(config: &RunConfig) -> Result<CommandReport> {
    if config.explain_features.len() > MAX_SHAPLEY_FEATURES {
        return Err(Error::Capacity(format!(
            "{} features selected; exact attribution supports at most {MAX_SHAPLEY_FEATURES}",
            config.explain_features.len()
        )));
    }
    let (logs, warnings) = load_logs(config)?;
    let out = explain_study(&logs, config)?;
    let (a, b) = match &config.dependence {
        Some((a, b)) => (a.clone(), b.clone()),
        None => {
            let second = out.ranking.get(1).unwrap_or(&out.ranking[0]);
            (out.ranking[0].feature.clone(), second.feature.clone())
        }
    };
    let pairs = dependence_pairs(&out.names, &out.attributions, &a, &b)?;
    let mut shap = Vec::new();
    write_attributions_csv(&out.attributions, &out.names, &mut shap)?;
    let mut dep = Vec::new();
    write_dependence_csv(&pairs, &a, &b, &mut dep)?;
    let ranking = RankingFile {
        ranking: &out.ranking,
        instances: out.attributions.len(),
        background_size: out.attributions.first().map_or(0, |x| x.background_size),
        dependence: (&a, &b),
        seed: config.seed,
    };
    Ok(CommandReport {
        written: vec![
            write_file(&config.out, "shap.csv", &shap)?,
            write_file(&config.out, "ranking.json", &to_json(&ranking)?)?,
            write_file(&config.out, "dependence.csv", &dep)?,
        ],
        warnings,
    })
}

#[derive(Serialize)]
struct FixedFeature {
    feature: String,
    value: f64,
}

pub fn cmd_sobol(config: &RunConfig) -> Result<CommandReport> {
    let (logs, warnings) = load_logs(config)?;
    let em = explain_model(config, &logs, None)?;
    let bounds = bounds_from_rows(&em.matrix)?;
    // constant columns are held at their value rather than sampled
    let varying: Vec<usize> = (0..bounds.len()).filter(|&j| bounds[j].0 < bounds[j].1).collect();
    if varying.is_empty() {
        return Err(Error::domain("every selected feature is constant"));
    }
    let base: Vec<f64> = bounds.iter().map(|b| b.0).collect();
    let model = &em.model;
    let predict = |x: &[f64]| {
        let mut row = base.clone();
        for (k, &j) in varying.iter().enumerate() {
            row[j] = x[k];
        }
        model.predict_row(&row)
    };
    let sub_bounds: Vec<(f64, f64)> = varying.iter().map(|&j| bounds[j]).collect();
    let seed = sub_seed(config.seed, SeedStream::Sobol, 0);
    let indices = sobol_indices(&predict, &sub_bounds, config.sobol_n_base, seed)?;
    let mut value: serde_json::Value = serde_json::from_str(&indices.to_json()?)?;
    value["features"] = serde_json::json!(varying.iter().map(|&j| em.names[j].clone()).collect::<Vec<_>>());
    let fixed: Vec<FixedFeature> = (0..bounds.len())
        .filter(|j| !varying.contains(j))
        .map(|j| FixedFeature { feature: em.names[j].clone(), value: bounds[j].0 })
        .collect();
    value["fixed"] = serde_json::to_value(fixed)?;
    Ok(CommandReport { written: vec![write_file(&config.out, "sobol.json", &to_json(&value)?)?], warnings })
}

/// Simulated matches for `config.sim`, one per sub-seed.
pub fn simulate_matches(config: &RunConfig) -> Result<Vec<MatchPointLog>> {
    (0..config.sim_matches)
        .map(|i| {
            simulate_match(&SimConfig {
                seed: sub_seed(config.seed, SeedStream::Simulation, i as u64),
                match_id: format!("sim-{i:03}"),
                ..config.sim.clone()
            })
        })
        .collect()
}

pub fn cmd_simulate(config: &RunConfig) -> Result<CommandReport> {
    if config.sim_matches == 0 {
        return Err(Error::Config("matches must be positive".into()));
    }
    let logs = simulate_matches(config)?;
    let mut bytes = Vec::new();
    write_match_csv(&logs, &mut bytes)?;
    Ok(CommandReport { written: vec![write_file(&config.out, "simulated.csv", &bytes)?], warnings: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::momentum::SwingDirection::{TowardP1, TowardP2};

    fn ev(index: usize, direction: SwingDirection) -> SwingEvent {
        SwingEvent { index, direction, pre: 0.0, post: 0.0 }
    }

    #[test]
    fn alignment_tolerance_and_direction() {
        let actual = [ev(10, TowardP1), ev(20, TowardP2)];
        assert_eq!(align_swings(&actual, &actual, 2), 2);
        assert_eq!(align_swings(&actual, &[ev(12, TowardP1), ev(23, TowardP2)], 2), 1);
        assert_eq!(align_swings(&actual, &[ev(10, TowardP2)], 2), 0);
        assert_eq!(align_swings(&actual, &[], 2), 0);
    }

    #[test]
    fn simulate_then_load_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let mut config = RunConfig { out: dir.path().to_path_buf(), sim_matches: 2, ..Default::default() };
        config.sim.best_of = 3;
        let written = cmd_simulate(&config).unwrap().written;
        config.inputs = written;
        let (logs, _) = load_logs(&config).unwrap();
        assert_eq!(logs, simulate_matches(&config).unwrap());
    }

    #[test]
    fn explain_capacity_checked_first() {
        let config = RunConfig { explain_features: vec!["elapsed_seconds".into(); 17], ..Default::default() };
        assert!(matches!(cmd_explain(&config), Err(Error::Capacity(_))));
    }
}
