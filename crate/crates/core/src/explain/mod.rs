//! Attribution and sensitivity analysis for black-box predictors.

pub mod shapley;
pub mod sobol;

pub use shapley::{
    dependence_pairs, exact_shapley, shap_summary, write_attributions_csv, write_dependence_csv, FeatureRank,
    ShapleyAttribution, MAX_SHAPLEY_FEATURES,
};
pub use sobol::{bounds_from_rows, sobol_indices, SobolIndices};

/// Thread-safe row predictor.
pub type Predictor<'a> = dyn Fn(&[f64]) -> f64 + Sync + 'a;
