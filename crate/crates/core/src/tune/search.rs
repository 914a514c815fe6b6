//! Random candidate search scored by k-fold accuracy.

use alloc::string::String;
use alloc::vec::Vec;

use crate::matrix::FeatureMatrix;
use crate::model::TrainedModel;
use crate::rng::{derive_seed, Stream};
use crate::tune::kfold::stratified_kfold;
use crate::tune::space::{ModelParams, ParamSpace, ParamValue};
use crate::tune::TuneError;

/// Mean accuracy over stratified folds: fit on the complement of each
/// fold, score on the fold, average the per-fold accuracies.
pub fn cross_val_accuracy(
    m: &FeatureMatrix,
    params: &ModelParams,
    k: usize,
    folds_seed: u64,
) -> Result<f64, TuneError> {
    let folds = stratified_kfold(m.labels(), k, folds_seed)?;
    let mut total = 0.0;
    for (fold_index, fold) in folds.iter().enumerate() {
        let mut in_fold = alloc::vec![false; m.n_samples()];
        for &r in fold {
            in_fold[r] = true;
        }
        let train_rows: Vec<usize> = (0..m.n_samples()).filter(|&r| !in_fold[r]).collect();
        let train = m.subset_rows(&train_rows);
        let test = m.subset_rows(fold);

        let model = params.fit(&train).map_err(|source| TuneError::Fold {
            fold: fold_index,
            source,
        })?;
        let predicted = model.predict(&test).map_err(TuneError::Predict)?;
        let hits = predicted
            .iter()
            .zip(test.labels())
            .filter(|(p, y)| p == y)
            .count();
        total += hits as f64 / test.n_samples() as f64;
    }
    Ok(total / k as f64)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchConfig {
    /// Distinct candidates to draw from the space.
    pub n_iter: usize,
    pub k_folds: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            n_iter: 10,
            k_folds: 5,
            seed: 0,
        }
    }
}

/// One evaluated candidate, in the order it was drawn.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    /// Position of this candidate in the full grid enumeration.
    pub space_index: usize,
    pub assignment: Vec<(String, ParamValue)>,
    pub mean_accuracy: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub candidates: Vec<Candidate>,
    /// Index into `candidates` of the winner; on ties the earliest drawn
    /// candidate wins.
    pub best_index: usize,
    pub best_params: Vec<(String, ParamValue)>,
    pub best_mean: f64,
}

/// Draws `n_iter` distinct candidates from the space, scores each by
/// cross-validated accuracy, and refits the winner on all of `m`.
///
/// All candidates share one derived model seed, so score differences come
/// from the settings alone; the final refit uses its own derived seed.
pub fn random_search(
    m: &FeatureMatrix,
    space: &ParamSpace,
    cfg: &SearchConfig,
) -> Result<(SearchResult, TrainedModel), TuneError> {
    let total = space.total();
    if total == 0 {
        return Err(TuneError::EmptySpace);
    }
    if cfg.n_iter == 0 {
        return Err(TuneError::ZeroIterations);
    }
    if cfg.n_iter > total {
        return Err(TuneError::TooManyIterations {
            requested: cfg.n_iter,
            available: total,
        });
    }

    let mut sampler = Stream::new(derive_seed(cfg.seed, "search.candidates"));
    let drawn = sampler.sample_distinct(total, cfg.n_iter);
    let model_seed = derive_seed(cfg.seed, "search.model");
    let folds_seed = derive_seed(cfg.seed, "search.folds");

    let mut candidates = Vec::with_capacity(cfg.n_iter);
    let mut best_index = 0;
    let mut best_mean = f64::NEG_INFINITY;
    for (position, &space_index) in drawn.iter().enumerate() {
        let assignment = space.assignment(space_index);
        let params = ModelParams::from_assignment(space.kind, &assignment, model_seed)?;
        let mean_accuracy = cross_val_accuracy(m, &params, cfg.k_folds, folds_seed)?;
        if mean_accuracy > best_mean {
            best_mean = mean_accuracy;
            best_index = position;
        }
        candidates.push(Candidate {
            space_index,
            assignment,
            mean_accuracy,
        });
    }

    let best_params = candidates[best_index].assignment.clone();
    let refit_params = ModelParams::from_assignment(
        space.kind,
        &best_params,
        derive_seed(cfg.seed, "search.refit"),
    )?;
    let model = refit_params.fit(m).map_err(TuneError::Refit)?;

    let result = SearchResult {
        candidates,
        best_index,
        best_params,
        best_mean,
    };
    Ok((result, model))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{LogRegConfig, ModelKind};
    use crate::rng::Stream;
    use crate::tune::space::ParamAxis;
    use alloc::format;
    use alloc::string::ToString;
    use alloc::vec;

    /// Two blobs with overlap controlled by `gap`.
    fn blobs(n_per_class: usize, gap: f64, seed: u64) -> FeatureMatrix {
        let names: Vec<String> = (0..2).map(|i| format!("x{i}")).collect();
        let mut stream = Stream::new(seed);
        let mut values = Vec::new();
        let mut labels = Vec::new();
        for class in 0..2u8 {
            for _ in 0..n_per_class {
                values.push(f64::from(class) * gap + stream.unit_f64());
                values.push(stream.unit_f64());
                labels.push(class);
            }
        }
        FeatureMatrix::new(values, names, labels).unwrap()
    }

    #[test]
    fn cross_val_is_perfect_on_separated_blobs() {
        let m = blobs(20, 10.0, 1);
        let params = ModelParams::LogReg(LogRegConfig::default());
        let acc = cross_val_accuracy(&m, &params, 5, 3).unwrap();
        assert_eq!(acc, 1.0);
    }

    #[test]
    fn cross_val_wraps_fit_failures_with_the_fold() {
        let m = blobs(10, 2.0, 2);
        let params = ModelParams::LogReg(LogRegConfig {
            c: -1.0,
            ..LogRegConfig::default()
        });
        match cross_val_accuracy(&m, &params, 5, 3) {
            Err(TuneError::Fold { fold: 0, source: _ }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn exhaustive_search_matches_brute_force() {
        let m = blobs(15, 1.2, 5);
        let space = ParamSpace {
            kind: ModelKind::Forest,
            axes: vec![
                ParamAxis {
                    name: "n_estimators".to_string(),
                    values: vec![ParamValue::Int(3), ParamValue::Int(9)],
                },
                ParamAxis {
                    name: "min_samples_leaf".to_string(),
                    values: vec![ParamValue::Int(1), ParamValue::Int(4)],
                },
            ],
        };
        let cfg = SearchConfig {
            n_iter: 4,
            k_folds: 3,
            seed: 11,
        };
        let (result, model) = random_search(&m, &space, &cfg).unwrap();
        assert_eq!(result.candidates.len(), 4);

        // brute force with the same derived seeds
        let model_seed = derive_seed(cfg.seed, "search.model");
        let folds_seed = derive_seed(cfg.seed, "search.folds");
        for candidate in &result.candidates {
            let params =
                ModelParams::from_assignment(space.kind, &candidate.assignment, model_seed)
                    .unwrap();
            let mean = cross_val_accuracy(&m, &params, cfg.k_folds, folds_seed).unwrap();
            assert_eq!(mean, candidate.mean_accuracy);
        }
        let brute_best = result
            .candidates
            .iter()
            .map(|c| c.mean_accuracy)
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(result.best_mean, brute_best);
        let first_at_best = result
            .candidates
            .iter()
            .position(|c| c.mean_accuracy == brute_best)
            .unwrap();
        assert_eq!(result.best_index, first_at_best);
        assert_eq!(
            result.best_params,
            result.candidates[result.best_index].assignment
        );
        assert_eq!(model.kind(), ModelKind::Forest);

        // all four distinct grid points were visited
        let mut seen: Vec<usize> = result.candidates.iter().map(|c| c.space_index).collect();
        seen.sort_unstable();
        assert_eq!(seen, vec![0, 1, 2, 3]);
    }

    #[test]
    fn search_is_deterministic_and_seed_sensitive() {
        let m = blobs(12, 1.0, 9);
        let space = ParamSpace::default_for(ModelKind::LogReg);
        let cfg = SearchConfig {
            n_iter: 3,
            k_folds: 3,
            seed: 4,
        };
        let (a, _) = random_search(&m, &space, &cfg).unwrap();
        let (b, _) = random_search(&m, &space, &cfg).unwrap();
        assert_eq!(a, b);
        let (c, _) = random_search(
            &m,
            &space,
            &SearchConfig {
                seed: 5,
                ..cfg
            },
        )
        .unwrap();
        // a different seed draws a different candidate subset
        let idx = |r: &SearchResult| r.candidates.iter().map(|x| x.space_index).collect::<Vec<_>>();
        assert_ne!(idx(&a), idx(&c));
    }

    #[test]
    fn oversized_requests_are_rejected() {
        let m = blobs(10, 1.0, 3);
        let space = ParamSpace::default_for(ModelKind::LogReg);
        let cfg = SearchConfig {
            n_iter: 6,
            k_folds: 3,
            seed: 0,
        };
        assert_eq!(
            random_search(&m, &space, &cfg),
            Err(TuneError::TooManyIterations {
                requested: 6,
                available: 5
            })
        );
        let zero = SearchConfig {
            n_iter: 0,
            k_folds: 3,
            seed: 0,
        };
        assert_eq!(
            random_search(&m, &space, &zero),
            Err(TuneError::ZeroIterations)
        );
    }

    #[test]
    fn refit_model_scores_the_training_matrix() {
        let m = blobs(15, 8.0, 6);
        let space = ParamSpace::default_for(ModelKind::LogReg);
        let cfg = SearchConfig {
            n_iter: 2,
            k_folds: 3,
            seed: 2,
        };
        let (_, model) = random_search(&m, &space, &cfg).unwrap();
        let predicted = model.predict(&m).unwrap();
        let hits = predicted
            .iter()
            .zip(m.labels())
            .filter(|(p, y)| p == y)
            .count();
        assert_eq!(hits, m.n_samples());
    }
}
