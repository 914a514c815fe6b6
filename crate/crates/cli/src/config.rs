//! Flat `key = value` run configuration.
//!
//! One file configures every subcommand; command-line flags override single
//! keys. Unknown keys are rejected so typos fail loudly instead of silently
//! running with a default.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use nids_core::model::ModelKind;
use nids_core::preprocess::SmoteScope;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub unsw_csv: Option<PathBuf>,
    pub kdd_csv: Option<PathBuf>,
    /// The stock UNSW export ships headerless; the stock KDD export carries
    /// a header line.
    pub unsw_has_header: bool,
    pub kdd_has_header: bool,
    pub seed: u64,
    pub train_fraction: f64,
    /// Per-dataset stratified subsample size; 0 keeps every row.
    pub sample_per_dataset: usize,
    pub smote_scope: SmoteScope,
    pub smote_k: usize,
    pub k_folds: usize,
    pub n_iter: usize,
    pub curve_fractions: Vec<f64>,
    pub models: Vec<ModelKind>,
    /// Skip the search and use the known-good settings for each model.
    pub fixed_params: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            unsw_csv: None,
            kdd_csv: None,
            unsw_has_header: false,
            kdd_has_header: true,
            seed: 0,
            train_fraction: 0.10,
            sample_per_dataset: 0,
            smote_scope: SmoteScope::TrainOnly,
            smote_k: 5,
            k_folds: 5,
            n_iter: 10,
            curve_fractions: vec![0.02, 0.04, 0.06, 0.08, 0.10],
            models: vec![ModelKind::Forest, ModelKind::Gbm, ModelKind::LogReg],
            fixed_params: false,
        }
    }
}

/// Single-key overrides taken from command-line flags.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub unsw_csv: Option<PathBuf>,
    pub kdd_csv: Option<PathBuf>,
    pub seed: Option<u64>,
    pub sample_per_dataset: Option<usize>,
    pub smote_scope: Option<SmoteScope>,
    pub fixed_params: bool,
}

impl Config {
    /// Reads `path` if given, otherwise starts from defaults, then applies
    /// flag overrides and validates the result.
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Config, CliError> {
        let mut cfg = Config::default();
        if let Some(p) = path {
            let text = fs::read_to_string(p)
                .map_err(|e| CliError::config(format!("cannot read {}: {e}", p.display())))?;
            cfg.apply_file(&text, p)?;
        }
        if let Some(p) = &overrides.unsw_csv {
            cfg.unsw_csv = Some(p.clone());
        }
        if let Some(p) = &overrides.kdd_csv {
            cfg.kdd_csv = Some(p.clone());
        }
        if let Some(seed) = overrides.seed {
            cfg.seed = seed;
        }
        if let Some(n) = overrides.sample_per_dataset {
            cfg.sample_per_dataset = n;
        }
        if let Some(scope) = overrides.smote_scope {
            cfg.smote_scope = scope;
        }
        if overrides.fixed_params {
            cfg.fixed_params = true;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_file(&mut self, text: &str, path: &Path) -> Result<(), CliError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |why: &str| {
                CliError::config(format!(
                    "{}:{}: {why}: {line}",
                    path.display(),
                    lineno + 1
                ))
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad("expected key = value"))?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "unsw_csv" => self.unsw_csv = Some(PathBuf::from(value)),
                "kdd_csv" => self.kdd_csv = Some(PathBuf::from(value)),
                "unsw_has_header" => self.unsw_has_header = parse_bool(value).ok_or_else(|| bad("expected true or false"))?,
                "kdd_has_header" => self.kdd_has_header = parse_bool(value).ok_or_else(|| bad("expected true or false"))?,
                "seed" => self.seed = value.parse().map_err(|_| bad("expected an unsigned integer"))?,
                "train_fraction" => self.train_fraction = value.parse().map_err(|_| bad("expected a number"))?,
                "sample_per_dataset" => self.sample_per_dataset = value.parse().map_err(|_| bad("expected an unsigned integer"))?,
                "smote_scope" => self.smote_scope = parse_scope(value).ok_or_else(|| bad("expected train or whole"))?,
                "smote_k" => self.smote_k = value.parse().map_err(|_| bad("expected an unsigned integer"))?,
                "k_folds" => self.k_folds = value.parse().map_err(|_| bad("expected an unsigned integer"))?,
                "n_iter" => self.n_iter = value.parse().map_err(|_| bad("expected an unsigned integer"))?,
                "curve_fractions" => {
                    let mut parsed = Vec::new();
                    for part in value.split(',') {
                        parsed.push(
                            part.trim()
                                .parse::<f64>()
                                .map_err(|_| bad("expected comma-separated numbers"))?,
                        );
                    }
                    self.curve_fractions = parsed;
                }
                "models" => {
                    let mut parsed = Vec::new();
                    for part in value.split(',') {
                        parsed.push(
                            parse_model_kind(part.trim())
                                .ok_or_else(|| bad("expected tree, forest, gbm, or logreg"))?,
                        );
                    }
                    self.models = parsed;
                }
                "fixed_params" => self.fixed_params = parse_bool(value).ok_or_else(|| bad("expected true or false"))?,
                _ => return Err(bad("unknown key")),
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), CliError> {
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(CliError::config(format!(
                "train_fraction must be strictly between 0 and 1, got {}",
                self.train_fraction
            )));
        }
        if self.smote_k == 0 {
            return Err(CliError::config("smote_k must be at least 1"));
        }
        if self.k_folds < 2 {
            return Err(CliError::config("k_folds must be at least 2"));
        }
        if self.n_iter == 0 {
            return Err(CliError::config("n_iter must be at least 1"));
        }
        if self.curve_fractions.is_empty() {
            return Err(CliError::config("curve_fractions must not be empty"));
        }
        for pair in self.curve_fractions.windows(2) {
            if pair[1] <= pair[0] {
                return Err(CliError::config(
                    "curve_fractions must be strictly ascending",
                ));
            }
        }
        for &f in &self.curve_fractions {
            if !(f > 0.0 && f < 1.0) {
                return Err(CliError::config(format!(
                    "curve fraction {f} is outside (0, 1)"
                )));
            }
        }
        if self.models.is_empty() {
            return Err(CliError::config("models must not be empty"));
        }
        for (i, kind) in self.models.iter().enumerate() {
            if self.models[..i].contains(kind) {
                return Err(CliError::config(format!("model {kind} listed twice")));
            }
        }
        Ok(())
    }

    /// Both input paths, or an error naming the missing key.
    pub fn input_paths(&self) -> Result<(&Path, &Path), CliError> {
        let unsw = self
            .unsw_csv
            .as_deref()
            .ok_or_else(|| CliError::config("unsw_csv is not set"))?;
        let kdd = self
            .kdd_csv
            .as_deref()
            .ok_or_else(|| CliError::config("kdd_csv is not set"))?;
        Ok((unsw, kdd))
    }
}

impl fmt::Display for Config {
    /// The effective settings, one `key = value` line each, in file-key
    /// order. Parsing this text back yields the same configuration.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = |p: &Option<PathBuf>| match p {
            Some(p) => p.display().to_string(),
            None => String::from("(unset)"),
        };
        writeln!(f, "unsw_csv = {}", path(&self.unsw_csv))?;
        writeln!(f, "kdd_csv = {}", path(&self.kdd_csv))?;
        writeln!(f, "unsw_has_header = {}", self.unsw_has_header)?;
        writeln!(f, "kdd_has_header = {}", self.kdd_has_header)?;
        writeln!(f, "seed = {}", self.seed)?;
        writeln!(f, "train_fraction = {}", self.train_fraction)?;
        writeln!(f, "sample_per_dataset = {}", self.sample_per_dataset)?;
        let scope = match self.smote_scope {
            SmoteScope::TrainOnly => "train",
            SmoteScope::Whole => "whole",
        };
        writeln!(f, "smote_scope = {scope}")?;
        writeln!(f, "smote_k = {}", self.smote_k)?;
        writeln!(f, "k_folds = {}", self.k_folds)?;
        writeln!(f, "n_iter = {}", self.n_iter)?;
        let fractions: Vec<String> = self.curve_fractions.iter().map(f64::to_string).collect();
        writeln!(f, "curve_fractions = {}", fractions.join(","))?;
        let models: Vec<&str> = self.models.iter().map(|m| m.as_str()).collect();
        writeln!(f, "models = {}", models.join(","))?;
        writeln!(f, "fixed_params = {}", self.fixed_params)
    }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" => Some(true),
        "false" => Some(false),
        _ => None,
    }
}

pub fn parse_scope(s: &str) -> Option<SmoteScope> {
    match s {
        "train" => Some(SmoteScope::TrainOnly),
        "whole" => Some(SmoteScope::Whole),
        _ => None,
    }
}

pub fn parse_model_kind(s: &str) -> Option<ModelKind> {
    match s {
        "tree" => Some(ModelKind::Tree),
        "forest" => Some(ModelKind::Forest),
        "gbm" => Some(ModelKind::Gbm),
        "logreg" => Some(ModelKind::LogReg),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn load_text(text: &str) -> Result<Config, CliError> {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(text.as_bytes()).unwrap();
        Config::load(Some(file.path()), &Overrides::default())
    }

    #[test]
    fn defaults_stand_without_a_file() {
        let cfg = Config::load(None, &Overrides::default()).unwrap();
        assert_eq!(cfg, Config::default());
    }

    #[test]
    fn file_keys_comments_and_blanks_parse() {
        let cfg = load_text(
            "# run inputs\n\
             unsw_csv = data/unsw.csv\n\
             \n\
             kdd_csv = data/kdd.csv\n\
             seed = 7\n\
             smote_scope = whole\n\
             curve_fractions = 0.05, 0.1\n\
             models = gbm,logreg\n",
        )
        .unwrap();
        assert_eq!(cfg.unsw_csv.as_deref(), Some(Path::new("data/unsw.csv")));
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.smote_scope, SmoteScope::Whole);
        assert_eq!(cfg.curve_fractions, vec![0.05, 0.1]);
        assert_eq!(cfg.models, vec![ModelKind::Gbm, ModelKind::LogReg]);
        assert!(cfg.kdd_has_header);
    }

    #[test]
    fn unknown_key_is_rejected_with_location() {
        let err = load_text("sample_size = 5\n").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains(":1: unknown key"), "{err}");
    }

    #[test]
    fn bad_values_are_rejected() {
        assert!(load_text("train_fraction = 1.0\n").is_err());
        assert!(load_text("train_fraction = nope\n").is_err());
        assert!(load_text("k_folds = 1\n").is_err());
        assert!(load_text("smote_k = 0\n").is_err());
        assert!(load_text("models = forest,forest\n").is_err());
        assert!(load_text("curve_fractions = 0.1,0.05\n").is_err());
        assert!(load_text("smote_scope = both\n").is_err());
    }

    #[test]
    fn overrides_beat_the_file() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(b"seed = 1\nsample_per_dataset = 100\n").unwrap();
        let over = Overrides {
            seed: Some(9),
            smote_scope: Some(SmoteScope::Whole),
            fixed_params: true,
            ..Overrides::default()
        };
        let cfg = Config::load(Some(file.path()), &over).unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.sample_per_dataset, 100);
        assert_eq!(cfg.smote_scope, SmoteScope::Whole);
        assert!(cfg.fixed_params);
    }

    #[test]
    fn display_round_trips_through_the_parser() {
        let cfg = Config {
            unsw_csv: Some(PathBuf::from("u.csv")),
            kdd_csv: Some(PathBuf::from("k.csv")),
            seed: 42,
            models: vec![ModelKind::Tree, ModelKind::Gbm],
            ..Config::default()
        };
        let text = cfg.to_string();
        let reparsed = load_text(&text).unwrap();
        assert_eq!(reparsed, cfg);
    }

    #[test]
    fn missing_input_paths_name_the_key() {
        let cfg = Config::default();
        let err = cfg.input_paths().unwrap_err();
        assert!(err.to_string().contains("unsw_csv"));
    }
}
