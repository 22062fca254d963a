use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::features::Scheme;
use crate::model::TrainConfig;
use crate::patterns::{SweepGrid, ThresholdParams};
use crate::{Error, Result};

/// Every pipeline option. Loaded from a TOML file of top-level keys; the
/// command line overrides individual keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub corpus: Option<PathBuf>,
    pub pretagged: Option<PathBuf>,
    /// Unset lexicon paths fall back to the bundled files.
    pub frames: Option<PathBuf>,
    pub dict: Option<PathBuf>,
    pub gazetteer: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub train_n: Option<usize>,
    pub test_n: Option<usize>,
    pub dev_fraction: f64,
    pub sweep_on_test: bool,
    pub theta_f: Vec<u64>,
    pub theta_p: Vec<f64>,
    pub lambda: f64,
    pub epochs: usize,
    pub schemes: Vec<String>,
    pub rank_k: usize,
    pub queries: Vec<String>,
    pub report_theta_f: u64,
    pub report_theta_p: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let grid = SweepGrid::default();
        let train = TrainConfig::default();
        PipelineConfig {
            corpus: None,
            pretagged: None,
            frames: None,
            dict: None,
            gazetteer: None,
            out_dir: PathBuf::from("wellbeing-out"),
            seed: 7,
            train_n: None,
            test_n: None,
            dev_fraction: 0.15,
            sweep_on_test: false,
            theta_f: grid.theta_f,
            theta_p: grid.theta_p,
            lambda: train.lambda,
            epochs: train.epochs,
            schemes: Scheme::presets().into_iter().map(|(n, _)| n).collect(),
            rank_k: 20,
            queries: vec!["with".into(), "talk".into(), "go|went".into()],
            report_theta_f: 1,
            report_theta_p: 0.7,
        }
    }
}

/// Train and test sizes in the proportions of a 2868 / 478 split of 9570 posts.
pub fn default_split_sizes(labeled: usize) -> (usize, usize) {
    let train = (labeled as f64 * 2868.0 / 9570.0).round() as usize;
    let test = (labeled as f64 * 478.0 / 9570.0).round() as usize;
    (train, test.min(labeled - train.min(labeled)))
}

impl PipelineConfig {
    pub fn from_toml_str(content: &str, source: &str) -> Result<PipelineConfig> {
        toml::from_str(content).map_err(|e| Error::Config(format!("{source}: {}", e.message())))
    }

    pub fn load(path: &Path) -> Result<PipelineConfig> {
        let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        PipelineConfig::from_toml_str(&content, &path.display().to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Checks value ranges and that every configured input path exists.
    pub fn validate(&self) -> Result<()> {
        let paths = [
            ("--corpus", &self.corpus),
            ("--pretagged", &self.pretagged),
            ("--frames", &self.frames),
            ("--dict", &self.dict),
            ("--gazetteer", &self.gazetteer),
        ];
        for (flag, path) in paths {
            if let Some(p) = path {
                if !p.is_file() {
                    return Err(Error::Config(format!("{flag}: {} does not exist", p.display())));
                }
            }
        }
        if !(0.0..1.0).contains(&self.dev_fraction) {
            return Err(Error::Config(format!("--dev-fraction {} must lie in [0, 1)", self.dev_fraction)));
        }
        self.grid().cells()?;
        self.train_config().validate()?;
        self.scheme_list()?;
        ThresholdParams::new(self.report_theta_f, self.report_theta_p)?;
        Ok(())
    }

    pub fn grid(&self) -> SweepGrid {
        SweepGrid {
            theta_f: self.theta_f.clone(),
            theta_p: self.theta_p.clone(),
        }
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            lambda: self.lambda,
            epochs: self.epochs,
            seed: self.seed,
        }
    }

    pub fn scheme_list(&self) -> Result<Vec<Scheme>> {
        if self.schemes.is_empty() {
            return Err(Error::Config("--schemes names no feature scheme".into()));
        }
        let mut out: Vec<Scheme> = Vec::new();
        for name in &self.schemes {
            let s: Scheme = name.parse().map_err(|e: String| Error::Config(format!("--schemes: {e}")))?;
            if !out.contains(&s) {
                out.push(s);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip_and_partial_files() {
        let cfg = PipelineConfig::default();
        assert_eq!(PipelineConfig::from_toml_str(&cfg.to_toml(), "x").unwrap(), cfg);
        let partial = PipelineConfig::from_toml_str("seed = 3\nschemes = [\"Unigram\"]\n", "x").unwrap();
        assert_eq!(partial.seed, 3);
        assert_eq!(partial.scheme_list().unwrap(), [Scheme::Unigram]);
        assert_eq!(partial.lambda, cfg.lambda);
        assert!(PipelineConfig::from_toml_str("sede = 3\n", "x").is_err());
    }

    #[test]
    fn missing_path_names_flag() {
        let cfg = PipelineConfig {
            frames: Some("/nonexistent/frames.tsv".into()),
            ..PipelineConfig::default()
        };
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains("--frames"), "{msg}");
    }

    #[test]
    fn split_sizes_keep_reference_proportions() {
        assert_eq!(default_split_sizes(9570), (2868, 478));
        assert_eq!(default_split_sizes(200), (60, 10));
        assert_eq!(default_split_sizes(0), (0, 0));
    }

    #[test]
    fn bad_values() {
        for cfg in [
            PipelineConfig { lambda: -1.0, ..PipelineConfig::default() },
            PipelineConfig { dev_fraction: 1.0, ..PipelineConfig::default() },
            PipelineConfig { schemes: vec!["nope".into()], ..PipelineConfig::default() },
            PipelineConfig { theta_f: vec![], ..PipelineConfig::default() },
        ] {
            assert!(matches!(cfg.validate(), Err(Error::Config(_))), "{cfg:?}");
        }
    }
}
