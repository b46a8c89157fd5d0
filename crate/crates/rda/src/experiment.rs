//! The benchmark runs: load, binarize, encode, split, train, score.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rda_core::data::{self, Dataset, LabelEncoding, RawRecord};
use rda_core::learn::{
    accuracy, build_eval, build_pseudo_linear, initial_params, make_schedule, rda, Init, ParamModel, TrainConfig,
    Trajectory,
};

use crate::io::{load_iris_csv, load_mnist_idx, mnist_paths, LoadError};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_TEST_FRACTION: f64 = 0.2;
pub const IRIS_CLASSES: [&str; 3] = ["Iris-setosa", "Iris-versicolor", "Iris-virginica"];
pub const MNIST_IMAGE_BITS: usize = 28 * 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Setosa vs. Versicolor with the table model.
    Iris2,
    /// All three Iris classes with the table model.
    Iris3,
    /// MNIST digits 0 and 1 with the masked-overlap model.
    Mnist01,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Iris2, Preset::Iris3, Preset::Mnist01];

    pub fn default_epochs(self) -> usize {
        match self {
            Preset::Iris2 | Preset::Iris3 => 16,
            Preset::Mnist01 => 1,
        }
    }

    pub fn model_name(self) -> &'static str {
        match self {
            Preset::Iris2 | Preset::Iris3 => "eval",
            Preset::Mnist01 => "pseudoLinear",
        }
    }

    fn classes(self) -> Vec<&'static str> {
        match self {
            Preset::Iris2 => IRIS_CLASSES[..2].to_vec(),
            Preset::Iris3 => IRIS_CLASSES.to_vec(),
            Preset::Mnist01 => vec!["0", "1"],
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preset::Iris2 => "iris2",
            Preset::Iris3 => "iris3",
            Preset::Mnist01 => "mnist01",
        })
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Preset::ALL
            .into_iter()
            .find(|p| p.to_string() == s)
            .ok_or_else(|| format!("unknown dataset `{s}` (expected iris2, iris3 or mnist01)"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub preset: Preset,
    pub encoding: LabelEncoding,
    pub epochs: usize,
    pub seed: u64,
    pub shuffle: bool,
    /// Draw the starting parameters at random (seeded by `seed`) instead of
    /// starting from all zeros.
    pub random_init: bool,
    /// Held-out share of the Iris records. MNIST uses its own test file.
    pub test_fraction: f64,
    /// Train on only the first `n` MNIST examples of the selected digits.
    pub subsample: Option<usize>,
    pub iris_path: PathBuf,
    pub mnist_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn new(preset: Preset, encoding: LabelEncoding) -> Self {
        ExperimentConfig {
            preset,
            encoding,
            epochs: preset.default_epochs(),
            seed: DEFAULT_SEED,
            shuffle: true,
            random_init: false,
            test_fraction: DEFAULT_TEST_FRACTION,
            subsample: None,
            iris_path: PathBuf::from("data/iris.data"),
            mnist_dir: PathBuf::from("data/mnist"),
        }
    }

    fn train_config(&self) -> TrainConfig {
        TrainConfig {
            epochs: self.epochs,
            seed: self.seed,
            shuffle: self.shuffle,
        }
    }

    /// Rejects bad settings without touching the data files.
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |msg: String| Err(ExperimentError::Config(msg));
        if self.epochs == 0 {
            return bad("epochs must be at least 1".into());
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return bad(format!("test fraction {} is not in (0, 1)", self.test_fraction));
        }
        if self.subsample == Some(0) {
            return bad("subsample must be at least 1".into());
        }
        Ok(())
    }

    /// Data files the run will read.
    pub fn required_files(&self) -> Vec<PathBuf> {
        match self.preset {
            Preset::Iris2 | Preset::Iris3 => vec![self.iris_path.clone()],
            Preset::Mnist01 => mnist_paths(&self.mnist_dir)
                .into_iter()
                .flat_map(|(i, l)| [i, l])
                .collect(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("missing data file {}", .0.display())]
    MissingData(PathBuf),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Core(#[from] rda_core::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub dataset: String,
    pub model: String,
    pub encoding: LabelEncoding,
    pub train_acc: f64,
    pub test_acc: f64,
    pub epochs: usize,
    pub seed: u64,
    pub seconds: f64,
}

pub const REPORT_HEADER: &str = "dataset\tmodel\tencoding\ttrain_acc\ttest_acc\tepochs\tseed\tseconds";

impl ExperimentReport {
    pub fn tsv_row(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.3}",
            self.dataset,
            self.model,
            self.encoding,
            self.train_acc,
            self.test_acc,
            self.epochs,
            self.seed,
            self.seconds
        )
    }

    pub fn to_tsv(&self) -> String {
        format!("{REPORT_HEADER}\n{}\n", self.tsv_row())
    }
}

/// A finished run: the report, the model signature and every parameter
/// vector visited.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: ExperimentReport,
    pub signature: String,
    pub trajectory: Trajectory,
}

impl Outcome {
    /// One line: dataset, model signature, encoding, test accuracy.
    pub fn summary(&self) -> String {
        format!(
            "{}\t{}\t{}\t{:.1}%",
            self.report.dataset,
            self.signature,
            self.report.encoding,
            100.0 * self.report.test_acc
        )
    }
}

pub fn run(cfg: &ExperimentConfig) -> Result<Outcome, ExperimentError> {
    cfg.validate()?;
    if let Some(missing) = cfg.required_files().into_iter().find(|p| !p.is_file()) {
        return Err(ExperimentError::MissingData(missing));
    }
    let start = Instant::now();
    let (model, train, test) = match cfg.preset {
        Preset::Iris2 | Preset::Iris3 => prepare_iris(cfg)?,
        Preset::Mnist01 => prepare_mnist(cfg)?,
    };
    let schedule = make_schedule(&train, &cfg.train_config())?;
    let init = if cfg.random_init {
        Init::Random(cfg.seed)
    } else {
        Init::Zeros
    };
    let trajectory = rda(&model, &initial_params(model.p(), init), &schedule)?;
    let theta = trajectory.final_theta();
    let report = ExperimentReport {
        dataset: cfg.preset.to_string(),
        model: cfg.preset.model_name().to_owned(),
        encoding: cfg.encoding,
        train_acc: accuracy(&model, theta, &train)?,
        test_acc: accuracy(&model, theta, &test)?,
        epochs: cfg.epochs,
        seed: cfg.seed,
        seconds: start.elapsed().as_secs_f64(),
    };
    Ok(Outcome {
        report,
        signature: format!(
            "{} : {} + {} -> {}",
            cfg.preset.model_name(),
            model.p(),
            model.a(),
            model.b()
        ),
        trajectory,
    })
}

type Prepared = (ParamModel, Dataset, Dataset);

fn prepare_iris(cfg: &ExperimentConfig) -> Result<Prepared, ExperimentError> {
    let classes = cfg.preset.classes();
    let records = data::filter_classes(&load_iris_csv(&cfg.iris_path)?, &classes);
    let (train, test) = data::split_records(&records, cfg.test_fraction, cfg.seed)?;
    // thresholds come from the training side only
    let means = data::feature_means(&train)?;
    let build = |recs: &[RawRecord]| -> Result<Dataset, ExperimentError> {
        let x = data::binarize_features(recs, &means)?;
        Ok(data::assemble(x, recs, cfg.encoding, &classes)?)
    };
    let (train, test) = (build(&train)?, build(&test)?);
    let model = build_eval(train.a, train.b)?;
    Ok((model, train, test))
}

fn prepare_mnist(cfg: &ExperimentConfig) -> Result<Prepared, ExperimentError> {
    let classes = cfg.preset.classes();
    let digits = [0u8, 1];
    let [train_paths, test_paths] = mnist_paths(&cfg.mnist_dir);
    let build = |(images, labels): &(PathBuf, PathBuf), limit| -> Result<Dataset, ExperimentError> {
        let recs = load_mnist_idx(images, labels)?.records(&digits, limit);
        let x = data::binarize_pixels(&recs)?;
        Ok(data::assemble(x, &recs, cfg.encoding, &classes)?)
    };
    let train = build(&train_paths, cfg.subsample)?;
    let test = build(&test_paths, None)?;
    let model = build_pseudo_linear(train.a)?;
    if model.b() != train.b {
        return Err(ExperimentError::Config(format!(
            "pseudoLinear has one output; {} encoding of two classes needs {}",
            cfg.encoding, train.b
        )));
    }
    Ok((model, train, test))
}

/// `flag`, else the environment variable `var`, else `default`.
pub fn resolve_path(flag: Option<PathBuf>, var: &str, default: &Path) -> PathBuf {
    flag.or_else(|| std::env::var_os(var).map(PathBuf::from))
        .unwrap_or_else(|| default.to_owned())
}
