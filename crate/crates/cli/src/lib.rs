//! Experiment driver behind the `pfsim` binary. Each experiment returns a
//! serializable report; `run` writes it under the output directory together
//! with a manifest.

pub mod experiments;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub use experiments::{run_braid, run_compile, run_kcbs, run_noise_sweeps, run_tomo, run_witness_table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Braid,
    Noise,
    Kcbs,
    Witness,
    Tomo,
    Compile,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Braid => "braid",
            Experiment::Noise => "noise",
            Experiment::Kcbs => "kcbs",
            Experiment::Witness => "witness",
            Experiment::Tomo => "tomo",
            Experiment::Compile => "compile",
        }
    }

    /// Whether the experiment draws Poisson counts.
    pub fn stochastic(self) -> bool {
        matches!(self, Experiment::Braid | Experiment::Noise | Experiment::Kcbs | Experiment::Tomo)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

pub const DEFAULT_SHOTS: u64 = 1_000_000;
pub const DEFAULT_GRID_STEP: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub seed: Option<u64>,
    pub shots: u64,
    pub grid_step: f64,
    pub resamples: usize,
    pub out: PathBuf,
    pub format: Format,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment, out: impl Into<PathBuf>) -> Self {
        Self {
            experiment,
            seed: None,
            shots: DEFAULT_SHOTS,
            grid_step: DEFAULT_GRID_STEP,
            resamples: parafermion::tomography::DEFAULT_RESAMPLES,
            out: out.into(),
            format: Format::Json,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.experiment.stochastic() && self.seed.is_none() {
            return Err(CliError::Config(format!(
                "experiment '{}' samples counts and needs --seed",
                self.experiment.name()
            )));
        }
        if self.shots == 0 {
            return Err(CliError::Config("--shots must be positive".into()));
        }
        if !(self.grid_step.is_finite() && self.grid_step > 0.0 && self.grid_step <= 1.0) {
            return Err(CliError::Config(format!("--grid-step {} outside (0, 1]", self.grid_step)));
        }
        if self.resamples < 2 {
            return Err(CliError::Config("--resamples must be at least 2".into()));
        }
        Ok(())
    }

    /// Seed, for experiments that passed validation.
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}

/// Independent seed for sub-stream `k` of a run.
pub fn derive_seed(seed: u64, k: u64) -> u64 {
    seed.wrapping_add(k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] parafermion::Error),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("serialization error: {0}")]
    Serialize(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } | CliError::Serialize(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Exact numerics.
    Analytic,
    /// Derived from simulated Poisson counts.
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report<T> {
    pub tool: String,
    pub version: String,
    pub experiment: Experiment,
    pub config: ExperimentConfig,
    pub seed: Option<u64>,
    /// Provenance of each reported quantity, keyed by field name.
    pub provenance: BTreeMap<String, Provenance>,
    pub data: T,
}

impl<T> Report<T> {
    pub fn new(config: &ExperimentConfig, provenance: &[(&str, Provenance)], data: T) -> Self {
        Self {
            tool: "pfsim".into(),
            version: parafermion::VERSION.into(),
            experiment: config.experiment,
            config: config.clone(),
            seed: config.seed,
            provenance: provenance.iter().map(|(k, p)| (k.to_string(), *p)).collect(),
            data,
        }
    }
}

/// A file to be written under the output directory.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputFile {
    pub name: String,
    pub contents: Vec<u8>,
}

impl OutputFile {
    pub fn json<T: Serialize>(name: impl Into<String>, value: &T) -> Result<Self, CliError> {
        let mut contents = serde_json::to_vec_pretty(value).map_err(|e| CliError::Serialize(e.to_string()))?;
        contents.push(b'\n');
        Ok(Self {
            name: name.into(),
            contents,
        })
    }

    pub fn csv<R: Serialize>(name: impl Into<String>, rows: &[R]) -> Result<Self, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            w.serialize(r).map_err(|e| CliError::Serialize(e.to_string()))?;
        }
        Self::from_csv_writer(name, w)
    }

    /// Rows given as raw records after a header.
    pub fn csv_records(name: impl Into<String>, header: &[String], rows: &[Vec<String>]) -> Result<Self, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).map_err(|e| CliError::Serialize(e.to_string()))?;
        for r in rows {
            w.write_record(r).map_err(|e| CliError::Serialize(e.to_string()))?;
        }
        Self::from_csv_writer(name, w)
    }

    fn from_csv_writer(name: impl Into<String>, w: csv::Writer<Vec<u8>>) -> Result<Self, CliError> {
        let contents = w.into_inner().map_err(|e| CliError::Serialize(e.to_string()))?;
        Ok(Self {
            name: name.into(),
            contents,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub bytes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    /// Files of the most recent run of each experiment.
    pub runs: BTreeMap<Experiment, ManifestRun>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRun {
    pub seed: Option<u64>,
    pub format: Format,
    pub files: Vec<ManifestEntry>,
}

pub const MANIFEST_NAME: &str = "manifest.json";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Write the files and merge this run into the directory's manifest.
pub fn write_outputs(config: &ExperimentConfig, files: &[OutputFile]) -> Result<Manifest, CliError> {
    fs::create_dir_all(&config.out).map_err(io_err(&config.out))?;
    for f in files {
        let path = config.out.join(&f.name);
        fs::write(&path, &f.contents).map_err(io_err(&path))?;
    }
    let mpath = config.out.join(MANIFEST_NAME);
    let mut manifest = match fs::read(&mpath) {
        Ok(bytes) => serde_json::from_slice::<Manifest>(&bytes).unwrap_or_default(),
        Err(_) => Manifest::default(),
    };
    manifest.tool = "pfsim".into();
    manifest.version = parafermion::VERSION.into();
    manifest.runs.insert(
        config.experiment,
        ManifestRun {
            seed: config.seed,
            format: config.format,
            files: files
                .iter()
                .map(|f| ManifestEntry {
                    name: f.name.clone(),
                    bytes: f.contents.len(),
                })
                .collect(),
        },
    );
    let m = OutputFile::json(MANIFEST_NAME, &manifest)?;
    fs::write(&mpath, &m.contents).map_err(io_err(&mpath))?;
    Ok(manifest)
}

/// Validate, run, and write one experiment.
pub fn run(config: &ExperimentConfig) -> Result<Vec<OutputFile>, CliError> {
    config.validate()?;
    let files = match config.experiment {
        Experiment::Braid => run_braid(config)?.files(config.format)?,
        Experiment::Noise => run_noise_sweeps(config)?.files(config.format)?,
        Experiment::Kcbs => run_kcbs(config)?.files(config.format)?,
        Experiment::Witness => run_witness_table(config)?.files(config.format)?,
        Experiment::Tomo => run_tomo(config)?.files(config.format)?,
        Experiment::Compile => run_compile(config)?.files(config.format)?,
    };
    write_outputs(config, &files)?;
    Ok(files)
}
