use std::fmt;
use std::path::{Path, PathBuf};

use hdbf_core::power::{drift_hu, drift_proposed};
use hdbf_core::sim::presets::{parse_preset, Preset};
use hdbf_core::sim::{estimator_bias_study, parse_config, BiasConfig, Innovation, SimConfig};
use hdbf_core::{
    are as are_ratio, power_hu, power_proposed, read_csv, run_tests, solve_are_roots, statistic_t,
    statistic_tch, CovarianceSummary, DesignSpec, Error, Matrix, Method, PopulationSpec,
};
use serde::{Deserialize, Serialize};

use crate::output::{csv, json, opt};
use crate::{Format, MethodArg};

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Internal(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Internal(e.to_string())
        }
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn methods(arg: MethodArg) -> Vec<Method> {
    match arg {
        MethodArg::T1 => vec![Method::T1Hat],
        MethodArg::T2 => vec![Method::T2Hat],
        MethodArg::Th => vec![Method::THHat],
        MethodArg::All => Method::ALL.to_vec(),
    }
}

#[derive(Serialize)]
#[serde(untagged)]
enum TestRecord {
    Done(hdbf_core::TestResult),
    Failed {
        method: Method,
        /// The statistic itself needs no variance estimate.
        statistic: Option<f64>,
        error: String,
    },
}

/// Rendered records plus the error to exit with when no method succeeded.
pub struct TestOutput {
    pub text: String,
    pub failure: Option<CliError>,
}

pub fn test(
    input: &Path,
    method: MethodArg,
    alpha: f64,
    format: Format,
) -> Result<TestOutput, CliError> {
    let text = read_input(input)?;
    let data = read_csv(text.as_bytes())?;
    let requested = methods(method);
    let results = run_tests(&data, &requested, alpha)?;
    let failure = match results.first() {
        Some(Err(e)) if results.iter().all(Result::is_err) => Some(CliError::from(e.clone())),
        _ => None,
    };
    let records: Vec<TestRecord> = requested
        .iter()
        .zip(results)
        .map(|(&method, r)| match r {
            Ok(r) => TestRecord::Done(r),
            Err(e) => TestRecord::Failed {
                method,
                statistic: match method {
                    Method::THHat => statistic_tch(&data),
                    _ => statistic_t(&data),
                }
                .ok(),
                error: e.to_string(),
            },
        })
        .collect();
    let text = match format {
        Format::Json => json(&records)?,
        Format::Csv => csv(
            &[
                "method",
                "statistic",
                "sigma",
                "z",
                "p_value",
                "alpha",
                "reject",
                "error",
            ],
            records.iter().map(|rec| match rec {
                TestRecord::Done(r) => vec![
                    r.method.to_string(),
                    r.statistic.to_string(),
                    r.sigma.to_string(),
                    r.z.to_string(),
                    r.p_value.to_string(),
                    r.alpha.to_string(),
                    r.reject.to_string(),
                    String::new(),
                ],
                TestRecord::Failed {
                    method,
                    statistic,
                    error,
                } => {
                    let mut row = vec![method.to_string(), opt(*statistic)];
                    row.extend(std::iter::repeat_n(String::new(), 5));
                    // commas would split the cell
                    row.push(error.replace(',', ";"));
                    row
                }
            }),
        ),
    };
    Ok(TestOutput { text, failure })
}

pub enum Source {
    File(PathBuf),
    Preset(String),
}

pub struct Overrides {
    pub reps: Option<usize>,
    pub seed: Option<u64>,
    pub alpha: Option<f64>,
    pub method: Option<MethodArg>,
}

#[derive(Serialize)]
struct SimulationReport<'a> {
    preset: Option<&'a str>,
    /// Rates reported for the preset's table cell, `t1, t2, th`.
    reference: Option<[f64; 3]>,
    config: &'a SimConfig,
    result: &'a hdbf_core::MonteCarloResult,
}

pub fn simulate(source: Source, o: Overrides, format: Format) -> Result<String, CliError> {
    let (mut config, preset) = match source {
        Source::File(path) => (parse_config(&read_input(&path)?)?, None),
        Source::Preset(name) => match parse_preset(&name)?.with_run(o.reps, o.seed) {
            Preset::Simulation {
                name,
                config,
                reference,
            } => (config, Some((name, reference))),
            Preset::Bias { .. } => {
                return Err(CliError::Input(format!(
                    "`{name}` is a bias preset; use `hdbf bias --preset`"
                )))
            }
        },
    };
    if preset.is_none() {
        if let Some(r) = o.reps {
            config.replications = r;
        }
        if let Some(s) = o.seed {
            config.seed = s;
        }
    }
    if let Some(a) = o.alpha {
        config.alpha = a;
    }
    if let Some(m) = o.method {
        config.methods = methods(m);
    }
    let result = hdbf_core::run_monte_carlo(&config)?;
    match format {
        Format::Csv => Ok(result.to_csv()),
        Format::Json => json(&SimulationReport {
            preset: preset.as_ref().map(|p| p.0.as_str()),
            reference: preset.as_ref().map(|p| p.1),
            config: &config,
            result: &result,
        }),
    }
}

#[derive(Deserialize, Debug)]
#[serde(rename_all = "snake_case")]
enum CovarianceInput {
    /// `k x k` matrix of `tr(Sigma_l Sigma_s)`.
    Traces(Vec<Vec<f64>>),
    Explicit(Vec<Vec<Vec<f64>>>),
    /// `tr(Sigma^2)` of a covariance shared by all groups.
    Common(f64),
}

#[derive(Deserialize, Debug)]
#[serde(deny_unknown_fields)]
struct PowerSpecFile {
    lambdas: Option<Vec<f64>>,
    sizes: Option<Vec<usize>>,
    /// Defaults to the sum of `sizes`.
    n: Option<f64>,
    means: Vec<Vec<f64>>,
    covariance: CovarianceInput,
    #[serde(default)]
    alpha: Option<f64>,
}

#[derive(Serialize)]
struct PowerRow {
    alpha: f64,
    power_proposed: f64,
    power_hu: f64,
    drift_proposed: f64,
    drift_hu: f64,
    /// Only defined for a common covariance.
    are: Option<f64>,
}

fn matrix(rows: &[Vec<f64>]) -> Result<Matrix, CliError> {
    Ok(Matrix::from_rows(rows)?)
}

pub fn power(input: &Path, alpha: Option<f64>, format: Format) -> Result<String, CliError> {
    let spec: PowerSpecFile = serde_json::from_str(&read_input(input)?)
        .map_err(|e| CliError::Input(format!("power spec {}: {e}", input.display())))?;
    let design = match (&spec.lambdas, &spec.sizes) {
        (Some(l), None) => DesignSpec::new(l.clone())?,
        (None, Some(s)) => DesignSpec::from_sizes(s)?,
        _ => {
            return Err(CliError::Input(
                "give exactly one of `lambdas` and `sizes`".into(),
            ))
        }
    };
    let n = spec
        .n
        .or_else(|| spec.sizes.as_ref().map(|s| s.iter().sum::<usize>() as f64))
        .ok_or_else(|| CliError::Input("`n` is required when `lambdas` is given".into()))?;
    let covariance = match &spec.covariance {
        CovarianceInput::Traces(t) => CovarianceSummary::Traces { cross: matrix(t)? },
        CovarianceInput::Explicit(c) => {
            CovarianceSummary::Explicit(c.iter().map(|m| matrix(m)).collect::<Result<_, _>>()?)
        }
        CovarianceInput::Common(tr) => CovarianceSummary::homogeneous(design.k(), *tr),
    };
    let pop = PopulationSpec {
        means: spec.means,
        covariance,
        n,
    };
    let alpha = alpha.or(spec.alpha).unwrap_or(0.05);
    let are = if pop.covariance.is_homogeneous() {
        match are_ratio(&design, &pop) {
            Ok(r) => Some(r),
            Err(Error::ZeroSignal) => None,
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    let row = PowerRow {
        alpha,
        power_proposed: power_proposed(&design, &pop, alpha)?,
        power_hu: power_hu(&design, &pop, alpha)?,
        drift_proposed: drift_proposed(&design, &pop)?,
        drift_hu: drift_hu(&design, &pop)?,
        are,
    };
    match format {
        Format::Json => json(&row),
        Format::Csv => Ok(csv(
            &[
                "alpha",
                "power_proposed",
                "power_hu",
                "drift_proposed",
                "drift_hu",
                "are",
            ],
            [vec![
                row.alpha.to_string(),
                row.power_proposed.to_string(),
                row.power_hu.to_string(),
                row.drift_proposed.to_string(),
                row.drift_hu.to_string(),
                opt(row.are),
            ]],
        )),
    }
}

pub fn are(tau: f64, format: Format) -> Result<String, CliError> {
    let curve = solve_are_roots(tau)?;
    match format {
        Format::Json => json(&curve),
        Format::Csv => {
            let points = curve
                .grid
                .iter()
                .map(|(x, v)| vec![x.to_string(), v.to_string()]);
            let roots = curve
                .roots
                .iter()
                .map(|r| vec!["root".to_string(), r.to_string()]);
            Ok(csv(&["lambda3", "are"], points.chain(roots)))
        }
    }
}

pub enum BiasSource {
    Preset(String),
    Direct {
        p: usize,
        n1: usize,
        innovation: Option<String>,
    },
}

#[derive(Serialize)]
struct BiasReport {
    preset: Option<String>,
    reference: Option<hdbf_core::sim::presets::BiasReference>,
    result: hdbf_core::BiasStudyResult,
}

pub fn bias(
    source: BiasSource,
    reps: Option<usize>,
    seed: Option<u64>,
    format: Format,
) -> Result<String, CliError> {
    let (config, preset, reference) = match source {
        BiasSource::Preset(name) => match parse_preset(&name)?.with_run(reps, seed) {
            Preset::Bias {
                name,
                config,
                reference,
            } => (config, Some(name), Some(reference)),
            Preset::Simulation { .. } => {
                return Err(CliError::Input(format!(
                    "`{name}` is a simulation preset; use `hdbf simulate --preset`"
                )))
            }
        },
        BiasSource::Direct { p, n1, innovation } => {
            let mut cfg = BiasConfig::new(
                p,
                n1,
                reps.unwrap_or(hdbf_core::sim::presets::DEFAULT_REPLICATIONS),
                seed.unwrap_or(hdbf_core::sim::presets::DEFAULT_SEED),
            );
            if let Some(i) = innovation {
                cfg.innovation = i.parse::<Innovation>()?;
            }
            (cfg, None, None)
        }
    };
    let result = estimator_bias_study(&config)?;
    match format {
        Format::Json => json(&BiasReport {
            preset,
            reference,
            result,
        }),
        Format::Csv => {
            let r = &result;
            Ok(csv(
                &[
                    "p",
                    "n1",
                    "R",
                    "seed",
                    "exact_trace",
                    "split_mean",
                    "split_sd",
                    "plug_in_mean",
                    "plug_in_sd",
                    "reference_trace",
                    "split_vs_reference",
                    "plug_in_vs_reference",
                ],
                [vec![
                    r.p.to_string(),
                    r.n1.to_string(),
                    r.replications.to_string(),
                    r.seed.to_string(),
                    r.exact_trace.to_string(),
                    r.split.mean.to_string(),
                    r.split.sd.to_string(),
                    r.plug_in.mean.to_string(),
                    r.plug_in.sd.to_string(),
                    opt(r.reference_trace),
                    opt(r.split_vs_reference.map(|s| s.mean)),
                    opt(r.plug_in_vs_reference.map(|s| s.mean)),
                ]],
            ))
        }
    }
}
