use std::path::PathBuf;

use charkern::json::{KernelJson, MeasureJson};
use charkern::{KernelSpec, SignedMeasure};
use clap::Args;
use rand::distr::weighted::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::errors::{CliError, CliResult};
use crate::io::{print_json, read_json, ForecastFile};
use crate::table;

#[derive(Args)]
pub struct ScoreArgs {
    /// Kernel file: {"space": {...}, "gram": [[...]]}.
    #[arg(long)]
    kernel: PathBuf,

    /// Forecast records, or a single forecast measure with --simulate.
    #[arg(long)]
    forecasts: PathBuf,

    /// Second forecaster for paired comparison.
    #[arg(long)]
    compare: Option<PathBuf>,

    /// Monte Carlo mode: sample this many observations from --truth.
    #[arg(long)]
    simulate: Option<usize>,

    /// Distribution generating observations in Monte Carlo mode.
    #[arg(long)]
    truth: Option<PathBuf>,

    /// RNG seed for Monte Carlo scoring.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Serialize)]
struct ScoredRecord {
    index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<String>,
    observation: String,
    score: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    score_b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diff: Option<f64>,
    /// Diagnostic: half the squared kernel mean distance between the paired
    /// forecasts, the expected score gap when observations follow the first.
    #[serde(skip_serializing_if = "Option::is_none")]
    half_mmd_sq: Option<f64>,
}

#[derive(Serialize)]
struct ScoreSummary {
    records: usize,
    mean_score: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    mean_score_b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mean_diff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mean_half_mmd_sq: Option<f64>,
}

#[derive(Serialize)]
struct ScoreReport {
    records: Vec<ScoredRecord>,
    summary: ScoreSummary,
}

struct Inputs {
    kernel: KernelSpec,
    observations: Vec<String>,
    ids: Vec<Option<String>>,
    timestamps: Vec<Option<String>>,
    forecasts: Vec<SignedMeasure>,
    forecasts_b: Option<Vec<SignedMeasure>>,
}

pub fn run(args: ScoreArgs, json: bool) -> CliResult<()> {
    let inputs = load(&args)?;
    let report = score(&inputs)?;
    if json {
        print_json(&report)?;
    } else {
        print_table(&report);
    }
    Ok(())
}

fn load(args: &ScoreArgs) -> CliResult<Inputs> {
    let kernel = read_json::<KernelJson>(&args.kernel)?.to_kernel()?;
    if let Some(n) = args.simulate {
        let truth_path = args.truth.as_ref().ok_or_else(|| {
            CliError::Usage("--simulate requires --truth".to_string())
        })?;
        let truth = measure_on(&kernel, read_json::<MeasureJson>(truth_path)?)?;
        if !truth.is_probability() {
            return Err(CliError::Usage("truth must be a probability measure".into()));
        }
        let forecast = measure_on(&kernel, read_json::<MeasureJson>(&args.forecasts)?)?;
        let forecast_b = args
            .compare
            .as_ref()
            .map(|p| read_json::<MeasureJson>(p).and_then(|m| measure_on(&kernel, m)))
            .transpose()?;

        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let weights = WeightedIndex::new(truth.mass().iter().map(|w| w.max(0.0)))
            .map_err(|e| CliError::Usage(format!("cannot sample from truth: {e}")))?;
        let points = kernel.space().points();
        let observations: Vec<String> = (0..n)
            .map(|_| points[weights.sample(&mut rng)].clone())
            .collect();
        let forecasts = vec![forecast; n];
        let forecasts_b = forecast_b.map(|f| vec![f; n]);
        Ok(Inputs {
            kernel,
            ids: vec![None; n],
            timestamps: vec![None; n],
            observations,
            forecasts,
            forecasts_b,
        })
    } else {
        let file: ForecastFile = read_json(&args.forecasts)?;
        let (observations, ids, timestamps, forecasts) = records_on(&kernel, &file)?;
        let forecasts_b = match &args.compare {
            Some(path) => {
                let other: ForecastFile = read_json(path)?;
                let (_, _, _, fb) = records_on(&kernel, &other)?;
                if fb.len() != forecasts.len() {
                    return Err(CliError::Usage(format!(
                        "paired comparison needs equal record counts ({} vs {})",
                        forecasts.len(),
                        fb.len()
                    )));
                }
                Some(fb)
            }
            None => None,
        };
        Ok(Inputs {
            kernel,
            observations,
            ids,
            timestamps,
            forecasts,
            forecasts_b,
        })
    }
}

fn measure_on(kernel: &KernelSpec, dto: MeasureJson) -> CliResult<SignedMeasure> {
    let mu = dto.to_measure()?;
    if mu.space() != kernel.space() {
        return Err(CliError::SpaceMismatch(
            "measure space differs from the kernel's space".into(),
        ));
    }
    Ok(mu)
}

type Records = (
    Vec<String>,
    Vec<Option<String>>,
    Vec<Option<String>>,
    Vec<SignedMeasure>,
);

fn records_on(kernel: &KernelSpec, file: &ForecastFile) -> CliResult<Records> {
    if let Some(space) = &file.space {
        let declared = space.to_space()?;
        if &declared != kernel.space() {
            return Err(CliError::SpaceMismatch(
                "forecast file space differs from the kernel's space".into(),
            ));
        }
    }
    let space = kernel.space();
    let mut observations = Vec::with_capacity(file.records.len());
    let mut ids = Vec::with_capacity(file.records.len());
    let mut timestamps = Vec::with_capacity(file.records.len());
    let mut forecasts = Vec::with_capacity(file.records.len());
    for (i, record) in file.records.iter().enumerate() {
        let mass = match (&record.mass, &record.density) {
            (Some(mass), None) => mass.clone(),
            (None, Some(density)) => {
                if density.len() != space.len() {
                    return Err(CliError::SpaceMismatch(format!(
                        "record {i}: density length differs from the space"
                    )));
                }
                density.iter().zip(space.nu()).map(|(h, w)| h * w).collect()
            }
            _ => {
                return Err(CliError::Parse(format!(
                    "record {i}: provide exactly one of \"mass\" or \"density\""
                )))
            }
        };
        if mass.len() != space.len() {
            return Err(CliError::SpaceMismatch(format!(
                "record {i}: mass length differs from the space"
            )));
        }
        forecasts.push(SignedMeasure::new(space.clone(), mass)?);
        observations.push(record.observation.clone());
        ids.push(record.id.clone());
        timestamps.push(record.timestamp.clone());
    }
    Ok((observations, ids, timestamps, forecasts))
}

fn score(inputs: &Inputs) -> CliResult<ScoreReport> {
    let kernel = &inputs.kernel;
    let rows: Result<Vec<ScoredRecord>, charkern::Error> = (0..inputs.forecasts.len())
        .into_par_iter()
        .map(|i| {
            let forecast = &inputs.forecasts[i];
            let observation = &inputs.observations[i];
            let score = kernel.kernel_score(forecast, observation)?;
            let (score_b, diff, half_mmd_sq) = match &inputs.forecasts_b {
                Some(fb) => {
                    let sb = kernel.kernel_score(&fb[i], observation)?;
                    let half = 0.5 * kernel.mmd_sq(&(forecast - &fb[i]))?;
                    (Some(sb), Some(sb - score), Some(half))
                }
                None => (None, None, None),
            };
            Ok(ScoredRecord {
                index: i,
                id: inputs.ids[i].clone(),
                timestamp: inputs.timestamps[i].clone(),
                observation: observation.clone(),
                score,
                score_b,
                diff,
                half_mmd_sq,
            })
        })
        .collect();
    let records = rows.map_err(|e| match e {
        charkern::Error::PointNotFound(p) => {
            CliError::SpaceMismatch(format!("observation {p:?} is not in the kernel's space"))
        }
        other => CliError::from(other),
    })?;

    let n = records.len().max(1) as f64;
    let mean_score = records.iter().map(|r| r.score).sum::<f64>() / n;
    let summary = if inputs.forecasts_b.is_some() {
        ScoreSummary {
            records: records.len(),
            mean_score,
            mean_score_b: Some(records.iter().filter_map(|r| r.score_b).sum::<f64>() / n),
            mean_diff: Some(records.iter().filter_map(|r| r.diff).sum::<f64>() / n),
            mean_half_mmd_sq: Some(
                records.iter().filter_map(|r| r.half_mmd_sq).sum::<f64>() / n,
            ),
        }
    } else {
        ScoreSummary {
            records: records.len(),
            mean_score,
            mean_score_b: None,
            mean_diff: None,
            mean_half_mmd_sq: None,
        }
    };
    Ok(ScoreReport { records, summary })
}

fn print_table(report: &ScoreReport) {
    let paired = report.summary.mean_score_b.is_some();
    let headers: Vec<&str> = if paired {
        vec!["#", "id", "obs", "score", "score_b", "diff", "half_mmd_sq"]
    } else {
        vec!["#", "id", "obs", "score"]
    };
    let rows: Vec<Vec<String>> = report
        .records
        .iter()
        .map(|r| {
            let mut row = vec![
                r.index.to_string(),
                r.id.clone().unwrap_or_default(),
                r.observation.clone(),
                format!("{:.6}", r.score),
            ];
            if paired {
                row.push(format!("{:.6}", r.score_b.unwrap_or(f64::NAN)));
                row.push(format!("{:.6}", r.diff.unwrap_or(f64::NAN)));
                row.push(format!("{:.6e}", r.half_mmd_sq.unwrap_or(f64::NAN)));
            }
            row
        })
        .collect();
    print!("{}", table::render(&headers, &rows));
    println!();
    println!(
        "records: {}  mean score: {:.6}",
        report.summary.records, report.summary.mean_score
    );
    if let (Some(mb), Some(md), Some(mh)) = (
        report.summary.mean_score_b,
        report.summary.mean_diff,
        report.summary.mean_half_mmd_sq,
    ) {
        println!(
            "mean score (B): {mb:.6}  mean diff: {md:.6}  mean half mmd^2: {mh:.6e}"
        );
    }
}
