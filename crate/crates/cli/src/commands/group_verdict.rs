use std::path::PathBuf;

use charkern::group::{coeffs_from_kernel, kernel_from_coeffs, GroupSpec};
use charkern::KernelVerdict;
use clap::Args;
use serde::Serialize;

use crate::errors::{CliError, CliResult};
use crate::io::{print_json, read_json, CoeffFile};
use crate::table;

#[derive(Args)]
pub struct GroupVerdictArgs {
    /// Group moduli, e.g. 2,2,6.
    #[arg(long, value_delimiter = ',', required = true)]
    moduli: Vec<u32>,

    /// Coefficient file (λ_i per flat dual index).
    #[arg(long, conflicts_with = "kappa")]
    coeffs: Option<PathBuf>,

    /// Per-element kernel values κ; coefficients are recovered by transform.
    #[arg(long)]
    kappa: Option<PathBuf>,
}

#[derive(Serialize)]
struct GroupVerdictReport {
    moduli: Vec<u32>,
    is_kernel: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    negative_coefficients: Option<Vec<(usize, f64)>>,
    lambda: Vec<f64>,
    symmetrized_input: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<KernelVerdict>,
}

pub fn run(args: GroupVerdictArgs, json: bool) -> CliResult<()> {
    let group = GroupSpec::new(args.moduli.clone())?;
    let report = match (&args.coeffs, &args.kappa) {
        (Some(path), None) => from_coeffs(&group, read_json::<CoeffFile>(path)?.values())?,
        (None, Some(path)) => from_kappa(&group, read_json::<CoeffFile>(path)?.values())?,
        _ => {
            return Err(CliError::Usage(
                "provide exactly one of --coeffs or --kappa".to_string(),
            ))
        }
    };
    if json {
        print_json(&report)?;
    } else {
        print_table(&report);
    }
    Ok(())
}

fn from_coeffs(group: &GroupSpec, coeffs: Vec<f64>) -> CliResult<GroupVerdictReport> {
    let kernel = kernel_from_coeffs(group, &coeffs)?;
    if kernel.was_symmetrized() {
        eprintln!("warning: asymmetric coefficients were averaged over conjugate pairs");
    }
    Ok(GroupVerdictReport {
        moduli: group.moduli().to_vec(),
        is_kernel: true,
        negative_coefficients: None,
        lambda: kernel.coeffs().to_vec(),
        symmetrized_input: kernel.was_symmetrized(),
        verdict: Some(kernel.verdict()),
    })
}

fn from_kappa(group: &GroupSpec, kappa: Vec<f64>) -> CliResult<GroupVerdictReport> {
    let mut lambda = coeffs_from_kernel(group, &kappa)?;
    let scale = lambda.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let noise = 1e-12 * (1.0 + scale);
    let negative: Vec<(usize, f64)> = lambda
        .iter()
        .enumerate()
        .filter(|(_, &v)| v < -noise)
        .map(|(i, &v)| (i, v))
        .collect();
    if !negative.is_empty() {
        // Bochner direction: a negative transform coefficient certifies that
        // kappa is not positive definite. Reported, not an error.
        return Ok(GroupVerdictReport {
            moduli: group.moduli().to_vec(),
            is_kernel: false,
            negative_coefficients: Some(negative),
            lambda,
            symmetrized_input: false,
            verdict: None,
        });
    }
    for v in &mut lambda {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    from_coeffs(group, lambda)
}

fn print_table(report: &GroupVerdictReport) {
    println!("moduli: {:?}", report.moduli);
    if !report.is_kernel {
        println!("is_kernel: no");
        if let Some(neg) = &report.negative_coefficients {
            for (i, v) in neg {
                println!("negative coefficient at flat index {i}: {v:.6e}");
            }
        }
        return;
    }
    if report.symmetrized_input {
        println!("note: coefficients were symmetrized over conjugate pairs");
    }
    if let Some(v) = &report.verdict {
        let rows = vec![
            vec!["characteristic".to_string(), v.characteristic.to_string()],
            vec!["universal".to_string(), v.universal.to_string()],
            vec!["sipd_on_m".to_string(), v.sipd_on_m.to_string()],
        ];
        print!("{}", table::render(&["property", "verdict"], &rows));
        for reason in &v.reasons {
            println!("reason: {reason}");
        }
    }
}
