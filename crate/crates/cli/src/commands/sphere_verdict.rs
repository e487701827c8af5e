use std::path::PathBuf;

use charkern::json::SchoenbergJson;
use charkern::sphere::SphereVerdict;
use clap::Args;
use serde::Serialize;

use crate::commands::{parse_class, parse_tail};
use crate::errors::CliResult;
use crate::io::{print_json, read_json};
use crate::table;

#[derive(Args)]
pub struct SphereVerdictArgs {
    /// Sphere dimension; overrides the value in the coefficient file.
    #[arg(long)]
    d: Option<usize>,

    /// Coefficient file: {"d": 2, "b": [...], "tail": "zero" | "positive"}.
    #[arg(long)]
    coeffs: PathBuf,

    /// Tail declaration, "zero" or "positive"; overrides the file.
    #[arg(long)]
    tail: Option<String>,

    /// Declared membership class: "psi-d+2" or "psi-d+1-strict".
    #[arg(long)]
    class: Option<String>,
}

#[derive(Serialize)]
struct SphereVerdictReport {
    d: usize,
    n_max: usize,
    #[serde(flatten)]
    verdict: SphereVerdict,
    b: Vec<f64>,
}

pub fn run(args: SphereVerdictArgs, json: bool) -> CliResult<()> {
    let dto: SchoenbergJson = read_json(&args.coeffs)?;
    let tail = args.tail.as_deref().map(parse_tail).transpose()?;
    let class = args.class.as_deref().map(parse_class).transpose()?;
    let kernel = dto.to_kernel(args.d, tail)?;
    let verdict = kernel.sphere_verdict(class);
    let report = SphereVerdictReport {
        d: kernel.d(),
        n_max: kernel.n_max(),
        verdict,
        b: kernel.coeffs().to_vec(),
    };
    if json {
        print_json(&report)?;
    } else {
        print_table(&report);
    }
    Ok(())
}

fn print_table(report: &SphereVerdictReport) {
    println!("sphere: S^{}  coefficients: {}", report.d, report.b.len());
    let v = &report.verdict;
    let rows = vec![
        vec![
            "characteristic".to_string(),
            v.verdict.characteristic.to_string(),
        ],
        vec!["universal".to_string(), v.verdict.universal.to_string()],
        vec!["strictly_pd".to_string(), v.strictly_pd.to_string()],
        vec!["condition_b".to_string(), v.condition_b.to_string()],
    ];
    print!("{}", table::render(&["property", "verdict"], &rows));
    for reason in &v.verdict.reasons {
        println!("reason: {reason}");
    }
}
