use std::path::PathBuf;

use charkern::group::GroupSpec;
use charkern::json::KernelJson;
use charkern::{mercer_decompose, KernelSpec, KernelVerdict};
use clap::Args;
use serde::Serialize;

use crate::errors::{CliError, CliResult};
use crate::io::{print_json, read_json};
use crate::table;

#[derive(Args)]
pub struct VerdictArgs {
    /// Kernel file: {"space": {...}, "gram": [[...]]}.
    #[arg(long, conflicts_with_all = ["group", "gram"])]
    kernel: Option<PathBuf>,

    /// Cyclic group order; the kernel lives on Z_m with Haar weights.
    #[arg(long, requires = "gram")]
    group: Option<u32>,

    /// Inline Gram matrix as JSON rows, e.g. '[[1,1],[1,1]]'.
    #[arg(long, requires = "group")]
    gram: Option<String>,
}

#[derive(Serialize)]
struct VerdictReport {
    #[serde(flatten)]
    verdict: KernelVerdict,
    eigenvalues: Vec<f64>,
}

pub fn run(args: VerdictArgs, json: bool) -> CliResult<()> {
    let kernel = load_kernel(&args)?;
    let verdict = kernel.verdict();
    let eigenvalues = mercer_decompose(&kernel)?.lambdas().to_vec();
    let report = VerdictReport {
        verdict,
        eigenvalues,
    };
    if json {
        print_json(&report)?;
    } else {
        print_table(&report);
    }
    Ok(())
}

fn load_kernel(args: &VerdictArgs) -> CliResult<KernelSpec> {
    match (&args.kernel, args.group, &args.gram) {
        (Some(path), None, None) => Ok(read_json::<KernelJson>(path)?.to_kernel()?),
        (None, Some(m), Some(gram_text)) => {
            let rows: Vec<Vec<f64>> = serde_json::from_str(gram_text)
                .map_err(|e| CliError::Parse(format!("--gram: {e}")))?;
            let group = GroupSpec::new(vec![m])?;
            Ok(KernelSpec::from_rows(group.to_space(), &rows)?)
        }
        _ => Err(CliError::Usage(
            "provide either --kernel FILE or --group M --gram ROWS".to_string(),
        )),
    }
}

fn print_table(report: &VerdictReport) {
    let rows = vec![
        vec!["characteristic".to_string(), report.verdict.characteristic.to_string()],
        vec!["universal".to_string(), report.verdict.universal.to_string()],
        vec!["sipd_on_m".to_string(), report.verdict.sipd_on_m.to_string()],
    ];
    print!("{}", table::render(&["property", "verdict"], &rows));
    println!();
    for reason in &report.verdict.reasons {
        println!("reason: {reason}");
    }
    for witness in &report.verdict.witnesses {
        let cells: Vec<String> = witness.iter().map(|v| format!("{v:.4}")).collect();
        println!("witness: [{}]", cells.join(", "));
    }
    let eigen: Vec<String> = report.eigenvalues.iter().map(|l| format!("{l:.4e}")).collect();
    println!("eigenvalues: [{}]", eigen.join(", "));
}
