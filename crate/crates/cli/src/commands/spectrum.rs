use std::path::PathBuf;

use charkern::json::{KernelJson, SpectrumJson};
use charkern::mercer_decompose;
use clap::Args;

use crate::errors::CliResult;
use crate::io::{print_json, read_json};
use crate::table;

#[derive(Args)]
pub struct SpectrumArgs {
    /// Kernel file: {"space": {...}, "gram": [[...]]}.
    #[arg(long)]
    kernel: PathBuf,
}

pub fn run(args: SpectrumArgs, json: bool) -> CliResult<()> {
    let kernel = read_json::<KernelJson>(&args.kernel)?.to_kernel()?;
    let expansion = mercer_decompose(&kernel)?;
    let dump = SpectrumJson::from_expansion(&expansion);
    if json {
        print_json(&dump)?;
    } else {
        let rows: Vec<Vec<String>> = dump
            .lambdas
            .iter()
            .enumerate()
            .map(|(i, l)| {
                vec![
                    i.to_string(),
                    format!("{l:.6e}"),
                    if dump.index_of_one == Some(i) {
                        "constant".to_string()
                    } else {
                        String::new()
                    },
                ]
            })
            .collect();
        print!("{}", table::render(&["i", "lambda", "note"], &rows));
    }
    Ok(())
}
