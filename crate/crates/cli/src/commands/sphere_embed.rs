use std::path::PathBuf;

use charkern::json::SchoenbergJson;
use charkern::sphere::{pna_density, zonal_embed, SphereGrid};
use clap::Args;
use serde::Serialize;

use crate::commands::parse_tail;
use crate::errors::{CliError, CliResult};
use crate::io::{print_json, read_json};

#[derive(Args)]
pub struct SphereEmbedArgs {
    /// Coefficient file: {"d": 2, "b": [...], "tail": ..., "basis": ...}.
    #[arg(long)]
    coeffs: PathBuf,

    /// Sphere dimension override.
    #[arg(long)]
    d: Option<usize>,

    /// Tail declaration override.
    #[arg(long)]
    tail: Option<String>,

    /// Degree of the perturbation density.
    #[arg(long)]
    n: usize,

    /// Amplitude of the perturbation, in [-1, 1] without 0.
    #[arg(long)]
    a: f64,

    /// Axis of the perturbation as comma-separated coordinates.
    #[arg(long, value_delimiter = ',')]
    v0: Option<Vec<f64>>,

    /// Polar node count for S² grids.
    #[arg(long, default_value_t = 16)]
    grid_polar: usize,

    /// Azimuthal node count (S²) or total node count (S¹).
    #[arg(long, default_value_t = 48)]
    grid_azimuth: usize,
}

#[derive(Serialize)]
struct EmbedReport {
    d: usize,
    n: usize,
    a: f64,
    /// Per-degree eigenvalues of the zonal operator.
    z: Vec<f64>,
    input_blocks: Vec<Vec<f64>>,
    output_blocks: Vec<Vec<f64>>,
    /// Whether the embedded function is constant (all blocks of degree >= 1
    /// vanish below 1e-10).
    constant_embedding: bool,
}

pub fn run(args: SphereEmbedArgs, json: bool) -> CliResult<()> {
    let dto: SchoenbergJson = read_json(&args.coeffs)?;
    let tail = args.tail.as_deref().map(parse_tail).transpose()?;
    let kernel = dto.to_kernel(args.d, tail)?;
    let grid = match kernel.d() {
        1 => SphereGrid::circle(args.grid_azimuth)?,
        2 => SphereGrid::sphere(args.grid_polar, args.grid_azimuth)?,
        d => {
            return Err(CliError::Usage(format!(
                "grids exist for d in {{1, 2}}, got {d}"
            )))
        }
    };
    let v0 = args.v0.unwrap_or_else(|| {
        let mut v = vec![0.0; kernel.d() + 1];
        v[kernel.d()] = 1.0;
        v
    });
    let (_, coeffs) = pna_density(&grid, args.n, args.a, &v0)?;
    let embedded = zonal_embed(&kernel, &coeffs)?;
    let report = EmbedReport {
        d: kernel.d(),
        n: args.n,
        a: args.a,
        z: kernel.zonal_eigencoeffs(coeffs.max_degree())?,
        input_blocks: coeffs.blocks.clone(),
        output_blocks: embedded.blocks.clone(),
        constant_embedding: embedded.is_constant(1e-10),
    };
    if json {
        print_json(&report)?;
    } else {
        println!("S^{}: perturbation degree {}, amplitude {}", report.d, report.n, report.a);
        for (k, (inp, out)) in report
            .input_blocks
            .iter()
            .zip(&report.output_blocks)
            .enumerate()
        {
            let in_norm: f64 = inp.iter().map(|c| c * c).sum::<f64>().sqrt();
            let out_norm: f64 = out.iter().map(|c| c * c).sum::<f64>().sqrt();
            println!(
                "degree {k}: z = {:.6e}, |input| = {:.6e}, |output| = {:.6e}",
                report.z[k], in_norm, out_norm
            );
        }
        println!(
            "constant embedding: {}",
            if report.constant_embedding { "yes" } else { "no" }
        );
    }
    Ok(())
}
