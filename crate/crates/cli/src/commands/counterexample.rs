//! Counterexample generation. Every emitted pair carries a verification
//! block that re-derives its claims through the Gram-matrix route,
//! independent of the spectral construction; the command exits nonzero when
//! its own output fails those checks.

use std::path::PathBuf;

use charkern::group::{kernel_from_coeffs, GroupSpec};
use charkern::json::{KernelJson, MeasureJson};
use charkern::{mercer_decompose, MercerExpansion, SignedMeasure};
use clap::Args;
use serde::Serialize;

use crate::errors::{CliError, CliResult};
use crate::io::{print_json, read_json, CoeffFile};

#[derive(Args)]
pub struct CounterexampleArgs {
    /// Construction: "near-zero", "zero-mmd", or "no-uniform".
    #[arg(long, default_value = "near-zero")]
    kind: String,

    /// Cyclic group order for the group-based constructions.
    #[arg(long)]
    group: Option<u32>,

    /// Geometric spectrum decay: eigenvalue i gets decay^i (near-zero kind).
    #[arg(long)]
    decay: Option<f64>,

    /// Target embedding distance bound (near-zero kind).
    #[arg(long)]
    eps: Option<f64>,

    /// Localized variant: keep both outputs within this TV distance of the
    /// reference distribution and exactly this far apart (near-zero kind).
    #[arg(long)]
    delta: Option<f64>,

    /// Kernel file for the zero-mmd construction.
    #[arg(long)]
    kernel: Option<PathBuf>,

    /// Exact TV distance of the emitted pair (zero-mmd kind).
    #[arg(long)]
    eps_tv: Option<f64>,

    /// Base distribution file (zero-mmd kind; defaults to normalized ν).
    #[arg(long)]
    base: Option<PathBuf>,

    /// Coefficient file for the no-uniform construction.
    #[arg(long)]
    coeffs: Option<PathBuf>,

    /// Eigenfunction index to perturb along (no-uniform kind).
    #[arg(long)]
    j: Option<usize>,
}

#[derive(Serialize)]
struct Verification {
    tv: f64,
    mmd_sq: f64,
    tv_expected: f64,
    tv_ok: bool,
    mmd_bound: f64,
    mmd_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    base_distance_ok: Option<bool>,
}

#[derive(Serialize)]
struct PairReport {
    kind: String,
    q1: MeasureJson,
    q2: MeasureJson,
    verification: Verification,
}

#[derive(Serialize)]
struct PerturbationReport {
    kind: String,
    q: MeasureJson,
    total_mass: f64,
    tv: f64,
    tv_lower: f64,
    mmd_sq: f64,
    mmd_sq_via_gram: f64,
    ok: bool,
}

pub fn run(args: CounterexampleArgs, json: bool) -> CliResult<()> {
    match args.kind.as_str() {
        "near-zero" => near_zero(args, json),
        "zero-mmd" => zero_mmd(args, json),
        "no-uniform" => no_uniform(args, json),
        other => Err(CliError::Usage(format!(
            "unknown kind {other:?}: expected near-zero, zero-mmd, or no-uniform"
        ))),
    }
}

fn geometric_expansion(order: u32, decay: f64) -> CliResult<MercerExpansion> {
    if !(decay > 0.0 && decay < 1.0) {
        return Err(CliError::Usage(format!(
            "decay must lie in (0, 1), got {decay}"
        )));
    }
    let group = GroupSpec::new(vec![order])?;
    let lambdas: Vec<f64> = (0..group.size()).map(|i| decay.powi(i as i32)).collect();
    Ok(MercerExpansion::from_parts(
        group.to_space(),
        lambdas,
        group.real_onb(),
        Some(0),
    )?)
}

fn near_zero(args: CounterexampleArgs, json: bool) -> CliResult<()> {
    let order = args
        .group
        .ok_or_else(|| CliError::Usage("near-zero requires --group".to_string()))?;
    let decay = args.decay.unwrap_or(0.5);
    let eps = args
        .eps
        .ok_or_else(|| CliError::Usage("near-zero requires --eps".to_string()))?;
    let m = geometric_expansion(order, decay)?;

    let (q1, q2, tv_expected, mmd_bound, base_ok) = match args.delta {
        None => {
            let (q1, q2) = m.near_zero_mmd_pair(eps)?;
            (q1, q2, 2.0, eps, None)
        }
        Some(delta) => {
            let base = m.space().nu_measure();
            let (q1, q2) = m.near_zero_mmd_pair_mixed(&base, delta, eps)?;
            let ok = (&base - &q1).tv_norm() <= delta + 1e-10
                && (&base - &q2).tv_norm() <= delta + 1e-10;
            (q1, q2, delta, eps, Some(ok))
        }
    };

    // Independent verification through the Gram route.
    let kernel = m.to_kernel_spec()?;
    let diff = &q1 - &q2;
    let tv = diff.tv_norm();
    let mmd_sq = kernel.mmd_sq(&diff)?;
    let verification = Verification {
        tv,
        mmd_sq,
        tv_expected,
        tv_ok: (tv - tv_expected).abs() <= 1e-10,
        mmd_bound,
        mmd_ok: mmd_sq.sqrt() <= mmd_bound,
        base_distance_ok: base_ok,
    };
    emit_pair("near-zero", q1, q2, verification, json)
}

fn zero_mmd(args: CounterexampleArgs, json: bool) -> CliResult<()> {
    let kernel_path = args
        .kernel
        .ok_or_else(|| CliError::Usage("zero-mmd requires --kernel".to_string()))?;
    let eps_tv = args
        .eps_tv
        .ok_or_else(|| CliError::Usage("zero-mmd requires --eps-tv".to_string()))?;
    let kernel = read_json::<KernelJson>(&kernel_path)?.to_kernel()?;
    let m = mercer_decompose(&kernel)?;
    let base = match &args.base {
        Some(path) => {
            let mu = read_json::<MeasureJson>(path)?.to_measure()?;
            if mu.space() != kernel.space() {
                return Err(CliError::SpaceMismatch(
                    "base measure lives on a different space".into(),
                ));
            }
            mu.to_density()?
        }
        None => {
            let nu = kernel.space().nu_measure();
            nu.scaled(1.0 / nu.total_mass()).to_density()?
        }
    };
    let (h1, h2) = m.zero_mmd_pair(&base, eps_tv)?;
    let q1 = h1.to_measure();
    let q2 = h2.to_measure();
    let diff = &q1 - &q2;
    let tv = diff.tv_norm();
    let mmd_sq = kernel.mmd_sq(&diff)?;
    let base_ok = (&base.to_measure() - &q1).tv_norm() <= eps_tv + 1e-10
        && (&base.to_measure() - &q2).tv_norm() <= eps_tv + 1e-10;
    let verification = Verification {
        tv,
        mmd_sq,
        tv_expected: eps_tv,
        tv_ok: (tv - eps_tv).abs() <= 1e-10,
        mmd_bound: 1e-12,
        mmd_ok: mmd_sq <= 1e-12,
        base_distance_ok: Some(base_ok),
    };
    emit_pair("zero-mmd", q1, q2, verification, json)
}

fn no_uniform(args: CounterexampleArgs, json: bool) -> CliResult<()> {
    let order = args
        .group
        .ok_or_else(|| CliError::Usage("no-uniform requires --group".to_string()))?;
    let coeffs_path = args
        .coeffs
        .ok_or_else(|| CliError::Usage("no-uniform requires --coeffs".to_string()))?;
    let j = args
        .j
        .ok_or_else(|| CliError::Usage("no-uniform requires --j".to_string()))?;
    let group = GroupSpec::new(vec![order])?;
    let coeffs = read_json::<CoeffFile>(&coeffs_path)?.values();
    let kernel = kernel_from_coeffs(&group, &coeffs)?;
    let m = kernel.mercer();
    let out = m.no_uniform_perturbation(j)?;

    let diff = &m.space().nu_measure() - &out.measure;
    let tv = diff.tv_norm();
    let gram = kernel.to_kernel_spec()?.mmd_sq(&diff)?;
    let ok = out.measure.is_probability()
        && tv >= out.tv_lower - 1e-12
        && (gram - out.mmd_sq).abs() <= 1e-12 * (1.0 + gram);
    let report = PerturbationReport {
        kind: "no-uniform".to_string(),
        q: MeasureJson::from_measure(&out.measure),
        total_mass: out.measure.total_mass(),
        tv,
        tv_lower: out.tv_lower,
        mmd_sq: out.mmd_sq,
        mmd_sq_via_gram: gram,
        ok,
    };
    if json {
        print_json(&report)?;
    } else {
        println!("perturbed distribution mass: {:?}", report.q.mass);
        println!(
            "total mass {:.12}  tv {:.6} (lower bound {:.6})  mmd_sq {:.6e} (gram {:.6e})",
            report.total_mass, report.tv, report.tv_lower, report.mmd_sq, report.mmd_sq_via_gram
        );
        println!("self-verification: {}", if report.ok { "pass" } else { "FAIL" });
    }
    if !report.ok {
        return Err(CliError::SelfVerification(
            "no-uniform output failed its own checks".to_string(),
        ));
    }
    Ok(())
}

fn emit_pair(
    kind: &str,
    q1: SignedMeasure,
    q2: SignedMeasure,
    verification: Verification,
    json: bool,
) -> CliResult<()> {
    let ok = verification.tv_ok
        && verification.mmd_ok
        && verification.base_distance_ok.unwrap_or(true);
    let report = PairReport {
        kind: kind.to_string(),
        q1: MeasureJson::from_measure(&q1),
        q2: MeasureJson::from_measure(&q2),
        verification,
    };
    if json {
        print_json(&report)?;
    } else {
        println!("kind: {}", report.kind);
        println!("q1 mass: {:?}", report.q1.mass);
        println!("q2 mass: {:?}", report.q2.mass);
        println!(
            "tv {:.12} (expected {})  mmd_sq {:.6e} (bound sqrt: {})",
            report.verification.tv,
            report.verification.tv_expected,
            report.verification.mmd_sq,
            report.verification.mmd_bound
        );
        println!("self-verification: {}", if ok { "pass" } else { "FAIL" });
    }
    if !ok {
        return Err(CliError::SelfVerification(format!(
            "{kind} output failed its own checks"
        )));
    }
    Ok(())
}
