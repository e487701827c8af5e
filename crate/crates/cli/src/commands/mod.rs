pub mod counterexample;
pub mod group_verdict;
pub mod score;
pub mod sphere_embed;
pub mod sphere_verdict;
pub mod spectrum;
pub mod verdict;

use crate::errors::{CliError, CliResult};
use charkern::sphere::{PsiClass, Tail};

pub fn parse_tail(text: &str) -> CliResult<Tail> {
    match text {
        "zero" => Ok(Tail::Zero),
        "positive" => Ok(Tail::Positive),
        other => Err(CliError::Usage(format!(
            "unknown tail {other:?}: expected \"zero\" or \"positive\""
        ))),
    }
}

pub fn parse_class(text: &str) -> CliResult<PsiClass> {
    match text {
        "psi-d+2" => Ok(PsiClass::DPlus2),
        "psi-d+1-strict" | "psi-d+1+" => Ok(PsiClass::DPlus1Strict),
        other => Err(CliError::Usage(format!(
            "unknown class {other:?}: expected \"psi-d+2\" or \"psi-d+1-strict\""
        ))),
    }
}
