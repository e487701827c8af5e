//! Serde DTOs for the file formats consumed and produced by the CLI.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::KernelSpec;
use crate::measure::{Density, DiscreteSpace, SignedMeasure};
use crate::spectral::MercerExpansion;
use crate::sphere::{SchoenbergKernel, Tail};

/// `{"points": [...], "nu": [...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpaceJson {
    pub points: Vec<String>,
    pub nu: Vec<f64>,
}

impl SpaceJson {
    pub fn to_space(&self) -> Result<DiscreteSpace> {
        DiscreteSpace::new(self.points.clone(), self.nu.clone())
    }

    pub fn from_space(space: &DiscreteSpace) -> Self {
        Self {
            points: space.points().to_vec(),
            nu: space.nu().to_vec(),
        }
    }
}

/// `{"points": [...], "nu": [...], "mass": [...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeasureJson {
    pub points: Vec<String>,
    pub nu: Vec<f64>,
    pub mass: Vec<f64>,
}

impl MeasureJson {
    pub fn to_measure(&self) -> Result<SignedMeasure> {
        let space = DiscreteSpace::new(self.points.clone(), self.nu.clone())?;
        SignedMeasure::new(space, self.mass.clone())
    }

    pub fn from_measure(mu: &SignedMeasure) -> Self {
        Self {
            points: mu.space().points().to_vec(),
            nu: mu.space().nu().to_vec(),
            mass: mu.mass().to_vec(),
        }
    }

    pub fn from_density(h: &Density) -> Self {
        Self::from_measure(&h.to_measure())
    }
}

/// `{"space": {...}, "gram": [[...]]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KernelJson {
    pub space: SpaceJson,
    pub gram: Vec<Vec<f64>>,
}

impl KernelJson {
    pub fn to_kernel(&self) -> Result<KernelSpec> {
        KernelSpec::from_rows(self.space.to_space()?, &self.gram)
    }

    pub fn from_kernel(kernel: &KernelSpec) -> Self {
        let n = kernel.space().len();
        let gram = (0..n)
            .map(|i| (0..n).map(|j| kernel.gram()[(i, j)]).collect())
            .collect();
        Self {
            space: SpaceJson::from_space(kernel.space()),
            gram,
        }
    }
}

/// `{"lambdas": [...], "eigfuncs": [[...]], "index_of_one": i}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumJson {
    pub lambdas: Vec<f64>,
    pub eigfuncs: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index_of_one: Option<usize>,
}

impl SpectrumJson {
    pub fn from_expansion(m: &MercerExpansion) -> Self {
        Self {
            lambdas: m.lambdas().to_vec(),
            eigfuncs: m.eigfuncs().to_vec(),
            index_of_one: m.index_of_one(),
        }
    }
}

/// `{"d": 2, "b": [...], "tail": "zero" | "positive", "basis": ...}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SchoenbergJson {
    pub d: Option<usize>,
    pub b: Vec<f64>,
    pub tail: Option<String>,
    /// "gegenbauer" (default) or "power".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<String>,
}

impl SchoenbergJson {
    pub fn to_kernel(
        &self,
        d_override: Option<usize>,
        tail_override: Option<Tail>,
    ) -> Result<SchoenbergKernel> {
        let d = d_override
            .or(self.d)
            .ok_or_else(|| Error::InvalidParameter("sphere dimension missing".into()))?;
        let tail = match tail_override {
            Some(t) => t,
            None => match self.tail.as_deref() {
                Some("zero") => Tail::Zero,
                Some("positive") => Tail::Positive,
                Some(other) => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown tail {other:?}, expected \"zero\" or \"positive\""
                    )))
                }
                None => {
                    return Err(Error::InvalidParameter(
                        "tail descriptor missing (\"zero\" or \"positive\")".into(),
                    ))
                }
            },
        };
        match self.basis.as_deref() {
            None | Some("gegenbauer") => SchoenbergKernel::from_coeffs(d, self.b.clone(), tail),
            Some("power") => SchoenbergKernel::from_power_coeffs(d, self.b.clone(), tail),
            Some(other) => Err(Error::InvalidParameter(format!(
                "unknown basis {other:?}, expected \"gegenbauer\" or \"power\""
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measure_round_trip() {
        let text = r#"{"points":["a","b"],"nu":[0.5,0.5],"mass":[0.25,0.75]}"#;
        let dto: MeasureJson = serde_json::from_str(text).unwrap();
        let mu = dto.to_measure().unwrap();
        assert!(mu.is_probability());
        let back = serde_json::to_string(&MeasureJson::from_measure(&mu)).unwrap();
        let dto2: MeasureJson = serde_json::from_str(&back).unwrap();
        assert_eq!(dto2.mass, vec![0.25, 0.75]);
    }

    #[test]
    fn kernel_round_trip() {
        let text =
            r#"{"space":{"points":["0","1"],"nu":[0.5,0.5]},"gram":[[1.5,0.5],[0.5,1.5]]}"#;
        let dto: KernelJson = serde_json::from_str(text).unwrap();
        let k = dto.to_kernel().unwrap();
        assert_eq!(k.gram()[(0, 1)], 0.5);
        let dto2 = KernelJson::from_kernel(&k);
        assert_eq!(dto2.gram[1][1], 1.5);
    }

    #[test]
    fn schoenberg_parsing_with_overrides() {
        let text = r#"{"d":2,"b":[0.5,0.3],"tail":"positive"}"#;
        let dto: SchoenbergJson = serde_json::from_str(text).unwrap();
        let sk = dto.to_kernel(None, None).unwrap();
        assert_eq!(sk.d(), 2);
        assert_eq!(sk.tail(), Tail::Positive);
        let sk1 = dto.to_kernel(Some(1), Some(Tail::Zero)).unwrap();
        assert_eq!(sk1.d(), 1);
        assert_eq!(sk1.tail(), Tail::Zero);
    }

    #[test]
    fn schoenberg_rejects_missing_tail() {
        let text = r#"{"d":2,"b":[0.5,0.3]}"#;
        let dto: SchoenbergJson = serde_json::from_str(text).unwrap();
        assert!(dto.to_kernel(None, None).is_err());
    }
}
