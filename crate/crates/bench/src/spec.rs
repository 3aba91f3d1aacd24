//! Experiment descriptions, presets, and the flat config-file format.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};
use dsm_core::linalg::SpectralFactors;
use dsm_core::problems::{fredholm_a, fredholm_b, hilbert_problem, ProblemInstance};
use dsm_core::schemes::SchemeConfig;
use dsm_core::vr::VrConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    Hilbert,
    FredholmA,
    FredholmB,
}

impl ProblemKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProblemKind::Hilbert => "hilbert",
            ProblemKind::FredholmA => "fredholm-a",
            ProblemKind::FredholmB => "fredholm-b",
        }
    }

    pub fn instance(&self, m: usize) -> Result<ProblemInstance> {
        let inst = match self {
            ProblemKind::Hilbert => hilbert_problem(m)?,
            ProblemKind::FredholmA => fredholm_a(m)?,
            ProblemKind::FredholmB => fredholm_b(m)?,
        };
        Ok(inst)
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemKind {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hilbert" => Ok(ProblemKind::Hilbert),
            "fredholm-a" => Ok(ProblemKind::FredholmA),
            "fredholm-b" => Ok(ProblemKind::FredholmB),
            _ => Err(BenchError::Spec(format!("unknown problem {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Is1,
    Is2,
    Vr,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Is1, Method::Is2, Method::Vr];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Is1 => "is1",
            Method::Is2 => "is2",
            Method::Vr => "vr",
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Method::Is1 => "IS1",
            Method::Is2 => "IS2",
            Method::Vr => "VR",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "is1" => Ok(Method::Is1),
            "is2" => Ok(Method::Is2),
            "vr" => Ok(Method::Vr),
            _ => Err(BenchError::Spec(format!("unknown method {s:?}"))),
        }
    }
}

/// One batch of runs on a single problem instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub problem: ProblemKind,
    pub m: usize,
    pub deltas: Vec<f64>,
    pub q: f64,
    pub alpha0: f64,
    pub c_is1: f64,
    pub c_is2: f64,
    pub c_vr: f64,
    pub eps: f64,
    pub seeds: Vec<u64>,
    pub methods: Vec<Method>,
    /// Values used by the q sweep; ignored by plain runs.
    pub q_values: Vec<f64>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            problem: ProblemKind::Hilbert,
            m: 200,
            deltas: vec![0.01],
            q: 0.25,
            alpha0: 1.0,
            c_is1: 1.01,
            c_is2: 1.01,
            c_vr: 1.01,
            eps: 0.99,
            seeds: vec![dsm_core::problems::DEFAULT_SEED],
            methods: Method::ALL.to_vec(),
            q_values: vec![0.5, 0.25, 0.125],
        }
    }
}

pub const PRESETS: [&str; 6] = ["table2", "table3", "table4", "table5", "table6", "table7"];

impl ExperimentSpec {
    /// Named benchmark settings. Even-numbered presets are q
    /// sweeps at `delta = 0.01`; odd-numbered ones vary the noise level.
    pub fn preset(name: &str) -> Result<Self> {
        let noise_levels = vec![0.05, 0.03, 0.01];
        let spec = match name {
            "table2" => Self {
                methods: vec![Method::Is1, Method::Is2],
                ..Self::default()
            },
            "table3" => Self {
                deltas: noise_levels,
                ..Self::default()
            },
            "table4" | "table5" => Self {
                problem: ProblemKind::FredholmA,
                m: 600,
                alpha0: 2.0,
                c_is1: 2.0,
                ..Self::default()
            },
            "table6" | "table7" => Self {
                problem: ProblemKind::FredholmB,
                alpha0: 4.0,
                ..Self::default()
            },
            _ => {
                return Err(BenchError::Spec(format!(
                    "unknown preset {name:?}; expected one of {}",
                    PRESETS.join(", ")
                )))
            }
        };
        Ok(match name {
            "table4" | "table6" => Self {
                methods: vec![Method::Is1, Method::Is2],
                ..spec
            },
            "table5" | "table7" => Self {
                deltas: vec![0.05, 0.03, 0.01],
                ..spec
            },
            _ => spec,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.deltas.is_empty() || self.seeds.is_empty() || self.methods.is_empty() {
            return Err(BenchError::Spec(
                "deltas, seeds and methods must be non-empty".into(),
            ));
        }
        let min_m = if self.problem == ProblemKind::Hilbert {
            1
        } else {
            2
        };
        if self.m < min_m {
            return Err(BenchError::Spec(format!(
                "dimension {} too small for {}",
                self.m, self.problem
            )));
        }
        if let Some(d) = self.deltas.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
            return Err(BenchError::Spec(format!(
                "noise level must be positive, got {d}"
            )));
        }
        if let Some(q) = self.q_values.iter().find(|q| !(**q > 0.0 && **q < 1.0)) {
            return Err(BenchError::Spec(format!(
                "sweep value q = {q} outside (0, 1)"
            )));
        }
        for method in &self.methods {
            match method {
                Method::Vr => self.vr_config(self.deltas[0]).validate()?,
                _ => self
                    .scheme_config(*method, self.q, self.deltas[0])
                    .validate()?,
            }
        }
        Ok(())
    }

    pub fn c_for(&self, method: Method) -> f64 {
        match method {
            Method::Is1 => self.c_is1,
            Method::Is2 => self.c_is2,
            Method::Vr => self.c_vr,
        }
    }

    pub fn scheme_config(&self, method: Method, q: f64, delta: f64) -> SchemeConfig {
        SchemeConfig {
            q,
            alpha0: self.alpha0,
            c: self.c_for(method),
            eps: self.eps,
            delta,
            ..Default::default()
        }
    }

    pub fn vr_config(&self, delta: f64) -> VrConfig {
        VrConfig {
            alpha0: self.alpha0,
            c: self.c_vr,
            delta,
            ..Default::default()
        }
    }
}

/// Problem instance together with its factorization, built once per batch.
pub struct PreparedProblem {
    pub instance: ProblemInstance,
    pub factors: SpectralFactors,
}

impl PreparedProblem {
    pub fn new(kind: ProblemKind, m: usize) -> Result<Self> {
        let instance = kind.instance(m)?;
        let factors = dsm_core::linalg::svd(&instance.a)?;
        Ok(Self { instance, factors })
    }
}

/// Contents of a config file: `key = value` lines named after the
/// [`ExperimentSpec`] fields, plus an optional `preset` used as the base.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub preset: Option<String>,
    pub problem: Option<ProblemKind>,
    pub m: Option<usize>,
    pub deltas: Option<Vec<f64>>,
    pub q: Option<f64>,
    pub alpha0: Option<f64>,
    pub c_is1: Option<f64>,
    pub c_is2: Option<f64>,
    pub c_vr: Option<f64>,
    pub eps: Option<f64>,
    pub seeds: Option<Vec<u64>>,
    pub methods: Option<Vec<Method>>,
    pub q_values: Option<Vec<f64>>,
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    /// Overlay the fields present in the file onto `base`.
    pub fn apply(self, base: ExperimentSpec) -> ExperimentSpec {
        ExperimentSpec {
            problem: self.problem.unwrap_or(base.problem),
            m: self.m.unwrap_or(base.m),
            deltas: self.deltas.unwrap_or(base.deltas),
            q: self.q.unwrap_or(base.q),
            alpha0: self.alpha0.unwrap_or(base.alpha0),
            c_is1: self.c_is1.unwrap_or(base.c_is1),
            c_is2: self.c_is2.unwrap_or(base.c_is2),
            c_vr: self.c_vr.unwrap_or(base.c_vr),
            eps: self.eps.unwrap_or(base.eps),
            seeds: self.seeds.unwrap_or(base.seeds),
            methods: self.methods.unwrap_or(base.methods),
            q_values: self.q_values.unwrap_or(base.q_values),
        }
    }
}
