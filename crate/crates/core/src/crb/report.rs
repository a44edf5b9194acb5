use serde::{Deserialize, Serialize};

use crate::crb::terms::IntermediateTerms;

/// How a bound was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CrbMethod {
    /// Inversion of the full 4x4 Fisher information.
    ExactFim,
    /// Reduced phase-only formula over discrete gradient sums.
    DiscreteSum,
    /// Large-array closed form.
    ClosedForm,
    /// Limit of the closed form.
    Asymptotic,
}

impl CrbMethod {
    /// CLI / CSV spelling.
    pub fn as_str(self) -> &'static str {
        match self {
            CrbMethod::ExactFim => "fim",
            CrbMethod::DiscreteSum => "sum",
            CrbMethod::ClosedForm => "closed",
            CrbMethod::Asymptotic => "asymptotic",
        }
    }
}

impl std::str::FromStr for CrbMethod {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fim" => Ok(CrbMethod::ExactFim),
            "sum" => Ok(CrbMethod::DiscreteSum),
            "closed" => Ok(CrbMethod::ClosedForm),
            "asymptotic" => Ok(CrbMethod::Asymptotic),
            other => Err(crate::Error::InvalidConfig(format!("unknown method `{other}`"))),
        }
    }
}

/// Angle and distance bounds, in rad^2 and m^2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrbReport {
    pub crb_theta: f64,
    pub crb_r: f64,
    pub method: CrbMethod,
    pub terms: Option<IntermediateTerms>,
    /// Fisher information over `[theta, r, Re beta, Im beta]`.
    pub fim: Option<[[f64; 4]; 4]>,
}

impl CrbReport {
    pub fn new(crb_theta: f64, crb_r: f64, method: CrbMethod) -> Self {
        Self { crb_theta, crb_r, method, terms: None, fim: None }
    }
}
