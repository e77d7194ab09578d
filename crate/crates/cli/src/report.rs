use fermient::bipartition::BlockDim;
use fermient::entanglement::{Robustness, Verdict};
use fermient::metrology::QfiReport;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisReport {
    pub n: usize,
    pub modes: usize,
    pub m: usize,
    pub sectors: Vec<BlockDim>,
    pub total: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockRow {
    pub k: usize,
    pub weight: f64,
    pub first_dim: usize,
    pub second_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub max_degree: usize,
    pub operator: String,
    pub value: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BipartitionAnalysis {
    pub m: usize,
    /// Modes placed in the first partition, 1-based.
    pub first_modes: Vec<usize>,
    pub verdict: Verdict,
    pub negativity: f64,
    pub robustness: Robustness,
    pub witness: Option<WitnessReport>,
    pub eta_norm: f64,
    pub blocks: Vec<BlockRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub input: serde_json::Value,
    pub n: usize,
    pub modes: usize,
    pub analyses: Vec<BipartitionAnalysis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_seconds: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QfiOutput {
    Single(QfiReport),
    Sweep(Vec<QfiReport>),
}
