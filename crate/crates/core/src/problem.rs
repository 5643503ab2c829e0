//! Problem identity, domain bounds and the evaluatable problem type.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bbob::BbobInstance;
use crate::error::{Error, Result};
use crate::treegen::GeneratedProblem;

/// Lower and upper end of the shared search domain.
pub const DOMAIN: (f64, f64) = (-5.0, 5.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SetLabel {
    #[serde(rename = "COCO")]
    Coco,
    #[serde(rename = "GENERATED")]
    Generated,
}

impl SetLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            SetLabel::Coco => "COCO",
            SetLabel::Generated => "GENERATED",
        }
    }

    /// Lowercase form used in file names.
    pub fn file_stem(self) -> &'static str {
        match self {
            SetLabel::Coco => "coco",
            SetLabel::Generated => "generated",
        }
    }
}

impl fmt::Display for SetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SetLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "COCO" | "coco" => Ok(SetLabel::Coco),
            "GENERATED" | "generated" => Ok(SetLabel::Generated),
            other => Err(Error::InvalidInput(format!("unknown set label {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProblemId {
    pub set_label: SetLabel,
    pub index: u64,
}

impl ProblemId {
    pub fn coco(function_id: u32) -> Self {
        ProblemId {
            set_label: SetLabel::Coco,
            index: u64::from(function_id),
        }
    }

    pub fn generated(index: u64) -> Self {
        ProblemId {
            set_label: SetLabel::Generated,
            index,
        }
    }

    pub fn file_stem(&self) -> String {
        format!("{}_{}", self.set_label.file_stem(), self.index)
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.set_label, self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxBounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxBounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::InvalidInput(format!(
                "bounds need equal non-zero lengths, got {} and {}",
                lower.len(),
                upper.len()
            )));
        }
        if let Some(i) = (0..lower.len()).find(|&i| !(lower[i] < upper[i])) {
            return Err(Error::InvalidInput(format!(
                "bounds coordinate {i}: lower {} is not below upper {}",
                lower[i], upper[i]
            )));
        }
        Ok(BoxBounds { lower, upper })
    }

    /// The `[lo, hi]^dimension` hypercube.
    pub fn cube(dimension: usize, lo: f64, hi: f64) -> Result<Self> {
        BoxBounds::new(vec![lo; dimension], vec![hi; dimension])
    }

    /// The shared `[-5, 5]^dimension` domain.
    pub fn domain(dimension: usize) -> Self {
        BoxBounds::cube(dimension, DOMAIN.0, DOMAIN.1).expect("dimension must be positive")
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dimension()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Bbob(BbobInstance),
    Generated(GeneratedProblem),
}

/// An evaluatable continuous objective. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub id: ProblemId,
    pub bounds: BoxBounds,
    pub payload: Payload,
}

impl Problem {
    pub fn dimension(&self) -> usize {
        self.bounds.dimension()
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                received: x.len(),
            });
        }
        Ok(self.evaluate_unchecked(x))
    }

    /// Evaluates without the dimension check.
    pub fn evaluate_unchecked(&self, x: &[f64]) -> f64 {
        match &self.payload {
            Payload::Bbob(inst) => inst.evaluate(x),
            Payload::Generated(gen) => gen.tree.evaluate(x),
        }
    }
}

impl From<GeneratedProblem> for Problem {
    fn from(gen: GeneratedProblem) -> Self {
        Problem {
            id: gen.id,
            bounds: BoxBounds::domain(gen.dimension),
            payload: Payload::Generated(gen),
        }
    }
}
