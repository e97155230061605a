use serde::{Deserialize, Serialize};

/// A binary label in {-1, +1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "-1")]
    Neg,
    #[serde(rename = "+1")]
    Pos,
}

impl Label {
    pub fn from_bool(positive: bool) -> Self {
        if positive {
            Label::Pos
        } else {
            Label::Neg
        }
    }

    pub fn is_pos(self) -> bool {
        self == Label::Pos
    }

    pub fn flip(self) -> Self {
        match self {
            Label::Pos => Label::Neg,
            Label::Neg => Label::Pos,
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Label::Pos => 1.0,
            Label::Neg => -1.0,
        }
    }
}

/// A label attached to a 1-based stream index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexedLabel {
    pub index: usize,
    pub label: Label,
}

impl IndexedLabel {
    pub fn new(index: usize, label: Label) -> Self {
        Self { index, label }
    }
}

/// A labeled 1-D point keyed by its stream index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabeledPoint {
    pub index: usize,
    pub x: f64,
    pub label: Label,
}

impl LabeledPoint {
    pub fn new(index: usize, x: f64, label: Label) -> Self {
        Self { index, x, label }
    }
}

/// er_S(h) on a 1-D sample; 0 for the empty sample.
pub fn empirical_error(h: &crate::hypothesis::Hypothesis, sample: &[LabeledPoint]) -> f64 {
    if sample.is_empty() {
        return 0.0;
    }
    let wrong = sample.iter().filter(|p| h.predict_1d(p.x) != p.label).count();
    wrong as f64 / sample.len() as f64
}
