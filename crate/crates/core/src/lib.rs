//! Disagreement-based active learning.
//!
//! The crate is organised bottom-up: marginals and regions of the instance
//! space, hypotheses and version spaces, synthetic noise problems and label
//! streams, confidence bounds, the learning algorithms themselves, estimators
//! for the disagreement coefficient, and finally an experiment harness that
//! measures label complexity.

pub mod algorithms;
pub mod bounds;
pub mod disagreement;
pub mod error;
pub mod harness;
pub mod hypothesis;
pub mod marginal;
pub mod noise;
pub(crate) mod profile;
pub mod region;
pub mod sample;
pub mod stream;
pub mod version_space;

pub use error::{Error, Result};
pub use hypothesis::{GridClass, Hypothesis, HypothesisClass};
pub use marginal::Marginal;
pub use noise::NoiseProblem;
pub use region::Region;
pub use sample::{empirical_error, IndexedLabel, Label, LabeledPoint};
pub use stream::LabeledStream;
pub use version_space::VersionSpace;
