//! Qualitative belief functions over linguistic labels.
//!
//! * [`label`]: label scales, exact label indices and the q-operators.
//! * [`enrichment`]: supporting degrees, confidence combiners, qe-operators.
//! * [`frame`]: frames, hyper-power-set propositions, integrity models.
//! * [`belief`]: qualitative and numeric belief assignments, Bel and Pl.
//! * [`fusion`]: conjunctive and PCR5 combination of two sources.
//!
//! ```
//! use qbelief::*;
//!
//! # fn main() -> Result<()> {
//! let frame = Frame::new(["A", "B"])?;
//! let scale = LabelScale::new(5)?;
//! let mut q1 = Qbba::new(frame.clone(), Model::Shafer, scale.clone(), Enrichment::Numeric);
//! q1.insert_text("A", "L1(0.3)")?.insert_text("B", "L2(1.1)")?.insert_text("A|B", "L3(0.8)")?;
//! let mut q2 = Qbba::new(frame.clone(), Model::Shafer, scale, Enrichment::Numeric);
//! q2.insert_text("A", "L4(0.6)")?.insert_text("B", "L2(0.7)")?.insert_text("A|B", "L0(1)")?;
//!
//! let config = FusionConfig::new(Rule::Pcr5, ApproxMode::Deferred, Combiner::Min);
//! let result = fuse(&q1, &q2, config)?;
//! assert_eq!(result.get(&frame.parse("A")?).unwrap().to_string(), "L4(0.3)");
//! assert!(result.quasi_normalized);
//! # Ok(())
//! # }
//! ```

pub mod belief;
pub mod enrichment;
pub mod error;
pub mod frame;
pub mod fusion;
pub mod label;
pub mod ratio;

pub use belief::{qbba_to_numeric, Diagnostic, DiagnosticKind, Enrichment, NumericBba, Qbba};
pub use enrichment::{
    combine_all, combine_confidence, qe_add, qe_div_external, qe_div_internal, qe_mul, qe_mul_min,
    qe_scalar_mul, qe_sub, qe_sum, Combiner, Confidence, DegreeScale, EnrichedLabel, SupportDegree,
};
pub use error::{Error, ParseError, Result};
pub use frame::{
    enumerate_hyper_power_set, intersects, is_subset, parse_proposition, prop_intersect,
    prop_union, reduce_under_model, Frame, Model, Proposition,
};
pub use fusion::{
    conjunctive_fuse, fuse, numeric_conjunctive, numeric_pcr5, pcr5_fuse, ConflictPair,
    FusionConfig, FusionResult, NumericFusionResult, NumericShare, Redistribution, Rule, Share,
};
pub use label::{
    approximate, approximate_mass, from_numeric, q_add, q_div_external, q_div_internal, q_mul,
    q_mul_min, q_scalar_mul, q_sub, to_numeric, ApproxMode, Label, LabelScale,
};
pub use ratio::Rational;
