//! Qualitative and numeric basic belief assignments.

use std::collections::BTreeMap;
use std::fmt;

use num::traits::{One, Signed, Zero};

use crate::enrichment::{qe_sum, Combiner, Confidence, DegreeScale, EnrichedLabel, SupportDegree};
use crate::error::{Error, Result};
use crate::frame::{intersects, is_subset, reduce_under_model, Frame, Model, Proposition};
use crate::label::{to_numeric, ApproxMode, Label, LabelScale};
use crate::ratio::{format_rational, Rational};

/// Kind of supporting degree carried by every label of an assignment.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Enrichment {
    /// Plain labels; confidences are the neutral `1`.
    None,
    Numeric,
    Qualitative(DegreeScale),
}

impl Enrichment {
    pub fn neutral(&self) -> Confidence {
        match self {
            Self::None | Self::Numeric => Confidence::one(),
            Self::Qualitative(scale) => Confidence::Point(scale.neutral()),
        }
    }

    pub fn degree_scale(&self) -> Option<&DegreeScale> {
        match self {
            Self::Qualitative(scale) => Some(scale),
            _ => None,
        }
    }

    fn accepts(&self, confidence: &Confidence) -> bool {
        let ends = [confidence.low(), confidence.high()];
        match self {
            Self::None => confidence.is_neutral(),
            Self::Numeric => ends.iter().all(|d| matches!(d, SupportDegree::Numeric(_))),
            Self::Qualitative(expected) => ends.iter().all(
                |d| matches!(d, SupportDegree::Qualitative { scale, .. } if scale == expected),
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiagnosticKind {
    EmptyKey,
    KeyOutsideFrame,
    NonCanonicalKey,
    ScaleMismatch,
    IndexOutOfRange,
    WrongEnrichment,
}

/// One problem found by [`Qbba::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub key: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.key, self.message)
    }
}

/// Qualitative basic belief assignment, `qm(·)`.
///
/// Entries are stored as given; [`Qbba::validate`] reports anything that
/// breaks the assignment's invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Qbba {
    frame: Frame,
    model: Model,
    scale: LabelScale,
    enrichment: Enrichment,
    masses: BTreeMap<Proposition, EnrichedLabel>,
}

impl Qbba {
    pub fn new(frame: Frame, model: Model, scale: LabelScale, enrichment: Enrichment) -> Self {
        Self {
            frame,
            model,
            scale,
            enrichment,
            masses: BTreeMap::new(),
        }
    }

    /// Sets `qm(key)`, replacing any previous value.
    pub fn insert(&mut self, key: Proposition, mass: EnrichedLabel) -> &mut Self {
        self.masses.insert(key, mass);
        self
    }

    /// Parses `key` and `mass` with this assignment's frame, scale and degrees.
    pub fn insert_text(&mut self, key: &str, mass: &str) -> Result<&mut Self> {
        let key = self.frame.parse(key)?;
        let mass = EnrichedLabel::parse(mass, &self.scale, self.enrichment.degree_scale())?;
        Ok(self.insert(key, mass))
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn scale(&self) -> &LabelScale {
        &self.scale
    }

    pub fn enrichment(&self) -> &Enrichment {
        &self.enrichment
    }

    pub fn masses(&self) -> &BTreeMap<Proposition, EnrichedLabel> {
        &self.masses
    }

    pub fn get(&self, key: &Proposition) -> Option<&EnrichedLabel> {
        self.masses.get(key)
    }

    /// Keys with a non-null label.
    pub fn focal_elements(&self) -> impl Iterator<Item = &Proposition> {
        self.masses
            .iter()
            .filter(|(_, m)| !m.label.is_null())
            .map(|(k, _)| k)
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        for (key, mass) in &self.masses {
            let name = self.frame.render(key);
            let mut report = |kind, message: String| {
                out.push(Diagnostic {
                    kind,
                    key: name.clone(),
                    message,
                })
            };
            if key.is_empty() {
                report(DiagnosticKind::EmptyKey, "mass on empty set".into());
            } else if !self.frame.contains(key) {
                report(
                    DiagnosticKind::KeyOutsideFrame,
                    "proposition uses atoms outside the frame".into(),
                );
            } else if reduce_under_model(key, &self.model) != *key {
                report(
                    DiagnosticKind::NonCanonicalKey,
                    "proposition is not reduced under the model".into(),
                );
            }
            if mass.label.scale() != &self.scale {
                report(
                    DiagnosticKind::ScaleMismatch,
                    format!("label {} is on another scale", mass.label),
                );
            } else if !mass.label.is_on_scale() {
                report(
                    DiagnosticKind::IndexOutOfRange,
                    format!(
                        "index out of range: {} is not one of L0..L{}",
                        mass.label,
                        self.scale.max_index()
                    ),
                );
            }
            if !self.enrichment.accepts(&mass.confidence) {
                report(
                    DiagnosticKind::WrongEnrichment,
                    format!(
                        "confidence {} does not match the declared enrichment",
                        mass.confidence
                    ),
                );
            }
        }
        out
    }

    /// Exact sum of label indices, confidences ignored.
    pub fn index_sum(&self) -> Rational {
        self.masses.values().map(|m| m.label.index().clone()).sum()
    }

    /// `Σ qm(X) = L(n+1)` with exact, unsaturated addition.
    pub fn is_quasi_normalized(&self) -> bool {
        self.index_sum() == Rational::from_integer(self.scale.max_index().into())
    }

    fn sum_where(
        &self,
        keep: impl Fn(&Proposition) -> bool,
        how: Combiner,
        mode: ApproxMode,
    ) -> Result<EnrichedLabel> {
        let terms: Vec<EnrichedLabel> = self
            .masses
            .iter()
            .filter(|(k, _)| keep(k))
            .map(|(_, m)| m.clone())
            .collect();
        if terms.is_empty() {
            return Ok(EnrichedLabel::new(
                self.scale.zero(),
                self.enrichment.neutral(),
            ));
        }
        qe_sum(&terms, how, mode)
    }

    /// `qBel(a)`: sum of the masses of every key contained in `a`.
    pub fn qbelief(
        &self,
        a: &Proposition,
        how: Combiner,
        mode: ApproxMode,
    ) -> Result<EnrichedLabel> {
        self.check_key(a)?;
        let a = reduce_under_model(a, &self.model);
        self.sum_where(|b| is_subset(b, &a), how, mode)
    }

    /// `qPl(a)`: sum of the masses of every key meeting `a` under the model.
    pub fn qplausibility(
        &self,
        a: &Proposition,
        how: Combiner,
        mode: ApproxMode,
    ) -> Result<EnrichedLabel> {
        self.check_key(a)?;
        self.sum_where(|b| intersects(b, a, &self.model), how, mode)
    }

    fn check_key(&self, a: &Proposition) -> Result<()> {
        if self.frame.contains(a) {
            Ok(())
        } else {
            Err(Error::FrameMismatch)
        }
    }

    /// Exact numeric image of each label (`L_i ↦ i/(n+1)`) and, separately,
    /// each confidence.
    pub fn to_numeric(
        &self,
    ) -> (
        BTreeMap<Proposition, Rational>,
        BTreeMap<Proposition, Confidence>,
    ) {
        let masses = self
            .masses
            .iter()
            .map(|(k, m)| (k.clone(), to_numeric(&m.label)))
            .collect();
        let confidences = self
            .masses
            .iter()
            .map(|(k, m)| (k.clone(), m.confidence.clone()))
            .collect();
        (masses, confidences)
    }

    /// Checks that two assignments can be fused together.
    pub fn check_compatible(&self, other: &Qbba) -> Result<()> {
        if self.frame != other.frame {
            return Err(Error::FrameMismatch);
        }
        if self.model != other.model {
            return Err(Error::ModelMismatch);
        }
        if self.scale != other.scale {
            return Err(Error::ScaleMismatch {
                left: self.scale.n(),
                right: other.scale.n(),
            });
        }
        if self.enrichment != other.enrichment {
            return Err(Error::EnrichmentMismatch);
        }
        Ok(())
    }

    /// Mass map as labels only.
    pub fn labels(&self) -> BTreeMap<Proposition, Label> {
        self.masses
            .iter()
            .map(|(k, m)| (k.clone(), m.label.clone()))
            .collect()
    }
}

/// See [`Qbba::to_numeric`].
pub fn qbba_to_numeric(
    q: &Qbba,
) -> (
    BTreeMap<Proposition, Rational>,
    BTreeMap<Proposition, Confidence>,
) {
    q.to_numeric()
}

/// Classical bba `m(·)` with exact rational masses summing to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericBba {
    frame: Frame,
    model: Model,
    masses: BTreeMap<Proposition, Rational>,
}

impl NumericBba {
    pub fn new(
        frame: Frame,
        model: Model,
        masses: BTreeMap<Proposition, Rational>,
    ) -> Result<Self> {
        let mut total = Rational::zero();
        for (key, mass) in &masses {
            let name = frame.render(key);
            if key.is_empty() {
                return Err(Error::InvalidAssignment("mass on empty set".into()));
            }
            if !frame.contains(key) || reduce_under_model(key, &model) != *key {
                return Err(Error::InvalidAssignment(format!(
                    "`{name}` is not a valid key"
                )));
            }
            if mass.is_negative() || *mass > Rational::one() {
                return Err(Error::InvalidAssignment(format!(
                    "mass {} of `{name}` is outside [0, 1]",
                    format_rational(mass)
                )));
            }
            total += mass;
        }
        if !total.is_one() {
            return Err(Error::InvalidAssignment(format!(
                "masses sum to {}, not 1",
                format_rational(&total)
            )));
        }
        Ok(Self {
            frame,
            model,
            masses,
        })
    }

    /// Builds from `(proposition text, mass)` pairs.
    pub fn from_pairs<'a>(
        frame: Frame,
        model: Model,
        pairs: impl IntoIterator<Item = (&'a str, Rational)>,
    ) -> Result<Self> {
        let mut masses = BTreeMap::new();
        for (key, mass) in pairs {
            masses.insert(frame.parse(key)?, mass);
        }
        Self::new(frame, model, masses)
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn masses(&self) -> &BTreeMap<Proposition, Rational> {
        &self.masses
    }

    pub fn mass(&self, key: &Proposition) -> Rational {
        self.masses.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn bel(&self, a: &Proposition) -> Rational {
        let a = reduce_under_model(a, &self.model);
        self.masses
            .iter()
            .filter(|(b, _)| is_subset(b, &a))
            .map(|(_, m)| m)
            .sum()
    }

    pub fn pl(&self, a: &Proposition) -> Rational {
        self.masses
            .iter()
            .filter(|(b, _)| intersects(b, a, &self.model))
            .map(|(_, m)| m)
            .sum()
    }
}
