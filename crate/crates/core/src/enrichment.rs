//! Enriched labels `L_i(ε)`: a label paired with a supporting degree that is
//! either a non-negative number (Type 1) or a position on an ordered
//! qualitative scale such as `NB ≺ NM ≺ NS ≺ O ≺ PS ≺ PM ≺ PB` (Type 2).
//!
//! The qe-operators act on the label with the matching q-operator and merge
//! the degrees with a [`Combiner`]. Labels never look at confidences.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num::traits::{One, Signed};
use num::ToPrimitive;

use crate::error::{Error, ParseError, Result};
use crate::label::{
    q_add, q_div_external, q_div_internal, q_mul, q_mul_min, q_scalar_mul, q_sub, ApproxMode,
    Label, LabelScale,
};
use crate::ratio::{format_rational, int, parse_rational, round_half_away, Rational};

/// Ordered names for qualitative supporting degrees, with one neutral entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DegreeScale(Arc<DegreeSpec>);

#[derive(Debug, PartialEq, Eq, Hash)]
struct DegreeSpec {
    names: Vec<String>,
    neutral: usize,
}

impl DegreeScale {
    /// `names` are listed from weakest to strongest.
    pub fn new(names: Vec<String>, neutral: usize) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidDegreeScale("no degrees given".into()));
        }
        if neutral >= names.len() {
            return Err(Error::InvalidDegreeScale(format!(
                "neutral index {neutral} outside {} degrees",
                names.len()
            )));
        }
        for (i, name) in names.iter().enumerate() {
            let bad = name.is_empty()
                || name
                    .chars()
                    .any(|c| c.is_whitespace() || "()[],".contains(c))
                || parse_rational(name).is_some();
            if bad {
                return Err(Error::InvalidDegreeScale(format!(
                    "bad degree name `{name}`"
                )));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidDegreeScale(format!(
                    "duplicate degree `{name}`"
                )));
            }
        }
        Ok(Self(Arc::new(DegreeSpec { names, neutral })))
    }

    /// `NB, NM, NS, O, PS, PM, PB` with `O` neutral.
    pub fn seven_point() -> Self {
        let names = ["NB", "NM", "NS", "O", "PS", "PM", "PB"]
            .map(String::from)
            .to_vec();
        Self::new(names, 3).expect("static scale is valid")
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn neutral(&self) -> SupportDegree {
        self.degree(self.0.neutral)
            .expect("neutral index checked at construction")
    }

    pub fn degree(&self, position: usize) -> Option<SupportDegree> {
        (position < self.len()).then(|| SupportDegree::Qualitative {
            scale: self.clone(),
            position,
        })
    }

    pub fn position_of(&self, name: &str) -> Option<usize> {
        self.0.names.iter().position(|n| n == name)
    }
}

/// A Type-1 or Type-2 supporting degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SupportDegree {
    Numeric(Rational),
    Qualitative { scale: DegreeScale, position: usize },
}

impl SupportDegree {
    pub fn numeric(value: Rational) -> Result<Self> {
        if value.is_negative() {
            return Err(Error::InvalidConfidence(format!(
                "numeric degree {} is negative",
                format_rational(&value)
            )));
        }
        Ok(Self::Numeric(value))
    }

    /// The Type-1 neutral degree `1`.
    pub fn one() -> Self {
        Self::Numeric(Rational::one())
    }

    pub fn is_neutral(&self) -> bool {
        match self {
            Self::Numeric(v) => v.is_one(),
            Self::Qualitative { scale, position } => *position == scale.0.neutral,
        }
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        match (self, other) {
            (Self::Numeric(_), Self::Numeric(_)) => Ok(()),
            (Self::Qualitative { scale: a, .. }, Self::Qualitative { scale: b, .. }) if a == b => {
                Ok(())
            }
            (Self::Qualitative { .. }, Self::Qualitative { .. }) => Err(Error::ConfidenceMismatch(
                "degrees come from different qualitative scales".into(),
            )),
            _ => Err(Error::ConfidenceMismatch(
                "numeric and qualitative degrees cannot be mixed".into(),
            )),
        }
    }

    fn rank_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Self::Numeric(a), Self::Numeric(b)) => a.cmp(b),
            (Self::Qualitative { position: a, .. }, Self::Qualitative { position: b, .. }) => {
                a.cmp(b)
            }
            _ => unreachable!("compatibility checked before ordering"),
        }
    }
}

impl PartialOrd for SupportDegree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.compatible(other).ok().map(|()| self.rank_cmp(other))
    }
}

impl fmt::Display for SupportDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Numeric(v) => f.write_str(&format_rational(v)),
            Self::Qualitative { scale, position } => f.write_str(&scale.names()[*position]),
        }
    }
}

/// A single degree, or an interval of degrees with `low < high`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Confidence {
    Point(SupportDegree),
    Interval {
        low: SupportDegree,
        high: SupportDegree,
    },
}

impl Confidence {
    pub fn numeric(value: Rational) -> Result<Self> {
        SupportDegree::numeric(value).map(Self::Point)
    }

    pub fn one() -> Self {
        Self::Point(SupportDegree::one())
    }

    /// Builds an interval; equal endpoints collapse to a point.
    pub fn interval(low: SupportDegree, high: SupportDegree) -> Result<Self> {
        low.compatible(&high)?;
        match low.rank_cmp(&high) {
            Ordering::Less => Ok(Self::Interval { low, high }),
            Ordering::Equal => Ok(Self::Point(low)),
            Ordering::Greater => Err(Error::InvalidConfidence(format!(
                "interval [{low},{high}] has low above high"
            ))),
        }
    }

    pub fn low(&self) -> &SupportDegree {
        match self {
            Self::Point(d) => d,
            Self::Interval { low, .. } => low,
        }
    }

    pub fn high(&self) -> &SupportDegree {
        match self {
            Self::Point(d) => d,
            Self::Interval { high, .. } => high,
        }
    }

    pub fn is_neutral(&self) -> bool {
        matches!(self, Self::Point(d) if d.is_neutral())
    }

    /// Centre of the interval. Qualitative midpoints round to a scale position.
    pub fn midpoint(&self) -> SupportDegree {
        mean(&[self.low(), self.high()])
    }

    /// Parses `0.3`, `NB` or `[0.5,0.6]`. Degrees are qualitative when
    /// `degrees` is given, numeric otherwise.
    pub fn parse(text: &str, degrees: Option<&DegreeScale>) -> Result<Self, ParseError> {
        let trimmed = text.trim();
        if let Some(inner) = trimmed.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let (low, high) = inner
                .split_once(',')
                .ok_or_else(|| ParseError::new(1, "interval needs two comma-separated ends"))?;
            let low = parse_degree(low, degrees, 2)?;
            let high = parse_degree(high, degrees, low_len(inner) + 3)?;
            return Self::interval(low, high).map_err(|e| ParseError::new(1, e.to_string()));
        }
        parse_degree(trimmed, degrees, 1).map(Self::Point)
    }
}

fn low_len(inner: &str) -> usize {
    inner.find(',').unwrap_or(0)
}

fn parse_degree(
    text: &str,
    degrees: Option<&DegreeScale>,
    column: usize,
) -> Result<SupportDegree, ParseError> {
    let text = text.trim();
    match degrees {
        Some(scale) => scale
            .position_of(text)
            .and_then(|p| scale.degree(p))
            .ok_or_else(|| ParseError::new(column, format!("unknown degree `{text}`"))),
        None => {
            let value = parse_rational(text)
                .ok_or_else(|| ParseError::new(column, format!("bad numeric degree `{text}`")))?;
            SupportDegree::numeric(value).map_err(|e| ParseError::new(column, e.to_string()))
        }
    }
}

impl fmt::Display for Confidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Point(d) => write!(f, "{d}"),
            Self::Interval { low, high } => write!(f, "[{low},{high}]"),
        }
    }
}

/// How supporting degrees merge when labels are combined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Combiner {
    Average,
    Min,
    Interval,
}

fn mean(degrees: &[&SupportDegree]) -> SupportDegree {
    let count = int(degrees.len() as i64);
    match degrees[0] {
        SupportDegree::Numeric(_) => {
            let total: Rational = degrees
                .iter()
                .map(|d| match d {
                    SupportDegree::Numeric(v) => v.clone(),
                    SupportDegree::Qualitative { .. } => unreachable!(),
                })
                .sum();
            SupportDegree::Numeric(total / count)
        }
        SupportDegree::Qualitative { scale, .. } => {
            let total: i64 = degrees
                .iter()
                .map(|d| match d {
                    SupportDegree::Qualitative { position, .. } => *position as i64,
                    SupportDegree::Numeric(_) => unreachable!(),
                })
                .sum();
            let position = round_half_away(&(int(total) / count))
                .to_usize()
                .expect("mean of positions stays on the scale");
            SupportDegree::Qualitative {
                scale: scale.clone(),
                position,
            }
        }
    }
}

fn extreme<'a>(degrees: impl Iterator<Item = &'a SupportDegree>, pick: Ordering) -> SupportDegree {
    degrees
        .reduce(|best, d| if d.rank_cmp(best) == pick { d } else { best })
        .expect("at least one degree")
        .clone()
}

/// Combines all `confidences` in one step. Average is the k-ary mean, not a
/// pairwise fold, since pairwise averaging is order dependent.
pub fn combine_all<'a, I>(confidences: I, how: Combiner) -> Result<Confidence>
where
    I: IntoIterator<Item = &'a Confidence>,
{
    let all: Vec<&Confidence> = confidences.into_iter().collect();
    let Some(first) = all.first() else {
        return Err(Error::ConfidenceMismatch("nothing to combine".into()));
    };
    for c in &all {
        first.low().compatible(c.low())?;
    }
    let lows = all.iter().map(|c| c.low());
    let highs = all.iter().map(|c| c.high());
    let (low, high) = match how {
        Combiner::Min => (
            extreme(lows, Ordering::Less),
            extreme(highs, Ordering::Less),
        ),
        Combiner::Average => (
            mean(&lows.collect::<Vec<_>>()),
            mean(&highs.collect::<Vec<_>>()),
        ),
        Combiner::Interval => (
            extreme(lows, Ordering::Less),
            extreme(highs, Ordering::Greater),
        ),
    };
    Confidence::interval(low, high)
}

pub fn combine_confidence(a: &Confidence, b: &Confidence, how: Combiner) -> Result<Confidence> {
    combine_all([a, b], how)
}

/// A label together with the confidence the source attaches to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnrichedLabel {
    pub label: Label,
    pub confidence: Confidence,
}

impl EnrichedLabel {
    pub fn new(label: Label, confidence: Confidence) -> Self {
        Self { label, confidence }
    }

    /// Parses `L2(0.7)`, `L4(NM)`, `L1([0.5,0.6])` or a bare label. A bare
    /// label gets the neutral degree.
    pub fn parse(
        text: &str,
        scale: &LabelScale,
        degrees: Option<&DegreeScale>,
    ) -> Result<Self, ParseError> {
        let text = text.trim();
        let Some(open) = text.find('(') else {
            let label = scale.parse_label(text)?;
            let confidence = match degrees {
                Some(d) => Confidence::Point(d.neutral()),
                None => Confidence::one(),
            };
            return Ok(Self::new(label, confidence));
        };
        let inner = text[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| ParseError::new(text.chars().count(), "missing closing `)`"))?;
        let label = scale.parse_label(&text[..open])?;
        let confidence = Confidence::parse(inner, degrees).map_err(|e| ParseError {
            column: e.column + open + 1,
            message: e.message,
        })?;
        Ok(Self::new(label, confidence))
    }
}

impl fmt::Display for EnrichedLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.label, self.confidence)
    }
}

fn combined(a: &EnrichedLabel, b: &EnrichedLabel, how: Combiner) -> Result<Confidence> {
    combine_confidence(&a.confidence, &b.confidence, how)
}

pub fn qe_add(
    a: &EnrichedLabel,
    b: &EnrichedLabel,
    how: Combiner,
    mode: ApproxMode,
) -> Result<EnrichedLabel> {
    Ok(EnrichedLabel::new(
        q_add(&a.label, &b.label, mode)?,
        combined(a, b, how)?,
    ))
}

/// Sum of several enriched labels with one joint confidence over all terms.
pub fn qe_sum(terms: &[EnrichedLabel], how: Combiner, mode: ApproxMode) -> Result<EnrichedLabel> {
    let (first, rest) = terms
        .split_first()
        .ok_or_else(|| Error::ConfidenceMismatch("nothing to sum".into()))?;
    let label = rest
        .iter()
        .try_fold(first.label.clone(), |acc, t| q_add(&acc, &t.label, mode))?;
    let confidence = combine_all(terms.iter().map(|t| &t.confidence), how)?;
    Ok(EnrichedLabel::new(label, confidence))
}

pub fn qe_mul(
    a: &EnrichedLabel,
    b: &EnrichedLabel,
    how: Combiner,
    mode: ApproxMode,
) -> Result<EnrichedLabel> {
    Ok(EnrichedLabel::new(
        q_mul(&a.label, &b.label, mode)?,
        combined(a, b, how)?,
    ))
}

pub fn qe_mul_min(a: &EnrichedLabel, b: &EnrichedLabel, how: Combiner) -> Result<EnrichedLabel> {
    Ok(EnrichedLabel::new(
        q_mul_min(&a.label, &b.label)?,
        combined(a, b, how)?,
    ))
}

/// The confidence passes through unchanged.
pub fn qe_scalar_mul(scalar: &Rational, a: &EnrichedLabel) -> EnrichedLabel {
    EnrichedLabel::new(q_scalar_mul(scalar, &a.label), a.confidence.clone())
}

pub fn qe_div_internal(
    a: &EnrichedLabel,
    b: &EnrichedLabel,
    how: Combiner,
    mode: ApproxMode,
) -> Result<EnrichedLabel> {
    Ok(EnrichedLabel::new(
        q_div_internal(&a.label, &b.label, mode)?,
        combined(a, b, how)?,
    ))
}

/// Exact ratio of indices, supported by the combined confidence.
pub fn qe_div_external(
    a: &EnrichedLabel,
    b: &EnrichedLabel,
    how: Combiner,
) -> Result<(Rational, Confidence)> {
    Ok((q_div_external(&a.label, &b.label)?, combined(a, b, how)?))
}

pub fn qe_sub(
    a: &EnrichedLabel,
    b: &EnrichedLabel,
    how: Combiner,
    mode: ApproxMode,
) -> Result<EnrichedLabel> {
    Ok(EnrichedLabel::new(
        q_sub(&a.label, &b.label, mode)?,
        combined(a, b, how)?,
    ))
}
