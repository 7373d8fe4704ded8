//! Linguistic labels on an equidistant ordered scale and the q-operators.
//!
//! A scale with `n` inner labels has `n + 2` labels `L0 .. L(n+1)`, identified
//! with the numbers `i / (n + 1)`. Every operator is defined through that
//! identification. Indices are exact rationals so a chain of operations can
//! be evaluated without loss ([`ApproxMode::Deferred`]) and rounded once at
//! the end with [`approximate`], or rounded after each step
//! ([`ApproxMode::Stepwise`]).

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num::traits::{Signed, Zero};
use num::BigInt;

use crate::error::{Error, ParseError, Result};
use crate::ratio::{int, parse_rational, round_half_away, Rational};

/// Ordered set of labels `L0 .. L(n+1)`, optionally with display names.
///
/// Cheap to clone; two scales are the same scale when `n` and the names agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabelScale(Arc<ScaleSpec>);

#[derive(Debug, PartialEq, Eq, Hash)]
struct ScaleSpec {
    n: u32,
    names: Option<Vec<String>>,
}

impl LabelScale {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidScale(format!(
                "need at least 2 inner labels, got {n}"
            )));
        }
        Ok(Self(Arc::new(ScaleSpec { n, names: None })))
    }

    /// `names` covers every label from `L0` to `L(n+1)`.
    pub fn with_names(n: u32, names: Vec<String>) -> Result<Self> {
        Self::new(n)?;
        if names.len() != n as usize + 2 {
            return Err(Error::InvalidScale(format!(
                "expected {} label names, got {}",
                n + 2,
                names.len()
            )));
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty()
                || name
                    .chars()
                    .any(|c| c.is_whitespace() || "(){}-".contains(c))
            {
                return Err(Error::InvalidScale(format!("bad label name `{name}`")));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidScale(format!(
                    "duplicate label name `{name}`"
                )));
            }
        }
        Ok(Self(Arc::new(ScaleSpec {
            n,
            names: Some(names),
        })))
    }

    /// Number of inner labels.
    pub fn n(&self) -> u32 {
        self.0.n
    }

    /// Index of `L_max`, i.e. `n + 1`.
    pub fn max_index(&self) -> u32 {
        self.0.n + 1
    }

    pub fn names(&self) -> Option<&[String]> {
        self.0.names.as_deref()
    }

    /// The label `L_index`. Integer indices within `[-(n+1), n+1]` are marked
    /// approximated; anything else is kept as a raw index.
    pub fn label(&self, index: i64) -> Label {
        let bound = i64::from(self.max_index());
        Label {
            scale: self.clone(),
            index: int(index),
            approximated: (-bound..=bound).contains(&index),
        }
    }

    pub fn zero(&self) -> Label {
        self.label(0)
    }

    pub fn max(&self) -> Label {
        self.label(i64::from(self.max_index()))
    }

    /// Parses `L3`, `-L2`, `L{8/3}` or one of the scale's names.
    pub fn parse_label(&self, text: &str) -> Result<Label, ParseError> {
        let text = text.trim();
        let (negative, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text),
        };
        let offset = text.len() - body.len() + 1;
        let label = if let Some(pos) = self
            .names()
            .and_then(|names| names.iter().position(|n| n == body))
        {
            self.label(pos as i64)
        } else if let Some(rest) = body.strip_prefix('L') {
            if let Some(inner) = rest.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
                let index = parse_rational(inner).ok_or_else(|| {
                    ParseError::new(offset + 2, format!("bad rational index `{inner}`"))
                })?;
                Label::exact(self, index)
            } else if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
                let index: i64 = rest
                    .parse()
                    .map_err(|_| ParseError::new(offset + 1, "label index too large"))?;
                self.label(index)
            } else {
                return Err(ParseError::new(
                    offset + 1,
                    format!("expected a label index after `L`, found `{rest}`"),
                ));
            }
        } else {
            return Err(ParseError::new(offset, format!("unknown label `{body}`")));
        };
        Ok(if negative { label.negated() } else { label })
    }
}

/// Whether operations round after every step or keep exact indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ApproxMode {
    Stepwise,
    Deferred,
}

/// A label with an exact, possibly out-of-range or negative, index.
#[derive(Clone, Debug)]
pub struct Label {
    scale: LabelScale,
    index: Rational,
    approximated: bool,
}

impl Label {
    /// A label carrying an unrounded index.
    pub fn exact(scale: &LabelScale, index: Rational) -> Self {
        Self {
            scale: scale.clone(),
            index,
            approximated: false,
        }
    }

    pub fn scale(&self) -> &LabelScale {
        &self.scale
    }

    pub fn index(&self) -> &Rational {
        &self.index
    }

    pub fn is_approximated(&self) -> bool {
        self.approximated
    }

    /// Integer index in `[0, n+1]`: a label that may carry mass.
    pub fn is_on_scale(&self) -> bool {
        self.index.is_integer()
            && !self.index.is_negative()
            && self.index <= int(i64::from(self.scale.max_index()))
    }

    pub fn is_null(&self) -> bool {
        self.index.is_zero()
    }

    /// Same index with the approximation flag cleared.
    pub fn into_deferred(mut self) -> Self {
        self.approximated = false;
        self
    }

    fn negated(self) -> Self {
        Self {
            index: -self.index,
            ..self
        }
    }

    fn with_index(&self, index: Rational, approximated: bool) -> Self {
        Self {
            scale: self.scale.clone(),
            index,
            approximated,
        }
    }
}

impl PartialEq for Label {
    fn eq(&self, other: &Self) -> bool {
        self.scale == other.scale && self.index == other.index
    }
}

impl Eq for Label {}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        (self.scale == other.scale).then(|| self.index.cmp(&other.index))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.index.is_negative() { "-" } else { "" };
        let magnitude = self.index.abs();
        if magnitude.is_integer() {
            let k = magnitude.to_integer();
            if let (Some(names), Ok(k)) = (self.scale.names(), usize::try_from(k.clone())) {
                if let Some(name) = names.get(k) {
                    return write!(f, "{sign}{name}");
                }
            }
            write!(f, "{sign}L{k}")
        } else {
            write!(f, "{sign}L{{{}/{}}}", magnitude.numer(), magnitude.denom())
        }
    }
}

fn check_scale(a: &Label, b: &Label) -> Result<()> {
    if a.scale == b.scale {
        Ok(())
    } else {
        Err(Error::ScaleMismatch {
            left: a.scale.n(),
            right: b.scale.n(),
        })
    }
}

fn stepwise(mode: ApproxMode, a: &Label, b: &Label) -> bool {
    mode == ApproxMode::Stepwise && a.approximated && b.approximated
}

fn denominator(scale: &LabelScale) -> Rational {
    int(i64::from(scale.max_index()))
}

/// Rounds the index to the nearest integer (halves away from zero) and
/// clamps it into `[-(n+1), n+1]`.
pub fn approximate(a: &Label) -> Label {
    let bound = BigInt::from(a.scale.max_index());
    let rounded = round_half_away(&a.index).clamp(-bound.clone(), bound);
    a.with_index(Rational::from_integer(rounded), true)
}

/// Like [`approximate`] but clamps into `[0, n+1]`, for values used as masses.
pub fn approximate_mass(a: &Label) -> Label {
    let bound = BigInt::from(a.scale.max_index());
    let rounded = round_half_away(&a.index).clamp(BigInt::zero(), bound);
    a.with_index(Rational::from_integer(rounded), true)
}

pub fn q_add(a: &Label, b: &Label, mode: ApproxMode) -> Result<Label> {
    check_scale(a, b)?;
    let sum = a.with_index(&a.index + &b.index, false);
    Ok(if stepwise(mode, a, b) {
        approximate(&sum)
    } else {
        sum
    })
}

pub fn q_mul(a: &Label, b: &Label, mode: ApproxMode) -> Result<Label> {
    check_scale(a, b)?;
    let product = a.with_index(&a.index * &b.index / denominator(&a.scale), false);
    Ok(if stepwise(mode, a, b) {
        approximate(&product)
    } else {
        product
    })
}

/// The cruder product `L_min{i,j}`.
pub fn q_mul_min(a: &Label, b: &Label) -> Result<Label> {
    check_scale(a, b)?;
    let index = (&a.index).min(&b.index).clone();
    Ok(a.with_index(index, a.approximated && b.approximated))
}

/// Scalar multiple. Rounds when `a` is approximated, otherwise stays exact.
pub fn q_scalar_mul(scalar: &Rational, a: &Label) -> Label {
    let scaled = a.with_index(scalar * &a.index, false);
    if a.approximated {
        approximate(&scaled)
    } else {
        scaled
    }
}

/// Division staying inside the scale: `L_[(i/j)(n+1)]`, saturating at `L(n+1)`.
pub fn q_div_internal(a: &Label, b: &Label, mode: ApproxMode) -> Result<Label> {
    check_scale(a, b)?;
    if b.index.is_zero() {
        return Err(Error::DivideByZeroLabel);
    }
    let quotient = a.with_index(&a.index / &b.index * denominator(&a.scale), false);
    Ok(if stepwise(mode, a, b) {
        approximate(&quotient)
    } else {
        quotient
    })
}

/// Division leaving the scale: the exact ratio of indices.
pub fn q_div_external(a: &Label, b: &Label) -> Result<Rational> {
    check_scale(a, b)?;
    if b.index.is_zero() {
        return Err(Error::DivideByZeroLabel);
    }
    Ok(&a.index / &b.index)
}

pub fn q_sub(a: &Label, b: &Label, mode: ApproxMode) -> Result<Label> {
    check_scale(a, b)?;
    let diff = a.with_index(&a.index - &b.index, false);
    Ok(if stepwise(mode, a, b) {
        approximate(&diff)
    } else {
        diff
    })
}

pub fn to_numeric(a: &Label) -> Rational {
    &a.index / denominator(&a.scale)
}

pub fn from_numeric(x: &Rational, scale: &LabelScale) -> Label {
    Label::exact(scale, x * denominator(scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::ratio;
    use proptest::prelude::*;

    fn five() -> LabelScale {
        LabelScale::new(5).unwrap()
    }

    fn l(i: i64) -> Label {
        five().label(i)
    }

    const S: ApproxMode = ApproxMode::Stepwise;
    const D: ApproxMode = ApproxMode::Deferred;

    #[test]
    fn scale_validation() {
        assert!(LabelScale::new(1).is_err());
        let names = ["none", "low", "mid", "high"].map(String::from).to_vec();
        let scale = LabelScale::with_names(2, names.clone()).unwrap();
        assert_eq!(scale.label(2).to_string(), "mid");
        assert_eq!(scale.parse_label("high").unwrap(), scale.label(3));
        assert!(LabelScale::with_names(3, names).is_err());
        let dup = ["a", "b", "b", "c"].map(String::from).to_vec();
        assert!(LabelScale::with_names(2, dup).is_err());
    }

    #[test]
    fn addition() {
        let sum = q_add(&q_add(&l(1), &l(2), S).unwrap(), &l(3), S).unwrap();
        assert_eq!(sum, l(6));
        assert_eq!(q_add(&l(4), &l(3), S).unwrap(), l(6));
        assert_eq!(q_add(&l(0), &l(4), S).unwrap(), l(4));
        assert_eq!(q_add(&l(4), &l(3), D).unwrap().index(), &int(7));
    }

    #[test]
    fn multiplication() {
        assert_eq!(q_mul(&l(2), &l(3), S).unwrap(), l(1));
        assert_eq!(q_mul(&l(3), &l(3), S).unwrap(), l(2));
        assert_eq!(q_mul(&l(4), &l(6), D).unwrap(), l(4));
        assert_eq!(q_mul(&l(2), &l(3), D).unwrap().index(), &ratio(1, 1));
        assert_eq!(q_mul(&l(3), &l(3), D).unwrap().index(), &ratio(3, 2));
    }

    #[test]
    fn min_multiplication() {
        assert_eq!(q_mul_min(&l(2), &l(3)).unwrap(), l(2));
        assert_eq!(q_mul_min(&l(0), &l(5)).unwrap(), l(0));
        assert_eq!(q_mul_min(&l(4), &l(2)).unwrap(), l(2));
    }

    #[test]
    fn scalar_multiplication() {
        assert_eq!(q_scalar_mul(&int(2), &l(2)), l(4));
        assert_eq!(q_scalar_mul(&ratio(2, 5), &l(3)), l(1));
        let neg = q_scalar_mul(&int(-1), &l(2));
        assert_eq!(neg, l(-2));
        assert_eq!(neg.to_string(), "-L2");
        assert_eq!(neg, q_sub(&l(0), &l(2), S).unwrap());
        assert_eq!(q_scalar_mul(&int(5), &l(3)), l(6));
        assert_eq!(q_scalar_mul(&int(-5), &l(3)), l(-6));
        let exact = q_scalar_mul(&ratio(2, 5), &l(3).into_deferred());
        assert_eq!(exact.index(), &ratio(6, 5));
    }

    #[test]
    fn internal_division() {
        assert_eq!(q_div_internal(&l(1), &l(3), S).unwrap(), l(2));
        assert_eq!(q_div_internal(&l(2), &l(2), S).unwrap(), l(6));
        assert_eq!(
            q_div_internal(&l(1), &l(0), S),
            Err(Error::DivideByZeroLabel)
        );
        assert_eq!(q_div_internal(&l(1), &l(3), D).unwrap().index(), &int(2));
    }

    #[test]
    fn internal_division_saturates_on_four_point_scale() {
        // Scale L0..L5, i.e. n = 4.
        let scale = LabelScale::new(4).unwrap();
        assert_eq!(
            q_div_internal(&scale.label(4), &scale.label(2), S).unwrap(),
            scale.label(5)
        );
        assert_eq!(
            q_div_internal(&scale.label(1), &scale.label(3), S).unwrap(),
            scale.label(2)
        );
        assert_eq!(
            q_mul(&scale.label(2), &scale.label(3), S).unwrap(),
            scale.label(1)
        );
        assert_eq!(
            q_mul(&scale.label(3), &scale.label(3), S).unwrap(),
            scale.label(2)
        );
        assert_eq!(
            q_div_external(&scale.label(4), &scale.label(1)).unwrap(),
            int(4)
        );
    }

    #[test]
    fn external_division() {
        assert_eq!(q_div_external(&l(4), &l(1)).unwrap(), int(4));
        assert_eq!(q_div_external(&l(1), &l(4)).unwrap(), ratio(1, 4));
        assert_eq!(q_div_external(&l(3), &l(3)).unwrap(), int(1));
        assert!(q_div_external(&l(3), &l(0)).is_err());
    }

    #[test]
    fn subtraction() {
        assert_eq!(q_sub(&l(3), &l(1), S).unwrap(), l(2));
        let neg = q_sub(&l(1), &l(3), S).unwrap();
        assert_eq!(neg, l(-2));
        assert_eq!(neg.to_string(), "-L2");
        assert_eq!(q_sub(&l(2), &l(2), S).unwrap(), l(0));
    }

    #[test]
    fn approximation() {
        let scale = five();
        assert_eq!(approximate(&Label::exact(&scale, ratio(16, 6))), l(3));
        assert_eq!(approximate(&Label::exact(&scale, ratio(10, 6))), l(2));
        assert_eq!(approximate(&Label::exact(&scale, ratio(4, 9))), l(0));
        assert_eq!(approximate(&Label::exact(&scale, ratio(15, 2))), l(6));
        assert_eq!(approximate(&Label::exact(&scale, ratio(-15, 2))), l(-6));
        assert_eq!(approximate_mass(&Label::exact(&scale, ratio(-3, 2))), l(0));
        assert!(approximate(&Label::exact(&scale, ratio(1, 2))).is_approximated());
    }

    #[test]
    fn numeric_isomorphism_anchors() {
        let scale = five();
        assert_eq!(to_numeric(&l(3)), ratio(3, 6));
        assert_eq!(from_numeric(&int(0), &scale), l(0));
        assert_eq!(from_numeric(&int(1), &scale), l(6));
    }

    #[test]
    fn scale_mismatch_is_rejected() {
        let other = LabelScale::new(4).unwrap();
        assert_eq!(
            q_add(&l(1), &other.label(1), S),
            Err(Error::ScaleMismatch { left: 5, right: 4 })
        );
        assert!(l(1).partial_cmp(&other.label(1)).is_none());
    }

    #[test]
    fn display_and_parse() {
        let scale = five();
        let deferred = Label::exact(&scale, ratio(16, 6));
        assert_eq!(deferred.to_string(), "L{8/3}");
        assert_eq!(Label::exact(&scale, ratio(-1, 2)).to_string(), "-L{1/2}");
        assert_eq!(scale.parse_label("L{8/3}").unwrap(), deferred);
        assert_eq!(scale.parse_label("-L2").unwrap(), l(-2));
        assert_eq!(scale.parse_label("L7").unwrap().index(), &int(7));
        assert!(!scale.parse_label("L7").unwrap().is_approximated());
        assert_eq!(scale.parse_label("Lx").unwrap_err().column, 2);
        assert_eq!(scale.parse_label("good").unwrap_err().column, 1);
    }

    #[test]
    fn stepwise_and_deferred_products_disagree() {
        // L1·L2·L3 on n = 5: stepwise rounds L1·L2 to L0 first.
        let step = q_mul(&q_mul(&l(1), &l(2), S).unwrap(), &l(3), S).unwrap();
        let exact = q_mul(&q_mul(&l(1), &l(2), D).unwrap(), &l(3), D).unwrap();
        assert_eq!(step, l(0));
        assert_eq!(exact.index(), &ratio(1, 6));
        // Stepwise multiplication is not associative either.
        let (a, b, c) = (l(2), l(2), l(4));
        let left = q_mul(&q_mul(&a, &b, S).unwrap(), &c, S).unwrap();
        let right = q_mul(&a, &q_mul(&b, &c, S).unwrap(), S).unwrap();
        assert_ne!(left, right);
    }

    fn indices() -> impl Strategy<Value = (u32, i64, i64, i64)> {
        (2u32..=6).prop_flat_map(|n| {
            let top = i64::from(n) + 1;
            (Just(n), 0..=top, 0..=top, 0..=top)
        })
    }

    proptest! {
        #[test]
        fn stepwise_addition_is_a_commutative_monoid((n, i, j, k) in indices()) {
            let scale = LabelScale::new(n).unwrap();
            let (a, b, c) = (scale.label(i), scale.label(j), scale.label(k));
            prop_assert_eq!(q_add(&a, &b, S)?, q_add(&b, &a, S)?);
            prop_assert_eq!(
                q_add(&q_add(&a, &b, S)?, &c, S)?,
                q_add(&a, &q_add(&b, &c, S)?, S)?
            );
            prop_assert_eq!(q_add(&scale.zero(), &a, S)?, a);
        }

        #[test]
        fn deferred_multiplication_laws((n, i, j, k) in indices()) {
            let scale = LabelScale::new(n).unwrap();
            let (a, b, c) = (scale.label(i), scale.label(j), scale.label(k));
            prop_assert_eq!(q_mul(&a, &b, D)?, q_mul(&b, &a, D)?);
            prop_assert_eq!(
                q_mul(&q_mul(&a, &b, D)?, &c, D)?,
                q_mul(&a, &q_mul(&b, &c, D)?, D)?
            );
            prop_assert_eq!(q_mul(&scale.max(), &a, D)?, a.clone());
            prop_assert_eq!(q_mul(&a, &b, S)?, q_mul(&b, &a, S)?);
        }

        #[test]
        fn subtraction_is_antisymmetric((n, i, j, _k) in indices()) {
            let scale = LabelScale::new(n).unwrap();
            let (a, b) = (scale.label(i), scale.label(j));
            for mode in [S, D] {
                let forward = q_sub(&a, &b, mode)?;
                let back = q_sub(&b, &a, mode)?;
                prop_assert_eq!(forward.clone(), q_scalar_mul(&int(-1), &back));
                prop_assert_eq!(forward.index(), &-back.index().clone());
            }
        }

        #[test]
        fn approximation_is_idempotent_and_monotone(
            n in 2u32..=6, p in -80i64..80, q in 1i64..12, r in -80i64..80,
        ) {
            let scale = LabelScale::new(n).unwrap();
            let x = Label::exact(&scale, ratio(p, q));
            let y = Label::exact(&scale, ratio(r, q));
            let ax = approximate(&x);
            prop_assert_eq!(approximate(&ax), ax.clone());
            if x.index() <= y.index() {
                prop_assert!(ax.index() <= approximate(&y).index());
            }
        }
    }
}
