//! Two-source fusion: the conjunctive rule and PCR5, over qualitative
//! assignments and over exact numeric ones.
//!
//! Qualitative fusion runs in one of two approximation modes. `Stepwise`
//! rounds every product and every partial sum. `Deferred` keeps exact label
//! indices inside each output bucket, PCR5 shares included, and rounds once
//! when the bucket is complete.
//!
//! Only two sources are supported. Neither rule is associative once labels
//! are rounded, so folding more sources is left to the caller.

use std::collections::BTreeMap;

use num::traits::Zero;

use crate::belief::{NumericBba, Qbba};
use crate::enrichment::{combine_all, combine_confidence, qe_mul, Combiner, EnrichedLabel};
use crate::error::{Error, Result};
use crate::frame::{prop_intersect, reduce_under_model, Frame, Proposition};
use crate::label::{approximate_mass, q_add, q_div_internal, q_mul, ApproxMode, Label};
use crate::ratio::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Conjunctive,
    Pcr5,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FusionConfig {
    pub rule: Rule,
    pub mode: ApproxMode,
    pub combiner: Combiner,
}

impl FusionConfig {
    pub fn new(rule: Rule, mode: ApproxMode, combiner: Combiner) -> Self {
        Self {
            rule,
            mode,
            combiner,
        }
    }
}

/// A PCR5 share: the exact index and the rounded label that gets reported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Share {
    pub exact: Rational,
    pub label: EnrichedLabel,
}

/// What happened to one conflicting product.
#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Redistribution {
    /// Conjunctive rule: the product stays on the empty intersection.
    Kept,
    /// The product is the null label; both parties receive this `L0(c)`.
    NullProduct(EnrichedLabel),
    /// Proportional split back to the two propositions.
    Proportional { left: Share, right: Share },
    /// Both masses were null; nothing to move.
    Skipped,
}

/// A pair of focal elements whose intersection the model makes empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConflictPair {
    /// Key from the first source.
    pub left: Proposition,
    /// Key from the second source.
    pub right: Proposition,
    /// Unreduced intersection, which names the conflict bucket.
    pub intersection: Proposition,
    pub left_mass: EnrichedLabel,
    pub right_mass: EnrichedLabel,
    /// Product in the mode's arithmetic (exact when deferred).
    pub product: EnrichedLabel,
    pub redistribution: Redistribution,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionResult {
    pub config: FusionConfig,
    /// Masses on non-empty propositions.
    pub fused: Qbba,
    /// Buckets for model-empty intersections, keyed by the unreduced
    /// intersection (`A&B` rather than the empty set).
    pub conflict: BTreeMap<Proposition, EnrichedLabel>,
    /// Index of every bucket before its final rounding.
    pub unrounded: BTreeMap<Proposition, Rational>,
    pub conflict_detail: Vec<ConflictPair>,
    /// Whether the fused and conflict labels sum exactly to `L(n+1)`.
    pub quasi_normalized: bool,
    pub trace: Vec<String>,
}

impl FusionResult {
    /// Label of `key` in either the fused masses or the conflict buckets.
    pub fn get(&self, key: &Proposition) -> Option<&EnrichedLabel> {
        self.fused.get(key).or_else(|| self.conflict.get(key))
    }
}

pub fn fuse(q1: &Qbba, q2: &Qbba, cfg: FusionConfig) -> Result<FusionResult> {
    match cfg.rule {
        Rule::Conjunctive => conjunctive_fuse(q1, q2, cfg),
        Rule::Pcr5 => pcr5_fuse(q1, q2, cfg),
    }
}

struct Product {
    left: EnrichedLabel,
    right: EnrichedLabel,
    value: EnrichedLabel,
}

struct Bucket {
    key: Proposition,
    conflict: bool,
    products: Vec<Product>,
    label: EnrichedLabel,
    exact: Rational,
}

struct Conjunction {
    buckets: Vec<Bucket>,
    pairs: Vec<ConflictPair>,
}

fn check_inputs(q1: &Qbba, q2: &Qbba) -> Result<()> {
    q1.check_compatible(q2)?;
    for (name, q) in [("first", q1), ("second", q2)] {
        if let Some(d) = q.validate().first() {
            return Err(Error::InvalidAssignment(format!("{name} source: {d}")));
        }
    }
    Ok(())
}

fn sum_labels(labels: &[&Label], mode: ApproxMode) -> Result<(Label, Rational)> {
    let (first, rest) = labels.split_first().expect("buckets are never empty");
    let total = rest
        .iter()
        .try_fold((*first).clone(), |acc, l| q_add(&acc, l, mode))?;
    Ok(match mode {
        ApproxMode::Stepwise => (total.clone(), total.index().clone()),
        ApproxMode::Deferred => (approximate_mass(&total), total.index().clone()),
    })
}

fn conjunction(q1: &Qbba, q2: &Qbba, cfg: FusionConfig) -> Result<Conjunction> {
    check_inputs(q1, q2)?;
    let model = q1.model();
    let mut grouped: BTreeMap<(bool, Proposition), Vec<Product>> = BTreeMap::new();
    let mut pairs = Vec::new();
    for (k1, m1) in q1.masses() {
        for (k2, m2) in q2.masses() {
            let value = qe_mul(m1, m2, cfg.combiner, cfg.mode)?;
            let meet = prop_intersect(k1, k2);
            let reduced = reduce_under_model(&meet, model);
            let conflict = reduced.is_empty();
            if conflict {
                pairs.push(ConflictPair {
                    left: k1.clone(),
                    right: k2.clone(),
                    intersection: meet.clone(),
                    left_mass: m1.clone(),
                    right_mass: m2.clone(),
                    product: value.clone(),
                    redistribution: Redistribution::Kept,
                });
            }
            let key = if conflict { meet } else { reduced };
            grouped.entry((conflict, key)).or_default().push(Product {
                left: m1.clone(),
                right: m2.clone(),
                value,
            });
        }
    }
    let mut buckets = Vec::with_capacity(grouped.len());
    for ((conflict, key), products) in grouped {
        let labels: Vec<&Label> = products.iter().map(|p| &p.value.label).collect();
        let (label, exact) = sum_labels(&labels, cfg.mode)?;
        let factors = products
            .iter()
            .flat_map(|p| [&p.left.confidence, &p.right.confidence]);
        let confidence = combine_all(factors, cfg.combiner)?;
        buckets.push(Bucket {
            key,
            conflict,
            products,
            label: EnrichedLabel::new(label, confidence),
            exact,
        });
    }
    Ok(Conjunction { buckets, pairs })
}

struct Tracer<'a> {
    frame: &'a Frame,
    lines: Vec<String>,
}

impl Tracer<'_> {
    fn name(&self, p: &Proposition) -> String {
        self.frame.render(p)
    }

    fn bucket(&mut self, result: &str, bucket: &Bucket, mode: ApproxMode) {
        let head = format!("{result}({}) = ", self.name(&bucket.key));
        let pad = " ".repeat(head.chars().count() - 2);
        let products: Vec<String> = bucket
            .products
            .iter()
            .map(|p| format!("{}·{}", p.left, p.right))
            .collect();
        self.lines.push(format!("{head}{}", products.join(" + ")));
        match mode {
            ApproxMode::Stepwise => {
                let terms: Vec<String> = bucket
                    .products
                    .iter()
                    .map(|p| p.value.to_string())
                    .collect();
                self.lines
                    .push(format!("{pad}≈ {} = {}", terms.join(" + "), bucket.label));
            }
            ApproxMode::Deferred => {
                let terms: Vec<String> = bucket
                    .products
                    .iter()
                    .map(|p| p.value.label.to_string())
                    .collect();
                let exact = Label::exact(bucket.label.label.scale(), bucket.exact.clone());
                let rounded = if exact == bucket.label.label {
                    String::new()
                } else {
                    format!(" ≈ {}", bucket.label)
                };
                self.lines.push(format!(
                    "{pad}= ({})({}) = {exact}({}){rounded}",
                    terms.join(" + "),
                    bucket.label.confidence,
                    bucket.label.confidence,
                ));
            }
        }
    }
}

fn finish(
    q1: &Qbba,
    cfg: FusionConfig,
    entries: Vec<(Proposition, bool, EnrichedLabel, Rational)>,
    conflict_detail: Vec<ConflictPair>,
    trace: Vec<String>,
) -> FusionResult {
    let mut fused = Qbba::new(
        q1.frame().clone(),
        q1.model().clone(),
        q1.scale().clone(),
        q1.enrichment().clone(),
    );
    let mut conflict = BTreeMap::new();
    let mut unrounded = BTreeMap::new();
    let mut total = Rational::zero();
    for (key, is_conflict, label, exact) in entries {
        total += label.label.index();
        unrounded.insert(key.clone(), exact);
        if is_conflict {
            conflict.insert(key, label);
        } else {
            fused.insert(key, label);
        }
    }
    let quasi_normalized = total == Rational::from_integer(q1.scale().max_index().into());
    FusionResult {
        config: cfg,
        fused,
        conflict,
        unrounded,
        conflict_detail,
        quasi_normalized,
        trace,
    }
}

fn mode_note(mode: ApproxMode) -> &'static str {
    match mode {
        ApproxMode::Stepwise => "approximation: after every operation",
        ApproxMode::Deferred => "approximation: once per bucket, after exact evaluation",
    }
}

/// Conjunctive rule: every product `qm1(X)·qm2(Y)` goes to `X∩Y`, or to a
/// conflict bucket when the model makes `X∩Y` empty.
pub fn conjunctive_fuse(q1: &Qbba, q2: &Qbba, cfg: FusionConfig) -> Result<FusionResult> {
    let conj = conjunction(q1, q2, cfg)?;
    let mut tracer = Tracer {
        frame: q1.frame(),
        lines: vec![format!("rule: conjunctive; {}", mode_note(cfg.mode))],
    };
    for b in &conj.buckets {
        tracer.bucket("qm12", b, cfg.mode);
    }
    let entries = conj
        .buckets
        .into_iter()
        .map(|b| (b.key, b.conflict, b.label, b.exact))
        .collect();
    Ok(finish(q1, cfg, entries, conj.pairs, tracer.lines))
}

/// Shares of the product `left·right` for `left` and `right` respectively.
fn pcr5_shares(pair: &ConflictPair, how: Combiner, mode: ApproxMode) -> Result<(Share, Share)> {
    let (x, y) = (&pair.left_mass, &pair.right_mass);
    let denominator = q_add(&x.label, &y.label, mode)?;
    if denominator.is_null() {
        return Err(Error::DegenerateProportion {
            left: x.to_string(),
            right: y.to_string(),
        });
    }
    let share = |own: &EnrichedLabel, other: &EnrichedLabel| -> Result<Share> {
        let label = match mode {
            ApproxMode::Deferred => {
                let numerator = q_mul(&q_mul(&own.label, &own.label, mode)?, &other.label, mode)?;
                q_div_internal(&numerator, &denominator, mode)?
            }
            ApproxMode::Stepwise => {
                let ratio = q_div_internal(&pair.product.label, &denominator, mode)?;
                q_mul(&own.label, &ratio, mode)?
            }
        };
        let (c_own, c_other) = (&own.confidence, &other.confidence);
        let confidence = combine_all([c_own, c_own, c_other, c_own, c_other], how)?;
        Ok(Share {
            exact: label.index().clone(),
            label: EnrichedLabel::new(approximate_mass(&label), confidence),
        })
    };
    Ok((share(x, y)?, share(y, x)?))
}

/// PCR5: each conflicting product goes back to the two propositions that
/// produced it, in proportion to their masses.
pub fn pcr5_fuse(q1: &Qbba, q2: &Qbba, cfg: FusionConfig) -> Result<FusionResult> {
    let conj = conjunction(q1, q2, cfg)?;
    let mut tracer = Tracer {
        frame: q1.frame(),
        lines: vec![format!("rule: pcr5; {}", mode_note(cfg.mode))],
    };
    for b in &conj.buckets {
        tracer.bucket("qm12", b, cfg.mode);
    }

    // Terms added to each proposition: (label, exact index).
    let mut received: BTreeMap<Proposition, Vec<(EnrichedLabel, Rational)>> = BTreeMap::new();
    let mut detail = Vec::with_capacity(conj.pairs.len());
    for mut pair in conj.pairs {
        let line = format!(
            "qm1({})·qm2({}) = {}·{} = {}",
            tracer.name(&pair.left),
            tracer.name(&pair.right),
            pair.left_mass,
            pair.right_mass,
            pair.product
        );
        pair.redistribution = if pair.left_mass.label.is_null() && pair.right_mass.label.is_null() {
            tracer
                .lines
                .push(format!("{line}: both masses null, nothing redistributed"));
            Redistribution::Skipped
        } else if pair.product.label.is_null() {
            let confidence = combine_confidence(
                &pair.left_mass.confidence,
                &pair.right_mass.confidence,
                cfg.combiner,
            )?;
            let null = EnrichedLabel::new(q1.scale().zero(), confidence);
            for key in [&pair.left, &pair.right] {
                received
                    .entry(key.clone())
                    .or_default()
                    .push((null.clone(), Rational::zero()));
            }
            tracer.lines.push(format!(
                "{line}: null product, {} and {} each receive {null}",
                tracer.name(&pair.left),
                tracer.name(&pair.right)
            ));
            Redistribution::NullProduct(null)
        } else {
            let (left, right) = pcr5_shares(&pair, cfg.combiner, cfg.mode)?;
            let show = |s: &Share| {
                let exact = Label::exact(q1.scale(), s.exact.clone());
                if exact == s.label.label {
                    s.label.to_string()
                } else {
                    format!("{exact}({}) ≈ {}", s.label.confidence, s.label)
                }
            };
            tracer.lines.push(format!(
                "{line}: x_{} = {}, x_{} = {}",
                tracer.name(&pair.left),
                show(&left),
                tracer.name(&pair.right),
                show(&right)
            ));
            received
                .entry(pair.left.clone())
                .or_default()
                .push((left.label.clone(), left.exact.clone()));
            received
                .entry(pair.right.clone())
                .or_default()
                .push((right.label.clone(), right.exact.clone()));
            Redistribution::Proportional { left, right }
        };
        detail.push(pair);
    }

    let neutral = q1.enrichment().neutral();
    let mut entries = Vec::new();
    let mut base: BTreeMap<Proposition, Bucket> = BTreeMap::new();
    for b in conj.buckets {
        if b.conflict {
            entries.push((
                b.key,
                true,
                EnrichedLabel::new(q1.scale().zero(), neutral.clone()),
                Rational::zero(),
            ));
        } else {
            base.insert(b.key.clone(), b);
        }
    }
    let mut keys: Vec<Proposition> = base.keys().chain(received.keys()).cloned().collect();
    keys.sort();
    keys.dedup();
    for key in keys {
        let mut terms: Vec<(EnrichedLabel, Rational)> = Vec::new();
        if let Some(b) = base.get(&key) {
            terms.push((b.label.clone(), b.exact.clone()));
        }
        terms.extend(received.remove(&key).unwrap_or_default());
        let confidence = combine_all(terms.iter().map(|(l, _)| &l.confidence), cfg.combiner)?;
        let exact: Rational = terms.iter().map(|(_, e)| e).sum();
        let label = match cfg.mode {
            ApproxMode::Stepwise => {
                let labels: Vec<&Label> = terms.iter().map(|(l, _)| &l.label).collect();
                sum_labels(&labels, cfg.mode)?.0
            }
            ApproxMode::Deferred => approximate_mass(&Label::exact(q1.scale(), exact.clone())),
        };
        let unrounded = match cfg.mode {
            ApproxMode::Stepwise => label.index().clone(),
            ApproxMode::Deferred => exact.clone(),
        };
        let result = EnrichedLabel::new(label, confidence);
        if terms.len() > 1 {
            let shown: Vec<String> = match cfg.mode {
                ApproxMode::Stepwise => terms.iter().map(|(l, _)| l.to_string()).collect(),
                ApproxMode::Deferred => terms
                    .iter()
                    .map(|(_, e)| Label::exact(q1.scale(), e.clone()).to_string())
                    .collect(),
            };
            let rhs = match cfg.mode {
                ApproxMode::Stepwise => result.to_string(),
                ApproxMode::Deferred => format!(
                    "{}({}) ≈ {result}",
                    Label::exact(q1.scale(), exact),
                    result.confidence
                ),
            };
            tracer.lines.push(format!(
                "qmPCR5({}) = {} = {rhs}",
                tracer.name(&key),
                shown.join(" + ")
            ));
        } else {
            tracer
                .lines
                .push(format!("qmPCR5({}) = {result}", tracer.name(&key)));
        }
        entries.push((key, false, result, unrounded));
    }
    for (key, _, label, _) in entries.iter().filter(|e| e.1) {
        tracer
            .lines
            .push(format!("qmPCR5({}) = {label}", tracer.name(key)));
    }
    Ok(finish(q1, cfg, entries, detail, tracer.lines))
}

/// Numeric redistribution of one conflicting product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericShare {
    pub left: Proposition,
    pub right: Proposition,
    pub product: Rational,
    pub left_share: Rational,
    pub right_share: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericFusionResult {
    pub masses: BTreeMap<Proposition, Rational>,
    /// Keyed by the unreduced intersection, as in [`FusionResult`].
    pub conflict: BTreeMap<Proposition, Rational>,
    pub shares: Vec<NumericShare>,
}

impl NumericFusionResult {
    pub fn total(&self) -> Rational {
        self.masses.values().chain(self.conflict.values()).sum()
    }
}

fn numeric_check(m1: &NumericBba, m2: &NumericBba) -> Result<()> {
    if m1.frame() != m2.frame() {
        return Err(Error::FrameMismatch);
    }
    if m1.model() != m2.model() {
        return Err(Error::ModelMismatch);
    }
    Ok(())
}

pub fn numeric_conjunctive(m1: &NumericBba, m2: &NumericBba) -> Result<NumericFusionResult> {
    numeric_check(m1, m2)?;
    let mut masses = BTreeMap::new();
    let mut conflict = BTreeMap::new();
    let mut shares = Vec::new();
    for (k1, a) in m1.masses() {
        for (k2, b) in m2.masses() {
            let product = a * b;
            let meet = prop_intersect(k1, k2);
            let reduced = reduce_under_model(&meet, m1.model());
            if reduced.is_empty() {
                shares.push(NumericShare {
                    left: k1.clone(),
                    right: k2.clone(),
                    product: product.clone(),
                    left_share: Rational::zero(),
                    right_share: Rational::zero(),
                });
                *conflict.entry(meet).or_insert_with(Rational::zero) += product;
            } else {
                *masses.entry(reduced).or_insert_with(Rational::zero) += product;
            }
        }
    }
    Ok(NumericFusionResult {
        masses,
        conflict,
        shares,
    })
}

pub fn numeric_pcr5(m1: &NumericBba, m2: &NumericBba) -> Result<NumericFusionResult> {
    let mut out = numeric_conjunctive(m1, m2)?;
    for share in &mut out.shares {
        let a = m1.mass(&share.left);
        let b = m2.mass(&share.right);
        let denominator = &a + &b;
        if denominator.is_zero() {
            if !share.product.is_zero() {
                return Err(Error::DegenerateProportion {
                    left: m1.frame().render(&share.left),
                    right: m1.frame().render(&share.right),
                });
            }
            continue;
        }
        share.left_share = &a * &share.product / &denominator;
        share.right_share = &b * &share.product / &denominator;
        *out.masses
            .entry(share.left.clone())
            .or_insert_with(Rational::zero) += &share.left_share;
        *out.masses
            .entry(share.right.clone())
            .or_insert_with(Rational::zero) += &share.right_share;
    }
    for value in out.conflict.values_mut() {
        *value = Rational::zero();
    }
    Ok(out)
}
