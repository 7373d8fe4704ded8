//! Table and JSON rendering of fusion results.

use std::collections::BTreeSet;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use qbelief::ratio::{format_rational, parse_rational};
use qbelief::{
    ApproxMode, Combiner, Confidence, EnrichedLabel, Enrichment, Frame, FusionResult, Label,
    LabelScale, Proposition, Qbba, Rule,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
}

/// Column order: singletons, unions of atoms, other propositions, then
/// conflict buckets. Ties follow proposition order.
pub fn columns(sources: &[(&str, &Qbba)], result: &FusionResult) -> Vec<Proposition> {
    let mut keys: BTreeSet<Proposition> = sources
        .iter()
        .flat_map(|(_, q)| q.focal_elements().cloned())
        .collect();
    keys.extend(result.fused.focal_elements().cloned());
    keys.extend(result.conflict.keys().cloned());
    let group = |p: &Proposition| {
        if result.conflict.contains_key(p) {
            3
        } else if p.is_singleton() {
            0
        } else if p.is_atom_union() {
            1
        } else {
            2
        }
    };
    let mut keys: Vec<Proposition> = keys.into_iter().collect();
    keys.sort_by_key(|p| group(p));
    keys
}

pub fn rule_name(rule: Rule) -> &'static str {
    match rule {
        Rule::Conjunctive => "conjunctive",
        Rule::Pcr5 => "pcr5",
    }
}

pub fn mode_name(mode: ApproxMode) -> &'static str {
    match mode {
        ApproxMode::Stepwise => "stepwise",
        ApproxMode::Deferred => "deferred",
    }
}

pub fn combiner_name(how: Combiner) -> &'static str {
    match how {
        Combiner::Min => "min",
        Combiner::Average => "average",
        Combiner::Interval => "interval",
    }
}

/// Enriched-label syntax; plain labels when the problem has no enrichment.
pub fn cell(mass: &EnrichedLabel, enrichment: &Enrichment) -> String {
    match enrichment {
        Enrichment::None => mass.label.to_string(),
        _ => mass.to_string(),
    }
}

fn heading(frame: &Frame, p: &Proposition, unicode: bool) -> String {
    if unicode {
        frame.render_unicode(p)
    } else {
        frame.render(p)
    }
}

pub fn render_table(
    sources: &[(&str, &Qbba)],
    result: &FusionResult,
    unicode: bool,
    trace: bool,
) -> String {
    let frame = result.fused.frame();
    let enrichment = result.fused.enrichment();
    let cols = columns(sources, result);
    let result_name = match result.config.rule {
        Rule::Conjunctive => "qm12",
        Rule::Pcr5 => "qmPCR5",
    };

    let mut grid: Vec<Vec<String>> = Vec::new();
    let mut header = vec![String::new()];
    header.extend(cols.iter().map(|p| heading(frame, p, unicode)));
    grid.push(header);
    for (name, q) in sources {
        let mut row = vec![name.to_string()];
        row.extend(
            cols.iter()
                .map(|p| q.get(p).map(|m| cell(m, enrichment)).unwrap_or_default()),
        );
        grid.push(row);
    }
    let mut row = vec![result_name.to_string()];
    row.extend(cols.iter().map(|p| {
        result
            .get(p)
            .map(|m| cell(m, enrichment))
            .unwrap_or_default()
    }));
    grid.push(row);

    let widths: Vec<usize> = (0..=cols.len())
        .map(|c| grid.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &grid {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(text, w)| format!("{text:<w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }

    let fused: Vec<String> = cols
        .iter()
        .filter_map(|p| {
            result
                .get(p)
                .map(|m| format!("{}: {}", heading(frame, p, unicode), cell(m, enrichment)))
        })
        .collect();
    out.push('\n');
    out.push_str(&format!("fused: {}\n", fused.join("  ")));
    let verdict = if result.quasi_normalized { "yes" } else { "no" };
    out.push_str(&format!("quasi-normalized: {verdict}\n"));
    if trace {
        out.push_str("\nderivation:\n");
        for line in &result.trace {
            out.push_str("  ");
            out.push_str(line);
            out.push('\n');
        }
    }
    out
}

/// A label in the JSON output: exact index and confidence text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonLabel {
    pub index: String,
    pub confidence: String,
}

impl JsonLabel {
    pub fn new(mass: &EnrichedLabel) -> Self {
        Self {
            index: format_rational(mass.label.index()),
            confidence: mass.confidence.to_string(),
        }
    }

    pub fn to_enriched(
        &self,
        scale: &LabelScale,
        enrichment: &Enrichment,
    ) -> Result<EnrichedLabel, String> {
        let index =
            parse_rational(&self.index).ok_or_else(|| format!("bad index `{}`", self.index))?;
        let confidence = Confidence::parse(&self.confidence, enrichment.degree_scale())
            .map_err(|e| e.to_string())?;
        Ok(EnrichedLabel::new(Label::exact(scale, index), confidence))
    }
}

/// Machine-readable fusion output. Propositions are keyed by their
/// canonical text; maps follow the table's column order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusionReport {
    pub rule: String,
    pub approx: String,
    pub confidence: String,
    pub sources: Vec<String>,
    pub masses: IndexMap<String, JsonLabel>,
    pub conflict: IndexMap<String, JsonLabel>,
    /// Exact bucket indices before the final rounding.
    pub unrounded: IndexMap<String, String>,
    pub quasi_normalized: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<String>,
}

impl FusionReport {
    pub fn new(sources: &[(&str, &Qbba)], result: &FusionResult, trace: bool) -> Self {
        let frame = result.fused.frame();
        let cols = columns(sources, result);
        let mut masses = IndexMap::new();
        let mut conflict = IndexMap::new();
        let mut unrounded = IndexMap::new();
        for p in &cols {
            let name = frame.render(p);
            if let Some(m) = result.fused.get(p) {
                masses.insert(name.clone(), JsonLabel::new(m));
            } else if let Some(m) = result.conflict.get(p) {
                conflict.insert(name.clone(), JsonLabel::new(m));
            }
            if let Some(exact) = result.unrounded.get(p) {
                unrounded.insert(name, format_rational(exact));
            }
        }
        Self {
            rule: rule_name(result.config.rule).into(),
            approx: mode_name(result.config.mode).into(),
            confidence: combiner_name(result.config.combiner).into(),
            sources: sources.iter().map(|(name, _)| name.to_string()).collect(),
            masses,
            conflict,
            unrounded,
            quasi_normalized: result.quasi_normalized,
            trace: if trace {
                result.trace.clone()
            } else {
                Vec::new()
            },
        }
    }
}

pub fn render_json(sources: &[(&str, &Qbba)], result: &FusionResult, trace: bool) -> String {
    let report = FusionReport::new(sources, result, trace);
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    text
}

pub fn render(
    format: Format,
    sources: &[(&str, &Qbba)],
    result: &FusionResult,
    unicode: bool,
    trace: bool,
) -> String {
    match format {
        Format::Table => render_table(sources, result, unicode, trace),
        Format::Json => render_json(sources, result, trace),
    }
}
