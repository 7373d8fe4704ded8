//! Fusion-problem documents.
//!
//! ```json
//! {
//!   "frame": ["A", "B"],
//!   "model": "shafer",
//!   "scale": {"n": 5},
//!   "enrichment": "numeric",
//!   "sources": {
//!     "qm1": {"A": "L1(0.3)", "B": "L2(1.1)", "A|B": "L3(0.8)"},
//!     "qm2": {"A": "L4(0.6)", "B": "L2(0.7)", "A|B": "L0(1)"}
//!   }
//! }
//! ```
//!
//! `model` is `"free"`, `"shafer"` (the default) or a list of propositions constrained to
//! be empty. `enrichment` is `"none"` (the default), `"numeric"` or
//! `{"degrees": [...], "neutral": "O"}`. Source maps keep their order.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use qbelief::{DegreeScale, EnrichedLabel, Enrichment, Frame, LabelScale, Model, Qbba};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub frame: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    pub scale: ScaleSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enrichment: Option<EnrichmentSpec>,
    /// Largest frame that may be enumerated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<usize>,
    pub sources: IndexMap<String, IndexMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelSpec {
    Named(ModelName),
    Constraints(Vec<String>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelName {
    Free,
    Shafer,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaleSpec {
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EnrichmentSpec {
    Named(EnrichmentName),
    Degrees {
        degrees: Vec<String>,
        neutral: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnrichmentName {
    None,
    Numeric,
}

/// A document parsed into library values.
#[derive(Clone, Debug)]
pub struct Problem {
    pub frame: Frame,
    pub model: Model,
    pub scale: LabelScale,
    pub enrichment: Enrichment,
    pub sources: IndexMap<String, Qbba>,
}

impl ProblemDocument {
    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("invalid document: {e}"))
    }

    /// Builds the frame, model, scale and assignments. Every problem found
    /// is reported, one message per entry.
    pub fn resolve(&self) -> Result<Problem, Vec<String>> {
        let mut frame = Frame::new(self.frame.iter().cloned()).map_err(|e| vec![e.to_string()])?;
        if let Some(limit) = self.limit {
            frame = frame.with_limit(limit);
        }
        let model = match &self.model {
            Some(ModelSpec::Named(ModelName::Free)) => Model::Free,
            Some(ModelSpec::Named(ModelName::Shafer)) | None => Model::Shafer,
            Some(ModelSpec::Constraints(list)) => {
                let mut constraints = Vec::new();
                let mut errors = Vec::new();
                for text in list {
                    match frame.parse(text) {
                        Ok(p) => constraints.push(p),
                        Err(e) => errors.push(format!("model: `{text}`: {e}")),
                    }
                }
                if !errors.is_empty() {
                    return Err(errors);
                }
                Model::hybrid(constraints).map_err(|e| vec![format!("model: {e}")])?
            }
        };
        let scale = match &self.scale.names {
            Some(names) => LabelScale::with_names(self.scale.n, names.clone()),
            None => LabelScale::new(self.scale.n),
        }
        .map_err(|e| vec![format!("scale: {e}")])?;
        let enrichment = match &self.enrichment {
            Some(EnrichmentSpec::Named(EnrichmentName::None)) | None => Enrichment::None,
            Some(EnrichmentSpec::Named(EnrichmentName::Numeric)) => Enrichment::Numeric,
            Some(EnrichmentSpec::Degrees { degrees, neutral }) => {
                let position = degrees.iter().position(|d| d == neutral).ok_or_else(|| {
                    vec![format!(
                        "enrichment: neutral degree `{neutral}` is not in the list"
                    )]
                })?;
                let scale = DegreeScale::new(degrees.clone(), position)
                    .map_err(|e| vec![format!("enrichment: {e}")])?;
                Enrichment::Qualitative(scale)
            }
        };
        let mut sources = IndexMap::new();
        let mut errors = Vec::new();
        for (name, entries) in &self.sources {
            let mut q = Qbba::new(
                frame.clone(),
                model.clone(),
                scale.clone(),
                enrichment.clone(),
            );
            for (key, mass) in entries {
                let parsed_key = frame
                    .parse(key)
                    .map_err(|e| format!("{name}: key `{key}`: {e}"));
                let parsed_mass = EnrichedLabel::parse(mass, &scale, enrichment.degree_scale())
                    .map_err(|e| format!("{name}: {key}: mass `{mass}`: {e}"));
                match (parsed_key, parsed_mass) {
                    (Ok(k), Ok(m)) => {
                        if q.get(&k).is_some() {
                            errors.push(format!(
                                "{name}: key `{key}` names a proposition listed earlier"
                            ));
                        }
                        q.insert(k, m);
                    }
                    (k, m) => errors.extend(k.err().into_iter().chain(m.err())),
                }
            }
            sources.insert(name.clone(), q);
        }
        if errors.is_empty() {
            Ok(Problem {
                frame,
                model,
                scale,
                enrichment,
                sources,
            })
        } else {
            Err(errors)
        }
    }
}
