//! Frames of discernment and the elements of their hyper-power set.
//!
//! A [`Proposition`] is kept in union-of-intersections form: a set of
//! generator sets (bitmasks over the frame's atoms), each standing for the
//! intersection of its atoms, joined by union. Absorption keeps the set an
//! antichain, which makes the form unique in the free distributive lattice.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, ParseError, Result};

/// Atoms per frame that fit in a generator bitmask.
pub const MAX_ATOMS: usize = 32;

pub const DEFAULT_ENUMERATION_LIMIT: usize = 4;

const RESERVED: &str = "&|()!~-,";

/// Keyword used to write the empty proposition.
pub const EMPTY_KEYWORD: &str = "EMPTY";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frame(Arc<FrameSpec>);

#[derive(Debug, PartialEq, Eq, Hash)]
struct FrameSpec {
    atoms: Vec<String>,
    limit: usize,
}

impl Frame {
    pub fn new<S: Into<String>>(atoms: impl IntoIterator<Item = S>) -> Result<Self> {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if atoms.is_empty() {
            return Err(Error::InvalidFrame(
                "a frame needs at least one atom".into(),
            ));
        }
        if atoms.len() > MAX_ATOMS {
            return Err(Error::InvalidFrame(format!(
                "{} atoms exceed the maximum of {MAX_ATOMS}",
                atoms.len()
            )));
        }
        for (i, atom) in atoms.iter().enumerate() {
            let bad = atom.is_empty()
                || atom == EMPTY_KEYWORD
                || atom
                    .chars()
                    .any(|c| c.is_whitespace() || RESERVED.contains(c) || c == '∪' || c == '∩');
            if bad {
                return Err(Error::InvalidFrame(format!("invalid atom name `{atom}`")));
            }
            if atoms[..i].contains(atom) {
                return Err(Error::InvalidFrame(format!("duplicate atom `{atom}`")));
            }
        }
        Ok(Self(Arc::new(FrameSpec {
            atoms,
            limit: DEFAULT_ENUMERATION_LIMIT,
        })))
    }

    /// Same atoms with a different enumeration cap.
    pub fn with_limit(&self, limit: usize) -> Self {
        Self(Arc::new(FrameSpec {
            atoms: self.0.atoms.clone(),
            limit,
        }))
    }

    pub fn atoms(&self) -> &[String] {
        &self.0.atoms
    }

    pub fn len(&self) -> usize {
        self.0.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.atoms.is_empty()
    }

    pub fn limit(&self) -> usize {
        self.0.limit
    }

    fn full_mask(&self) -> u32 {
        if self.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.len()) - 1
        }
    }

    /// Whether every atom mentioned by `p` belongs to this frame.
    pub fn contains(&self, p: &Proposition) -> bool {
        p.terms.iter().all(|t| t & !self.full_mask() == 0)
    }

    pub fn atom(&self, name: &str) -> Option<Proposition> {
        self.0
            .atoms
            .iter()
            .position(|a| a == name)
            .map(Proposition::atom)
    }

    /// Union of all atoms, the total ignorance.
    pub fn total(&self) -> Proposition {
        Proposition::from_terms((0..self.len()).map(|i| 1u32 << i))
    }

    pub fn parse(&self, text: &str) -> Result<Proposition> {
        parse_proposition(text, self)
    }

    /// ASCII rendering: `A&B|C`, `EMPTY` for the empty proposition.
    pub fn render(&self, p: &Proposition) -> String {
        self.render_with(p, "|", "&")
    }

    pub fn render_unicode(&self, p: &Proposition) -> String {
        self.render_with(p, "∪", "∩")
    }

    fn render_with(&self, p: &Proposition, or: &str, and: &str) -> String {
        if p.is_empty() {
            return EMPTY_KEYWORD.to_string();
        }
        p.terms
            .iter()
            .map(|&t| {
                bits(t)
                    .map(|i| self.0.atoms[i].as_str())
                    .collect::<Vec<_>>()
                    .join(and)
            })
            .collect::<Vec<_>>()
            .join(or)
    }
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask & (1 << i) != 0)
}

fn cmp_terms(a: u32, b: u32) -> Ordering {
    a.count_ones()
        .cmp(&b.count_ones())
        .then_with(|| bits(a).cmp(bits(b)))
}

/// An element of `D^Θ`: the empty set or a union of atom intersections.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Proposition {
    terms: Vec<u32>,
}

impl Proposition {
    pub fn empty() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn atom(index: usize) -> Self {
        Self {
            terms: vec![1u32 << index],
        }
    }

    /// Canonicalizes arbitrary generator sets. Zero masks are ignored.
    pub fn from_terms(terms: impl IntoIterator<Item = u32>) -> Self {
        let mut terms: Vec<u32> = terms.into_iter().filter(|&t| t != 0).collect();
        terms.sort_by(|&a, &b| cmp_terms(a, b));
        terms.dedup();
        let mut kept: Vec<u32> = Vec::with_capacity(terms.len());
        // Sorted by size, so any absorbing subset comes first.
        for t in terms {
            if !kept.iter().any(|&k| k & !t == 0) {
                kept.push(t);
            }
        }
        Self { terms: kept }
    }

    pub fn terms(&self) -> &[u32] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// A single atom.
    pub fn is_singleton(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].count_ones() == 1
    }

    /// A union of atoms with no intersections.
    pub fn is_atom_union(&self) -> bool {
        !self.terms.is_empty() && self.terms.iter().all(|t| t.count_ones() == 1)
    }
}

impl Ord for Proposition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.len().cmp(&other.terms.len()).then_with(|| {
            self.terms
                .iter()
                .zip(&other.terms)
                .map(|(&a, &b)| cmp_terms(a, b))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl PartialOrd for Proposition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Proposition {
    /// Frame-free form with atoms written as `#0`, `#1`, ...
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str(EMPTY_KEYWORD);
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|&t| {
                bits(t)
                    .map(|i| format!("#{i}"))
                    .collect::<Vec<_>>()
                    .join("&")
            })
            .collect();
        f.write_str(&rendered.join("|"))
    }
}

pub fn prop_union(p: &Proposition, q: &Proposition) -> Proposition {
    Proposition::from_terms(p.terms.iter().chain(&q.terms).copied())
}

pub fn prop_intersect(p: &Proposition, q: &Proposition) -> Proposition {
    Proposition::from_terms(
        p.terms
            .iter()
            .flat_map(|&a| q.terms.iter().map(move |&b| a | b)),
    )
}

/// Lattice order of the free model: `p ⊆ q` iff every generator set of `p`
/// contains a generator set of `q`.
pub fn is_subset(p: &Proposition, q: &Proposition) -> bool {
    p.terms
        .iter()
        .all(|&a| q.terms.iter().any(|&b| b & !a == 0))
}

/// Whether `p ∩ q` survives the model's constraints.
pub fn intersects(p: &Proposition, q: &Proposition, model: &Model) -> bool {
    !reduce_under_model(&prop_intersect(p, q), model).is_empty()
}

/// Integrity constraints of a frame.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    /// No constraints: every intersection may be non-empty.
    Free,
    /// All atoms pairwise exclusive.
    Shafer,
    /// The listed intersections are empty.
    Hybrid(Vec<Proposition>),
}

impl Model {
    /// Constraints must be pure intersections such as `A&B`.
    pub fn hybrid(empty: Vec<Proposition>) -> Result<Self> {
        for p in &empty {
            if p.terms.len() != 1 {
                return Err(Error::InvalidModel(format!(
                    "constraint `{p}` is not a single intersection"
                )));
            }
        }
        let mut empty = empty;
        empty.sort();
        empty.dedup();
        Ok(Self::Hybrid(empty))
    }

    fn term_is_empty(&self, term: u32) -> bool {
        match self {
            Self::Free => false,
            Self::Shafer => term.count_ones() >= 2,
            Self::Hybrid(constraints) => {
                constraints.iter().any(|c| term & c.terms[0] == c.terms[0])
            }
        }
    }

    pub fn has_constraints(&self) -> bool {
        match self {
            Self::Free => false,
            Self::Shafer => true,
            Self::Hybrid(c) => !c.is_empty(),
        }
    }
}

/// Drops every generator set the model forces to be empty.
pub fn reduce_under_model(p: &Proposition, model: &Model) -> Proposition {
    Proposition {
        terms: p
            .terms
            .iter()
            .copied()
            .filter(|&t| !model.term_is_empty(t))
            .collect(),
    }
}

/// All distinct elements of `D^Θ` under `model`, the empty set included,
/// ordered by term count then lexicographically.
pub fn enumerate_hyper_power_set(frame: &Frame, model: &Model) -> Result<Vec<Proposition>> {
    if frame.len() > frame.limit() {
        return Err(Error::FrameTooLarge {
            size: frame.len(),
            limit: frame.limit(),
        });
    }
    let mut generators: Vec<u32> = (1..=frame.full_mask()).collect();
    generators.sort_by(|&a, &b| cmp_terms(a, b));
    let mut found = Vec::new();
    let mut chosen = Vec::new();
    antichains(&generators, 0, &mut chosen, &mut found);
    let mut out: Vec<Proposition> = found
        .into_iter()
        .map(|terms| reduce_under_model(&Proposition::from_terms(terms), model))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

fn antichains(gens: &[u32], start: usize, chosen: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    out.push(chosen.clone());
    for i in start..gens.len() {
        let g = gens[i];
        if chosen.iter().all(|&c| c & g != c && c & g != g) {
            chosen.push(g);
            antichains(gens, i + 1, chosen, out);
            chosen.pop();
        }
    }
}

/// Parses `expr := term ('|' term)*`, `term := factor ('&' factor)*`,
/// `factor := atom | '(' expr ')'`. `EMPTY` denotes the empty proposition.
pub fn parse_proposition(text: &str, frame: &Frame) -> Result<Proposition> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(ParseError::new(1, "empty proposition").into());
    }
    let mut parser = Parser {
        tokens,
        pos: 0,
        frame,
        end_column: text.chars().count() + 1,
    };
    let p = parser.expr()?;
    if let Some(tok) = parser.tokens.get(parser.pos) {
        return Err(ParseError::new(tok.column, format!("unexpected `{}`", tok.kind)).into());
    }
    Ok(p)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum TokenKind {
    Or,
    And,
    Open,
    Close,
    Name(String),
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Or => f.write_str("|"),
            Self::And => f.write_str("&"),
            Self::Open => f.write_str("("),
            Self::Close => f.write_str(")"),
            Self::Name(n) => f.write_str(n),
        }
    }
}

#[derive(Debug)]
struct Token {
    kind: TokenKind,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        let kind = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '|' | '∪' => TokenKind::Or,
            '&' | '∩' => TokenKind::And,
            '(' => TokenKind::Open,
            ')' => TokenKind::Close,
            '!' | '~' | '-' | '¬' => {
                return Err(ParseError::new(column, "negation is not available in D^Θ"))
            }
            _ => {
                let start = i;
                while i < chars.len()
                    && !chars[i].is_whitespace()
                    && !"|&()!~-¬∪∩".contains(chars[i])
                {
                    i += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Name(chars[start..i].iter().collect()),
                    column,
                });
                continue;
            }
        };
        tokens.push(Token { kind, column });
        i += 1;
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    frame: &'a Frame,
    end_column: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&TokenKind> {
        self.tokens.get(self.pos).map(|t| &t.kind)
    }

    fn expr(&mut self) -> Result<Proposition> {
        let mut acc = self.term()?;
        while self.peek() == Some(&TokenKind::Or) {
            self.pos += 1;
            acc = prop_union(&acc, &self.term()?);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Proposition> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&TokenKind::And) {
            self.pos += 1;
            acc = prop_intersect(&acc, &self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Proposition> {
        let Some(tok) = self.tokens.get(self.pos) else {
            return Err(ParseError::new(self.end_column, "unexpected end of input").into());
        };
        let column = tok.column;
        match tok.kind.clone() {
            TokenKind::Name(name) => {
                self.pos += 1;
                if name == EMPTY_KEYWORD {
                    return Ok(Proposition::empty());
                }
                self.frame
                    .atom(&name)
                    .ok_or(Error::UnknownAtom { atom: name, column })
            }
            TokenKind::Open => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.tokens.get(self.pos) {
                    Some(Token {
                        kind: TokenKind::Close,
                        ..
                    }) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    Some(t) => Err(ParseError::new(
                        t.column,
                        format!("expected `)`, found `{}`", t.kind),
                    )
                    .into()),
                    None => Err(ParseError::new(self.end_column, "missing `)`").into()),
                }
            }
            other => Err(ParseError::new(
                column,
                format!("expected an atom or `(`, found `{other}`"),
            )
            .into()),
        }
    }
}
