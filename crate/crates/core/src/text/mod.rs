//! Deterministic shallow syntax: tokens, coarse POS tags and NP/VP/PP chunks.
//!
//! This is the substrate the pattern templates match against. Everything
//! here is a pure function of its input.

mod chunker;
mod pretagged;
mod tagger;
mod tokenize;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::Polarity;

pub use chunker::chunk;
pub use pretagged::{parse_pretagged, parse_pretagged_str, write_pretagged};
pub use tagger::pos_tag;
pub(crate) use tagger::POSSESSIVES;
pub use tokenize::{is_negator_surface, normalize, tokenize};

/// Coarse part-of-speech tag set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pos {
    #[serde(rename = "NOUN")]
    Noun,
    #[serde(rename = "VERB")]
    Verb,
    #[serde(rename = "AUX")]
    Aux,
    #[serde(rename = "ADJ")]
    Adj,
    #[serde(rename = "ADV")]
    Adv,
    #[serde(rename = "PRON")]
    Pron,
    #[serde(rename = "DET")]
    Det,
    #[serde(rename = "PREP")]
    Prep,
    #[serde(rename = "CONJ")]
    Conj,
    #[serde(rename = "NUM")]
    Num,
    #[serde(rename = "PART")]
    Part,
    #[serde(rename = "PUNCT")]
    Punct,
    #[serde(rename = "OTHER")]
    Other,
}

impl Pos {
    pub const ALL: [Pos; 13] = [
        Pos::Noun,
        Pos::Verb,
        Pos::Aux,
        Pos::Adj,
        Pos::Adv,
        Pos::Pron,
        Pos::Det,
        Pos::Prep,
        Pos::Conj,
        Pos::Num,
        Pos::Part,
        Pos::Punct,
        Pos::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Noun => "NOUN",
            Pos::Verb => "VERB",
            Pos::Aux => "AUX",
            Pos::Adj => "ADJ",
            Pos::Adv => "ADV",
            Pos::Pron => "PRON",
            Pos::Det => "DET",
            Pos::Prep => "PREP",
            Pos::Conj => "CONJ",
            Pos::Num => "NUM",
            Pos::Part => "PART",
            Pos::Punct => "PUNCT",
            Pos::Other => "OTHER",
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pos {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Pos::ALL
            .iter()
            .copied()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown POS tag {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub surface: String,
    /// Lowercased surface with apostrophes removed (`can't` -> `cant`).
    pub norm: String,
    pub pos: Pos,
    pub is_negator: bool,
}

impl Token {
    /// Untagged token (`Pos::Other` until [`pos_tag`] runs).
    pub fn new(surface: &str) -> Token {
        Token {
            surface: surface.to_string(),
            norm: normalize(surface),
            pos: Pos::Other,
            is_negator: is_negator_surface(surface),
        }
    }

    pub fn with_pos(surface: &str, pos: Pos) -> Token {
        Token {
            pos,
            ..Token::new(surface)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChunkKind {
    Np,
    Vp,
    Pp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Voice {
    Active,
    Passive,
    Infinitive,
    None,
}

/// A contiguous phrase over token indices `start..end`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chunk {
    pub kind: ChunkKind,
    pub start: usize,
    pub end: usize,
    pub head: usize,
    /// `Voice::None` for NP and PP chunks.
    pub voice: Voice,
    pub negated: bool,
    pub has_aux: bool,
}

impl Chunk {
    pub fn span(&self) -> std::ops::Range<usize> {
        self.start..self.end
    }

    pub fn contains(&self, i: usize) -> bool {
        self.start <= i && i < self.end
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedSentence {
    pub id: String,
    pub tokens: Vec<Token>,
    pub chunks: Vec<Chunk>,
    pub label: Polarity,
}

impl ParsedSentence {
    /// Tokenizes, tags and chunks raw sentence text.
    pub fn parse(id: impl Into<String>, text: &str, label: Polarity) -> ParsedSentence {
        let tokens = pos_tag(tokenize(text));
        ParsedSentence::from_tagged(id, tokens, label)
    }

    /// Chunks already tagged tokens.
    pub fn from_tagged(id: impl Into<String>, tokens: Vec<Token>, label: Polarity) -> ParsedSentence {
        let chunks = chunk(&tokens);
        ParsedSentence {
            id: id.into(),
            tokens,
            chunks,
            label,
        }
    }

    pub fn chunks_of(&self, kind: ChunkKind) -> impl Iterator<Item = &Chunk> {
        self.chunks.iter().filter(move |c| c.kind == kind)
    }

    pub fn text(&self) -> String {
        self.tokens.iter().map(|t| t.surface.as_str()).collect::<Vec<_>>().join(" ")
    }
}
