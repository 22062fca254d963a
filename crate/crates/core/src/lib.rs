//! Corpus analysis for happiness-scored micro-blog posts.
//!
//! The crate bins scored posts into polarity classes, runs a small
//! deterministic shallow parser over their sentences, matches frame,
//! category and gazetteer lexicons, learns AutoSlog-TS style
//! lexico-syntactic patterns with per-class statistics, ranks features by
//! information gain and trains a linear max-margin classifier.
//!
//! The [`pipeline`] module wires these stages together behind the
//! `wellbeing` command-line tool; [`synth`] generates labeled corpora for
//! tests and demos.

pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod lexicons;
pub mod model;
pub mod patterns;
pub mod pipeline;
pub mod resources;
pub mod synth;
pub mod text;

pub use error::{Error, Result};

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Polarity class of a post or sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
    Neutral,
}

impl Polarity {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
            Polarity::Neutral => "neutral",
        }
    }

    /// +1 for positive, -1 for negative, `None` for neutral.
    pub fn sign(self) -> Option<f64> {
        match self {
            Polarity::Positive => Some(1.0),
            Polarity::Negative => Some(-1.0),
            Polarity::Neutral => None,
        }
    }

    pub fn opposite(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
            Polarity::Neutral => Polarity::Neutral,
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Polarity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "positive" | "pos" => Ok(Polarity::Positive),
            "negative" | "neg" => Ok(Polarity::Negative),
            "neutral" => Ok(Polarity::Neutral),
            other => Err(format!("unknown polarity label {other:?}")),
        }
    }
}
