//! AutoSlog-TS style lexico-syntactic patterns: sixteen templates over
//! chunked sentences, per-class occurrence statistics, threshold selection,
//! an F1 threshold sweep and substring family reports.

mod families;
mod stats;
mod sweep;
mod templates;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use families::{report_families, AnchorPosition, FamilyCounts, FamilyQuery, FamilyReport};
pub use stats::{
    accumulate, merge_tables, parse_pattern_tsv, select, write_pattern_tsv, PatternStats, PatternTable, ThresholdParams,
};
pub use sweep::{classify, majority_class, sweep, SweepCell, SweepGrid, SweepResult};
pub use templates::instantiate;

/// Template number, 1 through 16.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TemplateId(u8);

impl TemplateId {
    pub const COUNT: u8 = 16;

    pub fn new(id: u8) -> Option<TemplateId> {
        (1..=Self::COUNT).contains(&id).then_some(TemplateId(id))
    }

    pub fn all() -> impl Iterator<Item = TemplateId> {
        (1..=Self::COUNT).map(TemplateId)
    }

    pub fn number(self) -> u8 {
        self.0
    }

    /// Skeleton with the extracted slot in angle brackets.
    pub fn describe(self) -> &'static str {
        match self.0 {
            1 => "<subj> PassVP",
            2 => "<subj> ActVP",
            3 => "<subj> ActVP Dobj",
            4 => "<subj> ActInfVP",
            5 => "<subj> PassInfVP",
            6 => "<subj> AuxVP Dobj",
            7 => "<subj> AuxVP Adj",
            8 => "ActVP <dobj>",
            9 => "InfVP <dobj>",
            10 => "ActInfVP <dobj>",
            11 => "Subj AuxVP <dobj>",
            12 => "NP Prep <np>",
            13 => "ActVP Prep <np>",
            14 => "PassVP Prep <np>",
            15 => "InfVP Prep <np>",
            _ => "<possessive> NP",
        }
    }

    pub fn slot(self) -> Slot {
        match self.0 {
            1..=7 => Slot::Subj,
            8..=11 => Slot::Dobj,
            12..=15 => Slot::Np,
            _ => Slot::Possessive,
        }
    }
}

impl fmt::Display for TemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which position a template extracts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Slot {
    Subj,
    Dobj,
    Np,
    Possessive,
}

impl Slot {
    pub fn as_str(self) -> &'static str {
        match self {
            Slot::Subj => "subj",
            Slot::Dobj => "dobj",
            Slot::Np => "np",
            Slot::Possessive => "possessive",
        }
    }
}

impl FromStr for Slot {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Slot::Subj, Slot::Dobj, Slot::Np, Slot::Possessive]
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| format!("unknown slot {s:?}"))
    }
}

/// An instantiated template: fixed lexical anchors plus the extracted slot.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PatternInstance {
    pub template: TemplateId,
    /// Uppercased surface norms; a negated verb anchor carries a `NOT_` prefix.
    pub anchors: Vec<String>,
    pub slot: Slot,
}

impl PatternInstance {
    pub fn anchor_key(&self) -> String {
        self.anchors.join("_")
    }

    /// Stable feature name, e.g. `T13:NOT_TALK_TO:np`.
    pub fn feature_name(&self) -> String {
        format!("T{}:{}:{}", self.template, self.anchor_key(), self.slot.as_str())
    }
}

impl fmt::Display for PatternInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.feature_name())
    }
}
