//! Sparse feature extraction under the feature schemes, information-gain
//! ranking and per-sentence feature density.

mod extract;
mod infogain;
mod io;
mod space;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::lexicons::WellBeing;

pub use extract::{extract, sentence_features, FeatureResources};
pub use infogain::{information_gain, information_gain_counts, rank, RankedFeature};
pub(crate) use io::density_by_class;
pub use io::{density, parse_vectors, write_ranking_tsv, write_vectors, DensityRow, LabeledVector};
pub use space::{FeatureSpace, FeatureVector};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Scheme {
    Unigram,
    CategoryLex,
    FrameAll,
    FrameSubset(BTreeSet<WellBeing>),
    Pattern,
}

impl Scheme {
    /// The ten experiment rows in report order, with their display names.
    pub fn presets() -> Vec<(String, Scheme)> {
        let subset = |cs: &[WellBeing]| Scheme::FrameSubset(cs.iter().copied().collect());
        vec![
            ("Unigram".into(), Scheme::Unigram),
            ("CategoryLex".into(), Scheme::CategoryLex),
            ("FrameAll".into(), Scheme::FrameAll),
            ("Goals".into(), subset(&[WellBeing::Goal])),
            (
                "Eudaimonic".into(),
                subset(&[WellBeing::Autonomy, WellBeing::Competence, WellBeing::Connection]),
            ),
            ("Savouring".into(), subset(&[WellBeing::Savouring])),
            ("Autonomy".into(), subset(&[WellBeing::Autonomy])),
            ("Competence".into(), subset(&[WellBeing::Competence])),
            ("Connection".into(), subset(&[WellBeing::Connection])),
            ("Pattern".into(), Scheme::Pattern),
        ]
    }

    /// Preset display name if this scheme is one, else the canonical form.
    pub fn display_name(&self) -> String {
        Scheme::presets()
            .into_iter()
            .find(|(_, s)| s == self)
            .map(|(n, _)| n)
            .unwrap_or_else(|| self.to_string())
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::Unigram => f.write_str("Unigram"),
            Scheme::CategoryLex => f.write_str("CategoryLex"),
            Scheme::FrameAll => f.write_str("FrameAll"),
            Scheme::Pattern => f.write_str("Pattern"),
            Scheme::FrameSubset(cs) => {
                let names: Vec<&str> = cs.iter().map(|c| c.as_str()).collect();
                write!(f, "FrameSubset({})", names.join("+"))
            }
        }
    }
}

impl FromStr for Scheme {
    type Err = String;

    /// Accepts preset names (any case), `liwc`, `frames`, and
    /// `FrameSubset(A+B)` / `frames:A+B`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let lower = t.to_lowercase();
        if let Some((_, scheme)) = Scheme::presets().into_iter().find(|(n, _)| n.to_lowercase() == lower) {
            return Ok(scheme);
        }
        match lower.as_str() {
            "liwc" | "category" | "categories" => return Ok(Scheme::CategoryLex),
            "frames" | "frame" => return Ok(Scheme::FrameAll),
            "patterns" => return Ok(Scheme::Pattern),
            "goal" => return Ok(Scheme::FrameSubset([WellBeing::Goal].into())),
            _ => {}
        }
        let inner = lower
            .strip_prefix("framesubset(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| lower.strip_prefix("frames:"))
            .ok_or_else(|| format!("unknown feature scheme {t:?}"))?;
        let cats = inner
            .split(['+', ','])
            .map(|c| c.parse::<WellBeing>())
            .collect::<Result<BTreeSet<_>, _>>()?;
        if cats.is_empty() {
            return Err(format!("scheme {t:?} names no categories"));
        }
        Ok(Scheme::FrameSubset(cats))
    }
}
