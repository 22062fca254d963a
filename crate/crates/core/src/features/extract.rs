use std::collections::{BTreeMap, BTreeSet};

use super::{FeatureSpace, FeatureVector, Scheme};
use crate::lexicons::{CategoryLexicon, Gazetteer, LoadedFrames};
use crate::patterns::{instantiate, PatternInstance};
use crate::text::{ParsedSentence, Pos};
use crate::{Error, Result};

/// Lexicons and pattern sets the schemes draw on. Only the ones a scheme
/// needs must be present.
#[derive(Debug, Clone, Copy, Default)]
pub struct FeatureResources<'a> {
    pub frames: Option<&'a LoadedFrames>,
    pub categories: Option<&'a CategoryLexicon>,
    /// Selected patterns for the Pattern scheme. Without a set every
    /// instance is emitted and the feature space does the selecting.
    pub patterns: Option<&'a BTreeSet<PatternInstance>>,
    /// Applied before pattern instantiation.
    pub gazetteer: Option<&'a Gazetteer>,
}

fn missing(what: &str, scheme: &Scheme) -> Error {
    Error::Config(format!("scheme {scheme} needs {what}, which was not loaded"))
}

/// Named feature counts for one sentence.
pub fn sentence_features(
    sentence: &ParsedSentence,
    scheme: &Scheme,
    res: &FeatureResources<'_>,
) -> Result<BTreeMap<String, u32>> {
    let mut out: BTreeMap<String, u32> = BTreeMap::new();
    let mut add = |name: String, n: u32| *out.entry(name).or_insert(0) += n;
    match scheme {
        Scheme::Unigram => {
            for t in sentence.tokens.iter().filter(|t| t.pos != Pos::Punct) {
                add(t.norm.clone(), 1);
            }
        }
        Scheme::CategoryLex => {
            let lex = res.categories.ok_or_else(|| missing("a category dictionary", scheme))?;
            for (c, n) in lex.match_categories(&sentence.tokens) {
                add(c, n as u32);
            }
        }
        Scheme::FrameAll | Scheme::FrameSubset(_) => {
            let frames = res.frames.ok_or_else(|| missing("a frame lexicon", scheme))?;
            for m in frames.lexicon.match_frames(&sentence.tokens) {
                let keep = match scheme {
                    Scheme::FrameSubset(cats) => {
                        frames.map.categories_of(&m.frame).iter().any(|c| cats.contains(c))
                    }
                    _ => true,
                };
                if keep {
                    add(m.frame, 1);
                }
            }
        }
        Scheme::Pattern => {
            let collapsed;
            let s = match res.gazetteer {
                Some(g) => {
                    collapsed = g.collapse(sentence);
                    &collapsed
                }
                None => sentence,
            };
            for p in instantiate(s).into_iter().filter(|p| res.patterns.is_none_or(|sel| sel.contains(p))) {
                add(p.feature_name(), 1);
            }
        }
    }
    Ok(out)
}

/// Vectors in a fixed space; names the space has not seen are dropped.
pub fn extract(
    sentences: &[ParsedSentence],
    scheme: &Scheme,
    res: &FeatureResources<'_>,
    space: &FeatureSpace,
) -> Result<Vec<FeatureVector>> {
    sentences
        .iter()
        .map(|s| sentence_features(s, scheme, res).map(|c| space.vectorize(&c)))
        .collect()
}
