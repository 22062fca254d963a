//! Lexical resources: the frame lexicon with its well-being category map,
//! an open category dictionary with prefix wildcards, and a term gazetteer.

mod dictionary;
mod frames;
mod gazetteer;

pub use dictionary::{load_category_lexicon, parse_category_lexicon, CategoryEntry, CategoryLexicon, CategoryPattern};
pub use frames::{
    frames_to_categories, load_frame_lexicon, parse_frame_lexicon, FrameLexicon, FrameMatch, LoadedFrames,
    WellBeing, WellBeingMap,
};
pub use gazetteer::{load_gazetteer, parse_gazetteer, Gazetteer, DEFAULT_COLLAPSE_SYMBOL};

use crate::text::tokenize;

/// Norm tokens of a lexicon entry, punctuation dropped.
pub(crate) fn norm_sequence(text: &str) -> Vec<String> {
    tokenize(text)
        .into_iter()
        .filter(|t| t.surface.chars().any(char::is_alphanumeric))
        .map(|t| t.norm)
        .collect()
}
