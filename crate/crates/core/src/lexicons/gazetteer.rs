use std::collections::BTreeSet;
use std::path::Path;

use super::norm_sequence;
use crate::text::{ParsedSentence, Pos, Token};
use crate::{Error, Result};

pub const DEFAULT_COLLAPSE_SYMBOL: &str = "FOOD";

/// Flat term list whose matches collapse to a single type token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gazetteer {
    terms: BTreeSet<Vec<String>>,
    symbol: String,
    max_len: usize,
}

impl Gazetteer {
    pub fn new(terms: impl IntoIterator<Item = Vec<String>>, symbol: &str) -> Result<Gazetteer> {
        let terms: BTreeSet<Vec<String>> = terms.into_iter().filter(|t| !t.is_empty()).collect();
        if terms.is_empty() {
            return Err(Error::Data("gazetteer has no terms".into()));
        }
        if symbol.trim().is_empty() {
            return Err(Error::Config("gazetteer collapse symbol is empty".into()));
        }
        let max_len = terms.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Gazetteer {
            terms,
            symbol: symbol.to_string(),
            max_len,
        })
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, term: &[String]) -> bool {
        self.terms.contains(term)
    }

    /// Replaces each longest left-to-right term match with one NOUN token.
    pub fn collapse_tokens(&self, tokens: &[Token]) -> Vec<Token> {
        let mut out = Vec::with_capacity(tokens.len());
        let mut i = 0;
        while i < tokens.len() {
            let hit = (1..=self.max_len.min(tokens.len() - i)).rev().find(|&n| {
                let key: Vec<String> = tokens[i..i + n].iter().map(|t| t.norm.clone()).collect();
                self.terms.contains(&key)
            });
            match hit {
                Some(n) => {
                    out.push(Token::with_pos(&self.symbol, Pos::Noun));
                    i += n;
                }
                None => {
                    out.push(tokens[i].clone());
                    i += 1;
                }
            }
        }
        out
    }

    /// Collapses and re-chunks a sentence.
    pub fn collapse(&self, sentence: &ParsedSentence) -> ParsedSentence {
        let tokens = self.collapse_tokens(&sentence.tokens);
        if tokens == sentence.tokens {
            return sentence.clone();
        }
        ParsedSentence::from_tagged(sentence.id.clone(), tokens, sentence.label)
    }
}

/// One term per line; `#` lines and blank lines are skipped.
pub fn parse_gazetteer(content: &str, symbol: &str) -> Result<Gazetteer> {
    let terms = content
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(norm_sequence);
    Gazetteer::new(terms, symbol)
}

pub fn load_gazetteer(path: &Path, symbol: &str) -> Result<Gazetteer> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_gazetteer(&content, symbol)
}
