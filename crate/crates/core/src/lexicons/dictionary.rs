use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::text::{normalize, Pos, Token};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CategoryPattern {
    Literal(String),
    /// `stem*`: any norm starting with the stem.
    Prefix(String),
}

impl CategoryPattern {
    pub fn parse(raw: &str) -> std::result::Result<CategoryPattern, String> {
        let raw = raw.trim();
        match raw.strip_suffix('*') {
            Some(stem) => {
                let stem = normalize(stem);
                if stem.is_empty() || stem.contains('*') {
                    Err(format!("bad prefix pattern {raw:?}"))
                } else {
                    Ok(CategoryPattern::Prefix(stem))
                }
            }
            None if raw.is_empty() || raw.contains('*') => Err(format!("bad pattern {raw:?}")),
            None => Ok(CategoryPattern::Literal(normalize(raw))),
        }
    }

    pub fn matches(&self, norm: &str) -> bool {
        match self {
            CategoryPattern::Literal(w) => w == norm,
            CategoryPattern::Prefix(stem) => norm.starts_with(stem.as_str()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryEntry {
    pub pattern: CategoryPattern,
    pub categories: BTreeSet<String>,
}

/// LIWC-style dictionary. A token fires the categories of its most specific
/// entry: an exact literal if present, otherwise the longest matching prefix.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CategoryLexicon {
    literals: BTreeMap<String, BTreeSet<String>>,
    prefixes: BTreeMap<String, BTreeSet<String>>,
}

impl CategoryLexicon {
    pub fn insert(&mut self, entry: CategoryEntry) {
        let slot = match entry.pattern {
            CategoryPattern::Literal(w) => self.literals.entry(w),
            CategoryPattern::Prefix(s) => self.prefixes.entry(s),
        };
        slot.or_default().extend(entry.categories);
    }

    pub fn len(&self) -> usize {
        self.literals.len() + self.prefixes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All category names mentioned anywhere in the dictionary.
    pub fn category_names(&self) -> BTreeSet<&str> {
        self.literals
            .values()
            .chain(self.prefixes.values())
            .flatten()
            .map(String::as_str)
            .collect()
    }

    pub fn lookup(&self, norm: &str) -> Option<&BTreeSet<String>> {
        if let Some(c) = self.literals.get(norm) {
            return Some(c);
        }
        // longest prefix: walk candidate stems from longest to shortest
        let mut end = norm.len();
        loop {
            if let Some(c) = self.prefixes.get(&norm[..end]) {
                return Some(c);
            }
            match norm[..end].char_indices().next_back() {
                Some((i, _)) if i > 0 => end = i,
                _ => return None,
            }
        }
    }

    /// Multiset of categories fired by the non-punctuation tokens.
    pub fn match_categories(&self, tokens: &[Token]) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for t in tokens.iter().filter(|t| t.pos != Pos::Punct) {
            if let Some(cats) = self.lookup(&t.norm) {
                for c in cats {
                    *out.entry(c.clone()).or_insert(0) += 1;
                }
            }
        }
        out
    }
}

/// Parses `pattern<TAB>cat1,cat2` rows; `#` lines and blank lines are skipped.
pub fn parse_category_lexicon(content: &str, source: &str) -> Result<CategoryLexicon> {
    let mut lex = CategoryLexicon::default();
    for (idx, line) in content.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (pat, cats) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(source, line_no, "expected pattern<TAB>categories"))?;
        let pattern = CategoryPattern::parse(pat).map_err(|e| Error::parse(source, line_no, e))?;
        let categories: BTreeSet<String> =
            cats.split(',').map(str::trim).filter(|c| !c.is_empty()).map(str::to_string).collect();
        if categories.is_empty() {
            return Err(Error::parse(source, line_no, "entry has no categories"));
        }
        lex.insert(CategoryEntry { pattern, categories });
    }
    Ok(lex)
}

pub fn load_category_lexicon(path: &Path) -> Result<CategoryLexicon> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_category_lexicon(&content, &path.display().to_string())
}
