//! Tab-separated pre-tagged sentences: `surface<TAB>TAG` per line, blank
//! line between sentences, `#label=` and `#id=` comment lines.

use std::path::Path;

use super::{ParsedSentence, Pos, Token};
use crate::{Error, Polarity, Result};

/// Parses pre-tagged text. Sentences without an `#id=` line get `{source}:{n}`.
pub fn parse_pretagged_str(content: &str, source: &str) -> Result<Vec<ParsedSentence>> {
    let mut out = Vec::new();
    let mut tokens: Vec<Token> = Vec::new();
    let mut label = Polarity::Neutral;
    let mut id: Option<String> = None;
    let mut has_header = false;

    let mut finish = |tokens: &mut Vec<Token>, label: &mut Polarity, id: &mut Option<String>, has_header: &mut bool| {
        if !tokens.is_empty() || *has_header {
            let n = out.len();
            let sid = id.take().unwrap_or_else(|| format!("{source}:{n}"));
            out.push(ParsedSentence::from_tagged(sid, std::mem::take(tokens), *label));
        }
        *label = Polarity::Neutral;
        *has_header = false;
    };

    for (idx, raw) in content.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            finish(&mut tokens, &mut label, &mut id, &mut has_header);
            continue;
        }
        if line.starts_with('#') && !line.contains('\t') {
            let body = &line[1..];
            if let Some(v) = body.strip_prefix("label=") {
                label = v
                    .trim()
                    .parse()
                    .map_err(|e: String| Error::parse(source, line_no, e))?;
                has_header = true;
            } else if let Some(v) = body.strip_prefix("id=") {
                id = Some(v.trim().to_string());
                has_header = true;
            }
            continue;
        }
        let (surface, tag) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(source, line_no, "expected surface<TAB>TAG"))?;
        if surface.is_empty() {
            return Err(Error::parse(source, line_no, "empty token surface"));
        }
        let pos: Pos = tag.trim().parse().map_err(|e: String| Error::parse(source, line_no, e))?;
        tokens.push(Token::with_pos(surface, pos));
    }
    finish(&mut tokens, &mut label, &mut id, &mut has_header);
    Ok(out)
}

pub fn parse_pretagged(path: &Path) -> Result<Vec<ParsedSentence>> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_pretagged_str(&content, &path.display().to_string())
}

/// Inverse of [`parse_pretagged_str`].
pub fn write_pretagged(sentences: &[ParsedSentence]) -> String {
    let mut out = String::new();
    for s in sentences {
        out.push_str(&format!("#id={}\n#label={}\n", s.id, s.label.as_str()));
        for t in &s.tokens {
            out.push_str(&format!("{}\t{}\n", t.surface, t.pos));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = "#label=positive\nI\tPRON\nam\tAUX\nso\tADV\nrelaxed\tVERB\n\n\
#label=negative\nGot\tVERB\noff\tPREP\nwork\tNOUN\n.\tPUNCT\n\n\
#label=positive\nTom\tNOUN\nyuumm\tNOUN\n!\tPUNCT\n!\tPUNCT\n";

    #[test]
    fn reads_three_sentences() {
        let s = parse_pretagged_str(FIXTURE, "fixture").unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s[0].label, Polarity::Positive);
        assert_eq!(s[1].label, Polarity::Negative);
        assert_eq!(s[1].tokens[2].pos, Pos::Noun);
        assert_eq!(s[2].id, "fixture:2");
        assert!(!s[0].chunks.is_empty());
    }

    #[test]
    fn unknown_tag_names_line() {
        let err = parse_pretagged_str("#label=positive\nI\tPRON\nfoo\tXYZ\n", "f").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
        assert!(msg.contains("XYZ"), "{msg}");
    }

    #[test]
    fn round_trip() {
        let first = parse_pretagged_str(FIXTURE, "fixture").unwrap();
        let text = write_pretagged(&first);
        let second = parse_pretagged_str(&text, "other").unwrap();
        assert_eq!(first, second);
        assert_eq!(write_pretagged(&second), text);
    }

    #[test]
    fn hash_token_is_not_a_comment() {
        let s = parse_pretagged_str("#\tPUNCT\nfun\tADJ\n", "f").unwrap();
        assert_eq!(s[0].tokens.len(), 2);
    }
}
