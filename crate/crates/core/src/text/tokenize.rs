use super::{Pos, Token};

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '’'
}

/// Lowercase and drop apostrophes; punctuation passes through unchanged.
pub fn normalize(surface: &str) -> String {
    if surface.chars().any(char::is_alphanumeric) {
        surface.chars().filter(|c| !is_apostrophe(*c)).flat_map(char::to_lowercase).collect()
    } else {
        surface.to_string()
    }
}

const NEGATORS: &[&str] = &["not", "no", "never", "cannot", "nt"];

/// `not`, `no`, `never`, `cannot` and any `n't` contraction.
pub fn is_negator_surface(surface: &str) -> bool {
    let lower: String = surface.to_lowercase().replace('’', "'");
    lower.ends_with("n't") || NEGATORS.contains(&normalize(surface).as_str())
}

/// Splits on whitespace and at punctuation boundaries.
///
/// Apostrophes and hyphens stay inside a word when flanked by alphanumerics
/// (`can't`, `did n't`, `bone-marrow`); every other non-alphanumeric
/// character becomes its own token.
pub fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut word = String::new();
    let flush = |word: &mut String, out: &mut Vec<Token>| {
        if !word.is_empty() {
            out.push(Token::new(word));
            word.clear();
        }
    };
    for (i, &c) in chars.iter().enumerate() {
        if c.is_whitespace() {
            flush(&mut word, &mut out);
        } else if c.is_alphanumeric() {
            word.push(c);
        } else {
            let joins = (is_apostrophe(c) || c == '-' || (c == '.' && word.chars().last().is_some_and(|p| p.is_ascii_digit())))
                && word.chars().last().is_some_and(char::is_alphanumeric)
                && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric());
            if joins {
                word.push(c);
            } else {
                flush(&mut word, &mut out);
                let s = c.to_string();
                let mut t = Token::new(&s);
                t.pos = if c.is_ascii_punctuation() || is_unicode_punct(c) {
                    Pos::Punct
                } else {
                    Pos::Other
                };
                out.push(t);
            }
        }
    }
    flush(&mut word, &mut out);
    out
}

fn is_unicode_punct(c: char) -> bool {
    matches!(c, '’' | '‘' | '“' | '”' | '…' | '–' | '—' | '¡' | '¿' | '«' | '»')
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surfaces(t: &str) -> Vec<String> {
        tokenize(t).into_iter().map(|t| t.surface).collect()
    }

    #[test]
    fn contractions_keep_together() {
        let toks = tokenize("I can't sleep.");
        let s: Vec<_> = toks.iter().map(|t| t.surface.as_str()).collect();
        let n: Vec<_> = toks.iter().map(|t| t.norm.as_str()).collect();
        assert_eq!(s, ["I", "can't", "sleep", "."]);
        assert_eq!(n, ["i", "cant", "sleep", "."]);
        assert!(toks[1].is_negator);
        assert!(!toks[2].is_negator);
    }

    #[test]
    fn repeated_punctuation_splits() {
        assert_eq!(surfaces("Tom yuumm!!"), ["Tom", "yuumm", "!", "!"]);
        assert!(tokenize("").is_empty());
        assert_eq!(surfaces("did n't"), ["did", "n't"]);
        assert!(tokenize("did n't")[1].is_negator);
    }

    #[test]
    fn numbers_and_hyphens() {
        assert_eq!(surfaces("ran 3.5 miles, well-earned"), ["ran", "3.5", "miles", ",", "well-earned"]);
        assert_eq!(surfaces("'quoted'"), ["'", "quoted", "'"]);
        assert_eq!(surfaces("Don’t"), ["Don’t"]);
        assert_eq!(normalize("Don’t"), "dont");
    }

    #[test]
    fn negator_forms() {
        for w in ["not", "no", "never", "can't", "don't", "didn't", "won't", "haven't", "cannot", "Cannot", "isn't"] {
            assert!(is_negator_surface(w), "{w}");
        }
        for w in ["know", "note", "nothing", "cant-"] {
            assert!(!is_negator_surface(w), "{w}");
        }
    }

    #[test]
    fn non_punct_tokens_have_norms() {
        for t in tokenize("Hey, it's 5 o'clock... ¿qué? 🙂") {
            if t.pos != Pos::Punct {
                assert!(!t.norm.is_empty());
            }
        }
    }
}
