use super::tagger::IRREGULAR_PARTICIPLES;
use super::{Chunk, ChunkKind, Pos, Token, Voice};

const BE_FORMS: &[&str] = &[
    "be", "am", "is", "are", "was", "were", "been", "being", "isnt", "arent", "wasnt", "werent", "aint",
];

fn is_to(t: &Token) -> bool {
    t.pos == Pos::Part && t.norm == "to"
}

fn is_participle(t: &Token) -> bool {
    let n = t.norm.as_str();
    (n.len() >= 4 && (n.ends_with("ed") || n.ends_with("en"))) || IRREGULAR_PARTICIPLES.contains(&n)
}

fn is_negator(t: &Token) -> bool {
    t.is_negator && matches!(t.pos, Pos::Part | Pos::Adv | Pos::Aux)
}

/// Tries to read a verb group starting at `i`; returns the chunk if one starts there.
fn verb_group(tokens: &[Token], i: usize) -> Option<Chunk> {
    let first = &tokens[i];
    if !(matches!(first.pos, Pos::Aux | Pos::Verb) || is_to(first)) {
        return None;
    }
    let infinitive = is_to(first);
    let mut j = if infinitive { i + 1 } else { i };
    let mut last_aux = None;
    while j < tokens.len() {
        let t = &tokens[j];
        if t.pos == Pos::Aux {
            last_aux = Some(j);
        } else if !(t.pos == Pos::Adv || is_negator(t)) {
            break;
        }
        j += 1;
    }
    let (head, end) = if j < tokens.len() && tokens[j].pos == Pos::Verb {
        (j, j + 1)
    } else {
        let a = last_aux?;
        let mut end = a + 1;
        while end < tokens.len() && is_negator(&tokens[end]) {
            end += 1;
        }
        (a, end)
    };
    let span = i..end;
    let has_aux = span.clone().any(|k| tokens[k].pos == Pos::Aux);
    let head_is_verb = tokens[head].pos == Pos::Verb;
    let voice = if infinitive {
        Voice::Infinitive
    } else if head_is_verb
        && is_participle(&tokens[head])
        && span.clone().any(|k| tokens[k].pos == Pos::Aux && BE_FORMS.contains(&tokens[k].norm.as_str()))
    {
        Voice::Passive
    } else {
        Voice::Active
    };
    let negated = span.clone().any(|k| is_negator(&tokens[k])) || (i > 0 && tokens[i - 1].is_negator);
    Some(Chunk {
        kind: ChunkKind::Vp,
        start: i,
        end,
        head,
        voice,
        negated,
        has_aux,
    })
}

/// Tries to read a noun phrase starting at `i` without entering `blocked` tokens.
fn noun_phrase(tokens: &[Token], blocked: &[bool], i: usize) -> Option<Chunk> {
    let ok = |k: usize| k < tokens.len() && !blocked[k];
    if !ok(i) {
        return None;
    }
    if tokens[i].pos == Pos::Pron {
        return Some(np(i, i + 1, i));
    }
    let mut j = i;
    while ok(j) && tokens[j].pos == Pos::Det {
        j += 1;
    }
    while ok(j) && matches!(tokens[j].pos, Pos::Adv | Pos::Adj | Pos::Num) && !tokens[j].is_negator {
        j += 1;
    }
    let noun_start = j;
    while ok(j) && tokens[j].pos == Pos::Noun {
        j += 1;
    }
    (j > noun_start).then(|| np(i, j, j - 1))
}

fn np(start: usize, end: usize, head: usize) -> Chunk {
    Chunk {
        kind: ChunkKind::Np,
        start,
        end,
        head,
        voice: Voice::None,
        negated: false,
        has_aux: false,
    }
}

/// Greedy left-to-right chunking: verb groups first, then noun phrases over
/// the remaining tokens, then prepositions attached to an adjacent NP.
pub fn chunk(tokens: &[Token]) -> Vec<Chunk> {
    let mut chunks = Vec::new();
    let mut in_vp = vec![false; tokens.len()];
    let mut i = 0;
    while i < tokens.len() {
        match verb_group(tokens, i) {
            Some(vp) => {
                in_vp[vp.span()].iter_mut().for_each(|b| *b = true);
                i = vp.end;
                chunks.push(vp);
            }
            None => i += 1,
        }
    }

    let mut nps: Vec<Chunk> = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        match noun_phrase(tokens, &in_vp, i) {
            Some(c) => {
                i = c.end;
                nps.push(c);
            }
            None => i += 1,
        }
    }

    for c in &nps {
        if c.start > 0 {
            let p = c.start - 1;
            if tokens[p].pos == Pos::Prep && !in_vp[p] {
                chunks.push(Chunk {
                    kind: ChunkKind::Pp,
                    start: p,
                    end: c.end,
                    head: p,
                    voice: Voice::None,
                    negated: false,
                    has_aux: false,
                });
            }
        }
    }
    chunks.extend(nps);
    chunks.sort_by_key(|c| (c.start, c.kind));
    chunks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{pos_tag, tokenize};
    use proptest::prelude::*;

    fn parse(text: &str) -> (Vec<Token>, Vec<Chunk>) {
        let toks = pos_tag(tokenize(text));
        let chunks = chunk(&toks);
        (toks, chunks)
    }

    fn vps(text: &str) -> Vec<(String, Voice, bool)> {
        let (toks, chunks) = parse(text);
        chunks
            .iter()
            .filter(|c| c.kind == ChunkKind::Vp)
            .map(|c| {
                let words: Vec<_> = toks[c.span()].iter().map(|t| t.surface.as_str()).collect();
                (words.join(" "), c.voice, c.negated)
            })
            .collect()
    }

    #[test]
    fn passive_with_adverb() {
        assert_eq!(vps("I am so relaxed"), [("am so relaxed".to_string(), Voice::Passive, false)]);
    }

    #[test]
    fn infinitive_follows_active() {
        assert_eq!(
            vps("I want to keep them"),
            [("want".to_string(), Voice::Active, false), ("to keep".to_string(), Voice::Infinitive, false)]
        );
    }

    #[test]
    fn contracted_negation() {
        let v = vps("can't talk to me");
        assert_eq!(v, [("can't talk".to_string(), Voice::Active, true)]);
        let (toks, chunks) = parse("can't talk to me");
        let vp = chunks.iter().find(|c| c.kind == ChunkKind::Vp).unwrap();
        assert_eq!(toks[vp.head].surface, "talk");
        assert!(vp.has_aux);
        assert!(chunks.iter().any(|c| c.kind == ChunkKind::Pp && toks[c.head].surface == "to"));
    }

    #[test]
    fn aux_headed_group() {
        let (toks, chunks) = parse("We had a glass of wine.");
        let vp = chunks.iter().find(|c| c.kind == ChunkKind::Vp).unwrap();
        assert_eq!(toks[vp.head].surface, "had");
        let nps: Vec<_> = chunks.iter().filter(|c| c.kind == ChunkKind::Np).map(|c| toks[c.head].surface.clone()).collect();
        assert_eq!(nps, ["We", "glass", "wine"]);
    }

    #[test]
    fn noun_phrase_with_modifiers() {
        let (toks, chunks) = parse("Having a really nice talk");
        let np = chunks.iter().find(|c| c.kind == ChunkKind::Np).unwrap();
        assert_eq!(np.span(), 1..5);
        assert_eq!(toks[np.head].surface, "talk");
    }

    #[test]
    fn negator_before_verb() {
        let v = vps("I never slept");
        assert_eq!(v, [("slept".to_string(), Voice::Active, true)]);
    }

    fn tag_strategy() -> impl Strategy<Value = Vec<Token>> {
        let words = prop::sample::select(vec![
            ("I", Pos::Pron),
            ("the", Pos::Det),
            ("my", Pos::Det),
            ("good", Pos::Adj),
            ("dog", Pos::Noun),
            ("walk", Pos::Verb),
            ("walked", Pos::Verb),
            ("is", Pos::Aux),
            ("was", Pos::Aux),
            ("can", Pos::Aux),
            ("to", Pos::Part),
            ("with", Pos::Prep),
            ("really", Pos::Adv),
            ("and", Pos::Conj),
            ("not", Pos::Part),
            (".", Pos::Punct),
            ("3", Pos::Num),
        ]);
        prop::collection::vec(words, 0..24)
            .prop_map(|ws| ws.into_iter().map(|(w, p)| Token::with_pos(w, p)).collect())
    }

    proptest! {
        #[test]
        fn chunks_are_well_formed(tokens in tag_strategy()) {
            let chunks = chunk(&tokens);
            for c in &chunks {
                prop_assert!(c.start < c.end && c.end <= tokens.len());
                prop_assert!(c.contains(c.head));
                if c.kind == ChunkKind::Vp {
                    prop_assert!(c.voice != Voice::None);
                } else {
                    prop_assert_eq!(c.voice, Voice::None);
                }
            }
            for kind in [ChunkKind::Np, ChunkKind::Vp, ChunkKind::Pp] {
                let spans: Vec<_> = chunks.iter().filter(|c| c.kind == kind).map(|c| c.span()).collect();
                for w in spans.windows(2) {
                    prop_assert!(w[0].end <= w[1].start, "{:?} overlaps", w);
                }
            }
            prop_assert_eq!(chunk(&tokens), chunks);
        }

        #[test]
        fn negation_is_monotone(tokens in tag_strategy()) {
            let chunks = chunk(&tokens);
            for vp in chunks.iter().filter(|c| c.kind == ChunkKind::Vp && !c.negated && tokens[c.head].pos == Pos::Verb && c.head == c.start) {
                let mut with_neg = tokens.clone();
                with_neg.insert(vp.head, Token::with_pos("not", Pos::Part));
                let after = chunk(&with_neg);
                let moved = after
                    .iter()
                    .find(|c| c.kind == ChunkKind::Vp && c.head == vp.head + 1)
                    .expect("vp survives insertion");
                prop_assert!(moved.negated);
                prop_assert_eq!(moved.voice, vp.voice);
                prop_assert_eq!(moved.has_aux, vp.has_aux);
                prop_assert_eq!(moved.end, vp.end + 1);
            }
        }
    }
}
