//! Scored posts: loading, polarity binning, splitting and sentence segmentation.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Polarity, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PostKind {
    Recording,
    Reflection,
}

/// One scored micro-blog entry as stored in the JSONL corpus file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPost {
    pub id: String,
    pub author_id: String,
    pub kind: PostKind,
    pub score: u8,
    pub text: String,
    pub parent_id: Option<String>,
    pub timestamp: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledPost {
    pub post: RawPost,
    pub label: Polarity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledSentence {
    pub post_id: String,
    pub sentence_index: usize,
    pub text: String,
    pub label: Polarity,
}

impl LabeledSentence {
    /// Stable identifier `post_id:index`.
    pub fn id(&self) -> String {
        sentence_id(&self.post_id, self.sentence_index)
    }
}

pub fn sentence_id(post_id: &str, index: usize) -> String {
    format!("{post_id}:{index}")
}

/// Post id part of a sentence id produced by [`sentence_id`].
pub fn post_id_of(sentence_id: &str) -> &str {
    match sentence_id.rfind(':') {
        Some(i) => &sentence_id[..i],
        None => sentence_id,
    }
}

/// Orders reflections for label resolution: earliest timestamp first,
/// undated reflections after dated ones, ties broken by id.
fn reflection_order(a: &&RawPost, b: &&RawPost) -> std::cmp::Ordering {
    let key = |p: &RawPost| (p.timestamp.is_none(), p.timestamp.unwrap_or(0));
    key(a).cmp(&key(b)).then_with(|| a.id.cmp(&b.id))
}

/// Polarity of a post given the reflections that refer to it.
///
/// Scores 1-4 are negative and 6-9 positive. A 5 takes its direction from
/// the first reflection: below 5 is negative, above 5 positive, and a 5 (or
/// no reflection at all) leaves the post neutral.
pub fn bin_post(post: &RawPost, reflections: &[RawPost]) -> Polarity {
    match post.score {
        1..=4 => Polarity::Negative,
        6..=9 => Polarity::Positive,
        _ => {
            let first = reflections
                .iter()
                .filter(|r| r.parent_id.as_deref() == Some(post.id.as_str()))
                .min_by(reflection_order);
            match first.map(|r| r.score) {
                Some(s) if s < 5 => Polarity::Negative,
                Some(s) if s > 5 => Polarity::Positive,
                _ => Polarity::Neutral,
            }
        }
    }
}

/// Labels every post (recordings and reflections alike).
pub fn label_posts(posts: &[RawPost]) -> Vec<LabeledPost> {
    let mut children: HashMap<&str, Vec<RawPost>> = HashMap::new();
    for p in posts {
        if let Some(parent) = &p.parent_id {
            children.entry(parent.as_str()).or_default().push(p.clone());
        }
    }
    posts
        .iter()
        .map(|p| {
            let refl = children.get(p.id.as_str()).map(Vec::as_slice).unwrap_or(&[]);
            LabeledPost {
                post: p.clone(),
                label: bin_post(p, refl),
            }
        })
        .collect()
}

/// Post-level partition of the non-neutral corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSplit {
    pub train: BTreeSet<String>,
    pub test: BTreeSet<String>,
    pub held_out: BTreeSet<String>,
    pub seed: u64,
}

impl CorpusSplit {
    pub fn part_of(&self, post_id: &str) -> Option<SplitPart> {
        if self.train.contains(post_id) {
            Some(SplitPart::Train)
        } else if self.test.contains(post_id) {
            Some(SplitPart::Test)
        } else if self.held_out.contains(post_id) {
            Some(SplitPart::HeldOut)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitPart {
    Train,
    Dev,
    Test,
    HeldOut,
}

impl SplitPart {
    pub fn as_str(self) -> &'static str {
        match self {
            SplitPart::Train => "train",
            SplitPart::Dev => "dev",
            SplitPart::Test => "test",
            SplitPart::HeldOut => "held_out",
        }
    }
}

fn shuffled_ids(mut ids: Vec<String>, seed: u64) -> Vec<String> {
    ids.sort();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ids.shuffle(&mut rng);
    ids
}

/// Random (unstratified) post-level split. Neutral posts never enter any set.
///
/// The result depends only on the set of labeled post ids and the seed, not
/// on input order.
pub fn split_corpus(posts: &[LabeledPost], train_n: usize, test_n: usize, seed: u64) -> Result<CorpusSplit> {
    let ids: Vec<String> = posts
        .iter()
        .filter(|p| p.label != Polarity::Neutral)
        .map(|p| p.post.id.clone())
        .collect();
    if train_n + test_n > ids.len() {
        return Err(Error::Config(format!(
            "split sizes train={train_n} test={test_n} exceed the {} labeled posts",
            ids.len()
        )));
    }
    let ids = shuffled_ids(ids, seed);
    let mut it = ids.into_iter();
    let train = it.by_ref().take(train_n).collect();
    let test = it.by_ref().take(test_n).collect();
    let held_out = it.collect();
    Ok(CorpusSplit {
        train,
        test,
        held_out,
        seed,
    })
}

/// Carves a development set out of the training posts.
///
/// Returns `(train, dev)` where `dev` holds `floor(fraction * |train|)` posts.
pub fn carve_dev(train: &BTreeSet<String>, fraction: f64, seed: u64) -> Result<(BTreeSet<String>, BTreeSet<String>)> {
    if !(0.0..1.0).contains(&fraction) {
        return Err(Error::Config(format!("dev fraction {fraction} must lie in [0, 1)")));
    }
    let n_dev = (train.len() as f64 * fraction).floor() as usize;
    // distinct stream from the train/test shuffle
    let ids = shuffled_ids(train.iter().cloned().collect(), seed ^ 0x5eed_de75);
    let dev: BTreeSet<String> = ids[..n_dev].iter().cloned().collect();
    let rest = ids[n_dev..].iter().cloned().collect();
    Ok((rest, dev))
}

const ABBREVIATIONS: &[&str] = &[
    "mr", "mrs", "ms", "dr", "prof", "sr", "jr", "st", "vs", "etc", "e.g", "i.e", "a.m", "p.m", "approx", "dept", "mt",
    "jan", "feb", "mar", "apr", "jun", "jul", "aug", "sep", "sept", "oct", "nov", "dec",
];

fn ends_with_abbreviation(text: &str, dot: usize) -> bool {
    let before = &text[..dot];
    let word_start = before
        .char_indices()
        .rev()
        .find(|(_, c)| c.is_whitespace() || *c == '(' || *c == '"')
        .map(|(i, c)| i + c.len_utf8())
        .unwrap_or(0);
    let word = before[word_start..].to_lowercase();
    !word.is_empty() && ABBREVIATIONS.contains(&word.as_str())
}

/// Byte ranges of the sentences in `text`, trimmed of surrounding whitespace.
///
/// A sentence ends after a run of `.`, `!` or `?` (plus closing quotes or
/// brackets) that is followed by end of text, or by whitespace and an
/// uppercase letter or digit. A single `.` closing a known abbreviation never
/// ends a sentence.
pub fn sentence_spans(text: &str) -> Vec<(usize, usize)> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut spans = Vec::new();
    let mut start = 0usize;
    let mut i = 0usize;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if !matches!(c, '.' | '!' | '?') {
            i += 1;
            continue;
        }
        let mut j = i;
        while j < chars.len() && matches!(chars[j].1, '.' | '!' | '?') {
            j += 1;
        }
        while j < chars.len() && matches!(chars[j].1, '"' | '\'' | ')' | ']' | '”' | '’') {
            j += 1;
        }
        let end = chars.get(j).map(|(p, _)| *p).unwrap_or(text.len());
        let single_dot = j == i + 1 && c == '.';
        if single_dot && ends_with_abbreviation(text, pos) {
            i = j;
            continue;
        }
        let mut k = j;
        while k < chars.len() && chars[k].1.is_whitespace() {
            k += 1;
        }
        let boundary = if k == chars.len() {
            true
        } else {
            k > j && (chars[k].1.is_uppercase() || chars[k].1.is_ascii_digit())
        };
        if boundary {
            push_trimmed(text, start, end, &mut spans);
            start = end;
        }
        i = j;
    }
    push_trimmed(text, start, text.len(), &mut spans);
    spans
}

fn push_trimmed(text: &str, start: usize, end: usize, spans: &mut Vec<(usize, usize)>) {
    let piece = &text[start..end];
    let lead = piece.len() - piece.trim_start().len();
    let trail = piece.len() - piece.trim_end().len();
    if lead + trail < piece.len() {
        spans.push((start + lead, end - trail));
    }
}

/// Splits a labeled post into sentences that inherit its label.
pub fn sentence_split(post: &LabeledPost) -> Vec<LabeledSentence> {
    let text = &post.post.text;
    sentence_spans(text)
        .into_iter()
        .enumerate()
        .map(|(i, (s, e))| LabeledSentence {
            post_id: post.post.id.clone(),
            sentence_index: i,
            text: text[s..e].to_string(),
            label: post.label,
        })
        .collect()
}

fn validate(post: &RawPost, source: &str, line: usize) -> Result<()> {
    if post.id.trim().is_empty() {
        return Err(Error::parse(source, line, "empty id"));
    }
    if !(1..=9).contains(&post.score) {
        return Err(Error::parse(source, line, format!("score {} outside 1..=9", post.score)));
    }
    if post.kind == PostKind::Reflection && post.parent_id.is_none() {
        return Err(Error::parse(source, line, "reflection without parent_id"));
    }
    Ok(())
}

/// Parses the JSONL corpus format. Blank lines are skipped.
pub fn parse_corpus(content: &str, source: &str) -> Result<Vec<RawPost>> {
    #[derive(Deserialize)]
    struct Record {
        id: String,
        author_id: String,
        kind: PostKind,
        score: i64,
        text: String,
        #[serde(default)]
        parent_id: Option<String>,
        #[serde(default)]
        timestamp: Option<i64>,
    }

    let mut posts = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut lines_of: Vec<usize> = Vec::new();
    for (idx, raw) in content.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let rec: Record = serde_json::from_str(raw).map_err(|e| Error::parse(source, line, e.to_string()))?;
        let score = u8::try_from(rec.score)
            .ok()
            .filter(|s| (1..=9).contains(s))
            .ok_or_else(|| Error::parse(source, line, format!("score {} outside 1..=9", rec.score)))?;
        let post = RawPost {
            id: rec.id,
            author_id: rec.author_id,
            kind: rec.kind,
            score,
            text: rec.text,
            parent_id: rec.parent_id,
            timestamp: rec.timestamp,
        };
        validate(&post, source, line)?;
        if let Some(first) = seen.insert(post.id.clone(), line) {
            return Err(Error::parse(source, line, format!("duplicate id {:?} (first on line {first})", post.id)));
        }
        lines_of.push(line);
        posts.push(post);
    }

    let recordings: HashSet<&str> = posts
        .iter()
        .filter(|p| p.kind == PostKind::Recording)
        .map(|p| p.id.as_str())
        .collect();
    for (post, &line) in posts.iter().zip(&lines_of) {
        if let (PostKind::Reflection, Some(parent)) = (post.kind, &post.parent_id) {
            if !recordings.contains(parent.as_str()) {
                return Err(Error::parse(
                    source,
                    line,
                    format!("reflection {:?} refers to unknown recording {parent:?}", post.id),
                ));
            }
        }
    }
    Ok(posts)
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<RawPost>> {
    let path = path.as_ref();
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_corpus(&content, &path.display().to_string())
}

/// Serializes posts in the JSONL corpus format (one object per line).
pub fn write_corpus(posts: &[RawPost]) -> String {
    let mut out = String::new();
    for p in posts {
        out.push_str(&serde_json::to_string(p).expect("RawPost serializes"));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub positive: usize,
    pub negative: usize,
    pub neutral: usize,
}

impl ClassCounts {
    pub fn add(&mut self, label: Polarity, n: usize) {
        match label {
            Polarity::Positive => self.positive += n,
            Polarity::Negative => self.negative += n,
            Polarity::Neutral => self.neutral += n,
        }
    }

    pub fn total(&self) -> usize {
        self.positive + self.negative + self.neutral
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartStats {
    pub posts: ClassCounts,
    pub sentences: ClassCounts,
}

/// Posts and sentences per class, per split part, plus an `unsplit` bucket
/// for posts outside the split (neutral ones, or everything when no split
/// is given).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub parts: BTreeMap<String, PartStats>,
}

impl CorpusStats {
    pub fn totals(&self) -> PartStats {
        let mut t = PartStats::default();
        for p in self.parts.values() {
            t.posts.positive += p.posts.positive;
            t.posts.negative += p.posts.negative;
            t.posts.neutral += p.posts.neutral;
            t.sentences.positive += p.sentences.positive;
            t.sentences.negative += p.sentences.negative;
            t.sentences.neutral += p.sentences.neutral;
        }
        t
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("part\tunit\tpositive\tnegative\tneutral\ttotal\n");
        let mut rows: Vec<(&String, &PartStats)> = self.parts.iter().collect();
        let totals = self.totals();
        let total_name = "all".to_string();
        rows.push((&total_name, &totals));
        for (name, p) in rows {
            for (unit, c) in [("posts", &p.posts), ("sentences", &p.sentences)] {
                out.push_str(&format!(
                    "{name}\t{unit}\t{}\t{}\t{}\t{}\n",
                    c.positive,
                    c.negative,
                    c.neutral,
                    c.total()
                ));
            }
        }
        out
    }
}

/// Part names used in [`CorpusStats`]: `train`, `dev`, `test`, `held_out`, `unsplit`.
pub fn corpus_stats(posts: &[LabeledPost], split: Option<&CorpusSplit>, dev: Option<&BTreeSet<String>>) -> CorpusStats {
    let mut stats = CorpusStats::default();
    for p in posts {
        let id = p.post.id.as_str();
        let part = if dev.is_some_and(|d| d.contains(id)) {
            "dev"
        } else {
            match split.and_then(|s| s.part_of(id)) {
                Some(part) => part.as_str(),
                None => "unsplit",
            }
        };
        let entry = stats.parts.entry(part.to_string()).or_default();
        entry.posts.add(p.label, 1);
        entry.sentences.add(p.label, sentence_spans(&p.post.text).len());
    }
    stats
}
