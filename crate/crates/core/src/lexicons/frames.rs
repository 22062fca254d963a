use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::norm_sequence;
use crate::text::Token;
use crate::{Error, Result};

/// The five well-being categories frames are grouped into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum WellBeing {
    Goal,
    Autonomy,
    Competence,
    Connection,
    Savouring,
}

impl WellBeing {
    pub const ALL: [WellBeing; 5] = [
        WellBeing::Goal,
        WellBeing::Autonomy,
        WellBeing::Competence,
        WellBeing::Connection,
        WellBeing::Savouring,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            WellBeing::Goal => "Goal",
            WellBeing::Autonomy => "Autonomy",
            WellBeing::Competence => "Competence",
            WellBeing::Connection => "Connection",
            WellBeing::Savouring => "Savouring",
        }
    }
}

impl fmt::Display for WellBeing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WellBeing {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let lower = s.trim().to_lowercase();
        WellBeing::ALL
            .iter()
            .copied()
            .find(|c| c.as_str().to_lowercase() == lower || (lower == "goals" && *c == WellBeing::Goal))
            .ok_or_else(|| format!("unknown well-being category {s:?}"))
    }
}

/// Frame name to lexical units, each unit a sequence of norm tokens.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrameLexicon {
    entries: BTreeMap<String, BTreeSet<Vec<String>>>,
    /// unit -> frames evoking it, for matching
    index: BTreeMap<Vec<String>, BTreeSet<String>>,
    max_len: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WellBeingMap {
    categories: BTreeMap<WellBeing, BTreeSet<String>>,
}

/// One lexical-unit hit over token indices `start..end`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FrameMatch {
    pub start: usize,
    pub end: usize,
    pub frame: String,
}

#[derive(Debug, Clone, Default)]
pub struct LoadedFrames {
    pub lexicon: FrameLexicon,
    pub map: WellBeingMap,
    /// Non-fatal problems such as duplicate rows.
    pub warnings: Vec<String>,
}

impl FrameLexicon {
    /// Adds a unit; returns false if the (frame, unit) pair was already present.
    pub fn insert(&mut self, frame: &str, unit: Vec<String>) -> bool {
        assert!(!unit.is_empty(), "lexical unit must be non-empty");
        self.max_len = self.max_len.max(unit.len());
        self.index.entry(unit.clone()).or_default().insert(frame.to_string());
        self.entries.entry(frame.to_string()).or_default().insert(unit)
    }

    pub fn declare(&mut self, frame: &str) {
        self.entries.entry(frame.to_string()).or_default();
    }

    pub fn frames(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn units(&self, frame: &str) -> Option<&BTreeSet<Vec<String>>> {
        self.entries.get(frame)
    }

    pub fn contains_frame(&self, frame: &str) -> bool {
        self.entries.contains_key(frame)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Greedy longest match over norm tokens, left to right. A unit listed
    /// under several frames yields one match per frame on the same span.
    pub fn match_frames(&self, tokens: &[Token]) -> Vec<FrameMatch> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            let longest = (1..=self.max_len.min(tokens.len() - i)).rev().find_map(|n| {
                let key: Vec<String> = tokens[i..i + n].iter().map(|t| t.norm.clone()).collect();
                self.index.get(&key).map(|frames| (n, frames))
            });
            match longest {
                Some((n, frames)) => {
                    out.extend(frames.iter().map(|f| FrameMatch {
                        start: i,
                        end: i + n,
                        frame: f.clone(),
                    }));
                    i += n;
                }
                None => i += 1,
            }
        }
        out
    }
}

impl WellBeingMap {
    pub fn insert(&mut self, category: WellBeing, frame: &str) {
        self.categories.entry(category).or_default().insert(frame.to_string());
    }

    pub fn frames(&self, category: WellBeing) -> impl Iterator<Item = &str> {
        self.categories.get(&category).into_iter().flatten().map(String::as_str)
    }

    pub fn categories_of(&self, frame: &str) -> Vec<WellBeing> {
        self.categories
            .iter()
            .filter(|(_, frames)| frames.contains(frame))
            .map(|(c, _)| *c)
            .collect()
    }

    /// True when no frame is listed under more than one category.
    pub fn is_partition(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.categories.values().flatten().all(|f| seen.insert(f))
    }
}

/// Each match contributes each of its frame's categories once.
pub fn frames_to_categories(matches: &[FrameMatch], map: &WellBeingMap) -> BTreeMap<WellBeing, usize> {
    let mut out = BTreeMap::new();
    for m in matches {
        for c in map.categories_of(&m.frame) {
            *out.entry(c).or_insert(0) += 1;
        }
    }
    out
}

/// Parses `category<TAB>frame<TAB>unit` rows. A two-column row declares a
/// frame without units. `#` lines and blank lines are skipped.
pub fn parse_frame_lexicon(content: &str, source: &str) -> Result<LoadedFrames> {
    let mut loaded = LoadedFrames::default();
    for (idx, line) in content.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
        if !(2..=3).contains(&cols.len()) || cols[1].is_empty() {
            return Err(Error::parse(source, line_no, "expected category<TAB>frame[<TAB>unit]"));
        }
        let category: WellBeing = cols[0].parse().map_err(|e: String| Error::parse(source, line_no, e))?;
        let frame = cols[1];
        loaded.map.insert(category, frame);
        match cols.get(2).filter(|u| !u.is_empty()) {
            Some(unit) => {
                let seq = norm_sequence(unit);
                if seq.is_empty() {
                    return Err(Error::parse(source, line_no, format!("lexical unit {unit:?} has no tokens")));
                }
                if !loaded.lexicon.insert(frame, seq) {
                    let msg = format!("{source}: line {line_no}: duplicate unit {unit:?} for frame {frame}");
                    log::warn!("{msg}");
                    loaded.warnings.push(msg);
                }
            }
            None => loaded.lexicon.declare(frame),
        }
    }
    Ok(loaded)
}

pub fn load_frame_lexicon(path: &Path) -> Result<LoadedFrames> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_frame_lexicon(&content, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resources;
    use crate::text::{pos_tag, tokenize};
    use proptest::prelude::*;

    fn bundled() -> LoadedFrames {
        parse_frame_lexicon(resources::FRAMES_TSV, "frames.tsv").unwrap()
    }

    fn hits(text: &str) -> Vec<(String, String)> {
        let toks = pos_tag(tokenize(text));
        bundled()
            .lexicon
            .match_frames(&toks)
            .into_iter()
            .map(|m| {
                let words: Vec<_> = toks[m.start..m.end].iter().map(|t| t.norm.as_str()).collect();
                (m.frame, words.join(" "))
            })
            .collect()
    }

    #[test]
    fn bundled_goal_and_obligation() {
        let b = bundled();
        assert!(b.warnings.is_empty());
        let goal: Vec<_> = b.map.frames(WellBeing::Goal).collect();
        assert_eq!(goal, ["Desiring", "Intentionally_Act", "Purpose"]);
        let units = b.lexicon.units("Being_obligated").unwrap();
        assert!(units.contains(&vec!["have".to_string(), "to".to_string()]));
        assert!(b.map.is_partition());
        for c in WellBeing::ALL {
            for f in b.map.frames(c) {
                assert!(b.lexicon.contains_frame(f), "{f}");
            }
        }
    }

    #[test]
    fn longest_match_wins() {
        assert_eq!(hits("I'm mad that I had to drive"), [("Being_obligated".to_string(), "had to".to_string())]);
        assert_eq!(hits("Yummy burgers and sides."), [("Chemical-sense_description".to_string(), "yummy".to_string())]);
        assert_eq!(hits("I feel like pizza"), [("Desiring".to_string(), "feel like".to_string())]);
        assert!(hits("zebras graze quietly").is_empty());
    }

    #[test]
    fn empty_file_and_errors() {
        let l = parse_frame_lexicon("", "x").unwrap();
        assert!(l.lexicon.is_empty());
        let err = parse_frame_lexicon("Goal\tDesiring\twant\nHappiness\tJoy\tyay\n", "x").unwrap_err();
        assert!(err.to_string().contains("line 2"));
        let dup = parse_frame_lexicon("Goal\tDesiring\twant\nGoal\tDesiring\twant\n", "x").unwrap();
        assert_eq!(dup.warnings.len(), 1);
    }

    #[test]
    fn category_multiset() {
        let b = bundled();
        let m = |f: &str| FrameMatch { start: 0, end: 1, frame: f.to_string() };
        let got = frames_to_categories(&[m("Being_obligated")], &b.map);
        assert_eq!(got, BTreeMap::from([(WellBeing::Autonomy, 1)]));
        let got = frames_to_categories(&[m("Kinship"), m("Kinship")], &b.map);
        assert_eq!(got, BTreeMap::from([(WellBeing::Connection, 2)]));
        assert!(frames_to_categories(&[], &b.map).is_empty());
        assert!(frames_to_categories(&[m("Nonexistent")], &b.map).is_empty());
    }

    /// Lexical units as printed in the source table, one string per category.
    const TABLE_UNITS: [(&str, &str); 5] = [
        ("Goal", "want, feel like, hope, wanted, wish, do, did, done, doing, does, plan, purpose, in order, intention, goals"),
        ("Autonomy", "complain, grumble, complaints, have to, had to, should, having to, need, get to, had to, have to, got to, should, avoid , ducking, take, need, needed, requires"),
        ("Competence", "finished, trying, try, tried, effort, attempt, efforts, can, could, exercise, practice, rehearsal, exercising, able, ability, unable, messed up; ruined; screwed up, ruin, hard, difficult, easy, tough, easier challenging, impossible, a breeze, hardest, finish, finishing, completed, accomplished, achieve"),
        ("Connection", "birthday, married, divorce, befriend, dinner, social, party, picnic, mom, family, parents, sister, cousin, told, tell, informed, people, girl, man, roommate, reply, answers, answer, reacted"),
        ("Savouring", "enjoyed, like, hate, glad, annoyed, cry, yelled, whooped, honked, irritated, feel, feeling, yummy, alcohol, weed, drugs, dope, see, felt, seeing, hear, experience, senses, experiences, taste, feel, delicious, tasty, sweet, food, coffee, bread, cheese, good, bad, great, better, best, horrible, worst wonderful, weird, nice, relaxing, annoying, interesting, sad, weird enjoyable, comforting, entertaining, unpleasant, hilarious, rest, relaxation, exhilarating, tiring, nicer, disturbing, disappointing, embarrassing, irritating, upsetting, heartbreaking, consoling, tedious, traumatic, chilling, calming, frightening touching, pleasure, satisfying, fascinating, tired, exhausted, sleepy, hungry, nauseated, horny"),
    ];

    fn table_units(raw: &str) -> BTreeSet<String> {
        // the printed list drops a few separators; split on both kinds and on
        // the known run-together pairs
        let mut out = BTreeSet::new();
        for piece in raw.split([',', ';']) {
            let piece = piece.trim();
            let parts: Vec<&str> = match piece {
                "easier challenging" | "worst wonderful" | "weird enjoyable" | "frightening touching" => {
                    piece.split(' ').collect()
                }
                p => vec![p],
            };
            out.extend(parts.into_iter().filter(|p| !p.is_empty()).map(str::to_string));
        }
        out
    }

    #[test]
    fn bundled_units_equal_table_units_per_category() {
        let b = bundled();
        for (cat, raw) in TABLE_UNITS {
            let cat: WellBeing = cat.parse().unwrap();
            let expected = table_units(raw);
            let mut got = BTreeSet::new();
            for f in b.map.frames(cat) {
                for u in b.lexicon.units(f).unwrap() {
                    got.insert(u.join(" "));
                }
            }
            assert_eq!(got, expected, "{cat}");
        }
    }

    fn lexicon_strategy() -> impl Strategy<Value = Vec<String>> {
        prop::collection::vec(
            prop::sample::select(vec!["have", "to", "had", "mom", "feel", "like", "yummy", "a", "breeze", "in", "order", "x"]),
            0..20,
        )
        .prop_map(|v| v.into_iter().map(str::to_string).collect())
    }

    proptest! {
        #[test]
        fn matches_sorted_and_disjoint(words in lexicon_strategy()) {
            let toks: Vec<Token> = words.iter().map(|w| Token::new(w)).collect();
            let ms = bundled().lexicon.match_frames(&toks);
            for w in ms.windows(2) {
                prop_assert!(w[0].end <= w[1].start);
            }
        }

        #[test]
        fn categories_homomorphic(a in lexicon_strategy(), b in lexicon_strategy()) {
            let l = bundled();
            let ta: Vec<Token> = a.iter().map(|w| Token::new(w)).collect();
            let tb: Vec<Token> = b.iter().map(|w| Token::new(w)).collect();
            let ma = l.lexicon.match_frames(&ta);
            let mb = l.lexicon.match_frames(&tb);
            let mut joined = ma.clone();
            joined.extend(mb.iter().cloned());
            let mut sum = frames_to_categories(&ma, &l.map);
            for (c, n) in frames_to_categories(&mb, &l.map) {
                *sum.entry(c).or_insert(0) += n;
            }
            prop_assert_eq!(frames_to_categories(&joined, &l.map), sum);
        }
    }
}
