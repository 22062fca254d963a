use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{instantiate, PatternInstance, Slot, TemplateId};
use crate::text::ParsedSentence;
use crate::{Error, Polarity, Result};

/// Occurrence counts for one pattern. Probabilities are derived on demand.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PatternStats {
    pub pos_count: u64,
    pub neg_count: u64,
    /// Distinct sentences per class in which the pattern occurs.
    pub pos_sentences: BTreeSet<String>,
    pub neg_sentences: BTreeSet<String>,
}

impl PatternStats {
    pub fn freq(&self) -> u64 {
        self.pos_count + self.neg_count
    }

    pub fn p_pos(&self) -> f64 {
        self.pos_count as f64 / self.freq() as f64
    }

    pub fn p_neg(&self) -> f64 {
        self.neg_count as f64 / self.freq() as f64
    }

    pub fn p_class(&self, class: Polarity) -> f64 {
        match class {
            Polarity::Positive => self.p_pos(),
            Polarity::Negative => self.p_neg(),
            Polarity::Neutral => 0.0,
        }
    }

    pub fn sentences(&self, class: Polarity) -> &BTreeSet<String> {
        match class {
            Polarity::Negative => &self.neg_sentences,
            _ => &self.pos_sentences,
        }
    }

    pub fn class_count(&self, class: Polarity) -> u64 {
        match class {
            Polarity::Positive => self.pos_count,
            Polarity::Negative => self.neg_count,
            Polarity::Neutral => 0,
        }
    }

    /// Lexicographically smallest sentence id containing the pattern.
    pub fn example(&self) -> Option<&str> {
        let a = self.pos_sentences.first();
        let b = self.neg_sentences.first();
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y).as_str()),
            (x, y) => x.or(y).map(String::as_str),
        }
    }

    fn merge(&mut self, other: &PatternStats) {
        self.pos_count += other.pos_count;
        self.neg_count += other.neg_count;
        self.pos_sentences.extend(other.pos_sentences.iter().cloned());
        self.neg_sentences.extend(other.neg_sentences.iter().cloned());
    }
}

pub type PatternTable = BTreeMap<PatternInstance, PatternStats>;

/// Counts every instance occurrence; a pattern twice in one sentence counts twice.
pub fn accumulate(sentences: &[ParsedSentence]) -> Result<PatternTable> {
    let mut table = PatternTable::new();
    for s in sentences {
        let (pos, neg) = match s.label {
            Polarity::Positive => (1, 0),
            Polarity::Negative => (0, 1),
            Polarity::Neutral => {
                return Err(Error::Data(format!("sentence {} is neutral; patterns need two classes", s.id)))
            }
        };
        for inst in instantiate(s) {
            let e = table.entry(inst).or_default();
            e.pos_count += pos;
            e.neg_count += neg;
            if pos == 1 {
                e.pos_sentences.insert(s.id.clone());
            } else {
                e.neg_sentences.insert(s.id.clone());
            }
        }
    }
    Ok(table)
}

/// Adds the counts of `other` into `into`.
pub fn merge_tables(into: &mut PatternTable, other: &PatternTable) {
    for (k, v) in other {
        into.entry(k.clone()).or_default().merge(v);
    }
}

/// Minimum frequency and class-conditional probability for selection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdParams {
    pub theta_f: u64,
    pub theta_p: f64,
}

impl ThresholdParams {
    pub fn new(theta_f: u64, theta_p: f64) -> Result<ThresholdParams> {
        if theta_f < 1 || !(0.0..=1.0).contains(&theta_p) {
            return Err(Error::Config(format!(
                "thresholds need theta_f >= 1 and theta_p in [0,1], got {theta_f} and {theta_p}"
            )));
        }
        Ok(ThresholdParams { theta_f, theta_p })
    }
}

/// Patterns with `freq >= theta_f` and `P(class|p) >= theta_p`.
pub fn select(table: &PatternTable, params: ThresholdParams, class: Polarity) -> BTreeSet<PatternInstance> {
    table
        .iter()
        .filter(|(_, s)| s.freq() >= params.theta_f && s.p_class(class) >= params.theta_p)
        .map(|(p, _)| p.clone())
        .collect()
}

/// `template_id, anchors, slot, freq, pos_count, neg_count, p_pos, example`.
pub fn write_pattern_tsv(table: &PatternTable) -> String {
    let mut out = String::from("template_id\tanchors\tslot\tfreq\tpos_count\tneg_count\tp_pos\texample\n");
    for (p, s) in table {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{:.4}\t{}",
            p.template,
            p.anchor_key(),
            p.slot.as_str(),
            s.freq(),
            s.pos_count,
            s.neg_count,
            s.p_pos(),
            s.example().unwrap_or("")
        );
    }
    out
}

fn split_anchors(key: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let mut pending_not = false;
    for part in key.split('_') {
        if part == "NOT" && !pending_not {
            pending_not = true;
            continue;
        }
        if pending_not {
            out.push(format!("NOT_{part}"));
            pending_not = false;
        } else {
            out.push(part.to_string());
        }
    }
    if pending_not {
        out.push("NOT".into());
    }
    out
}

/// Reads the counts back from [`write_pattern_tsv`] output. Sentence sets
/// hold only the example id, so coverage figures need the original sentences.
pub fn parse_pattern_tsv(content: &str, source: &str) -> Result<PatternTable> {
    let mut table = PatternTable::new();
    for (idx, line) in content.lines().enumerate().skip(1) {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 8 {
            return Err(Error::parse(source, line_no, format!("expected 8 columns, found {}", cols.len())));
        }
        let bad = |m: String| Error::parse(source, line_no, m);
        let template = cols[0]
            .parse::<u8>()
            .ok()
            .and_then(TemplateId::new)
            .ok_or_else(|| bad(format!("bad template id {:?}", cols[0])))?;
        let slot: Slot = cols[2].parse().map_err(bad)?;
        let count = |s: &str| s.parse::<u64>().map_err(|e| Error::parse(source, line_no, e.to_string()));
        let (freq, pos_count, neg_count) = (count(cols[3])?, count(cols[4])?, count(cols[5])?);
        if freq != pos_count + neg_count || freq == 0 {
            return Err(Error::parse(source, line_no, "freq must equal pos_count + neg_count and be positive"));
        }
        let mut stats = PatternStats {
            pos_count,
            neg_count,
            ..Default::default()
        };
        if !cols[7].is_empty() {
            let target = if pos_count > 0 {
                &mut stats.pos_sentences
            } else {
                &mut stats.neg_sentences
            };
            target.insert(cols[7].to_string());
        }
        let inst = PatternInstance {
            template,
            anchors: split_anchors(cols[1]),
            slot,
        };
        table.insert(inst, stats);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::ParsedSentence;
    use proptest::prelude::*;

    fn sent(id: &str, text: &str, label: Polarity) -> ParsedSentence {
        ParsedSentence::parse(id, text, label)
    }

    fn finished() -> PatternInstance {
        PatternInstance {
            template: TemplateId::new(8).unwrap(),
            anchors: vec!["FINISHED".into()],
            slot: Slot::Dobj,
        }
    }

    #[test]
    fn seventeen_of_eighteen() {
        let mut v = Vec::new();
        for i in 0..17 {
            v.push(sent(&format!("p{i:02}"), "Finished my paper.", Polarity::Positive));
        }
        v.push(sent("n00", "Finished my homework.", Polarity::Negative));
        let t = accumulate(&v).unwrap();
        let s = &t[&finished()];
        assert_eq!((s.freq(), s.pos_count, s.neg_count), (18, 17, 1));
        assert_eq!(s.p_pos(), 17.0 / 18.0);
        assert_eq!(s.example(), Some("n00"));
    }

    #[test]
    fn single_negative_occurrence() {
        let t = accumulate(&[sent("a", "Told my mom.", Polarity::Negative)]).unwrap();
        let p = PatternInstance {
            template: TemplateId::new(8).unwrap(),
            anchors: vec!["TOLD".into()],
            slot: Slot::Dobj,
        };
        assert_eq!(t[&p].freq(), 1);
        assert_eq!(t[&p].p_neg(), 1.0);
    }

    #[test]
    fn repeated_pattern_counts_twice() {
        let t = accumulate(&[sent("a", "Finished my paper and finished my essay.", Polarity::Positive)]).unwrap();
        assert_eq!(t[&finished()].freq(), 2);
        assert_eq!(t[&finished()].pos_sentences.len(), 1);
    }

    #[test]
    fn neutral_rejected() {
        assert!(accumulate(&[sent("a", "Finished.", Polarity::Neutral)]).is_err());
    }

    fn stats(pos: u64, neg: u64) -> PatternStats {
        PatternStats {
            pos_count: pos,
            neg_count: neg,
            ..Default::default()
        }
    }

    fn named(a: &str) -> PatternInstance {
        PatternInstance {
            template: TemplateId::new(2).unwrap(),
            anchors: vec![a.into()],
            slot: Slot::Subj,
        }
    }

    #[test]
    fn selection_by_hand() {
        let table: PatternTable = [(named("A"), stats(4, 1)), (named("B"), stats(2, 0))].into_iter().collect();
        let got = select(&table, ThresholdParams::new(3, 0.7).unwrap(), Polarity::Positive);
        assert_eq!(got, BTreeSet::from([named("A")]));
        let all = select(&table, ThresholdParams::new(1, 0.0).unwrap(), Polarity::Positive);
        assert_eq!(all.len(), 2);
        let exact = select(&[(named("C"), stats(7, 3))].into_iter().collect(), ThresholdParams::new(1, 0.7).unwrap(), Polarity::Positive);
        assert_eq!(exact.len(), 1);
        assert!(ThresholdParams::new(0, 0.5).is_err());
        assert!(ThresholdParams::new(1, 1.5).is_err());
    }

    #[test]
    fn tsv_round_trip_counts() {
        let v = vec![
            sent("a", "And now my bf is busy and can't talk to me.", Polarity::Negative),
            sent("b", "Happy to simply spend time with friends.", Polarity::Positive),
        ];
        let t = accumulate(&v).unwrap();
        let text = write_pattern_tsv(&t);
        assert!(text.contains("13\tNOT_TALK_TO\tnp\t1\t0\t1\t0.0000\ta"));
        let back = parse_pattern_tsv(&text, "p.tsv").unwrap();
        assert_eq!(back.len(), t.len());
        for (k, v) in &t {
            let b = &back[k];
            assert_eq!((b.pos_count, b.neg_count), (v.pos_count, v.neg_count));
            assert_eq!(b.example(), v.example());
        }
        assert!(parse_pattern_tsv("h\n99\tX\tnp\t1\t1\t0\t1\ta\n", "p").is_err());
    }

    const TEXTS: [&str; 8] = [
        "Finished my paper.",
        "I can't sleep.",
        "Got off work.",
        "Took a walk after class.",
        "Her attitude is bad.",
        "I need to stop smoking.",
        "We had a glass of wine.",
        "Told my mom about my grades.",
    ];

    fn corpus() -> impl Strategy<Value = Vec<ParsedSentence>> {
        prop::collection::vec((0..TEXTS.len(), any::<bool>()), 0..40).prop_map(|v| {
            v.into_iter()
                .enumerate()
                .map(|(i, (t, pos))| {
                    let label = if pos { Polarity::Positive } else { Polarity::Negative };
                    sent(&format!("s{i}"), TEXTS[t], label)
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn counts_match_flat_recount(sentences in corpus()) {
            let table = accumulate(&sentences).unwrap();
            let mut flat: Vec<(PatternInstance, Polarity)> = Vec::new();
            for s in &sentences {
                for p in instantiate(s) {
                    flat.push((p, s.label));
                }
            }
            for (p, st) in &table {
                let pos = flat.iter().filter(|(q, l)| q == p && *l == Polarity::Positive).count() as u64;
                let neg = flat.iter().filter(|(q, l)| q == p && *l == Polarity::Negative).count() as u64;
                prop_assert_eq!((st.pos_count, st.neg_count), (pos, neg));
                prop_assert!(st.freq() >= 1);
                prop_assert!((st.p_pos() + st.p_neg() - 1.0).abs() < 1e-12);
            }
            prop_assert_eq!(table.values().map(|s| s.freq()).sum::<u64>(), flat.len() as u64);
        }

        #[test]
        fn order_independent(sentences in corpus(), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut shuffled = sentences.clone();
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(accumulate(&sentences).unwrap(), accumulate(&shuffled).unwrap());
        }

        #[test]
        fn selection_monotone(sentences in corpus(), f in 1u64..6, p in 0u32..=20, df in 0u64..3, dp in 0u32..5) {
            let table = accumulate(&sentences).unwrap();
            for class in [Polarity::Positive, Polarity::Negative] {
                let lo = select(&table, ThresholdParams::new(f, p as f64 / 20.0).unwrap(), class);
                let hi = select(&table, ThresholdParams::new(f + df, ((p + dp).min(20)) as f64 / 20.0).unwrap(), class);
                prop_assert!(hi.is_subset(&lo));
            }
        }
    }
}
