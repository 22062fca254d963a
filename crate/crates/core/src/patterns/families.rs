use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{PatternInstance, PatternTable};
use crate::{Error, Polarity, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum AnchorPosition {
    /// 0-based
    Index(usize),
    Last,
}

/// Which patterns belong to a family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyQuery {
    /// Case-insensitive substring of the underscore-joined anchors; any
    /// alternative may match.
    Substring(Vec<String>),
    /// One anchor equals the value (case-insensitive), e.g. the preposition.
    Anchor { position: AnchorPosition, value: String },
}

impl FamilyQuery {
    /// `with`, `go|went`, `new_` are substrings; `@2=with` (1-based) and
    /// `@last=with` pin one anchor.
    pub fn parse(raw: &str) -> Result<FamilyQuery> {
        let raw = raw.trim();
        if let Some(rest) = raw.strip_prefix('@') {
            let (pos, value) = rest
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("anchor query {raw:?} needs @N=value")))?;
            let position = if pos.eq_ignore_ascii_case("last") {
                AnchorPosition::Last
            } else {
                match pos.parse::<usize>() {
                    Ok(n) if n >= 1 => AnchorPosition::Index(n - 1),
                    _ => return Err(Error::Config(format!("bad anchor position {pos:?}"))),
                }
            };
            return Ok(FamilyQuery::Anchor {
                position,
                value: value.to_uppercase(),
            });
        }
        let alts: Vec<String> = raw.split('|').map(str::trim).filter(|s| !s.is_empty()).map(str::to_uppercase).collect();
        if alts.is_empty() {
            return Err(Error::Config("empty family query".into()));
        }
        Ok(FamilyQuery::Substring(alts))
    }

    pub fn matches(&self, p: &PatternInstance) -> bool {
        match self {
            FamilyQuery::Substring(alts) => {
                let key = p.anchor_key().to_uppercase();
                alts.iter().any(|a| key.contains(a.as_str()))
            }
            FamilyQuery::Anchor { position, value } => {
                let anchor = match position {
                    AnchorPosition::Index(i) => p.anchors.get(*i),
                    AnchorPosition::Last => p.anchors.last(),
                };
                anchor.is_some_and(|a| a.eq_ignore_ascii_case(value))
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            FamilyQuery::Substring(alts) => alts.join("|").to_lowercase(),
            FamilyQuery::Anchor { position, value } => match position {
                AnchorPosition::Index(i) => format!("@{}={}", i + 1, value.to_lowercase()),
                AnchorPosition::Last => format!("@last={}", value.to_lowercase()),
            },
        }
    }
}

/// Pattern types, their in-class occurrences, and distinct in-class sentences covered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FamilyCounts {
    pub types: usize,
    pub occurrences: u64,
    pub sentences: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub query: String,
    pub positive: FamilyCounts,
    pub negative: FamilyCounts,
    pub members: Vec<(PatternInstance, Polarity)>,
}

impl FamilyReport {
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// e.g. `talk: 32 positive (71 items) and 30 negative (66 items)`
    pub fn summary(&self) -> String {
        format!(
            "{}: {} positive ({} items) and {} negative ({} items)",
            self.query, self.positive.types, self.positive.sentences, self.negative.types, self.negative.sentences
        )
    }

    pub fn tsv_header() -> &'static str {
        "query\tclass\ttypes\toccurrences\tsentences\n"
    }

    pub fn tsv_rows(&self) -> String {
        let mut out = String::new();
        for (class, c) in [(Polarity::Positive, self.positive), (Polarity::Negative, self.negative)] {
            let _ = writeln!(out, "{}\t{}\t{}\t{}\t{}", self.query, class, c.types, c.occurrences, c.sentences);
        }
        out
    }
}

/// Groups the selected patterns of each class that match `query`.
pub fn report_families(
    table: &PatternTable,
    positive: &BTreeSet<PatternInstance>,
    negative: &BTreeSet<PatternInstance>,
    query: &FamilyQuery,
) -> FamilyReport {
    let mut members = Vec::new();
    let mut count = |selected: &BTreeSet<PatternInstance>, class: Polarity| {
        let mut c = FamilyCounts::default();
        let mut covered: BTreeSet<&str> = BTreeSet::new();
        for p in selected.iter().filter(|p| query.matches(p)) {
            c.types += 1;
            if let Some(s) = table.get(p) {
                c.occurrences += s.class_count(class);
                covered.extend(s.sentences(class).iter().map(String::as_str));
            }
            members.push((p.clone(), class));
        }
        c.sentences = covered.len();
        c
    };
    let pos = count(positive, Polarity::Positive);
    let neg = count(negative, Polarity::Negative);
    FamilyReport {
        query: query.label(),
        positive: pos,
        negative: neg,
        members,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::{accumulate, select, ThresholdParams};
    use crate::text::ParsedSentence;

    fn fixture() -> PatternTable {
        let rows = [
            ("p1", "Having a really nice talk with my aunt.", Polarity::Positive),
            ("p2", "We talk with friends.", Polarity::Positive),
            ("p3", "Having a really nice talk with my aunt.", Polarity::Positive),
            ("n1", "And now my bf is busy and can't talk to me.", Polarity::Negative),
            ("n2", "He can't talk to me.", Polarity::Negative),
            ("n3", "I went to bed.", Polarity::Negative),
        ];
        let s: Vec<_> = rows.iter().map(|(id, t, l)| ParsedSentence::parse(*id, t, *l)).collect();
        accumulate(&s).unwrap()
    }

    #[test]
    fn talk_family_by_hand() {
        let table = fixture();
        let params = ThresholdParams::new(1, 0.7).unwrap();
        let pos = select(&table, params, Polarity::Positive);
        let neg = select(&table, params, Polarity::Negative);
        let r = report_families(&table, &pos, &neg, &FamilyQuery::parse("talk").unwrap());
        // positive: T6 HAVING_TALK and T12 TALK_WITH (p1, p3), T2 TALK and T13 TALK_WITH (p2)
        let pos_names: Vec<String> = r
            .members
            .iter()
            .filter(|(_, c)| *c == Polarity::Positive)
            .map(|(p, _)| p.feature_name())
            .collect();
        assert_eq!(pos_names, ["T2:TALK:subj", "T6:HAVING_TALK:subj", "T12:TALK_WITH:np", "T13:TALK_WITH:np"]);
        assert_eq!(r.positive, FamilyCounts { types: 4, occurrences: 6, sentences: 3 });
        // negative: T2 NOT_TALK and T13 NOT_TALK_TO in n1 and n2
        assert_eq!(r.negative, FamilyCounts { types: 2, occurrences: 4, sentences: 2 });
        assert_eq!(r.summary(), "talk: 4 positive (3 items) and 2 negative (2 items)");
    }

    #[test]
    fn anchor_query_and_empty() {
        let table = fixture();
        let params = ThresholdParams::new(1, 0.7).unwrap();
        let pos = select(&table, params, Polarity::Positive);
        let neg = select(&table, params, Polarity::Negative);
        let with = report_families(&table, &pos, &neg, &FamilyQuery::parse("@last=with").unwrap());
        assert_eq!(with.positive.types, 2);
        assert_eq!(with.negative.types, 0);
        let none = report_families(&table, &pos, &neg, &FamilyQuery::parse("zebra").unwrap());
        assert!(none.is_empty());
        assert_eq!(none.positive, FamilyCounts::default());
        assert!(FamilyQuery::parse("@0=x").is_err());
        assert!(FamilyQuery::parse("  ").is_err());
        assert!(FamilyQuery::parse("go|went").unwrap().matches(&crate::patterns::PatternInstance {
            template: crate::patterns::TemplateId::new(2).unwrap(),
            anchors: vec!["WENT".into()],
            slot: crate::patterns::Slot::Subj,
        }));
    }
}
