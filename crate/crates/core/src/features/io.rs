use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{FeatureVector, RankedFeature};
use crate::{Error, Polarity, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledVector {
    pub id: String,
    pub label: Polarity,
    pub vector: FeatureVector,
}

/// `sentence_id<TAB>label<TAB>id:count id:count ...`
pub fn write_vectors(rows: &[LabeledVector]) -> String {
    let mut out = String::new();
    for r in rows {
        let pairs: Vec<String> = r.vector.iter().map(|(i, c)| format!("{i}:{c}")).collect();
        let _ = writeln!(out, "{}\t{}\t{}", r.id, r.label, pairs.join(" "));
    }
    out
}

pub fn parse_vectors(content: &str, source: &str) -> Result<Vec<LabeledVector>> {
    let mut out = Vec::new();
    for (idx, line) in content.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut cols = line.splitn(3, '\t');
        let (id, label, pairs) = match (cols.next(), cols.next(), cols.next()) {
            (Some(a), Some(b), c) => (a, b, c.unwrap_or("")),
            _ => return Err(Error::parse(source, line_no, "expected id<TAB>label<TAB>pairs")),
        };
        let label: Polarity = label.parse().map_err(|e: String| Error::parse(source, line_no, e))?;
        let mut parsed = Vec::new();
        for pair in pairs.split_whitespace() {
            let (i, c) = pair
                .split_once(':')
                .ok_or_else(|| Error::parse(source, line_no, format!("bad pair {pair:?}")))?;
            let i: u32 = i.parse().map_err(|_| Error::parse(source, line_no, format!("bad id in {pair:?}")))?;
            let c: u32 = c.parse().map_err(|_| Error::parse(source, line_no, format!("bad count in {pair:?}")))?;
            parsed.push((i, c));
        }
        let vector = FeatureVector {
            indices: parsed.iter().map(|p| p.0).collect(),
            values: parsed.iter().map(|p| p.1).collect(),
        };
        if !vector.is_valid() {
            return Err(Error::parse(source, line_no, "ids must increase and counts be positive"));
        }
        out.push(LabeledVector {
            id: id.to_string(),
            label,
            vector,
        });
    }
    Ok(out)
}

/// `rank, feature, gain`
pub fn write_ranking_tsv(ranking: &[RankedFeature]) -> String {
    let mut out = String::from("rank\tfeature\tgain\n");
    for (i, r) in ranking.iter().enumerate() {
        let _ = writeln!(out, "{}\t{}\t{:.6}", i + 1, r.feature, r.gain);
    }
    out
}

/// Mean feature count per sentence for one (scheme, split, class) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub scheme: String,
    pub split: String,
    pub class: Polarity,
    pub sentences: usize,
    pub mean: f64,
}

impl DensityRow {
    pub fn tsv(rows: &[DensityRow]) -> String {
        let mut out = String::from("scheme\tsplit\tclass\tsentences\tmean\n");
        for r in rows {
            let _ = writeln!(out, "{}\t{}\t{}\t{}\t{:.2}", r.scheme, r.split, r.class, r.sentences, r.mean);
        }
        out
    }
}

/// Arithmetic mean of per-sentence total counts.
pub fn density<'a>(vectors: impl IntoIterator<Item = &'a FeatureVector>) -> Result<f64> {
    let (mut n, mut total) = (0usize, 0u64);
    for v in vectors {
        n += 1;
        total += v.total();
    }
    if n == 0 {
        return Err(Error::Data("density of an empty split".into()));
    }
    Ok(total as f64 / n as f64)
}

/// Density rows for each class present in `rows`.
pub(crate) fn density_by_class(scheme: &str, split: &str, rows: &[LabeledVector]) -> Result<Vec<DensityRow>> {
    let mut by: BTreeMap<Polarity, Vec<&FeatureVector>> = BTreeMap::new();
    for r in rows {
        by.entry(r.label).or_default().push(&r.vector);
    }
    by.into_iter()
        .map(|(class, vs)| {
            Ok(DensityRow {
                scheme: scheme.to_string(),
                split: split.to_string(),
                class,
                sentences: vs.len(),
                mean: density(vs)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_mean() {
        let a = FeatureVector::from_pairs(vec![(0, 2)]);
        let b = FeatureVector::from_pairs(vec![(0, 1), (3, 3)]);
        assert_eq!(density([&a, &b]).unwrap(), 3.0);
        assert!(density(std::iter::empty()).is_err());
    }

    #[test]
    fn vector_file_round_trip() {
        let rows = vec![
            LabeledVector {
                id: "p1:0".into(),
                label: Polarity::Positive,
                vector: FeatureVector::from_pairs(vec![(4, 1), (1, 2)]),
            },
            LabeledVector {
                id: "p2:1".into(),
                label: Polarity::Negative,
                vector: FeatureVector::default(),
            },
        ];
        let text = write_vectors(&rows);
        assert_eq!(text, "p1:0\tpositive\t1:2 4:1\np2:1\tnegative\t\n");
        assert_eq!(parse_vectors(&text, "v").unwrap(), rows);
        assert!(parse_vectors("a\tpositive\t3:1 2:1\n", "v").is_err());
        assert!(parse_vectors("a\tpositive\t3:0\n", "v").is_err());
        assert!(parse_vectors("a\n", "v").is_err());
    }
}
