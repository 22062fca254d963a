use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{FeatureSpace, FeatureVector};
use crate::{Error, Polarity, Result};

fn entropy(a: u64, b: u64) -> f64 {
    let n = (a + b) as f64;
    if n == 0.0 {
        return 0.0;
    }
    [a, b]
        .iter()
        .filter(|&&k| k > 0)
        .map(|&k| {
            let p = k as f64 / n;
            -p * p.log2()
        })
        .sum()
}

/// IG in bits from class totals and the per-class counts of sentences where
/// the feature is present.
pub fn information_gain_counts(n_pos: u64, n_neg: u64, present_pos: u64, present_neg: u64) -> Result<f64> {
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::Data("information gain needs both classes".into()));
    }
    if present_pos > n_pos || present_neg > n_neg {
        return Err(Error::Data("presence counts exceed class totals".into()));
    }
    let n = (n_pos + n_neg) as f64;
    let present = present_pos + present_neg;
    let absent = n_pos + n_neg - present;
    let h = entropy(n_pos, n_neg);
    let h_present = entropy(present_pos, present_neg);
    let h_absent = entropy(n_pos - present_pos, n_neg - present_neg);
    let ig = h - (present as f64 / n) * h_present - (absent as f64 / n) * h_absent;
    Ok(ig.max(0.0))
}

/// IG of one binary feature over labeled sentences.
pub fn information_gain(presence: &[bool], labels: &[Polarity]) -> Result<f64> {
    if presence.len() != labels.len() {
        return Err(Error::Data("presence and label lengths differ".into()));
    }
    let (mut n_pos, mut n_neg, mut f_pos, mut f_neg) = (0, 0, 0, 0);
    for (&p, l) in presence.iter().zip(labels) {
        match l {
            Polarity::Positive => {
                n_pos += 1;
                f_pos += u64::from(p);
            }
            Polarity::Negative => {
                n_neg += 1;
                f_neg += u64::from(p);
            }
            Polarity::Neutral => return Err(Error::Data("neutral label in information gain input".into())),
        }
    }
    information_gain_counts(n_pos, n_neg, f_pos, f_neg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedFeature {
    pub feature: String,
    pub gain: f64,
}

/// Top `k` features by IG, descending, ties by name. Features never present
/// in the data have gain 0 and are still ranked.
pub fn rank(space: &FeatureSpace, data: &[(FeatureVector, Polarity)], k: usize) -> Result<Vec<RankedFeature>> {
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut present: BTreeMap<u32, (u64, u64)> = BTreeMap::new();
    let (mut n_pos, mut n_neg) = (0u64, 0u64);
    for (v, label) in data {
        let positive = match label {
            Polarity::Positive => true,
            Polarity::Negative => false,
            Polarity::Neutral => return Err(Error::Data("neutral label in ranking input".into())),
        };
        if positive {
            n_pos += 1;
        } else {
            n_neg += 1;
        }
        for &i in &v.indices {
            let e = present.entry(i).or_default();
            if positive {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
        }
    }
    let mut ranked = Vec::with_capacity(space.len());
    for (id, name) in space.names().iter().enumerate() {
        let (fp, fneg) = present.get(&(id as u32)).copied().unwrap_or_default();
        ranked.push(RankedFeature {
            feature: name.clone(),
            gain: information_gain_counts(n_pos, n_neg, fp, fneg)?,
        });
    }
    if ranked.is_empty() && (n_pos == 0 || n_neg == 0) {
        return Err(Error::Data("information gain needs both classes".into()));
    }
    ranked.sort_by(|a, b| b.gain.total_cmp(&a.gain).then_with(|| a.feature.cmp(&b.feature)));
    ranked.truncate(k);
    Ok(ranked)
}
