use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{Error, Result};

/// Sparse counts; indices strictly increasing, values positive.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FeatureVector {
    pub indices: Vec<u32>,
    pub values: Vec<u32>,
}

impl FeatureVector {
    pub fn from_pairs(mut pairs: Vec<(u32, u32)>) -> FeatureVector {
        pairs.sort_unstable();
        let mut v = FeatureVector::default();
        for (i, c) in pairs {
            if c == 0 {
                continue;
            }
            if v.indices.last() == Some(&i) {
                *v.values.last_mut().expect("parallel vectors") += c;
            } else {
                v.indices.push(i);
                v.values.push(c);
            }
        }
        v
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.indices.iter().copied().zip(self.values.iter().copied())
    }

    pub fn total(&self) -> u64 {
        self.values.iter().map(|&v| v as u64).sum()
    }

    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn is_valid(&self) -> bool {
        self.indices.len() == self.values.len()
            && self.indices.windows(2).all(|w| w[0] < w[1])
            && self.values.iter().all(|&v| v >= 1)
    }
}

/// Feature names mapped to dense ids `0..N`, assigned in sorted name order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FeatureSpace {
    names: Vec<String>,
    index: BTreeMap<String, u32>,
}

impl FeatureSpace {
    pub fn fit<'a>(names: impl IntoIterator<Item = &'a String>) -> FeatureSpace {
        let index: BTreeMap<String, u32> = names.into_iter().map(|n| (n.clone(), 0)).collect();
        FeatureSpace::from_sorted(index.into_keys().collect())
    }

    fn from_sorted(names: Vec<String>) -> FeatureSpace {
        let index = names.iter().enumerate().map(|(i, n)| (n.clone(), i as u32)).collect();
        FeatureSpace { names, index }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn id(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: u32) -> Option<&str> {
        self.names.get(id as usize).map(String::as_str)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Maps named counts into the space; names outside it are dropped.
    pub fn vectorize(&self, counts: &BTreeMap<String, u32>) -> FeatureVector {
        let pairs = counts.iter().filter_map(|(n, &c)| self.id(n).map(|i| (i, c))).collect();
        FeatureVector::from_pairs(pairs)
    }

    /// One name per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for n in &self.names {
            s.push_str(n);
            s.push('\n');
        }
        s
    }

    pub fn from_text(content: &str, source: &str) -> Result<FeatureSpace> {
        let names: Vec<String> = content.lines().map(str::to_string).collect();
        for (i, w) in names.windows(2).enumerate() {
            if w[0] >= w[1] {
                return Err(Error::parse(source, i + 2, "feature names must be unique and sorted"));
            }
        }
        Ok(FeatureSpace::from_sorted(names))
    }

    /// SHA-256 of [`FeatureSpace::to_text`], hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_follow_sorted_names() {
        let names: Vec<String> = ["zeta", "alpha", "mid", "alpha"].iter().map(|s| s.to_string()).collect();
        let s = FeatureSpace::fit(&names);
        assert_eq!(s.names(), ["alpha", "mid", "zeta"]);
        assert_eq!(s.id("mid"), Some(1));
        let counts = BTreeMap::from([("zeta".to_string(), 2), ("unseen".to_string(), 5)]);
        let v = s.vectorize(&counts);
        assert_eq!((v.indices.clone(), v.values.clone()), (vec![2], vec![2]));
        assert_eq!(s.len(), 3);
        let back = FeatureSpace::from_text(&s.to_text(), "x").unwrap();
        assert_eq!(back, s);
        assert_eq!(back.hash(), s.hash());
        assert!(FeatureSpace::from_text("b\na\n", "x").is_err());
    }

    #[test]
    fn pairs_merge_and_sort() {
        let v = FeatureVector::from_pairs(vec![(3, 1), (1, 2), (3, 4), (2, 0)]);
        assert_eq!(v.indices, [1, 3]);
        assert_eq!(v.values, [2, 5]);
        assert!(v.is_valid());
        assert_eq!(v.total(), 7);
    }
}
