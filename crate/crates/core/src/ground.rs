//! Ordered finite ground sets of labels.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::subset::{Subset, MAX_GROUND};

/// Distinct labels in a fixed order; the order fixes all sign conventions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroundSet {
    labels: Arc<[String]>,
}

impl GroundSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() > MAX_GROUND {
            return Err(Error::InvalidInput(format!("ground set has {} > {MAX_GROUND} labels", labels.len())));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidInput(format!("duplicate label {l:?}")));
            }
        }
        Ok(GroundSet { labels: labels.into() })
    }

    /// Labels `"1"` through `"n"`.
    pub fn numbered(n: usize) -> Self {
        GroundSet::new((1..=n).map(|i| i.to_string())).expect("distinct labels")
    }

    pub fn empty() -> Self {
        GroundSet { labels: Arc::from(Vec::<String>::new()) }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.index_of(label).ok_or_else(|| Error::InvalidInput(format!("unknown label {label:?}")))
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    pub fn subset_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Subset> {
        let mut s = Subset::EMPTY;
        for l in labels {
            s = s.with(self.index(l.as_ref())?);
        }
        Ok(s)
    }

    pub fn labels_of(&self, s: Subset) -> Vec<String> {
        s.iter().map(|i| self.labels[i].clone()).collect()
    }

    pub fn labels_of_tuple(&self, t: &[usize]) -> Vec<String> {
        t.iter().map(|&i| self.labels[i].clone()).collect()
    }

    /// The labels in `s`, in ground order.
    pub fn sub(&self, s: Subset) -> GroundSet {
        GroundSet { labels: self.labels_of(s).into() }
    }

    /// Appends a label at the end.
    pub fn with_label(&self, label: &str) -> Result<GroundSet> {
        if self.index_of(label).is_some() {
            return Err(Error::InvalidInput(format!("label {label:?} already present")));
        }
        GroundSet::new(self.labels.iter().cloned().chain([label.to_string()]))
    }
}

impl fmt::Debug for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels.iter()).finish()
    }
}

/// Re-indexes `s ⊆ within` to positions inside `within`.
pub fn compress(s: Subset, within: Subset) -> Subset {
    Subset::from_indices(s.iter().map(|i| within.rank_below(i)))
}

/// Inverse of [`compress`].
pub fn expand(s: Subset, within: Subset) -> Subset {
    let elems = within.to_vec();
    Subset::from_indices(s.iter().map(|i| elems[i]))
}
