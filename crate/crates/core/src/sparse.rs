//! Sparse probability vectors and sparse count vectors.
//!
//! Both types store `(index, value)` pairs with strictly increasing indices.
//! The serialized form is `{"dim": n, "entries": [[idx, value], ...]}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the total mass of a [`SparseDistribution`].
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// A normalized probability vector over `0..dim`, stored sparsely.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseDistribution {
    dim: usize,
    entries: Vec<(usize, f64)>,
}

/// Non-negative counts (or pseudo-counts) over `0..dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountVector {
    dim: usize,
    entries: Vec<(usize, f64)>,
}

fn check_indices(dim: usize, entries: &[(usize, f64)]) -> Result<()> {
    for w in entries.windows(2) {
        if w[0].0 >= w[1].0 {
            return Err(Error::InvalidData(format!(
                "indices not strictly increasing at {}",
                w[1].0
            )));
        }
    }
    if let Some(&(last, _)) = entries.last() {
        if last >= dim {
            return Err(Error::InvalidData(format!(
                "index {last} out of range for dimension {dim}"
            )));
        }
    }
    Ok(())
}

impl CountVector {
    pub fn new(dim: usize, entries: Vec<(usize, f64)>) -> Result<Self> {
        check_indices(dim, &entries)?;
        if let Some(&(i, c)) = entries.iter().find(|(_, c)| !(c.is_finite() && *c >= 0.0)) {
            return Err(Error::InvalidData(format!("count {c} at index {i} is not a finite non-negative number")));
        }
        Ok(CountVector { dim, entries })
    }

    /// Builds a count vector from integer counts, dropping zeros.
    pub fn from_counts(dim: usize, counts: &[(usize, u64)]) -> Result<Self> {
        let entries = counts
            .iter()
            .filter(|(_, c)| *c > 0)
            .map(|&(i, c)| (i, c as f64))
            .collect();
        CountVector::new(dim, entries)
    }

    /// Pseudo-counts `p(i) * scale` over the support of `dist`.
    pub fn scaled(dist: &SparseDistribution, scale: f64) -> Self {
        CountVector {
            dim: dist.dim,
            entries: dist.entries.iter().map(|&(i, p)| (i, p * scale)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|(_, c)| c).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.iter().all(|(_, c)| *c <= 0.0)
    }
}

impl SparseDistribution {
    /// Validates and wraps already-normalized entries.
    pub fn new(dim: usize, entries: Vec<(usize, f64)>) -> Result<Self> {
        let dist = SparseDistribution { dim, entries };
        dist.validate()?;
        Ok(dist)
    }

    pub(crate) fn new_unchecked(dim: usize, entries: Vec<(usize, f64)>) -> Self {
        SparseDistribution { dim, entries }
    }

    /// Normalizes non-negative weights; zero weights are dropped.
    pub fn from_weights(dim: usize, weights: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let kept: Vec<(usize, f64)> = weights.into_iter().filter(|(_, w)| *w > 0.0).collect();
        check_indices(dim, &kept)?;
        let total: f64 = kept.iter().map(|(_, w)| w).sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::ZeroTotalCounts);
        }
        let entries = kept.into_iter().map(|(i, w)| (i, w / total)).collect();
        Ok(SparseDistribution { dim, entries })
    }

    /// Normalizes a dense weight vector.
    pub fn from_dense(weights: &[f64]) -> Result<Self> {
        SparseDistribution::from_weights(weights.len(), weights.iter().copied().enumerate())
    }

    pub fn uniform(dim: usize) -> Self {
        let p = 1.0 / dim as f64;
        SparseDistribution {
            dim,
            entries: (0..dim).map(|i| (i, p)).collect(),
        }
    }

    /// All mass on one index.
    pub fn point(dim: usize, index: usize) -> Self {
        SparseDistribution {
            dim,
            entries: vec![(index, 1.0)],
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_indices(self.dim, &self.entries)?;
        if self.entries.is_empty() {
            return Err(Error::InvalidData("distribution has no entries".into()));
        }
        if let Some(&(i, p)) = self.entries.iter().find(|(_, p)| !(*p > 0.0 && *p <= 1.0 + NORMALIZATION_TOL)) {
            return Err(Error::InvalidData(format!("probability {p} at index {i} outside (0, 1]")));
        }
        let total = self.total();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidData(format!("probabilities sum to {total}")));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|(_, p)| p).sum()
    }

    pub fn get(&self, index: usize) -> f64 {
        match self.entries.binary_search_by_key(&index, |&(i, _)| i) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => 0.0,
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for &(i, p) in &self.entries {
            out[i] = p;
        }
        out
    }

    /// Index of the largest probability; lowest index wins ties.
    pub fn argmax(&self) -> usize {
        let mut best = self.entries[0];
        for &e in &self.entries[1..] {
            if e.1 > best.1 {
                best = e;
            }
        }
        best.0
    }

    /// Number of entries with probability at or above `tau`.
    pub fn count_at_least(&self, tau: f64) -> usize {
        self.entries.iter().filter(|(_, p)| *p >= tau).count()
    }

    /// The `n` most probable indices, descending; ties go to the lower index.
    pub fn top_n(&self, n: usize) -> Vec<(usize, f64)> {
        let mut sorted = self.entries.clone();
        sorted.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        sorted.truncate(n);
        sorted
    }

    /// Drops entries below `threshold` and renormalizes the survivors.
    ///
    /// When nothing survives, the argmax entry is kept with probability 1.
    pub fn prune(&self, threshold: f64) -> SparseDistribution {
        if self.entries.iter().all(|(_, p)| *p >= threshold) {
            return self.clone();
        }
        let kept: Vec<(usize, f64)> = self.entries.iter().copied().filter(|(_, p)| *p >= threshold).collect();
        if kept.is_empty() {
            return SparseDistribution::point(self.dim, self.argmax());
        }
        let total: f64 = kept.iter().map(|(_, p)| p).sum();
        SparseDistribution {
            dim: self.dim,
            entries: kept.into_iter().map(|(i, p)| (i, p / total)).collect(),
        }
    }

    /// Total variation distance to `other`.
    pub fn total_variation(&self, other: &SparseDistribution) -> f64 {
        let a = self.to_dense();
        let b = other.to_dense();
        0.5 * a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum::<f64>()
    }
}

/// Element-wise mean of equally-dimensioned distributions (the ML "background" of a set of rows).
pub fn mean_distribution(rows: &[SparseDistribution]) -> Result<SparseDistribution> {
    let first = rows.first().ok_or(Error::EmptyInput)?;
    let mut acc = vec![0.0; first.dim()];
    for row in rows {
        if row.dim() != first.dim() {
            return Err(Error::ShapeMismatch(format!(
                "row dimension {} differs from {}",
                row.dim(),
                first.dim()
            )));
        }
        for &(i, p) in row.entries() {
            acc[i] += p;
        }
    }
    SparseDistribution::from_dense(&acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsorted_or_out_of_range() {
        assert!(SparseDistribution::new(3, vec![(1, 0.5), (0, 0.5)]).is_err());
        assert!(SparseDistribution::new(2, vec![(0, 0.5), (2, 0.5)]).is_err());
        assert!(SparseDistribution::new(2, vec![(0, 0.5), (1, 0.4)]).is_err());
        assert!(CountVector::new(2, vec![(0, -1.0)]).is_err());
    }

    #[test]
    fn prune_renormalizes_and_keeps_argmax_when_everything_goes() {
        let d = SparseDistribution::new(3, vec![(0, 0.005), (1, 0.495), (2, 0.5)]).unwrap();
        let p = d.prune(0.01);
        assert_eq!(p.entries().len(), 2);
        assert!((p.total() - 1.0).abs() < 1e-12);
        assert_eq!(p.get(0), 0.0);

        let u = SparseDistribution::uniform(4).prune(0.5);
        assert_eq!(u.entries(), &[(0, 1.0)]);
    }

    #[test]
    fn top_n_breaks_ties_by_index() {
        let d = SparseDistribution::new(4, vec![(0, 0.25), (1, 0.25), (2, 0.4), (3, 0.1)]).unwrap();
        let idx: Vec<usize> = d.top_n(3).into_iter().map(|(i, _)| i).collect();
        assert_eq!(idx, vec![2, 0, 1]);
        assert_eq!(d.argmax(), 2);
    }

    #[test]
    fn json_form() {
        let d = SparseDistribution::new(3, vec![(0, 0.25), (2, 0.75)]).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"dim":3,"entries":[[0,0.25],[2,0.75]]}"#);
        let back: SparseDistribution = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn mean_of_rows() {
        let rows = vec![
            SparseDistribution::new(2, vec![(0, 1.0)]).unwrap(),
            SparseDistribution::new(2, vec![(0, 0.5), (1, 0.5)]).unwrap(),
        ];
        let m = mean_distribution(&rows).unwrap();
        assert_eq!(m.to_dense(), vec![0.75, 0.25]);
    }
}
