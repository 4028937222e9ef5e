//! Topical diversity of documents as Rao's quadratic entropy.
//!
//! `div(d) = Σ_i Σ_j p_i p_j δ(i, j)`, with δ the normalized angular distance
//! between two topics' document-assignment vectors.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse::SparseDistribution;

/// For each topic, its probability in every document (`V_x[y] = P(x | d_y)`).
pub fn topic_vectors(doc_topic: &[SparseDistribution]) -> Result<Vec<Vec<f64>>> {
    let first = doc_topic.first().ok_or(Error::EmptyInput)?;
    let k = first.dim();
    let mut vectors = vec![vec![0.0; doc_topic.len()]; k];
    for (y, row) in doc_topic.iter().enumerate() {
        if row.dim() != k {
            return Err(Error::ShapeMismatch(format!(
                "document {y} has {} topics, expected {k}",
                row.dim()
            )));
        }
        for &(x, p) in row.entries() {
            vectors[x][y] = p;
        }
    }
    Ok(vectors)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `arccos(cos_sim(a, b)) / π`, in `[0, 1]`.
///
/// The angle is evaluated as `2·atan2(|â − b̂|, |â + b̂|)` on the unit
/// vectors, which equals the clamped arccos form but keeps full precision
/// for nearly parallel vectors.
pub fn angular_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch(format!("vector lengths {} and {}", a.len(), b.len())));
    }
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroVector);
    }
    let (mut diff, mut sum) = (0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (ux, uy) = (x / na, y / nb);
        diff += (ux - uy) * (ux - uy);
        sum += (ux + uy) * (ux + uy);
    }
    let angle = 2.0 * diff.sqrt().atan2(sum.sqrt());
    Ok((angle / PI).clamp(0.0, 1.0))
}

/// Pairwise topic distances `δ(i, j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicDistanceMatrix {
    dim: usize,
    values: Vec<f64>,
}

impl TopicDistanceMatrix {
    /// Builds a matrix from row-major values after checking the metric shape
    /// (square, symmetric, zero diagonal, entries in `[0, 1]`).
    pub fn from_values(dim: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != dim * dim {
            return Err(Error::ShapeMismatch(format!("{} values for a {dim}x{dim} matrix", values.len())));
        }
        let m = TopicDistanceMatrix { dim, values };
        for i in 0..dim {
            if m.get(i, i) != 0.0 {
                return Err(Error::InvalidData(format!("nonzero diagonal at {i}")));
            }
            for j in 0..dim {
                let v = m.get(i, j);
                if !(0.0..=1.0).contains(&v) || v != m.get(j, i) {
                    return Err(Error::InvalidData(format!("invalid distance at ({i}, {j})")));
                }
            }
        }
        Ok(m)
    }

    /// Distances between the topics of a document collection.
    ///
    /// Topics assigned to no document get distance 1 to every other topic.
    pub fn from_doc_topic(doc_topic: &[SparseDistribution]) -> Result<Self> {
        let vectors = topic_vectors(doc_topic)?;
        let k = vectors.len();
        let upper: Vec<(usize, usize, f64)> = (0..k)
            .into_par_iter()
            .flat_map_iter(|i| {
                let vectors = &vectors;
                (i + 1..k).map(move |j| {
                    let d = match angular_distance(&vectors[i], &vectors[j]) {
                        Ok(d) => d,
                        Err(_) => {
                            log::debug!("topic {i} or {j} is unused; distance set to 1");
                            1.0
                        }
                    };
                    (i, j, d)
                })
            })
            .collect();
        let mut values = vec![0.0; k * k];
        for (i, j, d) in upper {
            values[i * k + j] = d;
            values[j * k + i] = d;
        }
        Ok(TopicDistanceMatrix { dim: k, values })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.dim + j]
    }

    /// Largest off-diagonal entry.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    best = best.max(self.get(i, j));
                }
            }
        }
        best
    }

    /// Mean over unordered topic pairs.
    pub fn mean_off_diagonal(&self) -> f64 {
        let n = self.dim * self.dim.saturating_sub(1) / 2;
        if n == 0 {
            return 0.0;
        }
        let mut sum = 0.0;
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                sum += self.get(i, j);
            }
        }
        sum / n as f64
    }
}

/// Rao's coefficient of one topic distribution.
pub fn rao_diversity(p: &SparseDistribution, delta: &TopicDistanceMatrix) -> Result<f64> {
    if p.dim() != delta.dim() {
        return Err(Error::ShapeMismatch(format!(
            "distribution over {} topics, distance matrix over {}",
            p.dim(),
            delta.dim()
        )));
    }
    let entries = p.entries();
    let mut total = 0.0;
    for &(i, pi) in entries {
        for &(j, pj) in entries {
            total += pi * pj * delta.get(i, j);
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiversityScore {
    #[serde(rename = "id")]
    pub doc_id: String,
    #[serde(rename = "diversity")]
    pub score: f64,
}

/// Scores every document, with distances computed from the same documents.
pub fn score_corpus(doc_topic: &[SparseDistribution], ids: &[String]) -> Result<Vec<DiversityScore>> {
    let delta = TopicDistanceMatrix::from_doc_topic(doc_topic)?;
    score_with(&delta, doc_topic, ids)
}

/// Scores documents against a precomputed distance matrix.
pub fn score_with(delta: &TopicDistanceMatrix, doc_topic: &[SparseDistribution], ids: &[String]) -> Result<Vec<DiversityScore>> {
    if doc_topic.len() != ids.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} topic rows for {} ids",
            doc_topic.len(),
            ids.len()
        )));
    }
    doc_topic
        .iter()
        .zip(ids)
        .map(|(p, id)| {
            Ok(DiversityScore {
                doc_id: id.clone(),
                score: rao_diversity(p, delta)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(dense: &[&[f64]]) -> Vec<SparseDistribution> {
        dense.iter().map(|r| SparseDistribution::from_dense(r).unwrap()).collect()
    }

    #[test]
    fn topic_vectors_transpose() {
        let v = topic_vectors(&rows(&[&[1.0, 0.0], &[0.0, 1.0]])).unwrap();
        assert_eq!(v, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let v = topic_vectors(&rows(&[&[0.7, 0.3]])).unwrap();
        assert_eq!(v, vec![vec![0.7], vec![0.3]]);
        let v = topic_vectors(&rows(&[&[0.25; 4], &[0.25; 4], &[0.25; 4]])).unwrap();
        assert!(v.iter().all(|x| x == &v[0]));
        assert!(matches!(topic_vectors(&[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn angular_distance_examples() {
        assert_eq!(angular_distance(&[0.3, 0.4], &[0.3, 0.4]).unwrap(), 0.0);
        assert!((angular_distance(&[1.0, 0.0], &[0.0, 2.0]).unwrap() - 0.5).abs() < 1e-15);
        let s = 0.5f64.sqrt();
        assert!((angular_distance(&[1.0, 0.0], &[s, s]).unwrap() - 0.25).abs() < 1e-15);
        assert!((angular_distance(&[1.0, 0.0], &[-1.0, 0.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(angular_distance(&[0.0, 0.0], &[1.0, 0.0]), Err(Error::ZeroVector)));
    }

    #[test]
    fn rao_examples() {
        let delta = TopicDistanceMatrix::from_values(2, vec![0.0, 0.4, 0.4, 0.0]).unwrap();
        let p = SparseDistribution::from_dense(&[0.5, 0.5]).unwrap();
        assert!((rao_diversity(&p, &delta).unwrap() - 0.2).abs() < 1e-15);
        let single = SparseDistribution::point(2, 1);
        assert_eq!(rao_diversity(&single, &delta).unwrap(), 0.0);
    }

    #[test]
    fn unused_topics_are_maximally_distant() {
        let delta = TopicDistanceMatrix::from_doc_topic(&rows(&[&[1.0, 0.0, 0.0], &[0.5, 0.5, 0.0]])).unwrap();
        assert_eq!(delta.get(0, 2), 1.0);
        assert_eq!(delta.get(2, 2), 0.0);
        assert!(delta.get(0, 1) < 0.5);
    }

    #[test]
    fn pure_documents_score_zero() {
        let r = rows(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 0.0]]);
        let ids: Vec<String> = (0..3).map(|i| i.to_string()).collect();
        let scores = score_corpus(&r, &ids).unwrap();
        assert!(scores.iter().all(|s| s.score == 0.0));
        let line = serde_json::to_string(&scores[0]).unwrap();
        assert_eq!(line, r#"{"id":"0","diversity":0.0}"#);
    }
}
