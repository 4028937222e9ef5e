//! Independent reference implementations used as test oracles.
//!
//! These are deliberately naive: dense vectors, double loops, no pruning
//! shortcuts. They share no code with the library.

#![allow(dead_code)]

use std::collections::BTreeMap;

/// Straight-line parsimonious EM over dense vectors.
///
/// Mirrors the textbook procedure: ML start, then alternate
/// `e_i = c_i·λp_i / (λp_i + (1-λ)b_i)` and normalization, dropping entries
/// under `threshold` after each step, until no entry moves more than `tol`.
pub fn reference_parsimonize(counts: &[f64], background: &[f64], lambda: f64, threshold: f64, max_iter: usize, tol: f64) -> Vec<f64> {
    let total: f64 = counts.iter().sum();
    let mut p: Vec<f64> = counts.iter().map(|c| c / total).collect();
    for _ in 0..max_iter {
        let mut e = vec![0.0; p.len()];
        for i in 0..p.len() {
            if p[i] == 0.0 {
                continue;
            }
            e[i] = if background[i] == 0.0 {
                counts[i]
            } else {
                counts[i] * (lambda * p[i] / (lambda * p[i] + (1.0 - lambda) * background[i]))
            };
        }
        let s: f64 = e.iter().sum();
        let mut next: Vec<f64> = e.iter().map(|x| x / s).collect();
        for x in next.iter_mut() {
            if *x < threshold {
                *x = 0.0;
            }
        }
        let s: f64 = next.iter().sum();
        for x in next.iter_mut() {
            *x /= s;
        }
        let change = p.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        p = next;
        if change < tol {
            break;
        }
    }
    p
}

/// `Σ_i Σ_j p_i p_j δ(i, j)` with a plain double loop over dense vectors.
pub fn dense_rao(p: &[f64], delta: &[Vec<f64>]) -> f64 {
    let mut s = 0.0;
    for i in 0..p.len() {
        for j in 0..p.len() {
            s += p[i] * p[j] * delta[i][j];
        }
    }
    s
}

/// `arccos(cos) / π`, with cosine computed directly.
pub fn reference_angle(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    (dot / (na * nb)).clamp(-1.0, 1.0).acos() / std::f64::consts::PI
}

/// Fraction of (positive, negative) pairs where the positive scores higher,
/// ties counting one half. Returned as an exact ratio of integers.
pub fn brute_force_auc(positives: &[f64], negatives: &[f64]) -> (u64, u64) {
    let mut twice_wins = 0u64;
    for &p in positives {
        for &n in negatives {
            if p > n {
                twice_wins += 2;
            } else if p == n {
                twice_wins += 1;
            }
        }
    }
    (twice_wins, 2 * positives.len() as u64 * negatives.len() as u64)
}

/// Purity and NMI from an explicit contingency table.
pub fn contingency_purity_nmi(clusters: &[usize], classes: &[&str]) -> (f64, f64) {
    let n = clusters.len() as f64;
    let mut table: BTreeMap<(usize, &str), f64> = BTreeMap::new();
    let mut by_cluster: BTreeMap<usize, f64> = BTreeMap::new();
    let mut by_class: BTreeMap<&str, f64> = BTreeMap::new();
    for (&k, &c) in clusters.iter().zip(classes) {
        *table.entry((k, c)).or_default() += 1.0;
        *by_cluster.entry(k).or_default() += 1.0;
        *by_class.entry(c).or_default() += 1.0;
    }
    let mut purity = 0.0;
    for &k in by_cluster.keys() {
        let best = table.iter().filter(|((kk, _), _)| *kk == k).map(|(_, v)| *v).fold(0.0, f64::max);
        purity += best;
    }
    purity /= n;
    let entropy = |m: &dyn Fn() -> Vec<f64>| -> f64 { m().iter().map(|c| -(c / n) * (c / n).ln()).sum() };
    let hk = entropy(&|| by_cluster.values().copied().collect());
    let hc = entropy(&|| by_class.values().copied().collect());
    let mut mi = 0.0;
    for (&(k, c), &nkc) in &table {
        mi += (nkc / n) * ((n * nkc) / (by_cluster[&k] * by_class[c])).ln();
    }
    let nmi = if hk + hc == 0.0 { 1.0 } else { 2.0 * mi / (hk + hc) };
    (purity, nmi)
}

/// Gini coefficient by the mean-absolute-difference definition.
pub fn reference_gini(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mean: f64 = x.iter().sum::<f64>() / n;
    if mean == 0.0 {
        return 0.0;
    }
    let mut s = 0.0;
    for a in x {
        for b in x {
            s += (a - b).abs();
        }
    }
    s / (2.0 * n * n * mean)
}
