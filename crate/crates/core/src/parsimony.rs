//! Parsimonious language model estimation.
//!
//! Observed counts are modelled as a two-component mixture
//! `λ·P(i|specific) + (1−λ)·P(i|background)` with the background held fixed.
//! EM moves the mass that the background already explains out of the specific
//! component, and entries that fall below a threshold are pruned after every
//! M-step. The same engine re-estimates document language models, topic word
//! distributions and document topic assignments.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse::{CountVector, SparseDistribution};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmConfig {
    /// Weight of the specific component; `1.0` disables parsimonization.
    pub lambda: f64,
    /// Entries below this probability are dropped after each M-step.
    pub prune_threshold: f64,
    pub max_iterations: usize,
    /// Stop once no entry moves by this much between iterations.
    pub convergence_tol: f64,
}

impl Default for EmConfig {
    fn default() -> Self {
        EmConfig {
            lambda: 0.5,
            prune_threshold: 0.01,
            max_iterations: 50,
            convergence_tol: 1e-6,
        }
    }
}

impl EmConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda <= 1.0) {
            return Err(Error::InvalidConfig(format!("lambda {} not in (0, 1]", self.lambda)));
        }
        if !(self.prune_threshold >= 0.0 && self.prune_threshold < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "prune threshold {} not in [0, 1)",
                self.prune_threshold
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be positive".into()));
        }
        if !(self.convergence_tol > 0.0) {
            return Err(Error::InvalidConfig("convergence_tol must be positive".into()));
        }
        Ok(())
    }
}

/// Result of one parsimonization run.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsimonized {
    pub distribution: SparseDistribution,
    pub iterations: usize,
    pub converged: bool,
}

/// Maximum-likelihood starting point: `count(i) / total`.
pub fn initialize(counts: &CountVector) -> Result<SparseDistribution> {
    let total = counts.total();
    if !(total > 0.0) {
        return Err(Error::ZeroTotalCounts);
    }
    let entries = counts
        .entries()
        .iter()
        .filter(|(_, c)| *c > 0.0)
        .map(|&(i, c)| (i, c / total))
        .collect();
    Ok(SparseDistribution::new_unchecked(counts.dim(), entries))
}

/// One E-step plus M-step. The support of the result never exceeds that of `current`.
pub fn em_step(
    counts: &CountVector,
    current: &SparseDistribution,
    background: &SparseDistribution,
    lambda: f64,
) -> Result<SparseDistribution> {
    let counts = counts.entries();
    let mut ci = 0;
    let mut expected = Vec::with_capacity(current.len());
    for &(i, p) in current.entries() {
        while ci < counts.len() && counts[ci].0 < i {
            ci += 1;
        }
        let c = match counts.get(ci) {
            Some(&(j, c)) if j == i => c,
            _ => 0.0,
        };
        let bg = background.get(i);
        let specific = lambda * p;
        let responsibility = if bg > 0.0 {
            specific / (specific + (1.0 - lambda) * bg)
        } else {
            1.0
        };
        let e = c * responsibility;
        if e > 0.0 {
            expected.push((i, e));
        }
    }
    let total: f64 = expected.iter().map(|(_, e)| e).sum();
    if !(total > 0.0) {
        return Err(Error::DegenerateStep);
    }
    for e in &mut expected {
        e.1 /= total;
    }
    Ok(SparseDistribution::new_unchecked(current.dim(), expected))
}

fn max_abs_change(a: &SparseDistribution, b: &SparseDistribution) -> f64 {
    let (a, b) = (a.entries(), b.entries());
    let (mut i, mut j) = (0, 0);
    let mut worst = 0.0f64;
    loop {
        let diff = match (a.get(i), b.get(j)) {
            (Some(&(ia, pa)), Some(&(ib, pb))) => {
                if ia == ib {
                    i += 1;
                    j += 1;
                    pa - pb
                } else if ia < ib {
                    i += 1;
                    pa
                } else {
                    j += 1;
                    pb
                }
            }
            (Some(&(_, pa)), None) => {
                i += 1;
                pa
            }
            (None, Some(&(_, pb))) => {
                j += 1;
                pb
            }
            (None, None) => break,
        };
        worst = worst.max(diff.abs());
    }
    worst
}

/// Runs EM with per-iteration pruning until convergence or the iteration cap.
pub fn parsimonize(
    counts: &CountVector,
    background: &SparseDistribution,
    cfg: &EmConfig,
) -> Result<SparseDistribution> {
    parsimonize_traced(counts, background, cfg).map(|r| r.distribution)
}

/// Like [`parsimonize`], also reporting the iteration count.
pub fn parsimonize_traced(
    counts: &CountVector,
    background: &SparseDistribution,
    cfg: &EmConfig,
) -> Result<Parsimonized> {
    let mut current = initialize(counts)?;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iterations {
        let next = em_step(counts, &current, background, cfg.lambda)?.prune(cfg.prune_threshold);
        iterations += 1;
        let delta = max_abs_change(&current, &next);
        current = next;
        if delta < cfg.convergence_tol {
            converged = true;
            break;
        }
    }
    // With zero iterations allowed by a caller-constructed config the ML estimate still gets pruned.
    if iterations == 0 {
        current = current.prune(cfg.prune_threshold);
    }
    Ok(Parsimonized {
        distribution: current,
        iterations,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cv(entries: &[(usize, f64)], dim: usize) -> CountVector {
        CountVector::new(dim, entries.to_vec()).unwrap()
    }

    fn sd(entries: &[(usize, f64)], dim: usize) -> SparseDistribution {
        SparseDistribution::new(dim, entries.to_vec()).unwrap()
    }

    #[test]
    fn initialize_is_ml() {
        assert_eq!(initialize(&cv(&[(0, 8.0), (1, 2.0)], 2)).unwrap().entries(), &[(0, 0.8), (1, 0.2)]);
        assert_eq!(initialize(&cv(&[(3, 5.0)], 5)).unwrap().entries(), &[(3, 1.0)]);
        assert_eq!(
            initialize(&cv(&[(0, 1.0), (1, 1.0), (2, 2.0)], 3)).unwrap().entries(),
            &[(0, 0.25), (1, 0.25), (2, 0.5)]
        );
        assert!(matches!(initialize(&cv(&[], 3)), Err(Error::ZeroTotalCounts)));
        assert!(matches!(initialize(&cv(&[(0, 0.0)], 3)), Err(Error::ZeroTotalCounts)));
    }

    #[test]
    fn em_step_two_item_example() {
        let counts = cv(&[(0, 8.0), (1, 2.0)], 2);
        let bg = sd(&[(0, 0.5), (1, 0.5)], 2);
        let cur = sd(&[(0, 0.8), (1, 0.2)], 2);
        let out = em_step(&counts, &cur, &bg, 0.5).unwrap();
        // Closed form, evaluated separately from the loop above.
        let ea = 8.0 * 0.4 / 0.65;
        let eb = 2.0 * 0.1 / 0.35;
        assert!((out.get(0) - ea / (ea + eb)).abs() < 1e-15);
        assert!((out.get(1) - eb / (ea + eb)).abs() < 1e-15);
        assert!((out.get(0) - 0.896).abs() < 1e-3);
    }

    #[test]
    fn em_step_lambda_one_is_ml() {
        let counts = cv(&[(0, 3.0), (2, 7.0), (4, 1.0)], 5);
        let bg = sd(&[(0, 0.9), (2, 0.05), (4, 0.05)], 5);
        let init = initialize(&counts).unwrap();
        assert_eq!(em_step(&counts, &init, &bg, 1.0).unwrap(), init);
    }

    #[test]
    fn em_step_lowers_the_least_specific_item() {
        // item 0 has the lowest current/background ratio
        let counts = cv(&[(0, 4.0), (1, 3.0), (2, 3.0)], 3);
        let bg = sd(&[(0, 0.6), (1, 0.2), (2, 0.2)], 3);
        let init = initialize(&counts).unwrap();
        let out = em_step(&counts, &init, &bg, 0.5).unwrap();
        assert!(out.get(0) < init.get(0));
        assert!(out.get(1) > init.get(1));
    }

    #[test]
    fn zero_background_passes_counts_through() {
        let counts = cv(&[(0, 2.0), (1, 2.0)], 2);
        let bg = sd(&[(0, 1.0)], 2);
        let init = initialize(&counts).unwrap();
        let out = em_step(&counts, &init, &bg, 0.5).unwrap();
        // e_0 = 2 * 0.25 / (0.25 + 0.5) = 2/3, e_1 = 2
        assert!((out.get(0) - (2.0 / 3.0) / (8.0 / 3.0)).abs() < 1e-15);
        assert!((out.get(1) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn support_never_grows() {
        let counts = cv(&[(0, 5.0), (1, 5.0), (2, 5.0)], 3);
        let bg = sd(&[(0, 0.2), (1, 0.3), (2, 0.5)], 3);
        let cur = sd(&[(0, 0.5), (1, 0.5)], 3);
        let out = em_step(&counts, &cur, &bg, 0.3).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out.get(2), 0.0);
    }

    #[test]
    fn proportional_counts_are_a_fixed_point() {
        let counts = cv(&[(0, 50.0), (1, 30.0), (2, 20.0)], 3);
        let bg = sd(&[(0, 0.5), (1, 0.3), (2, 0.2)], 3);
        let cfg = EmConfig { lambda: 0.5, prune_threshold: 0.01, ..EmConfig::default() };
        let out = parsimonize_traced(&counts, &bg, &cfg).unwrap();
        assert_eq!(out.iterations, 1);
        for (i, p) in [0.5, 0.3, 0.2].into_iter().enumerate() {
            assert!((out.distribution.get(i) - p).abs() < 1e-12);
        }
    }

    #[test]
    fn everything_pruned_keeps_argmax() {
        let counts = cv(&[(0, 1.0), (1, 1.0), (2, 2.0)], 3);
        let bg = SparseDistribution::uniform(3);
        let cfg = EmConfig { lambda: 1.0, prune_threshold: 0.9, ..EmConfig::default() };
        assert_eq!(parsimonize(&counts, &bg, &cfg).unwrap().entries(), &[(2, 1.0)]);
    }

    #[test]
    fn config_validation() {
        assert!(EmConfig { lambda: 0.0, ..EmConfig::default() }.validate().is_err());
        assert!(EmConfig { lambda: 1.2, ..EmConfig::default() }.validate().is_err());
        assert!(EmConfig { prune_threshold: 1.0, ..EmConfig::default() }.validate().is_err());
        assert!(EmConfig { max_iterations: 0, ..EmConfig::default() }.validate().is_err());
        assert!(EmConfig::default().validate().is_ok());
    }
}
