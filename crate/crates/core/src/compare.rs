//! Multiset comparison of spectra.
//!
//! Greedy nearest-neighbour matching first; if that leaves anything
//! unmatched, an optimal assignment decides.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::spectrum::Spectrum;

/// Default absolute tolerance for eigenvalue comparison.
pub const DEFAULT_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchedPair {
    pub claimed: Complex64,
    pub observed: Complex64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub matched_pairs: Vec<MatchedPair>,
    pub unmatched_claimed: Vec<Complex64>,
    pub unmatched_observed: Vec<Complex64>,
    /// Largest distance over all assigned pairs, including rejected ones.
    pub max_error: f64,
    pub tol: f64,
    pub verdict: Verdict,
}

impl ComparisonReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

fn sorted(s: &Spectrum) -> Vec<Complex64> {
    let mut v = s.expanded();
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    v
}

pub fn compare_multisets(claimed: &Spectrum, observed: &Spectrum, tol: f64) -> ComparisonReport {
    compare_values(&sorted(claimed), &sorted(observed), tol)
}

/// Same as [`compare_multisets`] on already expanded lists. Inputs are used
/// in the given order, so sort them for reproducible reports.
pub fn compare_values(claimed: &[Complex64], observed: &[Complex64], tol: f64) -> ComparisonReport {
    let pairs = greedy(claimed, observed);
    let complete = claimed.len() == observed.len()
        && pairs.iter().all(|&(i, j)| (claimed[i] - observed[j]).norm() <= tol);
    let pairs = if complete { pairs } else { optimal(claimed, observed, tol) };
    build_report(claimed, observed, pairs, tol)
}

fn greedy(claimed: &[Complex64], observed: &[Complex64]) -> Vec<(usize, usize)> {
    let mut used = vec![false; observed.len()];
    let mut pairs = Vec::new();
    for (i, a) in claimed.iter().enumerate() {
        let best = observed
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .min_by(|(_, x), (_, y)| (*x - a).norm().total_cmp(&(*y - a).norm()));
        if let Some((j, _)) = best {
            used[j] = true;
            pairs.push((i, j));
        }
    }
    pairs
}

/// Maximum number of within-tolerance pairs, ties broken by total distance.
fn optimal(claimed: &[Complex64], observed: &[Complex64], tol: f64) -> Vec<(usize, usize)> {
    let n = claimed.len().max(observed.len());
    if n == 0 {
        return vec![];
    }
    let small = 1.0 / (n as f64 + 1.0);
    let cost = |i: usize, j: usize| -> f64 {
        if i >= claimed.len() || j >= observed.len() {
            return 1.0;
        }
        let d = (claimed[i] - observed[j]).norm();
        if d <= tol {
            if tol > 0.0 {
                small * d / tol
            } else {
                0.0
            }
        } else {
            1.0 + small * (d / (1.0 + d))
        }
    };
    hungarian(n, cost)
        .into_iter()
        .enumerate()
        .filter(|&(i, j)| i < claimed.len() && j < observed.len())
        .collect()
}

/// O(n³) assignment on an n×n cost function; returns the column for each row.
fn hungarian(n: usize, cost: impl Fn(usize, usize) -> f64) -> Vec<usize> {
    // 1-based potentials formulation
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut col_of_row = vec![0; n];
    for j in 1..=n {
        col_of_row[p[j] - 1] = j - 1;
    }
    col_of_row
}

fn build_report(claimed: &[Complex64], observed: &[Complex64], pairs: Vec<(usize, usize)>, tol: f64) -> ComparisonReport {
    let mut hit_c = vec![false; claimed.len()];
    let mut hit_o = vec![false; observed.len()];
    let mut matched_pairs = Vec::new();
    let mut max_error = 0.0f64;
    for (i, j) in pairs {
        let error = (claimed[i] - observed[j]).norm();
        max_error = max_error.max(error);
        if error <= tol {
            hit_c[i] = true;
            hit_o[j] = true;
            matched_pairs.push(MatchedPair { claimed: claimed[i], observed: observed[j], error });
        }
    }
    let unmatched_claimed: Vec<Complex64> = claimed.iter().zip(&hit_c).filter(|(_, &h)| !h).map(|(z, _)| *z).collect();
    let unmatched_observed: Vec<Complex64> = observed.iter().zip(&hit_o).filter(|(_, &h)| !h).map(|(z, _)| *z).collect();
    let verdict = if unmatched_claimed.is_empty() && unmatched_observed.is_empty() && max_error <= tol {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    ComparisonReport { matched_pairs, unmatched_claimed, unmatched_observed, max_error, tol, verdict }
}
