//! Maximum-weight assignment machinery.
//!
//! [`hungarian`] solves the standard (square) assignment problem to
//! optimality in O(n³). [`pad`] turns a k-cardinality instance — pick at
//! most `k` edges of a complete weighted bipartite graph with maximum total
//! weight — into a square standard instance by adding `m−k` rows and `n−k`
//! columns whose edges toward original vertices carry a weight strictly
//! larger than any feasible matching total. Every optimum of the padded
//! instance then uses all `(n−k)+(m−k)` pad edges, leaving exactly `k`
//! original edges; [`extract`] reads them back out.

use alloc::vec;
use alloc::vec::Vec;

/// A k-cardinality assignment instance over the complete bipartite graph
/// `n × m`. Absent edges are encoded as weight 0; negative weights are
/// clamped to 0 on construction (with non-negative weights the "at most k"
/// and "exactly k" optima coincide).
#[derive(Debug, Clone, PartialEq)]
pub struct KCardInstance {
    n: usize,
    m: usize,
    k: usize,
    weights: Vec<Vec<f64>>,
}

impl KCardInstance {
    /// Panics if the matrix is ragged, holds non-finite entries, or
    /// `k > min(n, m)`.
    pub fn new(weights: Vec<Vec<f64>>, k: usize) -> Self {
        let n = weights.len();
        let m = weights.first().map_or(0, Vec::len);
        for row in &weights {
            assert_eq!(row.len(), m, "weight matrix must be rectangular");
            assert!(row.iter().all(|w| w.is_finite()), "weights must be finite");
        }
        assert!(k <= n.min(m), "k = {k} exceeds min(n, m) = {}", n.min(m));
        let weights = weights
            .into_iter()
            .map(|row| row.into_iter().map(|w| w.max(0.0)).collect())
            .collect();
        Self { n, m, k, weights }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i][j]
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }
}

/// The square instance produced by [`pad`].
#[derive(Debug, Clone, PartialEq)]
pub struct PaddedInstance {
    pub size: usize,
    pub weights: Vec<Vec<f64>>,
    /// Weight of every pad↔original edge; exceeds any matching total of the
    /// original instance.
    pub a_value: f64,
}

/// Pads a k-cardinality instance to a `(n+m−k)²` standard instance.
///
/// Cell layout: original weights in the top-left `n × m` block, `a_value` on
/// every original-row×pad-column and pad-row×original-column cell, 0 on
/// pad×pad cells. `a_value = (max weight + 1)·(n + m)` is strictly larger
/// than any sum of `min(n, m)` original weights, so a maximum matching of
/// the padded instance takes every pad vertex through an `a_value` edge.
pub fn pad(instance: &KCardInstance) -> PaddedInstance {
    let (n, m, k) = (instance.n, instance.m, instance.k);
    let size = n + m - k;
    let max_w = instance
        .weights
        .iter()
        .flatten()
        .fold(0.0_f64, |acc, &w| acc.max(w));
    let a_value = (max_w + 1.0) * (n + m) as f64;
    let mut weights = vec![vec![0.0; size]; size];
    for (i, row) in weights.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = match (i < n, j < m) {
                (true, true) => instance.weights[i][j],
                (true, false) | (false, true) => a_value,
                (false, false) => 0.0,
            };
        }
    }
    PaddedInstance {
        size,
        weights,
        a_value,
    }
}

/// Maximum-weight perfect matching of a square matrix, as the permutation
/// `row → column`. O(size³) via shortest augmenting paths on dual
/// potentials. Panics on non-square or non-finite input.
pub fn hungarian(weights: &[Vec<f64>]) -> Vec<usize> {
    let n = weights.len();
    for row in weights {
        assert_eq!(row.len(), n, "hungarian needs a square matrix");
        assert!(row.iter().all(|w| w.is_finite()), "weights must be finite");
    }
    if n == 0 {
        return Vec::new();
    }
    // Minimization on negated weights; 1-indexed with column 0 as the
    // virtual start of each augmenting path.
    let cost = |i: usize, j: usize| -weights[i - 1][j - 1];
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut row_of_col = vec![0usize; n + 1];
    let mut prev_col = vec![0usize; n + 1];
    for i in 1..=n {
        row_of_col[0] = i;
        let mut j0 = 0usize;
        let mut min_slack = vec![f64::INFINITY; n + 1];
        let mut visited = vec![false; n + 1];
        loop {
            visited[j0] = true;
            let i0 = row_of_col[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if visited[j] {
                    continue;
                }
                let slack = cost(i0, j) - u[i0] - v[j];
                if slack < min_slack[j] {
                    min_slack[j] = slack;
                    prev_col[j] = j0;
                }
                if min_slack[j] < delta {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if visited[j] {
                    u[row_of_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
            if row_of_col[j0] == 0 {
                break;
            }
        }
        // Unwind the augmenting path.
        while j0 != 0 {
            let j1 = prev_col[j0];
            row_of_col[j0] = row_of_col[j1];
            j0 = j1;
        }
    }
    let mut perm = vec![0usize; n];
    for j in 1..=n {
        perm[row_of_col[j] - 1] = j - 1;
    }
    perm
}

/// Outcome of one original row after solving the padded instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowOutcome {
    /// Matched to original column `j`.
    Matched(usize),
    /// Matched to a pad column, i.e. unmatched in the original problem.
    Unmatched,
}

/// Reads the original-problem outcome of each of the first `n` rows out of a
/// permutation over the padded instance.
pub fn extract(perm: &[usize], n: usize, m: usize) -> Vec<RowOutcome> {
    perm[..n]
        .iter()
        .map(|&j| {
            if j < m {
                RowOutcome::Matched(j)
            } else {
                RowOutcome::Unmatched
            }
        })
        .collect()
}

/// A solved k-cardinality instance: the `k` selected edges and their total
/// weight.
#[derive(Debug, Clone, PartialEq)]
pub struct KCardSolution {
    pub edges: Vec<(usize, usize)>,
    pub total_weight: f64,
}

/// Optimal k-cardinality assignment via pad-then-hungarian. For non-negative
/// weights the result attains the maximum total weight over all matchings
/// with at most (equivalently exactly) `k` edges, and `edges.len() == k`.
pub fn solve_kcard(instance: &KCardInstance) -> KCardSolution {
    let padded = pad(instance);
    let perm = hungarian(&padded.weights);
    let mut edges = Vec::new();
    let mut total_weight = 0.0;
    for (i, outcome) in extract(&perm, instance.n, instance.m).iter().enumerate() {
        if let RowOutcome::Matched(j) = *outcome {
            edges.push((i, j));
            total_weight += instance.weights[i][j];
        }
    }
    KCardSolution {
        edges,
        total_weight,
    }
}
