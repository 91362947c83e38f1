//! Modularity matrix construction, partition scoring, and thresholding.

use alloc::vec::Vec;
use core::fmt;

use crate::graph::Graph;
use crate::math;

/// Dense symmetric modularity matrix `B = A - g g^T / 2m`.
///
/// Rows and columns sum to zero (up to rounding), and the diagonal is
/// `B_ii = -g_i^2 / 2m` because the adjacency carries no self-loops.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularityMatrix {
    n: usize,
    two_m: f64,
    /// Row-major `n x n` entries.
    data: Vec<f64>,
}

/// Errors from matrix construction and scoring.
#[derive(Debug, Clone, PartialEq)]
pub enum ModularityError {
    /// The graph has no edges, so `2m = 0` and `B` is undefined.
    EmptyGraph,
    /// A labeling or spin vector had the wrong length.
    LengthMismatch { expected: usize, got: usize },
    /// A spin entry was neither `-1` nor `+1`.
    InvalidSpin { index: usize, value: i8 },
}

impl fmt::Display for ModularityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModularityError::EmptyGraph => write!(f, "modularity undefined for 2m = 0"),
            ModularityError::LengthMismatch { expected, got } => {
                write!(f, "expected vector of length {expected}, got {got}")
            }
            ModularityError::InvalidSpin { index, value } => {
                write!(f, "spin at index {index} must be -1 or +1, got {value}")
            }
        }
    }
}

impl core::error::Error for ModularityError {}

impl ModularityMatrix {
    /// Builds `B_ij = A_ij - g_i g_j / 2m` for all pairs including the
    /// diagonal. Fails when the graph has no edge weight (`2m = 0`).
    pub fn from_graph(g: &Graph) -> Result<ModularityMatrix, ModularityError> {
        let n = g.node_count();
        let deg = g.degree_vector();
        let two_m: f64 = deg.iter().sum();
        if two_m <= 0.0 {
            return Err(ModularityError::EmptyGraph);
        }
        let mut data = alloc::vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = -deg[i] * deg[j] / two_m;
            }
        }
        for e in g.edges() {
            data[e.u as usize * n + e.v as usize] += e.w;
            data[e.v as usize * n + e.u as usize] += e.w;
        }
        Ok(ModularityMatrix { n, two_m, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn two_m(&self) -> f64 {
        self.two_m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Modularity `Q = (1/2m) sum_{i,j} B_ij [c_i == c_j]` over all ordered
    /// pairs including `i = j`. Including the diagonal makes the one-
    /// community score exactly zero via the row-sum-zero identity.
    pub fn modularity_score(&self, labels: &[u32]) -> Result<f64, ModularityError> {
        if labels.len() != self.n {
            return Err(ModularityError::LengthMismatch { expected: self.n, got: labels.len() });
        }
        let mut sum = 0.0;
        for i in 0..self.n {
            let row = self.row(i);
            let ci = labels[i];
            for (j, &b) in row.iter().enumerate() {
                if labels[j] == ci {
                    sum += b;
                }
            }
        }
        Ok(sum / self.two_m)
    }

    /// Two-community modularity `Q = (1/2m) sum_{i,j} B_ij (s_i s_j + 1)/2`
    /// for spins in `{-1, +1}`.
    pub fn two_community_score(&self, spins: &[i8]) -> Result<f64, ModularityError> {
        if spins.len() != self.n {
            return Err(ModularityError::LengthMismatch { expected: self.n, got: spins.len() });
        }
        for (i, &s) in spins.iter().enumerate() {
            if s != 1 && s != -1 {
                return Err(ModularityError::InvalidSpin { index: i, value: s });
            }
        }
        let mut sum = 0.0;
        for i in 0..self.n {
            let row = self.row(i);
            let si = spins[i];
            for (j, &b) in row.iter().enumerate() {
                if spins[j] == si {
                    sum += b;
                }
            }
        }
        Ok(sum / self.two_m)
    }

    /// Zeroes every off-diagonal entry with `|B_ij| < t` and returns the
    /// thresholded matrix together with the count of nonzero off-diagonal
    /// upper-triangle pairs that remain. The diagonal is untouched.
    ///
    /// Solutions found on a thresholded matrix should always be scored
    /// against the original matrix.
    pub fn thresholded(&self, t: f64) -> (ModularityMatrix, usize) {
        let mut out = self.clone();
        let mut kept = 0usize;
        for i in 0..self.n {
            for j in 0..self.n {
                if i == j {
                    continue;
                }
                let idx = i * self.n + j;
                if math::abs(out.data[idx]) < t {
                    out.data[idx] = 0.0;
                } else if i < j && out.data[idx] != 0.0 {
                    kept += 1;
                }
            }
        }
        (out, kept)
    }
}

/// A node-to-community assignment with its modularity score.
///
/// Labels are canonical: communities are renumbered `0..k_used` in order of
/// first appearance, and `score` is the modularity recomputed from the
/// canonical labels.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunityLabeling {
    labels: Vec<u32>,
    k_used: usize,
    score: f64,
}

impl CommunityLabeling {
    /// Canonicalizes `labels` and scores them against `bm`.
    pub fn from_labels(labels: &[u32], bm: &ModularityMatrix) -> Result<Self, ModularityError> {
        if labels.len() != bm.n() {
            return Err(ModularityError::LengthMismatch { expected: bm.n(), got: labels.len() });
        }
        let canon = canonicalize(labels);
        let k_used = canon.iter().copied().max().map_or(0, |m| m as usize + 1);
        let score = bm.modularity_score(&canon)?;
        Ok(CommunityLabeling { labels: canon, k_used, score })
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn k_used(&self) -> usize {
        self.k_used
    }

    pub fn score(&self) -> f64 {
        self.score
    }
}

/// Renumbers community ids to `0..k` by first appearance.
fn canonicalize(labels: &[u32]) -> Vec<u32> {
    let mut map: alloc::collections::BTreeMap<u32, u32> = alloc::collections::BTreeMap::new();
    let mut next = 0u32;
    labels
        .iter()
        .map(|&l| {
            *map.entry(l).or_insert_with(|| {
                let id = next;
                next += 1;
                id
            })
        })
        .collect()
}
