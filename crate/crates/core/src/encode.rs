//! Encoding of modularity maximization as QUBO problems, and decoding of
//! solver bit vectors back into community labelings.
//!
//! Two encodings are provided:
//!
//! - the two-community form: one variable per node, minimizing
//!   `-(1/2m) x^T B x`;
//! - the k-concurrent form: a logical super-node of `k` one-hot variables
//!   per graph node, minimizing
//!   `-beta * sum_j x_j^T (B/2m) x_j + sum_i gamma_i (sum_j x_{i,j} - 1)^2`.
//!
//! Variable `(node i, community j)` lives at index `j*n + i`, i.e. the bit
//! vector is `(x_{0,0}, ..., x_{n-1,0}, x_{0,1}, ..., x_{n-1,k-1})`.

use alloc::vec::Vec;
use core::fmt;

use crate::math;
use crate::modularity::{CommunityLabeling, ModularityError, ModularityMatrix};
use crate::qubo::Qubo;

/// Default cap on `n*k` for [`k_concurrent_qubo`]; guards against
/// accidentally materializing an enormous coupling map.
pub const DEFAULT_VAR_LIMIT: usize = 65_536;

/// Penalty weights for the k-concurrent encoding: one relaxation
/// coefficient `gamma_i > 0` per node and a modularity weight `beta > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PenaltyConfig {
    gamma: Vec<f64>,
    beta: f64,
}

/// Errors from the QUBO encoders and decoders.
#[derive(Debug, Clone, PartialEq)]
pub enum EncodeError {
    /// `k < 2`; a one-community split is trivial and not encodable.
    KTooSmall { k: usize },
    /// `n*k` exceeded the configured variable limit.
    VarLimit { n_vars: usize, limit: usize },
    /// A penalty coefficient or `beta` was not strictly positive.
    NonPositivePenalty { value: f64 },
    /// `gamma` must have one entry per node.
    GammaLength { expected: usize, got: usize },
    /// A bit vector had the wrong length.
    LengthMismatch { expected: usize, got: usize },
}

impl fmt::Display for EncodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncodeError::KTooSmall { k } => write!(f, "k must be at least 2, got {k}"),
            EncodeError::VarLimit { n_vars, limit } => write!(
                f,
                "k-concurrent QUBO needs {n_vars} variables, above the limit of {limit}; \
                 raise the limit and solve with hybrid_solve for problems this large"
            ),
            EncodeError::NonPositivePenalty { value } => {
                write!(f, "penalty coefficients must be > 0, got {value}")
            }
            EncodeError::GammaLength { expected, got } => {
                write!(f, "gamma must have {expected} entries (one per node), got {got}")
            }
            EncodeError::LengthMismatch { expected, got } => {
                write!(f, "expected bit vector of length {expected}, got {got}")
            }
        }
    }
}

impl core::error::Error for EncodeError {}

impl PenaltyConfig {
    /// Uniform penalties sized from the matrix: `gamma = 1.1 * max_i
    /// sum_j |B_ij| / 2m` and `beta = 1`. This exceeds the modularity gain
    /// any single node can contribute, so feasible optima are not displaced
    /// by one-hot violations in typical instances; the solver still retunes
    /// upward when a best sample comes back infeasible.
    pub fn default_for(bm: &ModularityMatrix) -> PenaltyConfig {
        let mut max_row = 0.0f64;
        for i in 0..bm.n() {
            let s: f64 = bm.row(i).iter().map(|&b| math::abs(b)).sum();
            if s > max_row {
                max_row = s;
            }
        }
        let gamma = 1.1 * max_row / bm.two_m();
        // Degenerate matrices (single node, all-zero rows) still need a
        // positive penalty for the constraint to bind.
        let gamma = if gamma > 0.0 { gamma } else { 1.0 };
        PenaltyConfig { gamma: alloc::vec![gamma; bm.n()], beta: 1.0 }
    }

    /// Uniform `gamma` for all `n` nodes.
    pub fn uniform(n: usize, gamma: f64, beta: f64) -> Result<PenaltyConfig, EncodeError> {
        Self::per_node(alloc::vec![gamma; n], beta)
    }

    /// One `gamma_i` per node.
    pub fn per_node(gamma: Vec<f64>, beta: f64) -> Result<PenaltyConfig, EncodeError> {
        if beta <= 0.0 {
            return Err(EncodeError::NonPositivePenalty { value: beta });
        }
        if let Some(&bad) = gamma.iter().find(|&&g| g <= 0.0) {
            return Err(EncodeError::NonPositivePenalty { value: bad });
        }
        Ok(PenaltyConfig { gamma, beta })
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The same configuration with every `gamma_i` multiplied by `factor`.
    pub fn scaled_gamma(&self, factor: f64) -> PenaltyConfig {
        PenaltyConfig {
            gamma: self.gamma.iter().map(|g| g * factor).collect(),
            beta: self.beta,
        }
    }
}

/// Index of the variable for node `i` in community `j`.
#[inline]
pub fn var_index(i: usize, j: usize, n: usize) -> usize {
    j * n + i
}

/// Two-community QUBO: minimizing its energy maximizes modularity over
/// bipartitions. `energy(x) = -(1/2m) sum_{i,j} B_ij x_i x_j`, i.e.
/// `linear_i = -B_ii/2m` and `quad_ij = -2 B_ij/2m`; for any bits the
/// bipartition modularity of the sign labeling equals `-2 * energy`.
pub fn two_community_qubo(bm: &ModularityMatrix) -> Qubo {
    let n = bm.n();
    let two_m = bm.two_m();
    let mut q = Qubo::new(n);
    for i in 0..n {
        q.add_linear(i as u32, -bm.get(i, i) / two_m);
        for j in (i + 1)..n {
            let b = bm.get(i, j);
            if b != 0.0 {
                q.add_quadratic(i as u32, j as u32, -2.0 * b / two_m);
            }
        }
    }
    q
}

/// K-concurrent QUBO with the default variable limit of
/// [`DEFAULT_VAR_LIMIT`].
pub fn k_concurrent_qubo(
    bm: &ModularityMatrix,
    k: usize,
    cfg: &PenaltyConfig,
) -> Result<Qubo, EncodeError> {
    k_concurrent_qubo_limited(bm, k, cfg, DEFAULT_VAR_LIMIT)
}

/// K-concurrent QUBO over `N = n*k` variables:
///
/// `energy(X) = -beta * sum_j x_j^T (B/2m) x_j
///            + sum_i gamma_i (sum_j x_{i,j} - 1)^2`
///
/// The penalty expands to the block form `X^T B_Gamma X - 2 Gamma^T X +
/// sum_i gamma_i`: within each super-node, couplings of `2 gamma_i` join
/// every pair of community slots, each slot picks up `-gamma_i` linearly,
/// and the constant goes to the offset. Minimizing drives every super-node
/// to exactly one active slot (a violation never lowers the penalty term).
pub fn k_concurrent_qubo_limited(
    bm: &ModularityMatrix,
    k: usize,
    cfg: &PenaltyConfig,
    var_limit: usize,
) -> Result<Qubo, EncodeError> {
    if k < 2 {
        return Err(EncodeError::KTooSmall { k });
    }
    let n = bm.n();
    if cfg.gamma.len() != n {
        return Err(EncodeError::GammaLength { expected: n, got: cfg.gamma.len() });
    }
    let n_vars = n * k;
    if n_vars > var_limit {
        return Err(EncodeError::VarLimit { n_vars, limit: var_limit });
    }
    let two_m = bm.two_m();
    let beta = cfg.beta;
    let mut q = Qubo::new(n_vars);
    // Modularity term, one copy of B per community block.
    for j in 0..k {
        for i in 0..n {
            q.add_linear(var_index(i, j, n) as u32, -beta * bm.get(i, i) / two_m);
            for i2 in (i + 1)..n {
                let b = bm.get(i, i2);
                if b != 0.0 {
                    q.add_quadratic(
                        var_index(i, j, n) as u32,
                        var_index(i2, j, n) as u32,
                        -2.0 * beta * b / two_m,
                    );
                }
            }
        }
    }
    // One-hot penalty per super-node.
    for i in 0..n {
        let g = cfg.gamma[i];
        q.add_offset(g);
        for j in 0..k {
            q.add_linear(var_index(i, j, n) as u32, -g);
            for j2 in (j + 1)..k {
                q.add_quadratic(
                    var_index(i, j, n) as u32,
                    var_index(i, j2, n) as u32,
                    2.0 * g,
                );
            }
        }
    }
    Ok(q)
}

/// Counts super-nodes whose slot sum differs from one.
pub fn one_hot_violations(bits: &[u8], n: usize, k: usize) -> Result<usize, EncodeError> {
    if bits.len() != n * k {
        return Err(EncodeError::LengthMismatch { expected: n * k, got: bits.len() });
    }
    let mut violations = 0;
    for i in 0..n {
        let set: u32 = (0..k).map(|j| u32::from(bits[var_index(i, j, n)])).sum();
        if set != 1 {
            violations += 1;
        }
    }
    Ok(violations)
}

/// Decodes a k-concurrent bit vector into a valid labeling, scored against
/// `bm` (pass the unthresholded matrix when the QUBO was built on a
/// thresholded one).
///
/// Super-nodes with exactly one active slot keep that community. Violating
/// super-nodes are repaired in node-index order: each is assigned to the
/// community with the largest modularity gain against all already-decided
/// nodes, ties going to the lowest community id. Returns the labeling and
/// the number of repaired nodes.
pub fn decode_labeling(
    bits: &[u8],
    k: usize,
    bm: &ModularityMatrix,
) -> Result<(CommunityLabeling, usize), EncodeError> {
    let n = bm.n();
    if bits.len() != n * k {
        return Err(EncodeError::LengthMismatch { expected: n * k, got: bits.len() });
    }
    let mut assigned: Vec<Option<u32>> = alloc::vec![None; n];
    for i in 0..n {
        let mut count = 0;
        let mut community = 0u32;
        for j in 0..k {
            if bits[var_index(i, j, n)] != 0 {
                count += 1;
                community = j as u32;
            }
        }
        if count == 1 {
            assigned[i] = Some(community);
        }
    }
    let mut repairs = 0;
    for i in 0..n {
        if assigned[i].is_some() {
            continue;
        }
        let mut gains = alloc::vec![0.0f64; k];
        for (u, a) in assigned.iter().enumerate() {
            if let Some(c) = a {
                gains[*c as usize] += bm.get(i, u);
            }
        }
        let mut best = 0usize;
        for (c, &gain) in gains.iter().enumerate().skip(1) {
            if gain > gains[best] {
                best = c;
            }
        }
        assigned[i] = Some(best as u32);
        repairs += 1;
    }
    let labels: Vec<u32> = assigned.into_iter().map(|a| a.unwrap_or(0)).collect();
    let labeling = CommunityLabeling::from_labels(&labels, bm).map_err(|e| match e {
        ModularityError::LengthMismatch { expected, got } => {
            EncodeError::LengthMismatch { expected, got }
        }
        // from_labels only fails on length, which we checked above.
        _ => EncodeError::LengthMismatch { expected: n, got: n },
    })?;
    Ok((labeling, repairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::modularity::ModularityMatrix;
    use alloc::vec;
    use alloc::vec::Vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn k2_matrix() -> ModularityMatrix {
        let g = Graph::from_indexed_edges(2, &[(0, 1, 1.0)]).unwrap();
        ModularityMatrix::from_graph(&g).unwrap()
    }

    fn two_triangles_matrix() -> ModularityMatrix {
        let g = Graph::from_indexed_edges(
            6,
            &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (3, 4, 1.0), (4, 5, 1.0), (3, 5, 1.0)],
        )
        .unwrap();
        ModularityMatrix::from_graph(&g).unwrap()
    }

    fn all_bit_vectors(n: usize) -> impl Iterator<Item = Vec<u8>> {
        (0u64..(1 << n)).map(move |mask| (0..n).map(|b| ((mask >> b) & 1) as u8).collect())
    }

    #[test]
    fn two_community_k2_optimum_keeps_pair_together() {
        let q = two_community_qubo(&k2_matrix());
        let mut best = f64::INFINITY;
        let mut argmins = Vec::new();
        for bits in all_bit_vectors(2) {
            let e = q.energy(&bits);
            if e < best - 1e-12 {
                best = e;
                argmins = vec![bits];
            } else if (e - best).abs() <= 1e-12 {
                argmins.push(bits);
            }
        }
        assert_eq!(best, 0.0);
        assert_eq!(argmins, vec![vec![0, 0], vec![1, 1]]);
    }

    #[test]
    fn two_community_triangles_optimum_is_the_split() {
        let bm = two_triangles_matrix();
        let q = two_community_qubo(&bm);
        let mut best = f64::INFINITY;
        let mut arg = Vec::new();
        for bits in all_bit_vectors(6) {
            let e = q.energy(&bits);
            if e < best {
                best = e;
                arg = bits;
            }
        }
        // -2 * energy recovers the bipartition modularity.
        assert!((-2.0 * best - 0.5).abs() < 1e-12);
        let labels: Vec<u32> = arg.iter().map(|&b| u32::from(b)).collect();
        assert!((bm.modularity_score(&labels).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn two_community_energy_of_zero_vector_is_zero() {
        let q = two_community_qubo(&two_triangles_matrix());
        assert_eq!(q.energy(&[0; 6]), 0.0);
    }

    #[test]
    fn two_community_energy_tracks_spin_score() {
        let bm = two_triangles_matrix();
        let q = two_community_qubo(&bm);
        for bits in all_bit_vectors(6) {
            let spins: Vec<i8> = bits.iter().map(|&b| if b == 1 { 1 } else { -1 }).collect();
            let score = bm.two_community_score(&spins).unwrap();
            assert!((-2.0 * q.energy(&bits) - score).abs() < 1e-12);
        }
    }

    #[test]
    fn k_concurrent_rejects_small_k_and_large_n() {
        let bm = k2_matrix();
        let cfg = PenaltyConfig::default_for(&bm);
        assert!(matches!(k_concurrent_qubo(&bm, 1, &cfg), Err(EncodeError::KTooSmall { k: 1 })));
        assert!(matches!(
            k_concurrent_qubo_limited(&bm, 3, &cfg, 5),
            Err(EncodeError::VarLimit { n_vars: 6, limit: 5 })
        ));
    }

    #[test]
    fn feasible_one_hot_has_zero_penalty() {
        let bm = two_triangles_matrix();
        let cfg = PenaltyConfig::default_for(&bm);
        let k = 3;
        let q = k_concurrent_qubo(&bm, k, &cfg).unwrap();
        // Labels (0,0,0,1,1,1) as one-hot bits.
        let labels = [0usize, 0, 0, 1, 1, 1];
        let mut bits = vec![0u8; 6 * k];
        for (i, &c) in labels.iter().enumerate() {
            bits[var_index(i, c, 6)] = 1;
        }
        let labels_u32: Vec<u32> = labels.iter().map(|&c| c as u32).collect();
        let q_score = bm.modularity_score(&labels_u32).unwrap();
        // Zero penalty on feasible X, so energy is -beta * Q exactly.
        let e = q.energy(&bits);
        assert!((e + cfg.beta() * q_score).abs() < 1e-12);
    }

    #[test]
    fn all_zero_bits_pay_full_penalty() {
        let bm = two_triangles_matrix();
        let cfg = PenaltyConfig::uniform(6, 0.7, 1.0).unwrap();
        let q = k_concurrent_qubo(&bm, 2, &cfg).unwrap();
        let e = q.energy(&vec![0u8; 12]);
        assert!((e - 6.0 * 0.7).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_definitional_penalty_sum() {
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        for _ in 0..100 {
            let n = 2 + (rng.random::<u32>() % 5) as usize;
            let mut edges = Vec::new();
            for a in 0..n as u32 {
                for b in (a + 1)..n as u32 {
                    if rng.random::<f64>() < 0.6 {
                        edges.push((a, b, 0.25 + rng.random::<f64>()));
                    }
                }
            }
            if edges.is_empty() {
                continue;
            }
            let g = Graph::from_indexed_edges(n, &edges).unwrap();
            let bm = ModularityMatrix::from_graph(&g).unwrap();
            let k = 2 + (rng.random::<u32>() % 3) as usize;
            let gamma: Vec<f64> = (0..n).map(|_| 0.2 + rng.random::<f64>()).collect();
            let beta = 0.5 + rng.random::<f64>();
            let cfg = PenaltyConfig::per_node(gamma.clone(), beta).unwrap();
            let q = k_concurrent_qubo(&bm, k, &cfg).unwrap();
            for _ in 0..10 {
                let bits: Vec<u8> = (0..n * k).map(|_| u8::from(rng.random::<bool>())).collect();
                // Definitional evaluation of both terms.
                let mut modularity_term = 0.0;
                for j in 0..k {
                    for a in 0..n {
                        for b in 0..n {
                            if bits[var_index(a, j, n)] != 0 && bits[var_index(b, j, n)] != 0 {
                                modularity_term += bm.get(a, b) / bm.two_m();
                            }
                        }
                    }
                }
                let mut penalty = 0.0;
                for i in 0..n {
                    let s: f64 =
                        (0..k).map(|j| f64::from(bits[var_index(i, j, n)])).sum::<f64>() - 1.0;
                    penalty += gamma[i] * s * s;
                }
                let expect = -beta * modularity_term + penalty;
                let got = q.energy(&bits);
                assert!((got - expect).abs() <= 1e-9 * (1.0 + expect.abs()), "{got} vs {expect}");
            }
        }
    }

    #[test]
    fn violation_counting() {
        assert_eq!(one_hot_violations(&[1, 0, 0, 0, 1, 0], 3, 2).unwrap(), 2);
        assert_eq!(one_hot_violations(&[1, 0, 1, 0, 1, 0], 3, 2).unwrap(), 0);
        assert_eq!(one_hot_violations(&[0; 6], 3, 2).unwrap(), 3);
        assert!(one_hot_violations(&[0; 5], 3, 2).is_err());
    }

    #[test]
    fn decode_valid_one_hot_has_no_repairs() {
        let bm = two_triangles_matrix();
        let mut bits = vec![0u8; 12];
        for (i, &c) in [0usize, 0, 0, 1, 1, 1].iter().enumerate() {
            bits[var_index(i, c, 6)] = 1;
        }
        let (lab, repairs) = decode_labeling(&bits, 2, &bm).unwrap();
        assert_eq!(repairs, 0);
        assert_eq!(lab.labels(), &[0, 0, 0, 1, 1, 1]);
        assert!((lab.score() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn decode_all_zero_k2_repairs_into_one_community() {
        let bm = k2_matrix();
        let (lab, repairs) = decode_labeling(&[0, 0, 0, 0], 2, &bm).unwrap();
        assert_eq!(repairs, 2);
        assert_eq!(lab.labels(), &[0, 0]);
        assert_eq!(lab.k_used(), 1);
        assert!(lab.score().abs() < 1e-15);
    }

    #[test]
    fn decode_all_ones_still_valid() {
        let bm = two_triangles_matrix();
        let k = 3;
        let bits = vec![1u8; 6 * k];
        let (lab, repairs) = decode_labeling(&bits, k, &bm).unwrap();
        assert_eq!(repairs, 6);
        assert!(lab.k_used() <= k);
        assert_eq!(lab.labels().len(), 6);
    }

    #[test]
    fn scaling_gamma_and_beta_preserves_argmin_set() {
        let bm = two_triangles_matrix();
        let cfg = PenaltyConfig::default_for(&bm);
        let scaled = PenaltyConfig::per_node(
            cfg.gamma().iter().map(|g| g * 3.0).collect(),
            cfg.beta() * 3.0,
        )
        .unwrap();
        let k = 2;
        let q1 = k_concurrent_qubo(&bm, k, &cfg).unwrap();
        let q2 = k_concurrent_qubo(&bm, k, &scaled).unwrap();
        let argmin = |q: &Qubo| {
            let mut best = f64::INFINITY;
            let mut set = Vec::new();
            for bits in all_bit_vectors(12) {
                let e = q.energy(&bits);
                if e < best - 1e-10 {
                    best = e;
                    set = vec![bits];
                } else if (e - best).abs() <= 1e-10 {
                    set.push(bits);
                }
            }
            set
        };
        assert_eq!(argmin(&q1), argmin(&q2));
    }
}
