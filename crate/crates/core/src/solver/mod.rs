//! QUBO solvers: exhaustive enumeration, simulated annealing, tabu search,
//! a qbsolv-style hybrid decomposition loop, and the end-to-end community
//! detection pipeline built on them.

use alloc::vec::Vec;
use core::fmt;

use crate::qubo::Qubo;

mod detect;
mod exhaustive;
mod hybrid;
mod sa;
mod tabu;

pub use detect::{
    detect_communities, detect_communities_auto_k, detect_communities_with_backend, BackendChoice,
    DetectError, DetectionReport,
};
pub use exhaustive::exhaustive_solve;
pub use hybrid::hybrid_solve;
pub use sa::sa_sample;
pub use tabu::tabu_improve;

/// Which solver produced a [`SampleSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Exhaustive,
    Sa,
    Tabu,
    Hybrid,
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::Exhaustive => "exhaustive",
            Backend::Sa => "sa",
            Backend::Tabu => "tabu",
            Backend::Hybrid => "hybrid",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One solution with its energy and how many times it was observed.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub bits: Vec<u8>,
    pub energy: f64,
    pub occurrences: u32,
}

/// Solver output: samples sorted ascending by `(energy, bits)`, identical
/// bit vectors merged with their occurrence counts summed.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    samples: Vec<Sample>,
    backend: Backend,
    wall_time: f64,
    seed: u64,
}

impl SampleSet {
    /// Normalizes raw samples: merges duplicates and sorts by
    /// `(energy, bits)`.
    pub fn new(raw: Vec<Sample>, backend: Backend, seed: u64, wall_time: f64) -> SampleSet {
        let mut merged: alloc::collections::BTreeMap<Vec<u8>, (f64, u32)> =
            alloc::collections::BTreeMap::new();
        for s in raw {
            let entry = merged.entry(s.bits).or_insert((s.energy, 0));
            entry.1 += s.occurrences;
        }
        let mut samples: Vec<Sample> = merged
            .into_iter()
            .map(|(bits, (energy, occurrences))| Sample { bits, energy, occurrences })
            .collect();
        samples.sort_by(|a, b| {
            a.energy
                .partial_cmp(&b.energy)
                .expect("sample energies are finite")
                .then_with(|| a.bits.cmp(&b.bits))
        });
        SampleSet { samples, backend, wall_time, seed }
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    /// The lowest-energy sample.
    pub fn best(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn wall_time(&self) -> f64 {
        self.wall_time
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Knobs shared by every solver backend.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverParams {
    /// Base RNG seed; SA read `r` uses stream `seed + r`.
    pub seed: u64,
    /// Independent simulated-annealing restarts.
    pub num_reads: u32,
    /// Full Metropolis sweeps per read.
    pub sweeps: u32,
    /// `(beta_hot, beta_cold)` endpoints of the geometric inverse-
    /// temperature schedule; `None` calibrates from sampled flip energies
    /// (initial uphill acceptance near 0.8, final near 1e-4).
    pub beta_schedule: Option<(f64, f64)>,
    /// Steps a flipped variable stays tabu.
    pub tabu_tenure: u32,
    /// Tabu stops after this many consecutive non-improving steps.
    pub tabu_max_stall: u32,
    /// Block size for hybrid subproblem solves.
    pub subqubo_size: usize,
    /// Hybrid outer-loop round limit.
    pub hybrid_max_rounds: u32,
    /// Largest problem `sa_sample` accepts directly.
    pub var_budget: usize,
}

impl Default for SolverParams {
    fn default() -> SolverParams {
        SolverParams {
            seed: 42,
            num_reads: 50,
            sweeps: 2000,
            beta_schedule: None,
            tabu_tenure: 10,
            tabu_max_stall: 200,
            subqubo_size: 40,
            hybrid_max_rounds: 50,
            var_budget: 1024,
        }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<(), SolveError> {
        let positive = self.num_reads > 0
            && self.sweeps > 0
            && self.tabu_tenure > 0
            && self.tabu_max_stall > 0
            && self.subqubo_size > 0
            && self.hybrid_max_rounds > 0
            && self.var_budget > 0;
        if !positive {
            return Err(SolveError::InvalidParams {
                reason: "all solver parameters must be positive",
            });
        }
        if let Some((hot, cold)) = self.beta_schedule {
            if !(hot > 0.0 && cold > 0.0 && hot < cold) {
                return Err(SolveError::InvalidParams {
                    reason: "beta schedule requires 0 < beta_hot < beta_cold",
                });
            }
        }
        if self.subqubo_size > self.var_budget {
            return Err(SolveError::InvalidParams {
                reason: "subqubo_size must not exceed var_budget",
            });
        }
        Ok(())
    }
}

/// Errors from the solver backends.
#[derive(Debug, Clone, PartialEq)]
pub enum SolveError {
    InvalidParams { reason: &'static str },
    /// Exhaustive enumeration is capped at 25 variables.
    TooManyVariables { n_vars: usize, max: usize },
    /// Direct SA refuses problems above `var_budget`.
    OverVarBudget { n_vars: usize, budget: usize },
    /// A start vector had the wrong length.
    LengthMismatch { expected: usize, got: usize },
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::InvalidParams { reason } => write!(f, "invalid solver parameters: {reason}"),
            SolveError::TooManyVariables { n_vars, max } => {
                write!(f, "exhaustive solve supports at most {max} variables, got {n_vars}")
            }
            SolveError::OverVarBudget { n_vars, budget } => write!(
                f,
                "{n_vars} variables exceed the direct-solve budget of {budget}; \
                 use hybrid_solve for problems this large"
            ),
            SolveError::LengthMismatch { expected, got } => {
                write!(f, "expected bit vector of length {expected}, got {got}")
            }
        }
    }
}

impl core::error::Error for SolveError {}

/// Deterministic stream splitting for repeat/subproblem seeds
/// (SplitMix64 finalizer).
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Flattened symmetric adjacency view of a QUBO for O(1) single-flip
/// deltas: `fields[i] = linear_i + sum_j quad_ij x_j`, and flipping `x_i`
/// changes the energy by `(1 - 2 x_i) * fields[i]`.
pub(crate) struct Compiled {
    pub linear: Vec<f64>,
    pub offset: f64,
    pub neighbor_start: Vec<u32>,
    pub neighbor_idx: Vec<u32>,
    pub neighbor_w: Vec<f64>,
}

impl Compiled {
    pub fn from_qubo(q: &Qubo) -> Compiled {
        let n = q.num_vars();
        let mut degree = alloc::vec![0u32; n];
        for (&(i, j), _) in q.quadratic() {
            degree[i as usize] += 1;
            degree[j as usize] += 1;
        }
        let mut neighbor_start = alloc::vec![0u32; n + 1];
        for i in 0..n {
            neighbor_start[i + 1] = neighbor_start[i] + degree[i];
        }
        let total = neighbor_start[n] as usize;
        let mut neighbor_idx = alloc::vec![0u32; total];
        let mut neighbor_w = alloc::vec![0.0f64; total];
        let mut fill = neighbor_start.clone();
        for (&(i, j), &w) in q.quadratic() {
            let a = fill[i as usize] as usize;
            neighbor_idx[a] = j;
            neighbor_w[a] = w;
            fill[i as usize] += 1;
            let b = fill[j as usize] as usize;
            neighbor_idx[b] = i;
            neighbor_w[b] = w;
            fill[j as usize] += 1;
        }
        Compiled {
            linear: q.linear().to_vec(),
            offset: q.offset(),
            neighbor_start,
            neighbor_idx,
            neighbor_w,
        }
    }

    pub fn n(&self) -> usize {
        self.linear.len()
    }

    /// Full energy recomputation (pairs counted once).
    pub fn energy(&self, bits: &[u8]) -> f64 {
        let mut e = self.offset;
        for (i, &x) in bits.iter().enumerate() {
            if x == 0 {
                continue;
            }
            e += self.linear[i];
            let lo = self.neighbor_start[i] as usize;
            let hi = self.neighbor_start[i + 1] as usize;
            for a in lo..hi {
                let j = self.neighbor_idx[a] as usize;
                if j > i && bits[j] != 0 {
                    e += self.neighbor_w[a];
                }
            }
        }
        e
    }

    pub fn init_fields(&self, bits: &[u8]) -> Vec<f64> {
        let mut fields = self.linear.clone();
        for (i, &x) in bits.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let lo = self.neighbor_start[i] as usize;
            let hi = self.neighbor_start[i + 1] as usize;
            for a in lo..hi {
                fields[self.neighbor_idx[a] as usize] += self.neighbor_w[a];
            }
        }
        fields
    }

    /// Energy change from flipping `x_i` in the current state.
    #[inline]
    pub fn delta(&self, i: usize, bits: &[u8], fields: &[f64]) -> f64 {
        (1.0 - 2.0 * f64::from(bits[i])) * fields[i]
    }

    /// Applies the flip of `x_i`, updating neighbor fields.
    pub fn flip(&self, i: usize, bits: &mut [u8], fields: &mut [f64]) {
        let sign = if bits[i] == 0 { 1.0 } else { -1.0 };
        bits[i] ^= 1;
        let lo = self.neighbor_start[i] as usize;
        let hi = self.neighbor_start[i + 1] as usize;
        for a in lo..hi {
            fields[self.neighbor_idx[a] as usize] += sign * self.neighbor_w[a];
        }
    }
}

/// Measures elapsed seconds around `f` when `std` is available; reports
/// zero otherwise.
pub(crate) fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    #[cfg(feature = "std")]
    {
        let start = std::time::Instant::now();
        let out = f();
        (out, start.elapsed().as_secs_f64())
    }
    #[cfg(not(feature = "std"))]
    {
        (f(), 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn sampleset_merges_and_sorts() {
        let set = SampleSet::new(
            vec![
                Sample { bits: vec![1, 0], energy: 2.0, occurrences: 1 },
                Sample { bits: vec![0, 0], energy: -1.0, occurrences: 2 },
                Sample { bits: vec![1, 0], energy: 2.0, occurrences: 3 },
            ],
            Backend::Sa,
            7,
            0.0,
        );
        assert_eq!(set.samples().len(), 2);
        assert_eq!(set.best().bits, vec![0, 0]);
        assert_eq!(set.best().occurrences, 2);
        assert_eq!(set.samples()[1].occurrences, 4);
    }

    #[test]
    fn compiled_energy_matches_qubo_energy() {
        let mut q = Qubo::new(4);
        q.add_offset(0.5);
        q.add_linear(0, -1.0);
        q.add_linear(3, 2.0);
        q.add_quadratic(0, 1, 1.5);
        q.add_quadratic(2, 3, -0.75);
        let c = Compiled::from_qubo(&q);
        for mask in 0u32..16 {
            let bits: Vec<u8> = (0..4).map(|b| ((mask >> b) & 1) as u8).collect();
            assert_eq!(c.energy(&bits), q.energy(&bits));
        }
    }

    #[test]
    fn delta_matches_recomputation() {
        let mut q = Qubo::new(3);
        q.add_linear(0, 0.3);
        q.add_quadratic(0, 1, -1.0);
        q.add_quadratic(1, 2, 2.0);
        let c = Compiled::from_qubo(&q);
        let mut bits = vec![1u8, 0, 1];
        let mut fields = c.init_fields(&bits);
        for i in 0..3 {
            let before = c.energy(&bits);
            let d = c.delta(i, &bits, &fields);
            c.flip(i, &mut bits, &mut fields);
            let after = c.energy(&bits);
            assert!((after - before - d).abs() < 1e-12);
            c.flip(i, &mut bits, &mut fields);
        }
    }

    #[test]
    fn derive_seed_is_stable_and_spread() {
        assert_eq!(derive_seed(42, 0), derive_seed(42, 0));
        assert_ne!(derive_seed(42, 0), derive_seed(42, 1));
        assert_ne!(derive_seed(42, 1), derive_seed(43, 1));
    }

    #[test]
    fn params_validation() {
        let mut p = SolverParams::default();
        assert!(p.validate().is_ok());
        p.subqubo_size = 5000;
        assert!(p.validate().is_err());
        let mut p = SolverParams { beta_schedule: Some((2.0, 1.0)), ..SolverParams::default() };
        assert!(p.validate().is_err());
        p.beta_schedule = Some((0.1, 5.0));
        assert!(p.validate().is_ok());
        p.num_reads = 0;
        assert!(p.validate().is_err());
    }
}
