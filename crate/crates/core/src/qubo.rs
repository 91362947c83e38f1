//! QUBO and Ising model containers plus the `s = 2x - 1` transformation
//! between them.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

/// Quadratic unconstrained binary optimization problem, always a
/// minimization:
///
/// `energy(x) = offset + sum_i linear_i x_i + sum_{i<j} quad_ij x_i x_j`
///
/// with `x in {0,1}^n`. Quadratic keys are strictly upper-triangular and
/// zero-valued couplings are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Qubo {
    num_vars: usize,
    linear: Vec<f64>,
    quadratic: BTreeMap<(u32, u32), f64>,
    offset: f64,
}

impl Qubo {
    pub fn new(num_vars: usize) -> Qubo {
        Qubo {
            num_vars,
            linear: alloc::vec![0.0; num_vars],
            quadratic: BTreeMap::new(),
            offset: 0.0,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn linear(&self) -> &[f64] {
        &self.linear
    }

    /// Strictly upper-triangular couplings, ordered by `(i, j)`.
    pub fn quadratic(&self) -> &BTreeMap<(u32, u32), f64> {
        &self.quadratic
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn add_offset(&mut self, v: f64) {
        self.offset += v;
    }

    pub fn add_linear(&mut self, i: u32, v: f64) {
        self.linear[i as usize] += v;
    }

    /// Accumulates a coupling on the unordered pair `{i, j}`. Entries that
    /// cancel to exactly zero are removed.
    pub fn add_quadratic(&mut self, i: u32, j: u32, v: f64) {
        debug_assert!(i != j, "diagonal terms belong in `linear`");
        let key = if i < j { (i, j) } else { (j, i) };
        let entry = self.quadratic.entry(key).or_insert(0.0);
        *entry += v;
        if *entry == 0.0 {
            self.quadratic.remove(&key);
        }
    }

    /// The single evaluation contract for bit vectors in `{0,1}^n`.
    pub fn energy(&self, bits: &[u8]) -> f64 {
        debug_assert_eq!(bits.len(), self.num_vars);
        let mut e = self.offset;
        for (i, &x) in bits.iter().enumerate() {
            if x != 0 {
                e += self.linear[i];
            }
        }
        for (&(i, j), &q) in &self.quadratic {
            if bits[i as usize] != 0 && bits[j as usize] != 0 {
                e += q;
            }
        }
        e
    }
}

/// Ising model over spins `s in {-1,+1}^n`:
///
/// `energy(s) = offset + sum_i h_i s_i + sum_{i<j} J_ij s_i s_j`
#[derive(Debug, Clone, PartialEq)]
pub struct IsingModel {
    h: Vec<f64>,
    j: BTreeMap<(u32, u32), f64>,
    offset: f64,
}

impl IsingModel {
    pub fn new(num_spins: usize) -> IsingModel {
        IsingModel { h: alloc::vec![0.0; num_spins], j: BTreeMap::new(), offset: 0.0 }
    }

    pub fn num_spins(&self) -> usize {
        self.h.len()
    }

    pub fn fields(&self) -> &[f64] {
        &self.h
    }

    pub fn couplings(&self) -> &BTreeMap<(u32, u32), f64> {
        &self.j
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn energy(&self, spins: &[i8]) -> f64 {
        debug_assert_eq!(spins.len(), self.h.len());
        let mut e = self.offset;
        for (i, &s) in spins.iter().enumerate() {
            e += self.h[i] * f64::from(s);
        }
        for (&(i, j), &c) in &self.j {
            e += c * f64::from(spins[i as usize]) * f64::from(spins[j as usize]);
        }
        e
    }
}

/// Converts a QUBO to the equivalent Ising model via `x = (s + 1)/2`, so
/// `qubo.energy(x) == ising.energy(2x - 1)` for every bit vector.
pub fn ising_from_qubo(q: &Qubo) -> IsingModel {
    let mut m = IsingModel::new(q.num_vars());
    m.offset = q.offset();
    for (i, &l) in q.linear().iter().enumerate() {
        m.h[i] += l / 2.0;
        m.offset += l / 2.0;
    }
    for (&(i, j), &c) in q.quadratic() {
        let quarter = c / 4.0;
        if quarter != 0.0 {
            m.j.insert((i, j), quarter);
        }
        m.h[i as usize] += quarter;
        m.h[j as usize] += quarter;
        m.offset += quarter;
    }
    m
}

/// Converts an Ising model to the equivalent QUBO via `s = 2x - 1`.
pub fn qubo_from_ising(m: &IsingModel) -> Qubo {
    let mut q = Qubo::new(m.num_spins());
    q.offset = m.offset();
    for (i, &h) in m.fields().iter().enumerate() {
        q.linear[i] += 2.0 * h;
        q.offset -= h;
    }
    for (&(i, j), &c) in m.couplings() {
        q.add_quadratic(i, j, 4.0 * c);
        q.linear[i as usize] -= 2.0 * c;
        q.linear[j as usize] -= 2.0 * c;
        q.offset += c;
    }
    q
}
