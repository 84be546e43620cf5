//! Ising problems: couplings, spin configurations, energies, benchmark graphs
//! and exact ground-state oracles.
//!
//! Energies use the single-count convention `H = -sum_{i<k} J_ik s_i s_k`.

mod edgelist;
mod graphs;
mod oracle;

pub use edgelist::{read_edge_list, write_edge_list};
pub use graphs::{mobius_ladder, random_cubic_graph};
pub use oracle::{brute_force_ground, ground_truth, mobius_ground_dp, GroundTruth, BRUTE_FORCE_LIMIT};

use std::fmt;

use crate::error::{Error, Result};

/// Symmetric spin-coupling matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    n: usize,
    j: Vec<f64>,
}

impl CouplingMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, j: vec![0.0; n * n] }
    }

    /// Builds from a dense row-major matrix, checking symmetry and the zero diagonal.
    pub fn from_dense(n: usize, j: Vec<f64>) -> Result<Self> {
        if j.len() != n * n {
            return Err(Error::invalid(format!("expected {} entries, got {}", n * n, j.len())));
        }
        for i in 0..n {
            if j[i * n + i] != 0.0 {
                return Err(Error::invalid(format!("nonzero diagonal coupling at spin {i}")));
            }
            for k in (i + 1)..n {
                if j[i * n + k] != j[k * n + i] {
                    return Err(Error::invalid(format!("couplings ({i},{k}) and ({k},{i}) differ")));
                }
                if !j[i * n + k].is_finite() {
                    return Err(Error::invalid(format!("non-finite coupling at ({i},{k})")));
                }
            }
        }
        Ok(Self { n, j })
    }

    /// Builds from undirected weighted edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut m = Self::zeros(n);
        for &(i, k, w) in edges {
            m.set_edge(i, k, w)?;
        }
        Ok(m)
    }

    fn set_edge(&mut self, i: usize, k: usize, w: f64) -> Result<()> {
        if i >= self.n || k >= self.n {
            return Err(Error::invalid(format!("edge ({i},{k}) out of range for {} spins", self.n)));
        }
        if i == k {
            return Err(Error::invalid(format!("self-coupling on spin {i}")));
        }
        if !w.is_finite() {
            return Err(Error::invalid(format!("non-finite weight on edge ({i},{k})")));
        }
        self.j[i * self.n + k] = w;
        self.j[k * self.n + i] = w;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.j[i * self.n + k]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.j[i * self.n..(i + 1) * self.n]
    }

    /// Nonzero couplings `(i, k, J_ik)` with `i < k`.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for k in (i + 1)..self.n {
                let w = self.get(i, k);
                if w != 0.0 {
                    out.push((i, k, w));
                }
            }
        }
        out
    }

    /// Number of nonzero couplings in row `i`.
    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().filter(|w| **w != 0.0).count()
    }

    /// `J v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Spin configuration with entries in `{-1, +1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinConfig(Vec<i8>);

impl SpinConfig {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if let Some(pos) = spins.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::invalid(format!("spin {pos} is {}, expected -1 or +1", spins[pos])));
        }
        Ok(Self(spins))
    }

    pub fn all_up(n: usize) -> Self {
        Self(vec![1; n])
    }

    /// Signs of `values`, with `sign(0) = +1`.
    pub fn from_signs(values: &[f64]) -> Self {
        Self(values.iter().map(|&v| if v < 0.0 { -1 } else { 1 }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn spins(&self) -> &[i8] {
        &self.0
    }

    pub fn flipped(&self) -> Self {
        Self(self.0.iter().map(|s| -s).collect())
    }
}

impl fmt::Display for SpinConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(if *s > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// `-sum_{i<k} J_ik s_i s_k`.
pub fn ising_energy(j: &CouplingMatrix, s: &SpinConfig) -> Result<f64> {
    if j.n() != s.len() {
        return Err(Error::invalid(format!(
            "coupling matrix has {} spins, configuration has {}",
            j.n(),
            s.len()
        )));
    }
    Ok(energy_unchecked(j, s.spins()))
}

pub(crate) fn energy_unchecked(j: &CouplingMatrix, s: &[i8]) -> f64 {
    let n = j.n();
    let mut e = 0.0;
    for i in 0..n {
        let row = j.row(i);
        let mut acc = 0.0;
        for k in (i + 1)..n {
            acc += row[k] * f64::from(s[k]);
        }
        e -= f64::from(s[i]) * acc;
    }
    e
}
