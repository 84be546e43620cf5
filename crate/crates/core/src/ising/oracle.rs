use super::{energy_unchecked, mobius_ladder, CouplingMatrix};
use crate::error::{Error, Result};

/// Largest spin count accepted by [`brute_force_ground`].
pub const BRUTE_FORCE_LIMIT: usize = 24;

/// Exact ground energy of an Ising problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundTruth {
    pub energy: f64,
    /// More than one ground configuration up to a global flip.
    pub degenerate: bool,
}

/// Exhaustive search over the `2^(n-1)` configurations with spin 0 fixed to +1,
/// visited in Gray-code order so each step flips a single spin.
pub fn brute_force_ground(j: &CouplingMatrix) -> Result<GroundTruth> {
    let n = j.n();
    if n == 0 {
        return Err(Error::invalid("empty coupling matrix"));
    }
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::SizeLimit { n, limit: BRUTE_FORCE_LIMIT });
    }

    let mut spins = vec![1i8; n];
    let mut field: Vec<f64> = (0..n).map(|i| j.row(i).iter().sum()).collect();
    let mut energy = energy_unchecked(j, &spins);
    let mut best = energy;
    let mut best_code = 0u64;

    let free = n - 1;
    let total = 1u64 << free;
    for step in 1..total {
        let q = 1 + step.trailing_zeros() as usize;
        let old = f64::from(spins[q]);
        energy += 2.0 * old * field[q];
        spins[q] = -spins[q];
        let row = j.row(q);
        for (f, w) in field.iter_mut().zip(row) {
            *f -= 2.0 * old * w;
        }
        if energy < best {
            best = energy;
            best_code = step ^ (step >> 1);
        }
    }

    // Recompute from scratch so accumulated rounding cannot leak into the result.
    let exact = energy_unchecked(j, &gray_spins(best_code, n));
    let tol = 1e-9 * exact.abs().max(1.0);

    let mut count = 0u64;
    spins.fill(1);
    energy = energy_unchecked(j, &spins);
    field = (0..n).map(|i| j.row(i).iter().sum()).collect();
    if (energy - exact).abs() <= tol {
        count += 1;
    }
    for step in 1..total {
        let q = 1 + step.trailing_zeros() as usize;
        let old = f64::from(spins[q]);
        energy += 2.0 * old * field[q];
        spins[q] = -spins[q];
        for (f, w) in field.iter_mut().zip(j.row(q)) {
            *f -= 2.0 * old * w;
        }
        if (energy - exact).abs() <= tol {
            count += 1;
        }
    }

    Ok(GroundTruth { energy: exact, degenerate: count > 1 })
}

fn gray_spins(code: u64, n: usize) -> Vec<i8> {
    let mut s = vec![1i8; n];
    for (bit, spin) in s.iter_mut().enumerate().skip(1) {
        if code >> (bit - 1) & 1 == 1 {
            *spin = -1;
        }
    }
    s
}

/// Exact ground energy of the Möbius ladder with `n` spins in `O(n)` time.
///
/// Spins are grouped into rungs `(s_i, s_{i+n/2})` and swept with a four-state
/// transfer matrix. The first rung is pinned to each of its four values in turn;
/// the closing edges `(n/2-1, n/2)` and `(n-1, 0)` join the last rung to the first
/// with its two spins swapped.
pub fn mobius_ground_dp(n: usize) -> Result<GroundTruth> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::invalid(format!("Möbius ladder needs an even n >= 4, got {n}")));
    }
    let rungs = n / 2;
    // rung state index: bit 0 -> top spin, bit 1 -> bottom spin; set bit means -1
    let spin = |state: usize, bit: usize| -> i64 { if state >> bit & 1 == 1 { -1 } else { 1 } };
    // every edge has J = -1, contributing +s s
    let rung_cost = |s: usize| spin(s, 0) * spin(s, 1);
    let step_cost = |a: usize, b: usize| spin(a, 0) * spin(b, 0) + spin(a, 1) * spin(b, 1);
    let twist_cost = |last: usize, first: usize| spin(last, 0) * spin(first, 1) + spin(last, 1) * spin(first, 0);

    let mut best = i64::MAX;
    let mut count: u128 = 0;
    for first in 0..4 {
        let mut cost = [i64::MAX; 4];
        let mut ways = [0u128; 4];
        cost[first] = rung_cost(first);
        ways[first] = 1;
        for _ in 1..rungs {
            let mut next = [i64::MAX; 4];
            let mut next_ways = [0u128; 4];
            for to in 0..4 {
                for from in 0..4 {
                    if cost[from] == i64::MAX {
                        continue;
                    }
                    let c = cost[from] + step_cost(from, to) + rung_cost(to);
                    if c < next[to] {
                        next[to] = c;
                        next_ways[to] = ways[from];
                    } else if c == next[to] {
                        next_ways[to] = next_ways[to].saturating_add(ways[from]);
                    }
                }
            }
            cost = next;
            ways = next_ways;
        }
        for last in 0..4 {
            if cost[last] == i64::MAX {
                continue;
            }
            let c = cost[last] + twist_cost(last, first);
            if c < best {
                best = c;
                count = ways[last];
            } else if c == best {
                count = count.saturating_add(ways[last]);
            }
        }
    }
    // `count` covers all 2^n configurations; ground states come in flip pairs.
    Ok(GroundTruth { energy: best as f64, degenerate: count / 2 > 1 })
}

/// Exact ground truth for `j`: exhaustive search up to [`BRUTE_FORCE_LIMIT`]
/// spins, the transfer-matrix oracle for larger Möbius ladders, and a
/// [`Error::SizeLimit`] otherwise.
pub fn ground_truth(j: &CouplingMatrix) -> Result<GroundTruth> {
    let n = j.n();
    if n <= BRUTE_FORCE_LIMIT {
        return brute_force_ground(j);
    }
    if n.is_multiple_of(2) && *j == mobius_ladder(n)? {
        return mobius_ground_dp(n);
    }
    Err(Error::SizeLimit { n, limit: BRUTE_FORCE_LIMIT })
}
