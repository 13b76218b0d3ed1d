//! Exact slice rank of tiny tensors by exhaustive search over slice tensors.

use std::collections::HashSet;

use crate::field::PrimeField;
use crate::tensor::{DenseTensor, TensorError};

/// Default cap on the number of candidate combinations the search may visit.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SliceRank {
    Exact(usize),
    AboveThreshold,
}

/// Nonzero vectors of F_p^n whose first nonzero entry is 1 (one per line through 0).
fn projective_points(field: PrimeField, n: usize) -> Vec<Vec<u32>> {
    all_vectors(field, n)
        .into_iter()
        .filter(|v| v.iter().find(|&&x| x != 0) == Some(&1))
        .collect()
}

fn all_vectors(field: PrimeField, n: usize) -> Vec<Vec<u32>> {
    let p = field.modulus();
    let total = (p as usize).pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut v = vec![0u32; n];
            for x in v.iter_mut().rev() {
                *x = (code % p as usize) as u32;
                code /= p as usize;
            }
            v
        })
        .collect()
}

/// Number of slice tensors `u ⊗_j w` with `u` taken up to scalars, counted per axis.
pub fn slice_candidate_count(field: PrimeField, shape: &[usize]) -> u128 {
    let p = field.modulus() as u128;
    let total: usize = shape.iter().product();
    shape
        .iter()
        .map(|&d| {
            let lines = (p.pow(d as u32) - 1) / (p - 1);
            let complements = p.pow((total / d) as u32) - 1;
            lines * complements
        })
        .sum()
}

/// All slice tensors of the given shape, as row-major data, deduplicated and sorted.
fn slice_candidates(field: PrimeField, shape: &[usize]) -> Result<Vec<Vec<u32>>, TensorError> {
    let total: usize = shape.iter().product();
    let mut seen = HashSet::new();
    for (axis, &d) in shape.iter().enumerate() {
        let complements: Vec<Vec<u32>> = all_vectors(field, total / d)
            .into_iter()
            .filter(|w| w.iter().any(|&x| x != 0))
            .collect();
        for u in projective_points(field, d) {
            for w in &complements {
                let t = DenseTensor::slice_product(field, shape, axis, &u, w)?;
                seen.insert(t.data().to_vec());
            }
        }
    }
    let mut out: Vec<Vec<u32>> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Exact slice rank of `v` if it is at most `r_max`.
///
/// Enumerates all slice tensors and searches, by iterative deepening on `r`, for `r` of
/// them summing to `v` (field coefficients are absorbed into the complement factor). Slice
/// rank never exceeds the smallest dimension, so the search depth is capped there. The
/// work is roughly `count^(r-1)` combinations, the last summand being a set lookup; that
/// estimate is checked against `budget` before searching.
pub fn slice_rank_bruteforce(v: &DenseTensor, r_max: usize, budget: u128) -> Result<SliceRank, TensorError> {
    if v.is_zero() {
        return Ok(SliceRank::Exact(0));
    }
    if r_max == 0 {
        return Ok(SliceRank::AboveThreshold);
    }
    let field = v.field();
    let shape = v.shape();
    let depth = r_max.min(*shape.iter().min().expect("order >= 2"));
    let count = slice_candidate_count(field, shape);
    let needed = count.saturating_pow(depth as u32 - 1).max(count);
    if needed > budget {
        return Err(TensorError::BudgetExceeded { needed, budget });
    }
    let candidates = slice_candidates(field, shape)?;
    let lookup: HashSet<&[u32]> = candidates.iter().map(Vec::as_slice).collect();
    let target = v.data().to_vec();
    for r in 1..=depth {
        if reachable(field, &candidates, &lookup, &target, r - 1, 0) {
            return Ok(SliceRank::Exact(r));
        }
    }
    // Unreachable when depth equals the smallest dimension; kept for r_max below it.
    Ok(SliceRank::AboveThreshold)
}

/// Whether `residual` minus `remaining` candidates (indices ≥ `start`) is itself a candidate.
fn reachable(
    field: PrimeField,
    candidates: &[Vec<u32>],
    lookup: &HashSet<&[u32]>,
    residual: &[u32],
    remaining: usize,
    start: usize,
) -> bool {
    if remaining == 0 {
        return lookup.contains(residual);
    }
    let mut next = vec![0u32; residual.len()];
    for (i, c) in candidates.iter().enumerate().skip(start) {
        for ((n, &r), &x) in next.iter_mut().zip(residual).zip(c) {
            *n = field.sub(r, x);
        }
        if next.iter().all(|&x| x == 0) {
            continue;
        }
        if reachable(field, candidates, lookup, &next, remaining - 1, i) {
            return true;
        }
    }
    false
}
