//! Trifferent codes: sets of ternary words in which any three distinct words take three
//! different symbols in some coordinate.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eisenstein::EisensteinInt;

/// A word over {0, 1, 2}; symbol `e` stands for the unit `ω^e`.
pub type Word = Vec<u8>;

/// Word length limit for the exact search (bitsets hold 3^4 = 81 words).
pub const MAX_SEARCH_LEN: usize = 4;

pub const DEFAULT_SEARCH_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrifferenceError {
    #[error("words have different lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("symbol {0} is not in {{0, 1, 2}}")]
    InvalidSymbol(u8),
    #[error("search for n = {0} is not supported (limit {MAX_SEARCH_LEN})")]
    SearchTooLarge(usize),
    #[error("search budget of {budget} nodes exhausted")]
    BudgetExceeded { budget: u64 },
    #[error("the set is not trifferent")]
    NotTrifferent,
}

fn common_length(words: &[Word]) -> Result<usize, TrifferenceError> {
    let n = words.first().map_or(0, Vec::len);
    for w in words {
        if w.len() != n {
            return Err(TrifferenceError::LengthMismatch(n, w.len()));
        }
        if let Some(&s) = w.iter().find(|&&s| s > 2) {
            return Err(TrifferenceError::InvalidSymbol(s));
        }
    }
    Ok(n)
}

fn separated(a: &[u8], b: &[u8], c: &[u8]) -> bool {
    a.iter().zip(b).zip(c).any(|((&x, &y), &z)| x != y && y != z && x != z)
}

/// Whether every three distinct words of `words` are separated by some coordinate.
pub fn is_trifferent(words: &[Word]) -> Result<bool, TrifferenceError> {
    common_length(words)?;
    let mut set = words.to_vec();
    set.sort();
    set.dedup();
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            for l in j + 1..set.len() {
                if !separated(&set[i], &set[j], &set[l]) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `2 (3/2)^n`, the bound from deleting one symbol in one coordinate.
pub fn inductive_bound(n: usize) -> f64 {
    2.0 * 1.5f64.powi(n as i32)
}

/// All 3^n words in lexicographic order.
pub fn all_words(n: usize) -> Vec<Word> {
    let total = 3usize.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut w = vec![0u8; n];
            for s in w.iter_mut().rev() {
                *s = (code % 3) as u8;
                code /= 3;
            }
            w
        })
        .collect()
}

/// Largest trifferent set of length-`n` words, by branch and bound.
///
/// The set may be assumed to contain the all-zero word (shifting symbols per coordinate
/// preserves trifference). Branches are cut when the chosen words plus the remaining
/// compatible candidates cannot beat the incumbent, and the search stops once the incumbent
/// meets `⌊2 (3/2)^n⌋`.
pub fn max_trifferent(n: usize, budget: u64) -> Result<(usize, Vec<Word>), TrifferenceError> {
    if n > MAX_SEARCH_LEN {
        return Err(TrifferenceError::SearchTooLarge(n));
    }
    let words = all_words(n);
    if n == 0 {
        return Ok((1, words));
    }
    let total = words.len();
    // ok[a][b]: bitset of c with (a, b, c) separated.
    let mut ok = vec![vec![0u128; total]; total];
    for a in 0..total {
        for b in 0..total {
            for c in 0..total {
                if separated(&words[a], &words[b], &words[c]) {
                    ok[a][b] |= 1 << c;
                }
            }
        }
    }
    let ceiling = inductive_bound(n).floor() as usize;
    let mut search = Search {
        ok: &ok,
        best: vec![0],
        nodes: 0,
        budget,
        ceiling,
    };
    let all = (1u128 << total) - 1;
    search.expand(&mut vec![0], all & !1)?;
    let witness = search.best.iter().map(|&i| words[i].clone()).collect();
    Ok((search.best.len(), witness))
}

struct Search<'a> {
    ok: &'a [Vec<u128>],
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    ceiling: usize,
}

impl Search<'_> {
    /// Returns `Ok(true)` once the ceiling is reached.
    fn expand(&mut self, chosen: &mut Vec<usize>, mut cand: u128) -> Result<bool, TrifferenceError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(TrifferenceError::BudgetExceeded { budget: self.budget });
        }
        if chosen.len() > self.best.len() {
            self.best = chosen.clone();
            if self.best.len() >= self.ceiling {
                return Ok(true);
            }
        }
        while cand != 0 {
            if chosen.len() + cand.count_ones() as usize <= self.best.len() {
                break;
            }
            let c = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            let mut next = cand;
            for &s in chosen.iter() {
                next &= self.ok[s][c];
            }
            chosen.push(c);
            let done = self.expand(chosen, next)?;
            chosen.pop();
            if done {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// `f_{x,y}(z,t) = ∏_i (x_i + y_i + z_i)(x_i + y_i + t_i)` with symbols read as cube roots of
/// unity.
pub fn haemers_f(x: &[u8], y: &[u8], z: &[u8], t: &[u8]) -> Result<EisensteinInt, TrifferenceError> {
    common_length(&[x.to_vec(), y.to_vec(), z.to_vec(), t.to_vec()])?;
    let u = EisensteinInt::unit;
    let mut acc = EisensteinInt::ONE;
    for i in 0..x.len() {
        let s = u(x[i]) + u(y[i]);
        acc = acc * (s + u(z[i])) * (s + u(t[i]));
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HaemersCertificate {
    pub n: usize,
    pub size: usize,
    /// Number of unordered pairs of distinct words.
    pub pairs: usize,
    /// Every `f_{x,y}(x,y)` is nonzero.
    pub diagonal_nonzero: bool,
    /// Every `f_{x,y}(z,t)` with `(z,t) ≠ (x,y)` vanishes.
    pub off_diagonal_zero: bool,
    /// Upper bound on the number of monomials `∏(z_i+t_i)^{α_i}(z_i t_i)^{β_i}` used.
    pub monomials: u128,
    /// `3^n`.
    pub dimension: u128,
    /// `√(2·3^n) + 1`.
    pub implied_cap: f64,
    pub passed: bool,
}

/// Certifies `|A|(|A|-1)/2 ≤ 3^n` for a trifferent set: the evaluation matrix of the
/// functions `f_{x,y}` on pairs is diagonal with nonzero diagonal, and all of them lie in
/// the span of at most `3^n` monomials.
pub fn haemers_certify(words: &[Word]) -> Result<HaemersCertificate, TrifferenceError> {
    let n = common_length(words)?;
    if !is_trifferent(words)? {
        return Err(TrifferenceError::NotTrifferent);
    }
    let mut set = words.to_vec();
    set.sort();
    set.dedup();
    let pairs: Vec<(&Word, &Word)> = (0..set.len())
        .flat_map(|i| (i + 1..set.len()).map(move |j| (i, j)))
        .map(|(i, j)| (&set[i], &set[j]))
        .collect();
    let mut diagonal_nonzero = true;
    let mut off_diagonal_zero = true;
    for (r, (x, y)) in pairs.iter().enumerate() {
        for (c, (z, t)) in pairs.iter().enumerate() {
            let v = haemers_f(x, y, z, t)?;
            if r == c {
                diagonal_nonzero &= !v.is_zero();
            } else {
                off_diagonal_zero &= v.is_zero();
            }
        }
    }
    // Coordinate i of f_{x,y} is s² + s(z+t) + zt with s = x_i + y_i: pattern (α,β) = (0,0),
    // (1,0), (0,1) has coefficient s², s, 1. Count the patterns that occur per coordinate.
    let u = EisensteinInt::unit;
    let mut monomials: u128 = 1;
    for i in 0..n {
        let mut used = [false; 3];
        for (x, y) in &pairs {
            let s = u(x[i]) + u(y[i]);
            used[0] |= !(s * s).is_zero();
            used[1] |= !s.is_zero();
            used[2] = true;
        }
        monomials *= used.iter().filter(|&&b| b).count() as u128;
    }
    let dimension = 3u128.pow(n as u32);
    let passed = diagonal_nonzero && off_diagonal_zero && monomials <= dimension && (pairs.len() as u128) <= monomials;
    Ok(HaemersCertificate {
        n,
        size: set.len(),
        pairs: pairs.len(),
        diagonal_nonzero,
        off_diagonal_zero,
        monomials,
        dimension,
        implied_cap: (2.0 * dimension as f64).sqrt() + 1.0,
        passed,
    })
}

/// Parses a word such as `0121`.
pub fn parse_word(s: &str) -> Result<Word, TrifferenceError> {
    s.bytes()
        .map(|b| match b {
            b'0'..=b'2' => Ok(b - b'0'),
            other => Err(TrifferenceError::InvalidSymbol(other)),
        })
        .collect()
}

pub fn format_word(w: &[u8]) -> String {
    w.iter().map(|&s| char::from(b'0' + s)).collect()
}
