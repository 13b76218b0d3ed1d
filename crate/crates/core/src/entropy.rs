//! The max-min entropy H(Γ) of a finite support set.
//!
//! `H(Γ) = sup_X min_i h(X_i)` over random variables X taking values in Γ, with Shannon
//! entropies in natural-log units. The objective is concave on the simplex over Γ.
//!
//! Every report carries a certified bracket `value ≤ H(Γ) ≤ upper_bound`:
//!
//! * `value` is the objective at a feasible distribution, hence a lower bound;
//! * for any distributions `q_i` on the projections and any weights `λ` on the simplex,
//!   Gibbs' inequality `h(X_i) ≤ -E log q_i(X_i)` gives
//!   `H(Γ) ≤ max_{g∈Γ} Σ_i λ_i (-log q_i(g_i))`, which is the upper bound.
//!
//! The optimizer is exponentiated-gradient ascent on the supergradient of the active
//! minimum, followed on small supports by a log-barrier Newton polish whose dual
//! estimates make the bracket tight.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::support::{Point, SupportSet};

/// Supports larger than this skip the dense Newton polish.
pub const DENSE_POLISH_LIMIT: usize = 256;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntropyError {
    #[error("support set is empty")]
    EmptySupport,
    #[error("coordinate {axis} out of range for arity {arity}")]
    CoordinateOutOfRange { axis: usize, arity: usize },
    #[error("arity {0} is below 2")]
    ArityTooSmall(usize),
    #[error("not a probability distribution: {0}")]
    NotADistribution(String),
    #[error("no convergence: residual {residual:e} exceeds tolerance {tol:e} after {iterations} iterations")]
    NoConvergence {
        residual: f64,
        tol: f64,
        iterations: usize,
    },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyConfig {
    pub tol: f64,
    pub max_iters: usize,
    pub restarts: usize,
    /// Step size is `step_scale / sqrt(t)`.
    pub step_scale: f64,
    pub seed: u64,
}

impl Default for EntropyConfig {
    fn default() -> Self {
        EntropyConfig {
            tol: 1e-6,
            max_iters: 200_000,
            restarts: 5,
            step_scale: 0.5,
            seed: 0,
        }
    }
}

impl EntropyConfig {
    fn validate(&self) -> Result<(), EntropyError> {
        if !(self.tol > 0.0) {
            return Err(EntropyError::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iters == 0 || self.restarts == 0 {
            return Err(EntropyError::InvalidConfig("iteration budgets must be positive".into()));
        }
        Ok(())
    }
}

/// A probability distribution on the points of a support set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexDistribution {
    support: SupportSet,
    weights: Vec<f64>,
}

impl SimplexDistribution {
    pub fn new(support: SupportSet, weights: Vec<f64>) -> Result<Self, EntropyError> {
        if support.is_empty() {
            return Err(EntropyError::EmptySupport);
        }
        if weights.len() != support.len() {
            return Err(EntropyError::NotADistribution(format!(
                "{} weights for {} points",
                weights.len(),
                support.len()
            )));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(EntropyError::NotADistribution("negative or non-finite weight".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(EntropyError::NotADistribution(format!("weights sum to {total}")));
        }
        Ok(SimplexDistribution { support, weights })
    }

    pub fn uniform(support: SupportSet) -> Result<Self, EntropyError> {
        let n = support.len();
        if n == 0 {
            return Err(EntropyError::EmptySupport);
        }
        Ok(SimplexDistribution {
            support,
            weights: vec![1.0 / n as f64; n],
        })
    }

    /// Normalizes nonnegative masses into a distribution.
    fn from_masses(support: SupportSet, masses: &[f64]) -> Self {
        let total: f64 = masses.iter().sum();
        let weights = masses.iter().map(|m| m / total).collect();
        SimplexDistribution { support, weights }
    }

    pub fn support(&self) -> &SupportSet {
        &self.support
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, point: &[i64]) -> f64 {
        self.support
            .points()
            .binary_search_by(|q| q.as_slice().cmp(point))
            .map_or(0.0, |i| self.weights[i])
    }

    /// Pushforward along the projection onto one coordinate.
    pub fn marginal(&self, axis: usize) -> Result<SimplexDistribution, EntropyError> {
        let values = self
            .support
            .projection(axis)
            .map_err(|_| EntropyError::CoordinateOutOfRange {
                axis,
                arity: self.support.arity(),
            })?;
        let mut masses = vec![0.0; values.len()];
        for (p, w) in self.support.iter().zip(&self.weights) {
            let j = values.binary_search(&p[axis]).expect("value in projection");
            masses[j] += w;
        }
        let support = SupportSet::new(1, values.into_iter().map(|v| vec![v])).expect("arity 1");
        Ok(SimplexDistribution::from_masses(support, &masses))
    }

    pub fn entropy(&self) -> f64 {
        entropy_of(&self.weights)
    }
}

/// `-Σ p log p` with `0 log 0 = 0`.
fn entropy_of(weights: &[f64]) -> f64 {
    -weights
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| w * w.ln())
        .sum::<f64>()
}

pub fn shannon_entropy(d: &SimplexDistribution) -> f64 {
    d.entropy()
}

pub fn marginal(d: &SimplexDistribution, axis: usize) -> Result<SimplexDistribution, EntropyError> {
    d.marginal(axis)
}

/// True iff some coordinate is constant on Γ, which is exactly when H(Γ) = 0.
pub fn is_entropy_zero(g: &SupportSet) -> Result<bool, EntropyError> {
    let first = g.points().first().ok_or(EntropyError::EmptySupport)?;
    Ok((0..g.arity()).any(|i| g.iter().all(|p| p[i] == first[i])))
}

/// `log(k / (k-1)^((k-1)/k))`, the smallest nonzero value of H on antichains in Z^k.
pub fn xi(k: usize) -> Result<f64, EntropyError> {
    if k < 2 {
        return Err(EntropyError::ArityTooSmall(k));
    }
    let k = k as f64;
    Ok(k.ln() - (k - 1.0) / k * (k - 1.0).ln())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    /// Certified lower bound on H(Γ): the objective at `argmax`.
    pub value: f64,
    /// `exp(value)`.
    pub exponent_base: f64,
    /// Certified upper bound on H(Γ).
    pub upper_bound: f64,
    pub argmax: SimplexDistribution,
    pub marginal_entropies: Vec<f64>,
    pub iterations: usize,
    /// `upper_bound - value`.
    pub residual: f64,
}

/// Dense index form of a support: for each point, the index of each coordinate value
/// within its projection.
struct Problem {
    k: usize,
    m: usize,
    value_index: Vec<Vec<usize>>,
    value_counts: Vec<usize>,
}

impl Problem {
    fn new(g: &SupportSet) -> Self {
        let projections = g.projections();
        let value_index = g
            .iter()
            .map(|p| {
                p.iter()
                    .zip(&projections)
                    .map(|(v, vals)| vals.binary_search(v).expect("value in projection"))
                    .collect()
            })
            .collect();
        Problem {
            k: g.arity(),
            m: g.len(),
            value_index,
            value_counts: projections.iter().map(Vec::len).collect(),
        }
    }

    fn marginals(&self, p: &[f64]) -> Vec<Vec<f64>> {
        let mut q: Vec<Vec<f64>> = self.value_counts.iter().map(|&n| vec![0.0; n]).collect();
        for (idx, &w) in self.value_index.iter().zip(p) {
            for (qi, &v) in q.iter_mut().zip(idx) {
                qi[v] += w;
            }
        }
        q
    }

    fn coordinate_entropies(q: &[Vec<f64>]) -> Vec<f64> {
        q.iter().map(|qi| entropy_of(qi)).collect()
    }

    fn objective(&self, p: &[f64]) -> f64 {
        Self::coordinate_entropies(&self.marginals(p))
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    /// Gibbs upper bound `max_g Σ_i λ_i (-log q_i(g_i))`.
    fn upper_bound(&self, q: &[Vec<f64>], lambda: &[f64]) -> f64 {
        let total: f64 = lambda.iter().sum();
        if !(total > 0.0) {
            return f64::INFINITY;
        }
        self.value_index
            .iter()
            .map(|idx| {
                idx.iter()
                    .zip(q)
                    .zip(lambda)
                    .map(|((&v, qi), &l)| if l > 0.0 { -l / total * qi[v].ln() } else { 0.0 })
                    .sum::<f64>()
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Weights minimising the Gibbs bound for fixed marginals `q`.
    ///
    /// This is the value of the matrix game with payoff `c[g][i] = -log q_i(g_i) > 0`; with
    /// `y = λ / v` it becomes `max Σ y  s.t.  C y ≤ 1, y ≥ 0`, whose slack basis is feasible.
    fn game_dual(&self, q: &[Vec<f64>]) -> Vec<f64> {
        let (m, k) = (self.m, self.k);
        let width = k + m + 1;
        let mut tab = vec![0.0; (m + 1) * width];
        for (g, idx) in self.value_index.iter().enumerate() {
            let row = &mut tab[g * width..(g + 1) * width];
            for i in 0..k {
                row[i] = (-q[i][idx[i]].ln()).clamp(0.0, 745.0);
            }
            row[k + g] = 1.0;
            row[width - 1] = 1.0;
        }
        let obj = m * width;
        for i in 0..k {
            tab[obj + i] = -1.0;
        }
        let mut basis: Vec<usize> = (k..k + m).collect();
        for _ in 0..50 * (m + k) {
            // Bland's rule: lowest-index improving column, lowest-index leaving basic variable.
            let Some(col) = (0..width - 1).find(|&j| tab[obj + j] < -1e-12) else {
                break;
            };
            let mut pivot: Option<(usize, f64)> = None;
            for r in 0..m {
                let a = tab[r * width + col];
                if a > 1e-12 {
                    let ratio = tab[r * width + width - 1] / a;
                    let better = match pivot {
                        None => true,
                        Some((pr, best)) => ratio < best - 1e-15 || (ratio <= best + 1e-15 && basis[r] < basis[pr]),
                    };
                    if better {
                        pivot = Some((r, ratio));
                    }
                }
            }
            let Some((pr, _)) = pivot else {
                break;
            };
            let a = tab[pr * width + col];
            for j in 0..width {
                tab[pr * width + j] /= a;
            }
            for r in 0..=m {
                if r == pr {
                    continue;
                }
                let factor = tab[r * width + col];
                if factor != 0.0 {
                    for j in 0..width {
                        tab[r * width + j] -= factor * tab[pr * width + j];
                    }
                }
            }
            basis[pr] = col;
        }
        let mut y = vec![0.0; k];
        for (r, &b) in basis.iter().enumerate() {
            if b < k {
                y[b] = tab[r * width + width - 1].max(0.0);
            }
        }
        y
    }

    /// Best bound over the supplied dual weights, the game-optimal weights and each pure
    /// coordinate.
    fn best_upper_bound(&self, p: &[f64], duals: &[Vec<f64>]) -> f64 {
        let q = self.marginals(p);
        let mut best = self.upper_bound(&q, &self.game_dual(&q));
        for l in duals {
            best = best.min(self.upper_bound(&q, l));
        }
        for i in 0..self.k {
            let mut e = vec![0.0; self.k];
            e[i] = 1.0;
            best = best.min(self.upper_bound(&q, &e));
        }
        best
    }
}

struct AscentOutcome {
    best: Vec<f64>,
    best_value: f64,
    dual: Vec<f64>,
    iterations: usize,
    certified_upper: f64,
}

/// Exponentiated-gradient ascent on `min_i h_i(p)` using the averaged gradient of the
/// coordinates attaining the minimum. The running average of those active weights is a
/// dual estimate for the certificate.
fn exponentiated_ascent(problem: &Problem, start: Vec<f64>, iters: usize, cfg: &EntropyConfig) -> AscentOutcome {
    let mut p = start;
    let mut best = p.clone();
    let mut best_value = f64::NEG_INFINITY;
    let mut dual_sum = vec![0.0; problem.k];
    let mut certified_upper = f64::INFINITY;
    let mut grad = vec![0.0; problem.m];
    let mut done = 0;
    for t in 1..=iters {
        done = t;
        let q = problem.marginals(&p);
        let h = Problem::coordinate_entropies(&q);
        let f = h.iter().copied().fold(f64::INFINITY, f64::min);
        if f > best_value {
            best_value = f;
            best.clone_from(&p);
        }
        let active: Vec<usize> = (0..problem.k).filter(|&i| h[i] <= f + 1e-12).collect();
        let share = 1.0 / active.len() as f64;
        for &i in &active {
            dual_sum[i] += share;
        }
        for (gi, idx) in grad.iter_mut().zip(&problem.value_index) {
            *gi = -share * active.iter().map(|&i| q[i][idx[i]].ln() + 1.0).sum::<f64>();
        }
        if t % 64 == 0 || t == iters {
            let upper = problem.best_upper_bound(&best, std::slice::from_ref(&dual_sum));
            certified_upper = certified_upper.min(upper);
            if certified_upper - best_value <= cfg.tol {
                break;
            }
        }
        let eta = cfg.step_scale / (t as f64).sqrt();
        let gmax = grad.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut total = 0.0;
        for (pi, &gi) in p.iter_mut().zip(&grad) {
            *pi = (*pi * (eta * (gi - gmax)).max(-700.0).exp()).max(1e-300);
            total += *pi;
        }
        p.iter_mut().for_each(|pi| *pi /= total);
    }
    AscentOutcome {
        best,
        best_value,
        dual: dual_sum,
        iterations: done,
        certified_upper,
    }
}

struct BarrierPoint {
    p: Vec<f64>,
    t: f64,
}

struct BarrierOutcome {
    p: Vec<f64>,
    dual: Vec<f64>,
    iterations: usize,
}

impl Problem {
    /// `τ t + Σ_i log(h_i(p) - t) + Σ_g log p_g`, or `None` outside the domain.
    fn barrier(&self, z: &BarrierPoint, tau: f64) -> Option<f64> {
        if z.p.iter().any(|&x| !(x > 0.0)) {
            return None;
        }
        let h = Self::coordinate_entropies(&self.marginals(&z.p));
        let mut val = tau * z.t;
        for hi in h {
            let s = hi - z.t;
            if !(s > 0.0) {
                return None;
            }
            val += s.ln();
        }
        Some(val + z.p.iter().map(|x| x.ln()).sum::<f64>())
    }

    /// One Newton step on the barrier restricted to `Σ p = 1`. Returns the decrement.
    fn newton_step(&self, z: &mut BarrierPoint, tau: f64) -> Option<f64> {
        let (m, k) = (self.m, self.k);
        let q = self.marginals(&z.p);
        let h = Self::coordinate_entropies(&q);
        let s: Vec<f64> = h.iter().map(|hi| hi - z.t).collect();
        let n = m + 1;
        let mut kkt = DMatrix::<f64>::zeros(n + 1, n + 1);
        let mut rhs = DVector::<f64>::zeros(n + 1);
        // a[i][g] = d h_i / d p_g
        let a: Vec<Vec<f64>> = (0..k)
            .map(|i| self.value_index.iter().map(|idx| -(q[i][idx[i]].ln() + 1.0)).collect())
            .collect();
        let mut grad_t = tau;
        let mut h_tt = 0.0;
        for i in 0..k {
            grad_t -= 1.0 / s[i];
            h_tt -= 1.0 / (s[i] * s[i]);
        }
        for g in 0..m {
            let mut grad = 1.0 / z.p[g];
            let mut h_pt = 0.0;
            for i in 0..k {
                grad += a[i][g] / s[i];
                h_pt += a[i][g] / (s[i] * s[i]);
            }
            rhs[g] = -grad;
            kkt[(g, m)] = h_pt;
            kkt[(m, g)] = h_pt;
            for g2 in g..m {
                let mut hv = 0.0;
                for i in 0..k {
                    let vi = self.value_index[g][i];
                    if vi == self.value_index[g2][i] {
                        hv -= 1.0 / (q[i][vi] * s[i]);
                    }
                    hv -= a[i][g] * a[i][g2] / (s[i] * s[i]);
                }
                if g == g2 {
                    hv -= 1.0 / (z.p[g] * z.p[g]);
                }
                kkt[(g, g2)] = hv;
                kkt[(g2, g)] = hv;
            }
            kkt[(g, n)] = 1.0;
            kkt[(n, g)] = 1.0;
        }
        kkt[(m, m)] = h_tt;
        rhs[m] = -grad_t;
        let sol = kkt.lu().solve(&rhs)?;
        let step: Vec<f64> = sol.iter().take(n).copied().collect();
        let decrement: f64 = -(0..n).map(|j| step[j] * rhs[j]).sum::<f64>();
        if !decrement.is_finite() {
            return None;
        }
        let current = self.barrier(z, tau)?;
        let mut alpha = 1.0;
        while alpha > 1e-14 {
            let trial = BarrierPoint {
                p: z.p.iter().zip(&step).map(|(x, d)| x + alpha * d).collect(),
                t: z.t + alpha * step[m],
            };
            if let Some(v) = self.barrier(&trial, tau) {
                if v >= current + 0.25 * alpha * decrement.max(0.0) {
                    *z = trial;
                    return Some(decrement);
                }
            }
            alpha *= 0.5;
        }
        Some(0.0)
    }

    /// Log-barrier path following from an interior start until the Gibbs bracket with the
    /// barrier duals `λ_i ∝ 1/(h_i - t)` closes to `target`.
    fn barrier_polish(&self, start: &[f64], target: f64) -> BarrierOutcome {
        let mut z = BarrierPoint {
            p: start.to_vec(),
            t: self.objective(start) - 1.0,
        };
        let mut tau = (self.m + self.k) as f64;
        let mut iterations = 0;
        let mut best: Option<(f64, Vec<f64>, Vec<f64>)> = None;
        let mut stale = 0;
        for _ in 0..60 {
            for _ in 0..100 {
                iterations += 1;
                match self.newton_step(&mut z, tau) {
                    Some(dec) if dec > 1e-12 => {}
                    _ => break,
                }
            }
            let h = Self::coordinate_entropies(&self.marginals(&z.p));
            let dual: Vec<f64> = h.iter().map(|hi| 1.0 / (hi - z.t)).collect();
            let gap = self.best_upper_bound(&z.p, std::slice::from_ref(&dual)) - self.objective(&z.p);
            if best.as_ref().map_or(true, |b| gap < b.0) {
                best = Some((gap, z.p.clone(), dual));
                stale = 0;
            } else {
                stale += 1;
            }
            // Past this point the slacks are at rounding level and the path stops improving.
            let min_slack = h.iter().map(|hi| hi - z.t).fold(f64::INFINITY, f64::min);
            if gap <= target || stale >= 3 || min_slack < 1e-12 {
                break;
            }
            tau *= 8.0;
        }
        let (_, p, dual) = best.expect("at least one round");
        BarrierOutcome {
            p,
            dual,
            iterations,
        }
    }
}

fn random_start(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..m).map(|_| -(1.0 - rng.gen::<f64>()).ln() + 1e-12).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Computes H(Γ) to within `cfg.tol`, with a certified bracket.
pub fn gamma_entropy(g: &SupportSet, cfg: &EntropyConfig) -> Result<EntropyReport, EntropyError> {
    cfg.validate()?;
    if is_entropy_zero(g)? {
        let argmax = SimplexDistribution::uniform(g.clone())?;
        let marginal_entropies = (0..g.arity())
            .map(|i| argmax.marginal(i).map(|d| d.entropy()))
            .collect::<Result<_, _>>()?;
        return Ok(EntropyReport {
            value: 0.0,
            exponent_base: 1.0,
            upper_bound: 0.0,
            argmax,
            marginal_entropies,
            iterations: 0,
            residual: 0.0,
        });
    }
    let problem = Problem::new(g);
    let m = problem.m;
    let polish = m <= DENSE_POLISH_LIMIT;
    let per_restart = if polish {
        (cfg.max_iters / cfg.restarts).clamp(1, 512)
    } else {
        (cfg.max_iters / cfg.restarts).max(1)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut iterations = 0;
    let mut best = vec![1.0 / m as f64; m];
    let mut best_value = problem.objective(&best);
    let mut upper = f64::INFINITY;
    let mut duals: Vec<Vec<f64>> = Vec::new();
    for r in 0..cfg.restarts {
        let start = if r == 0 {
            vec![1.0 / m as f64; m]
        } else {
            random_start(&mut rng, m)
        };
        let out = exponentiated_ascent(&problem, start, per_restart, cfg);
        iterations += out.iterations;
        upper = upper.min(out.certified_upper);
        duals.push(out.dual);
        if out.best_value > best_value {
            best_value = out.best_value;
            best = out.best;
        }
        if upper - best_value <= cfg.tol {
            break;
        }
    }
    upper = upper.min(problem.best_upper_bound(&best, &duals));
    if polish && upper - best_value > cfg.tol {
        let start: Vec<f64> = best.iter().map(|&x| 0.99 * x + 0.01 / m as f64).collect();
        let out = problem.barrier_polish(&start, cfg.tol * 0.5);
        iterations += out.iterations;
        let value = problem.objective(&out.p);
        duals.push(out.dual);
        upper = upper.min(problem.best_upper_bound(&out.p, &duals));
        if value > best_value {
            best_value = value;
            best = out.p;
        }
        upper = upper.min(problem.best_upper_bound(&best, &duals));
    }
    let residual = (upper - best_value).max(0.0);
    if residual > cfg.tol {
        return Err(EntropyError::NoConvergence {
            residual,
            tol: cfg.tol,
            iterations,
        });
    }
    let argmax = SimplexDistribution::from_masses(g.clone(), &best);
    let marginal_entropies = Problem::coordinate_entropies(&problem.marginals(argmax.weights()));
    let value = marginal_entropies.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(EntropyReport {
        value,
        exponent_base: value.exp(),
        upper_bound: value + residual,
        argmax,
        marginal_entropies,
        iterations,
        residual,
    })
}

/// The objective `min_i h(X_i)` at an arbitrary distribution.
pub fn min_marginal_entropy(d: &SimplexDistribution) -> f64 {
    let problem = Problem::new(d.support());
    problem.objective(d.weights())
}

/// The extremal set `{(2,1,…,1), (1,2,1,…,1), …, (1,…,1,2)}` in Z^k.
pub fn unit_bump_set(k: usize) -> SupportSet {
    let pts = (0..k).map(|i| {
        let mut p: Point = vec![1; k];
        p[i] = 2;
        p
    });
    SupportSet::new(k, pts).expect("arity k")
}
