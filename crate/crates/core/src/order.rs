//! Product orderings, antichains of maximal elements and sections of support sets.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::entropy::{gamma_entropy, is_entropy_zero, xi, EntropyConfig, EntropyError};
use crate::support::{Point, SupportError, SupportSet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OrderError {
    #[error("ordering has arity {got}, support has arity {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("ordering on axis {axis} does not rank value {value}")]
    OrderingIncomplete { axis: usize, value: i64 },
    #[error("value {value} listed twice on axis {axis}")]
    DuplicateValue { axis: usize, value: i64 },
    #[error("invalid section: {0}")]
    InvalidSection(String),
    #[error("some coordinate is constant, so H = 0")]
    ZeroEntropyInput,
    #[error("support set is empty")]
    EmptySupport,
    #[error("malformed witness: {0}")]
    WitnessMalformed(String),
    #[error("no section has a positive-entropy antichain under the orderings tried")]
    NoPositiveSection,
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error(transparent)]
    Support(#[from] SupportError),
}

/// One total order per coordinate, each listed from largest to smallest.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawOrdering", into = "RawOrdering")]
pub struct ProductOrdering {
    per_axis: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct RawOrdering {
    per_axis: Vec<Vec<i64>>,
}

impl TryFrom<RawOrdering> for ProductOrdering {
    type Error = OrderError;
    fn try_from(raw: RawOrdering) -> Result<Self, Self::Error> {
        ProductOrdering::new(raw.per_axis)
    }
}

impl From<ProductOrdering> for RawOrdering {
    fn from(o: ProductOrdering) -> Self {
        RawOrdering { per_axis: o.per_axis }
    }
}

impl ProductOrdering {
    pub fn new(per_axis: Vec<Vec<i64>>) -> Result<Self, OrderError> {
        for (axis, vals) in per_axis.iter().enumerate() {
            let mut sorted = vals.clone();
            sorted.sort_unstable();
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                return Err(OrderError::DuplicateValue { axis, value: w[0] });
            }
        }
        Ok(ProductOrdering { per_axis })
    }

    /// The usual order (larger integers are larger) on the projections of `g`.
    pub fn natural(g: &SupportSet) -> Self {
        ProductOrdering {
            per_axis: g
                .projections()
                .into_iter()
                .map(|v| v.into_iter().rev().collect())
                .collect(),
        }
    }

    /// Independent uniformly random order on each projection of `g`.
    pub fn random(g: &SupportSet, rng: &mut ChaCha8Rng) -> Self {
        ProductOrdering {
            per_axis: g
                .projections()
                .into_iter()
                .map(|mut v| {
                    v.shuffle(rng);
                    v
                })
                .collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.per_axis.len()
    }

    /// Values of each axis, largest first.
    pub fn per_axis(&self) -> &[Vec<i64>] {
        &self.per_axis
    }

    /// Reverses the order on one axis.
    pub fn reversed(&self, axis: usize) -> Self {
        let mut per_axis = self.per_axis.clone();
        per_axis[axis].reverse();
        ProductOrdering { per_axis }
    }

    /// Rank of `value` on `axis`; larger rank means larger element.
    pub fn rank(&self, axis: usize, value: i64) -> Option<usize> {
        let vals = self.per_axis.get(axis)?;
        vals.iter().position(|&v| v == value).map(|p| vals.len() - 1 - p)
    }

    /// Whether `a ⪰ b` componentwise.
    pub fn dominates(&self, a: &[i64], b: &[i64]) -> Result<bool, OrderError> {
        for (axis, (&x, &y)) in a.iter().zip(b).enumerate() {
            let rx = self.rank(axis, x).ok_or(OrderError::OrderingIncomplete { axis, value: x })?;
            let ry = self.rank(axis, y).ok_or(OrderError::OrderingIncomplete { axis, value: y })?;
            if rx < ry {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn rank_vectors(&self, g: &SupportSet) -> Result<Vec<Vec<usize>>, OrderError> {
        if g.arity() != self.arity() {
            return Err(OrderError::ArityMismatch {
                expected: g.arity(),
                got: self.arity(),
            });
        }
        let tables: Vec<HashMap<i64, usize>> = self
            .per_axis
            .iter()
            .map(|vals| vals.iter().rev().enumerate().map(|(r, &v)| (v, r)).collect())
            .collect();
        g.iter()
            .map(|p| {
                p.iter()
                    .zip(&tables)
                    .enumerate()
                    .map(|(axis, (&v, t))| t.get(&v).copied().ok_or(OrderError::OrderingIncomplete { axis, value: v }))
                    .collect()
            })
            .collect()
    }
}

/// Γ_σ: the points of Γ not strictly dominated by another point of Γ.
pub fn maximal_elements(g: &SupportSet, s: &ProductOrdering) -> Result<SupportSet, OrderError> {
    let ranks = s.rank_vectors(g)?;
    let mut order: Vec<usize> = (0..g.len()).collect();
    // Any dominator is lexicographically larger, so it is seen first.
    order.sort_by(|&a, &b| ranks[b].cmp(&ranks[a]));
    let mut kept: Vec<usize> = Vec::new();
    for i in order {
        let dominated = kept
            .iter()
            .any(|&j| ranks[j].iter().zip(&ranks[i]).all(|(a, b)| a >= b));
        if !dominated {
            kept.push(i);
        }
    }
    kept.sort_unstable();
    let pts = kept.into_iter().map(|i| g.points()[i].clone()).collect();
    Ok(SupportSet::from_sorted(g.arity(), pts))
}

/// Fixed coordinates of a section: `axes` (0-based, increasing) take the values `values`.
/// No fixed axes means the whole set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SectionSpec {
    pub axes: Vec<usize>,
    pub values: Vec<i64>,
}

impl SectionSpec {
    pub fn new(axes: Vec<usize>, values: Vec<i64>) -> Self {
        SectionSpec { axes, values }
    }

    pub fn full() -> Self {
        SectionSpec {
            axes: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn is_full(&self) -> bool {
        self.axes.is_empty()
    }

    /// Axes left free, in increasing order.
    pub fn free_axes(&self, k: usize) -> Vec<usize> {
        (0..k).filter(|a| !self.axes.contains(a)).collect()
    }

    fn validate(&self, k: usize) -> Result<(), OrderError> {
        if self.axes.len() != self.values.len() {
            return Err(OrderError::InvalidSection(format!(
                "{} axes but {} values",
                self.axes.len(),
                self.values.len()
            )));
        }
        if self.axes.len() >= k {
            return Err(OrderError::InvalidSection(format!(
                "fixing {} of {k} axes leaves nothing free",
                self.axes.len()
            )));
        }
        if self.axes.windows(2).any(|w| w[0] >= w[1]) || self.axes.iter().any(|&a| a >= k) {
            return Err(OrderError::InvalidSection(format!(
                "axes {:?} must be increasing and below {k}",
                self.axes
            )));
        }
        Ok(())
    }

    fn matches(&self, p: &[i64]) -> bool {
        self.axes.iter().zip(&self.values).all(|(&a, &v)| p[a] == v)
    }
}

/// Γ_I^x: points agreeing with `spec` on its axes, projected onto the free axes.
pub fn section(g: &SupportSet, spec: &SectionSpec) -> Result<SupportSet, OrderError> {
    spec.validate(g.arity())?;
    let free = spec.free_axes(g.arity());
    let pts = g
        .iter()
        .filter(|p| spec.matches(p))
        .map(|p| free.iter().map(|&a| p[a]).collect::<Point>());
    Ok(SupportSet::new(free.len(), pts)?)
}

/// A subset of at most k points on which no coordinate is constant.
///
/// Induction on k: a witness for the first k-1 coordinates, plus at most one point to
/// make the last coordinate vary.
pub fn small_witness(g: &SupportSet) -> Result<SupportSet, OrderError> {
    if g.is_empty() {
        return Err(OrderError::EmptySupport);
    }
    if g.arity() < 2 {
        return Err(OrderError::Entropy(EntropyError::ArityTooSmall(g.arity())));
    }
    if is_entropy_zero(g)? {
        return Err(OrderError::ZeroEntropyInput);
    }
    let pts = witness_points(g.points(), g.arity());
    Ok(SupportSet::new(g.arity(), pts)?)
}

fn witness_points(pts: &[Point], k: usize) -> Vec<Point> {
    if k == 2 {
        let x = &pts[0];
        let y = pts.iter().find(|p| p[0] != x[0]).expect("first coordinate varies");
        let z = pts.iter().find(|p| p[1] != x[1]).expect("second coordinate varies");
        return if y[1] != x[1] {
            vec![x.clone(), y.clone()]
        } else if z[0] != x[0] {
            vec![x.clone(), z.clone()]
        } else {
            vec![y.clone(), z.clone()]
        };
    }
    // Recurse on the first k-1 coordinates, keeping track of a preimage for each point.
    let mut heads: Vec<Point> = Vec::new();
    let mut preimage: BTreeMap<Point, Point> = BTreeMap::new();
    for p in pts {
        let head = p[..k - 1].to_vec();
        if !preimage.contains_key(&head) {
            preimage.insert(head.clone(), p.clone());
            heads.push(head);
        }
    }
    let mut out: Vec<Point> = witness_points(&heads, k - 1)
        .into_iter()
        .map(|h| preimage[&h].clone())
        .collect();
    let last = out[0][k - 1];
    if out.iter().all(|p| p[k - 1] == last) {
        let extra = pts.iter().find(|p| p[k - 1] != last).expect("last coordinate varies");
        out.push(extra.clone());
    }
    out
}

/// A point `x ∈ Γ` and a point `z ∉ Γ` that agree everywhere except on `axis`, where both
/// values belong to the projection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartesianWitness {
    pub axis: usize,
    pub x: Point,
    pub z: Point,
}

impl CartesianWitness {
    /// `(x, z)` with the differing coordinate moved to the front.
    pub fn permuted(&self) -> (Point, Point) {
        let front = |p: &Point| {
            let mut q = p.clone();
            let v = q.remove(self.axis);
            q.insert(0, v);
            q
        };
        (front(&self.x), front(&self.z))
    }
}

/// `None` when Γ is the product of its projections, else the first missing neighbour.
pub fn cartesian_check(g: &SupportSet) -> Result<Option<CartesianWitness>, OrderError> {
    if g.is_empty() {
        return Err(OrderError::EmptySupport);
    }
    let proj = g.projections();
    let full = proj.iter().try_fold(1u128, |acc, v| acc.checked_mul(v.len() as u128));
    if full == Some(g.len() as u128) {
        return Ok(None);
    }
    for x in g.iter() {
        for (axis, vals) in proj.iter().enumerate() {
            for &v in vals {
                if v == x[axis] {
                    continue;
                }
                let mut z = x.clone();
                z[axis] = v;
                if !g.contains(&z) {
                    return Ok(Some(CartesianWitness { axis, x: x.clone(), z }));
                }
            }
        }
    }
    unreachable!("a non-product set has a missing neighbour")
}

/// Moves `top` then `second` to the front of `vals`, the rest largest first.
fn with_top_two(vals: &[i64], top: i64, second: i64) -> Vec<i64> {
    let mut rest: Vec<i64> = vals.iter().copied().filter(|&v| v != top && v != second).collect();
    rest.sort_unstable_by(|a, b| b.cmp(a));
    let mut out = vec![top, second];
    out.extend(rest);
    out
}

/// The ordering built from a point `x` and a point `zbar` that differ exactly in the first
/// `t` coordinates: `zbar_1 > x_1` on the first axis and `x_i > zbar_i` on axes 2..t. Other
/// values, and all values of the remaining axes, follow in decreasing order. `values` are the
/// value sets to be ordered (missing witness values are added).
pub fn ordering_from_witness(
    x: &[i64],
    zbar: &[i64],
    t: usize,
    values: &[Vec<i64>],
) -> Result<ProductOrdering, OrderError> {
    let k = x.len();
    if zbar.len() != k || values.len() != k {
        return Err(OrderError::WitnessMalformed(format!(
            "lengths {}, {} and {} differ",
            k,
            zbar.len(),
            values.len()
        )));
    }
    if t < 2 || t > k {
        return Err(OrderError::WitnessMalformed(format!("t = {t} must lie in 2..={k}")));
    }
    if (0..t).any(|i| x[i] == zbar[i]) || (t..k).any(|i| x[i] != zbar[i]) {
        return Err(OrderError::WitnessMalformed(format!(
            "{x:?} and {zbar:?} must differ exactly in the first {t} coordinates"
        )));
    }
    let per_axis = (0..k)
        .map(|i| {
            if i == 0 {
                with_top_two(&values[i], zbar[i], x[i])
            } else if i < t {
                with_top_two(&values[i], x[i], zbar[i])
            } else {
                let mut v = values[i].clone();
                if !v.contains(&x[i]) {
                    v.push(x[i]);
                }
                v.sort_unstable_by(|a, b| b.cmp(a));
                v
            }
        })
        .collect();
    ProductOrdering::new(per_axis)
}

/// The positive section produced from a Cartesian witness.
///
/// Picks `zbar ∈ Γ` with `zbar[axis] = z[axis]` closest to `x` (fewest differing
/// coordinates, then lexicographically smallest), fixes the coordinates where they agree
/// and orders the rest with [`ordering_from_witness`]. Both `x` and `zbar` restricted to the
/// free axes are maximal, so the antichain has no constant coordinate.
pub fn witness_section(g: &SupportSet, w: &CartesianWitness) -> Result<(SectionSpec, ProductOrdering), OrderError> {
    let k = g.arity();
    if w.x.len() != k || w.z.len() != k || w.axis >= k || !g.contains(&w.x) || g.contains(&w.z) {
        return Err(OrderError::WitnessMalformed(format!("{w:?} is not a witness for this set")));
    }
    let target = w.z[w.axis];
    let zbar = g
        .iter()
        .filter(|p| p[w.axis] == target)
        .min_by_key(|p| (p.iter().zip(&w.x).filter(|(a, b)| a != b).count(), (*p).clone()))
        .ok_or_else(|| OrderError::WitnessMalformed(format!("no point of Γ has value {target} on axis {}", w.axis)))?;
    let differing: Vec<usize> = (0..k).filter(|&i| zbar[i] != w.x[i]).collect();
    let fixed: Vec<usize> = (0..k).filter(|&i| zbar[i] == w.x[i]).collect();
    let spec = SectionSpec::new(fixed.clone(), fixed.iter().map(|&i| w.x[i]).collect());
    let sec = section(g, &spec)?;
    // Put the witness axis first, as the construction requires.
    let pos = differing.iter().position(|&a| a == w.axis).expect("witness axis differs");
    let mut perm: Vec<usize> = (0..differing.len()).collect();
    perm.remove(pos);
    perm.insert(0, pos);
    let xs: Vec<i64> = perm.iter().map(|&j| w.x[differing[j]]).collect();
    let zs: Vec<i64> = perm.iter().map(|&j| zbar[differing[j]]).collect();
    let sec_vals = sec.projections();
    let vals: Vec<Vec<i64>> = perm.iter().map(|&j| sec_vals[j].clone()).collect();
    let permuted = ordering_from_witness(&xs, &zs, differing.len(), &vals)?;
    let mut per_axis = vec![Vec::new(); differing.len()];
    for (slot, &j) in perm.iter().enumerate() {
        per_axis[j] = permuted.per_axis[slot].clone();
    }
    Ok((spec, ProductOrdering::new(per_axis)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    /// Sections with at most this many orderings are searched exhaustively.
    pub ordering_budget: u128,
    /// Random orderings tried on larger sections.
    pub samples: usize,
    pub seed: u64,
    pub entropy: EntropyConfig,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            ordering_budget: 1_000_000,
            samples: 10_000,
            seed: 0,
            entropy: EntropyConfig::default(),
        }
    }
}

/// Best positive section found by [`section_entropy_scan`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanHit {
    pub section: SectionSpec,
    /// Ordering on the free axes of the section.
    pub ordering: ProductOrdering,
    pub antichain: SupportSet,
    pub h_value: f64,
    pub dimension: usize,
    /// Every ordering of every section of dimension ≥ `dimension` was examined.
    pub exhaustive: bool,
}

/// Number of product orderings of `g`, saturating.
pub fn ordering_count(g: &SupportSet) -> u128 {
    g.projections()
        .iter()
        .map(|v| (1..=v.len() as u128).product::<u128>())
        .fold(1u128, |acc, f| acc.saturating_mul(f))
}

/// Candidate orderings for one section, and whether they are all of them.
fn candidate_orderings(sec: &SupportSet, cfg: &ScanConfig, salt: u64) -> (Vec<ProductOrdering>, bool) {
    if ordering_count(sec) <= cfg.ordering_budget {
        let per_axis: Vec<Vec<Vec<i64>>> = sec
            .projections()
            .into_iter()
            .map(|v| {
                let rev: Vec<i64> = v.into_iter().rev().collect();
                let n = rev.len();
                rev.into_iter().permutations(n).collect()
            })
            .collect();
        let all = per_axis
            .into_iter()
            .multi_cartesian_product()
            .map(|per_axis| ProductOrdering { per_axis })
            .collect();
        return (all, true);
    }
    let mut out = vec![ProductOrdering::natural(sec)];
    if let Ok(Some(w)) = cartesian_check(sec) {
        if let Ok((spec, o)) = witness_section(sec, &w) {
            if spec.is_full() {
                out.push(o);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    out.extend((0..cfg.samples).map(|_| ProductOrdering::random(sec, &mut rng)));
    (out, false)
}

/// Whether some ordering gives `g` an antichain with no constant coordinate. Enumerates
/// every ordering, so callers should check [`ordering_count`] first.
pub fn has_positive_antichain(g: &SupportSet) -> Result<bool, OrderError> {
    if g.is_empty() || is_entropy_zero(g)? {
        return Ok(false);
    }
    let cfg = ScanConfig {
        ordering_budget: u128::MAX,
        ..ScanConfig::default()
    };
    for o in candidate_orderings(g, &cfg, 0).0 {
        if !is_entropy_zero(&maximal_elements(g, &o)?)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Sections of Γ with `fixed` fixed axes, grouped by the fixed values, in lexicographic order.
fn sections_fixing(g: &SupportSet, fixed: &[usize]) -> Vec<(SectionSpec, SupportSet)> {
    let k = g.arity();
    let free: Vec<usize> = (0..k).filter(|a| !fixed.contains(a)).collect();
    let mut groups: BTreeMap<Vec<i64>, Vec<Point>> = BTreeMap::new();
    for p in g.iter() {
        let key = fixed.iter().map(|&a| p[a]).collect();
        groups.entry(key).or_default().push(free.iter().map(|&a| p[a]).collect());
    }
    groups
        .into_iter()
        .map(|(values, pts)| {
            let spec = SectionSpec::new(fixed.to_vec(), values);
            let sec = SupportSet::new(free.len(), pts).expect("consistent arity");
            (spec, sec)
        })
        .collect()
}

/// Finds a section Γ_I^x of largest dimension having an ordering whose antichain has
/// positive entropy; among those, the largest entropy found wins, ties going to the first
/// in (I, x, ordering) order.
///
/// Sections are visited by decreasing dimension (the whole set first). Dimension-1 sections
/// are skipped: a chain has a single maximum.
pub fn section_entropy_scan(g: &SupportSet, cfg: &ScanConfig) -> Result<ScanHit, OrderError> {
    if g.is_empty() {
        return Err(OrderError::EmptySupport);
    }
    let k = g.arity();
    let mut exhaustive = true;
    let mut salt = 0u64;
    for d in (2..=k).rev() {
        let mut best: Option<ScanHit> = None;
        let mut cache: HashMap<SupportSet, Option<f64>> = HashMap::new();
        for fixed in (0..k).combinations(k - d) {
            for (spec, sec) in sections_fixing(g, &fixed) {
                salt += 1;
                if is_entropy_zero(&sec)? {
                    continue;
                }
                let (candidates, complete) = candidate_orderings(&sec, cfg, salt);
                exhaustive &= complete;
                for o in candidates {
                    let anti = maximal_elements(&sec, &o)?;
                    if let Some(&cached) = cache.get(&anti) {
                        if cached.is_none() {
                            continue;
                        }
                    }
                    if is_entropy_zero(&anti)? {
                        cache.insert(anti, None);
                        continue;
                    }
                    let current = best.as_ref().map_or(f64::NEG_INFINITY, |b| b.h_value);
                    let h = match cache.get(&anti) {
                        Some(Some(h)) => *h,
                        _ => {
                            // H is at most log of the smallest projection; skip hopeless ones.
                            let cap = anti.projections().iter().map(|v| v.len()).min().unwrap_or(1);
                            if (cap as f64).ln() <= current {
                                continue;
                            }
                            let h = gamma_entropy(&anti, &cfg.entropy)?.value;
                            cache.insert(anti.clone(), Some(h));
                            h
                        }
                    };
                    if h > current + 1e-12 {
                        best = Some(ScanHit {
                            section: spec.clone(),
                            ordering: o,
                            antichain: anti,
                            h_value: h,
                            dimension: d,
                            exhaustive: false,
                        });
                    }
                }
            }
        }
        if let Some(mut hit) = best {
            hit.exhaustive = exhaustive;
            return Ok(hit);
        }
    }
    Err(OrderError::NoPositiveSection)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub antichain: SupportSet,
    /// Some coordinate of the antichain is constant.
    pub zero: bool,
    pub h_value: f64,
    pub xi: f64,
    pub passed: bool,
}

/// Checks that H(Γ_σ) is either 0 or at least ξ_k - tol.
pub fn gap_assert(g: &SupportSet, s: &ProductOrdering, tol: f64, cfg: &EntropyConfig) -> Result<GapReport, OrderError> {
    if g.is_empty() {
        return Err(OrderError::EmptySupport);
    }
    let xi = xi(g.arity())?;
    let antichain = maximal_elements(g, s)?;
    if is_entropy_zero(&antichain)? {
        return Ok(GapReport {
            antichain,
            zero: true,
            h_value: 0.0,
            xi,
            passed: true,
        });
    }
    let h = gamma_entropy(&antichain, cfg)?.value;
    Ok(GapReport {
        antichain,
        zero: false,
        h_value: h,
        xi,
        passed: h >= xi - tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(k: usize, pts: &[&[i64]]) -> SupportSet {
        SupportSet::new(k, pts.iter().map(|p| p.to_vec())).unwrap()
    }

    fn ord(axes: &[&[i64]]) -> ProductOrdering {
        ProductOrdering::new(axes.iter().map(|a| a.to_vec()).collect()).unwrap()
    }

    #[test]
    fn maximal_elements_examples() {
        let diag = set(2, &[&[1, 1], &[2, 2]]);
        let nat = ProductOrdering::natural(&diag);
        assert_eq!(maximal_elements(&diag, &nat).unwrap(), set(2, &[&[2, 2]]));
        let anti = set(2, &[&[1, 2], &[2, 1]]);
        assert_eq!(maximal_elements(&anti, &ProductOrdering::natural(&anti)).unwrap(), anti);
        let rev = nat.reversed(0);
        assert_eq!(maximal_elements(&diag, &rev).unwrap(), diag);
        let missing = ord(&[&[2], &[2, 1]]);
        assert!(matches!(
            maximal_elements(&diag, &missing),
            Err(OrderError::OrderingIncomplete { axis: 0, value: 1 })
        ));
    }

    #[test]
    fn duplicate_values_rejected() {
        assert!(matches!(
            ProductOrdering::new(vec![vec![1, 2, 1]]),
            Err(OrderError::DuplicateValue { axis: 0, value: 1 })
        ));
    }

    #[test]
    fn section_examples() {
        let diag = set(3, &[&[1, 1, 1], &[2, 2, 2]]);
        assert_eq!(section(&diag, &SectionSpec::new(vec![0], vec![1])).unwrap(), set(2, &[&[1, 1]]));
        assert!(section(&diag, &SectionSpec::new(vec![0], vec![3])).unwrap().is_empty());
        let cube = set(
            3,
            &[&[1, 1, 1], &[1, 1, 2], &[1, 2, 1], &[1, 2, 2], &[2, 1, 1], &[2, 1, 2], &[2, 2, 1], &[2, 2, 2]],
        );
        let sq = section(&cube, &SectionSpec::new(vec![1], vec![2])).unwrap();
        assert_eq!(sq, set(2, &[&[1, 1], &[1, 2], &[2, 1], &[2, 2]]));
        assert!(section(&cube, &SectionSpec::new(vec![0, 1, 2], vec![1, 1, 1])).is_err());
        assert!(section(&cube, &SectionSpec::new(vec![1, 0], vec![1, 1])).is_err());
    }

    #[test]
    fn small_witness_examples() {
        let g = set(2, &[&[1, 2], &[2, 1], &[5, 5]]);
        assert_eq!(small_witness(&g).unwrap(), set(2, &[&[1, 2], &[2, 1]]));
        let bump = set(3, &[&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]]);
        assert_eq!(small_witness(&bump).unwrap(), bump);
        let flat = set(2, &[&[1, 1], &[2, 1]]);
        assert_eq!(small_witness(&flat), Err(OrderError::ZeroEntropyInput));
    }

    #[test]
    fn cartesian_examples() {
        let sq = set(2, &[&[1, 1], &[1, 2], &[2, 1], &[2, 2]]);
        assert_eq!(cartesian_check(&sq).unwrap(), None);
        let diag = set(2, &[&[1, 1], &[2, 2]]);
        let w = cartesian_check(&diag).unwrap().unwrap();
        assert_eq!((w.x.clone(), w.z.clone()), (vec![1, 1], vec![2, 1]));
        let bump = set(3, &[&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]]);
        assert!(cartesian_check(&bump).unwrap().is_some());
        let w = CartesianWitness {
            axis: 2,
            x: vec![1, 2, 3],
            z: vec![1, 2, 4],
        };
        assert_eq!(w.permuted(), (vec![3, 1, 2], vec![4, 1, 2]));
    }

    #[test]
    fn ordering_from_witness_examples() {
        let vals = vec![vec![1, 2], vec![1, 2]];
        let o = ordering_from_witness(&[1, 1], &[2, 2], 2, &vals).unwrap();
        assert_eq!(o.per_axis(), &[vec![2, 1], vec![1, 2]]);
        let vals3 = vec![vec![1, 2, 3], vec![1, 2], vec![3, 5]];
        let o = ordering_from_witness(&[1, 1, 3], &[2, 2, 3], 2, &vals3).unwrap();
        assert_eq!(o.per_axis(), &[vec![2, 1, 3], vec![1, 2], vec![5, 3]]);
        assert!(matches!(
            ordering_from_witness(&[1, 1], &[2, 1], 1, &vals),
            Err(OrderError::WitnessMalformed(_))
        ));
    }

    #[test]
    fn scan_examples() {
        let cfg = ScanConfig::default();
        let anti = set(2, &[&[1, 2], &[2, 1]]);
        let hit = section_entropy_scan(&anti, &cfg).unwrap();
        assert_eq!(hit.dimension, 2);
        assert!(hit.section.is_full());
        assert!((hit.h_value - 2f64.ln()).abs() < 1e-6);
        let diag = set(2, &[&[1, 1], &[2, 2]]);
        let hit = section_entropy_scan(&diag, &cfg).unwrap();
        assert_eq!(hit.antichain, diag);
        assert!((hit.h_value - 2f64.ln()).abs() < 1e-6);
        assert!(hit.exhaustive);
        let cube = SupportSet::new(3, (0..8).map(|c| vec![1 + ((c >> 2) & 1), 1 + ((c >> 1) & 1), 1 + (c & 1)])).unwrap();
        assert_eq!(cube.len(), 8);
        assert_eq!(section_entropy_scan(&cube, &cfg), Err(OrderError::NoPositiveSection));
    }

    #[test]
    fn gap_assert_examples() {
        let cfg = EntropyConfig::default();
        let bump = set(3, &[&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]]);
        let r = gap_assert(&bump, &ProductOrdering::natural(&bump), 1e-4, &cfg).unwrap();
        assert!(r.passed && !r.zero);
        assert!((r.h_value - xi(3).unwrap()).abs() < 1e-5);
        let diag = set(3, &[&[1, 1, 1], &[2, 2, 2]]);
        let r = gap_assert(&diag, &ProductOrdering::natural(&diag), 1e-4, &cfg).unwrap();
        assert!(r.passed && r.zero);
    }

    fn binary_cube_subset(mask: u32) -> SupportSet {
        let pts = (0..8)
            .filter(|b| mask & (1 << b) != 0)
            .map(|b: i64| vec![1 + ((b >> 2) & 1), 1 + ((b >> 1) & 1), 1 + (b & 1)]);
        SupportSet::new(3, pts).unwrap()
    }

    #[test]
    fn product_supports_are_exactly_those_without_positive_sections() {
        let cfg = ScanConfig::default();
        for mask in 1..256u32 {
            let g = binary_cube_subset(mask);
            match cartesian_check(&g).unwrap() {
                None => assert_eq!(section_entropy_scan(&g, &cfg), Err(OrderError::NoPositiveSection), "{g:?}"),
                Some(w) => {
                    let (spec, o) = witness_section(&g, &w).unwrap();
                    let anti = maximal_elements(&section(&g, &spec).unwrap(), &o).unwrap();
                    assert!(!is_entropy_zero(&anti).unwrap(), "{g:?}");
                    assert!(section_entropy_scan(&g, &cfg).is_ok());
                }
            }
            if !is_entropy_zero(&g).unwrap() {
                let w = small_witness(&g).unwrap();
                assert!(w.len() <= 3 && w.is_subset(&g));
                assert!(!is_entropy_zero(&w).unwrap());
            }
        }
    }

    #[test]
    fn random_gap_checks() {
        let cfg = EntropyConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 2..=4 {
            for _ in 0..60 {
                let n = rand::Rng::gen_range(&mut rng, 1..=12);
                let pts: Vec<Point> = (0..n)
                    .map(|_| (0..k).map(|_| rand::Rng::gen_range(&mut rng, 1..=4)).collect())
                    .collect();
                let g = SupportSet::new(k, pts).unwrap();
                let s = ProductOrdering::random(&g, &mut rng);
                let r = gap_assert(&g, &s, 1e-4, &cfg).unwrap();
                assert!(r.passed, "{g:?} {s:?} {}", r.h_value);
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn support_and_seed() -> impl Strategy<Value = (SupportSet, u64)> {
            (2usize..=4)
                .prop_flat_map(|k| (proptest::collection::vec(proptest::collection::vec(1i64..=4, k), 1..20), Just(k), any::<u64>()))
                .prop_map(|(pts, k, seed)| (SupportSet::new(k, pts).unwrap(), seed))
        }

        proptest! {
            #[test]
            fn antichain_and_domination((g, seed) in support_and_seed()) {
                let s = ProductOrdering::random(&g, &mut ChaCha8Rng::seed_from_u64(seed));
                let m = maximal_elements(&g, &s).unwrap();
                prop_assert!(m.is_subset(&g));
                for a in m.iter() {
                    for b in m.iter() {
                        if a != b {
                            prop_assert!(!s.dominates(a, b).unwrap());
                        }
                    }
                }
                for p in g.iter() {
                    prop_assert!(m.iter().any(|q| s.dominates(q, p).unwrap()));
                }
            }
        }
    }
}
