//! Finite sets of integer k-tuples (tensor supports and their sections).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Point = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SupportError {
    #[error("point {point:?} has arity {got}, expected {expected}")]
    ArityMismatch {
        point: Point,
        got: usize,
        expected: usize,
    },
    #[error("axis {axis} out of range for arity {arity}")]
    AxisOutOfRange { axis: usize, arity: usize },
}

/// A finite subset of Z^k, kept sorted and deduplicated so that iteration order,
/// equality and hashing are canonical.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawSupport", into = "RawSupport")]
pub struct SupportSet {
    arity: usize,
    points: Vec<Point>,
}

#[derive(Serialize, Deserialize)]
struct RawSupport {
    arity: usize,
    points: Vec<Point>,
}

impl TryFrom<RawSupport> for SupportSet {
    type Error = SupportError;
    fn try_from(raw: RawSupport) -> Result<Self, Self::Error> {
        SupportSet::new(raw.arity, raw.points)
    }
}

impl From<SupportSet> for RawSupport {
    fn from(s: SupportSet) -> Self {
        RawSupport {
            arity: s.arity,
            points: s.points,
        }
    }
}

impl SupportSet {
    pub fn new(arity: usize, points: impl IntoIterator<Item = Point>) -> Result<Self, SupportError> {
        let mut pts: Vec<Point> = Vec::new();
        for p in points {
            if p.len() != arity {
                return Err(SupportError::ArityMismatch {
                    got: p.len(),
                    point: p,
                    expected: arity,
                });
            }
            pts.push(p);
        }
        pts.sort();
        pts.dedup();
        Ok(SupportSet { arity, points: pts })
    }

    pub fn empty(arity: usize) -> Self {
        SupportSet {
            arity,
            points: Vec::new(),
        }
    }

    /// Internal constructor for callers that already hold a sorted, deduplicated list.
    pub(crate) fn from_sorted(arity: usize, points: Vec<Point>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(points.iter().all(|p| p.len() == arity));
        SupportSet { arity, points }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> impl Iterator<Item = &Point> {
        self.points.iter()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.points
            .binary_search_by(|q| q.as_slice().cmp(p))
            .is_ok()
    }

    pub fn is_subset(&self, other: &SupportSet) -> bool {
        self.arity == other.arity && self.points.iter().all(|p| other.contains(p))
    }

    /// The value set π_i(Γ), sorted ascending.
    pub fn projection(&self, axis: usize) -> Result<Vec<i64>, SupportError> {
        if axis >= self.arity {
            return Err(SupportError::AxisOutOfRange {
                axis,
                arity: self.arity,
            });
        }
        let set: BTreeSet<i64> = self.points.iter().map(|p| p[axis]).collect();
        Ok(set.into_iter().collect())
    }

    /// All value sets π_1(Γ), …, π_k(Γ).
    pub fn projections(&self) -> Vec<Vec<i64>> {
        (0..self.arity)
            .map(|i| self.projection(i).expect("axis in range"))
            .collect()
    }

    /// Number of points of the Cartesian product of the projections.
    pub fn product_size(&self) -> u128 {
        self.projections().iter().map(|v| v.len() as u128).product()
    }

    /// Keeps only points satisfying `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Point) -> bool) -> SupportSet {
        SupportSet {
            arity: self.arity,
            points: self.points.iter().filter(|p| keep(p)).cloned().collect(),
        }
    }

    /// Projection of the whole set onto the listed axes (in the given order).
    pub fn restrict_axes(&self, axes: &[usize]) -> Result<SupportSet, SupportError> {
        if let Some(&a) = axes.iter().find(|&&a| a >= self.arity) {
            return Err(SupportError::AxisOutOfRange {
                axis: a,
                arity: self.arity,
            });
        }
        SupportSet::new(
            axes.len(),
            self.points
                .iter()
                .map(|p| axes.iter().map(|&a| p[a]).collect::<Point>()),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_and_dedup() {
        let s = SupportSet::new(2, vec![vec![2, 1], vec![1, 2], vec![2, 1]]).unwrap();
        assert_eq!(s.points(), &[vec![1, 2], vec![2, 1]]);
        assert!(s.contains(&[2, 1]));
        assert!(!s.contains(&[1, 1]));
    }

    #[test]
    fn arity_is_checked() {
        let err = SupportSet::new(3, vec![vec![1, 2]]).unwrap_err();
        assert!(matches!(err, SupportError::ArityMismatch { got: 2, .. }));
    }

    #[test]
    fn projections_and_product_size() {
        let s = SupportSet::new(3, vec![vec![1, 1, 1], vec![2, 2, 1], vec![5, 2, 1]]).unwrap();
        assert_eq!(s.projection(0).unwrap(), vec![1, 2, 5]);
        assert_eq!(s.projection(2).unwrap(), vec![1]);
        assert_eq!(s.product_size(), 6);
        assert!(s.projection(3).is_err());
        let r = s.restrict_axes(&[1, 2]).unwrap();
        assert_eq!(r.points(), &[vec![1, 1], vec![2, 1]]);
    }
}
