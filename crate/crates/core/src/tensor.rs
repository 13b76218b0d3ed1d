//! Dense k-tensors over F_p, their flattenings and per-axis basis changes.
//!
//! Index tuples in the public API are 1-based (they double as the coordinate
//! values of supports); axis numbers are 0-based.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldError, PrimeField};
use crate::matrix::FpMatrix;
use crate::support::SupportSet;

/// Largest supported order k.
pub const MAX_ORDER: usize = 6;
/// Largest supported axis dimension.
pub const MAX_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("tensor order must be in [2, {MAX_ORDER}], got {0}")]
    InvalidOrder(usize),
    #[error("shape {shape:?} does not have {k} axes of size in [1, {MAX_DIM}]")]
    InvalidShape { k: usize, shape: Vec<usize> },
    #[error("index {index:?} out of shape {shape:?}")]
    IndexOutOfShape { index: Vec<usize>, shape: Vec<usize> },
    #[error("duplicate entry at index {0:?}")]
    DuplicateEntry(Vec<usize>),
    #[error("coefficient {value} not in [0, {p})")]
    CoefficientOutOfRange { value: u32, p: u32 },
    #[error("axis {axis} out of range for order {order}")]
    AxisOutOfRange { axis: usize, order: usize },
    #[error("transform on axis {axis} is singular")]
    SingularTransform { axis: usize },
    #[error("transform on axis {axis} is {got}x{got}, axis has dimension {expected}")]
    TransformShape {
        axis: usize,
        expected: usize,
        got: usize,
    },
    #[error("transform modulus {got} does not match tensor modulus {expected}")]
    ModulusMismatch { expected: u32, got: u32 },
    #[error("cannot drop axis {axis} to dimension {keep}: dropped slices are nonzero")]
    NonzeroTruncation { axis: usize, keep: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("search needs {needed} combinations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
}

/// Zero, slice (slice rank one) or anything else.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SliceClass {
    Zero,
    Slice,
    NonSlice,
}

/// An order-k array of residues, stored row-major (last index fastest).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DenseTensor {
    field: PrimeField,
    shape: Vec<usize>,
    data: Vec<u32>,
}

fn check_shape(k: usize, shape: &[usize]) -> Result<(), TensorError> {
    if !(2..=MAX_ORDER).contains(&k) {
        return Err(TensorError::InvalidOrder(k));
    }
    if shape.len() != k || shape.iter().any(|&d| d == 0 || d > MAX_DIM) {
        return Err(TensorError::InvalidShape {
            k,
            shape: shape.to_vec(),
        });
    }
    Ok(())
}

/// Iterates over all 0-based multi-indices of `shape` in lexicographic order.
pub(crate) fn multi_indices(shape: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = shape.iter().product();
    let mut cur = vec![0usize; shape.len()];
    let mut first = true;
    (0..total).map(move |_| {
        if first {
            first = false;
        } else {
            for a in (0..shape.len()).rev() {
                cur[a] += 1;
                if cur[a] < shape[a] {
                    break;
                }
                cur[a] = 0;
            }
        }
        cur.clone()
    })
}

/// Builds a tensor from 1-based index/residue pairs; all other coefficients are zero.
pub fn make_tensor(
    k: usize,
    p: u32,
    shape: &[usize],
    entries: &[(Vec<usize>, u32)],
) -> Result<DenseTensor, TensorError> {
    let field = PrimeField::new(p)?;
    check_shape(k, shape)?;
    let mut t = DenseTensor::zeros(field, shape)?;
    let mut seen = vec![false; t.data.len()];
    for (index, value) in entries {
        if *value >= p {
            return Err(TensorError::CoefficientOutOfRange { value: *value, p });
        }
        let off = t.offset_1based(index)?;
        if seen[off] {
            return Err(TensorError::DuplicateEntry(index.clone()));
        }
        seen[off] = true;
        t.data[off] = *value;
    }
    Ok(t)
}

impl DenseTensor {
    pub fn zeros(field: PrimeField, shape: &[usize]) -> Result<Self, TensorError> {
        check_shape(shape.len(), shape)?;
        Ok(DenseTensor {
            field,
            shape: shape.to_vec(),
            data: vec![0; shape.iter().product()],
        })
    }

    /// Wraps a row-major coefficient vector.
    pub fn from_dense(field: PrimeField, shape: &[usize], data: Vec<u32>) -> Result<Self, TensorError> {
        check_shape(shape.len(), shape)?;
        assert_eq!(data.len(), shape.iter().product::<usize>(), "data length");
        if let Some(&v) = data.iter().find(|&&v| v >= field.modulus()) {
            return Err(TensorError::CoefficientOutOfRange {
                value: v,
                p: field.modulus(),
            });
        }
        Ok(DenseTensor {
            field,
            shape: shape.to_vec(),
            data,
        })
    }

    /// The outer product `factors[0] ⊗ … ⊗ factors[k-1]`.
    pub fn outer(field: PrimeField, factors: &[Vec<u32>]) -> Result<Self, TensorError> {
        let shape: Vec<usize> = factors.iter().map(Vec::len).collect();
        let mut t = DenseTensor::zeros(field, &shape)?;
        for (off, idx) in multi_indices(&shape).enumerate() {
            t.data[off] = idx
                .iter()
                .zip(factors)
                .fold(1 % field.modulus(), |acc, (&i, f)| field.mul(acc, f[i] % field.modulus()));
        }
        Ok(t)
    }

    /// The slice tensor `u ⊗_axis w`, where `w` is laid out like the columns of
    /// [`flattening`](Self::flattening) along `axis`.
    pub fn slice_product(
        field: PrimeField,
        shape: &[usize],
        axis: usize,
        u: &[u32],
        w: &[u32],
    ) -> Result<Self, TensorError> {
        let rows = FpMatrix::new(field, u.len(), 1, u.to_vec());
        let cols = FpMatrix::new(field, 1, w.len(), w.to_vec());
        DenseTensor::from_flattening(field, shape, axis, &rows.mul(&cols))
    }

    pub fn order(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn modulus(&self) -> u32 {
        self.field.modulus()
    }

    /// Row-major coefficients.
    pub fn data(&self) -> &[u32] {
        &self.data
    }

    fn offset_1based(&self, index: &[usize]) -> Result<usize, TensorError> {
        if index.len() != self.order()
            || index
                .iter()
                .zip(&self.shape)
                .any(|(&i, &d)| i == 0 || i > d)
        {
            return Err(TensorError::IndexOutOfShape {
                index: index.to_vec(),
                shape: self.shape.clone(),
            });
        }
        Ok(index
            .iter()
            .zip(&self.shape)
            .fold(0, |acc, (&i, &d)| acc * d + (i - 1)))
    }

    /// Coefficient at a 1-based index.
    pub fn get(&self, index: &[usize]) -> Result<u32, TensorError> {
        Ok(self.data[self.offset_1based(index)?])
    }

    pub fn set(&mut self, index: &[usize], value: u32) -> Result<(), TensorError> {
        if value >= self.modulus() {
            return Err(TensorError::CoefficientOutOfRange {
                value,
                p: self.modulus(),
            });
        }
        let off = self.offset_1based(index)?;
        self.data[off] = value;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Nonzero coefficients with their 1-based indices, in lexicographic order.
    pub fn entries(&self) -> Vec<(Vec<usize>, u32)> {
        multi_indices(&self.shape)
            .zip(&self.data)
            .filter(|(_, &v)| v != 0)
            .map(|(idx, &v)| (idx.iter().map(|i| i + 1).collect(), v))
            .collect()
    }

    /// The support: 1-based index tuples of all nonzero coefficients.
    pub fn support(&self) -> SupportSet {
        let pts = self
            .entries()
            .into_iter()
            .map(|(idx, _)| idx.into_iter().map(|i| i as i64).collect())
            .collect();
        SupportSet::from_sorted(self.order(), pts)
    }

    fn check_axis(&self, axis: usize) -> Result<(), TensorError> {
        if axis >= self.order() {
            return Err(TensorError::AxisOutOfRange {
                axis,
                order: self.order(),
            });
        }
        Ok(())
    }

    /// The `d_axis × ∏_{i≠axis} d_i` unfolding; columns are ordered lexicographically
    /// by the remaining indices.
    pub fn flattening(&self, axis: usize) -> Result<FpMatrix, TensorError> {
        self.check_axis(axis)?;
        let rows = self.shape[axis];
        let cols = self.data.len() / rows;
        let mut data = vec![0; self.data.len()];
        for (off, idx) in multi_indices(&self.shape).enumerate() {
            let col = idx
                .iter()
                .zip(&self.shape)
                .enumerate()
                .filter(|(a, _)| *a != axis)
                .fold(0, |acc, (_, (&i, &d))| acc * d + i);
            data[idx[axis] * cols + col] = self.data[off];
        }
        Ok(FpMatrix::new(self.field, rows, cols, data))
    }

    /// Inverse of [`flattening`](Self::flattening): folds a matrix back into a tensor.
    pub fn from_flattening(
        field: PrimeField,
        shape: &[usize],
        axis: usize,
        m: &FpMatrix,
    ) -> Result<Self, TensorError> {
        let mut t = DenseTensor::zeros(field, shape)?;
        t.check_axis(axis)?;
        let cols = t.data.len() / shape[axis];
        assert_eq!((m.rows(), m.cols()), (shape[axis], cols), "flattening shape");
        for (off, idx) in multi_indices(shape).enumerate() {
            let col = idx
                .iter()
                .zip(shape)
                .enumerate()
                .filter(|(a, _)| *a != axis)
                .fold(0, |acc, (_, (&i, &d))| acc * d + i);
            t.data[off] = m.get(idx[axis], col);
        }
        Ok(t)
    }

    pub fn flattening_ranks(&self) -> Vec<usize> {
        (0..self.order())
            .map(|a| self.flattening(a).expect("axis in range").rank())
            .collect()
    }

    pub fn slice_class(&self) -> SliceClass {
        if self.is_zero() {
            SliceClass::Zero
        } else if self.flattening_ranks().contains(&1) {
            SliceClass::Slice
        } else {
            SliceClass::NonSlice
        }
    }

    /// Re-expresses the coefficients in a new basis on one axis: the new slice `s` is
    /// `Σ_r M[s][r] · (old slice r)`.
    pub fn apply_axis_transform(&self, t: &AxisTransform) -> Result<Self, TensorError> {
        self.check_axis(t.axis)?;
        if t.matrix.field() != self.field {
            return Err(TensorError::ModulusMismatch {
                expected: self.modulus(),
                got: t.matrix.field().modulus(),
            });
        }
        if t.matrix.rows() != self.shape[t.axis] {
            return Err(TensorError::TransformShape {
                axis: t.axis,
                expected: self.shape[t.axis],
                got: t.matrix.rows(),
            });
        }
        let m = t.matrix.mul(&self.flattening(t.axis)?);
        DenseTensor::from_flattening(self.field, &self.shape, t.axis, &m)
    }

    /// Drops the slices `keep+1..` on `axis`; they must all be zero.
    pub fn truncate_axis(&self, axis: usize, keep: usize) -> Result<Self, TensorError> {
        self.check_axis(axis)?;
        let flat = self.flattening(axis)?;
        if keep == 0 || keep > flat.rows() {
            return Err(TensorError::PreconditionViolated(format!(
                "cannot truncate axis {axis} of dimension {} to {keep}",
                flat.rows()
            )));
        }
        if (keep..flat.rows()).any(|r| flat.row(r).iter().any(|&v| v != 0)) {
            return Err(TensorError::NonzeroTruncation { axis, keep });
        }
        let mut shape = self.shape.clone();
        shape[axis] = keep;
        let data = flat.data()[..keep * flat.cols()].to_vec();
        let kept = FpMatrix::new(self.field, keep, flat.cols(), data);
        DenseTensor::from_flattening(self.field, &shape, axis, &kept)
    }

    /// Appends zero slices on `axis` up to dimension `dim`.
    pub fn pad_axis(&self, axis: usize, dim: usize) -> Result<Self, TensorError> {
        self.check_axis(axis)?;
        let flat = self.flattening(axis)?;
        if dim < flat.rows() {
            return Err(TensorError::PreconditionViolated(format!(
                "cannot pad axis {axis} of dimension {} to {dim}",
                flat.rows()
            )));
        }
        let mut shape = self.shape.clone();
        shape[axis] = dim;
        let mut data = flat.data().to_vec();
        data.resize(dim * flat.cols(), 0);
        let padded = FpMatrix::new(self.field, dim, flat.cols(), data);
        DenseTensor::from_flattening(self.field, &shape, axis, &padded)
    }

    pub fn apply_step(&self, step: &BasisStep) -> Result<Self, TensorError> {
        let t = self.apply_axis_transform(&step.transform)?;
        if step.keep == t.shape[step.transform.axis] {
            Ok(t)
        } else {
            t.truncate_axis(step.transform.axis, step.keep)
        }
    }

    /// Undoes [`apply_step`](Self::apply_step).
    pub fn undo_step(&self, step: &BasisStep) -> Result<Self, TensorError> {
        let axis = step.transform.axis;
        let padded = self.pad_axis(axis, step.transform.dim())?;
        padded.apply_axis_transform(&step.transform.inverse())
    }
}

/// An invertible change of basis on one axis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTransform", into = "RawTransform")]
pub struct AxisTransform {
    axis: usize,
    matrix: FpMatrix,
}

#[derive(Serialize, Deserialize)]
struct RawTransform {
    axis: usize,
    modulus: u32,
    matrix: Vec<Vec<u32>>,
}

impl TryFrom<RawTransform> for AxisTransform {
    type Error = TensorError;
    fn try_from(raw: RawTransform) -> Result<Self, Self::Error> {
        let field = PrimeField::new(raw.modulus)?;
        let rows: Vec<Vec<i64>> = raw
            .matrix
            .iter()
            .map(|r| r.iter().map(|&v| v as i64).collect())
            .collect();
        AxisTransform::new(raw.axis, FpMatrix::from_rows(field, &rows))
    }
}

impl From<AxisTransform> for RawTransform {
    fn from(t: AxisTransform) -> Self {
        RawTransform {
            axis: t.axis,
            modulus: t.matrix.field().modulus(),
            matrix: t.matrix.to_rows(),
        }
    }
}

impl AxisTransform {
    pub fn new(axis: usize, matrix: FpMatrix) -> Result<Self, TensorError> {
        if !matrix.is_square() || !matrix.is_invertible() {
            return Err(TensorError::SingularTransform { axis });
        }
        Ok(AxisTransform { axis, matrix })
    }

    pub fn identity(field: PrimeField, axis: usize, dim: usize) -> Self {
        AxisTransform {
            axis,
            matrix: FpMatrix::identity(field, dim),
        }
    }

    /// Exchanges basis vectors `a` and `b` (1-based).
    pub fn swap(field: PrimeField, axis: usize, dim: usize, a: usize, b: usize) -> Self {
        let mut m = FpMatrix::zeros(field, dim, dim);
        for i in 0..dim {
            let j = if i + 1 == a {
                b - 1
            } else if i + 1 == b {
                a - 1
            } else {
                i
            };
            m.set(i, j, 1 % field.modulus());
        }
        AxisTransform { axis, matrix: m }
    }

    pub fn axis(&self) -> usize {
        self.axis
    }

    pub fn matrix(&self) -> &FpMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == FpMatrix::identity(self.matrix.field(), self.dim())
    }

    pub fn inverse(&self) -> Self {
        AxisTransform {
            axis: self.axis,
            matrix: self.matrix.inverse().expect("transforms are invertible"),
        }
    }
}

/// A basis change followed by dropping the trailing `dim - keep` (zero) slices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisStep {
    pub transform: AxisTransform,
    pub keep: usize,
}

impl BasisStep {
    pub fn square(transform: AxisTransform) -> Self {
        let keep = transform.dim();
        BasisStep { transform, keep }
    }
}

pub fn apply_axis_transform(v: &DenseTensor, t: &AxisTransform) -> Result<DenseTensor, TensorError> {
    v.apply_axis_transform(t)
}

pub fn slice_class(v: &DenseTensor) -> SliceClass {
    v.slice_class()
}

/// Gaussian elimination step between two parallel sections.
///
/// With `c` the coefficients of `v`, `x`,`z` two distinct 1-based indices on `axis` and `y`
/// the remaining coordinates of a point present in both sections, the new coefficients are
/// `c'_{x,s} = c_{x,s} / c_{x,y}` and `c'_{z,s} = c_{z,s} - c_{x,s}·c_{z,y}/c_{x,y}`. The
/// support of section `x` is unchanged and `y` disappears from section `z`.
pub fn eliminate_section_point(
    v: &DenseTensor,
    axis: usize,
    x: usize,
    z: usize,
    y: &[usize],
) -> Result<(DenseTensor, AxisTransform), TensorError> {
    v.check_axis(axis)?;
    let d = v.shape[axis];
    if x == z || x == 0 || z == 0 || x > d || z > d {
        return Err(TensorError::PreconditionViolated(format!(
            "section indices {x} and {z} must be distinct and within 1..={d}"
        )));
    }
    if y.len() + 1 != v.order() {
        return Err(TensorError::PreconditionViolated(format!(
            "y must have {} coordinates",
            v.order() - 1
        )));
    }
    let with = |s: usize| {
        let mut idx = y.to_vec();
        idx.insert(axis, s);
        idx
    };
    let cxy = v.get(&with(x))?;
    let czy = v.get(&with(z))?;
    if cxy == 0 || czy == 0 {
        return Err(TensorError::PreconditionViolated(format!(
            "{y:?} must lie in both sections {x} and {z} of axis {axis}"
        )));
    }
    let f = v.field;
    let inv = f.inv(cxy)?;
    let mut m = FpMatrix::identity(f, d);
    m.set(x - 1, x - 1, inv);
    m.set(z - 1, x - 1, f.neg(f.mul(czy, inv)));
    let t = AxisTransform::new(axis, m)?;
    Ok((v.apply_axis_transform(&t)?, t))
}

/// Removes redundant basis vectors on every axis so each flattening has full row rank.
///
/// On each axis a maximal independent set of slices is kept unchanged (greedily, lowest
/// index first) and every other slice is rewritten as a combination of those and dropped.
/// One step per axis is returned, identity where nothing changes.
pub fn concise_reduce(v: &DenseTensor) -> Result<(DenseTensor, Vec<BasisStep>), TensorError> {
    let mut cur = v.clone();
    let mut steps = Vec::with_capacity(v.order());
    for axis in 0..v.order() {
        let flat = cur.flattening(axis)?;
        let red = flat.row_basis_reduction();
        let keep = red.independent.len();
        let step = if keep == flat.rows() {
            BasisStep::square(AxisTransform::identity(cur.field, axis, flat.rows()))
        } else if keep == 0 {
            // Zero tensor: nothing to keep, leave the axis alone.
            BasisStep::square(AxisTransform::identity(cur.field, axis, flat.rows()))
        } else {
            BasisStep {
                transform: AxisTransform::new(axis, red.transform)?,
                keep,
            }
        };
        cur = cur.apply_step(&step)?;
        steps.push(step);
    }
    Ok((cur, steps))
}
