//! Dense matrices over F_p with exact Gaussian elimination.

use std::fmt;

use crate::field::PrimeField;

/// Row-major dense matrix over a prime field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Result of [`FpMatrix::row_basis_reduction`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowReduction {
    /// Invertible `rows × rows` matrix `M`. The first `independent.len()` rows of `M·A`
    /// are the independent rows of `A` (unchanged, in order); the remaining rows are zero.
    pub transform: FpMatrix,
    /// Indices of a maximal independent set of rows, chosen greedily top to bottom.
    pub independent: Vec<usize>,
}

impl FpMatrix {
    pub fn new(field: PrimeField, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data length");
        let p = field.modulus();
        assert!(data.iter().all(|&v| v < p), "matrix entry out of range");
        FpMatrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Builds a matrix from rows, reducing every entry mod p.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&v| field.reduce(v)))
            .collect();
        FpMatrix::new(field, rows.len(), cols, data)
    }

    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FpMatrix::new(field, rows, cols, vec![0; rows * cols])
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = FpMatrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1 % field.modulus());
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(v < self.field.modulus());
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.field, other.field, "mixed moduli");
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let f = self.field;
        let mut out = FpMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, s: u32) {
        let f = self.field;
        for c in 0..self.cols {
            let v = f.mul(self.get(r, c), s);
            self.set(r, c, v);
        }
    }

    /// row[target] -= factor * row[source]
    fn sub_row(&mut self, target: usize, source: usize, factor: u32) {
        if factor == 0 {
            return;
        }
        let f = self.field;
        for c in 0..self.cols {
            let v = f.sub(self.get(target, c), f.mul(factor, self.get(source, c)));
            self.set(target, c, v);
        }
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            m.scale_row(r, inv);
            for i in 0..m.rows {
                if i != r {
                    let factor = m.get(i, c);
                    m.sub_row(i, r, factor);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let f = self.field;
        let mut aug = FpMatrix::zeros(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1 % f.modulus());
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = FpMatrix::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, red.get(i, n + j));
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Finds a maximal independent set of rows (greedy, top to bottom) and an invertible
    /// transform that keeps those rows and annihilates the rest.
    pub fn row_basis_reduction(&self) -> RowReduction {
        let f = self.field;
        let n = self.rows;
        // Echelon rows paired with their expression in the original rows.
        let mut echelon: Vec<(usize, Vec<u32>, Vec<u32>)> = Vec::new();
        let mut independent = Vec::new();
        let mut relations: Vec<Vec<u32>> = Vec::new();
        for r in 0..n {
            let mut row = self.row(r).to_vec();
            let mut combo = vec![0u32; n];
            combo[r] = 1 % f.modulus();
            for (pc, erow, ecombo) in &echelon {
                let factor = row[*pc];
                if factor == 0 {
                    continue;
                }
                for (x, &e) in row.iter_mut().zip(erow) {
                    *x = f.sub(*x, f.mul(factor, e));
                }
                for (x, &e) in combo.iter_mut().zip(ecombo) {
                    *x = f.sub(*x, f.mul(factor, e));
                }
            }
            match row.iter().position(|&v| v != 0) {
                Some(pc) => {
                    let inv = f.inv(row[pc]).expect("nonzero pivot");
                    row.iter_mut().for_each(|x| *x = f.mul(*x, inv));
                    combo.iter_mut().for_each(|x| *x = f.mul(*x, inv));
                    // Keep the echelon reduced so later lookups by pivot column are exact.
                    for (_, erow, ecombo) in echelon.iter_mut() {
                        let factor = erow[pc];
                        if factor == 0 {
                            continue;
                        }
                        for (x, &e) in erow.iter_mut().zip(&row) {
                            *x = f.sub(*x, f.mul(factor, e));
                        }
                        for (x, &e) in ecombo.iter_mut().zip(&combo) {
                            *x = f.sub(*x, f.mul(factor, e));
                        }
                    }
                    echelon.push((pc, row, combo));
                    independent.push(r);
                }
                None => relations.push(combo),
            }
        }
        let mut data = Vec::with_capacity(n * n);
        for &r in &independent {
            let mut e = vec![0u32; n];
            e[r] = 1 % f.modulus();
            data.extend(e);
        }
        for rel in relations {
            data.extend(rel);
        }
        RowReduction {
            transform: FpMatrix::new(f, n, n, data),
            independent,
        }
    }
}

/// Rank of a matrix over its prime field.
pub fn rank_ff(m: &FpMatrix) -> usize {
    m.rank()
}

impl fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(u32::to_string).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_ff(&FpMatrix::identity(f(2), 2)), 2);
        assert_eq!(rank_ff(&FpMatrix::zeros(f(3), 2, 3)), 0);
        assert_eq!(rank_ff(&FpMatrix::from_rows(f(5), &[vec![1, 2], vec![2, 4]])), 1);
        // Over F_2 the rows 11 and 11 coincide; over F_3 a rank drop needs proportional rows.
        assert_eq!(rank_ff(&FpMatrix::from_rows(f(2), &[vec![1, 1], vec![1, 1]])), 1);
        assert_eq!(rank_ff(&FpMatrix::from_rows(f(3), &[vec![1, 1], vec![1, 2]])), 2);
    }

    #[test]
    fn inverse_round_trip() {
        let m = FpMatrix::from_rows(f(7), &[vec![2, 3, 1], vec![0, 1, 4], vec![5, 0, 6]]);
        let inv = m.inverse().expect("invertible");
        assert_eq!(m.mul(&inv), FpMatrix::identity(f(7), 3));
        assert_eq!(inv.mul(&m), FpMatrix::identity(f(7), 3));
        let singular = FpMatrix::from_rows(f(7), &[vec![1, 2], vec![2, 4]]);
        assert!(singular.inverse().is_none());
        assert!(FpMatrix::zeros(f(7), 2, 3).inverse().is_none());
    }

    #[test]
    fn row_basis_reduction_keeps_independent_rows() {
        let a = FpMatrix::from_rows(
            f(3),
            &[vec![1, 0, 2], vec![2, 0, 1], vec![0, 1, 1], vec![1, 1, 0]],
        );
        let red = a.row_basis_reduction();
        assert_eq!(red.independent, vec![0, 2]);
        assert!(red.transform.is_invertible());
        let b = red.transform.mul(&a);
        assert_eq!(b.row(0), a.row(0));
        assert_eq!(b.row(1), a.row(2));
        assert!(b.row(2).iter().all(|&v| v == 0));
        assert!(b.row(3).iter().all(|&v| v == 0));
    }

    #[test]
    fn row_basis_reduction_full_rank_is_identity() {
        let a = FpMatrix::identity(f(5), 3);
        let red = a.row_basis_reduction();
        assert_eq!(red.transform, FpMatrix::identity(f(5), 3));
        assert_eq!(red.independent, vec![0, 1, 2]);
    }

    /// Laplace expansion along the first row, as an integer reduced mod p.
    fn det(m: &[Vec<i64>]) -> i64 {
        if m.is_empty() {
            return 1;
        }
        (0..m.len())
            .map(|c| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                sign * m[0][c] * det(&minor)
            })
            .sum()
    }

    /// Largest r with a nonzero r x r minor.
    fn minor_rank(m: &[Vec<i64>], p: i64) -> usize {
        use itertools::Itertools;
        let (rows, cols) = (m.len(), m[0].len());
        (1..=rows.min(cols))
            .rev()
            .find(|&r| {
                (0..rows).combinations(r).any(|rs| {
                    (0..cols).combinations(r).any(|cs| {
                        let sub: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
                        det(&sub).rem_euclid(p) != 0
                    })
                })
            })
            .unwrap_or(0)
    }

    #[test]
    fn rank_matches_minors_up_to_3x3() {
        for p in [2u32, 3] {
            for rows in 1..=3 {
                for cols in 1..=3 {
                    let cells = rows * cols;
                    for code in 0..(p as usize).pow(cells as u32) {
                        let mut c = code;
                        let data: Vec<u32> = (0..cells)
                            .map(|_| {
                                let d = (c % p as usize) as u32;
                                c /= p as usize;
                                d
                            })
                            .collect();
                        let m = FpMatrix::new(f(p), rows, cols, data);
                        let ints: Vec<Vec<i64>> =
                            m.to_rows().iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
                        assert_eq!(rank_ff(&m), minor_rank(&ints, p as i64), "{ints:?} mod {p}");
                    }
                }
            }
        }
    }
}
