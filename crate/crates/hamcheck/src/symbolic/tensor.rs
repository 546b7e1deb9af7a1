//! Dense square matrices and higher-rank tensors of expressions, with exact
//! determinant and adjugate-based inversion. All stored entries are canonical
//! expressions, so zero-testing a tensor is structural.

use std::fmt;

use thiserror::Error;

use super::expr::RationalExpr;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    /// Determinant is identically zero; callers route degenerate inputs to
    /// the degenerate-case checks instead of crashing.
    #[error("matrix is degenerate (determinant identically zero)")]
    Degenerate,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
}

/// Square n-by-n matrix of expressions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExprMatrix {
    n: usize,
    entries: Vec<RationalExpr>, // row major
}

impl ExprMatrix {
    pub fn zeros(n: usize) -> Self {
        ExprMatrix {
            n,
            entries: vec![RationalExpr::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExprMatrix::zeros(n);
        for i in 0..n {
            *m.at_mut(i, i) = RationalExpr::one();
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> RationalExpr) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        ExprMatrix { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<RationalExpr>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(MatrixError::Dimension {
                    expected: n,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(ExprMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> &RationalExpr {
        &self.entries[i * self.n + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut RationalExpr {
        &mut self.entries[i * self.n + j]
    }

    pub fn transpose(&self) -> Self {
        ExprMatrix::from_fn(self.n, |i, j| self.at(j, i).clone())
    }

    pub fn map(&self, mut f: impl FnMut(&RationalExpr) -> RationalExpr) -> Self {
        ExprMatrix {
            n: self.n,
            entries: self.entries.iter().map(|e| f(e)).collect(),
        }
    }

    pub fn try_map<E>(
        &self,
        mut f: impl FnMut(&RationalExpr) -> Result<RationalExpr, E>,
    ) -> Result<Self, E> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(f(e)?);
        }
        Ok(ExprMatrix {
            n: self.n,
            entries,
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        ExprMatrix::from_fn(self.n, |i, j| self.at(i, j) + other.at(i, j))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        ExprMatrix::from_fn(self.n, |i, j| self.at(i, j) - other.at(i, j))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        ExprMatrix::from_fn(self.n, |i, j| {
            let mut acc = RationalExpr::zero();
            for s in 0..self.n {
                acc = &acc + &(self.at(i, s) * other.at(s, j));
            }
            acc
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RationalExpr::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.at(i, j) != self.at(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_skew(&self) -> bool {
        for i in 0..self.n {
            for j in i..self.n {
                if !(self.at(i, j) + self.at(j, i)).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Exact determinant by Laplace expansion along the first row; fine for
    /// the small dimensions this engine works at.
    pub fn det(&self) -> RationalExpr {
        match self.n {
            0 => RationalExpr::one(),
            1 => self.at(0, 0).clone(),
            _ => {
                let mut acc = RationalExpr::zero();
                for j in 0..self.n {
                    if self.at(0, j).is_zero() {
                        continue;
                    }
                    let minor = self.minor(0, j).det();
                    let term = self.at(0, j) * &minor;
                    acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
                }
                acc
            }
        }
    }

    fn minor(&self, row: usize, col: usize) -> ExprMatrix {
        let n = self.n - 1;
        ExprMatrix::from_fn(n, |i, j| {
            let si = if i < row { i } else { i + 1 };
            let sj = if j < col { j } else { j + 1 };
            self.at(si, sj).clone()
        })
    }

    /// Exact adjugate-based inverse; degenerate matrices are a typed outcome.
    pub fn inverse(&self) -> Result<ExprMatrix, MatrixError> {
        let det = self.det();
        if det.is_zero() {
            return Err(MatrixError::Degenerate);
        }
        let inv = ExprMatrix::from_fn(self.n, |i, j| {
            // adjugate: cofactor of (j, i)
            let c = self.minor(j, i).det();
            let signed = if (i + j) % 2 == 0 { c } else { c.neg_expr() };
            &signed / &det
        });
        Ok(inv)
    }

    pub fn entries(&self) -> &[RationalExpr] {
        &self.entries
    }

    pub fn as_tensor(&self) -> ExprTensor {
        ExprTensor {
            dims: vec![self.n, self.n],
            entries: self.entries.clone(),
        }
    }
}

impl fmt::Display for ExprMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Rank-3 tensor with all slots of the ambient dimension.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExprTensor3 {
    n: usize,
    entries: Vec<RationalExpr>,
}

impl ExprTensor3 {
    pub fn zeros(n: usize) -> Self {
        ExprTensor3 {
            n,
            entries: vec![RationalExpr::zero(); n * n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> RationalExpr) -> Self {
        let mut entries = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    entries.push(f(i, j, k));
                }
            }
        }
        ExprTensor3 { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize, k: usize) -> &RationalExpr {
        &self.entries[(i * self.n + j) * self.n + k]
    }

    pub fn at_mut(&mut self, i: usize, j: usize, k: usize) -> &mut RationalExpr {
        &mut self.entries[(i * self.n + j) * self.n + k]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RationalExpr::is_zero)
    }

    pub fn map(&self, mut f: impl FnMut(&RationalExpr) -> RationalExpr) -> Self {
        ExprTensor3 {
            n: self.n,
            entries: self.entries.iter().map(|e| f(e)).collect(),
        }
    }

    pub fn as_tensor(&self) -> ExprTensor {
        ExprTensor {
            dims: vec![self.n, self.n, self.n],
            entries: self.entries.clone(),
        }
    }
}

/// Dense tensor of arbitrary rank; the uniform residual currency of
/// condition reports.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExprTensor {
    dims: Vec<usize>,
    entries: Vec<RationalExpr>,
}

impl ExprTensor {
    pub fn scalar(e: RationalExpr) -> Self {
        ExprTensor {
            dims: vec![],
            entries: vec![e],
        }
    }

    pub fn vector(entries: Vec<RationalExpr>) -> Self {
        ExprTensor {
            dims: vec![entries.len()],
            entries,
        }
    }

    pub fn zeros(dims: Vec<usize>) -> Self {
        let len = dims.iter().product();
        ExprTensor {
            dims,
            entries: vec![RationalExpr::zero(); len],
        }
    }

    pub fn from_fn(dims: Vec<usize>, mut f: impl FnMut(&[usize]) -> RationalExpr) -> Self {
        let len: usize = dims.iter().product();
        let mut entries = Vec::with_capacity(len);
        let mut idx = vec![0usize; dims.len()];
        for flat in 0..len {
            Self::unflatten(&dims, flat, &mut idx);
            entries.push(f(&idx));
        }
        ExprTensor { dims, entries }
    }

    fn unflatten(dims: &[usize], mut flat: usize, idx: &mut [usize]) {
        for a in (0..dims.len()).rev() {
            idx[a] = flat % dims[a];
            flat /= dims[a];
        }
    }

    fn flatten(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.dims.len(), "index rank mismatch");
        let mut flat = 0;
        for (a, &i) in idx.iter().enumerate() {
            assert!(i < self.dims[a], "index out of bounds");
            flat = flat * self.dims[a] + i;
        }
        flat
    }

    pub fn rank(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn at(&self, idx: &[usize]) -> &RationalExpr {
        &self.entries[self.flatten(idx)]
    }

    pub fn at_mut(&mut self, idx: &[usize]) -> &mut RationalExpr {
        let flat = self.flatten(idx);
        &mut self.entries[flat]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RationalExpr::is_zero)
    }

    /// Iterates entries with their multi-indices in row-major order.
    pub fn iter_indexed(&self) -> impl Iterator<Item = (Vec<usize>, &RationalExpr)> {
        let dims = self.dims.clone();
        self.entries.iter().enumerate().map(move |(flat, e)| {
            let mut idx = vec![0usize; dims.len()];
            Self::unflatten(&dims, flat, &mut idx);
            (idx, e)
        })
    }

    pub fn nonzero_entries(&self) -> Vec<(Vec<usize>, &RationalExpr)> {
        self.iter_indexed().filter(|(_, e)| !e.is_zero()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::expr::int;
    use crate::symbolic::RationalExpr;

    fn m3(rows: [[i64; 3]; 3]) -> ExprMatrix {
        ExprMatrix::from_fn(3, |i, j| int(rows[i][j]))
    }

    #[test]
    fn det_of_leading_coefficients() {
        // KdV first-structure metric has determinant 1
        let mut g = m3([[0, 0, 1], [0, -1, 0], [1, 0, 0]]);
        *g.at_mut(2, 2) = &int(8) * &RationalExpr::u(1);
        assert!(g.det().is_one());

        // degenerate diagonal leading coefficient
        let d = m3([[0, 0, 0], [0, 0, 0], [0, 0, -1]]);
        assert!(d.det().is_zero());
        assert_eq!(d.inverse().unwrap_err(), MatrixError::Degenerate);
    }

    #[test]
    fn inverse_of_identity_and_product() {
        let id = ExprMatrix::identity(3);
        assert_eq!(id.inverse().unwrap(), id);

        let mut g = m3([[0, 0, 1], [0, -1, 0], [1, 0, 0]]);
        *g.at_mut(2, 2) = &int(8) * &RationalExpr::u(1);
        let inv = g.inverse().unwrap();
        assert_eq!(g.mul(&inv), ExprMatrix::identity(3));
        assert_eq!(inv.mul(&g), ExprMatrix::identity(3));
        // the lowered metric of the same structure
        assert_eq!(inv.at(0, 0).to_string(), "-8*u1");
        assert!((inv.at(0, 2) - &int(1)).is_zero());
    }

    #[test]
    fn tensor_indexing_round_trip() {
        let t = ExprTensor::from_fn(vec![2, 3, 2], |idx| {
            int((idx[0] * 100 + idx[1] * 10 + idx[2]) as i64)
        });
        assert_eq!(t.at(&[1, 2, 1]), &int(121));
        let flat: Vec<_> = t.iter_indexed().collect();
        assert_eq!(flat.len(), 12);
        assert_eq!(flat[11].0, vec![1, 2, 1]);
    }
}
