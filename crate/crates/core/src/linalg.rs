//! Exact linear algebra over a [`Field`].
//!
//! Everything here is dense and row-major. Matrices at this scale have a
//! handful of rows and columns, so plain Gauss-Jordan elimination on exact
//! fractions is both fast enough and decidable.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use thiserror::Error;

use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("entry count {entries} does not match a {rows}x{cols} matrix")]
    BadShape { rows: usize, cols: usize, entries: usize },
    #[error("affine independence is undefined for an empty point set")]
    EmptyPointSet,
}

/// A column vector with exact entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector<T> {
    entries: Vec<T>,
}

impl<T: Field> Vector<T> {
    pub fn new(entries: Vec<T>) -> Self {
        Self { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { entries: vec![T::zero(); dim] }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<T> {
        self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(T::is_zero)
    }

    pub fn scale(&self, factor: &T) -> Self {
        Self::new(self.entries.iter().map(|e| e.clone() * factor.clone()).collect())
    }

    pub fn dot(&self, other: &Self) -> T {
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, factor: &T, other: &Self) {
        debug_assert_eq!(self.dim(), other.dim());
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a = a.clone() + factor.clone() * b.clone();
        }
    }
}

impl<T> Index<usize> for Vector<T> {
    type Output = T;

    fn index(&self, index: usize) -> &T {
        &self.entries[index]
    }
}

impl<T: Field> Add for &Vector<T> {
    type Output = Vector<T>;

    fn add(self, rhs: &Vector<T>) -> Vector<T> {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector::new(self.entries.iter().zip(&rhs.entries).map(|(a, b)| a.clone() + b.clone()).collect())
    }
}

impl<T: Field> Sub for &Vector<T> {
    type Output = Vector<T>;

    fn sub(self, rhs: &Vector<T>) -> Vector<T> {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector::new(self.entries.iter().zip(&rhs.entries).map(|(a, b)| a.clone() - b.clone()).collect())
    }
}

impl<T: Field> Neg for &Vector<T> {
    type Output = Vector<T>;

    fn neg(self) -> Vector<T> {
        Vector::new(self.entries.iter().map(|a| -a.clone()).collect())
    }
}

impl<T: fmt::Display> fmt::Display for Vector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl<T> FromIterator<T> for Vector<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        Self { entries: iter.into_iter().collect() }
    }
}

/// A dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon<T> {
    pub matrix: Matrix<T>,
    pub pivots: Vec<usize>,
}

impl<T: Field> Matrix<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::BadShape { rows, cols, entries: entries.len() });
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = T::one();
        }
        m
    }

    /// Stack `vectors` as rows. `cols` is needed when the list is empty.
    pub fn from_rows(cols: usize, vectors: &[Vector<T>]) -> Result<Self, LinalgError> {
        let mut entries = Vec::with_capacity(vectors.len() * cols);
        for v in vectors {
            if v.dim() != cols {
                return Err(LinalgError::DimensionMismatch { expected: cols, found: v.dim() });
            }
            entries.extend(v.iter().cloned());
        }
        Ok(Self { rows: vectors.len(), cols, entries })
    }

    /// Place `vectors` side by side as columns of a `rows`-row matrix.
    pub fn from_columns(rows: usize, vectors: &[Vector<T>]) -> Result<Self, LinalgError> {
        Ok(Self::from_rows(rows, vectors)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &T {
        &self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> Vector<T> {
        Vector::new(self.entries[row * self.cols..(row + 1) * self.cols].to_vec())
    }

    pub fn column(&self, col: usize) -> Vector<T> {
        (0..self.rows).map(|r| self.get(r, col).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        Self { rows: self.cols, cols: self.rows, entries }
    }

    pub fn mul_vec(&self, v: &Vector<T>) -> Result<Vector<T>, LinalgError> {
        if v.dim() != self.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, found: v.dim() });
        }
        Ok((0..self.rows)
            .map(|r| {
                (0..self.cols).fold(T::zero(), |acc, c| acc + self.get(r, c).clone() * v[c].clone())
            })
            .collect())
    }

    /// Gauss-Jordan elimination. Pivots are the leftmost nonzero entries,
    /// scaled to one, with zeros above and below.
    pub fn rref(&self) -> Echelon<T> {
        let (rows, cols) = (self.rows, self.cols);
        let mut m = self.entries.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..cols {
            if row == rows {
                break;
            }
            let Some(found) = (row..rows).find(|&r| !m[r * cols + col].is_zero()) else {
                continue;
            };
            if found != row {
                for c in 0..cols {
                    m.swap(found * cols + c, row * cols + c);
                }
            }
            let inv = T::one() / m[row * cols + col].clone();
            for c in col..cols {
                m[row * cols + c] = m[row * cols + c].clone() * inv.clone();
            }
            for r in 0..rows {
                if r == row || m[r * cols + col].is_zero() {
                    continue;
                }
                let factor = m[r * cols + col].clone();
                for c in col..cols {
                    let delta = factor.clone() * m[row * cols + c].clone();
                    m[r * cols + c] = m[r * cols + c].clone() - delta;
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { matrix: Self { rows, cols, entries: m }, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right null space.
    ///
    /// One vector per free column, in increasing column order; each has a one
    /// in its free column and zeros in the other free columns.
    pub fn kernel_basis(&self) -> Vec<Vector<T>> {
        let Echelon { matrix: r, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![T::zero(); self.cols];
                v[free] = T::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, free).clone();
                }
                Vector::new(v)
            })
            .collect()
    }
}

/// One exact solution of `a * x = b`, or `None` when the system is
/// inconsistent. Free variables are set to zero, so the answer is unique
/// whenever the columns of `a` are independent.
pub fn solve_linear<T: Field>(a: &Matrix<T>, b: &Vector<T>) -> Result<Option<Vector<T>>, LinalgError> {
    if a.rows() != b.dim() {
        return Err(LinalgError::DimensionMismatch { expected: a.rows(), found: b.dim() });
    }
    let cols = a.cols();
    let mut entries = Vec::with_capacity(a.rows() * (cols + 1));
    for r in 0..a.rows() {
        entries.extend((0..cols).map(|c| a.get(r, c).clone()));
        entries.push(b[r].clone());
    }
    let augmented = Matrix::new(a.rows(), cols + 1, entries)?;
    let Echelon { matrix, pivots } = augmented.rref();
    if pivots.last() == Some(&cols) {
        return Ok(None);
    }
    let mut x = vec![T::zero(); cols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = matrix.get(i, cols).clone();
    }
    Ok(Some(Vector::new(x)))
}

/// Rank of a list of vectors of dimension `dim`.
pub fn rank_of<T: Field>(dim: usize, vectors: &[Vector<T>]) -> Result<usize, LinalgError> {
    Ok(Matrix::from_rows(dim, vectors)?.rank())
}

/// Indices of the greedy maximal independent subset of `vectors`, scanning in
/// order: a vector is kept iff it is not in the span of those before it.
pub fn independent_subset<T: Field>(dim: usize, vectors: &[Vector<T>]) -> Result<Vec<usize>, LinalgError> {
    Ok(Matrix::from_columns(dim, vectors)?.rref().pivots)
}

/// Whether `points` are affinely independent, i.e. the differences
/// `p_j - p_0` are linearly independent.
pub fn is_affinely_independent<T: Field>(points: &[Vector<T>]) -> Result<bool, LinalgError> {
    let (first, rest) = points.split_first().ok_or(LinalgError::EmptyPointSet)?;
    let dim = first.dim();
    let diffs = rest
        .iter()
        .map(|p| {
            if p.dim() != dim {
                Err(LinalgError::DimensionMismatch { expected: dim, found: p.dim() })
            } else {
                Ok(p - first)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(rank_of(dim, &diffs)? == diffs.len())
}

/// Whether the spans of `bases` form a direct sum: the dimension of the span
/// of their union equals the sum of the individual dimensions.
pub fn are_subspaces_independent<T: Field>(bases: &[Vec<Vector<T>>]) -> Result<bool, LinalgError> {
    let Some(dim) = bases.iter().flatten().map(Vector::dim).next() else {
        return Ok(true);
    };
    let mut total = 0;
    for basis in bases {
        total += rank_of(dim, basis)?;
    }
    let union: Vec<Vector<T>> = bases.iter().flatten().cloned().collect();
    Ok(rank_of(dim, &union)? == total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::{BigRational, Rational64};
    use proptest::prelude::*;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn v(xs: &[i64]) -> Vector<Q> {
        xs.iter().map(|&x| q(x)).collect()
    }

    fn m(rows: usize, cols: usize, xs: &[i64]) -> Matrix<Q> {
        Matrix::new(rows, cols, xs.iter().map(|&x| q(x)).collect()).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::<Q>::identity(2).rank(), 2);
        assert_eq!(m(2, 2, &[1, 1, 2, -2]).rank(), 2);
        assert_eq!(m(1, 4, &[2, -1, 1, -2]).rank(), 1);
        assert_eq!(Matrix::<Q>::zeros(3, 2).rank(), 0);
    }

    #[test]
    fn kernel_examples() {
        assert!(Matrix::<Q>::identity(2).kernel_basis().is_empty());
        assert_eq!(m(1, 2, &[1, -1]).kernel_basis(), vec![v(&[1, 1])]);
        let k = m(1, 2, &[3, -3]).kernel_basis();
        assert_eq!(k, vec![v(&[1, 1])]);
        assert!(k[0].iter().all(|x| x > &q(0)));
    }

    #[test]
    fn kernel_order_follows_free_columns() {
        let k = m(1, 3, &[1, 2, 3]).kernel_basis();
        assert_eq!(k, vec![v(&[-2, 1, 0]), v(&[-3, 0, 1])]);
    }

    #[test]
    fn solve_examples() {
        let a = Matrix::<Q>::identity(2);
        assert_eq!(solve_linear(&a, &v(&[5, 7])).unwrap(), Some(v(&[5, 7])));

        let a = Matrix::from_columns(2, &[v(&[2, 2])]).unwrap();
        assert_eq!(solve_linear(&a, &v(&[2, 2])).unwrap(), Some(v(&[1])));

        let a = Matrix::from_columns(2, &[v(&[0, 2])]).unwrap();
        assert_eq!(solve_linear(&a, &v(&[1, 1])).unwrap(), None);
    }

    #[test]
    fn solve_rejects_mismatched_rhs() {
        let a = Matrix::<Q>::identity(2);
        assert_eq!(
            solve_linear(&a, &v(&[1, 2, 3])),
            Err(LinalgError::DimensionMismatch { expected: 2, found: 3 })
        );
    }

    #[test]
    fn affine_independence_examples() {
        assert!(is_affinely_independent(&[v(&[0]), v(&[3])]).unwrap());
        assert!(!is_affinely_independent(&[v(&[0]), v(&[2]), v(&[3])]).unwrap());
        assert!(is_affinely_independent(&[v(&[0, 0]), v(&[1, 1]), v(&[0, 2])]).unwrap());
        assert!(is_affinely_independent(&[v(&[4, 1])]).unwrap());
        assert_eq!(is_affinely_independent::<Q>(&[]), Err(LinalgError::EmptyPointSet));
    }

    #[test]
    fn subspace_independence_examples() {
        assert!(are_subspaces_independent(&[vec![v(&[1, 0])], vec![v(&[0, 1])]]).unwrap());
        assert!(!are_subspaces_independent(&[vec![v(&[1])], vec![v(&[1])]]).unwrap());
        assert!(are_subspaces_independent(&[vec![v(&[2, 2])], vec![v(&[2, -2])]]).unwrap());
        assert!(are_subspaces_independent::<Q>(&[vec![], vec![]]).unwrap());
    }

    #[test]
    fn greedy_independent_subset_keeps_first_occurrence() {
        let vs = [v(&[3]), v(&[-3])];
        assert_eq!(independent_subset(1, &vs).unwrap(), vec![0]);
        let vs = [v(&[1, 1]), v(&[2, 2]), v(&[2, -2])];
        assert_eq!(independent_subset(2, &vs).unwrap(), vec![0, 2]);
    }

    fn small_matrix() -> impl Strategy<Value = Matrix<Rational64>> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec((-3i64..=3, 1i64..=3), r * c).prop_map(move |xs| {
                Matrix::new(r, c, xs.into_iter().map(|(n, d)| Rational64::new(n, d)).collect()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rank_is_transpose_invariant(a in small_matrix()) {
            prop_assert_eq!(a.rank(), a.transpose().rank());
        }

        #[test]
        fn rank_nullity(a in small_matrix()) {
            let kernel = a.kernel_basis();
            prop_assert_eq!(a.rank() + kernel.len(), a.cols());
            for k in &kernel {
                prop_assert!(a.mul_vec(k).unwrap().is_zero());
            }
        }

        #[test]
        fn solutions_satisfy_the_system(
            a in small_matrix(),
            seed in proptest::collection::vec(-3i64..=3, 4),
        ) {
            let b: Vector<Rational64> = (0..a.rows()).map(|i| Rational64::from_integer(seed[i])).collect();
            if let Some(x) = solve_linear(&a, &b).unwrap() {
                prop_assert_eq!(a.mul_vec(&x).unwrap(), b.clone());
            }
            // A right-hand side in the column space is always solvable.
            let x0: Vector<Rational64> = (0..a.cols()).map(|i| Rational64::from_integer(seed[i % 4])).collect();
            let b0 = a.mul_vec(&x0).unwrap();
            prop_assert!(solve_linear(&a, &b0).unwrap().is_some());
        }

        #[test]
        fn affine_independence_is_permutation_and_translation_invariant(
            pts in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 3), 1..5),
            shift in proptest::collection::vec(-5i64..=5, 3),
            rot in 0usize..5,
        ) {
            let points: Vec<Vector<Rational64>> =
                pts.iter().map(|p| p.iter().map(|&x| Rational64::from_integer(x)).collect()).collect();
            let base = is_affinely_independent(&points).unwrap();

            let mut permuted = points.clone();
            let k = rot % permuted.len();
            permuted.rotate_left(k);
            permuted.reverse();
            prop_assert_eq!(is_affinely_independent(&permuted).unwrap(), base);

            let s: Vector<Rational64> = shift.iter().map(|&x| Rational64::from_integer(x)).collect();
            let shifted: Vec<_> = points.iter().map(|p| p + &s).collect();
            prop_assert_eq!(is_affinely_independent(&shifted).unwrap(), base);
        }
    }
}
